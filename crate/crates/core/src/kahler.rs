//! The differential-module descriptor of a valuation-ring extension, the
//! per-case classification that produces it, and composition along towers.

use std::fmt;

use thiserror::Error;

use crate::extensions::{
    validate, ExtensionKind, GeneratedBy, PrimeExtension, ResidueData, Violation,
};
use crate::ordered_groups::{Coords, GroupError, IdealValueSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KahlerError {
    #[error("descriptor invalid: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("missing witnesses: {0}")]
    MissingWitness(String),
    #[error("empty tower")]
    EmptyTower,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Symbolic form of a cyclic-quotient annihilator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnihilatorForm {
    /// (p-1)-st power of the unit-normalizing scalar.
    ScalarPower,
    /// The element p itself.
    P,
    /// p times the (p-1)-st power of the scalar.
    PTimesScalarPower,
}

/// Power form of an ideal quotient I / (...)..
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientForm {
    /// I / I^p.
    PowerP,
    /// I / (q I^q), carrying the value of q.
    QTimesPowerQ { vq: Coords },
}

/// The three answer shapes for the differential module of a prime-degree
/// valuation-ring extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KahlerDescriptor {
    Zero,
    /// O_L / (a), described by the value of the annihilator; zero exactly
    /// when the value is zero.
    CyclicQuotient {
        annihilator_value: Coords,
        form: AnnihilatorForm,
    },
    /// I / I^p or I / qI^q for an explicit ideal value set. The zero
    /// decision is recorded with the clause that produced it. For defect
    /// extensions without cut data the ideal is not materialized.
    IdealQuotient {
        ideal: Option<IdealValueSet>,
        form: QuotientForm,
        is_zero: bool,
    },
}

impl KahlerDescriptor {
    pub fn is_zero(&self) -> bool {
        match self {
            KahlerDescriptor::Zero => true,
            KahlerDescriptor::CyclicQuotient {
                annihilator_value, ..
            } => annihilator_value.is_zero(),
            KahlerDescriptor::IdealQuotient { is_zero, .. } => *is_zero,
        }
    }
}

/// Which classification rule fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    SeparableResidue,
    AsInseparableResidue,
    AsRamified,
    KummerUnitResidue,
    KummerOneUnitResidue,
    KummerRamified,
    KummerRamifiedOneUnit,
    Defect,
    Inertial,
}

impl CaseTag {
    pub fn id(&self) -> &'static str {
        match self {
            CaseTag::SeparableResidue => "separable-residue",
            CaseTag::AsInseparableResidue => "as-inseparable-residue",
            CaseTag::AsRamified => "as-ramified",
            CaseTag::KummerUnitResidue => "kummer-unit-residue",
            CaseTag::KummerOneUnitResidue => "kummer-one-unit-residue",
            CaseTag::KummerRamified => "kummer-ramified",
            CaseTag::KummerRamifiedOneUnit => "kummer-ramified-one-unit",
            CaseTag::Defect => "defect",
            CaseTag::Inertial => "inertial",
        }
    }
}

/// Why the zero/nonzero verdict holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VanishingReason {
    /// Separable residue generation makes the derivative a unit.
    UnitDerivative,
    /// Cyclic quotient with strictly positive annihilator value.
    AnnihilatorPositive(Coords),
    /// Cyclic quotient with annihilator value zero.
    AnnihilatorUnit,
    /// The shifted-coset ideal with positive threshold always has
    /// I != I^p.
    ShiftedIdealProper,
    /// The ideal meets the convex subgroup of vq.
    ConvexObstruction {
        level: usize,
    },
    /// An isolated generator class sits at a discrete component.
    DiscreteIsolatedClass {
        level: usize,
    },
    /// vq-emptiness holds and every isolated class sits at a dense
    /// component.
    EmptyObstructionDenseClasses {
        vq_zero: bool,
        isolated_level: usize,
    },
    IndependentDefect,
    DependentDefect,
    /// Inertial steps contribute nothing.
    InertialStep,
}

impl VanishingReason {
    pub fn describe(&self) -> String {
        match self {
            VanishingReason::UnitDerivative => {
                "separable residue generator: derivative is a unit".into()
            }
            VanishingReason::AnnihilatorPositive(v) => {
                format!("annihilator has positive value {v}")
            }
            VanishingReason::AnnihilatorUnit => "annihilator is a unit".into(),
            VanishingReason::ShiftedIdealProper => {
                "shifted-coset ideal with positive threshold satisfies I != I^p".into()
            }
            VanishingReason::ConvexObstruction { level } => {
                format!("ideal values meet the convex subgroup of vq (suffix {level})")
            }
            VanishingReason::DiscreteIsolatedClass { level } => {
                format!("isolated generator class at discrete component (level {level})")
            }
            VanishingReason::EmptyObstructionDenseClasses {
                vq_zero,
                isolated_level,
            } => {
                let head = if *vq_zero {
                    "vq = 0 so the convex obstruction is empty"
                } else {
                    "ideal values miss the convex subgroup of vq"
                };
                format!(
                    "{head}, and the isolated class at level {isolated_level} \
                     sits at a dense component"
                )
            }
            VanishingReason::IndependentDefect => "independent defect".into(),
            VanishingReason::DependentDefect => "dependent defect".into(),
            VanishingReason::InertialStep => "inertial step".into(),
        }
    }
}

/// Full classification output for one extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KahlerVerdict {
    pub case: CaseTag,
    pub descriptor: KahlerDescriptor,
    pub is_zero: bool,
    pub reason: VanishingReason,
}

impl fmt::Display for KahlerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({})",
            self.case.id(),
            if self.is_zero { "zero" } else { "nonzero" },
            self.reason.describe()
        )
    }
}

/// Computes the differential-module descriptor of a validated prime-degree
/// extension. Dispatch follows the shape of the extension: inertia-degree
/// cases give cyclic quotients, ramified cases give ideal quotients, defect
/// is decided by its independence data.
pub fn kahler_of(ext: &PrimeExtension) -> Result<KahlerVerdict, KahlerError> {
    let violations = validate(ext);
    if !violations.is_empty() {
        return Err(KahlerError::Invalid(violations));
    }
    let n = ext.degree;
    let p = ext.residue.residue_char;

    if ext.d == n && n > 1 {
        return defect_case(ext);
    }
    if ext.f == n {
        return inertia_case(ext, n, p);
    }
    ramified_case(ext)
}

fn defect_case(ext: &PrimeExtension) -> Result<KahlerVerdict, KahlerError> {
    let data = ext.defect.as_ref().ok_or_else(|| {
        KahlerError::MissingWitness("defect extension without independence data".into())
    })?;
    let independent = match (data.independent, data.cut_start_level) {
        (_, Some(h_start)) => {
            // the admissible cut shape requires the convex subgroup H to
            // miss vp; the value of p is the whole group in equal
            // characteristic
            if ext.is_mixed_characteristic() {
                let vp = ext
                    .vp_element
                    .as_ref()
                    .ok_or_else(|| KahlerError::MissingWitness("cut test requires vp".into()))?;
                let vp_level = vp
                    .coords()
                    .first_nonzero()
                    .ok_or_else(|| KahlerError::MissingWitness("vp must be nonzero".into()))?;
                vp_level < h_start
            } else {
                return Err(KahlerError::MissingWitness(
                    "distance-cut form applies in mixed characteristic; \
                     supply the independence flag instead"
                        .into(),
                ));
            }
        }
        (Some(flag), None) => flag,
        (None, None) => {
            return Err(KahlerError::MissingWitness(
                "defect extension without independence data".into(),
            ))
        }
    };
    if independent {
        Ok(KahlerVerdict {
            case: CaseTag::Defect,
            descriptor: KahlerDescriptor::Zero,
            is_zero: true,
            reason: VanishingReason::IndependentDefect,
        })
    } else {
        Ok(KahlerVerdict {
            case: CaseTag::Defect,
            descriptor: KahlerDescriptor::IdealQuotient {
                ideal: None,
                form: QuotientForm::PowerP,
                is_zero: false,
            },
            is_zero: false,
            reason: VanishingReason::DependentDefect,
        })
    }
}

fn inertia_case(ext: &PrimeExtension, n: u64, p: u64) -> Result<KahlerVerdict, KahlerError> {
    match ext.kind {
        ExtensionKind::ArtinSchreier => {
            let vt = ext.v_theta.as_ref().ok_or_else(|| {
                KahlerError::MissingWitness("Artin-Schreier f = p requires v(theta)".into())
            })?;
            if vt.is_zero() {
                return Ok(zero_separable());
            }
            // annihilator value (p-1) * (-v theta) > 0
            let value = vt.coords().scale_int(-(n as i64 - 1));
            Ok(KahlerVerdict {
                case: CaseTag::AsInseparableResidue,
                descriptor: KahlerDescriptor::CyclicQuotient {
                    annihilator_value: value.clone(),
                    form: AnnihilatorForm::ScalarPower,
                },
                is_zero: false,
                reason: VanishingReason::AnnihilatorPositive(value),
            })
        }
        ExtensionKind::Kummer { .. } if n == p => {
            let vp = ext
                .vp_element
                .as_ref()
                .ok_or_else(|| KahlerError::MissingWitness("Kummer p-case requires vp".into()))?;
            match ext.residue.generated_by {
                GeneratedBy::UnitResidue => {
                    let value = vp.coords().clone();
                    Ok(KahlerVerdict {
                        case: CaseTag::KummerUnitResidue,
                        descriptor: KahlerDescriptor::CyclicQuotient {
                            annihilator_value: value.clone(),
                            form: AnnihilatorForm::P,
                        },
                        is_zero: false,
                        reason: VanishingReason::AnnihilatorPositive(value),
                    })
                }
                GeneratedBy::ShiftedOneUnit => {
                    let ve = ext.v_eta_minus_one.as_ref().ok_or_else(|| {
                        KahlerError::MissingWitness("one-unit case requires v(eta-1)".into())
                    })?;
                    // vp + (p-1) v(ctilde) = vp - (p-1) v(eta-1) >= 0
                    let value = vp.coords() + &ve.scale_int(-(n as i64 - 1));
                    let is_zero = value.is_zero();
                    Ok(KahlerVerdict {
                        case: CaseTag::KummerOneUnitResidue,
                        descriptor: KahlerDescriptor::CyclicQuotient {
                            annihilator_value: value.clone(),
                            form: AnnihilatorForm::PTimesScalarPower,
                        },
                        is_zero,
                        reason: if is_zero {
                            VanishingReason::AnnihilatorUnit
                        } else {
                            VanishingReason::AnnihilatorPositive(value)
                        },
                    })
                }
                GeneratedBy::None => Err(KahlerError::MissingWitness(
                    "f = p requires residue generation data".into(),
                )),
            }
        }
        // Kummer with f = q prime to the residue characteristic: the
        // residue extension is separable
        ExtensionKind::Kummer { .. } => Ok(zero_separable()),
    }
}

fn zero_separable() -> KahlerVerdict {
    KahlerVerdict {
        case: CaseTag::SeparableResidue,
        descriptor: KahlerDescriptor::Zero,
        is_zero: true,
        reason: VanishingReason::UnitDerivative,
    }
}

fn ramified_case(ext: &PrimeExtension) -> Result<KahlerVerdict, KahlerError> {
    let ag = ext
        .value_data
        .as_ref()
        .ok_or_else(|| KahlerError::MissingWitness("e = n requires value data".into()))?;
    let j = ext.j.unwrap_or(1);
    match ext.kind {
        ExtensionKind::ArtinSchreier => {
            // I = (c theta^(j-1) | v(c theta^j) > 0), and I != I^p always
            let ideal = IdealValueSet::shifted_power(ag.clone(), ag.delta(), j)?;
            Ok(KahlerVerdict {
                case: CaseTag::AsRamified,
                descriptor: KahlerDescriptor::IdealQuotient {
                    ideal: Some(ideal),
                    form: QuotientForm::PowerP,
                    is_zero: false,
                },
                is_zero: false,
                reason: VanishingReason::ShiftedIdealProper,
            })
        }
        ExtensionKind::Kummer { .. } if ext.one_unit_generator => {
            // one-unit generator xi: I = (c xi^(j-1) | v(c xi^j) > 0),
            // nonzero always
            let ideal = IdealValueSet::shifted_power(ag.clone(), ag.delta(), j)?;
            Ok(KahlerVerdict {
                case: CaseTag::KummerRamifiedOneUnit,
                descriptor: KahlerDescriptor::IdealQuotient {
                    ideal: Some(ideal),
                    form: QuotientForm::PowerP,
                    is_zero: false,
                },
                is_zero: false,
                reason: VanishingReason::ShiftedIdealProper,
            })
        }
        ExtensionKind::Kummer { .. } => {
            // I = (c eta | v(c eta) > 0): zero iff the ideal misses the
            // convex subgroup of vq and every isolated generator class
            // sits at a dense archimedean component
            let ideal = IdealValueSet::new(ag.clone(), ag.delta().clone())?;
            let vq = ext.vq();
            let vq_zero = vq.is_zero();
            if !vq_zero {
                let vq_level = vq.first_nonzero().expect("nonzero vq");
                if ideal.intersects_suffix(vq_level) {
                    return Ok(KahlerVerdict {
                        case: CaseTag::KummerRamified,
                        descriptor: KahlerDescriptor::IdealQuotient {
                            ideal: Some(ideal),
                            form: QuotientForm::QTimesPowerQ { vq },
                            is_zero: false,
                        },
                        is_zero: false,
                        reason: VanishingReason::ConvexObstruction { level: vq_level },
                    });
                }
            }
            let levels = ideal.isolated_levels();
            let mut discrete_at = None;
            let mut last_level = 0usize;
            for &l in &levels {
                last_level = l;
                if !ext.base_group.level(l).is_dense() {
                    discrete_at = Some(l);
                }
            }
            match discrete_at {
                Some(level) => Ok(KahlerVerdict {
                    case: CaseTag::KummerRamified,
                    descriptor: KahlerDescriptor::IdealQuotient {
                        ideal: Some(ideal),
                        form: QuotientForm::QTimesPowerQ { vq },
                        is_zero: false,
                    },
                    is_zero: false,
                    reason: VanishingReason::DiscreteIsolatedClass { level },
                }),
                None => Ok(KahlerVerdict {
                    case: CaseTag::KummerRamified,
                    descriptor: KahlerDescriptor::IdealQuotient {
                        ideal: Some(ideal),
                        form: QuotientForm::QTimesPowerQ { vq },
                        is_zero: true,
                    },
                    is_zero: true,
                    reason: VanishingReason::EmptyObstructionDenseClasses {
                        vq_zero,
                        isolated_level: last_level,
                    },
                }),
            }
        }
    }
}

/// One step of a tower factoring a finite Galois extension.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum TowerStep {
    /// A subextension of the inertia field: separable residue extension of
    /// the full degree, no ramification, no defect.
    Inertial { residue: ResidueData },
    /// A Galois step of prime degree.
    Prime(PrimeExtension),
}

/// A tower of steps starting at the base field; the first step may be the
/// inertia field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerDescriptor {
    pub steps: Vec<TowerStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepVerdict {
    pub index: usize,
    pub case: CaseTag,
    pub is_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerVerdict {
    pub is_zero: bool,
    pub steps: Vec<StepVerdict>,
    pub first_nonzero: Option<usize>,
}

/// The differential module of a tower vanishes exactly when it vanishes at
/// every step; inertial steps contribute nothing.
pub fn kahler_of_tower(tower: &TowerDescriptor) -> Result<TowerVerdict, KahlerError> {
    if tower.steps.is_empty() {
        return Err(KahlerError::EmptyTower);
    }
    let mut steps = Vec::with_capacity(tower.steps.len());
    let mut first_nonzero = None;
    for (index, step) in tower.steps.iter().enumerate() {
        let (case, is_zero) = match step {
            TowerStep::Inertial { residue } => {
                if !residue.separable {
                    return Err(KahlerError::MissingWitness(
                        "inertial steps carry separable residue data".into(),
                    ));
                }
                (CaseTag::Inertial, true)
            }
            TowerStep::Prime(ext) => {
                let v = kahler_of(ext)?;
                (v.case, v.is_zero)
            }
        };
        if !is_zero && first_nonzero.is_none() {
            first_nonzero = Some(index);
        }
        steps.push(StepVerdict {
            index,
            case,
            is_zero,
        });
    }
    Ok(TowerVerdict {
        is_zero: first_nonzero.is_none(),
        steps,
        first_nonzero,
    })
}

/// Passing to the henselization changes neither the value group nor the
/// residue field, so every descriptor is its own normalization; the note
/// records the invariance for reports.
pub trait HenselizeNormalize: Clone {
    fn henselize_normalize(&self) -> (Self, &'static str) {
        (
            self.clone(),
            "henselization is immediate: value group and residue field unchanged; \
             verdicts are invariant",
        )
    }
}

impl HenselizeNormalize for PrimeExtension {}
impl HenselizeNormalize for TowerDescriptor {}
