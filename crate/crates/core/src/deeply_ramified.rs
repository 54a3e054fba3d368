//! The deeply-ramified field conditions at descriptor level: the value
//! group condition, the sufficient Frobenius-surjectivity criterion, and
//! the explicit witness extensions with nonvanishing differentials that
//! certify a failing condition.

use std::fmt;

use thiserror::Error;

use crate::extensions::PrimeExtension;
use crate::gen::builders;
use crate::kahler::{kahler_of, KahlerError};
use crate::ordered_groups::{
    check_drvg, DrvgOutcome, GroupElement, GroupError, LevelDescriptor, OrderedGroup,
};
use crate::rational::Rat;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrError {
    #[error("field descriptor invalid: {0}")]
    Invalid(String),
    #[error("violation does not hold for this field: {0}")]
    ViolationMismatch(String),
    #[error("witness construction requires p-th roots of unity in mixed characteristic")]
    MissingZetaP,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Extension(#[from] crate::extensions::ExtensionError),
    #[error(transparent)]
    Kahler(#[from] KahlerError),
}

/// Descriptor of a valued field with positive residue characteristic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDescriptor {
    /// 0 in mixed characteristic, p in equal characteristic.
    pub char_k: u64,
    pub residue_char: u64,
    pub value_group: OrderedGroup,
    /// Value of p; required exactly in mixed characteristic.
    pub vp_element: Option<GroupElement>,
    pub residue_perfect: bool,
    /// Whether the field contains the p-th roots of unity (mixed
    /// characteristic); irrelevant in equal characteristic.
    pub contains_zeta_p: bool,
    /// Assumed property: every degree-p Galois defect extension has
    /// independent defect.
    pub independent_defect_field: bool,
    /// Explicit assertion of the Frobenius-surjectivity condition, when
    /// known externally.
    pub drvr_flag: Option<bool>,
}

impl FieldDescriptor {
    pub fn validate(&self) -> Result<(), DrError> {
        if self.residue_char < 2 {
            return Err(DrError::Invalid(
                "residue characteristic must be prime".into(),
            ));
        }
        if self.char_k != 0 && self.char_k != self.residue_char {
            return Err(DrError::Invalid(
                "characteristic must be 0 or the residue characteristic".into(),
            ));
        }
        if self.value_group.is_trivial() {
            return Err(DrError::Invalid("value group must be nontrivial".into()));
        }
        if self.char_k == 0 {
            match &self.vp_element {
                None => return Err(DrError::Invalid("mixed characteristic requires vp".into())),
                Some(vp) => {
                    if vp.group() != &self.value_group {
                        return Err(DrError::Invalid("vp lives in the wrong group".into()));
                    }
                    if !vp.is_positive() {
                        return Err(DrError::Invalid("vp must be positive".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_mixed(&self) -> bool {
        self.char_k == 0
    }

    /// Start level of the convex subgroup generated by vp: the whole group
    /// in equal characteristic.
    pub fn vp_suffix_start(&self) -> usize {
        if self.is_mixed() {
            self.vp_element
                .as_ref()
                .and_then(|vp| vp.coords().first_nonzero())
                .unwrap_or(0)
        } else {
            0
        }
    }

    /// Is the convex subgroup generated by vp p-divisible?
    pub fn vp_part_p_divisible(&self) -> bool {
        let start = self.vp_suffix_start();
        self.value_group.levels()[start..]
            .iter()
            .all(|l| l.is_n_divisible(self.residue_char))
    }
}

/// A reason why the field fails (or would fail) deep ramification; each
/// carries what the witness construction needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DrViolation {
    /// An archimedean component of the value group is discrete.
    DiscreteComponent {
        level: usize,
    },
    /// The convex subgroup of vp is not p-divisible; carries a negative
    /// witness value outside p times the subgroup.
    NotPDivisibleAtVp {
        witness: GroupElement,
    },
    ImperfectResidue,
    DependentDefect,
}

impl fmt::Display for DrViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DrViolation::DiscreteComponent { level } => {
                write!(f, "discrete archimedean component at level {level}")
            }
            DrViolation::NotPDivisibleAtVp { witness } => write!(
                f,
                "value group not p-divisible at the convex subgroup of vp \
                 (witness value {witness})"
            ),
            DrViolation::ImperfectResidue => write!(f, "residue field is not perfect"),
            DrViolation::DependentDefect => {
                write!(f, "some degree-p defect extension has dependent defect")
            }
        }
    }
}

/// Three-valued outcome for conditions that are not always decidable from
/// a finite descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trivalent {
    True,
    False,
    Undecided,
}

impl Trivalent {
    pub fn exit_code(self) -> i32 {
        match self {
            Trivalent::True => 0,
            Trivalent::False => 1,
            Trivalent::Undecided => 2,
        }
    }
}

impl fmt::Display for Trivalent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trivalent::True => write!(f, "true"),
            Trivalent::False => write!(f, "false"),
            Trivalent::Undecided => write!(f, "undecided"),
        }
    }
}

/// The Frobenius-surjectivity condition: decided by the sufficient
/// criterion (independent defect field, p-divisible convex subgroup of vp,
/// perfect residue field), by an explicit flag, and otherwise left
/// undecided.
pub fn check_drvr(f: &FieldDescriptor) -> Trivalent {
    if f.independent_defect_field && f.vp_part_p_divisible() && f.residue_perfect {
        return Trivalent::True;
    }
    match f.drvr_flag {
        Some(true) => Trivalent::True,
        Some(false) => Trivalent::False,
        None => Trivalent::Undecided,
    }
}

/// Full deep-ramification report for a field descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrReport {
    pub verdict: Trivalent,
    pub drvg: DrvgOutcome,
    pub drvr: Trivalent,
    pub violations: Vec<DrViolation>,
}

/// Decides the deeply-ramified conditions and collects every violation
/// that admits a witness extension. Any violation forces a negative
/// verdict; with none, the verdict is that of the Frobenius condition.
pub fn is_deeply_ramified(f: &FieldDescriptor) -> Result<DrReport, DrError> {
    f.validate()?;
    let p = f.residue_char;
    let mut violations = Vec::new();

    let drvg = check_drvg(&f.value_group)?;
    for (level, l) in f.value_group.levels().iter().enumerate() {
        if l.is_discrete() {
            violations.push(DrViolation::DiscreteComponent { level });
        }
    }

    let start = f.vp_suffix_start();
    for (offset, l) in f.value_group.levels()[start..].iter().enumerate() {
        if !l.is_n_divisible(p) {
            let level = start + offset;
            let witness = negative_level_generator(&f.value_group, level)?;
            violations.push(DrViolation::NotPDivisibleAtVp { witness });
            break;
        }
    }

    if !f.residue_perfect {
        violations.push(DrViolation::ImperfectResidue);
    }
    if !f.independent_defect_field {
        violations.push(DrViolation::DependentDefect);
    }

    let drvr = check_drvr(f);
    let verdict = if !violations.is_empty() {
        Trivalent::False
    } else {
        match (drvg.holds(), drvr) {
            (false, _) => Trivalent::False,
            (true, d) => d,
        }
    };
    Ok(DrReport {
        verdict,
        drvg,
        drvr,
        violations,
    })
}

/// A negative element supported at one level whose coordinate is not
/// divisible by anything outside the level's own structure: -g for the
/// cyclic or localized generator, -1 over the full rationals.
fn negative_level_generator(
    group: &OrderedGroup,
    level: usize,
) -> Result<GroupElement, GroupError> {
    let mut coords = vec![Rat::zero(); group.rank()];
    let g = match group.level(level) {
        LevelDescriptor::Cyclic(g) => g.clone(),
        LevelDescriptor::Localized(g, _) => g.clone(),
        LevelDescriptor::FullRationals => Rat::one(),
        LevelDescriptor::Zero => return Err(GroupError::TrivialGroup),
    };
    coords[level] = -g;
    group.element(coords)
}

/// Builds the explicit extension with nonvanishing differential module
/// certifying a violation. The construction follows the failing condition:
/// non-p-divisibility yields a maximally ramified radical or
/// Artin-Schreier extension, imperfect residue an inertial one with
/// inseparable residue extension, a discrete component a radical extension
/// whose new value leads at the discrete level, and dependent defect a
/// defect descriptor.
pub fn witness_extension(
    f: &FieldDescriptor,
    violation: &DrViolation,
) -> Result<PrimeExtension, DrError> {
    f.validate()?;
    let p = f.residue_char;
    let g = &f.value_group;
    let mixed = f.is_mixed();
    if mixed && !f.contains_zeta_p {
        return Err(DrError::MissingZetaP);
    }
    match violation {
        DrViolation::NotPDivisibleAtVp { witness } => {
            if witness.group() != g {
                return Err(DrError::ViolationMismatch("witness group differs".into()));
            }
            if !witness.coords().is_negative() {
                return Err(DrError::ViolationMismatch(
                    "witness value must be negative".into(),
                ));
            }
            let start = f.vp_suffix_start();
            let lead = witness
                .coords()
                .first_nonzero()
                .ok_or_else(|| DrError::ViolationMismatch("witness must be nonzero".into()))?;
            if lead < start {
                return Err(DrError::ViolationMismatch(
                    "witness lies outside the convex subgroup of vp".into(),
                ));
            }
            let delta = witness
                .coords()
                .scale_rat(&Rat::new(1.into(), (p as i64).into()));
            if g.contains(&delta) {
                return Err(DrError::ViolationMismatch(
                    "witness value is p-divisible".into(),
                ));
            }
            if mixed {
                Ok(builders::kummer_ramified_wild(
                    g,
                    p,
                    f.vp_element.clone().unwrap(),
                    delta,
                    None,
                )?)
            } else {
                Ok(builders::as_ramified(g, p, delta, None)?)
            }
        }
        DrViolation::ImperfectResidue => {
            if f.residue_perfect {
                return Err(DrError::ViolationMismatch(
                    "residue field is perfect".into(),
                ));
            }
            if mixed {
                Ok(builders::kummer_inertial_unit(
                    g,
                    p,
                    f.vp_element.clone().unwrap(),
                )?)
            } else {
                // theta^p - theta = c^p b with v(c) < 0 and residue of b
                // not a p-th power: v(theta) = v(c) < 0
                let vc = negative_level_generator(g, g.rank() - 1)?;
                Ok(builders::as_inertial(g, p, vc)?)
            }
        }
        DrViolation::DiscreteComponent { level } => {
            let l = g.level(*level);
            if !l.is_discrete() {
                return Err(DrError::ViolationMismatch(format!(
                    "level {level} is not discrete"
                )));
            }
            // alpha = -g at the discrete level is the largest negative
            // element of its archimedean component
            let alpha = negative_level_generator(g, *level)?;
            let delta = alpha
                .coords()
                .scale_rat(&Rat::new(1.into(), (p as i64).into()));
            if mixed {
                Ok(builders::kummer_ramified_wild(
                    g,
                    p,
                    f.vp_element.clone().unwrap(),
                    delta,
                    None,
                )?)
            } else {
                Ok(builders::as_ramified(g, p, delta, None)?)
            }
        }
        DrViolation::DependentDefect => {
            if f.independent_defect_field {
                return Err(DrError::ViolationMismatch(
                    "field is an independent defect field".into(),
                ));
            }
            if mixed {
                Ok(builders::kummer_defect(
                    g,
                    p,
                    f.vp_element.clone().unwrap(),
                    Some(false),
                ))
            } else {
                Ok(builders::as_defect(g, p, Some(false)))
            }
        }
    }
}

/// Result of checking one family member over a deeply ramified field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCheck {
    pub index: usize,
    pub is_zero: bool,
}

/// Result of confirming one witness extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCheck {
    pub violation: DrViolation,
    pub extension: PrimeExtension,
    pub nonzero_confirmed: bool,
}

/// Report of the two-sided equivalence check: over a deeply ramified
/// field every degree-p member must vanish; over a field with violations
/// every witness must not. Inconsistencies indicate a library bug and are
/// reported as such.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub dr: DrReport,
    pub partial: bool,
    pub family: Vec<FamilyCheck>,
    pub witnesses: Vec<WitnessCheck>,
    pub inconsistencies: Vec<String>,
}

pub fn equivalence_report(
    f: &FieldDescriptor,
    family: &[PrimeExtension],
) -> Result<EquivalenceReport, DrError> {
    let dr = is_deeply_ramified(f)?;
    let mut report = EquivalenceReport {
        dr: dr.clone(),
        partial: dr.verdict == Trivalent::Undecided,
        family: Vec::new(),
        witnesses: Vec::new(),
        inconsistencies: Vec::new(),
    };
    for (index, ext) in family.iter().enumerate() {
        if ext.degree != f.residue_char {
            report
                .inconsistencies
                .push(format!("family member {index} has degree {}", ext.degree));
            continue;
        }
        if ext.base_group != f.value_group {
            report.inconsistencies.push(format!(
                "family member {index} lives over a different group"
            ));
            continue;
        }
        let v = kahler_of(ext)?;
        report.family.push(FamilyCheck {
            index,
            is_zero: v.is_zero,
        });
        if dr.verdict == Trivalent::True && !v.is_zero {
            report.inconsistencies.push(format!(
                "family member {index} is nonzero over a deeply ramified field"
            ));
        }
    }
    if dr.verdict == Trivalent::False {
        for violation in &dr.violations {
            match witness_extension(f, violation) {
                Ok(ext) => {
                    let v = kahler_of(&ext)?;
                    if !v.is_zero {
                        report.witnesses.push(WitnessCheck {
                            violation: violation.clone(),
                            extension: ext,
                            nonzero_confirmed: true,
                        });
                    } else {
                        report
                            .inconsistencies
                            .push(format!("witness for {violation} classified zero"));
                        report.witnesses.push(WitnessCheck {
                            violation: violation.clone(),
                            extension: ext,
                            nonzero_confirmed: false,
                        });
                    }
                }
                Err(DrError::MissingZetaP) => {
                    report.partial = true;
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

impl crate::kahler::HenselizeNormalize for FieldDescriptor {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::builders::*;
    use crate::ordered_groups::Coords;
    use crate::rational::{rat, rat_int};

    #[test]
    fn drvr_criterion() {
        // dense p-divisible group, perfect residue, independent defect
        let f = example_one_field(3, false);
        assert_eq!(check_drvr(&f), Trivalent::True);

        // vK = Z: criterion fails, no flag: undecided
        let f2 = equal_char_field(group_z(), 3);
        assert_eq!(check_drvr(&f2), Trivalent::Undecided);

        // explicit flag passthrough
        let mut f3 = f2.clone();
        f3.drvr_flag = Some(false);
        assert_eq!(check_drvr(&f3), Trivalent::False);
    }

    #[test]
    fn drvr_monotone_under_strengthening() {
        // strengthening the inputs never flips true to undecided
        let mut gen = crate::gen::DescriptorGen::new(31);
        let mut trues = 0;
        for _ in 0..200 {
            let f = gen.rand_dr_field();
            if check_drvr(&f) != Trivalent::True {
                continue;
            }
            trues += 1;
            let mut stronger = f.clone();
            stronger.residue_perfect = true;
            stronger.independent_defect_field = true;
            assert_eq!(check_drvr(&stronger), Trivalent::True);
            // adding p-divisibility everywhere only strengthens
            let p = f.residue_char;
            let levels: Vec<_> = f
                .value_group
                .levels()
                .iter()
                .map(|l| match l {
                    LevelDescriptor::Localized(g, s) => {
                        let mut s = s.clone();
                        s.insert(p);
                        LevelDescriptor::Localized(g.clone(), s)
                    }
                    other => other.clone(),
                })
                .collect();
            stronger.value_group = OrderedGroup::new(levels).unwrap();
            if stronger.char_k != 0 {
                assert_eq!(check_drvr(&stronger), Trivalent::True);
            }
        }
        assert!(trues > 50, "generator produced too few decided fields");
    }

    #[test]
    fn deeply_ramified_examples() {
        // the radical p-tower over the p-adics is deeply ramified
        let f = example_one_field(3, false);
        let r = is_deeply_ramified(&f).unwrap();
        assert_eq!(r.verdict, Trivalent::True);
        assert!(r.violations.is_empty());

        // a discretely valued field of equal characteristic is not
        let f2 = equal_char_field(group_z(), 3);
        let r2 = is_deeply_ramified(&f2).unwrap();
        assert_eq!(r2.verdict, Trivalent::False);
        assert!(r2
            .violations
            .iter()
            .any(|v| matches!(v, DrViolation::DiscreteComponent { level: 0 })));

        // the composite-valuation example field: discrete at level 1
        let f3 = example_two_field(5);
        let r3 = is_deeply_ramified(&f3).unwrap();
        assert_eq!(r3.verdict, Trivalent::False);
        assert!(r3
            .violations
            .iter()
            .any(|v| matches!(v, DrViolation::DiscreteComponent { level: 1 })));
    }

    #[test]
    fn witnesses_are_nonzero() {
        // equal characteristic, vK = Z: the Artin-Schreier witness with
        // v(theta) = -1/p
        let f = equal_char_field(group_z(), 3);
        let r = is_deeply_ramified(&f).unwrap();
        for violation in &r.violations {
            let ext = witness_extension(&f, violation).unwrap();
            let v = kahler_of(&ext).unwrap();
            assert!(!v.is_zero, "violation {violation} gave a zero witness");
            if let DrViolation::NotPDivisibleAtVp { .. } = violation {
                assert_eq!(ext.e, 3);
                assert_eq!(
                    ext.value_data.as_ref().unwrap().delta(),
                    &Coords(vec![rat(-1, 3)])
                );
            }
        }
    }

    #[test]
    fn imperfect_residue_witnesses() {
        // equal characteristic: the inertial witness has inseparable
        // residue extension and nonzero differentials
        let mut f = equal_char_field(group_z_inv(3), 3);
        f.residue_perfect = false;
        let r = is_deeply_ramified(&f).unwrap();
        let violation = r
            .violations
            .iter()
            .find(|v| matches!(v, DrViolation::ImperfectResidue))
            .expect("imperfect residue violation");
        let ext = witness_extension(&f, violation).unwrap();
        assert_eq!((ext.e, ext.f), (1, 3));
        assert!(!ext.residue.separable);
        assert!(!kahler_of(&ext).unwrap().is_zero);

        // mixed characteristic: the unit-residue radical witness
        let mut fm = example_one_field(3, false);
        fm.residue_perfect = false;
        let rm = is_deeply_ramified(&fm).unwrap();
        let violation = rm
            .violations
            .iter()
            .find(|v| matches!(v, DrViolation::ImperfectResidue))
            .unwrap();
        let ext = witness_extension(&fm, violation).unwrap();
        assert_eq!((ext.e, ext.f), (1, 3));
        let v = kahler_of(&ext).unwrap();
        assert!(!v.is_zero);
    }

    #[test]
    fn witness_requires_zeta_in_mixed_characteristic() {
        let mut f = example_two_field(3);
        f.contains_zeta_p = false;
        let r = is_deeply_ramified(&f).unwrap();
        let err = witness_extension(&f, &r.violations[0]).unwrap_err();
        assert!(matches!(err, DrError::MissingZetaP));
        // the equivalence report marks itself partial instead of failing
        let report = equivalence_report(&f, &[]).unwrap();
        assert!(report.partial);
    }

    #[test]
    fn mixed_witness_discrete_above_dense() {
        // vK = Z x Q with vp = (0, 1): only violation is the discrete
        // level-0 component; the radical witness leads there
        let g = crate::ordered_groups::OrderedGroup::new(vec![
            LevelDescriptor::Cyclic(rat_int(1)),
            LevelDescriptor::FullRationals,
        ])
        .unwrap();
        let vp = g.element(vec![rat_int(0), rat_int(1)]).unwrap();
        let f = FieldDescriptor {
            char_k: 0,
            residue_char: 3,
            value_group: g,
            vp_element: Some(vp),
            residue_perfect: true,
            contains_zeta_p: true,
            independent_defect_field: true,
            drvr_flag: None,
        };
        let r = is_deeply_ramified(&f).unwrap();
        assert_eq!(r.verdict, Trivalent::False);
        assert_eq!(r.violations.len(), 1);
        let ext = witness_extension(&f, &r.violations[0]).unwrap();
        let v = kahler_of(&ext).unwrap();
        assert!(!v.is_zero);
    }

    #[test]
    fn report_over_deeply_ramified_field() {
        let f = example_one_field(3, true);
        let mut gen = crate::gen::DescriptorGen::new(7);
        let family = gen.dr_family(&f, 25).unwrap();
        let report = equivalence_report(&f, &family).unwrap();
        assert!(report.inconsistencies.is_empty());
        assert!(report.family.iter().all(|c| c.is_zero));
    }

    #[test]
    fn report_over_failing_field() {
        let f = equal_char_field(group_z(), 3);
        let report = equivalence_report(&f, &[]).unwrap();
        assert!(!report.witnesses.is_empty());
        assert!(report.witnesses.iter().all(|w| w.nonzero_confirmed));
        assert!(report.inconsistencies.is_empty());
    }
}
