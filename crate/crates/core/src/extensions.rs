//! Descriptors of unibranched Galois extensions of prime degree and the
//! classification machinery attached to them: Ostrowski accounting,
//! generator normalization, generator-case analysis and the exact values
//! of minimal-polynomial derivatives.

use std::fmt;

use thiserror::Error;

use crate::ordered_groups::{
    AdjoinedGroup, Coords, ExtValue, GroupElement, GroupError, OrderedGroup,
};
use crate::rational::{is_prime, rat_u64, Rat};
use num_traits::One;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("descriptor invalid: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("operation applies only to maximally ramified extensions (e = n)")]
    NotMaximallyRamified,
    #[error("case mismatch: {0}")]
    CaseMismatch(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The Galois kind of the extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionKind {
    /// Degree-p Galois extension in characteristic p, generated by a root
    /// of X^p - X - b.
    ArtinSchreier,
    /// Degree-q Galois extension with a primitive q-th root of unity in
    /// the base, generated by a q-th root.
    Kummer { has_zeta: bool },
}

impl ExtensionKind {
    pub fn is_kummer(&self) -> bool {
        matches!(self, ExtensionKind::Kummer { .. })
    }
}

/// How the residue field extension is generated when f = n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratedBy {
    /// By the residue of a unit generator.
    UnitResidue,
    /// By the residue of a scaled shifted 1-unit.
    ShiftedOneUnit,
    /// No residue generation data (f = 1).
    None,
}

/// Residue-side data of the extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueData {
    pub residue_char: u64,
    pub degree_f: u64,
    pub separable: bool,
    pub generated_by: GeneratedBy,
}

/// Optional defect data: either an externally asserted independence flag,
/// or a distance-cut description whose shape decides independence (the cut
/// is accepted as independent exactly when the convex subgroup it names
/// does not contain vp).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectData {
    pub independent: Option<bool>,
    pub cut_start_level: Option<usize>,
}

/// Descriptor of a unibranched Galois extension of prime degree n, carrying
/// exactly the invariants the classification consumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeExtension {
    pub kind: ExtensionKind,
    pub degree: u64,
    /// 0 in mixed characteristic, p in equal characteristic.
    pub char_k: u64,
    pub e: u64,
    pub f: u64,
    pub d: u64,
    pub base_group: OrderedGroup,
    /// The extended value group when e = n; delta is the value of the
    /// normalized generator (v theta, v eta, or v xi).
    pub value_data: Option<AdjoinedGroup>,
    /// Value of an Artin-Schreier generator when f = p (non-positive).
    pub v_theta: Option<GroupElement>,
    /// Value of eta - 1 for the Kummer one-unit cases.
    pub v_eta_minus_one: Option<Coords>,
    pub residue: ResidueData,
    /// Power index from the generator analysis, when known.
    pub j: Option<u32>,
    pub defect: Option<DefectData>,
    pub one_unit_generator: bool,
    /// Value of p in the base group; required in mixed characteristic.
    pub vp_element: Option<GroupElement>,
}

/// A single validation failure; validation reports all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DegreeNotPrime(u64),
    OstrowskiMismatch { e: u64, f: u64, d: u64, n: u64 },
    IllegalDefect(String),
    KindCharMismatch(String),
    MissingZeta,
    MissingValueData,
    ValueDataMismatch(String),
    ResidueMismatch(String),
    MissingVp,
    SeparabilityMismatch(String),
    BadJ(u32),
    BadWitness(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeNotPrime(n) => write!(f, "degree {n} is not prime"),
            Violation::OstrowskiMismatch { e, f: ff, d, n } => {
                write!(f, "e*f*d = {}*{}*{} does not equal n = {}", e, ff, d, n)
            }
            Violation::IllegalDefect(s) => write!(f, "illegal defect: {s}"),
            Violation::KindCharMismatch(s) => write!(f, "kind/characteristic mismatch: {s}"),
            Violation::MissingZeta => write!(f, "Kummer extension requires q-th roots of unity"),
            Violation::MissingValueData => write!(f, "e = n requires extended value group data"),
            Violation::ValueDataMismatch(s) => write!(f, "value data mismatch: {s}"),
            Violation::ResidueMismatch(s) => write!(f, "residue data mismatch: {s}"),
            Violation::MissingVp => write!(f, "mixed characteristic requires the value of p"),
            Violation::SeparabilityMismatch(s) => write!(f, "separability mismatch: {s}"),
            Violation::BadJ(j) => write!(f, "power index j = {j} out of range"),
            Violation::BadWitness(s) => write!(f, "bad witness: {s}"),
        }
    }
}

impl PrimeExtension {
    /// The ambient value group vL: the adjoined group when e = n, the base
    /// group otherwise.
    pub fn ambient_group(&self) -> AdjoinedGroup {
        match &self.value_data {
            Some(ag) => ag.clone(),
            None => AdjoinedGroup::identity(self.base_group.clone()),
        }
    }

    pub fn is_mixed_characteristic(&self) -> bool {
        self.char_k == 0 && self.residue.residue_char > 0
    }

    /// Value of q in the base field: vp when the degree equals the residue
    /// characteristic, zero otherwise.
    pub fn vq(&self) -> Coords {
        if self.degree == self.residue.residue_char {
            match &self.vp_element {
                Some(vp) => vp.coords().clone(),
                None => Coords::zero(self.base_group.rank()),
            }
        } else {
            Coords::zero(self.base_group.rank())
        }
    }

    /// v(1 - zeta_p) = vp/(p-1) as a hull vector, for the Kummer p-cases.
    pub fn zeta_gap(&self) -> Option<Coords> {
        let p = self.residue.residue_char;
        if p < 2 {
            return None;
        }
        self.vp_element
            .as_ref()
            .map(|vp| vp.coords().scale_rat(&(Rat::one() / rat_u64(p - 1))))
    }
}

/// Checks the numeric invariants of a descriptor and reports every
/// violation; never panics.
pub fn validate(ext: &PrimeExtension) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = ext.degree;
    if !is_prime(n) {
        out.push(Violation::DegreeNotPrime(n));
    }
    if ext
        .e
        .checked_mul(ext.f)
        .and_then(|ef| ef.checked_mul(ext.d))
        != Some(n)
    {
        out.push(Violation::OstrowskiMismatch {
            e: ext.e,
            f: ext.f,
            d: ext.d,
            n,
        });
    }
    if ext.d != 1 {
        if ext.d != n {
            out.push(Violation::IllegalDefect(format!(
                "defect {} must be 1 or n",
                ext.d
            )));
        }
        if ext.residue.residue_char == 0 || n != ext.residue.residue_char {
            out.push(Violation::IllegalDefect(
                "nontrivial defect requires n equal to the residue characteristic".into(),
            ));
        }
    }
    match ext.kind {
        ExtensionKind::ArtinSchreier => {
            if ext.char_k != n || ext.residue.residue_char != n {
                out.push(Violation::KindCharMismatch(
                    "Artin-Schreier requires char K = char Kv = n".into(),
                ));
            }
        }
        ExtensionKind::Kummer { has_zeta } => {
            if ext.char_k == n {
                out.push(Violation::KindCharMismatch(
                    "Kummer degree must differ from char K".into(),
                ));
            }
            if !has_zeta && n != 2 {
                out.push(Violation::MissingZeta);
            }
        }
    }
    if ext.e == n {
        match &ext.value_data {
            None => out.push(Violation::MissingValueData),
            Some(ag) => {
                if ag.base() != &ext.base_group {
                    out.push(Violation::ValueDataMismatch(
                        "adjoined group base differs from vK".into(),
                    ));
                }
                if ag.order() != n {
                    out.push(Violation::ValueDataMismatch(format!(
                        "adjoined order {} differs from degree {}",
                        ag.order(),
                        n
                    )));
                }
                if ag.lead().is_none() {
                    out.push(Violation::ValueDataMismatch(
                        "delta lies in vK, so e = n is impossible".into(),
                    ));
                }
                // normalized ramified generators have negative value for
                // the shifted-power ideals to live in the valuation ring
                let negative_gen =
                    matches!(ext.kind, ExtensionKind::ArtinSchreier) || ext.one_unit_generator;
                if negative_gen && !ag.delta().is_negative() {
                    out.push(Violation::BadWitness(
                        "ramified generator value must be negative".into(),
                    ));
                }
            }
        }
    }
    if ext.f == n {
        if ext.residue.degree_f != n {
            out.push(Violation::ResidueMismatch(format!(
                "residue degree {} differs from f = {}",
                ext.residue.degree_f, n
            )));
        }
        if ext.residue.generated_by == GeneratedBy::None {
            out.push(Violation::ResidueMismatch(
                "f = n requires residue generation data".into(),
            ));
        }
    }
    if ext.is_mixed_characteristic() {
        match &ext.vp_element {
            None => out.push(Violation::MissingVp),
            Some(vp) => {
                if !vp.is_positive() {
                    out.push(Violation::BadWitness("vp must be positive".into()));
                }
                if vp.group() != &ext.base_group {
                    out.push(Violation::BadWitness("vp lives in the wrong group".into()));
                }
            }
        }
    }
    // separability bookkeeping per case
    match (&ext.kind, ext.f == n && n > 1) {
        (ExtensionKind::ArtinSchreier, true) => match &ext.v_theta {
            None => out.push(Violation::BadWitness(
                "Artin-Schreier f = p requires the generator value".into(),
            )),
            Some(vt) => {
                if vt.is_positive() {
                    out.push(Violation::BadWitness(
                        "Artin-Schreier generator value must be <= 0".into(),
                    ));
                }
                let sep = vt.is_zero();
                if ext.residue.separable != sep {
                    out.push(Violation::SeparabilityMismatch(format!(
                        "residue extension is separable iff v(theta) = 0; v(theta) = {}",
                        vt
                    )));
                }
            }
        },
        (ExtensionKind::Kummer { .. }, true) => {
            if n == ext.residue.residue_char {
                match ext.residue.generated_by {
                    GeneratedBy::UnitResidue => {
                        if ext.residue.separable {
                            out.push(Violation::SeparabilityMismatch(
                                "unit Kummer residue generator is purely inseparable".into(),
                            ));
                        }
                    }
                    GeneratedBy::ShiftedOneUnit => {
                        if let (Some(ve), Some(gap)) = (&ext.v_eta_minus_one, ext.zeta_gap()) {
                            let sep = *ve == gap;
                            if ext.residue.separable != sep {
                                out.push(Violation::SeparabilityMismatch(
                                    "one-unit case is separable iff v(eta-1) = vp/(p-1)".into(),
                                ));
                            }
                            if ve.lex_cmp(&gap) == std::cmp::Ordering::Greater {
                                out.push(Violation::BadWitness(
                                    "v(eta-1) > vp/(p-1) is impossible for unibranched".into(),
                                ));
                            }
                        } else {
                            out.push(Violation::BadWitness(
                                "one-unit case requires v(eta-1) and vp".into(),
                            ));
                        }
                    }
                    GeneratedBy::None => {}
                }
            } else if !ext.residue.separable {
                out.push(Violation::SeparabilityMismatch(
                    "Kummer residue extensions of degree prime to the residue characteristic \
                     are separable"
                        .into(),
                ));
            }
        }
        _ => {}
    }
    if ext.kind.is_kummer() && ext.one_unit_generator && ext.e == n {
        match (&ext.v_eta_minus_one, ext.zeta_gap()) {
            (Some(ve), Some(gap)) => {
                if !ve.is_positive() {
                    out.push(Violation::BadWitness(
                        "one-unit generator requires v(eta-1) > 0".into(),
                    ));
                }
                if ve.lex_cmp(&gap) != std::cmp::Ordering::Less {
                    out.push(Violation::BadWitness(
                        "ramified one-unit case requires v(eta-1) < vp/(p-1)".into(),
                    ));
                }
                if ext.base_group.contains(ve) {
                    out.push(Violation::BadWitness(
                        "ramified one-unit case requires v(eta-1) outside vK".into(),
                    ));
                }
            }
            _ => out.push(Violation::BadWitness(
                "ramified one-unit case requires v(eta-1) and vp".into(),
            )),
        }
    }
    if let Some(j) = ext.j {
        if j == 0 || u64::from(j) >= n {
            out.push(Violation::BadJ(j));
        }
    }
    out
}

/// Generator-case tags from the maximal-ramification analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorCaseTag {
    /// Simple residue generation (f = n).
    DL1,
    /// vK i-divisible for all 2 <= i < n.
    DL2a,
    /// All archimedean components dense.
    DL2b,
    /// Discrete components exist but never at the new value's level.
    DL2c,
    /// Discrete leading component at the bottom: single generator.
    DL2d,
    /// Discrete leading component above other levels: union form.
    DL2e,
}

/// Result of the generator-case ladder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorCase {
    pub tag: GeneratorCaseTag,
    pub j: Option<u32>,
    /// Whether the valuation ring is the union of the scaled single-power
    /// rings (true) or a single ring `O_K[x]` (false).
    pub union_form: bool,
}

/// Runs the generator-case ladder for a maximally ramified extension.
///
/// The discrete-leading-component cases are recognized first since they
/// yield the strongest conclusion; divisible and dense cases follow with
/// j = 1; what remains is the case where discrete components exist but the
/// new value never leads at one, where j stays as supplied.
pub fn classify_generator_case(ext: &PrimeExtension) -> Result<GeneratorCase, ExtensionError> {
    let n = ext.degree;
    if ext.e != n || ext.d != 1 {
        return Err(ExtensionError::NotMaximallyRamified);
    }
    let ag = ext
        .value_data
        .as_ref()
        .ok_or(ExtensionError::NotMaximallyRamified)?;
    let lead = ag.lead().ok_or_else(|| {
        ExtensionError::CaseMismatch("delta lies in vK; extension is not ramified".into())
    })?;
    let base = &ext.base_group;
    let lead_discrete = base.level(lead).is_discrete();
    if lead_discrete {
        if lead == base.rank() - 1 {
            return Ok(GeneratorCase {
                tag: GeneratorCaseTag::DL2d,
                j: ext.j,
                union_form: false,
            });
        }
        return Ok(GeneratorCase {
            tag: GeneratorCaseTag::DL2e,
            j: ext.j,
            union_form: true,
        });
    }
    if (2..n).all(|i| base.is_n_divisible(i)) {
        return Ok(GeneratorCase {
            tag: GeneratorCaseTag::DL2a,
            j: Some(1),
            union_form: true,
        });
    }
    if base.levels().iter().all(|l| l.is_dense()) {
        return Ok(GeneratorCase {
            tag: GeneratorCaseTag::DL2b,
            j: Some(1),
            union_form: true,
        });
    }
    Ok(GeneratorCase {
        tag: GeneratorCaseTag::DL2c,
        j: ext.j,
        union_form: true,
    })
}

/// The distinguished ring generator for a discretely valued base: for the
/// root of X^p - X - pi^(-m), the element pi^k * theta^ell has the minimal
/// positive value v(pi)/p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaGenerator {
    pub k: u64,
    pub ell: u64,
    /// Value of the generator, normalized to v(pi) = 1.
    pub value: Rat,
}

pub fn theta_m_generator(p: u64, m: u64) -> Result<ThetaGenerator, ExtensionError> {
    if !is_prime(p) {
        return Err(ExtensionError::OutOfRange(format!("{p} is not prime")));
    }
    if m == 0 || m >= p {
        return Err(ExtensionError::OutOfRange(format!(
            "m = {m} must satisfy 1 <= m < p = {p}"
        )));
    }
    // least positive ell with -ell*m = 1 mod p
    let mut ell = 0u64;
    for cand in 1..p {
        if (cand * m) % p == (p - 1) % p {
            ell = cand;
            break;
        }
    }
    debug_assert!(ell > 0);
    let k = (1 + ell * m) / p;
    debug_assert_eq!(1 + ell * m, k * p);
    Ok(ThetaGenerator {
        k,
        ell,
        value: Rat::new(1.into(), (p as i64).into()),
    })
}

/// v(1 - zeta_n) = v(n)/(n - 1), as a hull vector (the value need not lie
/// in vK itself unless zeta_n does).
pub fn one_minus_zeta_value(n: u64, vn: &GroupElement) -> Result<Coords, ExtensionError> {
    if !is_prime(n) {
        return Err(ExtensionError::OutOfRange(format!("{n} is not prime")));
    }
    if vn.coords().is_negative() {
        return Err(ExtensionError::OutOfRange("vn must be >= 0".into()));
    }
    Ok(vn.coords().scale_rat(&(Rat::one() / rat_u64(n - 1))))
}

/// The unibranched-ness bound: for every c in K,
/// v(eta - c) <= v(eta) + v(1-zeta_q). Rejects candidate approximation
/// values that exceed it.
pub fn unibranched_bound_check(
    ext: &PrimeExtension,
    candidate: &Coords,
) -> Result<bool, ExtensionError> {
    if !ext.kind.is_kummer() {
        return Err(ExtensionError::CaseMismatch(
            "the bound applies to Kummer extensions".into(),
        ));
    }
    let q = ext.degree;
    let rank = ext.base_group.rank();
    let v_eta = match (&ext.value_data, ext.one_unit_generator) {
        (Some(ag), false) => ag.delta().clone(),
        _ => Coords::zero(rank),
    };
    let v_zeta_gap = if q == ext.residue.residue_char {
        ext.zeta_gap().ok_or(ExtensionError::CaseMismatch(
            "Kummer p-case requires vp".into(),
        ))?
    } else {
        Coords::zero(rank)
    };
    let bound = &v_eta + &v_zeta_gap;
    Ok(candidate.lex_cmp(&bound) != std::cmp::Ordering::Greater)
}

/// Exact value of the derivative of the minimal polynomial of the
/// normalized generator, scaled by c, from the per-case derivative table.
/// `vc` is the value of the scaling element (zero for the unscaled
/// generator).
pub fn derivative_value(
    ext: &PrimeExtension,
    vc: &GroupElement,
) -> Result<ExtValue, ExtensionError> {
    if vc.group() != &ext.base_group {
        return Err(ExtensionError::Group(GroupError::GroupMismatch));
    }
    let n = ext.degree;
    let ambient = ext.ambient_group();
    let value = match (&ext.kind, ext.e == n, ext.f == n, ext.d == n) {
        // Artin-Schreier, inertial: f'(c theta) has value (p-1) vc
        (ExtensionKind::ArtinSchreier, false, true, false) => vc.coords().scale_int(n as i64 - 1),
        // Artin-Schreier, ramified: (p-1) * v(c theta^(j-1))
        (ExtensionKind::ArtinSchreier, true, false, false) => {
            let ag = ext.value_data.as_ref().ok_or_else(|| {
                ExtensionError::CaseMismatch("missing value data for e = p".into())
            })?;
            let j = i64::from(ext.j.unwrap_or(1));
            let base_val = vc.coords() + &ag.delta().scale_int(j - 1);
            base_val.scale_int(n as i64 - 1)
        }
        // Kummer inertial p-case
        (ExtensionKind::Kummer { .. }, false, true, false) if n == ext.residue.residue_char => {
            let vp = ext
                .vp_element
                .as_ref()
                .ok_or(ExtensionError::CaseMismatch("missing vp".into()))?;
            match ext.residue.generated_by {
                GeneratedBy::UnitResidue => {
                    if !vc.is_zero() {
                        return Err(ExtensionError::CaseMismatch(
                            "unit-residue case takes no scaling".into(),
                        ));
                    }
                    vp.coords().clone()
                }
                GeneratedBy::ShiftedOneUnit => vp.coords() + &vc.coords().scale_int(n as i64 - 1),
                GeneratedBy::None => {
                    return Err(ExtensionError::CaseMismatch(
                        "f = p requires residue generation data".into(),
                    ))
                }
            }
        }
        // Kummer inertial q-case, q prime to residue characteristic:
        // derivative q * (c eta)^(q-1) is a unit times the scaling
        (ExtensionKind::Kummer { .. }, false, true, false) => vc.coords().scale_int(n as i64 - 1),
        // Kummer ramified
        (ExtensionKind::Kummer { .. }, true, false, false) => {
            let ag = ext.value_data.as_ref().ok_or_else(|| {
                ExtensionError::CaseMismatch("missing value data for e = q".into())
            })?;
            if ext.one_unit_generator {
                // (p-1) * v(c xi^(j-1))
                let j = i64::from(ext.j.unwrap_or(1));
                let base_val = vc.coords() + &ag.delta().scale_int(j - 1);
                base_val.scale_int(n as i64 - 1)
            } else {
                // vq + (q-1) * v(c eta)
                let vq = ext.vq();
                let vceta = vc.coords() + ag.delta();
                &vq + &vceta.scale_int(n as i64 - 1)
            }
        }
        _ => {
            return Err(ExtensionError::CaseMismatch(
                "no defectless derivative formula for this case".into(),
            ))
        }
    };
    ambient.element(value).map_err(ExtensionError::Group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::builders::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn validate_ostrowski() {
        // n = p, e = 1, f = 1 forces d = p; a descriptor claiming d = 1 fails
        let g = group_z();
        let mut ext = as_defect(&g, 3, Some(true));
        ext.d = 1;
        let v = validate(&ext);
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::OstrowskiMismatch { .. })));

        // consistent maximally ramified descriptor passes
        let ok = as_ramified(&g, 3, Coords(vec![rat(-1, 3)]), None).unwrap();
        assert_eq!(validate(&ok), Vec::new());

        // e = f = q overshoots
        let mut bad = kummer_ramified_tame(&g, 2, 3, Coords(vec![rat(1, 2)])).unwrap();
        bad.f = 2;
        let v = validate(&bad);
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::OstrowskiMismatch { .. })));
    }

    #[test]
    fn validate_defect_legality() {
        let g = group_z_inv(3);
        let ext = as_defect(&g, 3, Some(true));
        assert_eq!(validate(&ext), Vec::new());
        let mut bad = ext.clone();
        bad.d = 2;
        bad.degree = 2;
        bad.kind = ExtensionKind::Kummer { has_zeta: true };
        bad.char_k = 0;
        // d = 2 = n but residue char is 3
        let v = validate(&bad);
        assert!(!v.is_empty());
    }

    #[test]
    fn generator_ladder_discrete_base() {
        // vK = Z, AS with v(theta) = -1/p: single generator case
        for p in [2u64, 3, 5] {
            let g = group_z();
            let ext = as_ramified(&g, p, Coords(vec![rat(-1, p as i64)]), None).unwrap();
            let case = classify_generator_case(&ext).unwrap();
            assert_eq!(case.tag, GeneratorCaseTag::DL2d, "p = {p}");
            assert!(!case.union_form);
        }
    }

    #[test]
    fn generator_ladder_divisible_base() {
        // vK = Z[1/6] is i-divisible for i in {2, 3, 4}, and 1/5 is new
        let g = group_localized(&[2, 3]);
        let ext = kummer_ramified_tame(&g, 5, 7, Coords(vec![rat(1, 5)])).unwrap();
        let case = classify_generator_case(&ext).unwrap();
        assert_eq!(case.tag, GeneratorCaseTag::DL2a);
        assert_eq!(case.j, Some(1));
        assert!(case.union_form);
        // the divisibility condition itself is trivially true over Q
        assert!(group_full().is_n_divisible(60));
    }

    #[test]
    fn generator_ladder_mixed_rank_two() {
        // vK = Z[1/2] x (1/(p-1))Z with delta = (1/p, 0): dense leading
        // level, discrete second level, so neither the divisible nor the
        // all-dense case applies and the new value never leads at a
        // discrete component.
        for p in [3u64, 5] {
            let ext = example_two_extension(p);
            let case = classify_generator_case(&ext).unwrap();
            assert_eq!(case.tag, GeneratorCaseTag::DL2c, "p = {p}");
            assert!(case.union_form);
        }
    }

    #[test]
    fn theta_table() {
        let t = theta_m_generator(3, 1).unwrap();
        assert_eq!((t.k, t.ell), (1, 2));
        assert_eq!(t.value, rat(1, 3));

        let t = theta_m_generator(5, 4).unwrap();
        assert_eq!(t.ell, 1);
        assert_eq!(t.value, rat(1, 5));

        let t = theta_m_generator(2, 1).unwrap();
        assert_eq!((t.k, t.ell), (1, 1));
        assert_eq!(t.value, rat(1, 2));

        assert!(theta_m_generator(3, 3).is_err());
        assert!(theta_m_generator(4, 1).is_err());
    }

    #[test]
    fn zeta_values() {
        let g = group_z();
        let v3 = g.element(vec![rat_int(1)]).unwrap();
        assert_eq!(
            one_minus_zeta_value(3, &v3).unwrap(),
            Coords(vec![rat(1, 2)])
        );
        assert_eq!(
            one_minus_zeta_value(2, &v3).unwrap(),
            Coords(vec![rat_int(1)])
        );
        let v0 = g.zero();
        assert_eq!(
            one_minus_zeta_value(5, &v0).unwrap(),
            Coords(vec![rat_int(0)])
        );
        assert!(one_minus_zeta_value(6, &v3).is_err());
        // exactness: (n-1) * value = vn
        for n in [2u64, 3, 5, 7] {
            let v = one_minus_zeta_value(n, &v3).unwrap();
            assert_eq!(v.scale_int(n as i64 - 1), v3.coords().clone());
        }
    }

    #[test]
    fn derivative_values() {
        // plain AS: value 0
        let g = group_z();
        let ext = as_inertial(&g, 3, g.zero()).unwrap();
        let d = derivative_value(&ext, &g.zero()).unwrap();
        assert!(d.is_zero());

        // scaled AS: (p-1) vc
        let vt = g.element(vec![rat_int(-2)]).unwrap();
        let ext = as_inertial(&g, 3, vt).unwrap();
        let vc = g.element(vec![rat_int(2)]).unwrap();
        let d = derivative_value(&ext, &vc).unwrap();
        assert_eq!(d.coords(), &Coords(vec![rat_int(4)]));

        // Kummer q = 2 over Z[1/p], v(eta) = 1/2, vc = 0: value v(eta)
        let gp = group_z_inv(3);
        let ext = kummer_ramified_tame(&gp, 2, 3, Coords(vec![rat(1, 2)])).unwrap();
        let d = derivative_value(&ext, &gp.zero()).unwrap();
        assert_eq!(d.coords(), &Coords(vec![rat(1, 2)]));

        // Kummer p-case i: exactly vp
        let (field_g, vp) = group_with_vp_z();
        let ext = kummer_inertial_unit(&field_g, 3, vp.clone()).unwrap();
        let d = derivative_value(&ext, &field_g.zero()).unwrap();
        assert_eq!(d.coords(), vp.coords());
    }

    #[test]
    fn unibranched_bound() {
        let (g, vp) = group_with_vp_z();
        let gap = vp.coords().scale_rat(&rat(1, 2));
        let ext = kummer_inertial_one_unit(&g, 3, vp, gap.clone()).unwrap();
        // v(eta - c) = v(eta) = 0 is fine
        assert!(unibranched_bound_check(&ext, &Coords(vec![rat_int(0)])).unwrap());
        // the boundary vp/(p-1) is allowed
        assert!(unibranched_bound_check(&ext, &gap).unwrap());
        // beyond it is impossible
        let beyond = &gap + &Coords(vec![rat(1, 4)]);
        assert!(!unibranched_bound_check(&ext, &beyond).unwrap());
    }
}
