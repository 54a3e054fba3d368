//! Deterministic construction of descriptors: hand-built instances of the
//! recurring examples, and seeded random generation for the property and
//! equivalence suites.

use rand::prelude::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deeply_ramified::FieldDescriptor;
use crate::extensions::PrimeExtension;
use crate::kahler::{TowerDescriptor, TowerStep};
use crate::ordered_groups::{Coords, GroupElement, LevelDescriptor, OrderedGroup};
use crate::rational::{rat, rat_int, rat_u64, Rat};
use num_traits::{One, Zero};

/// Hand-built descriptors for the recurring base fields and extensions.
pub mod builders {
    use super::*;
    use crate::extensions::{DefectData, ExtensionError, ExtensionKind, GeneratedBy, ResidueData};
    use crate::ordered_groups::AdjoinedGroup;

    pub fn group_z() -> OrderedGroup {
        OrderedGroup::new(vec![LevelDescriptor::Cyclic(rat_int(1))]).unwrap()
    }

    pub fn group_cyclic(g: Rat) -> OrderedGroup {
        OrderedGroup::new(vec![LevelDescriptor::Cyclic(g)]).unwrap()
    }

    pub fn group_z_inv(p: u64) -> OrderedGroup {
        OrderedGroup::new(vec![LevelDescriptor::Localized(
            rat_int(1),
            [p].into_iter().collect(),
        )])
        .unwrap()
    }

    pub fn group_localized(primes: &[u64]) -> OrderedGroup {
        OrderedGroup::new(vec![LevelDescriptor::Localized(
            rat_int(1),
            primes.iter().copied().collect(),
        )])
        .unwrap()
    }

    pub fn group_full() -> OrderedGroup {
        OrderedGroup::new(vec![LevelDescriptor::FullRationals]).unwrap()
    }

    /// vK = Z with v(p) = 2, so that v(1 - zeta_p) = vp/(p-1) lies in vK
    /// for p = 3.
    pub fn group_with_vp_z() -> (OrderedGroup, GroupElement) {
        let g = group_z();
        let vp = g.element(vec![rat_int(2)]).unwrap();
        (g, vp)
    }

    fn trivial_residue(p: u64) -> ResidueData {
        ResidueData {
            residue_char: p,
            degree_f: 1,
            separable: true,
            generated_by: GeneratedBy::None,
        }
    }

    /// Artin-Schreier extension with f = p; separability is read off the
    /// generator value.
    pub fn as_inertial(
        group: &OrderedGroup,
        p: u64,
        v_theta: GroupElement,
    ) -> Result<PrimeExtension, ExtensionError> {
        let separable = v_theta.is_zero();
        Ok(PrimeExtension {
            kind: ExtensionKind::ArtinSchreier,
            degree: p,
            char_k: p,
            e: 1,
            f: p,
            d: 1,
            base_group: group.clone(),
            value_data: None,
            v_theta: Some(v_theta),
            v_eta_minus_one: None,
            residue: ResidueData {
                residue_char: p,
                degree_f: p,
                separable,
                generated_by: GeneratedBy::UnitResidue,
            },
            j: None,
            defect: None,
            one_unit_generator: false,
            vp_element: None,
        })
    }

    /// Artin-Schreier extension with e = p and generator value `delta`.
    pub fn as_ramified(
        group: &OrderedGroup,
        p: u64,
        delta: Coords,
        j: Option<u32>,
    ) -> Result<PrimeExtension, ExtensionError> {
        let ag = AdjoinedGroup::new(group.clone(), delta, p)?;
        Ok(PrimeExtension {
            kind: ExtensionKind::ArtinSchreier,
            degree: p,
            char_k: p,
            e: p,
            f: 1,
            d: 1,
            base_group: group.clone(),
            value_data: Some(ag),
            v_theta: None,
            v_eta_minus_one: None,
            residue: trivial_residue(p),
            j,
            defect: None,
            one_unit_generator: false,
            vp_element: None,
        })
    }

    /// Artin-Schreier defect extension with the given independence data.
    pub fn as_defect(group: &OrderedGroup, p: u64, independent: Option<bool>) -> PrimeExtension {
        PrimeExtension {
            kind: ExtensionKind::ArtinSchreier,
            degree: p,
            char_k: p,
            e: 1,
            f: 1,
            d: p,
            base_group: group.clone(),
            value_data: None,
            v_theta: None,
            v_eta_minus_one: None,
            residue: trivial_residue(p),
            j: None,
            defect: independent.map(|i| DefectData {
                independent: Some(i),
                cut_start_level: None,
            }),
            one_unit_generator: false,
            vp_element: None,
        }
    }

    /// Kummer extension of degree q prime to the residue characteristic,
    /// maximally ramified, in equal characteristic p.
    pub fn kummer_ramified_tame(
        group: &OrderedGroup,
        q: u64,
        residue_char: u64,
        delta: Coords,
    ) -> Result<PrimeExtension, ExtensionError> {
        let ag = AdjoinedGroup::new(group.clone(), delta, q)?;
        Ok(PrimeExtension {
            kind: ExtensionKind::Kummer { has_zeta: true },
            degree: q,
            char_k: residue_char,
            e: q,
            f: 1,
            d: 1,
            base_group: group.clone(),
            value_data: Some(ag),
            v_theta: None,
            v_eta_minus_one: None,
            residue: trivial_residue(residue_char),
            j: None,
            defect: None,
            one_unit_generator: false,
            vp_element: None,
        })
    }

    /// Kummer extension of degree q prime to the residue characteristic
    /// with f = q, in equal characteristic.
    pub fn kummer_inertial_tame(
        group: &OrderedGroup,
        q: u64,
        residue_char: u64,
    ) -> Result<PrimeExtension, ExtensionError> {
        Ok(PrimeExtension {
            kind: ExtensionKind::Kummer { has_zeta: true },
            degree: q,
            char_k: residue_char,
            e: 1,
            f: q,
            d: 1,
            base_group: group.clone(),
            value_data: None,
            v_theta: None,
            v_eta_minus_one: None,
            residue: ResidueData {
                residue_char,
                degree_f: q,
                separable: true,
                generated_by: GeneratedBy::UnitResidue,
            },
            j: None,
            defect: None,
            one_unit_generator: false,
            vp_element: None,
        })
    }

    /// Mixed-characteristic Kummer extension of degree p with e = p and a
    /// radical generator of value `delta`.
    pub fn kummer_ramified_wild(
        group: &OrderedGroup,
        p: u64,
        vp: GroupElement,
        delta: Coords,
        j: Option<u32>,
    ) -> Result<PrimeExtension, ExtensionError> {
        let ag = AdjoinedGroup::new(group.clone(), delta, p)?;
        Ok(PrimeExtension {
            kind: ExtensionKind::Kummer { has_zeta: true },
            degree: p,
            char_k: 0,
            e: p,
            f: 1,
            d: 1,
            base_group: group.clone(),
            value_data: Some(ag),
            v_theta: None,
            v_eta_minus_one: None,
            residue: trivial_residue(p),
            j,
            defect: None,
            one_unit_generator: false,
            vp_element: Some(vp),
        })
    }

    /// Mixed-characteristic Kummer extension of degree p with e = p whose
    /// generator is a 1-unit; `v_eta_minus_one` lies outside the base
    /// group, strictly between 0 and vp/(p-1).
    pub fn kummer_ramified_one_unit(
        group: &OrderedGroup,
        p: u64,
        vp: GroupElement,
        v_eta_minus_one: Coords,
        j: Option<u32>,
    ) -> Result<PrimeExtension, ExtensionError> {
        let gap = vp.coords().scale_rat(&(Rat::one() / rat_u64(p - 1)));
        let xi = &v_eta_minus_one - &gap;
        let ag = AdjoinedGroup::new(group.clone(), xi, p)?;
        Ok(PrimeExtension {
            kind: ExtensionKind::Kummer { has_zeta: true },
            degree: p,
            char_k: 0,
            e: p,
            f: 1,
            d: 1,
            base_group: group.clone(),
            value_data: Some(ag),
            v_theta: None,
            v_eta_minus_one: Some(v_eta_minus_one),
            residue: trivial_residue(p),
            j,
            defect: None,
            one_unit_generator: true,
            vp_element: Some(vp),
        })
    }

    /// Mixed-characteristic Kummer extension of degree p with f = p and a
    /// unit generator whose residue generates inseparably.
    pub fn kummer_inertial_unit(
        group: &OrderedGroup,
        p: u64,
        vp: GroupElement,
    ) -> Result<PrimeExtension, ExtensionError> {
        Ok(PrimeExtension {
            kind: ExtensionKind::Kummer { has_zeta: true },
            degree: p,
            char_k: 0,
            e: 1,
            f: p,
            d: 1,
            base_group: group.clone(),
            value_data: None,
            v_theta: None,
            v_eta_minus_one: None,
            residue: ResidueData {
                residue_char: p,
                degree_f: p,
                separable: false,
                generated_by: GeneratedBy::UnitResidue,
            },
            j: None,
            defect: None,
            one_unit_generator: false,
            vp_element: Some(vp),
        })
    }

    /// Mixed-characteristic Kummer extension of degree p with f = p and a
    /// 1-unit generator; separability is decided by whether v(eta-1)
    /// reaches vp/(p-1).
    pub fn kummer_inertial_one_unit(
        group: &OrderedGroup,
        p: u64,
        vp: GroupElement,
        v_eta_minus_one: Coords,
    ) -> Result<PrimeExtension, ExtensionError> {
        let gap = vp.coords().scale_rat(&(Rat::one() / rat_u64(p - 1)));
        let separable = v_eta_minus_one == gap;
        Ok(PrimeExtension {
            kind: ExtensionKind::Kummer { has_zeta: true },
            degree: p,
            char_k: 0,
            e: 1,
            f: p,
            d: 1,
            base_group: group.clone(),
            value_data: None,
            v_theta: None,
            v_eta_minus_one: Some(v_eta_minus_one),
            residue: ResidueData {
                residue_char: p,
                degree_f: p,
                separable,
                generated_by: GeneratedBy::ShiftedOneUnit,
            },
            j: None,
            defect: None,
            one_unit_generator: true,
            vp_element: Some(vp),
        })
    }

    /// Mixed-characteristic Kummer defect extension.
    pub fn kummer_defect(
        group: &OrderedGroup,
        p: u64,
        vp: GroupElement,
        independent: Option<bool>,
    ) -> PrimeExtension {
        PrimeExtension {
            kind: ExtensionKind::Kummer { has_zeta: true },
            degree: p,
            char_k: 0,
            e: 1,
            f: 1,
            d: p,
            base_group: group.clone(),
            value_data: None,
            v_theta: None,
            v_eta_minus_one: None,
            residue: trivial_residue(p),
            j: None,
            defect: independent.map(|i| DefectData {
                independent: Some(i),
                cut_start_level: None,
            }),
            one_unit_generator: false,
            vp_element: Some(vp),
        }
    }

    /// Mixed-characteristic Kummer defect extension carrying distance-cut
    /// data instead of a flag.
    pub fn kummer_defect_cut(
        group: &OrderedGroup,
        p: u64,
        vp: GroupElement,
        cut_start_level: usize,
    ) -> PrimeExtension {
        let mut ext = kummer_defect(group, p, vp, None);
        ext.defect = Some(DefectData {
            independent: None,
            cut_start_level: Some(cut_start_level),
        });
        ext
    }

    /// The square-root extension of the radical p-tower: vK = Z[1/p] with
    /// v(eta) = 1/2, a tame maximally ramified Kummer extension. The
    /// mixed-characteristic form is the p-adic tower, the equal
    /// characteristic form its Laurent-series analogue.
    pub fn example_one_extension(p: u64, equal_char: bool) -> PrimeExtension {
        let g = group_z_inv(p);
        let delta = Coords(vec![rat(1, 2)]);
        let ag = AdjoinedGroup::new(g.clone(), delta, 2).unwrap();
        let vp = (!equal_char).then(|| g.element(vec![rat_int(1)]).unwrap());
        PrimeExtension {
            kind: ExtensionKind::Kummer { has_zeta: true },
            degree: 2,
            char_k: if equal_char { p } else { 0 },
            e: 2,
            f: 1,
            d: 1,
            base_group: g,
            value_data: Some(ag),
            v_theta: None,
            v_eta_minus_one: None,
            residue: trivial_residue(p),
            j: None,
            defect: None,
            one_unit_generator: false,
            vp_element: vp,
        }
    }

    /// Field descriptor of the radical p-tower base field.
    pub fn example_one_field(p: u64, equal_char: bool) -> FieldDescriptor {
        let g = group_z_inv(p);
        let vp = (!equal_char).then(|| g.element(vec![rat_int(1)]).unwrap());
        FieldDescriptor {
            char_k: if equal_char { p } else { 0 },
            residue_char: p,
            value_group: g,
            vp_element: vp,
            residue_perfect: true,
            contains_zeta_p: true,
            independent_defect_field: true,
            drvr_flag: None,
        }
    }

    /// The composite-valuation value group Z[1/2] x (1/(p-1))Z.
    pub fn example_two_group(p: u64) -> OrderedGroup {
        OrderedGroup::new(vec![
            LevelDescriptor::Localized(rat_int(1), [2].into_iter().collect()),
            LevelDescriptor::Cyclic(Rat::new(1.into(), ((p - 1) as i64).into())),
        ])
        .unwrap()
    }

    /// The wildly ramified radical extension K(t^(1/p)) over the
    /// composite-valuation field: v(eta) = (1/p, 0), v(p) = (0, 1).
    pub fn example_two_extension(p: u64) -> PrimeExtension {
        let g = example_two_group(p);
        let vp = g.element(vec![rat_int(0), rat_int(1)]).unwrap();
        let delta = Coords(vec![rat(1, p as i64), rat_int(0)]);
        let ag = AdjoinedGroup::new(g.clone(), delta, p).unwrap();
        PrimeExtension {
            kind: ExtensionKind::Kummer { has_zeta: true },
            degree: p,
            char_k: 0,
            e: p,
            f: 1,
            d: 1,
            base_group: g,
            value_data: Some(ag),
            v_theta: None,
            v_eta_minus_one: None,
            residue: trivial_residue(p),
            j: None,
            defect: None,
            one_unit_generator: false,
            vp_element: Some(vp),
        }
    }

    /// Field descriptor of the composite-valuation base field.
    pub fn example_two_field(p: u64) -> FieldDescriptor {
        let g = example_two_group(p);
        let vp = g.element(vec![rat_int(0), rat_int(1)]).unwrap();
        FieldDescriptor {
            char_k: 0,
            residue_char: p,
            value_group: g,
            vp_element: Some(vp),
            residue_perfect: true,
            contains_zeta_p: true,
            independent_defect_field: true,
            drvr_flag: None,
        }
    }

    /// Equal-characteristic field descriptor with perfect residue field.
    pub fn equal_char_field(group: OrderedGroup, p: u64) -> FieldDescriptor {
        FieldDescriptor {
            char_k: p,
            residue_char: p,
            value_group: group,
            vp_element: None,
            residue_perfect: true,
            contains_zeta_p: true,
            independent_defect_field: true,
            drvr_flag: None,
        }
    }
}

/// Seeded random generation of groups, extensions, towers and field
/// descriptors for the property suites. Deterministic per seed.
pub struct DescriptorGen {
    rng: ChaCha8Rng,
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("family generation for mixed characteristic requires zeta_p")]
    MissingZetaP,
    #[error("generation failed: {0}")]
    Failed(String),
}

const GENS: [(i64, i64); 6] = [(1, 1), (1, 2), (1, 3), (2, 1), (3, 2), (1, 4)];
const PRIME_POOL: [u64; 4] = [2, 3, 5, 7];

impl DescriptorGen {
    pub fn new(seed: u64) -> Self {
        DescriptorGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn rand_gen_value(&mut self) -> Rat {
        let (n, d) = *GENS.choose(&mut self.rng).unwrap();
        rat(n, d)
    }

    fn rand_prime_set(&mut self, must_contain: Option<u64>) -> std::collections::BTreeSet<u64> {
        let mut s: std::collections::BTreeSet<u64> = PRIME_POOL
            .iter()
            .copied()
            .filter(|_| self.rng.random_bool(0.4))
            .collect();
        if let Some(p) = must_contain {
            s.insert(p);
        }
        if s.is_empty() {
            s.insert(*PRIME_POOL.choose(&mut self.rng).unwrap());
        }
        s
    }

    pub fn rand_level(&mut self, dense_only: bool, ensure_div: Option<u64>) -> LevelDescriptor {
        let g = self.rand_gen_value();
        if let Some(p) = ensure_div {
            return if self.rng.random_bool(0.3) {
                LevelDescriptor::FullRationals
            } else {
                LevelDescriptor::Localized(g, self.rand_prime_set(Some(p)))
            };
        }
        let kind = if dense_only {
            self.rng.random_range(1..3)
        } else {
            self.rng.random_range(0..3)
        };
        match kind {
            0 => LevelDescriptor::Cyclic(g),
            1 => LevelDescriptor::Localized(g, self.rand_prime_set(None)),
            _ => LevelDescriptor::FullRationals,
        }
    }

    pub fn rand_group(&mut self, max_rank: usize) -> OrderedGroup {
        let rank = self.rng.random_range(1..=max_rank.max(1));
        let levels = (0..rank).map(|_| self.rand_level(false, None)).collect();
        OrderedGroup::new(levels).unwrap()
    }

    pub fn rand_dense_group(&mut self, max_rank: usize) -> OrderedGroup {
        let rank = self.rng.random_range(1..=max_rank.max(1));
        let levels = (0..rank).map(|_| self.rand_level(true, None)).collect();
        OrderedGroup::new(levels).unwrap()
    }

    pub fn rand_level_member(&mut self, level: &LevelDescriptor) -> Rat {
        let k = rat_int(self.rng.random_range(-6..=6));
        match level {
            LevelDescriptor::Zero => Rat::zero(),
            LevelDescriptor::Cyclic(g) => g * k,
            LevelDescriptor::Localized(g, s) => {
                let primes: Vec<u64> = s.iter().copied().collect();
                let p = *primes.choose(&mut self.rng).unwrap();
                let e = self.rng.random_range(0..=2);
                let denom = rat_u64(p.pow(e));
                g * k / denom
            }
            LevelDescriptor::FullRationals => {
                let d = rat_int(self.rng.random_range(1..=6));
                k / d
            }
        }
    }

    pub fn rand_element(&mut self, group: &OrderedGroup) -> GroupElement {
        let coords = group
            .levels()
            .iter()
            .map(|l| self.rand_level_member(l))
            .collect();
        group.element(coords).unwrap()
    }

    pub fn rand_positive_element(&mut self, group: &OrderedGroup) -> GroupElement {
        loop {
            let el = self.rand_element(group);
            if el.is_positive() {
                return el;
            }
        }
    }

    /// A positive element supported at a single level.
    fn positive_at_level(&mut self, group: &OrderedGroup, level: usize) -> GroupElement {
        let mut coords = vec![Rat::zero(); group.rank()];
        let l = group.level(level);
        loop {
            let x = self.rand_level_member(l);
            if x > Rat::zero() {
                coords[level] = x;
                return group.element(coords).unwrap();
            }
        }
    }

    /// A level at which the group is not q-divisible, chosen at random.
    fn non_divisible_level(&mut self, group: &OrderedGroup, q: u64) -> Option<usize> {
        let candidates: Vec<usize> = (0..group.rank())
            .filter(|&i| !group.level(i).is_n_divisible(q))
            .collect();
        candidates.choose(&mut self.rng).copied()
    }

    /// A positive member of the level whose numerator is prime to q, so it
    /// stays outside the level after division by q.
    fn non_divisible_positive_member(&mut self, level: &LevelDescriptor, q: u64) -> Rat {
        loop {
            let k = self.rng.random_range(1..=6u64);
            if k % q != 0 {
                let scale = rat_u64(k);
                return match level {
                    LevelDescriptor::Cyclic(g) => g * &scale,
                    LevelDescriptor::Localized(g, s) => {
                        let primes: Vec<u64> = s.iter().copied().collect();
                        let sp = *primes.choose(&mut self.rng).unwrap();
                        let e = self.rng.random_range(0..=2u32);
                        g * &scale / rat_u64(sp.pow(e))
                    }
                    _ => unreachable!("divisible levels are filtered out"),
                };
            }
        }
    }

    /// Like `new_value` but guaranteed negative: the pure new coordinate is
    /// taken negative and any translation subtracts a positive element,
    /// which keeps the sum of negatives negative.
    pub fn new_negative_value(&mut self, group: &OrderedGroup, q: u64) -> Option<Coords> {
        let lead = self.non_divisible_level(group, q)?;
        let x = self.non_divisible_positive_member(group.level(lead), q);
        let mut coords = vec![Rat::zero(); group.rank()];
        coords[lead] = -(x / rat_u64(q));
        let mut delta = Coords(coords);
        if self.rng.random_bool(0.5) {
            let shift = self.rand_positive_element(group);
            delta = &delta - shift.coords();
        }
        debug_assert!(delta.is_negative());
        debug_assert!(!group.contains(&delta));
        Some(delta)
    }

    /// A new value delta with q*delta in the group but delta outside it,
    /// leading at a level where the group is not q-divisible; `None` when
    /// the whole group is q-divisible.
    pub fn new_value(&mut self, group: &OrderedGroup, q: u64) -> Option<Coords> {
        let lead = self.non_divisible_level(group, q)?;
        let x = self.non_divisible_positive_member(group.level(lead), q);
        let mut coords = vec![Rat::zero(); group.rank()];
        coords[lead] = x / rat_u64(q);
        let mut delta = Coords(coords);
        if self.rng.random_bool(0.5) {
            delta = delta.scale_int(-1);
        }
        // translating by a group element preserves both constraints
        if self.rng.random_bool(0.5) {
            let shift = self.rand_element(group);
            delta = &delta + shift.coords();
        }
        debug_assert!(!group.contains(&delta));
        Some(delta)
    }

    /// A random valid prime-degree extension descriptor, mixing all the
    /// classification cases.
    pub fn rand_extension(&mut self) -> PrimeExtension {
        use builders::*;
        for _ in 0..64 {
            let p = *[2u64, 3, 5].choose(&mut self.rng).unwrap();
            let variant = self.rng.random_range(0..11);
            let ext = match variant {
                0 => {
                    let g = self.rand_group(3);
                    as_inertial(&g, p, g.zero()).ok()
                }
                1 => {
                    let g = self.rand_group(3);
                    let vt = self.rand_positive_element(&g).neg();
                    as_inertial(&g, p, vt).ok()
                }
                2 => {
                    let g = self.rand_group(3);
                    self.new_negative_value(&g, p)
                        .and_then(|d| as_ramified(&g, p, d, None).ok())
                }
                3 => {
                    let g = self.rand_group(3);
                    let flag = self.rng.random_bool(0.5);
                    Some(as_defect(&g, p, Some(flag)))
                }
                4 => {
                    let pool: Vec<u64> = [2u64, 3, 5].iter().copied().filter(|&q| q != p).collect();
                    let q = *pool.choose(&mut self.rng).unwrap();
                    let g = self.rand_group(3);
                    self.new_value(&g, q)
                        .and_then(|d| kummer_ramified_tame(&g, q, p, d).ok())
                }
                5 => {
                    let pool: Vec<u64> = [2u64, 3, 5].iter().copied().filter(|&q| q != p).collect();
                    let q = *pool.choose(&mut self.rng).unwrap();
                    let g = self.rand_group(3);
                    kummer_inertial_tame(&g, q, p).ok()
                }
                6 => {
                    // mixed f = p, unit residue generator
                    let (g, vp) = self.rand_mixed_base(p);
                    kummer_inertial_unit(&g, p, vp).ok()
                }
                7 => {
                    // mixed f = p, one-unit generator, separable or not
                    let (g, vp) = self.rand_mixed_base(p);
                    let gap = vp.coords().scale_rat(&(Rat::one() / rat_u64(p - 1)));
                    let ve = if self.rng.random_bool(0.5) {
                        gap
                    } else {
                        gap.scale_rat(&rat(1, 2))
                    };
                    if g.contains(&ve) {
                        kummer_inertial_one_unit(&g, p, vp, ve).ok()
                    } else {
                        None
                    }
                }
                8 => {
                    // mixed e = p, radical generator
                    let (g, vp) = self.rand_mixed_base(p);
                    self.new_value(&g, p)
                        .and_then(|d| kummer_ramified_wild(&g, p, vp, d, None).ok())
                }
                9 => {
                    // mixed e = p, one-unit generator: v(xi) = -x/p at a
                    // non-p-divisible level, gap = vp/(p-1) = x above it,
                    // so v(eta-1) = gap + v(xi) = x(p-1)/p is positive,
                    // below the gap, and outside vK
                    let g = self.rand_group(3);
                    self.non_divisible_level(&g, p).and_then(|lead| {
                        let x = self.non_divisible_positive_member(g.level(lead), p);
                        let mut gap = Coords::zero(g.rank());
                        gap.0[lead] = x;
                        let xi = gap.scale_rat(&rat(-1, p as i64));
                        let ve = &gap + &xi;
                        g.element(gap.scale_int(p as i64 - 1).0)
                            .ok()
                            .and_then(|vp| kummer_ramified_one_unit(&g, p, vp, ve, None).ok())
                    })
                }
                _ => {
                    let (g, vp) = self.rand_mixed_base(p);
                    let flag = self.rng.random_bool(0.5);
                    Some(kummer_defect(&g, p, vp, Some(flag)))
                }
            };
            if let Some(ext) = ext {
                if crate::extensions::validate(&ext).is_empty() {
                    return ext;
                }
            }
        }
        // guaranteed fallback
        builders::as_inertial(&builders::group_z(), 2, builders::group_z().zero()).unwrap()
    }

    /// A group together with a value of p chosen so that vp/(p-1) lies in
    /// the group (vp is (p-1) times a positive element).
    fn rand_mixed_base(&mut self, p: u64) -> (OrderedGroup, GroupElement) {
        let g = self.rand_group(3);
        let y = self.rand_positive_element(&g);
        let vp = y.scale(p as i64 - 1);
        (g, vp)
    }

    pub fn rand_tower(&mut self, max_len: usize) -> TowerDescriptor {
        use crate::extensions::{GeneratedBy, ResidueData};
        let len = self.rng.random_range(1..=max_len.max(1));
        let mut steps = Vec::with_capacity(len);
        for i in 0..len {
            if i == 0 && self.rng.random_bool(0.4) {
                steps.push(TowerStep::Inertial {
                    residue: ResidueData {
                        residue_char: 3,
                        degree_f: self.rng.random_range(2..=4),
                        separable: true,
                        generated_by: GeneratedBy::UnitResidue,
                    },
                });
            } else {
                steps.push(TowerStep::Prime(self.rand_extension()));
            }
        }
        TowerDescriptor { steps }
    }

    /// A field descriptor guaranteed to violate at least one of the
    /// deeply-ramified conditions.
    pub fn rand_violating_field(&mut self) -> FieldDescriptor {
        let p = *[2u64, 3, 5].choose(&mut self.rng).unwrap();
        let mixed = self.rng.random_bool(0.5);
        let which = self.rng.random_range(0..4);
        // start from a compliant dense, p-divisible shape and break one
        // aspect of it
        let rank = self.rng.random_range(1..=3);
        let mut levels: Vec<LevelDescriptor> =
            (0..rank).map(|_| self.rand_level(true, Some(p))).collect();
        let mut residue_perfect = true;
        let mut independent = true;
        match which {
            0 => {
                let i = self.rng.random_range(0..rank);
                levels[i] = LevelDescriptor::Cyclic(self.rand_gen_value());
            }
            1 => {
                // not p-divisible at the vp part: strip p from a suffix level
                let i = rank - 1;
                levels[i] = LevelDescriptor::Localized(
                    self.rand_gen_value(),
                    PRIME_POOL
                        .iter()
                        .copied()
                        .filter(|&x| x != p)
                        .take(2)
                        .collect(),
                );
            }
            2 => residue_perfect = false,
            _ => independent = false,
        }
        let group = OrderedGroup::new(levels).unwrap();
        let vp = mixed.then(|| {
            let y = self.rand_positive_element(&group);
            y.scale(p as i64 - 1)
        });
        FieldDescriptor {
            char_k: if mixed { 0 } else { p },
            residue_char: p,
            value_group: group,
            vp_element: vp,
            residue_perfect,
            contains_zeta_p: true,
            independent_defect_field: independent,
            drvr_flag: None,
        }
    }

    /// A deeply ramified field descriptor: dense levels, p-divisible at the
    /// convex subgroup of vp, perfect residue field, independent defect.
    pub fn rand_dr_field(&mut self) -> FieldDescriptor {
        let p = *[2u64, 3, 5].choose(&mut self.rng).unwrap();
        let mixed = self.rng.random_bool(0.5);
        if mixed {
            let rank = self.rng.random_range(1..=3);
            let ip = self.rng.random_range(0..rank);
            let mut levels = Vec::with_capacity(rank);
            for i in 0..rank {
                if i < ip {
                    // above the convex subgroup of vp: dense, p optional
                    levels.push(self.rand_level(true, None));
                } else {
                    levels.push(self.rand_level(true, Some(p)));
                }
            }
            let group = OrderedGroup::new(levels).unwrap();
            let y = self.positive_at_level(&group, ip);
            let vp = y.scale(p as i64 - 1);
            FieldDescriptor {
                char_k: 0,
                residue_char: p,
                value_group: group,
                vp_element: Some(vp),
                residue_perfect: true,
                contains_zeta_p: true,
                independent_defect_field: true,
                drvr_flag: None,
            }
        } else {
            let rank = self.rng.random_range(1..=3);
            let levels = (0..rank).map(|_| self.rand_level(true, Some(p))).collect();
            FieldDescriptor {
                char_k: p,
                residue_char: p,
                value_group: OrderedGroup::new(levels).unwrap(),
                vp_element: None,
                residue_perfect: true,
                contains_zeta_p: true,
                independent_defect_field: true,
                drvr_flag: None,
            }
        }
    }

    /// Degree-p extension descriptors over a deeply ramified field,
    /// respecting the constraints its conditions impose: in equal
    /// characteristic the value group is p-divisible and the residue field
    /// perfect, so only separable inertial and independent-defect shapes
    /// occur; in mixed characteristic the one-unit inertial shape is
    /// separable and radical generators lead above the convex subgroup
    /// of vp.
    pub fn dr_family(
        &mut self,
        f: &FieldDescriptor,
        count: usize,
    ) -> Result<Vec<PrimeExtension>, GenError> {
        use builders::*;
        let p = f.residue_char;
        let g = &f.value_group;
        let mut out = Vec::with_capacity(count);
        if f.char_k != 0 {
            for _ in 0..count {
                if self.rng.random_bool(0.5) {
                    out.push(as_inertial(g, p, g.zero()).unwrap());
                } else {
                    out.push(as_defect(g, p, Some(true)));
                }
            }
            return Ok(out);
        }
        if !f.contains_zeta_p {
            return Err(GenError::MissingZetaP);
        }
        let vp = f
            .vp_element
            .clone()
            .ok_or_else(|| GenError::Failed("mixed characteristic requires vp".into()))?;
        let gap = vp.coords().scale_rat(&(Rat::one() / rat_u64(p - 1)));
        let gap_inside = g.contains(&gap);
        let ip = f.vp_suffix_start();
        let ramified_levels: Vec<usize> =
            (0..ip).filter(|&i| !g.level(i).is_n_divisible(p)).collect();
        for _ in 0..count {
            let mut choices: Vec<u32> = vec![2];
            if gap_inside {
                choices.push(0);
            }
            if !ramified_levels.is_empty() {
                choices.push(1);
            }
            match *choices.choose(&mut self.rng).unwrap() {
                0 => out.push(kummer_inertial_one_unit(g, p, vp.clone(), gap.clone()).unwrap()),
                1 => {
                    let &lead = ramified_levels.choose(&mut self.rng).unwrap();
                    let base = self.positive_at_level(g, lead);
                    let delta = base.coords().scale_rat(&(Rat::one() / rat_u64(p)));
                    if g.contains(&delta) {
                        // the sampled coordinate happened to be p-divisible
                        out.push(kummer_defect(g, p, vp.clone(), Some(true)));
                    } else {
                        out.push(kummer_ramified_wild(g, p, vp.clone(), delta, None).unwrap());
                    }
                }
                _ => out.push(kummer_defect(g, p, vp.clone(), Some(true))),
            }
        }
        Ok(out)
    }
}
