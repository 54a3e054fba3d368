//! Value sets of the valuation-ring ideals that the classification
//! produces: upward closures of the positive part of a shifted coset.

use std::fmt;

use num_traits::{One, Zero};

use super::adjoined::{AdjoinedGroup, ExtValue};
use super::coords::Coords;
use super::group::ConvexSubgroup;
use super::GroupError;
use crate::rational::Rat;

/// Which generator family the ideal records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealShape {
    /// Generators `c*x` with `v(cx) > 0`: value set is the upward closure
    /// of the positive part of `offset + base`.
    CosetPositive,
    /// Generators `c*x^(j-1)` with `v(c*x^j) > 0`: the generator values
    /// form `((j-1)*vx + base)` above the threshold `-vx`.
    ShiftedPower { j: u32 },
}

/// The value set of an ideal of the extension's valuation ring, stored
/// symbolically as (coset shift, threshold) rather than by materializing
/// elements. All queries reduce to per-level coset arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealValueSet {
    ambient: AdjoinedGroup,
    offset: Coords,
    threshold: Coords,
    shape: IdealShape,
}

impl IdealValueSet {
    /// The ideal generated in values by the positive part of
    /// `offset + base` inside the ambient group.
    pub fn new(ambient: AdjoinedGroup, offset: Coords) -> Result<Self, GroupError> {
        if !ambient.contains(&offset) {
            return Err(GroupError::OffsetOutsideAmbient);
        }
        let threshold = Coords::zero(ambient.rank());
        Ok(IdealValueSet {
            ambient,
            offset,
            threshold,
            shape: IdealShape::CosetPositive,
        })
    }

    /// The ideal with generator values `(j-1)*vx + vc` subject to
    /// `j*vx + vc > 0`, i.e. the coset of `(j-1)*vx` above `-vx`.
    pub fn shifted_power(
        ambient: AdjoinedGroup,
        x_value: &Coords,
        j: u32,
    ) -> Result<Self, GroupError> {
        if j == 0 {
            return Err(GroupError::BadLevel("power index j must be >= 1".into()));
        }
        let offset = x_value.scale_int(j as i64 - 1);
        if !ambient.contains(&offset) {
            return Err(GroupError::OffsetOutsideAmbient);
        }
        let threshold = -x_value;
        Ok(IdealValueSet {
            ambient,
            offset,
            threshold,
            shape: IdealShape::ShiftedPower { j },
        })
    }

    pub fn ambient(&self) -> &AdjoinedGroup {
        &self.ambient
    }

    pub fn offset(&self) -> &Coords {
        &self.offset
    }

    pub fn threshold(&self) -> &Coords {
        &self.threshold
    }

    pub fn shape(&self) -> IdealShape {
        self.shape
    }

    /// First level at which the offset leaves the base level group;
    /// `None` when the offset lies in the base.
    fn offset_lead(&self) -> Option<usize> {
        self.offset
            .0
            .iter()
            .zip(self.ambient.base().levels().iter())
            .position(|(d, l)| !l.contains(d))
    }

    /// Nonempty whenever the defining coset meets the region above the
    /// threshold; automatic for nontrivial base groups.
    pub fn is_empty(&self) -> bool {
        !self
            .ambient
            .base()
            .coset_nonempty_above(&self.offset, &self.threshold)
    }

    /// Upward-closure membership: `x` lies in the value set iff some
    /// generator value `y` satisfies `threshold < y <= x`.
    pub fn contains(&self, x: &ExtValue) -> Result<bool, GroupError> {
        if x.group() != &self.ambient {
            return Err(GroupError::GroupMismatch);
        }
        Ok(self
            .ambient
            .base()
            .coset_meets_half_open(&self.offset, &self.threshold, x.coords()))
    }

    /// Does the value set meet the convex subgroup given as a suffix of the
    /// ambient group? An upward-closure element lies in the suffix iff some
    /// generator does, so this reduces to a coset test.
    pub fn intersects_convex(&self, c: &ConvexSubgroup) -> Result<bool, GroupError> {
        if c.group() != self.ambient.base() {
            return Err(GroupError::GroupMismatch);
        }
        Ok(self.intersects_suffix(c.start_level()))
    }

    pub(crate) fn intersects_suffix(&self, start: usize) -> bool {
        let rank = self.ambient.rank();
        if start >= rank {
            // the trivial subgroup misses every positive value
            return false;
        }
        // a generator vanishing below `start` needs the offset to be
        // cancellable there
        for i in 0..start {
            if !self.ambient.base().level(i).contains(self.offset.get(i)) {
                return false;
            }
        }
        // and the threshold must not already dominate the whole suffix
        !matches!(self.threshold.first_nonzero(),
            Some(t0) if t0 < start && self.threshold.is_positive())
    }

    /// The levels at which an isolated generator class exists: levels l
    /// achievable as the leading level of a generator value y with the
    /// value set missing the convex subgroup above y. In this model the
    /// set is a single level.
    pub fn isolated_levels(&self) -> Vec<usize> {
        let rank = self.ambient.rank();
        if rank == 0 {
            return Vec::new();
        }
        let lead = self.offset_lead().unwrap_or(rank);
        let t_cap = match self.threshold.first_nonzero() {
            Some(t0) if self.threshold.is_positive() => t0,
            _ => rank,
        };
        let mut out = Vec::new();
        for l in 0..rank {
            let achievable = l <= lead && l <= t_cap;
            if achievable && !self.intersects_suffix(l + 1) {
                out.push(l);
            }
        }
        out
    }

    /// A generator value witnessing the deepest isolated class, together
    /// with all achievable witness levels. Errors when the value set is
    /// empty (trivial base).
    pub fn exists_isolated_class(&self) -> Result<Option<ExtValue>, GroupError> {
        if self.is_empty() {
            return Err(GroupError::EmptyValueSet);
        }
        let levels = self.isolated_levels();
        let Some(&l) = levels.last() else {
            return Ok(None);
        };
        Ok(Some(self.witness_at_level(l)?))
    }

    /// Builds a concrete generator value with leading level `l`.
    fn witness_at_level(&self, l: usize) -> Result<ExtValue, GroupError> {
        let rank = self.ambient.rank();
        let mut coords = Vec::with_capacity(rank);
        for _ in 0..l {
            coords.push(Rat::zero());
        }
        // leading coordinate: a positive coset element clearing the
        // threshold at this level
        let level = self.ambient.base().level(l);
        let shift = self.offset.get(l);
        let bound = {
            let t = self.threshold.get(l);
            if t > &Rat::zero() {
                t.clone()
            } else {
                Rat::zero()
            }
        };
        let lead_coord = match level.coset_min_above(shift, &bound) {
            Some(y) => y,
            None => pick_dense_above(level, shift, &bound),
        };
        coords.push(lead_coord);
        for i in (l + 1)..rank {
            coords.push(self.offset.get(i).clone());
        }
        self.ambient.element(Coords(coords))
    }
}

/// Some element of `shift + L` strictly above `bound` for a dense level:
/// scan shift + k*g upward; g > 0 guarantees termination.
fn pick_dense_above(level: &super::level::LevelDescriptor, shift: &Rat, bound: &Rat) -> Rat {
    use super::level::LevelDescriptor;
    let g = match level {
        LevelDescriptor::Localized(g, _) => g.clone(),
        LevelDescriptor::FullRationals => Rat::one(),
        _ => unreachable!("dense levels only"),
    };
    let mut y = shift.clone();
    while y <= *bound {
        y += &g;
    }
    y
}

impl fmt::Display for IdealValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape {
            IdealShape::CosetPositive => {
                write!(f, "up-closure of ({} + base)>0", self.offset)
            }
            IdealShape::ShiftedPower { j } => write!(
                f,
                "up-closure of ({} + base) above {} (power index {})",
                self.offset, self.threshold, j
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordered_groups::{LevelDescriptor, OrderedGroup};
    use crate::rational::{rat, rat_int};

    fn z() -> LevelDescriptor {
        LevelDescriptor::Cyclic(rat_int(1))
    }

    fn z_inv(p: u64) -> LevelDescriptor {
        LevelDescriptor::Localized(rat_int(1), [p].into_iter().collect())
    }

    fn simple_ideal(levels: Vec<LevelDescriptor>, delta: Vec<Rat>, q: u64) -> IdealValueSet {
        let base = OrderedGroup::new(levels).unwrap();
        let ag = AdjoinedGroup::new(base, Coords(delta.clone()), q).unwrap();
        IdealValueSet::new(ag, Coords(delta)).unwrap()
    }

    #[test]
    fn rank_one_discrete() {
        // base Z, offset 1/2: value set is {g in (1/2)Z : g >= 1/2}
        let i = simple_ideal(vec![z()], vec![rat(1, 2)], 2);
        let amb = i.ambient().clone();
        let member = |x: Rat| i.contains(&amb.element(Coords(vec![x])).unwrap()).unwrap();
        assert!(member(rat(1, 2)));
        assert!(member(rat_int(1)));
        assert!(member(rat(7, 2)));
        assert!(!member(rat_int(0)));
        assert!(!member(rat(-1, 2)));
        // isolated witness is 1/2 with trivial convex subgroup above it
        let w = i.exists_isolated_class().unwrap().unwrap();
        assert_eq!(w.coords(), &Coords(vec![rat(1, 2)]));
        assert_eq!(i.isolated_levels(), vec![0]);
    }

    #[test]
    fn rank_two_dense_lead() {
        // base Z[1/2] x (1/2)Z (illustration with p = 3), offset (1/3, 0)
        let i = simple_ideal(
            vec![z_inv(2), LevelDescriptor::Cyclic(rat(1, 2))],
            vec![rat(1, 3), rat_int(0)],
            3,
        );
        let amb = i.ambient().clone();
        // membership is "positive level-0 coordinate"
        let m = |x: Vec<Rat>| i.contains(&amb.element(Coords(x)).unwrap()).unwrap();
        assert!(m(vec![rat(1, 3), rat_int(-5)]));
        assert!(m(vec![rat(5, 6), rat_int(0)]));
        assert!(!m(vec![rat_int(0), rat(7, 2)]));
        // no generator sits inside the level-1 suffix
        assert!(!i.intersects_suffix(1));
        assert!(i.intersects_suffix(0));
        assert_eq!(i.isolated_levels(), vec![0]);
        let w = i.exists_isolated_class().unwrap().unwrap();
        assert_eq!(w.first_nonzero_level(), Some(0));
        assert!(w.is_positive());
    }

    #[test]
    fn offset_inside_dense_base() {
        // offset in the base, base dense: all positives of the extension
        let base = OrderedGroup::new(vec![z_inv(2)]).unwrap();
        let ag = AdjoinedGroup::new(base, Coords(vec![rat(1, 3)]), 3).unwrap();
        let i = IdealValueSet::new(ag.clone(), Coords(vec![rat(4, 3)])).unwrap();
        // (4/3 - 1/3 = 1 lies in the base, so the coset is delta + base)
        let m = |x: Rat| i.contains(&ag.element(Coords(vec![x])).unwrap()).unwrap();
        assert!(m(rat(1, 3)));
        assert!(m(rat(1, 2)));
        assert!(m(rat(1, 1024)));
        assert!(!m(rat_int(0)));
        assert!(!m(rat(-1, 3)));
    }

    #[test]
    fn intersects_convex_examples() {
        let p = 5i64;
        // offset (1/5, 0) over Z[1/2] x (1/(p-1))Z misses suffix(1)
        let i = simple_ideal(
            vec![z_inv(2), LevelDescriptor::Cyclic(rat(1, p - 1))],
            vec![rat(1, 5), rat_int(0)],
            5,
        );
        let c1 = i.ambient().base().convex_suffix(1).unwrap();
        assert!(!i.intersects_convex(&c1).unwrap());
        // whole group always intersects
        let c0 = i.ambient().base().convex_suffix(0).unwrap();
        assert!(i.intersects_convex(&c0).unwrap());
        // offset (0, 1/3) over Z[1/2] x Z[1/3] already lies in the suffix
        let i2 = simple_ideal(vec![z_inv(2), z_inv(3)], vec![rat_int(0), rat(1, 3)], 3);
        let c = i2.ambient().base().convex_suffix(1).unwrap();
        assert!(i2.intersects_convex(&c).unwrap());
    }

    #[test]
    fn isolated_class_with_offset_inside_dense_base() {
        // rank-one dense base, offset inside: the witness exists since the
        // trivial convex subgroup above it misses all positives
        let base = OrderedGroup::new(vec![z_inv(2)]).unwrap();
        let ag = AdjoinedGroup::new(base, Coords(vec![rat(1, 3)]), 3).unwrap();
        let i = IdealValueSet::new(ag, Coords(vec![rat(3, 2)])).unwrap();
        let w = i.exists_isolated_class().unwrap();
        assert!(w.is_some());
        assert!(w.unwrap().is_positive());
        assert_eq!(i.isolated_levels(), vec![0]);
    }

    #[test]
    fn shifted_power_threshold() {
        // AS-style ideal over Z with v(theta) = -1/2, j = 1: generator
        // values are Z above 1/2, i.e. {1, 2, ...}
        let base = OrderedGroup::new(vec![z()]).unwrap();
        let ag = AdjoinedGroup::new(base, Coords(vec![rat(-1, 2)]), 2).unwrap();
        let i = IdealValueSet::shifted_power(ag.clone(), &Coords(vec![rat(-1, 2)]), 1).unwrap();
        let m = |x: Rat| i.contains(&ag.element(Coords(vec![x])).unwrap()).unwrap();
        assert!(m(rat_int(1)));
        assert!(m(rat(3, 2)));
        assert!(!m(rat(1, 2)));
        assert!(!m(rat_int(0)));
        assert_eq!(i.isolated_levels(), vec![0]);
    }

    #[test]
    fn upward_closure_property() {
        let i = simple_ideal(
            vec![z_inv(2), LevelDescriptor::Cyclic(rat(1, 4))],
            vec![rat(1, 3), rat_int(0)],
            3,
        );
        let amb = i.ambient().clone();
        let x = amb.element(Coords(vec![rat(1, 3), rat(1, 2)])).unwrap();
        assert!(i.contains(&x).unwrap());
        // anything above a member stays a member
        let bigger = amb.element(Coords(vec![rat(4, 3), rat(-3, 4)])).unwrap();
        assert!(bigger.compare(&x).unwrap() == std::cmp::Ordering::Greater);
        assert!(i.contains(&bigger).unwrap());
    }
}
