//! Prime-index extensions of a value group obtained by adjoining one new
//! value: the value group of a maximally ramified prime-degree extension.

use std::cmp::Ordering;
use std::fmt;

use super::coords::Coords;
use super::group::{GroupElement, OrderedGroup};
use super::level::LevelDescriptor;
use super::GroupError;
use crate::rational::is_prime;

/// The group `base + Z*delta` with `q*delta` in `base`, q prime, ordered
/// as a subgroup of the divisible hull of `base`.
///
/// The first level at which `delta` leaves its level group (the `lead`)
/// controls everything: archimedean components agree with those of the
/// base except at the lead, where the component gains index q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjoinedGroup {
    base: OrderedGroup,
    delta: Coords,
    order: u64,
    lead: Option<usize>,
}

impl AdjoinedGroup {
    pub fn new(base: OrderedGroup, delta: Coords, q: u64) -> Result<Self, GroupError> {
        if !is_prime(q) {
            return Err(GroupError::NotPrime(q));
        }
        if delta.len() != base.rank() {
            return Err(GroupError::DimensionMismatch {
                got: delta.len(),
                want: base.rank(),
            });
        }
        let q_delta = delta.scale_int(q as i64);
        if !base.contains(&q_delta) {
            return Err(GroupError::AdjoinOutsideBase);
        }
        let lead = delta
            .0
            .iter()
            .zip(base.levels().iter())
            .position(|(d, l)| !l.contains(d));
        Ok(AdjoinedGroup {
            base,
            delta,
            order: q,
            lead,
        })
    }

    /// The degenerate extension by nothing: the base group viewed as its own
    /// adjoined group.
    pub fn identity(base: OrderedGroup) -> Self {
        let delta = Coords::zero(base.rank());
        AdjoinedGroup {
            base,
            delta,
            order: 2,
            lead: None,
        }
    }

    pub fn base(&self) -> &OrderedGroup {
        &self.base
    }

    pub fn delta(&self) -> &Coords {
        &self.delta
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// First level at which `delta` is new; `None` when `delta` already
    /// lies in the base.
    pub fn lead(&self) -> Option<usize> {
        self.lead
    }

    /// The group index `(base + Z*delta : base)`.
    pub fn index(&self) -> u64 {
        if self.lead.is_some() {
            self.order
        } else {
            1
        }
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    pub fn contains(&self, x: &Coords) -> bool {
        if x.len() != self.rank() {
            return false;
        }
        (0..self.order).any(|k| {
            let shifted = x - &self.delta.scale_int(k as i64);
            self.base.contains(&shifted)
        })
    }

    pub fn element(&self, coords: Coords) -> Result<ExtValue, GroupError> {
        if !self.contains(&coords) {
            return Err(GroupError::OffsetOutsideAmbient);
        }
        Ok(ExtValue {
            coords,
            group: self.clone(),
        })
    }

    pub fn from_base(&self, el: &GroupElement) -> Result<ExtValue, GroupError> {
        if el.group() != &self.base {
            return Err(GroupError::GroupMismatch);
        }
        self.element(el.coords().clone())
    }

    pub fn zero(&self) -> ExtValue {
        ExtValue {
            coords: Coords::zero(self.rank()),
            group: self.clone(),
        }
    }

    /// Archimedean component of the extension at a given level: the base
    /// level except at the lead, where the new value divides the component.
    pub fn level_component(&self, i: usize) -> LevelDescriptor {
        match self.lead {
            Some(l) if l == i => self
                .base
                .level(i)
                .adjoin(self.delta.get(i), self.order)
                .expect("lead level adjunction is well defined"),
            _ => self.base.level(i).clone(),
        }
    }

    /// Number of distinct cosets of the base among `k*delta`, `0 <= k < q`.
    pub fn coset_count(&self) -> u64 {
        let mut count = 0;
        for k in 0..self.order {
            let kd = self.delta.scale_int(k as i64);
            let distinct = (0..k).all(|j| {
                let jd = self.delta.scale_int(j as i64);
                !self.base.contains(&(&kd - &jd))
            });
            if distinct {
                count += 1;
            }
        }
        count
    }
}

impl fmt::Display for AdjoinedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + Z*{}", self.base, self.delta)
    }
}

/// A value in an [`AdjoinedGroup`]: an element of the extended value group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtValue {
    coords: Coords,
    group: AdjoinedGroup,
}

impl ExtValue {
    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn group(&self) -> &AdjoinedGroup {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.coords.is_positive()
    }

    pub fn compare(&self, other: &ExtValue) -> Result<Ordering, GroupError> {
        if self.group != other.group {
            return Err(GroupError::GroupMismatch);
        }
        Ok(self.coords.lex_cmp(&other.coords))
    }

    pub fn first_nonzero_level(&self) -> Option<usize> {
        self.coords.first_nonzero()
    }

    /// Archimedean component of the extended group at this value.
    pub fn arch_component(&self) -> Result<LevelDescriptor, GroupError> {
        let i = self.coords.first_nonzero().ok_or(GroupError::ZeroElement)?;
        Ok(self.group.level_component(i))
    }
}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other).ok()
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn z() -> LevelDescriptor {
        LevelDescriptor::Cyclic(rat_int(1))
    }

    fn z_inv(p: u64) -> LevelDescriptor {
        LevelDescriptor::Localized(rat_int(1), [p].into_iter().collect())
    }

    #[test]
    fn adjoin_z_half() {
        let base = OrderedGroup::new(vec![z()]).unwrap();
        let ag = AdjoinedGroup::new(base, Coords(vec![rat(1, 2)]), 2).unwrap();
        assert_eq!(ag.index(), 2);
        assert_eq!(ag.coset_count(), 2);
        assert!(ag.contains(&Coords(vec![rat(3, 2)])));
        assert!(ag.contains(&Coords(vec![rat_int(-4)])));
        assert!(!ag.contains(&Coords(vec![rat(1, 4)])));
    }

    #[test]
    fn adjoin_already_inside() {
        let base = OrderedGroup::new(vec![z_inv(5)]).unwrap();
        let ag = AdjoinedGroup::new(base, Coords(vec![rat(1, 5)]), 5).unwrap();
        assert_eq!(ag.index(), 1);
        assert_eq!(ag.coset_count(), 1);
        assert_eq!(ag.lead(), None);
    }

    #[test]
    fn adjoin_index_three_rank_two() {
        let base = OrderedGroup::new(vec![z_inv(2), LevelDescriptor::Cyclic(rat(1, 2))]).unwrap();
        let ag = AdjoinedGroup::new(base, Coords(vec![rat(1, 3), rat_int(0)]), 3).unwrap();
        assert_eq!(ag.index(), 3);
        assert_eq!(ag.coset_count(), 3);
        assert_eq!(ag.lead(), Some(0));
        assert_eq!(
            ag.level_component(0),
            LevelDescriptor::Localized(rat(1, 3), [2].into_iter().collect())
        );
        assert_eq!(ag.level_component(1), LevelDescriptor::Cyclic(rat(1, 2)));
    }

    #[test]
    fn adjoin_rejects_bad_delta() {
        let base = OrderedGroup::new(vec![z()]).unwrap();
        assert_eq!(
            AdjoinedGroup::new(base.clone(), Coords(vec![rat(1, 4)]), 2),
            Err(GroupError::AdjoinOutsideBase)
        );
        assert_eq!(
            AdjoinedGroup::new(base, Coords(vec![rat(1, 4)]), 4),
            Err(GroupError::NotPrime(4))
        );
    }

    #[test]
    fn ext_value_components() {
        let base = OrderedGroup::new(vec![z_inv(2), LevelDescriptor::Cyclic(rat(1, 4))]).unwrap();
        let ag = AdjoinedGroup::new(base, Coords(vec![rat(1, 5), rat_int(0)]), 5).unwrap();
        let v = ag.element(Coords(vec![rat(1, 5), rat(1, 2)])).unwrap();
        assert_eq!(
            v.arch_component().unwrap(),
            LevelDescriptor::Localized(rat(1, 5), [2].into_iter().collect())
        );
        let w = ag.element(Coords(vec![rat_int(0), rat(3, 4)])).unwrap();
        assert_eq!(
            w.arch_component().unwrap(),
            LevelDescriptor::Cyclic(rat(1, 4))
        );
    }
}
