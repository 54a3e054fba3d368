//! Lexicographic products, their elements and convex subgroups.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::coords::Coords;
use super::level::LevelDescriptor;
use super::GroupError;
use crate::rational::{format_rat, Rat};

/// A finite lexicographic product of nontrivial subgroups of Q, most
/// significant level first. Zero levels given on construction are
/// normalized away. The convex subgroups are exactly the suffixes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedGroup {
    levels: Arc<Vec<LevelDescriptor>>,
}

impl OrderedGroup {
    pub fn new(levels: Vec<LevelDescriptor>) -> Result<Self, GroupError> {
        for l in &levels {
            l.validate()?;
        }
        let levels: Vec<LevelDescriptor> = levels.into_iter().filter(|l| !l.is_trivial()).collect();
        Ok(OrderedGroup {
            levels: Arc::new(levels),
        })
    }

    pub fn trivial() -> Self {
        OrderedGroup {
            levels: Arc::new(Vec::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.levels.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[LevelDescriptor] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &LevelDescriptor {
        &self.levels[i]
    }

    pub fn contains(&self, coords: &Coords) -> bool {
        coords.len() == self.rank()
            && coords
                .0
                .iter()
                .zip(self.levels.iter())
                .all(|(c, l)| l.contains(c))
    }

    pub fn element(&self, coords: Vec<Rat>) -> Result<GroupElement, GroupError> {
        if coords.len() != self.rank() {
            return Err(GroupError::DimensionMismatch {
                got: coords.len(),
                want: self.rank(),
            });
        }
        for (i, (c, l)) in coords.iter().zip(self.levels.iter()).enumerate() {
            if !l.contains(c) {
                return Err(GroupError::NotAMember {
                    level: i,
                    coord: format_rat(c),
                });
            }
        }
        Ok(GroupElement {
            coords: Coords(coords),
            group: self.clone(),
        })
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: Coords::zero(self.rank()),
            group: self.clone(),
        }
    }

    /// True iff every element has a p-th divisor in the group.
    pub fn is_p_divisible(&self, p: u64) -> bool {
        self.levels.iter().all(|l| l.is_n_divisible(p))
    }

    /// n-divisibility for composite n, checked prime by prime.
    pub fn is_n_divisible(&self, n: u64) -> bool {
        self.levels.iter().all(|l| l.is_n_divisible(n))
    }

    pub fn convex_suffix(&self, start_level: usize) -> Result<ConvexSubgroup, GroupError> {
        if start_level > self.rank() {
            return Err(GroupError::ConvexOutOfRange {
                index: start_level,
                rank: self.rank(),
            });
        }
        Ok(ConvexSubgroup {
            group: self.clone(),
            start_level,
        })
    }

    /// Does the coset `shift + G` meet the lex interval `(lo, hi]`?
    ///
    /// Exact decision by recursion on the leading level: an element can sit
    /// strictly inside the open level-0 interval (deeper coordinates then
    /// unconstrained), or on one of the two boundaries (recursing into the
    /// suffix with a one-sided constraint).
    pub fn coset_meets_half_open(&self, shift: &Coords, lo: &Coords, hi: &Coords) -> bool {
        coset_meets_half_open_rec(&self.levels, &shift.0, &lo.0, &hi.0)
    }

    /// Does the coset `shift + G` contain an element > `lo`? True for every
    /// nontrivial group because the leading level is unbounded above.
    pub fn coset_nonempty_above(&self, shift: &Coords, lo: &Coords) -> bool {
        if self.is_trivial() {
            return shift.lex_cmp(lo) == Ordering::Greater;
        }
        let _ = (shift, lo);
        true
    }
}

fn coset_meets_half_open_rec(
    levels: &[LevelDescriptor],
    shift: &[Rat],
    lo: &[Rat],
    hi: &[Rat],
) -> bool {
    if levels.is_empty() {
        // zero-dimensional: the only point is 0, and (lo, hi] with lo = hi
        // is empty.
        return false;
    }
    let level = &levels[0];
    let (a, b) = (&lo[0], &hi[0]);
    match a.cmp(b) {
        Ordering::Greater => false,
        Ordering::Less => {
            if level.coset_meets_open(&shift[0], a, b) {
                return true;
            }
            // hi boundary: deeper coordinates need only satisfy <= hi_rest,
            // and the suffix coset is unbounded below. In rank 1 the closed
            // end itself qualifies.
            if level.contains(&(b - &shift[0])) {
                return true;
            }
            // lo boundary: need strictly greater deeper coordinates, which
            // exist iff there are deeper levels (suffix unbounded above).
            if level.contains(&(a - &shift[0])) && levels.len() > 1 {
                return true;
            }
            false
        }
        Ordering::Equal => {
            if !level.contains(&(a - &shift[0])) {
                return false;
            }
            coset_meets_half_open_rec(&levels[1..], &shift[1..], &lo[1..], &hi[1..])
        }
    }
}

impl fmt::Display for OrderedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// An element of an [`OrderedGroup`]; owns its coordinates and a handle to
/// the group for membership-safe arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: Coords,
    group: OrderedGroup,
}

impl GroupElement {
    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn into_coords(self) -> Coords {
        self.coords
    }

    pub fn group(&self) -> &OrderedGroup {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.coords.is_positive()
    }

    /// Total lexicographic comparison; errors when the elements belong to
    /// different groups.
    pub fn compare(&self, other: &GroupElement) -> Result<Ordering, GroupError> {
        if self.group != other.group {
            return Err(GroupError::GroupMismatch);
        }
        Ok(self.coords.lex_cmp(&other.coords))
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        if self.group != other.group {
            return Err(GroupError::GroupMismatch);
        }
        Ok(GroupElement {
            coords: &self.coords + &other.coords,
            group: self.group.clone(),
        })
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement {
            coords: -&self.coords,
            group: self.group.clone(),
        }
    }

    pub fn scale(&self, n: i64) -> GroupElement {
        GroupElement {
            coords: self.coords.scale_int(n),
            group: self.group.clone(),
        }
    }

    /// Smallest convex subgroup containing the element: the suffix starting
    /// at its first nonzero level.
    pub fn convex_of(&self) -> Result<ConvexSubgroup, GroupError> {
        let i = self.coords.first_nonzero().ok_or(GroupError::ZeroElement)?;
        self.group.convex_suffix(i)
    }

    /// Largest convex subgroup not containing the element: the next suffix.
    pub fn convex_plus_of(&self) -> Result<ConvexSubgroup, GroupError> {
        let i = self.coords.first_nonzero().ok_or(GroupError::ZeroElement)?;
        self.group.convex_suffix(i + 1)
    }

    /// The archimedean component associated with the element.
    pub fn arch_component(&self) -> Result<LevelDescriptor, GroupError> {
        let i = self.coords.first_nonzero().ok_or(GroupError::ZeroElement)?;
        Ok(self.group.level(i).clone())
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other).ok()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coords)
    }
}

/// The convex subgroup of `group` consisting of all elements vanishing
/// below `start_level`. `start_level == rank` is the trivial subgroup,
/// `start_level == 0` is the whole group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexSubgroup {
    group: OrderedGroup,
    start_level: usize,
}

impl ConvexSubgroup {
    pub fn group(&self) -> &OrderedGroup {
        &self.group
    }

    pub fn start_level(&self) -> usize {
        self.start_level
    }

    pub fn is_trivial(&self) -> bool {
        self.start_level == self.group.rank()
    }

    pub fn is_whole_group(&self) -> bool {
        self.start_level == 0
    }

    pub fn levels(&self) -> &[LevelDescriptor] {
        &self.group.levels()[self.start_level..]
    }

    pub fn contains(&self, el: &GroupElement) -> bool {
        el.group() == &self.group
            && el
                .coords()
                .first_nonzero()
                .map(|i| i >= self.start_level)
                .unwrap_or(true)
    }

    pub fn is_p_divisible(&self, p: u64) -> bool {
        self.levels().iter().all(|l| l.is_n_divisible(p))
    }
}

/// Outcome of the value-group half of the deeply-ramified conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DrvgOutcome {
    /// No archimedean component is discrete.
    Holds,
    /// Some component is discrete; carries the first offending level.
    DiscreteLevel(usize),
}

impl DrvgOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, DrvgOutcome::Holds)
    }
}

/// Level-scan implementation: the condition fails exactly at a discrete
/// (cyclic) level.
pub fn check_drvg(group: &OrderedGroup) -> Result<DrvgOutcome, GroupError> {
    if group.is_trivial() {
        return Err(GroupError::TrivialGroup);
    }
    for (i, l) in group.levels().iter().enumerate() {
        if l.is_discrete() {
            return Ok(DrvgOutcome::DiscreteLevel(i));
        }
    }
    Ok(DrvgOutcome::Holds)
}

/// Quotient-characterization implementation: scan all pairs of convex
/// subgroups and test whether the quotient is isomorphic to Z as an ordered
/// group. A quotient of consecutive suffixes spans a segment of levels; it
/// is isomorphic to Z exactly when it is archimedean (one level) and has a
/// least positive element that generates it.
pub fn check_drvg_by_quotients(group: &OrderedGroup) -> Result<DrvgOutcome, GroupError> {
    if group.is_trivial() {
        return Err(GroupError::TrivialGroup);
    }
    let n = group.rank();
    for i in 0..n {
        for j in (i + 1)..=n {
            if segment_is_isomorphic_to_z(&group.levels()[i..j]) {
                return Ok(DrvgOutcome::DiscreteLevel(i));
            }
        }
    }
    Ok(DrvgOutcome::Holds)
}

/// Is the lexicographic product of these levels isomorphic to Z as an
/// ordered abelian group? It must have a least positive element (last
/// level cyclic) and that element must generate (no room above it, so a
/// single level).
fn segment_is_isomorphic_to_z(segment: &[LevelDescriptor]) -> bool {
    match segment {
        [] => false,
        rest => {
            let last_cyclic = rest
                .last()
                .map(|l| l.least_positive().is_some())
                .unwrap_or(false);
            last_cyclic && rest.len() == 1
        }
    }
}
