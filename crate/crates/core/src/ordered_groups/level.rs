//! Archimedean levels: the computable subgroups of the rationals that the
//! lexicographic products are built from.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::GroupError;
use crate::rational::{format_rat, is_prime, prime_factors, strip_primes, Rat};

/// One archimedean level of a value group.
///
/// `Cyclic(g)` is the discrete group gZ, `Localized(g, S)` is the dense
/// group g*Z[1/s : s in S], and `FullRationals` is Q itself. `Zero` is
/// accepted on input but normalized away by group construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LevelDescriptor {
    Zero,
    Cyclic(Rat),
    Localized(Rat, BTreeSet<u64>),
    FullRationals,
}

impl LevelDescriptor {
    pub fn validate(&self) -> Result<(), GroupError> {
        match self {
            LevelDescriptor::Zero | LevelDescriptor::FullRationals => Ok(()),
            LevelDescriptor::Cyclic(g) => {
                if g.is_positive() {
                    Ok(())
                } else {
                    Err(GroupError::BadLevel(format!(
                        "cyclic generator {} must be positive",
                        format_rat(g)
                    )))
                }
            }
            LevelDescriptor::Localized(g, s) => {
                if !g.is_positive() {
                    return Err(GroupError::BadLevel(format!(
                        "localized generator {} must be positive",
                        format_rat(g)
                    )));
                }
                if s.is_empty() {
                    return Err(GroupError::BadLevel(
                        "localized prime set must be nonempty".to_string(),
                    ));
                }
                for &p in s {
                    if !is_prime(p) {
                        return Err(GroupError::BadLevel(format!("{p} is not prime")));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, LevelDescriptor::Zero)
    }

    /// Dense levels have no least positive element.
    pub fn is_dense(&self) -> bool {
        matches!(
            self,
            LevelDescriptor::Localized(..) | LevelDescriptor::FullRationals
        )
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, LevelDescriptor::Cyclic(_))
    }

    pub fn least_positive(&self) -> Option<Rat> {
        match self {
            LevelDescriptor::Cyclic(g) => Some(g.clone()),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        match self {
            LevelDescriptor::Zero => x.is_zero(),
            LevelDescriptor::FullRationals => true,
            LevelDescriptor::Cyclic(g) => (x / g).is_integer(),
            LevelDescriptor::Localized(g, s) => {
                let y = x / g;
                strip_primes(y.denom(), s.iter().copied()).is_one()
            }
        }
    }

    /// Whether every element of the level has an n-th divisor in it.
    pub fn is_n_divisible(&self, n: u64) -> bool {
        match self {
            LevelDescriptor::Zero | LevelDescriptor::FullRationals => true,
            LevelDescriptor::Cyclic(_) => n == 1,
            LevelDescriptor::Localized(_, s) => prime_factors(n).iter().all(|p| s.contains(p)),
        }
    }

    /// The level generated by this one together with one new element `d`
    /// satisfying q*d in the level, q prime. Index q when d lies outside.
    pub fn adjoin(&self, d: &Rat, q: u64) -> Result<LevelDescriptor, GroupError> {
        let qd = d * crate::rational::rat_u64(q);
        if !self.contains(&qd) {
            return Err(GroupError::AdjoinOutsideBase);
        }
        if self.contains(d) {
            return Ok(self.clone());
        }
        let qr = crate::rational::rat_u64(q);
        Ok(match self {
            LevelDescriptor::Zero => unreachable!("d=0 is always contained"),
            LevelDescriptor::FullRationals => unreachable!("Q contains d"),
            LevelDescriptor::Cyclic(g) => LevelDescriptor::Cyclic(g / &qr),
            LevelDescriptor::Localized(g, s) => LevelDescriptor::Localized(g / &qr, s.clone()),
        })
    }

    /// Least element of `shift + L` strictly greater than `bound`;
    /// `None` when the level is dense (no least element exists, but the
    /// coset still accumulates on `bound` from above).
    pub fn coset_min_above(&self, shift: &Rat, bound: &Rat) -> Option<Rat> {
        match self {
            LevelDescriptor::Zero => {
                if shift > bound {
                    Some(shift.clone())
                } else {
                    None
                }
            }
            LevelDescriptor::Cyclic(g) => {
                let t = (bound - shift) / g;
                let mut k = t.floor();
                k += Rat::one();
                Some(shift + g * k)
            }
            _ => None,
        }
    }

    /// Does `shift + L` meet the open interval (a, b)?
    pub fn coset_meets_open(&self, shift: &Rat, a: &Rat, b: &Rat) -> bool {
        if a >= b {
            return false;
        }
        match self {
            LevelDescriptor::Zero => shift > a && shift < b,
            LevelDescriptor::Cyclic(_) => match self.coset_min_above(shift, a) {
                Some(y) => y < *b,
                None => false,
            },
            // Dense subgroups of Q are dense in R, so any nonempty open
            // interval meets every coset.
            LevelDescriptor::Localized(..) | LevelDescriptor::FullRationals => true,
        }
    }
}

impl fmt::Display for LevelDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelDescriptor::Zero => write!(f, "0"),
            LevelDescriptor::Cyclic(g) => write!(f, "{}Z", format_rat(g)),
            LevelDescriptor::Localized(g, s) => {
                let primes: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                write!(f, "{}Z[1/{{{}}}]", format_rat(g), primes.join(","))
            }
            LevelDescriptor::FullRationals => write!(f, "Q"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn loc(g: Rat, primes: &[u64]) -> LevelDescriptor {
        LevelDescriptor::Localized(g, primes.iter().copied().collect())
    }

    #[test]
    fn membership() {
        let z = LevelDescriptor::Cyclic(rat_int(1));
        assert!(z.contains(&rat_int(-7)));
        assert!(!z.contains(&rat(1, 2)));

        let half_z = LevelDescriptor::Cyclic(rat(1, 2));
        assert!(half_z.contains(&rat(3, 2)));
        assert!(!half_z.contains(&rat(1, 3)));

        let z_half = loc(rat_int(1), &[2]);
        assert!(z_half.contains(&rat(5, 8)));
        assert!(!z_half.contains(&rat(1, 6)));

        let scaled = loc(rat(1, 3), &[2]);
        assert!(scaled.contains(&rat(1, 12)));
        assert!(!scaled.contains(&rat(1, 5)));

        assert!(LevelDescriptor::FullRationals.contains(&rat(22, 7)));
        assert!(LevelDescriptor::Zero.contains(&rat_int(0)));
        assert!(!LevelDescriptor::Zero.contains(&rat_int(1)));
    }

    #[test]
    fn divisibility() {
        assert!(loc(rat_int(1), &[5]).is_n_divisible(5));
        assert!(!LevelDescriptor::Cyclic(rat_int(1)).is_n_divisible(2));
        assert!(loc(rat_int(1), &[2, 3]).is_n_divisible(6));
        assert!(!loc(rat_int(1), &[2, 3]).is_n_divisible(5));
        assert!(LevelDescriptor::FullRationals.is_n_divisible(60));
    }

    #[test]
    fn adjoin_levels() {
        let z = LevelDescriptor::Cyclic(rat_int(1));
        assert_eq!(
            z.adjoin(&rat(1, 2), 2).unwrap(),
            LevelDescriptor::Cyclic(rat(1, 2))
        );
        // d already inside: no change
        let z5 = loc(rat_int(1), &[5]);
        assert_eq!(z5.adjoin(&rat(1, 5), 5).unwrap(), z5);
        // index 3 over Z[1/2]
        let z2 = loc(rat_int(1), &[2]);
        assert_eq!(z2.adjoin(&rat(1, 3), 3).unwrap(), loc(rat(1, 3), &[2]));
        assert_eq!(z2.adjoin(&rat(7, 6), 3).unwrap(), loc(rat(1, 3), &[2]));
        assert!(z.adjoin(&rat(1, 4), 2).is_err());
    }

    #[test]
    fn coset_search() {
        let z = LevelDescriptor::Cyclic(rat_int(1));
        // least element of 1/2 + Z above 0 is 1/2
        assert_eq!(z.coset_min_above(&rat(1, 2), &rat_int(0)), Some(rat(1, 2)));
        // strictness: least element of Z above 1 is 2
        assert_eq!(
            z.coset_min_above(&rat_int(0), &rat_int(1)),
            Some(rat_int(2))
        );
        assert_eq!(
            z.coset_min_above(&rat_int(0), &rat(-3, 2)),
            Some(rat_int(-1))
        );
        assert!(z.coset_meets_open(&rat(1, 2), &rat_int(0), &rat_int(1)));
        assert!(!z.coset_meets_open(&rat(1, 2), &rat_int(0), &rat(1, 2)));
        let dense = loc(rat_int(1), &[2]);
        assert!(dense.coset_meets_open(&rat(1, 3), &rat_int(0), &rat(1, 1000)));
    }
}
