//! Coordinate vectors in the divisible hull of a lexicographic product.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::rational::{format_rat, Rat};

/// A vector of rationals ordered lexicographically, most significant
/// coordinate first. This is where group elements, adjoined values and
/// thresholds all live; membership in a particular group is checked
/// separately.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coords(pub Vec<Rat>);

impl Coords {
    pub fn zero(n: usize) -> Self {
        Coords(vec![Rat::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coordinate; `None` for the zero vector.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn lex_cmp(&self, other: &Coords) -> Ordering {
        debug_assert_eq!(self.len(), other.len());
        self.0.cmp(&other.0)
    }

    pub fn is_positive(&self) -> bool {
        self.first_nonzero()
            .map(|i| self.0[i] > Rat::zero())
            .unwrap_or(false)
    }

    pub fn is_negative(&self) -> bool {
        self.first_nonzero()
            .map(|i| self.0[i] < Rat::zero())
            .unwrap_or(false)
    }

    pub fn scale_int(&self, n: i64) -> Coords {
        let f = crate::rational::rat_int(n);
        Coords(self.0.iter().map(|c| c * &f).collect())
    }

    pub fn scale_rat(&self, f: &Rat) -> Coords {
        Coords(self.0.iter().map(|c| c * f).collect())
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl Add<&Coords> for &Coords {
    type Output = Coords;
    fn add(self, rhs: &Coords) -> Coords {
        debug_assert_eq!(self.len(), rhs.len());
        Coords(
            self.0
                .iter()
                .zip(rhs.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub<&Coords> for &Coords {
    type Output = Coords;
    fn sub(self, rhs: &Coords) -> Coords {
        debug_assert_eq!(self.len(), rhs.len());
        Coords(
            self.0
                .iter()
                .zip(rhs.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &Coords {
    type Output = Coords;
    fn neg(self) -> Coords {
        Coords(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rat(c))?;
        }
        write!(f, ")")
    }
}
