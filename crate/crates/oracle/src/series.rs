//! Finite-support generalized power series with exponents in an ordered
//! group: the base fields of the oracle.

use std::collections::BTreeMap;
use std::fmt;

use valdiff_core::ordered_groups::{Coords, OrderedGroup};
use valdiff_core::rational::rat_u64;

use crate::field::Coeffs;
use crate::OracleError;

/// A finite-support series over `field` with exponents in `group`. The
/// support being finite makes well-ordering automatic and all arithmetic
/// exact.
#[derive(Debug, Clone, PartialEq)]
pub struct HahnSeries<F: Coeffs> {
    field: F,
    group: OrderedGroup,
    terms: BTreeMap<Coords, F::El>,
}

impl<F: Coeffs> HahnSeries<F> {
    pub fn zero(field: F, group: OrderedGroup) -> Self {
        HahnSeries {
            field,
            group,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: F, group: OrderedGroup) -> Self {
        let coef = field.one();
        let exp = Coords::zero(group.rank());
        Self::monomial(field, group, coef, exp).expect("zero exponent is always a member")
    }

    /// c * t^e; errors when the exponent is not a group member.
    pub fn monomial(
        field: F,
        group: OrderedGroup,
        coef: F::El,
        exp: Coords,
    ) -> Result<Self, OracleError> {
        if !group.contains(&exp) {
            return Err(OracleError::ExponentOutsideGroup(format!("{exp}")));
        }
        let mut terms = BTreeMap::new();
        if !field.is_zero(&coef) {
            terms.insert(exp, coef);
        }
        Ok(HahnSeries {
            field,
            group,
            terms,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn group(&self) -> &OrderedGroup {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Coords, &F::El)> {
        self.terms.iter()
    }

    /// Least exponent of the support; undefined (None) for 0.
    pub fn valuation(&self) -> Option<&Coords> {
        self.terms.keys().next()
    }

    pub fn leading_coeff(&self) -> Option<&F::El> {
        self.terms.values().next()
    }

    pub fn coeff_at(&self, exp: &Coords) -> F::El {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.group, other.group);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let cur = terms.get(e).cloned().unwrap_or_else(|| self.field.zero());
            let s = self.field.add(&cur, c);
            if self.field.is_zero(&s) {
                terms.remove(e);
            } else {
                terms.insert(e.clone(), s);
            }
        }
        HahnSeries {
            field: self.field.clone(),
            group: self.group.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        HahnSeries {
            field: self.field.clone(),
            group: self.group.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.group, other.group);
        let mut terms: BTreeMap<Coords, F::El> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                let prod = self.field.mul(c1, c2);
                let cur = terms.get(&e).cloned().unwrap_or_else(|| self.field.zero());
                let s = self.field.add(&cur, &prod);
                if self.field.is_zero(&s) {
                    terms.remove(&e);
                } else {
                    terms.insert(e, s);
                }
            }
        }
        HahnSeries {
            field: self.field.clone(),
            group: self.group.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &F::El) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.group.clone());
        }
        HahnSeries {
            field: self.field.clone(),
            group: self.group.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = {
            let coef = self.field.one();
            HahnSeries::monomial(
                self.field.clone(),
                self.group.clone(),
                coef,
                Coords::zero(self.group.rank()),
            )
            .expect("zero exponent is always a member")
        };
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Coefficientwise p-th power with exponents scaled by p.
    pub fn frobenius(&self) -> Self {
        let p = self.field.p();
        HahnSeries {
            field: self.field.clone(),
            group: self.group.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.scale_rat(&rat_u64(p)), self.field.frobenius(c)))
                .collect(),
        }
    }

    /// The residue of an integral series: the coefficient at exponent 0.
    /// Errors when the valuation is negative.
    pub fn residue(&self) -> Result<F::El, OracleError> {
        if let Some(v) = self.valuation() {
            if v.is_negative() {
                return Err(OracleError::NegativeValuation);
            }
        }
        Ok(self.coeff_at(&Coords::zero(self.group.rank())))
    }
}

impl<F: Coeffs> fmt::Display for HahnSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*t^{}", self.field.fmt_el(c), e)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use valdiff_core::gen::builders::group_z_inv;
    use valdiff_core::rational::{rat, rat_int};

    fn mono(f: PrimeField, g: &OrderedGroup, c: u64, e: Rat2) -> HahnSeries<PrimeField> {
        HahnSeries::monomial(f, g.clone(), c, Coords(vec![e])).unwrap()
    }

    type Rat2 = valdiff_core::rational::Rat;

    #[test]
    fn arithmetic_examples() {
        let f = PrimeField::new(3);
        let g = group_z_inv(2);
        // (t^(1/2) + t) * t^(-1) = t^(-1/2) + 1
        let a = mono(f, &g, 1, rat(1, 2)).add(&mono(f, &g, 1, rat_int(1)));
        let b = mono(f, &g, 1, rat_int(-1));
        let prod = a.mul(&b);
        assert_eq!(prod.coeff_at(&Coords(vec![rat(-1, 2)])), 1);
        assert_eq!(prod.coeff_at(&Coords(vec![rat_int(0)])), 1);
        assert_eq!(prod.support_len(), 2);
        assert_eq!(prod.valuation(), Some(&Coords(vec![rat(-1, 2)])));
    }

    #[test]
    fn valuation_of_sum_and_product() {
        let f = PrimeField::new(5);
        let g = group_z_inv(3);
        let a = mono(f, &g, 2, rat(1, 3)).add(&mono(f, &g, 3, rat_int(2)));
        assert_eq!(a.valuation(), Some(&Coords(vec![rat(1, 3)])));
        let b = mono(f, &g, 4, rat(-2, 3));
        let ab = a.mul(&b);
        assert_eq!(ab.valuation(), Some(&Coords(vec![rat(-1, 3)])));
        // cancellation drops terms exactly
        let c = mono(f, &g, 3, rat(1, 3));
        let s = a.add(&c);
        assert_eq!(s.valuation(), Some(&Coords(vec![rat_int(2)])));
    }

    #[test]
    fn frobenius_scales_exponents() {
        let f = PrimeField::new(3);
        let g = group_z_inv(3);
        let a = mono(f, &g, 2, rat(1, 3));
        let fr = a.frobenius();
        assert_eq!(fr.coeff_at(&Coords(vec![rat_int(1)])), 2);
        assert_eq!(fr.support_len(), 1);
    }

    #[test]
    fn exponent_membership_enforced() {
        let f = PrimeField::new(3);
        let g = group_z_inv(3);
        assert!(HahnSeries::monomial(f, g, 1, Coords(vec![rat(1, 2)])).is_err());
    }

    #[test]
    fn residue_examples() {
        let f = PrimeField::new(3);
        let g = group_z_inv(3);
        let a = mono(f, &g, 2, rat_int(0)).add(&mono(f, &g, 1, rat(1, 3)));
        assert_eq!(a.residue().unwrap(), 2);
        let b = mono(f, &g, 1, rat(1, 3));
        assert_eq!(b.residue().unwrap(), 0);
        let c = mono(f, &g, 1, rat(-1, 3));
        assert!(c.residue().is_err());
    }
}
