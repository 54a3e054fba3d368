//! Coefficient fields for the series oracle: the prime field, and the
//! rational function field over it used to realize inseparable residue
//! extensions exactly.

use std::fmt::Debug;
use std::hash::Hash;

/// Field context object: elements are plain data, operations go through
/// the context.
pub trait Coeffs: Clone + PartialEq + Debug {
    type El: Clone + PartialEq + Eq + Debug + Hash;

    fn p(&self) -> u64;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    #[allow(clippy::wrong_self_convention)]
    fn from_u64(&self, n: u64) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
    /// The image of a under x -> x^p.
    fn frobenius(&self, a: &Self::El) -> Self::El;
    /// Exact p-th root when one exists in the field.
    fn pth_root(&self, a: &Self::El) -> Option<Self::El>;
    fn fmt_el(&self, a: &Self::El) -> String;

    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::El, mut k: u64) -> Self::El {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }
}

/// The prime field F_p with p small; elements are reduced residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(valdiff_core::rational::is_prime(p), "{p} is not prime");
        PrimeField { p }
    }

    /// Exact q-th root by scanning the (small) field; `None` when the
    /// element is not a q-th power.
    pub fn qth_root(&self, a: u64, q: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        (1..self.p).find(|&x| self.pow(&x, q) == a)
    }

    /// A primitive q-th root of unity for prime q dividing p - 1.
    pub fn root_of_unity(&self, q: u64) -> Option<u64> {
        if q == 1 {
            return Some(1);
        }
        if !(self.p - 1).is_multiple_of(q) {
            return None;
        }
        (2..self.p).find(|&x| self.pow(&x, q) == 1 && x != 1)
    }
}

impl Coeffs for PrimeField {
    type El = u64;

    fn p(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
    fn frobenius(&self, a: &u64) -> u64 {
        // x^p = x over F_p
        *a
    }
    fn pth_root(&self, a: &u64) -> Option<u64> {
        Some(*a)
    }
    fn fmt_el(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Dense polynomial over F_p, no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly(pub Vec<u64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: u64, p: u64) -> Self {
        let c = c % p;
        if c == 0 {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    fn trim(mut v: Vec<u64>) -> Poly {
        while v.last() == Some(&0) {
            v.pop();
        }
        Poly(v)
    }

    pub fn add(&self, o: &Poly, p: u64) -> Poly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![0u64; n];
        for (i, slot) in v.iter_mut().enumerate() {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = o.0.get(i).copied().unwrap_or(0);
            *slot = (a + b) % p;
        }
        Poly::trim(v)
    }

    pub fn neg(&self, p: u64) -> Poly {
        Poly(self.0.iter().map(|&a| (p - a) % p).collect())
    }

    pub fn sub(&self, o: &Poly, p: u64) -> Poly {
        self.add(&o.neg(p), p)
    }

    pub fn mul(&self, o: &Poly, p: u64) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                v[i + j] = (v[i + j] + a * b) % p;
            }
        }
        Poly::trim(v)
    }

    /// (quotient, remainder) with divisor nonzero.
    pub fn divmod(&self, d: &Poly, p: u64) -> (Poly, Poly) {
        assert!(!d.is_zero());
        let mut rem = self.0.clone();
        let dd = d.0.len();
        if rem.len() < dd {
            return (Poly::zero(), Poly::trim(rem));
        }
        let fp = PrimeField { p };
        let lead_inv = fp.inv(d.0.last().unwrap()).unwrap();
        let mut quot = vec![0u64; rem.len() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd - 1] % p;
            if top == 0 {
                continue;
            }
            let c = fp.mul(&top, &lead_inv);
            quot[k] = c;
            for (i, &dc) in d.0.iter().enumerate() {
                let sub = fp.mul(&c, &dc);
                rem[k + i] = (rem[k + i] + p - sub) % p;
            }
        }
        (Poly::trim(quot), Poly::trim(rem))
    }

    pub fn gcd(&self, o: &Poly, p: u64) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }

    pub fn monic(&self, p: u64) -> Poly {
        match self.0.last() {
            None => Poly::zero(),
            Some(&l) => {
                let fp = PrimeField { p };
                let inv = fp.inv(&l).unwrap();
                Poly(self.0.iter().map(|&c| fp.mul(&c, &inv)).collect())
            }
        }
    }

    /// Substitutes u -> u^p; with coefficients in F_p this is the p-th
    /// power of the polynomial.
    pub fn stretch(&self, p: u64) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0u64; (self.0.len() - 1) * p as usize + 1];
        for (i, &c) in self.0.iter().enumerate() {
            v[i * p as usize] = c;
        }
        Poly::trim(v)
    }

    /// Inverse of `stretch` when every exponent is divisible by p.
    pub fn compress(&self, p: u64) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let mut v = Vec::new();
        for (i, &c) in self.0.iter().enumerate() {
            if c != 0 && i % p as usize != 0 {
                return None;
            }
            if i % p as usize == 0 {
                v.push(c);
            }
        }
        Some(Poly::trim(v))
    }
}

/// Reduced rational function over F_p: monic denominator, coprime to the
/// numerator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

/// The rational function field F_p(u).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatFuncField {
    pub p: u64,
}

impl RatFuncField {
    pub fn new(p: u64) -> Self {
        assert!(valdiff_core::rational::is_prime(p), "{p} is not prime");
        RatFuncField { p }
    }

    fn reduce(&self, num: Poly, den: Poly) -> RatFn {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn {
                num: Poly::zero(),
                den: Poly(vec![1]),
            };
        }
        let g = num.gcd(&den, self.p);
        let (num, _) = num.divmod(&g, self.p);
        let (den, _) = den.divmod(&g, self.p);
        // normalize the denominator to be monic
        let fp = PrimeField { p: self.p };
        let lead = *den.0.last().unwrap();
        let inv = fp.inv(&lead).unwrap();
        let scale = Poly(vec![inv]);
        RatFn {
            num: num.mul(&scale, self.p),
            den: den.mul(&scale, self.p),
        }
    }

    /// The transcendental generator u.
    pub fn u(&self) -> RatFn {
        RatFn {
            num: Poly(vec![0, 1]),
            den: Poly(vec![1]),
        }
    }

    pub fn from_poly(&self, p: Poly) -> RatFn {
        self.reduce(p, Poly(vec![1]))
    }
}

impl Coeffs for RatFuncField {
    type El = RatFn;

    fn p(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> RatFn {
        RatFn {
            num: Poly::zero(),
            den: Poly(vec![1]),
        }
    }
    fn one(&self) -> RatFn {
        RatFn {
            num: Poly(vec![1]),
            den: Poly(vec![1]),
        }
    }
    fn from_u64(&self, n: u64) -> RatFn {
        RatFn {
            num: Poly::constant(n, self.p),
            den: Poly(vec![1]),
        }
    }
    fn is_zero(&self, a: &RatFn) -> bool {
        a.num.is_zero()
    }
    fn add(&self, a: &RatFn, b: &RatFn) -> RatFn {
        let num = a
            .num
            .mul(&b.den, self.p)
            .add(&b.num.mul(&a.den, self.p), self.p);
        let den = a.den.mul(&b.den, self.p);
        self.reduce(num, den)
    }
    fn neg(&self, a: &RatFn) -> RatFn {
        RatFn {
            num: a.num.neg(self.p),
            den: a.den.clone(),
        }
    }
    fn mul(&self, a: &RatFn, b: &RatFn) -> RatFn {
        let num = a.num.mul(&b.num, self.p);
        let den = a.den.mul(&b.den, self.p);
        if num.is_zero() {
            return self.zero();
        }
        self.reduce(num, den)
    }
    fn inv(&self, a: &RatFn) -> Option<RatFn> {
        if a.num.is_zero() {
            None
        } else {
            Some(self.reduce(a.den.clone(), a.num.clone()))
        }
    }
    fn frobenius(&self, a: &RatFn) -> RatFn {
        // coefficients are fixed by x -> x^p, so the p-th power just
        // stretches exponents
        RatFn {
            num: a.num.stretch(self.p),
            den: a.den.stretch(self.p),
        }
    }
    fn pth_root(&self, a: &RatFn) -> Option<RatFn> {
        let num = a.num.compress(self.p)?;
        let den = a.den.compress(self.p)?;
        Some(self.reduce(num, den))
    }
    fn fmt_el(&self, a: &RatFn) -> String {
        let poly_str = |q: &Poly| {
            if q.is_zero() {
                return "0".to_string();
            }
            let terms: Vec<String> =
                q.0.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| match i {
                        0 => c.to_string(),
                        1 if c == 1 => "u".to_string(),
                        1 => format!("{c}u"),
                        _ if c == 1 => format!("u^{i}"),
                        _ => format!("{c}u^{i}"),
                    })
                    .collect();
            terms.join("+")
        };
        if a.den.0 == vec![1] {
            poly_str(&a.num)
        } else {
            format!("({})/({})", poly_str(&a.num), poly_str(&a.den))
        }
    }
}

/// Does X^p - X - beta have a root in the coefficient field? Sound partial
/// decision sufficient for the oracle's instance families: over F_p the
/// image of x -> x^p - x is {0}; over F_p(u) a root forces beta into F_p
/// by an algebraicity argument, so constants reduce to the prime-field
/// case, while nonconstant polynomials of degree prime to p and proper
/// fractions with a pole order prime to p never admit roots.
pub fn artin_schreier_has_root_fp(beta: u64) -> bool {
    beta == 0
}

pub fn artin_schreier_has_root_ratfn(field: &RatFuncField, beta: &RatFn) -> Option<bool> {
    if beta.num.is_zero() {
        return Some(true);
    }
    if beta.den.0 == vec![1] {
        match beta.num.degree() {
            Some(0) => Some(false), // nonzero constant
            Some(d) if !(d as u64).is_multiple_of(field.p) => Some(false),
            _ => None,
        }
    } else {
        let pole = beta.den.degree().unwrap() as u64;
        if !pole.is_multiple_of(field.p) {
            Some(false)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_ops() {
        let f = PrimeField::new(5);
        assert_eq!(f.add(&3, &4), 2);
        assert_eq!(f.mul(&3, &4), 2);
        assert_eq!(f.inv(&3), Some(2));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.pow(&2, 4), 1);
        assert_eq!(f.qth_root(4, 2), Some(2));
        assert_eq!(f.qth_root(2, 2), None); // 2 is not a square mod 5
        assert_eq!(f.root_of_unity(2), Some(4)); // -1
    }

    #[test]
    fn poly_division() {
        let p = 3;
        let a = Poly(vec![1, 0, 1]); // 1 + u^2
        let b = Poly(vec![1, 1]); // 1 + u
        let (q, r) = a.divmod(&b, p);
        let back = q.mul(&b, p).add(&r, p);
        assert_eq!(back, a);
    }

    #[test]
    fn ratfn_field_ops() {
        let f = RatFuncField::new(3);
        let u = f.u();
        let one = f.one();
        // u + 1/u = (u^2+1)/u
        let inv_u = f.inv(&u).unwrap();
        let s = f.add(&u, &inv_u);
        assert_eq!(s.num, Poly(vec![1, 0, 1]));
        assert_eq!(s.den, Poly(vec![0, 1]));
        // (u+1)(u-1) = u^2 - 1
        let a = f.add(&u, &one);
        let b = f.sub(&u, &one);
        let prod = f.mul(&a, &b);
        assert_eq!(prod.num, Poly(vec![2, 0, 1]));
        // frobenius and p-th root
        let fr = f.frobenius(&u);
        assert_eq!(f.pth_root(&fr), Some(u.clone()));
        assert_eq!(f.pth_root(&u), None);
    }

    #[test]
    fn artin_schreier_root_detection() {
        assert!(artin_schreier_has_root_fp(0));
        assert!(!artin_schreier_has_root_fp(2));
        let f = RatFuncField::new(3);
        assert_eq!(artin_schreier_has_root_ratfn(&f, &f.u()), Some(false));
        assert_eq!(artin_schreier_has_root_ratfn(&f, &f.zero()), Some(true));
        let inv_u = f.inv(&f.u()).unwrap();
        assert_eq!(artin_schreier_has_root_ratfn(&f, &inv_u), Some(false));
    }
}
