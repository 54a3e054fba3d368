//! Arithmetic in the extension field defined by an Artin-Schreier or
//! Kummer relation over a series base field, represented on the power
//! basis of the defining generator.

use valdiff_core::ordered_groups::{Coords, OrderedGroup};

use crate::field::{Coeffs, PrimeField};
use crate::series::HahnSeries;
use crate::OracleError;

/// The defining relation of the extension.
#[derive(Debug, Clone, PartialEq)]
pub enum Relation<F: Coeffs> {
    /// x^p - x = b.
    ArtinSchreier { b: HahnSeries<F> },
    /// x^q = b, q prime dividing p - 1.
    Kummer { q: u64, b: HahnSeries<F> },
}

impl<F: Coeffs> Relation<F> {
    pub fn degree(&self, p: u64) -> u64 {
        match self {
            Relation::ArtinSchreier { .. } => p,
            Relation::Kummer { q, .. } => *q,
        }
    }

    pub fn b(&self) -> &HahnSeries<F> {
        match self {
            Relation::ArtinSchreier { b } => b,
            Relation::Kummer { b, .. } => b,
        }
    }
}

/// An element written on the basis 1, x, ..., x^(n-1) of the extension.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtElement<F: Coeffs> {
    pub coeffs: Vec<HahnSeries<F>>,
}

/// Context for computing in K(x): the relation, plus the exact value of
/// the generator, established by the classification. With that value the
/// basis is a valuation basis and v(sum c_i x^i) = min_i v(c_i x^i)
/// exactly: in the ramified case the summand values sit in distinct
/// cosets and cannot tie; in the inertial case the normalized residues of
/// the basis powers are linearly independent over the residue field, so
/// the minimum survives.
#[derive(Debug, Clone)]
pub struct ExtField<F: Coeffs> {
    field: F,
    group: OrderedGroup,
    rel: Relation<F>,
    degree: u64,
    gen_value: Coords,
}

impl<F: Coeffs> ExtField<F> {
    pub fn new(field: F, group: OrderedGroup, rel: Relation<F>, gen_value: Coords) -> Self {
        let degree = rel.degree(field.p());
        ExtField {
            field,
            group,
            rel,
            degree,
            gen_value,
        }
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn group(&self) -> &OrderedGroup {
        &self.group
    }

    pub fn gen_value(&self) -> &Coords {
        &self.gen_value
    }

    pub fn relation(&self) -> &Relation<F> {
        &self.rel
    }

    pub fn zero(&self) -> ExtElement<F> {
        ExtElement {
            coeffs: (0..self.degree)
                .map(|_| HahnSeries::zero(self.field.clone(), self.group.clone()))
                .collect(),
        }
    }

    pub fn from_series(&self, s: HahnSeries<F>) -> ExtElement<F> {
        let mut z = self.zero();
        z.coeffs[0] = s;
        z
    }

    pub fn generator(&self) -> ExtElement<F> {
        let mut z = self.zero();
        z.coeffs[1] = HahnSeries::one(self.field.clone(), self.group.clone());
        z
    }

    pub fn add(&self, a: &ExtElement<F>, b: &ExtElement<F>) -> ExtElement<F> {
        ExtElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(b.coeffs.iter())
                .map(|(x, y)| x.add(y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &ExtElement<F>) -> ExtElement<F> {
        ExtElement {
            coeffs: a.coeffs.iter().map(|x| x.neg()).collect(),
        }
    }

    pub fn sub(&self, a: &ExtElement<F>, b: &ExtElement<F>) -> ExtElement<F> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &ExtElement<F>, s: &HahnSeries<F>) -> ExtElement<F> {
        ExtElement {
            coeffs: a.coeffs.iter().map(|x| x.mul(s)).collect(),
        }
    }

    /// Multiplication on the power basis followed by reduction through the
    /// defining relation.
    pub fn mul(&self, a: &ExtElement<F>, b: &ExtElement<F>) -> ExtElement<F> {
        let n = self.degree as usize;
        let zero = HahnSeries::zero(self.field.clone(), self.group.clone());
        let mut raw = vec![zero; 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                raw[i + j] = raw[i + j].add(&x.mul(y));
            }
        }
        // reduce powers x^m for m >= n
        for m in (n..raw.len()).rev() {
            if raw[m].is_zero() {
                continue;
            }
            let c = raw[m].clone();
            raw[m] = HahnSeries::zero(self.field.clone(), self.group.clone());
            match &self.rel {
                Relation::ArtinSchreier { b } => {
                    // x^p = x + b
                    raw[m - n + 1] = raw[m - n + 1].add(&c);
                    raw[m - n] = raw[m - n].add(&c.mul(b));
                }
                Relation::Kummer { b, .. } => {
                    // x^q = b
                    raw[m - n] = raw[m - n].add(&c.mul(b));
                }
            }
        }
        ExtElement {
            coeffs: raw.into_iter().take(n).collect(),
        }
    }

    pub fn pow(&self, a: &ExtElement<F>, mut k: u64) -> ExtElement<F> {
        let mut base = a.clone();
        let mut acc = self.from_series(HahnSeries::one(self.field.clone(), self.group.clone()));
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &ExtElement<F>) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }

    /// Exact valuation on the valuation basis: min over i of
    /// v(c_i) + i * v(x). None for the zero element.
    pub fn valuation(&self, a: &ExtElement<F>) -> Option<Coords> {
        let mut best: Option<Coords> = None;
        for (i, c) in a.coeffs.iter().enumerate() {
            if let Some(v) = c.valuation() {
                let val = v + &self.gen_value.scale_int(i as i64);
                best = match best {
                    None => Some(val),
                    Some(b) if val < b => Some(val),
                    Some(b) => Some(b),
                };
            }
        }
        best
    }

    /// Whether an element lies in the base field (no higher basis
    /// components).
    pub fn is_rational(&self, a: &ExtElement<F>) -> bool {
        a.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    /// The best approximation of `x` from a finite candidate list:
    /// maximizes v(x - c). Returns the winning index, the value, and
    /// whether that value lies in the base value group.
    pub fn best_approx(
        &self,
        x: &ExtElement<F>,
        candidates: &[HahnSeries<F>],
    ) -> Result<(usize, Coords, bool), OracleError> {
        if candidates.is_empty() {
            return Err(OracleError::EmptyCandidates);
        }
        let mut best: Option<(usize, Coords)> = None;
        for (i, c) in candidates.iter().enumerate() {
            let diff = self.sub(x, &self.from_series(c.clone()));
            let v = self
                .valuation(&diff)
                .ok_or_else(|| OracleError::Arithmetic("x equals a candidate".into()))?;
            best = match best {
                None => Some((i, v)),
                Some((_, bv)) if v > bv => Some((i, v)),
                Some((bi, bv)) => Some((bi, bv)),
            };
        }
        let (i, v) = best.unwrap();
        let in_group = self.group.contains(&v);
        Ok((i, v, in_group))
    }
}

/// Polynomials over the series field, coefficient list from degree 0 up.
pub type SeriesPoly<F> = Vec<HahnSeries<F>>;

/// Formal derivative; the scalar i is reduced in the coefficient field.
pub fn poly_derivative<F: Coeffs>(poly: &[HahnSeries<F>], field: &F) -> SeriesPoly<F> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&field.from_u64(i as u64)))
        .collect()
}

/// Evaluates a polynomial with series coefficients at an extension
/// element.
pub fn poly_eval<F: Coeffs>(
    ext: &ExtField<F>,
    poly: &[HahnSeries<F>],
    z: &ExtElement<F>,
) -> ExtElement<F> {
    let mut acc = ext.zero();
    for c in poly.iter().rev() {
        acc = ext.mul(&acc, z);
        acc = ext.add(&acc, &ext.from_series(c.clone()));
    }
    acc
}

/// Values of the coefficients of a polynomial, for the Newton polygon.
pub fn poly_coeff_values<F: Coeffs>(poly: &[HahnSeries<F>]) -> Vec<Option<Coords>> {
    poly.iter().map(|c| c.valuation().cloned()).collect()
}

/// Minimal polynomial of c * x^j over the base field, computed as the
/// product over the conjugates of x. The computation happens in the
/// extension and the result is checked to be base-rational.
pub fn minimal_poly_of_scaled_power<F: Coeffs>(
    ext: &ExtField<F>,
    conjugates_of_x: &[ExtElement<F>],
    c: &HahnSeries<F>,
    j: u64,
) -> Result<SeriesPoly<F>, OracleError> {
    // product of (X - c * sigma(x)^j) as a polynomial in X with
    // ExtElement coefficients
    let mut coeffs: Vec<ExtElement<F>> =
        vec![ext.from_series(HahnSeries::one(ext.field().clone(), ext.group().clone()))];
    for sigma_x in conjugates_of_x {
        let root = ext.scale(&ext.pow(sigma_x, j), c);
        // multiply (sum a_i X^i) by (X - root)
        let mut next: Vec<ExtElement<F>> = vec![ext.zero(); coeffs.len() + 1];
        for (i, a) in coeffs.iter().enumerate() {
            next[i + 1] = ext.add(&next[i + 1], a);
            let m = ext.mul(a, &root);
            next[i] = ext.sub(&next[i], &m);
        }
        coeffs = next;
    }
    coeffs
        .into_iter()
        .map(|a| {
            if ext.is_rational(&a) {
                Ok(a.coeffs.into_iter().next().unwrap())
            } else {
                Err(OracleError::Arithmetic(
                    "conjugate product is not base-rational".into(),
                ))
            }
        })
        .collect()
}

/// The conjugates of the Artin-Schreier generator: theta + k for k in F_p.
pub fn artin_schreier_conjugates<F: Coeffs>(ext: &ExtField<F>) -> Vec<ExtElement<F>> {
    let p = ext.field().p();
    let theta = ext.generator();
    (0..p)
        .map(|k| {
            let kc = HahnSeries::monomial(
                ext.field().clone(),
                ext.group().clone(),
                ext.field().from_u64(k),
                Coords::zero(ext.group().rank()),
            )
            .unwrap();
            ext.add(&theta, &ext.from_series(kc))
        })
        .collect()
}

/// The conjugates of a Kummer generator over the prime field: zeta^i *
/// eta, with zeta a primitive q-th root of unity in F_p.
pub fn kummer_conjugates(
    ext: &ExtField<PrimeField>,
    q: u64,
) -> Result<Vec<ExtElement<PrimeField>>, OracleError> {
    let zeta = ext
        .field()
        .root_of_unity(q)
        .ok_or_else(|| OracleError::OutOfScope(format!("no q-th roots of unity for q={q}")))?;
    let eta = ext.generator();
    let mut out = Vec::with_capacity(q as usize);
    let mut z = 1u64;
    for _ in 0..q {
        let zc = HahnSeries::monomial(
            *ext.field(),
            ext.group().clone(),
            z,
            Coords::zero(ext.group().rank()),
        )
        .unwrap();
        out.push(ext.scale(&eta, &zc));
        z = ext.field().mul(&z, &zeta);
    }
    Ok(out)
}
