//! Concrete oracle instances paired with classifier descriptors, the full
//! per-instance oracle pipeline, and the oracle-versus-classifier
//! comparison used by the equivalence suite.

use rand::prelude::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use valdiff_core::extensions::PrimeExtension;
use valdiff_core::gen::builders;
use valdiff_core::kahler::kahler_of;
use valdiff_core::ordered_groups::{Coords, LevelDescriptor, OrderedGroup};
use valdiff_core::rational::{rat_u64, Rat};

use num_traits::{One, Zero};

use crate::classify::{
    classify_artin_schreier, classify_kummer, ideal_min_value, ideal_power_nontrivial,
    verify_ideal_decision, OracleReport, OracleShape,
};
use crate::ext::{
    artin_schreier_conjugates, kummer_conjugates, minimal_poly_of_scaled_power, poly_derivative,
    poly_eval, ExtField, Relation,
};
use crate::field::{
    artin_schreier_has_root_fp, artin_schreier_has_root_ratfn, Coeffs, PrimeField, RatFuncField,
};
use crate::newton::newton_root_values;
use crate::series::HahnSeries;
use crate::OracleError;

/// A concrete relation over one of the two coefficient fields.
#[derive(Debug, Clone)]
pub enum AnyRelation {
    Fp {
        field: PrimeField,
        group: OrderedGroup,
        rel: Relation<PrimeField>,
    },
    FpU {
        field: RatFuncField,
        group: OrderedGroup,
        rel: Relation<RatFuncField>,
    },
}

/// An oracle instance together with the descriptor the classifier sees.
#[derive(Debug, Clone)]
pub struct TestInstance {
    pub label: String,
    pub descriptor: PrimeExtension,
    pub relation: AnyRelation,
}

/// Runs the full oracle pipeline on a relation: classification of the
/// shape, Newton-polygon cross-check of the generator value, and the
/// ideal or annihilator computation that decides vanishing.
pub fn oracle_report(relation: &AnyRelation, j: Option<u32>) -> Result<OracleReport, OracleError> {
    match relation {
        AnyRelation::Fp { field, group, rel } => match rel {
            Relation::ArtinSchreier { b } => {
                let (shape, b_final) = classify_artin_schreier(field, group, b, |&beta| {
                    Some(artin_schreier_has_root_fp(beta))
                })?;
                finish_artin_schreier(field, group, shape, b_final, j)
            }
            Relation::Kummer { q, b } => {
                let shape = classify_kummer(field, group, *q, b)?;
                finish_kummer(field, group, *q, b, shape)
            }
        },
        AnyRelation::FpU { field, group, rel } => match rel {
            Relation::ArtinSchreier { b } => {
                let (shape, b_final) = classify_artin_schreier(field, group, b, |beta| {
                    artin_schreier_has_root_ratfn(field, beta)
                })?;
                finish_artin_schreier(field, group, shape, b_final, j)
            }
            Relation::Kummer { .. } => Err(OracleError::OutOfScope(
                "Kummer instances run over the prime field".into(),
            )),
        },
    }
}

fn finish_artin_schreier<F: Coeffs>(
    field: &F,
    group: &OrderedGroup,
    shape: OracleShape,
    b_final: HahnSeries<F>,
    j: Option<u32>,
) -> Result<OracleReport, OracleError> {
    let p = field.p();
    match shape {
        OracleShape::Ramified { delta } => {
            newton_check_as(&b_final, p, &delta)?;
            let ext = ExtField::new(
                field.clone(),
                group.clone(),
                Relation::ArtinSchreier { b: b_final },
                delta.clone(),
            );
            relation_sanity_as(&ext)?;
            let jj = j.unwrap_or(1) as i64;
            let offset = delta.scale_int(jj - 1);
            let tau = -&delta;
            let vq = Coords::zero(group.rank());
            let nontrivial = ideal_power_nontrivial(group, &offset, &tau, p, &vq)?;
            verify_ideal_decision(group, &offset, &tau, p, &vq, nontrivial, 10)?;
            let ideal_min = ideal_min_value(group, &offset, &tau);
            Ok(OracleReport {
                e: p,
                f: 1,
                d: 1,
                shape: OracleShape::Ramified {
                    delta: delta.clone(),
                },
                gen_value: delta,
                ideal_nontrivial: Some(nontrivial),
                ideal_min,
                annihilator: None,
                is_zero: !nontrivial,
            })
        }
        OracleShape::InertialSeparable => {
            let zero = Coords::zero(group.rank());
            newton_check_as(&b_final, p, &zero)?;
            let ext = ExtField::new(
                field.clone(),
                group.clone(),
                Relation::ArtinSchreier { b: b_final },
                zero.clone(),
            );
            relation_sanity_as(&ext)?;
            // derivative of the minimal polynomial of theta itself
            let one = HahnSeries::one(field.clone(), group.clone());
            let ann = annihilator_of_scaled_as(&ext, &one, 1)?;
            Ok(OracleReport {
                e: 1,
                f: p,
                d: 1,
                shape: OracleShape::InertialSeparable,
                gen_value: zero,
                ideal_nontrivial: None,
                ideal_min: None,
                annihilator: Some(ann.clone()),
                is_zero: ann.is_zero(),
            })
        }
        OracleShape::InertialInseparable { v_gen } => {
            newton_check_as(&b_final, p, &v_gen)?;
            let ext = ExtField::new(
                field.clone(),
                group.clone(),
                Relation::ArtinSchreier { b: b_final },
                v_gen.clone(),
            );
            relation_sanity_as(&ext)?;
            // ring generator is ctilde * theta with v(ctilde) = -v(theta)
            let scale = HahnSeries::monomial(field.clone(), group.clone(), field.one(), -&v_gen)?;
            let ann = annihilator_of_scaled_as(&ext, &scale, 1)?;
            Ok(OracleReport {
                e: 1,
                f: p,
                d: 1,
                shape: OracleShape::InertialInseparable {
                    v_gen: v_gen.clone(),
                },
                gen_value: v_gen,
                ideal_nontrivial: None,
                ideal_min: None,
                annihilator: Some(ann.clone()),
                is_zero: ann.is_zero(),
            })
        }
    }
}

fn finish_kummer(
    field: &PrimeField,
    group: &OrderedGroup,
    q: u64,
    b: &HahnSeries<PrimeField>,
    shape: OracleShape,
) -> Result<OracleReport, OracleError> {
    match shape {
        OracleShape::Ramified { delta } => {
            newton_check_kummer(b, q, &delta)?;
            let ext = ExtField::new(
                *field,
                group.clone(),
                Relation::Kummer { q, b: b.clone() },
                delta.clone(),
            );
            relation_sanity_kummer(&ext, q)?;
            let tau = Coords::zero(group.rank());
            let vq = Coords::zero(group.rank()); // equal characteristic: v(q) = 0
            let nontrivial = ideal_power_nontrivial(group, &delta, &tau, q, &vq)?;
            verify_ideal_decision(group, &delta, &tau, q, &vq, nontrivial, 10)?;
            let ideal_min = ideal_min_value(group, &delta, &tau);
            Ok(OracleReport {
                e: q,
                f: 1,
                d: 1,
                shape: OracleShape::Ramified {
                    delta: delta.clone(),
                },
                gen_value: delta,
                ideal_nontrivial: Some(nontrivial),
                ideal_min,
                annihilator: None,
                is_zero: !nontrivial,
            })
        }
        OracleShape::InertialSeparable => {
            let w = b
                .valuation()
                .expect("nonzero radicand")
                .scale_rat(&(Rat::one() / rat_u64(q)));
            let ext = ExtField::new(
                *field,
                group.clone(),
                Relation::Kummer { q, b: b.clone() },
                w.clone(),
            );
            relation_sanity_kummer(&ext, q)?;
            // unit generator eta * t^(-w); its minimal polynomial has
            // derivative q * (unit)^(q-1), a unit
            let scale = HahnSeries::monomial(*field, group.clone(), 1, -&w)?;
            let conj = kummer_conjugates(&ext, q)?;
            let mp = minimal_poly_of_scaled_power(&ext, &conj, &scale, 1)?;
            let dp = poly_derivative(&mp, ext.field());
            let gen = ext.scale(&ext.generator(), &scale);
            let du = poly_eval(&ext, &dp, &gen);
            let ann = ext
                .valuation(&du)
                .ok_or_else(|| OracleError::Arithmetic("vanishing derivative".into()))?;
            Ok(OracleReport {
                e: 1,
                f: q,
                d: 1,
                shape: OracleShape::InertialSeparable,
                gen_value: w,
                ideal_nontrivial: None,
                ideal_min: None,
                annihilator: Some(ann.clone()),
                is_zero: ann.is_zero(),
            })
        }
        OracleShape::InertialInseparable { .. } => Err(OracleError::OutOfScope(
            "inseparable Kummer residue extensions do not occur for q prime to p".into(),
        )),
    }
}

/// Value of the derivative of the minimal polynomial of c * theta^j,
/// computed symbolically from the conjugates.
fn annihilator_of_scaled_as<F: Coeffs>(
    ext: &ExtField<F>,
    c: &HahnSeries<F>,
    j: u64,
) -> Result<Coords, OracleError> {
    let conj = artin_schreier_conjugates(ext);
    let mp = minimal_poly_of_scaled_power(ext, &conj, c, j)?;
    let dp = poly_derivative(&mp, ext.field());
    let gen = ext.scale(&ext.pow(&ext.generator(), j), c);
    let at = poly_eval(ext, &dp, &gen);
    ext.valuation(&at)
        .ok_or_else(|| OracleError::Arithmetic("vanishing derivative".into()))
}

/// The defining relation must evaluate to zero on the generator.
fn relation_sanity_as<F: Coeffs>(ext: &ExtField<F>) -> Result<(), OracleError> {
    let theta = ext.generator();
    let p = ext.field().p();
    let lhs = ext.sub(&ext.pow(&theta, p), &theta);
    let rhs = ext.from_series(ext.relation().b().clone());
    if ext.is_zero(&ext.sub(&lhs, &rhs)) {
        Ok(())
    } else {
        Err(OracleError::Arithmetic(
            "relation fails on generator".into(),
        ))
    }
}

fn relation_sanity_kummer(ext: &ExtField<PrimeField>, q: u64) -> Result<(), OracleError> {
    let eta = ext.generator();
    let lhs = ext.pow(&eta, q);
    let rhs = ext.from_series(ext.relation().b().clone());
    if ext.is_zero(&ext.sub(&lhs, &rhs)) {
        Ok(())
    } else {
        Err(OracleError::Arithmetic(
            "relation fails on generator".into(),
        ))
    }
}

/// Newton polygon of X^p - X - b must give the established generator
/// value on all p roots (ramified/inseparable) or split off zero-value
/// roots (separable unit case).
fn newton_check_as<F: Coeffs>(
    b: &HahnSeries<F>,
    p: u64,
    expected: &Coords,
) -> Result<(), OracleError> {
    let rank = expected.len();
    let vb = match b.valuation() {
        Some(v) => v.clone(),
        None => return Err(OracleError::Arithmetic("zero right-hand side".into())),
    };
    let mut values: Vec<Option<Coords>> = vec![None; p as usize + 1];
    values[0] = Some(vb.clone());
    values[1] = Some(Coords::zero(rank));
    values[p as usize] = Some(Coords::zero(rank));
    let slopes = newton_root_values(&values).map_err(OracleError::Arithmetic)?;
    let ok = if vb.is_negative() {
        slopes.len() == 1 && slopes[0].multiplicity == p as usize && &slopes[0].value == expected
    } else {
        // unit case: the generator has value 0
        slopes.iter().any(|s| s.value.is_zero()) && expected.is_zero()
    };
    if ok {
        Ok(())
    } else {
        Err(OracleError::Arithmetic(format!(
            "polygon disagrees with generator value {expected}"
        )))
    }
}

fn newton_check_kummer(
    b: &HahnSeries<PrimeField>,
    q: u64,
    expected: &Coords,
) -> Result<(), OracleError> {
    let vb = b.valuation().expect("nonzero radicand").clone();
    let rank = expected.len();
    let mut values: Vec<Option<Coords>> = vec![None; q as usize + 1];
    values[0] = Some(vb);
    values[q as usize] = Some(Coords::zero(rank));
    let slopes = newton_root_values(&values).map_err(OracleError::Arithmetic)?;
    if slopes.len() == 1 && slopes[0].multiplicity == q as usize && &slopes[0].value == expected {
        Ok(())
    } else {
        Err(OracleError::Arithmetic(format!(
            "polygon disagrees with generator value {expected}"
        )))
    }
}

/// Result of comparing the oracle against the classifier on one instance.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub label: String,
    pub oracle: OracleReport,
    pub classifier_is_zero: bool,
    pub matched: bool,
    pub detail: String,
}

pub fn compare_instance(inst: &TestInstance) -> Result<Comparison, OracleError> {
    let report = oracle_report(&inst.relation, inst.descriptor.j)?;
    let verdict = kahler_of(&inst.descriptor)
        .map_err(|e| OracleError::Arithmetic(format!("classifier failed: {e}")))?;
    let mut mismatches = Vec::new();
    if report.e != inst.descriptor.e {
        mismatches.push(format!("e: oracle {} vs {}", report.e, inst.descriptor.e));
    }
    if report.f != inst.descriptor.f {
        mismatches.push(format!("f: oracle {} vs {}", report.f, inst.descriptor.f));
    }
    if report.d != inst.descriptor.d {
        mismatches.push(format!("d: oracle {} vs {}", report.d, inst.descriptor.d));
    }
    if let OracleShape::Ramified { delta } = &report.shape {
        match &inst.descriptor.value_data {
            Some(ag) => {
                if ag.delta() != delta {
                    mismatches.push(format!("delta: oracle {} vs {}", delta, ag.delta()));
                }
            }
            None => mismatches.push("delta: descriptor carries none".into()),
        }
    }
    if let OracleShape::InertialInseparable { v_gen } = &report.shape {
        match &inst.descriptor.v_theta {
            Some(vt) => {
                if vt.coords() != v_gen {
                    mismatches.push(format!("v(theta): oracle {} vs {}", v_gen, vt.coords()));
                }
            }
            None => mismatches.push("v(theta): descriptor carries none".into()),
        }
    }
    if report.is_zero != verdict.is_zero {
        mismatches.push(format!(
            "vanishing: oracle {} vs classifier {}",
            report.is_zero, verdict.is_zero
        ));
    }
    Ok(Comparison {
        label: inst.label.clone(),
        oracle: report,
        classifier_is_zero: verdict.is_zero,
        matched: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            "ok".into()
        } else {
            mismatches.join("; ")
        },
    })
}

/// The three base groups of the equivalence batch.
pub fn batch_groups() -> Vec<(String, OrderedGroup)> {
    vec![
        ("Z".into(), builders::group_z()),
        (
            "(1/2)Z".into(),
            builders::group_cyclic(Rat::new(1.into(), 2.into())),
        ),
        ("Z[1/3]".into(), builders::group_z_inv(3)),
    ]
}

/// Deterministic batch of equal-characteristic instances across the batch
/// groups, the primes 2, 3, 5, and all classifiable shapes.
pub fn gen_instances(seed: u64, count: usize) -> Vec<TestInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = batch_groups();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (gname, group) = &groups[rng.random_range(0..groups.len())];
        let p = *[2u64, 3, 5].choose(&mut rng).unwrap();
        let kind = rng.random_range(0..5);
        let inst = match kind {
            0 => gen_as_ramified(&mut rng, gname, group, p),
            1 => Some(gen_as_separable(&mut rng, gname, group, p)),
            2 => Some(gen_as_inseparable(&mut rng, gname, group, p)),
            3 => gen_kummer_ramified(&mut rng, gname, group, p),
            _ => gen_kummer_inertial(&mut rng, gname, group, p),
        };
        if let Some(inst) = inst {
            out.push(inst);
        }
    }
    out
}

/// The generator of the unique level of a rank-one batch group.
fn level_gen(group: &OrderedGroup) -> Rat {
    match group.level(0) {
        LevelDescriptor::Cyclic(g) => g.clone(),
        LevelDescriptor::Localized(g, _) => g.clone(),
        LevelDescriptor::FullRationals => Rat::one(),
        LevelDescriptor::Zero => Rat::zero(),
    }
}

/// A negative value in the group that is not p-divisible, if the group
/// admits one.
fn negative_not_p_divisible(rng: &mut ChaCha8Rng, group: &OrderedGroup, p: u64) -> Option<Coords> {
    if group.is_p_divisible(p) {
        return None;
    }
    let g = level_gen(group);
    let k = loop {
        let k = rng.random_range(1..=9u64);
        if k % p != 0 {
            break k;
        }
    };
    let scale = match group.level(0) {
        LevelDescriptor::Localized(_, s) => {
            let sp = *s.iter().next().unwrap();
            let e = rng.random_range(0..=2u32);
            rat_u64(sp.pow(e))
        }
        _ => Rat::one(),
    };
    Some(Coords(vec![-(g * rat_u64(k)) / scale]))
}

fn fp_mono(field: PrimeField, group: &OrderedGroup, c: u64, e: Coords) -> HahnSeries<PrimeField> {
    HahnSeries::monomial(field, group.clone(), c, e).unwrap()
}

/// Adds 0 to 2 extra terms with exponents strictly above the current
/// leading exponent, so the lead is preserved.
fn with_tail(
    rng: &mut ChaCha8Rng,
    field: PrimeField,
    group: &OrderedGroup,
    mut b: HahnSeries<PrimeField>,
) -> HahnSeries<PrimeField> {
    let g = level_gen(group);
    let lead = b.valuation().expect("nonzero series").clone();
    for _ in 0..rng.random_range(0..=2u32) {
        let c = rng.random_range(1..field.p);
        let k = rng.random_range(1..=4u64);
        let e = &lead + &Coords(vec![&g * rat_u64(k)]);
        b = b.add(&fp_mono(field, group, c, e));
    }
    b
}

fn gen_as_ramified(
    rng: &mut ChaCha8Rng,
    gname: &str,
    group: &OrderedGroup,
    p: u64,
) -> Option<TestInstance> {
    let vb = negative_not_p_divisible(rng, group, p)?;
    let field = PrimeField::new(p);
    let lead = rng.random_range(1..p);
    let mut b = with_tail(rng, field, group, fp_mono(field, group, lead, vb.clone()));
    // optionally prepend a reducible head below the lead, to exercise the
    // reduction loop: a term t^(p*w0) with p*w0 < vb < w0 is cancelled in
    // one step, leaving the intended lead
    if rng.random_bool(0.4) {
        let g = level_gen(group);
        let head_w0 = (1..=24u64)
            .map(|m| Coords(vec![-(&g * rat_u64(m))]))
            .find(|w0| {
                let pw0 = w0.scale_int(p as i64);
                pw0.lex_cmp(&vb) == std::cmp::Ordering::Less
                    && vb.lex_cmp(w0) == std::cmp::Ordering::Less
            });
        if let Some(w0) = head_w0 {
            b = b.add(&fp_mono(field, group, 1, w0.scale_int(p as i64)));
        }
    }
    let delta = vb.scale_rat(&(Rat::one() / rat_u64(p)));
    let j = if p > 2 && rng.random_bool(0.5) {
        Some(rng.random_range(1..p as u32))
    } else {
        None
    };
    let descriptor = builders::as_ramified(group, p, delta, j).ok()?;
    Some(TestInstance {
        label: format!("as-ramified p={p} over {gname}"),
        descriptor,
        relation: AnyRelation::Fp {
            field,
            group: group.clone(),
            rel: Relation::ArtinSchreier { b },
        },
    })
}

fn gen_as_separable(
    rng: &mut ChaCha8Rng,
    gname: &str,
    group: &OrderedGroup,
    p: u64,
) -> TestInstance {
    let field = PrimeField::new(p);
    let beta = rng.random_range(1..p);
    let b = with_tail(
        rng,
        field,
        group,
        fp_mono(field, group, beta, Coords::zero(1)),
    );
    let descriptor = builders::as_inertial(group, p, group.zero()).unwrap();
    TestInstance {
        label: format!("as-inertial-separable p={p} over {gname}"),
        descriptor,
        relation: AnyRelation::Fp {
            field,
            group: group.clone(),
            rel: Relation::ArtinSchreier { b },
        },
    }
}

fn gen_as_inseparable(
    rng: &mut ChaCha8Rng,
    gname: &str,
    group: &OrderedGroup,
    p: u64,
) -> TestInstance {
    // b = u * t^(p*w) with w < 0 in the group: the leading coefficient has
    // no p-th root in F_p(u)
    let field = RatFuncField::new(p);
    let g = level_gen(group);
    let k = rng.random_range(1..=4u64);
    let w = Coords(vec![-(g * rat_u64(k))]);
    let b = HahnSeries::monomial(field, group.clone(), field.u(), w.scale_int(p as i64)).unwrap();
    let v_theta = group.element(w.0.clone()).unwrap();
    let descriptor = builders::as_inertial(group, p, v_theta).unwrap();
    TestInstance {
        label: format!("as-inertial-inseparable p={p} over {gname}"),
        descriptor,
        relation: AnyRelation::FpU {
            field,
            group: group.clone(),
            rel: Relation::ArtinSchreier { b },
        },
    }
}

fn gen_kummer_ramified(
    rng: &mut ChaCha8Rng,
    gname: &str,
    group: &OrderedGroup,
    p: u64,
) -> Option<TestInstance> {
    if p == 2 {
        return None; // no prime q dividing p - 1
    }
    let q = 2u64;
    let vb = negative_not_p_divisible(rng, group, q)?;
    let vb = if rng.random_bool(0.5) {
        vb.scale_int(-1)
    } else {
        vb
    };
    let field = PrimeField::new(p);
    let lead = rng.random_range(1..p);
    let b = with_tail(rng, field, group, fp_mono(field, group, lead, vb.clone()));
    let delta = vb.scale_rat(&(Rat::one() / rat_u64(q)));
    let descriptor = builders::kummer_ramified_tame(group, q, p, delta).ok()?;
    Some(TestInstance {
        label: format!("kummer-ramified q={q} p={p} over {gname}"),
        descriptor,
        relation: AnyRelation::Fp {
            field,
            group: group.clone(),
            rel: Relation::Kummer { q, b },
        },
    })
}

fn gen_kummer_inertial(
    rng: &mut ChaCha8Rng,
    gname: &str,
    group: &OrderedGroup,
    p: u64,
) -> Option<TestInstance> {
    if p == 2 {
        return None;
    }
    let q = 2u64;
    let field = PrimeField::new(p);
    // a residue that is not a q-th power
    let beta = (1..p).find(|&x| field.qth_root(x, q).is_none())?;
    let b = with_tail(
        rng,
        field,
        group,
        fp_mono(field, group, beta, Coords::zero(1)),
    );
    let descriptor = builders::kummer_inertial_tame(group, q, p).ok()?;
    Some(TestInstance {
        label: format!("kummer-inertial q={q} p={p} over {gname}"),
        descriptor,
        relation: AnyRelation::Fp {
            field,
            group: group.clone(),
            rel: Relation::Kummer { q, b },
        },
    })
}

/// One derivative-formula comparison: the symbolic derivative of the
/// minimal polynomial of the scaled generator against the value the
/// classifier's case table predicts.
#[derive(Debug, Clone)]
pub struct DerivativeCheck {
    pub label: String,
    pub symbolic: Coords,
    pub predicted: Coords,
    pub matched: bool,
}

/// Runs derivative comparisons on a deterministic family of instances:
/// Artin-Schreier plain/scaled/power-scaled generators and Kummer scaled
/// generators, with random scaling monomials.
pub fn derivative_checks(seed: u64, count: usize) -> Result<Vec<DerivativeCheck>, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = batch_groups();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (gname, group) = &groups[rng.random_range(0..groups.len())];
        let p = *[2u64, 3, 5].choose(&mut rng).unwrap();
        let field = PrimeField::new(p);
        let g = level_gen(group);
        let vc_k = rng.random_range(0..=4i64);
        let sign = if rng.random_bool(0.5) { 1 } else { -1 };
        let vc = Coords(vec![&g * valdiff_core::rational::rat_int(sign * vc_k)]);
        let c = fp_mono(field, group, rng.random_range(1..p), vc.clone());
        let vc_el = group.element(vc.0.clone()).unwrap();

        let which = rng.random_range(0..3);
        let check = match which {
            0 => {
                // Artin-Schreier inertial, scaled by c
                let beta = rng.random_range(1..p);
                let b = fp_mono(field, group, beta, Coords::zero(1));
                let ext = ExtField::new(
                    field,
                    group.clone(),
                    Relation::ArtinSchreier { b },
                    Coords::zero(1),
                );
                let symbolic = annihilator_of_scaled_as(&ext, &c, 1)?;
                let descriptor = builders::as_inertial(group, p, group.zero()).unwrap();
                let predicted = valdiff_core::extensions::derivative_value(&descriptor, &vc_el)
                    .map_err(|e| OracleError::Arithmetic(e.to_string()))?;
                DerivativeCheck {
                    label: format!("as-inertial c-scaled p={p} over {gname}"),
                    matched: &symbolic == predicted.coords(),
                    symbolic,
                    predicted: predicted.coords().clone(),
                }
            }
            1 => {
                // Artin-Schreier ramified, scaled power generator
                let Some(vb) = negative_not_p_divisible(&mut rng, group, p) else {
                    continue;
                };
                let b = fp_mono(field, group, 1, vb.clone());
                let delta = vb.scale_rat(&(Rat::one() / rat_u64(p)));
                let ext = ExtField::new(
                    field,
                    group.clone(),
                    Relation::ArtinSchreier { b },
                    delta.clone(),
                );
                let j = rng.random_range(1..p.max(2)) as u32;
                let symbolic = annihilator_of_scaled_as(&ext, &c, j as u64)?;
                let descriptor = builders::as_ramified(group, p, delta, Some(j)).unwrap();
                let predicted = valdiff_core::extensions::derivative_value(&descriptor, &vc_el)
                    .map_err(|e| OracleError::Arithmetic(e.to_string()))?;
                DerivativeCheck {
                    label: format!("as-ramified j={j} p={p} over {gname}"),
                    matched: &symbolic == predicted.coords(),
                    symbolic,
                    predicted: predicted.coords().clone(),
                }
            }
            _ => {
                // Kummer ramified, scaled generator
                if p == 2 {
                    continue;
                }
                let q = 2u64;
                let Some(vb) = negative_not_p_divisible(&mut rng, group, q) else {
                    continue;
                };
                let b = fp_mono(field, group, 1, vb.clone());
                let delta = vb.scale_rat(&(Rat::one() / rat_u64(q)));
                let ext = ExtField::new(
                    field,
                    group.clone(),
                    Relation::Kummer { q, b },
                    delta.clone(),
                );
                let conj = kummer_conjugates(&ext, q)?;
                let mp = minimal_poly_of_scaled_power(&ext, &conj, &c, 1)?;
                let dp = poly_derivative(&mp, ext.field());
                let gen = ext.scale(&ext.generator(), &c);
                let at = poly_eval(&ext, &dp, &gen);
                let symbolic = ext
                    .valuation(&at)
                    .ok_or_else(|| OracleError::Arithmetic("vanishing derivative".into()))?;
                let descriptor = builders::kummer_ramified_tame(group, q, p, delta).unwrap();
                let predicted = valdiff_core::extensions::derivative_value(&descriptor, &vc_el)
                    .map_err(|e| OracleError::Arithmetic(e.to_string()))?;
                DerivativeCheck {
                    label: format!("kummer-ramified q={q} p={p} over {gname}"),
                    matched: &symbolic == predicted.coords(),
                    symbolic,
                    predicted: predicted.coords().clone(),
                }
            }
        };
        out.push(check);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use valdiff_core::rational::{rat, rat_int};

    #[test]
    fn frozen_first_example() {
        // theta^2 - theta = t^(-1) over F_2((t)): e = 2, delta = -1/2,
        // ideal nontrivial, classifier nonzero
        let field = PrimeField::new(2);
        let group = builders::group_z();
        let b = fp_mono(field, &group, 1, Coords(vec![rat_int(-1)]));
        let rel = AnyRelation::Fp {
            field,
            group: group.clone(),
            rel: Relation::ArtinSchreier { b },
        };
        let report = oracle_report(&rel, None).unwrap();
        assert_eq!((report.e, report.f, report.d), (2, 1, 1));
        assert_eq!(report.gen_value, Coords(vec![rat(-1, 2)]));
        assert_eq!(report.ideal_nontrivial, Some(true));
        // the ideal is principal, generated at value 1
        assert_eq!(report.ideal_min, Some(Coords(vec![rat_int(1)])));
        assert!(!report.is_zero);
        // and the group generated by delta mod the base has positive
        // generator 1/2
        let descriptor = builders::as_ramified(&group, 2, Coords(vec![rat(-1, 2)]), None).unwrap();
        assert!(!kahler_of(&descriptor).unwrap().is_zero);
    }

    #[test]
    fn frozen_kummer_example() {
        // eta^2 = t over F_3((t)): nonzero since Z is discrete and v2 = 0
        let field = PrimeField::new(3);
        let group = builders::group_z();
        let b = fp_mono(field, &group, 1, Coords(vec![rat_int(1)]));
        let rel = AnyRelation::Fp {
            field,
            group: group.clone(),
            rel: Relation::Kummer { q: 2, b },
        };
        let report = oracle_report(&rel, None).unwrap();
        assert_eq!((report.e, report.f, report.d), (2, 1, 1));
        assert_eq!(report.gen_value, Coords(vec![rat(1, 2)]));
        assert_eq!(report.ideal_nontrivial, Some(true));
        // the dense analogue vanishes
        let group_d = builders::group_z_inv(3);
        let b2 = fp_mono(field, &group_d, 1, Coords(vec![rat_int(1)]));
        let rel2 = AnyRelation::Fp {
            field,
            group: group_d,
            rel: Relation::Kummer { q: 2, b: b2 },
        };
        let report2 = oracle_report(&rel2, None).unwrap();
        assert_eq!(report2.ideal_nontrivial, Some(false));
        // dense coset above zero: no least generator, not principal
        assert_eq!(report2.ideal_min, None);
        assert!(report2.is_zero);
    }

    #[test]
    fn batch_agrees_with_classifier() {
        let instances = gen_instances(1234, 60);
        assert!(instances.len() >= 60);
        for inst in &instances {
            let cmp = compare_instance(inst).unwrap();
            assert!(cmp.matched, "{}: {}", cmp.label, cmp.detail);
        }
    }

    #[test]
    fn derivative_batch_matches() {
        let checks = derivative_checks(99, 40).unwrap();
        for c in &checks {
            assert!(
                c.matched,
                "{}: symbolic {} vs predicted {}",
                c.label, c.symbolic, c.predicted
            );
        }
    }

    #[test]
    fn defect_regime_is_flagged() {
        // over F_3((t^(Z[1/3]))) the reduction of t^(-1) never exits
        let field = PrimeField::new(3);
        let group = builders::group_z_inv(3);
        let b = fp_mono(field, &group, 1, Coords(vec![rat_int(-1)]));
        let rel = AnyRelation::Fp {
            field,
            group,
            rel: Relation::ArtinSchreier { b },
        };
        assert!(matches!(
            oracle_report(&rel, None),
            Err(OracleError::DefectSuspected { .. })
        ));
    }
}
