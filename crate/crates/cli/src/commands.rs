//! Implementations of the subcommands.

use std::path::Path;

use valdiff_core::deeply_ramified::{equivalence_report, FieldDescriptor, Trivalent};
use valdiff_core::descriptor::{
    extension_to_raw, field_from_raw, group_from_raw, normalize_extension, tower_from_raw,
};
use valdiff_core::extensions::{
    classify_generator_case, theta_m_generator, validate, GeneratorCaseTag, PrimeExtension,
};
use valdiff_core::gen::builders;
use valdiff_core::kahler::{kahler_of, kahler_of_tower};
use valdiff_core::ordered_groups::{check_drvg, Coords};
use valdiff_core::rational::format_rat;

use valdiff_oracle::classify::OracleShape;
use valdiff_oracle::ext::Relation;
use valdiff_oracle::field::PrimeField;
use valdiff_oracle::instances::{
    compare_instance, gen_instances, oracle_report, AnyRelation, TestInstance,
};
use valdiff_oracle::series::HahnSeries;

use crate::input::{
    parse_toml, read_to_string, ClassifyFile, CliError, FieldFile, OracleFile, RawRelation,
    TowerFile,
};
use crate::report::{
    emit, ClassifyRecord, DrRecord, OracleRecord, StepRecord, TowerRecord, WitnessRecord,
};
use crate::Format;

fn classify_one(ext: &PrimeExtension) -> Result<ClassifyRecord, CliError> {
    let violations = validate(ext);
    if !violations.is_empty() {
        let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::Semantic(msgs.join("; ")));
    }
    let verdict = kahler_of(ext).map_err(|e| CliError::Semantic(e.to_string()))?;
    let (generator_case, union_form, j) = if ext.e == ext.degree && ext.d == 1 {
        match classify_generator_case(ext) {
            Ok(case) => (
                Some(format!("{:?}", case.tag)),
                Some(case.union_form),
                case.j,
            ),
            Err(_) => (None, None, None),
        }
    } else {
        (None, None, None)
    };
    let rule = match &verdict.descriptor {
        valdiff_core::kahler::KahlerDescriptor::Zero => "zero",
        valdiff_core::kahler::KahlerDescriptor::CyclicQuotient { .. } => "cyclic-quotient",
        valdiff_core::kahler::KahlerDescriptor::IdealQuotient { form, .. } => match form {
            valdiff_core::kahler::QuotientForm::PowerP => "ideal-quotient-p",
            valdiff_core::kahler::QuotientForm::QTimesPowerQ { .. } => "ideal-quotient-q",
        },
    };
    Ok(ClassifyRecord {
        case: verdict.case.id().to_string(),
        is_zero: verdict.is_zero,
        reason: verdict.reason.describe(),
        rule: rule.to_string(),
        generator_case,
        union_form,
        j,
        descriptor: extension_to_raw(ext),
    })
}

pub fn classify(path: &Path, format: Format) -> Result<u8, CliError> {
    let file: ClassifyFile = parse_toml(&read_to_string(path)?)?;
    if file.extension.is_empty() {
        return Err(CliError::Parse("no [[extension]] blocks".into()));
    }
    let mut all_zero = true;
    for raw in &file.extension {
        let ext = normalize_extension(raw).map_err(|e| CliError::Semantic(e.to_string()))?;
        let record = classify_one(&ext)?;
        all_zero &= record.is_zero;
        emit(format, &record, || record.human());
    }
    Ok(if all_zero { 0 } else { 1 })
}

pub fn classify_tower(path: &Path, format: Format) -> Result<u8, CliError> {
    let file: TowerFile = parse_toml(&read_to_string(path)?)?;
    let tower = tower_from_raw(&file).map_err(|e| CliError::Semantic(e.to_string()))?;
    let verdict = kahler_of_tower(&tower).map_err(|e| CliError::Semantic(e.to_string()))?;
    let record = TowerRecord {
        is_zero: verdict.is_zero,
        first_nonzero: verdict.first_nonzero,
        steps: verdict
            .steps
            .iter()
            .map(|s| StepRecord {
                index: s.index,
                case: s.case.id().to_string(),
                is_zero: s.is_zero,
            })
            .collect(),
    };
    emit(format, &record, || {
        let steps: Vec<String> = record
            .steps
            .iter()
            .map(|s| {
                format!(
                    "  step {}: {} -> {}",
                    s.index,
                    s.case,
                    if s.is_zero { "0" } else { "nonzero" }
                )
            })
            .collect();
        format!(
            "tower: omega = {}{}\n{}",
            if record.is_zero { "0" } else { "nonzero" },
            record
                .first_nonzero
                .map(|i| format!(" (first nonzero step {i})"))
                .unwrap_or_default(),
            steps.join("\n")
        )
    });
    Ok(if verdict.is_zero { 0 } else { 1 })
}

pub fn check_dr(path: &Path, format: Format) -> Result<u8, CliError> {
    let file: FieldFile = parse_toml(&read_to_string(path)?)?;
    let field: FieldDescriptor =
        field_from_raw(&file).map_err(|e| CliError::Semantic(e.to_string()))?;
    let report = equivalence_report(&field, &[]).map_err(|e| CliError::Semantic(e.to_string()))?;
    let record = DrRecord {
        verdict: report.dr.verdict.to_string(),
        drvg: match &report.dr.drvg {
            valdiff_core::ordered_groups::DrvgOutcome::Holds => "holds".to_string(),
            valdiff_core::ordered_groups::DrvgOutcome::DiscreteLevel(i) => {
                format!("fails: discrete component at level {i}")
            }
        },
        drvr: report.dr.drvr.to_string(),
        violations: report.dr.violations.iter().map(|v| v.to_string()).collect(),
        witnesses: report
            .witnesses
            .iter()
            .map(|w| WitnessRecord {
                violation: w.violation.to_string(),
                nonzero_confirmed: w.nonzero_confirmed,
                extension: extension_to_raw(&w.extension),
            })
            .collect(),
        partial: report.partial,
    };
    emit(format, &record, || {
        let mut lines = vec![format!("deeply ramified: {}", record.verdict)];
        lines.push(format!("  value-group condition: {}", record.drvg));
        lines.push(format!("  residue-frobenius condition: {}", record.drvr));
        for v in &record.violations {
            lines.push(format!("  violation: {v}"));
        }
        for w in &record.witnesses {
            lines.push(format!(
                "  witness for {}: omega {} (degree {} {})",
                w.violation,
                if w.nonzero_confirmed {
                    "nonzero, confirmed"
                } else {
                    "NOT confirmed"
                },
                w.extension.degree,
                w.extension.kind,
            ));
        }
        if record.partial {
            lines.push("  report partial: undecided inputs".into());
        }
        lines.join("\n")
    });
    Ok(report.dr.verdict.exit_code() as u8)
}

/// Builds the classifier descriptor matching an oracle classification of
/// an explicit relation.
fn descriptor_from_shape(
    rel: &RawRelation,
    shape: &OracleShape,
) -> Result<PrimeExtension, CliError> {
    let group = group_from_raw(&rel.group).map_err(|e| CliError::Semantic(e.to_string()))?;
    let p = rel.p;
    let sem = |e: String| CliError::Semantic(e);
    match (rel.kind.as_str(), shape) {
        ("artin-schreier", OracleShape::Ramified { delta }) => {
            builders::as_ramified(&group, p, delta.clone(), rel.j).map_err(|e| sem(e.to_string()))
        }
        ("artin-schreier", OracleShape::InertialSeparable) => {
            builders::as_inertial(&group, p, group.zero()).map_err(|e| sem(e.to_string()))
        }
        ("artin-schreier", OracleShape::InertialInseparable { v_gen }) => {
            let el = group
                .element(v_gen.0.clone())
                .map_err(|e| sem(e.to_string()))?;
            builders::as_inertial(&group, p, el).map_err(|e| sem(e.to_string()))
        }
        ("kummer", OracleShape::Ramified { delta }) => {
            let q = rel
                .q
                .ok_or_else(|| sem("kummer relation requires q".into()))?;
            builders::kummer_ramified_tame(&group, q, p, delta.clone())
                .map_err(|e| sem(e.to_string()))
        }
        ("kummer", OracleShape::InertialSeparable) => {
            let q = rel
                .q
                .ok_or_else(|| sem("kummer relation requires q".into()))?;
            builders::kummer_inertial_tame(&group, q, p).map_err(|e| sem(e.to_string()))
        }
        (k, s) => Err(sem(format!(
            "unsupported relation kind {k} with shape {s:?}"
        ))),
    }
}

fn relation_from_raw(rel: &RawRelation) -> Result<AnyRelation, CliError> {
    let group = group_from_raw(&rel.group).map_err(|e| CliError::Semantic(e.to_string()))?;
    let field = PrimeField::new(rel.p);
    let mut b = HahnSeries::zero(field, group.clone());
    for term in &rel.b {
        let exp = valdiff_core::descriptor::coords_from_raw(&term.exp)
            .map_err(|e| CliError::Semantic(e.to_string()))?;
        let mono = HahnSeries::monomial(field, group.clone(), term.coeff % rel.p, exp)
            .map_err(|e| CliError::Semantic(e.to_string()))?;
        b = b.add(&mono);
    }
    let r = match rel.kind.as_str() {
        "artin-schreier" => Relation::ArtinSchreier { b },
        "kummer" => Relation::Kummer {
            q: rel
                .q
                .ok_or_else(|| CliError::Semantic("kummer relation requires q".into()))?,
            b,
        },
        other => return Err(CliError::Semantic(format!("unknown relation kind {other}"))),
    };
    Ok(AnyRelation::Fp {
        field,
        group,
        rel: r,
    })
}

pub fn oracle_verify(
    path: &Path,
    format: Format,
    seed: Option<u64>,
    jobs: usize,
) -> Result<u8, CliError> {
    let mut file: OracleFile = parse_toml(&read_to_string(path)?)?;
    if let Some(s) = seed {
        file.seed = s;
    }
    let mut records = Vec::new();

    // explicit relations first, in input order
    for (i, raw) in file.relation.iter().enumerate() {
        let relation = relation_from_raw(raw)?;
        match oracle_report(&relation, raw.j) {
            Ok(report) => {
                let descriptor = descriptor_from_shape(raw, &report.shape)?;
                let inst = TestInstance {
                    label: format!("relation #{i} ({})", raw.kind),
                    descriptor,
                    relation,
                };
                let cmp = compare_instance(&inst).map_err(|e| CliError::Semantic(e.to_string()))?;
                records.push(OracleRecord {
                    label: cmp.label,
                    matched: cmp.matched,
                    oracle_e: cmp.oracle.e,
                    oracle_f: cmp.oracle.f,
                    oracle_d: cmp.oracle.d,
                    oracle_is_zero: cmp.oracle.is_zero,
                    classifier_is_zero: cmp.classifier_is_zero,
                    detail: cmp.detail,
                });
            }
            Err(e) => {
                records.push(OracleRecord {
                    label: format!("relation #{i} ({})", raw.kind),
                    matched: false,
                    oracle_e: 0,
                    oracle_f: 0,
                    oracle_d: 0,
                    oracle_is_zero: false,
                    classifier_is_zero: false,
                    detail: format!("oracle: {e}"),
                });
            }
        }
    }

    // generated batch, compared in parallel with stable ordering
    if file.count > 0 {
        let instances = gen_instances(file.seed, file.count);
        let jobs = jobs.max(1);
        let comparisons: Vec<Result<_, String>> = if jobs == 1 {
            instances
                .iter()
                .map(|inst| compare_instance(inst).map_err(|e| e.to_string()))
                .collect()
        } else {
            let chunk = instances.len().div_ceil(jobs);
            let mut out: Vec<Option<Result<_, String>>> = Vec::new();
            out.resize_with(instances.len(), || None);
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for (ci, chunk_insts) in instances.chunks(chunk).enumerate() {
                    handles.push((
                        ci * chunk,
                        scope.spawn(move || {
                            chunk_insts
                                .iter()
                                .map(|inst| compare_instance(inst).map_err(|e| e.to_string()))
                                .collect::<Vec<_>>()
                        }),
                    ));
                }
                for (start, h) in handles {
                    for (off, r) in h.join().expect("worker panicked").into_iter().enumerate() {
                        out[start + off] = Some(r);
                    }
                }
            });
            out.into_iter()
                .map(|r| r.expect("all slots filled"))
                .collect()
        };
        for cmp in comparisons {
            match cmp {
                Ok(cmp) => records.push(OracleRecord {
                    label: cmp.label,
                    matched: cmp.matched,
                    oracle_e: cmp.oracle.e,
                    oracle_f: cmp.oracle.f,
                    oracle_d: cmp.oracle.d,
                    oracle_is_zero: cmp.oracle.is_zero,
                    classifier_is_zero: cmp.classifier_is_zero,
                    detail: cmp.detail,
                }),
                Err(e) => return Err(CliError::Semantic(e)),
            }
        }
    }

    let mut mismatches = 0usize;
    for r in &records {
        if !r.matched {
            mismatches += 1;
        }
        emit(format, r, || {
            format!(
                "{}: {} (oracle e={} f={} d={} zero={}, classifier zero={}){}",
                r.label,
                if r.matched { "match" } else { "MISMATCH" },
                r.oracle_e,
                r.oracle_f,
                r.oracle_d,
                r.oracle_is_zero,
                r.classifier_is_zero,
                if r.detail == "ok" {
                    String::new()
                } else {
                    format!(" [{}]", r.detail)
                }
            )
        });
    }
    println!(
        "oracle-verify: {} instances, {} mismatches",
        records.len(),
        mismatches
    );
    Ok(if mismatches == 0 { 0 } else { 1 })
}

pub fn examples(format: Format) -> Result<u8, CliError> {
    let mut failures = 0usize;

    // the square-root extensions of the radical towers: zero despite
    // ramification, since the value group is dense
    for p in [3u64, 5] {
        for equal_char in [false, true] {
            let ext = builders::example_one_extension(p, equal_char);
            let record = classify_one(&ext)?;
            let ok = record.is_zero;
            failures += usize::from(!ok);
            emit(format, &record, || {
                format!(
                    "example radical-tower sqrt (p={p}, {}): {} [{}]",
                    if equal_char {
                        "equal char"
                    } else {
                        "mixed char"
                    },
                    record.human(),
                    if ok { "expected" } else { "UNEXPECTED" }
                )
            });
        }
    }

    // the composite-valuation extension: zero with wild ramification,
    // while the field itself is not deeply ramified
    for p in [3u64, 5] {
        let ext = builders::example_two_extension(p);
        let record = classify_one(&ext)?;
        let drvg = check_drvg(&ext.base_group).map_err(|e| CliError::Semantic(e.to_string()))?;
        let ok = record.is_zero && !drvg.holds();
        failures += usize::from(!ok);
        emit(format, &record, || {
            format!(
                "example composite-valuation t^(1/p) (p={p}): {}; value group \
                 deeply-ramified condition: {} [{}]",
                record.human(),
                if drvg.holds() { "holds" } else { "fails" },
                if ok { "expected" } else { "UNEXPECTED" }
            )
        });
    }

    // the discretely valued Laurent-series field: the witness extension
    // has nonvanishing differentials
    {
        let field = builders::equal_char_field(builders::group_z(), 3);
        let report =
            equivalence_report(&field, &[]).map_err(|e| CliError::Semantic(e.to_string()))?;
        let ok = report.dr.verdict == Trivalent::False
            && !report.witnesses.is_empty()
            && report.witnesses.iter().all(|w| w.nonzero_confirmed);
        failures += usize::from(!ok);
        for w in &report.witnesses {
            let record = classify_one(&w.extension)?;
            emit(format, &record, || {
                format!(
                    "example discrete Laurent field witness ({}): {} [{}]",
                    w.violation,
                    record.human(),
                    if ok { "expected" } else { "UNEXPECTED" }
                )
            });
        }
    }

    // the distinguished-generator table
    for p in [2u64, 3, 5, 7] {
        for m in 1..p {
            let t = theta_m_generator(p, m).map_err(|e| CliError::Semantic(e.to_string()))?;
            let identity = (t.ell * m + 1) == t.k * p;
            let ell_one_iff_last = (t.ell == 1) == (m == p - 1);
            let ok = identity && ell_one_iff_last;
            failures += usize::from(!ok);
            #[derive(serde::Serialize)]
            struct ThetaRecord {
                p: u64,
                m: u64,
                k: u64,
                ell: u64,
                value: String,
            }
            let rec = ThetaRecord {
                p,
                m,
                k: t.k,
                ell: t.ell,
                value: format_rat(&t.value),
            };
            emit(format, &rec, || {
                format!(
                    "generator table p={p} m={m}: k={} l={} value={} [{}]",
                    rec.k,
                    rec.ell,
                    rec.value,
                    if ok { "expected" } else { "UNEXPECTED" }
                )
            });
        }
    }

    // a ramified generator-case sample: the discretely valued case gives a
    // single ring generator
    {
        let ext = builders::as_ramified(
            &builders::group_z(),
            3,
            Coords(vec![valdiff_core::rational::rat(-1, 3)]),
            Some(2),
        )
        .map_err(|e| CliError::Semantic(e.to_string()))?;
        let case = classify_generator_case(&ext).map_err(|e| CliError::Semantic(e.to_string()))?;
        let ok = case.tag == GeneratorCaseTag::DL2d && !case.union_form;
        failures += usize::from(!ok);
        let record = classify_one(&ext)?;
        emit(format, &record, || {
            format!(
                "example discrete-base ring generation: {} [{}]",
                record.human(),
                if ok { "expected" } else { "UNEXPECTED" }
            )
        });
    }

    println!(
        "examples: {}",
        if failures == 0 {
            "all expected results reproduced".to_string()
        } else {
            format!("{failures} deviations")
        }
    );
    Ok(if failures == 0 { 0 } else { 1 })
}
