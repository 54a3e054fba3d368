//! Structured-text descriptor schemas: the serde-facing raw forms of
//! groups, extensions, fields and towers, with rationals kept as exact
//! strings, and the conversions that normalize them into the typed
//! descriptors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deeply_ramified::FieldDescriptor;
use crate::extensions::{DefectData, ExtensionKind, GeneratedBy, PrimeExtension, ResidueData};
use crate::kahler::{TowerDescriptor, TowerStep};
use crate::ordered_groups::{AdjoinedGroup, Coords, GroupError, LevelDescriptor, OrderedGroup};
use crate::rational::{format_rat, parse_rat, rat_u64, Rat};
use num_traits::One;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("bad rational: {0}")]
    BadRational(String),
    #[error("unknown level kind {0:?} (expected zero|cyclic|localized|rationals)")]
    UnknownLevelKind(String),
    #[error("level kind {0:?} requires a generator g")]
    MissingGenerator(String),
    #[error("localized level requires a nonempty prime list")]
    MissingPrimes,
    #[error("unknown extension kind {0:?} (expected artin-schreier|kummer)")]
    UnknownExtensionKind(String),
    #[error("unknown residue generator {0:?} (expected unit|one-unit|none)")]
    UnknownGeneratedBy(String),
    #[error("unknown tower step kind {0:?} (expected inertial|prime)")]
    UnknownStepKind(String),
    #[error("missing field: {0}")]
    Missing(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("inconsistent witnesses: {0}")]
    Inconsistent(String),
}

/// One level of a value group in config form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLevel {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u64>>,
}

pub fn level_from_raw(raw: &RawLevel) -> Result<LevelDescriptor, DescriptorError> {
    let g = || -> Result<Rat, DescriptorError> {
        let s = raw
            .g
            .as_ref()
            .ok_or_else(|| DescriptorError::MissingGenerator(raw.kind.clone()))?;
        parse_rat(s).map_err(DescriptorError::BadRational)
    };
    match raw.kind.as_str() {
        "zero" => Ok(LevelDescriptor::Zero),
        "cyclic" => Ok(LevelDescriptor::Cyclic(g()?)),
        "localized" => {
            let primes = raw
                .primes
                .as_ref()
                .filter(|p| !p.is_empty())
                .ok_or(DescriptorError::MissingPrimes)?;
            Ok(LevelDescriptor::Localized(
                g()?,
                primes.iter().copied().collect(),
            ))
        }
        "rationals" => Ok(LevelDescriptor::FullRationals),
        other => Err(DescriptorError::UnknownLevelKind(other.to_string())),
    }
}

pub fn level_to_raw(level: &LevelDescriptor) -> RawLevel {
    match level {
        LevelDescriptor::Zero => RawLevel {
            kind: "zero".into(),
            g: None,
            primes: None,
        },
        LevelDescriptor::Cyclic(g) => RawLevel {
            kind: "cyclic".into(),
            g: Some(format_rat(g)),
            primes: None,
        },
        LevelDescriptor::Localized(g, s) => RawLevel {
            kind: "localized".into(),
            g: Some(format_rat(g)),
            primes: Some(s.iter().copied().collect()),
        },
        LevelDescriptor::FullRationals => RawLevel {
            kind: "rationals".into(),
            g: None,
            primes: None,
        },
    }
}

pub fn group_from_raw(levels: &[RawLevel]) -> Result<OrderedGroup, DescriptorError> {
    let levels = levels
        .iter()
        .map(level_from_raw)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OrderedGroup::new(levels)?)
}

pub fn group_to_raw(group: &OrderedGroup) -> Vec<RawLevel> {
    group.levels().iter().map(level_to_raw).collect()
}

pub fn coords_from_raw(raw: &[String]) -> Result<Coords, DescriptorError> {
    let v = raw
        .iter()
        .map(|s| parse_rat(s).map_err(DescriptorError::BadRational))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Coords(v))
}

pub fn coords_to_raw(coords: &Coords) -> Vec<String> {
    coords.0.iter().map(format_rat).collect()
}

/// Extension descriptor in config form; `normalize_extension` fills the
/// derived tags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawExtension {
    pub kind: String,
    pub degree: u64,
    /// Characteristic of the base field: 0 or the residue characteristic.
    #[serde(rename = "char")]
    pub char_k: u64,
    pub residue_char: u64,
    pub e: u64,
    pub f: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    pub group: Vec<RawLevel>,
    /// Generator value for maximally ramified cases (v theta or v eta).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<String>>,
    /// Artin-Schreier generator value when f = p.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_theta: Option<Vec<String>>,
    /// v(eta - 1) for the Kummer one-unit cases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_eta_minus_one: Option<Vec<String>>,
    /// Value of p (mixed characteristic).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vp: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub has_zeta: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub one_unit: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_separable: Option<bool>,
    /// unit | one-unit | none
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_generated_by: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect_independent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect_cut_level: Option<usize>,
}

/// Normalizes a raw descriptor into a typed extension: infers the defect
/// from the Ostrowski equality when omitted, builds the extended value
/// group, fills in separability and generator tags from the witnesses.
pub fn normalize_extension(raw: &RawExtension) -> Result<PrimeExtension, DescriptorError> {
    let group = group_from_raw(&raw.group)?;
    let n = raw.degree;
    let kind = match raw.kind.as_str() {
        "artin-schreier" => ExtensionKind::ArtinSchreier,
        "kummer" => ExtensionKind::Kummer {
            has_zeta: raw.has_zeta.unwrap_or(n == 2),
        },
        other => return Err(DescriptorError::UnknownExtensionKind(other.to_string())),
    };
    let d = raw
        .d
        .unwrap_or_else(|| n.checked_div(raw.e * raw.f).unwrap_or(0));
    let vp_element = raw
        .vp
        .as_ref()
        .map(|v| {
            let c = coords_from_raw(v)?;
            group.element(c.0).map_err(DescriptorError::Group)
        })
        .transpose()?;
    let v_theta = raw
        .v_theta
        .as_ref()
        .map(|v| {
            let c = coords_from_raw(v)?;
            group.element(c.0).map_err(DescriptorError::Group)
        })
        .transpose()?;
    let v_eta_minus_one = raw
        .v_eta_minus_one
        .as_ref()
        .map(|v| coords_from_raw(v))
        .transpose()?;
    let one_unit = raw.one_unit.unwrap_or(false);

    // extended value group for e = n
    let value_data = if raw.e == n && n > 1 {
        let delta = match (&raw.delta, one_unit, &v_eta_minus_one, &vp_element) {
            (Some(d), _, _, _) => coords_from_raw(d)?,
            (None, true, Some(ve), Some(vp)) => {
                // one-unit generator: delta is v(xi) = v(eta-1) - vp/(p-1)
                let gap = vp
                    .coords()
                    .scale_rat(&(Rat::one() / rat_u64(raw.residue_char - 1)));
                ve - &gap
            }
            _ => return Err(DescriptorError::Missing("delta".into())),
        };
        Some(AdjoinedGroup::new(group.clone(), delta, n)?)
    } else {
        None
    };

    // residue tags
    let generated_by = match raw.residue_generated_by.as_deref() {
        Some("unit") => GeneratedBy::UnitResidue,
        Some("one-unit") => GeneratedBy::ShiftedOneUnit,
        Some("none") | None if raw.f != n || n == 1 => GeneratedBy::None,
        Some("none") => GeneratedBy::None,
        None => {
            // infer: Artin-Schreier and unit Kummer generators
            match kind {
                ExtensionKind::ArtinSchreier => GeneratedBy::UnitResidue,
                ExtensionKind::Kummer { .. } => {
                    if one_unit || v_eta_minus_one.is_some() {
                        GeneratedBy::ShiftedOneUnit
                    } else {
                        GeneratedBy::UnitResidue
                    }
                }
            }
        }
        Some(other) => return Err(DescriptorError::UnknownGeneratedBy(other.to_string())),
    };

    // separability per case
    let separable = if let Some(s) = raw.residue_separable {
        s
    } else if raw.f == n && n > 1 {
        match (&kind, raw.degree == raw.residue_char) {
            (ExtensionKind::ArtinSchreier, _) => {
                v_theta.as_ref().map(|vt| vt.is_zero()).unwrap_or(false)
            }
            (ExtensionKind::Kummer { .. }, false) => true,
            (ExtensionKind::Kummer { .. }, true) => match generated_by {
                GeneratedBy::UnitResidue => false,
                GeneratedBy::ShiftedOneUnit => match (&v_eta_minus_one, &vp_element) {
                    (Some(ve), Some(vp)) => {
                        let gap = vp
                            .coords()
                            .scale_rat(&(Rat::one() / rat_u64(raw.residue_char - 1)));
                        *ve == gap
                    }
                    _ => {
                        return Err(DescriptorError::Inconsistent(
                            "one-unit case requires v_eta_minus_one and vp".into(),
                        ))
                    }
                },
                GeneratedBy::None => {
                    return Err(DescriptorError::Inconsistent(
                        "f = n requires residue generation data".into(),
                    ))
                }
            },
        }
    } else {
        true
    };

    let defect = if raw.defect_independent.is_some() || raw.defect_cut_level.is_some() {
        Some(DefectData {
            independent: raw.defect_independent,
            cut_start_level: raw.defect_cut_level,
        })
    } else {
        None
    };

    Ok(PrimeExtension {
        kind,
        degree: n,
        char_k: raw.char_k,
        e: raw.e,
        f: raw.f,
        d,
        base_group: group,
        value_data,
        v_theta,
        v_eta_minus_one,
        residue: ResidueData {
            residue_char: raw.residue_char,
            degree_f: if raw.f == n { n } else { 1 },
            separable,
            generated_by,
        },
        j: raw.j,
        defect,
        one_unit_generator: one_unit,
        vp_element,
    })
}

pub fn extension_to_raw(ext: &PrimeExtension) -> RawExtension {
    let (kind, has_zeta) = match ext.kind {
        ExtensionKind::ArtinSchreier => ("artin-schreier".to_string(), None),
        ExtensionKind::Kummer { has_zeta } => ("kummer".to_string(), Some(has_zeta)),
    };
    RawExtension {
        kind,
        degree: ext.degree,
        char_k: ext.char_k,
        residue_char: ext.residue.residue_char,
        e: ext.e,
        f: ext.f,
        d: Some(ext.d),
        group: group_to_raw(&ext.base_group),
        delta: ext.value_data.as_ref().map(|ag| coords_to_raw(ag.delta())),
        v_theta: ext.v_theta.as_ref().map(|v| coords_to_raw(v.coords())),
        v_eta_minus_one: ext.v_eta_minus_one.as_ref().map(coords_to_raw),
        vp: ext.vp_element.as_ref().map(|v| coords_to_raw(v.coords())),
        j: ext.j,
        has_zeta,
        one_unit: Some(ext.one_unit_generator),
        residue_separable: Some(ext.residue.separable),
        residue_generated_by: Some(
            match ext.residue.generated_by {
                GeneratedBy::UnitResidue => "unit",
                GeneratedBy::ShiftedOneUnit => "one-unit",
                GeneratedBy::None => "none",
            }
            .to_string(),
        ),
        defect_independent: ext.defect.as_ref().and_then(|d| d.independent),
        defect_cut_level: ext.defect.as_ref().and_then(|d| d.cut_start_level),
    }
}

/// Field descriptor in config form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawField {
    #[serde(rename = "char")]
    pub char_k: u64,
    pub residue_char: u64,
    pub group: Vec<RawLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vp: Option<Vec<String>>,
    pub residue_perfect: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contains_zeta_p: Option<bool>,
    pub independent_defect_field: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drvr: Option<bool>,
}

pub fn field_from_raw(raw: &RawField) -> Result<FieldDescriptor, DescriptorError> {
    let group = group_from_raw(&raw.group)?;
    let vp_element = raw
        .vp
        .as_ref()
        .map(|v| {
            let c = coords_from_raw(v)?;
            group.element(c.0).map_err(DescriptorError::Group)
        })
        .transpose()?;
    Ok(FieldDescriptor {
        char_k: raw.char_k,
        residue_char: raw.residue_char,
        value_group: group,
        vp_element,
        residue_perfect: raw.residue_perfect,
        contains_zeta_p: raw.contains_zeta_p.unwrap_or(false),
        independent_defect_field: raw.independent_defect_field,
        drvr_flag: raw.drvr,
    })
}

pub fn field_to_raw(f: &FieldDescriptor) -> RawField {
    RawField {
        char_k: f.char_k,
        residue_char: f.residue_char,
        group: group_to_raw(&f.value_group),
        vp: f.vp_element.as_ref().map(|v| coords_to_raw(v.coords())),
        residue_perfect: f.residue_perfect,
        contains_zeta_p: Some(f.contains_zeta_p),
        independent_defect_field: f.independent_defect_field,
        drvr: f.drvr_flag,
    }
}

/// Tower step in config form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTowerStep {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_char: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<RawExtension>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTower {
    pub step: Vec<RawTowerStep>,
}

pub fn tower_from_raw(raw: &RawTower) -> Result<TowerDescriptor, DescriptorError> {
    let mut steps = Vec::with_capacity(raw.step.len());
    for s in &raw.step {
        match s.kind.as_str() {
            "inertial" => {
                let degree = s
                    .degree
                    .ok_or_else(|| DescriptorError::Missing("inertial step degree".into()))?;
                steps.push(TowerStep::Inertial {
                    residue: ResidueData {
                        residue_char: s.residue_char.unwrap_or(0),
                        degree_f: degree,
                        separable: true,
                        generated_by: GeneratedBy::UnitResidue,
                    },
                });
            }
            "prime" => {
                let ext = s
                    .extension
                    .as_ref()
                    .ok_or_else(|| DescriptorError::Missing("prime step extension".into()))?;
                steps.push(TowerStep::Prime(normalize_extension(ext)?));
            }
            other => return Err(DescriptorError::UnknownStepKind(other.to_string())),
        }
    }
    Ok(TowerDescriptor { steps })
}

pub fn tower_to_raw(t: &TowerDescriptor) -> RawTower {
    RawTower {
        step: t
            .steps
            .iter()
            .map(|s| match s {
                TowerStep::Inertial { residue } => RawTowerStep {
                    kind: "inertial".into(),
                    degree: Some(residue.degree_f),
                    residue_char: Some(residue.residue_char),
                    extension: None,
                },
                TowerStep::Prime(ext) => RawTowerStep {
                    kind: "prime".into(),
                    degree: Some(ext.degree),
                    residue_char: None,
                    extension: Some(extension_to_raw(ext)),
                },
            })
            .collect(),
    }
}
