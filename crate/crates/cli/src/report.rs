//! Output records for the report stream: serialized as JSON lines or
//! rendered as human-readable text.

use serde::Serialize;

use valdiff_core::descriptor::RawExtension;

use crate::Format;

#[derive(Debug, Serialize)]
pub struct ClassifyRecord {
    pub case: String,
    pub is_zero: bool,
    pub reason: String,
    pub rule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator_case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub union_form: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
    pub descriptor: RawExtension,
}

impl ClassifyRecord {
    pub fn human(&self) -> String {
        let mut line = format!(
            "{}: omega = {} ({})",
            self.case,
            if self.is_zero { "0" } else { "nonzero" },
            self.reason
        );
        if let Some(gc) = &self.generator_case {
            line.push_str(&format!(
                "; ring generation {}{}",
                gc,
                match (self.union_form, self.j) {
                    (Some(true), Some(j)) => format!(" (union form, j = {j})"),
                    (Some(true), None) => " (union form)".to_string(),
                    (Some(false), _) => " (single generator)".to_string(),
                    _ => String::new(),
                }
            ));
        }
        line
    }
}

#[derive(Debug, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub case: String,
    pub is_zero: bool,
}

#[derive(Debug, Serialize)]
pub struct TowerRecord {
    pub is_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_nonzero: Option<usize>,
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Serialize)]
pub struct DrRecord {
    pub verdict: String,
    pub drvg: String,
    pub drvr: String,
    pub violations: Vec<String>,
    pub witnesses: Vec<WitnessRecord>,
    pub partial: bool,
}

#[derive(Debug, Serialize)]
pub struct WitnessRecord {
    pub violation: String,
    pub nonzero_confirmed: bool,
    pub extension: RawExtension,
}

#[derive(Debug, Serialize)]
pub struct OracleRecord {
    pub label: String,
    pub matched: bool,
    pub oracle_e: u64,
    pub oracle_f: u64,
    pub oracle_d: u64,
    pub oracle_is_zero: bool,
    pub classifier_is_zero: bool,
    pub detail: String,
}

pub fn emit<T: Serialize>(format: Format, record: &T, human: impl FnOnce() -> String) {
    match format {
        Format::JsonLines => {
            println!(
                "{}",
                serde_json::to_string(record).expect("serializable record")
            )
        }
        Format::Human => println!("{}", human()),
    }
}
