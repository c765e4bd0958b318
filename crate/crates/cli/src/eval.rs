//! Batch evaluation over synthetic phantoms.

use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use uscut_core::phantom::{EchoClass, PhantomSpec};
use uscut_core::{segment_at, Point, TemplateConfig};

use crate::stats::{compute_stats, deviation_stats};

pub const CSV_HEADER: [&str; 7] = [
    "case",
    "echo_class",
    "true_diameter_mm",
    "measured_diameter_mm",
    "error_mm",
    "dice",
    "status",
];

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("suite file: {0}")]
    Suite(#[from] toml::de::Error),
}

fn default_spacing() -> f64 {
    0.2
}

/// One phantom to segment. Without an explicit seed the lesion centre is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalCase {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub phantom: PhantomSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<Point>,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    #[serde(default)]
    pub template: TemplateConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    #[serde(default, rename = "case")]
    pub cases: Vec<EvalCase>,
}

impl Suite {
    pub fn from_toml(text: &str) -> Result<Self, EvalError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, EvalError> {
        let text = std::fs::read_to_string(path).map_err(|source| EvalError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("suite serializes")
    }
}

/// Three lesion sizes per echo class on 512x512 images with speckle 0.15.
pub fn default_suite() -> Suite {
    let mut cases = Vec::new();
    for (c, class) in EchoClass::ALL.into_iter().enumerate() {
        for (j, radius) in [20.0, 30.0, 40.0].into_iter().enumerate() {
            let rng_seed = 1000 + (c * 3 + j) as u64;
            cases.push(EvalCase {
                name: Some(format!("{class}-r{radius}")),
                phantom: PhantomSpec::for_class(class, 512, 512, radius).with_speckle(0.15, rng_seed),
                seed: None,
                spacing: default_spacing(),
                template: TemplateConfig::default(),
            });
        }
    }
    Suite { cases }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CaseStatus {
    Ok,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub name: String,
    pub echo_class: EchoClass,
    pub true_diameter_mm: f64,
    pub measured_diameter_mm: Option<f64>,
    pub dice: Option<f64>,
    pub cut_indices: Vec<usize>,
    pub elapsed_ms: f64,
    pub status: CaseStatus,
}

impl CaseOutcome {
    pub fn error_mm(&self) -> Option<f64> {
        self.measured_diameter_mm.map(|m| m - self.true_diameter_mm)
    }

    pub fn is_ok(&self) -> bool {
        self.status == CaseStatus::Ok
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub true_stats: Option<(f64, f64)>,
    pub measured_stats: Option<(f64, f64)>,
    /// Mean of `true - measured` and its mean absolute value.
    pub deviation: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub outcomes: Vec<CaseOutcome>,
    pub summary: Summary,
}

pub fn evaluate_case(index: usize, case: &EvalCase) -> CaseOutcome {
    let name = case.name.clone().unwrap_or_else(|| format!("case{index}"));
    let true_diameter_mm = 2.0 * case.phantom.lesion_radius * case.spacing;
    let mut outcome = CaseOutcome {
        name,
        echo_class: case.phantom.echo_class,
        true_diameter_mm,
        measured_diameter_mm: None,
        dice: None,
        cut_indices: Vec::new(),
        elapsed_ms: 0.0,
        status: CaseStatus::Ok,
    };
    let run = || -> uscut_core::Result<_> {
        let (img, mask) = case.phantom.generate()?;
        let img = img.with_spacing(case.spacing)?;
        let seed = case.seed.unwrap_or(case.phantom.center);
        let res = segment_at(&img, seed, &case.template)?;
        let dice = res.contour.dice(&mask);
        Ok((res, dice))
    };
    match run() {
        Ok((res, dice)) => {
            outcome.measured_diameter_mm = Some(res.diameter_mm);
            outcome.dice = Some(dice);
            outcome.elapsed_ms = res.elapsed_ms;
            outcome.cut_indices = res.cut.cut_indices;
        }
        Err(e) => outcome.status = CaseStatus::Failed(e.to_string()),
    }
    outcome
}

pub fn evaluate(suite: &Suite) -> EvalReport {
    let outcomes: Vec<_> = suite
        .cases
        .iter()
        .enumerate()
        .map(|(i, c)| evaluate_case(i, c))
        .collect();
    let ok: Vec<&CaseOutcome> = outcomes.iter().filter(|o| o.is_ok()).collect();
    let truth: Vec<f64> = ok.iter().map(|o| o.true_diameter_mm).collect();
    let measured: Vec<f64> = ok.iter().filter_map(|o| o.measured_diameter_mm).collect();
    let summary = Summary {
        true_stats: compute_stats(&truth).ok(),
        measured_stats: compute_stats(&measured).ok(),
        deviation: deviation_stats(&truth, &measured).ok(),
    };
    EvalReport { outcomes, summary }
}

/// Shortest round-trip representation.
fn fmt(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

fn create(path: &Path) -> Result<csv::Writer<File>, EvalError> {
    let file = File::create(path).map_err(|source| EvalError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(csv::Writer::from_writer(file))
}

/// The companion file holding wall-clock times, kept apart so the main table stays reproducible.
pub fn timing_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.timing.csv"))
}

pub fn write_csv(report: &EvalReport, out: &Path) -> Result<(), EvalError> {
    let mut w = create(out)?;
    w.write_record(CSV_HEADER)?;
    for o in &report.outcomes {
        let status = match &o.status {
            CaseStatus::Ok => "ok".to_string(),
            CaseStatus::Failed(msg) => format!("failed: {msg}"),
        };
        w.write_record([
            o.name.clone(),
            o.echo_class.to_string(),
            fmt(o.true_diameter_mm),
            fmt_opt(o.measured_diameter_mm),
            fmt_opt(o.error_mm()),
            fmt_opt(o.dice),
            status,
        ])?;
    }
    let s = &report.summary;
    if let (Some(t), Some(m)) = (s.true_stats, s.measured_stats) {
        w.write_record(["summary_mean", "", &fmt(t.0), &fmt(m.0), "", "", ""])?;
        w.write_record(["summary_sd", "", &fmt(t.1), &fmt(m.1), "", "", ""])?;
    }
    if let Some((signed, abs)) = s.deviation {
        w.write_record(["summary_mean_signed_deviation", "", "", "", &fmt(signed), "", ""])?;
        w.write_record(["summary_mean_abs_deviation", "", "", "", &fmt(abs), "", ""])?;
    }
    w.flush().map_err(|source| EvalError::Io {
        path: out.to_owned(),
        source,
    })?;

    let timing = timing_path(out);
    let mut t = create(&timing)?;
    t.write_record(["case", "elapsed_ms"])?;
    for o in &report.outcomes {
        t.write_record([o.name.clone(), fmt(o.elapsed_ms)])?;
    }
    t.flush().map_err(|source| EvalError::Io { path: timing, source })?;
    Ok(())
}

/// Evaluates the suite and writes the result table to `out`.
pub fn run_eval(suite: &Suite, out: &Path) -> Result<EvalReport, EvalError> {
    let report = evaluate(suite);
    write_csv(&report, out)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_shape() {
        let suite = default_suite();
        assert_eq!(suite.cases.len(), 15);
        for class in EchoClass::ALL {
            assert_eq!(suite.cases.iter().filter(|c| c.phantom.echo_class == class).count(), 3);
        }
        let mut seeds: Vec<u64> = suite.cases.iter().map(|c| c.phantom.rng_seed).collect();
        seeds.dedup();
        assert_eq!(seeds.len(), 15);
        assert!(suite.cases.iter().all(|c| c.phantom.validate().is_ok()));
    }

    #[test]
    fn suite_toml_round_trip() {
        let suite = default_suite();
        assert_eq!(Suite::from_toml(&suite.to_toml()).unwrap(), suite);
        assert!(Suite::from_toml("").unwrap().cases.is_empty());
    }

    #[test]
    fn minimal_case_uses_defaults() {
        let text = r#"
            [[case]]
            [case.phantom]
            width = 128
            height = 128
            center = { x = 64.0, y = 64.0 }
            lesion_radius = 15.0
            background_level = 0.6
            lesion_level = 0.2
            halo_width = 0.0
            halo_level = 0.0
            speckle_sigma = 0.0
            echo_class = "C"
            rng_seed = 0
        "#;
        let suite = Suite::from_toml(text).unwrap();
        let case = &suite.cases[0];
        assert_eq!(case.spacing, 0.2);
        assert_eq!(case.template, TemplateConfig::default());
        assert!(case.seed.is_none() && case.name.is_none());
    }

    #[test]
    fn invalid_case_becomes_a_failed_row() {
        let mut case = default_suite().cases.remove(0);
        case.phantom.lesion_radius = 1000.0;
        let out = evaluate_case(3, &case);
        assert!(matches!(out.status, CaseStatus::Failed(_)));
        assert!(out.measured_diameter_mm.is_none() && out.error_mm().is_none());
    }
}
