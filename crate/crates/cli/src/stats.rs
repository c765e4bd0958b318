//! Summary statistics for diameter measurements, and the embedded reference table.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} values, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

/// Maximum lesion diameters (mm) for ten clinical cases: a physician's manual calipers and
/// the interactive segmentation.
pub struct ReferenceTable {
    pub manual_mm: [f64; 10],
    pub uscut_mm: [f64; 10],
}

pub const TABLE1: ReferenceTable = ReferenceTable {
    manual_mm: [11.32, 18.5, 23.92, 13.95, 12.1, 30.49, 15.63, 21.66, 7.18, 19.83],
    uscut_mm: [10.66, 17.22, 21.94, 10.68, 10.78, 28.03, 12.7, 21.88, 6.77, 19.3],
};

/// Summary line printed in the table as mean +- sd, per column.
pub const TABLE1_PRINTED_MANUAL: (f64, f64) = (17.46, 6.86);
pub const TABLE1_PRINTED_USCUT: (f64, f64) = (16.03, 6.62);
/// The headline mean deviation, as quoted.
pub const TABLE1_QUOTED_DEVIATION_MM: f64 = 1.4;

/// Arithmetic mean and sample standard deviation (`n - 1` denominator).
pub fn compute_stats(values: &[f64]) -> Result<(f64, f64), StatsError> {
    let n = values.len();
    if n < 2 {
        return Err(StatsError::TooFew { needed: 2, got: n });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    Ok((mean, (ss / (n - 1) as f64).sqrt()))
}

/// Mean of `reference - measured` and mean of its absolute value.
pub fn deviation_stats(reference: &[f64], measured: &[f64]) -> Result<(f64, f64), StatsError> {
    if reference.len() != measured.len() {
        return Err(StatsError::LengthMismatch {
            left: reference.len(),
            right: measured.len(),
        });
    }
    if reference.is_empty() {
        return Err(StatsError::TooFew { needed: 1, got: 0 });
    }
    let n = reference.len() as f64;
    let (signed, abs) = reference
        .iter()
        .zip(measured)
        .map(|(a, b)| a - b)
        .fold((0.0, 0.0), |(s, a), d| (s + d, a + d.abs()));
    Ok((signed / n, abs / n))
}

pub fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// One line of the table regression.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        (self.value - self.expected).abs() <= self.tolerance
    }
}

pub struct Table1Report {
    pub manual: (f64, f64),
    pub uscut: (f64, f64),
    pub deviation: (f64, f64),
    pub checks: Vec<Check>,
}

impl Table1Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Recomputes the table statistics and checks them against the printed summary.
///
/// The manual column reproduces its printed mean and sd at two decimals; the algorithm column
/// recomputes to 16.00 +- 6.73 rather than the printed 16.03 +- 6.62, so its checks pin the
/// recomputed values.
pub fn table1_regression() -> Table1Report {
    let manual = compute_stats(&TABLE1.manual_mm).expect("ten values");
    let uscut = compute_stats(&TABLE1.uscut_mm).expect("ten values");
    let deviation = deviation_stats(&TABLE1.manual_mm, &TABLE1.uscut_mm).expect("equal lengths");
    let half_cent = 0.005 + 1e-9;
    let checks = vec![
        Check {
            name: "manual mean (2 dp)",
            value: round2(manual.0),
            expected: TABLE1_PRINTED_MANUAL.0,
            tolerance: 1e-9,
        },
        Check {
            name: "manual sample sd (2 dp)",
            value: round2(manual.1),
            expected: TABLE1_PRINTED_MANUAL.1,
            tolerance: 1e-9,
        },
        Check {
            name: "uscut mean, recomputed",
            value: uscut.0,
            expected: 16.00,
            tolerance: half_cent,
        },
        Check {
            name: "uscut sample sd, recomputed",
            value: uscut.1,
            expected: 6.73,
            tolerance: half_cent,
        },
        Check {
            name: "mean signed deviation",
            value: deviation.0,
            expected: 1.46,
            tolerance: 0.01,
        },
        Check {
            name: "mean absolute deviation",
            value: deviation.1,
            expected: 1.51,
            tolerance: 0.01,
        },
        Check {
            name: "mean signed deviation truncates to quoted 1.4",
            value: (deviation.0 * 10.0).floor() / 10.0,
            expected: TABLE1_QUOTED_DEVIATION_MM,
            tolerance: 1e-9,
        },
    ];
    Table1Report {
        manual,
        uscut,
        deviation,
        checks,
    }
}
