//! Fine-structure splitting from a half-wave plate rotation scan.
//!
//! Rotating a half-wave plate by `θ` turns the linear analysis axis by `2θ`,
//! so the exciton/biexciton energy difference swings between `+S` and `−S`
//! with a 90° period: `ΔE(θ) = S·cos(4(θ − φ)) + c`.

use std::io::{BufRead, Write};

use nalgebra::{Matrix3, Vector3};
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::rng::stream_rng;

/// A splitting below this value is small enough for entangled emission.
pub const SPLITTING_THRESHOLD_UEV: f64 = 0.5;

/// Random stream used for scan noise.
const SCAN_STREAM: u64 = 0x5CA9;

#[derive(Debug, Error)]
pub enum SplittingError {
    #[error("invalid scan: {0}")]
    InvalidScan(String),
    #[error("fit failed: {reason} (residual rms {residual_rms:.4} µeV)")]
    FitFailure {
        reason: String,
        residual_rms: f64,
        residuals: Vec<f64>,
    },
    #[error("scan file line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSample {
    pub angle_deg: f64,
    pub delta_e_uev: f64,
    pub sigma_uev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplittingScan {
    pub samples: Vec<ScanSample>,
    /// Mean of the measured energy differences; the samples are quoted
    /// relative to the same origin.
    pub mean_energy_uev: f64,
}

impl SplittingScan {
    pub fn new(samples: Vec<ScanSample>) -> Result<Self, SplittingError> {
        let n = samples.len();
        if n < 8 {
            return Err(SplittingError::InvalidScan(format!(
                "need at least 8 samples, got {n}"
            )));
        }
        for s in &samples {
            if !(0.0..180.0).contains(&s.angle_deg) {
                return Err(SplittingError::InvalidScan(format!(
                    "angle {} outside [0, 180)",
                    s.angle_deg
                )));
            }
            if !s.delta_e_uev.is_finite() || !(s.sigma_uev >= 0.0) || !s.sigma_uev.is_finite() {
                return Err(SplittingError::InvalidScan(format!(
                    "bad sample at {}°: ΔE {} σ {}",
                    s.angle_deg, s.delta_e_uev, s.sigma_uev
                )));
            }
        }
        let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.angle_deg), hi.max(s.angle_deg))
        });
        // Span including one sample spacing, so 0°, 4.5°, …, 85.5° counts as
        // a full period.
        let span = (hi - lo) * n as f64 / (n - 1) as f64;
        if span < 90.0 - 1e-9 {
            return Err(SplittingError::InvalidScan(format!(
                "angles cover {span:.1}°, less than one 90° period"
            )));
        }
        let mean_energy_uev = samples.iter().map(|s| s.delta_e_uev).sum::<f64>() / n as f64;
        Ok(Self {
            samples,
            mean_energy_uev,
        })
    }
}

/// `n` equally spaced angles over `[0°, 180°)`.
pub fn default_angles(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 * 180.0 / n as f64).collect()
}

/// `ΔE(θ) = S·cos(4(θ − φ))` plus Gaussian noise of standard deviation
/// `noise_sigma_uev`, which is also recorded as each sample's error.
pub fn simulate_scan(
    splitting_uev: f64,
    phase_deg: f64,
    noise_sigma_uev: f64,
    angles_deg: &[f64],
    seed: u64,
) -> Result<SplittingScan, SplittingError> {
    if !(splitting_uev >= 0.0) || !(noise_sigma_uev >= 0.0) {
        return Err(SplittingError::InvalidScan(format!(
            "splitting {splitting_uev} and noise {noise_sigma_uev} must be ≥ 0"
        )));
    }
    let mut rng = stream_rng(seed, SCAN_STREAM);
    let noise = Normal::new(0.0, noise_sigma_uev)
        .map_err(|e| SplittingError::InvalidScan(e.to_string()))?;
    let samples = angles_deg
        .iter()
        .map(|&a| ScanSample {
            angle_deg: a,
            delta_e_uev: splitting_uev * (4.0 * (a - phase_deg)).to_radians().cos()
                + noise.sample(&mut rng),
            sigma_uev: noise_sigma_uev,
        })
        .collect();
    SplittingScan::new(samples)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplittingFit {
    /// Fitted `S ≥ 0` (half the peak-to-peak swing).
    pub splitting_uev: f64,
    /// Angle of the first maximum, in `[0°, 90°)`.
    pub phase_deg: f64,
    pub sigma_uev: f64,
    /// Constant term `c`, relative to the scan's origin.
    pub offset_uev: f64,
    pub residual_rms_uev: f64,
    /// `χ²` with the per-sample errors, or `None` if some error is zero.
    pub chi2: Option<f64>,
    pub dof: usize,
}

/// Weighted least squares on `a·cos 4θ + b·sin 4θ + c`, which is linear in
/// `(a, b, c)`; `S = √(a² + b²)` and `φ = atan2(b, a)/4`. The error on `S`
/// follows from the parameter covariance. When any sample has zero error the
/// fit is unweighted and the covariance is scaled by the residual variance.
pub fn fit_splitting(scan: &SplittingScan) -> Result<SplittingFit, SplittingError> {
    let n = scan.samples.len();
    let weighted = scan.samples.iter().all(|s| s.sigma_uev > 0.0);
    let basis = |a: f64| {
        let x = (4.0 * a).to_radians();
        Vector3::new(x.cos(), x.sin(), 1.0)
    };
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for s in &scan.samples {
        let w = if weighted { 1.0 / (s.sigma_uev * s.sigma_uev) } else { 1.0 };
        let x = basis(s.angle_deg);
        normal += x * x.transpose() * w;
        rhs += x * (w * s.delta_e_uev);
    }
    let residuals_of = |p: &Vector3<f64>| -> Vec<f64> {
        scan.samples
            .iter()
            .map(|s| s.delta_e_uev - basis(s.angle_deg).dot(p))
            .collect()
    };
    let rms = |r: &[f64]| (r.iter().map(|x| x * x).sum::<f64>() / r.len() as f64).sqrt();

    let scale = normal.diagonal().max();
    let Some(chol) = (normal / scale).cholesky().filter(|c| {
        let d = c.l_dirty().diagonal();
        d.min() > 1e-6 * d.max()
    }) else {
        let mean = scan.mean_energy_uev;
        let residuals: Vec<f64> = scan.samples.iter().map(|s| s.delta_e_uev - mean).collect();
        return Err(SplittingError::FitFailure {
            reason: "angles do not determine both quadratures of the 90° oscillation".into(),
            residual_rms: rms(&residuals),
            residuals,
        });
    };
    let params = chol.solve(&rhs) / scale;
    let mut cov = chol.inverse() / scale;

    let residuals = residuals_of(&params);
    let dof = n - 3;
    let chi2 = weighted.then(|| {
        scan.samples
            .iter()
            .zip(&residuals)
            .map(|(s, r)| (r / s.sigma_uev).powi(2))
            .sum::<f64>()
    });
    if !weighted {
        let s2 = residuals.iter().map(|r| r * r).sum::<f64>() / dof as f64;
        cov *= s2;
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(SplittingError::FitFailure {
            reason: "non-finite parameters".into(),
            residual_rms: rms(&residuals),
            residuals,
        });
    }

    let (a, b, c) = (params[0], params[1], params[2]);
    let amplitude = a.hypot(b);
    let sigma = if amplitude > 1e-12 * (cov[(0, 0)] + cov[(1, 1)]).sqrt().max(1e-300) {
        ((a * a * cov[(0, 0)] + b * b * cov[(1, 1)] + 2.0 * a * b * cov[(0, 1)]).max(0.0)).sqrt()
            / amplitude
    } else {
        (0.5 * (cov[(0, 0)] + cov[(1, 1)])).sqrt()
    };
    let phase = (b.atan2(a).to_degrees() / 4.0).rem_euclid(90.0);
    Ok(SplittingFit {
        splitting_uev: amplitude,
        phase_deg: if phase >= 90.0 { 0.0 } else { phase },
        sigma_uev: sigma,
        offset_uev: c,
        residual_rms_uev: rms(&residuals),
        chi2,
        dof,
    })
}

/// True when the splitting is below [`SPLITTING_THRESHOLD_UEV`] by more than
/// twice its error.
pub fn verdict(fit: &SplittingFit) -> bool {
    fit.splitting_uev + 2.0 * fit.sigma_uev < SPLITTING_THRESHOLD_UEV
}

/// Writes `angle_deg,delta_E_ueV,sigma_ueV` rows under a comment header.
pub fn write_scan<W: Write>(mut out: W, scan: &SplittingScan) -> std::io::Result<()> {
    writeln!(out, "# angle_deg,delta_E_ueV,sigma_ueV")?;
    for s in &scan.samples {
        writeln!(out, "{},{:.9},{}", s.angle_deg, s.delta_e_uev, s.sigma_uev)?;
    }
    out.flush()
}

/// Reads rows of `angle_deg,delta_E_ueV,sigma_ueV`; `#` starts a comment and
/// a first line of column names is skipped.
pub fn read_scan<R: BufRead>(input: R) -> Result<SplittingScan, SplittingError> {
    let mut samples = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if samples.is_empty() && body.starts_with("angle") {
            continue;
        }
        let err = |reason: String| SplittingError::Parse { line: i + 1, reason };
        let fields: Vec<&str> = body.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(err(format!("expected 3 fields, got {}", fields.len())));
        }
        let num = |k: usize| {
            fields[k]
                .parse::<f64>()
                .map_err(|_| err(format!("not a number: {:?}", fields[k])))
        };
        samples.push(ScanSample {
            angle_deg: num(0)?,
            delta_e_uev: num(1)?,
            sigma_uev: num(2)?,
        });
    }
    SplittingScan::new(samples)
}
