//! WebAssembly bindings for the browser demo: source-model Bell parameters,
//! a CHSH angle explorer, and a simulated splitting scan with its fit.

use qdbell::correlator::{chsh, BellResult, ChshTerm, Measured, SignConvention};
use qdbell::events::AnalyzerSetting;
use qdbell::polarization::{correlation_e, horodecki_bound, Basis, BasisPair, TwoPhotonState};
use qdbell::presets;
use qdbell::source::{predicted_correlations, SourceConfig};
use qdbell::splitting::{default_angles, fit_splitting, simulate_scan, verdict, SplittingFit};
use wasm_bindgen::prelude::*;

fn source(splitting_uev: f64, tau_x_ns: f64, noise_scale: f64) -> SourceConfig {
    let base = presets::calibrated();
    SourceConfig {
        splitting_uev,
        tau_x_ns,
        background_fraction: base.background_fraction * noise_scale,
        reexcite_prob: base.reexcite_prob * noise_scale,
        dark_rate_hz: base.dark_rate_hz * noise_scale,
        ..base
    }
}

fn bell(config: &SourceConfig, gated: bool) -> Result<BellResult, String> {
    let gate = gated.then(presets::calibrated_gate);
    let c = predicted_correlations(config, gate.as_ref()).map_err(|e| e.to_string())?;
    Ok(BellResult::exact(c))
}

/// `[C_rect, C_diag, C_circ, f, S_RC, S_DC, S_RD]` predicted for the
/// calibrated source with the given splitting, exciton lifetime and noise
/// scale (1 reproduces the calibrated noise, 0 removes it).
#[wasm_bindgen]
pub fn bell_parameters(
    splitting_uev: f64,
    tau_x_ns: f64,
    noise_scale: f64,
    gated: bool,
) -> Result<Vec<f64>, String> {
    let b = bell(&source(splitting_uev, tau_x_ns, noise_scale), gated)?;
    Ok([b.c_rect, b.c_diag, b.c_circ, b.fidelity, b.s_rc, b.s_dc, b.s_rd]
        .iter()
        .map(|m| m.value)
        .collect())
}

/// Fidelity at `points` splittings evenly spaced over `[0, max_splitting_uev]`.
#[wasm_bindgen]
pub fn fidelity_curve(
    tau_x_ns: f64,
    noise_scale: f64,
    gated: bool,
    max_splitting_uev: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let step = max_splitting_uev / (points.max(2) - 1) as f64;
    (0..points)
        .map(|i| Ok(bell(&source(i as f64 * step, tau_x_ns, noise_scale), gated)?.fidelity.value))
        .collect()
}

/// The four correlations `E(α,β), E(α′,β), E(α,β′), E(α′,β′)` of a Werner
/// state with the given visibility, for half-wave plates ahead of vertical
/// polarizers, followed by the CHSH value and the largest CHSH value any
/// settings could reach: `[E₁, E₂, E₃, E₄, S, S_max]`.
#[wasm_bindgen]
pub fn chsh_explorer(
    xx_a_deg: f64,
    xx_b_deg: f64,
    x_a_deg: f64,
    x_b_deg: f64,
    visibility: f64,
) -> Result<Vec<f64>, String> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(format!("visibility {visibility} outside [0, 1]"));
    }
    let rho = TwoPhotonState::werner(visibility);
    let mut terms = Vec::with_capacity(4);
    for (xx, x) in [(xx_a_deg, x_a_deg), (xx_b_deg, x_a_deg), (xx_a_deg, x_b_deg), (xx_b_deg, x_b_deg)] {
        let setting = AnalyzerSetting::chsh(0, xx, x);
        terms.push(ChshTerm {
            xx_angle_deg: xx,
            x_angle_deg: x,
            e: Measured::exact(correlation_e(&rho, &setting.basis_pair())),
        });
    }
    let terms: [ChshTerm; 4] = terms.try_into().expect("four terms");
    let r = chsh(terms, SignConvention::STANDARD).map_err(|e| e.to_string())?;
    let mut out: Vec<f64> = r.terms.iter().map(|t| t.e.value).collect();
    out.push(r.s.value);
    out.push(horodecki_bound(&rho));
    Ok(out)
}

/// Degrees of correlation `[C_rect, C_diag, C_circ]` of a Werner state.
#[wasm_bindgen]
pub fn werner_correlations(visibility: f64) -> Vec<f64> {
    let rho = TwoPhotonState::werner(visibility.clamp(0.0, 1.0));
    Basis::ALL
        .iter()
        .map(|b| correlation_e(&rho, &BasisPair::same(*b)))
        .collect()
}

/// A simulated splitting scan and its least-squares fit.
#[wasm_bindgen]
pub struct ScanFit {
    angles: Vec<f64>,
    values: Vec<f64>,
    fit: SplittingFit,
}

#[wasm_bindgen]
impl ScanFit {
    pub fn angles(&self) -> Vec<f64> {
        self.angles.clone()
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    /// The fitted curve at `points` angles evenly spaced over `[0°, 180°)`.
    pub fn curve(&self, points: usize) -> Vec<f64> {
        default_angles(points)
            .iter()
            .map(|a| {
                self.fit.splitting_uev * (4.0 * (a - self.fit.phase_deg)).to_radians().cos()
                    + self.fit.offset_uev
            })
            .collect()
    }

    #[wasm_bindgen(getter)]
    pub fn splitting_uev(&self) -> f64 {
        self.fit.splitting_uev
    }

    #[wasm_bindgen(getter)]
    pub fn sigma_uev(&self) -> f64 {
        self.fit.sigma_uev
    }

    #[wasm_bindgen(getter)]
    pub fn phase_deg(&self) -> f64 {
        self.fit.phase_deg
    }

    /// Whether the splitting is below 0.5 µeV by more than twice its error.
    #[wasm_bindgen(getter)]
    pub fn verdict(&self) -> bool {
        verdict(&self.fit)
    }
}

#[wasm_bindgen]
pub fn simulate_and_fit(
    splitting_uev: f64,
    phase_deg: f64,
    noise_uev: f64,
    points: usize,
    seed: u64,
) -> Result<ScanFit, String> {
    let scan = simulate_scan(splitting_uev, phase_deg, noise_uev, &default_angles(points), seed)
        .map_err(|e| e.to_string())?;
    let fit = fit_splitting(&scan).map_err(|e| e.to_string())?;
    Ok(ScanFit {
        angles: scan.samples.iter().map(|s| s.angle_deg).collect(),
        values: scan.samples.iter().map(|s| s.delta_e_uev).collect(),
        fit,
    })
}
