use super::{
    build_histogram, chsh, correlation_from_histogram, BellResult, ChshResult, ChshTerm,
    CorrelationResult, CorrelatorError, Measured, SignConvention, DEFAULT_MAX_OFFSET,
};
use crate::events::{AnalyzerSetting, DetectionEvent, RunManifest};
use crate::polarization::{bell_state_psi_plus, correlation_e, Basis};
use crate::source::GateWindows;

/// Histogram and correlation for one setting of a run.
pub fn analyze_setting(
    events: &[DetectionEvent],
    setting: &AnalyzerSetting,
    gate: Option<&GateWindows>,
    pulses: u64,
) -> Result<CorrelationResult, CorrelatorError> {
    let hist = build_histogram(events, setting.id, gate, pulses, DEFAULT_MAX_OFFSET)?;
    correlation_from_histogram(setting.label.clone(), &hist)
}

/// Degrees of correlation from the settings labelled `rectilinear`,
/// `diagonal` and `circular`.
pub fn analyze_bell(
    manifest: &RunManifest,
    events: &[DetectionEvent],
    gate: Option<&GateWindows>,
) -> Result<BellResult, CorrelatorError> {
    let missing: Vec<String> = Basis::ALL
        .iter()
        .filter(|b| manifest.setting_by_label(b.name()).is_none())
        .map(|b| b.name().to_string())
        .collect();
    if !missing.is_empty() {
        return Err(CorrelatorError::MissingSettings(missing));
    }
    let c = Basis::ALL.map(|b| -> Result<Measured, CorrelatorError> {
        let s = manifest.setting_by_label(b.name()).expect("checked above");
        Ok(analyze_setting(events, s, gate, manifest.pulses_per_setting)?.measured())
    });
    let [r, d, ci] = c;
    Ok(BellResult::from_correlations(r?, d?, ci?, gate.is_some()))
}

/// The four settings whose labels start with `chsh`, each a half-wave plate
/// ahead of a vertical polarizer in both channels.
pub fn chsh_settings(manifest: &RunManifest) -> Result<[&AnalyzerSetting; 4], CorrelatorError> {
    let found: Vec<&AnalyzerSetting> = manifest
        .settings
        .iter()
        .filter(|s| s.label.starts_with("chsh"))
        .collect();
    if found.is_empty() {
        return Err(CorrelatorError::MissingSettings(vec![
            "four chsh-* settings".to_string()
        ]));
    }
    let arr: [&AnalyzerSetting; 4] = found.as_slice().try_into().map_err(|_| {
        CorrelatorError::SettingMismatch(format!("expected 4 chsh settings, found {}", found.len()))
    })?;
    for s in arr {
        if s.half_wave_angles().is_none() {
            return Err(CorrelatorError::SettingMismatch(format!(
                "{} is not a half-wave plate ahead of a vertical polarizer in both channels",
                s.label
            )));
        }
    }
    Ok(arr)
}

fn term(setting: &AnalyzerSetting, e: Measured) -> ChshTerm {
    let (xx, x) = setting.half_wave_angles().expect("checked by chsh_settings");
    ChshTerm {
        xx_angle_deg: xx,
        x_angle_deg: x,
        e,
    }
}

/// Four-setting CHSH value. The sign convention is the one under which `ψ⁺`
/// gives its largest value at the run's angles.
pub fn analyze_chsh(
    manifest: &RunManifest,
    events: &[DetectionEvent],
    gate: Option<&GateWindows>,
) -> Result<ChshResult, CorrelatorError> {
    let settings = chsh_settings(manifest)?;
    let psi = bell_state_psi_plus();
    let ideal = chsh(
        settings.map(|s| term(s, Measured::exact(correlation_e(&psi, &s.basis_pair())))),
        SignConvention::FOLDED,
    )?;
    let convention = SignConvention::calibrate(ideal.terms.map(|t| t.e.value));
    let mut terms = Vec::with_capacity(4);
    for s in settings {
        let c = analyze_setting(events, s, gate, manifest.pulses_per_setting)?;
        terms.push(term(s, c.measured()));
    }
    chsh(terms.try_into().expect("four terms"), convention)
}
