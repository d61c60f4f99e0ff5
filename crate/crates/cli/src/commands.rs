use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use qdbell::correlator::{analyze_bell, analyze_chsh, analyze_setting, peak_time, BellResult};
use qdbell::events::{generate_run, read_events, write_events, Channel, EventFile, DEFAULT_SEED};
use qdbell::polarization::Basis;
use qdbell::source::GateWindows;
use qdbell::splitting::{
    default_angles, fit_splitting, read_scan, simulate_scan, verdict, write_scan, SplittingError,
    SPLITTING_THRESHOLD_UEV,
};

use crate::config::{GateSpec, RunConfig};
use crate::report::{num, Report, Table};
use crate::{AnalysisArgs, GateArgs, GateMode, ReportFormat, SeedArg, SimulateArgs, SplittingArgs, SweepArgs};

fn resolve_seed(seed: Option<SeedArg>) -> Option<u64> {
    use std::hash::BuildHasher;
    seed.map(|s| match s {
        SeedArg::Fixed(v) => v,
        SeedArg::Random => std::collections::hash_map::RandomState::new().hash_one(std::time::SystemTime::now()),
    })
}

pub fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let config = RunConfig::load(&args.config)?;
    let manifest = config.manifest(resolve_seed(args.seed))?;
    let Some(path) = args.out.as_ref().or(config.events_out.as_ref()) else {
        bail!("no output path: pass --out or set events_out in the configuration");
    };
    let run = generate_run(&manifest)?;
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let digest = write_events(BufWriter::new(file), &manifest, &run, args.with_origin)
        .with_context(|| format!("writing {}", path.display()))?;

    let mut r = Report::default();
    r.push("digest", &digest);
    r.push("seed", manifest.seed);
    r.push("pulses_per_setting", manifest.pulses_per_setting);
    r.push("settings", manifest.settings.len());
    r.push("events", run.iter().map(|s| s.events.len()).sum::<usize>());
    for (setting, generated) in manifest.settings.iter().zip(&run) {
        r.push(format!("events.{}", setting.label), generated.events.len());
    }
    r.push("overflow_resamples", run.iter().map(|s| s.overflow_resamples).sum::<u64>());
    r.push("out", path.display());
    write!(out, "{r}")?;
    Ok(())
}

fn load_events(path: &Path) -> Result<EventFile> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_events(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

/// Configured windows with command-line overrides applied.
fn gate_spec(args: &GateArgs) -> Result<GateSpec> {
    let mut spec = match &args.config {
        Some(p) => RunConfig::load(p)?.gate,
        None => GateSpec::default(),
    };
    if let Some(w) = args.gate_xx_ns {
        spec.xx_width_ns = w;
    }
    if let Some(w) = args.gate_x_ns {
        spec.x_width_ns = w;
    }
    spec.xx_center_ns = args.gate_xx_center_ns.or(spec.xx_center_ns);
    spec.x_center_ns = args.gate_x_center_ns.or(spec.x_center_ns);
    Ok(spec)
}

/// Window centres, falling back to each channel's arrival-time peak.
fn centers(spec: &GateSpec, file: &EventFile) -> Result<(f64, f64)> {
    let period = file.manifest.config.rep_period_ns;
    let peak = |given: Option<f64>, channel: Channel| -> Result<f64> {
        match given {
            Some(c) => Ok(c),
            None => peak_time(&file.events, channel, period)
                .with_context(|| format!("no {channel} events to centre the gate on")),
        }
    };
    Ok((peak(spec.xx_center_ns, Channel::Xx)?, peak(spec.x_center_ns, Channel::X)?))
}

fn windows(file: &EventFile, centers: (f64, f64), xx_width: f64, x_width: f64) -> Result<GateWindows> {
    let period = file.manifest.config.rep_period_ns;
    let gate = GateWindows::new(
        GateWindows::clamp_center(centers.0, xx_width, period),
        xx_width,
        GateWindows::clamp_center(centers.1, x_width, period),
        x_width,
    )?;
    gate.validate(period)?;
    Ok(gate)
}

fn resolve_gate(args: &GateArgs, file: &EventFile) -> Result<GateWindows> {
    let spec = gate_spec(args)?;
    windows(file, centers(&spec, file)?, spec.xx_width_ns, spec.x_width_ns)
}

fn modes(mode: GateMode, args: &GateArgs, file: &EventFile) -> Result<Vec<Option<GateWindows>>> {
    Ok(match mode {
        GateMode::Off => vec![None],
        GateMode::On => vec![Some(resolve_gate(args, file)?)],
        GateMode::Both => vec![None, Some(resolve_gate(args, file)?)],
    })
}

fn prefix(gate: Option<&GateWindows>) -> &'static str {
    if gate.is_some() {
        "gated"
    } else {
        "ungated"
    }
}

fn header(r: &mut Report, file: &EventFile, gates: &[Option<GateWindows>]) {
    r.push("digest", &file.digest);
    r.push("pulses_per_setting", file.manifest.pulses_per_setting);
    if let Some(g) = gates.iter().flatten().next() {
        r.number("gate.xx_center_ns", g.xx_center_ns);
        r.number("gate.xx_width_ns", g.xx_width_ns);
        r.number("gate.x_center_ns", g.x_center_ns);
        r.number("gate.x_width_ns", g.x_width_ns);
    }
}

fn bell_report(r: &mut Report, p: &str, b: &BellResult) {
    r.measured(&format!("{p}.C_rect"), b.c_rect);
    r.measured(&format!("{p}.C_diag"), b.c_diag);
    r.measured(&format!("{p}.C_circ"), b.c_circ);
    r.measured(&format!("{p}.f"), b.fidelity);
    for (name, s) in [("S_RC", b.s_rc), ("S_DC", b.s_dc), ("S_RD", b.s_rd)] {
        r.measured(&format!("{p}.{name}"), s);
        r.number(format!("{p}.{name}_sigmas_above_2"), s.sigmas_from(2.0));
    }
}

pub fn bell(args: &AnalysisArgs, out: &mut dyn Write) -> Result<()> {
    let file = load_events(&args.events)?;
    let gates = modes(args.gate, &args.windows, &file)?;
    match args.report {
        ReportFormat::Text => {
            let mut r = Report::default();
            header(&mut r, &file, &gates);
            for g in &gates {
                let b = analyze_bell(&file.manifest, &file.events, g.as_ref())?;
                bell_report(&mut r, prefix(g.as_ref()), &b);
            }
            write!(out, "{r}")?;
        }
        ReportFormat::Csv => {
            let mut t = Table::new(&[
                "gate", "basis", "g2_co", "g2_co_err", "g2_cross", "g2_cross_err", "zero_co",
                "zero_cross", "C", "C_err",
            ]);
            // Fails with the full list of missing bases before any row is built.
            analyze_bell(&file.manifest, &file.events, None)?;
            for g in &gates {
                for basis in Basis::ALL {
                    let setting = file.manifest.setting_by_label(basis.name()).expect("checked");
                    let c = analyze_setting(&file.events, setting, g.as_ref(), file.manifest.pulses_per_setting)?;
                    t.row(vec![
                        prefix(g.as_ref()).into(),
                        basis.name().into(),
                        num(c.g2_co.value),
                        num(c.g2_co.sigma),
                        num(c.g2_cross.value),
                        num(c.g2_cross.sigma),
                        c.g2_co.zero_count.to_string(),
                        c.g2_cross.zero_count.to_string(),
                        num(c.c),
                        num(c.sigma_c),
                    ]);
                }
            }
            write!(out, "{t}")?;
        }
    }
    Ok(())
}

pub fn chsh(args: &AnalysisArgs, out: &mut dyn Write) -> Result<()> {
    let file = load_events(&args.events)?;
    let gates = modes(args.gate, &args.windows, &file)?;
    let mut r = Report::default();
    header(&mut r, &file, &gates);
    let mut t = Table::new(&["gate", "term", "xx_hwp_deg", "x_hwp_deg", "sign", "value", "err"]);
    for g in &gates {
        let p = prefix(g.as_ref());
        let c = analyze_chsh(&file.manifest, &file.events, g.as_ref())?;
        r.push(format!("{p}.convention"), c.convention);
        for (term, sign) in c.terms.iter().zip(c.convention.signs) {
            let key = format!("{p}.E_xx{}_x{}", term.xx_angle_deg, term.x_angle_deg);
            r.measured(&key, term.e);
            t.row(vec![
                p.into(),
                "E".into(),
                term.xx_angle_deg.to_string(),
                term.x_angle_deg.to_string(),
                sign.to_string(),
                num(term.e.value),
                num(term.e.sigma),
            ]);
        }
        r.measured(&format!("{p}.S_CHSH"), c.s);
        r.number(format!("{p}.S_CHSH_sigmas_above_2"), c.s.sigmas_from(2.0));
        t.row(vec![
            p.into(),
            "S".into(),
            String::new(),
            String::new(),
            String::new(),
            num(c.s.value),
            num(c.s.sigma),
        ]);
    }
    match args.report {
        ReportFormat::Text => write!(out, "{r}")?,
        ReportFormat::Csv => write!(out, "{t}")?,
    }
    Ok(())
}

pub fn splitting(args: &SplittingArgs, out: &mut dyn Write) -> Result<()> {
    let scan = match (&args.scan, args.simulate_uev) {
        (Some(path), _) => {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            read_scan(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?
        }
        (None, Some(s)) => {
            let seed = resolve_seed(args.seed).unwrap_or(DEFAULT_SEED);
            simulate_scan(s, args.phase_deg, args.noise_uev, &default_angles(args.points), seed)?
        }
        (None, None) => bail!("pass --scan or --simulate-ueV"),
    };
    if let Some(path) = &args.out {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        write_scan(&mut w, &scan)?;
        w.flush()?;
    }
    let fit = match fit_splitting(&scan) {
        Ok(f) => f,
        Err(SplittingError::FitFailure { reason, residual_rms, residuals }) => {
            let list: Vec<String> = residuals.iter().map(|r| format!("{r:.4}")).collect();
            bail!("fit failed: {reason}; residual rms {residual_rms:.4} µeV; residuals [{}]", list.join(", "));
        }
        Err(e) => return Err(e.into()),
    };
    let ok = verdict(&fit);
    match args.report {
        ReportFormat::Text => {
            let mut r = Report::default();
            r.push("points", scan.samples.len());
            r.number("S_ueV", fit.splitting_uev);
            r.number("S_err_ueV", fit.sigma_uev);
            r.number("phase_deg", fit.phase_deg);
            r.number("offset_ueV", fit.offset_uev);
            r.number("residual_rms_ueV", fit.residual_rms_uev);
            if let Some(chi2) = fit.chi2 {
                r.number("chi2", chi2);
            }
            r.push("dof", fit.dof);
            r.number("threshold_ueV", SPLITTING_THRESHOLD_UEV);
            r.push("verdict", ok);
            write!(out, "{r}")?;
        }
        ReportFormat::Csv => {
            let mut t = Table::new(&["points", "S_ueV", "S_err_ueV", "phase_deg", "offset_ueV", "residual_rms_ueV", "verdict"]);
            t.row(vec![
                scan.samples.len().to_string(),
                num(fit.splitting_uev),
                num(fit.sigma_uev),
                num(fit.phase_deg),
                num(fit.offset_uev),
                num(fit.residual_rms_uev),
                ok.to_string(),
            ]);
            write!(out, "{t}")?;
        }
    }
    Ok(())
}

pub fn gate_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let file = load_events(&args.events)?;
    let spec = gate_spec(&args.windows)?;
    let centers = centers(&spec, &file)?;
    let ratio = spec.x_width_ns / spec.xx_width_ns;
    let period = file.manifest.config.rep_period_ns;
    if args.widths_ns.is_empty() {
        bail!("no widths to sweep");
    }

    const COLUMNS: [&str; 10] = [
        "xx_width_ns", "x_width_ns", "f", "f_err", "S_RC", "S_RC_err", "S_DC", "S_DC_err", "S_RD", "S_RD_err",
    ];
    let mut t = Table::new(&COLUMNS);
    let mut best: Option<(f64, f64)> = None;
    for &w in &args.widths_ns {
        let xx = w.min(period);
        let x = (w * ratio).min(period);
        let gate = windows(&file, centers, xx, x)?;
        let b = analyze_bell(&file.manifest, &file.events, Some(&gate))?;
        let mut row = vec![num(xx), num(x)];
        for m in [b.fidelity, b.s_rc, b.s_dc, b.s_rd] {
            row.push(num(m.value));
            row.push(num(m.sigma));
        }
        t.row(row);
        if best.map_or(true, |(_, f)| b.fidelity.value > f) {
            best = Some((xx, b.fidelity.value));
        }
    }
    match args.report {
        ReportFormat::Csv => write!(out, "{t}")?,
        ReportFormat::Text => {
            let mut r = Report::default();
            r.push("digest", &file.digest);
            r.number("gate.xx_center_ns", centers.0);
            r.number("gate.x_center_ns", centers.1);
            r.number("gate.x_to_xx_width_ratio", ratio);
            for (i, row) in t.rows().iter().enumerate() {
                for (k, v) in COLUMNS.iter().zip(row) {
                    r.push(format!("row.{i}.{k}"), v);
                }
            }
            let (w, f) = best.expect("non-empty sweep");
            r.number("best.xx_width_ns", w);
            r.number("best.f", f);
            write!(out, "{r}")?;
        }
    }
    Ok(())
}
