use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;

use super::{CorrelatorError, Measured};
use crate::polarization::{
    basis_vector, chsh_value, correlation_e, BasisLabel, BasisPair, ChshSettings,
    PolarizationVector, TwoPhotonState,
};

/// Reduced single-photon Bloch length below which a state counts as
/// unpolarized.
const UNPOLARIZED_TOL: f64 = 1e-9;

/// One measured correlation of the four-setting protocol, identified by the
/// half-wave plate angles in the two channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshTerm {
    pub xx_angle_deg: f64,
    pub x_angle_deg: f64,
    pub e: Measured,
}

/// Signs applied to `E(α,β), E(α′,β), E(α,β′), E(α′,β′)`, where `α < α′` are
/// the two biexciton-channel angles and `β < β′` the two exciton-channel ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignConvention {
    pub signs: [i8; 4],
}

impl SignConvention {
    /// `E(α,β) − E(α′,β) + E(α,β′) + E(α′,β′)`.
    pub const STANDARD: Self = Self {
        signs: [1, -1, 1, 1],
    };
    /// All terms added, for correlations already quoted with their signs
    /// folded in.
    pub const FOLDED: Self = Self { signs: [1, 1, 1, 1] };

    /// The single-minus form that makes `ideal` (the four `E` values of a
    /// reference state, in canonical order) largest.
    pub fn calibrate(ideal: [f64; 4]) -> Self {
        (0..4)
            .map(|minus| {
                let mut signs = [1i8; 4];
                signs[minus] = -1;
                Self { signs }
            })
            .max_by(|a, b| a.apply(&ideal).total_cmp(&b.apply(&ideal)))
            .expect("four candidates")
    }

    pub fn apply(&self, e: &[f64; 4]) -> f64 {
        self.signs.iter().zip(e).map(|(&s, v)| f64::from(s) * v).sum()
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["E(a,b)", "E(a',b)", "E(a,b')", "E(a',b')"];
        for (i, (s, n)) in self.signs.iter().zip(NAMES).enumerate() {
            let sign = if *s < 0 { "-" } else { "+" };
            if i == 0 {
                write!(f, "{sign}{n}")?;
            } else {
                write!(f, " {sign} {n}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshResult {
    /// Terms in the order `(α,β), (α′,β), (α,β′), (α′,β′)`.
    pub terms: [ChshTerm; 4],
    pub s: Measured,
    pub convention: SignConvention,
}

/// Orders the four terms and combines them with `convention`.
pub fn chsh(terms: [ChshTerm; 4], convention: SignConvention) -> Result<ChshResult, CorrelatorError> {
    let distinct = |get: fn(&ChshTerm) -> f64| {
        let mut v: Vec<f64> = terms.iter().map(get).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let xx = distinct(|t| t.xx_angle_deg);
    let x = distinct(|t| t.x_angle_deg);
    if xx.len() != 2 || x.len() != 2 {
        return Err(CorrelatorError::SettingMismatch(format!(
            "need two biexciton and two exciton angles, got {xx:?} and {x:?}"
        )));
    }
    let find = |a: f64, b: f64| {
        let mut hits = terms.iter().filter(|t| t.xx_angle_deg == a && t.x_angle_deg == b);
        match (hits.next(), hits.next()) {
            (Some(t), None) => Ok(*t),
            _ => Err(CorrelatorError::SettingMismatch(format!(
                "combination (xx {a}°, x {b}°) must appear exactly once"
            ))),
        }
    };
    let ordered = [
        find(xx[0], x[0])?,
        find(xx[1], x[0])?,
        find(xx[0], x[1])?,
        find(xx[1], x[1])?,
    ];
    let values = ordered.map(|t| t.e.value);
    let sigma = ordered.iter().map(|t| t.e.sigma * t.e.sigma).sum::<f64>().sqrt();
    Ok(ChshResult {
        terms: ordered,
        s: Measured::new(convention.apply(&values), sigma),
        convention,
    })
}

/// Returns `(√2·(E(D,D) − E(C,C)), S)` where `S` is the CHSH value with
/// diagonal and circular analyzers `α = D`, `α′ = L` for the first photon and
/// the elliptical states `β, β′` midway between them on the Poincaré sphere
/// for the second.
pub fn bell_equivalence_check(rho: &TwoPhotonState) -> Result<(f64, f64), CorrelatorError> {
    let magnitude = rho.polarization_magnitude();
    if magnitude > UNPOLARIZED_TOL {
        return Err(CorrelatorError::Polarized { magnitude });
    }
    let d = basis_vector(BasisLabel::D);
    let c = basis_vector(BasisLabel::L);
    let lhs = SQRT_2
        * (correlation_e(rho, &BasisPair::new(d, d)) - correlation_e(rho, &BasisPair::new(c, c)));
    let (sd, sc) = (d.stokes(), c.stokes());
    let mid = |sign: f64| {
        PolarizationVector::from_stokes([0, 1, 2].map(|i| (sd[i] + sign * sc[i]) * FRAC_1_SQRT_2))
            .expect("nonzero Stokes direction")
    };
    let settings = ChshSettings {
        alpha: d,
        alpha_prime: c,
        beta: mid(1.0),
        beta_prime: mid(-1.0),
    };
    Ok((lhs, chsh_value(rho, &settings)))
}
