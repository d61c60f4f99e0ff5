//! Single- and two-photon polarization algebra.
//!
//! Everything is expressed in the fixed lab linear basis `{H, V}`. Two-photon
//! operators use the ordered product basis `{H₁H₂, H₁V₂, V₁H₂, V₁V₂}`, where
//! photon 1 is the biexciton (first emitted) photon and photon 2 the exciton
//! photon.
//!
//! # Conventions
//!
//! * Circular handedness: `L = (H + iV)/√2`, `R = (H − iV)/√2`. With this
//!   choice the cascade state `(|L₁R₂⟩ + |R₁L₂⟩)/√2` equals
//!   `(|H₁H₂⟩ + |V₁V₂⟩)/√2`: co-polarized in the rectilinear and diagonal
//!   bases, anti-correlated in the circular basis.
//! * Stokes axes: `s₁` is H/V, `s₂` is D/A, `s₃` is L/R (L at `s₃ = +1`).
//! * Angles are in degrees, measured from lab-vertical. A positive angle turns
//!   the vertical axis towards `−H`, so a linear polarizer at angle `θ` passes
//!   `(−sin θ, cos θ)` and a half-wave plate at 22.5° takes `H` to `D`.
//! * Waveplates are defined up to a global phase; compare states through
//!   `|⟨a|b⟩|`, never through raw amplitudes.

mod jones;
mod optimal;
mod state;

pub use jones::{ElementKind, JonesOperator, Retarder};
pub use optimal::{chsh_value, horodecki_bound, optimal_chsh_settings, ChshSettings};
pub use state::{
    bell_state_psi_plus, correlation_e, pair_projector, probability, Basis, BasisPair, Port,
    TwoPhotonKet, TwoPhotonState,
};

use nalgebra::Vector2;
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Tolerance for norms, orthogonality, unitarity and Hermiticity checks.
pub const EXACT_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a density matrix; anything in
/// `[-PSD_TOL, 0)` is treated as zero.
pub const PSD_TOL: f64 = 1e-10;
/// Probabilities outside `[-PROB_TOL, 1 + PROB_TOL]` are reported as errors.
pub const PROB_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolarizationError {
    #[error("polarization vector has norm² {norm_sqr}, expected 1")]
    NotNormalized { norm_sqr: f64 },
    #[error("zero-length polarization vector")]
    ZeroVector,
    #[error("basis vectors are not orthogonal (|⟨a|b⟩| = {overlap:.3e})")]
    NotOrthogonal { overlap: f64 },
    #[error("density matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("density matrix has negative eigenvalue {eigenvalue:.3e}")]
    NotPositive { eigenvalue: f64 },
    #[error("probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },
}

/// The six canonical polarizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    H,
    V,
    D,
    A,
    L,
    R,
}

/// A normalized single-photon Jones vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationVector(Vector2<C64>);

impl PolarizationVector {
    /// Wraps `(c_H, c_V)`, which must already be normalized.
    pub fn new(h: C64, v: C64) -> Result<Self, PolarizationError> {
        let norm_sqr = h.norm_sqr() + v.norm_sqr();
        if (norm_sqr - 1.0).abs() > EXACT_TOL {
            return Err(PolarizationError::NotNormalized { norm_sqr });
        }
        Ok(Self(Vector2::new(h, v)))
    }

    pub fn normalized(h: C64, v: C64) -> Result<Self, PolarizationError> {
        let norm = (h.norm_sqr() + v.norm_sqr()).sqrt();
        if norm < 1e-300 {
            return Err(PolarizationError::ZeroVector);
        }
        Ok(Self(Vector2::new(h / norm, v / norm)))
    }

    pub(crate) fn from_vector(v: Vector2<C64>) -> Result<Self, PolarizationError> {
        Self::normalized(v[0], v[1])
    }

    pub fn basis(label: BasisLabel) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (h, v) = match label {
            BasisLabel::H => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            BasisLabel::V => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
            BasisLabel::D => (C64::new(s, 0.0), C64::new(s, 0.0)),
            BasisLabel::A => (C64::new(s, 0.0), C64::new(-s, 0.0)),
            BasisLabel::L => (C64::new(s, 0.0), C64::new(0.0, s)),
            BasisLabel::R => (C64::new(s, 0.0), C64::new(0.0, -s)),
        };
        Self(Vector2::new(h, v))
    }

    /// Linear polarization at `angle_deg` from lab-vertical.
    pub fn linear(angle_deg: f64) -> Self {
        let (s, c) = angle_deg.to_radians().sin_cos();
        Self(Vector2::new(C64::new(-s, 0.0), C64::new(c, 0.0)))
    }

    /// Pure state with the given Stokes direction; the input need not be unit
    /// length but must be nonzero.
    pub fn from_stokes(s: [f64; 3]) -> Result<Self, PolarizationError> {
        let norm = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
        if norm < 1e-300 {
            return Err(PolarizationError::ZeroVector);
        }
        let chi = (s[0] / norm).clamp(-1.0, 1.0).acos();
        let phi = s[2].atan2(s[1]);
        let (half_s, half_c) = (chi / 2.0).sin_cos();
        Ok(Self(Vector2::new(
            C64::new(half_c, 0.0),
            C64::from_polar(half_s, phi),
        )))
    }

    pub fn stokes(&self) -> [f64; 3] {
        let (h, v) = (self.0[0], self.0[1]);
        let cross = h.conj() * v;
        [h.norm_sqr() - v.norm_sqr(), 2.0 * cross.re, 2.0 * cross.im]
    }

    /// The orthogonal partner `(−c_V*, c_H*)`.
    pub fn orthogonal(&self) -> Self {
        Self(Vector2::new(-self.0[1].conj(), self.0[0].conj()))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    /// `|⟨self|other⟩|`, the phase-insensitive overlap.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    pub fn h(&self) -> C64 {
        self.0[0]
    }

    pub fn v(&self) -> C64 {
        self.0[1]
    }

    pub fn as_vector(&self) -> &Vector2<C64> {
        &self.0
    }
}

/// Returns the unit vector for one of the six canonical polarizations.
pub fn basis_vector(label: BasisLabel) -> PolarizationVector {
    PolarizationVector::basis(label)
}
