use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;

use super::{PolarizationError, PolarizationVector, C64, EXACT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Retarder {
    Half,
    Quarter,
}

impl Retarder {
    fn retardance(self) -> f64 {
        match self {
            Retarder::Half => PI,
            Retarder::Quarter => FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    HalfWave,
    QuarterWave,
    Polarizer,
    Composite,
}

/// A 2×2 Jones matrix tagged with the element it represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesOperator {
    matrix: Matrix2<C64>,
    kind: ElementKind,
    angle_deg: f64,
}

impl JonesOperator {
    /// Rotated retarder with its fast axis at `angle_deg` from lab-vertical.
    pub fn waveplate(retarder: Retarder, angle_deg: f64) -> Self {
        let fast = PolarizationVector::linear(angle_deg);
        let slow = fast.orthogonal();
        let delay = C64::from_polar(1.0, retarder.retardance());
        let matrix = outer(&fast, &fast) + outer(&slow, &slow) * delay;
        let kind = match retarder {
            Retarder::Half => ElementKind::HalfWave,
            Retarder::Quarter => ElementKind::QuarterWave,
        };
        Self {
            matrix,
            kind,
            angle_deg,
        }
    }

    /// Ideal linear polarizer passing light at `angle_deg` from lab-vertical.
    pub fn polarizer(angle_deg: f64) -> Self {
        let pass = PolarizationVector::linear(angle_deg);
        Self {
            matrix: outer(&pass, &pass),
            kind: ElementKind::Polarizer,
            angle_deg,
        }
    }

    /// `next ∘ self`: light passes through `self` first.
    pub fn then(&self, next: &JonesOperator) -> JonesOperator {
        JonesOperator {
            matrix: next.matrix * self.matrix,
            kind: ElementKind::Composite,
            angle_deg: f64::NAN,
        }
    }

    pub fn identity() -> Self {
        Self {
            matrix: Matrix2::identity(),
            kind: ElementKind::Composite,
            angle_deg: 0.0,
        }
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn angle_deg(&self) -> f64 {
        self.angle_deg
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.matrix
    }

    /// Applies the operator and renormalizes; fails if the output vanishes
    /// (e.g. crossed polarizer).
    pub fn apply(&self, v: &PolarizationVector) -> Result<PolarizationVector, PolarizationError> {
        let out = self.matrix * v.as_vector();
        if out.norm_squared() < EXACT_TOL {
            return Err(PolarizationError::ZeroVector);
        }
        PolarizationVector::from_vector(out)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let d = self.matrix.adjoint() * self.matrix - Matrix2::identity();
        d.iter().all(|z| z.norm() <= tol)
    }

    /// Rank-1 Hermitian idempotent.
    pub fn is_projector(&self, tol: f64) -> bool {
        let m = &self.matrix;
        let herm = (m - m.adjoint()).iter().all(|z| z.norm() <= tol);
        let idem = (m * m - m).iter().all(|z| z.norm() <= tol);
        let trace = m.trace();
        herm && idem && (trace.re - 1.0).abs() <= tol && trace.im.abs() <= tol
    }

    /// Checks the element-kind invariants at the crate tolerance.
    pub fn is_valid(&self) -> bool {
        match self.kind {
            ElementKind::HalfWave | ElementKind::QuarterWave => self.is_unitary(EXACT_TOL),
            ElementKind::Polarizer => self.is_projector(EXACT_TOL),
            ElementKind::Composite => true,
        }
    }
}

fn outer(a: &PolarizationVector, b: &PolarizationVector) -> Matrix2<C64> {
    a.as_vector() * b.as_vector().adjoint()
}
