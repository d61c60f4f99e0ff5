#![allow(dead_code)]

use nalgebra::{Matrix2, Matrix4};
use qdbell::polarization::C64;
use qdbell::polarization::{TwoPhotonKet, TwoPhotonState};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn gaussian_c<R: Rng>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Ginibre-distributed mixed state `GG†/Tr(GG†)`.
pub fn random_state<R: Rng>(rng: &mut R) -> TwoPhotonState {
    let g = Matrix4::from_fn(|_, _| gaussian_c(rng));
    let rho = g * g.adjoint();
    let tr = rho.trace();
    TwoPhotonState::new(rho / tr).unwrap()
}

pub fn random_unitary2<R: Rng>(rng: &mut R) -> Matrix2<C64> {
    // Normalized quaternion → SU(2).
    let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|x| x / n);
    Matrix2::new(C64::new(a, b), C64::new(c, d), C64::new(-c, d), C64::new(a, -b))
}

fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    a.kronecker(b)
}

/// Bell-diagonal state with Dirichlet weights, rotated by random local
/// unitaries. Every unpolarized two-qubit state has this form.
pub fn random_unpolarized_state<R: Rng>(rng: &mut R) -> TwoPhotonState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let bells = [
        [r(s), z, z, r(s)],
        [r(s), z, z, r(-s)],
        [z, r(s), r(s), z],
        [z, r(s), r(-s), z],
    ];
    let w: Vec<f64> = (0..4).map(|_| -rng.random::<f64>().ln()).collect();
    let total: f64 = w.iter().sum();
    let mut rho = Matrix4::<C64>::zeros();
    for (b, wi) in bells.iter().zip(&w) {
        let v = nalgebra::Vector4::from_row_slice(b);
        rho += v * v.adjoint() * C64::new(wi / total, 0.0);
    }
    let u = kron2(&random_unitary2(rng), &random_unitary2(rng));
    let rho = u * rho * u.adjoint();
    TwoPhotonState::new((rho + rho.adjoint()) * C64::new(0.5, 0.0)).unwrap()
}

/// Random mixture of up to six product states.
pub fn random_separable_state<R: Rng>(rng: &mut R) -> TwoPhotonState {
    let k = rng.random_range(1..=6);
    let mut rho = Matrix4::<C64>::zeros();
    let mut total = 0.0;
    for _ in 0..k {
        let v = |rng: &mut R| {
            let (a, b) = (gaussian_c(rng), gaussian_c(rng));
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            qdbell::polarization::PolarizationVector::new(a / n, b / n).unwrap()
        };
        let ket = TwoPhotonKet::product(&v(rng), &v(rng));
        let w: f64 = rng.random();
        total += w;
        rho += ket.density().rho() * C64::new(w, 0.0);
    }
    TwoPhotonState::new(rho / C64::new(total, 0.0)).unwrap()
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Four-sigma agreement between a measured value and an expectation.
pub fn within_sigmas(value: f64, sigma: f64, expected: f64, n: f64) -> bool {
    (value - expected).abs() <= n * sigma.max(1e-12)
}
