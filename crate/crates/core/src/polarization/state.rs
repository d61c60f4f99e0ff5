use nalgebra::{Matrix2, Matrix3, Matrix4, Vector4};

use super::{
    BasisLabel, JonesOperator, PolarizationError, PolarizationVector, C64, EXACT_TOL, PROB_TOL,
    PSD_TOL,
};

/// Measurement bases on the Poincaré sphere axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Rectilinear,
    Diagonal,
    Circular,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Rectilinear, Basis::Diagonal, Basis::Circular];

    /// `(α, ᾱ)` for this basis.
    pub fn vectors(self) -> (PolarizationVector, PolarizationVector) {
        let (a, b) = match self {
            Basis::Rectilinear => (BasisLabel::H, BasisLabel::V),
            Basis::Diagonal => (BasisLabel::D, BasisLabel::A),
            Basis::Circular => (BasisLabel::L, BasisLabel::R),
        };
        (PolarizationVector::basis(a), PolarizationVector::basis(b))
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::Rectilinear => "rectilinear",
            Basis::Diagonal => "diagonal",
            Basis::Circular => "circular",
        }
    }
}

/// Which output of a channel's analyzer: the selected state (`α`/`β`) or its
/// orthogonal partner (`ᾱ`/`β̄`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    Pass,
    Orthogonal,
}

/// Orthonormal analyzer bases for both photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPair {
    first: [PolarizationVector; 2],
    second: [PolarizationVector; 2],
}

impl BasisPair {
    /// Builds the pair from `α` and `β`; the partners are the orthogonal
    /// complements.
    pub fn new(alpha: PolarizationVector, beta: PolarizationVector) -> Self {
        Self {
            first: [alpha, alpha.orthogonal()],
            second: [beta, beta.orthogonal()],
        }
    }

    pub fn from_vectors(
        alpha: PolarizationVector,
        alpha_bar: PolarizationVector,
        beta: PolarizationVector,
        beta_bar: PolarizationVector,
    ) -> Result<Self, PolarizationError> {
        for (a, b) in [(alpha, alpha_bar), (beta, beta_bar)] {
            let overlap = a.overlap(&b);
            if overlap > EXACT_TOL {
                return Err(PolarizationError::NotOrthogonal { overlap });
            }
        }
        Ok(Self {
            first: [alpha, alpha_bar],
            second: [beta, beta_bar],
        })
    }

    /// Both photons analyzed in the same basis.
    pub fn same(basis: Basis) -> Self {
        let (a, b) = basis.vectors();
        Self {
            first: [a, b],
            second: [a, b],
        }
    }

    /// The states selected by a channel's optics: a photon in `(J†e)` exits
    /// through the polarizer of pass axis `e` after optics `J`.
    pub fn from_chains(
        first_optics: &JonesOperator,
        first_pass: &PolarizationVector,
        second_optics: &JonesOperator,
        second_pass: &PolarizationVector,
    ) -> Result<Self, PolarizationError> {
        let pull_back = |optics: &JonesOperator, pass: &PolarizationVector| {
            PolarizationVector::from_vector(optics.matrix().adjoint() * pass.as_vector())
        };
        let alpha = pull_back(first_optics, first_pass)?;
        let beta = pull_back(second_optics, second_pass)?;
        Ok(Self::new(alpha, beta))
    }

    pub fn first(&self, port: Port) -> &PolarizationVector {
        &self.first[port_index(port)]
    }

    pub fn second(&self, port: Port) -> &PolarizationVector {
        &self.second[port_index(port)]
    }
}

fn port_index(port: Port) -> usize {
    match port {
        Port::Pass => 0,
        Port::Orthogonal => 1,
    }
}

/// Pure two-photon state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonKet(Vector4<C64>);

impl TwoPhotonKet {
    pub fn new(amplitudes: Vector4<C64>) -> Result<Self, PolarizationError> {
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > EXACT_TOL {
            return Err(PolarizationError::NotNormalized { norm_sqr });
        }
        Ok(Self(amplitudes))
    }

    pub fn product(a: &PolarizationVector, b: &PolarizationVector) -> Self {
        Self(kron(a, b))
    }

    /// `(|H₁H₂⟩ + e^{iφ}|V₁V₂⟩)/√2`.
    pub fn with_relative_phase(phase: f64) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self(Vector4::new(
            C64::new(s, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::from_polar(s, phase),
        ))
    }

    pub fn amplitudes(&self) -> &Vector4<C64> {
        &self.0
    }

    /// `⟨a b|ψ⟩`.
    pub fn amplitude(&self, a: &PolarizationVector, b: &PolarizationVector) -> C64 {
        kron(a, b).dotc(&self.0)
    }

    /// Joint outcome probabilities ordered `(α,β), (α,β̄), (ᾱ,β), (ᾱ,β̄)`.
    pub fn outcome_probabilities(&self, pair: &BasisPair) -> [f64; 4] {
        let mut out = [0.0; 4];
        let mut k = 0;
        for p1 in [Port::Pass, Port::Orthogonal] {
            for p2 in [Port::Pass, Port::Orthogonal] {
                out[k] = self.amplitude(pair.first(p1), pair.second(p2)).norm_sqr();
                k += 1;
            }
        }
        out
    }

    pub fn density(&self) -> TwoPhotonState {
        TwoPhotonState {
            rho: self.0 * self.0.adjoint(),
        }
    }
}

fn kron(a: &PolarizationVector, b: &PolarizationVector) -> Vector4<C64> {
    Vector4::new(a.h() * b.h(), a.h() * b.v(), a.v() * b.h(), a.v() * b.v())
}

/// Two-photon polarization density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonState {
    rho: Matrix4<C64>,
}

impl TwoPhotonState {
    /// Validates Hermiticity, unit trace and positivity; eigenvalues in
    /// `[-PSD_TOL, 0)` are accepted.
    pub fn new(rho: Matrix4<C64>) -> Result<Self, PolarizationError> {
        let deviation = (rho - rho.adjoint())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        if deviation > EXACT_TOL {
            return Err(PolarizationError::NotHermitian { deviation });
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > EXACT_TOL || trace.im.abs() > EXACT_TOL {
            return Err(PolarizationError::BadTrace { trace: trace.re });
        }
        let state = Self { rho };
        let min = state.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(PolarizationError::NotPositive { eigenvalue: min });
        }
        Ok(state)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho: Matrix4::identity() * C64::new(0.25, 0.0),
        }
    }

    /// `p·ψ⁺ + (1−p)·I/4`.
    pub fn werner(p: f64) -> Self {
        bell_state_psi_plus().mix(&Self::maximally_mixed(), 1.0 - p)
    }

    /// `(1−w)·self + w·other`.
    pub fn mix(&self, other: &TwoPhotonState, w: f64) -> TwoPhotonState {
        TwoPhotonState {
            rho: self.rho * C64::new(1.0 - w, 0.0) + other.rho * C64::new(w, 0.0),
        }
    }

    pub fn rho(&self) -> &Matrix4<C64> {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        (self.rho * self.rho).trace().re
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let ev = self.rho.symmetric_eigenvalues();
        let mut out = [ev[0], ev[1], ev[2], ev[3]];
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }

    fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `(J₁⊗J₂) ρ (J₁⊗J₂)†`. Non-unitary operators are allowed; the result is
    /// renormalized, and fails if nothing is transmitted.
    pub fn apply_local(
        &self,
        first: &JonesOperator,
        second: &JonesOperator,
    ) -> Result<TwoPhotonState, PolarizationError> {
        let op = first.matrix().kronecker(second.matrix());
        let out = op * self.rho * op.adjoint();
        let trace = out.trace().re;
        if trace <= 0.0 {
            return Err(PolarizationError::BadTrace { trace });
        }
        let mut rho = out / C64::new(trace, 0.0);
        // Restore exact Hermiticity lost to rounding.
        rho = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
        TwoPhotonState::new(rho)
    }

    pub fn reduced_first(&self) -> Matrix2<C64> {
        let r = &self.rho;
        Matrix2::new(
            r[(0, 0)] + r[(1, 1)],
            r[(0, 2)] + r[(1, 3)],
            r[(2, 0)] + r[(3, 1)],
            r[(2, 2)] + r[(3, 3)],
        )
    }

    pub fn reduced_second(&self) -> Matrix2<C64> {
        let r = &self.rho;
        Matrix2::new(
            r[(0, 0)] + r[(2, 2)],
            r[(0, 1)] + r[(2, 3)],
            r[(1, 0)] + r[(3, 2)],
            r[(1, 1)] + r[(3, 3)],
        )
    }

    /// Largest degree of polarization of the two single-photon marginals.
    pub fn polarization_magnitude(&self) -> f64 {
        bloch_length(&self.reduced_first()).max(bloch_length(&self.reduced_second()))
    }

    pub fn is_unpolarized(&self, tol: f64) -> bool {
        self.polarization_magnitude() <= tol
    }

    /// `T_ij = Tr(ρ σ_i⊗σ_j)` on the (H/V, D/A, L/R) Stokes axes.
    pub fn correlation_tensor(&self) -> Matrix3<f64> {
        let paulis = stokes_operators();
        Matrix3::from_fn(|i, j| {
            let op = paulis[i].kronecker(&paulis[j]);
            (self.rho * op).trace().re
        })
    }
}

fn bloch_length(m: &Matrix2<C64>) -> f64 {
    let s = stokes_operators();
    let comps: Vec<f64> = s.iter().map(|p| (m * p).trace().re).collect();
    comps.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn stokes_operators() -> [Matrix2<C64>; 3] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(one, z, z, -one),
        Matrix2::new(z, one, one, z),
        Matrix2::new(z, -i, i, z),
    ]
}

/// `|ψ_{α,β}⟩⟨ψ_{α,β}|` for the selected outputs.
pub fn pair_projector(pair: &BasisPair, first: Port, second: Port) -> Matrix4<C64> {
    let v = kron(pair.first(first), pair.second(second));
    v * v.adjoint()
}

/// `Tr(ρ P)`, clamped to `[0, 1]` once within tolerance.
pub fn probability(
    state: &TwoPhotonState,
    projector: &Matrix4<C64>,
) -> Result<f64, PolarizationError> {
    let value = (state.rho * projector).trace().re;
    if !(-PROB_TOL..=1.0 + PROB_TOL).contains(&value) {
        return Err(PolarizationError::ProbabilityOutOfRange { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// `E(α,β) = P(α,β) + P(ᾱ,β̄) − P(α,β̄) − P(ᾱ,β)`.
pub fn correlation_e(state: &TwoPhotonState, pair: &BasisPair) -> f64 {
    let p = |a, b| {
        let proj = pair_projector(pair, a, b);
        (state.rho * proj).trace().re
    };
    let e = p(Port::Pass, Port::Pass) + p(Port::Orthogonal, Port::Orthogonal)
        - p(Port::Pass, Port::Orthogonal)
        - p(Port::Orthogonal, Port::Pass);
    e.clamp(-1.0, 1.0)
}

/// `(|L₁R₂⟩ + |R₁L₂⟩)/√2`, equal to `(|H₁H₂⟩ + |V₁V₂⟩)/√2`.
pub fn bell_state_psi_plus() -> TwoPhotonState {
    let l = PolarizationVector::basis(BasisLabel::L);
    let r = PolarizationVector::basis(BasisLabel::R);
    let amps = (kron(&l, &r) + kron(&r, &l)) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    TwoPhotonKet(amps).density()
}

#[cfg(test)]
mod tests {
    use super::super::{basis_vector, BasisLabel::*, Retarder};
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix4;

    fn all_ports() -> [(Port, Port); 4] {
        [
            (Port::Pass, Port::Pass),
            (Port::Pass, Port::Orthogonal),
            (Port::Orthogonal, Port::Pass),
            (Port::Orthogonal, Port::Orthogonal),
        ]
    }

    #[test]
    fn hh_projector() {
        let pair = BasisPair::same(Basis::Rectilinear);
        let p = pair_projector(&pair, Port::Pass, Port::Pass);
        assert_abs_diff_eq!(p.trace().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert!((p * p - p).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn projectors_complete() {
        let pair = BasisPair::new(
            PolarizationVector::linear(17.0),
            PolarizationVector::from_stokes([0.2, -0.5, 0.8]).unwrap(),
        );
        let sum = all_ports()
            .iter()
            .fold(Matrix4::<C64>::zeros(), |acc, &(a, b)| {
                acc + pair_projector(&pair, a, b)
            });
        assert!((sum - Matrix4::identity()).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn probabilities() {
        let hh = TwoPhotonKet::product(&basis_vector(H), &basis_vector(H)).density();
        let pair = BasisPair::same(Basis::Rectilinear);
        let proj = pair_projector(&pair, Port::Pass, Port::Pass);
        assert_abs_diff_eq!(probability(&hh, &proj).unwrap(), 1.0, epsilon = 1e-15);

        let mixed = TwoPhotonState::maximally_mixed();
        let odd = BasisPair::new(
            PolarizationVector::linear(3.0),
            PolarizationVector::from_stokes([1.0, 1.0, 1.0]).unwrap(),
        );
        for (a, b) in all_ports() {
            let p = probability(&mixed, &pair_projector(&odd, a, b)).unwrap();
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-12);
        }

        let psi = bell_state_psi_plus();
        let circ = BasisPair::same(Basis::Circular);
        let ll = probability(&psi, &pair_projector(&circ, Port::Pass, Port::Pass)).unwrap();
        assert_abs_diff_eq!(ll, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn probability_rejects_bad_operator() {
        let twice = pair_projector(&BasisPair::same(Basis::Rectilinear), Port::Pass, Port::Pass)
            * C64::new(2.0, 0.0);
        let hh = TwoPhotonKet::product(&basis_vector(H), &basis_vector(H)).density();
        assert!(matches!(
            probability(&hh, &twice),
            Err(PolarizationError::ProbabilityOutOfRange { .. })
        ));
    }

    #[test]
    fn psi_plus_structure() {
        let psi = bell_state_psi_plus();
        assert_abs_diff_eq!(psi.rho().trace().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(psi.purity(), 1.0, epsilon = 1e-12);
        let rect = BasisPair::same(Basis::Rectilinear);
        let hh = probability(&psi, &pair_projector(&rect, Port::Pass, Port::Pass)).unwrap();
        assert_abs_diff_eq!(hh, 0.5, epsilon = 1e-15);
        // Linear-basis form.
        let expected = TwoPhotonKet::with_relative_phase(0.0).density();
        assert!((psi.rho() - expected.rho()).iter().all(|z| z.norm() < 1e-15));
        assert!(psi.is_unpolarized(1e-12));
    }

    #[test]
    fn psi_plus_correlations() {
        let psi = bell_state_psi_plus();
        let e = |b| correlation_e(&psi, &BasisPair::same(b));
        assert_abs_diff_eq!(e(Basis::Rectilinear), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e(Basis::Diagonal), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e(Basis::Circular), -1.0, epsilon = 1e-15);
        let mixed = TwoPhotonState::maximally_mixed();
        for b in Basis::ALL {
            assert_abs_diff_eq!(correlation_e(&mixed, &BasisPair::same(b)), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn waveplate_measurement_matches_explicit_basis() {
        // HWP at 22.5° in front of a vertical polarizer selects the diagonal basis.
        let hwp = JonesOperator::waveplate(Retarder::Half, 22.5);
        let v = basis_vector(V);
        let via_plate = BasisPair::from_chains(&hwp, &v, &hwp, &v).unwrap();
        let state = TwoPhotonKet::with_relative_phase(0.7).density();
        let explicit = correlation_e(&state, &BasisPair::same(Basis::Diagonal));
        assert_abs_diff_eq!(correlation_e(&state, &via_plate), explicit, epsilon = 1e-12);
        assert_abs_diff_eq!(explicit, 0.7f64.cos(), epsilon = 1e-12);
    }

    #[test]
    fn rejects_invalid_density() {
        let mut rho = Matrix4::<C64>::identity() * C64::new(0.25, 0.0);
        rho[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(
            TwoPhotonState::new(rho),
            Err(PolarizationError::NotHermitian { .. })
        ));
        let rho = Matrix4::<C64>::identity() * C64::new(0.3, 0.0);
        assert!(matches!(
            TwoPhotonState::new(rho),
            Err(PolarizationError::BadTrace { .. })
        ));
        let mut rho = Matrix4::<C64>::zeros();
        rho[(0, 0)] = C64::new(1.2, 0.0);
        rho[(3, 3)] = C64::new(-0.2, 0.0);
        assert!(matches!(
            TwoPhotonState::new(rho),
            Err(PolarizationError::NotPositive { .. })
        ));
    }

    #[test]
    fn basis_pair_orthogonality_checked() {
        let h = basis_vector(H);
        let d = basis_vector(D);
        assert!(BasisPair::from_vectors(h, d, h, basis_vector(V)).is_err());
        assert!(BasisPair::from_vectors(h, basis_vector(V), d, basis_vector(A)).is_ok());
    }

    #[test]
    fn correlation_tensor_of_psi_plus() {
        let t = bell_state_psi_plus().correlation_tensor();
        let expected = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0);
        assert!((t - expected).abs().max() < 1e-12);
    }
}
