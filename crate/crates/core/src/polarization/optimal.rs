//! CHSH settings that maximize the violation for a given state.

use nalgebra::Vector3;

use super::{correlation_e, BasisPair, PolarizationVector, TwoPhotonState};

/// Analyzer states for the CHSH form
/// `S = E(α,β) − E(α′,β) + E(α,β′) + E(α′,β′)`; `α` on photon 1, `β` on photon 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings {
    pub alpha: PolarizationVector,
    pub alpha_prime: PolarizationVector,
    pub beta: PolarizationVector,
    pub beta_prime: PolarizationVector,
}

impl ChshSettings {
    /// Setting pairs in the order `(α,β), (α′,β), (α,β′), (α′,β′)`.
    pub fn pairs(&self) -> [BasisPair; 4] {
        [
            BasisPair::new(self.alpha, self.beta),
            BasisPair::new(self.alpha_prime, self.beta),
            BasisPair::new(self.alpha, self.beta_prime),
            BasisPair::new(self.alpha_prime, self.beta_prime),
        ]
    }
}

pub fn chsh_value(state: &TwoPhotonState, settings: &ChshSettings) -> f64 {
    let [ab, a2b, ab2, a2b2] = settings.pairs().map(|p| correlation_e(state, &p));
    ab - a2b + ab2 + a2b2
}

/// `2√(s₁² + s₂²)` from the two largest singular values of the correlation
/// tensor: the largest CHSH value any settings reach for this state.
pub fn horodecki_bound(state: &TwoPhotonState) -> f64 {
    let (s, _, _) = sorted_svd(state);
    2.0 * (s[0] * s[0] + s[1] * s[1]).sqrt()
}

/// Settings attaining [`horodecki_bound`].
pub fn optimal_chsh_settings(state: &TwoPhotonState) -> ChshSettings {
    let (s, u, v) = sorted_svd(state);
    let t = if s[0] > 0.0 {
        s[1].atan2(s[0])
    } else {
        std::f64::consts::FRAC_PI_4
    };
    let (st, ct) = t.sin_cos();
    let beta = v[0] * ct - v[1] * st;
    let beta_prime = v[0] * ct + v[1] * st;
    let to_state = |w: Vector3<f64>| {
        PolarizationVector::from_stokes([w[0], w[1], w[2]])
            .expect("unit Stokes direction from orthonormal SVD factors")
    };
    ChshSettings {
        alpha: to_state(u[0]),
        alpha_prime: to_state(u[1]),
        beta: to_state(beta),
        beta_prime: to_state(beta_prime),
    }
}

fn sorted_svd(state: &TwoPhotonState) -> ([f64; 3], [Vector3<f64>; 3], [Vector3<f64>; 3]) {
    let svd = state.correlation_tensor().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested Vᵀ");
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let s = idx.map(|k| svd.singular_values[k]);
    let us = idx.map(|k| u.column(k).into_owned());
    let vs = idx.map(|k| v_t.row(k).transpose());
    (s, us, vs)
}

#[cfg(test)]
mod tests {
    use super::super::{bell_state_psi_plus, TwoPhotonState};
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn psi_plus_reaches_tsirelson() {
        let psi = bell_state_psi_plus();
        let settings = optimal_chsh_settings(&psi);
        assert_abs_diff_eq!(chsh_value(&psi, &settings), 2.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(horodecki_bound(&psi), 2.0 * 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn werner_bound_scales() {
        for p in [0.0, 0.3, 0.7071, 1.0] {
            let w = TwoPhotonState::werner(p);
            let s = chsh_value(&w, &optimal_chsh_settings(&w));
            assert_abs_diff_eq!(s, 2.0 * 2f64.sqrt() * p, epsilon = 1e-12);
        }
    }
}
