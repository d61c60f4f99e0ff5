//! Simulation and analysis of a triggered biexciton-cascade entangled photon
//! pair source.
//!
//! Conventions used throughout:
//!
//! * two-photon basis order `{H₁H₂, H₁V₂, V₁H₂, V₁V₂}`; photon 1 is the
//!   biexciton (XX) photon, photon 2 the exciton (X) photon;
//! * `L = (H + iV)/√2`, `R = (H − iV)/√2`, so that
//!   `ψ⁺ = (|L₁R₂⟩ + |R₁L₂⟩)/√2 = (|H₁H₂⟩ + |V₁V₂⟩)/√2`;
//! * angles are in degrees from lab-vertical; a polarizer at 0° passes `V`;
//! * Stokes axes are `(H/V, D/A, L/R)`.

pub mod correlator;
pub mod events;
pub mod polarization;
pub mod presets;
pub mod rng;
pub mod source;
pub mod splitting;
