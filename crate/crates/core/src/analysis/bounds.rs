//! Closed-form admissibility and eigenvalue bounds. Their dimensional
//! constant `C(n)` is not known explicitly, so every function takes it as
//! input; results hold only up to that constant.

use serde::{Deserialize, Serialize};

/// Geometric and mesh data entering the mesh-size admissibility bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityInput {
    pub n: u32,
    pub epsilon: f64,
    /// Curvature parameter `Λ` with `diameter² · |K| ≤ Λ²`.
    pub lambda: f64,
    pub diameter: f64,
    pub injectivity: f64,
    pub thinness: f64,
    /// Eigenvalue index `p ≥ 1`.
    pub order: u32,
    pub c_n: f64,
}

/// Largest mesh size `m_T` certified to give `(1 ± ε)` eigenvalue
/// agreement up to index `p`:
///
/// `δ · C(n) · (i / (δ Θ e^{e^Λ} p))^{3n³} · ε`
pub fn theorem1_admissible_mesh(input: &AdmissibilityInput) -> f64 {
    let AdmissibilityInput {
        n,
        epsilon,
        lambda,
        diameter,
        injectivity,
        thinness,
        order,
        c_n,
    } = *input;
    let exponent = 3.0 * f64::from(n).powi(3);
    let base = injectivity / (diameter * thinness * lambda.exp().exp() * f64::from(order));
    diameter * c_n * base.powf(exponent) * epsilon
}

pub fn theorem1_mesh_certified(mesh: f64, input: &AdmissibilityInput) -> bool {
    mesh <= theorem1_admissible_mesh(input)
}

/// Upper bound on `λ_k`:
/// `C(n) · (δ/i)² · e^{n e^Λ / 2} · k² / δ²`.
pub fn cheng_bound(n: u32, k: u64, lambda: f64, diameter: f64, injectivity: f64, c_n: f64) -> f64 {
    let ratio = diameter / injectivity;
    let k = k as f64;
    c_n * ratio * ratio * (f64::from(n) * lambda.exp() / 2.0).exp() * k * k / (diameter * diameter)
}
