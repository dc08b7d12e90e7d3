//! The fractional heat kernel, its Fourier symbol, and the Gaussian
//! convolution identities behind every closed-form reduction.
//!
//! The kernel of order α > 0 in ℝⁿ is
//!
//!   Φ_α(x, t) = t^{α−1}/Γ(α) · (4πt)^{−n/2} e^{−|x|²/(4t)}  for t > 0,
//!
//! and identically zero for t ≤ 0. All evaluations assemble the logarithm
//! first and exponentiate once, so small α and large |x|²/t stay inside
//! f64 range.

use crate::error::{Error, Result};
use crate::specfun::log_gamma;

/// Squared Euclidean norm.
pub fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// A space-time evaluation point for a kernel of a given order.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelQuery {
    pub alpha: f64,
    pub x: Vec<f64>,
    pub t: f64,
}

impl KernelQuery {
    /// Validates alpha > 0, a nonempty finite coordinate vector, finite t.
    pub fn new(alpha: f64, x: Vec<f64>, t: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!(
                "kernel order alpha must be positive and finite, got {alpha}"
            )));
        }
        if x.is_empty() {
            return Err(Error::domain("kernel query needs a space dimension >= 1"));
        }
        if x.iter().any(|v| !v.is_finite()) || !t.is_finite() {
            return Err(Error::domain("kernel query coordinates must be finite"));
        }
        Ok(KernelQuery { alpha, x, t })
    }

    /// Space dimension.
    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Kernel value from the squared radius, bypassing the vector wrapper.
///
/// Exactly zero for t ≤ 0 (the kernel is supported in positive time).
pub fn phi_radial(alpha: f64, n: usize, x_norm_sq: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let log_gamma_alpha = log_gamma(alpha).expect("alpha validated positive");
    let log_val = (alpha - 1.0) * t.ln()
        - log_gamma_alpha
        - 0.5 * n as f64 * (4.0 * std::f64::consts::PI * t).ln()
        - x_norm_sq / (4.0 * t);
    log_val.exp()
}

/// Φ_α(x, t); total on a valid [`KernelQuery`].
pub fn phi(q: &KernelQuery) -> f64 {
    phi_radial(q.alpha, q.dim(), norm_sq(&q.x), q.t)
}

/// Spatial Fourier transform of the kernel: t^{α−1}/Γ(α) · e^{−t|y|²}.
///
/// Only defined for t > 0, where the transform exists pointwise.
pub fn phi_hat(alpha: f64, t: f64, y: &[f64]) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!(
            "kernel order alpha must be positive and finite, got {alpha}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!(
            "Fourier symbol requires t > 0, got {t}"
        )));
    }
    let log_val = (alpha - 1.0) * t.ln() - log_gamma(alpha)? - t * norm_sq(y);
    Ok(log_val.exp())
}

/// Closed form of the spatial convolution ∫ Φ_α(x−ξ, t−τ) Φ_β(ξ, τ) dξ:
///
///   (t−τ)^{α−1} τ^{β−1} / (Γ(α)Γ(β)) · Φ₁(x, t)   for 0 < τ < t.
pub fn space_conv_closed_form(
    alpha: f64,
    beta: f64,
    x: &[f64],
    t: f64,
    tau: f64,
) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::domain("kernel orders must be positive"));
    }
    if !(tau > 0.0 && tau < t) {
        return Err(Error::domain(format!(
            "intermediate time must satisfy 0 < tau < t, got tau={tau}, t={t}"
        )));
    }
    let n = x.len();
    let log_factor =
        (alpha - 1.0) * (t - tau).ln() + (beta - 1.0) * tau.ln() - log_gamma(alpha)? - log_gamma(beta)?;
    Ok(log_factor.exp() * phi_radial(1.0, n, norm_sq(x), t))
}

/// Closed form of (g_a * g_b)(x) for g_a(x) = e^{−|x|²/a}:
///
///   (π a b / (a + b))^{n/2} e^{−|x|²/(a+b)}.
pub fn gaussian_conv(a: f64, b: f64, x: &[f64]) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!(
            "Gaussian scale parameters must be positive, got a={a}, b={b}"
        )));
    }
    let n = x.len() as f64;
    let log_val = 0.5 * n * (std::f64::consts::PI * a * b / (a + b)).ln() - norm_sq(x) / (a + b);
    Ok(log_val.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{adaptive_integrate, QuadratureSpec};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn phi_unit_value_at_matched_time() {
        // With α = 1, n = 1, x = 0, t = 1/(4π): (4πt)^{-1/2} = 1.
        let q = KernelQuery::new(1.0, vec![0.0], 1.0 / (4.0 * PI)).unwrap();
        assert_relative_eq!(phi(&q), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn phi_vanishes_for_nonpositive_time() {
        for alpha in [0.3, 1.0, 2.7] {
            let q = KernelQuery::new(alpha, vec![0.4, -1.0], -1.0).unwrap();
            assert_eq!(phi(&q), 0.0);
            let q = KernelQuery::new(alpha, vec![0.4, -1.0], 0.0).unwrap();
            assert_eq!(phi(&q), 0.0);
        }
    }

    #[test]
    fn phi_plane_origin_profile() {
        // α = 1, n = 2, x = 0: Φ = 1/(4πt).
        for t in [0.05, 0.7, 3.0] {
            let q = KernelQuery::new(1.0, vec![0.0, 0.0], t).unwrap();
            assert_relative_eq!(phi(&q), 1.0 / (4.0 * PI * t), max_relative = 1e-14);
        }
    }

    #[test]
    fn phi_hat_examples() {
        // y = 0 leaves the pure time factor.
        let v = phi_hat(0.7, 2.0, &[0.0]).unwrap();
        let want = 2.0_f64.powf(-0.3) / crate::specfun::gamma(0.7).unwrap();
        assert_relative_eq!(v, want, max_relative = 1e-13);
        // α = 1: plain Gaussian symbol.
        let v = phi_hat(1.0, 0.8, &[0.5, 0.5]).unwrap();
        assert_relative_eq!(v, (-0.8_f64 * 0.5).exp(), max_relative = 1e-13);
        // α = 2, t = 1, |y|² = 1.
        let v = phi_hat(2.0, 1.0, &[1.0]).unwrap();
        assert_relative_eq!(v, (-1.0_f64).exp(), max_relative = 1e-13);
        assert!(phi_hat(1.0, 0.0, &[0.0]).is_err());
        assert!(phi_hat(1.0, -2.0, &[0.0]).is_err());
    }

    #[test]
    fn space_conv_closed_form_examples() {
        // Both power factors are 1 when α = β = 1.
        let v = space_conv_closed_form(1.0, 1.0, &[0.0], 1.0, 0.5).unwrap();
        assert_relative_eq!(v, (4.0 * PI).powf(-0.5), max_relative = 1e-14);
        // α = 2, β = 1, x = 0, t = 2, τ = 1 -> Φ₁(0, 2) = (8π)^{-1/2}.
        let v = space_conv_closed_form(2.0, 1.0, &[0.0], 2.0, 1.0).unwrap();
        assert_relative_eq!(v, (8.0 * PI).powf(-0.5), max_relative = 1e-14);
        assert!(space_conv_closed_form(1.0, 1.0, &[0.0], 1.0, 1.5).is_err());
        assert!(space_conv_closed_form(1.0, 1.0, &[0.0], 1.0, 0.0).is_err());
    }

    #[test]
    fn space_conv_matches_spatial_quadrature() {
        // Random n = 1 instances checked against direct integration of
        // ∫ Φ_α(x-ξ, t-τ) Φ_β(ξ, τ) dξ.
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed_0010);
        let spec = QuadratureSpec::default();
        for _ in 0..8 {
            let alpha: f64 = rng.gen_range(0.3..3.0);
            let beta: f64 = rng.gen_range(0.3..3.0);
            let t: f64 = rng.gen_range(0.2..2.0);
            let tau: f64 = rng.gen_range(0.05..0.95) * t;
            let x: f64 = rng.gen_range(-2.0..2.0);
            let reach = 10.0 * t.sqrt() + x.abs();
            let lhs = adaptive_integrate(
                |xi| {
                    phi_radial(alpha, 1, (x - xi) * (x - xi), t - tau)
                        * phi_radial(beta, 1, xi * xi, tau)
                },
                -reach,
                reach,
                &spec,
            )
            .unwrap()
            .value;
            let rhs = space_conv_closed_form(alpha, beta, &[x], t, tau).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-8 * rhs.abs(),
                "alpha={alpha} beta={beta} t={t} tau={tau} x={x}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn gaussian_conv_examples() {
        // a = b, x = 0: (πa/2)^{n/2}.
        for n in 1..=3usize {
            let x = vec![0.0; n];
            let v = gaussian_conv(1.6, 1.6, &x).unwrap();
            assert_relative_eq!(v, (PI * 0.8).powf(n as f64 / 2.0), max_relative = 1e-14);
        }
        // a = b = 1, n = 2, |x|² = 2: (π/2) e^{-1}.
        let v = gaussian_conv(1.0, 1.0, &[1.0, 1.0]).unwrap();
        assert_relative_eq!(v, 0.5 * PI * (-1.0_f64).exp(), max_relative = 1e-14);
        assert!(gaussian_conv(0.0, 1.0, &[0.0]).is_err());
        assert!(gaussian_conv(1.0, -0.2, &[0.0]).is_err());
    }

    #[test]
    fn gaussian_conv_matches_quadrature() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed_0011);
        let spec = QuadratureSpec::default();
        for _ in 0..6 {
            let a: f64 = rng.gen_range(0.4..3.0);
            let b: f64 = rng.gen_range(0.4..3.0);
            let x: f64 = rng.gen_range(-2.0..2.0);
            let reach = x.abs() + 8.0 * a.max(b).sqrt();
            let lhs = adaptive_integrate(
                |xi| (-(x - xi) * (x - xi) / a).exp() * (-xi * xi / b).exp(),
                -reach,
                reach,
                &spec,
            )
            .unwrap()
            .value;
            let rhs = gaussian_conv(a, b, &[x]).unwrap();
            assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs(), "a={a} b={b} x={x}");
        }
    }

    #[test]
    fn unit_kernel_has_unit_mass() {
        // ∫_ℝⁿ Φ₁(x, t) dx = 1 via the radial reduction with the exact
        // sphere measures 2, 2π, 4π.
        let spec = QuadratureSpec::default();
        for n in 1..=3usize {
            let surface = match n {
                1 => 2.0,
                2 => 2.0 * PI,
                _ => 4.0 * PI,
            };
            for t in [0.1, 1.0, 10.0] {
                let reach = (4.0 * t * 45.0_f64).sqrt();
                let mass = surface
                    * adaptive_integrate(
                        |r| r.powi(n as i32 - 1) * phi_radial(1.0, n, r * r, t),
                        0.0,
                        reach,
                        &spec,
                    )
                    .unwrap()
                    .value;
                assert!((mass - 1.0).abs() < 1e-8, "n={n} t={t}: mass {mass}");
            }
        }
    }

    #[test]
    fn phi_even_in_space() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed_0012);
        for _ in 0..30 {
            let alpha: f64 = rng.gen_range(0.2..4.0);
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            let t: f64 = rng.gen_range(0.01..5.0);
            let q = KernelQuery::new(alpha, x, t).unwrap();
            let qn = KernelQuery::new(alpha, neg, t).unwrap();
            assert_eq!(phi(&q), phi(&qn));
        }
    }

    #[test]
    fn parabolic_scaling_identity() {
        // Φ_α(√s x, s t) = s^{α−1−n/2} Φ_α(x, t).
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed_0013);
        for _ in 0..50 {
            let alpha: f64 = rng.gen_range(0.2..4.0);
            let n = rng.gen_range(1..=3usize);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let t: f64 = rng.gen_range(0.05..4.0);
            let s: f64 = rng.gen_range(0.1..10.0);
            let scaled: Vec<f64> = x.iter().map(|v| v * s.sqrt()).collect();
            let lhs = phi_radial(alpha, n, norm_sq(&scaled), s * t);
            let rhs = s.powf(alpha - 1.0 - n as f64 / 2.0) * phi_radial(alpha, n, norm_sq(&x), t);
            assert!(
                (lhs - rhs).abs() <= 1e-12 * rhs.abs(),
                "alpha={alpha} n={n} s={s}"
            );
        }
    }

    #[test]
    fn kernel_query_validation() {
        assert!(KernelQuery::new(0.0, vec![0.0], 1.0).is_err());
        assert!(KernelQuery::new(1.0, vec![], 1.0).is_err());
        assert!(KernelQuery::new(1.0, vec![f64::NAN], 1.0).is_err());
    }
}
