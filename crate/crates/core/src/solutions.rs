//! Closed-form super-solutions, the self-similar source, sublinear lower
//! envelopes, and the numerical constants attached to them.
//!
//! Each solution type stores the unshifted envelope g it is built from; the
//! actual solution is f(x, t) = g(x, t + T) 𝜒_{[0,∞)}(t) for a free time
//! shift T > 0. Inequality certificates always check the envelope, since
//! the shift only restricts the time window the inequality is exercised on.

use crate::error::{Error, Result};
use crate::kernel::{norm_sq, phi_radial};
use crate::potential::SelfSimilarSolution;
use crate::quadrature::{
    gauss_jacobi_rule_cached, JacobiWeight, QuadratureSpec,
};
use crate::specfun::{log_gamma, reg_lower_inc_gamma};

const PI: f64 = std::f64::consts::PI;

/// The λ = 1 super-solution f(x, t) = e^{a(t+T)} Φ₁(x, t+T) 𝜒_{[0,∞)}(t).
///
/// Its potential ratio is J_α f / f = P(α, a·t)/a^α, which stays below 1 for
/// every t as soon as a ≥ 1 and tends to a^{−α} as t → ∞; the rate a = 1 is
/// therefore the smallest one closing the inequality with an asymptotically
/// sharp bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda1SuperSolution {
    pub alpha: f64,
    /// Exponential rate a; 1 by construction, overridable for perturbation
    /// experiments.
    pub rate: f64,
    /// Time shift T > 0.
    pub t_shift: f64,
}

/// Builds the λ = 1 super-solution with the canonical rate a = 1.
pub fn make_lambda1_super(alpha: f64, t_shift: f64) -> Result<Lambda1SuperSolution> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    if !(t_shift > 0.0) || !t_shift.is_finite() {
        return Err(Error::domain(format!(
            "time shift must be positive, got {t_shift}"
        )));
    }
    Ok(Lambda1SuperSolution {
        alpha,
        rate: 1.0,
        t_shift,
    })
}

impl Lambda1SuperSolution {
    /// Same solution with a different exponential rate; rates below 1 break
    /// the inequality and serve as negative controls.
    pub fn with_rate(self, rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::domain(format!("rate must be positive, got {rate}")));
        }
        Ok(Lambda1SuperSolution { rate, ..self })
    }

    /// The solution value f(x, t); zero for t < 0.
    pub fn value(&self, x: &[f64], t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        self.envelope_value(x, t + self.t_shift)
    }

    /// The unshifted envelope g(x, t) = e^{a t} Φ₁(x, t); zero for t ≤ 0.
    pub fn envelope_value(&self, x: &[f64], t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        (self.rate * t).exp() * phi_radial(1.0, x.len(), norm_sq(x), t)
    }

    /// Closed form of J_α g / g at time t > 0: P(α, a t)/a^α.
    pub fn potential_ratio(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain(format!(
                "potential ratio requires t > 0, got {t}"
            )));
        }
        Ok(reg_lower_inc_gamma(self.alpha, self.rate * t)?
            / self.rate.powf(self.alpha))
    }
}

/// The supercritical super-solution f(x, t) = A Φ_β(x, t+T) 𝜒_{[0,∞)}(t)
/// for λ > 1 below the upper phase boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupercriticalSuperSolution {
    pub n: u32,
    pub lambda: f64,
    pub alpha: f64,
    /// Spatial kernel order β = (n+2)/2 − λα/(λ−1), positive under the
    /// construction hypothesis.
    pub beta: f64,
    /// The tuned amplitude A(n, λ, α).
    pub amplitude: f64,
    /// Multiplier on the tuned amplitude; 1 for the genuine solution,
    /// anything else is a deliberate perturbation.
    pub amplitude_scale: f64,
    /// Time shift T > 0.
    pub t_shift: f64,
}

/// Builds the supercritical super-solution. Requires λ > 1 and
/// 0 < α < (n+2)/2 · (1 − 1/λ) so that β > 0; the amplitude
///
///   A = ((4π)^{(λ−1)n/2} Γ(α+β)^λ / Γ(β))^{1/(λ−1)}
///
/// is exactly the value cancelling the constant factor in (J_α g)^λ / g.
pub fn make_supercritical_super(
    n: u32,
    lambda: f64,
    alpha: f64,
    t_shift: f64,
) -> Result<SupercriticalSuperSolution> {
    if n < 1 {
        return Err(Error::domain("dimension n must be at least 1"));
    }
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(Error::domain(format!(
            "supercritical construction requires lambda > 1, got {lambda}"
        )));
    }
    if !(t_shift > 0.0) || !t_shift.is_finite() {
        return Err(Error::domain(format!(
            "time shift must be positive, got {t_shift}"
        )));
    }
    let bound = ((n as f64 + 2.0) / 2.0) * (1.0 - 1.0 / lambda);
    if !(alpha > 0.0 && alpha < bound) {
        return Err(Error::domain(format!(
            "construction hypothesis violated: need 0 < alpha < (n+2)/2 (1 - 1/lambda) = {bound}, got {alpha}"
        )));
    }
    let beta = (n as f64 + 2.0) / 2.0 - lambda * alpha / (lambda - 1.0);
    let log_amplitude = ((lambda - 1.0) * (n as f64 / 2.0) * (4.0 * PI).ln()
        + lambda * log_gamma(alpha + beta)?
        - log_gamma(beta)?)
        / (lambda - 1.0);
    Ok(SupercriticalSuperSolution {
        n,
        lambda,
        alpha,
        beta,
        amplitude: log_amplitude.exp(),
        amplitude_scale: 1.0,
        t_shift,
    })
}

impl SupercriticalSuperSolution {
    /// Copy with amplitude multiplied by `scale`; any scale ≠ 1 breaks the
    /// sharp inequality (the ratio picks up the factor scale^{λ−1}).
    pub fn with_amplitude_scale(self, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::domain(format!(
                "amplitude scale must be positive, got {scale}"
            )));
        }
        Ok(SupercriticalSuperSolution {
            amplitude_scale: scale,
            ..self
        })
    }

    /// Effective amplitude including any perturbation.
    pub fn effective_amplitude(&self) -> f64 {
        self.amplitude * self.amplitude_scale
    }

    /// The solution value f(x, t); zero for t < 0.
    pub fn value(&self, x: &[f64], t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        self.envelope_value(x, t + self.t_shift)
    }

    /// The unshifted envelope g(x, t) = A Φ_β(x, t); zero for t ≤ 0.
    pub fn envelope_value(&self, x: &[f64], t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.effective_amplitude() * phi_radial(self.beta, x.len(), norm_sq(x), t)
    }
}

/// Exact value of (J_α g)^λ / g for the supercritical envelope:
/// the time exponent λα + (λ−1)(β − (n+2)/2) vanishes identically and the
/// tuned amplitude cancels the constant, leaving
///
///   scale^{λ−1} · e^{(1−λ)|x|²/(4t)},
///
/// which is ≤ 1 with equality exactly at x = 0 for the unperturbed solution.
pub fn supercritical_ratio(sol: &SupercriticalSuperSolution, x: &[f64], t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!(
            "supercritical ratio requires t > 0, got {t}"
        )));
    }
    let log_ratio = (sol.lambda - 1.0) * sol.amplitude_scale.ln()
        + (1.0 - sol.lambda) * norm_sq(x) / (4.0 * t);
    Ok(log_ratio.exp())
}

/// The universal sublinear lower-envelope coefficient
/// M(λ, α) = Γ(λα/(1−λ) + 1) / Γ(α + λα/(1−λ) + 1) for 0 < λ < 1.
///
/// M is characterized by ∫₀^t (t−τ)^{α−1} τ^{λα/(1−λ)} dτ / Γ(α) = M t^{α/(1−λ)}.
pub fn envelope_m(lambda: f64, alpha: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!(
            "envelope coefficient requires 0 < lambda < 1, got {lambda}"
        )));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    let m = lambda * alpha / (1.0 - lambda);
    Ok((log_gamma(m + 1.0)? - log_gamma(alpha + m + 1.0)?).exp())
}

/// The pointwise lower bound (M (t−a)^α)^{λ/(1−λ)} valid past the vanishing
/// time a for any nontrivial solution with 0 < λ < 1.
pub fn envelope_value(lambda: f64, alpha: f64, vanish_time: f64, t: f64) -> Result<f64> {
    if !(t > vanish_time) {
        return Err(Error::domain(format!(
            "envelope is defined for t > vanishing time {vanish_time}, got {t}"
        )));
    }
    let m = envelope_m(lambda, alpha)?;
    Ok((m * (t - vanish_time).powf(alpha)).powf(lambda / (1.0 - lambda)))
}

/// The sublinear envelope with its coefficient precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SublinearEnvelope {
    pub lambda: f64,
    pub alpha: f64,
    /// Time before which the solution vanishes.
    pub vanish_time: f64,
    /// The coefficient M(λ, α).
    pub coefficient: f64,
}

impl SublinearEnvelope {
    pub fn new(lambda: f64, alpha: f64, vanish_time: f64) -> Result<Self> {
        if !(vanish_time >= 0.0) || !vanish_time.is_finite() {
            return Err(Error::domain(format!(
                "vanishing time must be nonnegative, got {vanish_time}"
            )));
        }
        Ok(SublinearEnvelope {
            lambda,
            alpha,
            vanish_time,
            coefficient: envelope_m(lambda, alpha)?,
        })
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        envelope_value(self.lambda, self.alpha, self.vanish_time, t)
    }
}

/// Closed form of the bootstrap iteration b_j / fp = (b_{j−1} / fp)^λ:
/// b_j = fp · (start/fp)^{λ^j}. Converges to the fixed point geometrically
/// with rate λ in log distance.
pub fn bootstrap_sequence(start: f64, fixed_point: f64, lambda: f64, j: u32) -> Result<f64> {
    if !(start > 0.0 && fixed_point > 0.0) {
        return Err(Error::domain("bootstrap values must be positive"));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!(
            "bootstrap requires 0 < lambda < 1, got {lambda}"
        )));
    }
    let log_ratio = (start / fixed_point).ln();
    Ok(fixed_point * (lambda.powi(j as i32) * log_ratio).exp())
}

/// Constructs the self-similar source (the potential module's type).
pub fn make_selfsimilar(n: u32, lambda: f64, alpha: f64) -> Result<SelfSimilarSolution> {
    SelfSimilarSolution::new(n, lambda, alpha)
}

/// Mass of the unit kernel over the ball |ξ|² < τ seen from distance
/// `center_dist`: ∫_{|ξ|<√τ} Φ₁(x − ξ, t − τ) dξ with |x| = center_dist.
///
/// Angular parts are exact (n = 1), spectrally accurate trapezoid (n = 2),
/// or closed form (n = 3); the radial part is Gauss–Legendre.
pub fn truncated_kernel_mass(
    n: u32,
    center_dist: f64,
    t: f64,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(tau > 0.0 && tau < t) {
        return Err(Error::domain(format!(
            "need 0 < tau < t, got tau={tau}, t={t}"
        )));
    }
    if !(center_dist >= 0.0) {
        return Err(Error::domain("center distance must be nonnegative"));
    }
    spec.validate()?;
    let radius = tau.sqrt();
    let s = t - tau;
    let rule = gauss_jacobi_rule_cached(spec.node_count, JacobiWeight::new(0.0, 0.0)?)?;
    let d = center_dist;
    let value = match n {
        1 => {
            // ξ = -√τ + 2√τ u
            2.0 * radius
                * rule.integrate(|u| {
                    let xi = radius * (2.0 * u - 1.0);
                    phi_radial(1.0, 1, (d - xi) * (d - xi), s)
                })
        }
        2 => {
            // Polar: the angular factor is 2π-periodic and smooth, so the
            // trapezoid sum converges spectrally.
            let m = 64;
            let dtheta = 2.0 * PI / m as f64;
            radius
                * rule.integrate(|u| {
                    let r = radius * u;
                    let mut angular = 0.0;
                    for k in 0..m {
                        let theta = dtheta * k as f64;
                        let dist_sq = d * d + r * r - 2.0 * d * r * theta.cos();
                        angular += phi_radial(1.0, 2, dist_sq, s);
                    }
                    r * angular * dtheta
                })
        }
        3 => {
            // The polar-angle integral has the closed form 2 sinh(κ)/κ with
            // κ = d r / (2s).
            radius
                * rule.integrate(|u| {
                    let r = radius * u;
                    let kappa = d * r / (2.0 * s);
                    let angular = if kappa.abs() < 1e-8 {
                        2.0 + kappa * kappa / 3.0
                    } else {
                        2.0 * kappa.sinh() / kappa
                    };
                    r * r
                        * (4.0 * PI * s).powf(-1.5)
                        * (-(d * d + r * r) / (4.0 * s)).exp()
                        * 2.0
                        * PI
                        * angular
                })
        }
        _ => {
            return Err(Error::domain(
                "truncated kernel mass supports n in 1..=3",
            ))
        }
    };
    Ok(value)
}

/// Lower bound C(n) for the truncated kernel mass over the window
/// |x|² < t, t/4 < τ < 3t/4, found by a dense grid search over the
/// scale-invariant parameters (|x|/√t, τ/t) at t = 1.
pub fn lemma35_constant(n: u32, spec: &QuadratureSpec) -> Result<f64> {
    lemma35_constant_scan(n, 41, spec)
}

/// Grid-search variant with explicit per-axis resolution, for refinement
/// studies.
pub fn lemma35_constant_scan(n: u32, grid_per_axis: usize, spec: &QuadratureSpec) -> Result<f64> {
    if grid_per_axis < 3 {
        return Err(Error::domain("grid needs at least 3 points per axis"));
    }
    let mut minimum = f64::INFINITY;
    for i in 0..grid_per_axis {
        let dist = i as f64 / (grid_per_axis - 1) as f64;
        for j in 0..grid_per_axis {
            let tau = 0.25 + 0.5 * j as f64 / (grid_per_axis - 1) as f64;
            let value = truncated_kernel_mass(n, dist, 1.0, tau, spec)?;
            if value < minimum {
                minimum = value;
            }
        }
    }
    Ok(minimum)
}

/// The envelope seed constant
/// N₀ = C(n)/Γ(α) · ∫_{1/4}^{3/4} (1−s)^{α−1} s^{λα/(1−λ)} ds for 0 < λ < 1.
///
/// The integrand is smooth on [1/4, 3/4], so an interior Gauss–Legendre rule
/// suffices.
pub fn n0_constant(n: u32, lambda: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!(
            "N0 requires 0 < lambda < 1, got {lambda}"
        )));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    let c_n = lemma35_constant(n, spec)?;
    let m = lambda * alpha / (1.0 - lambda);
    let rule = gauss_jacobi_rule_cached(spec.node_count, JacobiWeight::new(0.0, 0.0)?)?;
    // s = 1/4 + u/2 keeps the rule on [0, 1].
    let integral = 0.5
        * rule.integrate(|u| {
            let s = 0.25 + 0.5 * u;
            (1.0 - s).powf(alpha - 1.0) * s.powf(m)
        });
    Ok(c_n / crate::specfun::gamma(alpha)? * integral)
}
