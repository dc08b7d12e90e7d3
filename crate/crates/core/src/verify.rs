//! Grid-based inequality certification and identity checking.
//!
//! Every check produces a [`VerificationReport`] whose pass flag is a pure
//! function of the recorded numbers: [`VerificationReport::recompute_pass`]
//! re-derives it from the report alone.
//!
//! Super-solution ratios are always evaluated for the *unshifted* envelope
//! g at the grid times moved forward by the solution's shift T. The shifted
//! solution f(x, t) = g(x, t+T) 𝜒_{[0,∞)}(t) satisfies
//! J_α f(x, t) ≤ J_α g(x, t+T), so certifying (J_α g)^λ ≤ g at the shifted
//! times certifies the inequality for f on the grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{norm_sq, phi_radial, space_conv_closed_form};
use crate::potential::{
    i_profile, j_alpha_direct, j_alpha_separable, SelfSimilarSolution, SeparableKernelInput,
};
use crate::quadrature::{
    adaptive_integrate, gauss_jacobi_rule_cached, JacobiWeight, QuadratureSpec,
};
use crate::regions::{xp_membership_selfsimilar, xp_time_exponent, PlaneParams};
use crate::solutions::{Lambda1SuperSolution, SupercriticalSuperSolution};

const PI: f64 = std::f64::consts::PI;

/// Divergence gate of the X^p membership detector: the truncated integral
/// growing by more than this factor while the cutoff shrinks from 1e−2 to
/// 1e−6 counts as divergent.
pub const XP_GROWTH_GATE: f64 = 10.0;

/// Boundary gate excluding the measure-zero exponent −1 from the X^p check.
pub const XP_BOUNDARY_GATE: f64 = 1e-9;

/// An axis-aligned space grid crossed with a list of times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: u32,
    /// The grid covers |x_i| ≤ x_extent on each axis.
    pub x_extent: f64,
    /// Points per axis.
    pub x_count: usize,
    /// Evaluation times, all positive.
    pub t_values: Vec<f64>,
}

impl GridSpec {
    pub fn new(n: u32, x_extent: f64, x_count: usize, t_values: Vec<f64>) -> Result<Self> {
        let grid = GridSpec {
            n,
            x_extent,
            x_count,
            t_values,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.n > 3 {
            return Err(Error::domain("grid dimension must be in 1..=3"));
        }
        if !(self.x_extent > 0.0) {
            return Err(Error::domain("grid extent must be positive"));
        }
        if self.x_count < 3 {
            return Err(Error::domain("grid needs at least 3 points per axis"));
        }
        if self.t_values.is_empty() || self.t_values.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::domain("grid times must be nonempty and positive"));
        }
        Ok(())
    }

    /// Default grid for the super-solution checks: t log-spaced over
    /// [0.01, 10] at half decades, x extent 6·√t_max, 41 points per axis.
    pub fn default_super(n: u32) -> Self {
        let t_values: Vec<f64> = (0..7).map(|k| 1e-2 * 10f64.powf(k as f64 / 2.0)).collect();
        GridSpec {
            n,
            x_extent: 6.0 * 10f64.sqrt(),
            x_count: 41,
            t_values,
        }
    }

    fn axis(&self) -> Vec<f64> {
        let m = self.x_count;
        (0..m)
            .map(|i| -self.x_extent + 2.0 * self.x_extent * i as f64 / (m - 1) as f64)
            .collect()
    }

    /// Visits every (x, t) of the tensor grid.
    fn for_each_point(&self, mut visit: impl FnMut(&[f64], f64)) {
        let axis = self.axis();
        let mut x = vec![0.0; self.n as usize];
        for &t in &self.t_values {
            match self.n {
                1 => {
                    for &a in &axis {
                        x[0] = a;
                        visit(&x, t);
                    }
                }
                2 => {
                    for &a in &axis {
                        for &b in &axis {
                            x[0] = a;
                            x[1] = b;
                            visit(&x, t);
                        }
                    }
                }
                _ => {
                    for &a in &axis {
                        for &b in &axis {
                            for &c in &axis {
                                x[0] = a;
                                x[1] = b;
                                x[2] = c;
                                visit(&x, t);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// A space-time point recorded in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceTimePoint {
    pub x: Vec<f64>,
    pub t: f64,
}

/// A named scalar, used for deterministic parameter echoes in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

impl NamedValue {
    pub fn new(name: &str, value: f64) -> Self {
        NamedValue {
            name: name.to_string(),
            value,
        }
    }
}

/// Numeric payload of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioResults {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub arg_min: Option<SpaceTimePoint>,
    pub arg_max: Option<SpaceTimePoint>,
    pub tolerance: f64,
    /// Relative change of the extremes under refinement, where applicable.
    pub stability: Option<f64>,
    pub notes: Vec<String>,
}

/// A machine-readable inequality or identity certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub kind: String,
    pub params: Vec<NamedValue>,
    pub paper_refs: Vec<String>,
    pub grid: Option<GridSpec>,
    pub results: RatioResults,
    pub pass: bool,
}

const FAILURE_NOTE: &str = "quadrature failure";

impl VerificationReport {
    /// Re-derives the pass flag from the recorded numbers; matching the
    /// stored flag is what makes a report self-certifying.
    pub fn recompute_pass(&self) -> bool {
        if self.results.notes.iter().any(|n| n.starts_with(FAILURE_NOTE)) {
            return false;
        }
        let r = &self.results;
        match self.kind.as_str() {
            "super-lambda1" | "super-supercritical" => {
                r.max_ratio.is_finite() && r.max_ratio <= 1.0 + r.tolerance
            }
            "approx-constants" => {
                r.min_ratio > 0.0
                    && r.max_ratio.is_finite()
                    && r.stability.map(|s| s < r.tolerance).unwrap_or(false)
            }
            "xp-membership" => {
                let q = self
                    .params
                    .iter()
                    .find(|p| p.name == "time_exponent")
                    .map(|p| p.value)
                    .unwrap_or(f64::NAN);
                if (q + 1.0).abs() <= XP_BOUNDARY_GATE {
                    return true;
                }
                let detected_divergent = r.max_ratio > r.tolerance;
                detected_divergent == (q < -1.0)
            }
            _ if self.kind.starts_with("identity-") => {
                (r.max_ratio - 1.0).abs() <= r.tolerance
            }
            _ => false,
        }
    }

    /// All floats a serialized report carries must be finite.
    pub fn validate_finite(&self) -> Result<()> {
        let check = |name: &str, v: f64| -> Result<()> {
            if !v.is_finite() {
                return Err(Error::Schema(format!("non-finite value in field {name}")));
            }
            Ok(())
        };
        for p in &self.params {
            check(&p.name, p.value)?;
        }
        check("min_ratio", self.results.min_ratio)?;
        check("max_ratio", self.results.max_ratio)?;
        check("tolerance", self.results.tolerance)?;
        if let Some(s) = self.results.stability {
            check("stability", s)?;
        }
        for pt in [&self.results.arg_min, &self.results.arg_max].into_iter().flatten() {
            check("arg t", pt.t)?;
            for &c in &pt.x {
                check("arg x", c)?;
            }
        }
        if let Some(grid) = &self.grid {
            check("x_extent", grid.x_extent)?;
            for &t in &grid.t_values {
                check("t_values", t)?;
            }
        }
        Ok(())
    }
}

/// Either of the two explicit super-solution families.
#[derive(Debug, Clone)]
pub enum SuperSolution {
    Lambda1(Lambda1SuperSolution),
    Supercritical(SupercriticalSuperSolution),
}

/// Certifies f ≥ (J_α f)^λ on a grid by evaluating r = (J_α g)^λ / g at the
/// shift-adjusted grid times, with J_α computed by quadrature. Passes when
/// the grid maximum stays at or below 1 + tol.
pub fn verify_super(
    solution: &SuperSolution,
    grid: &GridSpec,
    tol: f64,
    spec: &QuadratureSpec,
) -> VerificationReport {
    let (kind, params, refs, lambda, alpha, t_shift) = match solution {
        SuperSolution::Lambda1(sol) => (
            "super-lambda1",
            vec![
                NamedValue::new("alpha", sol.alpha),
                NamedValue::new("lambda", 1.0),
                NamedValue::new("rate", sol.rate),
                NamedValue::new("t_shift", sol.t_shift),
            ],
            vec!["T2.1".to_string(), "T2.4".to_string()],
            1.0,
            sol.alpha,
            sol.t_shift,
        ),
        SuperSolution::Supercritical(sol) => (
            "super-supercritical",
            vec![
                NamedValue::new("n", sol.n as f64),
                NamedValue::new("lambda", sol.lambda),
                NamedValue::new("alpha", sol.alpha),
                NamedValue::new("beta", sol.beta),
                NamedValue::new("amplitude", sol.effective_amplitude()),
                NamedValue::new("amplitude_scale", sol.amplitude_scale),
                NamedValue::new("t_shift", sol.t_shift),
            ],
            vec!["T4.2".to_string(), "T4.3".to_string(), "T4.4".to_string()],
            sol.lambda,
            sol.alpha,
            sol.t_shift,
        ),
    };

    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut arg_min = None;
    let mut arg_max = None;
    let mut notes = vec![format!(
        "ratios taken for the unshifted envelope at grid times shifted by T = {t_shift}"
    )];
    let mut failed = false;

    grid.for_each_point(|x, t| {
        if failed {
            return;
        }
        let s = t + t_shift;
        let ratio = match solution {
            SuperSolution::Lambda1(sol) => {
                let rate = sol.rate;
                let input = SeparableKernelInput::new(1.0, move |tau: f64| (rate * tau).exp())
                    .expect("beta = 1 is valid");
                match j_alpha_separable(alpha, &input, x, s, spec) {
                    Ok(j) => j / sol.envelope_value(x, s),
                    Err(e) => {
                        notes.push(format!("{FAILURE_NOTE} at (x={x:?}, t={s}): {e}"));
                        failed = true;
                        return;
                    }
                }
            }
            SuperSolution::Supercritical(sol) => {
                let amp = sol.effective_amplitude();
                let input =
                    SeparableKernelInput::new(sol.beta, move |_| amp).expect("beta validated");
                match j_alpha_separable(alpha, &input, x, s, spec) {
                    Ok(j) => (lambda * j.ln() - sol.envelope_value(x, s).ln()).exp(),
                    Err(e) => {
                        notes.push(format!("{FAILURE_NOTE} at (x={x:?}, t={s}): {e}"));
                        failed = true;
                        return;
                    }
                }
            }
        };
        if ratio < min_ratio {
            min_ratio = ratio;
            arg_min = Some(SpaceTimePoint { x: x.to_vec(), t: s });
        }
        if ratio > max_ratio {
            max_ratio = ratio;
            arg_max = Some(SpaceTimePoint { x: x.to_vec(), t: s });
        }
    });

    if failed {
        min_ratio = 0.0;
        max_ratio = 0.0;
    }
    let report = VerificationReport {
        kind: kind.to_string(),
        params,
        paper_refs: refs,
        grid: Some(grid.clone()),
        results: RatioResults {
            min_ratio,
            max_ratio,
            arg_min,
            arg_max,
            tolerance: tol,
            stability: None,
            notes,
        },
        pass: false,
    };
    let pass = report.recompute_pass();
    VerificationReport { pass, ..report }
}

/// Default radial sample set for the two-sided constants: |x| from 0 to 8 in
/// steps of 0.25, then a geometric tail reaching 12 to watch the ratio
/// flatten.
pub fn default_approx_samples(n: u32) -> Vec<Vec<f64>> {
    let mut radii: Vec<f64> = (0..=32).map(|k| 0.25 * k as f64).collect();
    let mut r: f64 = 8.0;
    while r < 12.0 {
        r *= 1.1;
        radii.push(r.min(12.0));
    }
    radii
        .into_iter()
        .map(|r| {
            let mut x = vec![0.0; n as usize];
            x[0] = r;
            x
        })
        .collect()
}

/// Estimates the two-sided constants 0 < C₁ ≤ C₂ of the self-similar
/// certificate: the extremes of I(x)/w(x)^{1/λ} over the sample set,
/// computed at the requested quadrature density and again at double density.
/// Passes when the lower constant is positive and both extremes move by
/// less than 2% under the refinement.
///
/// By self-similarity these constants certify C₁ f ≤ (J_α f)^λ ≤ C₂ f for
/// all t > 0 up to the normalization Γ(α)(4π)^{n/2}: the certified quantity
/// is the potential-form ratio J_α f / f^{1/λ} times that normalization.
pub fn estimate_approx_constants(
    sol: &SelfSimilarSolution,
    x_samples: &[Vec<f64>],
    spec: &QuadratureSpec,
) -> VerificationReport {
    const STABILITY_TOL: f64 = 0.02;
    let params = vec![
        NamedValue::new("n", sol.n() as f64),
        NamedValue::new("lambda", sol.lambda()),
        NamedValue::new("alpha", sol.alpha()),
        NamedValue::new("delta", sol.delta()),
    ];
    let refs = vec!["T5.8".to_string(), "T5.7".to_string()];
    let mut notes = vec![
        "ratio is I(x)/w(x)^{1/lambda}; divide by Gamma(alpha)(4 pi)^{n/2} for the potential-form constants".to_string(),
    ];

    let fine_spec = QuadratureSpec {
        node_count: spec.node_count * 2,
        ..spec.clone()
    };
    let run = |s: &QuadratureSpec| -> Result<(f64, f64, usize, usize)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let (mut arg_lo, mut arg_hi) = (0usize, 0usize);
        for (idx, x) in x_samples.iter().enumerate() {
            let ratio = i_profile(sol, x, s)? / sol.solution_profile(norm_sq(x).sqrt());
            if ratio < lo {
                lo = ratio;
                arg_lo = idx;
            }
            if ratio > hi {
                hi = ratio;
                arg_hi = idx;
            }
        }
        Ok((lo, hi, arg_lo, arg_hi))
    };

    let outcome = run(spec).and_then(|base| Ok((base, run(&fine_spec)?)));
    let (min_ratio, max_ratio, arg_min, arg_max, stability) = match outcome {
        Ok(((lo0, hi0, _, _), (lo1, hi1, alo, ahi))) => {
            let stability = ((lo1 - lo0) / lo0).abs().max(((hi1 - hi0) / hi0).abs());
            (
                lo1,
                hi1,
                Some(SpaceTimePoint {
                    x: x_samples[alo].clone(),
                    t: 1.0,
                }),
                Some(SpaceTimePoint {
                    x: x_samples[ahi].clone(),
                    t: 1.0,
                }),
                Some(stability),
            )
        }
        Err(e) => {
            notes.push(format!("{FAILURE_NOTE}: {e}"));
            (0.0, 0.0, None, None, None)
        }
    };

    let report = VerificationReport {
        kind: "approx-constants".to_string(),
        params,
        paper_refs: refs,
        grid: None,
        results: RatioResults {
            min_ratio,
            max_ratio,
            arg_min,
            arg_max,
            tolerance: STABILITY_TOL,
            stability,
            notes,
        },
        pass: false,
    };
    let pass = report.recompute_pass();
    VerificationReport { pass, ..report }
}

/// The convolution identities checked by quadrature against their closed
/// forms.
#[derive(Debug, Clone)]
pub enum IdentityCheck {
    /// Spatial convolution of two kernels against its closed form.
    Lemma31 {
        alpha: f64,
        beta: f64,
        x: Vec<f64>,
        t: f64,
        tau: f64,
    },
    /// Space-time convolution Φ_β * Φ_γ against Φ_{β+γ} (n = 1).
    Semigroup { beta: f64, gamma: f64, x: f64, t: f64 },
    /// Gaussian convolution against its closed form.
    GaussianConv { a: f64, b: f64, x: Vec<f64> },
    /// Unit mass of the order-one kernel.
    Normalization { n: u32, t: f64 },
}

impl IdentityCheck {
    fn kind(&self) -> &'static str {
        match self {
            IdentityCheck::Lemma31 { .. } => "identity-lemma31",
            IdentityCheck::Semigroup { .. } => "identity-semigroup",
            IdentityCheck::GaussianConv { .. } => "identity-gaussian-conv",
            IdentityCheck::Normalization { .. } => "identity-normalization",
        }
    }

    fn paper_refs(&self) -> Vec<String> {
        match self {
            IdentityCheck::Lemma31 { .. } => vec!["L1.1".to_string()],
            IdentityCheck::Semigroup { .. } => vec!["semigroup".to_string()],
            IdentityCheck::GaussianConv { .. } => vec!["T5.10".to_string()],
            IdentityCheck::Normalization { .. } => vec![],
        }
    }
}

/// 1D cross-correlation of two centered Gaussians with scale parameters
/// 4·s and 4·sigma at offset `shift`, by adaptive quadrature.
fn gaussian_pair_integral(shift: f64, four_s: f64, four_sigma: f64, spec: &QuadratureSpec) -> Result<f64> {
    let reach = shift.abs() + 8.0 * four_s.max(four_sigma).sqrt();
    Ok(adaptive_integrate(
        |xi| (-(shift - xi) * (shift - xi) / four_s - xi * xi / four_sigma).exp(),
        -reach,
        reach,
        spec,
    )?
    .value)
}

/// Evaluates both sides of the chosen identity (quadrature on the left,
/// closed form on the right) and passes when they agree to the relative
/// tolerance.
pub fn check_identity(
    check: &IdentityCheck,
    tol: f64,
    spec: &QuadratureSpec,
) -> VerificationReport {
    let mut notes = Vec::new();
    let mut params = Vec::new();
    let sides: Result<(f64, f64)> = match check {
        IdentityCheck::Lemma31 {
            alpha,
            beta,
            x,
            t,
            tau,
        } => {
            params.extend([
                NamedValue::new("alpha", *alpha),
                NamedValue::new("beta", *beta),
                NamedValue::new("n", x.len() as f64),
                NamedValue::new("t", *t),
                NamedValue::new("tau", *tau),
            ]);
            (|| {
                if !(*tau > 0.0 && tau < t) {
                    return Err(Error::domain("need 0 < tau < t"));
                }
                let s = t - tau;
                // The integrand factors coordinate-wise, so the n-dimensional
                // spatial integral is a product of 1D quadratures times the
                // log-space prefactor of the two kernels.
                let n = x.len() as f64;
                let log_prefactor = (alpha - 1.0) * s.ln() + (beta - 1.0) * tau.ln()
                    - crate::specfun::log_gamma(*alpha)?
                    - crate::specfun::log_gamma(*beta)?
                    - 0.5 * n * ((4.0 * PI * s).ln() + (4.0 * PI * tau).ln());
                let mut lhs = log_prefactor.exp();
                for &xi in x {
                    lhs *= gaussian_pair_integral(xi, 4.0 * s, 4.0 * tau, spec)?;
                }
                let rhs = space_conv_closed_form(*alpha, *beta, x, *t, *tau)?;
                Ok((lhs, rhs))
            })()
        }
        IdentityCheck::Semigroup { beta, gamma, x, t } => {
            params.extend([
                NamedValue::new("beta", *beta),
                NamedValue::new("gamma", *gamma),
                NamedValue::new("x", *x),
                NamedValue::new("t", *t),
            ]);
            (|| {
                // The space-time convolution is a potential of a kernel
                // source, so the brute-force evaluator applies unchanged.
                let g = *gamma;
                let lhs = j_alpha_direct(
                    |pt, tau| phi_radial(g, 1, pt[0] * pt[0], tau),
                    *beta,
                    &[*x],
                    *t,
                    spec,
                )?;
                let rhs = phi_radial(beta + gamma, 1, x * x, *t);
                Ok((lhs, rhs))
            })()
        }
        IdentityCheck::GaussianConv { a, b, x } => {
            params.extend([
                NamedValue::new("a", *a),
                NamedValue::new("b", *b),
                NamedValue::new("n", x.len() as f64),
            ]);
            (|| {
                if !(*a > 0.0 && *b > 0.0) {
                    return Err(Error::domain("Gaussian scales must be positive"));
                }
                let mut lhs = 1.0;
                for &xi in x {
                    lhs *= gaussian_pair_integral(xi, *a, *b, spec)?;
                }
                let rhs = crate::kernel::gaussian_conv(*a, *b, x)?;
                Ok((lhs, rhs))
            })()
        }
        IdentityCheck::Normalization { n, t } => {
            params.extend([NamedValue::new("n", *n as f64), NamedValue::new("t", *t)]);
            (|| {
                if !(*t > 0.0) {
                    return Err(Error::domain("normalization requires t > 0"));
                }
                if !(1..=3).contains(n) {
                    return Err(Error::domain("normalization supports n in 1..=3"));
                }
                let surface = match n {
                    1 => 2.0,
                    2 => 2.0 * PI,
                    _ => 4.0 * PI,
                };
                let reach = (4.0 * t * 45.0).sqrt();
                let mass = surface
                    * adaptive_integrate(
                        |r| r.powi(*n as i32 - 1) * phi_radial(1.0, *n as usize, r * r, *t),
                        0.0,
                        reach,
                        spec,
                    )?
                    .value;
                Ok((mass, 1.0))
            })()
        }
    };

    let ratio = match sides {
        Ok((lhs, rhs)) => {
            notes.push(format!("lhs = {lhs:e}, rhs = {rhs:e}"));
            lhs / rhs
        }
        Err(e) => {
            notes.push(format!("{FAILURE_NOTE}: {e}"));
            f64::NAN
        }
    };
    let finite_ratio = if ratio.is_finite() { ratio } else { 0.0 };
    let report = VerificationReport {
        kind: check.kind().to_string(),
        params,
        paper_refs: check.paper_refs(),
        grid: None,
        results: RatioResults {
            min_ratio: finite_ratio,
            max_ratio: finite_ratio,
            arg_min: None,
            arg_max: None,
            tolerance: tol,
            stability: None,
            notes,
        },
        pass: false,
    };
    let pass = report.recompute_pass();
    VerificationReport { pass, ..report }
}

/// Detects convergence or divergence of ∬ f^p over ℝⁿ × (0, t_cut) for the
/// self-similar source by shrinking the lower time cutoff through
/// ε ∈ {1e−2, 1e−4, 1e−6} and watching the truncated integral. Growth past
/// [`XP_GROWTH_GATE`] across the sweep counts as divergent; the report
/// passes when the detection matches the analytic exponent criterion.
/// Exponents within [`XP_BOUNDARY_GATE`] of −1 are flagged unresolved.
pub fn check_xp_membership(
    sol: &SelfSimilarSolution,
    p: f64,
    t_cut: f64,
    spec: &QuadratureSpec,
) -> VerificationReport {
    let mut notes = Vec::new();
    let plane = PlaneParams::new(sol.n(), p.max(1.0), sol.lambda(), sol.alpha())
        .expect("solution parameters are valid");
    let q = xp_time_exponent(&plane);
    let params = vec![
        NamedValue::new("n", sol.n() as f64),
        NamedValue::new("p", p),
        NamedValue::new("lambda", sol.lambda()),
        NamedValue::new("alpha", sol.alpha()),
        NamedValue::new("time_exponent", q),
        NamedValue::new("t_cut", t_cut),
    ];

    let cutoffs = [1e-2, 1e-4, 1e-6];
    let sweep: Result<Vec<f64>> = (|| {
        if !(p >= 1.0) {
            return Err(Error::domain(format!("membership exponent p must be >= 1, got {p}")));
        }
        if !(t_cut > cutoffs[0]) {
            return Err(Error::domain(format!(
                "t_cut must exceed the largest cutoff {}, got {t_cut}",
                cutoffs[0]
            )));
        }
        // Spatial integral at time τ reduces exactly by x = √τ z to
        // τ^{n/2} ∫ w^p, so one quadrature of the profile mass serves all
        // time nodes.
        let mass = sol.source_profile_mass(p, spec)?;
        let rule = gauss_jacobi_rule_cached(32, JacobiWeight::new(0.0, 0.0)?)?;
        let gamma_p = sol.gamma_exponent() * p;
        let nf = sol.n() as f64;
        let integral_from = |eps: f64| -> f64 {
            // Geometric panels toward τ = 0 keep the power integrand tame.
            let mut total = 0.0;
            let mut lo = eps;
            while lo < t_cut {
                let hi = (lo * 10.0).min(t_cut);
                total += (hi - lo)
                    * rule.integrate(|u| {
                        let tau = lo + (hi - lo) * u;
                        (-gamma_p * tau.ln() + (nf / 2.0) * tau.ln()).exp()
                    });
                lo = hi;
            }
            total * mass
        };
        Ok(cutoffs.iter().map(|&eps| integral_from(eps)).collect())
    })();

    let (min_ratio, max_ratio) = match &sweep {
        Ok(values) => {
            notes.push(format!(
                "truncated integrals at cutoffs {cutoffs:?}: {values:?}"
            ));
            let growth = values[2] / values[0];
            let detected = growth > XP_GROWTH_GATE;
            let criterion_member = xp_membership_selfsimilar(&plane).unwrap_or(false);
            notes.push(format!(
                "detected {} vs analytic criterion {}",
                if detected { "divergent" } else { "convergent" },
                if criterion_member { "member (convergent)" } else { "not a member (divergent)" },
            ));
            if (q + 1.0).abs() <= XP_BOUNDARY_GATE {
                notes.push(
                    "unresolved: time exponent sits on the measure-zero boundary -1".to_string(),
                );
            }
            (values[0], growth)
        }
        Err(e) => {
            notes.push(format!("{FAILURE_NOTE}: {e}"));
            (0.0, f64::INFINITY)
        }
    };

    let failed = sweep.is_err();
    let report = VerificationReport {
        kind: "xp-membership".to_string(),
        params,
        paper_refs: vec!["T5.5".to_string()],
        grid: None,
        results: RatioResults {
            min_ratio,
            max_ratio: if failed { 0.0 } else { max_ratio },
            arg_min: None,
            arg_max: None,
            tolerance: XP_GROWTH_GATE,
            stability: None,
            notes,
        },
        pass: false,
    };
    let pass = !failed && report.recompute_pass();
    VerificationReport { pass, ..report }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::{
        make_lambda1_super, make_selfsimilar, make_supercritical_super, supercritical_ratio,
    };

    fn small_grid(n: u32) -> GridSpec {
        GridSpec::new(n, 4.0, 9, vec![0.01, 0.1, 1.0, 10.0]).unwrap()
    }

    #[test]
    fn supercritical_certificate_passes_and_is_sharp_at_origin() {
        let sol = make_supercritical_super(2, 2.0, 0.5, 1.0).unwrap();
        let spec = QuadratureSpec::default();
        let grid = small_grid(2);
        let report = verify_super(&SuperSolution::Supercritical(sol), &grid, 1e-9, &spec);
        assert!(report.pass, "{report:?}");
        assert!(report.recompute_pass());
        // The maximum sits at the grid point with x nearest the origin and
        // matches the closed-form ratio there.
        let arg = report.results.arg_max.as_ref().unwrap();
        let closed = supercritical_ratio(&sol, &arg.x, arg.t).unwrap();
        assert!((report.results.max_ratio - closed).abs() <= 1e-8 * closed);
        assert!(norm_sq(&arg.x) < 1e-12);
    }

    #[test]
    fn lambda1_certificate_passes_with_expected_maximum() {
        let sol = make_lambda1_super(1.0, 1.0).unwrap();
        let spec = QuadratureSpec::default();
        let grid = small_grid(1);
        let report = verify_super(&SuperSolution::Lambda1(sol), &grid, 1e-9, &spec);
        assert!(report.pass, "{report:?}");
        // max ratio is P(1, t_max + T) = 1 - e^{-(t_max + T)} < 1.
        let t_max: f64 = 10.0 + 1.0;
        let want = 1.0 - (-t_max).exp();
        assert!((report.results.max_ratio - want).abs() < 1e-9);
    }

    #[test]
    fn amplitude_perturbation_flips_the_supercritical_certificate() {
        let sol = make_supercritical_super(2, 2.0, 0.5, 1.0)
            .unwrap()
            .with_amplitude_scale(1.5)
            .unwrap();
        let spec = QuadratureSpec::default();
        let report = verify_super(
            &SuperSolution::Supercritical(sol),
            &small_grid(2),
            1e-9,
            &spec,
        );
        assert!(!report.pass);
        assert!(report.results.max_ratio > 1.0);
    }

    #[test]
    fn weak_rate_flips_the_lambda1_certificate() {
        let sol = make_lambda1_super(1.0, 1.0)
            .unwrap()
            .with_rate(0.5)
            .unwrap();
        let spec = QuadratureSpec::default();
        let report = verify_super(&SuperSolution::Lambda1(sol), &small_grid(1), 1e-9, &spec);
        assert!(!report.pass);
    }

    #[test]
    fn approx_constants_reference_instance() {
        let sol = make_selfsimilar(1, 3.0, 0.25).unwrap();
        let spec = QuadratureSpec::default();
        let samples = default_approx_samples(1);
        let report = estimate_approx_constants(&sol, &samples, &spec);
        assert!(report.pass, "{report:?}");
        assert!(report.results.min_ratio > 0.0);
        assert!(report.results.max_ratio >= report.results.min_ratio);
        assert!(report.results.stability.unwrap() < 0.02);
        assert!(report.recompute_pass());
    }

    #[test]
    fn approx_constants_ratio_is_even_in_x() {
        let sol = make_selfsimilar(1, 3.0, 0.25).unwrap();
        let spec = QuadratureSpec::default();
        let plus = i_profile(&sol, &[1.5], &spec).unwrap();
        let minus = i_profile(&sol, &[-1.5], &spec).unwrap();
        assert!((plus - minus).abs() <= 1e-12 * plus);
    }

    #[test]
    fn approx_constants_rescale_consistently_in_time() {
        // Re-deriving the ratio at t = 4 through the scaled potential gives
        // the same constants.
        let sol = make_selfsimilar(1, 3.0, 0.25).unwrap();
        let spec = QuadratureSpec::default();
        for r in [0.0, 1.0, 3.0] {
            let at_unit = crate::potential::j_alpha_selfsimilar(&sol, &[r], 1.0, &spec).unwrap()
                / sol.source_value(&[r], 1.0).powf(1.0 / sol.lambda());
            let scaled_x = [2.0 * r];
            let at_four = crate::potential::j_alpha_selfsimilar(&sol, &scaled_x, 4.0, &spec)
                .unwrap()
                / sol.source_value(&scaled_x, 4.0).powf(1.0 / sol.lambda());
            assert!((at_unit - at_four).abs() <= 1e-6, "r={r}");
        }
    }

    #[test]
    fn identity_checks_pass_at_reference_points() {
        let spec = QuadratureSpec::default();
        let lemma = check_identity(
            &IdentityCheck::Lemma31 {
                alpha: 0.7,
                beta: 1.3,
                x: vec![0.5],
                t: 1.0,
                tau: 0.4,
            },
            1e-8,
            &spec,
        );
        assert!(lemma.pass, "{lemma:?}");

        let semi = check_identity(
            &IdentityCheck::Semigroup {
                beta: 0.5,
                gamma: 0.5,
                x: 0.3,
                t: 1.0,
            },
            1e-6,
            &spec,
        );
        assert!(semi.pass, "{semi:?}");

        let conv = check_identity(
            &IdentityCheck::GaussianConv {
                a: 1.0,
                b: 1.0,
                x: vec![0.0],
            },
            1e-10,
            &spec,
        );
        assert!(conv.pass, "{conv:?}");
        // Symmetric case has the closed value (π/2)^{1/2} in one dimension.
        assert!(
            (conv.results.max_ratio * (PI / 2.0).sqrt() - (PI / 2.0).sqrt()).abs() < 1e-10
        );

        let norm = check_identity(&IdentityCheck::Normalization { n: 2, t: 0.5 }, 1e-8, &spec);
        assert!(norm.pass, "{norm:?}");
    }

    #[test]
    fn identity_check_reports_failure_on_bad_params() {
        let spec = QuadratureSpec::default();
        let report = check_identity(
            &IdentityCheck::Lemma31 {
                alpha: 0.7,
                beta: 1.3,
                x: vec![0.5],
                t: 1.0,
                tau: 1.5,
            },
            1e-8,
            &spec,
        );
        assert!(!report.pass);
        assert!(!report.recompute_pass());
    }

    #[test]
    fn xp_membership_detects_both_sides_of_the_threshold() {
        let spec = QuadratureSpec::default();
        let sol = make_selfsimilar(1, 3.0, 0.25).unwrap();
        // p = 1: exponent 0.125, convergent and a member.
        let report = check_xp_membership(&sol, 1.0, 1.0, &spec);
        assert!(report.pass, "{report:?}");
        assert!(report.results.max_ratio <= XP_GROWTH_GATE);
        // p = 5: exponent -1.375, divergent and not a member.
        let report = check_xp_membership(&sol, 5.0, 1.0, &spec);
        assert!(report.pass, "{report:?}");
        assert!(report.results.max_ratio > XP_GROWTH_GATE);
    }

    #[test]
    fn xp_membership_flags_the_boundary() {
        let spec = QuadratureSpec::default();
        let sol = make_selfsimilar(1, 3.0, 0.25).unwrap();
        // p = 4 puts the exponent exactly at -1.
        let report = check_xp_membership(&sol, 4.0, 1.0, &spec);
        assert!(report.pass);
        assert!(report
            .results
            .notes
            .iter()
            .any(|n| n.contains("unresolved")));
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(0, 1.0, 5, vec![1.0]).is_err());
        assert!(GridSpec::new(1, 1.0, 2, vec![1.0]).is_err());
        assert!(GridSpec::new(1, 1.0, 5, vec![]).is_err());
        assert!(GridSpec::new(1, 1.0, 5, vec![0.0]).is_err());
        assert!(GridSpec::new(4, 1.0, 5, vec![1.0]).is_err());
        let grid = GridSpec::default_super(1);
        assert!(grid.validate().is_ok());
        assert_eq!(grid.t_values.len(), 7);
    }
}
