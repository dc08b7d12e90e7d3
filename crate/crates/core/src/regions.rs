//! Classification of (n, p, λ, α) into the phase-plane regions A–E and the
//! existence verdicts for the four problem variants.
//!
//! For λ > 1 two curves partition the quadrant: the lower one
//! α = (n+2)/(2p)·(1 − 1/λ) and the upper one α = (n+2)/2·(1 − 1/λ).
//! Region C sits on and above the upper curve, D between them including its
//! lower boundary, E strictly below the lower one. A is the strip 0 < λ < 1,
//! B the line λ = 1. When p = 1 the two curves coincide and D is empty.
//!
//! All thresholds are computed through [`curve_alpha`] in one fixed
//! expression order so that boundary membership is reproducible with exact
//! comparisons.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The parameter tuple every theorem is stated in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneParams {
    /// Space dimension, n ≥ 1.
    pub n: u32,
    /// Integrability exponent, p ≥ 1.
    pub p: f64,
    /// Nonlinearity power, λ > 0.
    pub lambda: f64,
    /// Fractional order, α > 0.
    pub alpha: f64,
}

impl PlaneParams {
    pub fn new(n: u32, p: f64, lambda: f64, alpha: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("dimension n must be at least 1"));
        }
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("exponent p must be >= 1, got {p}")));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        Ok(PlaneParams { n, p, lambda, alpha })
    }

    /// Conjugate exponent λ′ = λ/(λ − 1); only defined for λ > 1.
    pub fn lambda_conjugate(&self) -> Result<f64> {
        if !(self.lambda > 1.0) {
            return Err(Error::domain(format!(
                "lambda' requires lambda > 1, got {}",
                self.lambda
            )));
        }
        Ok(self.lambda / (self.lambda - 1.0))
    }
}

/// One of the five pairwise disjoint phase-plane regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    A,
    B,
    C,
    D,
    E,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Region::A => "A",
            Region::B => "B",
            Region::C => "C",
            Region::D => "D",
            Region::E => "E",
        };
        f.write_str(s)
    }
}

/// Existence outcome for a problem variant at given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Exists,
    NotExists,
    Unresolved,
}

/// An existence verdict together with the theorem that decided it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub note: String,
}

/// The four problem variants the verdicts cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    /// f ≥ (J_α f)^λ with f = 0 in negative time.
    Super,
    /// C₁ f ≤ (J_α f)^λ ≤ C₂ f.
    Approximate,
    /// 0 ≤ f ≤ (J_α f)^λ.
    Sub,
    /// f = (J_α f)^λ.
    Exact,
}

/// The curve α = (n+2)/(2p)·(1 − 1/λ).
///
/// This is the single canonical threshold expression; the upper region
/// boundary is `curve_alpha(n, 1.0, lambda)`, which makes the two thresholds
/// bitwise equal when p = 1.
pub fn curve_alpha(n: u32, p: f64, lambda: f64) -> f64 {
    ((n as f64 + 2.0) / (2.0 * p)) * (1.0 - 1.0 / lambda)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// The admissibility condition on (p, α):
/// (p > 1 and 0 < α < (n+2)/(2p)) or (p = 1 and 0 < α ≤ (n+2)/2).
pub fn admissible(params: &PlaneParams) -> bool {
    let bound = (params.n as f64 + 2.0) / (2.0 * params.p);
    if params.p > 1.0 {
        params.alpha > 0.0 && params.alpha < bound
    } else {
        params.alpha > 0.0 && params.alpha <= bound
    }
}

/// The unique region containing (λ, α) for the given (n, p).
pub fn classify(params: &PlaneParams) -> Region {
    if params.lambda < 1.0 {
        return Region::A;
    }
    if params.lambda == 1.0 {
        return Region::B;
    }
    let upper = curve_alpha(params.n, 1.0, params.lambda);
    let lower = curve_alpha(params.n, params.p, params.lambda);
    if params.alpha >= upper {
        Region::C
    } else if params.alpha >= lower {
        Region::D
    } else {
        Region::E
    }
}

/// Direct membership test from each region's defining inequalities,
/// independent of the [`classify`] branch order.
pub fn region_membership(region: Region, params: &PlaneParams) -> bool {
    let (lambda, alpha) = (params.lambda, params.alpha);
    match region {
        Region::A => lambda > 0.0 && lambda < 1.0 && alpha > 0.0,
        Region::B => lambda == 1.0 && alpha > 0.0,
        Region::C => lambda > 1.0 && alpha >= curve_alpha(params.n, 1.0, lambda),
        Region::D => {
            lambda > 1.0
                && alpha >= curve_alpha(params.n, params.p, lambda)
                && alpha < curve_alpha(params.n, 1.0, lambda)
        }
        Region::E => {
            lambda > 1.0 && alpha > 0.0 && alpha < curve_alpha(params.n, params.p, lambda)
        }
    }
}

/// Whether (λ, α) lies on the curve α = (n+2)/(2p)(1 − 1/λ), λ > 1,
/// within relative tolerance 1e−12.
pub fn on_curve(params: &PlaneParams) -> bool {
    params.lambda > 1.0
        && rel_close(params.alpha, curve_alpha(params.n, params.p, params.lambda), 1e-12)
}

/// Critical exponent λ₀(n, α) = 1 + 2α/(n + 2 − 2α) for 0 < α < (n+2)/2.
///
/// At α = 1 this is the classical value 1 + 2/n.
pub fn fujita_lambda0(n: u32, alpha: f64) -> Result<f64> {
    let bound = (n as f64 + 2.0) / 2.0;
    if !(alpha > 0.0 && alpha < bound) {
        return Err(Error::domain(format!(
            "lambda_0(n, alpha) requires 0 < alpha < (n+2)/2 = {bound}, got {alpha}"
        )));
    }
    Ok(1.0 + 2.0 * alpha / (n as f64 + 2.0 - 2.0 * alpha))
}

/// Scaling exponent ((n+2)/λ′ − 2α)·λ′ controlling the nonexistence test
/// volume growth; nonpositive exactly when (λ, α) ∈ C.
pub fn nonexistence_exponent(params: &PlaneParams) -> Result<f64> {
    let conj = params.lambda_conjugate()?;
    // (n+2)/λ' written via the canonical curve expression so that the sign
    // change happens exactly on the C boundary used by `classify`.
    let n_plus_2_over_conj = 2.0 * curve_alpha(params.n, 1.0, params.lambda);
    Ok((n_plus_2_over_conj - 2.0 * params.alpha) * conj)
}

/// Membership of the self-similar source in X^p: n/2 − αλp/(λ−1) > −1,
/// which is the strict inequality α < (n+2)/(2p)(1 − 1/λ) in disguise.
pub fn xp_membership_selfsimilar(params: &PlaneParams) -> Result<bool> {
    if !(params.lambda > 1.0) {
        return Err(Error::domain(format!(
            "X^p criterion requires lambda > 1, got {}",
            params.lambda
        )));
    }
    Ok(xp_time_exponent(params) > -1.0)
}

/// The time exponent n/2 − αλp/(λ−1) of ∬ f^p for the self-similar source.
pub fn xp_time_exponent(params: &PlaneParams) -> f64 {
    params.n as f64 / 2.0
        - params.alpha * params.lambda * params.p / (params.lambda - 1.0)
}

/// Existence verdict for one problem variant.
pub fn verdict(problem: ProblemKind, params: &PlaneParams) -> Verdict {
    let region = classify(params);
    match problem {
        ProblemKind::Super => {
            let exists = matches!(region, Region::B | Region::D | Region::E);
            Verdict {
                outcome: if exists { Outcome::Exists } else { Outcome::NotExists },
                note: format!(
                    "Theorem 2.1: nontrivial nonnegative solutions exist iff (lambda, alpha) in B \u{222a} D \u{222a} E; here region {region}"
                ),
            }
        }
        ProblemKind::Approximate => {
            if params.p > 1.0 && on_curve(params) {
                Verdict {
                    outcome: Outcome::Unresolved,
                    note: "Theorem 2.2 makes no claim for p > 1 on the curve alpha = (n+2)/(2p)(1 - 1/lambda)".to_string(),
                }
            } else {
                let exists = region == Region::E;
                Verdict {
                    outcome: if exists { Outcome::Exists } else { Outcome::NotExists },
                    note: format!(
                        "Theorem 2.2: solvable for some 0 < C1 <= C2 iff (lambda, alpha) in E; here region {region}"
                    ),
                }
            }
        }
        ProblemKind::Sub => {
            if on_curve(params) {
                Verdict {
                    outcome: Outcome::Unresolved,
                    note: "Theorem 2.3 makes no claim on the curve alpha = (n+2)/(2p)(1 - 1/lambda)".to_string(),
                }
            } else {
                let exists = matches!(region, Region::A | Region::E);
                Verdict {
                    outcome: if exists { Outcome::Exists } else { Outcome::NotExists },
                    note: format!(
                        "Theorem 2.3: nontrivial nonnegative solutions exist iff (lambda, alpha) in A \u{222a} E; here region {region}"
                    ),
                }
            }
        }
        ProblemKind::Exact => {
            let necessary = (params.p > 1.0 && on_curve(params)) || region == Region::E;
            Verdict {
                outcome: Outcome::Unresolved,
                note: format!(
                    "no existence results for the exact problem; necessary condition: p > 1 with (lambda, alpha) on the curve, or (lambda, alpha) in E ({} here)",
                    if necessary { "satisfied" } else { "violated" }
                ),
            }
        }
    }
}
