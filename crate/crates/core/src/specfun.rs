//! Special functions on the positive real axis.
//!
//! Everything downstream (kernel normalizers, Beta-integral reductions,
//! envelope constants) is built from Γ, ln Γ, B(a, b) and the regularized
//! lower incomplete gamma P(a, x). Arguments are restricted to the positive
//! reals; there is no reflection branch.

use crate::error::{Error, Result};

/// Lanczos parameter g for the 13-term rational approximation.
///
/// Coefficients below are the widely used set (Boost / CPython) with
/// relative error on the order of a few ulps for positive arguments.
const LANCZOS_G: f64 = 6.024680040776729583740234375;
const LANCZOS_G_MINUS_HALF: f64 = 5.524680040776729583740234375;

/// Numerator coefficients, ascending powers; the leading coefficient is
/// √(2π), so the rational function tends to √(2π) for large x.
const LANCZOS_NUM: [f64; 13] = [
    23531376880.410759688572007674451636754734846804940,
    42919803642.649098768957899047001988850926355848959,
    35711959237.355668049440185451547166705960488635843,
    17921034426.037209699919755754458931112671403265390,
    6039542586.3520280050642916443072979210699388420708,
    1439720407.3117216736632230727949123939715485786772,
    248874557.86205415651146038641322942321632125127801,
    31426415.585400194380614231628318205362874684987640,
    2876370.6289353724412254090516208496135991145378768,
    186056.26539522349504029498971604569928220784236328,
    8071.6720023658162106380029022722506138218516325024,
    210.82427775157934587250973392071336271166969580291,
    2.5066282746310002701649081771338373386264310793408,
];

/// Denominator coefficients of x·(x+1)·…·(x+12), ascending powers.
const LANCZOS_DEN: [f64; 13] = [
    0.0,
    39916800.0,
    120543840.0,
    150917976.0,
    105258076.0,
    45995730.0,
    13339535.0,
    2637558.0,
    357423.0,
    32670.0,
    1925.0,
    66.0,
    1.0,
];

/// Iteration cap for the incomplete-gamma series and continued fraction.
const MAX_ITER: usize = 400;

/// Rational Lanczos sum; rescaled in 1/x for x ≥ 5 to avoid overflow.
fn lanczos_sum(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut num = 0.0;
    let mut den = 0.0;
    if x < 5.0 {
        for i in (0..13).rev() {
            num = num * x + LANCZOS_NUM[i];
            den = den * x + LANCZOS_DEN[i];
        }
    } else {
        for i in 0..13 {
            num = num / x + LANCZOS_NUM[i];
            den = den / x + LANCZOS_DEN[i];
        }
    }
    num / den
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "{name} must be positive and finite, got {x}"
        )));
    }
    Ok(())
}

/// Gamma function Γ(x) for x > 0.
///
/// Relative error is a few ulps on (0, 50]; overflows to +∞ past x ≈ 171.6.
pub fn gamma(x: f64) -> Result<f64> {
    check_positive("gamma argument", x)?;
    if x < 1e-20 {
        // Γ(x) = 1/x + O(1) dominates every other term at this scale.
        return Ok(1.0 / x);
    }
    let y = x + LANCZOS_G_MINUS_HALF;
    // Recover the rounding error committed when forming y, then fold the
    // first-order correction into the result.
    let z = if x > LANCZOS_G_MINUS_HALF {
        (y - x) - LANCZOS_G_MINUS_HALF
    } else {
        (y - LANCZOS_G_MINUS_HALF) - x
    };
    let z = z * LANCZOS_G / y;
    let mut r = lanczos_sum(x) * (-y).exp();
    r += z * r;
    if x < 140.0 {
        r *= y.powf(x - 0.5);
    } else {
        let half_pow = y.powf(x / 2.0 - 0.25);
        r *= half_pow;
        r *= half_pow;
    }
    Ok(r)
}

/// Natural logarithm of Γ(x) for x > 0.
///
/// exp(log_gamma(x)) agrees with [`gamma`] to better than 1e−12 relative
/// wherever both are representable.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive("log_gamma argument", x)?;
    if x < 1e-20 {
        return Ok(-x.ln());
    }
    // ln Γ = ln L(x) − g + (x − 1/2)(ln(x + g − 1/2) − 1), exactly the log of
    // the gamma expression above.
    let r = lanczos_sum(x).ln() - LANCZOS_G + (x - 0.5) * ((x + LANCZOS_G_MINUS_HALF).ln() - 1.0);
    Ok(r)
}

/// Beta function B(a, b) = Γ(a)Γ(b)/Γ(a + b) for a, b > 0.
///
/// Computed in log space so large arguments do not overflow intermediates.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    check_positive("beta argument a", a)?;
    check_positive("beta argument b", b)?;
    Ok((log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?).exp())
}

/// Regularized lower incomplete gamma P(a, x) = γ(a, x)/Γ(a) for a > 0, x ≥ 0.
///
/// Nondecreasing in x, with P(a, 0) = 0 and P(a, x) → 1 as x → ∞.
/// Uses the power series for x < a + 1 and a Lentz continued fraction for
/// the complement otherwise.
pub fn reg_lower_inc_gamma(a: f64, x: f64) -> Result<f64> {
    check_positive("incomplete gamma shape a", a)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "incomplete gamma argument x must be nonnegative and finite, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let log_prefactor = -x + a * x.ln() - log_gamma(a)?;
    let prefactor = log_prefactor.exp();
    if x < a + 1.0 {
        lower_series(a, x, prefactor)
    } else {
        Ok(1.0 - upper_continued_fraction(a, x, prefactor)?)
    }
}

/// P(a, x) = prefactor · Σ_{k≥0} x^k / (a (a+1) ⋯ (a+k)).
fn lower_series(a: f64, x: f64, prefactor: f64) -> Result<f64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok(prefactor * sum);
        }
    }
    Err(Error::NonConvergence {
        best: prefactor * sum,
        error_estimate: (term / sum).abs(),
        context: format!("incomplete gamma series at a={a}, x={x}"),
    })
}

/// Q(a, x) by the modified Lentz continued fraction (Thompson–Barnett).
fn upper_continued_fraction(a: f64, x: f64, prefactor: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let b0 = x + 1.0 - a;
    let mut f = if b0.abs() < TINY { TINY } else { b0 };
    let mut c = f;
    let mut d = 0.0_f64;
    for k in 1..=MAX_ITER {
        let kf = k as f64;
        let an = kf * (a - kf);
        let bn = x + 2.0 * kf + 1.0 - a;
        d = bn + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = bn + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(prefactor / f);
        }
    }
    Err(Error::NonConvergence {
        best: prefactor / f,
        error_estimate: f64::EPSILON,
        context: format!("incomplete gamma continued fraction at a={a}, x={x}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn gamma_classical_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert!(rel_err(gamma(0.5).unwrap(), std::f64::consts::PI.sqrt()) < 1e-14);
        assert!(rel_err(gamma(4.0).unwrap(), 6.0) < 1e-14);
    }

    #[test]
    fn gamma_reference_values() {
        // 50-digit mpmath references.
        let cases = [
            (0.01, 99.432585119150603714),
            (0.7, 1.2980553326475577857),
            (3.3, 2.6834373819557687936),
            (12.5, 136843365.46556585726),
            (29.71, 3.31822200488024338e30),
            (47.5, 3.76238821188725875e58),
            (50.0, 6.0828186403426756087e62),
        ];
        for (x, want) in cases {
            assert!(
                rel_err(gamma(x).unwrap(), want) < 1e-13,
                "gamma({x}) off: {} vs {}",
                gamma(x).unwrap(),
                want
            );
        }
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-2.5).is_err());
        assert!(gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        assert!(rel_err(log_gamma(10.0).unwrap(), 362880.0_f64.ln()) < 1e-14);
        assert!(rel_err(log_gamma(47.5).unwrap(), 134.87498931216194957) < 1e-14);
        assert!(rel_err(log_gamma(0.01).unwrap(), 4.5994798780420217225) < 1e-14);
    }

    #[test]
    fn exp_log_gamma_matches_gamma() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed_0001);
        for _ in 0..200 {
            let x: f64 = rng.gen_range(0.05..50.0);
            let direct = gamma(x).unwrap();
            let via_log = log_gamma(x).unwrap().exp();
            assert!(
                rel_err(via_log, direct) < 1e-12,
                "mismatch at x={x}: {via_log} vs {direct}"
            );
        }
    }

    #[test]
    fn gamma_recurrence() {
        // Γ(x+1) = x Γ(x) on 100 random points in (0.1, 30).
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed_0002);
        for _ in 0..100 {
            let x: f64 = rng.gen_range(0.1..30.0);
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel_err(lhs, rhs) < 1e-12, "recurrence failed at x={x}");
        }
    }

    #[test]
    fn beta_values_and_symmetry() {
        assert!(rel_err(beta_fn(1.0, 1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel_err(beta_fn(2.0, 3.0).unwrap(), 1.0 / 12.0) < 1e-13);
        assert!(rel_err(beta_fn(0.5, 0.5).unwrap(), std::f64::consts::PI) < 1e-13);
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed_0003);
        for _ in 0..50 {
            let a: f64 = rng.gen_range(0.2..5.0);
            let b: f64 = rng.gen_range(0.2..5.0);
            assert_eq!(beta_fn(a, b).unwrap(), beta_fn(b, a).unwrap());
        }
        assert!(beta_fn(0.0, 1.0).is_err());
        assert!(beta_fn(1.0, -1.0).is_err());
    }

    #[test]
    fn incomplete_gamma_closed_forms() {
        // P(1, x) = 1 - e^{-x}
        for x in [0.1_f64, 0.9, 2.3, 7.0, 30.0] {
            let want = 1.0 - (-x).exp();
            assert!(rel_err(reg_lower_inc_gamma(1.0, x).unwrap(), want) < 1e-13);
        }
        for a in [0.2, 1.0, 3.7, 20.0] {
            assert_eq!(reg_lower_inc_gamma(a, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn incomplete_gamma_reference_values() {
        // 50-digit mpmath references.
        let cases = [
            (0.7, 2.3, 0.94525429927836485103),
            (2.5, 0.5, 0.037434226752703631043),
            (5.0, 12.0, 0.99239960931893300453),
            (0.3, 0.05, 0.44843686210659274139),
        ];
        for (a, x, want) in cases {
            assert!(
                rel_err(reg_lower_inc_gamma(a, x).unwrap(), want) < 1e-13,
                "P({a},{x})"
            );
        }
    }

    #[test]
    fn incomplete_gamma_monotone_and_bounded() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed_0004);
        for _ in 0..20 {
            let a: f64 = rng.gen_range(0.2..8.0);
            let mut prev = 0.0;
            for k in 0..200 {
                let x = 0.05 * k as f64;
                let p = reg_lower_inc_gamma(a, x).unwrap();
                assert!((0.0..=1.0 + 1e-15).contains(&p));
                assert!(p >= prev, "P({a}, ·) not monotone at x={x}");
                prev = p;
            }
            // Far tail is indistinguishable from 1.
            assert!((reg_lower_inc_gamma(a, 100.0 * a + 100.0).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn incomplete_gamma_rejects_bad_input() {
        assert!(reg_lower_inc_gamma(0.0, 1.0).is_err());
        assert!(reg_lower_inc_gamma(-1.0, 1.0).is_err());
        assert!(reg_lower_inc_gamma(1.0, -0.5).is_err());
    }
}
