//! Scalar special functions: gamma, complete and incomplete beta, the
//! normalized modified Bessel function ℘ρ and the q-digamma function Ψ_q.
//!
//! Everything here is pure and allocation free. The infinite series are
//! truncated under a [`SeriesControl`]; hitting the term cap is an error,
//! never a silently returned partial sum.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Truncation policy for the infinite series in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        let ctrl = SeriesControl { rel_tol, max_terms };
        ctrl.validate()?;
        Ok(ctrl)
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::domain(
                "series control",
                format!("rel_tol must be positive, got {}", self.rel_tol),
            ));
        }
        if self.max_terms == 0 {
            return Err(Error::domain("series control", "max_terms must be at least 1"));
        }
        Ok(())
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-15,
            max_terms: 1_000_000,
        }
    }
}

/// Adds terms until one falls below `rel_tol` times the running sum.
fn sum_series(ctrl: &SeriesControl, mut term: impl FnMut(usize) -> f64) -> Result<f64> {
    ctrl.validate()?;
    let mut sum = 0.0;
    for n in 0..ctrl.max_terms {
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::NonFinite { x: n as f64, value: t });
        }
        sum += t;
        if t.abs() <= ctrl.rel_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        terms: ctrl.max_terms,
        partial: sum,
    })
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
/// Γ overflows f64 just above this argument.
const GAMMA_MAX_ARG: f64 = 171.624;

fn lanczos_series(z: f64) -> f64 {
    LANCZOS_COEFFS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEFFS[0], |acc, (i, c)| acc + c / (z + (i + 1) as f64))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so t^(z+1/2) e^(-t) does not overflow early
    let half = t.powf(0.5 * (z + 0.5));
    SQRT_2PI * half * (half * (-t).exp()) * lanczos_series(z)
}

/// Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::domain("gamma", format!("requires x > 0, got {x}")));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::domain("gamma", format!("Γ({x}) overflows f64")));
    }
    Ok(gamma_unchecked(x))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("requires finite x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + (SQRT_2PI * lanczos_series(z)).ln()
}

/// Complete beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(
            "beta",
            format!("requires a > 0 and b > 0, got ({a}, {b})"),
        ));
    }
    if a + b < 170.0 {
        Ok(gamma_unchecked(a) * gamma_unchecked(b) / gamma_unchecked(a + b))
    } else {
        Ok((ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b)).exp())
    }
}

/// Lower incomplete beta β_w(a, b) = ∫₀^w t^(a−1) (1−t)^(b−1) dt for integer a.
///
/// Uses the finite binomial expansion of t^(a−1) around 1 − t, which is exact
/// up to rounding at both ends of [0, 1] (no quadrature near the singular end).
pub fn incomplete_beta(w: f64, a: u32, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::domain("incomplete_beta", format!("requires 0 ≤ w ≤ 1, got {w}")));
    }
    if a == 0 {
        return Err(Error::domain("incomplete_beta", "requires integer a ≥ 1"));
    }
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::domain("incomplete_beta", format!("requires 0 < b ≤ 1, got {b}")));
    }
    // ln(1 − w); the w = 1 case is handled by expm1(-inf) = -1
    let log_rest = (-w).ln_1p();
    let mut binom = 1.0_f64;
    let mut sum = 0.0;
    for k in 0..a {
        let e = b + f64::from(k);
        // 1 − (1 − w)^e, accurate for small w
        let piece = -(e * log_rest).exp_m1() / e;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * piece;
        binom = binom * f64::from(a - 1 - k) / f64::from(k + 1);
    }
    Ok(sum.max(0.0))
}

fn bessel_series(rho: f64, x: f64, ctrl: &SeriesControl) -> Result<f64> {
    let quarter_sq = 0.25 * x * x;
    let mut term = 1.0;
    sum_series(ctrl, |n| {
        if n > 0 {
            let n = n as f64;
            term *= quarter_sq / (n * (rho + n));
        }
        term
    })
}

/// Normalized modified Bessel function ℘ρ(x) = 2^ρ Γ(ρ+1) x^(−ρ) I_ρ(x), or its
/// derivative when `derivative` is set.
///
/// The derivative is computed as x ℘_{ρ+1}(x) / (2(ρ+1)), which is the
/// term-wise derivative of the defining series.
pub fn bessel_p(rho: f64, x: f64, derivative: bool, ctrl: &SeriesControl) -> Result<f64> {
    if !(rho > -1.0) || !rho.is_finite() {
        return Err(Error::domain("bessel_p", format!("requires ρ > −1, got {rho}")));
    }
    if !x.is_finite() {
        return Err(Error::domain("bessel_p", format!("requires finite x, got {x}")));
    }
    if derivative {
        Ok(x / (2.0 * (rho + 1.0)) * bessel_series(rho + 1.0, x, ctrl)?)
    } else {
        bessel_series(rho, x, ctrl)
    }
}

/// Second derivative of ℘ρ, obtained by differentiating x ℘_{ρ+1}(x) once more.
pub fn bessel_p_second(rho: f64, x: f64, ctrl: &SeriesControl) -> Result<f64> {
    let first = bessel_p(rho + 1.0, x, false, ctrl)?;
    let next = bessel_p(rho + 1.0, x, true, ctrl)?;
    Ok((first + x * next) / (2.0 * (rho + 1.0)))
}

/// q-digamma Ψ_q(η) for q > 0, q ≠ 1, η > 0, or its first derivative.
pub fn q_digamma(q: f64, eta: f64, derivative: bool, ctrl: &SeriesControl) -> Result<f64> {
    q_digamma_derivative(q, eta, if derivative { 1 } else { 0 }, ctrl)
}

/// Ψ_q and its term-wise derivatives up to order 2.
///
/// For 0 < q < 1 with x_u = q^(u+η):
///   Ψ_q = −ln(1−q) + ln q Σ x_u/(1−x_u)
/// For q > 1 with x_u = q^(−(u+η)):
///   Ψ_q = −ln(q−1) + ln q (η − 1/2 − Σ x_u/(1−x_u))
pub fn q_digamma_derivative(q: f64, eta: f64, order: u32, ctrl: &SeriesControl) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() || q == 1.0 {
        return Err(Error::domain("q_digamma", format!("requires q > 0 and q ≠ 1, got {q}")));
    }
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::domain("q_digamma", format!("requires η > 0, got {eta}")));
    }
    if order > 2 {
        return Err(Error::domain("q_digamma", "derivative order must be 0, 1 or 2"));
    }
    let ln_q = q.ln();
    // exponent scale so that x_u = exp(-c (u + η)) with c > 0 on both branches
    let c = ln_q.abs();
    let term = |u: usize| {
        let arg = -c * (u as f64 + eta);
        let x = arg.exp();
        let one_minus = -arg.exp_m1();
        match order {
            0 => x / one_minus,
            1 => x / (one_minus * one_minus),
            _ => x * (1.0 + x) / (one_minus * one_minus * one_minus),
        }
    };
    let sum = sum_series(ctrl, term)?;
    let value = if q < 1.0 {
        match order {
            0 => -(-q).ln_1p() + ln_q * sum,
            1 => ln_q * ln_q * sum,
            _ => ln_q * ln_q * ln_q * sum,
        }
    } else {
        match order {
            0 => -(q - 1.0).ln() + ln_q * (eta - 0.5 - sum),
            1 => ln_q * (1.0 + ln_q * sum),
            _ => -ln_q * ln_q * ln_q * sum,
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_at_integers() {
        assert_relative_eq!(gamma_fn(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(5.0).unwrap(), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(10.0).unwrap(), 362_880.0, max_relative = 1e-13);
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(matches!(gamma_fn(0.0), Err(Error::Domain { .. })));
        assert!(matches!(gamma_fn(-1.5), Err(Error::Domain { .. })));
        assert!(gamma_fn(f64::NAN).is_err());
        assert!(gamma_fn(200.0).is_err());
    }

    #[test]
    fn gamma_recurrence() {
        for &x in &[0.3, 1.7, 4.2, 0.01, 30.5] {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.2, 0.5, 1.3, 7.7, 55.0] {
            assert_relative_eq!(
                ln_gamma(x).unwrap(),
                gamma_fn(x).unwrap().ln(),
                max_relative = 1e-12,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn beta_examples() {
        assert_relative_eq!(beta_fn(1.0, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(beta_fn(2.0, 1.0).unwrap(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(beta_fn(1.0, 0.5).unwrap(), 2.0, max_relative = 1e-14);
        assert!(beta_fn(0.0, 1.0).is_err());
        assert!(beta_fn(1.0, -2.0).is_err());
        // large arguments go through ln Γ
        let big = beta_fn(100.0, 90.0).unwrap();
        let expected = (ln_gamma(100.0).unwrap() + ln_gamma(90.0).unwrap() - ln_gamma(190.0).unwrap()).exp();
        assert_relative_eq!(big, expected, max_relative = 1e-12);
    }

    #[test]
    fn incomplete_beta_examples() {
        assert_relative_eq!(incomplete_beta(0.4, 1, 1.0).unwrap(), 0.4, max_relative = 1e-15);
        for a in 1..=3 {
            for &b in &[0.25, 0.5, 1.0] {
                assert_relative_eq!(
                    incomplete_beta(1.0, a, b).unwrap(),
                    beta_fn(f64::from(a), b).unwrap(),
                    max_relative = 1e-13
                );
            }
        }
        assert_eq!(incomplete_beta(0.0, 3, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn incomplete_beta_domain() {
        assert!(incomplete_beta(-0.1, 1, 1.0).is_err());
        assert!(incomplete_beta(1.1, 1, 1.0).is_err());
        assert!(incomplete_beta(0.5, 0, 1.0).is_err());
        assert!(incomplete_beta(0.5, 1, 1.5).is_err());
        assert!(incomplete_beta(0.5, 1, 0.0).is_err());
    }

    #[test]
    fn incomplete_beta_small_w_is_accurate() {
        // β_w(1, b) = (1 − (1−w)^b)/b ≈ w for tiny w
        let w = 1e-12;
        assert_relative_eq!(incomplete_beta(w, 1, 0.5).unwrap(), w, max_relative = 1e-9);
    }

    #[test]
    fn bessel_p_closed_forms() {
        let ctrl = SeriesControl::default();
        assert_eq!(bessel_p(0.7, 0.0, false, &ctrl).unwrap(), 1.0);
        for &x in &[0.5, 1.0, 1.3, 2.0] {
            assert_relative_eq!(
                bessel_p(-0.5, x, false, &ctrl).unwrap(),
                f64::cosh(x),
                max_relative = 1e-12
            );
            assert_relative_eq!(
                bessel_p(0.5, x, false, &ctrl).unwrap(),
                f64::sinh(x) / x,
                max_relative = 1e-12
            );
            // ℘'_{-1/2} = sinh
            assert_relative_eq!(
                bessel_p(-0.5, x, true, &ctrl).unwrap(),
                f64::sinh(x),
                max_relative = 1e-12
            );
        }
        assert!(bessel_p(-1.0, 1.0, false, &ctrl).is_err());
    }

    #[test]
    fn bessel_p_second_matches_cosh() {
        let ctrl = SeriesControl::default();
        for &x in &[0.3, 1.0, 2.5] {
            assert_relative_eq!(
                bessel_p_second(-0.5, x, &ctrl).unwrap(),
                f64::cosh(x),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn series_cap_is_an_error() {
        let ctrl = SeriesControl::new(1e-15, 3).unwrap();
        assert!(matches!(
            bessel_p(0.5, 10.0, false, &ctrl),
            Err(Error::NonConvergence { terms: 3, .. })
        ));
        assert!(SeriesControl::new(0.0, 10).is_err());
        assert!(SeriesControl::new(1e-12, 0).is_err());
    }

    #[test]
    fn q_digamma_recurrence_small_base() {
        let ctrl = SeriesControl::default();
        let (q, eta) = (0.5_f64, 0.7_f64);
        let diff = q_digamma(q, eta + 1.0, false, &ctrl).unwrap() - q_digamma(q, eta, false, &ctrl).unwrap();
        let expected = -q.ln() * q.powf(eta) / (1.0 - q.powf(eta));
        assert!((diff - expected).abs() < 1e-12);
    }

    #[test]
    fn q_digamma_derivative_is_positive() {
        let ctrl = SeriesControl::default();
        assert!(q_digamma(0.5, 2.0, true, &ctrl).unwrap() > 0.0);
        assert!(q_digamma(3.0, 2.0, true, &ctrl).unwrap() > 0.0);
        assert!(q_digamma_derivative(0.5, 2.0, 2, &ctrl).unwrap() < 0.0);
        assert!(q_digamma_derivative(3.0, 2.0, 2, &ctrl).unwrap() < 0.0);
    }

    #[test]
    fn q_digamma_domain() {
        let ctrl = SeriesControl::default();
        assert!(q_digamma(1.0, 1.0, false, &ctrl).is_err());
        assert!(q_digamma(0.0, 1.0, false, &ctrl).is_err());
        assert!(q_digamma(0.5, 0.0, false, &ctrl).is_err());
        assert!(q_digamma_derivative(0.5, 1.0, 3, &ctrl).is_err());
    }
}
