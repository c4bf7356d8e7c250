//! Riemann–Liouville and conformable fractional integrals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_singular, QuadConfig, QuadResult, SingularEnd};
use crate::specfun::gamma_fn;

/// Fractional order τ together with the derived m = ⌈τ⌉ − 1 and β = τ − m.
///
/// The integer part is always derived, so τ ∈ (m, m+1] and β ∈ (0, 1] hold
/// by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FracOrder {
    tau: f64,
    m: u32,
    beta: f64,
}

impl FracOrder {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain("order", format!("requires finite τ > 0, got {tau}")));
        }
        if tau > 100.0 {
            return Err(Error::domain("order", format!("τ = {tau} is out of range")));
        }
        let m = tau.ceil() - 1.0;
        let beta = tau - m;
        Ok(FracOrder { tau, m: m as u32, beta })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// m! as a float.
    pub fn m_factorial(&self) -> f64 {
        (1..=self.m).map(f64::from).product()
    }

    /// Γ(τ+1)/Γ(τ−m), the ratio appearing in every Simpson-type prefactor.
    pub fn gamma_ratio(&self) -> Result<f64> {
        Ok(gamma_fn(self.tau + 1.0)? / gamma_fn(self.beta)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

fn check_span(side: Side, anchor: f64, eval_at: f64) -> Result<()> {
    let ok = match side {
        Side::Left => anchor < eval_at,
        Side::Right => eval_at < anchor,
    };
    if !ok || !anchor.is_finite() || !eval_at.is_finite() {
        let rule = match side {
            Side::Left => "left integral requires anchor < eval_at",
            Side::Right => "right integral requires eval_at < anchor",
        };
        return Err(Error::domain(
            "fractional integral",
            format!("{rule}, got anchor {anchor}, eval_at {eval_at}"),
        ));
    }
    Ok(())
}

fn scaled(r: QuadResult, factor: f64) -> QuadResult {
    QuadResult {
        value: r.value * factor,
        error_estimate: r.error_estimate * factor.abs(),
        evaluations: r.evaluations,
    }
}

/// Riemann–Liouville integral of order τ.
///
/// Left: (1/Γ(τ)) ∫_anchor^eval_at (eval_at − w)^(τ−1) f(w) dw.
/// Right: (1/Γ(τ)) ∫_eval_at^anchor (w − eval_at)^(τ−1) f(w) dw.
pub fn rl_integral<F: Fn(f64) -> f64>(
    f: F,
    side: Side,
    anchor: f64,
    eval_at: f64,
    tau: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    check_span(side, anchor, eval_at)?;
    // (x)^(τ−1) = x^n · x^(b−1) with n = ⌈τ⌉ − 1 and b ∈ (0, 1]
    let split = FracOrder::new(tau)?;
    let n = split.m() as i32;
    let r = match side {
        Side::Left => integrate_singular(
            |w| (eval_at - w).powi(n) * f(w),
            anchor,
            eval_at,
            split.beta(),
            SingularEnd::Right,
            cfg,
        )?,
        Side::Right => integrate_singular(
            |w| (w - eval_at).powi(n) * f(w),
            eval_at,
            anchor,
            split.beta(),
            SingularEnd::Left,
            cfg,
        )?,
    };
    Ok(scaled(r, gamma_fn(tau)?.recip()))
}

/// Conformable fractional integral of the given order.
///
/// Left: (1/m!) ∫_anchor^eval_at (eval_at − w)^m (w − anchor)^(β−1) f(w) dw.
/// Right: (1/m!) ∫_eval_at^anchor (w − eval_at)^m (anchor − w)^(β−1) f(w) dw.
pub fn conformable_integral<F: Fn(f64) -> f64>(
    f: F,
    side: Side,
    anchor: f64,
    eval_at: f64,
    order: &FracOrder,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    check_span(side, anchor, eval_at)?;
    let m = order.m() as i32;
    let r = match side {
        Side::Left => integrate_singular(
            |w| (eval_at - w).powi(m) * f(w),
            anchor,
            eval_at,
            order.beta(),
            SingularEnd::Left,
            cfg,
        )?,
        Side::Right => integrate_singular(
            |w| (w - eval_at).powi(m) * f(w),
            eval_at,
            anchor,
            order.beta(),
            SingularEnd::Right,
            cfg,
        )?,
    };
    Ok(scaled(r, order.m_factorial().recip()))
}
