//! Special means and the ready-made proposition checks built on them.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::corpus::{check_convex, lookup};
use crate::error::{Error, Result};
use crate::fracint::FracOrder;
use crate::quadrature::QuadConfig;
use crate::simpson::{evaluate_bound, BoundParams, BoundReport, Interval, TheoremId};
use crate::specfun::{bessel_p, q_digamma_derivative, SeriesControl};

/// Grid size for the Ψ′_q convexity verification in the q-digamma proposition.
const CONVEXITY_GRID: usize = 65;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeansBundle {
    pub a: f64,
    pub g: f64,
    pub l: f64,
    pub ls: f64,
}

fn positive_pair(op: &'static str, gamma: f64, delta: f64) -> Result<()> {
    if !(gamma > 0.0) || !(gamma < delta) || !delta.is_finite() {
        return Err(Error::domain(op, format!("requires 0 < γ < δ, got ({gamma}, {delta})")));
    }
    Ok(())
}

pub fn arithmetic_mean(gamma: f64, delta: f64) -> f64 {
    0.5 * (gamma + delta)
}

pub fn geometric_mean(gamma: f64, delta: f64) -> f64 {
    (gamma * delta).sqrt()
}

/// (δ−γ)/(ln δ − ln γ), evaluated through ln(1 + (δ−γ)/γ).
pub fn log_mean(gamma: f64, delta: f64) -> Result<f64> {
    positive_pair("log_mean", gamma, delta)?;
    let w = delta - gamma;
    Ok(w / (w / gamma).ln_1p())
}

/// L_s^s = (δ^(s+1) − γ^(s+1)) / ((s+1)(δ−γ)), summed as a polynomial so
/// nothing cancels.
pub fn generalized_log_mean_pow(gamma: f64, delta: f64, s: i32) -> Result<f64> {
    positive_pair("generalized_log_mean", gamma, delta)?;
    if s == 0 || s == -1 {
        return Err(Error::domain(
            "generalized_log_mean",
            format!("s must not be 0 or −1, got {s}"),
        ));
    }
    // (δ^n − γ^n)/(δ−γ) = Σ_{k<n} γ^k δ^(n−1−k)
    let quotient = |n: i32| (0..n).map(|k| gamma.powi(k) * delta.powi(n - 1 - k)).sum::<f64>();
    Ok(if s > 0 {
        quotient(s + 1) / f64::from(s + 1)
    } else {
        let n = -(s + 1);
        quotient(n) / (f64::from(n) * (gamma * delta).powi(n))
    })
}

/// L_s = (L_s^s)^(1/s).
pub fn generalized_log_mean(gamma: f64, delta: f64, s: i32) -> Result<f64> {
    Ok(generalized_log_mean_pow(gamma, delta, s)?.powf(f64::from(s).recip()))
}

pub fn special_means(gamma: f64, delta: f64, s: i32) -> Result<MeansBundle> {
    positive_pair("special_means", gamma, delta)?;
    Ok(MeansBundle {
        a: arithmetic_mean(gamma, delta),
        g: geometric_mean(gamma, delta),
        l: log_mean(gamma, delta)?,
        ls: generalized_log_mean(gamma, delta, s)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropositionId {
    P5_1,
    P5_3,
    P5_4,
    P5_6,
    P5_8,
    P5_9,
    P5_11,
}

impl PropositionId {
    pub const ALL: [PropositionId; 7] = [
        PropositionId::P5_1,
        PropositionId::P5_3,
        PropositionId::P5_4,
        PropositionId::P5_6,
        PropositionId::P5_8,
        PropositionId::P5_9,
        PropositionId::P5_11,
    ];

    pub fn label(&self) -> &'static str {
        self.theorem_id().label()
    }

    fn theorem_id(&self) -> TheoremId {
        match self {
            PropositionId::P5_1 => TheoremId::P5_1,
            PropositionId::P5_3 => TheoremId::P5_3,
            PropositionId::P5_4 => TheoremId::P5_4,
            PropositionId::P5_6 => TheoremId::P5_6,
            PropositionId::P5_8 => TheoremId::P5_8,
            PropositionId::P5_9 => TheoremId::P5_9,
            PropositionId::P5_11 => TheoremId::P5_11,
        }
    }
}

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PropositionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = match s.trim().trim_start_matches(['P', 'p']) {
            "5.1" => PropositionId::P5_1,
            "5.3" => PropositionId::P5_3,
            "5.4" => PropositionId::P5_4,
            "5.6" => PropositionId::P5_6,
            "5.8" => PropositionId::P5_8,
            "5.9" => PropositionId::P5_9,
            "5.11" => PropositionId::P5_11,
            _ => return Err(Error::domain("proposition", format!("unknown proposition `{s}`"))),
        };
        Ok(id)
    }
}

/// Inputs for [`proposition_check`]; which fields matter depends on the id.
///
/// `s` is the power for the means propositions, `rho` the Bessel order,
/// `base` the q-digamma base and `q` the Hölder or power-mean exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropParams {
    pub gamma: f64,
    pub delta: f64,
    pub s: Option<u32>,
    pub q: Option<f64>,
    pub rho: Option<f64>,
    pub base: Option<f64>,
}

impl PropParams {
    pub fn new(gamma: f64, delta: f64) -> Self {
        PropParams {
            gamma,
            delta,
            s: None,
            q: None,
            rho: None,
            base: None,
        }
    }

    pub fn with_s(mut self, s: u32) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn with_base(mut self, base: f64) -> Self {
        self.base = Some(base);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionOutcome {
    pub report: BoundReport,
    /// The cosh specialization checked alongside the Bessel proposition at ρ = −1/2.
    pub specialization: Option<BoundReport>,
}

impl PropositionOutcome {
    pub fn reports(&self) -> impl Iterator<Item = &BoundReport> {
        std::iter::once(&self.report).chain(self.specialization.as_ref())
    }

    pub fn pass(&self) -> bool {
        self.reports().all(|r| r.pass)
    }
}

fn require<T>(value: Option<T>, what: &str, prop: PropositionId) -> Result<T> {
    value.ok_or_else(|| Error::precondition(format!("{prop} parameter {what}"), format!("{what} is required")))
}

/// |A(γ^s, δ^s)/3 + 2A^s(γ, δ)/3 − L_s^s(γ, δ)|.
pub fn power_means_deviation(gamma: f64, delta: f64, s: u32) -> Result<f64> {
    let s_i = i32::try_from(s).map_err(|_| Error::domain("power_means_deviation", "s too large"))?;
    if s == 0 {
        return Err(Error::domain("power_means_deviation", "requires s ≥ 1"));
    }
    let a_pow = arithmetic_mean(gamma.powi(s_i), delta.powi(s_i));
    let a = arithmetic_mean(gamma, delta);
    let ls_pow = generalized_log_mean_pow(gamma, delta, s_i)?;
    Ok((a_pow / 3.0 + 2.0 * a.powi(s_i) / 3.0 - ls_pow).abs())
}

/// |A(α, β)/3 + 2G(α, β)/3 − L(α, β)| with α = e^γ, β = e^δ.
pub fn exp_means_deviation(gamma: f64, delta: f64) -> Result<f64> {
    let (alpha, beta) = (gamma.exp(), delta.exp());
    if !(gamma < delta) {
        return Err(Error::domain(
            "exp_means_deviation",
            format!("requires γ < δ, got ({gamma}, {delta})"),
        ));
    }
    // ln β − ln α = δ − γ exactly
    let l = alpha * (delta - gamma).exp_m1() / (delta - gamma);
    Ok((arithmetic_mean(alpha, beta) / 3.0 + 2.0 * geometric_mean(alpha, beta) / 3.0 - l).abs())
}

fn relabel(mut r: BoundReport, id: TheoremId, lhs: Option<f64>, tol: f64) -> BoundReport {
    r.theorem = id;
    match lhs {
        Some(lhs) => {
            let (rhs, err) = (r.rhs, r.quad_error);
            r.settle(lhs, rhs, err, tol)
        }
        None => r,
    }
}

/// The displayed Bessel bound, with ℘_{ρ+1} taken literally from the display.
fn bessel_displayed_rhs(iv: &Interval, rho: f64, q: f64, ctrl: &SeriesControl) -> Result<f64> {
    let (g, d) = (iv.gamma(), iv.delta());
    let pg = bessel_p(rho + 1.0, g, false, ctrl)?.abs().powf(q);
    let pd = bessel_p(rho + 1.0, d, false, ctrl)?.abs().powf(q);
    let inv = q.recip();
    Ok(iv.width() / (2.0 * (rho + 1.0))
        * (5.0_f64 / 36.0).powf(1.0 - inv)
        * (1.0_f64 / 648.0).powf(inv)
        * ((61.0 * g * pg + 29.0 * d * pd).powf(inv) + (29.0 * g * pg + 61.0 * d * pd).powf(inv)))
}

/// Checks one proposition at τ = 1 by delegating to the matching bound.
pub fn proposition_check(
    id: PropositionId,
    params: &PropParams,
    cfg: &QuadConfig,
    tol: f64,
) -> Result<PropositionOutcome> {
    let (gamma, delta) = (params.gamma, params.delta);
    if id == PropositionId::P5_8 {
        // α = e^γ is positive for any γ, so only the ordering matters here
        if !(gamma < delta) || !gamma.is_finite() || !delta.is_finite() {
            return Err(Error::domain(
                id.label(),
                format!("requires γ < δ, got ({gamma}, {delta})"),
            ));
        }
    } else {
        positive_pair(id.label(), gamma, delta)?;
    }
    let iv = Interval::new(gamma, delta)?;
    let order = FracOrder::new(1.0)?;
    let label = id.theorem_id();
    let bound = |theorem: TheoremId, name: &str, q: Option<f64>| -> Result<BoundReport> {
        let f = lookup(name)?;
        let p = BoundParams {
            q,
            ..Default::default()
        };
        evaluate_bound(theorem, &f, &iv, &order, &p, cfg, tol)
    };

    let outcome = match id {
        PropositionId::P5_1 | PropositionId::P5_3 | PropositionId::P5_4 | PropositionId::P5_6 => {
            let s = require(params.s, "s", id)?;
            if s == 0 {
                return Err(Error::precondition(format!("{id} s ∈ ℕ"), "got s = 0"));
            }
            let (theorem, q) = match id {
                PropositionId::P5_1 => (TheoremId::T3_3, None),
                PropositionId::P5_3 => (TheoremId::T3_6, Some(require(params.q, "q", id)?)),
                PropositionId::P5_4 => (TheoremId::T3_7, Some(require(params.q, "q", id)?)),
                _ => (TheoremId::T3_9R, Some(require(params.q, "q", id)?)),
            };
            let r = bound(theorem, &format!("power:{s}"), q)?;
            let lhs = power_means_deviation(gamma, delta, s)?;
            let mut report = relabel(r, label, Some(lhs), tol);
            if id == PropositionId::P5_3 {
                let (p, q) = (report.p.expect("set"), report.q.expect("set"));
                let (sf, si) = (f64::from(s), s as i32);
                let a = (sf * gamma.powi(si - 1)).powf(q);
                let b = (sf * delta.powi(si - 1)).powf(q);
                report.paper_form = Some(
                    0.5 * iv.width()
                        * ((2.0_f64.powf(p + 1.0) + 1.0) / (3.0 * (p + 1.0))).powf(p.recip())
                        * 0.25_f64.powf(q.recip())
                        * ((a + 3.0 * b).powf(q.recip()) + (3.0 * a + b).powf(q.recip())),
                );
            }
            PropositionOutcome {
                report,
                specialization: None,
            }
        }
        PropositionId::P5_8 => {
            let r = bound(TheoremId::T3_3, "exp", None)?;
            let lhs = exp_means_deviation(gamma, delta)?;
            PropositionOutcome {
                report: relabel(r, label, Some(lhs), tol),
                specialization: None,
            }
        }
        PropositionId::P5_9 => {
            let rho = require(params.rho, "rho", id)?;
            if !(rho > -1.0) {
                return Err(Error::precondition(format!("{id} ρ > −1"), format!("got ρ = {rho}")));
            }
            let q = require(params.q, "q", id)?;
            let ctrl = SeriesControl::default();
            let r = bound(TheoremId::T3_7, &format!("bessel_p:{rho}"), Some(q))?;
            let mut report = relabel(r, label, None, tol);
            report.paper_form = Some(bessel_displayed_rhs(&iv, rho, q, &ctrl)?);
            let specialization = if rho == -0.5 {
                let c = bound(TheoremId::T3_7, "cosh", Some(q))?;
                let mut c = relabel(c, TheoremId::P5_9Cosh, None, tol);
                c.paper_form = Some(bessel_displayed_rhs(&iv, rho, q, &ctrl)?);
                Some(c)
            } else {
                None
            };
            PropositionOutcome { report, specialization }
        }
        PropositionId::P5_11 => {
            let base = require(params.base, "base", id)?;
            if !(base > 1.0) || !base.is_finite() {
                return Err(Error::precondition(
                    format!("{id} base q > 1"),
                    format!("got q = {base}"),
                ));
            }
            let ctrl = SeriesControl::default();
            let convex = check_convex(
                |x| q_digamma_derivative(base, x, 1, &ctrl).unwrap_or(f64::NAN),
                &iv,
                CONVEXITY_GRID,
            )?;
            if !convex.convex {
                let (x, y) = convex.witness.unwrap_or_default();
                return Err(Error::precondition(
                    format!("Ψ′_{base} convex on [{gamma}, {delta}]"),
                    format!("midpoint convexity fails for the pair ({x}, {y})"),
                ));
            }
            let q = params.q.unwrap_or(base);
            let r = bound(TheoremId::T3_9R, &format!("qdigamma:{base}"), Some(q))?;
            PropositionOutcome {
                report: relabel(r, label, None, tol),
                specialization: None,
            }
        }
    };
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simpson::DEFAULT_PASS_TOL;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn means_examples() {
        let m = special_means(1.0, 2.0, 2).unwrap();
        assert_eq!(m.a, 1.5);
        assert_relative_eq!(m.ls, (7.0_f64 / 3.0).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(m.l, 1.0 / std::f64::consts::LN_2, max_relative = 1e-15);
        assert_eq!(special_means(1.0, 4.0, 1).unwrap().g, 2.0);
        // s = −2: ((δ⁻¹ − γ⁻¹)/(−(δ−γ)))^(−1/2) = G
        let m = special_means(1.0, 4.0, -2).unwrap();
        assert_relative_eq!(m.ls, 2.0, max_relative = 1e-15);
        assert!(special_means(0.0, 1.0, 2).is_err());
        assert!(special_means(2.0, 1.0, 2).is_err());
        assert!(special_means(1.0, 2.0, 0).is_err());
        assert!(special_means(1.0, 2.0, -1).is_err());
    }

    #[test]
    fn generalized_mean_matches_closed_form() {
        for &(g, d, s) in &[(0.5_f64, 3.0_f64, 3), (1.0, 2.0, 5), (0.2, 0.9, -3), (2.0, 7.0, -2)] {
            let sp1 = f64::from(s + 1);
            let closed = (d.powf(sp1) - g.powf(sp1)) / (sp1 * (d - g));
            assert_relative_eq!(generalized_log_mean_pow(g, d, s).unwrap(), closed, max_relative = 1e-13);
        }
    }

    #[test]
    fn means_deviation_is_simpson_deviation() {
        // oracle: S − mean for x³ on [1,2] is 0 by exactness on cubics
        assert_abs_diff_eq!(power_means_deviation(1.0, 2.0, 3).unwrap(), 0.0, epsilon = 1e-14);
        // x⁴ on [0.5, 1.5]: S − mean = (δ−γ)⁴/120 · 4!/24
        let dev = power_means_deviation(0.5, 1.5, 4).unwrap();
        assert_relative_eq!(dev, 1.0 / 120.0, max_relative = 1e-12);
        let e = std::f64::consts::E;
        let direct = ((1.0 + 4.0 * 0.5_f64.exp() + e) / 6.0 - (e - 1.0)).abs();
        assert_relative_eq!(exp_means_deviation(0.0, 1.0).unwrap(), direct, max_relative = 1e-12);
        assert_relative_eq!(exp_means_deviation(1.0, 2.0).unwrap(), direct * e, max_relative = 1e-12);
    }

    #[test]
    fn proposition_examples() {
        let cfg = QuadConfig::default();
        let tol = DEFAULT_PASS_TOL;
        let out = proposition_check(PropositionId::P5_1, &PropParams::new(1.0, 2.0).with_s(1), &cfg, tol).unwrap();
        assert_eq!(out.report.theorem, TheoremId::P5_1);
        assert_abs_diff_eq!(out.report.lhs, 0.0, epsilon = 1e-15);
        assert_relative_eq!(out.report.rhs, 5.0 / 36.0, max_relative = 1e-12);
        assert!(out.pass());

        let out = proposition_check(PropositionId::P5_8, &PropParams::new(0.0, 1.0), &cfg, tol).unwrap();
        let e = std::f64::consts::E;
        assert_relative_eq!(out.report.rhs, 5.0 / 36.0 * (1.0 + e) / 2.0, max_relative = 1e-11);
        assert_relative_eq!(out.report.lhs, 5.794e-4, max_relative = 1e-3);
        assert!(out.pass());

        let out = proposition_check(
            PropositionId::P5_9,
            &PropParams::new(0.5, 2.0).with_rho(-0.5).with_q(2.0),
            &cfg,
            tol,
        )
        .unwrap();
        let cosh = out.specialization.as_ref().expect("cosh companion");
        assert_eq!(cosh.theorem, TheoremId::P5_9Cosh);
        assert_relative_eq!(cosh.lhs, out.report.lhs, max_relative = 1e-9);
        assert_relative_eq!(cosh.rhs, out.report.rhs, max_relative = 1e-9);
        assert!(out.pass());
        assert!(out.report.paper_form.is_some());
    }

    #[test]
    fn proposition_preconditions() {
        let cfg = QuadConfig::default();
        let tol = DEFAULT_PASS_TOL;
        assert!(proposition_check(PropositionId::P5_1, &PropParams::new(1.0, 2.0), &cfg, tol).is_err());
        assert!(proposition_check(PropositionId::P5_3, &PropParams::new(1.0, 2.0).with_s(2), &cfg, tol).is_err());
        assert!(proposition_check(PropositionId::P5_1, &PropParams::new(0.0, 2.0).with_s(2), &cfg, tol).is_err());
        assert!(proposition_check(
            PropositionId::P5_9,
            &PropParams::new(1.0, 2.0).with_rho(-1.5).with_q(2.0),
            &cfg,
            tol
        )
        .is_err());
        assert!(proposition_check(
            PropositionId::P5_11,
            &PropParams::new(1.0, 2.0).with_base(0.5),
            &cfg,
            tol
        )
        .is_err());
        assert_eq!("5.11".parse::<PropositionId>().unwrap(), PropositionId::P5_11);
        assert!("5.2".parse::<PropositionId>().is_err());
    }
}
