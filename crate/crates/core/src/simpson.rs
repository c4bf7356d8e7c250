//! Simpson-type identity and bounds for conformable fractional integrals.
//!
//! The identity compares the Simpson functional
//! S = (1/6)[f(γ) + 4f(mid) + f(δ)] with the normalized sum of the left and
//! right conformable integrals evaluated at the midpoint, and expresses the
//! difference as an integral of f′ against the kernel
//! h(w) = B(m+1, β)/3 − β_w(m+1, β)/2. The bounds then estimate that kernel
//! integral under convexity, boundedness or Lipschitz hypotheses on f′.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{check_convex, FunctionSpec};
use crate::error::{Error, Result};
use crate::fracint::{conformable_integral, FracOrder, Side};
use crate::quadrature::{integrate, QuadConfig};
use crate::specfun::{beta_fn, incomplete_beta};

/// Default pass/fail tolerance on the slack of a bound.
pub const DEFAULT_PASS_TOL: f64 = 1e-8;

/// Grid size used when verifying convexity hypotheses.
const CONVEXITY_GRID: usize = 65;
/// Grid size used when verifying derivative bounds and Lipschitz constants.
const HYPOTHESIS_GRID: usize = 257;

/// Integration window [γ, δ] with γ < δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    gamma: f64,
    delta: f64,
}

impl Interval {
    pub fn new(gamma: f64, delta: f64) -> Result<Self> {
        if !gamma.is_finite() || !delta.is_finite() || !(gamma < delta) {
            return Err(Error::domain(
                "interval",
                format!("requires finite γ < δ, got [{gamma}, {delta}]"),
            ));
        }
        Ok(Interval { gamma, delta })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn width(&self) -> f64 {
        self.delta - self.gamma
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.gamma + self.delta)
    }
}

/// Hölder conjugate exponents, 1/p + 1/q = 1 with p, q > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderPair {
    p: f64,
    q: f64,
}

impl HolderPair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && q > 1.0) || !p.is_finite() || !q.is_finite() {
            return Err(Error::domain("holder", format!("requires p, q > 1, got ({p}, {q})")));
        }
        if (p.recip() + q.recip() - 1.0).abs() > 1e-12 {
            return Err(Error::domain(
                "holder",
                format!("1/p + 1/q must equal 1, got 1/{p} + 1/{q}"),
            ));
        }
        Ok(HolderPair { p, q })
    }

    pub fn from_q(q: f64) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::domain("holder", format!("requires q > 1, got {q}")));
        }
        Ok(HolderPair { p: q / (q - 1.0), q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Which inequality a [`BoundReport`] verifies.
///
/// The `-R` and `-D` variants are reference forms kept for comparison; they
/// are not guaranteed to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T1.1")]
    T1_1,
    #[serde(rename = "T3.3")]
    T3_3,
    #[serde(rename = "T3.6")]
    T3_6,
    #[serde(rename = "T3.7")]
    T3_7,
    #[serde(rename = "T3.9")]
    T3_9,
    #[serde(rename = "T3.9-R")]
    T3_9R,
    #[serde(rename = "T4.1")]
    T4_1,
    #[serde(rename = "T4.1-D")]
    T4_1D,
    #[serde(rename = "T4.3")]
    T4_3,
    #[serde(rename = "T4.3-D")]
    T4_3D,
    #[serde(rename = "P5.1")]
    P5_1,
    #[serde(rename = "P5.3")]
    P5_3,
    #[serde(rename = "P5.4")]
    P5_4,
    #[serde(rename = "P5.6")]
    P5_6,
    #[serde(rename = "P5.8")]
    P5_8,
    #[serde(rename = "P5.9")]
    P5_9,
    #[serde(rename = "P5.9-cosh")]
    P5_9Cosh,
    #[serde(rename = "P5.11")]
    P5_11,
}

impl TheoremId {
    /// The six fractional bounds that are asserted sound.
    pub const SOUND_FRACTIONAL: [TheoremId; 6] = [
        TheoremId::T3_3,
        TheoremId::T3_6,
        TheoremId::T3_7,
        TheoremId::T3_9,
        TheoremId::T4_1,
        TheoremId::T4_3,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            TheoremId::T1_1 => "T1.1",
            TheoremId::T3_3 => "T3.3",
            TheoremId::T3_6 => "T3.6",
            TheoremId::T3_7 => "T3.7",
            TheoremId::T3_9 => "T3.9",
            TheoremId::T3_9R => "T3.9-R",
            TheoremId::T4_1 => "T4.1",
            TheoremId::T4_1D => "T4.1-D",
            TheoremId::T4_3 => "T4.3",
            TheoremId::T4_3D => "T4.3-D",
            TheoremId::P5_1 => "P5.1",
            TheoremId::P5_3 => "P5.3",
            TheoremId::P5_4 => "P5.4",
            TheoremId::P5_6 => "P5.6",
            TheoremId::P5_8 => "P5.8",
            TheoremId::P5_9 => "P5.9",
            TheoremId::P5_9Cosh => "P5.9-cosh",
            TheoremId::P5_11 => "P5.11",
        }
    }

    /// Whether the bound needs a Hölder/power-mean exponent q.
    pub fn uses_q(&self) -> bool {
        matches!(
            self,
            TheoremId::T3_6 | TheoremId::T3_7 | TheoremId::T3_9 | TheoremId::T3_9R
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().trim_start_matches(['T', 't']);
        let id = match key {
            "1.1" => TheoremId::T1_1,
            "3.3" => TheoremId::T3_3,
            "3.6" => TheoremId::T3_6,
            "3.7" => TheoremId::T3_7,
            "3.9" => TheoremId::T3_9,
            "3.9-R" | "3.9-r" => TheoremId::T3_9R,
            "4.1" => TheoremId::T4_1,
            "4.1-D" | "4.1-d" => TheoremId::T4_1D,
            "4.3" => TheoremId::T4_3,
            "4.3-D" | "4.3-d" => TheoremId::T4_3D,
            _ => {
                return Err(Error::domain("theorem", format!("unknown theorem id `{s}`")));
            }
        };
        Ok(id)
    }
}

/// One verification outcome. Serializes with the stable report field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub tau: Option<f64>,
    pub m: Option<u32>,
    pub gamma: f64,
    pub delta: f64,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub k_lo: Option<f64>,
    pub k_hi: Option<f64>,
    pub lipschitz: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub quad_error: f64,
    /// The literally displayed right-hand side, where it differs from `rhs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_form: Option<f64>,
}

impl BoundReport {
    /// Column order shared by JSON objects and CSV rows.
    pub const FIELDS: [&'static str; 15] = [
        "theorem",
        "tau",
        "m",
        "gamma",
        "delta",
        "p",
        "q",
        "k_lo",
        "k_hi",
        "lipschitz",
        "lhs",
        "rhs",
        "slack",
        "pass",
        "quad_error",
    ];

    pub(crate) fn blank(theorem: TheoremId, iv: &Interval, order: Option<&FracOrder>) -> Self {
        BoundReport {
            theorem,
            tau: order.map(FracOrder::tau),
            m: order.map(FracOrder::m),
            gamma: iv.gamma(),
            delta: iv.delta(),
            p: None,
            q: None,
            k_lo: None,
            k_hi: None,
            lipschitz: None,
            lhs: 0.0,
            rhs: 0.0,
            slack: 0.0,
            pass: false,
            quad_error: 0.0,
            paper_form: None,
        }
    }

    /// Sets both sides and derives slack and the pass flag.
    pub(crate) fn settle(mut self, lhs: f64, rhs: f64, quad_error: f64, tol: f64) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self.slack = rhs - lhs;
        self.pass = self.slack >= -tol;
        self.quad_error = quad_error;
        self
    }
}

/// A computed value together with its numerical error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// Kernel constants for one fractional order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimpsonConstants {
    pub tau: f64,
    pub m: u32,
    pub p: Option<f64>,
    pub z1: f64,
    pub z2: Option<f64>,
    pub z3: f64,
    pub z4: f64,
    pub z5: f64,
    pub b_complete: f64,
    pub w_star: f64,
    pub h_integral: f64,
    pub quad_error: f64,
}

fn finite_at(f: &FunctionSpec, x: f64) -> Result<f64> {
    let value = f.eval(x);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { x, value })
    }
}

/// (1/6)[f(γ) + 4f(mid) + f(δ)].
pub fn simpson_value(f: &FunctionSpec, iv: &Interval) -> Result<f64> {
    f.validate_interval(iv)?;
    let a = finite_at(f, iv.gamma())?;
    let m = finite_at(f, iv.midpoint())?;
    let b = finite_at(f, iv.delta())?;
    Ok((a + 4.0 * m + b) / 6.0)
}

/// Precomputed kernel h(w) = B/3 − β_w/2 for one order.
#[derive(Debug, Clone, Copy)]
struct Kernel {
    a: u32,
    b: f64,
    complete: f64,
}

impl Kernel {
    fn new(order: &FracOrder) -> Result<Self> {
        let a = order.m() + 1;
        Ok(Kernel {
            a,
            b: order.beta(),
            complete: beta_fn(f64::from(a), order.beta())?,
        })
    }

    fn at(&self, w: f64) -> f64 {
        match incomplete_beta(w.clamp(0.0, 1.0), self.a, self.b) {
            Ok(bw) => self.complete / 3.0 - 0.5 * bw,
            Err(_) => f64::NAN,
        }
    }

    /// Root of h in (0, 1); h is strictly decreasing from B/3 to −B/6.
    fn sign_change(&self) -> Result<f64> {
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        if !(self.at(lo) > 0.0 && self.at(hi) < 0.0) {
            return Err(Error::domain("kernel", "h does not change sign on [0, 1]"));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.at(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(if self.at(lo).abs() <= self.at(hi).abs() { lo } else { hi })
    }
}

/// h(w) = (1/3)B(m+1, β) − (1/2)β_w(m+1, β).
pub fn kernel_h(w: f64, order: &FracOrder) -> Result<f64> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::domain("kernel_h", format!("requires 0 ≤ w ≤ 1, got {w}")));
    }
    let k = Kernel::new(order)?;
    Ok(k.complete / 3.0 - 0.5 * incomplete_beta(w, k.a, k.b)?)
}

/// The factor (δ−γ)/(2·m!) · Γ(τ+1)/Γ(τ−m) in front of every kernel integral.
pub fn prefactor(iv: &Interval, order: &FracOrder) -> Result<f64> {
    Ok(iv.width() / (2.0 * order.m_factorial()) * order.gamma_ratio()?)
}

fn constants_config(cfg: &QuadConfig) -> QuadConfig {
    QuadConfig {
        abs_tol: cfg.abs_tol.min(1e-13),
        rel_tol: cfg.rel_tol.min(1e-13),
        max_depth: cfg.max_depth.max(60),
    }
}

/// Z₁…Z₅, B(m+1, β), the sign change w* and ∫₀¹h for the given order.
///
/// Each |h|-weighted integral is split at w* so both pieces are smooth.
/// `p` (≥ 1) is needed only for Z₂ = ∫|h|^p.
pub fn constants(order: &FracOrder, p: Option<f64>, cfg: &QuadConfig) -> Result<SimpsonConstants> {
    if let Some(p) = p {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::domain("constants", format!("requires p ≥ 1, got {p}")));
        }
    }
    let kernel = Kernel::new(order)?;
    let w_star = kernel.sign_change()?;
    let cfg = constants_config(cfg);
    let mut quad_error = 0.0;
    // when w* sits near 1 the right piece is tiny next to the left one, so its
    // tolerance is taken relative to the left piece instead of itself
    let mut split = |g: &dyn Fn(f64) -> f64| -> Result<(f64, f64)> {
        let pos = integrate(g, 0.0, w_star, &cfg)?;
        let tail_cfg = QuadConfig {
            abs_tol: cfg.abs_tol.max(cfg.rel_tol * pos.value.abs()),
            ..cfg
        };
        let neg = integrate(g, w_star, 1.0, &tail_cfg)?;
        quad_error += pos.error_estimate + neg.error_estimate;
        Ok((pos.value, neg.value))
    };
    let weighted = |g: fn(f64) -> f64| move |w: f64| g(w) * kernel.at(w).abs();
    let (z1_pos, z1_neg) = split(&weighted(|_| 1.0))?;
    let (z3_pos, z3_neg) = split(&weighted(|w| 0.5 * (1.0 + w)))?;
    let (z4_pos, z4_neg) = split(&weighted(|w| 0.5 * (1.0 - w)))?;
    let (z5_pos, z5_neg) = split(&weighted(|w| w))?;
    let z2 = match p {
        Some(p) => {
            let (pos, neg) = split(&|w: f64| kernel.at(w).abs().powf(p))?;
            Some(pos + neg)
        }
        None => None,
    };
    Ok(SimpsonConstants {
        tau: order.tau(),
        m: order.m(),
        p,
        z1: z1_pos + z1_neg,
        z2,
        z3: z3_pos + z3_neg,
        z4: z4_pos + z4_neg,
        z5: z5_pos + z5_neg,
        b_complete: kernel.complete,
        w_star,
        // h ≥ 0 left of w* and ≤ 0 right of it
        h_integral: z1_pos - z1_neg,
        quad_error,
    })
}

/// S − [2^(τ−1)/(δ−γ)^τ]·[Γ(τ+1)/Γ(τ−m)]·[left + right conformable integrals at mid].
pub fn identity_lhs(f: &FunctionSpec, iv: &Interval, order: &FracOrder, cfg: &QuadConfig) -> Result<Estimate> {
    let s = simpson_value(f, iv)?;
    let mid = iv.midpoint();
    let left = conformable_integral(|w| f.eval(w), Side::Left, iv.gamma(), mid, order, cfg)?;
    let right = conformable_integral(|w| f.eval(w), Side::Right, iv.delta(), mid, order, cfg)?;
    let tau = order.tau();
    let scale = 2.0_f64.powf(tau - 1.0) / iv.width().powf(tau) * order.gamma_ratio()?;
    Ok(Estimate {
        value: s - scale * (left.value + right.value),
        error_estimate: scale * (left.error_estimate + right.error_estimate),
    })
}

/// P·∫₀¹ h(w)[f′(low) − f′(high)] dw with low = ((1+w)/2)γ + ((1−w)/2)δ and
/// high = ((1−w)/2)γ + ((1+w)/2)δ.
pub fn identity_rhs(f: &FunctionSpec, iv: &Interval, order: &FracOrder, cfg: &QuadConfig) -> Result<Estimate> {
    f.validate_interval(iv)?;
    let kernel = Kernel::new(order)?;
    let (g, d) = (iv.gamma(), iv.delta());
    let integrand = |w: f64| {
        let low = 0.5 * (1.0 + w) * g + 0.5 * (1.0 - w) * d;
        let high = 0.5 * (1.0 - w) * g + 0.5 * (1.0 + w) * d;
        kernel.at(w) * (f.deriv(low) - f.deriv(high))
    };
    let r = integrate(integrand, 0.0, 1.0, cfg)?;
    let pf = prefactor(iv, order)?;
    Ok(Estimate {
        value: pf * r.value,
        error_estimate: pf * r.error_estimate,
    })
}

/// Optional inputs to [`evaluate_bound`]. Missing derivative bounds and
/// Lipschitz constants are taken from the function's catalog metadata.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundParams {
    pub q: Option<f64>,
    pub k_lo: Option<f64>,
    pub k_hi: Option<f64>,
    pub lipschitz: Option<f64>,
}

fn grid(iv: &Interval, n: usize) -> impl Iterator<Item = f64> + '_ {
    let step = iv.width() / (n - 1) as f64;
    (0..n).map(move |i| {
        if i + 1 == n {
            iv.delta()
        } else {
            iv.gamma() + step * i as f64
        }
    })
}

fn require_convex_deriv_power(f: &FunctionSpec, iv: &Interval, q: f64) -> Result<()> {
    let check = check_convex(|x| f.deriv(x).abs().powf(q), iv, CONVEXITY_GRID)?;
    if check.convex {
        return Ok(());
    }
    let hypothesis = if q == 1.0 {
        format!("|{}′| convex on [{}, {}]", f.name(), iv.gamma(), iv.delta())
    } else {
        format!("|{}′|^{q} convex on [{}, {}]", f.name(), iv.gamma(), iv.delta())
    };
    let (x, y) = check.witness.unwrap_or_default();
    Err(Error::precondition(
        hypothesis,
        format!("midpoint convexity fails for the pair ({x}, {y})"),
    ))
}

fn require_q(theorem: TheoremId, q: Option<f64>, strict: bool) -> Result<f64> {
    let q = q.ok_or_else(|| Error::precondition(format!("{theorem} exponent q"), "q is required"))?;
    let ok = if strict { q > 1.0 } else { q >= 1.0 };
    if !ok || !q.is_finite() {
        let rule = if strict { "q > 1" } else { "q ≥ 1" };
        return Err(Error::precondition(
            format!("{theorem} exponent {rule}"),
            format!("got q = {q}"),
        ));
    }
    Ok(q)
}

fn derivative_bounds(f: &FunctionSpec, iv: &Interval, params: &BoundParams) -> Result<(f64, f64)> {
    let (k, big_k) = match (params.k_lo, params.k_hi) {
        (Some(k), Some(big_k)) => (k, big_k),
        (None, None) => f.bounded_deriv(iv).ok_or_else(|| {
            Error::precondition(
                "k ≤ f′ ≤ K",
                format!("no derivative bounds supplied and `{}` has none on record", f.name()),
            )
        })?,
        _ => {
            return Err(Error::precondition("k ≤ f′ ≤ K", "supply both k_lo and k_hi"));
        }
    };
    if !(k <= big_k) {
        return Err(Error::precondition("k ≤ K", format!("got k = {k} > K = {big_k}")));
    }
    let scale = 1.0_f64.max(k.abs()).max(big_k.abs());
    for x in grid(iv, HYPOTHESIS_GRID) {
        let d = f.deriv(x);
        if !(d >= k - 1e-12 * scale && d <= big_k + 1e-12 * scale) {
            return Err(Error::precondition(
                format!("{k} ≤ {}′ ≤ {big_k} on [{}, {}]", f.name(), iv.gamma(), iv.delta()),
                format!("f′({x}) = {d}"),
            ));
        }
    }
    Ok((k, big_k))
}

fn lipschitz_constant(f: &FunctionSpec, iv: &Interval, params: &BoundParams) -> Result<f64> {
    let l = match params.lipschitz {
        Some(l) => l,
        None => f.lipschitz_deriv(iv).ok_or_else(|| {
            Error::precondition(
                "f′ Lipschitz",
                format!("no Lipschitz constant supplied and `{}` has none on record", f.name()),
            )
        })?,
    };
    if !(l >= 0.0) || !l.is_finite() {
        return Err(Error::precondition("Lipschitz constant L ≥ 0", format!("got L = {l}")));
    }
    let pts: Vec<(f64, f64)> = grid(iv, HYPOTHESIS_GRID).map(|x| (x, f.deriv(x))).collect();
    for pair in pts.windows(2) {
        let ((x0, d0), (x1, d1)) = (pair[0], pair[1]);
        let allowed = l * (x1 - x0) * (1.0 + 1e-9) + 1e-12 * 1.0_f64.max(d0.abs());
        if (d1 - d0).abs() > allowed {
            return Err(Error::precondition(
                format!(
                    "{}′ Lipschitz with L = {l} on [{}, {}]",
                    f.name(),
                    iv.gamma(),
                    iv.delta()
                ),
                format!("|f′({x1}) − f′({x0})| = {} exceeds L·{}", (d1 - d0).abs(), x1 - x0),
            ));
        }
    }
    Ok(l)
}

/// Evaluates one Simpson-type bound for `f` on `iv` at the given order.
///
/// The left side is the absolute identity deviation. Hypotheses are verified
/// numerically on the interval first; a failed hypothesis is an error naming it.
pub fn evaluate_bound(
    theorem: TheoremId,
    f: &FunctionSpec,
    iv: &Interval,
    order: &FracOrder,
    params: &BoundParams,
    cfg: &QuadConfig,
    tol: f64,
) -> Result<BoundReport> {
    if theorem == TheoremId::T1_1 {
        return classical_bound(f, iv, cfg, tol);
    }
    f.validate_interval(iv)?;
    let mut report = BoundReport::blank(theorem, iv, Some(order));

    // hypotheses before any expensive work
    let mut holder = None;
    match theorem {
        TheoremId::T3_3 => require_convex_deriv_power(f, iv, 1.0)?,
        TheoremId::T3_6 | TheoremId::T3_9 | TheoremId::T3_9R => {
            let q = require_q(theorem, params.q, true)?;
            require_convex_deriv_power(f, iv, q)?;
            holder = Some(HolderPair::from_q(q)?);
        }
        TheoremId::T3_7 => {
            let q = require_q(theorem, params.q, false)?;
            require_convex_deriv_power(f, iv, q)?;
            report.q = Some(q);
        }
        TheoremId::T4_1 | TheoremId::T4_1D => {
            let (k, big_k) = derivative_bounds(f, iv, params)?;
            report.k_lo = Some(k);
            report.k_hi = Some(big_k);
        }
        TheoremId::T4_3 | TheoremId::T4_3D => {
            report.lipschitz = Some(lipschitz_constant(f, iv, params)?);
        }
        other => {
            return Err(Error::domain(
                "evaluate_bound",
                format!("{other} is not a theorem bound; use the applications module"),
            ));
        }
    }
    if let Some(h) = holder {
        report.p = Some(h.p());
        report.q = Some(h.q());
    }

    let deviation = identity_lhs(f, iv, order, cfg)?;
    let consts = constants(order, holder.map(|h| h.p()), cfg)?;
    let pf = prefactor(iv, order)?;
    let d_lo = f.deriv(iv.gamma()).abs();
    let d_hi = f.deriv(iv.delta()).abs();
    let d_mid = f.deriv(iv.midpoint()).abs();
    let width = iv.width();

    let mut lhs = deviation.value.abs();
    let mut derivative_scale = d_lo.max(d_hi);
    let rhs = match theorem {
        TheoremId::T3_3 => pf * consts.z1 * (d_lo + d_hi),
        TheoremId::T3_6 => {
            let h = holder.expect("checked above");
            let (a, b) = (d_lo.powf(h.q()), d_hi.powf(h.q()));
            let z2 = consts.z2.expect("p supplied");
            pf * z2.powf(h.p().recip())
                * 0.25_f64.powf(h.q().recip())
                * ((3.0 * a + b).powf(h.q().recip()) + (a + 3.0 * b).powf(h.q().recip()))
        }
        TheoremId::T3_7 => {
            let q = report.q.expect("checked above");
            let (a, b) = (d_lo.powf(q), d_hi.powf(q));
            let inv = q.recip();
            pf * consts.z1.powf(1.0 - inv)
                * ((consts.z3 * a + consts.z4 * b).powf(inv) + (consts.z4 * a + consts.z3 * b).powf(inv))
        }
        TheoremId::T3_9 | TheoremId::T3_9R => {
            let h = holder.expect("checked above");
            let inv = h.q().recip();
            let (a, b, mid) = (d_lo.powf(h.q()), d_hi.powf(h.q()), d_mid.powf(h.q()));
            derivative_scale = derivative_scale.max(d_mid);
            let z2 = consts.z2.expect("p supplied").powf(h.p().recip());
            if theorem == TheoremId::T3_9 {
                pf * 0.5_f64.powf(inv) * z2 * ((a + mid).powf(inv) + (mid + b).powf(inv))
            } else {
                pf * 0.25_f64.powf(inv) * z2 * ((a + 3.0 * mid).powf(inv) + (3.0 * mid + b).powf(inv))
            }
        }
        TheoremId::T4_1 | TheoremId::T4_1D => {
            let (k, big_k) = (report.k_lo.expect("set"), report.k_hi.expect("set"));
            if theorem == TheoremId::T4_1D {
                lhs = (deviation.value - 0.5 * (big_k + k) * width * consts.h_integral).abs();
            }
            derivative_scale = k.abs().max(big_k.abs());
            (big_k - k) * pf * consts.z1
        }
        TheoremId::T4_3 | TheoremId::T4_3D => {
            let l = report.lipschitz.expect("set");
            if theorem == TheoremId::T4_3D {
                lhs = (deviation.value - width * f.deriv(iv.midpoint()) * consts.h_integral).abs();
            }
            derivative_scale = l * width;
            l * width * pf * consts.z5
        }
        _ => unreachable!("filtered above"),
    };
    if !rhs.is_finite() || !lhs.is_finite() {
        return Err(Error::domain(
            "evaluate_bound",
            format!("{theorem}: non-finite sides (lhs {lhs}, rhs {rhs})"),
        ));
    }
    let quad_error = deviation.error_estimate + pf * consts.quad_error * derivative_scale.max(1.0);
    Ok(report.settle(lhs, rhs, quad_error, tol))
}

/// Classical Simpson error bound |∫f − (δ−γ)S| ≤ ‖f⁗‖_∞ (δ−γ)⁵/2880.
pub fn classical_bound(f: &FunctionSpec, iv: &Interval, cfg: &QuadConfig, tol: f64) -> Result<BoundReport> {
    f.validate_interval(iv)?;
    let d4 = f.d4_sup_on(iv).ok_or_else(|| {
        Error::precondition(
            "‖f⁗‖∞ known",
            format!("`{}` carries no fourth-derivative bound", f.name()),
        )
    })?;
    let s = simpson_value(f, iv)?;
    let integral = integrate(|x| f.eval(x), iv.gamma(), iv.delta(), cfg)?;
    let width = iv.width();
    let lhs = (integral.value - width * s).abs();
    let rhs = d4 * width.powi(5) / 2880.0;
    Ok(BoundReport::blank(TheoremId::T1_1, iv, None).settle(lhs, rhs, integral.error_estimate, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::lookup;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn order(tau: f64) -> FracOrder {
        FracOrder::new(tau).unwrap()
    }

    #[test]
    fn interval_and_holder_validation() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        let h = HolderPair::from_q(4.0).unwrap();
        assert_relative_eq!(h.p(), 4.0 / 3.0);
        assert!(HolderPair::new(2.0, 2.0).is_ok());
        assert!(HolderPair::new(2.0, 3.0).is_err());
        assert!(HolderPair::from_q(1.0).is_err());
    }

    #[test]
    fn theorem_ids_parse() {
        assert_eq!("3.3".parse::<TheoremId>().unwrap(), TheoremId::T3_3);
        assert_eq!("T4.1-D".parse::<TheoremId>().unwrap(), TheoremId::T4_1D);
        assert_eq!("3.9-R".parse::<TheoremId>().unwrap(), TheoremId::T3_9R);
        assert!("2.2".parse::<TheoremId>().is_err());
        assert_eq!(serde_json::to_string(&TheoremId::T3_9R).unwrap(), "\"T3.9-R\"");
    }

    #[test]
    fn simpson_value_examples() {
        let p2 = lookup("power:2").unwrap();
        assert_relative_eq!(
            simpson_value(&p2, &iv(1.0, 2.0)).unwrap(),
            7.0 / 3.0,
            max_relative = 1e-15
        );
        let p4 = lookup("power:4").unwrap();
        assert_relative_eq!(
            simpson_value(&p4, &iv(0.0, 1.0)).unwrap(),
            5.0 / 24.0,
            max_relative = 1e-15
        );
        let one = FunctionSpec::new("one", |_| 1.0, |_| 0.0);
        assert_eq!(simpson_value(&one, &iv(-4.0, 7.5)).unwrap(), 1.0);
    }

    #[test]
    fn kernel_examples() {
        for tau in [0.3, 1.0, 1.5, 2.7] {
            let o = order(tau);
            let b = beta_fn(f64::from(o.m() + 1), o.beta()).unwrap();
            assert_relative_eq!(kernel_h(0.0, &o).unwrap(), b / 3.0, max_relative = 1e-14);
            assert_relative_eq!(kernel_h(1.0, &o).unwrap(), -b / 6.0, max_relative = 1e-12);
        }
        assert_abs_diff_eq!(kernel_h(2.0 / 3.0, &order(1.0)).unwrap(), 0.0, epsilon = 1e-15);
        assert!(kernel_h(1.5, &order(1.0)).is_err());
    }

    #[test]
    fn constants_at_tau_one() {
        let c = constants(&order(1.0), Some(2.0), &QuadConfig::default()).unwrap();
        assert_abs_diff_eq!(c.z1, 5.0 / 36.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.z3, 61.0 / 648.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.z4, 29.0 / 648.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.z5, 4.0 / 81.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.w_star, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.h_integral, 1.0 / 12.0, epsilon = 1e-12);
        let p = 2.0_f64;
        let z2 = (2.0_f64.powf(p + 2.0) + 2.0) / ((p + 1.0) * 6.0_f64.powf(p + 1.0));
        assert_relative_eq!(c.z2.unwrap(), z2, max_relative = 1e-10);
    }

    #[test]
    fn constants_consistency() {
        for tau in [0.3, 0.5, 1.5, 2.0, 2.7] {
            let o = order(tau);
            let c = constants(&o, Some(1.0), &QuadConfig::default()).unwrap();
            assert_abs_diff_eq!(c.z3 + c.z4, c.z1, epsilon = 1e-12);
            assert!(c.z5 <= c.z1);
            assert!(c.z1 > 0.0 && c.z3 > 0.0 && c.z4 > 0.0 && c.z5 > 0.0);
            assert_abs_diff_eq!(c.z2.unwrap(), c.z1, epsilon = 1e-12);
            assert_abs_diff_eq!(kernel_h(c.w_star, &o).unwrap(), 0.0, epsilon = 1e-12);
            // ∫₀¹β_w dw = B(m+1, β+1) = B·β/(τ+1)
            let closed = c.b_complete * (1.0 / 3.0 - o.beta() / (2.0 * (tau + 1.0)));
            assert_abs_diff_eq!(c.h_integral, closed, epsilon = 1e-11);
        }
        assert!(constants(&order(1.0), Some(0.5), &QuadConfig::default()).is_err());
    }

    #[test]
    fn identity_examples() {
        let cfg = QuadConfig::default();
        let c = FunctionSpec::new("three", |_| 3.0, |_| 0.0);
        for tau in [0.5, 1.5] {
            let lhs = identity_lhs(&c, &iv(1.0, 2.0), &order(tau), &cfg).unwrap();
            assert_abs_diff_eq!(lhs.value, 0.0, epsilon = 1e-10);
            let rhs = identity_rhs(&c, &iv(1.0, 2.0), &order(tau), &cfg).unwrap();
            assert_eq!(rhs.value, 0.0);
        }
        let p2 = lookup("power:2").unwrap();
        let lhs = identity_lhs(&p2, &iv(1.0, 2.0), &order(1.0), &cfg).unwrap();
        assert_abs_diff_eq!(lhs.value, 0.0, epsilon = 1e-12);
        let p1 = lookup("power:1").unwrap();
        let rhs = identity_rhs(&p1, &iv(0.0, 1.0), &order(1.0), &cfg).unwrap();
        assert_abs_diff_eq!(rhs.value, 0.0, epsilon = 1e-15);

        let e = lookup("exp").unwrap();
        let o = order(0.5);
        let lhs = identity_lhs(&e, &iv(0.0, 1.0), &o, &cfg).unwrap();
        let rhs = identity_rhs(&e, &iv(0.0, 1.0), &o, &cfg).unwrap();
        assert!((lhs.value - rhs.value).abs() < 1e-8, "{lhs:?} vs {rhs:?}");
    }

    #[test]
    fn identity_rhs_cubic_matches_direct_quadrature() {
        // oracle: (δ−γ)/2 ∫(1/3 − w/2)[3·low² − 3·high²] dw by plain quadrature
        let cfg = QuadConfig::default();
        let (g, d) = (1.0, 2.0);
        let direct = integrate(
            |w| {
                let low = 0.5 * (1.0 + w) * g + 0.5 * (1.0 - w) * d;
                let high = 0.5 * (1.0 - w) * g + 0.5 * (1.0 + w) * d;
                (1.0 / 3.0 - w / 2.0) * (3.0 * low * low - 3.0 * high * high)
            },
            0.0,
            1.0,
            &cfg,
        )
        .unwrap()
        .value
            * (d - g)
            / 2.0;
        let p3 = lookup("power:3").unwrap();
        let rhs = identity_rhs(&p3, &iv(g, d), &order(1.0), &cfg).unwrap();
        assert_abs_diff_eq!(rhs.value, direct, epsilon = 1e-13);
        // and it is the classical Simpson deviation: S − mean = 0 for cubics
        assert_abs_diff_eq!(rhs.value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bound_examples() {
        let cfg = QuadConfig::default();
        let p2 = lookup("power:2").unwrap();
        let r = evaluate_bound(
            TheoremId::T3_3,
            &p2,
            &iv(1.0, 2.0),
            &order(1.0),
            &BoundParams::default(),
            &cfg,
            DEFAULT_PASS_TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-12);
        assert_relative_eq!(r.rhs, 5.0 / 12.0, max_relative = 1e-11);
        assert!(r.pass);

        let p4 = lookup("power:4").unwrap();
        let r = evaluate_bound(
            TheoremId::T3_3,
            &p4,
            &iv(0.0, 1.0),
            &order(1.0),
            &BoundParams::default(),
            &cfg,
            DEFAULT_PASS_TOL,
        )
        .unwrap();
        assert_relative_eq!(r.lhs, 1.0 / 120.0, max_relative = 1e-9);
        assert_relative_eq!(r.rhs, 5.0 / 18.0, max_relative = 1e-11);
        assert!(r.pass);
    }

    #[test]
    fn estimation_bounds_and_displayed_forms() {
        let cfg = QuadConfig::default();
        let p2 = lookup("power:2").unwrap();
        let params = BoundParams {
            k_lo: Some(0.0),
            k_hi: Some(2.0),
            ..Default::default()
        };
        let d = evaluate_bound(
            TheoremId::T4_1D,
            &p2,
            &iv(0.0, 1.0),
            &order(1.0),
            &params,
            &cfg,
            DEFAULT_PASS_TOL,
        )
        .unwrap();
        assert_relative_eq!(d.lhs, 1.0 / 12.0, max_relative = 1e-10);
        // (K − k)·P·Z₁ with P = 1/2
        assert_relative_eq!(d.rhs, 5.0 / 36.0, max_relative = 1e-11);
        assert!(d.pass);
        let r = evaluate_bound(
            TheoremId::T4_1,
            &p2,
            &iv(0.0, 1.0),
            &order(1.0),
            &params,
            &cfg,
            DEFAULT_PASS_TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-12);
        assert!(r.pass);

        // the displayed centering breaks soundness once k + K is large
        let d = evaluate_bound(
            TheoremId::T4_1D,
            &p2,
            &iv(1.0, 2.0),
            &order(1.0),
            &BoundParams::default(),
            &cfg,
            DEFAULT_PASS_TOL,
        )
        .unwrap();
        assert_relative_eq!(d.lhs, 0.25, max_relative = 1e-10);
        assert!(!d.pass);
        let d = evaluate_bound(
            TheoremId::T4_3D,
            &p2,
            &iv(1.0, 2.0),
            &order(1.0),
            &BoundParams::default(),
            &cfg,
            DEFAULT_PASS_TOL,
        )
        .unwrap();
        assert!(!d.pass);
        let r = evaluate_bound(
            TheoremId::T4_3,
            &p2,
            &iv(1.0, 2.0),
            &order(1.0),
            &BoundParams::default(),
            &cfg,
            DEFAULT_PASS_TOL,
        )
        .unwrap();
        assert_relative_eq!(r.rhs, 2.0 * 2.0 / 81.0, max_relative = 1e-11);
        assert!(r.pass);
    }

    #[test]
    fn hypothesis_failures_are_named() {
        let cfg = QuadConfig::default();
        let concave_deriv = FunctionSpec::new("sin", f64::sin, f64::cos);
        let err = evaluate_bound(
            TheoremId::T3_3,
            &concave_deriv,
            &iv(0.1, 1.4),
            &order(1.0),
            &BoundParams::default(),
            &cfg,
            DEFAULT_PASS_TOL,
        )
        .unwrap_err();
        match err {
            Error::Precondition { hypothesis, .. } => assert!(hypothesis.contains("convex")),
            other => panic!("unexpected {other:?}"),
        }
        let p2 = lookup("power:2").unwrap();
        let bad = BoundParams {
            k_lo: Some(3.0),
            k_hi: Some(1.0),
            ..Default::default()
        };
        assert!(matches!(
            evaluate_bound(
                TheoremId::T4_1,
                &p2,
                &iv(0.0, 1.0),
                &order(1.0),
                &bad,
                &cfg,
                DEFAULT_PASS_TOL
            ),
            Err(Error::Precondition { .. })
        ));
        let narrow = BoundParams {
            k_lo: Some(0.0),
            k_hi: Some(1.0),
            ..Default::default()
        };
        assert!(evaluate_bound(
            TheoremId::T4_1,
            &p2,
            &iv(0.0, 1.0),
            &order(1.0),
            &narrow,
            &cfg,
            DEFAULT_PASS_TOL
        )
        .is_err());
        let small_l = BoundParams {
            lipschitz: Some(1.0),
            ..Default::default()
        };
        assert!(evaluate_bound(
            TheoremId::T4_3,
            &p2,
            &iv(0.0, 1.0),
            &order(1.0),
            &small_l,
            &cfg,
            DEFAULT_PASS_TOL
        )
        .is_err());
        assert!(evaluate_bound(
            TheoremId::T3_6,
            &p2,
            &iv(0.0, 1.0),
            &order(1.0),
            &BoundParams::default(),
            &cfg,
            DEFAULT_PASS_TOL
        )
        .is_err());
        let q_one = BoundParams {
            q: Some(1.0),
            ..Default::default()
        };
        assert!(evaluate_bound(
            TheoremId::T3_9,
            &p2,
            &iv(0.0, 1.0),
            &order(1.0),
            &q_one,
            &cfg,
            DEFAULT_PASS_TOL
        )
        .is_err());
        assert!(evaluate_bound(
            TheoremId::T3_7,
            &p2,
            &iv(0.0, 1.0),
            &order(1.0),
            &q_one,
            &cfg,
            DEFAULT_PASS_TOL
        )
        .is_ok());
    }

    #[test]
    fn classical_examples() {
        let cfg = QuadConfig::default();
        let r = classical_bound(&lookup("power:4").unwrap(), &iv(0.0, 1.0), &cfg, DEFAULT_PASS_TOL).unwrap();
        assert_abs_diff_eq!(r.lhs, 1.0 / 120.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs, 1.0 / 120.0, epsilon = 1e-12);
        assert!(r.pass);
        assert_eq!(r.tau, None);

        let r = classical_bound(&lookup("power:2").unwrap(), &iv(-1.0, 3.0), &cfg, DEFAULT_PASS_TOL).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-12);
        assert_eq!(r.rhs, 0.0);

        // oracle: ∫₀¹eˣ = e − 1 against (e^0 + 4e^½ + e)/6
        let e = std::f64::consts::E;
        let expected = ((1.0 + 4.0 * 0.5_f64.exp() + e) / 6.0 - (e - 1.0)).abs();
        let r = classical_bound(&lookup("exp").unwrap(), &iv(0.0, 1.0), &cfg, DEFAULT_PASS_TOL).unwrap();
        assert_relative_eq!(r.lhs, expected, max_relative = 1e-8);
        assert_relative_eq!(r.lhs, 5.793e-4, max_relative = 1e-3);
        assert_relative_eq!(r.rhs, e / 2880.0, max_relative = 1e-14);
        assert!(r.pass);

        let no_d4 = lookup("bessel_p:0.5").unwrap();
        assert!(classical_bound(&no_d4, &iv(0.5, 1.0), &cfg, DEFAULT_PASS_TOL).is_err());
    }
}
