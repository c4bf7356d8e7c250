//! Built-in catalog of test functions with exact derivatives and
//! per-interval hypothesis metadata, plus convexity utilities.
//!
//! New functions are added by building a [`FunctionSpec`] with
//! [`FunctionSpec::new`] and the `with_*` setters; nothing else in the crate
//! needs to know about them. Catalog names double as the CLI `--func`
//! vocabulary: `power:<s>`, `exp`, `cosh`, `bessel_p:<ρ>`, `qdigamma:<q>`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};
use crate::simpson::Interval;
use crate::specfun::{bessel_p, bessel_p_second, q_digamma_derivative, SeriesControl};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type IntervalFn<T> = Arc<dyn Fn(&Interval) -> T + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    AbsDerivConvex,
    AbsDerivQConvexForAllQGe1,
    LipschitzDeriv,
    BoundedDeriv,
}

/// A named scalar function with its first derivative and hypothesis metadata.
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    eval: ScalarFn,
    deriv: ScalarFn,
    domain_min: Option<f64>,
    d4_sup_on: Option<IntervalFn<f64>>,
    bounded_deriv: Option<IntervalFn<(f64, f64)>>,
    lipschitz_deriv: Option<IntervalFn<f64>>,
    tags: BTreeSet<Tag>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("domain_min", &self.domain_min)
            .field("tags", &self.tags)
            .finish_non_exhaustive()
    }
}

impl FunctionSpec {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FunctionSpec {
            name: name.into(),
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            domain_min: None,
            d4_sup_on: None,
            bounded_deriv: None,
            lipschitz_deriv: None,
            tags: BTreeSet::new(),
        }
    }

    /// Restricts the domain to x > `min`.
    pub fn with_domain_min(mut self, min: f64) -> Self {
        self.domain_min = Some(min);
        self
    }

    pub fn with_d4_sup(mut self, f: impl Fn(&Interval) -> f64 + Send + Sync + 'static) -> Self {
        self.d4_sup_on = Some(Arc::new(f));
        self
    }

    pub fn with_bounded_deriv(mut self, f: impl Fn(&Interval) -> (f64, f64) + Send + Sync + 'static) -> Self {
        self.bounded_deriv = Some(Arc::new(f));
        self.tags.insert(Tag::BoundedDeriv);
        self
    }

    pub fn with_lipschitz_deriv(mut self, f: impl Fn(&Interval) -> f64 + Send + Sync + 'static) -> Self {
        self.lipschitz_deriv = Some(Arc::new(f));
        self.tags.insert(Tag::LipschitzDeriv);
        self
    }

    pub fn with_tag(mut self, tag: Tag) -> Self {
        self.tags.insert(tag);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        (self.deriv)(x)
    }

    pub fn domain_min(&self) -> Option<f64> {
        self.domain_min
    }

    pub fn tags(&self) -> &BTreeSet<Tag> {
        &self.tags
    }

    pub fn has_tag(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }

    /// ‖f⁗‖_∞ on the interval, when known.
    pub fn d4_sup_on(&self, iv: &Interval) -> Option<f64> {
        self.d4_sup_on.as_ref().map(|f| f(iv))
    }

    /// (k, K) with k ≤ f′ ≤ K on the interval, when known.
    pub fn bounded_deriv(&self, iv: &Interval) -> Option<(f64, f64)> {
        self.bounded_deriv.as_ref().map(|f| f(iv))
    }

    /// Lipschitz constant of f′ on the interval, when known.
    pub fn lipschitz_deriv(&self, iv: &Interval) -> Option<f64> {
        self.lipschitz_deriv.as_ref().map(|f| f(iv))
    }

    /// Rejects intervals that leave the function's domain.
    pub fn validate_interval(&self, iv: &Interval) -> Result<()> {
        if let Some(min) = self.domain_min {
            if iv.gamma() <= min {
                return Err(Error::domain(
                    "interval",
                    format!(
                        "`{}` is defined only for x > {min}, interval starts at {}",
                        self.name,
                        iv.gamma()
                    ),
                ));
            }
        }
        Ok(())
    }
}

fn series() -> SeriesControl {
    SeriesControl::default()
}

fn sup_abs_on(iv: &Interval) -> f64 {
    iv.gamma().abs().max(iv.delta().abs())
}

fn power(s: u32) -> FunctionSpec {
    let si = s as i32;
    let sf = f64::from(s);
    let deriv = move |x: f64| if s == 0 { 0.0 } else { sf * x.powi(si - 1) };
    let second = move |x: f64| {
        if s < 2 {
            0.0
        } else {
            sf * (sf - 1.0) * x.powi(si - 2)
        }
    };
    FunctionSpec::new(format!("power:{s}"), move |x: f64| x.powi(si), deriv)
        .with_tag(Tag::AbsDerivConvex)
        .with_tag(Tag::AbsDerivQConvexForAllQGe1)
        .with_bounded_deriv(move |iv| {
            let mut pts = vec![deriv(iv.gamma()), deriv(iv.delta())];
            if iv.gamma() < 0.0 && iv.delta() > 0.0 {
                pts.push(deriv(0.0));
            }
            let lo = pts.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = pts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        })
        // |f″| = s(s−1)|x|^(s−2) grows with |x|
        .with_lipschitz_deriv(move |iv| second(sup_abs_on(iv)).abs())
        .with_d4_sup(move |iv| {
            if s < 4 {
                0.0
            } else {
                let falling: f64 = (0..4).map(|k| sf - f64::from(k)).product();
                falling * sup_abs_on(iv).powi(si - 4)
            }
        })
}

fn exponential() -> FunctionSpec {
    FunctionSpec::new("exp", f64::exp, f64::exp)
        .with_tag(Tag::AbsDerivConvex)
        .with_tag(Tag::AbsDerivQConvexForAllQGe1)
        .with_bounded_deriv(|iv| (iv.gamma().exp(), iv.delta().exp()))
        .with_lipschitz_deriv(|iv| iv.delta().exp())
        .with_d4_sup(|iv| iv.delta().exp())
}

fn hyperbolic_cosine() -> FunctionSpec {
    FunctionSpec::new("cosh", f64::cosh, f64::sinh)
        .with_tag(Tag::AbsDerivConvex)
        .with_tag(Tag::AbsDerivQConvexForAllQGe1)
        .with_bounded_deriv(|iv| (iv.gamma().sinh(), iv.delta().sinh()))
        .with_lipschitz_deriv(|iv| sup_abs_on(iv).cosh())
        .with_d4_sup(|iv| sup_abs_on(iv).cosh())
}

fn bessel(rho: f64, label: &str) -> FunctionSpec {
    let ctrl = series();
    let eval = move |x: f64| bessel_p(rho, x, false, &ctrl).unwrap_or(f64::NAN);
    let deriv = move |x: f64| bessel_p(rho, x, true, &ctrl).unwrap_or(f64::NAN);
    let second = move |x: f64| bessel_p_second(rho, x, &ctrl).unwrap_or(f64::NAN);
    // ℘′ρ is odd with nonnegative series coefficients, so it is increasing and
    // ℘″ρ is even and increasing in |x|
    FunctionSpec::new(format!("bessel_p:{label}"), eval, deriv)
        .with_tag(Tag::AbsDerivConvex)
        .with_tag(Tag::AbsDerivQConvexForAllQGe1)
        .with_bounded_deriv(move |iv| (deriv(iv.gamma()), deriv(iv.delta())))
        .with_lipschitz_deriv(move |iv| second(sup_abs_on(iv)))
}

fn q_digamma_fn(q: f64, label: &str) -> FunctionSpec {
    let ctrl = series();
    let nth = move |order: u32| move |x: f64| q_digamma_derivative(q, x, order, &ctrl).unwrap_or(f64::NAN);
    let deriv = nth(1);
    let second = nth(2);
    // Ψ′_q is positive, decreasing and convex on (0, ∞)
    FunctionSpec::new(format!("qdigamma:{label}"), nth(0), deriv)
        .with_domain_min(0.0)
        .with_tag(Tag::AbsDerivConvex)
        .with_tag(Tag::AbsDerivQConvexForAllQGe1)
        .with_bounded_deriv(move |iv| (deriv(iv.delta()), deriv(iv.gamma())))
        .with_lipschitz_deriv(move |iv| second(iv.gamma()).abs())
}

/// The fixed built-in catalog.
pub fn catalog() -> Vec<FunctionSpec> {
    let mut out: Vec<FunctionSpec> = (1..=5).map(power).collect();
    out.push(exponential());
    out.push(hyperbolic_cosine());
    out.push(bessel(-0.5, "-0.5"));
    out.push(bessel(0.5, "0.5"));
    out.push(bessel(1.0, "1"));
    out.push(q_digamma_fn(0.5, "0.5"));
    out.push(q_digamma_fn(2.0, "2"));
    out
}

fn parse_param(name: &str, raw: &str) -> Result<f64> {
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

/// Looks up a function by name. Parametrized families accept any valid
/// parameter, not only the catalog members.
pub fn lookup(name: &str) -> Result<FunctionSpec> {
    let (family, param) = match name.split_once(':') {
        Some((f, p)) => (f, Some(p)),
        None => (name, None),
    };
    match (family, param) {
        ("exp", None) => Ok(exponential()),
        ("cosh", None) => Ok(hyperbolic_cosine()),
        ("power", Some(p)) => {
            let s: u32 = p.parse().map_err(|_| Error::UnknownFunction(name.to_string()))?;
            if s == 0 || s > 64 {
                return Err(Error::domain("power", format!("exponent must be in 1..=64, got {s}")));
            }
            Ok(power(s))
        }
        ("bessel_p", Some(p)) => {
            let rho = parse_param(name, p)?;
            if !(rho > -1.0) {
                return Err(Error::domain("bessel_p", format!("requires ρ > −1, got {rho}")));
            }
            Ok(bessel(rho, p))
        }
        ("qdigamma", Some(p)) => {
            let q = parse_param(name, p)?;
            if !(q > 0.0) || q == 1.0 {
                return Err(Error::domain("qdigamma", format!("requires q > 0, q ≠ 1, got {q}")));
            }
            Ok(q_digamma_fn(q, p))
        }
        _ => Err(Error::UnknownFunction(name.to_string())),
    }
}

/// Outcome of a midpoint-convexity scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityCheck {
    pub convex: bool,
    /// First pair (x, y) violating g((x+y)/2) ≤ (g(x)+g(y))/2.
    pub witness: Option<(f64, f64)>,
}

/// Midpoint-convexity test over all pairs of an `n`-point uniform grid.
///
/// Midpoints of grid pairs land on the half-step grid, so g is evaluated
/// 2n−1 times rather than once per pair.
pub fn check_convex<G: Fn(f64) -> f64>(g: G, iv: &Interval, n: usize) -> Result<ConvexityCheck> {
    if n < 3 {
        return Err(Error::domain("check_convex", format!("grid size must be ≥ 3, got {n}")));
    }
    let fine = 2 * n - 1;
    let step = iv.width() / (fine - 1) as f64;
    let xs: Vec<f64> = (0..fine)
        .map(|i| {
            if i + 1 == fine {
                iv.delta()
            } else {
                iv.gamma() + step * i as f64
            }
        })
        .collect();
    let mut values = Vec::with_capacity(fine);
    for &x in &xs {
        let v = g(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { x, value: v });
        }
        values.push(v);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (gi, gj) = (values[2 * i], values[2 * j]);
            let gm = values[i + j];
            let scale = 1.0_f64.max(gi.abs()).max(gj.abs()).max(gm.abs());
            if gm > 0.5 * (gi + gj) + 1e-12 * scale {
                return Ok(ConvexityCheck {
                    convex: false,
                    witness: Some((xs[2 * i], xs[2 * j])),
                });
            }
        }
    }
    Ok(ConvexityCheck {
        convex: true,
        witness: None,
    })
}

/// The three quantities of the Hermite–Hadamard chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HermiteHadamard {
    pub midpoint_value: f64,
    pub mean_value: f64,
    pub endpoint_average: f64,
    pub holds: bool,
}

/// Checks f(mid) ≤ (1/(δ−γ))∫f ≤ (f(γ)+f(δ))/2 for a convex f.
pub fn hermite_hadamard_check(f: &FunctionSpec, iv: &Interval, cfg: &QuadConfig) -> Result<HermiteHadamard> {
    f.validate_interval(iv)?;
    let convexity = check_convex(|x| f.eval(x), iv, 101)?;
    if !convexity.convex {
        let (x, y) = convexity.witness.unwrap_or_default();
        return Err(Error::precondition(
            format!("{} convex on [{}, {}]", f.name(), iv.gamma(), iv.delta()),
            format!("midpoint convexity fails for the pair ({x}, {y})"),
        ));
    }
    let integral = integrate(|x| f.eval(x), iv.gamma(), iv.delta(), cfg)?;
    let midpoint_value = f.eval(iv.midpoint());
    let mean_value = integral.value / iv.width();
    let endpoint_average = 0.5 * (f.eval(iv.gamma()) + f.eval(iv.delta()));
    let slack = 1e-10 * 1.0_f64.max(endpoint_average.abs()) + integral.error_estimate / iv.width();
    let holds = midpoint_value <= mean_value + slack && mean_value <= endpoint_average + slack;
    Ok(HermiteHadamard {
        midpoint_value,
        mean_value,
        endpoint_average,
        holds,
    })
}
