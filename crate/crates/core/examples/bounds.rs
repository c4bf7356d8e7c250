//! Every fractional bound for one function, with hypotheses taken from the catalog.
use conformable_simpson::corpus::{lookup, FunctionSpec};
use conformable_simpson::fracint::FracOrder;
use conformable_simpson::quadrature::QuadConfig;
use conformable_simpson::simpson::{evaluate_bound, BoundParams, Interval, TheoremId, DEFAULT_PASS_TOL};
use conformable_simpson::Error;

fn main() -> conformable_simpson::Result<()> {
    let cfg = QuadConfig::default();
    let iv = Interval::new(0.5, 2.0)?;
    let f = lookup("exp")?;
    let params = BoundParams {
        q: Some(2.0),
        ..Default::default()
    };
    let theorems = [
        TheoremId::T3_3,
        TheoremId::T3_6,
        TheoremId::T3_7,
        TheoremId::T3_9,
        TheoremId::T3_9R,
        TheoremId::T4_1,
        TheoremId::T4_1D,
        TheoremId::T4_3,
        TheoremId::T4_3D,
    ];
    for tau in [0.5, 1.5] {
        let order = FracOrder::new(tau)?;
        for id in theorems {
            match evaluate_bound(id, &f, &iv, &order, &params, &cfg, DEFAULT_PASS_TOL) {
                Ok(r) => println!(
                    "τ = {tau} {:<7} lhs {:.3e}  rhs {:.3e}  slack {:+.3e}  {}",
                    id.label(),
                    r.lhs,
                    r.rhs,
                    r.slack,
                    if r.pass { "pass" } else { "FAIL" }
                ),
                Err(e @ Error::Precondition { .. }) => println!("τ = {tau} {:<7} skipped: {e}", id.label()),
                Err(e) => return Err(e),
            }
        }
    }

    // a concave |f′| fails the convexity hypothesis and is rejected up front
    let g = FunctionSpec::new("x^1.5", |x: f64| x.powf(1.5), |x: f64| 1.5 * x.sqrt()).with_domain_min(0.0);
    let order = FracOrder::new(0.5)?;
    if let Err(e) = evaluate_bound(TheoremId::T3_3, &g, &iv, &order, &params, &cfg, DEFAULT_PASS_TOL) {
        println!("{}: {e}", g.name());
    }
    Ok(())
}
