//! Convexity checks and the Hermite–Hadamard chain over the catalog.
use conformable_simpson::corpus::{catalog, check_convex, hermite_hadamard_check, Tag};
use conformable_simpson::quadrature::QuadConfig;
use conformable_simpson::simpson::Interval;

fn main() -> conformable_simpson::Result<()> {
    let cfg = QuadConfig::default();
    let iv = Interval::new(0.5, 3.0)?;
    for f in catalog() {
        if f.validate_interval(&iv).is_err() {
            continue;
        }
        let convex = check_convex(|x| f.eval(x), &iv, 65)?;
        let abs_deriv = check_convex(|x| f.deriv(x).abs(), &iv, 65)?;
        print!(
            "{:<14} convex {:<5} |f′| convex {:<5} tagged {:<5}",
            f.name(),
            convex.convex,
            abs_deriv.convex,
            f.has_tag(Tag::AbsDerivConvex)
        );
        // the chain needs f itself convex
        match hermite_hadamard_check(&f, &iv, &cfg) {
            Ok(hh) => println!(
                "  f(mid) {:.6} ≤ mean {:.6} ≤ ends {:.6}: {}",
                hh.midpoint_value, hh.mean_value, hh.endpoint_average, hh.holds
            ),
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}
