//! The classical fourth-derivative Simpson bound and a user-defined function.
use conformable_simpson::corpus::{lookup, FunctionSpec};
use conformable_simpson::quadrature::QuadConfig;
use conformable_simpson::simpson::{classical_bound, Interval, DEFAULT_PASS_TOL};

fn main() -> conformable_simpson::Result<()> {
    let cfg = QuadConfig::default();
    let iv = Interval::new(0.0, 1.0)?;

    // equality holds for x⁴
    for name in ["power:4", "power:5", "exp"] {
        let r = classical_bound(&lookup(name)?, &iv, &cfg, DEFAULT_PASS_TOL)?;
        println!("{name:<8} lhs {:.6e}  rhs {:.6e}  pass {}", r.lhs, r.rhs, r.pass);
    }

    // catalog metadata can be attached to any closure
    let quartic =
        FunctionSpec::new("2x⁴ − x", |x| 2.0 * x.powi(4) - x, |x| 8.0 * x.powi(3) - 1.0).with_d4_sup(|_| 48.0);
    let r = classical_bound(&quartic, &iv, &cfg, DEFAULT_PASS_TOL)?;
    println!(
        "{:<8} lhs {:.6e}  rhs {:.6e}  pass {}",
        quartic.name(),
        r.lhs,
        r.rhs,
        r.pass
    );
    Ok(())
}
