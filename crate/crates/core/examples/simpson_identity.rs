//! Both sides of the fractional Simpson identity for a few functions and orders.
use conformable_simpson::corpus::lookup;
use conformable_simpson::fracint::FracOrder;
use conformable_simpson::quadrature::QuadConfig;
use conformable_simpson::simpson::{identity_lhs, identity_rhs, simpson_value, Interval};

fn main() -> conformable_simpson::Result<()> {
    let cfg = QuadConfig::default();
    let iv = Interval::new(1.0, 3.0)?;
    for name in ["power:4", "exp", "cosh"] {
        let f = lookup(name)?;
        println!("{name}: S = {:.12}", simpson_value(&f, &iv)?);
        for tau in [0.3, 1.0, 1.5, 2.7] {
            let order = FracOrder::new(tau)?;
            let lhs = identity_lhs(&f, &iv, &order, &cfg)?;
            let rhs = identity_rhs(&f, &iv, &order, &cfg)?;
            println!(
                "  τ = {tau:<4} lhs {:+.12}  rhs {:+.12}  residual {:.1e}",
                lhs.value,
                rhs.value,
                (lhs.value - rhs.value).abs()
            );
        }
    }
    Ok(())
}
