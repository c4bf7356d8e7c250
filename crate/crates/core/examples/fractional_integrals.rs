//! Riemann–Liouville and conformable fractional integrals on both sides.
use conformable_simpson::fracint::{conformable_integral, rl_integral, FracOrder, Side};
use conformable_simpson::quadrature::QuadConfig;

fn main() -> conformable_simpson::Result<()> {
    let cfg = QuadConfig::default();
    let (a, x, b) = (1.0, 1.5, 2.0);

    for tau in [0.3, 1.0, 1.5, 2.7] {
        let order = FracOrder::new(tau)?;
        let rl_left = rl_integral(f64::exp, Side::Left, a, x, tau, &cfg)?;
        let rl_right = rl_integral(f64::exp, Side::Right, b, x, tau, &cfg)?;
        let cf_left = conformable_integral(f64::exp, Side::Left, a, x, &order, &cfg)?;
        let cf_right = conformable_integral(f64::exp, Side::Right, b, x, &order, &cfg)?;
        println!(
            "τ = {tau:<4} m = {} β = {:.2}  RL {:.12} {:.12}  conformable {:.12} {:.12}",
            order.m(),
            order.beta(),
            rl_left.value,
            rl_right.value,
            cf_left.value,
            cf_right.value
        );
    }

    // at integer orders β = 1 and the two integrals coincide
    for tau in [1.0, 2.0, 3.0] {
        let order = FracOrder::new(tau)?;
        let rl = rl_integral(f64::exp, Side::Left, a, x, tau, &cfg)?.value;
        let cf = conformable_integral(f64::exp, Side::Left, a, x, &order, &cfg)?.value;
        println!("τ = {tau}: RL − conformable = {:.2e}", rl - cf);
    }
    Ok(())
}
