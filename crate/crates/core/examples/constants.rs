//! Kernel constants Z₁…Z₅, the sign change w* and the kernel itself.
use conformable_simpson::fracint::FracOrder;
use conformable_simpson::quadrature::QuadConfig;
use conformable_simpson::simpson::{constants, kernel_h};

fn main() -> conformable_simpson::Result<()> {
    let cfg = QuadConfig::default();
    for tau in [0.3, 0.5, 1.0, 1.5, 2.0, 2.7] {
        let c = constants(&FracOrder::new(tau)?, Some(2.0), &cfg)?;
        println!(
            "τ = {tau:<4} w* = {:.6}  Z1 = {:.10}  Z2(p=2) = {:.10}  Z3 = {:.10}  Z4 = {:.10}  Z5 = {:.10}",
            c.w_star,
            c.z1,
            c.z2.unwrap_or(f64::NAN),
            c.z3,
            c.z4,
            c.z5
        );
    }

    // at τ = 1 the kernel is w/2 − 1/6, so Z1 = 5/36
    let one = FracOrder::new(1.0)?;
    let c = constants(&one, None, &cfg)?;
    println!("τ = 1: Z1 − 5/36 = {:.1e}", c.z1 - 5.0 / 36.0);
    for w in [0.0, 1.0 / 3.0, 1.0] {
        println!("h({w:.4}) = {:+.6}", kernel_h(w, &one)?);
    }
    Ok(())
}
