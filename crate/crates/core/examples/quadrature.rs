//! Adaptive Gauss–Kronrod quadrature, plain and with an endpoint power singularity.
use conformable_simpson::quadrature::{integrate, integrate_singular, QuadConfig, SingularEnd};
use conformable_simpson::Error;

fn main() -> conformable_simpson::Result<()> {
    let cfg = QuadConfig::default();

    let r = integrate(|x: f64| x.sin() * (-x).exp(), 0.0, 10.0, &cfg)?;
    println!(
        "∫₀¹⁰ sin x e^(−x) dx = {:.15} ± {:.1e} ({} evals)",
        r.value, r.error_estimate, r.evaluations
    );

    // ∫₀¹ (x − 0)^(β−1) cos x dx, weight handled by substitution
    for beta in [0.5, 0.1, 0.001] {
        let r = integrate_singular(f64::cos, 0.0, 1.0, beta, SingularEnd::Left, &cfg)?;
        println!(
            "β = {beta:<6} ∫₀¹ x^(β−1) cos x dx = {:.15} ± {:.1e}",
            r.value, r.error_estimate
        );
    }

    // a tolerance below what the endpoint behaviour allows is reported, not hidden
    let tight = QuadConfig::new(1e-16, 1e-15, 40)?;
    match integrate(|x: f64| x.sqrt(), 0.0, 1.0, &tight) {
        Ok(r) => println!("∫₀¹ √x dx = {:.16}", r.value),
        Err(Error::DepthExhausted { estimate, error }) => {
            println!("∫₀¹ √x dx ≈ {estimate:.16} (depth exhausted, error {error:.1e})")
        }
        Err(e) => return Err(e),
    }
    Ok(())
}
