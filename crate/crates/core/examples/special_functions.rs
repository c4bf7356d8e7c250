//! Gamma, beta, the incomplete beta kernel, the generalized Bessel function
//! and the q-digamma function.
use conformable_simpson::specfun::{bessel_p, beta_fn, gamma_fn, incomplete_beta, q_digamma, SeriesControl};

fn main() -> conformable_simpson::Result<()> {
    let ctrl = SeriesControl::default();

    println!("Γ(0.5)        = {:.15}", gamma_fn(0.5)?);
    println!("Γ(4.7)        = {:.15}", gamma_fn(4.7)?);
    println!("B(2, 0.5)     = {:.15}", beta_fn(2.0, 0.5)?);
    // β_w(a, b) with integer a, as used by the Simpson kernel
    for w in [0.0, 0.25, 0.5, 1.0] {
        println!("β_{w}(2, 0.5) = {:.15}", incomplete_beta(w, 2, 0.5)?);
    }

    // ρ = −1/2 collapses the Bessel series to cosh
    let x = 1.3;
    println!(
        "P(−0.5, {x})   = {:.15}  cosh = {:.15}",
        bessel_p(-0.5, x, false, &ctrl)?,
        x.cosh()
    );
    println!("P′(0.5, {x})   = {:.15}", bessel_p(0.5, x, true, &ctrl)?);

    println!("Ψ_2(1.5)      = {:.15}", q_digamma(2.0, 1.5, false, &ctrl)?);
    println!("Ψ′_2(1.5)     = {:.15}", q_digamma(2.0, 1.5, true, &ctrl)?);
    Ok(())
}
