//! Arithmetic, geometric, logarithmic and generalized logarithmic means.
use conformable_simpson::applications::{
    arithmetic_mean, exp_means_deviation, geometric_mean, log_mean, power_means_deviation, special_means,
};

fn main() -> conformable_simpson::Result<()> {
    let (g, d) = (1.0, 4.0);
    println!(
        "A = {:.12}  G = {:.12}  L = {:.12}",
        arithmetic_mean(g, d),
        geometric_mean(g, d),
        log_mean(g, d)?
    );
    for s in [-3, -2, 1, 2, 3, 5] {
        let m = special_means(g, d, s)?;
        println!("s = {s:<3} L_s = {:.12}", m.ls);
    }

    // Simpson's rule is exact on cubics, so only s ≥ 4 deviates
    for s in [1, 3, 4, 6] {
        println!(
            "|A(γ^s, δ^s)/3 + 2A^s/3 − L_s^s| at s = {s}: {:.6e}",
            power_means_deviation(g, d, s)?
        );
    }
    println!("exponential deviation: {:.6e}", exp_means_deviation(g, d)?);
    Ok(())
}
