//! Every proposition on a few windows, including the cosh companion of the Bessel case.
use conformable_simpson::applications::{proposition_check, PropParams, PropositionId};
use conformable_simpson::quadrature::QuadConfig;
use conformable_simpson::simpson::DEFAULT_PASS_TOL;

fn main() -> conformable_simpson::Result<()> {
    let cfg = QuadConfig::default();
    for (g, d) in [(0.5, 2.0), (1.0, 5.0)] {
        let params = PropParams::new(g, d)
            .with_s(3)
            .with_q(2.0)
            .with_rho(-0.5)
            .with_base(2.0);
        for id in PropositionId::ALL {
            let outcome = proposition_check(id, &params, &cfg, DEFAULT_PASS_TOL)?;
            for r in outcome.reports() {
                let shown = r.paper_form.map(|v| format!("  displayed {v:.4e}")).unwrap_or_default();
                println!(
                    "[{g}, {d}] {:<10} lhs {:.4e}  rhs {:.4e}  {}{shown}",
                    r.theorem.label(),
                    r.lhs,
                    r.rhs,
                    if r.pass { "pass" } else { "FAIL" }
                );
            }
        }
    }
    Ok(())
}
