//! Empirical order checks: class values divided by their predicted rates stay in a bounded band.

use sp_approx::class;
use sp_approx::psi::Profile;

fn main() -> sp_approx::Result<()> {
    let ns = [4, 8, 16, 32, 64, 128];
    for (s, p, q) in [(-2.0, 2.0, 1.0), (-4.0, 1.0, 2.0)] {
        let table = class::order_estimate_check(Profile::Pow(s), 2, 2.0, p, q, &ns, 50.0)?;
        println!("pow({s}) radial in Z^2, p = {p}, q = {q}: bounded = {}", table.bounded);
        for r in &table.rows {
            println!("  n = {:>3}  sigma/scale = {:.4}  width ratio = {:.4}", r.n, r.sigma_ratio, r.width_ratio);
        }
        if let Some(dec) = table.sigma_over_width_decreasing {
            println!("  sigma_n / D_n decreasing: {dec}");
        }
        for w in &table.warnings {
            println!("  warning: {w}");
        }
    }
    for profile in [Profile::Pow(-1.5), Profile::Exp(1.0)] {
        let d2 = class::delta2_check(&profile);
        println!("{profile:?}: Delta_2 = {} (ratios {:.3}..{:.3})", d2.holds, d2.min_ratio, d2.max_ratio);
    }
    Ok(())
}
