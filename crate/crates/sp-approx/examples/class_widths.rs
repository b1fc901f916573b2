//! Class-level quantities for F^psi_{q}: best approximation, n-term approximation and widths.

use sp_approx::class::{self, ClassSpec, Target};
use sp_approx::psi::PsiSystem;

fn main() -> sp_approx::Result<()> {
    for (p, q) in [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0)] {
        let spec = ClassSpec::new(PsiSystem::geometric_sequence(1.0, 0.5)?, p, q)?;
        println!("geometric psi, p = {p}, q = {q} ({})", spec.regime().as_str());
        for n in 1..=4 {
            let best = class::class_best_approx(&spec, Target::Level(n))?;
            let sigma = class::class_sigma(&spec, n)?;
            let width = class::class_widths(&spec, n)?;
            println!(
                "  n = {n}  E = {:.6}  sigma = {:.6} (s* = {:?})  width = {:.6}",
                best.value, sigma.value, sigma.s_star, width.value
            );
        }
    }

    let harmonic = ClassSpec::new(PsiSystem::harmonic(), 1.0, 1.0)?;
    let s = class::class_sigma(&harmonic, 1)?;
    println!("harmonic sigma_1 = {:.6}, s* = {:?}, {}", s.value, s.s_star, s.certificate);

    let hyper = ClassSpec::new(PsiSystem::hyperbolic(2), 2.0, 2.0)?;
    for n in 1..=3 {
        let step = class::kolmogorov_ladder(&hyper, n)?;
        println!("hyperbolic d_N = {:.6} for N in [{}, {}]", step.value, step.first, step.last);
    }
    Ok(())
}
