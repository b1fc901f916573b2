//! Brute-force oracles against the fast routines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sp_approx::class::{self, ClassSpec};
use sp_approx::oracle::{self, SearchBudget};
use sp_approx::psi::PsiSystem;
use sp_approx::spectrum;

fn main() -> sp_approx::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = oracle::random_lattice_spectrum(&mut rng, 1, 5, 0.8)?;
    for n in 0..=3 {
        let g = spectrum::greedy_select(&f, n, 1.0)?;
        let brute = oracle::oracle_nterm_exhaustive(&f, n, 1.0)?;
        println!(
            "n = {n}: greedy {:.12}, exhaustive {:.12}, optimal sets {}",
            g.value, brute.value, brute.optimal_sets
        );
    }

    let psit = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125];
    let spec = ClassSpec::new(PsiSystem::explicit(psit.to_vec(), sp_approx::psi::TailRule::Zero)?, 1.0, 2.0)?;
    let fast = class::class_sigma(&spec, 1)?;
    let search = oracle::oracle_sigma_class(&psit, 1.0, 2.0, 1, SearchBudget::new(200_000, 3, 16)?)?;
    println!(
        "sigma_1, q > p: closed form {:.6}, search {:.6} ({} evaluations)",
        fast.value, search.value, search.evaluations
    );

    let (v, err) = oracle::oracle_quadrature(|t| t.sin().powi(2), 0.0, std::f64::consts::PI, 1e-12)?;
    println!("int_0^pi sin^2 = {v:.14} (error estimate {err:.1e})");
    Ok(())
}
