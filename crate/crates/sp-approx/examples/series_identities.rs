//! Direct and inverse series identities under each index convention.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sp_approx::class::{self, Convention};
use sp_approx::oracle;
use sp_approx::psi::{Profile, PsiSystem};

fn main() -> sp_approx::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let psi = PsiSystem::product(vec![Profile::Pow(-1.0), Profile::Pow(-2.0)])?;
    let f = oracle::random_lattice_spectrum(&mut rng, 2, 6, 0.6)?;
    for conv in Convention::all() {
        let d = class::direct_identity_check(&f, &psi, 2, 2.0, conv)?;
        let i = class::inverse_series_check(&f, &psi, 2, 2.0, conv)?;
        println!(
            "eps offset {:+}, E offset {:+}: direct residual {:.2e}, inverse residual {:.2e}",
            conv.eps_offset, conv.e_offset, d.residual, i.residual
        );
    }
    println!("pinned: {:?}", Convention::PINNED);
    Ok(())
}
