//! Level sets of psi-systems: the distinct values eps_n and the cumulative counts delta_n.

use sp_approx::oracle;
use sp_approx::psi::{self, Profile, PsiSystem, Upto};

fn main() -> sp_approx::Result<()> {
    let systems = [
        ("hyperbolic cross", PsiSystem::hyperbolic(2)),
        ("product pow(-1) x pow(-2)", PsiSystem::product(vec![Profile::Pow(-1.0), Profile::Pow(-2.0)])?),
        ("radial l_2, pow(-1)", PsiSystem::radial(2, Profile::Pow(-1.0), 2.0)?),
        (
            "product geom(1/2) x geom(1/3)",
            PsiSystem::product(vec![Profile::Geometric(0.5), Profile::Geometric(1.0 / 3.0)])?,
        ),
    ];
    for (name, psi) in &systems {
        let cs = psi::build_charseq(psi, Upto::Levels(6))?;
        println!("{name}");
        for n in 1..=6 {
            println!("  n = {n}  eps = {:.6}  delta = {}", cs.eps(n), cs.delta(n));
        }
    }

    let hyper = PsiSystem::hyperbolic(2);
    let brute = oracle::oracle_charseq(&hyper, 64)?;
    let c = brute.complete;
    let fast = psi::build_charseq(&hyper, Upto::Levels(c))?;
    println!(
        "hyperbolic cross vs full sort on [-64, 64]^2: {c} complete levels, identical = {}",
        fast.eps_list() == &brute.eps[..c] && fast.delta_list() == &brute.delta[..c]
    );
    Ok(())
}
