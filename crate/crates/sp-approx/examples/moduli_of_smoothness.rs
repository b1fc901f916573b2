//! Generalized moduli omega_phi and their averages over a Stieltjes weight.

use num_complex::Complex64;
use sp_approx::moduli::{self, PhiFunction, WeightMeasure};
use sp_approx::oracle;
use sp_approx::spectrum::Spectrum;

fn main() -> sp_approx::Result<()> {
    let f = Spectrum::real([
        (1.0, Complex64::new(1.0, 0.0)),
        (2.5, Complex64::new(0.0, 0.5)),
        (-4.0, Complex64::new(0.25, 0.0)),
        (7.0, Complex64::new(-0.1, 0.1)),
    ])?;
    let phis = [PhiFunction::alpha(1.0)?, PhiFunction::alpha(2.5)?, PhiFunction::steklov(2)?];
    for phi in &phis {
        for delta in [0.1, 0.5, 1.0] {
            let w = moduli::omega_phi(&f, phi, delta, 2.0)?;
            let o = oracle::oracle_modulus(&f, phi, delta, 2.0)?;
            println!("{:<10} delta = {delta:<4} omega = {w:.8}  dense grid = {o:.8}", phi.label());
        }
    }

    let phi = PhiFunction::alpha(1.0)?;
    for v in [WeightMeasure::cosine(), WeightMeasure::identity()] {
        let avg = moduli::averaged_omega(&f, &phi, std::f64::consts::PI, &v, 0.5, 2.0)?;
        let sup = moduli::omega_phi(&f, &phi, 0.5, 2.0)?;
        println!("v = {:<3} Omega = {avg:.8} <= omega = {sup:.8}", v.label());
    }
    Ok(())
}
