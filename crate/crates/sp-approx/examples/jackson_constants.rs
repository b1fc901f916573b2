//! Jackson constants: the infimum I_{n,phi,p}, closed forms, and a sharpness witness.

use std::f64::consts::PI;

use num_complex::Complex64;
use sp_approx::jackson::{self, JacksonSetup};
use sp_approx::ladder::FrequencyLadder;
use sp_approx::moduli::{PhiFunction, WeightMeasure};

fn main() -> sp_approx::Result<()> {
    for (alpha, p) in [(1.0, 2.0), (2.0, 1.0), (1.0, 4.0)] {
        let setup = JacksonSetup::new(5, PhiFunction::alpha(alpha)?, p, PI, WeightMeasure::cosine())?;
        let i = jackson::jackson_i(&setup)?;
        println!(
            "alpha = {alpha}, p = {p}: I = {:.10} at k* = {}, constant = {:.10}, closed form = {:?}",
            i.value,
            i.k_star,
            jackson::jackson_constant(&setup)?,
            jackson::closed_form_constant(&setup)
        );
    }

    let t = JacksonSetup::new(4, PhiFunction::alpha(1.0)?, 2.0, 0.75 * PI, WeightMeasure::identity())?;
    println!(
        "v = t, tau = 3pi/4: constant = {:.10}, closed form = {:?}",
        jackson::jackson_constant(&t)?,
        jackson::closed_form_constant(&t)
    );

    let perturbed = t.clone().with_ladder(FrequencyLadder::perturbed(0.3)?);
    let i = jackson::jackson_i(&perturbed)?;
    println!("perturbed ladder: I = {:.10} ({})", i.value, i.certificate);

    let setup = JacksonSetup::new(3, PhiFunction::alpha(1.0)?, 2.0, PI, WeightMeasure::cosine())?;
    let w = jackson::jackson_sharpness_witness(&setup, Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0))?;
    println!("sharpness witness ratio = {:.10}, target = {:.10}", w.ratio, w.target);

    for c in jackson::chernykh_constants(1.0, 2.0, 1) {
        println!("  {:<34} {:.10}  applies = {}", c.name, c.value, c.applies);
    }
    for n in [1, 2, 3, 8] {
        println!("K({n}) = {:.15}", jackson::kappa(n)?);
    }
    let s = jackson::sigma_series(1.5, 1e-12)?;
    println!("sigma(1.5) = {:.12} ({} terms)", s.value, s.terms);
    Ok(())
}
