//! Inverse inequalities: moduli bounded by weighted sums of best approximations.

use num_complex::Complex64;
use sp_approx::inverse::{self, InverseVariant, Majorant, MembershipInput};
use sp_approx::ladder::FrequencyLadder;
use sp_approx::spectrum::Spectrum;

fn main() -> sp_approx::Result<()> {
    let f = Spectrum::real((1..=40).map(|k| (k as f64, Complex64::new((k as f64).powf(-1.5), 0.0))))?;
    let ladder = FrequencyLadder::Integer;
    for variant in [InverseVariant::Classic, InverseVariant::Improved, InverseVariant::Gap] {
        let r = inverse::inverse_bound_alpha(&f, 1.0, 2.0, &ladder, 8, variant)?;
        println!(
            "{variant:?}: lhs = {:.8}, rhs = {:.8}, holds = {}, ratio vs classic = {:?}",
            r.lhs, r.rhs, r.holds, r.ratio_vs_classic
        );
    }
    for n in [8, 64, 512] {
        println!(
            "sharpness at n = {n}: {:.8} (pi = {:.8})",
            inverse::pi_alpha_sharpness_ratio(1.0, 1.0, &ladder, 1, n)?,
            std::f64::consts::PI
        );
    }

    let omega = Majorant::power(0.5);
    let ns: Vec<usize> = (2..=9).map(|j| 1 << j).collect();
    let g = Spectrum::real((1..=600).map(|k| (k as f64, Complex64::new((k as f64).powf(-1.0), 0.0))))?;
    let m = inverse::class_membership_homega(MembershipInput::Function(&g), &omega, 1.0, 2.0, &ladder, &ns)?;
    println!(
        "H^omega membership: approx bounded = {}, converse certified = {}, consistent = {}",
        m.approx.bounded, m.converse_certified, m.consistent
    );
    Ok(())
}
