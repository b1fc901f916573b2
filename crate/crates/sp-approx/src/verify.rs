//! Oracle-backed verification suites behind `sp-approx verify`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::class::{self, ClassSpec, Convention, Target};
use crate::error::{Error, Result};
use crate::inverse::{self, InverseVariant};
use crate::jackson::{self, JacksonSetup};
use crate::ladder::FrequencyLadder;
use crate::moduli::{PhiFunction, WeightMeasure};
use crate::oracle::{self, IdentityCase, SearchBudget};
use crate::psi::{self, Profile, PsiSystem, Upto};
use crate::spectrum::{self, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Jackson,
    Inverse,
    Rearrangement,
    Nterm,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "identities" => Suite::Identities,
            "jackson" => Suite::Jackson,
            "inverse" => Suite::Inverse,
            "rearrangement" => Suite::Rearrangement,
            "nterm" => Suite::Nterm,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite '{s}'"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Jackson => "jackson",
            Suite::Inverse => "inverse",
            Suite::Rearrangement => "rearrangement",
            Suite::Nterm => "nterm",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Checks {
    suite: &'static str,
    list: Vec<Check>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.list.push(Check { suite: self.suite, name: name.into(), passed, detail: detail.into() });
    }

    /// Records an error as a failed check instead of aborting the suite.
    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        match f() {
            Ok((ok, detail)) => self.push(name, ok, detail),
            Err(e) => self.push(name, false, format!("error: {e}")),
        }
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let parts: Vec<Suite> = match suite {
        Suite::All => vec![Suite::Identities, Suite::Jackson, Suite::Inverse, Suite::Rearrangement, Suite::Nterm],
        s => vec![s],
    };
    let mut checks = Vec::new();
    for s in parts {
        let mut c = Checks { suite: s.name(), list: Vec::new() };
        match s {
            Suite::Identities => identities(&mut c, seed),
            Suite::Jackson => jackson_suite(&mut c),
            Suite::Inverse => inverse_suite(&mut c, seed),
            Suite::Rearrangement => rearrangement(&mut c),
            Suite::Nterm => nterm(&mut c, seed),
            Suite::All => unreachable!("expanded above"),
        }
        checks.extend(c.list);
    }
    SuiteReport { suite: suite.name(), seed, passed: checks.iter().all(|c| c.passed), checks }
}

/// The three families used by the identity suite.
pub fn identity_families() -> Vec<(&'static str, PsiSystem)> {
    vec![
        ("pow(-1) on Z", PsiSystem::product(vec![Profile::Pow(-1.0)]).expect("valid")),
        ("hyperbolic on Z^2", PsiSystem::hyperbolic(2)),
        ("geom(0.5) x geom(0.5) on Z^2", PsiSystem::product(vec![Profile::Geometric(0.5); 2]).expect("valid")),
    ]
}

/// `count` seeded identity cases cycling through [`identity_families`].
pub fn identity_cases(seed: u64, count: usize) -> Result<Vec<IdentityCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fams = identity_families();
    (0..count)
        .map(|i| {
            let psi = fams[i % fams.len()].1.clone();
            let d = psi.dim();
            let r = if d == 1 { 8 } else { 4 };
            let f = oracle::random_lattice_spectrum(&mut rng, d, r, 0.6)?;
            let p = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4)];
            Ok(IdentityCase { f, psi, n: rng.gen_range(1..=4), p })
        })
        .collect()
}

fn identities(c: &mut Checks, seed: u64) {
    c.run("series identities under the pinned convention (200 cases)", || {
        let cases = identity_cases(seed, 200)?;
        let pin = oracle::pin_convention(&cases, 1e-12)?;
        let (_, d, i) = pin.residuals.iter().find(|r| r.0 == Convention::PINNED).copied().expect("listed");
        Ok((
            pin.exact == vec![Convention::PINNED],
            format!("exact conventions {:?}; pinned worst residuals {d:.2e} / {i:.2e}", pin.exact),
        ))
    });
}

fn jackson_suite(c: &mut Checks) {
    c.run("I_n(s) closed form, s = 1..5, n = 1..8", || {
        let mut worst = 0.0f64;
        let mut at_n = true;
        for s in 1..=5 {
            for n in 1..=8 {
                let r = jackson::cosine_power_inf(f64::from(s), n, &FrequencyLadder::Integer)?;
                worst = worst.max((r.value - jackson::cosine_power_closed_form(f64::from(s))).abs());
                at_n &= r.k_star == n;
            }
        }
        Ok((worst < 1e-8 && at_n, format!("max deviation {worst:.2e}; attained at k = n: {at_n}")))
    });
    c.run("sharp constant for alpha = 1, p = 2, v = 1 - cos t, tau = pi", || {
        let s = JacksonSetup::new(3, PhiFunction::alpha(1.0)?, 2.0, PI, WeightMeasure::cosine())?;
        let k = jackson::jackson_constant(&s)?;
        Ok(((k - 0.5f64.sqrt()).abs() < 1e-9, format!("constant {k:.15}")))
    });
    c.run("sigma(s) = 0 for integer s", || {
        let all = (1..=6).map(|s| jackson::sigma_series(f64::from(s), 1e-12)).collect::<Result<Vec<_>>>()?;
        Ok((all.iter().all(|v| v.value == 0.0 && v.terms == 0), "s = 1..6".into()))
    });
    c.run("K(N) against quadrature, N = 1..5", || {
        let mut worst = 0.0f64;
        for n in 1..=5u32 {
            let q = oracle::oracle_quadrature(|u| u.powi(2 * n as i32) * u.sin(), 0.0, PI, 1e-12)?.0;
            worst = worst.max((jackson::even_sine_moment(n)? - q).abs());
        }
        Ok((worst < 1e-8, format!("max deviation {worst:.2e}")))
    });
    c.run("sharpness witness, v in {1 - cos t, t}, n = 1..8", || {
        let mut worst = 0.0f64;
        for n in 1..=8 {
            for (v, tau) in [(WeightMeasure::cosine(), PI), (WeightMeasure::identity(), 0.75 * PI)] {
                let s = JacksonSetup::new(n, PhiFunction::alpha(1.0)?, 2.0, tau, v)?;
                let w = jackson::jackson_sharpness_witness(&s, Complex64::new(0.7, -0.1), Complex64::new(0.3, 0.2))?;
                let cf = w.closed_form.ok_or_else(|| Error::Precondition("no closed form".into()))?;
                worst = worst.max((w.ratio - cf).abs());
            }
        }
        Ok((worst < 1e-9, format!("max |ratio - closed form| {worst:.2e}")))
    });
}

fn inverse_suite(c: &mut Checks, seed: u64) {
    c.run("inverse inequalities on 200 random ladder spectra", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1f);
        let ladders = [FrequencyLadder::Integer, FrequencyLadder::perturbed(0.3)?, FrequencyLadder::Square];
        let (mut failures, mut order) = (0usize, 0usize);
        for i in 0..200 {
            let ladder = &ladders[i % 3];
            let terms = rng.gen_range(1..10);
            let f = oracle::random_ladder_spectrum(&mut rng, ladder, 24, terms)?;
            let alpha = rng.gen_range(0.5..2.5);
            let n = rng.gen_range(1..=12);
            for v in [InverseVariant::Classic, InverseVariant::Improved, InverseVariant::Gap] {
                if v == InverseVariant::Gap && ladder.gap_bound().is_none() {
                    continue;
                }
                let r = inverse::inverse_bound_alpha(&f, alpha, 2.0, ladder, n, v)?;
                failures += usize::from(!r.holds);
                order += usize::from(r.ratio_vs_classic.is_some_and(|q| q > 1.0 + 1e-12));
            }
            let phi = PhiFunction::alpha(alpha)?;
            failures += usize::from(!inverse::inverse_bound_general(&f, &phi, PI, 2.0, ladder, n)?.holds);
        }
        Ok((failures == 0 && order == 0, format!("{failures} violations; {order} improved > classic")))
    });
    c.run("pi^alpha sharpness at n = 64", || {
        let r = inverse::pi_alpha_sharpness_ratio(1.0, 2.0, &FrequencyLadder::Integer, 1, 64)?;
        Ok((r > PI - 0.1 && r <= PI + 1e-12, format!("ratio {r:.6}")))
    });
}

fn rearrangement(c: &mut Checks) {
    c.run("hyperbolic charseq against full sort over [-64, 64]^2", || {
        let psi = PsiSystem::hyperbolic(2);
        let o = oracle::oracle_charseq(&psi, 64)?;
        let cs = psi::build_charseq(&psi, Upto::Levels(o.complete))?;
        let same = cs.eps_list() == &o.eps[..o.complete] && cs.delta_list() == &o.delta[..o.complete];
        Ok((same, format!("{} complete levels; delta_2 = {}", o.complete, cs.delta(2))))
    });
    c.run("widths coincide with eps_n for p = q, n = 1..10", || {
        let fams = [
            PsiSystem::hyperbolic(2),
            PsiSystem::product(vec![Profile::Geometric(0.5)])?,
            PsiSystem::radial(2, Profile::Pow(-2.0), 2.0)?,
        ];
        let mut ok = true;
        for psi in fams {
            let spec = ClassSpec::new(psi.clone(), 2.0, 2.0)?;
            let cs = psi::build_charseq(&psi, Upto::Levels(10))?;
            for n in 1..=10 {
                let a = class::class_best_approx(&spec, Target::Level(n))?.value;
                let b = class::kolmogorov_ladder(&spec, n)?.value;
                ok &= a == b && b == cs.eps(n);
            }
        }
        Ok((ok, "3 families".into()))
    });
}

fn nterm(c: &mut Checks, seed: u64) {
    c.run("greedy against exhaustive search, support <= 8 (500 cases)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2f);
        let mut mismatches = 0;
        for _ in 0..500 {
            let f = small_spectrum(&mut rng, 8)?;
            let p = [0.5, 1.0, 2.0, 3.0][rng.gen_range(0..4)];
            for n in 0..=f.len() {
                let g = spectrum::greedy_select(&f, n, p)?;
                let o = oracle::oracle_nterm_exhaustive(&f, n, p)?;
                mismatches += usize::from(g.value != o.value);
            }
        }
        Ok((mismatches == 0, format!("{mismatches} value mismatches")))
    });
    c.run("harmonic class sigma_1 = 1/3 and oracle lower bound", || {
        let spec = ClassSpec::new(PsiSystem::harmonic(), 1.0, 1.0)?;
        let r = class::class_sigma(&spec, 1)?;
        let harmonic: Vec<f64> = (1..=6).map(|k| 1.0 / k as f64).collect();
        let o = oracle::oracle_sigma_class(&harmonic, 1.0, 1.0, 1, SearchBudget { seed, ..SearchBudget::default() })?;
        let ok = (r.value - 1.0 / 3.0).abs() < 1e-12 && matches!(r.s_star, Some(2 | 3)) && o.value >= 0.333 - 1e-6;
        Ok((ok, format!("sigma {:.12}, s* {:?}, oracle {:.9}", r.value, r.s_star, o.value)))
    });
}

/// Random spectra on `Z` with up to `max` coefficients, including deliberate ties.
pub fn small_spectrum(rng: &mut ChaCha8Rng, max: usize) -> Result<Spectrum> {
    let len = rng.gen_range(1..=max);
    let mut ks: Vec<i64> = (-12..=12).collect();
    for i in 0..len {
        let j = rng.gen_range(i..ks.len());
        ks.swap(i, j);
    }
    let pool = [1.0, 0.5, 0.25];
    let entries = ks[..len].iter().map(|&k| {
        let mag = if rng.gen_bool(0.3) { pool[rng.gen_range(0..3)] } else { rng.gen_range(0.01..2.0) };
        (k, Complex64::from_polar(mag, rng.gen_range(0.0..std::f64::consts::TAU)))
    });
    Spectrum::lattice_1d(entries.collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in ["identities", "jackson", "inverse", "rearrangement", "nterm", "all"] {
            assert_eq!(Suite::parse(s).unwrap().name(), s);
        }
        assert!(matches!(Suite::parse("everything"), Err(Error::Parse(_))));
    }

    #[test]
    fn nterm_suite_passes() {
        let r = run_suite(Suite::Nterm, 1);
        assert!(r.passed, "{r:#?}");
    }

    #[test]
    fn rearrangement_suite_passes() {
        let r = run_suite(Suite::Rearrangement, 1);
        assert!(r.passed, "{r:#?}");
    }
}
