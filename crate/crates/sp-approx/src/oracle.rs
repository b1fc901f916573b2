//! Brute-force reference computations.
//!
//! These routines trade speed for transparency: fixed grids, full sorts,
//! exhaustive subsets and plain random search. They share no numeric kernels
//! with the modules they check. Search results are lower bounds, never
//! optimality certificates.

use std::collections::HashSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::class::{self, Convention};
use crate::error::{Error, Result};
use crate::ladder::FrequencyLadder;
use crate::moduli::PhiFunction;
use crate::psi::PsiSystem;
use crate::spectrum::{Frequency, Spectrum};

/// Grid points of [`oracle_modulus`], endpoints included.
pub const MODULUS_GRID: usize = 100_000;
/// Largest support handled by [`oracle_nterm_exhaustive`].
pub const NTERM_MAX_SUPPORT: usize = 16;

/// Correctly rounded sum of doubles (Shewchuk partials).
pub fn exact_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in xs {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }
    // Round the expansion from the top, correcting half-way cases.
    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

/// Seeds and limits of a randomized search, echoed in every report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_evaluations: u64,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_evaluations: 20_000_000, seed: 0x5eed_0001, restarts: 64 }
    }
}

impl SearchBudget {
    pub fn new(max_evaluations: u64, seed: u64, restarts: usize) -> Result<Self> {
        if max_evaluations == 0 || restarts == 0 {
            return Err(Error::domain("budget and restarts must be positive"));
        }
        Ok(SearchBudget { max_evaluations, seed, restarts })
    }
}

/// `sup_{0 <= h <= delta} (sum phi^p(lambda h)|c|^p)^{1/p}` on a fixed grid.
pub fn oracle_modulus(f: &Spectrum, phi: &PhiFunction, delta: f64, p: f64) -> Result<f64> {
    if !(delta >= 0.0 && p > 0.0 && p.is_finite()) {
        return Err(Error::domain("need delta >= 0 and finite p > 0"));
    }
    let terms: Vec<(f64, f64)> = f.scalar_entries()?.into_iter().map(|(l, c)| (l, c.norm().powf(p))).collect();
    let mut best = 0.0f64;
    for i in 0..=MODULUS_GRID {
        let h = delta * i as f64 / MODULUS_GRID as f64;
        let mut s = 0.0;
        for &(l, w) in &terms {
            s += phi.eval(l * h).powf(p) * w;
        }
        best = best.max(s);
    }
    Ok(best.powf(1.0 / p))
}

/// Outcome of [`oracle_sigma_class`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaSearch {
    /// Best objective found: a lower bound for the truncated problem.
    pub value: f64,
    /// Best equal-magnitude seed and its support size.
    pub seed_value: f64,
    pub seed_support: usize,
    pub evaluations: u64,
    pub exhausted: bool,
    pub budget: SearchBudget,
}

/// `sum` of all but the `n` largest entries of `x`.
fn drop_largest(x: &mut [f64], n: usize) -> f64 {
    if n >= x.len() {
        return 0.0;
    }
    x.sort_by(|a, b| b.total_cmp(a));
    x[n..].iter().sum()
}

/// Maximizes the `n`-term tail `sum_{k > n} (|a|^*_k)^p` over the truncated
/// ellipsoid `sum_{k <= m} |a_k / psit_k|^q <= 1`, `m = psit.len()`.
///
/// The search runs on the simplex `u_k = |a_k/psit_k|^q`: equal-magnitude
/// seeds on the first `s` coordinates, then random restarts, each improved by
/// pairwise mass transfers along the constraint.
pub fn oracle_sigma_class(psit: &[f64], p: f64, q: f64, n: usize, budget: SearchBudget) -> Result<SigmaSearch> {
    if psit.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::domain("rearranged values must be positive and finite"));
    }
    if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
        return Err(Error::domain("need finite p, q > 0"));
    }
    let m = psit.len();
    let empty = SigmaSearch { value: 0.0, seed_value: 0.0, seed_support: 0, evaluations: 0, exhausted: false, budget };
    if n >= m {
        return Ok(empty);
    }
    let w: Vec<f64> = psit.iter().map(|v| v.powf(p)).collect();
    let r = p / q;
    let mut evals = 0u64;
    let mut scratch = vec![0.0; m];
    let mut objective = |u: &[f64], evals: &mut u64| {
        *evals += 1;
        for k in 0..m {
            scratch[k] = w[k] * u[k].max(0.0).powf(r);
        }
        drop_largest(&mut scratch, n)
    };

    let mut best = 0.0f64;
    let mut best_u = vec![0.0; m];
    let (mut seed_value, mut seed_support) = (0.0, 0);
    for s in n + 1..=m {
        // |a_k| = c on k <= s, c^q sum psit_k^{-q} = 1.
        let denom: f64 = psit[..s].iter().map(|v| v.powf(-q)).sum();
        let u: Vec<f64> = (0..m).map(|k| if k < s { psit[k].powf(-q) / denom } else { 0.0 }).collect();
        let val = objective(&u, &mut evals);
        if val > seed_value {
            seed_value = val;
            seed_support = s;
        }
        if val > best {
            best = val;
            best_u = u;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut exhausted = false;
    'restarts: for restart in 0..budget.restarts {
        let mut u: Vec<f64> = if restart == 0 {
            best_u.clone()
        } else {
            let e: Vec<f64> = (0..m).map(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0f64).ln()).collect();
            let t: f64 = e.iter().sum();
            e.into_iter().map(|x| x / t).collect()
        };
        let mut cur = objective(&u, &mut evals);
        for _pass in 0..200 {
            let before = cur;
            for i in 0..m {
                for j in i + 1..m {
                    let total = u[i] + u[j];
                    if total <= 0.0 {
                        continue;
                    }
                    // Coarse scan then golden refinement of the transfer.
                    let mut eval_at = |t: f64, u: &mut Vec<f64>, evals: &mut u64| {
                        let (oi, oj) = (u[i], u[j]);
                        u[i] = t;
                        u[j] = total - t;
                        let v = objective(u, evals);
                        u[i] = oi;
                        u[j] = oj;
                        v
                    };
                    let mut bt = u[i];
                    let mut bv = cur;
                    for g in 0..=32 {
                        let t = total * g as f64 / 32.0;
                        let v = eval_at(t, &mut u, &mut evals);
                        if v > bv {
                            bv = v;
                            bt = t;
                        }
                    }
                    let (mut lo, mut hi) = ((bt - total / 32.0).max(0.0), (bt + total / 32.0).min(total));
                    for _ in 0..40 {
                        let a = hi - 0.618_033_988_749_894_8 * (hi - lo);
                        let b = lo + 0.618_033_988_749_894_8 * (hi - lo);
                        let (va, vb) = (eval_at(a, &mut u, &mut evals), eval_at(b, &mut u, &mut evals));
                        if va >= vb {
                            hi = b;
                            if va > bv {
                                bv = va;
                                bt = a;
                            }
                        } else {
                            lo = a;
                            if vb > bv {
                                bv = vb;
                                bt = b;
                            }
                        }
                    }
                    if bv > cur {
                        u[i] = bt;
                        u[j] = total - bt;
                        cur = bv;
                    }
                    if evals >= budget.max_evaluations {
                        exhausted = true;
                        best = best.max(cur);
                        break 'restarts;
                    }
                }
            }
            if cur <= before * (1.0 + 1e-13) {
                break;
            }
        }
        best = best.max(cur);
    }
    Ok(SigmaSearch { value: best, seed_value, seed_support, evaluations: evals, exhausted, budget })
}

/// Outcome of [`oracle_nterm_exhaustive`].
#[derive(Clone, Debug, PartialEq)]
pub struct NtermOptimum {
    pub best_set: Vec<Frequency>,
    pub value: f64,
    /// Number of `n`-subsets attaining `value`.
    pub optimal_sets: usize,
}

/// `min over |Gamma| = n of (sum_{k not in Gamma} |c_k|^p)^{1/p}` by enumerating all subsets.
pub fn oracle_nterm_exhaustive(f: &Spectrum, n: usize, p: f64) -> Result<NtermOptimum> {
    if !(p > 0.0) {
        return Err(Error::domain("p must be positive"));
    }
    let entries = f.entries();
    let len = entries.len();
    if len > NTERM_MAX_SUPPORT {
        return Err(Error::Budget(format!("support {len} exceeds the exhaustive limit {NTERM_MAX_SUPPORT}")));
    }
    let n = n.min(len);
    let pow: Vec<f64> =
        entries.iter().map(|(_, c)| if p.is_infinite() { c.norm() } else { c.norm().powf(p) }).collect();
    let mut best: Option<(f64, u32)> = None;
    let mut count = 0;
    for mask in 0u32..(1u32 << len) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let rest = (0..len).filter(|i| mask & (1 << i) == 0).map(|i| pow[i]);
        let tail = if p.is_infinite() { rest.fold(0.0, f64::max) } else { exact_sum(rest) };
        match best {
            Some((b, _)) if tail > b => {}
            Some((b, _)) if tail == b => count += 1,
            _ => {
                best = Some((tail, mask));
                count = 1;
            }
        }
    }
    let (tail, mask) = best.expect("at least the empty subset");
    let best_set = (0..len).filter(|i| mask & (1 << i) != 0).map(|i| entries[i].0.clone()).collect();
    let value = if p.is_infinite() { tail } else { tail.powf(1.0 / p) };
    Ok(NtermOptimum { best_set, value, optimal_sets: count })
}

/// `int_a^b g` by adaptive Simpson with Richardson correction.
pub fn oracle_quadrature(g: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        evals: &mut u64,
    ) -> Result<(f64, f64)> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (g(lm), g(rm));
        *evals += 2;
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let diff = left + right - whole;
        if diff.abs() <= 15.0 * tol || depth == 0 || m <= a || m >= b {
            if depth == 0 && diff.abs() > 15.0 * tol {
                return Err(Error::Quadrature(format!("Simpson depth exhausted on [{a}, {b}]")));
            }
            return Ok((left + right + diff / 15.0, diff.abs() / 15.0));
        }
        if *evals > 50_000_000 {
            return Err(Error::Quadrature("Simpson evaluation budget exhausted".into()));
        }
        let l = rec(g, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, evals)?;
        let r = rec(g, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, evals)?;
        Ok((l.0 + r.0, l.1 + r.1))
    }
    if !(tol > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("need finite limits and tol > 0"));
    }
    if a == b {
        return Ok((0.0, 0.0));
    }
    // Split into fixed panels first so that narrow features are not missed.
    let panels = 16;
    let mut evals = 0u64;
    let (mut value, mut err) = (0.0, 0.0);
    for i in 0..panels {
        let lo = a + (b - a) * i as f64 / panels as f64;
        let hi = a + (b - a) * (i + 1) as f64 / panels as f64;
        let (fa, fm, fb) = (g(lo), g(0.5 * (lo + hi)), g(hi));
        let whole = simpson(fa, fm, fb, lo, hi);
        let (v, e) = rec(&g, lo, hi, fa, fm, fb, whole, tol / panels as f64, 48, &mut evals)?;
        value += v;
        err += e;
    }
    if !value.is_finite() {
        return Err(Error::Quadrature("integrand is not finite".into()));
    }
    Ok((value, err))
}

/// Levels of `|psi|` over the box `[-r, r]^d`, by full sort.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCharSeq {
    pub eps: Vec<f64>,
    /// Cumulative counts `delta_j`.
    pub delta: Vec<usize>,
    /// Leading levels that are exact for the whole lattice: their value
    /// exceeds every `|psi|` outside the box.
    pub complete: usize,
}

pub fn oracle_charseq(psi: &PsiSystem, r: i64) -> Result<OracleCharSeq> {
    if r < 0 {
        return Err(Error::domain("box radius must be nonnegative"));
    }
    let d = psi.dim();
    let side = (2 * r + 1) as u128;
    if side.pow(d as u32) > 50_000_000 {
        return Err(Error::Budget("box too large for a full sort".into()));
    }
    let mut vals: Vec<f64> = Vec::new();
    let mut k = vec![-r; d];
    loop {
        let v = psi.magnitude(&k);
        if v > 0.0 {
            vals.push(v);
        }
        // Odometer step.
        let mut i = 0;
        while i < d {
            if k[i] < r {
                k[i] += 1;
                break;
            }
            k[i] = -r;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    vals.sort_by(|a, b| b.total_cmp(a));
    let mut eps: Vec<f64> = Vec::new();
    let mut delta: Vec<usize> = Vec::new();
    for (i, v) in vals.iter().enumerate() {
        if eps.last() != Some(v) {
            eps.push(*v);
            delta.push(i);
        }
        *delta.last_mut().expect("pushed") = i + 1;
    }
    let outside = psi.sup_outside_box(r);
    let complete = eps.iter().take_while(|&&e| e > outside).count();
    Ok(OracleCharSeq { eps, delta, complete })
}

/// Residuals of both series identities under every offset convention.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionPinning {
    /// `(convention, worst direct residual, worst inverse residual)`.
    pub residuals: Vec<(Convention, f64, f64)>,
    /// Conventions exact for both identities on every case.
    pub exact: Vec<Convention>,
    pub cases: usize,
    pub tolerance: f64,
}

/// A test case for the identity suite.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub f: Spectrum,
    pub psi: PsiSystem,
    pub n: usize,
    pub p: f64,
}

/// Runs every convention in `{-1, 0, 1}^2` on every case; residuals are
/// relative to `max(1, |lhs|)`.
pub fn pin_convention(cases: &[IdentityCase], tolerance: f64) -> Result<ConventionPinning> {
    let mut residuals = Vec::new();
    let mut exact = Vec::new();
    for conv in Convention::all() {
        let (mut wd, mut wi) = (0.0f64, 0.0f64);
        for c in cases {
            let d = class::direct_identity_check(&c.f, &c.psi, c.n, c.p, conv)?;
            let i = class::inverse_series_check(&c.f, &c.psi, c.n, c.p, conv)?;
            wd = wd.max(d.residual / d.lhs.abs().max(1.0));
            wi = wi.max(i.residual / i.lhs.abs().max(1.0));
        }
        if wd < tolerance && wi < tolerance {
            exact.push(conv);
        }
        residuals.push((conv, wd, wi));
    }
    Ok(ConventionPinning { residuals, exact, cases: cases.len(), tolerance })
}

/// A random finitely supported spectrum on `Z^d` inside `[-r, r]^d`.
///
/// Magnitudes are `rho^{|k|_1} u` or `(1 + |k|_1)^{-beta} u` with `u` uniform on
/// `[0.5, 1]`, phases uniform; roughly `fill` of the box is occupied.
pub fn random_lattice_spectrum(rng: &mut ChaCha8Rng, d: usize, r: i64, fill: f64) -> Result<Spectrum> {
    let geometric = rng.gen_bool(0.5);
    let rho: f64 = rng.gen_range(0.3..0.95);
    let beta = rng.gen_range(0.5..3.0);
    let mut entries = Vec::new();
    let mut k = vec![-r; d];
    loop {
        if rng.gen_bool(fill) {
            let l1: i64 = k.iter().map(|x| x.abs()).sum();
            let env = if geometric { rho.powi(l1 as i32) } else { (1.0 + l1 as f64).powf(-beta) };
            let mag = env * rng.gen_range(0.5..=1.0);
            let ph = rng.gen_range(0.0..std::f64::consts::TAU);
            entries.push((k.clone(), Complex64::from_polar(mag, ph)));
        }
        let mut i = 0;
        while i < d {
            if k[i] < r {
                k[i] += 1;
                break;
            }
            k[i] = -r;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    if entries.is_empty() {
        entries.push((vec![0; d], Complex64::new(1.0, 0.0)));
    }
    Spectrum::lattice(d, entries)
}

/// A random spectrum on `{0, +-lambda_1, ..., +-lambda_top}` with `terms` distinct frequencies.
pub fn random_ladder_spectrum(
    rng: &mut ChaCha8Rng,
    ladder: &FrequencyLadder,
    top: usize,
    terms: usize,
) -> Result<Spectrum> {
    let rho: f64 = rng.gen_range(0.5..0.98);
    let mut used = HashSet::new();
    let mut entries = Vec::new();
    let slots = 2 * top + 1;
    while entries.len() < terms.min(slots) {
        let slot = rng.gen_range(0..slots);
        if !used.insert(slot) {
            continue;
        }
        let k = slot.div_ceil(2);
        let l = ladder.lambda(k)?;
        let lam = if slot % 2 == 1 { -l } else { l };
        let mag = rho.powi(k as i32) * rng.gen_range(0.5..=1.0);
        entries.push((lam, Complex64::from_polar(mag, rng.gen_range(0.0..std::f64::consts::TAU))));
    }
    Spectrum::real(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{class_sigma, ClassSpec};
    use crate::psi::{build_charseq, Profile, Upto};
    use std::f64::consts::PI;

    #[test]
    fn exact_sum_cases() {
        assert_eq!(exact_sum([1e100, 1.0, -1e100]), 1.0);
        assert_eq!(exact_sum([0.1; 10]), 1.0);
        assert_eq!(exact_sum([]), 0.0);
    }

    #[test]
    fn modulus_examples() {
        let phi = PhiFunction::alpha(2.0).unwrap();
        let c = Spectrum::real([(0.0, Complex64::new(2.0, 0.0))]).unwrap();
        assert_eq!(oracle_modulus(&c, &phi, 0.5, 2.0).unwrap(), 0.0);
        let eps = 0.3;
        let f = Spectrum::real([
            (0.0, Complex64::new(1.0, 0.0)),
            (-3.0, Complex64::new(eps, 0.0)),
            (3.0, Complex64::new(eps, 0.0)),
        ])
        .unwrap();
        let phi1 = PhiFunction::alpha(1.0).unwrap();
        let delta = 0.5;
        let want = 2f64.powf(0.5) * eps * phi1.eval(3.0 * delta);
        assert!((oracle_modulus(&f, &phi1, delta, 2.0).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn sigma_examples() {
        let harmonic: Vec<f64> = (1..=6).map(|k| 1.0 / k as f64).collect();
        let r = oracle_sigma_class(&harmonic, 1.0, 1.0, 1, SearchBudget::default()).unwrap();
        assert!(r.value >= 0.33 && r.value <= 1.0 / 3.0 + 1e-12, "{r:?}");
        assert!((r.seed_value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(oracle_sigma_class(&harmonic, 1.0, 1.0, 6, SearchBudget::default()).unwrap().value, 0.0);
    }

    #[test]
    fn sigma_reproducible() {
        let g: Vec<f64> = (0..8).map(|k| 0.5f64.powi(k)).collect();
        let b = SearchBudget::new(200_000, 7, 8).unwrap();
        let a = oracle_sigma_class(&g, 1.0, 2.0, 1, b).unwrap();
        let c = oracle_sigma_class(&g, 1.0, 2.0, 1, b).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn sigma_pins_feasible_rule() {
        let psi = PsiSystem::geometric_sequence(1.0, 0.5).unwrap();
        let spec = ClassSpec::new(psi, 1.0, 2.0).unwrap();
        let formula = class_sigma(&spec, 1).unwrap().value;
        let g: Vec<f64> = (0..8).map(|k| 0.5f64.powi(k)).collect();
        let r = oracle_sigma_class(&g, 1.0, 2.0, 1, SearchBudget::default()).unwrap();
        assert!((r.value - formula).abs() <= 0.02 * formula, "oracle {} vs formula {formula}", r.value);
    }

    #[test]
    fn nterm_examples() {
        let f = Spectrum::lattice_1d([(1, Complex64::new(1.0, 0.0)), (-1, Complex64::new(1.0, 0.0))]).unwrap();
        let r = oracle_nterm_exhaustive(&f, 1, 2.0).unwrap();
        assert_eq!((r.value, r.optimal_sets), (1.0, 2));
        let g = Spectrum::lattice_1d([(0, Complex64::new(3.0, 4.0)), (2, Complex64::new(0.0, 1.0))]).unwrap();
        assert_eq!(oracle_nterm_exhaustive(&g, 0, 1.0).unwrap().value, 6.0);
    }

    #[test]
    fn quadrature_examples() {
        assert!((oracle_quadrature(f64::sin, 0.0, PI, 1e-13).unwrap().0 - 2.0).abs() < 1e-12);
        assert!((oracle_quadrature(|u| u * u * u.sin(), 0.0, PI, 1e-12).unwrap().0 - (PI * PI - 4.0)).abs() < 1e-10);
        assert!((oracle_quadrature(|t| (1.0 - t.cos()) * t.sin(), 0.0, PI, 1e-13).unwrap().0 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn charseq_examples() {
        let hyp = PsiSystem::product(vec![Profile::Pow(-1.0), Profile::Pow(-1.0)]).unwrap();
        let o = oracle_charseq(&hyp, 64).unwrap();
        let cs = build_charseq(&hyp, Upto::Levels(o.complete)).unwrap();
        assert_eq!(cs.eps_list(), &o.eps[..o.complete]);
        assert_eq!(cs.delta_list(), &o.delta[..o.complete]);
        let one = oracle_charseq(&hyp, 0).unwrap();
        assert_eq!((one.eps.len(), one.delta.clone()), (1, vec![1]));
    }

    #[test]
    fn sign_symmetry_counts() {
        // Incommensurable axis ratios: each level is one sign orbit of size 2^{d - #zeros}.
        let psi = PsiSystem::product(vec![Profile::Geometric(0.5), Profile::Geometric(0.3)]).unwrap();
        let o = oracle_charseq(&psi, 12).unwrap();
        let mut want: Vec<(f64, usize)> = (0..=12i32)
            .flat_map(|a| {
                (0..=12i32).map(move |b| (0.5f64.powi(a) * 0.3f64.powi(b), 1usize << ((a > 0) as u32 + (b > 0) as u32)))
            })
            .collect();
        want.sort_by(|x, y| y.0.total_cmp(&x.0));
        let mut prev = 0;
        for (j, &(eps, size)) in want.iter().enumerate().take(o.complete) {
            assert_eq!(o.delta[j] - prev, size, "level {j}");
            assert!((o.eps[j] - eps).abs() <= 1e-15 * eps);
            prev = o.delta[j];
        }
        assert!(o.complete > 20);
    }

    #[test]
    fn convention_gate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let psi = PsiSystem::product(vec![Profile::Pow(-1.0)]).unwrap();
        let cases: Vec<IdentityCase> = (0..10)
            .map(|i| IdentityCase {
                f: random_lattice_spectrum(&mut rng, 1, 6, 0.7).unwrap(),
                psi: psi.clone(),
                n: 1 + i % 3,
                p: 1.5,
            })
            .collect();
        let pin = pin_convention(&cases, 1e-12).unwrap();
        assert_eq!(pin.exact, vec![Convention::PINNED]);
    }
}
