//! Extremal quantities of the classes `L^psi_q` measured in `S^p`.
//!
//! Every quantity is a closed form in the rearrangement `psi~`:
//! best approximations and widths are single values or `l_{pq/(q-p)}` tails,
//! and the best `n`-term error is a one-parameter supremum over `s`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{log_log_slope, Compensated};
use crate::psi::{self, CharSeq, CharSeqBuilder, Enumerator, Profile, PsiSystem, TailSum};
use crate::spectrum::{Frequency, Spectrum};

/// Default tolerance for certified tail sums.
pub const TAIL_TOL: f64 = 1e-12;
/// Default number of candidate `s` values in [`class_sigma`].
pub const SIGMA_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "q<=p")]
    QLeP,
    #[serde(rename = "q>p")]
    QGtP,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::QLeP => "q<=p",
            Regime::QGtP => "q>p",
        }
    }
}

/// The class `{f : ||f^psi||_q <= 1}` measured in `S^p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassSpec {
    pub psi: PsiSystem,
    pub p: f64,
    pub q: f64,
}

impl ClassSpec {
    pub fn new(psi: PsiSystem, p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
            return Err(Error::domain(format!("need finite p, q > 0; got p = {p}, q = {q}")));
        }
        Ok(ClassSpec { psi, p, q })
    }

    pub fn regime(&self) -> Regime {
        if self.q <= self.p {
            Regime::QLeP
        } else {
            Regime::QGtP
        }
    }

    /// `pq/(q-p)`, the tail exponent of the `q > p` regime.
    pub fn tail_exponent(&self) -> f64 {
        self.p * self.q / (self.q - self.p)
    }

    /// Certified `sum |psi|^{pq/(q-p)}`; failure is a precondition error.
    fn certified_total(&self) -> Result<TailSum> {
        psi::total_power_sum(&self.psi, self.tail_exponent(), TAIL_TOL)
            .map_err(|e| Error::Precondition(format!("sum |psi|^(pq/(q-p)) is not certified finite: {e}")))
    }

    /// As [`Self::certified_total`], tightened as far as the term budget allows.
    fn fine_total(&self) -> Result<TailSum> {
        for tol in [1e-18, 1e-15] {
            if let Ok(t) = psi::total_power_sum(&self.psi, self.tail_exponent(), tol) {
                return Ok(t);
            }
        }
        self.certified_total()
    }
}

/// A class-level value with its attaining parameter and certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalReport {
    pub quantity: String,
    pub n: usize,
    pub value: f64,
    pub s_star: Option<usize>,
    pub regime: Regime,
    pub certificate: String,
}

impl ExtremalReport {
    fn new(quantity: &str, n: usize, value: f64, regime: Regime, certificate: String) -> Self {
        ExtremalReport { quantity: quantity.into(), n, value, s_star: None, regime, certificate }
    }
}

/// Which polynomials approximate: an explicit index set or the level set `g_{n-1}`.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Gamma(&'a HashSet<Vec<i64>>),
    Level(usize),
}

/// `sup_{f in class} E_gamma(f)`.
pub fn class_best_approx(spec: &ClassSpec, target: Target<'_>) -> Result<ExtremalReport> {
    let regime = spec.regime();
    match (regime, target) {
        (Regime::QLeP, Target::Gamma(gamma)) => {
            let mut stream = spec.psi.enumerate();
            loop {
                let (v, k) = stream.next_entry()?;
                if !gamma.contains(&k) {
                    return Ok(ExtremalReport::new(
                        "best",
                        gamma.len(),
                        v,
                        regime,
                        format!("largest |psi| outside gamma, at {k:?}"),
                    ));
                }
            }
        }
        (Regime::QLeP, Target::Level(n)) => {
            check_level(n)?;
            let cs = psi::build_charseq(&spec.psi, psi::Upto::Levels(n))?;
            Ok(ExtremalReport::new("best", n, cs.eps(n), regime, "eps_n".into()))
        }
        (Regime::QGtP, Target::Gamma(gamma)) => {
            let e = spec.tail_exponent();
            let total = spec.certified_total()?;
            let inside = crate::numeric::sum(gamma.iter().map(|k| spec.psi.magnitude(k).powf(e)));
            let value = (total.value - inside).max(0.0).powf(1.0 / e);
            let cert = format!("l_{e} tail outside gamma; sum error <= {:.3e}", total.error);
            Ok(ExtremalReport::new("best", gamma.len(), value, regime, cert))
        }
        (Regime::QGtP, Target::Level(n)) => {
            check_level(n)?;
            spec.certified_total()?;
            let start = if n == 1 { 0 } else { psi::build_charseq(&spec.psi, psi::Upto::Levels(n - 1))?.delta(n - 1) };
            tail_report(spec, "best", n, start)
        }
    }
}

fn check_level(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::domain("levels are numbered from 1"))
    } else {
        Ok(())
    }
}

/// `(sum_{k > start} psi~_k^e)^{1/e}` as a report.
fn tail_report(spec: &ClassSpec, quantity: &str, n: usize, start: usize) -> Result<ExtremalReport> {
    let e = spec.tail_exponent();
    let t = psi::tail_sum(&spec.psi, e, start + 1, TAIL_TOL)?;
    let cert = format!("l_{e} tail from k = {}; sum error <= {:.3e}", start + 1, t.error);
    Ok(ExtremalReport::new(quantity, n, t.value.powf(1.0 / e), spec.regime(), cert))
}

/// Trigonometric and projection widths `D_n`.
pub fn class_widths(spec: &ClassSpec, n: usize) -> Result<ExtremalReport> {
    match spec.regime() {
        Regime::QLeP => {
            let r = psi::rearrangement(&spec.psi, n + 1)?;
            Ok(ExtremalReport::new("width", n, r[n], Regime::QLeP, format!("psi~_{}", n + 1)))
        }
        Regime::QGtP => {
            spec.certified_total()?;
            tail_report(spec, "width", n, n)
        }
    }
}

/// One rung of the Kolmogorov-width ladder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderStep {
    pub n: usize,
    /// Smallest and largest `N` with `d_N = eps_n`.
    pub first: usize,
    pub last: usize,
    pub value: f64,
}

/// Kolmogorov widths `d_N = eps_n` for `N` in `[delta_{n-1}, delta_n - 1]`; needs `p = q >= 1`.
pub fn kolmogorov_ladder(spec: &ClassSpec, n: usize) -> Result<LadderStep> {
    check_level(n)?;
    if spec.p != spec.q || spec.p < 1.0 {
        return Err(Error::Precondition("the width ladder needs p = q >= 1".into()));
    }
    let cs = psi::build_charseq(&spec.psi, psi::Upto::Levels(n))?;
    Ok(LadderStep { n, first: cs.delta(n - 1), last: cs.delta(n) - 1, value: cs.eps(n) })
}

/// Growable cache of `psi~` values.
struct Rearranged {
    stream: Enumerator,
    values: Vec<f64>,
}

impl Rearranged {
    fn new(psi: &PsiSystem) -> Self {
        Rearranged { stream: psi.enumerate(), values: Vec::new() }
    }

    /// `psi~_k`, 1-based.
    fn get(&mut self, k: usize) -> Result<f64> {
        while self.values.len() < k {
            let (v, _) = self.stream.next_entry()?;
            self.values.push(v);
        }
        Ok(self.values[k - 1])
    }
}

/// Best `n`-term approximation of the class.
pub fn class_sigma(spec: &ClassSpec, n: usize) -> Result<ExtremalReport> {
    class_sigma_with_budget(spec, n, SIGMA_BUDGET)
}

pub fn class_sigma_with_budget(spec: &ClassSpec, n: usize, budget: usize) -> Result<ExtremalReport> {
    check_level(n)?;
    match spec.regime() {
        Regime::QLeP => sigma_q_le_p(spec, n, budget),
        Regime::QGtP => sigma_q_gt_p(spec, n, budget),
    }
}

const TIE_REL: f64 = 1e-12;

fn sigma_q_le_p(spec: &ClassSpec, n: usize, budget: usize) -> Result<ExtremalReport> {
    let (p, q) = (spec.p, spec.q);
    let mut cache = Rearranged::new(&spec.psi);
    let mut s_sum = Compensated::new();
    for k in 1..=n {
        let v = cache.get(k)?;
        if v == 0.0 {
            return Ok(zero_sigma(spec, n, "psi~ vanishes before index n"));
        }
        s_sum.add(v.powf(-q));
    }
    let mut best = 0.0f64;
    let mut s_star = None;
    let mut ties: Vec<usize> = Vec::new();
    for s in n + 1..=n + budget {
        let v = cache.get(s)?;
        if v == 0.0 {
            let cert = format!("psi~ vanishes from s = {s}; the objective is 0 beyond");
            return Ok(sigma_report(spec, n, best.powf(1.0 / p), s_star, &ties, cert));
        }
        s_sum.add(v.powf(-q));
        let obj = (s - n) as f64 * s_sum.value().powf(-p / q);
        if obj > best * (1.0 + TIE_REL) {
            best = obj;
            s_star = Some(s);
            ties.clear();
        } else if obj >= best * (1.0 - TIE_REL) {
            ties.push(s);
        }
        let half = cache.get(s.div_ceil(2))?;
        let envelope = s as f64 * (2.0 / s as f64).powf(p / q) * half.powf(p);
        if envelope <= best {
            let cert = format!("envelope s(2/s)^(p/q) psi~_ceil(s/2)^p <= incumbent at s = {s}");
            return Ok(sigma_report(spec, n, best.powf(1.0 / p), s_star, &ties, cert));
        }
    }
    Err(Error::Budget(format!("sigma_{n}: no termination certificate within {budget} candidates")))
}

fn sigma_report(
    spec: &ClassSpec,
    n: usize,
    value: f64,
    s_star: Option<usize>,
    ties: &[usize],
    cert: String,
) -> ExtremalReport {
    let mut r = ExtremalReport::new("sigma", n, value, spec.regime(), cert);
    if !ties.is_empty() {
        r.certificate.push_str(&format!("; equal objective also at s = {ties:?}"));
    }
    r.s_star = s_star;
    r
}

fn zero_sigma(spec: &ClassSpec, n: usize, why: &str) -> ExtremalReport {
    ExtremalReport::new("sigma", n, 0.0, spec.regime(), why.into())
}

/// The `q > p` bracket: the `s` leading coordinates share one magnitude and
/// the rest follow the Holder-extremal profile. Candidates are restricted to
/// `s` where that profile stays below the shared magnitude, which is
/// `psi~_{s+1}^q S_s <= s - n`.
fn sigma_q_gt_p(spec: &ClassSpec, n: usize, budget: usize) -> Result<ExtremalReport> {
    let (p, q) = (spec.p, spec.q);
    let e = spec.tail_exponent();
    let total = spec.fine_total()?;
    let mut cache = Rearranged::new(&spec.psi);
    // prefix[k] = sum_{j <= k} psi~_j^e
    let mut prefix = vec![0.0f64];
    let mut pe = Compensated::new();
    let mut s_sum = Compensated::new();
    let push = |cache: &mut Rearranged, prefix: &mut Vec<f64>, pe: &mut Compensated| -> Result<f64> {
        let k = prefix.len();
        let v = cache.get(k)?;
        pe.add(v.powf(e));
        prefix.push(pe.value());
        Ok(v)
    };
    for _ in 1..=n {
        let v = push(&mut cache, &mut prefix, &mut pe)?;
        if v == 0.0 {
            return Ok(zero_sigma(spec, n, "psi~ vanishes before index n"));
        }
        s_sum.add(v.powf(-q));
    }
    let tail_after = |prefix: &[f64], j: usize| (total.value - prefix[j]).max(0.0);
    let mut best = 0.0f64;
    let mut s_star = None;
    let mut free_best = (0.0f64, 0usize);
    for s in n + 1..=n + budget {
        let v = push(&mut cache, &mut prefix, &mut pe)?;
        if v == 0.0 {
            break;
        }
        s_sum.add(v.powf(-q));
        let next = cache.get(s + 1)?;
        let sq = s_sum.value();
        let bracket = ((s - n) as f64).powf(q / (q - p)) * sq.powf(-p / (q - p)) + tail_after(&prefix, s);
        if bracket > free_best.0 {
            free_best = (bracket, s);
        }
        let feasible = next.powf(q) * sq <= (s - n) as f64 * (1.0 + 1e-12);
        if feasible && bracket > best * (1.0 + TIE_REL) {
            best = bracket;
            s_star = Some(s);
        }
        let quarter = s.div_ceil(4) - 1;
        let slack = 5.0 * total.error + 8.0 * f64::EPSILON * total.value;
        let bound = 2f64.powf(p / (q - p)) * 4.0 * tail_after(&prefix, quarter) + tail_after(&prefix, s) + slack;
        if s_star.is_some() && bound <= best {
            let mut cert = format!(
                "bracket bound 2^(p/(q-p)) 4 T_ceil(s/4)-1 + T_s <= incumbent at s = {s}; tail error <= {:.3e}",
                total.error
            );
            if free_best.1 != s_star.unwrap_or(0) {
                cert.push_str(&format!(
                    "; unconstrained bracket max {:.6e} at s = {} violates the ordering",
                    free_best.0.powf(1.0 / e),
                    free_best.1
                ));
            }
            let mut r = ExtremalReport::new("sigma", n, best.powf(1.0 / e), Regime::QGtP, cert);
            r.s_star = s_star;
            return Ok(r);
        }
    }
    let support_end = cache.get(prefix.len() - 1)? == 0.0;
    if support_end && s_star.is_some() {
        let cert = format!("finite support: every s up to {} examined", prefix.len() - 2);
        let mut r = ExtremalReport::new("sigma", n, best.powf(1.0 / e), Regime::QGtP, cert);
        r.s_star = s_star;
        return Ok(r);
    }
    if s_star.is_none() {
        // psi~ vanished: the remaining mass is a finite-dimensional problem
        // whose bracket at the last admissible s is exact.
        let mut r = ExtremalReport::new("sigma", n, free_best.0.powf(1.0 / e), Regime::QGtP, "finite support".into());
        r.s_star = Some(free_best.1).filter(|&s| s > n);
        return Ok(r);
    }
    Err(Error::Budget(format!(
        "sigma_{n}: no termination certificate within {budget} candidates (tails are resolved to {:.1e} absolute)",
        total.error + 8.0 * f64::EPSILON * total.value
    )))
}

/// Outcome of the dyadic `Delta_2` check `psi(t) <= K psi(2t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Delta2Check {
    pub holds: bool,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// `psi(2^j)/psi(2^{j+1})` for `j = 0..20`; bounded means finite with spread <= 100.
pub fn delta2_check(profile: &Profile) -> Delta2Check {
    let ratios: Vec<f64> = (0..=20)
        .map(|j| {
            let t = 2f64.powi(j);
            profile.eval(t) / profile.eval(2.0 * t)
        })
        .collect();
    let min_ratio = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let holds = ratios.iter().all(|r| r.is_finite()) && max_ratio <= 100.0 * min_ratio;
    Delta2Check { holds, min_ratio, max_ratio }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderRow {
    pub n: usize,
    pub sigma: f64,
    pub width: f64,
    /// `psi(n^{1/d}) n^{1/p - 1/q}`
    pub sigma_scale: f64,
    pub sigma_ratio: f64,
    pub width_ratio: f64,
}

/// Ratios of exact class values against their predicted orders.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderTable {
    pub rows: Vec<OrderRow>,
    pub sigma_band: (f64, f64),
    pub width_band: (f64, f64),
    /// Both bands have `max/min` below `band_limit`.
    pub bounded: bool,
    pub band_limit: f64,
    pub delta2: Delta2Check,
    /// For `q < p`, whether `sigma_n / D_n` decreases over the range.
    pub sigma_over_width_decreasing: Option<bool>,
    pub warnings: Vec<String>,
}

/// Empirical order check for the radial class built from `profile`.
pub fn order_estimate_check(
    profile: Profile,
    d: usize,
    r: f64,
    p: f64,
    q: f64,
    ns: &[usize],
    band_limit: f64,
) -> Result<OrderTable> {
    let spec = ClassSpec::new(PsiSystem::radial(d, profile, r)?, p, q)?;
    let delta2 = delta2_check(&profile);
    let mut warnings = Vec::new();
    if !delta2.holds {
        warnings.push(format!(
            "psi is not Delta_2 on the dyadic grid (ratios {:.3e}..{:.3e})",
            delta2.min_ratio, delta2.max_ratio
        ));
    }
    if q > p {
        warnings.push("q > p: convexity hypotheses on psi are assumed, not checked".into());
    }
    let mut rows = Vec::new();
    for &n in ns {
        let sigma = class_sigma(&spec, n)?.value;
        let width = class_widths(&spec, n)?.value;
        let base = profile.eval((n as f64).powf(1.0 / d as f64));
        let sigma_scale = base * (n as f64).powf(1.0 / p - 1.0 / q);
        let width_scale = if q <= p { base } else { sigma_scale };
        rows.push(OrderRow {
            n,
            sigma,
            width,
            sigma_scale,
            sigma_ratio: sigma / sigma_scale,
            width_ratio: width / width_scale,
        });
    }
    let band = |f: &dyn Fn(&OrderRow) -> f64| {
        rows.iter().map(f).fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)))
    };
    let sigma_band = band(&|r| r.sigma_ratio);
    let width_band = band(&|r| r.width_ratio);
    let ok = |b: (f64, f64)| b.0 > 0.0 && b.1 / b.0 < band_limit;
    let sigma_over_width_decreasing = (q < p).then(|| {
        let ratios: Vec<f64> = rows.iter().map(|r| r.sigma / r.width).collect();
        let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
        ratios.len() < 2 || log_log_slope(&xs, &ratios) < 0.0
    });
    Ok(OrderTable {
        bounded: ok(sigma_band) && ok(width_band),
        rows,
        sigma_band,
        width_band,
        band_limit,
        delta2,
        sigma_over_width_decreasing,
        warnings,
    })
}

/// Index offsets for the series identities: `eps_k` is read as
/// `eps_{k + eps_offset}` and `E_k` as the tail outside `g_{k + e_offset}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Convention {
    pub eps_offset: i32,
    pub e_offset: i32,
}

impl Convention {
    /// The convention under which both identities are exact.
    pub const PINNED: Convention = Convention { eps_offset: 1, e_offset: 0 };

    /// All nine offsets in `{-1, 0, 1}^2`.
    pub fn all() -> impl Iterator<Item = Convention> {
        (-1..=1).flat_map(|a| (-1..=1).map(move |b| Convention { eps_offset: a, e_offset: b }))
    }
}

impl Default for Convention {
    fn default() -> Self {
        Self::PINNED
    }
}

/// Both sides of a series identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// `eps_K^{-1} E_K(f) -> 0` evaluated on the finite support.
    pub converged: bool,
}

/// Shell sums `T_j = sum_{k in g_j \ g_{j-1}} |h(k)|^p` for `j = 1..=levels`.
struct Shells {
    cs: CharSeq,
    levels: usize,
}

impl Shells {
    fn build(f: &Spectrum, psi: &PsiSystem, n: usize) -> Result<Self> {
        if f.dim() != Some(psi.dim()) {
            return Err(Error::domain(format!("identity checks need a spectrum on Z^{}", psi.dim())));
        }
        let mut b = CharSeqBuilder::new(psi);
        let support: Vec<&[i64]> = f.support().map(|k| k.as_lattice().expect("lattice")).collect();
        while support.iter().any(|k| b.seq().level_of(k).is_none()) || b.seq().len() < n {
            b.next_level()?;
        }
        let top = b.seq().len();
        for _ in 0..3 {
            b.next_level()?;
        }
        Ok(Shells { cs: b.finish(), levels: top })
    }

    fn sums(&self, h: &Spectrum, p: f64) -> Vec<f64> {
        let mut t = vec![Compensated::new(); self.levels + 4];
        for (k, c) in h.entries() {
            let lvl = self.cs.level_of(k.as_lattice().expect("lattice")).expect("covered");
            t[lvl].add(c.norm().powf(p));
        }
        t.iter().map(|c| c.value()).collect()
    }

    /// `E_m = sum_{j > m} T_j`, with `g_m = {}` for `m <= 0`.
    fn tails(t: &[f64]) -> impl Fn(i64) -> f64 + '_ {
        move |m: i64| {
            let from = (m.max(0) + 1) as usize;
            crate::numeric::sum(t.iter().skip(from).copied())
        }
    }

    /// `eps_j`, with `eps_j = eps_1` for `j <= 0`.
    fn eps(&self, j: i64) -> f64 {
        self.cs.eps(j.max(1) as usize)
    }
}

/// Assembles `a(n) E_n + sum_{k > n} (a(k) - a(k-1)) E_k` under `conv`.
fn series(sh: &Shells, n: usize, conv: Convention, weight: impl Fn(f64) -> f64, tails: &dyn Fn(i64) -> f64) -> f64 {
    let a = |k: i64| weight(sh.eps(k + i64::from(conv.eps_offset)));
    let e = |k: i64| tails(k + i64::from(conv.e_offset));
    let n = n as i64;
    let mut acc = Compensated::new();
    acc.add(a(n) * e(n));
    for k in n + 1..=sh.levels as i64 + 2 {
        acc.add((a(k) - a(k - 1)) * e(k));
    }
    acc.value()
}

/// Direct identity: `E_n^p(f)` through `eps^p` increments and tails of `f^psi`.
pub fn direct_identity_check(
    f: &Spectrum,
    psi: &PsiSystem,
    n: usize,
    p: f64,
    conv: Convention,
) -> Result<IdentityCheck> {
    check_level(n)?;
    let sh = Shells::build(f, psi, n)?;
    let fpsi = psi::psi_derivative(f, psi)?;
    let tf = sh.sums(f, p);
    let tg = sh.sums(&fpsi, p);
    let lhs = Shells::tails(&tf)(n as i64);
    let rhs = series(&sh, n, conv, |e| e.powf(p), &Shells::tails(&tg));
    Ok(IdentityCheck { lhs, rhs, residual: (lhs - rhs).abs(), converged: true })
}

/// Inverse identity: `E_n^p(f^psi)` through `eps^{-p}` increments and tails of `f`.
pub fn inverse_series_check(
    f: &Spectrum,
    psi: &PsiSystem,
    n: usize,
    p: f64,
    conv: Convention,
) -> Result<IdentityCheck> {
    check_level(n)?;
    let sh = Shells::build(f, psi, n)?;
    let fpsi = psi::psi_derivative(f, psi)?;
    let tf = sh.sums(f, p);
    let tg = sh.sums(&fpsi, p);
    let lhs = Shells::tails(&tg)(n as i64);
    let tails_f = Shells::tails(&tf);
    let rhs = series(&sh, n, conv, |e| e.powf(-p), &tails_f);
    let last = sh.levels as i64 + 2;
    let converged = tails_f(last) / sh.eps(last) == 0.0;
    Ok(IdentityCheck { lhs, rhs, residual: (lhs - rhs).abs(), converged })
}

/// Frequencies of `g_n` as spectrum indices, for building test targets.
pub fn level_set_frequencies(cs: &CharSeq, n: usize) -> HashSet<Frequency> {
    cs.level_set(n).map(|k| Frequency::Lattice(k.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::TailRule;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn halving_axis() -> PsiSystem {
        PsiSystem::product(vec![Profile::Geometric(0.5)]).unwrap()
    }

    #[test]
    fn best_approx_examples() {
        let spec = ClassSpec::new(halving_axis(), 2.0, 1.0).unwrap();
        let gamma: HashSet<Vec<i64>> = [vec![0]].into_iter().collect();
        assert_eq!(class_best_approx(&spec, Target::Gamma(&gamma)).unwrap().value, 0.5);
        let empty = HashSet::new();
        assert_eq!(class_best_approx(&spec, Target::Gamma(&empty)).unwrap().value, 1.0);
        assert_eq!(class_best_approx(&spec, Target::Level(3)).unwrap().value, 0.25);

        let geo = ClassSpec::new(PsiSystem::geometric_sequence(1.0, 0.5).unwrap(), 1.0, 2.0).unwrap();
        // Level 1 approximates from g_0 = {}, so the whole l_2 mass of psi~ remains.
        let v = class_best_approx(&geo, Target::Level(1)).unwrap().value;
        assert!((v - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let top: HashSet<Vec<i64>> = [vec![0]].into_iter().collect();
        let v = class_best_approx(&geo, Target::Gamma(&top)).unwrap().value;
        assert!((v - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let v2 = class_best_approx(&geo, Target::Level(2)).unwrap().value;
        assert!((v2 - class_widths(&geo, 1).unwrap().value).abs() < 1e-12);
    }

    #[test]
    fn width_examples() {
        let spec = ClassSpec::new(halving_axis(), 1.0, 1.0).unwrap();
        assert_eq!(class_widths(&spec, 1).unwrap().value, 0.5);
        assert_eq!(class_widths(&spec, 3).unwrap().value, 0.25);
        assert_eq!(class_widths(&spec, 0).unwrap().value, 1.0);
        let geo = ClassSpec::new(PsiSystem::geometric_sequence(1.0, 0.5).unwrap(), 1.0, 2.0).unwrap();
        assert!((class_widths(&geo, 1).unwrap().value - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let diverging = ClassSpec::new(PsiSystem::harmonic(), 0.25, 0.5).unwrap();
        assert!(matches!(class_widths(&diverging, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn ladder_matches_levels() {
        let spec = ClassSpec::new(halving_axis(), 2.0, 2.0).unwrap();
        let step = kolmogorov_ladder(&spec, 2).unwrap();
        assert_eq!((step.first, step.last, step.value), (1, 2, 0.5));
        let bad = ClassSpec::new(halving_axis(), 2.0, 1.0).unwrap();
        assert!(kolmogorov_ladder(&bad, 1).is_err());
    }

    #[test]
    fn sigma_examples() {
        let spec = ClassSpec::new(PsiSystem::harmonic(), 1.0, 1.0).unwrap();
        let r = class_sigma(&spec, 1).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.s_star, Some(2));
        assert!(r.certificate.contains("[3]"), "{}", r.certificate);

        let geo = ClassSpec::new(PsiSystem::geometric_sequence(1.0, 0.5).unwrap(), 1.0, 1.0).unwrap();
        let r = class_sigma(&geo, 1).unwrap();
        assert_eq!((r.value, r.s_star), (1.0 / 3.0, Some(2)));

        let finite = ClassSpec::new(PsiSystem::explicit(vec![0.5; 4], TailRule::Zero).unwrap(), 1.0, 1.0).unwrap();
        assert_eq!(class_sigma(&finite, 4).unwrap().value, 0.0);
        assert_eq!(class_sigma(&finite, 6).unwrap().value, 0.0);
    }

    #[test]
    fn sigma_matches_enumeration() {
        for (p, q) in [(1.0, 1.0), (2.0, 1.0), (3.0, 1.5)] {
            let spec = ClassSpec::new(PsiSystem::harmonic(), p, q).unwrap();
            for n in 1..6usize {
                let mut best = 0.0f64;
                let mut s_sum = 0.0;
                for s in 1..5000usize {
                    s_sum += (s as f64).powf(q);
                    if s > n {
                        best = best.max((s - n) as f64 * s_sum.powf(-p / q));
                    }
                }
                let v = class_sigma(&spec, n).unwrap().value;
                assert!((v - best.powf(1.0 / p)).abs() < 1e-12, "p={p} q={q} n={n}");
            }
        }
    }

    #[test]
    fn sigma_nonincreasing() {
        for (p, q) in [(1.0, 1.0), (1.0, 2.0), (2.0, 3.0)] {
            let spec = ClassSpec::new(PsiSystem::radial(1, Profile::Pow(-2.0), f64::INFINITY).unwrap(), p, q).unwrap();
            let vals: Vec<f64> = (1..30).map(|n| class_sigma(&spec, n).unwrap().value).collect();
            assert!(vals.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "{p} {q} {vals:?}");
        }
    }

    #[test]
    fn delta2_detects_exponential() {
        assert!(delta2_check(&Profile::Pow(-2.0)).holds);
        assert!(!delta2_check(&Profile::Exp(1.0)).holds);
    }

    #[test]
    fn order_table_behaviour() {
        let t = order_estimate_check(Profile::Pow(-2.0), 1, f64::INFINITY, 1.0, 1.0, &[4, 16, 64, 256], 10.0).unwrap();
        assert!(t.bounded, "{:?}", t.sigma_band);
        assert!(t.warnings.is_empty());
        let single = order_estimate_check(Profile::Pow(-2.0), 1, f64::INFINITY, 1.0, 1.0, &[8], 10.0).unwrap();
        assert!(single.bounded && single.rows.len() == 1);
        let e = order_estimate_check(Profile::Exp(1.0), 1, f64::INFINITY, 1.0, 1.0, &[4], 10.0).unwrap();
        assert!(!e.delta2.holds && !e.warnings.is_empty());
    }

    fn shell_example(n: usize) -> (Spectrum, PsiSystem) {
        let psi = PsiSystem::product(vec![Profile::Geometric(0.5)]).unwrap();
        // Shell n+1 of this system is {+-n}.
        let f = Spectrum::lattice_1d([(n as i64, Complex64::new(0.3, -0.4))]).unwrap();
        (f, psi)
    }

    #[test]
    fn single_shell_identity() {
        for n in 1..5 {
            let (f, psi) = shell_example(n);
            let p = 1.5;
            let c = direct_identity_check(&f, &psi, n, p, Convention::PINNED).unwrap();
            let eps = 0.5f64.powi(n as i32);
            let fpsi = 0.5 / eps;
            assert!((c.lhs - eps.powf(p) * fpsi.powf(p)).abs() < 1e-14);
            assert!(c.residual < 1e-14);
            let inv = inverse_series_check(&f, &psi, n, p, Convention::PINNED).unwrap();
            assert!(inv.residual < 1e-12 && inv.converged);
        }
    }

    #[test]
    fn support_inside_level_set_is_zero() {
        let psi = PsiSystem::hyperbolic(2);
        let f = Spectrum::lattice(2, [(vec![1, -1], Complex64::new(1.0, 0.0)), (vec![0, 2], Complex64::new(0.0, 2.0))])
            .unwrap();
        let c = direct_identity_check(&f, &psi, 2, 2.0, Convention::PINNED).unwrap();
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
        let c = inverse_series_check(&f, &psi, 2, 2.0, Convention::PINNED).unwrap();
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
    }

    #[test]
    fn only_pinned_convention_is_exact_on_a_two_shell_example() {
        let psi = PsiSystem::product(vec![Profile::Geometric(0.5)]).unwrap();
        let f = Spectrum::lattice_1d([
            (1, Complex64::new(0.25, 0.0)),
            (2, Complex64::new(1.0, 0.0)),
            (-3, Complex64::new(0.5, 0.5)),
        ])
        .unwrap();
        let exact: Vec<Convention> = Convention::all()
            .filter(|&c| direct_identity_check(&f, &psi, 2, 2.0, c).unwrap().residual < 1e-12)
            .collect();
        assert_eq!(exact, vec![Convention::PINNED]);
    }

    proptest! {
        #[test]
        fn phase_does_not_change_class_values(beta in -3.0f64..3.0, n in 1usize..6) {
            let plain = ClassSpec::new(PsiSystem::product(vec![Profile::Pow(-1.0)]).unwrap(), 1.0, 1.0).unwrap();
            let phased = ClassSpec::new(PsiSystem::product(vec![Profile::Pow(-1.0)]).unwrap().with_phase(beta), 1.0, 1.0).unwrap();
            prop_assert_eq!(class_sigma(&plain, n).unwrap().value, class_sigma(&phased, n).unwrap().value);
            prop_assert_eq!(class_widths(&plain, n).unwrap().value, class_widths(&phased, n).unwrap().value);
        }

        #[test]
        fn inverse_of_integral_matches_direct(
            coefs in proptest::collection::btree_map(-12i64..12, (-1.0f64..1.0, -1.0f64..1.0), 1..10),
            n in 1usize..5, p in 1.0f64..3.0
        ) {
            let psi = PsiSystem::product(vec![Profile::Pow(-1.0)]).unwrap();
            let f = Spectrum::lattice_1d(coefs.into_iter().map(|(k, (a, b))| (k, Complex64::new(a, b)))).unwrap();
            let g = psi::psi_integral(&f, &psi).unwrap();
            let inv = inverse_series_check(&g, &psi, n, p, Convention::PINNED).unwrap();
            let dir = direct_identity_check(&g, &psi, n, p, Convention::PINNED).unwrap();
            // Inverse on psi-integral g reads E_n(f); direct on g reads E_n(g).
            let e_f = crate::spectrum::best_tail_approx_pow(&f, |k| {
                let cs = psi::build_charseq(&psi, psi::Upto::Levels(n)).unwrap();
                cs.level_of(k.as_lattice().unwrap()).is_some()
            }, p).unwrap();
            prop_assert!((inv.lhs - e_f).abs() < 1e-12);
            prop_assert!(inv.residual < 1e-12 && dir.residual < 1e-12);
        }
    }
}
