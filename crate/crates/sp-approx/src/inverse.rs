//! Inverse theorems on frequency ladders, the Abel summation lemma, Bari
//! conditions and `H^omega` membership verdicts.
//!
//! Every `O(.)` verdict here is empirical: it is read off the declared range
//! of `n` and never claimed as a proof.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jackson::ladder_best_approx;
use crate::ladder::FrequencyLadder;
use crate::moduli::{self, PhiFunction};
use crate::numeric::{log_log_slope, Compensated};
use crate::spectrum::Spectrum;

/// Absolute part of the `holds` tolerance.
pub const HOLDS_ABS: f64 = 1e-10;
/// Relative part of the `holds` tolerance.
pub const HOLDS_REL: f64 = 1e-12;
/// A log-log slope at most this large over the upper half of the range reads as bounded.
pub const BOUNDED_SLOPE: f64 = 0.05;

fn holds(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + HOLDS_ABS + HOLDS_REL * rhs.abs()
}

/// Both sides of an inverse inequality, in `p`-th powers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InverseCheck {
    /// `omega^p(f, tau/lambda_n)`
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `E^p_{lambda_nu}(f)` for `nu = 1..=n`.
    pub best_approx_pow: Vec<f64>,
    /// `rhs_improved / rhs_classic`, when the classic sum is nonzero.
    pub ratio_vs_classic: Option<f64>,
}

/// Every frequency of `f` must be `0` or `+-lambda_k`.
fn check_on_ladder(f: &Spectrum, ladder: &FrequencyLadder) -> Result<()> {
    for (lam, _) in f.scalar_entries()? {
        if ladder.index_of(lam).is_none() {
            return Err(Error::domain(format!("frequency {lam} is not on the ladder {}", ladder.label())));
        }
    }
    Ok(())
}

fn best_approx_pows(f: &Spectrum, ladder: &FrequencyLadder, n: usize, p: f64) -> Result<Vec<f64>> {
    (1..=n).map(|nu| ladder_best_approx(f, ladder, nu, p).map(|e| e.powf(p))).collect()
}

/// `omega_phi^p(f, tau/lambda_n) <= sum_{nu=1}^n (phi^p(tau lambda_nu/lambda_n) - phi^p(tau lambda_{nu-1}/lambda_n)) E^p_{lambda_nu}(f)`.
///
/// Requires `phi` nondecreasing on `[0, tau]` with `phi(tau) = sup phi`.
pub fn inverse_bound_general(
    f: &Spectrum,
    phi: &PhiFunction,
    tau: f64,
    p: f64,
    ladder: &FrequencyLadder,
    n: usize,
) -> Result<InverseCheck> {
    if n == 0 || !(tau > 0.0) {
        return Err(Error::domain("need n >= 1 and tau > 0"));
    }
    if !phi.monotone_to().is_some_and(|a| tau <= a * (1.0 + 1e-15)) {
        return Err(Error::Precondition(format!("{} is not declared nondecreasing on [0, {tau}]", phi.label())));
    }
    if (phi.eval(tau) - phi.sup()).abs() > 1e-12 * phi.sup() {
        return Err(Error::Precondition(format!("{} does not reach its sup at tau = {tau}", phi.label())));
    }
    check_on_ladder(f, ladder)?;
    let ln = ladder.lambda(n)?;
    let lhs = moduli::omega_phi(f, phi, tau / ln, p)?.powf(p);
    let e = best_approx_pows(f, ladder, n, p)?;
    let mut acc = Compensated::new();
    for nu in 1..=n {
        let hi = phi.eval(tau * ladder.lambda(nu)? / ln).powf(p);
        let lo = phi.eval(tau * ladder.lambda(nu - 1)? / ln).powf(p);
        acc.add((hi - lo) * e[nu - 1]);
    }
    let rhs = acc.value();
    Ok(InverseCheck { lhs, rhs, holds: holds(lhs, rhs), best_approx_pow: e, ratio_vs_classic: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseVariant {
    /// `alpha p (2 pi/lambda_n)^{alpha p} sum lambda_nu^{alpha p - 1}(lambda_nu - lambda_{nu-1}) E^p`
    Classic,
    /// `(pi/lambda_n)^{alpha p} sum (lambda_nu^{alpha p} - lambda_{nu-1}^{alpha p}) E^p`
    Improved,
    /// `K alpha p (pi/lambda_n)^{alpha p} sum lambda_nu^{alpha p - 1} E^p`, for ladders with gaps at most `K`
    Gap,
}

impl InverseVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(InverseVariant::Classic),
            "improved" => Ok(InverseVariant::Improved),
            "gap" => Ok(InverseVariant::Gap),
            _ => Err(Error::Parse(format!("unknown inverse variant '{s}' (classic | improved | gap)"))),
        }
    }
}

fn alpha_rhs(variant: InverseVariant, ap: f64, ladder: &FrequencyLadder, n: usize, e: &[f64]) -> Result<f64> {
    let ln = ladder.lambda(n)?;
    let mut acc = Compensated::new();
    let gap = match variant {
        InverseVariant::Gap => ladder
            .gap_bound()
            .ok_or_else(|| Error::Precondition(format!("ladder {} has no gap bound", ladder.label())))?,
        _ => 0.0,
    };
    for nu in 1..=n {
        let (l, lp) = (ladder.lambda(nu)?, ladder.lambda(nu - 1)?);
        acc.add(
            e[nu - 1]
                * match variant {
                    InverseVariant::Classic => l.powf(ap - 1.0) * (l - lp),
                    InverseVariant::Improved => l.powf(ap) - lp.powf(ap),
                    InverseVariant::Gap => l.powf(ap - 1.0),
                },
        );
    }
    let s = acc.value();
    Ok(match variant {
        InverseVariant::Classic => ap * (2.0 * PI / ln).powf(ap) * s,
        InverseVariant::Improved => (PI / ln).powf(ap) * s,
        InverseVariant::Gap => gap * ap * (PI / ln).powf(ap) * s,
    })
}

/// `omega_alpha^p(f, pi/lambda_n) <= rhs` for the chosen variant.
///
/// The classic and gap forms are stated for `alpha p >= 1`.
pub fn inverse_bound_alpha(
    f: &Spectrum,
    alpha: f64,
    p: f64,
    ladder: &FrequencyLadder,
    n: usize,
    variant: InverseVariant,
) -> Result<InverseCheck> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let ap = alpha * p;
    if variant != InverseVariant::Improved && ap < 1.0 {
        return Err(Error::Precondition(format!("the {variant:?} form needs alpha p >= 1, got {ap}")));
    }
    let phi = PhiFunction::alpha(alpha)?;
    check_on_ladder(f, ladder)?;
    let ln = ladder.lambda(n)?;
    let lhs = moduli::omega_phi(f, &phi, PI / ln, p)?.powf(p);
    let e = best_approx_pows(f, ladder, n, p)?;
    let rhs = alpha_rhs(variant, ap, ladder, n, &e)?;
    let ratio_vs_classic = if ap >= 1.0 {
        let classic = alpha_rhs(InverseVariant::Classic, ap, ladder, n, &e)?;
        let improved = alpha_rhs(InverseVariant::Improved, ap, ladder, n, &e)?;
        (classic > 0.0).then(|| improved / classic)
    } else {
        None
    };
    Ok(InverseCheck { lhs, rhs, holds: holds(lhs, rhs), best_approx_pow: e, ratio_vs_classic })
}

/// `omega_alpha(f*, pi/lambda_n) / (S^{1/p} lambda_n^{-alpha})` for `f* = e^{i lambda_{k0} x}`,
/// with `S` the improved sum; it approaches `pi^alpha` from below as `n` grows.
pub fn pi_alpha_sharpness_ratio(alpha: f64, p: f64, ladder: &FrequencyLadder, k0: usize, n: usize) -> Result<f64> {
    if k0 == 0 || k0 > n {
        return Err(Error::domain("need 1 <= k0 <= n"));
    }
    let lk = ladder.lambda(k0)?;
    let f = Spectrum::real([(lk, num_complex::Complex64::new(1.0, 0.0))])?;
    let c = inverse_bound_alpha(&f, alpha, p, ladder, n, InverseVariant::Improved)?;
    let ln = ladder.lambda(n)?;
    // rhs = (pi/lambda_n)^{alpha p} S
    let s = c.rhs / (PI / ln).powf(alpha * p);
    Ok(c.lhs.powf(1.0 / p) / (s.powf(1.0 / p) * ln.powf(-alpha)))
}

/// Both sides of the Abel summation identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AbelIdentity {
    pub lhs: f64,
    pub rhs: f64,
}

/// `sum_{nu=N1}^{N2} a_nu c_nu` against
/// `a_{N1} T_{N1} + sum_{nu=N1+1}^{N2} (a_nu - a_{nu-1}) T_nu - a_{N2} T_{N2+1}`,
/// with `T_nu = sum_{i >= nu} c_i`.
///
/// Sequences are 1-indexed: `a[0]` is `a_1`. `c` is finitely supported.
pub fn abel_sum_identity(a: &[f64], c: &[f64], n1: usize, n2: usize) -> Result<AbelIdentity> {
    if n1 == 0 || n2 < n1 || n2 > a.len() {
        return Err(Error::domain(format!("need 1 <= N1 <= N2 <= {}", a.len())));
    }
    let c_at = |i: usize| c.get(i - 1).copied().unwrap_or(0.0);
    let tail = |from: usize| crate::numeric::sum((from..=c.len().max(from)).map(c_at));
    let lhs = crate::numeric::sum((n1..=n2).map(|nu| a[nu - 1] * c_at(nu)));
    let mut acc = Compensated::new();
    acc.add(a[n1 - 1] * tail(n1));
    for nu in n1 + 1..=n2 {
        acc.add((a[nu - 1] - a[nu - 2]) * tail(nu));
    }
    acc.add(-a[n2 - 1] * tail(n2 + 1));
    Ok(AbelIdentity { lhs, rhs: acc.value() })
}

/// A modulus-of-continuity majorant on `[0, 1]` with grid-checked conditions.
#[derive(Clone)]
pub struct Majorant {
    label: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub continuous: bool,
    pub nondecreasing: bool,
    pub positive: bool,
    pub vanishes_at_zero: bool,
}

impl std::fmt::Debug for Majorant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Majorant")
            .field("label", &self.label)
            .field("continuous", &self.continuous)
            .field("nondecreasing", &self.nondecreasing)
            .field("positive", &self.positive)
            .field("vanishes_at_zero", &self.vanishes_at_zero)
            .finish()
    }
}

const MAJORANT_GRID: usize = 1 << 14;

impl Majorant {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let grid: Vec<f64> = (0..=MAJORANT_GRID).map(|i| eval(i as f64 / MAJORANT_GRID as f64)).collect();
        let finite = grid.iter().all(|v| v.is_finite());
        let scale = grid.iter().cloned().fold(0.0, f64::max);
        let nondecreasing = grid.windows(2).all(|w| w[1] >= w[0] - 1e-14 * scale);
        let positive = grid[1..].iter().all(|&v| v > 0.0);
        // Geometric approach to 0 catches slowly vanishing majorants like 1/log(1/t).
        let vanishes_at_zero = eval(0.0) == 0.0 && eval(f64::MIN_POSITIVE) <= 1e-2 * eval(1.0);
        // Continuity at 0 is the vanishing check.
        let max_jump = grid[1..].windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        let continuous = finite && max_jump <= 1e-2 * scale.max(f64::MIN_POSITIVE);
        Majorant { label: label.into(), eval: Arc::new(eval), continuous, nondecreasing, positive, vanishes_at_zero }
    }

    /// `t^r`.
    pub fn power(r: f64) -> Self {
        Majorant::new(format!("t^{r}"), move |t: f64| t.powf(r))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn is_admissible(&self) -> bool {
        self.continuous && self.nondecreasing && self.positive && self.vanishes_at_zero
    }

    /// `omega^q`, keeping the verified flags.
    pub fn powf(&self, q: f64) -> Majorant {
        let inner = self.eval.clone();
        Majorant { label: format!("({})^{q}", self.label), eval: Arc::new(move |t| inner(t).powf(q)), ..self.clone() }
    }
}

/// Verdict on a ratio sequence indexed by `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundednessVerdict {
    pub sup_ratio: f64,
    /// Log-log slope of the ratio over the upper half of the range.
    pub tail_slope: f64,
    pub bounded: bool,
}

/// Empirical boundedness: a singleton, an eventually zero sequence, or a
/// tail slope at most [`BOUNDED_SLOPE`].
pub fn empirical_bounded(ns: &[usize], ratios: &[f64]) -> BoundednessVerdict {
    let sup_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let half = ns.len() / 2;
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        ns[half..].iter().zip(&ratios[half..]).filter(|(_, &r)| r > 0.0).map(|(&n, &r)| (n as f64, r)).unzip();
    if ns.len() <= 1 || xs.len() < 2 || ratios.last().is_some_and(|&r| r == 0.0) {
        return BoundednessVerdict { sup_ratio, tail_slope: 0.0, bounded: sup_ratio.is_finite() };
    }
    let tail_slope = log_log_slope(&xs, &ys);
    BoundednessVerdict { sup_ratio, tail_slope, bounded: sup_ratio.is_finite() && tail_slope <= BOUNDED_SLOPE }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BariReport {
    pub s: f64,
    pub ns: Vec<usize>,
    pub ratios: Vec<f64>,
    pub verdict: BoundednessVerdict,
}

/// `sum_{nu=1}^n lambda_nu^{s-1} omega(1/lambda_nu) / (lambda_n^s omega(1/lambda_n))` on `ns`,
/// with `ns` strictly increasing.
pub fn bari_check(omega: &Majorant, ladder: &FrequencyLadder, s: f64, ns: &[usize]) -> Result<BariReport> {
    if !(s > 0.0) {
        return Err(Error::domain(format!("the Bari condition needs s > 0, got {s}")));
    }
    if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("n range must be nonempty, positive and increasing"));
    }
    let mut acc = Compensated::new();
    let mut nu = 0usize;
    let mut ratios = Vec::with_capacity(ns.len());
    for &n in ns {
        while nu < n {
            nu += 1;
            let l = ladder.lambda(nu)?;
            acc.add(l.powf(s - 1.0) * omega.eval(1.0 / l));
        }
        let l = ladder.lambda(n)?;
        ratios.push(acc.value() / (l.powf(s) * omega.eval(1.0 / l)));
    }
    let verdict = empirical_bounded(ns, &ratios);
    Ok(BariReport { s, ns: ns.to_vec(), ratios, verdict })
}

/// Data for a membership verdict.
#[derive(Clone, Copy, Debug)]
pub enum MembershipInput<'a> {
    /// `f`; both directions are evaluated.
    Function(&'a Spectrum),
    /// `E_{lambda_n}(f)` for `n = 1, 2, ...`; only the approximation side.
    Sequence(&'a [f64]),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub ns: Vec<usize>,
    /// `E_{lambda_n} / omega(1/lambda_n)`.
    pub approx_ratios: Vec<f64>,
    pub approx: BoundednessVerdict,
    /// `omega_alpha(f, 1/lambda_n) / omega(1/lambda_n)`, for a function input.
    pub modulus_ratios: Option<Vec<f64>>,
    pub modulus: Option<BoundednessVerdict>,
    /// Bari condition for `omega^p` with `s = alpha p`.
    pub bari: BariReport,
    /// Gap bound present and Bari condition bounded.
    pub converse_certified: bool,
    /// The verdicts agree with the equivalence where it applies.
    pub consistent: bool,
    pub notes: Vec<String>,
}

/// `E_{lambda_n}(f) = O(omega(1/lambda_n))` against `omega_alpha(f, delta) = O(omega(delta))` on `ns`.
pub fn class_membership_homega(
    input: MembershipInput<'_>,
    omega: &Majorant,
    alpha: f64,
    p: f64,
    ladder: &FrequencyLadder,
    ns: &[usize],
) -> Result<MembershipReport> {
    if !(alpha > 0.0 && p > 0.0) {
        return Err(Error::domain("need alpha > 0 and p > 0"));
    }
    let mut notes = Vec::new();
    if !omega.is_admissible() {
        notes.push(format!("majorant {} fails a grid check: {omega:?}", omega.label()));
    }
    let e: Vec<f64> = match input {
        MembershipInput::Function(f) => {
            check_on_ladder(f, ladder)?;
            ns.iter().map(|&n| ladder_best_approx(f, ladder, n, p)).collect::<Result<_>>()?
        }
        MembershipInput::Sequence(seq) => ns
            .iter()
            .map(|&n| {
                seq.get(n.wrapping_sub(1))
                    .copied()
                    .ok_or_else(|| Error::domain(format!("sequence has no entry for n = {n}")))
            })
            .collect::<Result<_>>()?,
    };
    let om: Vec<f64> = ns.iter().map(|&n| ladder.lambda(n).map(|l| omega.eval(1.0 / l))).collect::<Result<_>>()?;
    let approx_ratios: Vec<f64> = e.iter().zip(&om).map(|(a, b)| a / b).collect();
    let approx = empirical_bounded(ns, &approx_ratios);
    let (modulus_ratios, modulus) = match input {
        MembershipInput::Function(f) => {
            let phi = PhiFunction::alpha(alpha)?;
            let r: Vec<f64> = ns
                .iter()
                .zip(&om)
                .map(|(&n, &w)| Ok(moduli::omega_phi(f, &phi, 1.0 / ladder.lambda(n)?, p)? / w))
                .collect::<Result<_>>()?;
            let v = empirical_bounded(ns, &r);
            (Some(r), Some(v))
        }
        MembershipInput::Sequence(_) => (None, None),
    };
    let bari = bari_check(&omega.powf(p), ladder, alpha * p, ns)?;
    let converse_certified = ladder.gap_bound().is_some() && bari.verdict.bounded;
    if !converse_certified {
        notes.push("converse direction not certified".into());
    }
    let consistent = match &modulus {
        Some(m) => (!m.bounded || approx.bounded) && (!converse_certified || !approx.bounded || m.bounded),
        None => true,
    };
    Ok(MembershipReport {
        ns: ns.to_vec(),
        approx_ratios,
        approx,
        modulus_ratios,
        modulus,
        bari,
        converse_certified,
        consistent,
        notes,
    })
}
