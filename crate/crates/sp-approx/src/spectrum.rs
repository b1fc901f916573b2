//! Finite trigonometric sums over a lattice `Z^d` or over real frequencies,
//! with the coefficient-space norms and approximations built on them.
//!
//! Because the norm of a sum is the `l_p` norm of its coefficients, every
//! approximation question here reduces to bookkeeping on the coefficient list:
//! restricting to a region gives the best approximation from that region and
//! the `n` largest coefficients give the best `n`-term approximation.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Compensated;

/// A frequency: a lattice multi-index or a real exponent `lambda`.
#[derive(Clone, Debug)]
pub enum Frequency {
    Lattice(Vec<i64>),
    Real(f64),
}

impl Frequency {
    /// The scalar frequency of a one-dimensional index or a real exponent.
    pub fn scalar(&self) -> Option<f64> {
        match self {
            Frequency::Lattice(k) if k.len() == 1 => Some(k[0] as f64),
            Frequency::Lattice(_) => None,
            Frequency::Real(l) => Some(*l),
        }
    }

    pub fn as_lattice(&self) -> Option<&[i64]> {
        match self {
            Frequency::Lattice(k) => Some(k),
            Frequency::Real(_) => None,
        }
    }

    /// Squared Euclidean size, used for tie-breaking.
    fn size(&self) -> f64 {
        match self {
            Frequency::Lattice(k) => k.iter().map(|&x| (x as f64) * (x as f64)).sum(),
            Frequency::Real(l) => l * l,
        }
    }

    fn is_negative(&self) -> bool {
        match self {
            Frequency::Lattice(k) => k.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0),
            Frequency::Real(l) => *l < 0.0,
        }
    }

    /// Greedy tie-break order: smaller size, negative first, then storage order.
    pub fn tie_break_cmp(&self, other: &Frequency) -> Ordering {
        self.size()
            .total_cmp(&other.size())
            .then_with(|| other.is_negative().cmp(&self.is_negative()))
            .then_with(|| self.cmp(other))
    }
}

impl PartialEq for Frequency {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frequency {}

impl PartialOrd for Frequency {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frequency {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Frequency::Lattice(a), Frequency::Lattice(b)) => a.cmp(b),
            (Frequency::Real(a), Frequency::Real(b)) => a.total_cmp(b),
            (Frequency::Lattice(_), Frequency::Real(_)) => Ordering::Less,
            (Frequency::Real(_), Frequency::Lattice(_)) => Ordering::Greater,
        }
    }
}

impl Hash for Frequency {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Frequency::Lattice(k) => {
                0u8.hash(state);
                k.hash(state);
            }
            Frequency::Real(l) => {
                1u8.hash(state);
                l.to_bits().hash(state);
            }
        }
    }
}

/// Whether a spectrum lives on `Z^d` or on the real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumKind {
    Lattice { dim: usize },
    Real,
}

/// A finite trigonometric sum `sum_k c_k e^{i(k, x)}`, immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    kind: SpectrumKind,
    entries: Vec<(Frequency, Complex64)>,
}

fn check_coef(c: Complex64) -> Result<()> {
    if c.re.is_finite() && c.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("non-finite coefficient {c}")))
    }
}

impl Spectrum {
    fn from_entries(kind: SpectrumKind, mut entries: Vec<(Frequency, Complex64)>) -> Result<Self> {
        for (_, c) in &entries {
            check_coef(*c)?;
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::domain(format!("duplicate frequency {:?}", w[0].0)));
        }
        Ok(Spectrum { kind, entries })
    }

    /// Lattice spectrum on `Z^dim`.
    pub fn lattice(dim: usize, entries: impl IntoIterator<Item = (Vec<i64>, Complex64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("lattice dimension must be at least 1"));
        }
        let mut out = Vec::new();
        for (k, c) in entries {
            if k.len() != dim {
                return Err(Error::domain(format!("index {k:?} is not in Z^{dim}")));
            }
            out.push((Frequency::Lattice(k), c));
        }
        Self::from_entries(SpectrumKind::Lattice { dim }, out)
    }

    /// Lattice spectrum on `Z`.
    pub fn lattice_1d(entries: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        Self::lattice(1, entries.into_iter().map(|(k, c)| (vec![k], c)))
    }

    /// Real-frequency spectrum. `-0.0` is stored as `0.0`.
    pub fn real(entries: impl IntoIterator<Item = (f64, Complex64)>) -> Result<Self> {
        let mut out = Vec::new();
        for (l, c) in entries {
            if !l.is_finite() {
                return Err(Error::domain(format!("non-finite frequency {l}")));
            }
            out.push((Frequency::Real(if l == 0.0 { 0.0 } else { l }), c));
        }
        Self::from_entries(SpectrumKind::Real, out)
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn dim(&self) -> Option<usize> {
        match self.kind {
            SpectrumKind::Lattice { dim } => Some(dim),
            SpectrumKind::Real => None,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in ascending frequency order.
    pub fn entries(&self) -> &[(Frequency, Complex64)] {
        &self.entries
    }

    pub fn coefficient(&self, k: &Frequency) -> Complex64 {
        self.entries.binary_search_by(|e| e.0.cmp(k)).map(|i| self.entries[i].1).unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &Frequency> {
        self.entries.iter().map(|e| &e.0)
    }

    /// Coefficient-wise map preserving the support.
    pub fn map(&self, f: impl Fn(&Frequency, Complex64) -> Complex64) -> Result<Spectrum> {
        let entries = self.entries.iter().map(|(k, c)| (k.clone(), f(k, *c))).collect();
        Self::from_entries(self.kind, entries)
    }

    pub fn scale(&self, c: Complex64) -> Spectrum {
        Spectrum { kind: self.kind, entries: self.entries.iter().map(|(k, a)| (k.clone(), a * c)).collect() }
    }

    /// `self - other`; both must have the same kind.
    pub fn sub(&self, other: &Spectrum) -> Result<Spectrum> {
        if self.kind != other.kind {
            return Err(Error::domain("spectra of different kinds"));
        }
        let mut entries: Vec<(Frequency, Complex64)> = self.entries.clone();
        for (k, c) in &other.entries {
            match entries.binary_search_by(|e| e.0.cmp(k)) {
                Ok(i) => entries[i].1 -= c,
                Err(i) => entries.insert(i, (k.clone(), -c)),
            }
        }
        Ok(Spectrum { kind: self.kind, entries })
    }

    /// Pairs `(lambda, coefficient)` for one-dimensional spectra.
    pub fn scalar_entries(&self) -> Result<Vec<(f64, Complex64)>> {
        self.entries
            .iter()
            .map(|(k, c)| {
                k.scalar().map(|l| (l, *c)).ok_or_else(|| Error::domain("operation needs a one-dimensional spectrum"))
            })
            .collect()
    }

    /// Symmetric view: terms grouped by `|lambda|` ascending, with the
    /// coefficients at `+lambda` and `-lambda`. Index 0 is `lambda = 0`
    /// when the spectrum contains it.
    pub fn symmetric_view(&self) -> Result<Vec<SymmetricTerm>> {
        let mut terms: Vec<SymmetricTerm> = Vec::new();
        let mut pairs = self.scalar_entries()?;
        pairs.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()));
        for (l, c) in pairs {
            let lambda = l.abs();
            let slot = match terms.last_mut() {
                Some(t) if t.lambda == lambda => t,
                _ => {
                    terms.push(SymmetricTerm { lambda, plus: Complex64::default(), minus: Complex64::default() });
                    terms.last_mut().expect("just pushed")
                }
            };
            if l < 0.0 {
                slot.minus = c;
            } else {
                slot.plus = c;
            }
        }
        Ok(terms)
    }

    pub fn from_json_str(s: &str) -> Result<Spectrum> {
        let file: SpectrumFile = serde_json::from_str(s)?;
        file.into_spectrum()
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Spectrum> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        let file = match self.kind {
            SpectrumKind::Lattice { dim } => SpectrumFile::Lattice {
                d: dim,
                entries: self
                    .entries
                    .iter()
                    .map(|(k, c)| LatticeEntry {
                        k: k.as_lattice().expect("lattice kind").to_vec(),
                        re: c.re,
                        im: c.im,
                    })
                    .collect(),
            },
            SpectrumKind::Real => SpectrumFile::Real {
                entries: self
                    .entries
                    .iter()
                    .map(|(k, c)| RealEntry { lambda: k.scalar().expect("real kind"), re: c.re, im: c.im })
                    .collect(),
            },
        };
        serde_json::to_string(&file).expect("spectrum serializes")
    }
}

/// One `|lambda|` group of a one-dimensional spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricTerm {
    pub lambda: f64,
    pub plus: Complex64,
    pub minus: Complex64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SpectrumFile {
    Lattice { d: usize, entries: Vec<LatticeEntry> },
    Real { entries: Vec<RealEntry> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeEntry {
    k: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RealEntry {
    lambda: f64,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl SpectrumFile {
    fn into_spectrum(self) -> Result<Spectrum> {
        match self {
            SpectrumFile::Lattice { d, entries } => {
                Spectrum::lattice(d, entries.into_iter().map(|e| (e.k, Complex64::new(e.re, e.im))))
            }
            SpectrumFile::Real { entries } => {
                Spectrum::real(entries.into_iter().map(|e| (e.lambda, Complex64::new(e.re, e.im))))
            }
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && !p.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(format!("exponent p = {p} must be positive")))
    }
}

/// `sum |c|^p` over the coefficients selected by `keep`, or the sup when `p = inf`.
fn power_sum<'a>(coefs: impl Iterator<Item = &'a Complex64>, p: f64) -> Result<f64> {
    check_p(p)?;
    let mut acc = Compensated::new();
    let mut sup = 0.0f64;
    for c in coefs {
        check_coef(*c)?;
        let a = c.norm();
        if p.is_infinite() {
            sup = sup.max(a);
        } else {
            acc.add(a.powf(p));
        }
    }
    Ok(if p.is_infinite() { sup } else { acc.value() })
}

fn root(s: f64, p: f64) -> f64 {
    if p.is_infinite() || p == 1.0 {
        s
    } else {
        s.powf(1.0 / p)
    }
}

/// `S^p` / `BS^p` norm: the `l_p` norm of the coefficients (`p = inf` gives the sup).
pub fn sp_norm(f: &Spectrum, p: f64) -> Result<f64> {
    Ok(root(power_sum(f.entries.iter().map(|e| &e.1), p)?, p))
}

/// `sum |c|^p` without the root; the `p`-th power of [`sp_norm`].
pub fn sp_norm_pow(f: &Spectrum, p: f64) -> Result<f64> {
    power_sum(f.entries.iter().map(|e| &e.1), p)
}

/// Restriction of `f` to `region`, the best approximation from that region.
pub fn partial_sum(f: &Spectrum, region: impl Fn(&Frequency) -> bool) -> Spectrum {
    Spectrum { kind: f.kind, entries: f.entries.iter().filter(|e| region(&e.0)).cloned().collect() }
}

/// `p`-th power of the best approximation error from `gamma`.
pub fn best_tail_approx_pow(f: &Spectrum, gamma: impl Fn(&Frequency) -> bool, p: f64) -> Result<f64> {
    power_sum(f.entries.iter().filter(|e| !gamma(&e.0)).map(|e| &e.1), p)
}

/// Best approximation error of `f` by polynomials with spectrum in `gamma`.
pub fn best_tail_approx(f: &Spectrum, gamma: impl Fn(&Frequency) -> bool, p: f64) -> Result<f64> {
    Ok(root(best_tail_approx_pow(f, gamma, p)?, p))
}

/// Membership predicate for an explicit index set.
pub fn in_set(set: &HashSet<Frequency>) -> impl Fn(&Frequency) -> bool + '_ {
    move |k| set.contains(k)
}

/// Outcome of [`greedy_select`].
#[derive(Clone, Debug, PartialEq)]
pub struct GreedySelection {
    /// The retained frequencies in selection order.
    pub selected: Vec<Frequency>,
    /// Error of the greedy approximant.
    pub value: f64,
    /// True when equal magnitudes straddle the cut, so the set is not unique.
    pub tie: bool,
}

/// Best `n`-term approximation: keep the `n` largest coefficients.
pub fn greedy_select(f: &Spectrum, n: usize, p: f64) -> Result<GreedySelection> {
    check_p(p)?;
    let mut order: Vec<(usize, f64)> = f.entries.iter().enumerate().map(|(i, e)| (i, e.1.norm())).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| f.entries[a.0].0.tie_break_cmp(&f.entries[b.0].0)));
    let n = n.min(order.len());
    let tie = n > 0 && n < order.len() && order[n - 1].1 == order[n].1;
    let selected: Vec<Frequency> = order[..n].iter().map(|&(i, _)| f.entries[i].0.clone()).collect();
    let value = root(power_sum(order[n..].iter().map(|&(i, _)| &f.entries[i].1), p)?, p);
    Ok(GreedySelection { selected, value, tie })
}

/// Difference scheme `Delta^Theta_h f(t) = sum_j theta_j f(t - j h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceScheme {
    theta: Vec<Complex64>,
}

impl DifferenceScheme {
    /// Weights must sum to zero and not all vanish.
    pub fn new(theta: Vec<Complex64>) -> Result<Self> {
        let total: Complex64 = theta.iter().sum();
        let scale: f64 = theta.iter().map(|t| t.norm()).sum();
        if scale == 0.0 {
            return Err(Error::domain("difference weights are all zero"));
        }
        if total.norm() > 1e-12 * scale {
            return Err(Error::domain("difference weights must sum to zero"));
        }
        Ok(DifferenceScheme { theta })
    }

    pub fn from_real(theta: &[f64]) -> Result<Self> {
        Self::new(theta.iter().map(|&t| Complex64::new(t, 0.0)).collect())
    }

    /// Alternating binomial weights `(-1)^j C(m, j)`, the classical `m`-th difference.
    pub fn binomial(m: u32) -> Self {
        let mut theta = Vec::with_capacity(m as usize + 1);
        let mut c = 1.0f64;
        for j in 0..=m {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            theta.push(Complex64::new(sign * c, 0.0));
            c = c * f64::from(m - j) / f64::from(j + 1);
        }
        DifferenceScheme { theta }
    }

    pub fn theta(&self) -> &[Complex64] {
        &self.theta
    }

    /// The multiplier `sum_j theta_j e^{-i j t}`.
    pub fn symbol(&self, t: f64) -> Complex64 {
        self.theta.iter().enumerate().map(|(j, th)| th * Complex64::from_polar(1.0, -(j as f64) * t)).sum()
    }
}

/// `|sum_j theta_j e^{-i j lambda h}|`.
pub fn difference_multiplier(scheme: &DifferenceScheme, lambda: f64, h: f64) -> f64 {
    scheme.symbol(lambda * h).norm()
}

/// `sin(t)/t` with `sinc 0 = 1`.
pub fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sin() / t
    }
}

/// `(1 - sinc(lambda h))^m`, the Steklov multiplier.
pub fn steklov_multiplier(m: u32, lambda: f64, h: f64) -> f64 {
    (1.0 - sinc(lambda * h)).powi(m as i32)
}

/// Applies the difference operator in coefficient space.
pub fn apply_difference(f: &Spectrum, scheme: &DifferenceScheme, h: f64) -> Result<Spectrum> {
    f.scalar_entries()?;
    f.map(|k, c| c * scheme.symbol(k.scalar().expect("checked above") * h))
}

/// Applies `(F_h - I)^m`, where the Steklov mean `F_h` multiplies `e^{i lambda x}`
/// by `sinc(lambda h)`, by expanding the binomial.
pub fn apply_steklov(f: &Spectrum, m: u32, h: f64) -> Result<Spectrum> {
    f.scalar_entries()?;
    f.map(|k, c| {
        let s = sinc(k.scalar().expect("checked above") * h);
        let mut binom = 1.0f64;
        let mut total = 0.0;
        for j in 0..=m {
            let sign = if (m - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            total += sign * binom * s.powi(j as i32);
            binom = binom * f64::from(m - j) / f64::from(j + 1);
        }
        c * total
    })
}

/// `2^alpha |sin(t/2)|^alpha`.
pub fn classical_multiplier(alpha: f64, t: f64) -> f64 {
    (2.0 * (t / 2.0).sin().abs()).powf(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn one_d(pairs: &[(i64, f64)]) -> Spectrum {
        Spectrum::lattice_1d(pairs.iter().map(|&(k, a)| (k, c(a)))).unwrap()
    }

    #[test]
    fn norms_of_small_sums() {
        assert_eq!(sp_norm(&Spectrum::real([(1.0, c(1.0))]).unwrap(), 2.0).unwrap(), 1.0);
        assert_eq!(sp_norm(&one_d(&[(0, 1.0), (1, 0.5), (2, 0.25)]), 1.0).unwrap(), 1.75);
        let f = one_d(&[(-1, 1.0), (1, 1.0)]);
        assert!((sp_norm(&f, 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(sp_norm(&one_d(&[(0, 3.0), (4, -5.0)]), f64::INFINITY).unwrap(), 5.0);
    }

    #[test]
    fn partial_sums_and_tails() {
        let f = one_d(&[(0, 1.0), (1, 2.0)]);
        assert_eq!(partial_sum(&f, |k| k.scalar() == Some(0.0)), one_d(&[(0, 1.0)]));
        assert_eq!(partial_sum(&f, |_| true), f);
        let g = Spectrum::lattice_1d([(-1, Complex64::i()), (1, c(1.0)), (2, c(3.0))]).unwrap();
        let s = partial_sum(&g, |k| k.scalar().unwrap().abs() <= 1.0);
        assert_eq!(sp_norm(&g.sub(&s).unwrap(), 1.0).unwrap(), 3.0);
    }

    #[test]
    fn tail_examples() {
        let f = one_d(&[(1, 1.0)]);
        assert_eq!(best_tail_approx(&f, |k| k.scalar() == Some(1.0), 3.0).unwrap(), 0.0);
        let g = one_d(&[(-1, 1.0), (0, 1.0), (1, 1.0)]);
        assert_eq!(best_tail_approx(&g, |k| k.scalar() == Some(0.0), 1.0).unwrap(), 2.0);
        let h = one_d(&(0..=5).map(|k| (k, 2f64.powi(-(k as i32)))).collect::<Vec<_>>());
        let v = best_tail_approx(&h, |k| k.scalar().unwrap() <= 1.0, 1.0).unwrap();
        assert_eq!(v, 0.46875);
    }

    #[test]
    fn greedy_examples() {
        let f = one_d(&[(0, 3.0), (1, 1.0), (2, 2.0)]);
        let g = greedy_select(&f, 2, 1.0).unwrap();
        assert_eq!(g.selected, vec![Frequency::Lattice(vec![0]), Frequency::Lattice(vec![2])]);
        assert_eq!(g.value, 1.0);
        assert!(!g.tie);
        assert_eq!(greedy_select(&f, 3, 1.0).unwrap().value, 0.0);

        let f = one_d(&[(-1, 1.0), (1, 1.0), (-2, 0.5), (2, 0.5), (-3, 0.25), (3, 0.25)]);
        let g = greedy_select(&f, 3, 2.0).unwrap();
        assert!(g.tie);
        assert_eq!(g.selected[2], Frequency::Lattice(vec![-2]));
        // Remaining: 1/2 at +2 and 1/4 at +-3.
        assert!((g.value - (0.375f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn multipliers() {
        let d1 = DifferenceScheme::from_real(&[1.0, -1.0]).unwrap();
        assert!((difference_multiplier(&d1, 1.0, PI) - 2.0).abs() < 1e-15);
        let d2 = DifferenceScheme::from_real(&[1.0, -2.0, 1.0]).unwrap();
        assert!((difference_multiplier(&d2, 1.0, PI / 2.0) - 2.0).abs() < 1e-14);
        assert!(difference_multiplier(&d2, 3.0, 0.0).abs() < 1e-15);
        assert_eq!(steklov_multiplier(3, 2.0, 0.0), 0.0);
        assert!((steklov_multiplier(1, 1.0, PI) - 1.0).abs() < 1e-15);
        assert!((steklov_multiplier(2, 1.0, PI / 2.0) - (1.0 - 2.0 / PI).powi(2)).abs() < 1e-15);
        assert!(DifferenceScheme::from_real(&[1.0, 1.0]).is_err());
        assert!(DifferenceScheme::from_real(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn binomial_scheme_is_classical_difference() {
        for m in 1..=5 {
            let s = DifferenceScheme::binomial(m);
            for i in 0..200 {
                let t = -7.0 + 0.07 * i as f64;
                let lhs = difference_multiplier(&s, 1.0, t);
                let rhs = classical_multiplier(f64::from(m), t);
                assert!((lhs - rhs).abs() < 1e-12, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn json_round_trip_and_duplicates() {
        let s = r#"{"kind":"lattice","d":2,"entries":[{"k":[1,0],"re":1.0,"im":0.0},{"k":[0,-1],"re":0.5,"im":2.0}]}"#;
        let f = Spectrum::from_json_str(s).unwrap();
        assert_eq!(f.dim(), Some(2));
        assert_eq!(Spectrum::from_json_str(&f.to_json_string()).unwrap(), f);
        let dup = r#"{"kind":"real","entries":[{"lambda":1.5,"re":1.0},{"lambda":1.5,"re":2.0}]}"#;
        assert!(matches!(Spectrum::from_json_str(dup), Err(Error::Domain(_))));
        let bad_dim = r#"{"kind":"lattice","d":2,"entries":[{"k":[1],"re":1.0}]}"#;
        assert!(Spectrum::from_json_str(bad_dim).is_err());
    }

    #[test]
    fn symmetric_view_groups_pairs() {
        let f = Spectrum::real([(-2.5, c(1.0)), (0.0, c(3.0)), (2.5, c(2.0)), (1.0, c(4.0))]).unwrap();
        let v = f.symmetric_view().unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[0].lambda, 0.0);
        assert_eq!((v[2].plus, v[2].minus), (c(2.0), c(1.0)));
    }

    #[test]
    fn steklov_routes_agree() {
        let f = Spectrum::real([(0.5, c(1.0)), (-3.0, Complex64::new(0.2, 0.7)), (7.25, c(-0.4))]).unwrap();
        for m in 1..=4 {
            for &h in &[0.01, 0.3, 1.7] {
                let g = apply_steklov(&f, m, h).unwrap();
                for ((l, a), (_, b)) in f.scalar_entries().unwrap().iter().zip(g.scalar_entries().unwrap()) {
                    let want = a.norm() * steklov_multiplier(m, *l, h);
                    assert!((b.norm() - want).abs() < 1e-12);
                }
            }
        }
    }

    fn arb_spectrum(max: usize) -> impl Strategy<Value = Spectrum> {
        proptest::collection::btree_map(-20i64..20, (-2.0f64..2.0, -2.0f64..2.0), 0..max)
            .prop_map(|m| Spectrum::lattice_1d(m.into_iter().map(|(k, (a, b))| (k, Complex64::new(a, b)))).unwrap())
    }

    proptest! {
        #[test]
        fn norm_power_is_coordinate_sum(f in arb_spectrum(12), p in 1.0f64..4.0) {
            let direct: f64 = f.entries().iter().map(|e| e.1.norm().powf(p)).sum();
            prop_assert!((sp_norm(&f, p).unwrap().powf(p) - direct).abs() < 1e-10 * (1.0 + direct));
        }

        #[test]
        fn tail_is_monotone_in_gamma(f in arb_spectrum(12), a in -20i64..20, b in 0i64..10, p in 1.0f64..3.0) {
            let small = |k: &Frequency| { let x = k.scalar().unwrap() as i64; x >= a && x < a + b };
            let big = |k: &Frequency| { let x = k.scalar().unwrap() as i64; x >= a - 3 && x < a + b + 3 };
            prop_assert!(best_tail_approx(&f, big, p).unwrap() <= best_tail_approx(&f, small, p).unwrap());
        }

        #[test]
        fn perturbing_partial_sum_increases_error(
            f in arb_spectrum(10), cut in 0.0f64..20.0, dr in -1.0f64..1.0, di in -1.0f64..1.0, p in 1.0f64..3.0, pick in 0usize..10
        ) {
            let region = |k: &Frequency| k.scalar().unwrap().abs() <= cut;
            let s = partial_sum(&f, region);
            prop_assume!(!s.is_empty() && (dr != 0.0 || di != 0.0));
            let base = sp_norm(&f.sub(&s).unwrap(), p).unwrap();
            let target = s.entries()[pick % s.len()].0.clone();
            let g = s.map(|k, c| if *k == target { c + Complex64::new(dr, di) } else { c }).unwrap();
            prop_assert!(sp_norm(&f.sub(&g).unwrap(), p).unwrap() > base);
        }

        #[test]
        fn scaling_norm(f in arb_spectrum(8), s in -3.0f64..3.0) {
            let g = f.scale(Complex64::new(s, 0.0));
            prop_assert!((sp_norm(&g, 2.0).unwrap() - s.abs() * sp_norm(&f, 2.0).unwrap()).abs() < 1e-12);
        }
    }
}
