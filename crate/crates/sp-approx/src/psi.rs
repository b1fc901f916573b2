//! Multiplier systems `psi` on `Z^d`, their characteristic sequences and
//! decreasing rearrangements.
//!
//! Three families are supported: products of one-axis profiles, radial
//! systems `psi(|k|_r)`, and an explicit rearranged sequence placed on `Z`
//! through the zigzag order `0, 1, -1, 2, -2, ...`. Each family carries a
//! bound on `sup |psi|` outside a box, which is what makes every enumeration
//! below certified rather than heuristic.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::Compensated;
use crate::spectrum::{Frequency, Spectrum};

/// Scalar nonincreasing profile `psi(t)` on `t >= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile {
    /// `max(t, 1)^s` with `s < 0`.
    Pow(f64),
    /// `b^t` with `0 < b < 1`.
    Geometric(f64),
    /// `exp(-c t)` with `c > 0`.
    Exp(f64),
}

impl Profile {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Profile::Pow(s) => t.max(1.0).powf(s),
            Profile::Geometric(b) => b.powf(t),
            Profile::Exp(c) => (-c * t).exp(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Profile::Pow(s) => s < 0.0 && s.is_finite(),
            Profile::Geometric(b) => b > 0.0 && b < 1.0,
            Profile::Exp(c) => c > 0.0 && c.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("profile {self:?} does not decay to zero")))
        }
    }

    /// Ratio `b` with `psi(k) = b^k` for the exponential families.
    fn geometric_base(&self) -> Option<f64> {
        match *self {
            Profile::Pow(_) => None,
            Profile::Geometric(b) => Some(b),
            Profile::Exp(c) => Some((-c).exp()),
        }
    }
}

/// Values of an explicit sequence beyond its table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailRule {
    /// Zero beyond the table. Useful in tests only: such a `psi` is not positive.
    Zero,
    /// `c * r^(-s)` at rank `r`.
    Power { c: f64, s: f64 },
    /// `first * ratio^(r - L - 1)` at rank `r > L`.
    Geometric { first: f64, ratio: f64 },
}

impl TailRule {
    fn at(&self, rank: usize, table_len: usize) -> f64 {
        match *self {
            TailRule::Zero => 0.0,
            TailRule::Power { c, s } => c * (rank as f64).powf(-s),
            TailRule::Geometric { first, ratio } => first * ratio.powi((rank - table_len - 1) as i32),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PsiKind {
    Product { axes: Vec<Profile> },
    Radial { dim: usize, profile: Profile, r: f64 },
    Explicit { table: Vec<f64>, tail: TailRule },
}

/// Canonical evaluation of product magnitudes so that mathematically equal
/// products compare equal as doubles.
#[derive(Clone, Debug, PartialEq)]
enum ProductEval {
    /// All axes `Pow(m_j * b)`: value `(prod k_j'^{m_j})^b` from an exact integer.
    IntegerPow {
        b: f64,
        mult: Vec<u32>,
    },
    /// All axes share the ratio `b`: value `b^{sum |k_j|}`.
    SharedBase(f64),
    Generic,
}

impl ProductEval {
    fn detect(axes: &[Profile]) -> Self {
        let pows: Option<Vec<f64>> =
            axes.iter().map(|a| if let Profile::Pow(s) = a { Some(*s) } else { None }).collect();
        if let Some(pows) = pows {
            let top = pows.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            for q in 1..=12u32 {
                let b = top / f64::from(q);
                let mult: Vec<f64> = pows.iter().map(|s| s / b).collect();
                if mult.iter().all(|m| (m - m.round()).abs() < 1e-9 && m.round() >= 1.0) {
                    return ProductEval::IntegerPow { b, mult: mult.iter().map(|m| m.round() as u32).collect() };
                }
            }
            return ProductEval::Generic;
        }
        let bases: Option<Vec<f64>> = axes.iter().map(|a| a.geometric_base()).collect();
        match bases {
            Some(bs) if bs.windows(2).all(|w| w[0] == w[1]) => ProductEval::SharedBase(bs[0]),
            _ => ProductEval::Generic,
        }
    }
}

/// A multiplier system `psi` on `Z^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiSystem {
    kind: PsiKind,
    eval: ProductEval,
    phase: Option<f64>,
    box_limit: Option<i64>,
}

impl PsiSystem {
    fn build(kind: PsiKind) -> Self {
        let eval = match &kind {
            PsiKind::Product { axes } => ProductEval::detect(axes),
            _ => ProductEval::Generic,
        };
        PsiSystem { kind, eval, phase: None, box_limit: None }
    }

    /// `psi(k) = prod_j psi_j(k_j)`.
    pub fn product(axes: Vec<Profile>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::domain("product system needs at least one axis"));
        }
        for a in &axes {
            a.validate()?;
        }
        Ok(Self::build(PsiKind::Product { axes }))
    }

    /// `psi(k) = profile(|k|_r)` on `Z^dim`, `r` in `(0, inf]`.
    pub fn radial(dim: usize, profile: Profile, r: f64) -> Result<Self> {
        profile.validate()?;
        if dim == 0 || !(r > 0.0) {
            return Err(Error::domain("radial system needs dim >= 1 and r > 0"));
        }
        Ok(Self::build(PsiKind::Radial { dim, profile, r }))
    }

    /// Explicit sequence: `table[r-1]` at rank `r <= L`, the tail rule after.
    pub fn explicit(table: Vec<f64>, tail: TailRule) -> Result<Self> {
        if table.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::domain("explicit table entries must be positive and finite"));
        }
        let ok = match tail {
            TailRule::Zero => !table.is_empty(),
            TailRule::Power { c, s } => c > 0.0 && s > 0.0,
            TailRule::Geometric { first, ratio } => first > 0.0 && ratio > 0.0 && ratio < 1.0,
        };
        if !ok {
            return Err(Error::domain(format!("invalid explicit tail rule {tail:?}")));
        }
        Ok(Self::build(PsiKind::Explicit { table, tail }))
    }

    /// Hyperbolic system `prod 1/k_j'` on `Z^d`.
    pub fn hyperbolic(d: usize) -> Self {
        Self::product(vec![Profile::Pow(-1.0); d]).expect("valid axes")
    }

    /// Rearranged sequence `1/k`.
    pub fn harmonic() -> Self {
        Self::explicit(Vec::new(), TailRule::Power { c: 1.0, s: 1.0 }).expect("valid")
    }

    /// Rearranged sequence `first * ratio^(k-1)`.
    pub fn geometric_sequence(first: f64, ratio: f64) -> Result<Self> {
        Self::explicit(Vec::new(), TailRule::Geometric { first, ratio })
    }

    /// Attaches the phase `e^{-i beta pi/2 sgn k}`; magnitudes are unchanged.
    pub fn with_phase(mut self, beta: f64) -> Self {
        self.phase = Some(beta);
        self
    }

    /// Overrides the certification box `|k|_inf <= limit`.
    pub fn with_box_limit(mut self, limit: i64) -> Self {
        self.box_limit = Some(limit.max(1));
        self
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            PsiKind::Product { axes } => axes.len(),
            PsiKind::Radial { dim, .. } => *dim,
            PsiKind::Explicit { .. } => 1,
        }
    }

    /// True for the test-only explicit systems that vanish beyond a table.
    pub fn is_finitely_supported(&self) -> bool {
        matches!(self.kind, PsiKind::Explicit { tail: TailRule::Zero, .. })
    }

    pub fn box_limit(&self) -> i64 {
        self.box_limit.unwrap_or(match self.dim() {
            1 => 1 << 20,
            2 => 1 << 10,
            3 => 1 << 7,
            _ => 1 << 4,
        })
    }

    /// `|psi(k)|`.
    pub fn magnitude(&self, k: &[i64]) -> f64 {
        match &self.kind {
            PsiKind::Product { axes } => match &self.eval {
                ProductEval::IntegerPow { b, mult } => {
                    let mut prod: u128 = 1;
                    for (kj, m) in k.iter().zip(mult) {
                        let base = kj.unsigned_abs().max(1) as u128;
                        prod = prod.saturating_mul(base.saturating_pow(*m));
                    }
                    (prod as f64).powf(*b)
                }
                ProductEval::SharedBase(base) => {
                    let total: u64 = k.iter().map(|x| x.unsigned_abs()).sum();
                    base.powf(total as f64)
                }
                ProductEval::Generic => {
                    axes.iter().zip(k).fold(1.0, |acc, (a, kj)| acc * a.eval(kj.unsigned_abs() as f64))
                }
            },
            PsiKind::Radial { profile, r, .. } => profile.eval(lattice_norm(k, *r)),
            PsiKind::Explicit { table, tail } => explicit_value(table, tail, zigzag_rank(k[0])),
        }
    }

    /// `psi(k)` including the phase.
    pub fn value(&self, k: &[i64]) -> Complex64 {
        let m = self.magnitude(k);
        match self.phase {
            None => Complex64::new(m, 0.0),
            Some(beta) => {
                let sgn = k.iter().find(|&&x| x != 0).map_or(0.0, |&x| x.signum() as f64);
                Complex64::from_polar(m, -beta * std::f64::consts::FRAC_PI_2 * sgn)
            }
        }
    }

    /// `sup_{|k|_inf > r} |psi(k)|`, the certified tail bound.
    pub fn sup_outside_box(&self, r: i64) -> f64 {
        let t = (r + 1) as f64;
        match &self.kind {
            PsiKind::Product { axes } => {
                let heads: Vec<f64> = axes.iter().map(|a| a.eval(0.0)).collect();
                let head_prod: f64 = heads.iter().product();
                axes.iter().zip(&heads).map(|(a, h)| head_prod / h * a.eval(t)).fold(0.0, f64::max)
            }
            PsiKind::Radial { profile, .. } => profile.eval(t),
            PsiKind::Explicit { table, tail } => {
                // Ranks of indices with |k| > r start at 2r + 2.
                let first = 2 * (r as usize) + 2;
                let table_sup = table.iter().skip(first - 1).cloned().fold(0.0, f64::max);
                table_sup.max(explicit_value(table, tail, first.max(table.len() + 1)))
            }
        }
    }

    /// `nu(n) = sup_{|k| >= n} |psi(k)|` for one-dimensional systems.
    pub fn nu(&self, n: i64) -> Result<f64> {
        if self.dim() != 1 {
            return Err(Error::domain("nu(n) is defined for one-dimensional systems"));
        }
        Ok(match &self.kind {
            PsiKind::Explicit { .. } => self.magnitude(&[n]).max(self.magnitude(&[-n])).max(self.sup_outside_box(n)),
            _ => self.magnitude(&[n]).max(self.magnitude(&[-n])),
        })
    }

    /// Lazy enumeration of `(|psi(k)|, k)` in nonincreasing order.
    pub fn enumerate(&self) -> Enumerator {
        let state = match &self.kind {
            PsiKind::Product { .. } => {
                let d = self.dim();
                let start = vec![0u32; d];
                let mut heap = BinaryHeap::new();
                let mut visited = HashSet::new();
                visited.insert(start.clone());
                heap.push(HeapItem { value: self.magnitude(&vec![0; d]), ranks: start });
                EnumState::Product { heap, visited, truncated: f64::NEG_INFINITY }
            }
            PsiKind::Radial { .. } => EnumState::Radial { r_box: 0, upper: f64::INFINITY, buffer: VecDeque::new() },
            PsiKind::Explicit { table, .. } => {
                let mut sorted: Vec<(f64, usize)> = table.iter().enumerate().map(|(i, v)| (*v, i + 1)).collect();
                sorted.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
                EnumState::Explicit { sorted, pos: 0, next_tail: table.len() + 1 }
            }
        };
        Enumerator { psi: self.clone(), state }
    }
}

/// `|k|_r`, evaluated over sorted absolute coordinates.
pub fn lattice_norm(k: &[i64], r: f64) -> f64 {
    let mut a: Vec<u64> = k.iter().map(|x| x.unsigned_abs()).collect();
    a.sort_unstable();
    if r.is_infinite() {
        a.last().copied().unwrap_or(0) as f64
    } else if r == 1.0 {
        a.iter().sum::<u64>() as f64
    } else if r == 2.0 {
        (a.iter().map(|x| x * x).sum::<u64>() as f64).sqrt()
    } else {
        a.iter().map(|&x| (x as f64).powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

fn explicit_value(table: &[f64], tail: &TailRule, rank: usize) -> f64 {
    if rank <= table.len() {
        table[rank - 1]
    } else {
        tail.at(rank, table.len())
    }
}

/// Rank of `k` in the order `0, 1, -1, 2, -2, ...` (1-based).
pub fn zigzag_rank(k: i64) -> usize {
    match k.cmp(&0) {
        Ordering::Equal => 1,
        Ordering::Greater => 2 * k as usize,
        Ordering::Less => 2 * k.unsigned_abs() as usize + 1,
    }
}

/// Inverse of [`zigzag_rank`].
pub fn zigzag_index(rank: usize) -> i64 {
    if rank == 1 {
        0
    } else if rank.is_multiple_of(2) {
        (rank / 2) as i64
    } else {
        -(((rank - 1) / 2) as i64)
    }
}

/// Per-axis rank order `0, 1, -1, 2, -2, ...` starting at rank 0.
fn axis_index(rank: u32) -> i64 {
    zigzag_index(rank as usize + 1)
}

#[derive(Clone, Debug)]
struct HeapItem {
    value: f64,
    ranks: Vec<u32>,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value).then_with(|| other.ranks.cmp(&self.ranks))
    }
}

#[derive(Clone, Debug)]
enum EnumState {
    Product { heap: BinaryHeap<HeapItem>, visited: HashSet<Vec<u32>>, truncated: f64 },
    Radial { r_box: i64, upper: f64, buffer: VecDeque<(f64, Vec<i64>)> },
    Explicit { sorted: Vec<(f64, usize)>, pos: usize, next_tail: usize },
}

/// Nonincreasing stream of `(|psi(k)|, k)`. Clone to fork.
#[derive(Clone, Debug)]
pub struct Enumerator {
    psi: PsiSystem,
    state: EnumState,
}

impl Enumerator {
    /// Next index in nonincreasing order of `|psi|`.
    pub fn next_entry(&mut self) -> Result<(f64, Vec<i64>)> {
        let limit = self.psi.box_limit();
        match &mut self.state {
            EnumState::Product { heap, visited, truncated } => {
                let item = heap.pop().expect("product enumeration is infinite");
                if item.value <= *truncated {
                    return Err(Error::Certification(format!("product enumeration left the box |k| <= {limit}")));
                }
                for j in 0..item.ranks.len() {
                    let mut next = item.ranks.clone();
                    next[j] += 1;
                    if !visited.insert(next.clone()) {
                        continue;
                    }
                    let idx: Vec<i64> = next.iter().map(|&r| axis_index(r)).collect();
                    let value = self.psi.magnitude(&idx);
                    if idx[j].abs() > limit {
                        *truncated = truncated.max(value);
                    } else {
                        heap.push(HeapItem { value, ranks: next });
                    }
                }
                let idx = item.ranks.iter().map(|&r| axis_index(r)).collect();
                Ok((item.value, idx))
            }
            EnumState::Radial { r_box, upper, buffer } => {
                while buffer.is_empty() {
                    if *r_box >= limit {
                        return Err(Error::Certification(format!(
                            "radial enumeration needs a box larger than |k| <= {limit}"
                        )));
                    }
                    let new_r = if *r_box == 0 { 4.min(limit) } else { (*r_box * 2).min(limit) };
                    let bound = self.psi.sup_outside_box(new_r);
                    let mut stage: Vec<(f64, Vec<i64>)> = Vec::new();
                    for_each_in_box(self.psi.dim(), new_r, |k| {
                        let v = self.psi.magnitude(k);
                        if v <= *upper && v > bound {
                            stage.push((v, k.to_vec()));
                        }
                    });
                    stage.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
                    buffer.extend(stage);
                    *upper = bound;
                    *r_box = new_r;
                }
                Ok(buffer.pop_front().expect("nonempty"))
            }
            EnumState::Explicit { sorted, pos, next_tail } => {
                let PsiKind::Explicit { table, tail } = &self.psi.kind else { unreachable!() };
                let tail_v = tail.at(*next_tail, table.len());
                if *pos < sorted.len() && sorted[*pos].0 >= tail_v {
                    let (v, rank) = sorted[*pos];
                    *pos += 1;
                    Ok((v, vec![zigzag_index(rank)]))
                } else {
                    let rank = *next_tail;
                    *next_tail += 1;
                    Ok((tail_v, vec![zigzag_index(rank)]))
                }
            }
        }
    }
}

/// Calls `f` on every point of `{|k|_inf <= r}` in lexicographic order.
pub fn for_each_in_box(d: usize, r: i64, mut f: impl FnMut(&[i64])) {
    let mut k = vec![-r; d];
    loop {
        f(&k);
        let mut j = d;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if k[j] < r {
                k[j] += 1;
                break;
            }
            k[j] = -r;
        }
    }
}

/// Characteristic sequences: distinct levels `eps_n`, cumulative counts
/// `delta_n` and the level sets `g_n \ g_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSeq {
    eps: Vec<f64>,
    delta: Vec<usize>,
    levels: Vec<Vec<Vec<i64>>>,
    level_of: HashMap<Vec<i64>, usize>,
}

impl CharSeq {
    /// Builds from `(value, index)` pairs already sorted nonincreasingly and
    /// forming complete levels.
    pub fn from_sorted(entries: impl IntoIterator<Item = (f64, Vec<i64>)>) -> Self {
        let mut seq = CharSeq { eps: Vec::new(), delta: Vec::new(), levels: Vec::new(), level_of: HashMap::new() };
        for (v, k) in entries {
            seq.push(v, k);
        }
        seq
    }

    fn push(&mut self, v: f64, k: Vec<i64>) {
        if self.eps.last() != Some(&v) {
            self.eps.push(v);
            self.delta.push(self.delta.last().copied().unwrap_or(0));
            self.levels.push(Vec::new());
        }
        *self.delta.last_mut().expect("level exists") += 1;
        self.level_of.insert(k.clone(), self.eps.len());
        self.levels.last_mut().expect("level exists").push(k);
    }

    /// Number of complete levels.
    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn eps_list(&self) -> &[f64] {
        &self.eps
    }

    pub fn delta_list(&self) -> &[usize] {
        &self.delta
    }

    /// `eps_n`, 1-based.
    pub fn eps(&self, n: usize) -> f64 {
        self.eps[n - 1]
    }

    /// `delta_n` with `delta_0 = 0`.
    pub fn delta(&self, n: usize) -> usize {
        if n == 0 {
            0
        } else {
            self.delta[n - 1]
        }
    }

    /// Indices with `|psi(k)| = eps_n`.
    pub fn shell(&self, n: usize) -> &[Vec<i64>] {
        &self.levels[n - 1]
    }

    /// The level set `g_n`.
    pub fn level_set(&self, n: usize) -> impl Iterator<Item = &Vec<i64>> {
        self.levels[..n].iter().flatten()
    }

    /// Level `n` with `k` in `g_n \ g_{n-1}`, if computed.
    pub fn level_of(&self, k: &[i64]) -> Option<usize> {
        self.level_of.get(k).copied()
    }

    /// `psi~_k` for `k <= delta_N`.
    pub fn rearranged(&self, k: usize) -> Option<f64> {
        let n = self.delta.partition_point(|&d| d < k);
        self.eps.get(n).copied()
    }
}

/// How far [`build_charseq`] enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Upto {
    Levels(usize),
    Indices(usize),
}

/// Incremental characteristic-sequence builder.
#[derive(Clone, Debug)]
pub struct CharSeqBuilder {
    stream: Enumerator,
    pending: Option<(f64, Vec<i64>)>,
    seq: CharSeq,
}

impl CharSeqBuilder {
    pub fn new(psi: &PsiSystem) -> Self {
        CharSeqBuilder { stream: psi.enumerate(), pending: None, seq: CharSeq::from_sorted([]) }
    }

    /// Completes one more level.
    pub fn next_level(&mut self) -> Result<()> {
        let (v, k) = match self.pending.take() {
            Some(e) => e,
            None => self.stream.next_entry()?,
        };
        if v <= 0.0 {
            return Err(Error::Certification("psi vanishes beyond its table; no further levels".into()));
        }
        self.seq.push(v, k);
        loop {
            let (w, j) = self.stream.next_entry()?;
            if w == v {
                self.seq.push(w, j);
            } else {
                self.pending = Some((w, j));
                return Ok(());
            }
        }
    }

    pub fn seq(&self) -> &CharSeq {
        &self.seq
    }

    pub fn finish(self) -> CharSeq {
        self.seq
    }
}

/// Characteristic sequences of `psi`, certified complete.
pub fn build_charseq(psi: &PsiSystem, upto: Upto) -> Result<CharSeq> {
    let mut b = CharSeqBuilder::new(psi);
    match upto {
        Upto::Levels(0) | Upto::Indices(0) => return Err(Error::domain("upto must be at least 1")),
        Upto::Levels(n) => {
            while b.seq.len() < n {
                b.next_level()?;
            }
        }
        Upto::Indices(k) => {
            while b.seq.delta.last().copied().unwrap_or(0) < k {
                b.next_level()?;
            }
        }
    }
    Ok(b.finish())
}

/// Characteristic sequences covering every index in `support`, plus `extra` levels.
pub fn build_charseq_covering<'a>(
    psi: &PsiSystem,
    support: impl IntoIterator<Item = &'a [i64]>,
    extra: usize,
) -> Result<CharSeq> {
    let needed: Vec<&[i64]> = support.into_iter().collect();
    let mut b = CharSeqBuilder::new(psi);
    let mut covered = 0;
    while covered < needed.len() {
        b.next_level()?;
        covered = needed.iter().filter(|k| b.seq.level_of(k).is_some()).count();
    }
    for _ in 0..extra {
        b.next_level()?;
    }
    Ok(b.finish())
}

/// First `k` values of the decreasing rearrangement `psi~`.
pub fn rearrangement(psi: &PsiSystem, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::domain("rearrangement length must be at least 1"));
    }
    let mut e = psi.enumerate();
    (0..k).map(|_| e.next_entry().map(|(v, _)| v)).collect()
}

fn check_lattice(f: &Spectrum, psi: &PsiSystem) -> Result<()> {
    if f.dim() != Some(psi.dim()) {
        return Err(Error::domain(format!("psi acts on Z^{}; spectrum kind differs", psi.dim())));
    }
    Ok(())
}

/// `psi`-integral: coefficients multiplied by `psi(k)`.
pub fn psi_integral(f: &Spectrum, psi: &PsiSystem) -> Result<Spectrum> {
    check_lattice(f, psi)?;
    f.map(|k, c| c * psi.value(lattice_of(k)))
}

/// `psi`-derivative: coefficients divided by `psi(k)`.
pub fn psi_derivative(f: &Spectrum, psi: &PsiSystem) -> Result<Spectrum> {
    check_lattice(f, psi)?;
    if let Some(k) = f.support().find(|k| psi.magnitude(lattice_of(k)) == 0.0) {
        return Err(Error::domain(format!("psi vanishes at {k:?}")));
    }
    f.map(|k, c| c / psi.value(lattice_of(k)))
}

fn lattice_of(k: &Frequency) -> &[i64] {
    k.as_lattice().expect("lattice spectrum")
}

/// Default work budget of [`lattice_ball_count`].
pub const BALL_COUNT_BUDGET: u64 = 100_000_000;

/// Exact `#{k in Z^d : |k|_r <= m}` by enumeration of the box.
pub fn lattice_ball_count(d: usize, r: f64, m: u64, budget: u64) -> Result<u64> {
    if d == 0 || !(r > 0.0) {
        return Err(Error::domain("need d >= 1 and r > 0"));
    }
    let side = 2.0 * m as f64 + 1.0;
    if d as f64 * side.powi(d as i32) > budget as f64 {
        return Err(Error::Budget(format!("box of side {side} in dimension {d} exceeds work budget {budget}")));
    }
    let integer_r = r.is_finite() && r.fract() == 0.0 && r <= 8.0;
    let mlimit = if integer_r { (m as u128).pow(r as u32) } else { 0 };
    let flimit = (m as f64).powf(r);
    let mut count = 0u64;
    for_each_in_box(d, m as i64, |k| {
        let inside = if r.is_infinite() {
            true
        } else if integer_r {
            let s: u128 = k.iter().map(|x| (x.unsigned_abs() as u128).pow(r as u32)).sum();
            s <= mlimit
        } else {
            let mut a: Vec<f64> = k.iter().map(|x| x.unsigned_abs() as f64).collect();
            a.sort_by(f64::total_cmp);
            a.iter().map(|x| x.powf(r)).sum::<f64>() <= flimit
        };
        if inside {
            count += 1;
        }
    });
    Ok(count)
}

/// Volume `M_r` of the unit `r`-ball in `R^d`.
pub fn ball_volume(d: usize, r: f64) -> f64 {
    if r.is_infinite() {
        return 2f64.powi(d as i32);
    }
    use statrs::function::gamma::gamma;
    (2.0 * gamma(1.0 + 1.0 / r)).powi(d as i32) / gamma(1.0 + d as f64 / r)
}

/// A sum with a rigorous two-sided error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailSum {
    pub value: f64,
    pub error: f64,
}

/// Largest explicit summation range used by [`tail_sum`].
const TAIL_TERM_BUDGET: u64 = 20_000_000;

/// `sum_{r > start} c r^{-sigma}` as a midpoint of the integral-test interval.
fn power_tail(c: f64, sigma: f64, start: u64, tol: f64) -> Result<TailSum> {
    if !(sigma > 1.0) {
        return Err(Error::Convergence(format!("terms decay like r^-{sigma}; the sum diverges")));
    }
    let cutoff = ((c / tol).powf(1.0 / sigma).ceil() as u64).max(start);
    if cutoff - start > TAIL_TERM_BUDGET {
        return Err(Error::Convergence(format!("tail below {tol} needs more than {TAIL_TERM_BUDGET} terms")));
    }
    let mut acc = Compensated::new();
    for r in (start + 1..=cutoff).rev() {
        acc.add(c * (r as f64).powf(-sigma));
    }
    let m = cutoff as f64;
    let hi = c * m.powf(1.0 - sigma) / (sigma - 1.0);
    let lo = c * (m + 1.0).powf(1.0 - sigma) / (sigma - 1.0);
    Ok(TailSum { value: acc.value() + 0.5 * (lo + hi), error: 0.5 * (hi - lo) + 1e-16 * acc.value() * 4.0 })
}

/// `sum_{k in Z} profile(|k|)^e`.
fn axis_total(profile: &Profile, e: f64, tol: f64) -> Result<TailSum> {
    match profile.geometric_base() {
        Some(b) => {
            let q = b.powf(e);
            Ok(TailSum { value: 1.0 + 2.0 * q / (1.0 - q), error: 0.0 })
        }
        None => {
            let Profile::Pow(s) = *profile else { unreachable!() };
            let t = power_tail(1.0, -s * e, 0, tol / 2.0)?;
            Ok(TailSum { value: 1.0 + 2.0 * t.value, error: 2.0 * t.error })
        }
    }
}

/// `sum_{k in Z^d} |psi(k)|^e` with a rigorous error bound.
pub fn total_power_sum(psi: &PsiSystem, e: f64, tol: f64) -> Result<TailSum> {
    if !(e > 0.0) {
        return Err(Error::Convergence(format!("exponent {e} does not make the terms decay")));
    }
    match &psi.kind {
        PsiKind::Explicit { table, tail } => {
            let head = crate::numeric::sum(table.iter().map(|v| v.powf(e)));
            let l = table.len() as u64;
            let t = match *tail {
                TailRule::Zero => TailSum { value: 0.0, error: 0.0 },
                TailRule::Geometric { first, ratio } => {
                    TailSum { value: first.powf(e) / (1.0 - ratio.powf(e)), error: 0.0 }
                }
                TailRule::Power { c, s } => power_tail(c.powf(e), s * e, l, tol)?,
            };
            Ok(TailSum { value: head + t.value, error: t.error })
        }
        PsiKind::Product { axes } => {
            let parts = axes.iter().map(|a| axis_total(a, e, tol / axes.len() as f64)).collect::<Result<Vec<_>>>()?;
            let value: f64 = parts.iter().map(|t| t.value).product();
            let hi: f64 = parts.iter().map(|t| t.value + t.error).product();
            let lo: f64 = parts.iter().map(|t| t.value - t.error).product();
            Ok(TailSum { value: 0.5 * (hi + lo), error: 0.5 * (hi - lo).max(0.0) + 1e-15 * value.abs() })
        }
        PsiKind::Radial { dim, profile, .. } if *dim == 1 => axis_total(profile, e, tol),
        PsiKind::Radial { dim, profile, .. } => {
            let d = *dim as i32;
            let limit = psi.box_limit();
            let mut r: i64 = 8;
            loop {
                let bound = radial_outside_bound(profile, d, e, r)?;
                if bound <= 2.0 * tol || r >= limit {
                    if bound > 2.0 * tol {
                        return Err(Error::Convergence(format!(
                            "box |k| <= {limit} cannot bring the tail below {tol}"
                        )));
                    }
                    let mut acc = Compensated::new();
                    for_each_in_box(*dim, r, |k| acc.add(psi.magnitude(k).powf(e)));
                    return Ok(TailSum { value: acc.value() + 0.5 * bound, error: 0.5 * bound });
                }
                r = (r * 2).min(limit);
            }
        }
    }
}

/// Upper bound for `sum_{|k|_inf > r} profile(|k|_inf)^e` on `Z^d`.
fn radial_outside_bound(profile: &Profile, d: i32, e: f64, r: i64) -> Result<f64> {
    // Shell |k|_inf = j holds at most 2d (2j+1)^(d-1) <= 2d 3^(d-1) j^(d-1) points.
    let c = 2.0 * d as f64 * 3f64.powi(d - 1);
    let rf = r as f64;
    match profile.geometric_base() {
        Some(b) => {
            let rho = ((rf + 2.0) / (rf + 1.0)).powi(d - 1) * b.powf(e);
            if rho >= 1.0 {
                return Ok(f64::INFINITY);
            }
            Ok(c * (rf + 1.0).powi(d - 1) * b.powf(e * (rf + 1.0)) / (1.0 - rho))
        }
        None => {
            let Profile::Pow(s) = *profile else { unreachable!() };
            let expo = d as f64 + s * e;
            if expo >= 0.0 {
                return Err(Error::Convergence(format!("radial sum diverges: d + s*e = {expo} >= 0")));
            }
            Ok(c * rf.powf(expo) / (-expo))
        }
    }
}

/// `sum_{k >= from} psi~_k^e` (1-based `from`) with a rigorous error bound.
pub fn tail_sum(psi: &PsiSystem, e: f64, from: usize, tol: f64) -> Result<TailSum> {
    let total = total_power_sum(psi, e, tol)?;
    if from <= 1 {
        return Ok(total);
    }
    let mut acc = Compensated::new();
    let mut stream = psi.enumerate();
    for _ in 1..from {
        acc.add(stream.next_entry()?.0.powf(e));
    }
    let value = (total.value - acc.value()).max(0.0);
    Ok(TailSum { value, error: total.error + 4.0 * f64::EPSILON * total.value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn geometric_axis_charseq() {
        let psi = PsiSystem::product(vec![Profile::Geometric(0.5)]).unwrap();
        let cs = build_charseq(&psi, Upto::Levels(4)).unwrap();
        assert_eq!(cs.eps_list(), &[1.0, 0.5, 0.25, 0.125]);
        assert_eq!(cs.delta_list(), &[1, 3, 5, 7]);
    }

    #[test]
    fn hyperbolic_cross_delta() {
        let cs = build_charseq(&PsiSystem::hyperbolic(2), Upto::Levels(3)).unwrap();
        assert_eq!(cs.eps_list(), &[1.0, 0.5, 1.0 / 3.0]);
        // k' = max(|k|, 1), so the top level is {-1, 0, 1}^2.
        assert_eq!(cs.delta_list(), &[9, 21, 33]);
        for k in cs.level_set(2) {
            let prod = k[0].unsigned_abs().max(1) * k[1].unsigned_abs().max(1);
            assert!(prod <= 2);
        }
    }

    #[test]
    fn explicit_constant_table_is_one_level() {
        let psi = PsiSystem::explicit(vec![0.7; 5], TailRule::Zero).unwrap();
        let cs = build_charseq(&psi, Upto::Levels(1)).unwrap();
        assert_eq!((cs.eps_list(), cs.delta_list()), (&[0.7][..], &[5][..]));
        assert!(build_charseq(&psi, Upto::Levels(2)).is_err());
    }

    #[test]
    fn rearrangement_examples() {
        let psi = PsiSystem::product(vec![Profile::Pow(-1.0)]).unwrap();
        assert_eq!(rearrangement(&psi, 5).unwrap(), vec![1.0, 1.0, 1.0, 0.5, 0.5]);
        assert_eq!(rearrangement(&psi, 1).unwrap(), vec![1.0]);
        let mixed = PsiSystem::product(vec![Profile::Geometric(0.5), Profile::Pow(-1.0)]).unwrap();
        let r = rearrangement(&mixed, 10).unwrap();
        assert_eq!(&r[..3], &[1.0, 1.0, 1.0]);
        assert!(r.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn equal_products_compare_equal() {
        let psi = PsiSystem::hyperbolic(2);
        assert_eq!(psi.magnitude(&[3, 5]), psi.magnitude(&[1, 15]));
        let mixed = PsiSystem::product(vec![Profile::Pow(-1.0), Profile::Pow(-2.0)]).unwrap();
        assert_eq!(mixed.magnitude(&[4, 1]), mixed.magnitude(&[1, 2]));
        assert_eq!(mixed.magnitude(&[4, 3]), 1.0 / 36.0);
    }

    #[test]
    fn radial_levels_follow_norm() {
        let psi = PsiSystem::radial(2, Profile::Pow(-2.0), 1.0).unwrap();
        let cs = build_charseq(&psi, Upto::Levels(3)).unwrap();
        // |k|_1 <= 1 merges into one level because psi(0) = psi(1).
        assert_eq!(cs.delta_list(), &[5, 13, 25]);
    }

    #[test]
    fn ball_counts() {
        assert_eq!(lattice_ball_count(2, f64::INFINITY, 3, BALL_COUNT_BUDGET).unwrap(), 49);
        assert_eq!(lattice_ball_count(2, 1.0, 2, BALL_COUNT_BUDGET).unwrap(), 13);
        for r in [0.5, 1.0, 2.0, 3.7, f64::INFINITY] {
            assert_eq!(lattice_ball_count(1, r, 5, BALL_COUNT_BUDGET).unwrap(), 11);
        }
        assert!(matches!(lattice_ball_count(3, 2.0, 1000, 1000), Err(Error::Budget(_))));
    }

    #[test]
    fn ball_count_two_sided_bound() {
        for d in 1..=3usize {
            for r in [1.0, 2.0, f64::INFINITY] {
                let m_r = ball_volume(d, r);
                let c = d as f64;
                for m in (1..=64u64).step_by(if d == 3 { 9 } else { 3 }) {
                    let n = lattice_ball_count(d, r, m, BALL_COUNT_BUDGET).unwrap() as f64;
                    let mf = m as f64;
                    let lower = if mf > c { m_r * (mf - c).powi(d as i32) } else { 0.0 };
                    assert!(lower < n && n <= m_r * (mf + c).powi(d as i32), "d={d} r={r} m={m}");
                }
            }
        }
        assert!((ball_volume(3, 1.0) - 8.0 / 6.0).abs() < 1e-12);
        assert_eq!(ball_volume(2, f64::INFINITY), 4.0);
    }

    #[test]
    fn tail_sum_examples() {
        let g = PsiSystem::geometric_sequence(0.5, 0.5).unwrap();
        let t = tail_sum(&g, 2.0, 2, 1e-12).unwrap();
        assert!((t.value - 1.0 / 12.0).abs() < 1e-15);
        assert!(matches!(tail_sum(&g, 0.0, 1, 1e-12), Err(Error::Convergence(_))));
        let sq = PsiSystem::explicit(Vec::new(), TailRule::Power { c: 1.0, s: 2.0 }).unwrap();
        let t = tail_sum(&sq, 1.0, 1, 1e-10).unwrap();
        assert!((t.value - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-8);
        assert!(t.error < 1e-9);
        assert!(matches!(tail_sum(&PsiSystem::harmonic(), 1.0, 1, 1e-10), Err(Error::Convergence(_))));
    }

    #[test]
    fn tail_sum_product_and_radial_agree_with_box_sums() {
        let psi = PsiSystem::product(vec![Profile::Geometric(0.5), Profile::Pow(-2.0)]).unwrap();
        let t = total_power_sum(&psi, 1.0, 1e-10).unwrap();
        // (1 + 2) * (1 + 2 zeta(2))
        let want = 3.0 * (1.0 + std::f64::consts::PI.powi(2) / 3.0);
        assert!((t.value - want).abs() < 1e-8, "{}", t.value);
        let rad = PsiSystem::radial(2, Profile::Geometric(0.5), f64::INFINITY).unwrap();
        let t = total_power_sum(&rad, 1.0, 1e-12).unwrap();
        // Shell j holds 8j points: 1 + sum 8 j 2^-j = 17.
        assert!((t.value - 17.0).abs() < 1e-10);
        let t2 = tail_sum(&rad, 1.0, 10, 1e-12).unwrap();
        assert!((t2.value - 12.0).abs() < 1e-10);
    }

    #[test]
    fn psi_integral_round_trip_and_examples() {
        let f = Spectrum::lattice_1d([(1, Complex64::new(1.0, 0.0))]).unwrap();
        let half = PsiSystem::explicit(vec![1.0, 0.5], TailRule::Geometric { first: 0.25, ratio: 0.5 }).unwrap();
        assert_eq!(
            psi_integral(&f, &half).unwrap().coefficient(&Frequency::Lattice(vec![1])),
            Complex64::new(0.5, 0.0)
        );
        let one = PsiSystem::explicit(vec![1.0; 3], TailRule::Zero).unwrap();
        let g = Spectrum::lattice_1d([(0, Complex64::new(2.0, 1.0)), (-1, Complex64::new(0.5, 0.0))]).unwrap();
        assert_eq!(psi_integral(&g, &one).unwrap(), g);
    }

    #[test]
    fn nu_is_sup_beyond() {
        let psi = PsiSystem::product(vec![Profile::Pow(-1.5)]).unwrap();
        assert_eq!(psi.nu(4).unwrap(), 4f64.powf(-1.5));
        let h = PsiSystem::harmonic();
        // Ranks of |k| >= 2 start at 4.
        assert_eq!(h.nu(2).unwrap(), 0.25);
    }

    proptest! {
        #[test]
        fn round_trip(entries in proptest::collection::btree_map(-30i64..30, (-5.0f64..5.0, -5.0f64..5.0), 1..20), beta in -2.0f64..2.0) {
            let f = Spectrum::lattice_1d(entries.into_iter().map(|(k, (a, b))| (k, Complex64::new(a, b)))).unwrap();
            let psi = PsiSystem::product(vec![Profile::Pow(-1.3)]).unwrap().with_phase(beta);
            let back = psi_derivative(&psi_integral(&f, &psi).unwrap(), &psi).unwrap();
            for ((_, a), (_, b)) in f.entries().iter().zip(back.entries()) {
                prop_assert!((a - b).norm() < 1e-15 * (1.0 + a.norm()) * 8.0);
            }
        }
    }

    #[test]
    fn product_stream_is_nonincreasing() {
        let psi = PsiSystem::product(vec![Profile::Pow(-1.0), Profile::Pow(-1.5)]).unwrap().with_box_limit(1 << 17);
        let mut e = psi.enumerate();
        let mut prev = f64::INFINITY;
        let mut seen = HashSet::new();
        for _ in 0..100_000 {
            let (v, k) = e.next_entry().unwrap();
            assert!(v <= prev);
            assert!(seen.insert(k));
            prev = v;
        }
    }
}
