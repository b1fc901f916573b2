//! Generalized moduli of smoothness `omega_phi` and their Stieltjes averages.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::numeric::{golden_max, Compensated};
use crate::quadrature::{self, Quad, DEFAULT_TOL};
use crate::spectrum::{self, DifferenceScheme, Spectrum};

/// Root of `tan t = t` in `(pi, 3pi/2)`; `sinc` attains its minimum there.
pub const SINC_MIN_ARG: f64 = 4.493409457909064;

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone, Debug, PartialEq)]
pub enum PhiKind {
    ClassicalAlpha { alpha: f64 },
    Difference(DifferenceScheme),
    Steklov { m: u32 },
    Custom,
}

/// An even, bounded, nonnegative `phi` with `phi(0) = 0`.
#[derive(Clone)]
pub struct PhiFunction {
    kind: PhiKind,
    label: String,
    eval: Scalar,
    sup: f64,
    monotone_to: Option<f64>,
    period: Option<f64>,
}

impl fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiFunction")
            .field("label", &self.label)
            .field("sup", &self.sup)
            .field("monotone_to", &self.monotone_to)
            .finish()
    }
}

impl PhiFunction {
    /// `2^alpha |sin(t/2)|^alpha`.
    pub fn alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        Ok(PhiFunction {
            kind: PhiKind::ClassicalAlpha { alpha },
            label: format!("alpha:{alpha}"),
            eval: Arc::new(move |t| spectrum::classical_multiplier(alpha, t)),
            sup: 2f64.powf(alpha),
            monotone_to: Some(PI),
            period: Some(2.0 * PI),
        })
    }

    /// `|sum_j theta_j e^{-ijt}|`, with sup and monotone range located numerically.
    pub fn difference(scheme: DifferenceScheme) -> Result<Self> {
        let s = scheme.clone();
        let eval: Scalar = Arc::new(move |t| s.symbol(t).norm());
        if (1..64).any(|i| {
            let t = i as f64 * 0.1;
            (eval(t) - eval(-t)).abs() > 1e-12 * (1.0 + eval(t))
        }) {
            return Err(Error::domain("difference weights give a phi that is not even"));
        }
        let (sup, monotone_to) = scan_shape(&*eval, 2.0 * PI);
        let label = format!("theta:{:?}", scheme.theta().iter().map(|c| c.re).collect::<Vec<_>>());
        Ok(PhiFunction { kind: PhiKind::Difference(scheme), label, eval, sup, monotone_to, period: Some(2.0 * PI) })
    }

    /// `(1 - sinc t)^m`.
    pub fn steklov(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("Steklov order must be at least 1"));
        }
        Ok(PhiFunction {
            kind: PhiKind::Steklov { m },
            label: format!("steklov:{m}"),
            eval: Arc::new(move |t| spectrum::steklov_multiplier(m, 1.0, t)),
            sup: (1.0 - spectrum::sinc(SINC_MIN_ARG)).powi(m as i32),
            monotone_to: Some(SINC_MIN_ARG),
            period: None,
        })
    }

    /// A user-supplied `phi`; evenness, `phi(0) = 0` and the bound are spot-checked.
    pub fn custom(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        sup: f64,
        monotone_to: Option<f64>,
    ) -> Result<Self> {
        let eval: Scalar = Arc::new(f);
        if eval(0.0) != 0.0 {
            return Err(Error::domain("phi(0) must be 0"));
        }
        for i in 1..=512 {
            let t = i as f64 * 0.05;
            let (a, b) = (eval(t), eval(-t));
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::domain(format!("phi({t}) = {a} is not a finite nonnegative number")));
            }
            if (a - b).abs() > 1e-12 * (1.0 + a) {
                return Err(Error::domain(format!("phi is not even at t = {t}")));
            }
            if a > sup * (1.0 + 1e-12) {
                return Err(Error::domain(format!("phi({t}) = {a} exceeds the declared sup {sup}")));
            }
        }
        Ok(PhiFunction { kind: PhiKind::Custom, label: label.into(), eval, sup, monotone_to, period: None })
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn kind(&self) -> &PhiKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn sup(&self) -> f64 {
        self.sup
    }

    /// `a` with `phi` nondecreasing on `[0, a]` and `phi(a) = sup`.
    pub fn monotone_to(&self) -> Option<f64> {
        self.monotone_to
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    /// `lim_{t -> inf} phi(t)` for aperiodic builtins.
    pub fn limit_at_infinity(&self) -> Option<f64> {
        match self.kind {
            PhiKind::Steklov { .. } => Some(1.0),
            _ => None,
        }
    }
}

/// Sup over `[0, period]` and the end of the initial nondecreasing stretch when
/// that stretch reaches the sup.
fn scan_shape(f: &dyn Fn(f64) -> f64, period: f64) -> (f64, Option<f64>) {
    const N: usize = 8192;
    let h = period / N as f64;
    let vals: Vec<f64> = (0..=N).map(|i| f(i as f64 * h)).collect();
    let (imax, _) = vals.iter().enumerate().fold((0, f64::MIN), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    let refine = |i: usize| golden_max(f, (i.max(1) - 1) as f64 * h, ((i + 1).min(N)) as f64 * h, 1e-13);
    let (_, sup) = refine(imax);
    let mut first = 0;
    while first < N && vals[first + 1] >= vals[first] {
        first += 1;
    }
    let (a, fa) = refine(first);
    let monotone = (fa >= sup * (1.0 - 1e-10)).then_some(a);
    (sup.max(fa), monotone)
}

/// `sum_k phi^p(lambda_k h) |c_k|^p`, the `p`-th power of the shifted norm.
pub fn phi_weighted_pow(f: &Spectrum, phi: &PhiFunction, h: f64, p: f64) -> Result<f64> {
    Ok(Terms::of(f, p)?.objective(phi, h))
}

/// `(sum_k phi^p(lambda_k h) |c_k|^p)^{1/p}`.
pub fn phi_weighted_norm(f: &Spectrum, phi: &PhiFunction, h: f64, p: f64) -> Result<f64> {
    Ok(phi_weighted_pow(f, phi, h, p)?.powf(1.0 / p))
}

struct Terms {
    /// `(lambda, |c|^p)` for nonzero coefficients.
    items: Vec<(f64, f64)>,
    p: f64,
}

impl Terms {
    fn of(f: &Spectrum, p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::domain(format!("p must be finite and positive, got {p}")));
        }
        let items = f
            .scalar_entries()?
            .into_iter()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(l, c)| (l, c.norm().powf(p)))
            .collect();
        Ok(Terms { items, p })
    }

    fn objective(&self, phi: &PhiFunction, h: f64) -> f64 {
        let mut acc = Compensated::new();
        for &(l, w) in &self.items {
            acc.add(phi.eval(l * h).powf(self.p) * w);
        }
        acc.value()
    }

    fn max_freq(&self) -> f64 {
        self.items.iter().map(|(l, _)| l.abs()).fold(0.0, f64::max)
    }
}

/// Upper limit on grid size for one modulus profile.
const GRID_CAP: usize = 1 << 21;

/// `omega_phi^p(f, t)` for all `t <= delta` from one grid pass.
///
/// Each grid local maximum is refined by golden section; a query at `t`
/// combines the refined peaks and grid values below `t` with the objective at `t`.
pub struct ModulusProfile {
    terms: Terms,
    phi: PhiFunction,
    delta: f64,
    step: f64,
    running: Vec<f64>,
    /// Refined peaks sorted by location, with prefix maxima.
    peaks: Vec<(f64, f64)>,
}

impl ModulusProfile {
    pub fn new(f: &Spectrum, phi: &PhiFunction, delta: f64, p: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::domain(format!("delta must be finite and nonnegative, got {delta}")));
        }
        let terms = Terms::of(f, p)?;
        let oscillations = terms.max_freq() * delta / (2.0 * PI);
        let want = (32.0 * oscillations).ceil() as usize + 1;
        if want > GRID_CAP {
            return Err(Error::Budget(format!("{oscillations:.0} oscillations on [0, delta] exceed the grid cap")));
        }
        let n = want.max(2048);
        let step = delta / n as f64;
        let vals: Vec<f64> = (0..=n).map(|i| terms.objective(phi, i as f64 * step)).collect();
        if let Some(v) = vals.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("phi produced a non-finite value ({v})")));
        }
        let mut running = Vec::with_capacity(vals.len());
        let mut m = 0.0f64;
        for &v in &vals {
            m = m.max(v);
            running.push(m);
        }
        let mut peaks = Vec::new();
        if delta > 0.0 {
            for i in 1..n {
                if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] && vals[i] > 0.0 {
                    let lo = (i - 1) as f64 * step;
                    let hi = (i + 1) as f64 * step;
                    let (h, v) = golden_max(|h| terms.objective(phi, h), lo, hi, 1e-15 * delta.max(1.0));
                    peaks.push((h, v.max(vals[i])));
                }
            }
        }
        peaks.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best = 0.0f64;
        for pk in peaks.iter_mut() {
            best = best.max(pk.1);
            pk.1 = best;
        }
        Ok(ModulusProfile { terms, phi: phi.clone(), delta, step, running, peaks })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `omega_phi^p(f, t)` for `0 <= t <= delta`.
    pub fn omega_pow(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.delta);
        let mut v = self.terms.objective(&self.phi, t);
        if self.step > 0.0 {
            let idx = ((t / self.step).floor() as usize).min(self.running.len() - 1);
            v = v.max(self.running[idx]);
        }
        let k = self.peaks.partition_point(|pk| pk.0 <= t);
        if k > 0 {
            v = v.max(self.peaks[k - 1].1);
        }
        v
    }

    pub fn omega(&self, t: f64) -> f64 {
        self.omega_pow(t).powf(1.0 / self.terms.p)
    }

    pub fn grid_points(&self) -> usize {
        self.running.len()
    }
}

/// `omega_phi(f, delta) = sup_{|h| <= delta} (sum phi^p(lambda_k h)|c_k|^p)^{1/p}`.
///
/// `phi` is even, so the sup runs over `h` in `[0, delta]`.
pub fn omega_phi(f: &Spectrum, phi: &PhiFunction, delta: f64, p: f64) -> Result<f64> {
    Ok(ModulusProfile::new(f, phi, delta, p)?.omega(delta))
}

/// Right-continuous nondecreasing weight `v` for Stieltjes integrals.
#[derive(Clone)]
pub enum WeightForm {
    Density {
        value: Scalar,
        density: Scalar,
    },
    /// Knots `(t_i, v_i)`, linear in between and constant outside.
    PiecewiseLinear(Vec<(f64, f64)>),
    /// Jumps `(t_j, size_j)`.
    Atomic(Vec<(f64, f64)>),
}

#[derive(Clone)]
pub struct WeightMeasure {
    label: String,
    form: WeightForm,
}

impl fmt::Debug for WeightMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightMeasure({})", self.label)
    }
}

#[derive(Deserialize)]
struct KnotFile {
    knots: Vec<(f64, f64)>,
}

impl WeightMeasure {
    /// `v(t) = 1 - cos t`.
    pub fn cosine() -> Self {
        Self::density("cos", |t| 1.0 - t.cos(), f64::sin)
    }

    /// `v(t) = t`.
    pub fn identity() -> Self {
        Self::density("t", |t| t, |_| 1.0)
    }

    pub fn density(
        label: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        WeightMeasure {
            label: label.into(),
            form: WeightForm::Density { value: Arc::new(value), density: Arc::new(density) },
        }
    }

    pub fn piecewise_linear(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::domain("piecewise-linear weight needs at least two knots"));
        }
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::domain("knot abscissae must be distinct"));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::domain("weight values must be nondecreasing"));
            }
        }
        if knots.iter().any(|k| !(k.0.is_finite() && k.1.is_finite())) {
            return Err(Error::domain("knots must be finite"));
        }
        Ok(WeightMeasure { label: "pwl".into(), form: WeightForm::PiecewiseLinear(knots) })
    }

    /// Reads `{"knots": [[t, v], ...]}`.
    pub fn piecewise_linear_json(s: &str) -> Result<Self> {
        let file: KnotFile = serde_json::from_str(s)?;
        Self::piecewise_linear(file.knots)
    }

    pub fn atomic(mut jumps: Vec<(f64, f64)>) -> Result<Self> {
        if jumps.iter().any(|j| !(j.1 >= 0.0 && j.0.is_finite() && j.1.is_finite())) {
            return Err(Error::domain("atoms need finite locations and nonnegative sizes"));
        }
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(WeightMeasure { label: "atomic".into(), form: WeightForm::Atomic(jumps) })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn form(&self) -> &WeightForm {
        &self.form
    }

    pub fn value(&self, t: f64) -> f64 {
        match &self.form {
            WeightForm::Density { value, .. } => value(t),
            WeightForm::PiecewiseLinear(k) => {
                let i = k.partition_point(|x| x.0 <= t);
                if i == 0 {
                    k[0].1
                } else if i == k.len() {
                    k[k.len() - 1].1
                } else {
                    let (a, b) = (k[i - 1], k[i]);
                    a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0)
                }
            }
            WeightForm::Atomic(j) => j.iter().take_while(|x| x.0 <= t).map(|x| x.1).sum(),
        }
    }

    /// Checks `v` is nondecreasing on `[0, tau]` and returns `v(tau) - v(0)`.
    pub fn mass(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::domain(format!("tau must be positive, got {tau}")));
        }
        if let WeightForm::Density { density, .. } = &self.form {
            if let Some(i) = (0..=256).find(|&i| density(tau * i as f64 / 256.0) < -1e-12) {
                return Err(Error::domain(format!(
                    "weight {} decreases near t = {:.4} on [0, {tau}]",
                    self.label,
                    tau * i as f64 / 256.0
                )));
            }
        }
        let m = self.value(tau) - self.value(0.0);
        if !(m > 0.0) {
            return Err(Error::DegenerateWeight(format!("v({tau}) = v(0) for weight {}", self.label)));
        }
        Ok(m)
    }
}

/// `int_(a, b] g dv`.
pub fn stieltjes(g: impl Fn(f64) -> f64, v: &WeightMeasure, a: f64, b: f64, tol: f64) -> Result<Quad> {
    match &v.form {
        WeightForm::Density { density, .. } => quadrature::integrate(|t| g(t) * density(t), a, b, tol),
        WeightForm::PiecewiseLinear(knots) => {
            let mut total = Quad::default();
            for w in knots.windows(2) {
                let (lo, hi) = (w[0].0.max(a), w[1].0.min(b));
                let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                if hi > lo && slope > 0.0 {
                    total = total + quadrature::integrate(&g, lo, hi, tol / knots.len() as f64)? * slope;
                }
            }
            Ok(total)
        }
        WeightForm::Atomic(jumps) => {
            let value = crate::numeric::sum(jumps.iter().filter(|j| j.0 > a && j.0 <= b).map(|j| g(j.0) * j.1));
            Ok(Quad { value, error: 0.0 })
        }
    }
}

/// `Omega_phi(f, tau, v, u) = ((1/(v(tau)-v(0))) int_0^u omega_phi^p(f, t) dv(tau t/u))^{1/p}`.
pub fn averaged_omega(f: &Spectrum, phi: &PhiFunction, tau: f64, v: &WeightMeasure, u: f64, p: f64) -> Result<f64> {
    let mass = v.mass(tau)?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::domain(format!("u must be positive, got {u}")));
    }
    let prof = ModulusProfile::new(f, phi, u, p)?;
    let scale = prof.omega_pow(u);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let q = stieltjes(|s| prof.omega_pow(u * s / tau), v, 0.0, tau, DEFAULT_TOL * scale)?;
    Ok((q.value / mass).max(0.0).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn extremal(gamma: f64, eps: f64, lambda: f64) -> Spectrum {
        let c = Complex64::new(eps, 0.0);
        Spectrum::real([(0.0, Complex64::new(gamma, 0.0)), (lambda, c), (-lambda, c)]).unwrap()
    }

    fn random_spectrum() -> impl Strategy<Value = Spectrum> {
        proptest::collection::btree_map(-20i64..20, (-1.0f64..1.0, -1.0f64..1.0), 1..8)
            .prop_map(|m| Spectrum::lattice_1d(m.into_iter().map(|(k, (a, b))| (k, Complex64::new(a, b)))).unwrap())
    }

    #[test]
    fn phi_shapes() {
        let a = PhiFunction::alpha(1.5).unwrap();
        assert_eq!(a.sup(), 2f64.powf(1.5));
        let d = PhiFunction::difference(DifferenceScheme::binomial(2)).unwrap();
        assert!((d.sup() - 4.0).abs() < 1e-12);
        assert!((d.monotone_to().unwrap() - PI).abs() < 1e-6);
        let s = PhiFunction::steklov(2).unwrap();
        assert!((s.sup() - (1.0 + 0.21723362821122166f64).powi(2)).abs() < 1e-12);
        assert!(SINC_MIN_ARG.tan() - SINC_MIN_ARG < 1e-9);
        assert!(PhiFunction::custom("bad", |t: f64| t.cos(), 1.0, None).is_err());
        assert!(PhiFunction::custom("odd", |t: f64| t.sin().max(0.0), 1.0, None).is_err());
    }

    #[test]
    fn extremal_modulus() {
        for p in [1.0, 2.0, 3.5] {
            let phi = PhiFunction::alpha(1.0).unwrap();
            let lambda = 3.0;
            let delta = 0.8 * PI / lambda;
            let w = omega_phi(&extremal(2.0, 0.7, lambda), &phi, delta, p).unwrap();
            let want = 2f64.powf(1.0 / p) * 0.7 * phi.eval(lambda * delta);
            assert!((w - want).abs() < 1e-12, "{w} {want}");
        }
    }

    #[test]
    fn constant_has_zero_modulus() {
        let f = Spectrum::real([(0.0, Complex64::new(3.0, 1.0))]).unwrap();
        let phi = PhiFunction::alpha(2.0).unwrap();
        assert_eq!(omega_phi(&f, &phi, 0.5, 2.0).unwrap(), 0.0);
        let v = WeightMeasure::identity();
        assert_eq!(averaged_omega(&f, &phi, PI, &v, 0.5, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn stieltjes_examples() {
        let q = stieltjes(f64::sin, &WeightMeasure::cosine(), 0.0, PI, 1e-12).unwrap();
        assert!((q.value - PI / 2.0).abs() < 1e-12);
        let v = WeightMeasure::piecewise_linear(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 2.5)]).unwrap();
        let q = stieltjes(|_| 1.0, &v, 0.0, 2.0, 1e-12).unwrap();
        assert!((q.value - 2.5).abs() < 1e-12);
        let a = WeightMeasure::atomic(vec![(0.7, 1.0)]).unwrap();
        assert_eq!(stieltjes(|t| t * t, &a, 0.0, 1.0, 1e-12).unwrap().value, 0.7 * 0.7);
        assert!(matches!(WeightMeasure::atomic(vec![(2.0, 1.0)]).unwrap().mass(1.0), Err(Error::DegenerateWeight(_))));
        assert!(WeightMeasure::cosine().mass(4.0).is_err());
        let j = WeightMeasure::piecewise_linear_json(r#"{"knots": [[0, 0], [3.2, 1]]}"#).unwrap();
        assert!((j.mass(PI).unwrap() - PI / 3.2).abs() < 1e-15);
    }

    #[test]
    fn averaged_extremal_closed_form() {
        let (tau, lambda, eps, p) = (3.0 * PI / 4.0, 4.0, 0.3, 2.0);
        let phi = PhiFunction::alpha(1.0).unwrap();
        let f = extremal(1.0, eps, lambda);
        let u = tau / lambda;
        let got = averaged_omega(&f, &phi, tau, &WeightMeasure::identity(), u, p).unwrap().powf(p);
        let int = quadrature::integrate(|s| phi.eval(s).powf(p), 0.0, tau, 1e-13).unwrap().value;
        let want = 2.0 * eps.powf(p) * int / tau;
        assert!((got - want).abs() < 1e-9, "{got} {want}");
    }

    #[test]
    fn steklov_routes_agree() {
        let f = Spectrum::lattice_1d([
            (1, Complex64::new(1.0, 0.5)),
            (-4, Complex64::new(0.2, 0.0)),
            (7, Complex64::new(0.0, -0.3)),
        ])
        .unwrap();
        let phi = PhiFunction::steklov(3).unwrap();
        for h in [0.05, 0.3, 1.1] {
            let direct = spectrum::sp_norm(&spectrum::apply_steklov(&f, 3, h).unwrap(), 2.0).unwrap();
            assert!((direct - phi_weighted_norm(&f, &phi, h, 2.0).unwrap()).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn multiplier_identity(f in random_spectrum(), h in 0.0f64..2.0, p in 1.0f64..4.0,
                               theta in proptest::collection::vec(-2.0f64..2.0, 2..5)) {
            let mut theta = theta;
            let s: f64 = theta.iter().sum();
            theta[0] -= s;
            let scheme = DifferenceScheme::from_real(&theta).unwrap();
            let direct = spectrum::sp_norm(&spectrum::apply_difference(&f, &scheme, h).unwrap(), p).unwrap();
            // Skip the evenness check: the identity is per h and holds for any weights.
            let phi = PhiFunction { kind: PhiKind::Custom, label: "theta".into(),
                eval: { let s = scheme.clone(); Arc::new(move |t| s.symbol(t).norm()) },
                sup: f64::INFINITY, monotone_to: None, period: None };
            let via = phi_weighted_norm(&f, &phi, h, p).unwrap();
            prop_assert!((direct - via).abs() <= 1e-12 * (1.0 + direct));
        }

        #[test]
        fn modulus_properties(f in random_spectrum(), d1 in 0.01f64..1.0, d2 in 0.01f64..1.0, c in 0.1f64..5.0) {
            let phi = PhiFunction::alpha(1.3).unwrap();
            let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
            let a = omega_phi(&f, &phi, lo, 2.0).unwrap();
            let b = omega_phi(&f, &phi, hi, 2.0).unwrap();
            prop_assert!(a <= b * (1.0 + 1e-12));
            let norm = spectrum::sp_norm(&f, 2.0).unwrap();
            prop_assert!(b <= phi.sup() * norm * (1.0 + 1e-12));
            let scaled = omega_phi(&f.scale(Complex64::new(0.0, c)), &phi, hi, 2.0).unwrap();
            prop_assert!((scaled - c * b).abs() <= 1e-12 * (1.0 + c * b));
        }

        #[test]
        fn averaged_below_modulus(f in random_spectrum(), u in 0.05f64..1.5) {
            let phi = PhiFunction::alpha(1.0).unwrap();
            for v in [WeightMeasure::cosine(), WeightMeasure::identity()] {
                let big = averaged_omega(&f, &phi, PI, &v, u, 2.0).unwrap();
                let w = omega_phi(&f, &phi, u, 2.0).unwrap();
                prop_assert!(big <= w + 1e-10);
            }
        }
    }
}
