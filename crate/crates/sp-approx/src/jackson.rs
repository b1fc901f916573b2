//! Jackson-type constants, bound evaluators, sharpness witnesses and the
//! auxiliary series `sigma(s)` and `K(N)`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ladder::FrequencyLadder;
use crate::moduli::{self, PhiFunction, PhiKind, WeightForm, WeightMeasure};
use crate::psi::{self, PsiSystem};
use crate::quadrature;
use crate::spectrum::{self, Spectrum};

/// Relative tolerance of the integrals entering `I`.
pub const INTEGRAL_TOL: f64 = 1e-13;
/// The scan covers `k` in `[n, SCAN_FACTOR * n]`.
pub const SCAN_FACTOR: usize = 64;
/// `I` is attained at `k = n` when the two agree to this relative tolerance.
pub const EQUIVALENCE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct JacksonSetup {
    pub n: usize,
    pub phi: PhiFunction,
    pub p: f64,
    pub tau: f64,
    pub v: WeightMeasure,
    pub ladder: FrequencyLadder,
    /// Multiplier system for the `psi`-integral variant; one-dimensional.
    pub psi: Option<PsiSystem>,
}

impl JacksonSetup {
    pub fn new(n: usize, phi: PhiFunction, p: f64, tau: f64, v: WeightMeasure) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be at least 1"));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::domain(format!("Jackson inequalities need 1 <= p < inf, got {p}")));
        }
        v.mass(tau)?;
        Ok(JacksonSetup { n, phi, p, tau, v, ladder: FrequencyLadder::Integer, psi: None })
    }

    pub fn with_ladder(mut self, ladder: FrequencyLadder) -> Self {
        self.ladder = ladder;
        self
    }

    pub fn with_psi(mut self, psi: PsiSystem) -> Result<Self> {
        if psi.dim() != 1 {
            return Err(Error::domain("the psi variant works on Z^1"));
        }
        self.psi = Some(psi);
        Ok(self)
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    /// `v(tau) - v(0)`.
    pub fn mass(&self) -> f64 {
        self.v.mass(self.tau).expect("validated at construction")
    }

    fn lambda_n(&self) -> Result<f64> {
        self.ladder.lambda(self.n)
    }

    /// `int_0^tau phi^p(c t) dv(t)`.
    fn integral_scaled(&self, c: f64) -> Result<f64> {
        let mass = self.mass();
        let sup = self.phi.sup().powf(self.p);
        let tol = INTEGRAL_TOL * mass * sup.max(1e-300);
        let q = moduli::stieltjes(|t| self.phi.eval(c * t).powf(self.p), &self.v, 0.0, self.tau, tol)?;
        Ok(q.value)
    }

    /// `int_0^tau phi^p(t) dv(t)`, the `k = n` integral.
    pub fn base_integral(&self) -> Result<f64> {
        self.integral_scaled(1.0)
    }

    /// `lim_k int_0^tau phi^p(lambda_k t / lambda_n) dv(t)` when it exists.
    fn oscillation_limit(&self) -> Result<Option<f64>> {
        if matches!(self.v.form(), WeightForm::Atomic(_)) {
            return Ok(None);
        }
        if let Some(l) = self.phi.limit_at_infinity() {
            return Ok(Some(l.powf(self.p) * self.mass()));
        }
        match self.phi.period() {
            Some(per) => {
                let q = quadrature::integrate(|t| self.phi.eval(t).powf(self.p), 0.0, per, 1e-13)?;
                Ok(Some(q.value / per * self.mass()))
            }
            None => Ok(None),
        }
    }
}

/// `I_{n,phi,p}(tau, v)` with its argmin and how the scan was closed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacksonI {
    pub value: f64,
    pub k_star: usize,
    pub k_max: usize,
    /// Value at `k = n`.
    pub at_n: f64,
    /// Limit of the integrals as `k -> inf`, when known.
    pub limit: Option<f64>,
    pub certificate: String,
}

impl JacksonI {
    /// Whether `I` equals the `k = n` integral.
    pub fn attained_at_n(&self) -> bool {
        (self.at_n - self.value).abs() <= EQUIVALENCE_TOL * self.at_n.abs()
    }
}

/// Runs the `k`-scan for an integrand `g(lambda_k t / lambda_n)`.
fn scan(
    n: usize,
    ladder: &FrequencyLadder,
    integral: impl Fn(f64) -> Result<f64>,
    limit: Option<f64>,
) -> Result<JacksonI> {
    let ln = ladder.lambda(n)?;
    let mut k_max = SCAN_FACTOR * n;
    if let Some(len) = ladder.max_index() {
        k_max = k_max.min(len);
    }
    let at_n = integral(1.0)?;
    let (mut best, mut k_star) = (at_n, n);
    for k in n + 1..=k_max {
        let val = integral(ladder.lambda(k)? / ln)?;
        if val < best * (1.0 - 1e-12) {
            best = val;
            k_star = k;
        }
    }
    let certificate = match limit {
        Some(l) if l >= best * (1.0 - 1e-12) => {
            format!("scanned k in [{n}, {k_max}]; tail-dominated: limit {l:.12e} is not below the minimum")
        }
        Some(l) => format!("scanned k in [{n}, {k_max}]; scan-limited: limit {l:.12e} is below the minimum"),
        None => format!("scanned k in [{n}, {k_max}]; scan-limited: no limit available for this weight"),
    };
    Ok(JacksonI { value: best, k_star, k_max, at_n, limit, certificate })
}

/// `I_{n,phi,p}(tau, v) = inf_{k >= n} int_0^tau phi^p(lambda_k t / lambda_n) dv(t)`.
pub fn jackson_i(setup: &JacksonSetup) -> Result<JacksonI> {
    scan(setup.n, &setup.ladder, |c| setup.integral_scaled(c), setup.oscillation_limit()?)
}

/// `I_n(s) = inf_{k >= n} int_0^pi (1 - cos(lambda_k t / lambda_n))^s sin t dt`.
pub fn cosine_power_inf(s: f64, n: usize, ladder: &FrequencyLadder) -> Result<JacksonI> {
    if !(s > 0.0) || n == 0 {
        return Err(Error::domain("need s > 0 and n >= 1"));
    }
    let integral =
        |c: f64| quadrature::integrate(|t| (1.0 - (c * t).cos()).powf(s) * t.sin(), 0.0, PI, 1e-13).map(|q| q.value);
    // Mean of (1 - cos)^s over a period, times the mass 2 of sin t dt.
    let mean = quadrature::integrate(|t| (1.0 - t.cos()).powf(s), 0.0, 2.0 * PI, 1e-13)?.value / (2.0 * PI);
    scan(n, ladder, integral, Some(2.0 * mean))
}

/// `2^{s+1}/(s+1)`, the value of `I_n(s)` for integer `s`.
pub fn cosine_power_closed_form(s: f64) -> f64 {
    2f64.powf(s + 1.0) / (s + 1.0)
}

/// `((v(tau) - v(0)) / I)^{1/p}`.
pub fn jackson_constant(setup: &JacksonSetup) -> Result<f64> {
    let i = jackson_i(setup)?;
    Ok((setup.mass() / i.value).powf(1.0 / setup.p))
}

/// The closed-form sharp constant for `phi_alpha` when the weight and `tau`
/// fall under one of the two classical cases.
pub fn closed_form_constant(setup: &JacksonSetup) -> Option<f64> {
    let PhiKind::ClassicalAlpha { alpha } = *setup.phi.kind() else { return None };
    let ap = alpha * setup.p;
    match setup.v.label() {
        "cos" if (setup.tau - PI).abs() < 1e-15 && (ap / 2.0).fract() == 0.0 => {
            Some(((ap / 2.0 + 1.0) / 2f64.powf(ap)).powf(1.0 / setup.p))
        }
        "t" if setup.tau <= 0.75 * PI && ap >= 1.0 => {
            let int = quadrature::integrate(|t| (t / 2.0).sin().powf(ap), 0.0, setup.tau, 1e-14).ok()?.value;
            Some((setup.tau / (2f64.powf(ap) * int)).powf(1.0 / setup.p))
        }
        _ => None,
    }
}

/// `nu(n) = sup_{|k| >= n} |psi(k)|`.
pub fn nu(psi: &PsiSystem, n: usize) -> Result<f64> {
    psi.nu(n as i64)
}

/// `E_{lambda_n}(f) = (sum_{|lambda| >= lambda_n} |c|^p)^{1/p}`.
pub fn ladder_best_approx(f: &Spectrum, ladder: &FrequencyLadder, n: usize, p: f64) -> Result<f64> {
    let ln = ladder.lambda(n)?;
    let cut = ln * (1.0 - 1e-12);
    f.scalar_entries()?;
    spectrum::best_tail_approx(f, |k| k.scalar().expect("checked").abs() < cut, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundForm {
    /// `C nu(n) omega_phi(g, tau/lambda_n)`
    Modulus,
    /// `C nu(n) Omega_phi(g, tau, v, tau/lambda_n)`
    Averaged,
}

/// Both sides of a Jackson-type inequality, itemized.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacksonBound {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub mass: f64,
    pub i_value: f64,
    pub nu: f64,
    pub modulus: f64,
    pub form: BoundForm,
}

/// Evaluates `E_{lambda_n}(f) <= ((v(tau)-v(0))/I)^{1/p} nu(n) M(g)`, where
/// `g = f^psi` for the `psi` variant and `g = f` otherwise.
pub fn jackson_bound(f: &Spectrum, setup: &JacksonSetup, form: BoundForm) -> Result<JacksonBound> {
    let i = jackson_i(setup)?;
    jackson_bound_with(f, setup, form, &i)
}

/// As [`jackson_bound`] with a precomputed `I`.
pub fn jackson_bound_with(f: &Spectrum, setup: &JacksonSetup, form: BoundForm, i: &JacksonI) -> Result<JacksonBound> {
    let p = setup.p;
    let (g, nu_n) = match &setup.psi {
        Some(psi) => {
            if setup.ladder != FrequencyLadder::Integer {
                return Err(Error::domain("the psi variant uses the integer ladder"));
            }
            (psi::psi_derivative(f, psi)?, nu(psi, setup.n)?)
        }
        None => (f.clone(), 1.0),
    };
    let lhs = ladder_best_approx(f, &setup.ladder, setup.n, p)?;
    let delta = setup.tau / setup.lambda_n()?;
    let modulus = match form {
        BoundForm::Modulus => moduli::omega_phi(&g, &setup.phi, delta, p)?,
        BoundForm::Averaged => moduli::averaged_omega(&g, &setup.phi, setup.tau, &setup.v, delta, p)?,
    };
    let mass = setup.mass();
    let rhs = (mass / i.value).powf(1.0 / p) * nu_n * modulus;
    Ok(JacksonBound { lhs, rhs, slack: rhs - lhs, mass, i_value: i.value, nu: nu_n, modulus, form })
}

/// The extremal `gamma + eps e^{-i lambda_n x} + eps e^{i lambda_n x}`.
pub fn extremal_function(lambda_n: f64, gamma: Complex64, eps: Complex64) -> Result<Spectrum> {
    Spectrum::real([(0.0, gamma), (-lambda_n, eps), (lambda_n, eps)])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SharpnessReport {
    /// `E_{lambda_n}(f_n) / Omega_phi(f_n, tau, v, tau/lambda_n)`.
    pub ratio: f64,
    /// `((v(tau)-v(0)) / int_0^tau phi^p dv)^{1/p}`.
    pub target: f64,
    /// The classical closed form, when the setup matches one.
    pub closed_form: Option<f64>,
    /// `I` equals the `k = n` integral.
    pub equivalence: bool,
    /// `phi` is nondecreasing on `[0, tau]`.
    pub monotone: bool,
}

/// Evaluates the extremal-function ratio against the sharp constant.
pub fn jackson_sharpness_witness(setup: &JacksonSetup, gamma: Complex64, eps: Complex64) -> Result<SharpnessReport> {
    if eps.norm() == 0.0 {
        return Err(Error::domain("eps must be nonzero"));
    }
    let i = jackson_i(setup)?;
    let ln = setup.lambda_n()?;
    let f = extremal_function(ln, gamma, eps)?;
    let e = ladder_best_approx(&f, &setup.ladder, setup.n, setup.p)?;
    let big = moduli::averaged_omega(&f, &setup.phi, setup.tau, &setup.v, setup.tau / ln, setup.p)?;
    let base = setup.base_integral()?;
    Ok(SharpnessReport {
        ratio: e / big,
        target: (setup.mass() / base).powf(1.0 / setup.p),
        closed_form: closed_form_constant(setup),
        equivalence: i.attained_at_n(),
        monotone: setup.phi.monotone_to().is_some_and(|a| setup.tau <= a * (1.0 + 1e-15)),
    })
}

/// Two-sided width bounds for the class cut out by `Omega_phi(f^psi, tau, v, tau/n) <= 1`,
/// scaled by `majorant(tau/n)` for the majorant classes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WidthBounds {
    pub n: usize,
    /// Width index range `N in {2n-1, 2n}`.
    pub widths: (usize, usize),
    pub lower: f64,
    pub upper: f64,
    /// `lower`, when `I` is attained at `k = n`.
    pub exact: Option<f64>,
}

pub fn jackson_widths(
    setup: &JacksonSetup,
    psi: &PsiSystem,
    majorant: Option<&dyn Fn(f64) -> f64>,
) -> Result<WidthBounds> {
    check_monotone_psi(psi)?;
    if setup.ladder != FrequencyLadder::Integer {
        return Err(Error::domain("width bounds use the integer ladder"));
    }
    if !setup.phi.monotone_to().is_some_and(|a| setup.tau <= a) {
        return Err(Error::Precondition("phi must be nondecreasing on [0, tau]".into()));
    }
    let n = setup.n;
    let scale = psi.magnitude(&[n as i64]) * majorant.map_or(1.0, |m| m(setup.tau / n as f64));
    let i = jackson_i(setup)?;
    let mass = setup.mass();
    let lower = (mass / setup.base_integral()?).powf(1.0 / setup.p) * scale;
    let upper = (mass / i.value).powf(1.0 / setup.p) * scale;
    Ok(WidthBounds { n, widths: (2 * n - 1, 2 * n), lower, upper, exact: i.attained_at_n().then_some(lower) })
}

/// Spot-checks `|psi(k)| = |psi(-k)| >= |psi(k+1)|` for `k < 4096`.
fn check_monotone_psi(psi: &PsiSystem) -> Result<()> {
    if psi.dim() != 1 {
        return Err(Error::domain("width bounds use a one-dimensional psi"));
    }
    for k in 1..4096i64 {
        let (a, b, c) = (psi.magnitude(&[k]), psi.magnitude(&[-k]), psi.magnitude(&[k + 1]));
        if a != b || c > a {
            return Err(Error::Precondition(format!("psi is not even and nonincreasing at k = {k}")));
        }
    }
    Ok(())
}

/// Outcome of the majorant condition check on a `(xi, u)` grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MajorantCheck {
    pub holds: bool,
    /// Largest `lhs / rhs` seen.
    pub worst_ratio: f64,
    pub worst_at: (f64, f64),
}

/// Checks `Omega(u/xi) (int_0^{xi tau} phi_*^p dv(t/xi))^{1/p} <= Omega(u) (int_0^tau phi^p dv)^{1/p}`
/// for `xi = 2^j`, `j = -6..=6`, and 32 values of `u` in `(0, a]`, where `phi_*`
/// freezes `phi` at its sup beyond `a`.
pub fn majorant_condition_check(
    majorant: &dyn Fn(f64) -> f64,
    phi: &PhiFunction,
    tau: f64,
    v: &WeightMeasure,
    p: f64,
) -> Result<MajorantCheck> {
    let a = phi.monotone_to().ok_or_else(|| Error::Precondition("phi has no declared monotone range".into()))?;
    if tau > a {
        return Err(Error::Precondition("tau must lie in (0, a]".into()));
    }
    let frozen = |t: f64| if t <= a { phi.eval(t) } else { phi.eval(a) };
    let base = moduli::stieltjes(|t| phi.eval(t).powf(p), v, 0.0, tau, 1e-12)?.value.powf(1.0 / p);
    let mut worst = (0.0f64, (0.0, 0.0));
    for j in -6..=6 {
        let xi = 2f64.powi(j);
        // int_0^{xi tau} g(t) dv(t/xi) = int_0^tau g(xi s) dv(s)
        let int = moduli::stieltjes(|s| frozen(xi * s).powf(p), v, 0.0, tau, 1e-12)?.value.powf(1.0 / p);
        for i in 1..=32 {
            let u = a * i as f64 / 32.0;
            let rhs = majorant(u) * base;
            let lhs = majorant(u / xi) * int;
            let r = if rhs > 0.0 {
                lhs / rhs
            } else if lhs > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            if r > worst.0 {
                worst = (r, (xi, u));
            }
        }
    }
    Ok(MajorantCheck { holds: worst.0 <= 1.0 + 1e-10, worst_ratio: worst.0, worst_at: worst.1 })
}

/// A named constant and whether its hypotheses hold at the given parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedConstant {
    pub name: &'static str,
    pub value: f64,
    pub applies: bool,
    pub condition: &'static str,
}

/// Closed-form constants of the classical sharp Jackson inequalities.
pub fn chernykh_constants(alpha: f64, p: f64, m: u32) -> Vec<NamedConstant> {
    let ap = alpha * p;
    let mf = f64::from(m);
    let int_half = (ap / 2.0).fract() == 0.0;
    vec![
        NamedConstant {
            name: "cosine_weight_pth_power_bound",
            value: (ap / 2.0 + 1.0) / 2f64.powf(ap),
            applies: int_half,
            condition: "alpha p / 2 integer",
        },
        NamedConstant {
            name: "cosine_weight_sharp_constant",
            value: (ap / 2.0 + 1.0).powf(1.0 / p) / 2f64.powf(alpha),
            applies: int_half,
            condition: "alpha p / 2 integer",
        },
        NamedConstant {
            name: "uniform_modulus_constant",
            value: (4.0f64 / 3.0).powf(1.0 / p) / 2f64.powf(alpha / 2.0),
            applies: p >= 1.0,
            condition: "p >= 1, alpha > 0",
        },
        NamedConstant {
            name: "uniform_modulus_constant_relaxed",
            value: 4.0 / (3.0 * 2f64.powf(alpha / 2.0)),
            applies: p >= 1.0,
            condition: "p >= 1, alpha > 0",
        },
        NamedConstant {
            name: "integer_order_modulus_constant",
            value: (4.0 - 2.0 * SQRT_2) / 2f64.powf(mf / 2.0),
            applies: m >= 1,
            condition: "order m integer",
        },
        NamedConstant {
            name: "b2_integral_constant",
            value: (mf + 1.0) / 2f64.powf(2.0 * mf + 1.0),
            applies: m >= 1,
            condition: "p = 2, order m integer",
        },
        NamedConstant {
            name: "b2_modulus_constant",
            value: (mf + 1.0).sqrt() / 2f64.powf(mf),
            applies: m >= 1,
            condition: "p = 2, order m integer",
        },
    ]
}

/// `sigma(s)` with a rigorous bound on the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Default number of terms for [`sigma_series`].
pub const SIGMA_TERM_BUDGET: usize = 1_000_000;

/// The correction series in the bound chain for `K^p_{n,alpha,p}(pi)`.
///
/// Term `alpha` is `C(s, 2 alpha) 2^{1-2 alpha} (odd C(2 alpha, alpha) - S_alpha)`, with
/// `odd = 1` for odd `[s]` and `S_alpha = sum_{j < alpha} C(2 alpha, j) 2/((2(alpha-j))^2 - 1)`.
/// The inner sum telescopes to `C(2 alpha, alpha) - 4^alpha/(2 alpha + 1)`.
pub fn sigma_series(s: f64, tol: f64) -> Result<SeriesValue> {
    sigma_series_with_budget(s, tol, SIGMA_TERM_BUDGET)
}

pub fn sigma_series_with_budget(s: f64, tol: f64, budget: usize) -> Result<SeriesValue> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("sigma(s) needs s > 0, got {s}")));
    }
    if s.fract() == 0.0 {
        return Ok(SeriesValue { value: 0.0, tail_bound: 0.0, terms: 0 });
    }
    let odd = if (s.floor() as i64) % 2 == 1 { 1.0 } else { 0.0 };
    let first = (s / 2.0).floor() as usize + 1;
    // binom = C(s, m) and below = C(s - 1, m) for m = 2 alpha; c = C(2 alpha, alpha) / 4^alpha.
    let mut binom = 1.0f64;
    let mut below = 1.0f64;
    let mut m = 0usize;
    let mut c = 1.0f64;
    for a in 1..first {
        c *= (2 * a - 1) as f64 / (2 * a) as f64;
    }
    let advance = |binom: &mut f64, below: &mut f64, m: &mut usize, to: usize| {
        while *m < to {
            *m += 1;
            *binom *= (s - (*m - 1) as f64) / *m as f64;
            *below *= (s - *m as f64) / *m as f64;
        }
    };
    let mut acc = crate::numeric::Compensated::new();
    let mut alpha = first;
    let mut terms = 0;
    loop {
        c *= (2 * alpha - 1) as f64 / (2 * alpha) as f64;
        advance(&mut binom, &mut below, &mut m, 2 * alpha);
        let inner = 2.0 * c - 2.0 / (2 * alpha + 1) as f64;
        acc.add(binom * (odd * 2.0 * c - inner));
        terms += 1;
        // Beyond this term: |sum_{m > 2 alpha} C(s, m)| weights are
        // bounded by |C(s-1, 2 alpha)|, and each factor by 2c + 2/(2 alpha + 3).
        if 2 * alpha as i64 >= s.ceil() as i64 {
            let bound = (2.0 * c + 2.0 / (2 * alpha + 3) as f64) * below.abs();
            if bound <= tol {
                return Ok(SeriesValue { value: -acc.value(), tail_bound: bound, terms });
            }
            if terms >= budget {
                return Err(Error::Convergence(format!("sigma({s}): tail bound {bound:.3e} after {terms} terms")));
            }
        }
        alpha += 1;
    }
}

/// Both bounds of the chain `K^p <= 1/(2^{s-1} I_n(s)) <= (s+1)/(2^{2s} + 2^{s-1}(s+1) sigma(s))`, `s = alpha p/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainCheck {
    pub s: f64,
    pub middle: f64,
    pub right: f64,
    pub sigma: SeriesValue,
    pub holds: bool,
}

pub fn sigma_chain_check(alpha: f64, p: f64, n: usize, tol: f64) -> Result<ChainCheck> {
    let s = alpha * p / 2.0;
    let i = cosine_power_inf(s, n, &FrequencyLadder::Integer)?;
    let sigma = sigma_series(s, tol)?;
    let middle = 1.0 / (2f64.powf(s - 1.0) * i.value);
    let right_at = |x: f64| (s + 1.0) / (2f64.powf(2.0 * s) + 2f64.powf(s - 1.0) * (s + 1.0) * x);
    let right = right_at(sigma.value);
    // The interval for sigma maps to an interval for the right side; take its upper end.
    let right_hi = right_at(sigma.value - sigma.tail_bound);
    let holds = middle <= right_hi * (1.0 + 1e-9);
    Ok(ChainCheck { s, middle, right, sigma, holds })
}

/// `int_0^pi u^m sin u du` by the recurrence `I_m = pi^m - m(m-1) I_{m-2}`.
fn power_sine_moment_recurrence(m: u32) -> f64 {
    let (mut a, mut b) = (2.0f64, PI); // I_0, I_1
    if m == 0 {
        return a;
    }
    for k in 2..=m {
        let next = PI.powi(k as i32) - f64::from(k) * f64::from(k - 1) * a;
        a = b;
        b = next;
    }
    b
}

/// `int_0^pi u^{2N} sin u du = (2N)! sum_{l >= 1} (-1)^{l-1} pi^{2N+2l}/(2N+2l)!`.
fn even_sine_moment_series(n: u32) -> f64 {
    let m = 2 * n;
    // term_l = (2N)! pi^{2N+2l}/(2N+2l)!, built by ratios.
    let mut term = (1..=2).fold(PI.powi(m as i32), |t, j| t * PI / f64::from(m + j));
    let mut acc = crate::numeric::Compensated::new();
    let mut l = 1u32;
    loop {
        let signed = if l % 2 == 1 { term } else { -term };
        acc.add(signed);
        let next = term * PI * PI / (f64::from(m + 2 * l + 1) * f64::from(m + 2 * l + 2));
        if next < 1e-18 * acc.value().abs() {
            return acc.value();
        }
        term = next;
        l += 1;
    }
}

/// `K(N) = (1/(2 N!)) int_0^pi u^{2N} sin u du`.
pub fn kappa(n: u32) -> Result<f64> {
    if n == 0 || n > 20 {
        return Err(Error::domain(format!("K(N) is provided for 1 <= N <= 20, got {n}")));
    }
    // The recurrence loses digits for large N through cancellation.
    let moment = if n <= 2 { power_sine_moment_recurrence(2 * n) } else { even_sine_moment_series(n) };
    let fact: f64 = (1..=n).map(f64::from).product();
    Ok(moment / (2.0 * fact))
}

/// `int_0^pi u^{2N} sin u du` recovered from [`kappa`].
pub fn even_sine_moment(n: u32) -> Result<f64> {
    let fact: f64 = (1..=n).map(f64::from).product();
    Ok(2.0 * fact * kappa(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn alpha_setup(alpha: f64, p: f64, tau: f64, v: WeightMeasure, n: usize) -> JacksonSetup {
        JacksonSetup::new(n, PhiFunction::alpha(alpha).unwrap(), p, tau, v).unwrap()
    }

    #[test]
    fn chernykh_case() {
        let s = alpha_setup(1.0, 2.0, PI, WeightMeasure::cosine(), 3);
        let i = jackson_i(&s).unwrap();
        assert!((i.value - 4.0).abs() < 1e-10);
        assert_eq!(i.k_star, 3);
        assert!(i.certificate.contains("tail-dominated"));
        assert!((jackson_constant(&s).unwrap() - 0.5f64.sqrt()).abs() < 1e-10);
        assert!((closed_form_constant(&s).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cosine_power_matches_closed_form() {
        for s in 1..=3 {
            for n in [1, 4] {
                let r = cosine_power_inf(f64::from(s), n, &FrequencyLadder::Integer).unwrap();
                assert!((r.value - cosine_power_closed_form(f64::from(s))).abs() < 1e-10);
                assert_eq!(r.k_star, n);
            }
        }
    }

    #[test]
    fn atomic_weight_scan() {
        let s = alpha_setup(1.0, 1.0, 2.0, WeightMeasure::atomic(vec![(2.0, 1.0)]).unwrap(), 2);
        let i = jackson_i(&s).unwrap();
        assert!(i.value <= i.at_n);
        assert!(i.certificate.contains("scan-limited"));
    }

    #[test]
    fn sigma_integer_is_zero() {
        for s in 1..=6 {
            let r = sigma_series(f64::from(s), 1e-12).unwrap();
            assert_eq!((r.value, r.terms), (0.0, 0));
        }
    }

    #[test]
    fn inner_sum_closed_form() {
        let binom = |n: u64, k: u64| (1..=k).fold(1.0f64, |b, j| b * (n + 1 - j) as f64 / j as f64);
        for a in 1..12u64 {
            let direct: f64 = (0..a).map(|j| binom(2 * a, j) * 2.0 / ((2.0 * (a - j) as f64).powi(2) - 1.0)).sum();
            let closed = binom(2 * a, a) - 4f64.powi(a as i32) / (2 * a + 1) as f64;
            assert!((direct - closed).abs() < 1e-9 * closed.abs());
        }
    }

    #[test]
    fn sigma_half_and_chain() {
        let r = sigma_series(0.5, 1e-5).unwrap();
        assert!(r.tail_bound <= 1e-5 && r.value.is_finite());
        for s in [0.5, 1.5] {
            let c = sigma_chain_check(2.0 * s, 1.0, 2, 1e-5).unwrap();
            assert!(c.holds, "{c:?}");
        }
    }

    #[test]
    fn kappa_values() {
        assert!((kappa(1).unwrap() - (PI * PI - 4.0) / 2.0).abs() < 1e-14);
        let i4 = PI.powi(4) - 12.0 * PI * PI + 48.0;
        assert!((even_sine_moment(2).unwrap() - i4).abs() < 1e-12);
        for n in 1..=20u32 {
            let q = quadrature::integrate(|u| u.powi(2 * n as i32) * u.sin(), 0.0, PI, 1e-16).unwrap().value;
            assert!((even_sine_moment(n).unwrap() - q).abs() < 1e-12 * q, "N = {n}");
        }
        assert!(
            (power_sine_moment_recurrence(8) - even_sine_moment_series(4)).abs() < 1e-12 * even_sine_moment_series(4)
        );
        assert!(kappa(21).is_err());
    }

    #[test]
    fn constants_table() {
        let t = chernykh_constants(1.0, 2.0, 1);
        let get = |name: &str| t.iter().find(|c| c.name == name).unwrap().value;
        assert_eq!(get("b2_integral_constant"), 0.25);
        assert!((get("b2_modulus_constant") - SQRT_2 / 2.0).abs() < 1e-15);
        assert!(
            (chernykh_constants(2.0, 2.0, 2)
                .iter()
                .find(|c| c.name == "integer_order_modulus_constant")
                .unwrap()
                .value
                - (2.0 - SQRT_2))
                .abs()
                < 1e-15
        );
        assert!((get("cosine_weight_sharp_constant") - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sharpness_cases() {
        let eps = Complex64::new(0.4, -0.2);
        for n in [1, 3] {
            let s = alpha_setup(1.0, 2.0, PI, WeightMeasure::cosine(), n);
            let w = jackson_sharpness_witness(&s, Complex64::new(5.0, 1.0), eps).unwrap();
            assert!(w.equivalence && w.monotone);
            assert!((w.ratio.powi(2) - 0.5).abs() < 1e-9);
            let tau = 0.75 * PI;
            let s = alpha_setup(1.0, 1.0, tau, WeightMeasure::identity(), n);
            let w = jackson_sharpness_witness(&s, Complex64::new(0.0, 0.0), eps).unwrap();
            let want = tau / (2.0 * quadrature::integrate(|t| (t / 2.0).sin(), 0.0, tau, 1e-14).unwrap().value);
            assert!((w.ratio - want).abs() < 1e-9, "{w:?}");
            assert!((w.closed_form.unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_bound() {
        let s = alpha_setup(1.0, 2.0, PI, WeightMeasure::cosine(), 4);
        let f = Spectrum::lattice_1d([(0, Complex64::new(1.0, 0.0)), (3, Complex64::new(0.0, 1.0))]).unwrap();
        let b = jackson_bound(&f, &s, BoundForm::Averaged).unwrap();
        assert_eq!(b.lhs, 0.0);
        assert!(b.slack >= 0.0);
    }

    #[test]
    fn psi_variant_and_widths() {
        let psi = PsiSystem::product(vec![psi::Profile::Pow(-1.0)]).unwrap();
        let s = alpha_setup(1.0, 2.0, PI, WeightMeasure::cosine(), 3).with_psi(psi.clone()).unwrap();
        assert!((nu(&psi, 3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let f = Spectrum::lattice_1d([
            (2, Complex64::new(1.0, 0.0)),
            (5, Complex64::new(0.2, 0.1)),
            (-7, Complex64::new(0.05, 0.0)),
        ])
        .unwrap();
        for form in [BoundForm::Modulus, BoundForm::Averaged] {
            let b = jackson_bound(&f, &s, form).unwrap();
            assert!(b.slack >= -1e-10, "{b:?}");
        }
        let w = jackson_widths(&s, &psi, None).unwrap();
        assert!((w.exact.unwrap() - 0.5f64.sqrt() / 3.0).abs() < 1e-10);
        assert!(jackson_widths(&s, &PsiSystem::harmonic(), None).is_err());
    }

    #[test]
    fn majorant_example() {
        let phi = PhiFunction::alpha(1.0).unwrap();
        // u^r passes for small r and fails once r exceeds alpha.
        let good = majorant_condition_check(&|u: f64| u.powf(0.5), &phi, PI, &WeightMeasure::cosine(), 2.0).unwrap();
        assert!(good.holds, "{good:?}");
        let bad = majorant_condition_check(&|u: f64| u.powf(3.0), &phi, PI, &WeightMeasure::cosine(), 2.0).unwrap();
        assert!(!bad.holds);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_bounds_hold(coefs in proptest::collection::btree_map(-15i64..15, (-1.0f64..1.0, -1.0f64..1.0), 1..8),
                              n in 1usize..6, which in 0usize..2) {
            let f = Spectrum::lattice_1d(coefs.into_iter().map(|(k, (a, b))| (k, Complex64::new(a, b)))).unwrap();
            let s = if which == 0 {
                alpha_setup(1.0, 2.0, PI, WeightMeasure::cosine(), n)
            } else {
                alpha_setup(1.5, 1.0, 0.75 * PI, WeightMeasure::identity(), n)
            };
            for form in [BoundForm::Modulus, BoundForm::Averaged] {
                let b = jackson_bound(&f, &s, form).unwrap();
                prop_assert!(b.slack >= -1e-10, "{:?}", b);
            }
        }
    }
}
