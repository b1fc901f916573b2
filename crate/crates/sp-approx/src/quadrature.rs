//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_SUBDIVISIONS: usize = 1 << 16;

/// A quadrature value with its estimated absolute error.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Quad {
    type Output = Quad;
    fn add(self, o: Quad) -> Quad {
        Quad { value: self.value + o.value, error: self.error + o.error }
    }
}

impl std::ops::Mul<f64> for Quad {
    type Output = Quad;
    fn mul(self, c: f64) -> Quad {
        Quad { value: self.value * c, error: self.error * c.abs() }
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Quad {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Quad { value: kronrod * h, error: ((kronrod - gauss) * h).abs() }
}

struct Piece {
    a: f64,
    b: f64,
    q: Quad,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.q.error == o.q.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.q.error.total_cmp(&o.q.error)
    }
}

/// `int_a^b f` to absolute tolerance `tol`, bisecting the worst piece first.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Quad> {
    integrate_with_budget(f, a, b, tol, MAX_SUBDIVISIONS)
}

pub fn integrate_with_budget(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, budget: usize) -> Result<Quad> {
    if a == b {
        return Ok(Quad::default());
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if b < a {
        return integrate_with_budget(f, b, a, tol, budget).map(|q| q * -1.0);
    }
    let first = gk15(&f, a, b);
    if !first.value.is_finite() {
        return Err(Error::Quadrature("integrand is not finite on the interval".into()));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, q: first });
    let mut total = first;
    for _ in 0..budget {
        let floor = 64.0 * f64::EPSILON * total.value.abs();
        if total.error <= tol.max(floor) {
            return Ok(total);
        }
        let worst = heap.pop().expect("nonempty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Interval at machine resolution: keep its estimate.
            heap.push(Piece { q: Quad { error: 0.0, ..worst.q }, ..worst });
            total.error -= worst.q.error;
            continue;
        }
        let l = gk15(&f, worst.a, m);
        let r = gk15(&f, m, worst.b);
        total.value += l.value + r.value - worst.q.value;
        total.error += l.error + r.error - worst.q.error;
        heap.push(Piece { a: worst.a, b: m, q: l });
        heap.push(Piece { a: m, b: worst.b, q: r });
    }
    // Resum to shed the drift of the running updates.
    let value = crate::numeric::sum(heap.iter().map(|p| p.q.value));
    let error = crate::numeric::sum(heap.iter().map(|p| p.q.error));
    if error <= tol.max(64.0 * f64::EPSILON * value.abs()) {
        return Ok(Quad { value, error });
    }
    Err(Error::Quadrature(format!("tolerance {tol:e} not reached after {budget} subdivisions (error {error:e})")))
}
