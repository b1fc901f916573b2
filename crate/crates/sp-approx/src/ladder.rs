//! Increasing frequency ladders `0 = lambda_0 < lambda_1 < lambda_2 < ...`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FrequencyLadder {
    /// `lambda_k = k`.
    Integer,
    /// `lambda_k = k^2`; no gap bound.
    Square,
    /// `lambda_k = k + amp sin k` with `|amp| < 1/2`.
    Perturbed { amp: f64 },
    /// Explicit `lambda_1, lambda_2, ...`.
    Table { values: Vec<f64> },
}

impl FrequencyLadder {
    pub fn perturbed(amp: f64) -> Result<Self> {
        if !(amp.abs() < 0.5) {
            return Err(Error::domain(format!("perturbation amplitude must be below 1/2, got {amp}")));
        }
        Ok(FrequencyLadder::Perturbed { amp })
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        if values.first().is_none_or(|&v| !(v > 0.0)) {
            return Err(Error::domain("ladder tables start with a positive value"));
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("ladder values must be finite and strictly increasing"));
        }
        Ok(FrequencyLadder::Table { values })
    }

    pub fn label(&self) -> String {
        match self {
            FrequencyLadder::Integer => "integer".into(),
            FrequencyLadder::Square => "square".into(),
            FrequencyLadder::Perturbed { amp } => format!("perturbed:{amp}"),
            FrequencyLadder::Table { values } => format!("table[{}]", values.len()),
        }
    }

    /// Largest valid index, if finite.
    pub fn max_index(&self) -> Option<usize> {
        match self {
            FrequencyLadder::Table { values } => Some(values.len()),
            _ => None,
        }
    }

    /// `lambda_k`, with `lambda_0 = 0`.
    pub fn lambda(&self, k: usize) -> Result<f64> {
        let x = k as f64;
        Ok(match self {
            _ if k == 0 => 0.0,
            FrequencyLadder::Integer => x,
            FrequencyLadder::Square => x * x,
            FrequencyLadder::Perturbed { amp } => x + amp * x.sin(),
            FrequencyLadder::Table { values } => *values.get(k - 1).ok_or_else(|| {
                Error::domain(format!("ladder table has {} entries; index {k} requested", values.len()))
            })?,
        })
    }

    /// `K` with `lambda_{k+1} - lambda_k <= K` for all `k`, when one exists.
    pub fn gap_bound(&self) -> Option<f64> {
        match self {
            FrequencyLadder::Integer => Some(1.0),
            FrequencyLadder::Square => None,
            FrequencyLadder::Perturbed { amp } => Some(1.0 + 2.0 * amp.abs()),
            FrequencyLadder::Table { values } => {
                let mut prev = 0.0;
                let mut gap = 0.0f64;
                for &v in values {
                    gap = gap.max(v - prev);
                    prev = v;
                }
                Some(gap)
            }
        }
    }

    /// `k` with `lambda_k = x` up to a relative `1e-12`.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let x = x.abs();
        if x == 0.0 {
            return Some(0);
        }
        let close = |k: usize| self.lambda(k).is_ok_and(|l| (l - x).abs() <= 1e-12 * x.max(1.0));
        let guess = match self {
            FrequencyLadder::Integer | FrequencyLadder::Perturbed { .. } => x.round() as usize,
            FrequencyLadder::Square => x.sqrt().round() as usize,
            FrequencyLadder::Table { values } => values.partition_point(|&v| v < x * (1.0 - 1e-12)) + 1,
        };
        (guess.saturating_sub(1)..=guess + 1).find(|&k| k > 0 && close(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_values() {
        assert_eq!(FrequencyLadder::Integer.lambda(7).unwrap(), 7.0);
        assert_eq!(FrequencyLadder::Square.lambda(3).unwrap(), 9.0);
        let p = FrequencyLadder::perturbed(0.3).unwrap();
        assert_eq!(p.lambda(0).unwrap(), 0.0);
        assert!((p.lambda(2).unwrap() - (2.0 + 0.3 * 2f64.sin())).abs() < 1e-15);
        assert!(FrequencyLadder::perturbed(0.5).is_err());
    }

    #[test]
    fn gaps_hold() {
        let p = FrequencyLadder::perturbed(0.3).unwrap();
        let k = p.gap_bound().unwrap();
        for i in 0..5000 {
            let d = p.lambda(i + 1).unwrap() - p.lambda(i).unwrap();
            assert!(d > 0.0 && d <= k);
        }
        assert_eq!(FrequencyLadder::table(vec![0.5, 2.0, 2.5]).unwrap().gap_bound(), Some(1.5));
        assert!(FrequencyLadder::table(vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn inverse_lookup() {
        let p = FrequencyLadder::perturbed(0.4).unwrap();
        for k in 1..200 {
            assert_eq!(p.index_of(p.lambda(k).unwrap()), Some(k));
            assert_eq!(FrequencyLadder::Square.index_of((k * k) as f64), Some(k));
        }
        assert_eq!(FrequencyLadder::Integer.index_of(2.5), None);
        let t = FrequencyLadder::table(vec![0.5, 2.0, 2.5]).unwrap();
        assert_eq!(t.index_of(-2.0), Some(2));
        assert_eq!(t.index_of(3.0), None);
    }
}
