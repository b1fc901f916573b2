//! Text forms of `psi`, `phi`, weights, `tau` and frequency ladders.
//!
//! ```text
//! psi    := "product:" axes | "product: axes=" axes
//!         | "radial: psi=" profile " dim=" int [" r=" num|inf] [" norm=" num|inf]
//!         | "explicit:" ("harmonic" | "power(" c "," s ")" | "geometric(" first "," ratio ")")
//!         | "explicit: file=" path
//! axes   := "[" profile ("," profile)* "]"
//! profile:= "pow(" s ")" | "geom(" b ")" | "exp(" c ")"
//! phi    := "alpha:" num | "theta:[" num ("," num)* "]" | "binomial:" int | "steklov:" int
//! v      := "cos" | "t" | "pwl:" path | "atomic:[[" t "," size "]" ... "]"
//! tau    := num | [num] "pi" ["/" num]
//! ladder := "integer" | "square" | "perturbed:" num | "table:[" num ("," num)* "]"
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ladder::FrequencyLadder;
use crate::moduli::{PhiFunction, WeightMeasure};
use crate::psi::{Profile, PsiSystem, TailRule};
use crate::spectrum::DifferenceScheme;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn number(s: &str) -> Result<f64> {
    let t = s.trim();
    match t {
        "inf" | "+inf" | "infinity" => return Ok(f64::INFINITY),
        _ => {}
    }
    t.parse::<f64>().ok().filter(|v| !v.is_nan()).ok_or_else(|| perr(format!("expected a number, found '{t}'")))
}

fn integer(s: &str) -> Result<u32> {
    s.trim().parse::<u32>().map_err(|_| perr(format!("expected a nonnegative integer, found '{}'", s.trim())))
}

/// Strips `name(` ... `)` and returns the inside.
fn call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.trim().strip_prefix(name)?.trim_start().strip_prefix('(')?.strip_suffix(')')
}

/// Splits a `[a, b, ...]` list at top-level commas.
fn list(s: &str) -> Result<Vec<&str>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| perr(format!("expected a bracketed list, found '{}'", s.trim())))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(perr("unbalanced brackets"));
        }
    }
    if depth != 0 {
        return Err(perr("unbalanced brackets"));
    }
    out.push(inner[start..].trim());
    Ok(out)
}

fn numbers(s: &str) -> Result<Vec<f64>> {
    list(s)?.into_iter().map(number).collect()
}

/// `key=value` pairs separated by whitespace; values may hold brackets.
fn keyvals(s: &str) -> Result<Vec<(&str, &str)>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let eq = rest.find('=').ok_or_else(|| perr(format!("expected key=value, found '{rest}'")))?;
        let key = rest[..eq].trim();
        let after = rest[eq + 1..].trim_start();
        let mut depth = 0i32;
        let mut end = after.len();
        for (i, ch) in after.char_indices() {
            match ch {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                c if c.is_whitespace() && depth == 0 => {
                    end = i;
                    break;
                }
                _ => {}
            }
        }
        out.push((key, after[..end].trim_end_matches(',')));
        rest = after[end..].trim_start();
    }
    Ok(out)
}

pub fn parse_profile(s: &str) -> Result<Profile> {
    let prof = if let Some(x) = call(s, "pow") {
        Profile::Pow(number(x)?)
    } else if let Some(x) = call(s, "geom") {
        Profile::Geometric(number(x)?)
    } else if let Some(x) = call(s, "exp") {
        Profile::Exp(number(x)?)
    } else {
        return Err(perr(format!("unknown profile '{}' (pow(s) | geom(b) | exp(c))", s.trim())));
    };
    Ok(prof)
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum TailFile {
    Zero,
    Power { c: f64, s: f64 },
    Geometric { first: f64, ratio: f64 },
}

#[derive(Deserialize)]
struct ExplicitFile {
    #[serde(default)]
    table: Vec<f64>,
    tail: TailFile,
}

fn resolve(path: &str, base: Option<&Path>) -> std::path::PathBuf {
    let p = Path::new(path);
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

/// Parses a `psi` specification; relative file paths resolve against `base`.
pub fn parse_psi(s: &str, base: Option<&Path>) -> Result<PsiSystem> {
    let s = s.trim();
    let (head, body) = s.split_once(':').ok_or_else(|| perr(format!("psi spec '{s}' needs a 'kind:' prefix")))?;
    let body = body.trim();
    match head.trim() {
        "product" => {
            let axes = match body.strip_prefix("axes") {
                Some(r) => r.trim_start().strip_prefix('=').ok_or_else(|| perr("expected axes=[...]"))?,
                None => body,
            };
            let profiles = list(axes)?.into_iter().map(parse_profile).collect::<Result<Vec<_>>>()?;
            PsiSystem::product(profiles)
        }
        "radial" => {
            let (mut prof, mut dim, mut r) = (None, None, 2.0);
            for (k, v) in keyvals(body)? {
                match k {
                    "psi" => prof = Some(parse_profile(v)?),
                    "dim" | "d" => dim = Some(integer(v)? as usize),
                    "r" | "norm" => r = number(v)?,
                    _ => return Err(perr(format!("unknown radial key '{k}'"))),
                }
            }
            let prof = prof.ok_or_else(|| perr("radial spec needs psi=..."))?;
            PsiSystem::radial(dim.ok_or_else(|| perr("radial spec needs dim=..."))?, prof, r)
        }
        "explicit" => {
            if let Some(r) = body.strip_prefix("file") {
                let path = r.trim_start().strip_prefix('=').ok_or_else(|| perr("expected file=path"))?.trim();
                let text = std::fs::read_to_string(resolve(path, base))?;
                let file: ExplicitFile = serde_json::from_str(&text)?;
                let tail = match file.tail {
                    TailFile::Zero => TailRule::Zero,
                    TailFile::Power { c, s } => TailRule::Power { c, s },
                    TailFile::Geometric { first, ratio } => TailRule::Geometric { first, ratio },
                };
                return PsiSystem::explicit(file.table, tail);
            }
            if body == "harmonic" {
                return Ok(PsiSystem::harmonic());
            }
            if let Some(x) = call(body, "power") {
                let v = numbers(&format!("[{x}]"))?;
                let [c, s] = v[..] else { return Err(perr("power(c, s) takes two numbers")) };
                return PsiSystem::explicit(Vec::new(), TailRule::Power { c, s });
            }
            if let Some(x) = call(body, "geometric") {
                let v = numbers(&format!("[{x}]"))?;
                let [first, ratio] = v[..] else { return Err(perr("geometric(first, ratio) takes two numbers")) };
                return PsiSystem::geometric_sequence(first, ratio);
            }
            Err(perr(format!("unknown explicit system '{body}'")))
        }
        other => Err(perr(format!("unknown psi kind '{other}' (product | radial | explicit)"))),
    }
}

pub fn parse_phi(s: &str) -> Result<PhiFunction> {
    let s = s.trim();
    let (head, body) = s.split_once(':').ok_or_else(|| perr(format!("phi spec '{s}' needs a 'kind:' prefix")))?;
    match head.trim() {
        "alpha" => PhiFunction::alpha(number(body)?),
        "theta" => PhiFunction::difference(DifferenceScheme::from_real(&numbers(body)?)?),
        "binomial" => PhiFunction::difference(DifferenceScheme::binomial(integer(body)?)),
        "steklov" => PhiFunction::steklov(integer(body)?),
        other => Err(perr(format!("unknown phi kind '{other}' (alpha | theta | binomial | steklov)"))),
    }
}

pub fn parse_weight(s: &str, base: Option<&Path>) -> Result<WeightMeasure> {
    let s = s.trim();
    match s {
        "cos" => return Ok(WeightMeasure::cosine()),
        "t" => return Ok(WeightMeasure::identity()),
        _ => {}
    }
    if let Some(path) = s.strip_prefix("pwl:") {
        let text = std::fs::read_to_string(resolve(path.trim(), base))?;
        return WeightMeasure::piecewise_linear_json(&text);
    }
    if let Some(body) = s.strip_prefix("atomic:") {
        let jumps = list(body)?
            .into_iter()
            .map(|pair| match numbers(pair)?[..] {
                [t, w] => Ok((t, w)),
                _ => Err(perr("atoms are [t, size] pairs")),
            })
            .collect::<Result<Vec<_>>>()?;
        return WeightMeasure::atomic(jumps);
    }
    Err(perr(format!("unknown weight '{s}' (cos | t | pwl:file | atomic:[[t,w],...])")))
}

/// `pi`, `3pi/4`, `pi/2`, `0.5pi` or a plain number; must be positive and finite.
pub fn parse_tau(s: &str) -> Result<f64> {
    let t = s.trim();
    let value = if let Some(i) = t.find("pi") {
        let coef = match t[..i].trim().trim_end_matches('*') {
            "" => 1.0,
            c => number(c)?,
        };
        let rest = t[i + 2..].trim();
        let div = match rest.strip_prefix('/') {
            Some(d) => number(d)?,
            None if rest.is_empty() => 1.0,
            None => return Err(perr(format!("cannot read tau '{t}'"))),
        };
        coef * std::f64::consts::PI / div
    } else {
        number(t)?
    };
    if !(value > 0.0 && value.is_finite()) {
        return Err(perr(format!("tau must be positive and finite, got '{t}'")));
    }
    Ok(value)
}

pub fn parse_ladder(s: &str) -> Result<FrequencyLadder> {
    let s = s.trim();
    match s {
        "integer" => return Ok(FrequencyLadder::Integer),
        "square" => return Ok(FrequencyLadder::Square),
        _ => {}
    }
    if let Some(a) = s.strip_prefix("perturbed:") {
        return FrequencyLadder::perturbed(number(a)?);
    }
    if let Some(v) = s.strip_prefix("table:") {
        return FrequencyLadder::table(numbers(v)?);
    }
    Err(perr(format!("unknown ladder '{s}' (integer | square | perturbed:a | table:[...])")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::PhiKind;
    use std::f64::consts::PI;

    #[test]
    fn psi_forms() {
        let a = parse_psi("product:[pow(-1),pow(-1)]", None).unwrap();
        let b = parse_psi("product: axes=[pow(-1), pow(-1)]", None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, PsiSystem::hyperbolic(2));
        assert_eq!(parse_psi("explicit:harmonic", None).unwrap(), PsiSystem::harmonic());
        assert_eq!(
            parse_psi("explicit: geometric(1, 0.5)", None).unwrap(),
            PsiSystem::geometric_sequence(1.0, 0.5).unwrap()
        );
        let r = parse_psi("radial: psi=pow(-2) dim=2 norm=inf", None).unwrap();
        assert_eq!(r, PsiSystem::radial(2, Profile::Pow(-2.0), f64::INFINITY).unwrap());
    }

    #[test]
    fn psi_file() {
        let dir = std::env::temp_dir().join(format!("sp-approx-parse-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(
            dir.join("psi.json"),
            r#"{"table": [1.0, 0.5], "tail": {"kind": "geometric", "first": 0.25, "ratio": 0.5}}"#,
        )
        .unwrap();
        let p = parse_psi("explicit: file=psi.json", Some(&dir)).unwrap();
        assert_eq!(p.magnitude(&[0]), 1.0);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn malformed() {
        for bad in [
            "product",
            "product:[pow(-1)",
            "product:[foo(1)]",
            "steady:[pow(-1)]",
            "explicit:nothing",
            "radial: psi=pow(-1)",
        ] {
            assert!(matches!(parse_psi(bad, None), Err(Error::Parse(_))), "{bad}");
        }
        assert!(matches!(parse_phi("alpha"), Err(Error::Parse(_))));
        assert!(matches!(parse_tau("-1"), Err(Error::Parse(_))));
        assert!(matches!(parse_ladder("cubic"), Err(Error::Parse(_))));
    }

    #[test]
    fn phi_weight_tau_ladder() {
        assert!(matches!(parse_phi("alpha:1.5").unwrap().kind(), PhiKind::ClassicalAlpha { alpha } if *alpha == 1.5));
        assert!((parse_phi("theta:[1,-2,1]").unwrap().sup() - 4.0).abs() < 1e-9);
        assert!(matches!(parse_phi("steklov:2").unwrap().kind(), PhiKind::Steklov { m: 2 }));
        assert_eq!(parse_weight("cos", None).unwrap().label(), "cos");
        assert_eq!(parse_weight("atomic:[[1, 0.5], [2, 1]]", None).unwrap().mass(3.0).unwrap(), 1.5);
        assert_eq!(parse_tau("pi").unwrap(), PI);
        assert_eq!(parse_tau("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_tau("0.5").unwrap(), 0.5);
        assert_eq!(parse_ladder("perturbed:0.3").unwrap(), FrequencyLadder::Perturbed { amp: 0.3 });
        assert_eq!(parse_ladder("table:[1, 2.5]").unwrap().lambda(2).unwrap(), 2.5);
    }
}
