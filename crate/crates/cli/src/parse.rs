//! Parsers for angle, power and grid flags.

use std::f64::consts::PI;

use nlbox::ProbabilityRuleF64;

/// Radians as a decimal literal or a rational multiple of pi: `pi`, `2pi`,
/// `-pi/2`, `3*pi/8`, `11pi/8`.
pub fn angle(s: &str) -> Result<f64, String> {
    let t: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let bad = || format!("invalid angle {s:?}");
    let Some((coef, rest)) = t.split_once("pi") else {
        return t
            .parse::<f64>()
            .map_err(|_| bad())
            .and_then(|v| finite(v, s));
    };
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let num = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let den = match rest {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    if den == 0.0 {
        return Err(bad());
    }
    finite(num * PI / den, s)
}

fn finite(v: f64, s: &str) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("angle {s:?} is not finite"))
    }
}

/// A power `n >= 0`, or `inf` for the limit rule.
pub fn rule(s: &str) -> Result<ProbabilityRuleF64, String> {
    let t = s.trim().to_lowercase();
    let n = match t.as_str() {
        "inf" | "infinity" | "+inf" => f64::INFINITY,
        _ => t
            .parse::<f64>()
            .map_err(|_| format!("invalid power {s:?}"))?,
    };
    ProbabilityRuleF64::power(n).map_err(|e| e.to_string())
}

/// A comma list of items, or `start:stop:count` for `count` evenly spaced
/// points including both ends. The empty string is the empty grid.
fn grid(s: &str, item: impl Fn(&str) -> Result<f64, String>) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [one] => one.split(',').map(|p| item(p.trim())).collect(),
        [start, stop, count] => {
            let (a, b) = (item(start)?, item(stop)?);
            let k: usize = count
                .trim()
                .parse()
                .map_err(|_| format!("invalid point count {count:?}"))?;
            if !(a.is_finite() && b.is_finite()) {
                return Err(format!("range ends must be finite in {s:?}"));
            }
            Ok(match k {
                0 => Vec::new(),
                1 => vec![a],
                _ => (0..k)
                    .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
                    .collect(),
            })
        }
        _ => Err(format!(
            "invalid grid {s:?}: expected a,b,c or start:stop:count"
        )),
    }
}

pub fn angle_grid(s: &str) -> Result<Vec<f64>, String> {
    grid(s, angle)
}

pub fn rule_grid(s: &str) -> Result<Vec<ProbabilityRuleF64>, String> {
    grid(s, |p| rule(p).map(|r| r.exponent_or_inf()))?
        .into_iter()
        .map(|n| ProbabilityRuleF64::power(n).map_err(|e| e.to_string()))
        .collect()
}

/// A CHSH target: a number, `tsirelson` (2√2) or `trivial-cc` (4√(2/3)).
pub fn target(s: &str) -> Result<f64, String> {
    match s.trim().to_lowercase().as_str() {
        "tsirelson" => Ok(2.0 * std::f64::consts::SQRT_2),
        "trivial-cc" => Ok(4.0 * (2.0_f64 / 3.0).sqrt()),
        t => t
            .parse::<f64>()
            .map_err(|_| format!("invalid target {s:?}")),
    }
}
