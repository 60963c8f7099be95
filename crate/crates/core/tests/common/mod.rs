//! Test-only reference formulas, written independently of the library's
//! sequential measurement code.

#![allow(dead_code, clippy::needless_range_loop)]

use nlbox::{BehaviorBoxF64, TwoQubitStateF64};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C64 = Complex<f64>;

/// `|p|ⁿ / (|p|ⁿ + |q|ⁿ)` by direct exponentiation; `0/0` maps to ½.
pub fn literal_f0(n: f64, p: C64, q: C64) -> f64 {
    let (pn, qn) = (p.norm().powf(n), q.norm().powf(n));
    if pn + qn == 0.0 {
        0.5
    } else {
        pn / (pn + qn)
    }
}

/// The four per-setting tables for `α|↑↓⟩ + β|↓↑⟩`, transcribed term by
/// term. Returned as `p[x][y][a][b]`.
pub fn transcribed_tables(
    alpha: C64,
    beta: C64,
    theta: f64,
    theta_tilde: f64,
    n: f64,
) -> [[[[f64; 2]; 2]; 2]; 2] {
    let f0 = |p: C64, q: C64| literal_f0(n, p, q);
    let re = |v: f64| Complex::new(v, 0.0);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (ct, st) = ((theta_tilde / 2.0).cos(), (theta_tilde / 2.0).sin());
    let (wa, wb) = (alpha.norm_sqr(), beta.norm_sqr());
    let a1 = wa * c * c + wb * s * s;
    let a2 = wa * s * s + wb * c * c;
    let c1 = alpha * c * st + beta * s * ct;
    let c2 = alpha * c * ct - beta * s * st;
    let d1 = -alpha * s * st + beta * c * ct;
    let d2 = alpha * s * ct + beta * c * st;

    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    // x = 0, y = 0
    p[0][0][0][0] = wa;
    p[0][0][1][0] = 0.0;
    p[0][0][0][1] = 0.0;
    p[0][0][1][1] = wb;
    // x = 1, y = 0
    p[1][0][0][0] = a1 * f0(alpha * c, beta * s);
    p[1][0][1][0] = a2 * f0(alpha * s, beta * c);
    p[1][0][0][1] = a1 * f0(beta * s, alpha * c);
    p[1][0][1][1] = a2 * f0(beta * c, alpha * s);
    // x = 0, y = 1
    p[0][1][0][0] = wa * f0(re(st), re(ct));
    p[0][1][1][0] = wb * f0(re(ct), re(st));
    p[0][1][0][1] = wa * f0(re(ct), re(st));
    p[0][1][1][1] = wb * f0(re(st), re(ct));
    // x = 1, y = 1
    p[1][1][0][0] = a1 * f0(c1, c2);
    p[1][1][1][0] = a2 * f0(d1, d2);
    p[1][1][0][1] = a1 * f0(c2, c1);
    p[1][1][1][1] = a2 * f0(d2, d1);
    p
}

pub fn max_dev_from_tables(bx: &BehaviorBoxF64, t: &[[[[f64; 2]; 2]; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    worst = worst.max((bx.prob(a, b, x, y) - t[x][y][a][b]).abs());
                }
            }
        }
    }
    worst
}

/// Bob's `b = 0`, `y = 0` marginal identity by plain scalar arithmetic.
pub fn marginal_identity_scalar(alpha: C64, beta: C64, theta: f64, n: f64) -> f64 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (wa, wb) = (alpha.norm_sqr(), beta.norm_sqr());
    let lhs = wa;
    let rhs = (wa * c * c + wb * s * s) * literal_f0(n, alpha * c, beta * s)
        + (wa * s * s + wb * c * c) * literal_f0(n, alpha * s, beta * c);
    (lhs - rhs).abs()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(rng: &mut impl Rng) -> TwoQubitStateF64 {
    loop {
        let a = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if a.norm() + b.norm() > 1e-3 {
            return TwoQubitStateF64::new(a, b).unwrap();
        }
    }
}

pub fn random_angle(rng: &mut impl Rng) -> f64 {
    rng.gen_range(-2.0 * std::f64::consts::PI..4.0 * std::f64::consts::PI)
}
