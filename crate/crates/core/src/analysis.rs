//! No-signaling, CHSH and isotropy analysis of behavior boxes, plus the
//! closed-form CHSH expressions and parameter sweeps built on them.

use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::boxgen::{bell_closed_form, chsh_observables_box, pr_box};
use crate::error::{Error, Result};
use crate::model::{BehaviorBox, ProbabilityRule, TwoQubitState};
use crate::rules::eval_f0;
use crate::scalar::Scalar;

/// Default tolerance for [`no_signaling_report`] at `f64` precision.
pub const DEFAULT_NO_SIGNALING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Alice => f.write_str("alice"),
            Party::Bob => f.write_str("bob"),
        }
    }
}

/// One marginal-independence constraint. `party` owns the marginal;
/// `setting` is that party's own input. The residual is the spread of the
/// marginal across the other party's two inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintResidual<T> {
    pub party: Party,
    pub output: usize,
    pub setting: usize,
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoSignalingReport<T> {
    /// Largest change in Bob's marginals caused by Alice's input.
    pub max_violation_alice_to_bob: T,
    /// Largest change in Alice's marginals caused by Bob's input.
    pub max_violation_bob_to_alice: T,
    pub residuals: Vec<ConstraintResidual<T>>,
    pub tol: T,
    pub passed: bool,
}

impl<T: Scalar> NoSignalingReport<T> {
    pub fn max_violation(&self) -> T {
        self.max_violation_alice_to_bob
            .max(self.max_violation_bob_to_alice)
    }
}

/// Evaluates the eight no-signaling constraints
/// `Σ_a P(a,b|0,y) = Σ_a P(a,b|1,y)` and `Σ_b P(a,b|x,0) = Σ_b P(a,b|x,1)`.
pub fn no_signaling_report<T: Scalar>(bx: &BehaviorBox<T>, tol: T) -> NoSignalingReport<T> {
    let mut residuals = Vec::with_capacity(8);
    let mut a_to_b = T::zero();
    let mut b_to_a = T::zero();
    for setting in 0..2 {
        for output in 0..2 {
            let r =
                (bx.bob_marginal(output, 0, setting) - bx.bob_marginal(output, 1, setting)).abs();
            a_to_b = a_to_b.max(r);
            residuals.push(ConstraintResidual {
                party: Party::Bob,
                output,
                setting,
                residual: r,
            });
        }
    }
    for setting in 0..2 {
        for output in 0..2 {
            let r = (bx.alice_marginal(output, setting, 0) - bx.alice_marginal(output, setting, 1))
                .abs();
            b_to_a = b_to_a.max(r);
            residuals.push(ConstraintResidual {
                party: Party::Alice,
                output,
                setting,
                residual: r,
            });
        }
    }
    NoSignalingReport {
        max_violation_alice_to_bob: a_to_b,
        max_violation_bob_to_alice: b_to_a,
        residuals,
        tol,
        passed: a_to_b.max(b_to_a) <= tol,
    }
}

/// `|LHS − RHS|` of Bob's `b = 0`, `y = 0` marginal constraint written out
/// for the state family:
///
/// ```text
/// |α|² = (|α|²cos²(θ/2) + |β|²sin²(θ/2)) F₀(α cos(θ/2), β sin(θ/2))
///      + (|α|²sin²(θ/2) + |β|²cos²(θ/2)) F₀(α sin(θ/2), β cos(θ/2))
/// ```
///
/// Vanishes for `|α| = |β|` or for the Born rule.
pub fn nosignal_residual_eq15<T: Scalar>(
    state: &TwoQubitState<T>,
    theta: T,
    rule: &ProbabilityRule<T>,
) -> Result<T> {
    let (alpha, beta) = (state.alpha(), state.beta());
    let (wa, wb) = (alpha.norm_sqr(), beta.norm_sqr());
    let (s, c) = (theta / T::two()).sin_cos();
    let w_same = wa * c * c + wb * s * s;
    let w_swap = wa * s * s + wb * c * c;
    let mut rhs = T::zero();
    if w_same > T::zero() {
        rhs = rhs + w_same * eval_f0(rule, alpha * c, beta * s)?;
    }
    if w_swap > T::zero() {
        rhs = rhs + w_swap * eval_f0(rule, alpha * s, beta * c)?;
    }
    Ok((wa - rhs).abs())
}

/// `C_xy = P(0,0|x,y) + P(1,1|x,y) − P(0,1|x,y) − P(1,0|x,y)`.
pub fn correlator<T: Scalar>(bx: &BehaviorBox<T>, x: usize, y: usize) -> T {
    bx.prob(0, 0, x, y) + bx.prob(1, 1, x, y) - bx.prob(0, 1, x, y) - bx.prob(1, 0, x, y)
}

fn correlators<T: Scalar>(bx: &BehaviorBox<T>) -> [[T; 2]; 2] {
    [
        [correlator(bx, 0, 0), correlator(bx, 0, 1)],
        [correlator(bx, 1, 0), correlator(bx, 1, 1)],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshReport<T> {
    pub value: T,
    /// `correlators[x][y] = C_xy`.
    pub correlators: [[T; 2]; 2],
    /// The `(x, y)` whose correlator carries the minus sign in the maximum.
    pub minus_at: (usize, usize),
}

/// `|C₀₀ + C₀₁ + C₁₀ + C₁₁ − 2 C_minus|` for one placement of the minus sign.
pub fn chsh_for_labeling<T: Scalar>(bx: &BehaviorBox<T>, minus_at: (usize, usize)) -> T {
    labeled(&correlators(bx), minus_at)
}

fn labeled<T: Scalar>(c: &[[T; 2]; 2], (mx, my): (usize, usize)) -> T {
    let total = c[0][0] + c[0][1] + c[1][0] + c[1][1];
    (total - T::two() * c[mx][my]).abs()
}

/// CHSH value maximised over the four placements of the minus sign. Ties go
/// to the lexicographically smallest `(x, y)`.
pub fn chsh_value<T: Scalar>(bx: &BehaviorBox<T>) -> ChshReport<T> {
    let c = correlators(bx);
    let mut best = (T::neg_infinity(), (0, 0));
    for minus_at in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let v = labeled(&c, minus_at);
        if v > best.0 {
            best = (v, minus_at);
        }
    }
    ChshReport {
        value: best.0,
        correlators: c,
        minus_at: best.1,
    }
}

/// CHSH value of [`bell_closed_form`] with the minus sign on `(1, 1)`:
///
/// ```text
/// 1 + g₀(s̃,c̃) − g₁(s̃,c̃) + g₁(s,c) − g₀(s,c) + g₁(S,C) − g₀(S,C)
/// ```
///
/// with `s = sin(θ/2)`, `s̃ = sin(θ̃/2)`, `S = sin((θ+θ̃)/2)` and likewise
/// for the cosines. This is the signed sum, not its absolute value.
pub fn nonisotropic_chsh_closed_form<T: Scalar>(
    theta: T,
    theta_tilde: T,
    rule: &ProbabilityRule<T>,
) -> T {
    let g0 = |u: T, v: T| {
        eval_f0(rule, Complex::new(u, T::zero()), Complex::new(v, T::zero()))
            .expect("sin and cos never vanish together")
    };
    let g1 = |u: T, v: T| g0(v, u);
    let (s, c) = (theta / T::two()).sin_cos();
    let (st, ct) = (theta_tilde / T::two()).sin_cos();
    let (ss, cs) = ((theta + theta_tilde) / T::two()).sin_cos();
    T::one() + g0(st, ct) - g1(st, ct) + g1(s, c) - g0(s, c) + g1(ss, cs) - g0(ss, cs)
}

/// Largest deviation from `C₀₀ = C₀₁ = C₁₀ = −C₁₁` with all single-party
/// marginals equal to ½.
pub fn isotropy_residual<T: Scalar>(bx: &BehaviorBox<T>) -> T {
    let c = correlators(bx);
    let mut r = (c[0][0] - c[0][1])
        .abs()
        .max((c[0][0] - c[1][0]).abs())
        .max((c[0][0] + c[1][1]).abs());
    for x in 0..2 {
        for y in 0..2 {
            for out in 0..2 {
                r = r
                    .max((bx.alice_marginal(out, x, y) - T::half()).abs())
                    .max((bx.bob_marginal(out, x, y) - T::half()).abs());
            }
        }
    }
    r
}

pub fn isotropy_check<T: Scalar>(bx: &BehaviorBox<T>, tol: T) -> bool {
    isotropy_residual(bx) <= tol
}

/// Mean over the four settings of the total-variation distance to the PR box.
pub fn pr_distance<T: Scalar>(bx: &BehaviorBox<T>) -> T {
    let pr = pr_box::<T>();
    let l1 = bx
        .as_array()
        .iter()
        .zip(pr.as_array().iter())
        .fold(T::zero(), |acc, (&p, &q)| acc + (p - q).abs());
    // ½ per setting, averaged over 4 settings.
    l1 / T::lit(8.0)
}

/// Whether the infinite-power Bell box at `(θ, θ̃)` is the PR box:
/// `|cos θ/2| > |sin θ/2|`, `|sin θ̃/2| > |cos θ̃/2|` and
/// `|cos (θ+θ̃)/2| > |sin (θ+θ̃)/2|`.
pub fn pr_angle_region<T: Scalar>(theta: T, theta_tilde: T) -> bool {
    let (s, c) = (theta / T::two()).sin_cos();
    let (st, ct) = (theta_tilde / T::two()).sin_cos();
    let (ss, cs) = ((theta + theta_tilde) / T::two()).sin_cos();
    c.abs() > s.abs() && st.abs() > ct.abs() && cs.abs() > ss.abs()
}

/// CHSH value of [`chsh_observables_box`]:
/// `4 (√(2+√2)ⁿ − √(2−√2)ⁿ) / (√(2+√2)ⁿ + √(2−√2)ⁿ)`.
pub fn chsh_observables_closed_form<T: Scalar>(rule: &ProbabilityRule<T>) -> T {
    let four = T::lit(4.0);
    match *rule {
        ProbabilityRule::Infinite => four,
        ProbabilityRule::Power(n) => {
            let root2 = T::SQRT_2();
            let ratio = ((T::two() - root2) / (T::two() + root2)).sqrt();
            let r = ratio.powf(n);
            four * (T::one() - r) / (T::one() + r)
        }
    }
}

const SOLVE_TOL: f64 = 1e-10;
const SOLVE_MAX_ITER: usize = 400;

/// Power `n` at which [`chsh_observables_closed_form`] reaches `target`,
/// by bisection on the increasing closed form. The initial bracket is
/// `[1e-6, 64]`; the upper end doubles (and the lower end halves) until the
/// target is enclosed.
pub fn solve_power_for_chsh<T: Scalar>(target: T) -> Result<T> {
    let four = T::lit(4.0);
    if !(target > T::zero() && target < four) {
        return Err(Error::OutOfRange(format!(
            "CHSH target {target} must lie in (0, 4)"
        )));
    }
    let chsh = |n: T| chsh_observables_closed_form(&ProbabilityRule::Power(n));
    let tol = T::lit(SOLVE_TOL);

    let mut lo = T::lit(1e-6);
    while chsh(lo) > target {
        lo = lo * T::half();
        if lo == T::zero() {
            return Err(Error::NoConvergence(format!(
                "no lower bracket for {target}"
            )));
        }
    }
    let mut hi = T::lit(64.0);
    while chsh(hi) < target {
        hi = hi * T::two();
        if !hi.is_finite() {
            return Err(Error::NoConvergence(format!(
                "no upper bracket for {target}"
            )));
        }
    }
    for _ in 0..SOLVE_MAX_ITER {
        let mid = (lo + hi) * T::half();
        let v = chsh(mid);
        if (v - target).abs() < tol {
            return Ok(mid);
        }
        if !(lo < mid && mid < hi) {
            break;
        }
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence(format!(
        "bisection stalled at [{lo}, {hi}] for target {target}"
    )))
}

/// Which family of boxes a power sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// [`bell_closed_form`] at fixed `(θ, θ̃)`.
    Bell,
    /// [`chsh_observables_box`].
    ChshObservables,
}

/// CHSH value for each rule in `grid`. Output order follows `grid`.
pub fn sweep_n<T: Scalar>(
    theta: T,
    theta_tilde: T,
    grid: &[ProbabilityRule<T>],
    mode: SweepMode,
) -> Vec<(ProbabilityRule<T>, T)> {
    grid.par_iter()
        .map(|rule| {
            let bx = match mode {
                SweepMode::Bell => bell_closed_form(theta, theta_tilde, rule),
                SweepMode::ChshObservables => chsh_observables_box(rule),
            };
            (*rule, chsh_value(&bx).value)
        })
        .collect()
}

/// CHSH value of the Bell box at fixed `θ` for each `θ̃` in `grid`.
pub fn sweep_angle<T: Scalar>(theta: T, grid: &[T], rule: &ProbabilityRule<T>) -> Vec<(T, T)> {
    grid.par_iter()
        .map(|&tt| (tt, chsh_value(&bell_closed_form(theta, tt, rule)).value))
        .collect()
}

/// Locations of steep changes in a sampled curve.
///
/// Slopes are taken between neighbouring samples; a transition is reported
/// at the midpoint of every slope whose magnitude is a local maximum (the
/// change in `|slope|` turns from rising to falling) and at least
/// `rel_threshold` times the steepest slope in the curve.
pub fn detect_transitions<T: Scalar>(xs: &[T], ys: &[T], rel_threshold: T) -> Vec<T> {
    assert_eq!(xs.len(), ys.len(), "xs and ys must have equal length");
    if xs.len() < 2 {
        return Vec::new();
    }
    let slopes: Vec<T> = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| ((y[1] - y[0]) / (x[1] - x[0])).abs())
        .collect();
    let steepest = slopes.iter().copied().fold(T::zero(), T::max);
    if steepest == T::zero() {
        return Vec::new();
    }
    let floor = steepest * rel_threshold;
    let mut out = Vec::new();
    for i in 0..slopes.len() {
        let left = if i == 0 { T::zero() } else { slopes[i - 1] };
        let right = slopes.get(i + 1).copied().unwrap_or_else(T::zero);
        if slopes[i] >= floor && slopes[i] >= left && slopes[i] > right {
            out.push((xs[i] + xs[i + 1]) * T::half());
        }
    }
    out
}
