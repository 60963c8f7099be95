//! Behavior boxes from sequential measurement.
//!
//! Alice measures first and her outcome follows the Born rule. Bob's qubit
//! collapses to the conditional state, which is re-expressed in Bob's
//! eigenbasis and measured under the modified rule.

use num_complex::Complex;

use crate::error::Result;
use crate::model::{
    tilted_eigenstates, BehaviorBox, MeasurementConfig, ProbabilityRule, TwoQubitState,
};
use crate::rules::eval_f0;
use crate::scalar::Scalar;

/// Real eigenvectors of a one-qubit projective measurement in
/// `{|↑⟩, |↓⟩}` coordinates, indexed by outcome bit.
pub type Basis<T> = [[T; 2]; 2];

/// Alice's and Bob's measurement bases, indexed by input bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings<T> {
    pub alice: [Basis<T>; 2],
    pub bob: [Basis<T>; 2],
}

impl<T: Scalar> Settings<T> {
    /// Alice: `+z` / `θ`. Bob: `−z` / `θ̃`.
    pub fn from_config(cfg: &MeasurementConfig<T>) -> Self {
        let (o, l) = (T::zero(), T::one());
        Self {
            alice: [[[l, o], [o, l]], tilted_eigenstates(cfg.theta())],
            bob: [[[o, l], [l, o]], tilted_eigenstates(cfg.theta_tilde())],
        }
    }

    /// `x = 0 → R = σx`, `x = 1 → Q = σz` for Alice and
    /// `y = 0 → T = (σz − σx)/√2`, `y = 1 → S = −(σz + σx)/√2` for Bob.
    /// Outcome `+1` is bit 0.
    pub fn chsh_observables() -> Self {
        let (o, l) = (T::zero(), T::one());
        let h = T::FRAC_1_SQRT_2();
        let (s1, c1) = T::FRAC_PI_8().sin_cos();
        let (s3, c3) = (T::lit(3.0) * T::FRAC_PI_8()).sin_cos();
        Self {
            alice: [[[h, h], [h, -h]], [[l, o], [o, l]]],
            bob: [[[c1, -s1], [s1, c1]], [[c3, -s3], [s3, c3]]],
        }
    }
}

/// One input pair `(x, y)` of the sequential procedure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequentialSetting<T> {
    /// Born probability of Alice's outcome `a`.
    pub alice: [T; 2],
    /// Probability of Bob's outcome `b` given Alice's outcome `a`,
    /// `bob_given_alice[a][b]`. Rows with zero Alice probability are `[½, ½]`.
    pub bob_given_alice: [[T; 2]; 2],
}

impl<T: Scalar> SequentialSetting<T> {
    pub fn joint(&self, a: usize, b: usize) -> T {
        self.alice[a] * self.bob_given_alice[a][b]
    }
}

/// Runs the sequential procedure for a single input pair.
pub fn sequential_setting<T: Scalar>(
    state: &TwoQubitState<T>,
    alice_basis: &Basis<T>,
    bob_basis: &Basis<T>,
    rule: &ProbabilityRule<T>,
) -> Result<SequentialSetting<T>> {
    let psi = state.amplitudes();
    let zero = Complex::new(T::zero(), T::zero());
    let mut alice = [T::zero(); 2];
    let mut bob_given_alice = [[T::half(); 2]; 2];
    for a in 0..2 {
        let e = alice_basis[a];
        // Bob's unnormalised conditional state ⟨e_a|ψ⟩ in z coordinates.
        let mut phi = [zero; 2];
        for (j, slot) in phi.iter_mut().enumerate() {
            *slot = psi[0][j] * e[0] + psi[1][j] * e[1];
        }
        alice[a] = phi[0].norm_sqr() + phi[1].norm_sqr();
        if alice[a] == T::zero() {
            continue;
        }
        let amp = |f: [T; 2]| phi[0] * f[0] + phi[1] * f[1];
        let (b0, b1) = (amp(bob_basis[0]), amp(bob_basis[1]));
        bob_given_alice[a] = [eval_f0(rule, b0, b1)?, eval_f0(rule, b1, b0)?];
    }
    Ok(SequentialSetting {
        alice,
        bob_given_alice,
    })
}

/// All four input pairs, indexed `[x][y]`.
pub fn sequential_settings<T: Scalar>(
    state: &TwoQubitState<T>,
    settings: &Settings<T>,
    rule: &ProbabilityRule<T>,
) -> Result<[[SequentialSetting<T>; 2]; 2]> {
    let one =
        |x: usize, y: usize| sequential_setting(state, &settings.alice[x], &settings.bob[y], rule);
    Ok([[one(0, 0)?, one(0, 1)?], [one(1, 0)?, one(1, 1)?]])
}

/// Box produced by the sequential procedure for arbitrary bases.
pub fn sequential_box<T: Scalar>(
    state: &TwoQubitState<T>,
    settings: &Settings<T>,
    rule: &ProbabilityRule<T>,
) -> Result<BehaviorBox<T>> {
    let table = sequential_settings(state, settings, rule)?;
    BehaviorBox::from_fn(|a, b, x, y| table[x][y].joint(a, b))
}

/// `P(a,b|x,y)` for `state` measured with the axes in `cfg`, Alice under the
/// Born rule and Bob under `rule`.
pub fn joint_distribution<T: Scalar>(
    state: &TwoQubitState<T>,
    cfg: &MeasurementConfig<T>,
    rule: &ProbabilityRule<T>,
) -> Result<BehaviorBox<T>> {
    sequential_box(state, &Settings::from_config(cfg), rule)
}

/// Closed-form box for `|α| = |β| = 1/√2`.
///
/// Every setting is anticorrelated in structure:
/// `P(0,0|x,y) = P(1,1|x,y)` and `P(0,1|x,y) = P(1,0|x,y)`.
pub fn bell_closed_form<T: Scalar>(
    theta: T,
    theta_tilde: T,
    rule: &ProbabilityRule<T>,
) -> BehaviorBox<T> {
    let g = |u: T, v: T| {
        eval_f0(rule, Complex::new(u, T::zero()), Complex::new(v, T::zero()))
            .expect("sin and cos never vanish together")
    };
    let (s, c) = (theta / T::two()).sin_cos();
    let (st, ct) = (theta_tilde / T::two()).sin_cos();
    let (ss, cs) = ((theta + theta_tilde) / T::two()).sin_cos();
    let h = T::half();
    // Equal-output weight for each setting, indexed [x][y].
    let same = [[T::one(), g(st, ct)], [g(c, s), g(ss, cs)]];
    let diff = [[T::zero(), g(ct, st)], [g(s, c), g(cs, ss)]];
    BehaviorBox::from_fn(|a, b, x, y| {
        if a == b {
            h * same[x][y]
        } else {
            h * diff[x][y]
        }
    })
    .expect("closed form is normalised")
}

/// The Popescu–Rohrlich box: `P(a,b|x,y) = ½` iff `a ⊕ b = x·y`.
pub fn pr_box<T: Scalar>() -> BehaviorBox<T> {
    BehaviorBox::from_fn(|a, b, x, y| if a ^ b == x & y { T::half() } else { T::zero() })
        .expect("PR box is normalised")
}

/// Box generated by the standard CHSH observables on the Bell state
/// (see [`Settings::chsh_observables`]).
pub fn chsh_observables_box<T: Scalar>(rule: &ProbabilityRule<T>) -> BehaviorBox<T> {
    sequential_box(&TwoQubitState::bell(), &Settings::chsh_observables(), rule)
        .expect("Bell state never yields degenerate amplitudes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn aligned_product_state() {
        let state = TwoQubitState::from_weight(1.0).unwrap();
        for rule in [
            ProbabilityRule::Power(0.0),
            ProbabilityRule::born(),
            ProbabilityRule::Infinite,
        ] {
            let cfg = MeasurementConfig::new(1.1, 4.2).unwrap();
            let bx = joint_distribution(&state, &cfg, &rule).unwrap();
            assert_eq!(bx.prob(0, 0, 0, 0), 1.0);
            assert_eq!(bx.prob(1, 1, 0, 0), 0.0);
        }
    }

    #[test]
    fn pr_box_entries() {
        let pr = pr_box::<f64>();
        assert_eq!(pr.prob(0, 0, 1, 1), 0.0);
        assert_eq!(pr.prob(1, 0, 1, 1), 0.5);
        assert_eq!(pr.prob(1, 1, 0, 1), 0.5);
        assert_eq!(pr.prob(0, 1, 0, 0), 0.0);
    }

    #[test]
    fn closed_form_born_special_case() {
        for theta in [0.0_f64, 0.3, 1.9, 4.0, 6.1] {
            let bx = bell_closed_form(theta, 2.2, &ProbabilityRule::born());
            let want = 0.5 * (theta / 2.0).cos().powi(2);
            assert!((bx.prob(0, 0, 1, 0) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_infinite_rule_is_pr_box() {
        let bx = bell_closed_form(PI / 4.0, 11.0 * PI / 8.0, &ProbabilityRule::Infinite);
        assert_eq!(bx, pr_box());
    }

    #[test]
    fn sequential_bell_matches_closed_form() {
        let cfg = MeasurementConfig::new(PI / 4.0, 11.0 * PI / 8.0).unwrap();
        for n in [1.0, 2.0, 4.0, 10.0] {
            let rule = ProbabilityRule::Power(n);
            let seq = joint_distribution(&TwoQubitState::bell(), &cfg, &rule).unwrap();
            let cf = bell_closed_form(PI / 4.0, 11.0 * PI / 8.0, &rule);
            assert!(seq.max_abs_diff(&cf) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn chsh_bases_are_eigenvectors() {
        let set = Settings::<f64>::chsh_observables();
        let h = FRAC_1_SQRT_2;
        // (matrix, basis) with eigenvalue +1 on outcome 0 and -1 on outcome 1.
        let ops = [
            ([[0.0, 1.0], [1.0, 0.0]], set.alice[0]),
            ([[1.0, 0.0], [0.0, -1.0]], set.alice[1]),
            ([[h, -h], [-h, -h]], set.bob[0]),
            ([[-h, -h], [-h, h]], set.bob[1]),
        ];
        for (m, basis) in ops {
            for (k, v) in basis.iter().enumerate() {
                let ev = if k == 0 { 1.0 } else { -1.0 };
                for i in 0..2 {
                    let mv = m[i][0] * v[0] + m[i][1] * v[1];
                    assert!((mv - ev * v[i]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn zero_probability_branch_is_skipped() {
        let state = TwoQubitState::from_weight(0.0).unwrap();
        let s = Settings::from_config(&MeasurementConfig::new(0.0, 0.0).unwrap());
        let row =
            sequential_setting(&state, &s.alice[0], &s.bob[1], &ProbabilityRule::Infinite).unwrap();
        assert_eq!(row.alice, [0.0, 1.0]);
        assert_eq!(row.bob_given_alice[0], [0.5, 0.5]);
    }
}
