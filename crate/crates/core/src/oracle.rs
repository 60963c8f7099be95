//! Independent cross-checks for the box generator.
//!
//! [`born_oracle`] computes standard quantum probabilities in one global
//! step, with no collapse. [`mc_sampler`] simulates the sequential
//! procedure shot by shot.
//!
//! Sampling uses ChaCha20 (`rand_chacha::ChaCha20Rng`). Shots are split into
//! shards of [`SHARD_SHOTS`]; shard `k` draws from the generator seeded with
//! `seed_from_u64(seed)` on stream `k`. Counts are merged by summation, so a
//! given `(seed, shots)` yields the same table regardless of thread count or
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::boxgen::{sequential_settings, Basis, Settings};
use crate::error::{Error, Result};
use crate::model::{
    basis_change, flat_index, BehaviorBox, MeasurementConfig, ProbabilityRule, TwoQubitState,
};
use crate::scalar::Scalar;

/// Shots per independently seeded shard.
pub const SHARD_SHOTS: u64 = 1 << 16;

/// `P(a,b|x,y) = |⟨φ_a^x ⊗ χ_b^y|ψ⟩|²` for the axes in `cfg`.
pub fn born_oracle<T: Scalar>(
    state: &TwoQubitState<T>,
    cfg: &MeasurementConfig<T>,
) -> Result<BehaviorBox<T>> {
    let (o, l) = (T::zero(), T::one());
    let column_basis = |theta: T| -> Basis<T> {
        let m = basis_change(theta);
        [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
    };
    let alice = [[[l, o], [o, l]], column_basis(cfg.theta())];
    let bob = [[[o, l], [l, o]], column_basis(cfg.theta_tilde())];
    born_oracle_for(state, &Settings { alice, bob })
}

/// Same as [`born_oracle`] for arbitrary real bases.
pub fn born_oracle_for<T: Scalar>(
    state: &TwoQubitState<T>,
    settings: &Settings<T>,
) -> Result<BehaviorBox<T>> {
    // |ψ⟩ on the product basis |i⟩_A|j⟩_B, flattened as 2i + j.
    let zero = num_complex::Complex::new(T::zero(), T::zero());
    let psi = [zero, state.alpha(), state.beta(), zero];
    BehaviorBox::from_fn(|a, b, x, y| {
        let phi = settings.alice[x][a];
        let chi = settings.bob[y][b];
        let mut amp = zero;
        for i in 0..2 {
            for j in 0..2 {
                amp = amp + psi[2 * i + j] * (phi[i] * chi[j]);
            }
        }
        amp.norm_sqr()
    })
}

/// Empirical box from [`mc_sampler`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledBox<T> {
    pub frequencies: BehaviorBox<T>,
    /// `√(p̂(1 − p̂)/shots)` per cell, `(x, y, a, b)` order.
    pub std_errors: [T; 16],
    pub counts: [u64; 16],
    pub shots: u64,
}

impl<T: Scalar> SampledBox<T> {
    pub fn std_error(&self, a: usize, b: usize, x: usize, y: usize) -> T {
        self.std_errors[flat_index(a, b, x, y)]
    }

    /// Largest `|p̂ − p| / σ` against `reference`, using the standard error
    /// of the reference probability `√(p(1 − p)/shots)`. Cells with zero
    /// reference variance count as infinitely far unless they match exactly.
    pub fn max_z_score(&self, reference: &BehaviorBox<T>) -> T {
        let shots = T::from_u64(self.shots).expect("shot count fits scalar");
        let mut worst = T::zero();
        for (&p_hat, &p) in self.frequencies.as_array().iter().zip(reference.as_array()) {
            let dev = (p_hat - p).abs();
            let sigma = (p * (T::one() - p) / shots).sqrt();
            let z = if dev == T::zero() {
                T::zero()
            } else if sigma == T::zero() {
                T::infinity()
            } else {
                dev / sigma
            };
            worst = worst.max(z);
        }
        worst
    }
}

/// Samples `shots` runs of the sequential procedure for every input pair:
/// Alice's outcome from her Born probabilities, then Bob's outcome from the
/// modified rule on his collapsed state. Deterministic in `seed`.
pub fn mc_sampler<T: Scalar>(
    state: &TwoQubitState<T>,
    cfg: &MeasurementConfig<T>,
    rule: &ProbabilityRule<T>,
    shots: u64,
    seed: u64,
) -> Result<SampledBox<T>> {
    if shots == 0 {
        return Err(Error::OutOfRange("shots must be at least 1".into()));
    }
    let table = sequential_settings(state, &Settings::from_config(cfg), rule)?;
    // Thresholds in f64: P(a = 0) and P(b = 0 | a) per setting.
    let mut alice0 = [[0.0_f64; 2]; 2];
    let mut bob0 = [[[0.0_f64; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            alice0[x][y] = table[x][y].alice[0].to_f64_lossy();
            for a in 0..2 {
                bob0[x][y][a] = table[x][y].bob_given_alice[a][0].to_f64_lossy();
            }
        }
    }

    let shards = shots.div_ceil(SHARD_SHOTS);
    let counts = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let n = SHARD_SHOTS.min(shots - shard * SHARD_SHOTS);
            let mut counts = [0_u64; 16];
            for _ in 0..n {
                for x in 0..2 {
                    for y in 0..2 {
                        let a = usize::from(rng.gen::<f64>() >= alice0[x][y]);
                        let b = usize::from(rng.gen::<f64>() >= bob0[x][y][a]);
                        counts[flat_index(a, b, x, y)] += 1;
                    }
                }
            }
            counts
        })
        .reduce(
            || [0_u64; 16],
            |mut l, r| {
                for (li, ri) in l.iter_mut().zip(r) {
                    *li += ri;
                }
                l
            },
        );

    let total = T::from_u64(shots).expect("shot count fits scalar");
    let mut freq = [T::zero(); 16];
    let mut std_errors = [T::zero(); 16];
    for i in 0..16 {
        let p = T::from_u64(counts[i]).expect("count fits scalar") / total;
        freq[i] = p;
        std_errors[i] = (p * (T::one() - p) / total).sqrt();
    }
    Ok(SampledBox {
        frequencies: BehaviorBox::new(freq)?,
        std_errors,
        counts,
        shots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::chsh_value;
    use crate::boxgen::joint_distribution;
    use num_complex::Complex;
    use std::f64::consts::{PI, SQRT_2};

    /// Bob measures first under the Born rule, then Alice on her collapsed
    /// qubit. Standard quantum mechanics must not care about the order.
    fn reversed_order_born(
        state: &TwoQubitState<f64>,
        settings: &Settings<f64>,
    ) -> BehaviorBox<f64> {
        let psi = [
            [Complex::new(0.0, 0.0), state.alpha()],
            [state.beta(), Complex::new(0.0, 0.0)],
        ];
        BehaviorBox::from_fn(|a, b, x, y| {
            let chi = settings.bob[y][b];
            let alice_state = [
                psi[0][0] * chi[0] + psi[0][1] * chi[1],
                psi[1][0] * chi[0] + psi[1][1] * chi[1],
            ];
            let p_bob = alice_state[0].norm_sqr() + alice_state[1].norm_sqr();
            if p_bob == 0.0 {
                return 0.0;
            }
            let phi = settings.alice[x][a];
            let amp = alice_state[0] * phi[0] + alice_state[1] * phi[1];
            p_bob * (amp.norm_sqr() / p_bob)
        })
        .unwrap()
    }

    #[test]
    fn born_oracle_matches_sequential_born() {
        let cfg = MeasurementConfig::new(PI / 2.0, 3.0 * PI / 2.0).unwrap();
        let bell = TwoQubitState::bell();
        let o = born_oracle(&bell, &cfg).unwrap();
        let s = joint_distribution(&bell, &cfg, &ProbabilityRule::born()).unwrap();
        assert!(o.max_abs_diff(&s) < 1e-12);
    }

    #[test]
    fn product_state_factorises() {
        let state = TwoQubitState::from_weight(1.0_f64).unwrap();
        let cfg = MeasurementConfig::new(0.9, 2.3).unwrap();
        let bx = born_oracle(&state, &cfg).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let pa = bx.alice_marginal(a, x, y);
                        let pb = bx.bob_marginal(b, x, y);
                        assert!((bx.prob(a, b, x, y) - pa * pb).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_reaches_tsirelson_with_chsh_bases() {
        let bx =
            born_oracle_for(&TwoQubitState::<f64>::bell(), &Settings::chsh_observables()).unwrap();
        assert!((chsh_value(&bx).value - 2.0 * SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn oracle_is_order_independent() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let state = TwoQubitState::new(
                Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
            .unwrap();
            let cfg =
                MeasurementConfig::new(rng.gen_range(0.0..7.0), rng.gen_range(0.0..7.0)).unwrap();
            let settings = Settings::from_config(&cfg);
            let o = born_oracle(&state, &cfg).unwrap();
            assert!(o.max_abs_diff(&reversed_order_born(&state, &settings)) < 1e-12);
        }
    }

    #[test]
    fn single_shot_is_a_valid_table() {
        let cfg = MeasurementConfig::new(0.3, 2.0).unwrap();
        let s = mc_sampler(
            &TwoQubitState::bell(),
            &cfg,
            &ProbabilityRule::Power(3.0),
            1,
            5,
        )
        .unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let cells: Vec<f64> = (0..4)
                    .map(|k| s.frequencies.prob(k / 2, k % 2, x, y))
                    .collect();
                assert_eq!(cells.iter().filter(|&&v| v == 1.0).count(), 1);
                assert_eq!(cells.iter().filter(|&&v| v == 0.0).count(), 3);
            }
        }
    }

    #[test]
    fn same_seed_same_table() {
        let cfg = MeasurementConfig::new(PI / 4.0, 11.0 * PI / 8.0).unwrap();
        let rule = ProbabilityRule::Power(4.0);
        let state = TwoQubitState::from_weight(0.7).unwrap();
        let a = mc_sampler(&state, &cfg, &rule, 200_000, 42).unwrap();
        let b = mc_sampler(&state, &cfg, &rule, 200_000, 42).unwrap();
        let c = mc_sampler(&state, &cfg, &rule, 200_000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn zero_shots_rejected() {
        let cfg = MeasurementConfig::new(0.0, 0.0).unwrap();
        assert!(mc_sampler(&TwoQubitState::bell(), &cfg, &ProbabilityRule::born(), 0, 1).is_err());
    }

    #[test]
    fn impossible_cells_are_never_sampled() {
        let cfg = MeasurementConfig::new(PI / 4.0, 11.0 * PI / 8.0).unwrap();
        let s = mc_sampler(
            &TwoQubitState::bell(),
            &cfg,
            &ProbabilityRule::Infinite,
            10_000,
            9,
        )
        .unwrap();
        let pr = crate::boxgen::pr_box::<f64>();
        for (i, &p) in pr.as_array().iter().enumerate() {
            if p == 0.0 {
                assert_eq!(s.counts[i], 0);
            }
        }
        assert!(s.max_z_score(&pr) < 5.0);
    }
}
