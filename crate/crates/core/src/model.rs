//! Domain types shared by the rest of the crate.
//!
//! Measurement conventions (fixed, not configurable):
//!
//! * Alice `x = 0` measures along `+z`; outcome 0 is `|↑⟩`.
//! * Alice `x = 1` measures along `θ`, tilted from `+z` toward `+x`.
//! * Bob `y = 0` measures along `−z`; outcome 0 is `|↓⟩`.
//! * Bob `y = 1` measures along `θ̃`, same parametrisation as Alice's `θ`.
//!
//! The tilted eigenstates follow [`basis_change`] literally, including its
//! sign pattern.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Complex probability amplitude.
pub type ComplexAmplitude<T> = Complex<T>;

/// 2×2 real coefficient matrix.
pub type Matrix2<T> = [[T; 2]; 2];

/// Coefficients expressing `{|↑⟩, |↓⟩}` in the tilted basis `{|θ⟩, |θ⊥⟩}`:
///
/// ```text
/// |↑⟩ =  cos(θ/2)|θ⟩ + sin(θ/2)|θ⊥⟩     row 0
/// |↓⟩ = −sin(θ/2)|θ⟩ + cos(θ/2)|θ⊥⟩     row 1
/// ```
///
/// The matrix is orthogonal, so its columns give `|θ⟩` and `|θ⊥⟩` in the
/// `{|↑⟩, |↓⟩}` basis.
pub fn basis_change<T: Scalar>(theta: T) -> Matrix2<T> {
    let (s, c) = (theta / T::two()).sin_cos();
    [[c, s], [-s, c]]
}

/// Eigenstates of the tilted measurement, in `{|↑⟩, |↓⟩}` coordinates,
/// ordered by outcome (`[|θ⟩, |θ⊥⟩]`).
pub(crate) fn tilted_eigenstates<T: Scalar>(theta: T) -> [[T; 2]; 2] {
    let m = basis_change(theta);
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}

/// The shared state `α|↑⟩_A|↓⟩_B + β|↓⟩_A|↑⟩_B`, normalised on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState<T> {
    alpha: ComplexAmplitude<T>,
    beta: ComplexAmplitude<T>,
}

impl<T: Scalar> TwoQubitState<T> {
    pub fn new(alpha: ComplexAmplitude<T>, beta: ComplexAmplitude<T>) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::NonFinite("alpha"));
        }
        if !(beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::NonFinite("beta"));
        }
        let norm = alpha.norm().hypot(beta.norm());
        if norm == T::zero() {
            return Err(Error::DegenerateAmplitudes);
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    /// Real, non-negative amplitudes `α = √w`, `β = √(1 − w)`.
    pub fn from_weight(alpha_sq: T) -> Result<Self> {
        if !alpha_sq.is_finite() {
            return Err(Error::NonFinite("alpha weight"));
        }
        if alpha_sq < T::zero() || alpha_sq > T::one() {
            return Err(Error::OutOfRange(format!(
                "|alpha|^2 = {alpha_sq} not in [0, 1]"
            )));
        }
        Self::new(
            Complex::new(alpha_sq.sqrt(), T::zero()),
            Complex::new((T::one() - alpha_sq).sqrt(), T::zero()),
        )
    }

    /// `|α| = |β| = 1/√2`.
    pub fn bell() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self {
            alpha: Complex::new(h, T::zero()),
            beta: Complex::new(h, T::zero()),
        }
    }

    pub fn alpha(&self) -> ComplexAmplitude<T> {
        self.alpha
    }

    pub fn beta(&self) -> ComplexAmplitude<T> {
        self.beta
    }

    /// Amplitude matrix `ψ[i][j]`, `i` Alice's z index, `j` Bob's z index
    /// (index 0 is `|↑⟩`, index 1 is `|↓⟩`).
    pub(crate) fn amplitudes(&self) -> [[ComplexAmplitude<T>; 2]; 2] {
        let zero = Complex::new(T::zero(), T::zero());
        [[zero, self.alpha], [self.beta, zero]]
    }
}

/// Alice's and Bob's tilted axes. Angles are stored reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementConfig<T> {
    theta: T,
    theta_tilde: T,
}

impl<T: Scalar> MeasurementConfig<T> {
    pub fn new(theta: T, theta_tilde: T) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite("theta"));
        }
        if !theta_tilde.is_finite() {
            return Err(Error::NonFinite("theta_tilde"));
        }
        Ok(Self {
            theta: reduce_angle(theta),
            theta_tilde: reduce_angle(theta_tilde),
        })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn theta_tilde(&self) -> T {
        self.theta_tilde
    }
}

fn reduce_angle<T: Scalar>(angle: T) -> T {
    let tau = T::TAU();
    let r = angle % tau;
    let r = if r < T::zero() { r + tau } else { r };
    // r + tau can round up to tau itself for tiny negative inputs.
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

/// Power-law outcome rule `F₀(a0, a1) = |a0|ⁿ / (|a0|ⁿ + |a1|ⁿ)`.
///
/// `n = 2` is the Born rule. The `n → ∞` limit is its own variant and is
/// evaluated by comparing magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbabilityRule<T> {
    Power(T),
    Infinite,
}

impl<T: Scalar> ProbabilityRule<T> {
    /// Accepts any `n >= 0`; `+∞` maps to [`ProbabilityRule::Infinite`].
    pub fn power(n: T) -> Result<Self> {
        if n.is_nan() || n < T::zero() {
            return Err(Error::InvalidPower(n.to_f64_lossy()));
        }
        if n.is_infinite() {
            return Ok(Self::Infinite);
        }
        Ok(Self::Power(n))
    }

    pub fn born() -> Self {
        Self::Power(T::two())
    }

    /// Finite exponent, or `None` for the infinite rule.
    pub fn exponent(&self) -> Option<T> {
        match *self {
            Self::Power(n) => Some(n),
            Self::Infinite => None,
        }
    }

    /// Exponent as a float, `+∞` for the infinite rule.
    pub fn exponent_or_inf(&self) -> T {
        self.exponent().unwrap_or_else(T::infinity)
    }
}

impl<T: Scalar> fmt::Display for ProbabilityRule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power(n) => write!(f, "{n}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

/// Conditional probability table `P(a,b|x,y)` for binary inputs and outputs.
///
/// Entries are stored in `(x, y, a, b)` row-major order, the same order used
/// by the JSON and CSV encodings in [`crate::io`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviorBox<T> {
    p: [T; 16],
}

#[inline]
pub(crate) fn flat_index(a: usize, b: usize, x: usize, y: usize) -> usize {
    assert!(
        a < 2 && b < 2 && x < 2 && y < 2,
        "inputs and outputs are bits"
    );
    ((x * 2 + y) * 2 + a) * 2 + b
}

impl<T: Scalar> BehaviorBox<T> {
    /// Builds a box from entries in `(x, y, a, b)` order. Every entry must be
    /// in `[0, 1]` and each setting must sum to one within
    /// [`Scalar::validation_tol`].
    pub fn new(p: [T; 16]) -> Result<Self> {
        let tol = T::validation_tol();
        for x in 0..2 {
            for y in 0..2 {
                let mut sum = T::zero();
                for a in 0..2 {
                    for b in 0..2 {
                        let v = p[flat_index(a, b, x, y)];
                        if !v.is_finite() || v < T::zero() || v > T::one() + tol {
                            return Err(Error::InvalidProbability {
                                x,
                                y,
                                a,
                                b,
                                value: v.to_f64_lossy(),
                            });
                        }
                        sum = sum + v;
                    }
                }
                if (sum - T::one()).abs() > tol {
                    return Err(Error::NotNormalized {
                        x,
                        y,
                        sum: sum.to_f64_lossy(),
                    });
                }
            }
        }
        Ok(Self { p })
    }

    /// Builds a box from `f(a, b, x, y)`.
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Result<Self> {
        let mut p = [T::zero(); 16];
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        p[flat_index(a, b, x, y)] = f(a, b, x, y);
                    }
                }
            }
        }
        Self::new(p)
    }

    /// `P(a, b | x, y)`.
    #[inline]
    pub fn prob(&self, a: usize, b: usize, x: usize, y: usize) -> T {
        self.p[flat_index(a, b, x, y)]
    }

    /// Entries in `(x, y, a, b)` order.
    pub fn as_array(&self) -> &[T; 16] {
        &self.p
    }

    /// Alice's marginal `Σ_b P(a,b|x,y)`.
    pub fn alice_marginal(&self, a: usize, x: usize, y: usize) -> T {
        self.prob(a, 0, x, y) + self.prob(a, 1, x, y)
    }

    /// Bob's marginal `Σ_a P(a,b|x,y)`.
    pub fn bob_marginal(&self, b: usize, x: usize, y: usize) -> T {
        self.prob(0, b, x, y) + self.prob(1, b, x, y)
    }

    /// Largest absolute entry-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.p
            .iter()
            .zip(other.p.iter())
            .map(|(&l, &r)| (l - r).abs())
            .fold(T::zero(), T::max)
    }
}
