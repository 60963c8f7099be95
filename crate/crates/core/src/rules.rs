//! The modified outcome rule applied to Bob's measurement.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{ComplexAmplitude, ProbabilityRule};
use crate::scalar::Scalar;

/// Probability of outcome 0 given amplitudes `a0` and `a1` on the two
/// eigenstates, `F₀(a0, a1) = |a0|ⁿ / (|a0|ⁿ + |a1|ⁿ)`.
///
/// The larger magnitude is factored out before exponentiating, so large `n`
/// cannot overflow. The infinite rule returns 1, 0 or ½ by comparing `|a0|`
/// with `|a1|` exactly (no tie epsilon).
pub fn eval_f0<T: Scalar>(
    rule: &ProbabilityRule<T>,
    a0: ComplexAmplitude<T>,
    a1: ComplexAmplitude<T>,
) -> Result<T> {
    let (m0, m1) = (a0.norm(), a1.norm());
    if m0 == T::zero() && m1 == T::zero() {
        return Err(Error::DegenerateAmplitudes);
    }
    if !(m0.is_finite() && m1.is_finite()) {
        return Err(Error::NonFinite("amplitude"));
    }
    // A vanishing amplitude means the state is an eigenstate: the outcome is
    // certain for every n (the n → 0⁺ limit, not 0⁰ = 1).
    if m1 == T::zero() {
        return Ok(T::one());
    }
    if m0 == T::zero() {
        return Ok(T::zero());
    }
    match *rule {
        ProbabilityRule::Infinite => Ok(if m0 > m1 {
            T::one()
        } else if m0 < m1 {
            T::zero()
        } else {
            T::half()
        }),
        ProbabilityRule::Power(n) if n == T::zero() => Ok(T::half()),
        ProbabilityRule::Power(n) => {
            if m0 >= m1 {
                let r = (m1 / m0).powf(n);
                Ok(T::one() / (T::one() + r))
            } else {
                let r = (m0 / m1).powf(n);
                Ok(r / (T::one() + r))
            }
        }
    }
}

/// Anything that assigns outcome probabilities to a two-outcome measurement.
///
/// Implemented by [`ProbabilityRule`] and by plain closures
/// `Fn(a0, a1) -> T`, which lets tests feed hand-written rules into
/// [`check_axioms`].
pub trait OutcomeRule<T: Scalar> {
    fn f0(&self, a0: ComplexAmplitude<T>, a1: ComplexAmplitude<T>) -> Result<T>;

    /// Outcome-1 probability. Defaults to `F₀(a1, a0)`.
    fn f1(&self, a0: ComplexAmplitude<T>, a1: ComplexAmplitude<T>) -> Result<T> {
        self.f0(a1, a0)
    }
}

impl<T: Scalar> OutcomeRule<T> for ProbabilityRule<T> {
    fn f0(&self, a0: ComplexAmplitude<T>, a1: ComplexAmplitude<T>) -> Result<T> {
        eval_f0(self, a0, a1)
    }
}

impl<T, F> OutcomeRule<T> for F
where
    T: Scalar,
    F: Fn(ComplexAmplitude<T>, ComplexAmplitude<T>) -> T,
{
    fn f0(&self, a0: ComplexAmplitude<T>, a1: ComplexAmplitude<T>) -> Result<T> {
        Ok(self(a0, a1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomCheck<T> {
    pub passed: bool,
    pub max_residual: T,
}

/// Outcome of [`check_axioms`], one entry per axiom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomReport<T> {
    /// `F₀(p,q) + F₁(p,q) = 1`
    pub normalization: AxiomCheck<T>,
    /// `F₀(p,q) = F₁(q,p)`
    pub relabeling: AxiomCheck<T>,
    /// `F₀(p,q) = F₀(|p|,|q|)`
    pub phase: AxiomCheck<T>,
    /// `F₀(sp,sq) = F₀(p,q)`
    pub scale: AxiomCheck<T>,
}

impl<T: Scalar> AxiomReport<T> {
    pub fn all_passed(&self) -> bool {
        self.normalization.passed
            && self.relabeling.passed
            && self.phase.passed
            && self.scale.passed
    }
}

/// Evaluates the four axioms a two-outcome rule must satisfy over `samples`
/// and reports the worst residual of each.
pub fn check_axioms<T: Scalar, R: OutcomeRule<T> + ?Sized>(
    rule: &R,
    samples: &[(ComplexAmplitude<T>, ComplexAmplitude<T>)],
    tol: T,
) -> Result<AxiomReport<T>> {
    let scales = [
        Complex::new(T::lit(0.37), T::zero()),
        Complex::new(T::lit(2.9), T::zero()),
        Complex::new(T::lit(-3.0), T::zero()),
        Complex::new(T::lit(1.02), T::lit(-1.36)),
    ];
    let mut norm = T::zero();
    let mut relabel = T::zero();
    let mut phase = T::zero();
    let mut scale = T::zero();
    for &(p, q) in samples {
        let f0 = rule.f0(p, q)?;
        let f1 = rule.f1(p, q)?;
        norm = norm.max((f0 + f1 - T::one()).abs());
        relabel = relabel.max((f0 - rule.f1(q, p)?).abs());
        let mags = (
            Complex::new(p.norm(), T::zero()),
            Complex::new(q.norm(), T::zero()),
        );
        phase = phase.max((f0 - rule.f0(mags.0, mags.1)?).abs());
        for s in scales {
            scale = scale.max((f0 - rule.f0(s * p, s * q)?).abs());
        }
    }
    let check = |r: T| AxiomCheck {
        passed: r <= tol,
        max_residual: r,
    };
    Ok(AxiomReport {
        normalization: check(norm),
        relabeling: check(relabel),
        phase: check(phase),
        scale: check(scale),
    })
}
