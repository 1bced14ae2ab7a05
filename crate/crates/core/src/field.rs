//! Coefficient fields `a(t, u)` and `b(t, u)` and application of operator
//! words built from `L0 = d/dt + a . grad_u` and `L1 = b . grad_u`.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace, Scalar};
use crate::word::{Letter, Target};

/// The smooth part of `du/dt = a(t, u) + b(t, u) v(t)`.
///
/// Both coefficient functions are written once against [`Scalar`], so the
/// same program evaluates on plain complex numbers and on jets.
pub trait CoefficientField {
    /// Dimension `m` of the state.
    fn dim(&self) -> usize;

    /// The drift `a(t, u)`.
    fn drift<S: Scalar>(&self, t: &S, u: &[S]) -> Vec<S>;

    /// The coefficient `b(t, u)` of the oscillating factor.
    fn forcing<S: Scalar>(&self, t: &S, u: &[S]) -> Vec<S>;

    /// Highest jet order the field can be evaluated at; `None` means
    /// unlimited.
    fn max_jet_order(&self) -> Option<usize> {
        None
    }

    /// Whether the field maps real states to real values.
    fn is_real(&self) -> bool {
        false
    }

    fn eval<S: Scalar>(&self, target: Target, t: &S, u: &[S]) -> Vec<S> {
        match target {
            Target::Drift => self.drift(t, u),
            Target::Forcing => self.forcing(t, u),
        }
    }

    /// Jets of every component of `target` at `(t, u)` to the given order.
    fn jets(&self, target: Target, t: f64, u: &[Complex64], order: usize) -> Result<Vec<Jet>> {
        check_order(self, order)?;
        let mut base = Vec::with_capacity(u.len() + 1);
        base.push(Complex64::new(t, 0.0));
        base.extend_from_slice(u);
        let space = JetSpace::new(base, order);
        let (tj, uj) = variables(&space, u.len(), order);
        Ok(self.eval(target, &tj, &uj))
    }
}

fn check_order<F: CoefficientField + ?Sized>(field: &F, order: usize) -> Result<()> {
    match field.max_jet_order() {
        Some(available) if available < order => Err(Error::JetOrderUnavailable {
            requested: order,
            available,
        }),
        _ => Ok(()),
    }
}

fn variables(space: &Arc<JetSpace>, m: usize, order: usize) -> (Jet, Vec<Jet>) {
    let t = space.variable(0, order);
    let u = (0..m).map(|j| space.variable(j + 1, order)).collect();
    (t, u)
}

/// Applies `L^{w_1} ... L^{w_n}` to `target` and evaluates at `(t, u)`.
///
/// Operators act right to left: the last letter of `word` is applied first.
pub fn apply_operator_word<F: CoefficientField>(
    field: &F,
    target: Target,
    word: &[Letter],
    t: f64,
    u: &[Complex64],
) -> Result<Vec<Complex64>> {
    OperatorEvaluator::new(field, t, u, word.len())?.apply(target, word)
}

/// Evaluates many operator words at one point, sharing the jets of `a` and
/// `b` and every common operator suffix.
pub struct OperatorEvaluator {
    order: usize,
    drift: Vec<Jet>,
    forcing: Vec<Jet>,
    cache: HashMap<(Target, Vec<Letter>), Vec<Jet>>,
}

impl OperatorEvaluator {
    pub fn new<F: CoefficientField>(field: &F, t: f64, u: &[Complex64], order: usize) -> Result<Self> {
        if u.len() != field.dim() {
            return Err(Error::InvalidArgument(format!(
                "state has {} components, field expects {}",
                u.len(),
                field.dim()
            )));
        }
        check_order(field, order)?;
        let mut base = Vec::with_capacity(u.len() + 1);
        base.push(Complex64::new(t, 0.0));
        base.extend_from_slice(u);
        let space = JetSpace::new(base, order);
        let (tj, uj) = variables(&space, u.len(), order);
        let drift = field.drift(&tj, &uj);
        let forcing = field.forcing(&tj, &uj);
        Ok(OperatorEvaluator {
            order,
            drift,
            forcing,
            cache: HashMap::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn apply(&mut self, target: Target, word: &[Letter]) -> Result<Vec<Complex64>> {
        if word.len() > self.order {
            return Err(Error::JetOrderUnavailable {
                requested: word.len(),
                available: self.order,
            });
        }
        Ok(self.jets_for(target, word).iter().map(Jet::value).collect())
    }

    fn jets_for(&mut self, target: Target, word: &[Letter]) -> Vec<Jet> {
        if word.is_empty() {
            return match target {
                Target::Drift => self.drift.clone(),
                Target::Forcing => self.forcing.clone(),
            };
        }
        let key = (target, word.to_vec());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let inner = self.jets_for(target, &word[1..]);
        let result: Vec<Jet> = inner.iter().map(|g| self.apply_letter(word[0], g)).collect();
        self.cache.insert(key, result.clone());
        result
    }

    fn apply_letter(&self, letter: Letter, g: &Jet) -> Jet {
        let order = g.order() - 1;
        let coefficients = match letter {
            Letter::Time => &self.drift,
            Letter::Osc => &self.forcing,
        };
        let mut acc = match letter {
            Letter::Time => g.derivative(0),
            Letter::Osc => g.lift(Complex64::new(0.0, 0.0)).truncate(order),
        };
        for (j, c) in coefficients.iter().enumerate() {
            acc = acc + c.truncate(order) * g.derivative(j + 1);
        }
        acc
    }
}

/// How the scalar rate `alpha(t)` of the exponential-macroscale family
/// depends on time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rate {
    Constant(Complex64),
    /// `alpha(t) = t`
    Time,
}

impl Rate {
    pub fn at<S: Scalar>(&self, t: &S) -> S {
        match *self {
            Rate::Constant(c) => t.lift(c),
            Rate::Time => t.clone(),
        }
    }

    /// `int_{t0}^{t} alpha(s) ds`
    pub fn integral(&self, t0: f64, t: f64) -> Complex64 {
        match *self {
            Rate::Constant(c) => c * (t - t0),
            Rate::Time => Complex64::new(0.5 * (t * t - t0 * t0), 0.0),
        }
    }
}

/// The scalar family `du/dt = alpha(t) u + mu u^(1 - gamma) v(t)` with
/// integer `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpMacroField {
    pub rate: Rate,
    pub mu: Complex64,
    pub gamma: i32,
}

impl ExpMacroField {
    /// `a = u t`, `b = mu`.
    pub fn linear(mu: Complex64) -> Self {
        ExpMacroField {
            rate: Rate::Time,
            mu,
            gamma: 1,
        }
    }

    /// `a = alpha u`, `b = mu u^2`.
    pub fn nonlinear(alpha: Complex64, mu: Complex64) -> Self {
        ExpMacroField {
            rate: Rate::Constant(alpha),
            mu,
            gamma: -1,
        }
    }

    /// `a = 0`, `b = u^(1 - gamma)`.
    pub fn power(gamma: i32) -> Self {
        ExpMacroField {
            rate: Rate::Constant(Complex64::new(0.0, 0.0)),
            mu: Complex64::new(1.0, 0.0),
            gamma,
        }
    }

    /// Same coefficients as [`ExpMacroField::nonlinear`]; the amplitude
    /// scaling lives in the oscillator.
    pub fn freq_dependent(alpha: Complex64, mu: Complex64) -> Self {
        Self::nonlinear(alpha, mu)
    }
}

impl CoefficientField for ExpMacroField {
    fn dim(&self) -> usize {
        1
    }

    fn drift<S: Scalar>(&self, t: &S, u: &[S]) -> Vec<S> {
        vec![self.rate.at(t) * u[0].clone()]
    }

    fn forcing<S: Scalar>(&self, _t: &S, u: &[S]) -> Vec<S> {
        vec![u[0].powi(1 - self.gamma).scale(self.mu)]
    }

    fn is_real(&self) -> bool {
        let rate_real = match self.rate {
            Rate::Constant(c) => c.im == 0.0,
            Rate::Time => true,
        };
        rate_real && self.mu.im == 0.0
    }
}

/// A field with the oscillator mean folded into the drift:
/// `a~ = a + <v> b`, `b~ = b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanAbsorbed<F> {
    pub inner: F,
    pub mean: Complex64,
}

/// Returns `field` with `a` replaced by `a + mean * b`.
pub fn absorb_mean<F: CoefficientField>(field: F, mean: Complex64) -> MeanAbsorbed<F> {
    MeanAbsorbed { inner: field, mean }
}

impl<F: CoefficientField> CoefficientField for MeanAbsorbed<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn drift<S: Scalar>(&self, t: &S, u: &[S]) -> Vec<S> {
        let a = self.inner.drift(t, u);
        if self.mean == Complex64::new(0.0, 0.0) {
            return a;
        }
        let b = self.inner.forcing(t, u);
        a.into_iter().zip(b).map(|(ai, bi)| ai + bi.scale(self.mean)).collect()
    }

    fn forcing<S: Scalar>(&self, t: &S, u: &[S]) -> Vec<S> {
        self.inner.forcing(t, u)
    }

    fn max_jet_order(&self) -> Option<usize> {
        self.inner.max_jet_order()
    }

    fn is_real(&self) -> bool {
        self.inner.is_real() && self.mean.im == 0.0
    }
}
