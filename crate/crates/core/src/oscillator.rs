//! The rapidly oscillating factor `v(t) = w^-nu sum_k c_k e^{i k (w t + phi)}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::{BasisPoly, Monomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscillatorKind {
    /// `e^{i(wt + phi)}`
    Exp,
    /// `cos(wt + phi)`
    Cos,
    /// `sin(wt + phi)`
    Sin,
    /// User-supplied finite Fourier series.
    Fourier,
}

/// A finite Fourier oscillator with zero mean.
///
/// Any mean of the supplied coefficients is removed at construction and kept
/// in [`OscillatorSpec::mean`] so that it can be folded into the drift with
/// [`crate::field::absorb_mean`].
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorSpec {
    omega: f64,
    phase: f64,
    nu: f64,
    coeffs: BTreeMap<i32, Complex64>,
    mean: Complex64,
}

pub fn make_oscillator(
    kind: OscillatorKind,
    omega: f64,
    phase: f64,
    nu: f64,
    coeffs: Option<&BTreeMap<i32, Complex64>>,
) -> Result<OscillatorSpec> {
    let half = Complex64::new(0.5, 0.0);
    let coeffs: BTreeMap<i32, Complex64> = match kind {
        OscillatorKind::Exp => [(1, Complex64::new(1.0, 0.0))].into(),
        OscillatorKind::Cos => [(-1, half), (1, half)].into(),
        OscillatorKind::Sin => [(-1, Complex64::new(0.0, 0.5)), (1, Complex64::new(0.0, -0.5))].into(),
        OscillatorKind::Fourier => coeffs
            .ok_or_else(|| Error::InvalidArgument("Fourier oscillator needs coefficients".into()))?
            .clone(),
    };
    OscillatorSpec::from_fourier(omega, phase, nu, coeffs)
}

impl OscillatorSpec {
    /// Builds an oscillator from Fourier coefficients, removing the mean.
    pub fn from_fourier(omega: f64, phase: f64, nu: f64, mut coeffs: BTreeMap<i32, Complex64>) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidFrequency(omega));
        }
        if !(nu > -1.0) || !nu.is_finite() {
            return Err(Error::Regime(nu));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidArgument(format!("phase must be finite, got {phase}")));
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        if coeffs.values().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("Fourier coefficients must be finite".into()));
        }
        if coeffs.is_empty() {
            return Err(Error::DegenerateOscillator);
        }
        let c0 = coeffs.remove(&0).unwrap_or_default();
        if coeffs.is_empty() {
            return Err(Error::DegenerateOscillator);
        }
        let mean = c0 * omega.powf(-nu);
        Ok(OscillatorSpec {
            omega,
            phase,
            nu,
            coeffs,
            mean,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Zero-mean Fourier coefficients (before the `w^-nu` scaling).
    pub fn coefficients(&self) -> &BTreeMap<i32, Complex64> {
        &self.coeffs
    }

    /// The mean that was removed at construction, `<v>`.
    pub fn mean(&self) -> Complex64 {
        self.mean
    }

    /// `w^-nu`
    pub fn amplitude(&self) -> f64 {
        self.omega.powf(-self.nu)
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        OscillatorSpec {
            phase,
            ..self.clone()
        }
    }

    /// Phase angle `w t + phi` at time `t`.
    pub fn theta(&self, t: f64) -> f64 {
        self.omega * t + self.phase
    }

    /// Whether `v` is real valued, i.e. `c_{-k} = conj(c_k)`.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|(k, c)| {
            let partner = self.coeffs.get(&-k).copied().unwrap_or_default();
            (partner - c.conj()).norm() <= 1e-15 * c.norm()
        })
    }

    /// The zero-mean `v(t)`.
    pub fn value(&self, t: f64) -> Complex64 {
        let theta = self.theta(t);
        self.coeffs
            .iter()
            .map(|(k, c)| c * Complex64::from_polar(1.0, f64::from(*k) * theta))
            .sum::<Complex64>()
            * self.amplitude()
    }

    /// `v(t)` including the removed mean.
    pub fn raw_value(&self, t: f64) -> Complex64 {
        self.value(t) + self.mean
    }

    /// `v(t_n + s)` as a basis polynomial in `s` with phase index tracking
    /// `e^{i(w t_n + phi)}`.
    pub fn as_basis(&self) -> BasisPoly {
        let amp = self.amplitude();
        BasisPoly::from_terms(
            self.omega,
            self.coeffs.iter().map(|(&k, &c)| {
                (
                    Monomial {
                        power: 0,
                        harmonic: k,
                        phase: k,
                        inv_omega: 0,
                    },
                    c * amp,
                )
            }),
        )
    }

    /// Natural antiderivative `V` of `v`; it has zero mean over a period.
    /// Evaluate at absolute time `t` as `big_v().eval(0.0, theta(t))`.
    pub fn big_v(&self) -> BasisPoly {
        self.as_basis().antiderivative()
    }

    /// `V(t)` at absolute time `t`.
    pub fn big_v_at(&self, t: f64) -> Complex64 {
        self.big_v().eval(0.0, self.theta(t))
    }

    /// `||v|| = 2 pi max_{one period} |v(t)|`, by dense sampling followed by
    /// golden-section refinement around the best sample.
    pub fn norm(&self) -> f64 {
        const SAMPLES: usize = 100_000;
        let period = 2.0 * PI / self.omega;
        let dt = period / SAMPLES as f64;
        let mag = |t: f64| self.value(t).norm();
        let (best_i, mut best) = (0..SAMPLES)
            .map(|i| (i, mag(i as f64 * dt)))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });

        let centre = best_i as f64 * dt;
        let (mut lo, mut hi) = (centre - dt, centre + dt);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (mag(x1), mag(x2));
        for _ in 0..80 {
            if f1 > f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = mag(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = mag(x2);
            }
        }
        best = best.max(f1).max(f2);
        2.0 * PI * best
    }
}

/// `V(t_n + h) - V(t_n)`.
pub fn delta_v(osc: &OscillatorSpec, t_n: f64, h: f64) -> Complex64 {
    osc.big_v_at(t_n + h) - osc.big_v_at(t_n)
}
