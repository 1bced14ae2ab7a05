//! Exact algebra of finite sums `c s^p w^-r e^{i k w s} e^{i j theta}`.
//!
//! `s` is the time elapsed since the start of a step, `w` the oscillator
//! frequency and `theta = w t_n + phi` the oscillator phase at the start of
//! the step. Every iterated integral of a finite Fourier oscillator lives in
//! this class, and the class is closed under sums, products and
//! antidifferentiation. Keeping `r` and `j` symbolic lets a scheme table be
//! reused for any `(t_n, h)` and makes phase averaging an exact filter.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

thread_local! {
    static ANTIDERIVATIVES: Cell<u64> = const { Cell::new(0) };
}

/// Number of antiderivatives taken on the current thread.
pub fn antiderivative_count() -> u64 {
    ANTIDERIVATIVES.with(Cell::get)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    /// Power of `s`.
    pub power: u32,
    /// Harmonic `k` of `e^{i k w s}`.
    pub harmonic: i32,
    /// Power `j` of `e^{i theta}`.
    pub phase: i32,
    /// Power `r` of `1/w`.
    pub inv_omega: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        power: 0,
        harmonic: 0,
        phase: 0,
        inv_omega: 0,
    };

    fn times(self, other: Monomial) -> Monomial {
        Monomial {
            power: self.power + other.power,
            harmonic: self.harmonic + other.harmonic,
            phase: self.phase + other.phase,
            inv_omega: self.inv_omega + other.inv_omega,
        }
    }
}

/// Canonical sum of [`Monomial`]s, at most one coefficient per monomial.
#[derive(Clone, PartialEq)]
pub struct BasisPoly {
    omega: f64,
    terms: BTreeMap<Monomial, Complex64>,
}

impl fmt::Debug for BasisPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasisPoly(w = {})[", self.omega)?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(
                f,
                "({c}) s^{} w^-{} e^{{i{}ws}} e^{{i{}th}}",
                m.power, m.inv_omega, m.harmonic, m.phase
            )?;
        }
        write!(f, "]")
    }
}

impl BasisPoly {
    pub fn zero(omega: f64) -> Self {
        BasisPoly {
            omega,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(omega: f64, c: Complex64) -> Self {
        let mut p = Self::zero(omega);
        p.push(Monomial::ONE, c);
        p
    }

    pub fn one(omega: f64) -> Self {
        Self::constant(omega, Complex64::new(1.0, 0.0))
    }

    pub fn from_terms(omega: f64, terms: impl IntoIterator<Item = (Monomial, Complex64)>) -> Self {
        let mut p = Self::zero(omega);
        for (m, c) in terms {
            p.push(m, c);
        }
        p
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c` to the coefficient of `m`, dropping exact zeros.
    pub fn push(&mut self, m: Monomial, c: Complex64) {
        let entry = self.terms.entry(m).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        BasisPoly::from_terms(self.omega, self.terms.iter().map(|(m, a)| (*m, a * c)))
    }

    /// Value at elapsed time `s` with step-start phase `theta`.
    pub fn eval(&self, s: f64, theta: f64) -> Complex64 {
        let w = self.omega;
        self.terms
            .iter()
            .map(|(m, c)| {
                let angle = f64::from(m.harmonic) * w * s + f64::from(m.phase) * theta;
                c * s.powi(m.power as i32) * w.powi(-m.inv_omega) * Complex64::from_polar(1.0, angle)
            })
            .sum()
    }

    /// Sum of the absolute values of the evaluated terms; a scale for
    /// cancellation-aware tolerances.
    pub fn eval_magnitude(&self, s: f64) -> f64 {
        let w = self.omega;
        self.terms
            .iter()
            .map(|(m, c)| c.norm() * s.abs().powi(m.power as i32) * w.powi(-m.inv_omega))
            .sum()
    }

    pub fn derivative(&self) -> Self {
        let mut out = BasisPoly::zero(self.omega);
        for (m, c) in &self.terms {
            if m.power > 0 {
                out.push(
                    Monomial {
                        power: m.power - 1,
                        ..*m
                    },
                    c * f64::from(m.power),
                );
            }
            if m.harmonic != 0 {
                out.push(
                    Monomial {
                        inv_omega: m.inv_omega - 1,
                        ..*m
                    },
                    c * Complex64::new(0.0, f64::from(m.harmonic)),
                );
            }
        }
        out
    }

    /// Antiderivative in `s` with integration constant zero.
    ///
    /// `int s^p ds = s^{p+1}/(p+1)` and, for `k != 0`,
    /// `int s^p e^{a s} ds = e^{a s} sum_{j=0}^{p} (-1)^j p!/(p-j)! s^{p-j} / a^{j+1}`
    /// with `a = i k w`; the latter is the unrolled reduction
    /// `I^p = s^p e^{as}/a - (p/a) I^{p-1}`.
    pub fn antiderivative(&self) -> Self {
        ANTIDERIVATIVES.with(|n| n.set(n.get() + 1));
        let mut out = BasisPoly::zero(self.omega);
        for (m, c) in &self.terms {
            if m.harmonic == 0 {
                out.push(
                    Monomial {
                        power: m.power + 1,
                        ..*m
                    },
                    c / f64::from(m.power + 1),
                );
                continue;
            }
            let ik = Complex64::new(0.0, f64::from(m.harmonic));
            let mut falling = 1.0;
            let mut ik_pow = ik;
            for j in 0..=m.power {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                out.push(
                    Monomial {
                        power: m.power - j,
                        inv_omega: m.inv_omega + j as i32 + 1,
                        ..*m
                    },
                    c * sign * falling / ik_pow,
                );
                falling *= f64::from(m.power - j);
                ik_pow *= ik;
            }
        }
        out
    }

    /// The antiderivative that vanishes at `s = 0`.
    pub fn integral_from_zero(&self) -> Self {
        let mut out = self.antiderivative();
        let at_zero: Vec<(Monomial, Complex64)> = out
            .terms
            .iter()
            .filter(|(m, _)| m.power == 0)
            .map(|(m, c)| {
                (
                    Monomial {
                        harmonic: 0,
                        ..*m
                    },
                    -c,
                )
            })
            .collect();
        for (m, c) in at_zero {
            out.push(m, c);
        }
        out
    }

    /// Average over the phase `phi` on `[0, 2 pi)`: keeps the terms without
    /// `e^{i theta}` dependence.
    pub fn phase_average(&self) -> Self {
        self.filter(|m| m.phase == 0)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        BasisPoly::from_terms(
            self.omega,
            self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, *c)),
        )
    }

    fn check_omega(&self, other: &Self) {
        assert!(
            self.omega == other.omega,
            "basis polynomials with different frequencies ({} vs {})",
            self.omega,
            other.omega
        );
    }
}

impl Add for &BasisPoly {
    type Output = BasisPoly;
    fn add(self, rhs: &BasisPoly) -> BasisPoly {
        self.check_omega(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.push(*m, *c);
        }
        out
    }
}

impl Sub for &BasisPoly {
    type Output = BasisPoly;
    fn sub(self, rhs: &BasisPoly) -> BasisPoly {
        self + &rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &BasisPoly {
    type Output = BasisPoly;
    fn mul(self, rhs: &BasisPoly) -> BasisPoly {
        self.check_omega(rhs);
        let mut out = BasisPoly::zero(self.omega);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.push(ma.times(*mb), ca * cb);
            }
        }
        out
    }
}
