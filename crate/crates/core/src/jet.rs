//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Jet`] holds the Taylor coefficients of a scalar quantity in the
//! variables `(t, u_1, ..., u_m)` about a fixed base point, up to a total
//! degree `d`. Sums and products are truncated at degree `d`, so arithmetic is
//! exact for polynomials of degree at most `d`. Coefficient fields written
//! against the [`Scalar`] trait evaluate both on plain complex numbers and on
//! jets, which is how operator words get applied without hand-coded
//! derivatives.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Arithmetic needed by coefficient-field programs.
pub trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// A constant living in the same context (base point, order) as `self`.
    fn lift(&self, c: Complex64) -> Self;

    fn recip(&self) -> Self;

    fn scale(&self, c: Complex64) -> Self {
        self.clone() * self.lift(c)
    }

    fn powi(&self, n: i32) -> Self {
        let base = if n < 0 { self.recip() } else { self.clone() };
        let mut acc = self.lift(Complex64::new(1.0, 0.0));
        for _ in 0..n.unsigned_abs() {
            acc = acc * base.clone();
        }
        acc
    }
}

impl Scalar for Complex64 {
    fn lift(&self, c: Complex64) -> Self {
        c
    }

    fn recip(&self) -> Self {
        Complex64::new(1.0, 0.0) / self
    }

    fn scale(&self, c: Complex64) -> Self {
        self * c
    }
}

/// Monomial layout shared by all jets about one base point.
///
/// Monomials are stored graded by total degree, so the coefficients of a jet
/// of order `k` form a prefix of those of order `k + 1`.
pub struct JetSpace {
    nvars: usize,
    max_order: usize,
    base: Vec<Complex64>,
    monomials: Vec<Vec<u32>>,
    len_by_order: Vec<usize>,
    product: Vec<Vec<Option<u32>>>,
    raise: Vec<Vec<Option<u32>>>,
}

impl fmt::Debug for JetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JetSpace")
            .field("nvars", &self.nvars)
            .field("max_order", &self.max_order)
            .field("base", &self.base)
            .finish()
    }
}

impl JetSpace {
    /// Layout for `base.len()` variables (time first) up to `max_order`.
    pub fn new(base: Vec<Complex64>, max_order: usize) -> Arc<Self> {
        let nvars = base.len();
        assert!(nvars > 0, "a jet space needs at least one variable");

        let mut monomials = Vec::new();
        let mut len_by_order = Vec::with_capacity(max_order + 1);
        for degree in 0..=max_order {
            let mut current = vec![0u32; nvars];
            compositions(degree as u32, 0, &mut current, &mut monomials);
            len_by_order.push(monomials.len());
        }

        let index: HashMap<Vec<u32>, u32> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();

        let n = monomials.len();
        let mut product = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                let sum: Vec<u32> = monomials[i]
                    .iter()
                    .zip(&monomials[j])
                    .map(|(a, b)| a + b)
                    .collect();
                product[i][j] = index.get(&sum).copied();
            }
        }

        let mut raise = vec![vec![None; n]; nvars];
        for (var, row) in raise.iter_mut().enumerate() {
            for (i, slot) in row.iter_mut().enumerate() {
                let mut m = monomials[i].clone();
                m[var] += 1;
                *slot = index.get(&m).copied();
            }
        }

        Arc::new(JetSpace {
            nvars,
            max_order,
            base,
            monomials,
            len_by_order,
            product,
            raise,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn base(&self) -> &[Complex64] {
        &self.base
    }

    /// Number of multi-indices with total degree at most `order`.
    pub fn len(&self, order: usize) -> usize {
        self.len_by_order[order]
    }

    /// Multi-indices of total degree at most `order`, in coefficient order.
    pub fn monomials(&self, order: usize) -> &[Vec<u32>] {
        &self.monomials[..self.len(order)]
    }

    pub fn constant(self: &Arc<Self>, c: Complex64, order: usize) -> Jet {
        assert!(order <= self.max_order);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.len(order)];
        coeffs[0] = c;
        Jet {
            space: Arc::clone(self),
            order,
            coeffs,
        }
    }

    /// The independent variable `var` (0 is time) as a jet.
    pub fn variable(self: &Arc<Self>, var: usize, order: usize) -> Jet {
        let mut jet = self.constant(self.base[var], order);
        if order >= 1 {
            jet.coeffs[1 + var] = Complex64::new(1.0, 0.0);
        }
        jet
    }

    fn index_of(&self, alpha: &[u32]) -> Option<usize> {
        let degree: u32 = alpha.iter().sum();
        if alpha.len() != self.nvars || degree as usize > self.max_order {
            return None;
        }
        let start = if degree == 0 {
            0
        } else {
            self.len_by_order[degree as usize - 1]
        };
        let end = self.len_by_order[degree as usize];
        (start..end).find(|&i| self.monomials[i] == alpha)
    }
}

fn compositions(remaining: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.clone());
        return;
    }
    for k in (0..=remaining).rev() {
        current[pos] = k;
        compositions(remaining - k, pos + 1, current, out);
    }
}

/// Truncated Taylor expansion of a scalar about a base point.
#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    order: usize,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl Jet {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Taylor coefficient of the monomial `alpha`, i.e. `D^alpha f / alpha!`.
    pub fn coefficient(&self, alpha: &[u32]) -> Option<Complex64> {
        let i = self.space.index_of(alpha)?;
        self.coeffs.get(i).copied()
    }

    /// Mixed partial derivative `D^alpha f` at the base point.
    pub fn partial(&self, alpha: &[u32]) -> Option<Complex64> {
        let fact: f64 = alpha
            .iter()
            .map(|&a| (1..=a).map(f64::from).product::<f64>())
            .product();
        self.coefficient(alpha).map(|c| c * fact)
    }

    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order, "cannot raise jet order by truncation");
        Jet {
            space: Arc::clone(&self.space),
            order,
            coeffs: self.coeffs[..self.space.len(order)].to_vec(),
        }
    }

    /// Partial derivative with respect to variable `var`; the result has one
    /// order less.
    pub fn derivative(&self, var: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let n = self.space.len(order);
        let coeffs = (0..n)
            .map(|i| {
                let j = self.space.raise[var][i].expect("raised monomial within max order") as usize;
                self.coeffs[j] * f64::from(self.space.monomials[i][var] + 1)
            })
            .collect();
        Jet {
            space: Arc::clone(&self.space),
            order,
            coeffs,
        }
    }

    fn check_compatible(&self, other: &Jet) -> Result<()> {
        if !Arc::ptr_eq(&self.space, &other.space) && self.space.base != other.space.base {
            return Err(Error::JetMismatch(format!(
                "base points differ: {:?} vs {:?}",
                self.space.base, other.space.base
            )));
        }
        if self.space.nvars != other.space.nvars {
            return Err(Error::JetMismatch(format!(
                "variable counts differ: {} vs {}",
                self.space.nvars, other.space.nvars
            )));
        }
        if self.order != other.order {
            return Err(Error::JetMismatch(format!(
                "orders differ: {} vs {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Jet {
            space: Arc::clone(&self.space),
            order: self.order,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        self.try_add(&-other.clone())
    }

    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let n = self.coeffs.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = &self.space.product[i];
            for (j, b) in other.coeffs.iter().enumerate() {
                if let Some(k) = row[j] {
                    let k = k as usize;
                    if k < n {
                        coeffs[k] += a * b;
                    }
                }
            }
        }
        Ok(Jet {
            space: Arc::clone(&self.space),
            order: self.order,
            coeffs,
        })
    }

    pub fn scaled(&self, c: Complex64) -> Jet {
        Jet {
            space: Arc::clone(&self.space),
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        self.try_add(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self.try_sub(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.try_mul(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for c in &mut self.coeffs {
            *c = -*c;
        }
        self
    }
}

impl Scalar for Jet {
    fn lift(&self, c: Complex64) -> Self {
        self.space.constant(c, self.order)
    }

    /// Series inversion `1/(c + x) = (1/c) sum_k (-x/c)^k`, truncated at the
    /// jet order. A zero constant term yields NaN coefficients.
    fn recip(&self) -> Self {
        let c = self.value();
        let mut x = self.clone();
        x.coeffs[0] = Complex64::new(0.0, 0.0);
        let ratio = x.scaled(-c.inv());
        let mut term = self.lift(Complex64::new(1.0, 0.0));
        let mut sum = term.clone();
        for _ in 0..self.order {
            term = term * ratio.clone();
            sum = sum + term.clone();
        }
        sum.scaled(c.inv())
    }

    fn scale(&self, c: Complex64) -> Self {
        self.scaled(c)
    }
}
