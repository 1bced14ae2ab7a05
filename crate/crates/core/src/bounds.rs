//! Remainder bounds for the first two expansions and estimation of the
//! smoothness constant `K` they depend on.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::word::Target;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub k: f64,
    pub vnorm: f64,
    pub h: f64,
    pub omega: f64,
}

impl BoundInputs {
    pub fn new(k: f64, vnorm: f64, h: f64, omega: f64) -> Result<Self> {
        for (name, x) in [("K", k), ("|v|", vnorm), ("h", h)] {
            if !(x.is_finite() && x >= 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be non-negative, got {x}")));
            }
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidFrequency(omega));
        }
        Ok(BoundInputs { k, vnorm, h, omega })
    }
}

/// Bound on the remainder of the expansion keeping `T` and `V`.
pub fn bound_r11(b: &BoundInputs) -> f64 {
    let (k, v, h, w) = (b.k, b.vnorm, b.h, b.omega);
    0.5 * (k * k + k) * h * h + (2.0 * k * k + k) * v * h / w + k * k * v * v / (w * w)
}

/// Bound on the remainder of the expansion keeping all words of length two.
pub fn bound_r22(b: &BoundInputs) -> f64 {
    let (k, v, h, w) = (b.k, b.vnorm, b.h, b.omega);
    let (k2, k3) = (k * k, k * k * k);
    (2.0 * k3 + 4.0 * k2 + k) * h.powi(3) / 6.0
        + 0.5 * (8.0 * k3 + 8.0 * k2 + k) * v * h * h / w
        + (6.0 * k3 + 4.0 * k2) * v * v * h / (w * w)
        + 2.0 * k3 * v.powi(3) / w.powi(3)
}

/// Axis-aligned sampling region for [`estimate_k`]: an interval in `t` and
/// one real interval per state component.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    pub t: (f64, f64),
    pub u: Vec<(f64, f64)>,
    pub points_per_axis: usize,
}

impl SampleBox {
    pub fn new(t: (f64, f64), u: Vec<(f64, f64)>, points_per_axis: usize) -> Result<Self> {
        if points_per_axis < 2 {
            return Err(Error::InvalidArgument("need at least two sample points per axis".into()));
        }
        for &(lo, hi) in std::iter::once(&t).chain(&u) {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
            }
        }
        Ok(SampleBox { t, u, points_per_axis })
    }

    fn points(&self) -> Vec<(f64, Vec<Complex64>)> {
        let n = self.points_per_axis;
        let grid = |(lo, hi): (f64, f64)| -> Vec<f64> {
            (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
        };
        let mut out = vec![(0.0, Vec::new())];
        out = grid(self.t).into_iter().flat_map(|t| out.iter().map(move |(_, u)| (t, u.clone()))).collect();
        for &axis in &self.u {
            let values = grid(axis);
            out = out
                .into_iter()
                .flat_map(|(t, u)| {
                    values.iter().map(move |&x| {
                        let mut next = u.clone();
                        next.push(Complex64::new(x, 0.0));
                        (t, next)
                    })
                })
                .collect();
        }
        out
    }
}

/// Sampled `C^k_2` norm of `target` over `region`: for every multi-index of
/// degree at most `order`, the largest Euclidean norm of `D^alpha f` over the
/// samples, combined in the 2-norm.
pub fn sampled_norm<F: CoefficientField>(field: &F, target: Target, region: &SampleBox, order: usize) -> Result<f64> {
    if region.u.len() != field.dim() {
        return Err(Error::InvalidArgument(format!(
            "sample box has {} state axes, field has dimension {}",
            region.u.len(),
            field.dim()
        )));
    }
    let mut sup: Vec<f64> = Vec::new();
    for (t, u) in region.points() {
        let jets = field.jets(target, t, &u, order)?;
        let monomials = jets[0].space().monomials(order).to_vec();
        sup.resize(monomials.len(), 0.0);
        for (slot, alpha) in sup.iter_mut().zip(&monomials) {
            let norm = jets
                .iter()
                .map(|j| j.partial(alpha).unwrap_or_default().norm_sqr())
                .sum::<f64>()
                .sqrt();
            if !norm.is_finite() {
                return Err(Error::Domain(format!("derivative {alpha:?} is not finite at t = {t}")));
            }
            *slot = slot.max(norm);
        }
    }
    Ok(sup.iter().map(|s| s * s).sum::<f64>().sqrt())
}

/// Estimate of `K`: the larger sampled `C^order_2` norm of `a` and `b`.
pub fn estimate_k<F: CoefficientField>(field: &F, region: &SampleBox, order: usize) -> Result<f64> {
    let a = sampled_norm(field, Target::Drift, region, order)?;
    let b = sampled_norm(field, Target::Forcing, region, order)?;
    Ok(a.max(b))
}
