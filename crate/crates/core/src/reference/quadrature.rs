use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights for the nodes `XGK[1]`, `XGK[3]`, `XGK[5]` and the centre.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Piece {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(centre - dx) + f(centre + dx);
        k += pair * WGK[i];
        if i % 2 == 1 {
            g += pair * WG[i / 2];
        }
    }
    Piece {
        a,
        b,
        value: k * half,
        error: ((k - g) * half).norm(),
    }
}

/// Adaptive 15-point Gauss-Kronrod quadrature of `f` over `[a, b]` to
/// absolute tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    integrate_partitioned(f, a, b, 1, tol)
}

/// As [`integrate`], starting from `pieces` equal subintervals.
pub fn integrate_partitioned<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    pieces: usize,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        });
    }
    let pieces = pieces.max(1);
    let mut heap = BinaryHeap::with_capacity(pieces);
    for i in 0..pieces {
        let lo = a + (b - a) * i as f64 / pieces as f64;
        let hi = if i + 1 == pieces { b } else { a + (b - a) * (i + 1) as f64 / pieces as f64 };
        heap.push(kronrod(&mut f, lo, hi));
    }
    let mut evaluations = 15 * pieces;
    loop {
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= tol {
            let value = heap.iter().map(|p| p.value).sum();
            return Ok(QuadratureResult {
                value,
                error,
                evaluations,
            });
        }
        if !error.is_finite() || heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature { estimate: error, tol });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Quadrature { estimate: error, tol });
        }
        heap.push(kronrod(&mut f, worst.a, mid));
        heap.push(kronrod(&mut f, mid, worst.b));
        evaluations += 30;
    }
}

/// Quadrature of an integrand oscillating at angular frequency `omega`,
/// starting from one subinterval per half-period.
pub fn integrate_oscillatory<F: FnMut(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    omega: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidFrequency(omega));
    }
    let pieces = ((b - a).abs() * omega / std::f64::consts::PI).ceil().max(1.0);
    integrate_partitioned(f, a, b, pieces.min(MAX_INTERVALS as f64 / 2.0) as usize, tol)
}
