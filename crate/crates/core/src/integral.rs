//! Exact evaluation of the nested integrals named by words.

use num_complex::Complex64;

use crate::basis::BasisPoly;
use crate::oscillator::OscillatorSpec;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct IteratedIntegralValue {
    pub value: Complex64,
    pub word: Word,
    pub t_n: f64,
    pub h: f64,
}

/// The nested integral of `word` from the step start to `t_n + s`, as a
/// basis polynomial in `s`.
///
/// Starting from the constant one, each letter (innermost first) multiplies
/// by `v` when it is `V` and then integrates from zero.
pub fn iterated_integral_poly(word: &Word, osc: &OscillatorSpec) -> BasisPoly {
    let v = osc.as_basis();
    let mut acc = BasisPoly::one(osc.omega());
    for letter in word.letters() {
        if *letter == Letter::Osc {
            acc = &acc * &v;
        }
        acc = acc.integral_from_zero();
    }
    acc
}

pub fn iterated_integral(word: &Word, osc: &OscillatorSpec, t_n: f64, h: f64) -> IteratedIntegralValue {
    let poly = iterated_integral_poly(word, osc);
    IteratedIntegralValue {
        value: poly.eval(h, osc.theta(t_n)),
        word: word.clone(),
        t_n,
        h,
    }
}
