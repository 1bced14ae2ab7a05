//! Words over `{T, V}` naming the nested integrals of the expansion, the
//! truncation rule that selects them, and the term-count formula.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// One integration in a nested integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// Integral over time; as an operator, `L0 = d/dt + a . grad_u`.
    Time,
    /// Integral against `dV = v dt`; as an operator, `L1 = b . grad_u`.
    Osc,
}

impl Letter {
    pub fn symbol(self) -> char {
        match self {
            Letter::Time => 'T',
            Letter::Osc => 'V',
        }
    }
}

/// Coefficient function an operator word acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    /// `a(t, u)`
    Drift,
    /// `b(t, u)`
    Forcing,
}

/// Letters ordered innermost to outermost.
///
/// The outermost letter selects the target (`T` for `a`, `V` for `b`); the
/// remaining letters, innermost first, form the operator word applied to
/// it. So `[V, T]` is `L1 a * int int dV_s dt`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("a word needs at least one letter".into()));
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of time integrals.
    pub fn time_count(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::Time).count()
    }

    /// Number of oscillator integrals.
    pub fn osc_count(&self) -> usize {
        self.0.len() - self.time_count()
    }

    pub fn target(&self) -> Target {
        match self.0.last().expect("words are non-empty") {
            Letter::Time => Target::Drift,
            Letter::Osc => Target::Forcing,
        }
    }

    pub fn operators(&self) -> &[Letter] {
        &self.0[..self.0.len() - 1]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl std::str::FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|ch| match ch {
                'T' | 't' => Ok(Letter::Time),
                'V' | 'v' => Ok(Letter::Osc),
                other => Err(Error::InvalidArgument(format!("unknown letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Length first, then lexicographic with `T < V`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

// Slack for retention tests computed from ratios such as kappa / rho.
const RETENTION_SLACK: f64 = 1e-12;

/// Retention rule `Q0/kappa0 + Q1/kappa1 <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    kappa0: f64,
    kappa1: f64,
}

impl TruncationPolicy {
    pub fn new(kappa0: f64, kappa1: f64) -> Result<Self> {
        for (name, k) in [("kappa0", kappa0), ("kappa1", kappa1)] {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {k}")));
            }
        }
        Ok(TruncationPolicy { kappa0, kappa1 })
    }

    /// Order `kappa` in `h` for the regime `1/w ~ h^rho` with amplitude
    /// `v = O(w^-nu)`: `kappa0 = kappa`, `kappa1 = kappa / (rho (nu + 1))`.
    pub fn from_regime(kappa: f64, rho: f64, nu: f64) -> Result<Self> {
        if !(nu > -1.0) {
            return Err(Error::Regime(nu));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
        }
        Self::new(kappa, kappa / (rho * (nu + 1.0)))
    }

    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    pub fn kappa1(&self) -> f64 {
        self.kappa1
    }

    /// `q0/kappa0 + q1/kappa1`, the weight of a term with `q0` time and `q1`
    /// oscillator orders; retained when at most one.
    pub fn weight(&self, q0: f64, q1: f64) -> f64 {
        q0 / self.kappa0 + q1 / self.kappa1
    }

    pub fn admits(&self, q0: f64, q1: f64) -> bool {
        self.weight(q0, q1) <= 1.0 + RETENTION_SLACK
    }

    pub fn retains(&self, word: &Word) -> bool {
        self.admits(word.time_count() as f64, word.osc_count() as f64)
    }

    fn max_len(&self) -> usize {
        ((self.kappa0 + RETENTION_SLACK).floor() + (self.kappa1 + RETENTION_SLACK).floor()) as usize
    }
}

/// Every retained word, ordered by length and then lexicographically.
pub fn enumerate_words(policy: &TruncationPolicy) -> Vec<Word> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    for len in 1..=policy.max_len() {
        extend(policy, len, 0, 0, &mut prefix, &mut out);
    }
    out
}

fn extend(policy: &TruncationPolicy, len: usize, q0: usize, q1: usize, prefix: &mut Vec<Letter>, out: &mut Vec<Word>) {
    if !policy.admits(q0 as f64, q1 as f64) {
        return;
    }
    if prefix.len() == len {
        out.push(Word(prefix.clone()));
        return;
    }
    for letter in [Letter::Time, Letter::Osc] {
        prefix.push(letter);
        match letter {
            Letter::Time => extend(policy, len, q0 + 1, q1, prefix, out),
            Letter::Osc => extend(policy, len, q0, q1 + 1, prefix, out),
        }
        prefix.pop();
    }
}

/// `N(kappa, rho) = sum_{i=0}^{kappa} sum_{j=0}^{rho(kappa-i)} (i+j)!/(i! j!) - 1`.
///
/// The sum ranges over `j + rho i <= rho kappa`, so it counts the words of
/// [`term_count_policy`]`(kappa, rho)`.
pub fn term_count(kappa: u32, rho: u32) -> Result<u64> {
    if kappa == 0 || rho == 0 {
        return Err(Error::InvalidArgument("kappa and rho must be positive integers".into()));
    }
    let mut total: u64 = 0;
    for i in 0..=kappa {
        for j in 0..=rho * (kappa - i) {
            total += binomial(u64::from(i + j), u64::from(i));
        }
    }
    Ok(total - 1)
}

/// The policy whose retained words [`term_count`] counts: `kappa` oscillator
/// integrals and `rho kappa` time integrals, i.e. `O(w^-kappa)` accuracy in
/// the regime `1/w ~ h^rho`.
pub fn term_count_policy(kappa: u32, rho: u32) -> Result<TruncationPolicy> {
    TruncationPolicy::new(f64::from(rho * kappa), f64::from(kappa))
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StochasticScheme {
    Euler,
    Milstein,
}

impl std::str::FromStr for StochasticScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euler" => Ok(StochasticScheme::Euler),
            "milstein" => Ok(StochasticScheme::Milstein),
            other => Err(Error::InvalidArgument(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Defining word set of a classical stochastic scheme.
pub fn stochastic_scheme_words(scheme: StochasticScheme) -> BTreeSet<Word> {
    let names: &[&str] = match scheme {
        StochasticScheme::Euler => &["T", "V"],
        StochasticScheme::Milstein => &["T", "V", "VV"],
    };
    names.iter().map(|n| n.parse().expect("valid word")).collect()
}

/// Whether `kappa0 = kappa`, `kappa1 = kappa / rho'` retains exactly the
/// words of `scheme`.
pub fn policy_matches_scheme(kappa: f64, rho_prime: f64, scheme: StochasticScheme) -> Result<bool> {
    let policy = TruncationPolicy::new(kappa, kappa / rho_prime)?;
    let words: BTreeSet<Word> = enumerate_words(&policy).into_iter().collect();
    Ok(words == stochastic_scheme_words(scheme))
}

/// Smallest `p0 + rho p1` over excluded pairs `(p0, p1)` on the boundary of
/// the retained region: the leading order expected from the remainder in
/// the regime `1/w ~ h^rho`. Diagnostic only.
pub fn expected_local_order(policy: &TruncationPolicy, rho: f64) -> f64 {
    let max0 = policy.kappa0.floor() as usize + 1;
    let max1 = policy.kappa1.floor() as usize + 1;
    let mut best = f64::INFINITY;
    for p0 in 0..=max0 {
        for p1 in 0..=max1 {
            if !policy.admits(p0 as f64, p1 as f64) {
                best = best.min(p0 as f64 + rho * p1 as f64);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(words: &[Word]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn first_and_second_expansions() {
        let p = TruncationPolicy::new(1.0, 1.0).unwrap();
        assert_eq!(names(&enumerate_words(&p)), ["T", "V"]);
        let p = TruncationPolicy::new(2.0, 2.0).unwrap();
        assert_eq!(names(&enumerate_words(&p)), ["T", "V", "TT", "TV", "VT", "VV"]);
    }

    #[test]
    fn low_order_regime_example() {
        let p = TruncationPolicy::from_regime(2.0, 2.0, 0.0).unwrap();
        assert_eq!((p.kappa0(), p.kappa1()), (2.0, 1.0));
        assert_eq!(names(&enumerate_words(&p)), ["T", "V", "TT"]);
    }

    #[test]
    fn kappa4_rho2_word_set() {
        let p = TruncationPolicy::from_regime(4.0, 2.0, 0.0).unwrap();
        assert_eq!(
            names(&enumerate_words(&p)),
            ["T", "V", "TT", "TV", "VT", "VV", "TTT", "TTV", "TVT", "VTT", "TTTT"]
        );
    }

    #[test]
    fn sub_unit_policies_are_empty() {
        let p = TruncationPolicy::new(0.9, 0.5).unwrap();
        assert!(enumerate_words(&p).is_empty());
    }

    #[test]
    fn word_targets_and_operators() {
        let w: Word = "VT".parse().unwrap();
        assert_eq!(w.target(), Target::Drift);
        assert_eq!(w.operators(), &[Letter::Osc]);
        let w: Word = "TVV".parse().unwrap();
        assert_eq!(w.target(), Target::Forcing);
        assert_eq!(w.operators(), &[Letter::Time, Letter::Osc]);
        assert_eq!((w.time_count(), w.osc_count()), (1, 2));
        assert!(Word::new(vec![]).is_err());
    }

    #[test]
    fn term_counts() {
        assert_eq!(term_count(1, 1).unwrap(), 2);
        assert_eq!(term_count(2, 1).unwrap(), 6);
        assert_eq!(term_count(3, 1).unwrap(), 14);
        for kappa in 1..=8u32 {
            assert_eq!(term_count(kappa, 1).unwrap(), 2 * (2u64.pow(kappa) - 1));
        }
        for kappa in 1..=3 {
            for rho in 1..=3 {
                let live = enumerate_words(&term_count_policy(kappa, rho).unwrap()).len() as u64;
                assert_eq!(term_count(kappa, rho).unwrap(), live, "kappa={kappa} rho={rho}");
            }
        }
    }

    #[test]
    fn retention_is_monotone() {
        let base = TruncationPolicy::new(2.5, 1.5).unwrap();
        let words: BTreeSet<Word> = enumerate_words(&base).into_iter().collect();
        for (d0, d1) in [(0.5, 0.0), (0.0, 0.7), (1.0, 1.0)] {
            let bigger = TruncationPolicy::new(2.5 + d0, 1.5 + d1).unwrap();
            let more: BTreeSet<Word> = enumerate_words(&bigger).into_iter().collect();
            assert!(words.is_subset(&more));
        }
    }

    #[test]
    fn stochastic_correspondence_examples() {
        use StochasticScheme::*;
        assert_eq!(names(&stochastic_scheme_words(Euler).into_iter().collect::<Vec<_>>()), ["T", "V"]);
        assert_eq!(
            names(&stochastic_scheme_words(Milstein).into_iter().collect::<Vec<_>>()),
            ["T", "V", "VV"]
        );
        assert_ne!(stochastic_scheme_words(Euler), stochastic_scheme_words(Milstein));
        assert!(policy_matches_scheme(1.2, 0.75, Euler).unwrap());
        assert!(policy_matches_scheme(1.0, 0.5, Milstein).unwrap());
        assert!(!policy_matches_scheme(3.0, 0.9, Euler).unwrap());
    }

    #[test]
    fn expected_order_diagnostic() {
        let p = TruncationPolicy::from_regime(4.0, 2.0, 0.0).unwrap();
        assert_eq!(expected_local_order(&p, 2.0), 5.0);
        let p = TruncationPolicy::new(1.0, 1.0).unwrap();
        assert_eq!(expected_local_order(&p, 1.0), 2.0);
    }
}
