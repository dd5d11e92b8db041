//! Leading-order predictions for `ρ`: term enumeration, scrambling time,
//! dominant terms and the switchback formula.
//!
//! Each enumerated term has the form `α^σ e^{|4ω·arg|}` with `α = δω²/(4ω²)`.
//! Term lists are deterministic: subsets by size and then lexicographically,
//! and within a subset the sign patterns in binary counting order with `+ = 0`
//! and the first sign as the most significant bit.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::OscillatorParams;
use crate::real::Real;
use crate::state::TimeFold;

/// Largest Loschmidt fold that [`rho_l_leading`] enumerates.
pub const LOSCHMIDT_TERM_LIMIT: usize = 15;

/// Largest precursor fold that [`rho_p_leading`] enumerates.
pub const PRECURSOR_TERM_LIMIT: usize = 40;

/// `δω/ω` above which the leading-order expansion is not trusted.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

/// Relative score gap under which two terms count as tied.
pub const TIE_TOLERANCE: f64 = 1e-30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Signs `⊕_1, …, ⊕_{n−1}` joining the times of an `n`-element subset.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignPattern(Vec<Sign>);

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignPattern(signs)
    }

    /// `(−, +, −, …)` of the given length: the pattern in which every sign
    /// flips.
    pub fn alternating(len: usize) -> Self {
        SignPattern((0..len).map(|k| if k % 2 == 0 { Sign::Minus } else { Sign::Plus }).collect())
    }

    /// The `index`-th pattern of `len` signs in binary counting order.
    fn nth(len: usize, index: u64) -> Self {
        SignPattern(
            (0..len)
                .map(|k| if index >> (len - 1 - k) & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect(),
        )
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|s| s.symbol()).join(","))
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    /// Accepts `+`/`-` characters with optional commas, spaces and
    /// surrounding parentheses, e.g. `(-,+)` or `-+`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        body.chars()
            .filter(|c| !matches!(c, ',' | ' '))
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' | '−' => Ok(Sign::Minus),
                other => Err(Error::InvalidParams(format!("unexpected sign symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignPattern)
    }
}

/// `κ` = `[first sign is −]` + number of adjacent sign changes.
pub fn kappa(pattern: &SignPattern) -> u32 {
    let s = pattern.signs();
    let lead = u32::from(s.first() == Some(&Sign::Minus));
    lead + s.windows(2).filter(|w| w[0] != w[1]).count() as u32
}

/// `α = δω²/(4ω²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Alpha(Real);

impl Alpha {
    pub fn from_params(params: &OscillatorParams) -> Self {
        let ratio = params.real(params.delta_omega()) / params.real(params.omega());
        Alpha(ratio.square() / params.real(4.0))
    }

    pub fn value(&self) -> &Real {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

/// One term `α^σ e^{|4ω·arg|}` of a leading-order sum.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticTerm {
    subset: Vec<usize>,
    pattern: SignPattern,
    sigma: u32,
    exponent_arg: Real,
    value: Real,
}

impl AnalyticTerm {
    fn new(subset: Vec<usize>, pattern: SignPattern, sigma: u32, arg: Real, params: &OscillatorParams) -> Self {
        let value = term_value(sigma, &arg, params);
        AnalyticTerm { subset, pattern, sigma, exponent_arg: arg, value }
    }

    /// Selected insertion indices `j_1 < … < j_n`, counted from 1. Empty for
    /// the constant (Loschmidt) or one-way (precursor) term.
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn pattern(&self) -> &SignPattern {
        &self.pattern
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    /// The time combination inside `|·|`, in time units.
    pub fn exponent_arg(&self) -> &Real {
        &self.exponent_arg
    }

    pub fn value(&self) -> &Real {
        &self.value
    }

    /// `σ·ln α + |4ω·arg|`, or `None` when `α = 0` kills the term.
    pub fn log_value(&self, params: &OscillatorParams) -> Option<Real> {
        let growth = (params.real(4.0 * params.omega()) * &self.exponent_arg).abs();
        if self.sigma == 0 {
            return Some(growth);
        }
        let alpha = Alpha::from_params(params);
        if alpha.value().is_zero() {
            return None;
        }
        Some(alpha.value().ln() * params.real(f64::from(self.sigma)) + growth)
    }
}

fn term_value(sigma: u32, arg: &Real, params: &OscillatorParams) -> Real {
    let growth = (params.real(4.0 * params.omega()) * arg).abs().exp();
    if sigma == 0 {
        growth
    } else {
        Alpha::from_params(params).value().powi(sigma) * growth
    }
}

/// A leading-order value together with the enumerated terms it sums.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingOrder {
    rho: Real,
    terms: Vec<AnalyticTerm>,
}

impl LeadingOrder {
    fn from_terms(terms: Vec<AnalyticTerm>) -> Self {
        // Fixed summation order keeps the result independent of the
        // enumeration's thread count.
        let rho = terms.iter().map(|t| t.value.clone()).sum();
        LeadingOrder { rho, terms }
    }

    pub fn rho(&self) -> &Real {
        &self.rho
    }

    pub fn terms(&self) -> &[AnalyticTerm] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<AnalyticTerm> {
        self.terms
    }
}

fn check_budget(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::ComplexityBudget { count: n, limit });
    }
    Ok(())
}

/// Terms of every subset size, generated in parallel per size and
/// concatenated in size order.
fn enumerate_by_size<F>(n_max: usize, terms_of_size: F) -> Vec<AnalyticTerm>
where
    F: Fn(usize) -> Vec<AnalyticTerm> + Sync + Send,
{
    (1..=n_max).into_par_iter().map(terms_of_size).collect::<Vec<_>>().concat()
}

/// `ρ_L⁰ = 1 + Σ_n Σ_{j_1<…<j_n} Σ_⊕ α^{2n−1−κ} e^{|4(t_{j_1} ⊕ … ⊕ t_{j_n})ω|}`.
///
/// The term list starts with the constant term (empty subset, `σ = 0`), so it
/// has `(3^N + 1)/2` entries. The outer times of `fold` are ignored.
pub fn rho_l_leading(fold: &TimeFold, params: &OscillatorParams) -> Result<LeadingOrder> {
    let n_max = fold.len();
    check_budget(n_max, LOSCHMIDT_TERM_LIMIT)?;
    let times = fold.times();
    let prec = params.precision();

    let rest = enumerate_by_size(n_max, |n| {
        let mut out = Vec::new();
        for subset in (0..n_max).combinations(n) {
            for index in 0..1u64 << (n - 1) {
                let pattern = SignPattern::nth(n - 1, index);
                let mut arg = times[subset[0]].with_precision(prec);
                for (sign, &j) in pattern.signs().iter().zip(&subset[1..]) {
                    arg = match sign {
                        Sign::Plus => arg + &times[j],
                        Sign::Minus => arg - &times[j],
                    };
                }
                let sigma = 2 * n as u32 - 1 - kappa(&pattern);
                let indices = subset.iter().map(|j| j + 1).collect();
                out.push(AnalyticTerm::new(indices, pattern, sigma, arg, params));
            }
        }
        out
    });

    let constant = AnalyticTerm::new(Vec::new(), SignPattern::default(), 0, Real::zero(prec), params);
    Ok(LeadingOrder::from_terms(std::iter::once(constant).chain(rest).collect()))
}

/// `ρ_P⁰ = e^{|2(t_s−t_f)ω|} + Σ_n Σ_{j_1<…<j_n} α^n e^{|4(t_s/2 + Σ_k (−1)^k t_{j_k} + (−1)^{n+1} t_f/2)ω|}`.
///
/// The term list starts with the one-way term (empty subset, `σ = 0`,
/// `arg = (t_s − t_f)/2`) and has `2^N` entries.
pub fn rho_p_leading(fold: &TimeFold, params: &OscillatorParams) -> Result<LeadingOrder> {
    let n_max = fold.len();
    check_budget(n_max, PRECURSOR_TERM_LIMIT)?;
    let times = fold.times();
    let prec = params.precision();
    let half = params.real(0.5);
    let ts_half = fold.t_s().with_precision(prec) * &half;
    let tf_half = fold.t_f().with_precision(prec) * &half;

    let rest = enumerate_by_size(n_max, |n| {
        (0..n_max)
            .combinations(n)
            .map(|subset| {
                let mut arg = ts_half.clone();
                for (k, &j) in subset.iter().enumerate() {
                    // k is 0-based, so (−1)^{k+1}.
                    arg = if k % 2 == 0 { arg - &times[j] } else { arg + &times[j] };
                }
                arg = if n % 2 == 1 { arg + &tf_half } else { arg - &tf_half };
                let indices = subset.iter().map(|j| j + 1).collect();
                AnalyticTerm::new(indices, SignPattern::alternating(n - 1), n as u32, arg, params)
            })
            .collect()
    });

    let one_way = AnalyticTerm::new(Vec::new(), SignPattern::default(), 0, &ts_half - &tf_half, params);
    Ok(LeadingOrder::from_terms(std::iter::once(one_way).chain(rest).collect()))
}

/// Whether `δω/ω` is small enough for the leading-order expansion.
pub fn perturbative_regime(params: &OscillatorParams) -> bool {
    params.delta_ratio() <= PERTURBATIVE_LIMIT
}

/// `t* = −ln α/(4ω)`, in time units.
pub fn scrambling_time(params: &OscillatorParams) -> Result<Real> {
    let alpha = Alpha::from_params(params);
    let a = alpha.value();
    if !a.is_positive() || *a >= Real::one(params.precision()) {
        return Err(Error::Domain(format!("α = {a} has no scrambling regime; need 0 < α < 1")));
    }
    Ok(-(a.ln()) / params.real(4.0 * params.omega()))
}

/// Leg lengths `|t_1 − t_s|, |t_2 − t_1|, …, |t_f − t_N|`, or `|t_f − t_s|`
/// for an empty fold.
pub fn legs(fold: &TimeFold) -> Vec<Real> {
    let points: Vec<&Real> = std::iter::once(fold.t_s()).chain(fold.times()).chain([fold.t_f()]).collect();
    points.windows(2).map(|w| (w[1] - w[0]).abs()).collect()
}

/// `t_T`, the sum of all leg lengths.
pub fn total_folded_time(fold: &TimeFold) -> Real {
    legs(fold).into_iter().sum()
}

/// Highest-scoring term of a leading-order list.
#[derive(Clone, Debug, PartialEq)]
pub struct Dominant {
    pub index: usize,
    pub term: AnalyticTerm,
    /// `log` of the term value; `None` only if every term vanishes.
    pub score: Option<Real>,
    /// Another term scores within [`TIE_TOLERANCE`] of the winner.
    pub tie: bool,
}

/// The term with the largest `|4ω·arg| + σ ln α`, i.e. the largest value.
///
/// Ties go to the smallest `σ`, then the lexicographically first subset,
/// then the earlier position in the list, and are flagged.
pub fn dominant_term(terms: &[AnalyticTerm], params: &OscillatorParams) -> Result<Dominant> {
    if terms.is_empty() {
        return Err(Error::InvalidParams("dominant term of an empty list".into()));
    }
    let scores: Vec<Option<Real>> = terms.iter().map(|t| t.log_value(params)).collect();
    let best = scores.iter().flatten().cloned().reduce(Real::max);

    let close = |s: &Option<Real>| match (s, &best) {
        (Some(s), Some(b)) => {
            let scale = b.abs().to_f64().max(1.0);
            (b - s).abs().to_f64() <= TIE_TOLERANCE * scale
        }
        (None, None) => true,
        _ => false,
    };
    let candidates: Vec<usize> = (0..terms.len()).filter(|&i| close(&scores[i])).collect();
    let index = *candidates
        .iter()
        .min_by(|&&a, &&b| {
            (terms[a].sigma, &terms[a].subset, a).cmp(&(terms[b].sigma, &terms[b].subset, b))
        })
        .expect("at least one candidate");

    Ok(Dominant { index, term: terms[index].clone(), score: scores[index].clone(), tie: candidates.len() > 1 })
}

/// Switchback prediction `C = ω(t_T − 2N t*)` and its validity check.
#[derive(Clone, Debug, PartialEq)]
pub struct Switchback {
    pub folded_time: Real,
    pub scrambling_time: Real,
    pub complexity: Real,
    pub insertions: usize,
    /// Zero-based indices of legs no longer than `t*`.
    pub short_legs: Vec<usize>,
}

impl Switchback {
    /// Set when some leg is within the scrambling time, where the formula
    /// does not apply.
    pub fn regime_warning(&self) -> bool {
        !self.short_legs.is_empty()
    }
}

/// `C = ω(t_T − 2N t*)`, taking the number of switchbacks to be the number of
/// insertions.
pub fn switchback_complexity(fold: &TimeFold, params: &OscillatorParams) -> Result<Switchback> {
    let t_star = scrambling_time(params)?;
    let legs = legs(fold);
    let short_legs = legs.iter().enumerate().filter(|(_, l)| **l <= t_star).map(|(i, _)| i).collect();
    let folded_time: Real = legs.into_iter().sum();
    let n = fold.len();
    let two_n = params.real(2.0 * n as f64);
    let complexity = params.real(params.omega()) * (&folded_time - &two_n * &t_star);
    Ok(Switchback { folded_time, scrambling_time: t_star, complexity, insertions: n, short_legs })
}

/// Closed form of `ρ` for the harmonic control state:
///
/// ```text
/// 1 + δω²/(32√2 ω²)·[√2(25 − 30c₂ + 9c₂²) + (5 − 3c₂)√(59 − 60c₂ + 9c₄ + 128ω²/δω²)]
/// ```
///
/// with `c₂ = cos 2ωt₁`, `c₄ = cos 4ωt₁`. Independent of `m` and `g`.
pub fn harmonic_rho_closed_form(t1: &Real, params: &OscillatorParams) -> Real {
    let p = params.precision();
    let one = Real::one(p);
    if params.delta_omega() == 0.0 {
        return one;
    }
    let r = |x: f64| params.real(x);
    let w = r(params.omega());
    let dw = r(params.delta_omega());
    let x = &w * t1;
    let c2 = (&x * r(2.0)).cos();
    let c4 = (&x * r(4.0)).cos();
    let sqrt2 = r(2.0).sqrt();

    let first = &sqrt2 * (r(25.0) - r(30.0) * &c2 + r(9.0) * c2.square());
    // δω²·√(X + 128ω²/δω²) = δω·√(X δω² + 128ω²), which stays finite as δω → 0.
    let inner = r(59.0) - r(60.0) * &c2 + r(9.0) * &c4;
    let root = (inner * dw.square() + r(128.0) * w.square()).sqrt();
    let second = (r(5.0) - r(3.0) * &c2) * &dw * root;
    let pre = r(32.0) * &sqrt2 * w.square();
    one + (dw.square() * first + second) / pre
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural(dw: f64) -> OscillatorParams {
        OscillatorParams::natural(dw).unwrap()
    }

    fn pat(s: &str) -> SignPattern {
        s.parse().unwrap()
    }

    #[test]
    fn kappa_examples() {
        for (s, k) in [("", 0), ("+", 0), ("-", 1), ("+-", 1), ("--", 1), ("-+", 2), ("--+", 2), ("-+-", 3)] {
            assert_eq!(kappa(&pat(s)), k, "{s}");
        }
    }

    #[test]
    fn pattern_round_trip() {
        assert_eq!(pat("(-,+,-)"), SignPattern::alternating(3));
        assert_eq!(SignPattern::alternating(3).to_string(), "(-,+,-)");
        assert_eq!(SignPattern::default().to_string(), "()");
        assert!("(+,x)".parse::<SignPattern>().is_err());
    }

    #[test]
    fn binary_counting_order() {
        let all: Vec<String> = (0..4).map(|i| SignPattern::nth(2, i).to_string()).collect();
        assert_eq!(all, ["(+,+)", "(+,-)", "(-,+)", "(-,-)"]);
    }

    #[test]
    fn alpha_at_figure_ratio() {
        let a = Alpha::from_params(&natural(1e-3)).to_f64();
        assert!((a - 2.5e-7).abs() < 1e-22);
    }

    #[test]
    fn scrambling_time_examples() {
        let t = scrambling_time(&natural(1e-3)).unwrap().to_f64();
        assert!((t - 3.800_451_229_771_041).abs() < 1e-13, "{t}");

        // α = e⁻⁴ ⇔ δω/ω = 2e⁻².
        let p = natural(2.0 * (-2.0f64).exp());
        assert!((scrambling_time(&p).unwrap().to_f64() - 1.0).abs() < 1e-12);

        let doubled = OscillatorParams::new(1.0, 2.0, 2e-3, 1.0).unwrap();
        let ratio = scrambling_time(&natural(1e-3)).unwrap() / scrambling_time(&doubled).unwrap();
        assert!((ratio.to_f64() - 2.0).abs() < 1e-12);

        assert!(matches!(scrambling_time(&natural(0.0)), Err(Error::Domain(_))));
        assert!(matches!(scrambling_time(&natural(2.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn total_folded_time_examples() {
        let p = natural(1e-3);
        let f = TimeFold::from_omega_t(0.0, 5.0, &[], &p).unwrap();
        assert_eq!(total_folded_time(&f).to_f64(), 5.0);
        let f = TimeFold::from_omega_t(-20.0, -20.0, &[20.0, 0.0, 20.0, 0.0], &p).unwrap();
        assert_eq!(total_folded_time(&f).to_f64(), 120.0);
        let f = TimeFold::from_omega_t(0.0, 0.0, &[3.0, -3.0, 3.0], &p).unwrap();
        assert_eq!(total_folded_time(&f).to_f64(), 18.0);
    }

    #[test]
    fn loschmidt_single_insertion() {
        let p = natural(1e-3);
        let f = TimeFold::insertions(&[2.0], &p).unwrap();
        let lo = rho_l_leading(&f, &p).unwrap();
        assert_eq!(lo.terms().len(), 2);
        let expected = 1.0 + 2.5e-7 * 8f64.exp();
        assert!((lo.rho().to_f64() - expected).abs() < 1e-14);
    }

    #[test]
    fn precursor_single_insertion() {
        let p = natural(1e-3);
        let f = TimeFold::from_omega_t(1.0, 3.0, &[0.5], &p).unwrap();
        let lo = rho_p_leading(&f, &p).unwrap();
        assert_eq!(lo.terms().len(), 2);
        assert_eq!(lo.terms()[1].exponent_arg().to_f64(), 1.5);
        let expected = 4f64.exp() + 2.5e-7 * 6f64.exp();
        assert!((lo.rho().to_f64() / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn term_counts_and_budgets() {
        let p = natural(1e-3);
        for n in 0..=6 {
            let f = TimeFold::insertions(&vec![1.0; n], &p).unwrap();
            assert_eq!(rho_l_leading(&f, &p).unwrap().terms().len(), 3usize.pow(n as u32).div_ceil(2));
            assert_eq!(rho_p_leading(&f, &p).unwrap().terms().len(), 1 << n);
        }
        let f = TimeFold::insertions(&[1.0; 16], &p).unwrap();
        assert_eq!(rho_l_leading(&f, &p), Err(Error::ComplexityBudget { count: 16, limit: 15 }));
        let f = TimeFold::insertions(&[1.0; 41], &p).unwrap();
        assert!(matches!(rho_p_leading(&f, &p), Err(Error::ComplexityBudget { count: 41, limit: 40 })));
    }

    #[test]
    fn dominant_single_versus_pairs() {
        let p = natural(1e-3);
        let f = TimeFold::insertions(&[10.0, 1.0], &p).unwrap();
        let terms = rho_l_leading(&f, &p).unwrap().into_terms();
        let d = dominant_term(&terms, &p).unwrap();
        assert_eq!(d.term.subset(), [1]);
        assert!(!d.tie);
    }

    #[test]
    fn dominant_at_zero_times() {
        let p = natural(1e-3);
        let f = TimeFold::insertions(&[0.0, 0.0, 0.0], &p).unwrap();
        let d = dominant_term(rho_l_leading(&f, &p).unwrap().terms(), &p).unwrap();
        assert!(d.term.subset().is_empty());
        let d = dominant_term(rho_p_leading(&f, &p).unwrap().terms(), &p).unwrap();
        assert!(d.term.subset().is_empty());
    }

    #[test]
    fn dominant_tie_is_flagged() {
        let p = natural(1e-3);
        let f = TimeFold::insertions(&[5.0, 5.0], &p).unwrap();
        let d = dominant_term(rho_l_leading(&f, &p).unwrap().terms(), &p).unwrap();
        assert!(d.tie);
        assert_eq!(d.term.subset(), [1]);
    }

    #[test]
    fn switchback_examples() {
        let p = natural(1e-3);
        let f = TimeFold::from_omega_t(0.0, 7.0, &[], &p).unwrap();
        let s = switchback_complexity(&f, &p).unwrap();
        assert_eq!(s.complexity.to_f64(), 7.0);

        let f = TimeFold::from_omega_t(-20.0, -20.0, &[20.0, -20.0, 20.0], &p).unwrap();
        let s = switchback_complexity(&f, &p).unwrap();
        assert_eq!(s.folded_time.to_f64(), 160.0);
        let t_star = s.scrambling_time.to_f64();
        assert!((s.complexity.to_f64() - (160.0 - 6.0 * t_star)).abs() < 1e-12);
        assert!(!s.regime_warning());

        let f = TimeFold::from_omega_t(0.0, 0.0, &[1.0, 10.0], &p).unwrap();
        let s = switchback_complexity(&f, &p).unwrap();
        assert_eq!(s.short_legs, [0]);
    }

    #[test]
    fn harmonic_closed_form_limits() {
        let p = natural(0.0);
        assert_eq!(harmonic_rho_closed_form(&p.real(1.0), &p).to_f64(), 1.0);
        let p = natural(1e-3);
        for x in [0.0, 0.4, 2.0, 6.0] {
            let rho = harmonic_rho_closed_form(&p.time(x), &p).to_f64();
            assert!(rho > 1.0 && rho - 1.0 <= 3e-3, "{x}: {rho}");
        }
    }
}
