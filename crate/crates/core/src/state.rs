//! Covariances of the Loschmidt-echo and precursor states.

use crate::error::{Error, Result};
use crate::evolution::{harmonic_propagator, inverted_propagator, kick, loschmidt_fold, precursor_kick};
use crate::gaussian::{
    conjugate, harmonic_reference_covariance, reference_covariance, relative_covariance, rho_exact, CovMatrix,
    OscillatorParams, Symplectic,
};
use crate::real::{Precision, Real};

/// Guard bits on top of the exponential headroom of a fold.
const FOLD_GUARD_BITS: usize = 64;

/// Insertion times `t_1, …, t_N` together with the outer times `t_s`, `t_f`.
///
/// Times are physical (not multiplied by `ω`) and may be negative. Loschmidt
/// folds ignore the outer times unless built with
/// [`loschmidt_covariance_outer`].
#[derive(Clone, Debug, PartialEq)]
pub struct TimeFold {
    t_s: Real,
    t_f: Real,
    times: Vec<Real>,
}

impl TimeFold {
    pub fn new(t_s: Real, t_f: Real, times: Vec<Real>) -> Self {
        TimeFold { t_s, t_f, times }
    }

    /// Builds a fold from dimensionless `ωt` values.
    pub fn from_omega_t(t_s: f64, t_f: f64, times: &[f64], params: &OscillatorParams) -> Result<Self> {
        for &x in times.iter().chain([&t_s, &t_f]) {
            if !x.is_finite() {
                return Err(Error::InvalidParams(format!("time {x} is not finite")));
            }
        }
        Ok(TimeFold::new(
            params.time(t_s),
            params.time(t_f),
            times.iter().map(|&x| params.time(x)).collect(),
        ))
    }

    /// A fold with `t_s = t_f = 0`.
    pub fn insertions(times: &[f64], params: &OscillatorParams) -> Result<Self> {
        Self::from_omega_t(0.0, 0.0, times, params)
    }

    pub fn t_s(&self) -> &Real {
        &self.t_s
    }

    pub fn t_f(&self) -> &Real {
        &self.t_f
    }

    pub fn times(&self) -> &[Real] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn abs_sum(&self) -> f64 {
        self.times.iter().map(|t| t.to_f64().abs()).sum()
    }
}

/// Working precision for a fold whose product grows like `e^{growth}`.
///
/// Entries of the composed symplectic matrix reach `e^{growth}` and those of
/// `G_T` reach `e^{2·growth}`; `det Δ = 1` is then a cancellation of size
/// `e^{4·growth}`, which the headroom absorbs so that the determinant survives
/// at the requested digits.
fn fold_precision(params: &OscillatorParams, growth: f64) -> Precision {
    params.precision().widen(Precision::headroom_bits(4.0 * growth) + FOLD_GUARD_BITS)
}

fn fold_growth(fold: &TimeFold, params: &OscillatorParams, with_outer: bool) -> f64 {
    let w = params.omega() + params.delta_omega();
    let outer = if with_outer { fold.t_s.to_f64().abs() + fold.t_f.to_f64().abs() } else { 0.0 };
    w * (outer + 2.0 * fold.abs_sum())
}

/// Symplectic matrix of the Loschmidt operator `∏_{j=N..1} e^{iH′t_j}e^{−iHt_j}`.
pub fn loschmidt_symplectic(fold: &TimeFold, params: &OscillatorParams) -> Symplectic {
    let params = params.clone().with_precision(fold_precision(params, fold_growth(fold, params, false)));
    fold.times
        .iter()
        .fold(Symplectic::identity(params.precision()), |acc, t| &loschmidt_fold(t, &params) * &acc)
}

/// Symplectic matrix of `e^{−iHt_f} [∏_{j=N..1} Ŵ(t_j)] e^{iHt_s}`.
pub fn precursor_symplectic(fold: &TimeFold, params: &OscillatorParams) -> Symplectic {
    let params = params.clone().with_precision(fold_precision(params, fold_growth(fold, params, true)));
    let start = inverted_propagator(&-&fold.t_s, &params);
    let body = fold.times.iter().fold(start, |acc, t| &precursor_kick(t, &params) * &acc);
    &inverted_propagator(&fold.t_f, &params) * &body
}

/// `G_L = U G_R Uᵀ` for the Loschmidt operator of `fold`. Returned at the
/// widened working precision of the fold.
pub fn loschmidt_covariance(fold: &TimeFold, params: &OscillatorParams) -> CovMatrix {
    let u = loschmidt_symplectic(fold, params);
    let reference = reference_covariance(&params.clone().with_precision(u.matrix().precision()));
    conjugate(&reference, &u)
}

/// As [`loschmidt_covariance`], additionally sandwiched by `e^{−iHt_f}` and
/// `e^{iHt_s}`.
pub fn loschmidt_covariance_outer(fold: &TimeFold, params: &OscillatorParams) -> CovMatrix {
    let prec = fold_precision(params, fold_growth(fold, params, true));
    let params = params.clone().with_precision(prec);
    let inner = loschmidt_symplectic(fold, &params);
    let u = &(&inverted_propagator(&fold.t_f, &params) * &inner) * &inverted_propagator(&-&fold.t_s, &params);
    conjugate(&reference_covariance(&params.with_precision(u.matrix().precision())), &u)
}

/// `G_P = U G_R Uᵀ` for the precursor operator of `fold`.
///
/// A fold with no insertions gives the plain one-way evolution
/// `e^{−iH(t_f − t_s)}`.
pub fn precursor_covariance(fold: &TimeFold, params: &OscillatorParams) -> CovMatrix {
    let u = precursor_symplectic(fold, params);
    let reference = reference_covariance(&params.clone().with_precision(u.matrix().precision()));
    conjugate(&reference, &u)
}

/// The harmonic control state `e^{iH_h t₁} e^{−(i/2)mδω q²} e^{−iH_h t₁}`
/// applied to the ground state at frequency `2ω`.
pub fn harmonic_precursor_covariance(t1: &Real, params: &OscillatorParams) -> CovMatrix {
    let params = params.clone().with_precision(params.precision().widen(FOLD_GUARD_BITS));
    let u = &(&harmonic_propagator(&-t1, &params) * &kick(&params)) * &harmonic_propagator(t1, &params);
    conjugate(&harmonic_reference_covariance(&params), &u)
}

fn rho_against(target: &CovMatrix, reference: CovMatrix) -> Result<Real> {
    rho_exact(&relative_covariance(target, &reference))
}

/// `ρ` of `G_L` relative to the ground state, computed at the working
/// precision of the fold.
pub fn loschmidt_rho(fold: &TimeFold, params: &OscillatorParams) -> Result<Real> {
    let g = loschmidt_covariance(fold, params);
    rho_against(&g, reference_covariance(&params.clone().with_precision(g.precision())))
}

/// `ρ` of `G_P` relative to the ground state.
pub fn precursor_rho(fold: &TimeFold, params: &OscillatorParams) -> Result<Real> {
    let g = precursor_covariance(fold, params);
    rho_against(&g, reference_covariance(&params.clone().with_precision(g.precision())))
}

/// `ρ` of the harmonic control state relative to its own reference, the
/// ground state at frequency `2ω`.
pub fn harmonic_precursor_rho(t1: &Real, params: &OscillatorParams) -> Result<Real> {
    let g = harmonic_precursor_covariance(t1, params);
    rho_against(&g, harmonic_reference_covariance(&params.clone().with_precision(g.precision())))
}
