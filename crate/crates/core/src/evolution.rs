//! Symplectic propagators for the inverted and ordinary oscillators.
//!
//! Sign convention, fixed here for every caller: `e^{−iHt}` is represented by
//! [`inverted_propagator`]`(t)` and `e^{iH′t}` by [`perturbed_propagator`]`(t)`,
//! where `H` is the inverted oscillator and `H′` the same with `ω → ω + δω`.
//! Operators compose right to left, so the earliest one is the right-most
//! factor.
//!
//! Each constructor widens the working precision by the exponential growth of
//! its entries. An entry of size `e^{ωt}` then still carries the requested
//! digits after the `cosh² − sinh²` cancellation in products and
//! determinants.

use crate::gaussian::{Coefficients, OscillatorParams, Symplectic};
use crate::linalg::Mat2;
use crate::real::{Precision, Real};

/// Quadratic-form coefficients `k_ab` of a Gaussian unitary
/// `exp(−(i/2) k_ab ξᵃξᵇ)`. Symmetric by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    xx: Real,
    xp: Real,
    pp: Real,
}

impl Generator {
    pub fn new(xx: Real, xp: Real, pp: Real) -> Self {
        Generator { xx, xp, pp }
    }

    pub fn zero(prec: Precision) -> Self {
        Generator::new(Real::zero(prec), Real::zero(prec), Real::zero(prec))
    }

    pub fn xx(&self) -> &Real {
        &self.xx
    }

    pub fn xp(&self) -> &Real {
        &self.xp
    }

    pub fn pp(&self) -> &Real {
        &self.pp
    }

    fn precision(&self) -> Precision {
        self.xx.precision().max(self.xp.precision()).max(self.pp.precision())
    }
}

/// `k(t) = diag(−ω²mt/g², g²t/m)`, the generator of `e^{−iHt}`.
pub fn inverted_generator(t: &Real, params: &OscillatorParams) -> Generator {
    let c = params.coefficients();
    let xx = -(c.omega.square() * &c.m * t / &c.g2);
    let pp = &c.g2 * t / &c.m;
    Generator::new(xx, Real::zero(params.precision()), pp)
}

/// `k′(t) = diag((ω+δω)²mt/g², −g²t/m)`, the generator of `e^{iH′t}`.
pub fn perturbed_generator(t: &Real, params: &OscillatorParams) -> Generator {
    let c = params.coefficients();
    let xx = c.perturbed_omega().square() * &c.m * t / &c.g2;
    let pp = -(&c.g2 * t / &c.m);
    Generator::new(xx, Real::zero(params.precision()), pp)
}

/// `k_h(t) = diag(ω²mt/g², g²t/m)`, the generator of `e^{−iH_h t}`.
pub fn harmonic_generator(t: &Real, params: &OscillatorParams) -> Generator {
    let c = params.coefficients();
    let xx = c.omega.square() * &c.m * t / &c.g2;
    let pp = &c.g2 * t / &c.m;
    Generator::new(xx, Real::zero(params.precision()), pp)
}

/// `w = diag(mδω/g², 0)`, the generator of the kick `e^{−(i/2)mδω q²}`.
pub fn kick_generator(params: &OscillatorParams) -> Generator {
    let c = params.coefficients();
    let xx = &c.m * &c.delta_omega / &c.g2;
    Generator::new(xx, Real::zero(params.precision()), Real::zero(params.precision()))
}

/// `M = e^K` with `K = Ωk`, `Ω = [[0, 1], [−1, 0]]`.
///
/// `K` is traceless, so `K² = −det(K)·1` and the exponential is
/// `cosh(s)·1 + sinh(s)/s·K` with `s² = −det K` (the trigonometric branch when
/// `s² < 0`, and `1 + K` when `K` is nilpotent).
pub fn exp_generator(k: &Generator) -> Symplectic {
    // K = [[xp, pp], [−xx, −xp]] and −det K = xp² − xx·pp.
    let estimate = (k.xp.to_f64().powi(2) - k.xx.to_f64() * k.pp.to_f64()).abs().sqrt();
    let prec = k.precision().widen(Precision::headroom_bits(2.0 * estimate));
    let xx = k.xx.with_precision(prec);
    let xp = k.xp.with_precision(prec);
    let pp = k.pp.with_precision(prec);
    let s2 = xp.square() - &xx * &pp;

    let kmat = Mat2::new(xp.clone(), pp.clone(), -&xx, -&xp);
    let one = Real::one(prec);
    let (diag, coeff) = if s2.is_zero() {
        (one.clone(), one)
    } else if s2.is_positive() {
        let s = s2.sqrt();
        (s.cosh(), s.sinh() / &s)
    } else {
        let s = (-s2).sqrt();
        (s.cos(), s.sin() / &s)
    };
    let m = kmat.scale(&coeff).add(&Mat2::diag(diag.clone(), diag));
    Symplectic::from_mat(m)
}

/// Precision for a propagator whose entries grow like `e^{growth}`.
fn widened(params: &OscillatorParams, growth: f64) -> Precision {
    params.precision().widen(Precision::headroom_bits(2.0 * growth))
}

fn hyperbolic_flow(c: &Coefficients, rate: &Real, t: &Real, sign: &Real) -> Mat2 {
    let x = rate * t;
    let (ch, sh) = (x.cosh(), x.sinh());
    let a = c.a();
    let upper = sign * &a / rate * &sh;
    let lower = sign * rate / &a * &sh;
    Mat2::new(ch.clone(), upper, lower, ch)
}

/// `M(t) = [[cosh ωt, (g²/mω) sinh ωt], [(mω/g²) sinh ωt, cosh ωt]]`,
/// the action of `e^{−iHt}` on `(q·g, p/g)`.
pub fn inverted_propagator(t: &Real, params: &OscillatorParams) -> Symplectic {
    let prec = widened(params, params.omega() * t.to_f64().abs());
    let c = params.coefficients_at(prec);
    let t = t.with_precision(prec);
    Symplectic::from_mat(hyperbolic_flow(&c, &c.omega, &t, &Real::one(prec)))
}

/// `M′(t)`, the action of `e^{iH′t}`: the inverted flow at frequency
/// `ω + δω` run backwards, `[[cosh ω′t, −(g²/mω′) sinh ω′t], [−(mω′/g²) sinh ω′t, cosh ω′t]]`.
pub fn perturbed_propagator(t: &Real, params: &OscillatorParams) -> Symplectic {
    let prec = widened(params, (params.omega() + params.delta_omega()) * t.to_f64().abs());
    let c = params.coefficients_at(prec);
    let t = t.with_precision(prec);
    Symplectic::from_mat(hyperbolic_flow(&c, &c.perturbed_omega(), &t, &Real::from_i64(-1, prec)))
}

/// `M_h(t) = [[cos ωt, (g²/mω) sin ωt], [−(mω/g²) sin ωt, cos ωt]]`, the
/// action of `e^{−iH_h t}` for the ordinary oscillator.
pub fn harmonic_propagator(t: &Real, params: &OscillatorParams) -> Symplectic {
    let c = params.coefficients();
    let x = &c.omega * t;
    let (cs, sn) = (x.cos(), x.sin());
    let a = c.a();
    let upper = &a / &c.omega * &sn;
    let lower = -(&c.omega / &a * &sn);
    Symplectic::from_mat(Mat2::new(cs.clone(), upper, lower, cs))
}

/// The kick `W = [[1, 0], [−mδω/g², 1]]` of `e^{−(i/2)mδω q²}`.
pub fn kick(params: &OscillatorParams) -> Symplectic {
    let p = params.precision();
    let c = params.coefficients();
    let shear = -(&c.m * &c.delta_omega / &c.g2);
    Symplectic::from_mat(Mat2::new(Real::one(p), Real::zero(p), shear, Real::one(p)))
}

/// One Loschmidt fold `M′(t)·M(t)`, the action of `e^{iH′t}e^{−iHt}`.
///
/// Expanded with the hyperbolic addition formulas so the `e^{2ωt}` parts
/// cancel analytically:
///
/// ```text
/// F₁₁ = cosh δωt + (δω/ω′) s′s        F₁₂ = a(δω s′c − ω′ sinh δωt)/(ωω′)
/// F₂₁ = −(ω sinh δωt + δω s′c)/a      F₂₂ = cosh δωt − (δω/ω) s′s
/// ```
///
/// with `c, s = cosh ωt, sinh ωt`, `s′ = sinh ω′t` and `a = g²/m`. At
/// `δω = 0` this is the identity exactly.
pub fn loschmidt_fold(t: &Real, params: &OscillatorParams) -> Symplectic {
    let w_max = params.omega() + params.delta_omega();
    let prec = params.precision().widen(Precision::headroom_bits(4.0 * w_max * t.to_f64().abs()));
    let c = params.coefficients_at(prec);
    let t = t.with_precision(prec);
    let wp = c.perturbed_omega();
    let dw = &c.delta_omega;
    let a = c.a();

    let x = &c.omega * &t;
    let (ch, sh) = (x.cosh(), x.sinh());
    let sh_p = (&wp * &t).sinh();
    let d = dw * &t;
    let (ch_d, sh_d) = (d.cosh(), d.sinh());

    let ss = &sh_p * &sh;
    let sc = &sh_p * &ch;
    let f11 = &ch_d + dw / &wp * &ss;
    let f22 = &ch_d - dw / &c.omega * &ss;
    let f12 = &a * (dw * &sc - &wp * &sh_d) / (&c.omega * &wp);
    let f21 = -((&c.omega * &sh_d + dw * &sc) / &a);
    Symplectic::from_mat(Mat2::new(f11, f12, f21, f22))
}

/// The Heisenberg-picture kick `M(−t)·W·M(t)`, the action of
/// `Ŵ(t) = e^{iHt} e^{−(i/2)mδω q²} e^{−iHt}`.
///
/// `W − 1` is nilpotent, so the conjugate is `1 + μ·N(t)` with `μ = mδω/g²`
/// and
///
/// ```text
/// N(t) = [[ a s c/ω, (a s/ω)² ], [ −c², −a s c/ω ]]
/// ```
///
/// in the notation of [`loschmidt_fold`].
pub fn precursor_kick(t: &Real, params: &OscillatorParams) -> Symplectic {
    let prec = params.precision().widen(Precision::headroom_bits(4.0 * params.omega() * t.to_f64().abs()));
    let c = params.coefficients_at(prec);
    let t = t.with_precision(prec);
    let mu = &c.m * &c.delta_omega / &c.g2;
    let x = &c.omega * &t;
    let (ch, sh) = (x.cosh(), x.sinh());
    let b = c.a() / &c.omega * &sh;
    let bc = &mu * &b * &ch;
    let one = Real::one(prec);
    let n11 = &one + &bc;
    let n12 = &mu * b.square();
    let n21 = -(&mu * ch.square());
    let n22 = &one - &bc;
    Symplectic::from_mat(Mat2::new(n11, n12, n21, n22))
}
