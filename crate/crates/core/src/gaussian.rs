//! One-mode Gaussian states in the covariance-matrix picture.
//!
//! A pure one-mode Gaussian state is fixed by its 2×2 covariance matrix `G`
//! over the dimensionless quadratures `(q·g, p/g)`. Gaussian unitaries act by
//! symplectic congruence `G → M G Mᵀ`, and everything the toolkit measures
//! (complexity, overlap) is a function of the larger eigenvalue `ρ` of the
//! relative covariance matrix `Δ = G_T G_R⁻¹`.

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::real::{Precision, Real};

/// Tolerance on `|det M − 1|` when accepting a user-supplied symplectic matrix.
pub const SYMPLECTIC_TOLERANCE: f64 = 1e-30;

/// A negative discriminant smaller than this fraction of `tr(Δ)²` is rounding
/// noise and is clamped to zero.
pub const DISCRIMINANT_TOLERANCE: f64 = 1e-20;

/// How far below 1 a `ρ` may sit before it is rejected.
pub const RHO_TOLERANCE: f64 = 1e-30;

/// Mass, frequency, perturbation and gate scale of the oscillator, in natural
/// units with ħ = 1, together with the working precision used for anything
/// derived from them.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorParams {
    mass: f64,
    omega: f64,
    delta_omega: f64,
    gate_scale: f64,
    precision: Precision,
}

/// The parameters lifted to [`Real`] at a common precision.
#[derive(Clone, Debug)]
pub(crate) struct Coefficients {
    pub m: Real,
    pub omega: Real,
    pub delta_omega: Real,
    /// `g²`
    pub g2: Real,
}

impl Coefficients {
    /// `ω + δω`
    pub fn perturbed_omega(&self) -> Real {
        &self.omega + &self.delta_omega
    }

    /// `g²/m`, the position/momentum scale of the propagators.
    pub fn a(&self) -> Real {
        &self.g2 / &self.m
    }
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, delta_omega: f64, gate_scale: f64) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("mass", mass)?;
        positive("omega", omega)?;
        positive("gate scale", gate_scale)?;
        if !(delta_omega.is_finite() && delta_omega >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "delta_omega must be non-negative and finite, got {delta_omega}"
            )));
        }
        Ok(OscillatorParams { mass, omega, delta_omega, gate_scale, precision: Precision::default() })
    }

    /// `m = ω = g = 1` with `δω = delta_ratio`.
    pub fn natural(delta_ratio: f64) -> Result<Self> {
        Self::new(1.0, 1.0, delta_ratio, 1.0)
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn with_delta_omega(&self, delta_omega: f64) -> Result<Self> {
        Self::new(self.mass, self.omega, delta_omega, self.gate_scale)
            .map(|p| p.with_precision(self.precision))
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    pub fn gate_scale(&self) -> f64 {
        self.gate_scale
    }

    /// `δω/ω`
    pub fn delta_ratio(&self) -> f64 {
        self.delta_omega / self.omega
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// `x` at the working precision.
    pub fn real(&self, x: f64) -> Real {
        Real::from_f64(x, self.precision)
    }

    /// Physical time for a dimensionless `ωt`.
    pub fn time(&self, omega_t: f64) -> Real {
        self.real(omega_t) / self.real(self.omega)
    }

    pub(crate) fn coefficients(&self) -> Coefficients {
        self.coefficients_at(self.precision)
    }

    pub(crate) fn coefficients_at(&self, prec: Precision) -> Coefficients {
        let g = Real::from_f64(self.gate_scale, prec);
        Coefficients {
            m: Real::from_f64(self.mass, prec),
            omega: Real::from_f64(self.omega, prec),
            delta_omega: Real::from_f64(self.delta_omega, prec),
            g2: g.square(),
        }
    }
}

/// Covariance matrix `[[xx, xp], [xp, pp]]` of a one-mode Gaussian state.
/// Symmetric by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CovMatrix {
    xx: Real,
    xp: Real,
    pp: Real,
}

impl CovMatrix {
    /// Validates positive definiteness: `xx > 0` and `det > 0`.
    pub fn new(xx: Real, xp: Real, pp: Real) -> Result<Self> {
        let g = CovMatrix { xx, xp, pp };
        if !g.xx.is_positive() {
            return Err(Error::InvalidCovariance(format!("G11 = {} is not positive", g.xx)));
        }
        if !g.det().is_positive() {
            return Err(Error::InvalidCovariance(format!("det G = {} is not positive", g.det())));
        }
        Ok(g)
    }

    pub(crate) fn new_unchecked(xx: Real, xp: Real, pp: Real) -> Self {
        CovMatrix { xx, xp, pp }
    }

    pub fn diag(xx: Real, pp: Real) -> Result<Self> {
        let z = Real::zero(xx.precision());
        Self::new(xx, z, pp)
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

    pub fn det(&self) -> Real {
        &self.xx * &self.pp - self.xp.square()
    }

    pub fn precision(&self) -> Precision {
        self.xx.precision().max(self.xp.precision()).max(self.pp.precision())
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2::new(self.xx.clone(), self.xp.clone(), self.xp.clone(), self.pp.clone())
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        Mat2::new(&self.pp / &det, -(&self.xp / &det), -(&self.xp / &det), &self.xx / &det)
    }
}

/// A 2×2 real matrix with unit determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct Symplectic(Mat2);

impl Symplectic {
    /// Accepts `m` when `|det m − 1| ≤ 10⁻³⁰`.
    pub fn new(m: Mat2) -> Result<Self> {
        let defect = (m.det() - Real::one(m.precision())).abs().to_f64();
        if defect > SYMPLECTIC_TOLERANCE {
            return Err(Error::NotSymplectic(defect));
        }
        Ok(Symplectic(m))
    }

    pub(crate) fn from_mat(m: Mat2) -> Self {
        Symplectic(m)
    }

    pub fn identity(prec: Precision) -> Self {
        Symplectic(Mat2::identity(prec))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat2 {
        self.0
    }

    pub fn det(&self) -> Real {
        self.0.det()
    }

    /// Exact inverse `[[d, −b], [−c, a]]`, valid because `det = 1`.
    pub fn inverse(&self) -> Symplectic {
        let m = &self.0;
        Symplectic(Mat2::new(m.a22.clone(), -&m.a12, -&m.a21, m.a11.clone()))
    }

    /// `self · other`: `other` acts first.
    pub fn then_after(&self, other: &Symplectic) -> Symplectic {
        Symplectic(&self.0 * &other.0)
    }
}

impl std::ops::Mul<&Symplectic> for &Symplectic {
    type Output = Symplectic;
    fn mul(self, rhs: &Symplectic) -> Symplectic {
        self.then_after(rhs)
    }
}

/// Ground state of the oscillator with mass `m` and frequency `ω`:
/// `diag(g²/(mω), mω/g²)`.
pub fn reference_covariance(params: &OscillatorParams) -> CovMatrix {
    let c = params.coefficients();
    let s = &c.g2 / (&c.m * &c.omega);
    let inv = Real::one(params.precision()) / &s;
    CovMatrix::new_unchecked(s, Real::zero(params.precision()), inv)
}

/// Ground state at frequency `2ω`: `diag(g²/(2mω), 2mω/g²)`. Reference for the
/// harmonic control experiment.
pub fn harmonic_reference_covariance(params: &OscillatorParams) -> CovMatrix {
    let c = params.coefficients();
    let two = Real::from_i64(2, params.precision());
    let s = &c.g2 / (two * &c.m * &c.omega);
    let inv = Real::one(params.precision()) / &s;
    CovMatrix::new_unchecked(s, Real::zero(params.precision()), inv)
}

/// `M G Mᵀ`, computed directly in symmetric form so the result is exactly
/// symmetric.
pub fn conjugate(g: &CovMatrix, m: &Symplectic) -> CovMatrix {
    let Mat2 { a11: a, a12: b, a21: c, a22: d } = m.matrix();
    let (x, y, z) = (&g.xx, &g.xp, &g.pp);
    let two = Real::from_i64(2, Precision::from_bits(64));
    let xx = a * a * x + &two * a * b * y + b * b * z;
    let xp = a * c * x + (a * d + b * c) * y + b * d * z;
    let pp = c * c * x + &two * c * d * y + d * d * z;
    CovMatrix::new_unchecked(xx, xp, pp)
}

/// `Δ = G_T G_R⁻¹`.
pub fn relative_covariance(target: &CovMatrix, reference: &CovMatrix) -> Mat2 {
    &target.to_mat2() * &reference.inverse()
}

/// The larger eigenvalue `ρ ≥ 1` of `Δ` from the exact radical
/// `½(Δ₁₁ + Δ₂₂ + √((Δ₁₁ − Δ₂₂)² + 4Δ₁₂Δ₂₁))`.
pub fn rho_exact(delta: &Mat2) -> Result<Real> {
    let tr = delta.trace();
    let diff = &delta.a11 - &delta.a22;
    let four = Real::from_i64(4, Precision::from_bits(64));
    let mut disc = diff.square() + four * &delta.a12 * &delta.a21;
    if disc.is_negative() {
        let band = tr.square().to_f64() * DISCRIMINANT_TOLERANCE;
        if disc.to_f64().abs() > band {
            return Err(Error::DegenerateSpectrum { discriminant: disc.to_f64() });
        }
        disc = Real::zero(disc.precision());
    }
    let two = Real::from_i64(2, Precision::from_bits(64));
    let rho = (tr + disc.sqrt()) / two;
    let one = Real::one(rho.precision());
    // A near-identity Δ can round to just under 1.
    Ok(if rho < one { one } else { rho })
}

fn check_rho(rho: &Real) -> Result<()> {
    let one = Real::one(rho.precision());
    if !rho.is_finite() || (&one - rho).to_f64() > RHO_TOLERANCE {
        return Err(Error::Domain(format!("rho = {rho} must be at least 1")));
    }
    Ok(())
}

/// Circuit complexity `½ log ρ`, identical for the F₁ and F₂ costs.
pub fn complexity(rho: &Real) -> Result<Real> {
    check_rho(rho)?;
    let half = Real::from_f64(0.5, Precision::from_bits(64));
    let c = half * rho.ln();
    Ok(if c.is_negative() { Real::zero(c.precision()) } else { c })
}

/// Overlap `|⟨ψ_R|ψ_T⟩|² = 2√ρ/(1 + ρ)`.
pub fn inner_product(rho: &Real) -> Result<Real> {
    check_rho(rho)?;
    let two = Real::from_i64(2, rho.precision());
    let one = Real::one(rho.precision());
    let i = two * rho.sqrt() / (one + rho);
    Ok(if i > Real::one(i.precision()) { Real::one(i.precision()) } else { i })
}

/// `−log I`, evaluated as `½ log ρ − log 2 + log(1 + 1/ρ)` so the large-`ρ`
/// tail does not cancel.
pub fn neg_log_inner(rho: &Real) -> Result<Real> {
    check_rho(rho)?;
    let p = rho.precision();
    let one = Real::one(p);
    let half = Real::from_f64(0.5, p);
    let v = half * rho.ln() - Real::ln2(p) + (&one + &one / rho).ln();
    Ok(if v.is_negative() { Real::zero(p) } else { v })
}
