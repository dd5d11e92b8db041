//! Dense 2×2 matrices over [`Real`].

use std::ops::Mul;

use crate::real::{Precision, Real};

/// A general 2×2 real matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2 {
    pub a11: Real,
    pub a12: Real,
    pub a21: Real,
    pub a22: Real,
}

impl Mat2 {
    pub fn new(a11: Real, a12: Real, a21: Real, a22: Real) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn from_f64(rows: [[f64; 2]; 2], prec: Precision) -> Self {
        Mat2::new(
            Real::from_f64(rows[0][0], prec),
            Real::from_f64(rows[0][1], prec),
            Real::from_f64(rows[1][0], prec),
            Real::from_f64(rows[1][1], prec),
        )
    }

    pub fn identity(prec: Precision) -> Self {
        Mat2::new(Real::one(prec), Real::zero(prec), Real::zero(prec), Real::one(prec))
    }

    pub fn diag(d1: Real, d2: Real) -> Self {
        let z = Real::zero(d1.precision().max(d2.precision()));
        Mat2::new(d1, z.clone(), z, d2)
    }

    pub fn precision(&self) -> Precision {
        self.a11
            .precision()
            .max(self.a12.precision())
            .max(self.a21.precision())
            .max(self.a22.precision())
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a11.clone(), self.a21.clone(), self.a12.clone(), self.a22.clone())
    }

    pub fn det(&self) -> Real {
        &self.a11 * &self.a22 - &self.a12 * &self.a21
    }

    pub fn trace(&self) -> Real {
        &self.a11 + &self.a22
    }

    pub fn scale(&self, s: &Real) -> Mat2 {
        Mat2::new(s * &self.a11, s * &self.a12, s * &self.a21, s * &self.a22)
    }

    pub fn add(&self, other: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a11 + &other.a11,
            &self.a12 + &other.a12,
            &self.a21 + &other.a21,
            &self.a22 + &other.a22,
        )
    }

    /// Inverse via the adjugate. `None` when the determinant is exactly zero.
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Mat2::new(
            &self.a22 / &det,
            -(&self.a12 / &det),
            -(&self.a21 / &det),
            &self.a11 / &det,
        ))
    }

    pub fn entries(&self) -> [&Real; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> Real {
        let [a, b, c, d] = self.entries();
        a.abs().max(b.abs()).max(c.abs()).max(d.abs())
    }

    /// `max |self − other| / max |other|`, the norm-wise relative distance.
    pub fn rel_diff_max(&self, other: &Mat2) -> f64 {
        let diff = Mat2::new(
            &self.a11 - &other.a11,
            &self.a12 - &other.a12,
            &self.a21 - &other.a21,
            &self.a22 - &other.a22,
        );
        let scale = other.max_abs();
        if scale.is_zero() {
            diff.max_abs().to_f64()
        } else {
            (diff.max_abs() / scale).to_f64()
        }
    }

    /// Largest entrywise relative distance; zero entries of `other` are
    /// compared absolutely.
    pub fn rel_diff_entrywise(&self, other: &Mat2) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| a.rel_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        [
            [self.a11.to_f64(), self.a12.to_f64()],
            [self.a21.to_f64(), self.a22.to_f64()],
        ]
    }
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn mul(self, r: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a11 * &r.a11 + &self.a12 * &r.a21,
            &self.a11 * &r.a12 + &self.a12 * &r.a22,
            &self.a21 * &r.a11 + &self.a22 * &r.a21,
            &self.a21 * &r.a12 + &self.a22 * &r.a22,
        )
    }
}

impl Mul<Mat2> for Mat2 {
    type Output = Mat2;
    fn mul(self, r: Mat2) -> Mat2 {
        &self * &r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_shear() {
        let p = Precision::default();
        let m = Mat2::from_f64([[1.0, 0.0], [-0.25, 1.0]], p);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat2::identity(p));
        assert!(Mat2::from_f64([[1.0, 2.0], [2.0, 4.0]], p).inverse().is_none());
    }

    #[test]
    fn product_and_transpose() {
        let p = Precision::default();
        let a = Mat2::from_f64([[1.0, 2.0], [3.0, 4.0]], p);
        let b = Mat2::from_f64([[0.0, 1.0], [-1.0, 0.0]], p);
        assert_eq!((&a * &b).to_f64(), [[-2.0, 1.0], [-4.0, 3.0]]);
        assert_eq!(a.transpose().to_f64(), [[1.0, 3.0], [2.0, 4.0]]);
        assert_eq!(a.det().to_f64(), -2.0);
        assert_eq!(a.trace().to_f64(), 5.0);
    }
}
