//! Small exact linear algebra over `Scalar`: fixed-size vectors and
//! matrices in dimensions 2 and 3.

use crate::error::{GeomError, Result};
use crate::valfield::Scalar;

pub type Vec3 = [Scalar; 3];
pub type Vec2 = [Scalar; 2];

pub fn vec3_is_zero(v: &Vec3) -> bool {
    v.iter().all(|c| c.is_zero())
}

pub fn vec3_add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0].add(&b[0]), a[1].add(&b[1]), a[2].add(&b[2])]
}

pub fn vec3_sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0].sub(&b[0]), a[1].sub(&b[1]), a[2].sub(&b[2])]
}

pub fn vec3_scale(s: &Scalar, v: &Vec3) -> Vec3 {
    [s.mul(&v[0]), s.mul(&v[1]), s.mul(&v[2])]
}

pub fn dot3(a: &Vec3, b: &Vec3) -> Scalar {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

pub fn det2(a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> Scalar {
    a.mul(d).sub(&b.mul(c))
}

/// Column-major 3x3 matrix: `cols[j]` is the j-th column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat3 {
    pub cols: [Vec3; 3],
}

impl Mat3 {
    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Mat3 {
        Mat3 { cols: [c0, c1, c2] }
    }

    pub fn identity_like(sample: &Scalar) -> Mat3 {
        let z = sample.zero_like();
        let o = sample.one_like();
        Mat3::from_cols(
            [o.clone(), z.clone(), z.clone()],
            [z.clone(), o.clone(), z.clone()],
            [z.clone(), z, o],
        )
    }

    pub fn at(&self, row: usize, col: usize) -> &Scalar {
        &self.cols[col][row]
    }

    pub fn row(&self, row: usize) -> Vec3 {
        [
            self.cols[0][row].clone(),
            self.cols[1][row].clone(),
            self.cols[2][row].clone(),
        ]
    }

    pub fn det(&self) -> Scalar {
        dot3(&self.cols[0], &cross3(&self.cols[1], &self.cols[2]))
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3::from_cols(self.row(0), self.row(1), self.row(2))
    }

    /// Matrix product self * rhs.
    pub fn mul(&self, rhs: &Mat3) -> Mat3 {
        let col = |j: usize| self.apply(&rhs.cols[j]);
        Mat3::from_cols(col(0), col(1), col(2))
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        vec3_add(
            &vec3_add(
                &vec3_scale(&v[0], &self.cols[0]),
                &vec3_scale(&v[1], &self.cols[1]),
            ),
            &vec3_scale(&v[2], &self.cols[2]),
        )
    }

    /// Adjugate (transpose of the cofactor matrix), so that
    /// `self * adjugate = det * I`.
    pub fn adjugate(&self) -> Mat3 {
        let c0 = cross3(&self.cols[1], &self.cols[2]);
        let c1 = cross3(&self.cols[2], &self.cols[0]);
        let c2 = cross3(&self.cols[0], &self.cols[1]);
        // Rows of the adjugate are these cross products.
        Mat3::from_cols(
            [c0[0].clone(), c1[0].clone(), c2[0].clone()],
            [c0[1].clone(), c1[1].clone(), c2[1].clone()],
            [c0[2].clone(), c1[2].clone(), c2[2].clone()],
        )
    }

    pub fn inverse(&self) -> Result<Mat3> {
        let det = self.det();
        if det.is_zero() {
            return Err(GeomError::SingularMatrix);
        }
        let inv_det = det.inv()?;
        let adj = self.adjugate();
        Ok(Mat3::from_cols(
            vec3_scale(&inv_det, &adj.cols[0]),
            vec3_scale(&inv_det, &adj.cols[1]),
            vec3_scale(&inv_det, &adj.cols[2]),
        ))
    }

    /// Solve self * x = b exactly.
    pub fn solve(&self, b: &Vec3) -> Result<Vec3> {
        Ok(self.inverse()?.apply(b))
    }
}

/// Column-major 2x2 matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub cols: [Vec2; 2],
}

impl Mat2 {
    pub fn from_cols(c0: Vec2, c1: Vec2) -> Mat2 {
        Mat2 { cols: [c0, c1] }
    }

    pub fn at(&self, row: usize, col: usize) -> &Scalar {
        &self.cols[col][row]
    }

    pub fn det(&self) -> Scalar {
        det2(
            &self.cols[0][0],
            &self.cols[1][0],
            &self.cols[0][1],
            &self.cols[1][1],
        )
    }

    pub fn solve(&self, b: &Vec2) -> Result<Vec2> {
        let det = self.det();
        if det.is_zero() {
            return Err(GeomError::SingularMatrix);
        }
        let x0 = det2(&b[0], &self.cols[1][0], &b[1], &self.cols[1][1]).div(&det)?;
        let x1 = det2(&self.cols[0][0], &b[0], &self.cols[0][1], &b[1]).div(&det)?;
        Ok([x0, x1])
    }
}

pub fn vec2_sub(a: &Vec2, b: &Vec2) -> Vec2 {
    [a[0].sub(&b[0]), a[1].sub(&b[1])]
}

pub fn vec2_scale(s: &Scalar, v: &Vec2) -> Vec2 {
    [s.mul(&v[0]), s.mul(&v[1])]
}

pub fn vec2_is_zero(v: &Vec2) -> bool {
    v[0].is_zero() && v[1].is_zero()
}
