//! The model flat A = R^3 / R(1,1,1) with Weyl group S_3.
//!
//! Vectors are stored as sum-zero rational triples. Simple roots are
//! `a1(v) = v1 - v2`, `a2(v) = v2 - v3`, with `a3 = -a1 - a2`, and the inner
//! product is normalized so that the simple roots have unit norm: the
//! distance between the hyperplanes `a = 0` and `a = 1` is 1, realized by
//! `norm_sq(v) = 2 * sum(v_i^2)`.

use num::{BigInt, BigRational, Signed, Zero};

/// Element of the model flat, coordinates summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatVector {
    coords: [BigRational; 3],
}

pub fn rat_i64(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl FlatVector {
    /// Projects an arbitrary triple to its sum-zero representative.
    pub fn new(coords: [BigRational; 3]) -> FlatVector {
        let third = rat(1, 3);
        let mean = (&coords[0] + &coords[1] + &coords[2]) * third;
        FlatVector {
            coords: [
                &coords[0] - &mean,
                &coords[1] - &mean,
                &coords[2] - &mean,
            ],
        }
    }

    pub fn zero() -> FlatVector {
        FlatVector {
            coords: [BigRational::zero(), BigRational::zero(), BigRational::zero()],
        }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> FlatVector {
        FlatVector::new([rat_i64(a), rat_i64(b), rat_i64(c)])
    }

    pub fn coords(&self) -> &[BigRational; 3] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &FlatVector) -> FlatVector {
        FlatVector {
            coords: [
                &self.coords[0] + &rhs.coords[0],
                &self.coords[1] + &rhs.coords[1],
                &self.coords[2] + &rhs.coords[2],
            ],
        }
    }

    pub fn sub(&self, rhs: &FlatVector) -> FlatVector {
        FlatVector {
            coords: [
                &self.coords[0] - &rhs.coords[0],
                &self.coords[1] - &rhs.coords[1],
                &self.coords[2] - &rhs.coords[2],
            ],
        }
    }

    pub fn neg(&self) -> FlatVector {
        FlatVector {
            coords: [-&self.coords[0], -&self.coords[1], -&self.coords[2]],
        }
    }

    pub fn scale(&self, s: &BigRational) -> FlatVector {
        FlatVector {
            coords: [&self.coords[0] * s, &self.coords[1] * s, &self.coords[2] * s],
        }
    }

    /// The three root values (a1, a2, a3); their sum is identically zero.
    pub fn roots(&self) -> [BigRational; 3] {
        [
            &self.coords[0] - &self.coords[1],
            &self.coords[1] - &self.coords[2],
            &self.coords[2] - &self.coords[0],
        ]
    }

    /// Simple-root coordinates (a1(v), a2(v)).
    pub fn simple_root_coords(&self) -> (BigRational, BigRational) {
        let r = self.roots();
        (r[0].clone(), r[1].clone())
    }

    /// Projection modulo the Weyl group: coordinates sorted decreasing.
    pub fn weyl_type(&self) -> FlatVector {
        let mut c = self.coords.clone();
        c.sort_by(|a, b| b.cmp(a));
        FlatVector { coords: c }
    }

    /// In the unit-root normalization, `norm_sq(v) = 2 * sum(v_i^2)`.
    pub fn norm_sq(&self) -> BigRational {
        let s: BigRational = self.coords.iter().map(|c| c * c).sum();
        s * rat_i64(2)
    }

    pub fn norm_approx(&self) -> f64 {
        let s = self.norm_sq();
        let num = s.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
        let den = s.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
        (num / den).sqrt()
    }

    /// Whether the coordinates are decreasing, i.e. the vector lies in the
    /// closed model Weyl chamber.
    pub fn in_closed_chamber(&self) -> bool {
        self.coords[0] >= self.coords[1] && self.coords[1] >= self.coords[2]
    }

    pub fn singularity(&self) -> Singularity {
        let w = self.weyl_type();
        let c = &w.coords;
        if c[0].is_zero() && c[1].is_zero() && c[2].is_zero() {
            Singularity::Zero
        } else if c[0] == c[1] && c[1] == c[2] {
            unreachable!("sum-zero with equal coordinates is zero")
        } else if c[1] == c[2] {
            Singularity::SingularType1
        } else if c[0] == c[1] {
            Singularity::SingularType2
        } else {
            Singularity::Regular
        }
    }
}

/// Inverse of `simple_root_coords`: the sum-zero vector with the given
/// simple-root values.
pub fn from_src(a1: &BigRational, a2: &BigRational) -> FlatVector {
    let third = rat(1, 3);
    let two = rat_i64(2);
    let v1 = (&two * a1 + a2) * &third;
    let v2 = (a2 - a1) * &third;
    let v3 = -(a1 + &two * a2) * &third;
    FlatVector { coords: [v1, v2, v3] }
}

pub fn from_src_ints(a1: i64, a2: i64) -> FlatVector {
    from_src(&rat_i64(a1), &rat_i64(a2))
}

/// Direction class of a nonzero flat vector (or a boundary point label).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Singularity {
    Zero,
    Regular,
    /// Projects to the ray of `[e1]`: a point of the plane at infinity.
    SingularType1,
    /// Projects to the ray of `[e1+e2]`: a line of the plane at infinity.
    SingularType2,
}

/// Sum-zero class of the standard basis vector `e_i` (i in 0..3).
pub fn basis_class(i: usize) -> FlatVector {
    let mut coords = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
    coords[i] = rat_i64(1);
    FlatVector::new(coords)
}

pub fn max_rat(a: &BigRational, b: &BigRational) -> BigRational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn pos_part(a: &BigRational) -> BigRational {
    max_rat(a, &BigRational::zero())
}

pub fn neg_part(a: &BigRational) -> BigRational {
    pos_part(&-a.clone())
}

pub fn rat_abs(a: &BigRational) -> BigRational {
    a.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_examples() {
        assert_eq!(
            FlatVector::zero().roots(),
            [rat_i64(0), rat_i64(0), rat_i64(0)]
        );
        let v = FlatVector::from_ints(1, 0, -1);
        assert_eq!(v.roots(), [rat_i64(1), rat_i64(1), rat_i64(-2)]);
        let e1 = basis_class(0);
        assert_eq!(e1.roots(), [rat_i64(1), rat_i64(0), rat_i64(-1)]);
        let sum: BigRational = v.roots().iter().sum();
        assert!(sum.is_zero());
    }

    #[test]
    fn simple_root_coords_and_inverse() {
        assert_eq!(
            FlatVector::zero().simple_root_coords(),
            (rat_i64(0), rat_i64(0))
        );
        let v = from_src_ints(-1, 1);
        assert_eq!(v.simple_root_coords(), (rat_i64(-1), rat_i64(1)));
        let e2 = basis_class(1);
        assert_eq!(e2.simple_root_coords(), (rat_i64(-1), rat_i64(1)));
        assert_eq!(v, e2);
    }

    #[test]
    fn weyl_type_examples() {
        assert_eq!(FlatVector::zero().weyl_type(), FlatVector::zero());
        assert_eq!(
            FlatVector::from_ints(-1, 0, 1).weyl_type(),
            FlatVector::from_ints(1, 0, -1)
        );
        let v = FlatVector::from_ints(1, 1, -2);
        assert_eq!(v.weyl_type(), v);
        // Idempotent.
        assert_eq!(v.weyl_type().weyl_type(), v.weyl_type());
    }

    #[test]
    fn norm_sq_examples() {
        assert!(FlatVector::zero().norm_sq().is_zero());
        // The perpendicular foot of the wall a1 = 1 has norm 1: this pins the
        // unit-distance normalization between root hyperplanes.
        let foot = FlatVector::new([rat(1, 2), rat(-1, 2), rat_i64(0)]);
        assert_eq!(foot.norm_sq(), rat_i64(1));
        assert_eq!(FlatVector::from_ints(1, 0, -1).norm_sq(), rat_i64(4));
        // from_src(1,0) is the coweight-like vector, of squared norm 4/3.
        assert_eq!(from_src_ints(1, 0).norm_sq(), rat(4, 3));
    }

    #[test]
    fn singularity_labels() {
        assert_eq!(FlatVector::zero().singularity(), Singularity::Zero);
        assert_eq!(basis_class(0).singularity(), Singularity::SingularType1);
        assert_eq!(
            FlatVector::from_ints(1, 1, -2).singularity(),
            Singularity::SingularType2
        );
        assert_eq!(
            FlatVector::from_ints(3, 1, -4).singularity(),
            Singularity::Regular
        );
    }

    #[test]
    fn weyl_invariance_of_norm() {
        let v = FlatVector::new([rat(7, 3), rat(-1, 2), rat(5, 4)]);
        assert_eq!(v.norm_sq(), v.weyl_type().norm_sq());
    }
}
