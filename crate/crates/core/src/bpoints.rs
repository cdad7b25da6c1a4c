//! Points of the building attached to PGL(K^3), encoded as weighted bases.
//!
//! A point is the homothety class of the diagonalizable norm
//! `N(sum u_i b_i) = max |u_i| exp(-c_i)` for a basis `b` and a rational
//! weight triple `c` (stored sum-zero). The Cartan vector of two points is
//! read off valuations of minors of the transition matrix, shifted by the
//! weights; this is the tropical Smith-form computation in closed form.

use crate::error::{GeomError, Result};
use crate::linalg::{det2, Mat3, Vec3};
use crate::modelflat::FlatVector;
use crate::projplane::{join, Flag, ProjPoint};
use crate::valfield::{Field, Val};
use num::BigRational;

/// A building point: invertible basis matrix (columns) plus sum-zero
/// rational weights.
#[derive(Clone, Debug)]
pub struct BuildingPoint {
    basis: Mat3,
    weights: FlatVector,
}

impl BuildingPoint {
    pub fn new(basis: Mat3, weights: FlatVector) -> Result<BuildingPoint> {
        if basis.det().is_zero() {
            return Err(GeomError::SingularMatrix);
        }
        Ok(BuildingPoint { basis, weights })
    }

    /// Standard basis with zero weights.
    pub fn standard(field: &Field) -> BuildingPoint {
        BuildingPoint {
            basis: Mat3::identity_like(&field.one()),
            weights: FlatVector::zero(),
        }
    }

    pub fn basis(&self) -> &Mat3 {
        &self.basis
    }

    pub fn weights(&self) -> &FlatVector {
        &self.weights
    }
}

/// A marked flat: the flat of a frame, with the marking fixed by the basis
/// order. The boundary chamber of the marking is the flag
/// `([b_1], b_1 + b_2)`.
#[derive(Clone, Debug)]
pub struct MarkedFlat {
    basis: Mat3,
}

impl MarkedFlat {
    pub fn new(basis: Mat3) -> Result<MarkedFlat> {
        if basis.det().is_zero() {
            return Err(GeomError::SingularMatrix);
        }
        Ok(MarkedFlat { basis })
    }

    pub fn basis(&self) -> &Mat3 {
        &self.basis
    }

    pub fn point_at(&self, c: &FlatVector) -> BuildingPoint {
        BuildingPoint {
            basis: self.basis.clone(),
            weights: c.clone(),
        }
    }

    /// The flag the marking sends the model chamber to.
    pub fn boundary_flag(&self) -> Result<Flag> {
        let p = ProjPoint::new(self.basis.cols[0].clone())?;
        let q = ProjPoint::new(self.basis.cols[1].clone())?;
        let line = join(&p, &q)?;
        Flag::new(p, line)
    }

    /// The three ideal points of the frame, in basis order.
    pub fn ideal_points(&self) -> Result<[ProjPoint; 3]> {
        Ok([
            ProjPoint::new(self.basis.cols[0].clone())?,
            ProjPoint::new(self.basis.cols[1].clone())?,
            ProjPoint::new(self.basis.cols[2].clone())?,
        ])
    }
}

/// Valuations of all minors of a transition matrix between two bases.
/// Precomputing these makes repeated Cartan computations between two fixed
/// flats pure rational arithmetic.
#[derive(Clone, Debug)]
pub struct Transition {
    entry_vals: [[Val; 3]; 3],
    /// `minor2_vals[i][j]` is the valuation of the 2x2 minor obtained by
    /// deleting row i and column j.
    minor2_vals: [[Val; 3]; 3],
    det_val: Val,
}

impl Transition {
    /// Transition data from the basis of `from` to the basis of `to`.
    /// Computed through the adjugate, `adj(B) C = det(B) B^{-1} C`, so that
    /// integral bases never leave the polynomial ring.
    pub fn new(field: &Field, from: &Mat3, to: &Mat3) -> Result<Transition> {
        let vdet_from = field.val(&from.det());
        let vdet_from = match vdet_from {
            Val::Finite(v) => v,
            _ => return Err(GeomError::SingularMatrix),
        };
        let m = from.adjugate().mul(to);
        let shift1 = Val::Finite(vdet_from.clone());
        let shift2 = Val::Finite(&vdet_from + &vdet_from);
        let shift3 = Val::Finite(&vdet_from + &vdet_from + &vdet_from);
        let mut entry_vals = std::array::from_fn(|_| std::array::from_fn(|_| Val::PlusInf));
        let mut minor2_vals: [[Val; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| Val::PlusInf));
        for i in 0..3 {
            for j in 0..3 {
                entry_vals[i][j] = field.val(m.at(i, j)).sub(&shift1);
                let (r0, r1) = other_two(i);
                let (c0, c1) = other_two(j);
                let mm = det2(m.at(r0, c0), m.at(r0, c1), m.at(r1, c0), m.at(r1, c1));
                minor2_vals[i][j] = field.val(&mm).sub(&shift2);
            }
        }
        let det_val = field.val(&m.det()).sub(&shift3);
        if !det_val.is_finite() {
            return Err(GeomError::SingularMatrix);
        }
        Ok(Transition {
            entry_vals,
            minor2_vals,
            det_val,
        })
    }

    /// Cartan vector between `from.point_at(cw)` and `to.point_at(dw)`.
    pub fn cartan(&self, cw: &FlatVector, dw: &FlatVector) -> FlatVector {
        let c = cw.coords();
        let d = dw.coords();
        let mut m1 = Val::PlusInf;
        let mut m2 = Val::PlusInf;
        for i in 0..3 {
            for j in 0..3 {
                let e1 = self.entry_vals[i][j]
                    .add(&Val::from_rational(&c[i] - &d[j]));
                if e1 < m1 {
                    m1 = e1;
                }
                // Rows I omit i, cols J omit j; the weight shift is
                // sum(c_I) - sum(d_J) = -c_i + d_j since weights sum to zero.
                let e2 = self.minor2_vals[i][j]
                    .add(&Val::from_rational(&d[j] - &c[i]));
                if e2 < m2 {
                    m2 = e2;
                }
            }
        }
        let m1 = m1.finite().expect("invertible transition has finite m1").clone();
        let m2 = m2.finite().expect("invertible transition has finite m2").clone();
        let m3 = self
            .det_val
            .finite()
            .expect("invertible transition has finite determinant")
            .clone();
        let l1 = m1.clone();
        let l2 = &m2 - &m1;
        let l3 = &m3 - &m2;
        let out = FlatVector::new([-l1, -l2, -l3]);
        debug_assert!(
            out.in_closed_chamber(),
            "minor log-concavity violated: cartan vector not dominant"
        );
        out
    }

    /// Candidate flat coordinates of `from.point_at(c)` in the target flat:
    /// `d_j = min_i (v(g_ij) + c_i)`, where g is the transition matrix.
    pub fn candidate_coords(&self, cw: &FlatVector) -> FlatVector {
        let c = cw.coords();
        let mut d = [Val::PlusInf, Val::PlusInf, Val::PlusInf];
        for j in 0..3 {
            for i in 0..3 {
                let e = self.entry_vals[i][j].add(&Val::from_rational(c[i].clone()));
                if e < d[j] {
                    d[j] = e;
                }
            }
        }
        FlatVector::new(std::array::from_fn(|j| {
            d[j].finite()
                .expect("basis column has finite norm")
                .clone()
        }))
    }

    /// Coordinates of `from.point_at(c)` in the target flat, when the point
    /// lies on it.
    pub fn coords_in_target(&self, cw: &FlatVector) -> Option<FlatVector> {
        let cand = self.candidate_coords(cw);
        if self.cartan(cw, &cand).is_zero() {
            Some(cand)
        } else {
            None
        }
    }
}

fn other_two(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => unreachable!(),
    }
}

/// Cartan vector of the pair (x, y): the dominant vector translating x to y
/// in any common marked flat.
pub fn cartan_vector(field: &Field, x: &BuildingPoint, y: &BuildingPoint) -> Result<FlatVector> {
    let t = Transition::new(field, &x.basis, &y.basis)?;
    Ok(t.cartan(&x.weights, &y.weights))
}

pub fn equals(field: &Field, x: &BuildingPoint, y: &BuildingPoint) -> Result<bool> {
    Ok(cartan_vector(field, x, y)?.is_zero())
}

pub fn distance_sq(field: &Field, x: &BuildingPoint, y: &BuildingPoint) -> Result<BigRational> {
    Ok(cartan_vector(field, x, y)?.norm_sq())
}

/// Logarithm of the norm of a nonzero vector at the point x:
/// `max_i (-v(u_i) - c_i)` in x's adapted basis.
pub fn norm_logeval(field: &Field, x: &BuildingPoint, v: &Vec3) -> Result<Val> {
    if v.iter().all(|c| c.is_zero()) {
        return Err(GeomError::ZeroVector);
    }
    // Coordinates scaled by det: u_i = (adj(B) v)_i / det(B).
    let w = x.basis.adjugate().apply(v);
    let vdet = field
        .val(&x.basis.det())
        .expect_finite("basis determinant")?;
    let c = x.weights.coords();
    let mut best = Val::MinusInf;
    for i in 0..3 {
        let term = (-field.val(&w[i]))
            .add(&Val::Finite(vdet.clone()))
            .sub(&Val::from_rational(c[i].clone()));
        if term > best {
            best = term;
        }
    }
    Ok(best)
}

/// Flat coordinates of x in the marked flat F, if x lies on F. The
/// candidate weights are read off the norms of F's basis vectors and then
/// confirmed against the equality oracle.
pub fn flat_coords(field: &Field, x: &BuildingPoint, f: &MarkedFlat) -> Result<Option<FlatVector>> {
    let mut cand = Vec::with_capacity(3);
    for j in 0..3 {
        let nv = norm_logeval(field, x, &f.basis.cols[j])?;
        let fin = nv.expect_finite("norm of a basis vector")?;
        cand.push(-fin);
    }
    let coords = FlatVector::new([cand[0].clone(), cand[1].clone(), cand[2].clone()]);
    if equals(field, x, &f.point_at(&coords))? {
        Ok(Some(coords))
    } else {
        Ok(None)
    }
}

/// The dual point in the building of the dual space: inverse-transpose
/// basis and negated weights. An involution on homothety classes.
pub fn dualize(field: &Field, x: &BuildingPoint) -> Result<BuildingPoint> {
    let basis = x.basis.inverse()?.transpose();
    normalize_point(
        field,
        BuildingPoint {
            basis,
            weights: x.weights.neg(),
        },
    )
}

/// Rescales each basis column to a primitive integral representative,
/// compensating the weights by the valuation of the scale; the homothety
/// class is unchanged. Keeps stored bases in the polynomial ring.
pub fn normalize_point(field: &Field, x: BuildingPoint) -> Result<BuildingPoint> {
    let mut cols = Vec::with_capacity(3);
    let mut weights = x.weights.coords().clone();
    for j in 0..3 {
        let (scaled, scale) = crate::valfield::primitive_vector(&x.basis.cols[j]);
        let shift = field.val(&scale).expect_finite("column scale")?;
        weights[j] += shift;
        cols.push([scaled[0].clone(), scaled[1].clone(), scaled[2].clone()]);
    }
    let basis = Mat3::from_cols(
        cols[0].clone(),
        cols[1].clone(),
        cols[2].clone(),
    );
    BuildingPoint::new(basis, FlatVector::new(weights))
}

/// Action of an invertible matrix: basis is mapped, weights are untouched.
pub fn apply_group(g: &Mat3, x: &BuildingPoint) -> Result<BuildingPoint> {
    BuildingPoint::new(g.mul(&x.basis), x.weights.clone())
}
