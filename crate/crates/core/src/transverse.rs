//! Rank-1 (tree) computations and the bridges between the rank-2 building
//! and its transverse trees at infinity: ultrametric best approximation,
//! centers of projective frames, quotient and restriction of norms, tree
//! Busemann functions, and the chamber-valued Busemann cocycle.
//!
//! No tree graph is ever materialized; every tree query is answered by
//! exact norm algebra.

use crate::bpoints::{norm_logeval, BuildingPoint, MarkedFlat};
use crate::error::{GeomError, Result};
use crate::linalg::{cross3, det2, vec3_is_zero, vec3_sub, vec3_scale, Mat3, Vec2, Vec3};
use crate::modelflat::FlatVector;
use crate::projplane::{ProjLine, ProjPoint};
use crate::valfield::{Field, Scalar, Val};
use num::{BigInt, BigRational, Signed, Zero};

/// Concrete realization of a two-dimensional space attached to an ideal
/// vertex: the plane of a line `D` (restriction), or the quotient `V/p`
/// (quotient). Two coordinate functionals identify it with K^2; vectors are
/// kept in ambient coordinates and projected on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSpace {
    rows: [Vec3; 2],
}

impl TwoSpace {
    /// Realization of the plane `ker D`: drop a coordinate on which the
    /// line form is nonzero.
    pub fn restriction(line: &ProjLine) -> Result<TwoSpace> {
        let c = line.coeffs();
        let k = c
            .iter()
            .position(|x| !x.is_zero())
            .ok_or(GeomError::ZeroVector)?;
        let (i, j) = other_two(k);
        let one = c[k].one_like();
        let zero = c[k].zero_like();
        let mut r0 = [zero.clone(), zero.clone(), zero.clone()];
        r0[i] = one.clone();
        let mut r1 = [zero.clone(), zero.clone(), zero];
        r1[j] = one;
        Ok(TwoSpace { rows: [r0, r1] })
    }

    /// Realization of the quotient `V/p`: two independent functionals
    /// annihilating a representative of p.
    pub fn quotient(p: &ProjPoint) -> Result<TwoSpace> {
        let q = &p.primitive_rep();
        let k = q
            .iter()
            .position(|x| !x.is_zero())
            .ok_or(GeomError::ZeroVector)?;
        let (i, j) = other_two(k);
        let zero = q[k].zero_like();
        // phi(v) = q_k v_i - q_i v_k kills q and is nonzero.
        let mut r0 = [zero.clone(), zero.clone(), zero.clone()];
        r0[i] = q[k].clone();
        r0[k] = q[i].neg();
        let mut r1 = [zero.clone(), zero.clone(), zero];
        r1[j] = q[k].clone();
        r1[k] = q[j].neg();
        Ok(TwoSpace { rows: [r0, r1] })
    }

    pub fn project(&self, v: &Vec3) -> Vec2 {
        [
            crate::linalg::dot3(&self.rows[0], v),
            crate::linalg::dot3(&self.rows[1], v),
        ]
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

/// Point of a transverse tree: a two-dimensional diagonalizable norm class.
/// Basis vectors are kept in ambient coordinates so that points can be
/// transported along the canonical isomorphisms between transverse trees.
#[derive(Clone, Debug)]
pub struct TreePoint {
    space: TwoSpace,
    basis: [Vec3; 2],
    weights: [BigRational; 2],
}

fn pair_sum_zero(a: &BigRational, b: &BigRational) -> [BigRational; 2] {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let d = (a - b) * &half;
    [d.clone(), -d]
}

impl TreePoint {
    pub fn new(
        field: &Field,
        space: TwoSpace,
        basis: [Vec3; 2],
        weights: [BigRational; 2],
    ) -> Result<TreePoint> {
        // Rescale each basis vector to a primitive integral representative,
        // compensating the weight; the norm class is unchanged.
        let mut cols: Vec<Vec3> = Vec::with_capacity(2);
        let mut w = weights;
        for (j, col) in basis.iter().enumerate() {
            let (scaled, scale) = crate::valfield::primitive_vector(col);
            let shift = field.val(&scale).expect_finite("column scale")?;
            w[j] += shift;
            cols.push([scaled[0].clone(), scaled[1].clone(), scaled[2].clone()]);
        }
        let basis = [cols[0].clone(), cols[1].clone()];
        let b0 = space.project(&basis[0]);
        let b1 = space.project(&basis[1]);
        if det2(&b0[0], &b1[0], &b0[1], &b1[1]).is_zero() {
            return Err(GeomError::SingularMatrix);
        }
        let weights = pair_sum_zero(&w[0], &w[1]);
        Ok(TreePoint {
            space,
            basis,
            weights,
        })
    }

    pub fn space(&self) -> &TwoSpace {
        &self.space
    }

    pub fn basis(&self) -> &[Vec3; 2] {
        &self.basis
    }

    pub fn weights(&self) -> &[BigRational; 2] {
        &self.weights
    }

    /// The same norm viewed in another two-dimensional realization; this is
    /// the canonical isomorphism between transverse trees for vectors that
    /// remain independent there.
    pub fn transported(&self, field: &Field, space: TwoSpace) -> Result<TreePoint> {
        TreePoint::new(field, space, self.basis.clone(), self.weights.clone())
    }

    /// Coordinates scaled by the determinant of the projected basis:
    /// `adj(B) P v`, where actual coordinates are this divided by det(B).
    fn adj_coords(&self, v: &Vec3) -> Vec2 {
        let b0 = self.space.project(&self.basis[0]);
        let b1 = self.space.project(&self.basis[1]);
        let rhs = self.space.project(v);
        [
            b1[1].mul(&rhs[0]).sub(&b1[0].mul(&rhs[1])),
            b0[0].mul(&rhs[1]).sub(&b0[1].mul(&rhs[0])),
        ]
    }

    fn det_proj(&self) -> Scalar {
        let b0 = self.space.project(&self.basis[0]);
        let b1 = self.space.project(&self.basis[1]);
        det2(&b0[0], &b1[0], &b0[1], &b1[1])
    }
}

fn assert_same_space(x: &TreePoint, y: &TreePoint) {
    assert!(
        x.space == y.space,
        "tree points live in different transverse trees"
    );
}

/// Norm logarithm at a tree point.
pub fn tree_norm_logeval(field: &Field, x: &TreePoint, v: &Vec3) -> Result<Val> {
    let w = x.adj_coords(v);
    if w[0].is_zero() && w[1].is_zero() {
        return Err(GeomError::ZeroVector);
    }
    let vdet = field.val(&x.det_proj()).expect_finite("tree basis determinant")?;
    let mut best = Val::MinusInf;
    for i in 0..2 {
        let term = (-field.val(&w[i]))
            .add(&Val::Finite(vdet.clone()))
            .sub(&Val::from_rational(x.weights[i].clone()));
        if term > best {
            best = term;
        }
    }
    Ok(best)
}

/// Half the translation part of the pair: the tree Cartan vector is
/// `(a, -a)` with `a >= 0`; the distance is `2a`.
pub fn tree_cartan_scalar(field: &Field, x: &TreePoint, y: &TreePoint) -> Result<BigRational> {
    assert_same_space(x, y);
    // Scaled transition adj(Bx) By = det(Bx) g.
    let g0 = x.adj_coords(&y.basis[0]);
    let g1 = x.adj_coords(&y.basis[1]);
    let vdetx = field.val(&x.det_proj()).expect_finite("tree basis determinant")?;
    let g = [[g0[0].clone(), g1[0].clone()], [g0[1].clone(), g1[1].clone()]];
    let mut m1 = Val::PlusInf;
    for i in 0..2 {
        for j in 0..2 {
            let e = field
                .val(&g[i][j])
                .sub(&Val::Finite(vdetx.clone()))
                .add(&Val::from_rational(&x.weights[i] - &y.weights[j]));
            if e < m1 {
                m1 = e;
            }
        }
    }
    let det = det2(&g[0][0], &g[0][1], &g[1][0], &g[1][1]);
    let m2 = field.val(&det).expect_finite("tree transition determinant")?
        - &vdetx
        - &vdetx;
    let m1 = m1.expect_finite("tree transition entries")?;
    // lambda = (m1, m2 - m1); cartan = (-m1, m1 - m2) normalized.
    let a = (&m2 - &m1) - &m1;
    debug_assert!(!a.is_negative(), "tree cartan vector not dominant");
    Ok(a / BigRational::from_integer(BigInt::from(2)))
}

pub fn tree_distance(field: &Field, x: &TreePoint, y: &TreePoint) -> Result<BigRational> {
    Ok(tree_cartan_scalar(field, x, y)? * BigRational::from_integer(BigInt::from(2)))
}

pub fn tree_equals(field: &Field, x: &TreePoint, y: &TreePoint) -> Result<bool> {
    Ok(tree_cartan_scalar(field, x, y)?.is_zero())
}

/// Best approximation of `v` by multiples of `w` at the norm `x`: the
/// minimizing coefficient and the minimal value of `log N(v - t w)`. The
/// minimum is attained on the finite candidate set `{0} ∪ {u_i / w_i}` of
/// coefficient ratios in the adapted basis; ties go to the smallest
/// candidate in a fixed total order (only the value is contractual).
pub fn best_approx(
    field: &Field,
    x: &BuildingPoint,
    v: &Vec3,
    w: &Vec3,
) -> Result<(Scalar, Val)> {
    if vec3_is_zero(w) {
        return Err(GeomError::ZeroVector);
    }
    // Determinant-scaled coordinates; the shared factor cancels in the
    // candidate ratios and shifts every norm value by the same amount.
    let adj = x.basis().adjugate();
    let u = adj.apply(v);
    let wc = adj.apply(w);
    let vdet = field
        .val(&x.basis().det())
        .expect_finite("basis determinant")?;
    let weights = x.weights().coords().clone();
    best_approx_scaled(field, &u, &wc, &weights, &vdet)
}

/// Tree version of `best_approx`.
pub fn tree_best_approx(
    field: &Field,
    x: &TreePoint,
    v: &Vec3,
    w: &Vec3,
) -> Result<(Scalar, Val)> {
    let u = x.adj_coords(v);
    let wc = x.adj_coords(w);
    if wc[0].is_zero() && wc[1].is_zero() {
        return Err(GeomError::ZeroVector);
    }
    let vdet = field.val(&x.det_proj()).expect_finite("tree basis determinant")?;
    best_approx_scaled(field, &u, &wc, &x.weights, &vdet)
}

/// Core of the best approximation: coordinates are given scaled by a
/// common factor of valuation `vdet`; the minimum of
/// `max_i(-v(u_i - t w_i) - c_i)` over t is attained on the candidate set
/// `{0} ∪ {u_i / w_i}`.
fn best_approx_scaled(
    field: &Field,
    u: &[Scalar],
    w: &[Scalar],
    weights: &[BigRational],
    vdet: &BigRational,
) -> Result<(Scalar, Val)> {
    // v must not be proportional to w.
    let prop = {
        let mut ratio: Option<Scalar> = None;
        let mut proportional = true;
        for i in 0..u.len() {
            match (u[i].is_zero(), w[i].is_zero()) {
                (true, true) => {}
                (false, true) | (true, false) => {
                    proportional = false;
                    break;
                }
                (false, false) => {
                    let r = u[i].div(&w[i])?;
                    match &ratio {
                        None => ratio = Some(r),
                        Some(prev) => {
                            if prev != &r {
                                proportional = false;
                                break;
                            }
                        }
                    }
                }
            }
        }
        proportional
    };
    if prop {
        return Err(GeomError::PreconditionViolated(
            "vector lies in the span of the direction".into(),
        ));
    }
    let mut candidates: Vec<Scalar> = vec![u[0].zero_like()];
    for i in 0..u.len() {
        if !w[i].is_zero() {
            let c = u[i].div(&w[i])?;
            if !candidates.contains(&c) {
                candidates.push(c);
            }
        }
    }
    // Evaluate with the candidate cleared to numerator/denominator so all
    // field products stay integral.
    let eval = |lam: &Scalar| -> Val {
        let (p, q) = lam.num_den_parts();
        let vq = field.val(&q);
        let mut best = Val::MinusInf;
        for i in 0..u.len() {
            let coord = q.mul(&u[i]).sub(&p.mul(&w[i]));
            let term = (-field.val(&coord))
                .add(&vq.clone())
                .add(&Val::Finite(vdet.clone()))
                .sub(&Val::from_rational(weights[i].clone()));
            if term > best {
                best = term;
            }
        }
        best
    };
    let mut best: Option<(Scalar, Val)> = None;
    for lam in candidates {
        let value = eval(&lam);
        let better = match &best {
            None => true,
            Some((cur_lam, cur_val)) => {
                value < *cur_val
                    || (value == *cur_val && lam.tie_break_key() < cur_lam.tie_break_key())
            }
        };
        if better {
            best = Some((lam, value));
        }
    }
    Ok(best.expect("candidate set is nonempty"))
}

/// Center of a projective frame in the rank-2 building: scale the first
/// three representatives so the fourth is their sum; the center is the
/// max norm of the scaled basis.
pub fn center_frame(field: &Field, points: &[ProjPoint; 4]) -> Result<BuildingPoint> {
    let reps = [
        points[0].primitive_rep(),
        points[1].primitive_rep(),
        points[2].primitive_rep(),
    ];
    let m = Mat3::from_cols(reps[0].clone(), reps[1].clone(), reps[2].clone());
    // Determinant-scaled solution: adj(M) p3 = det(M) mu.
    let det = m.det();
    if det.is_zero() {
        return Err(GeomError::NotAFrame);
    }
    let mu = m.adjugate().apply(&points[3].primitive_rep());
    if mu.iter().any(|c| c.is_zero()) {
        return Err(GeomError::NotAFrame);
    }
    // The common factor det only rescales the fourth representative, which
    // is immaterial.
    let basis = Mat3::from_cols(
        vec3_scale(&mu[0], &reps[0]),
        vec3_scale(&mu[1], &reps[1]),
        vec3_scale(&mu[2], &reps[2]),
    );
    crate::bpoints::normalize_point(field, BuildingPoint::new(basis, FlatVector::zero())?)
}

/// Center of an ideal triple in a transverse tree; ends are given by
/// ambient representatives.
pub fn center_tree(field: &Field, space: &TwoSpace, ends: &[Vec3; 3]) -> Result<TreePoint> {
    let e0 = space.project(&ends[0]);
    let e1 = space.project(&ends[1]);
    let e2 = space.project(&ends[2]);
    if det2(&e0[0], &e1[0], &e0[1], &e1[1]).is_zero() {
        return Err(GeomError::NotAFrame);
    }
    // Determinant-scaled solution of e2 = mu0 e0 + mu1 e1.
    let mu0 = det2(&e2[0], &e1[0], &e2[1], &e1[1]);
    let mu1 = det2(&e0[0], &e2[0], &e0[1], &e2[1]);
    if mu0.is_zero() || mu1.is_zero() {
        return Err(GeomError::NotAFrame);
    }
    TreePoint::new(
        field,
        space.clone(),
        [vec3_scale(&mu0, &ends[0]), vec3_scale(&mu1, &ends[1])],
        [BigRational::zero(), BigRational::zero()],
    )
}

/// Orthogonal projection of an ideal point onto the flat of a frame. It
/// exists iff the point extends the frame to a projective frame, and is
/// then the center of that projective frame.
pub fn project_ideal_point_on_flat(
    field: &Field,
    p: &ProjPoint,
    frame: &[ProjPoint; 3],
) -> Result<BuildingPoint> {
    center_frame(field, &[frame[0].clone(), frame[1].clone(), frame[2].clone(), p.clone()])
        .map_err(|e| match e {
            GeomError::NotAFrame => GeomError::NoProjection,
            other => other,
        })
}

/// Dual construction: projection of an ideal line onto the flat spanned by
/// a frame of lines, computed as a center in the dual building and mapped
/// back.
pub fn project_ideal_line_on_flat(
    field: &Field,
    d: &ProjLine,
    line_frame: &[ProjLine; 3],
) -> Result<BuildingPoint> {
    let pts = [
        ProjPoint::new(line_frame[0].rep())?,
        ProjPoint::new(line_frame[1].rep())?,
        ProjPoint::new(line_frame[2].rep())?,
        ProjPoint::new(d.rep())?,
    ];
    let dual_center = center_frame(field, &[pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone()])
        .map_err(|e| match e {
            GeomError::NotAFrame => GeomError::NoProjection,
            other => other,
        })?;
    crate::bpoints::dualize(field, &dual_center)
}

/// Projection of a building point to the transverse tree at an ideal point
/// p: the quotient norm on V/p. The adapted basis is obtained by dropping
/// the basis vector that attains the norm of p's representative.
pub fn quotient_point(field: &Field, x: &BuildingPoint, p: &ProjPoint) -> Result<TreePoint> {
    let q = p.primitive_rep();
    // Determinant-scaled coordinates of q in x's basis; the common factor
    // shifts all compared terms equally.
    let u = x.basis().adjugate().apply(&q);
    let c = x.weights().coords();
    let mut i0 = 0usize;
    let mut best = Val::MinusInf;
    for i in 0..3 {
        let term = (-field.val(&u[i])).sub(&Val::from_rational(c[i].clone()));
        if term > best {
            best = term;
            i0 = i;
        }
    }
    let (j, k) = other_two(i0);
    let space = TwoSpace::quotient(p)?;
    TreePoint::new(
        field,
        space,
        [x.basis().cols[j].clone(), x.basis().cols[k].clone()],
        [c[j].clone(), c[k].clone()],
    )
}

/// Projection of a building point to the transverse tree at an ideal line
/// D: the restriction of the norm to the plane of D, diagonalized by one
/// best-approximation reduction.
pub fn restrict_point(field: &Field, x: &BuildingPoint, d: &ProjLine) -> Result<TreePoint> {
    let space = TwoSpace::restriction(d)?;
    let (s1, s2) = plane_basis(d)?;
    let (lam, _) = best_approx(field, x, &s2, &s1)?;
    let w2 = vec3_sub(&s2, &vec3_scale(&lam, &s1));
    let g1 = norm_logeval(field, x, &s1)?.expect_finite("restricted norm")?;
    let g2 = norm_logeval(field, x, &w2)?.expect_finite("restricted norm")?;
    TreePoint::new(field, space, [s1, w2], [-g1, -g2])
}

/// Two independent vectors spanning the plane of a line.
pub fn plane_basis(d: &ProjLine) -> Result<(Vec3, Vec3)> {
    let rep = d.primitive_rep();
    let zero = rep[0].zero_like();
    let one = rep[0].one_like();
    let mut candidates = Vec::new();
    for k in 0..3 {
        let mut e = [zero.clone(), zero.clone(), zero.clone()];
        e[k] = one.clone();
        let v = cross3(&rep, &e);
        if !vec3_is_zero(&v) {
            candidates.push(v);
        }
    }
    for i in 0..candidates.len() {
        for j in (i + 1)..candidates.len() {
            if !vec3_is_zero(&cross3(&candidates[i], &candidates[j])) {
                return Ok((candidates[i].clone(), candidates[j].clone()));
            }
        }
    }
    Err(GeomError::Internal("line has no two-dimensional kernel".into()))
}

/// A point on the line distinct from `avoid`.
pub fn second_point_on_line(d: &ProjLine, avoid: &ProjPoint) -> Result<ProjPoint> {
    let (s1, s2) = plane_basis(d)?;
    for v in [&s1, &s2, &crate::linalg::vec3_add(&s1, &s2)] {
        let p = ProjPoint::new(v.clone())?;
        if &p != avoid {
            return Ok(p);
        }
    }
    Err(GeomError::Internal("no second point on line".into()))
}

/// Busemann cocycle of the tree toward an ideal end, evaluated on two tree
/// points: `Bus(end; x, y) = lim_z (d(x,z) - d(y,z))`, positive when y is
/// closer to the end. Computed by marching a point along the ray from x
/// toward the end and asserting stabilization at two ranges.
pub fn tree_busemann(
    field: &Field,
    end: &Vec3,
    x: &TreePoint,
    y: &TreePoint,
) -> Result<BigRational> {
    assert_same_space(x, y);
    let u = x.adj_coords(end);
    if u[0].is_zero() && u[1].is_zero() {
        return Err(GeomError::ZeroVector);
    }
    // Adapted basis of x containing the end representative.
    let (r, s, gr, gs) = if u[0].is_zero() || u[1].is_zero() {
        // The end is already a basis direction; keep the other vector.
        let i = if u[1].is_zero() { 1 } else { 0 };
        let gr = tree_norm_logeval(field, x, end)?.expect_finite("end norm")?;
        (
            end.clone(),
            x.basis[i].clone(),
            gr,
            x.weights[i].clone().into_neg(),
        )
    } else {
        let s0 = x.basis[0].clone();
        let (lam, _) = tree_best_approx(field, x, &s0, end)?;
        let s = vec3_sub(&s0, &vec3_scale(&lam, end));
        let gr = tree_norm_logeval(field, x, end)?.expect_finite("end norm")?;
        let gs = tree_norm_logeval(field, x, &s)?.expect_finite("reduced norm")?;
        (end.clone(), s, gr, gs)
    };
    let x_adapted = TreePoint::new(
        field,
        x.space.clone(),
        [r.clone(), s.clone()],
        [-gr.clone(), -gs.clone()],
    )?;
    debug_assert!(tree_equals(field, &x_adapted, x)?);
    let d_xy = tree_distance(field, x, y)?;
    let t0 = BigRational::from_integer(d_xy.ceil().to_integer() + BigInt::from(1));
    let one = BigRational::from_integer(BigInt::from(1));
    let mut values = Vec::new();
    for t in [t0.clone(), &t0 + &one] {
        let z = TreePoint::new(
            field,
            x.space.clone(),
            [r.clone(), s.clone()],
            [&-gr.clone() + &t, -gs.clone()],
        )?;
        let dz = tree_distance(field, y, &z)?;
        values.push(&t - &dz);
    }
    if values[0] != values[1] {
        return Err(GeomError::Internal(
            "tree Busemann marching did not stabilize".into(),
        ));
    }
    Ok(values[0].clone())
}

trait IntoNeg {
    fn into_neg(self) -> BigRational;
}

impl IntoNeg for BigRational {
    fn into_neg(self) -> BigRational {
        -self
    }
}

/// Chamber-valued Busemann cocycle of the building, read off the two
/// transverse trees of the flag: the first simple-root coordinate comes
/// from the restriction tree of the line with end at the point, the second
/// from the quotient tree of the point with end at the line.
pub fn busemann_chamber(
    field: &Field,
    flag: &crate::projplane::Flag,
    x: &BuildingPoint,
    y: &BuildingPoint,
) -> Result<FlatVector> {
    let rx = restrict_point(field, x, &flag.line)?;
    let ry = restrict_point(field, y, &flag.line)?;
    let a1 = tree_busemann(field, &flag.point.rep(), &rx, &ry)?;
    let qx = quotient_point(field, x, &flag.point)?;
    let qy = quotient_point(field, y, &flag.point)?;
    let second = second_point_on_line(&flag.line, &flag.point)?;
    let a2 = tree_busemann(field, &second.rep(), &qx, &qy)?;
    Ok(crate::modelflat::from_src(&a1, &a2))
}

/// Building-internal cross ratio of four distinct tree ends: the Busemann
/// cocycle toward the first end between the centers of the tripods
/// `(e3, e1, e2)` and `(e3, e1, e4)`. Equals log|Bir| in the algebraic
/// model; used as an independent oracle for that identity.
pub fn geombir_tree_oracle(
    field: &Field,
    space: &TwoSpace,
    ends: &[Vec3; 4],
) -> Result<BigRational> {
    let proj: Vec<Vec2> = ends.iter().map(|e| space.project(e)).collect();
    for i in 0..4 {
        if proj[i][0].is_zero() && proj[i][1].is_zero() {
            return Err(GeomError::ZeroVector);
        }
        for j in (i + 1)..4 {
            if det2(&proj[i][0], &proj[j][0], &proj[i][1], &proj[j][1]).is_zero() {
                return Err(GeomError::EqualArguments);
            }
        }
    }
    let c1 = center_tree(field, space, &[ends[2].clone(), ends[0].clone(), ends[1].clone()])?;
    let c2 = center_tree(field, space, &[ends[2].clone(), ends[0].clone(), ends[3].clone()])?;
    tree_busemann(field, &ends[0], &c1, &c2)
}

/// A marked flat whose boundary chamber is the given flag: basis
/// `(p, q, r)` with q on the flag line and r generic.
pub fn flat_with_boundary_flag(field: &Field, flag: &crate::projplane::Flag) -> Result<MarkedFlat> {
    let q = second_point_on_line(&flag.line, &flag.point)?;
    let one = field.one();
    let zero = field.zero();
    let candidates = [
        [one.clone(), zero.clone(), zero.clone()],
        [zero.clone(), one.clone(), zero.clone()],
        [zero.clone(), zero.clone(), one.clone()],
        [one.clone(), one.clone(), one.clone()],
    ];
    for cand in candidates {
        let m = Mat3::from_cols(flag.point.rep(), q.rep(), cand.clone());
        if !m.det().is_zero() {
            return MarkedFlat::new(m);
        }
    }
    Err(GeomError::Internal("no completion of flag to a frame".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bpoints::{distance_sq, equals};
    use crate::modelflat::{rat, rat_i64};
    use crate::valfield::Field;

    fn qt() -> Field {
        Field::qt()
    }

    fn v3(f: &Field, a: &str, b: &str, c: &str) -> Vec3 {
        [f.parse(a).unwrap(), f.parse(b).unwrap(), f.parse(c).unwrap()]
    }

    fn pt(f: &Field, a: &str, b: &str, c: &str) -> ProjPoint {
        ProjPoint::new(v3(f, a, b, c)).unwrap()
    }

    #[test]
    fn best_approx_examples() {
        let f = qt();
        let e = BuildingPoint::standard(&f);
        // Already orthogonal.
        let (lam, value) = best_approx(&f, &e, &v3(&f, "1", "0", "0"), &v3(&f, "0", "1", "0")).unwrap();
        assert_eq!(lam, f.zero());
        assert_eq!(value, Val::zero());
        // v = e1, w = e1 + t e2: subtracting w leaves -t e2 of log-norm -1.
        let (lam, value) = best_approx(&f, &e, &v3(&f, "1", "0", "0"), &v3(&f, "1", "t", "0")).unwrap();
        assert_eq!(lam, f.one());
        assert_eq!(value, Val::from_i64(-1));
        // Tie between 0 and 1 broken toward 0.
        let (lam, value) = best_approx(&f, &e, &v3(&f, "1", "1", "0"), &v3(&f, "1", "0", "0")).unwrap();
        assert_eq!(lam, f.zero());
        assert_eq!(value, Val::zero());
        // Span precondition.
        assert!(matches!(
            best_approx(&f, &e, &v3(&f, "t", "0", "0"), &v3(&f, "1", "0", "0")),
            Err(GeomError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn center_frame_examples() {
        let f = qt();
        let e1 = pt(&f, "1", "0", "0");
        let e2 = pt(&f, "0", "1", "0");
        let e3 = pt(&f, "0", "0", "1");
        let sum = pt(&f, "1", "1", "1");
        let c = center_frame(&f, &[e1.clone(), e2.clone(), e3.clone(), sum]).unwrap();
        assert!(equals(&f, &c, &BuildingPoint::standard(&f)).unwrap());
        // Fourth point [e1 + t e2 + e3]: center is the standard flat point
        // with weights (0, -1, 0).
        let skew = pt(&f, "1", "t", "1");
        let c = center_frame(&f, &[e1.clone(), e2.clone(), e3.clone(), skew]).unwrap();
        let expect = crate::bpoints::MarkedFlat::new(Mat3::identity_like(&f.one()))
            .unwrap()
            .point_at(&FlatVector::from_ints(0, -1, 0));
        assert!(equals(&f, &c, &expect).unwrap());
        // Non-frame input.
        let collinear = pt(&f, "1", "1", "0");
        assert!(matches!(
            center_frame(&f, &[e1, e2, e3, collinear]),
            Err(GeomError::NotAFrame)
        ));
    }

    #[test]
    fn projection_of_ideal_points() {
        let f = qt();
        let frame = [pt(&f, "1", "0", "0"), pt(&f, "0", "1", "0"), pt(&f, "0", "0", "1")];
        let p = pt(&f, "1", "1", "1");
        let x = project_ideal_point_on_flat(&f, &p, &frame).unwrap();
        assert!(equals(&f, &x, &BuildingPoint::standard(&f)).unwrap());
        // A point on a boundary line of the flat has no projection.
        let bad = pt(&f, "1", "1", "0");
        assert!(matches!(
            project_ideal_point_on_flat(&f, &bad, &frame),
            Err(GeomError::NoProjection)
        ));
        // Dual: the line sum(x_i) = 0 projects to the standard point on the
        // flat of the coordinate lines.
        let d = ProjLine::new(v3(&f, "1", "1", "1")).unwrap();
        let lines = [
            ProjLine::new(v3(&f, "1", "0", "0")).unwrap(),
            ProjLine::new(v3(&f, "0", "1", "0")).unwrap(),
            ProjLine::new(v3(&f, "0", "0", "1")).unwrap(),
        ];
        let xd = project_ideal_line_on_flat(&f, &d, &lines).unwrap();
        assert!(equals(&f, &xd, &BuildingPoint::standard(&f)).unwrap());
    }

    #[test]
    fn quotient_and_restrict_examples() {
        let f = qt();
        let e = BuildingPoint::standard(&f);
        let q = quotient_point(&f, &e, &pt(&f, "0", "0", "1")).unwrap();
        assert_eq!(q.weights(), &[BigRational::zero(), BigRational::zero()]);
        let d = ProjLine::new(v3(&f, "1", "0", "0")).unwrap();
        let r = restrict_point(&f, &e, &d).unwrap();
        assert_eq!(r.weights(), &[BigRational::zero(), BigRational::zero()]);
        // Weighted example: x = (e, (1,0,-1)), p = [e1]: quotient weights
        // are (0,-1) normalized to (1/2,-1/2).
        let x = BuildingPoint::new(
            Mat3::identity_like(&f.one()),
            FlatVector::from_ints(1, 0, -1),
        )
        .unwrap();
        let qx = quotient_point(&f, &x, &pt(&f, "1", "0", "0")).unwrap();
        assert_eq!(qx.weights(), &[rat(1, 2), rat(-1, 2)]);
    }

    #[test]
    fn tree_busemann_same_apartment() {
        let f = qt();
        let line = ProjLine::new(v3(&f, "0", "0", "1")).unwrap();
        let space = TwoSpace::restriction(&line).unwrap();
        let b = [v3(&f, "1", "0", "0"), v3(&f, "0", "1", "0")];
        let x = TreePoint::new(&f, space.clone(), b.clone(), [rat_i64(0), rat_i64(0)]).unwrap();
        let y = TreePoint::new(&f, space.clone(), b.clone(), [rat_i64(1), rat_i64(-1)]).unwrap();
        let xi = v3(&f, "1", "0", "0");
        assert_eq!(tree_busemann(&f, &xi, &x, &y).unwrap(), rat_i64(2));
        assert_eq!(tree_busemann(&f, &xi, &x, &x).unwrap(), rat_i64(0));
        // Reversing the end negates.
        let eta = v3(&f, "0", "1", "0");
        assert_eq!(tree_busemann(&f, &eta, &x, &y).unwrap(), rat_i64(-2));
    }

    #[test]
    fn tree_busemann_branching() {
        let f = qt();
        let line = ProjLine::new(v3(&f, "0", "0", "1")).unwrap();
        let space = TwoSpace::restriction(&line).unwrap();
        let x = TreePoint::new(
            &f,
            space.clone(),
            [v3(&f, "1", "0", "0"), v3(&f, "0", "1", "0")],
            [rat_i64(0), rat_i64(0)],
        )
        .unwrap();
        // Branch point at distance 1 toward [e1]; y two further along the
        // branch toward [e1 + t e2], hence distance 3 from x and Busemann
        // value -1 (hand tripod metric).
        let y = TreePoint::new(
            &f,
            space.clone(),
            [v3(&f, "1", "t", "0"), v3(&f, "0", "t", "0")],
            [rat_i64(1), rat_i64(-1)],
        )
        .unwrap();
        let xi = v3(&f, "1", "0", "0");
        assert_eq!(tree_distance(&f, &x, &y).unwrap(), rat_i64(3));
        assert_eq!(tree_busemann(&f, &xi, &x, &y).unwrap(), rat_i64(-1));
    }

    #[test]
    fn geombir_oracle_examples() {
        let f = qt();
        let line = ProjLine::new(v3(&f, "0", "0", "1")).unwrap();
        let space = TwoSpace::restriction(&line).unwrap();
        let ends = [
            v3(&f, "1", "0", "0"),
            v3(&f, "-1", "1", "0"),
            v3(&f, "0", "1", "0"),
            v3(&f, "t", "1", "0"),
        ];
        assert_eq!(
            geombir_tree_oracle(&f, &space, &ends).unwrap(),
            rat_i64(-1)
        );
        // Swapping arguments 1 and 3 negates the value.
        let swapped = [ends[2].clone(), ends[1].clone(), ends[0].clone(), ends[3].clone()];
        assert_eq!(geombir_tree_oracle(&f, &space, &swapped).unwrap(), rat_i64(1));
        let unit = [
            ends[0].clone(),
            ends[1].clone(),
            ends[2].clone(),
            v3(&f, "1", "1", "0"),
        ];
        assert_eq!(geombir_tree_oracle(&f, &space, &unit).unwrap(), rat_i64(0));
    }

    #[test]
    fn busemann_chamber_on_shared_flat() {
        let f = qt();
        let flat = crate::bpoints::MarkedFlat::new(Mat3::identity_like(&f.one())).unwrap();
        let flag = flat.boundary_flag().unwrap();
        let c1 = FlatVector::from_ints(0, 0, 0);
        let c2 = FlatVector::new([rat(3, 2), rat_i64(-1), rat(-1, 2)]);
        let x = flat.point_at(&c1);
        let y = flat.point_at(&c2);
        let bus = busemann_chamber(&f, &flag, &x, &y).unwrap();
        assert_eq!(bus, c2.sub(&c1));
        assert!(busemann_chamber(&f, &flag, &x, &x).unwrap().is_zero());
    }

    #[test]
    fn busemann_chamber_cocycle_additivity() {
        let f = qt();
        let flag = crate::bpoints::MarkedFlat::new(Mat3::identity_like(&f.one()))
            .unwrap()
            .boundary_flag()
            .unwrap();
        let p = |s: &str| f.parse(s).unwrap();
        let x = BuildingPoint::standard(&f);
        let y = BuildingPoint::new(
            Mat3::from_cols(v3(&f, "1", "0", "t"), v3(&f, "0", "1", "0"), v3(&f, "0", "1/t", "1")),
            FlatVector::from_ints(1, 0, -1),
        )
        .unwrap();
        let z = BuildingPoint::new(
            Mat3::from_cols(
                [p("1"), p("1"), p("0")],
                [p("0"), p("1"), p("1+t")],
                [p("t"), p("0"), p("1")],
            ),
            FlatVector::from_ints(0, 1, -1),
        )
        .unwrap();
        let bxy = busemann_chamber(&f, &flag, &x, &y).unwrap();
        let byz = busemann_chamber(&f, &flag, &y, &z).unwrap();
        let bxz = busemann_chamber(&f, &flag, &x, &z).unwrap();
        assert_eq!(bxy.add(&byz), bxz);
    }

    #[test]
    fn projection_compatibility_with_centers() {
        let f = qt();
        // Center of a projective frame projects to the center of the
        // projected frame in each transverse tree.
        let p0 = pt(&f, "1", "0", "0");
        let p1 = pt(&f, "0", "1", "0");
        let p2 = pt(&f, "0", "0", "1");
        let p3 = pt(&f, "1", "t", "1+t");
        let center = center_frame(&f, &[p0.clone(), p1.clone(), p2.clone(), p3.clone()]).unwrap();
        let proj = quotient_point(&f, &center, &p0).unwrap();
        let space = proj.space().clone();
        // Ends of the projected frame: images of the lines p0 p_i, i.e. of
        // representatives of p1, p2, p3.
        let expected = center_tree(
            &f,
            &space,
            &[p1.rep(), p2.rep(), p3.rep()],
        )
        .unwrap();
        assert!(tree_equals(&f, &proj, &expected).unwrap());
    }

    #[test]
    fn perspectivity_preserves_centers() {
        let f = qt();
        // Opposite point and line: p = [1:1:1], D = {x3 = 0}; random
        // triples of collinear points on D.
        let p = pt(&f, "1", "1", "1");
        let d = ProjLine::new(v3(&f, "0", "0", "1")).unwrap();
        assert!(!d.contains(&p));
        let space_d = TwoSpace::restriction(&d).unwrap();
        let space_p = TwoSpace::quotient(&p).unwrap();
        let mut rng = crate::verify::seeded_rng(17);
        let mut done = 0;
        while done < 10 {
            let qs: Vec<crate::linalg::Vec3> = (0..3)
                .map(|_| {
                    let a = crate::verify::rand_monomial_coeff(&f, &mut rng);
                    let b = crate::verify::rand_monomial_coeff(&f, &mut rng);
                    [a, b, f.zero()]
                })
                .collect();
            let ends: [crate::linalg::Vec3; 3] = qs.try_into().unwrap();
            let center_d = match center_tree(&f, &space_d, &ends) {
                Ok(c) => c,
                Err(_) => continue,
            };
            done += 1;
            // Transport through the canonical isomorphism (same ambient
            // vectors, quotient realization).
            let transported = center_d.transported(&f, space_p.clone()).unwrap();
            let center_p = center_tree(&f, &space_p, &ends).unwrap();
            assert!(tree_equals(&f, &transported, &center_p).unwrap());
        }
    }

    #[test]
    fn best_approx_never_beaten_by_samples() {
        let f = qt();
        let x = BuildingPoint::new(
            Mat3::from_cols(
                v3(&f, "1", "0", "1/t"),
                v3(&f, "t", "1", "0"),
                v3(&f, "0", "0", "1"),
            ),
            FlatVector::from_ints(1, -1, 0),
        )
        .unwrap();
        let v = v3(&f, "1", "1+t", "0");
        let w = v3(&f, "1", "t", "t^2");
        let (_, best_val) = best_approx(&f, &x, &v, &w).unwrap();
        for s in ["0", "1", "-1", "t", "1/t", "1+t", "2", "1/2", "t^2", "-1/t"] {
            let lam = f.parse(s).unwrap();
            let cand = vec3_sub(&v, &vec3_scale(&lam, &w));
            let val = norm_logeval(&f, &x, &cand).unwrap();
            assert!(val >= best_val, "sample {} beat the returned minimum", s);
        }
    }

    #[test]
    fn dual_distance_preserved_under_projections() {
        let f = qt();
        let x = BuildingPoint::standard(&f);
        let y = BuildingPoint::new(
            Mat3::identity_like(&f.one()),
            FlatVector::from_ints(2, 0, -2),
        )
        .unwrap();
        assert_eq!(distance_sq(&f, &x, &y).unwrap(), rat_i64(16));
        // Quotient projections are 1-Lipschitz; along a shared flat the
        // distances agree with coordinate differences.
        let p = pt(&f, "1", "0", "0");
        let qx = quotient_point(&f, &x, &p).unwrap();
        let qy = quotient_point(&f, &y, &p).unwrap();
        assert_eq!(tree_distance(&f, &qx, &qy).unwrap(), rat_i64(2));
    }
}
