//! The projective plane over a valued field and its dual: incidence,
//! genericity predicates, and the algebraic / geometric cross and triple
//! ratios of flag configurations.

use crate::error::{GeomError, Result};
use crate::linalg::{cross3, dot3, vec3_is_zero, Vec3};
use crate::valfield::{Field, Scalar, Val};
use std::fmt;

/// Point of P(K^3): homogeneous coordinate triple, canonically scaled so
/// the first nonzero coordinate is 1. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint {
    coords: Vec3,
}

/// Line of P(K^3), i.e. point of the dual plane: homogeneous linear-form
/// triple with the same canonical scaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjLine {
    coeffs: Vec3,
}

fn canonicalize(v: &Vec3) -> Result<Vec3> {
    let idx = v
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(GeomError::ZeroVector)?;
    let inv = v[idx].inv()?;
    Ok([v[0].mul(&inv), v[1].mul(&inv), v[2].mul(&inv)])
}

impl ProjPoint {
    pub fn new(coords: Vec3) -> Result<ProjPoint> {
        Ok(ProjPoint {
            coords: canonicalize(&coords)?,
        })
    }

    pub fn coords(&self) -> &Vec3 {
        &self.coords
    }

    /// A representative vector (the canonical one).
    pub fn rep(&self) -> Vec3 {
        self.coords.clone()
    }

    /// An integral primitive representative: integer (or integer
    /// polynomial) entries with no common factor. Keeps downstream exact
    /// arithmetic in the polynomial ring.
    pub fn primitive_rep(&self) -> Vec3 {
        let (v, _) = crate::valfield::primitive_vector(&self.coords);
        [v[0].clone(), v[1].clone(), v[2].clone()]
    }
}

impl ProjLine {
    pub fn new(coeffs: Vec3) -> Result<ProjLine> {
        Ok(ProjLine {
            coeffs: canonicalize(&coeffs)?,
        })
    }

    pub fn coeffs(&self) -> &Vec3 {
        &self.coeffs
    }

    pub fn rep(&self) -> Vec3 {
        self.coeffs.clone()
    }

    /// An integral primitive representative of the line form.
    pub fn primitive_rep(&self) -> Vec3 {
        let (v, _) = crate::valfield::primitive_vector(&self.coeffs);
        [v[0].clone(), v[1].clone(), v[2].clone()]
    }

    pub fn eval(&self, p: &ProjPoint) -> Scalar {
        dot3(&self.coeffs, &p.coords)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}:{}:{}]",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}:{}:{}>",
            self.coeffs[0], self.coeffs[1], self.coeffs[2]
        )
    }
}

/// Line through two distinct points.
pub fn join(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    let c = cross3(&p.coords, &q.coords);
    if vec3_is_zero(&c) {
        return Err(GeomError::EqualArguments);
    }
    ProjLine::new(c)
}

/// Intersection point of two distinct lines.
pub fn meet(l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    let c = cross3(&l.coeffs, &m.coeffs);
    if vec3_is_zero(&c) {
        return Err(GeomError::EqualArguments);
    }
    ProjPoint::new(c)
}

/// Incident point-line pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub point: ProjPoint,
    pub line: ProjLine,
}

impl Flag {
    pub fn new(point: ProjPoint, line: ProjLine) -> Result<Flag> {
        if !line.contains(&point) {
            return Err(GeomError::PreconditionViolated(
                "flag point must lie on the flag line".into(),
            ));
        }
        Ok(Flag { point, line })
    }

    /// Flags are opposite when neither point lies on the other line.
    pub fn opposite(&self, other: &Flag) -> bool {
        !other.line.contains(&self.point) && !self.line.contains(&other.point)
    }
}

/// Ordered triple of flags; indices are treated mod 3 throughout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagTriple {
    pub flags: [Flag; 3],
}

impl FlagTriple {
    pub fn new(flags: [Flag; 3]) -> FlagTriple {
        FlagTriple { flags }
    }

    pub fn point(&self, i: usize) -> &ProjPoint {
        &self.flags[i % 3].point
    }

    pub fn line(&self, i: usize) -> &ProjLine {
        &self.flags[i % 3].line
    }

    /// The point `D_i ∩ D_j`.
    pub fn pij(&self, i: usize, j: usize) -> Result<ProjPoint> {
        meet(self.line(i), self.line(j))
    }

    /// The line `p_i p_j`.
    pub fn dij(&self, i: usize, j: usize) -> Result<ProjLine> {
        join(self.point(i), self.point(j))
    }

    pub fn cycled(&self) -> FlagTriple {
        FlagTriple::new([
            self.flags[1].clone(),
            self.flags[2].clone(),
            self.flags[0].clone(),
        ])
    }

    pub fn reversed(&self) -> FlagTriple {
        FlagTriple::new([
            self.flags[2].clone(),
            self.flags[1].clone(),
            self.flags[0].clone(),
        ])
    }

    /// Swap the last two flags.
    pub fn swapped(&self) -> FlagTriple {
        FlagTriple::new([
            self.flags[0].clone(),
            self.flags[2].clone(),
            self.flags[1].clone(),
        ])
    }
}

/// Nondegeneracy: either `p_i` avoids `D_{i+1}` for all i, or `p_i` avoids
/// `D_{i-1}` for all i. This is what makes the triple-ratio pencils
/// well-defined quadruples without triple lines.
pub fn nondegenerate(t: &FlagTriple) -> bool {
    let fwd = (0..3).all(|i| !t.line((i + 1) % 3).contains(t.point(i)));
    let bwd = (0..3).all(|i| !t.line((i + 2) % 3).contains(t.point(i)));
    fwd || bwd
}

/// Genericity: pairwise opposite flags, points not collinear and lines not
/// concurrent.
pub fn generic(t: &FlagTriple) -> bool {
    for i in 0..3 {
        for j in (i + 1)..3 {
            if !t.flags[i].opposite(&t.flags[j]) {
                return false;
            }
        }
    }
    let points_line = match join(t.point(0), t.point(1)) {
        Ok(l) => l,
        Err(_) => return false,
    };
    if points_line.contains(t.point(2)) {
        return false;
    }
    let lines_point = match meet(t.line(0), t.line(1)) {
        Ok(p) => p,
        Err(_) => return false,
    };
    if t.line(2).contains(&lines_point) {
        return false;
    }
    true
}

/// Scalar-valued projective quantity: a field element or the point at
/// infinity of the projective line. No arithmetic is defined on it; it only
/// flows into `logabs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjScalar {
    Finite(Scalar),
    Infinity,
}

impl ProjScalar {
    pub fn logabs(&self, field: &Field) -> Val {
        match self {
            ProjScalar::Finite(x) => field.logabs(x),
            ProjScalar::Infinity => Val::PlusInf,
        }
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            ProjScalar::Finite(x) => Some(x),
            ProjScalar::Infinity => None,
        }
    }
}

impl fmt::Display for ProjScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjScalar::Finite(x) => write!(f, "{}", x),
            ProjScalar::Infinity => write!(f, "inf"),
        }
    }
}

/// No-triple-point condition on a quadruple (indices 0..4):
/// `(x1 != x4 and x2 != x3) or (x1 != x2 and x3 != x4)`.
fn no_triple<T: PartialEq>(q: &[T; 4]) -> bool {
    (q[0] != q[3] && q[1] != q[2]) || (q[0] != q[1] && q[2] != q[3])
}

/// Cross ratio of four collinear points, normalized so that in an affine
/// chart `Bir(inf, -1, 0, z) = z`. Double points are allowed (the quadruple
/// must merely avoid triple points); the value is then 0, -1 or infinity as
/// dictated by the defining formula.
pub fn cross_ratio_points(q: &[ProjPoint; 4]) -> Result<ProjScalar> {
    cross_ratio_chart(&collinear_chart(q)?)
}

/// Homogeneous chart pairs of a no-triple-point collinear quadruple: drop
/// a coordinate where the common line form is nonzero and take primitive
/// representatives on the remaining two.
fn collinear_chart(q: &[ProjPoint; 4]) -> Result<Vec<(Scalar, Scalar)>> {
    if !no_triple(q) {
        return Err(GeomError::TriplePoint);
    }
    // Two distinct members always exist; they span the common line.
    let (a, b) = distinct_pair(q).expect("no-triple-point quadruple has two distinct members");
    let line = join(a, b)?;
    for p in q.iter() {
        if !line.contains(p) {
            return Err(GeomError::NotCollinear);
        }
    }
    let k = line
        .coeffs
        .iter()
        .position(|c| !c.is_zero())
        .expect("line form is nonzero");
    let (i, j) = other_two(k);
    Ok(q.iter()
        .map(|p| {
            let r = p.primitive_rep();
            (r[i].clone(), r[j].clone())
        })
        .collect())
}

fn distinct_pair<'a>(q: &'a [ProjPoint; 4]) -> Option<(&'a ProjPoint, &'a ProjPoint)> {
    for i in 0..4 {
        for j in (i + 1)..4 {
            if q[i] != q[j] {
                return Some((&q[i], &q[j]));
            }
        }
    }
    None
}

fn other_two(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => unreachable!(),
    }
}

/// Cross ratio of four points of the projective line given by homogeneous
/// pairs, via the determinant form of the defining formula.
pub fn cross_ratio_chart(q: &[(Scalar, Scalar)]) -> Result<ProjScalar> {
    assert_eq!(q.len(), 4);
    let d = |a: &(Scalar, Scalar), b: &(Scalar, Scalar)| a.0.mul(&b.1).sub(&a.1.mul(&b.0));
    let num = d(&q[0], &q[1]).mul(&d(&q[2], &q[3]));
    let den = d(&q[0], &q[3]).mul(&d(&q[1], &q[2]));
    if den.is_zero() {
        if num.is_zero() {
            // Both vanish only at a triple point.
            return Err(GeomError::TriplePoint);
        }
        return Ok(ProjScalar::Infinity);
    }
    Ok(ProjScalar::Finite(num.div(&den)?))
}

/// Cross ratio of four concurrent lines: cut the pencil by a transversal
/// line avoiding the common point and take the cross ratio of the four
/// intersection points. Perspectivity invariance makes the choice of
/// transversal immaterial.
pub fn cross_ratio_lines(q: &[ProjLine; 4]) -> Result<ProjScalar> {
    cross_ratio_points(&concurrent_transversal_points(q)?)
}

/// Intersections of a no-triple-line concurrent quadruple with a
/// transversal coordinate line avoiding the common point.
fn concurrent_transversal_points(q: &[ProjLine; 4]) -> Result<[ProjPoint; 4]> {
    if !no_triple(q) {
        return Err(GeomError::TriplePoint);
    }
    let (a, b) = {
        let mut found = None;
        'outer: for i in 0..4 {
            for j in (i + 1)..4 {
                if q[i] != q[j] {
                    found = Some((&q[i], &q[j]));
                    break 'outer;
                }
            }
        }
        found.expect("no-triple-point quadruple has two distinct members")
    };
    let p = meet(a, b)?;
    for l in q.iter() {
        if !l.contains(&p) {
            return Err(GeomError::NotConcurrent);
        }
    }
    let transversal = coordinate_line_avoiding(&p)?;
    Ok([
        meet(&q[0], &transversal)?,
        meet(&q[1], &transversal)?,
        meet(&q[2], &transversal)?,
        meet(&q[3], &transversal)?,
    ])
}

/// A coordinate line not passing through `p`.
pub fn coordinate_line_avoiding(p: &ProjPoint) -> Result<ProjLine> {
    for k in 0..3 {
        if !p.coords[k].is_zero() {
            let mut coeffs = [
                p.coords[k].zero_like(),
                p.coords[k].zero_like(),
                p.coords[k].zero_like(),
            ];
            coeffs[k] = p.coords[k].one_like();
            return ProjLine::new(coeffs);
        }
    }
    Err(GeomError::ZeroVector)
}

/// Valuation form of the cross ratio on chart pairs: `log|Bir|` computed
/// from the valuations of the four determinants, with no products or
/// division of field elements.
pub fn cross_ratio_chart_val(field: &Field, q: &[(Scalar, Scalar)]) -> Result<Val> {
    assert_eq!(q.len(), 4);
    let d = |a: &(Scalar, Scalar), b: &(Scalar, Scalar)| a.0.mul(&b.1).sub(&a.1.mul(&b.0));
    let num_val = field
        .val(&d(&q[0], &q[1]))
        .add(&field.val(&d(&q[2], &q[3])));
    let den_val = field
        .val(&d(&q[0], &q[3]))
        .add(&field.val(&d(&q[1], &q[2])));
    if !num_val.is_finite() && !den_val.is_finite() {
        return Err(GeomError::TriplePoint);
    }
    Ok(den_val.sub(&num_val))
}

/// Geometric cross ratio of collinear points: log|Bir|. Degenerate (double
/// point) quadruples land on 0 or the infinities.
pub fn geom_cross_ratio_points(field: &Field, q: &[ProjPoint; 4]) -> Result<Val> {
    cross_ratio_chart_val(field, &collinear_chart(q)?)
}

/// Geometric cross ratio of concurrent lines.
pub fn geom_cross_ratio_lines(field: &Field, q: &[ProjLine; 4]) -> Result<Val> {
    let pts = concurrent_transversal_points(q)?;
    geom_cross_ratio_points(field, &pts)
}

/// Algebraic triple ratio of a nondegenerate flag triple, via the
/// determinant formula with arbitrary representatives.
pub fn triple_ratio(t: &FlagTriple) -> Result<ProjScalar> {
    if !nondegenerate(t) {
        return Err(GeomError::DegenerateTriple);
    }
    let d = |i: usize, j: usize| t.line(i).eval(t.point(j));
    let num = d(0, 1).mul(&d(1, 2)).mul(&d(2, 0));
    let den = d(0, 2).mul(&d(1, 0)).mul(&d(2, 1));
    if den.is_zero() {
        return Ok(ProjScalar::Infinity);
    }
    Ok(ProjScalar::Finite(num.div(&den)?))
}

/// The pencil of four lines through `p_1` whose cross ratios define the
/// geometric triple ratio: `(D_1, p_1 p_2, p_1 p_23, p_1 p_3)`.
pub fn triple_ratio_pencil(t: &FlagTriple) -> Result<[ProjLine; 4]> {
    if !nondegenerate(t) {
        return Err(GeomError::DegenerateTriple);
    }
    let p23 = t.pij(1, 2)?;
    Ok([
        t.line(0).clone(),
        t.dij(0, 1)?,
        join(t.point(0), &p23)?,
        t.dij(0, 2)?,
    ])
}

/// The dual quadruple of points on `D_1`: `(p_1, D_2∩D_1, D_23∩D_1, D_3∩D_1)`
/// with `D_23 = p_2 p_3`.
pub fn triple_ratio_dual_quadruple(t: &FlagTriple) -> Result<[ProjPoint; 4]> {
    if !nondegenerate(t) {
        return Err(GeomError::DegenerateTriple);
    }
    let d23 = t.dij(1, 2)?;
    Ok([
        t.point(0).clone(),
        meet(t.line(1), t.line(0))?,
        meet(&d23, t.line(0))?,
        meet(t.line(2), t.line(0))?,
    ])
}

fn three_cyclic_shifts<T: Clone>(q: &[T; 4]) -> [[T; 4]; 3] {
    // (x1,x2,x3,x4) -> itself, (x1,x4,x2,x3), (x1,x3,x4,x2)
    [
        q.clone(),
        [q[0].clone(), q[3].clone(), q[1].clone(), q[2].clone()],
        [q[0].clone(), q[2].clone(), q[3].clone(), q[1].clone()],
    ]
}

/// Geometric triple ratio: the three cross ratios of the pencil at `p_1`
/// under cyclic shifts of the last three lines.
pub fn geom_triple_ratio(field: &Field, t: &FlagTriple) -> Result<[Val; 3]> {
    let pencil = triple_ratio_pencil(t)?;
    let shifts = three_cyclic_shifts(&pencil);
    Ok([
        geom_cross_ratio_lines(field, &shifts[0])?,
        geom_cross_ratio_lines(field, &shifts[1])?,
        geom_cross_ratio_lines(field, &shifts[2])?,
    ])
}

/// Dual geometric triple ratio, computed from the quadruple of points on
/// `D_1`. Equals the geometric triple ratio of the reversed triple.
pub fn geom_triple_ratio_dual(field: &Field, t: &FlagTriple) -> Result<[Val; 3]> {
    let quad = triple_ratio_dual_quadruple(t)?;
    let shifts = three_cyclic_shifts(&quad);
    Ok([
        geom_cross_ratio_points(field, &shifts[0])?,
        geom_cross_ratio_points(field, &shifts[1])?,
        geom_cross_ratio_points(field, &shifts[2])?,
    ])
}

/// The standard one-parameter triple of flags: in the basis dual to the
/// three line forms, `p_1 = [0:1:1]`, `p_2 = [Z:0:1]`, `p_3 = [1:1:0]` and
/// `D_i` is the i-th coordinate line. Its triple ratio is exactly `Z`, and
/// it is generic iff `Z` is neither 0 nor -1.
pub fn standard_triple(field: &Field, z: &Scalar) -> Result<FlagTriple> {
    let zero = field.zero();
    let one = field.one();
    let p1 = ProjPoint::new([zero.clone(), one.clone(), one.clone()])?;
    let p2 = ProjPoint::new([z.clone(), zero.clone(), one.clone()])?;
    let p3 = ProjPoint::new([one.clone(), one.clone(), zero.clone()])?;
    let d1 = ProjLine::new([one.clone(), zero.clone(), zero.clone()])?;
    let d2 = ProjLine::new([zero.clone(), one.clone(), zero.clone()])?;
    let d3 = ProjLine::new([zero.clone(), zero.clone(), one.clone()])?;
    Ok(FlagTriple::new([
        Flag::new(p1, d1)?,
        Flag::new(p2, d2)?,
        Flag::new(p3, d3)?,
    ]))
}

/// The matrix carrying the frame of coordinate points to `(p_2, p_3, p_1)`
/// of the standard triple; it maps the line-frame flat onto the point-frame
/// flat of that configuration.
pub fn standard_triple_matrix(field: &Field, z: &Scalar) -> Result<crate::linalg::Mat3> {
    if z.is_zero() {
        return Err(GeomError::PreconditionViolated("Z must be nonzero".into()));
    }
    let zero = field.zero();
    let one = field.one();
    let zinv = z.inv()?;
    Ok(crate::linalg::Mat3::from_cols(
        [one.clone(), zero.clone(), zinv],
        [one.clone(), one.clone(), zero.clone()],
        [zero.clone(), one.clone(), one.clone()],
    ))
}
