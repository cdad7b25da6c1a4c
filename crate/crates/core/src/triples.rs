//! Geometry of a generic triple of ideal chambers: the five natural flats,
//! the six special points, the tripod / flat-triangle classification, and
//! the verification of all coordinate statements attached to them.

use crate::bpoints::{
    cartan_vector, distance_sq, equals, flat_coords, BuildingPoint, MarkedFlat, Transition,
};
use crate::error::{GeomError, Result};
use crate::linalg::Mat3;
use crate::modelflat::{from_src, max_rat, neg_part, pos_part, FlatVector};
use crate::projplane::{generic, meet, triple_ratio, FlagTriple, ProjPoint, ProjScalar};
use crate::transverse::{
    center_frame, center_tree, quotient_point, restrict_point, second_point_on_line, tree_equals,
    TwoSpace,
};
use crate::valfield::{Field, Scalar};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Identifier of one of the five flats of a generic triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FlatId {
    A12,
    A23,
    A31,
    Ap,
    AD,
}

impl FlatId {
    pub const ALL: [FlatId; 5] = [FlatId::A12, FlatId::A23, FlatId::A31, FlatId::Ap, FlatId::AD];

    /// The flat joining flags i and i+1 (0-based).
    pub fn pair(i: usize) -> FlatId {
        match i % 3 {
            0 => FlatId::A12,
            1 => FlatId::A23,
            _ => FlatId::A31,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FlatId::A12 => "A12",
            FlatId::A23 => "A23",
            FlatId::A31 => "A31",
            FlatId::Ap => "Ap",
            FlatId::AD => "AD",
        }
    }

    pub fn parse(s: &str) -> Result<FlatId> {
        match s {
            "A12" | "a12" => Ok(FlatId::A12),
            "A23" | "a23" => Ok(FlatId::A23),
            "A31" | "a31" => Ok(FlatId::A31),
            "Ap" | "ap" | "AP" => Ok(FlatId::Ap),
            "AD" | "ad" | "Ad" => Ok(FlatId::AD),
            other => Err(GeomError::Parse(format!("unknown flat id '{}'", other))),
        }
    }
}

impl fmt::Display for FlatId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// The five flats with their markings. `aij[i]` joins flags i and i+1 with
/// the marking sending the model chamber to flag i+1; `ap` is marked by
/// `(p_1, p_1 p_2)` and `ad` by `(D_1 ∩ D_2, D_1)`.
#[derive(Clone, Debug)]
pub struct FiveFlats {
    pub aij: [MarkedFlat; 3],
    pub ap: MarkedFlat,
    pub ad: MarkedFlat,
}

impl FiveFlats {
    pub fn flat(&self, id: FlatId) -> &MarkedFlat {
        match id {
            FlatId::A12 => &self.aij[0],
            FlatId::A23 => &self.aij[1],
            FlatId::A31 => &self.aij[2],
            FlatId::Ap => &self.ap,
            FlatId::AD => &self.ad,
        }
    }
}

/// Ray class of the invariant vector under ultrametricity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayClass {
    /// (0, +, -): tripod direction.
    ZeroPlusMinus,
    /// (-, 0, +).
    MinusZeroPlus,
    /// (+, -, 0).
    PlusMinusZero,
    Zero,
}

impl RayClass {
    pub fn label(&self) -> &'static str {
        match self {
            RayClass::ZeroPlusMinus => "(0,+,-)",
            RayClass::MinusZeroPlus => "(-,0,+)",
            RayClass::PlusMinusZero => "(+,-,0)",
            RayClass::Zero => "zero",
        }
    }
}

/// Geometric type of a generic triple.
#[derive(Clone, Debug)]
pub enum TripleKind {
    Tripod {
        x: BuildingPoint,
        x_star: BuildingPoint,
    },
    FlatTriangle {
        x: [BuildingPoint; 3],
    },
    CoincidentPoint {
        x: BuildingPoint,
    },
}

impl TripleKind {
    pub fn label(&self) -> &'static str {
        match self {
            TripleKind::Tripod { .. } => "tripod",
            TripleKind::FlatTriangle { .. } => "flat_triangle",
            TripleKind::CoincidentPoint { .. } => "coincident_point",
        }
    }
}

/// Full classification data of a generic triple.
#[derive(Clone, Debug)]
pub struct TripleReport {
    pub z: [BigRational; 3],
    pub triple_ratio: Scalar,
    pub ray_class: RayClass,
    pub kind: TripleKind,
    pub y: [BuildingPoint; 3],
    pub y_star: [BuildingPoint; 3],
    pub verification: BTreeMap<String, String>,
}

/// One root inequality `alpha_root(x) rel threshold` in the simple-root
/// coordinates of a marked flat.
#[derive(Clone, Debug)]
pub struct RootIneq {
    pub root: usize,
    pub rel: Rel,
    pub threshold: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
}

impl RootIneq {
    pub fn holds(&self, roots: &[BigRational; 3]) -> bool {
        match self.rel {
            Rel::Le => roots[self.root] <= self.threshold,
            Rel::Ge => roots[self.root] >= self.threshold,
        }
    }

    pub fn holds_strictly(&self, roots: &[BigRational; 3]) -> bool {
        match self.rel {
            Rel::Le => roots[self.root] < self.threshold,
            Rel::Ge => roots[self.root] > self.threshold,
        }
    }
}

impl fmt::Display for RootIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.rel {
            Rel::Le => "<=",
            Rel::Ge => ">=",
        };
        write!(f, "a{}(x) {} {}", self.root + 1, rel, self.threshold)
    }
}

/// Cell of the partition of one flat by another: an exact inequality
/// system anchored at special points. An empty cell encodes an empty
/// intersection.
#[derive(Clone, Debug)]
pub struct CellDescription {
    pub other: FlatId,
    pub label: String,
    pub ineqs: Vec<RootIneq>,
    pub empty: bool,
}

impl CellDescription {
    pub fn contains(&self, roots: &[BigRational; 3]) -> bool {
        !self.empty && self.ineqs.iter().all(|q| q.holds(roots))
    }

    pub fn contains_strictly(&self, roots: &[BigRational; 3]) -> bool {
        !self.empty && self.ineqs.iter().all(|q| q.holds_strictly(roots))
    }
}

/// Result of the grid partition oracle on one flat.
#[derive(Clone, Debug)]
pub struct PartitionReport {
    pub flat: FlatId,
    pub grid_points: usize,
    pub failures: Vec<String>,
}

impl PartitionReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All derived data of a generic triple; the entry point for the
/// classification and verification operations.
pub struct TripleContext {
    pub field: Field,
    pub triple: FlagTriple,
    pub z: [BigRational; 3],
    pub algebraic_ratio: Scalar,
    pub flats: FiveFlats,
    pub y: [BuildingPoint; 3],
    pub y_star: [BuildingPoint; 3],
}

impl TripleContext {
    pub fn new(field: &Field, triple: &FlagTriple) -> Result<TripleContext> {
        if !generic(triple) {
            return Err(GeomError::NotGeneric);
        }
        let zv = crate::projplane::geom_triple_ratio(field, triple)?;
        let mut z = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
        for (i, v) in zv.iter().enumerate() {
            z[i] = v.expect_finite("geometric triple ratio of a generic triple")?;
        }
        let algebraic_ratio = match triple_ratio(triple)? {
            ProjScalar::Finite(s) => s,
            ProjScalar::Infinity => {
                return Err(GeomError::Internal(
                    "generic triple has infinite triple ratio".into(),
                ))
            }
        };
        let flats = five_flats(triple)?;
        let (y, y_star) = special_points(field, triple)?;
        Ok(TripleContext {
            field: field.clone(),
            triple: triple.clone(),
            z,
            algebraic_ratio,
            flats,
            y,
            y_star,
        })
    }

    pub fn ray_class(&self) -> RayClass {
        ray_class(&self.z)
    }

    pub fn flat(&self, id: FlatId) -> &MarkedFlat {
        self.flats.flat(id)
    }

    /// Coordinates of a building point in one of the five flats; missing
    /// membership for a point that must lie there is an internal error.
    pub fn coords_in(&self, x: &BuildingPoint, id: FlatId) -> Result<FlatVector> {
        flat_coords(&self.field, x, self.flat(id))?.ok_or_else(|| {
            GeomError::Internal(format!("expected point to lie on flat {}", id.label()))
        })
    }

    /// The triangle vertices for the flat-triangle type; `x[i]` is the
    /// vertex whose chamber germ is opposite to flag i.
    pub fn triangle_vertices(&self) -> [BuildingPoint; 3] {
        let z1 = &self.z[0];
        std::array::from_fn(|i| {
            if z1 >= &BigRational::zero() {
                self.y[(i + 2) % 3].clone()
            } else {
                self.y[(i + 1) % 3].clone()
            }
        })
    }

    pub fn kind(&self) -> TripleKind {
        let zero = BigRational::zero();
        if self.z.iter().all(|v| v.is_zero()) {
            TripleKind::CoincidentPoint {
                x: self.y[0].clone(),
            }
        } else if self.z[0].is_zero() && self.z[1] > zero {
            TripleKind::Tripod {
                x: self.y[0].clone(),
                x_star: self.y_star[0].clone(),
            }
        } else {
            TripleKind::FlatTriangle {
                x: self.triangle_vertices(),
            }
        }
    }

    pub fn report(&self) -> Result<TripleReport> {
        Ok(TripleReport {
            z: self.z.clone(),
            triple_ratio: self.algebraic_ratio.clone(),
            ray_class: self.ray_class(),
            kind: self.kind(),
            y: self.y.clone(),
            y_star: self.y_star.clone(),
            verification: self.verify_theorems()?,
        })
    }
}

/// Tolerant sign-pattern label for an invariant triple; merely
/// nondegenerate triples may fall outside the four generic classes.
pub fn ray_class_label(z1: &BigRational, z2: &BigRational, z3: &BigRational) -> &'static str {
    let zero = BigRational::zero();
    if z1.is_zero() && z2.is_zero() && z3.is_zero() {
        "zero"
    } else if z1.is_zero() && z2 > &zero && z3 == &-z2.clone() {
        RayClass::ZeroPlusMinus.label()
    } else if z1 < &zero && z2.is_zero() && z3 == &-z1.clone() {
        RayClass::MinusZeroPlus.label()
    } else if z1 > &zero && z2 == &-z1.clone() && z3.is_zero() {
        RayClass::PlusMinusZero.label()
    } else {
        "irregular"
    }
}

fn ray_class(z: &[BigRational; 3]) -> RayClass {
    let zero = BigRational::zero();
    if z.iter().all(|v| v.is_zero()) {
        RayClass::Zero
    } else if z[0].is_zero() {
        debug_assert!(z[1] > zero && z[2] < zero);
        RayClass::ZeroPlusMinus
    } else if z[0] < zero {
        debug_assert!(z[1].is_zero() && z[2] > zero);
        RayClass::MinusZeroPlus
    } else {
        debug_assert!(z[1] < zero && z[2].is_zero());
        RayClass::PlusMinusZero
    }
}

/// The five natural flats of a generic triple, with their markings.
pub fn five_flats(t: &FlagTriple) -> Result<FiveFlats> {
    if !generic(t) {
        return Err(GeomError::NotGeneric);
    }
    let mut aij = Vec::with_capacity(3);
    for i in 0..3 {
        let j = (i + 1) % 3;
        let pij = t.pij(i, j)?;
        // Basis (p_j, D_i cap D_j, p_i): the marking sends the model
        // chamber to F_j = ([b_1], b_1 + b_2).
        let m = Mat3::from_cols(t.point(j).rep(), pij.rep(), t.point(i).rep());
        aij.push(MarkedFlat::new(m)?);
    }
    let ap = MarkedFlat::new(Mat3::from_cols(
        t.point(0).rep(),
        t.point(1).rep(),
        t.point(2).rep(),
    ))?;
    let p12 = t.pij(0, 1)?;
    let p31 = t.pij(2, 0)?;
    let p23 = t.pij(1, 2)?;
    // Basis (D1∩D2, D3∩D1, D2∩D3): the marking sends the model chamber to
    // (D1∩D2, D1).
    let ad = MarkedFlat::new(Mat3::from_cols(p12.rep(), p31.rep(), p23.rep()))?;
    let aij: [MarkedFlat; 3] = aij.try_into().map_err(|_| GeomError::Internal("aij".into()))?;
    Ok(FiveFlats { aij, ap, ad })
}

/// The six special points: `y[k]` is the center of the projective frame
/// `(p_1, p_2, p_3, D_i ∩ D_j)` and `y*[k]` the dual center of
/// `(D_1, D_2, D_3, p_i p_j)`, for {i, j, k} = {1, 2, 3}.
pub fn special_points(
    field: &Field,
    t: &FlagTriple,
) -> Result<([BuildingPoint; 3], [BuildingPoint; 3])> {
    let mut y = Vec::with_capacity(3);
    let mut ystar = Vec::with_capacity(3);
    for k in 0..3 {
        let i = (k + 1) % 3;
        let j = (k + 2) % 3;
        let pij = t.pij(i, j)?;
        y.push(center_frame(
            field,
            &[
                t.point(0).clone(),
                t.point(1).clone(),
                t.point(2).clone(),
                pij,
            ],
        )?);
        let dij = t.dij(i, j)?;
        let dual_pts = [
            ProjPoint::new(t.line(0).rep())?,
            ProjPoint::new(t.line(1).rep())?,
            ProjPoint::new(t.line(2).rep())?,
            ProjPoint::new(dij.rep())?,
        ];
        let dual_center = center_frame(field, &dual_pts)?;
        ystar.push(crate::bpoints::dualize(field, &dual_center)?);
    }
    Ok((
        y.try_into().map_err(|_| GeomError::Internal("y".into()))?,
        ystar
            .try_into()
            .map_err(|_| GeomError::Internal("y_star".into()))?,
    ))
}

/// Classify a generic triple and produce the full report.
pub fn classify(field: &Field, t: &FlagTriple) -> Result<TripleReport> {
    TripleContext::new(field, t)?.report()
}

fn roots_of(c: &FlatVector) -> [BigRational; 3] {
    c.roots()
}

/// Sector cell anchored at `anchor`: the cone over the ideal directions of
/// basis classes `e_base` and `e_{base+1}` of the current marking (negated
/// if `negated`), expressed as two root inequalities.
fn sector_cell(anchor: &[BigRational; 3], base: usize, negated: bool) -> Vec<RootIneq> {
    let r1 = (base + 1) % 3;
    let r2 = (base + 2) % 3;
    let (rel1, rel2) = if negated {
        (Rel::Le, Rel::Ge)
    } else {
        (Rel::Ge, Rel::Le)
    };
    vec![
        RootIneq {
            root: r1,
            rel: rel1,
            threshold: anchor[r1].clone(),
        },
        RootIneq {
            root: r2,
            rel: rel2,
            threshold: anchor[r2].clone(),
        },
    ]
}

/// Inequality description of the filled singular triangle with the given
/// vertices (one root constant along each edge). Returns None when the
/// vertices do not span a singular triangle of the expected shape.
fn triangle_ineqs(vertices: &[[BigRational; 3]; 3]) -> Option<Vec<RootIneq>> {
    let all_equal = vertices[0] == vertices[1] && vertices[1] == vertices[2];
    if all_equal {
        // Degenerate triangle: a single point, pinned by two equalities.
        return Some(vec![
            RootIneq {
                root: 0,
                rel: Rel::Le,
                threshold: vertices[0][0].clone(),
            },
            RootIneq {
                root: 0,
                rel: Rel::Ge,
                threshold: vertices[0][0].clone(),
            },
            RootIneq {
                root: 1,
                rel: Rel::Le,
                threshold: vertices[0][1].clone(),
            },
            RootIneq {
                root: 1,
                rel: Rel::Ge,
                threshold: vertices[0][1].clone(),
            },
        ]);
    }
    let mut ineqs = Vec::new();
    for a in 0..3 {
        let b = (a + 1) % 3;
        let c = (a + 2) % 3;
        // Find the root constant along edge (a, b).
        let mut root = None;
        for r in 0..3 {
            if vertices[a][r] == vertices[b][r] {
                root = Some(r);
                break;
            }
        }
        let r = root?;
        let third = &vertices[c][r];
        let threshold = vertices[a][r].clone();
        if third >= &threshold {
            ineqs.push(RootIneq {
                root: r,
                rel: Rel::Ge,
                threshold,
            });
        } else {
            ineqs.push(RootIneq {
                root: r,
                rel: Rel::Le,
                threshold,
            });
        }
    }
    Some(ineqs)
}

impl TripleContext {
    /// The exact inequality systems describing the intersections of one
    /// flat with the other four, anchored at the special points.
    pub fn sector_descriptions(&self, id: FlatId) -> Result<Vec<CellDescription>> {
        let zero = BigRational::zero();
        let tripod_proper = self.z[0].is_zero() && self.z[1] > zero;
        match id {
            FlatId::A12 | FlatId::A23 | FlatId::A31 => {
                let i = match id {
                    FlatId::A12 => 0,
                    FlatId::A23 => 1,
                    _ => 2,
                };
                let k = (i + 2) % 3;
                let cy = roots_of(&self.coords_in(&self.y[k], id)?);
                let cys = roots_of(&self.coords_in(&self.y_star[k], id)?);
                let mut cells = Vec::new();
                // In this marking the frame directions are p_j -> e1,
                // p_ij -> e2, p_i -> e3.
                cells.push(CellDescription {
                    other: FlatId::Ap,
                    label: format!("{}∩Ap", id.label()),
                    ineqs: sector_cell(&cy, 2, false),
                    empty: false,
                });
                cells.push(CellDescription {
                    other: FlatId::AD,
                    label: format!("{}∩AD", id.label()),
                    ineqs: sector_cell(&cys, 2, true),
                    empty: false,
                });
                let jk = FlatId::pair((i + 1) % 3);
                cells.push(CellDescription {
                    other: jk,
                    label: format!("{}∩{}", id.label(), jk.label()),
                    ineqs: vec![
                        RootIneq {
                            root: 0,
                            rel: Rel::Ge,
                            threshold: cys[0].clone(),
                        },
                        RootIneq {
                            root: 1,
                            rel: Rel::Ge,
                            threshold: cy[1].clone(),
                        },
                        RootIneq {
                            root: 2,
                            rel: Rel::Le,
                            threshold: if cy[2] <= cys[2] {
                                cy[2].clone()
                            } else {
                                cys[2].clone()
                            },
                        },
                    ],
                    empty: false,
                });
                let ki = FlatId::pair((i + 2) % 3);
                cells.push(CellDescription {
                    other: ki,
                    label: format!("{}∩{}", id.label(), ki.label()),
                    ineqs: vec![
                        RootIneq {
                            root: 0,
                            rel: Rel::Le,
                            threshold: cy[0].clone(),
                        },
                        RootIneq {
                            root: 1,
                            rel: Rel::Le,
                            threshold: cys[1].clone(),
                        },
                        RootIneq {
                            root: 2,
                            rel: Rel::Ge,
                            threshold: max_rat(&cy[2], &cys[2]),
                        },
                    ],
                    empty: false,
                });
                Ok(cells)
            }
            FlatId::Ap => {
                let mut cells = Vec::new();
                let anchors: Vec<[BigRational; 3]> = (0..3)
                    .map(|k| Ok(roots_of(&self.coords_in(&self.y[k], FlatId::Ap)?)))
                    .collect::<Result<Vec<_>>>()?;
                for i in 0..3 {
                    let other = FlatId::pair(i);
                    cells.push(CellDescription {
                        other,
                        label: format!("Ap∩{}", other.label()),
                        ineqs: sector_cell(&anchors[(i + 2) % 3], i, false),
                        empty: false,
                    });
                }
                let delta_vertices = [
                    anchors[0].clone(),
                    anchors[1].clone(),
                    anchors[2].clone(),
                ];
                cells.push(if tripod_proper {
                    CellDescription {
                        other: FlatId::AD,
                        label: "Ap∩AD".into(),
                        ineqs: Vec::new(),
                        empty: true,
                    }
                } else {
                    CellDescription {
                        other: FlatId::AD,
                        label: "Ap∩AD".into(),
                        ineqs: triangle_ineqs(&delta_vertices).ok_or_else(|| {
                            GeomError::Internal("triangle vertices are not singular".into())
                        })?,
                        empty: false,
                    }
                });
                Ok(cells)
            }
            FlatId::AD => {
                let mut cells = Vec::new();
                let anchors: Vec<[BigRational; 3]> = (0..3)
                    .map(|k| Ok(roots_of(&self.coords_in(&self.y_star[k], FlatId::AD)?)))
                    .collect::<Result<Vec<_>>>()?;
                // Frame directions: D1 -> -e3, D2 -> -e2, D3 -> -e1; the
                // sector toward (D_i, D_{i+1}) is the negated cone of the
                // consecutive pair below.
                let base_for = [1usize, 0, 2];
                for i in 0..3 {
                    let other = FlatId::pair(i);
                    cells.push(CellDescription {
                        other,
                        label: format!("AD∩{}", other.label()),
                        ineqs: sector_cell(&anchors[(i + 2) % 3], base_for[i], true),
                        empty: false,
                    });
                }
                let delta_vertices = [
                    anchors[0].clone(),
                    anchors[1].clone(),
                    anchors[2].clone(),
                ];
                cells.push(if tripod_proper {
                    CellDescription {
                        other: FlatId::Ap,
                        label: "AD∩Ap".into(),
                        ineqs: Vec::new(),
                        empty: true,
                    }
                } else {
                    CellDescription {
                        other: FlatId::Ap,
                        label: "AD∩Ap".into(),
                        ineqs: triangle_ineqs(&delta_vertices).ok_or_else(|| {
                            GeomError::Internal("dual triangle vertices are not singular".into())
                        })?,
                        empty: false,
                    }
                });
                Ok(cells)
            }
        }
    }

    /// Grid partition oracle: on a rational grid covering the special
    /// points of the flat, checks that the inequality descriptions agree
    /// pointwise with independent flat-membership tests, that the cells
    /// cover the grid, and that strict interiors are disjoint.
    ///
    /// Grid points are independent (no shared mutable state) and the
    /// failure lists merge associatively, so callers may shard the grid.
    pub fn partition_check(
        &self,
        id: FlatId,
        margin: &BigRational,
        step: &BigRational,
    ) -> Result<PartitionReport> {
        let cells = self.sector_descriptions(id)?;
        let flat = self.flat(id);
        let transitions: Vec<Transition> = cells
            .iter()
            .map(|c| Transition::new(&self.field, flat.basis(), self.flat(c.other).basis()))
            .collect::<Result<Vec<_>>>()?;
        // Bounding box over the anchor thresholds in simple-root
        // coordinates.
        let mut a1s: Vec<BigRational> = Vec::new();
        let mut a2s: Vec<BigRational> = Vec::new();
        for c in &cells {
            for q in &c.ineqs {
                match q.root {
                    0 => a1s.push(q.threshold.clone()),
                    1 => a2s.push(q.threshold.clone()),
                    _ => {}
                }
            }
        }
        if a1s.is_empty() {
            a1s.push(BigRational::zero());
        }
        if a2s.is_empty() {
            a2s.push(BigRational::zero());
        }
        let lo1 = a1s.iter().min().unwrap() - margin;
        let hi1 = a1s.iter().max().unwrap() + margin;
        let lo2 = a2s.iter().min().unwrap() - margin;
        let hi2 = a2s.iter().max().unwrap() + margin;
        let mut failures = Vec::new();
        let mut count = 0usize;
        let mut a1 = lo1.clone();
        while a1 <= hi1 {
            let mut a2 = lo2.clone();
            while a2 <= hi2 {
                count += 1;
                let c = from_src(&a1, &a2);
                let roots = c.roots();
                let mut n_member = 0usize;
                let mut n_strict = 0usize;
                for (cell, tr) in cells.iter().zip(&transitions) {
                    let by_ineq = cell.contains(&roots);
                    let by_flat = tr.coords_in_target(&c).is_some();
                    if by_ineq != by_flat {
                        failures.push(format!(
                            "{} at ({}, {}): inequality says {}, membership says {}",
                            cell.label, a1, a2, by_ineq, by_flat
                        ));
                    }
                    if by_flat {
                        n_member += 1;
                    }
                    if cell.contains_strictly(&roots) {
                        n_strict += 1;
                    }
                }
                if n_member == 0 {
                    failures.push(format!("({}, {}) not covered by any cell", a1, a2));
                }
                if n_strict > 0 && n_member != 1 {
                    failures.push(format!(
                        "({}, {}) strictly inside a cell but in {} cells",
                        a1, a2, n_member
                    ));
                }
                a2 += step;
            }
            a1 += step;
        }
        Ok(PartitionReport {
            flat: id,
            grid_points: count,
            failures,
        })
    }
}

fn check(map: &mut BTreeMap<String, String>, name: &str, ok: bool, detail: &str) {
    map.insert(
        name.to_string(),
        if ok {
            "pass".to_string()
        } else {
            format!("fail: {}", detail)
        },
    );
}

impl TripleContext {
    /// Difference vector `to - from` in the marking of the given flat.
    fn vector_in(&self, id: FlatId, from: &BuildingPoint, to: &BuildingPoint) -> Result<FlatVector> {
        let a = self.coords_in(from, id)?;
        let b = self.coords_in(to, id)?;
        Ok(b.sub(&a))
    }

    /// Runs every theorem check applicable to the triple's type; failures
    /// become report entries, never errors.
    pub fn verify_theorems(&self) -> Result<BTreeMap<String, String>> {
        let mut out = BTreeMap::new();
        let zero = BigRational::zero();
        let z1 = self.z[0].clone();
        let z2 = self.z[1].clone();
        let z3 = self.z[2].clone();

        // Invariant algebra.
        check(
            &mut out,
            "invariants_sum_zero",
            (&z1 + &z2 + &z3).is_zero(),
            "Z1 + Z2 + Z3 != 0",
        );
        let ultra = if z1 > zero {
            z3.is_zero() && z2 == -z1.clone()
        } else if z1 < zero {
            z2.is_zero() && z3 == -z1.clone()
        } else {
            z2 >= zero && z3 == -z2.clone()
        };
        check(&mut out, "invariants_ultrametric", ultra, "ray class violated");
        // Algebraic-geometric relation.
        let tri = &self.algebraic_ratio;
        let one_plus = tri.add(&tri.one_like());
        let alg_geom = self.field.logabs(tri).finite() == Some(&z1)
            && (-self.field.logabs(&one_plus)).finite() == Some(&z2)
            && {
                let inv = tri.inv().map(|i| i.add(&tri.one_like()));
                match inv {
                    Ok(v) => self.field.logabs(&v).finite() == Some(&z3),
                    Err(_) => false,
                }
            };
        check(
            &mut out,
            "algebraic_geometric_relation",
            alg_geom,
            "Z != (log|Tri|, -log|1+Tri|, log|1+1/Tri|)",
        );

        // Special points computed two ways: as centers in Ap / AD and as
        // projections onto A_ij.
        let mut two_ways = true;
        for k in 0..3 {
            let i = (k + 1) % 3;
            let j = (k + 2) % 3;
            let pij = self.triple.pij(i, j)?;
            let frame = [
                self.triple.point(i).clone(),
                self.triple.point(j).clone(),
                pij,
            ];
            let proj = crate::transverse::project_ideal_point_on_flat(
                &self.field,
                self.triple.point(k),
                &frame,
            )?;
            if !equals(&self.field, &proj, &self.y[k])? {
                two_ways = false;
            }
            let dij = self.triple.dij(i, j)?;
            let line_frame = [
                self.triple.line(i).clone(),
                self.triple.line(j).clone(),
                dij,
            ];
            let proj_star = crate::transverse::project_ideal_line_on_flat(
                &self.field,
                self.triple.line(k),
                &line_frame,
            )?;
            if !equals(&self.field, &proj_star, &self.y_star[k])? {
                two_ways = false;
            }
        }
        check(
            &mut out,
            "centers_match_projections",
            two_ways,
            "center and projection disagree",
        );

        // Coordinates of y*_k -> y_k in each A_ij are (Z2, Z3).
        let mut coords_ok = true;
        for i in 0..3 {
            let k = (i + 2) % 3;
            let id = FlatId::pair(i);
            let v = self.vector_in(id, &self.y_star[k], &self.y[k])?;
            let (a1, a2) = v.simple_root_coords();
            if a1 != z2 || a2 != z3 {
                coords_ok = false;
            }
        }
        check(
            &mut out,
            "aij_ystar_to_y_coords",
            coords_ok,
            "y*->y is not (Z2, Z3) in some A_ij",
        );

        // In Ap: y_2 -> y_3 is (Z1, 0); in AD: y*_2 -> y*_3 is (0, -Z1).
        let v = self.vector_in(FlatId::Ap, &self.y[1], &self.y[2])?;
        check(
            &mut out,
            "ap_y2_to_y3_coords",
            v.simple_root_coords() == (z1.clone(), zero.clone()),
            "y2->y3 in Ap is not (Z1, 0)",
        );
        let v = self.vector_in(FlatId::AD, &self.y_star[1], &self.y_star[2])?;
        check(
            &mut out,
            "ad_ystar2_to_ystar3_coords",
            v.simple_root_coords() == (zero.clone(), -z1.clone()),
            "y*2->y*3 in AD is not (0, -Z1)",
        );

        match self.kind() {
            TripleKind::Tripod { x, x_star } => {
                self.verify_tripod(&mut out, &x, &x_star)?;
            }
            TripleKind::FlatTriangle { x } => {
                self.verify_triangle(&mut out, &x)?;
            }
            TripleKind::CoincidentPoint { x } => {
                self.verify_coincident(&mut out, &x)?;
            }
        }
        Ok(out)
    }

    fn verify_tripod(
        &self,
        out: &mut BTreeMap<String, String>,
        x: &BuildingPoint,
        x_star: &BuildingPoint,
    ) -> Result<()> {
        let mut eq = true;
        for k in 1..3 {
            eq &= equals(&self.field, &self.y[0], &self.y[k])?;
            eq &= equals(&self.field, &self.y_star[0], &self.y_star[k])?;
        }
        check(out, "tripod_y_points_coincide", eq, "y or y* points differ");

        // x -> x* is (-Z2, Z2) in each A_ij marking.
        let mut coords_ok = true;
        for i in 0..3 {
            let id = FlatId::pair(i);
            let v = self.vector_in(id, x, x_star)?;
            let (a1, a2) = v.simple_root_coords();
            if a1 != -self.z[1].clone() || a2 != self.z[1] {
                coords_ok = false;
            }
        }
        check(
            out,
            "tripod_segment_coords",
            coords_ok,
            "x->x* is not (-Z2, Z2)",
        );

        // Eleven sample points of [x, x*] lie on all three A_ij.
        let a12 = FlatId::A12;
        let cx = self.coords_in(x, a12)?;
        let cxs = self.coords_in(x_star, a12)?;
        let dir = cxs.sub(&cx);
        let mut seg_ok = true;
        for k in 0..=10 {
            let s = BigRational::new(BigInt::from(k), BigInt::from(10));
            let c = cx.add(&dir.scale(&s));
            let pt = self.flat(a12).point_at(&c);
            for other in [FlatId::A23, FlatId::A31] {
                if flat_coords(&self.field, &pt, self.flat(other))?.is_none() {
                    seg_ok = false;
                }
            }
        }
        check(
            out,
            "tripod_segment_in_three_flats",
            seg_ok,
            "a sample of [x, x*] left some A_ij",
        );

        // Sampled minimality of the segment between Ap and AD.
        let one = BigRational::one();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let failures = self.minimality_failures(x, x_star, &one, &half)?;
        check(
            out,
            "tripod_segment_minimality_sampled",
            failures.is_empty(),
            &failures.first().cloned().unwrap_or_default(),
        );
        Ok(())
    }

    /// Grid spot-check that no pair (point of Ap, point of AD) is closer
    /// than the tripod segment. A refutation search, not a proof.
    pub fn minimality_failures(
        &self,
        x: &BuildingPoint,
        x_star: &BuildingPoint,
        margin: &BigRational,
        step: &BigRational,
    ) -> Result<Vec<String>> {
        let d0 = distance_sq(&self.field, x, x_star)?;
        let ca = self.coords_in(x, FlatId::Ap)?;
        let cb = self.coords_in(x_star, FlatId::AD)?;
        let tr = Transition::new(
            &self.field,
            self.flat(FlatId::Ap).basis(),
            self.flat(FlatId::AD).basis(),
        )?;
        let mut failures = Vec::new();
        let (a1, a2) = ca.simple_root_coords();
        let (b1, b2) = cb.simple_root_coords();
        let mut da1 = -margin.clone();
        while &da1 <= margin {
            let mut da2 = -margin.clone();
            while &da2 <= margin {
                let pa = from_src(&(&a1 + &da1), &(&a2 + &da2));
                let mut db1 = -margin.clone();
                while &db1 <= margin {
                    let mut db2 = -margin.clone();
                    while &db2 <= margin {
                        let pb = from_src(&(&b1 + &db1), &(&b2 + &db2));
                        let d = tr.cartan(&pa, &pb).norm_sq();
                        if d < d0 {
                            failures.push(format!(
                                "pair at ({},{}) x ({},{}) has squared distance {} < {}",
                                &a1 + &da1,
                                &a2 + &da2,
                                &b1 + &db1,
                                &b2 + &db2,
                                d,
                                d0
                            ));
                        }
                        db2 += step;
                    }
                    db1 += step;
                }
                da2 += step;
            }
            da1 += step;
        }
        Ok(failures)
    }

    fn verify_triangle(
        &self,
        out: &mut BTreeMap<String, String>,
        x: &[BuildingPoint; 3],
    ) -> Result<()> {
        let zero = BigRational::zero();
        let z1 = self.z[0].clone();
        // Edge vectors: x_i -> x_{i+1} is (Z1+, Z1-) in the A_{i,i+1}
        // marking.
        let want = (pos_part(&z1), neg_part(&z1));
        let mut edges_ok = true;
        for i in 0..3 {
            let id = FlatId::pair(i);
            let v = self.vector_in(id, &x[i], &x[(i + 1) % 3])?;
            if v.simple_root_coords() != want {
                edges_ok = false;
            }
        }
        check(
            out,
            "triangle_edge_vectors",
            edges_ok,
            "edge vector is not (Z1+, Z1-)",
        );

        // Identities x_i = y_{i-1} = y*_{i+1} (Z1 >= 0) or the reversed
        // labeling (Z1 <= 0).
        let mut ids_ok = true;
        for i in 0..3 {
            let (yy, ys) = if z1 >= zero {
                (&self.y[(i + 2) % 3], &self.y_star[(i + 1) % 3])
            } else {
                (&self.y[(i + 1) % 3], &self.y_star[(i + 2) % 3])
            };
            ids_ok &= equals(&self.field, &x[i], yy)?;
            ids_ok &= equals(&self.field, &x[i], ys)?;
        }
        check(
            out,
            "triangle_vertex_identities",
            ids_ok,
            "x_i does not match the stated y / y*",
        );

        // A_ij ∩ A_ik is the Weyl chamber from x_i toward F_i: grid check
        // in the A_{i,i+1} marking, where that chamber is the negative
        // cone at x_i.
        let mut chamber_ok = true;
        let step = BigRational::new(BigInt::from(1), BigInt::from(2));
        let margin = BigRational::from_integer(BigInt::from(2));
        for i in 0..3 {
            let id = FlatId::pair(i);
            let ki = FlatId::pair((i + 2) % 3);
            let cx = self.coords_in(&x[i], id)?;
            let (cx1, cx2) = cx.simple_root_coords();
            let tr = Transition::new(&self.field, self.flat(id).basis(), self.flat(ki).basis())?;
            let mut d1 = -margin.clone();
            while d1 <= margin {
                let mut d2 = -margin.clone();
                while d2 <= margin {
                    let c = from_src(&(&cx1 + &d1), &(&cx2 + &d2));
                    let member = tr.coords_in_target(&c).is_some();
                    let in_chamber = d1 <= zero && d2 <= zero;
                    if member != in_chamber {
                        chamber_ok = false;
                    }
                    d2 += &step;
                }
                d1 += &step;
            }
        }
        check(
            out,
            "triangle_weyl_chamber_grid",
            chamber_ok,
            "A_ij ∩ A_ik differs from the chamber at x_i",
        );

        // Delta = Ap ∩ AD on the grid is covered by the partition oracle;
        // here assert the vertices themselves lie in both flats.
        let mut delta_ok = true;
        for v in x.iter() {
            delta_ok &= flat_coords(&self.field, v, self.flat(FlatId::Ap))?.is_some();
            delta_ok &= flat_coords(&self.field, v, self.flat(FlatId::AD))?.is_some();
        }
        check(
            out,
            "triangle_vertices_in_ap_and_ad",
            delta_ok,
            "a triangle vertex misses Ap or AD",
        );

        // Transverse-tree centers of the vertices.
        check(
            out,
            "triangle_transverse_centers",
            self.transverse_center_identities(x)?,
            "a transverse projection is not the stated tripod center",
        );

        // Germ opposition: exhibit a flat containing the triangle with
        // F_i in its boundary.
        let mut germ_ok = true;
        let mut germ_detail = String::new();
        for i in 0..3 {
            match self.germ_opposition_witness(x, i)? {
                Some(_) => {}
                None => {
                    germ_ok = false;
                    germ_detail = format!("no witness flat found for flag {}", i + 1);
                }
            }
        }
        check(out, "triangle_germ_opposition", germ_ok, &germ_detail);
        Ok(())
    }

    /// The four tripod-center identities for the triangle vertices in the
    /// transverse trees at `p_i` and `D_i`.
    pub fn transverse_center_identities(&self, x: &[BuildingPoint; 3]) -> Result<bool> {
        let mut ok = true;
        for i in 0..3 {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            let pi = self.triple.point(i);
            let di = self.triple.line(i);
            // In the tree at p_i: ends are lines through p_i, represented
            // by a second point on each.
            let qspace = TwoSpace::quotient(pi)?;
            let end_of_line = |l: &crate::projplane::ProjLine| -> Result<crate::linalg::Vec3> {
                Ok(second_point_on_line(l, pi)?.rep())
            };
            let d_i_end = end_of_line(di)?;
            let pij_end = self.triple.point(j).rep();
            let pik_end = self.triple.point(k).rep();
            // (1) projection of x_i is the center of (D_i, p_i p_j, p_i p_k).
            let proj = quotient_point(&self.field, &x[i], pi)?;
            let c = center_tree(
                &self.field,
                &qspace,
                &[d_i_end.clone(), pij_end.clone(), pik_end.clone()],
            )?;
            ok &= tree_equals(&self.field, &proj, &c)?;
            // (3) projection of x_j is the center of (D_i, p_i p_j, p_i p_jk),
            // p_jk = D_j ∩ D_k.
            let pjk = self.triple.pij(j, k)?;
            let proj = quotient_point(&self.field, &x[j], pi)?;
            let c = center_tree(
                &self.field,
                &qspace,
                &[d_i_end, pij_end, pjk.rep()],
            )?;
            ok &= tree_equals(&self.field, &proj, &c)?;
            // In the tree at D_i: ends are points on D_i.
            let rspace = TwoSpace::restriction(di)?;
            let dij = meet(di, self.triple.line(j))?;
            let dik = meet(di, self.triple.line(k))?;
            // (2) projection of x_i is the center of (p_i, D_i∩D_j, D_i∩D_k).
            let proj = restrict_point(&self.field, &x[i], di)?;
            let c = center_tree(
                &self.field,
                &rspace,
                &[pi.rep(), dij.rep(), dik.rep()],
            )?;
            ok &= tree_equals(&self.field, &proj, &c)?;
            // (4) projection of x_j is the center of (p_i, D_i∩D_j, D_i∩D_jk),
            // D_jk = p_j p_k.
            let djk = self.triple.dij(j, k)?;
            let djk_cap = meet(di, &djk)?;
            let proj = restrict_point(&self.field, &x[j], di)?;
            let c = center_tree(
                &self.field,
                &rspace,
                &[pi.rep(), dij.rep(), djk_cap.rep()],
            )?;
            ok &= tree_equals(&self.field, &proj, &c)?;
        }
        Ok(ok)
    }

    /// Searches a small family of frames built from the configuration for
    /// a flat containing the singular triangle and having flag i in its
    /// boundary; returns the witness marked flat.
    pub fn germ_opposition_witness(
        &self,
        x: &[BuildingPoint; 3],
        i: usize,
    ) -> Result<Option<MarkedFlat>> {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let t = &self.triple;
        let pi = t.point(i).clone();
        let di = t.line(i);
        // Second frame point must lie on D_i.
        let djk = t.dij(j, k)?;
        let q2_candidates = vec![t.pij(i, j)?, t.pij(i, k)?, meet(di, &djk)?];
        let q3_candidates = vec![
            t.point(j).clone(),
            t.point(k).clone(),
            t.pij(j, k)?,
        ];
        // Sample of the Weyl chamber from x_i toward F_i, taken inside
        // A_{i,i+1} where that chamber is the negative cone.
        let id = FlatId::pair(i);
        let cx = self.coords_in(&x[i], id)?;
        let (cx1, cx2) = cx.simple_root_coords();
        let mut chamber_samples = Vec::new();
        for (d1, d2) in [(0i64, 0i64), (1, 0), (0, 1), (1, 1), (2, 1)] {
            let c = from_src(
                &(&cx1 - BigRational::from_integer(BigInt::from(d1))),
                &(&cx2 - BigRational::from_integer(BigInt::from(d2))),
            );
            chamber_samples.push(self.flat(id).point_at(&c));
        }
        for q2 in &q2_candidates {
            for q3 in &q3_candidates {
                let m = Mat3::from_cols(pi.rep(), q2.rep(), q3.rep());
                if m.det().is_zero() {
                    continue;
                }
                let cand = MarkedFlat::new(m)?;
                let mut ok = true;
                for v in x.iter() {
                    if flat_coords(&self.field, v, &cand)?.is_none() {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                for s in &chamber_samples {
                    if flat_coords(&self.field, s, &cand)?.is_none() {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Ok(Some(cand));
                }
            }
        }
        Ok(None)
    }

    fn verify_coincident(
        &self,
        out: &mut BTreeMap<String, String>,
        x: &BuildingPoint,
    ) -> Result<()> {
        let mut eq = true;
        for k in 0..3 {
            eq &= equals(&self.field, x, &self.y[k])?;
            eq &= equals(&self.field, x, &self.y_star[k])?;
        }
        check(
            out,
            "coincident_special_points_equal",
            eq,
            "not all special points coincide",
        );
        let mut member = true;
        for id in FlatId::ALL {
            member &= flat_coords(&self.field, x, self.flat(id))?.is_some();
        }
        check(
            out,
            "coincident_point_in_all_five_flats",
            member,
            "the common point misses a flat",
        );
        Ok(())
    }
}

/// Squared-distance triangle inequality check using only exact rational
/// arithmetic: sqrt(c) <= sqrt(a) + sqrt(b) iff c <= a + b or
/// (c - a - b)^2 <= 4ab.
pub fn triangle_inequality_sq(a: &BigRational, b: &BigRational, c: &BigRational) -> bool {
    let s = c - a - b;
    if !s.is_positive() {
        return true;
    }
    let four = BigRational::from_integer(BigInt::from(4));
    &s * &s <= four * a * b
}

/// Verifies `cartan_vector(x, y) = weyl_type(-cartan_vector(y, x))` and
/// symmetry of the squared distance; used by randomized suites.
pub fn opposition_consistent(
    field: &Field,
    x: &BuildingPoint,
    y: &BuildingPoint,
) -> Result<bool> {
    let xy = cartan_vector(field, x, y)?;
    let yx = cartan_vector(field, y, x)?;
    Ok(xy == yx.neg().weyl_type() && xy.norm_sq() == yx.norm_sq())
}

/// Helper shared by reports: decimal approximation of a segment length.
pub fn length_approx(d_sq: &BigRational) -> f64 {
    let num = d_sq.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = d_sq.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    (num / den).sqrt()
}

pub use crate::projplane::standard_triple;
pub use crate::projplane::standard_triple_matrix;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projplane::standard_triple;

    fn qt() -> Field {
        Field::qt()
    }

    fn ctx(z: &str) -> TripleContext {
        let f = qt();
        let t = standard_triple(&f, &f.parse(z).unwrap()).unwrap();
        TripleContext::new(&f, &t).unwrap()
    }

    fn rat_i(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn invariants_of_standard_triples() {
        let c = ctx("t");
        assert_eq!(c.z, [rat_i(-1), rat_i(0), rat_i(1)]);
        assert_eq!(c.ray_class(), RayClass::MinusZeroPlus);
        let c = ctx("-1+t");
        assert_eq!(c.z, [rat_i(0), rat_i(1), rat_i(-1)]);
        assert_eq!(c.ray_class(), RayClass::ZeroPlusMinus);
        let c = ctx("1/t");
        assert_eq!(c.z, [rat_i(1), rat_i(-1), rat_i(0)]);
        assert_eq!(c.ray_class(), RayClass::PlusMinusZero);
        let c = ctx("1");
        assert_eq!(c.ray_class(), RayClass::Zero);
    }

    #[test]
    fn classification_kinds() {
        assert_eq!(ctx("t").kind().label(), "flat_triangle");
        assert_eq!(ctx("1/t").kind().label(), "flat_triangle");
        assert_eq!(ctx("-1+t").kind().label(), "tripod");
        assert_eq!(ctx("1").kind().label(), "coincident_point");
        assert_eq!(ctx("2").kind().label(), "coincident_point");
    }

    #[test]
    fn ap_marking_y2_to_y3() {
        // For Z = t the vector y2 -> y3 in the Ap marking is (Z1, 0) with
        // Z1 = -1.
        let c = ctx("t");
        let v = c.vector_in(FlatId::Ap, &c.y[1], &c.y[2]).unwrap();
        assert_eq!(v, crate::modelflat::from_src_ints(-1, 0));
    }

    #[test]
    fn tripod_report_passes_all_checks() {
        let c = ctx("-1+t");
        let rep = c.report().unwrap();
        for (name, result) in &rep.verification {
            assert_eq!(result, "pass", "check {} failed: {}", name, result);
        }
        match rep.kind {
            TripleKind::Tripod { ref x, ref x_star } => {
                assert_eq!(
                    distance_sq(&c.field, x, x_star).unwrap(),
                    BigRational::new(BigInt::from(4), BigInt::from(3))
                );
            }
            _ => panic!("expected tripod"),
        }
    }

    #[test]
    fn triangle_report_passes_all_checks() {
        for z in ["t", "1/t"] {
            let c = ctx(z);
            let rep = c.report().unwrap();
            for (name, result) in &rep.verification {
                assert_eq!(result, "pass", "Z = {}: check {} failed: {}", z, name, result);
            }
        }
    }

    #[test]
    fn coincident_report_passes_all_checks() {
        let c = ctx("1");
        let rep = c.report().unwrap();
        for (name, result) in &rep.verification {
            assert_eq!(result, "pass", "check {} failed: {}", name, result);
        }
    }

    #[test]
    fn partition_oracle_on_flat_triangle() {
        let c = ctx("t");
        let margin = rat_i(2);
        let step = BigRational::new(BigInt::from(1), BigInt::from(2));
        for id in FlatId::ALL {
            let rep = c.partition_check(id, &margin, &step).unwrap();
            assert!(
                rep.pass(),
                "partition of {} failed: {:?}",
                id.label(),
                rep.failures.first()
            );
            assert!(rep.grid_points >= 81);
        }
    }

    #[test]
    fn partition_oracle_on_tripod_and_point() {
        let margin = rat_i(2);
        let step = BigRational::new(BigInt::from(1), BigInt::from(2));
        for z in ["-1+t", "1"] {
            let c = ctx(z);
            for id in FlatId::ALL {
                let rep = c.partition_check(id, &margin, &step).unwrap();
                assert!(
                    rep.pass(),
                    "Z = {}: partition of {} failed: {:?}",
                    z,
                    id.label(),
                    rep.failures.first()
                );
            }
        }
    }

    #[test]
    fn five_flats_boundary_markings() {
        let f = qt();
        let t = standard_triple(&f, &f.parse("t").unwrap()).unwrap();
        let flats = five_flats(&t).unwrap();
        for i in 0..3 {
            let flag = flats.aij[i].boundary_flag().unwrap();
            assert_eq!(&flag, &t.flags[(i + 1) % 3], "A_{{{},{}}} marking", i + 1, i + 2);
        }
        let ap_flag = flats.ap.boundary_flag().unwrap();
        assert_eq!(&ap_flag.point, t.point(0));
        assert_eq!(ap_flag.line, t.dij(0, 1).unwrap());
        let ad_flag = flats.ad.boundary_flag().unwrap();
        assert_eq!(&ad_flag.point, &t.pij(0, 1).unwrap());
        assert_eq!(&ad_flag.line, t.line(0));
    }

    #[test]
    fn trichotomy_and_order_reversal() {
        let f = qt();
        let mut rng = crate::verify::seeded_rng(99);
        let mut triples: Vec<crate::projplane::FlagTriple> = Vec::new();
        for z in ["t", "1/t", "-1+t", "1", "t^2", "(1+t)/t"] {
            triples.push(standard_triple(&f, &f.parse(z).unwrap()).unwrap());
        }
        for _ in 0..10 {
            triples.push(crate::verify::rand_generic_triple(&f, &mut rng));
        }
        let zero = BigRational::zero();
        for t in &triples {
            let a = TripleContext::new(&f, t).unwrap();
            let b = TripleContext::new(&f, &t.reversed()).unwrap();
            // Reversal: (Z1, Z2, Z3) -> (-Z1, -Z3, -Z2).
            assert_eq!(b.z[0], -a.z[0].clone());
            assert_eq!(b.z[1], -a.z[2].clone());
            assert_eq!(b.z[2], -a.z[1].clone());
            // Trichotomy: exactly one kind, stable under reversal except
            // for the sign of Z1 in the triangle case.
            match (a.kind(), b.kind()) {
                (TripleKind::Tripod { .. }, TripleKind::Tripod { .. }) => {
                    assert!(a.z[0].is_zero());
                }
                (TripleKind::CoincidentPoint { .. }, TripleKind::CoincidentPoint { .. }) => {
                    assert!(a.z.iter().all(|v| v.is_zero()));
                }
                (TripleKind::FlatTriangle { .. }, TripleKind::FlatTriangle { .. }) => {
                    assert!(a.z[1] <= zero);
                    if a.z[0] != zero {
                        assert_eq!(b.z[0], -a.z[0].clone());
                    }
                }
                (x, y) => panic!("kinds diverge: {} vs {}", x.label(), y.label()),
            }
        }
    }

    #[test]
    fn distance_triangle_inequality_random() {
        let f = qt();
        let mut rng = crate::verify::seeded_rng(123);
        for _ in 0..30 {
            let a = crate::verify::rand_building_point(&f, &mut rng);
            let b = crate::verify::rand_building_point(&f, &mut rng);
            let c = crate::verify::rand_building_point(&f, &mut rng);
            let dab = distance_sq(&f, &a, &b).unwrap();
            let dbc = distance_sq(&f, &b, &c).unwrap();
            let dac = distance_sq(&f, &a, &c).unwrap();
            assert!(triangle_inequality_sq(&dab, &dbc, &dac));
            assert!(triangle_inequality_sq(&dbc, &dac, &dab));
            assert!(triangle_inequality_sq(&dac, &dab, &dbc));
        }
    }

    #[test]
    fn non_generic_rejected() {
        let f = qt();
        let t = standard_triple(&f, &f.parse("-1").unwrap()).unwrap();
        assert!(matches!(
            TripleContext::new(&f, &t),
            Err(GeomError::NotGeneric)
        ));
    }

    #[test]
    fn standard_matrix_maps_ad_to_ap() {
        let f = qt();
        for z in ["t", "1/t"] {
            let zs = f.parse(z).unwrap();
            let t = standard_triple(&f, &zs).unwrap();
            let c = TripleContext::new(&f, &t).unwrap();
            let g = standard_triple_matrix(&f, &zs).unwrap();
            // Sample points of AD map into Ap.
            for (a, b) in [(0i64, 0i64), (1, 0), (0, 1), (-1, 2)] {
                let pt = c
                    .flat(FlatId::AD)
                    .point_at(&crate::modelflat::from_src_ints(a, b));
                let img = crate::bpoints::apply_group(&g, &pt).unwrap();
                assert!(
                    flat_coords(&f, &img, c.flat(FlatId::Ap)).unwrap().is_some(),
                    "image of AD point left Ap for Z = {}",
                    z
                );
            }
        }
    }
}
