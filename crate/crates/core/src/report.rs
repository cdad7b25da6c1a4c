//! JSON-facing data transfer types. Scalars travel as canonical strings in
//! the field's text syntax; maps are ordered so serialized output is
//! byte-stable.

use crate::bpoints::BuildingPoint;
use crate::error::{GeomError, Result};
use crate::linalg::Mat3;
use crate::modelflat::FlatVector;
use crate::projplane::{Flag, FlagTriple, ProjLine, ProjPoint};
use crate::triples::{PartitionReport, TripleKind, TripleReport};
use crate::valfield::Field;
use num::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlagDto {
    pub point: [String; 3],
    pub line: [String; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleDto {
    pub flags: Vec<FlagDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildingPointDto {
    /// Rows are basis vectors.
    pub basis: [[String; 3]; 3],
    pub weights: [String; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantsDto {
    #[serde(rename = "Z")]
    pub z: [String; 3],
    pub ray_class: String,
    pub triple_ratio: String,
}

/// A model-flat vector in both encodings: the sum-zero triple and the
/// simple-root coordinate pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlatVectorDto {
    pub sum_zero: [String; 3],
    pub simple_roots: [String; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum KindDto {
    #[serde(rename = "tripod")]
    Tripod {
        x: BuildingPointDto,
        x_star: BuildingPointDto,
        /// Displacement x -> x* in the pair-flat markings.
        displacement: FlatVectorDto,
        segment_distance_sq: String,
        segment_distance_approx: f64,
    },
    #[serde(rename = "flat_triangle")]
    FlatTriangle {
        x: Vec<BuildingPointDto>,
        /// Edge vector x_i -> x_{i+1} in the A_{i,i+1} markings.
        edge_vector: FlatVectorDto,
    },
    #[serde(rename = "coincident_point")]
    CoincidentPoint { x: BuildingPointDto },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecialPointsDto {
    pub y: Vec<BuildingPointDto>,
    pub y_star: Vec<BuildingPointDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleReportDto {
    pub invariants: InvariantsDto,
    #[serde(rename = "type")]
    pub kind: KindDto,
    pub special_points: SpecialPointsDto,
    pub verification: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionDto {
    pub flat: String,
    pub grid_points: usize,
    pub pass: bool,
    pub failures: Vec<String>,
}

pub fn rational_string(v: &BigRational) -> String {
    if num::One::is_one(v.denom()) {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn flat_vector_strings(v: &FlatVector) -> [String; 3] {
    let c = v.coords();
    [
        rational_string(&c[0]),
        rational_string(&c[1]),
        rational_string(&c[2]),
    ]
}

pub fn flat_vector_dto(v: &FlatVector) -> FlatVectorDto {
    let (a1, a2) = v.simple_root_coords();
    FlatVectorDto {
        sum_zero: flat_vector_strings(v),
        simple_roots: [rational_string(&a1), rational_string(&a2)],
    }
}

pub fn building_point_dto(x: &BuildingPoint) -> BuildingPointDto {
    let b = x.basis();
    let row = |j: usize| -> [String; 3] {
        [
            b.cols[j][0].to_string(),
            b.cols[j][1].to_string(),
            b.cols[j][2].to_string(),
        ]
    };
    BuildingPointDto {
        basis: [row(0), row(1), row(2)],
        weights: flat_vector_strings(x.weights()),
    }
}

pub fn flag_dto(f: &Flag) -> FlagDto {
    let p = f.point.coords();
    let l = f.line.coeffs();
    FlagDto {
        point: [p[0].to_string(), p[1].to_string(), p[2].to_string()],
        line: [l[0].to_string(), l[1].to_string(), l[2].to_string()],
    }
}

pub fn triple_dto(t: &FlagTriple) -> TripleDto {
    TripleDto {
        flags: t.flags.iter().map(flag_dto).collect(),
    }
}

pub fn parse_flag(field: &Field, dto: &FlagDto) -> Result<Flag> {
    let coord = |what: &str, i: usize, s: &String| {
        field.parse(s).map_err(|e| {
            GeomError::Parse(format!("{} coordinate {}: {}", what, i + 1, e))
        })
    };
    let point = ProjPoint::new([
        coord("point", 0, &dto.point[0])?,
        coord("point", 1, &dto.point[1])?,
        coord("point", 2, &dto.point[2])?,
    ])?;
    let line = ProjLine::new([
        coord("line", 0, &dto.line[0])?,
        coord("line", 1, &dto.line[1])?,
        coord("line", 2, &dto.line[2])?,
    ])?;
    Flag::new(point, line)
}

pub fn parse_triple(field: &Field, dto: &TripleDto) -> Result<FlagTriple> {
    if dto.flags.len() != 3 {
        return Err(GeomError::Parse(format!(
            "expected 3 flags, got {}",
            dto.flags.len()
        )));
    }
    let mut flags = Vec::with_capacity(3);
    for (i, f) in dto.flags.iter().enumerate() {
        flags.push(parse_flag(field, f).map_err(|e| match e {
            GeomError::Parse(msg) => GeomError::Parse(format!("flag {}: {}", i + 1, msg)),
            GeomError::PreconditionViolated(msg) => {
                GeomError::Parse(format!("flag {}: {}", i + 1, msg))
            }
            other => other,
        })?);
    }
    let flags: [Flag; 3] = flags.try_into().expect("length checked");
    Ok(FlagTriple::new(flags))
}

pub fn parse_building_point(field: &Field, dto: &BuildingPointDto) -> Result<BuildingPoint> {
    let coord = |s: &String| field.parse(s);
    let col = |j: usize| -> Result<[crate::valfield::Scalar; 3]> {
        Ok([
            coord(&dto.basis[j][0])?,
            coord(&dto.basis[j][1])?,
            coord(&dto.basis[j][2])?,
        ])
    };
    let basis = Mat3::from_cols(col(0)?, col(1)?, col(2)?);
    let parse_rat = |s: &str| -> Result<BigRational> {
        s.parse::<BigRational>()
            .map_err(|e| GeomError::Parse(format!("bad rational '{}': {}", s, e)))
    };
    let weights = FlatVector::new([
        parse_rat(&dto.weights[0])?,
        parse_rat(&dto.weights[1])?,
        parse_rat(&dto.weights[2])?,
    ]);
    BuildingPoint::new(basis, weights)
}

pub fn invariants_dto(report: &TripleReport) -> InvariantsDto {
    InvariantsDto {
        z: [
            rational_string(&report.z[0]),
            rational_string(&report.z[1]),
            rational_string(&report.z[2]),
        ],
        ray_class: report.ray_class.label().to_string(),
        triple_ratio: report.triple_ratio.to_string(),
    }
}

pub fn report_dto(report: &TripleReport) -> TripleReportDto {
    let kind = match &report.kind {
        TripleKind::Tripod { x, x_star } => {
            // The displacement x -> x* is from_src(-Z2, Z2); its squared
            // norm is the segment length.
            let v = crate::modelflat::from_src(&-report.z[1].clone(), &report.z[1]);
            let d = v.norm_sq();
            KindDto::Tripod {
                x: building_point_dto(x),
                x_star: building_point_dto(x_star),
                displacement: flat_vector_dto(&v),
                segment_distance_sq: rational_string(&d),
                segment_distance_approx: crate::triples::length_approx(&d),
            }
        }
        TripleKind::FlatTriangle { x } => {
            let z1 = &report.z[0];
            let edge = crate::modelflat::from_src(
                &crate::modelflat::pos_part(z1),
                &crate::modelflat::neg_part(z1),
            );
            KindDto::FlatTriangle {
                x: x.iter().map(building_point_dto).collect(),
                edge_vector: flat_vector_dto(&edge),
            }
        }
        TripleKind::CoincidentPoint { x } => KindDto::CoincidentPoint {
            x: building_point_dto(x),
        },
    };
    TripleReportDto {
        invariants: invariants_dto(report),
        kind,
        special_points: SpecialPointsDto {
            y: report.y.iter().map(building_point_dto).collect(),
            y_star: report.y_star.iter().map(building_point_dto).collect(),
        },
        verification: report.verification.clone(),
    }
}

pub fn partition_dto(p: &PartitionReport) -> PartitionDto {
    PartitionDto {
        flat: p.flat.label().to_string(),
        grid_points: p.grid_points,
        pass: p.pass(),
        failures: p.failures.clone(),
    }
}
