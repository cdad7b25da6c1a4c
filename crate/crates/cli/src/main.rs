//! Command-line surface: invariants, classification, verification and
//! figures for triples of flags over a valued field.
//!
//! Exit codes: 0 on success, 2 on input or degeneracy errors, 3 when a
//! verification check fails.

mod figure;

use a2flats_core::report::{
    invariants_dto, parse_triple, partition_dto, report_dto, TripleDto,
};
use a2flats_core::triples::{FlatId, TripleContext};
use a2flats_core::valfield::{Field, Val};
use a2flats_core::verify as vf;
use a2flats_core::{FlagTriple, GeomError};
use clap::{Args, Parser, Subcommand};
use num::BigRational;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "a2flats", version, about = "Exact flat geometry of triples of flags over valued fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Field instance: `qp:<prime>` for p-adic rationals, `qt` for rational
    /// functions with the t-adic valuation.
    #[arg(long)]
    field: String,

    /// JSON file holding `{"flags": [{"point": [...], "line": [...]}, ...]}`.
    #[arg(long, conflicts_with = "remark_z")]
    input: Option<PathBuf>,

    /// Build the one-parameter normalized triple with the given triple
    /// ratio instead of reading a file.
    #[arg(long = "remark-z", allow_hyphen_values = true)]
    remark_z: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the algebraic and geometric triple ratios.
    Invariants {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Classify a generic triple and print the full report.
    Classify {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Run the theorem checks, the partition oracles and the proposition
    /// suites.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Grid padding around the special points (rational, e.g. 2 or 3/2).
        #[arg(long)]
        margin: Option<String>,
        /// Grid spacing (rational).
        #[arg(long, default_value = "1/2")]
        step: String,
    },
    /// Emit one schematic SVG per requested flat.
    Figure {
        #[command(flatten)]
        input: InputArgs,
        /// Flats to draw (default: all five).
        #[arg(long = "flat")]
        flats: Vec<String>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn parse_field(text: &str) -> Result<Field, GeomError> {
    if text == "qt" {
        return Ok(Field::qt());
    }
    if let Some(rest) = text.strip_prefix("qp:") {
        let p: u64 = rest
            .parse()
            .map_err(|_| GeomError::Parse(format!("bad prime '{}'", rest)))?;
        return Field::qp(p);
    }
    Err(GeomError::Parse(format!(
        "unknown field '{}'; expected qp:<prime> or qt",
        text
    )))
}

fn parse_rational(text: &str) -> Result<BigRational, GeomError> {
    text.parse::<BigRational>()
        .map_err(|e| GeomError::Parse(format!("bad rational '{}': {}", text, e)))
}

fn load_triple(args: &InputArgs) -> Result<(Field, FlagTriple), GeomError> {
    let field = parse_field(&args.field)?;
    if let Some(z) = &args.remark_z {
        let z = field.parse(z)?;
        let t = a2flats_core::projplane::standard_triple(&field, &z)?;
        return Ok((field, t));
    }
    let path = args.input.as_ref().ok_or_else(|| {
        GeomError::Parse("one of --input or --remark-z is required".into())
    })?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| GeomError::Parse(format!("cannot read {}: {}", path.display(), e)))?;
    let dto: TripleDto = serde_json::from_str(&text)
        .map_err(|e| GeomError::Parse(format!("bad triple JSON: {}", e)))?;
    let t = parse_triple(&field, &dto)?;
    Ok((field, t))
}

fn val_string(v: &Val) -> String {
    v.to_string()
}

fn cmd_invariants(args: &InputArgs) -> Result<ExitCode, GeomError> {
    let (field, triple) = load_triple(args)?;
    let z = a2flats_core::projplane::geom_triple_ratio(&field, &triple)?;
    let tri = a2flats_core::projplane::triple_ratio(&triple)?;
    let ray_class = match (z[0].finite(), z[1].finite(), z[2].finite()) {
        (Some(a), Some(b), Some(c)) => {
            a2flats_core::triples::ray_class_label(a, b, c).to_string()
        }
        _ => "irregular".to_string(),
    };
    let mut out = BTreeMap::new();
    out.insert(
        "Z".to_string(),
        serde_json::json!([val_string(&z[0]), val_string(&z[1]), val_string(&z[2])]),
    );
    out.insert("ray_class".to_string(), serde_json::json!(ray_class));
    out.insert("triple_ratio".to_string(), serde_json::json!(tri.to_string()));
    println!("{}", serde_json::to_string(&out).unwrap());
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(args: &InputArgs) -> Result<ExitCode, GeomError> {
    let (field, triple) = load_triple(args)?;
    let ctx = TripleContext::new(&field, &triple)?;
    let report = ctx.report()?;
    let dto = report_dto(&report);
    println!("{}", serde_json::to_string_pretty(&dto).unwrap());
    let ok = report.verification.values().all(|v| v == "pass");
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn cmd_verify(
    args: &InputArgs,
    margin: &Option<String>,
    step: &str,
) -> Result<ExitCode, GeomError> {
    let (field, triple) = load_triple(args)?;
    let ctx = TripleContext::new(&field, &triple)?;
    let report = ctx.report()?;
    // Default padding 2 + |Z1| + |Z2| covers every special point and at
    // least one interior point per cell.
    let margin = match margin {
        Some(m) => parse_rational(m)?,
        None => {
            let two = BigRational::from_integer(2.into());
            two + a2flats_core::modelflat::rat_abs(&ctx.z[0])
                + a2flats_core::modelflat::rat_abs(&ctx.z[1])
        }
    };
    let step = parse_rational(step)?;
    let mut partitions = Vec::new();
    let mut all_pass = report.verification.values().all(|v| v == "pass");
    for id in FlatId::ALL {
        let p = ctx.partition_check(id, &margin, &step)?;
        all_pass &= p.pass();
        partitions.push(partition_dto(&p));
    }
    let mut propositions = BTreeMap::new();
    for (name, suite) in [
        (
            "cross_ratio_identities",
            vf::check_cross_ratio_identities(&field, 40, 401)?,
        ),
        ("two_points_projection", vf::two_points_projection_suite(&field, 8, 402)?),
        ("point_line_projection", vf::point_line_projection_suite(&field, 5, 403)?),
    ] {
        all_pass &= suite.pass();
        propositions.insert(name.to_string(), suite.summary());
    }
    let out = serde_json::json!({
        "invariants": invariants_dto(&report),
        "checks": report.verification,
        "partitions": partitions,
        "propositions": propositions,
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn cmd_figure(
    args: &InputArgs,
    flats: &[String],
    out_dir: &PathBuf,
) -> Result<ExitCode, GeomError> {
    let (field, triple) = load_triple(args)?;
    let ctx = TripleContext::new(&field, &triple)?;
    let ids: Vec<FlatId> = if flats.is_empty() {
        FlatId::ALL.to_vec()
    } else {
        flats
            .iter()
            .map(|s| FlatId::parse(s))
            .collect::<Result<Vec<_>, _>>()?
    };
    std::fs::create_dir_all(out_dir)
        .map_err(|e| GeomError::Parse(format!("cannot create {}: {}", out_dir.display(), e)))?;
    for id in ids {
        let svg = figure::render_flat(&ctx, id)?;
        let path = out_dir.join(format!("figure_{}.svg", id.label()));
        std::fs::write(&path, svg)
            .map_err(|e| GeomError::Parse(format!("cannot write {}: {}", path.display(), e)))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Invariants { input } => cmd_invariants(input),
        Command::Classify { input } => cmd_classify(input),
        Command::Verify { input, margin, step } => cmd_verify(input, margin, step),
        Command::Figure { input, flats, out } => cmd_figure(input, flats, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            match e {
                GeomError::Internal(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
