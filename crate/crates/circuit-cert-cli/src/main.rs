//! Command-line front end for the circuit certification toolkit.
//!
//! Exit codes: 0 = decided affirmative (nonnegative / SOS / SONC / solid /
//! convex / universal-SOS / H-simplex), 1 = decided negative, 2 = unknown
//! or undetermined, 64 = usage error, 65 = input data error. Output is
//! JSON on stdout (stable key order, canonical rational strings) unless
//! `--text` is given.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use circuit_cert::amoeba::{self, Solidness};
use circuit_cert::certify::{self, NonnegStatus};
use circuit_cert::circuit::{validate_circuit, validate_circuit_relaxed, CircuitCheck};
use circuit_cert::convexity::{self, ConvexStatus};
use circuit_cert::jsonio::CertificateJson;
use circuit_cert::mediated::{self, SimplexClass, Sufficiency};
use circuit_cert::parse::parse_poly;
use circuit_cert::polygon::{self, PolygonSupport};
use circuit_cert::poly::{Exponent, SparsePoly};
use circuit_cert::scalar::rat_to_string;
use circuit_cert::sonc::{self, SoncPipeline};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(
    name = "circuit-cert",
    about = "Exact certificates for polynomials supported on circuits",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Inline polynomial or JSON document.
    #[arg(short = 'e', long = "expr", conflicts_with = "path")]
    expr: Option<String>,
    /// Path to a file holding the input.
    path: Option<String>,
    /// Human-readable output instead of JSON.
    #[arg(long)]
    text: bool,
    /// Starting precision (bits) of the adaptive comparison ladder.
    #[arg(long, default_value_t = 128)]
    precision: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decide nonnegativity of a circuit polynomial.
    Certify(InputArgs),
    /// Decide sums-of-squares membership of a nonnegative circuit polynomial.
    Sos(InputArgs),
    /// Synthesize a SONC certificate (sum of nonnegative circuit pieces).
    Sonc {
        #[command(flatten)]
        input: InputArgs,
        /// Write the certificate JSON to this path as well.
        #[arg(long)]
        out: Option<String>,
    },
    /// Decide solidness of the amoeba of a real circuit polynomial.
    Amoeba(InputArgs),
    /// Raster the amoeba over a box and write CSV + PGM artifacts.
    Raster {
        #[command(flatten)]
        input: InputArgs,
        /// Box as "x0,y0,x1,y1".
        #[arg(long, default_value = "-3,-3,3,3")]
        r#box: String,
        /// Grid resolution per axis (max 4096).
        #[arg(long, default_value_t = 256)]
        res: usize,
        /// Output path prefix for PREFIX.csv and PREFIX.pgm.
        #[arg(long)]
        out: String,
    },
    /// Maximal mediated set and H/M classification of an even simplex.
    Mediated(InputArgs),
    /// Convexity of univariate, binary-form or multivariate circuit input.
    Convexity(InputArgs),
    /// Triangulation-based universal SOS criterion on a 2D polytope.
    Polytope(InputArgs),
    /// Re-check a SONC certificate file.
    Verify(InputArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::from(EXIT_OK)
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code)
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

fn read_input(args: &InputArgs) -> Result<String, CliError> {
    match (&args.expr, &args.path) {
        (Some(e), None) => Ok(e.clone()),
        (None, Some(p)) => {
            fs::read_to_string(p).map_err(|e| CliError::Data(format!("cannot read {p}: {e}")))
        }
        (None, None) => Err(CliError::Usage(
            "provide exactly one input: -e EXPR or a file path".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    }
}

fn input_poly(args: &InputArgs) -> Result<SparsePoly, CliError> {
    let text = read_input(args)?;
    parse_poly(&text).map_err(|e| CliError::Data(e.to_string()))
}

fn emit<T: Serialize>(json: &T, text: Option<String>, want_text: bool) {
    if want_text {
        if let Some(t) = text {
            println!("{t}");
            return;
        }
    }
    println!(
        "{}",
        serde_json::to_string(json).expect("report serialization cannot fail")
    );
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Certify(args) => cmd_certify(args),
        Command::Sos(args) => cmd_sos(args),
        Command::Sonc { input, out } => cmd_sonc(input, out),
        Command::Amoeba(args) => cmd_amoeba(args),
        Command::Raster {
            input,
            r#box,
            res,
            out,
        } => cmd_raster(input, r#box, res, out),
        Command::Mediated(args) => cmd_mediated(args),
        Command::Convexity(args) => cmd_convexity(args),
        Command::Polytope(args) => cmd_polytope(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

#[derive(Serialize)]
struct CertifyReport {
    status: NonnegStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_log: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeros: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exactness: Option<certify::Exactness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    face_reduced: bool,
}

fn cmd_certify(args: InputArgs) -> Result<u8, CliError> {
    let p = input_poly(&args)?;
    let v =
        certify::certify_sparse(&p, args.precision).map_err(|e| CliError::Data(e.to_string()))?;
    let report = CertifyReport {
        status: v.status,
        theta_log: v.theta_log,
        c: v.c.as_ref().map(rat_to_string),
        witness: v.witness.clone(),
        zeros: v.zeros.clone(),
        exactness: v.exactness,
        note: v.note.clone(),
        face_reduced: v.face_reduced,
    };
    let text = format!(
        "status: {:?}{}{}",
        v.status,
        v.zeros
            .as_ref()
            .map(|z| format!(", {} boundary zeros", z.len()))
            .unwrap_or_default(),
        v.note
            .as_ref()
            .map(|n| format!(" ({n})"))
            .unwrap_or_default()
    );
    emit(&report, Some(text), args.text);
    Ok(match v.status {
        NonnegStatus::NotNonnegative => EXIT_NEGATIVE,
        _ => EXIT_OK,
    })
}

#[derive(Serialize)]
struct SosReport {
    sos: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    binomial_square_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classification: Option<SimplexClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn cmd_sos(args: InputArgs) -> Result<u8, CliError> {
    let p = input_poly(&args)?;
    match validate_circuit(&p).map_err(|e| CliError::Data(e.to_string()))? {
        CircuitCheck::SumOfMonomialSquares { .. } => {
            let report = SosReport {
                sos: true,
                binomial_square_count: None,
                classification: None,
                note: Some("sum of monomial squares".into()),
            };
            emit(
                &report,
                Some("SOS (sum of monomial squares)".into()),
                args.text,
            );
            Ok(EXIT_OK)
        }
        CircuitCheck::BoundaryInner { .. } => Err(CliError::Data(
            "inner point lies on the simplex boundary; certify handles the face reduction".into(),
        )),
        CircuitCheck::Circuit(f) => {
            let verdict = certify::decide_nonnegativity_with(&f, args.precision)
                .map_err(|e| CliError::Data(e.to_string()))?;
            if verdict.status == NonnegStatus::NotNonnegative {
                let report = SosReport {
                    sos: false,
                    binomial_square_count: None,
                    classification: None,
                    note: Some("not nonnegative".into()),
                };
                emit(&report, Some("not SOS (not nonnegative)".into()), args.text);
                return Ok(EXIT_NEGATIVE);
            }
            let ms = mediated::maximal_mediated_set(f.vertices())
                .map_err(|e| CliError::Data(e.to_string()))?;
            let r = mediated::is_sos(&f).map_err(|e| CliError::Data(e.to_string()))?;
            let report = SosReport {
                sos: r.is_sos,
                binomial_square_count: r.binomial_square_count,
                classification: Some(ms.classification),
                note: (!r.is_sos)
                    .then(|| "inner point is outside the maximal mediated set".into()),
            };
            let text = if r.is_sos {
                "SOS".to_string()
            } else {
                "not SOS: inner point is outside the maximal mediated set".to_string()
            };
            emit(&report, Some(text), args.text);
            Ok(if r.is_sos { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

#[derive(Serialize)]
struct SoncReport {
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

fn cmd_sonc(args: InputArgs, out: Option<String>) -> Result<u8, CliError> {
    let p = input_poly(&args)?;
    let outcome = sonc::certify_sonc(&p).map_err(|e| CliError::Data(e.to_string()))?;
    match outcome {
        SoncPipeline::Certificate(cert) => {
            let cj = sonc::certificate_to_json(&cert);
            if let Some(path) = out {
                let body = serde_json::to_string_pretty(&cj)
                    .expect("certificate serialization cannot fail");
                fs::write(&path, body)
                    .map_err(|e| CliError::Data(format!("cannot write {path}: {e}")))?;
            }
            let text = format!("SONC with {} pieces", cert.pieces.len());
            let report = SoncReport {
                status: "SONC".into(),
                certificate: Some(cj),
                witness: None,
                value: None,
                reason: None,
            };
            emit(&report, Some(text), args.text);
            Ok(EXIT_OK)
        }
        SoncPipeline::NotSonc { witness, value } => {
            let report = SoncReport {
                status: "NotSONC".into(),
                certificate: None,
                witness: Some(witness.clone()),
                value: Some(value),
                reason: None,
            };
            emit(
                &report,
                Some(format!(
                    "not SONC: negative value {value:.6e} at {witness:?}"
                )),
                args.text,
            );
            Ok(EXIT_NEGATIVE)
        }
        SoncPipeline::Unknown { reason } => {
            let report = SoncReport {
                status: "Unknown".into(),
                certificate: None,
                witness: None,
                value: None,
                reason: Some(reason.clone()),
            };
            emit(&report, Some(format!("unknown: {reason}")), args.text);
            Ok(EXIT_UNKNOWN)
        }
    }
}

#[derive(Serialize)]
struct AmoebaJson {
    solid: Solidness,
    theta_f: f64,
    psi_f: f64,
}

fn cmd_amoeba(args: InputArgs) -> Result<u8, CliError> {
    let p = input_poly(&args)?;
    let f = match validate_circuit_relaxed(&p).map_err(|e| CliError::Data(e.to_string()))? {
        CircuitCheck::Circuit(f) => f,
        _ => {
            return Err(CliError::Data(
                "amoeba decisions need a circuit with one inner term".into(),
            ))
        }
    };
    let r = amoeba::is_solid(&f);
    let report = AmoebaJson {
        solid: r.solid,
        theta_f: r.theta_f,
        psi_f: r.psi_f,
    };
    let text = format!(
        "{:?} (theta_f = {:.12}, psi_f = {:.12})",
        r.solid, r.theta_f, r.psi_f
    );
    emit(&report, Some(text), args.text);
    Ok(match r.solid {
        Solidness::Solid => EXIT_OK,
        Solidness::NotSolid => EXIT_NEGATIVE,
        Solidness::Unknown => EXIT_UNKNOWN,
    })
}

#[derive(Serialize)]
struct RasterReport {
    resolution: usize,
    bounded_components: usize,
    csv: String,
    pgm: String,
}

fn cmd_raster(args: InputArgs, box_spec: String, res: usize, out: String) -> Result<u8, CliError> {
    let p = input_poly(&args)?;
    let f = match validate_circuit_relaxed(&p).map_err(|e| CliError::Data(e.to_string()))? {
        CircuitCheck::Circuit(f) => f,
        _ => {
            return Err(CliError::Data(
                "raster needs a circuit with one inner term".into(),
            ))
        }
    };
    let parts: Vec<f64> = box_spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage("--box expects x0,y0,x1,y1".into()))?;
    if parts.len() != 4 {
        return Err(CliError::Usage("--box expects x0,y0,x1,y1".into()));
    }
    let grid = amoeba::raster(&f, [parts[0], parts[1]], [parts[2], parts[3]], res)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let csv_path = format!("{out}.csv");
    let pgm_path = format!("{out}.pgm");
    let mut csv =
        fs::File::create(&csv_path).map_err(|e| CliError::Data(format!("{csv_path}: {e}")))?;
    amoeba::write_csv(&grid, &mut csv).map_err(|e| CliError::Data(e.to_string()))?;
    csv.flush().ok();
    let mut pgm =
        fs::File::create(&pgm_path).map_err(|e| CliError::Data(format!("{pgm_path}: {e}")))?;
    amoeba::write_pgm(&grid, &mut pgm).map_err(|e| CliError::Data(e.to_string()))?;
    pgm.flush().ok();
    let report = RasterReport {
        resolution: res,
        bounded_components: amoeba::bounded_component_count(&grid),
        csv: csv_path,
        pgm: pgm_path,
    };
    let text = format!(
        "wrote {} and {} ({} bounded complement components)",
        report.csv, report.pgm, report.bounded_components
    );
    emit(&report, Some(text), args.text);
    Ok(EXIT_OK)
}

#[derive(serde::Deserialize)]
struct VerticesJson {
    vertices: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct MediatedReport {
    classification: SimplexClass,
    sufficiency: Sufficiency,
    delta_star_size: usize,
    lattice_points: usize,
    delta_star: Vec<Vec<i64>>,
}

fn cmd_mediated(args: InputArgs) -> Result<u8, CliError> {
    let text_in = read_input(&args)?;
    // vertex-set JSON or a circuit polynomial
    let vertices: Vec<Exponent> = if let Ok(v) = serde_json::from_str::<VerticesJson>(&text_in) {
        v.vertices.into_iter().map(Exponent).collect()
    } else {
        let p = parse_poly(&text_in).map_err(|e| CliError::Data(e.to_string()))?;
        match validate_circuit(&p).map_err(|e| CliError::Data(e.to_string()))? {
            CircuitCheck::Circuit(f) => f.vertices().to_vec(),
            CircuitCheck::SumOfMonomialSquares { vertices, .. } => vertices,
            CircuitCheck::BoundaryInner { vertices, .. } => vertices,
        }
    };
    let ms =
        mediated::maximal_mediated_set(&vertices).map_err(|e| CliError::Data(e.to_string()))?;
    let suff =
        mediated::h_simplex_sufficient_2d(&vertices).map_err(|e| CliError::Data(e.to_string()))?;
    let report = MediatedReport {
        classification: ms.classification,
        sufficiency: suff,
        delta_star_size: ms.delta_star.len(),
        lattice_points: ms.all_points.len(),
        delta_star: ms.delta_star.iter().map(|e| e.0.clone()).collect(),
    };
    let text = format!(
        "{:?}-simplex; |maximal mediated set| = {} of {} lattice points; cheap test: {:?}",
        ms.classification,
        ms.delta_star.len(),
        ms.all_points.len(),
        suff
    );
    emit(&report, Some(text), args.text);
    Ok(match ms.classification {
        SimplexClass::H => EXIT_OK,
        SimplexClass::M => EXIT_NEGATIVE,
        SimplexClass::Intermediate => EXIT_UNKNOWN,
    })
}

#[derive(Serialize)]
struct ConvexityReport {
    status: ConvexStatus,
    reason: convexity::ConvexityRule,
}

fn cmd_convexity(args: InputArgs) -> Result<u8, CliError> {
    let p = input_poly(&args)?;
    let v = convexity::is_convex(&p).map_err(|e| CliError::Data(e.to_string()))?;
    let report = ConvexityReport {
        status: v.status,
        reason: v.reason,
    };
    emit(
        &report,
        Some(format!("{:?} by {:?}", v.status, v.reason)),
        args.text,
    );
    Ok(match v.status {
        ConvexStatus::Convex => EXIT_OK,
        ConvexStatus::NotConvex => EXIT_NEGATIVE,
        ConvexStatus::Unknown => EXIT_UNKNOWN,
    })
}

#[derive(serde::Deserialize)]
struct PolytopeJson {
    vertices: Vec<Vec<i64>>,
    inner: Vec<i64>,
}

#[derive(Serialize)]
struct PolytopeReport {
    universal_sos: bool,
    necessity: bool,
    triangulation_count: usize,
    interior_points: Vec<Vec<i64>>,
    triangulations: Vec<Vec<[usize; 3]>>,
    per_triangulation: Vec<polygon::TriangulationReport>,
}

fn cmd_polytope(args: InputArgs) -> Result<u8, CliError> {
    let text_in = read_input(&args)?;
    let spec: PolytopeJson = serde_json::from_str(&text_in)
        .map_err(|e| CliError::Data(format!("polytope input must be JSON: {e}")))?;
    let poly = PolygonSupport::new(
        spec.vertices.into_iter().map(Exponent).collect(),
        Exponent(spec.inner),
    )
    .map_err(|e| CliError::Data(e.to_string()))?;
    let criterion =
        polygon::universal_sos_criterion(&poly).map_err(|e| CliError::Data(e.to_string()))?;
    let necessity = polygon::necessity_check_sos(&poly);
    let triangulations = poly.enumerate_triangulations();
    let report = PolytopeReport {
        universal_sos: criterion.universal_sos,
        necessity,
        triangulation_count: triangulations.len(),
        interior_points: poly
            .interior_lattice_points()
            .iter()
            .map(|e| e.0.clone())
            .collect(),
        triangulations,
        per_triangulation: criterion.per_triangulation,
    };
    let text = format!(
        "universal SOS: {}; necessity (inner point in polygon mediated set): {}; {} triangulations",
        report.universal_sos, report.necessity, report.triangulation_count
    );
    emit(&report, Some(text), args.text);
    Ok(if report.universal_sos {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

#[derive(Serialize)]
struct VerifyReportJson {
    valid: bool,
    failures: Vec<String>,
}

fn cmd_verify(args: InputArgs) -> Result<u8, CliError> {
    let text_in = read_input(&args)?;
    let cert: CertificateJson = serde_json::from_str(&text_in)
        .map_err(|e| CliError::Data(format!("certificate must be JSON: {e}")))?;
    let report =
        sonc::verify_certificate_json(&cert).map_err(|e| CliError::Data(e.to_string()))?;
    let out = VerifyReportJson {
        valid: report.valid,
        failures: report.failures.clone(),
    };
    let text = if report.valid {
        "certificate verifies".to_string()
    } else {
        format!("certificate INVALID: {}", report.failures.join("; "))
    };
    emit(&out, Some(text), args.text);
    Ok(if report.valid { EXIT_OK } else { EXIT_NEGATIVE })
}
