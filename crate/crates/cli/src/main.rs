use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracline::hull::{hull_pair, DEFAULT_HULL_LEVEL};
use fracline::ifs::similarity_dimension;
use fracline::intersect::{chain_certify_with, hyperdense_directional_test_with, IndeterminateReason};
use fracline::{
    angular_hits, dump_normalized, line_intersect, nu_level, shadow_profile, Address, DocumentError, Ifs,
    IfsDocument, IfsError, IntersectError, Line, MeasureError, Point2, Region, Verdict,
};

mod svg;

const EXIT_OK: u8 = 0;
const EXIT_EMPTY: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_RATIONAL: u8 = 4;
const EXIT_BUDGET: u8 = 5;
const EXIT_INDETERMINATE: u8 = 6;

#[derive(Parser)]
#[command(name = "fracline", version, about = "Line intersections and invariant measures of planar IFS attractors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LineArg {
    /// Line a x + b y = c.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true, required = true)]
    line: Vec<f64>,
}

impl LineArg {
    fn get(&self) -> Result<Line, Failure> {
        Line::new(self.line[0], self.line[1], self.line[2]).map_err(|e| Failure::parse(e.to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check contractivity and weights; print norms and the similarity dimension.
    Validate {
        file: PathBuf,
        /// Print the document with explicit weights instead of the report.
        #[arg(long)]
        dump_normalized: bool,
    },
    /// Chain / not-hyperdense classification.
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HULL_LEVEL)]
        level: usize,
        #[arg(long, default_value_t = 64)]
        directions: usize,
    },
    /// Cover of the attractor's intersection with a line.
    Intersect {
        file: PathBuf,
        #[command(flatten)]
        line: LineArg,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_HULL_LEVEL)]
        level: usize,
    },
    /// Ray-absorption profile across parallel slabs.
    Shadow {
        file: PathBuf,
        /// Angle of the ray normal; 0 gives vertical rays.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 6)]
        level: usize,
        /// Seed point for the address points (default: first fixed point).
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        seed: Option<Vec<f64>>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Level-L invariant-measure mass of a region.
    Measure {
        file: PathBuf,
        /// "halfplane a b c" | "slab a b c eps" | "poly x1 y1 ..." | "sector qx qy a b c eps"
        #[arg(long, allow_hyphen_values = true)]
        region: String,
        #[arg(long, default_value_t = 8)]
        level: usize,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        seed: Option<Vec<f64>>,
    },
    /// Iterates of a rotating map that approach a line in angle.
    Angular {
        file: PathBuf,
        /// Dash-separated 1-based address; 0 is the empty address.
        #[arg(long, default_value = "0")]
        address: String,
        #[arg(long = "map", default_value_t = 1)]
        map: usize,
        #[command(flatten)]
        line: LineArg,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn parse(message: impl Into<String>) -> Self {
        Self::new(EXIT_PARSE, message)
    }
}

impl From<IfsError> for Failure {
    fn from(e: IfsError) -> Self {
        let code = match e {
            IfsError::BudgetExceeded { .. } => EXIT_BUDGET,
            IfsError::MalformedAddress(_) | IfsError::IndexOutOfRange { .. } => EXIT_PARSE,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<IntersectError> for Failure {
    fn from(e: IntersectError) -> Self {
        let code = match &e {
            IntersectError::RationalRotation { .. } => EXIT_RATIONAL,
            IntersectError::BudgetExceeded { .. } | IntersectError::ScanLimit { .. } => EXIT_BUDGET,
            IntersectError::Ifs(inner) => return inner.clone().into(),
            _ => EXIT_PARSE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<MeasureError> for Failure {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::Ifs(inner) => inner.into(),
            other => Failure::parse(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::parse(e.to_string())
    }
}

fn load_document(path: &Path) -> Result<IfsDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    IfsDocument::parse(&text).map_err(|e| match e {
        DocumentError::Syntax { .. } => Failure::parse(format!("{}: {e}", path.display())),
        DocumentError::Invalid(inner) => inner.into(),
    })
}

fn load(path: &Path) -> Result<Ifs, Failure> {
    Ok(load_document(path)?.build()?)
}

fn seed_or_default(ifs: &Ifs, seed: &Option<Vec<f64>>) -> Point2 {
    match seed {
        Some(v) => Point2::new(v[0], v[1]),
        None => ifs.fixed_points()[0],
    }
}

/// Rounds away representation noise and fixes the sign so that the first
/// non-zero coefficient is positive.
fn canonical_coefficients(line: &Line) -> [f64; 3] {
    let (a, b, c) = line.coefficients();
    let mut v = [a, b, c].map(|x| (x * 1e12).round() / 1e12 + 0.0);
    if v.iter().find(|x| **x != 0.0).is_some_and(|x| *x < 0.0) {
        v = v.map(|x| -x + 0.0);
    }
    v
}

fn cmd_validate(out: &mut impl Write, file: &Path, dump: bool) -> Result<u8, Failure> {
    let doc = load_document(file)?;
    let report = doc.validate();
    if dump && report.passed() {
        let ifs = doc.build()?;
        write!(out, "{}", dump_normalized(&ifs, doc.name.as_deref()))?;
        return Ok(EXIT_OK);
    }
    if let Some(name) = &doc.name {
        writeln!(out, "NAME: {name}")?;
    }
    for (i, m) in report.maps.iter().enumerate() {
        writeln!(out, "MAP {}: norm {:?} det {:?}", i + 1, m.norm, m.det)?;
    }
    if let Some(r) = report.weight_residual {
        writeln!(out, "WEIGHT_RESIDUAL: {r:?}")?;
    }
    if !report.passed() {
        for e in &report.errors {
            writeln!(out, "ERROR: {e}")?;
        }
        return Ok(EXIT_INVALID);
    }
    let ifs = doc.build()?;
    if ifs.all_similitudes() {
        writeln!(out, "DIMENSION: {:?}", similarity_dimension(&ifs)?.value)?;
    }
    writeln!(out, "VALID")?;
    Ok(EXIT_OK)
}

fn cmd_classify(out: &mut impl Write, file: &Path, level: usize, directions: usize) -> Result<u8, Failure> {
    let ifs = load(file)?;
    let hulls = hull_pair(&ifs, level);
    let mut verdict = chain_certify_with(&ifs, &hulls);
    if !verdict.is_certified() {
        verdict = hyperdense_directional_test_with(&ifs, &hulls, directions)?;
    }
    match verdict {
        Verdict::CertifiedChain => writeln!(out, "VERDICT: chain")?,
        Verdict::CertifiedNotHyperdense { witness } => {
            let [a, b, c] = canonical_coefficients(&witness);
            writeln!(out, "VERDICT: not-hyperdense WITNESS: {a} {b} {c}")?;
        }
        Verdict::Indeterminate(reason) => {
            writeln!(out, "VERDICT: indeterminate")?;
            let note = match reason {
                IndeterminateReason::HyperdenseOnTestedDirections { directions } => {
                    format!("hyperdense on {directions} tested directions")
                }
                IndeterminateReason::Inconclusive => "inconclusive".to_string(),
            };
            writeln!(out, "REASON: {note}")?;
            eprintln!("hint: retry with a larger --level (current {level})");
            return Ok(EXIT_INDETERMINATE);
        }
    }
    Ok(EXIT_OK)
}

fn cmd_intersect(out: &mut impl Write, file: &Path, line: Line, eps: f64, level: usize) -> Result<u8, Failure> {
    let ifs = load(file)?;
    let hulls = hull_pair(&ifs, level);
    let cover = line_intersect(&ifs, &hulls, &line, eps)?;
    if cover.is_empty() {
        writeln!(out, "EMPTY")?;
        writeln!(out, "NODES_EXPANDED: {}", cover.nodes_expanded)?;
        return Ok(EXIT_EMPTY);
    }
    writeln!(out, "t_lo,t_hi,address")?;
    for p in &cover.pieces {
        writeln!(out, "{:?},{:?},{}", p.interval.lo, p.interval.hi, p.address)?;
    }
    writeln!(out, "TOTAL_LENGTH: {:?}", cover.total_length())?;
    writeln!(out, "PIECES: {}", cover.pieces.len())?;
    writeln!(out, "INTERVALS: {}", cover.interval_set().len())?;
    writeln!(out, "NODES_EXPANDED: {}", cover.nodes_expanded)?;
    Ok(EXIT_OK)
}

fn profile_csv(profile: &fracline::ShadowProfile) -> String {
    let mut s = String::from("offset,mass\n");
    for r in &profile.rays {
        s.push_str(&format!("{:?},{:?}\n", r.offset, r.mass));
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_shadow(
    out: &mut impl Write,
    file: &Path,
    theta: f64,
    level: usize,
    seed: &Option<Vec<f64>>,
    csv: &Option<PathBuf>,
    svg_path: &Option<PathBuf>,
) -> Result<u8, Failure> {
    let ifs = load(file)?;
    let seed = seed_or_default(&ifs, seed);
    let profile = shadow_profile(&ifs, theta, level, seed)?;
    let table = profile_csv(&profile);
    if csv.is_none() && svg_path.is_none() {
        write!(out, "{table}")?;
        return Ok(EXIT_OK);
    }
    if let Some(path) = csv {
        fs::write(path, &table)?;
    }
    if let Some(path) = svg_path {
        fs::write(path, svg::render(&profile))?;
    }
    writeln!(out, "RAYS: {}", profile.rays.len())?;
    writeln!(out, "SPACING: {:?}", profile.spacing)?;
    writeln!(out, "TOTAL_MASS: {:?}", profile.total_mass())?;
    Ok(EXIT_OK)
}

fn cmd_measure(
    out: &mut impl Write,
    file: &Path,
    spec: &str,
    level: usize,
    seed: &Option<Vec<f64>>,
) -> Result<u8, Failure> {
    let region: Region = spec.parse()?;
    let ifs = load(file)?;
    let mass = nu_level(&ifs, level, &region, seed_or_default(&ifs, seed))?;
    writeln!(out, "MASS: {mass:?}")?;
    Ok(EXIT_OK)
}

fn cmd_angular(
    out: &mut impl Write,
    file: &Path,
    address: &str,
    map: usize,
    line: Line,
    eps: f64,
    count: usize,
) -> Result<u8, Failure> {
    let address: Address = address.parse()?;
    let ifs = load(file)?;
    let hits = angular_hits(&ifs, map, &address, &line, eps, count)?;
    writeln!(out, "k,x,y,angle")?;
    for h in hits {
        writeln!(out, "{},{:?},{:?},{:?}", h.k, h.point.x, h.point.y, h.angle)?;
    }
    Ok(EXIT_OK)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Validate { file, dump_normalized } => cmd_validate(&mut out, &file, dump_normalized),
        Command::Classify { file, level, directions } => cmd_classify(&mut out, &file, level, directions),
        Command::Intersect { file, line, eps, level } => cmd_intersect(&mut out, &file, line.get()?, eps, level),
        Command::Shadow { file, theta, level, seed, csv, svg } => {
            cmd_shadow(&mut out, &file, theta, level, &seed, &csv, &svg)
        }
        Command::Measure { file, region, level, seed } => cmd_measure(&mut out, &file, &region, level, &seed),
        Command::Angular { file, address, map, line, eps, count } => {
            cmd_angular(&mut out, &file, &address, map, line.get()?, eps, count)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
