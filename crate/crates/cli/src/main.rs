mod output;

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use blinksig::acceptance::run_all;
use blinksig::document::{parse_link, LinkDocument};
use blinksig::lab::{compare_loci, run_suite, Suite, SuiteParams};
use blinksig::presentation::alexander_polynomial;
use blinksig::substitution::{
    in_discriminant, RepDocument, UnitaryTuple, DISCRIMINANT_TOL, PROJECTION_LIMIT, UNITARITY_TOL,
};
use blinksig::twisted::{evaluate_point, scan_path, torus_grid, ComponentLoop, ScanOptions};
use blinksig::{BoundaryLinkData, Convention};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use output::{digest, json_document, replay, Cell, Header, Table, Tolerances, SCHEMA_VERSION, TOOL};

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_AMBIGUOUS: u8 = 2;
const EXIT_LAB_FAILURE: u8 = 3;

/// Concordance invariants of boundary links from block Seifert matrices.
///
/// Set BLINKSIG_THREADS to cap the worker threads used for scans, grids and
/// lab suites. Output does not depend on the thread count.
#[derive(Parser, Debug)]
#[command(name = "blinksig", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Parse a previous output file (JSON or CSV) and print it again.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Presentation-matrix sign convention.
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Classical)]
    convention: ConventionArg,

    /// Relative eigenvalue threshold for inertia.
    #[arg(long, global = true, default_value_t = blinksig::twisted::INERTIA_TOL)]
    inertia_tol: f64,

    /// Hadamard-margin threshold for discriminant membership.
    #[arg(long, global = true, default_value_t = DISCRIMINANT_TOL)]
    discriminant_tol: f64,

    /// Parameter tolerance for jump refinement.
    #[arg(long, global = true, default_value_t = blinksig::twisted::REFINE_TOL)]
    refine_tol: f64,

    /// Write output to this file instead of stdout.
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Add a Unix timestamp to output headers.
    #[arg(long, global = true)]
    stamp: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ConventionArg {
    Classical,
    Paper,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Classical => Convention::Classical,
            ConventionArg::Paper => Convention::Paper,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a link document and report warnings.
    Validate { link: PathBuf },
    /// Normalized Alexander-type polynomial of one level.
    Alexander {
        link: PathBuf,
        /// Level index (defaults to q).
        #[arg(long)]
        level: Option<usize>,
    },
    /// Twisted signature and discriminant margins at one representation point.
    Signature {
        link: PathBuf,
        #[arg(long, value_name = "REP_JSON")]
        rep: PathBuf,
    },
    /// Scan the loop t_r -> e^{2πis} t_r and refine signature jumps.
    Scan {
        link: PathBuf,
        /// Component to rotate (0-based).
        #[arg(long, default_value_t = 0)]
        component: usize,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        /// Base point; defaults to U_r = 1 on the scanned component and -1 elsewhere, k = 1.
        #[arg(long, value_name = "REP_JSON")]
        base: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        out: Format,
    },
    /// Signatures on the R^m grid of the torus (k = 1).
    Grid {
        link: PathBuf,
        #[arg(long, default_value_t = 12)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        out: Format,
    },
    /// Run a randomized property suite.
    Lab {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest component count.
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Largest representation dimension.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        max_block: usize,
        /// Representation points per trial (suite default when omitted).
        #[arg(long)]
        points: Option<usize>,
        /// Also attempt a non-unimodular congruence in each trial.
        #[arg(long)]
        inject_non_unimodular: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        out: Format,
    },
    /// Compare the twisted-form jump locus with the discriminant on random circles.
    Loci {
        link: PathBuf,
        #[arg(long, default_value_t = 20)]
        scans: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Run the acceptance checks.
    Selftest,
}

struct Failure {
    code: u8,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(String, u8), Failure>;

struct Context {
    global: Global,
}

impl Context {
    fn convention(&self) -> Convention {
        self.global.convention.into()
    }

    fn header(&self, command: &str, inputs: &[&[u8]]) -> Header {
        Header {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            convention: self.convention(),
            tolerances: Tolerances {
                unitarity: UNITARITY_TOL,
                projection: PROJECTION_LIMIT,
                inertia: self.global.inertia_tol,
                discriminant: self.global.discriminant_tol,
                refine: self.global.refine_tol,
            },
            input_digest: digest(inputs.iter().copied()),
            timestamp: self.global.stamp.then(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            }),
        }
    }

    fn check_tolerances(&self) -> Result<(), Failure> {
        let g = &self.global;
        for (name, v) in [
            ("inertia", g.inertia_tol),
            ("discriminant", g.discriminant_tol),
            ("refine", g.refine_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} tolerance must be positive, got {v}").into());
            }
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_link(path: &Path) -> Result<(BoundaryLinkData, Vec<String>, Vec<u8>), Failure> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| format!("{}: {e}", path.display()))?;
    let (link, warnings) = parse_link(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((link, warnings, bytes))
}

fn load_rep(path: &Path) -> Result<(UnitaryTuple, Vec<u8>), Failure> {
    let bytes = read(path)?;
    let doc: RepDocument =
        serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    let rep = UnitaryTuple::try_from(&doc).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((rep, bytes))
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn run(ctx: &Context, command: Command) -> CmdResult {
    ctx.check_tolerances()?;
    let conv = ctx.convention();
    let g = &ctx.global;
    match command {
        Command::Validate { link } => {
            let (l, warnings, bytes) = load_link(&link)?;
            let doc = LinkDocument::from(&l);
            let body = json!({
                "valid": true,
                "name": l.name(),
                "m": l.m(),
                "n": l.n(),
                "q": l.q(),
                "block_sizes": doc.block_sizes,
                "warnings": warnings,
            });
            Ok((json_document(&ctx.header("validate", &[&bytes]), body), EXIT_OK))
        }
        Command::Alexander { link, level } => {
            let (l, warnings, bytes) = load_link(&link)?;
            warn(&warnings);
            let level = level.unwrap_or(l.q());
            let p = alexander_polynomial(&l, level, conv)?;
            let body = json!({
                "level": level,
                "display": p.to_string(),
                "polynomial": p,
            });
            Ok((json_document(&ctx.header("alexander", &[&bytes]), body), EXIT_OK))
        }
        Command::Signature { link, rep } => {
            let (l, warnings, lb) = load_link(&link)?;
            warn(&warnings);
            let (a, rb) = load_rep(&rep)?;
            let e = evaluate_point(&l, &a, conv, g.inertia_tol)?;
            let disc = in_discriminant(&l, &a, g.discriminant_tol, conv)?;
            let mut reasons = Vec::new();
            if e.inertia.ambiguous {
                reasons.push("eigenvalue inside the ambiguity band");
            }
            if e.inertia.nullity > 0 {
                reasons.push("twisted form is degenerate");
            }
            if disc.member {
                reasons.push("point lies on the discriminant");
            }
            let body = json!({
                "signature": e.inertia.signature,
                "nullity": e.inertia.nullity,
                "ambiguous": e.inertia.ambiguous,
                "tol_used": e.inertia.tol_used,
                "margin_h": e.margin_h,
                "margins_p": e.margins_p,
                "in_discriminant": disc.member,
                "ambiguity": reasons,
            });
            let code = if reasons.is_empty() { EXIT_OK } else { EXIT_AMBIGUOUS };
            Ok((json_document(&ctx.header("signature", &[&lb, &rb]), body), code))
        }
        Command::Scan {
            link,
            component,
            samples,
            base,
            out,
        } => {
            let (l, warnings, lb) = load_link(&link)?;
            warn(&warnings);
            let (base, rb) = match base {
                Some(p) => load_rep(&p)?,
                None => {
                    let angles: Vec<f64> =
                        (0..l.m()).map(|r| if r == component { 0.0 } else { PI }).collect();
                    (UnitaryTuple::from_angles(&angles)?, Vec::new())
                }
            };
            let path = ComponentLoop::new(base, component)?;
            let opts = ScanOptions {
                samples,
                refine_tol: g.refine_tol,
                inertia_tol: g.inertia_tol,
                convention: conv,
            };
            let report = scan_path(&l, &path, &opts)?;
            let header = ctx.header("scan", &[&lb, &rb]);
            let text = match out {
                Format::Json => json_document(&header, json!({"component": component, "scan": report})),
                Format::Csv => Table {
                    header: serde_json::to_value(&header)?,
                    columns: ["s", "signature", "nullity", "margin_H", "margin_P", "ambiguous"]
                        .map(String::from)
                        .to_vec(),
                    rows: report
                        .samples
                        .iter()
                        .map(|s| {
                            vec![
                                Cell::Float(s.s),
                                Cell::Int(s.signature),
                                Cell::Int(s.nullity as i64),
                                Cell::Float(s.margin_h),
                                Cell::Float(s.margin_p),
                                Cell::Bool(s.ambiguous),
                            ]
                        })
                        .collect(),
                    trailer: report
                        .jumps
                        .iter()
                        .map(|j| Ok(("jump".to_owned(), serde_json::to_value(j)?)))
                        .collect::<Result<_, serde_json::Error>>()?,
                }
                .render(),
            };
            Ok((text, EXIT_OK))
        }
        Command::Grid {
            link,
            resolution,
            out,
        } => {
            let (l, warnings, lb) = load_link(&link)?;
            warn(&warnings);
            let grid = torus_grid(&l, resolution, conv, g.inertia_tol)?;
            let header = ctx.header("grid", &[&lb]);
            let text = match out {
                Format::Json => json_document(&header, json!({"grid": grid})),
                Format::Csv => {
                    let mut columns: Vec<String> = (1..=grid.m).map(|r| format!("theta{r}")).collect();
                    columns.extend(
                        ["signature", "nullity", "margin_H", "margin_P", "ambiguous"].map(String::from),
                    );
                    Table {
                        header: serde_json::to_value(&header)?,
                        columns,
                        rows: grid
                            .points
                            .iter()
                            .map(|p| {
                                let mut row: Vec<Cell> = p.angles.iter().map(|&a| Cell::Float(a)).collect();
                                row.extend([
                                    Cell::Int(p.signature),
                                    Cell::Int(p.nullity as i64),
                                    Cell::Float(p.margin_h),
                                    Cell::Float(p.margin_p),
                                    Cell::Bool(p.ambiguous),
                                ]);
                                row
                            })
                            .collect(),
                        trailer: Vec::new(),
                    }
                    .render()
                }
            };
            Ok((text, EXIT_OK))
        }
        Command::Lab {
            suite,
            trials,
            seed,
            m,
            k,
            max_block,
            points,
            inject_non_unimodular,
            out,
        } => {
            if out != Format::Json {
                return Err("lab reports are JSON only".into());
            }
            let suite: Suite = suite.parse()?;
            let defaults = SuiteParams::for_suite(suite);
            let params = SuiteParams {
                m_max: m,
                k_max: k,
                max_block,
                points: points.unwrap_or(defaults.points),
                inject_non_unimodular,
                convention: conv,
                inertia_tol: g.inertia_tol,
            };
            let report = run_suite(suite, trials, seed, &params)?;
            let key = serde_json::to_vec(&json!({"suite": suite, "trials": trials, "seed": seed, "params": params}))?;
            let code = if report.passed { EXIT_OK } else { EXIT_LAB_FAILURE };
            Ok((json_document(&ctx.header("lab", &[&key]), json!({"report": report})), code))
        }
        Command::Loci {
            link,
            scans,
            seed,
            k,
            samples,
        } => {
            let (l, warnings, lb) = load_link(&link)?;
            warn(&warnings);
            let report = compare_loci(&l, scans, seed, conv, k, samples)?;
            Ok((json_document(&ctx.header("loci", &[&lb]), json!({"loci": report})), EXIT_OK))
        }
        Command::Selftest => {
            let results = run_all()?;
            for r in &results {
                eprintln!("{}", r.line());
            }
            let passed = results.iter().all(|r| r.passed);
            let body = json!({"passed": passed, "criteria": results});
            let code = if passed { EXIT_OK } else { EXIT_LAB_FAILURE };
            Ok((json_document(&ctx.header("selftest", &[]), body), code))
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("BLINKSIG_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn emit(global: &Global, text: &str) -> Result<(), Failure> {
    match &global.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { EXIT_OK });
        }
    };
    configure_threads();
    let result = match (cli.replay, cli.command) {
        (Some(path), _) => read(&path).and_then(|bytes| {
            let text = String::from_utf8(bytes).map_err(|e| e.to_string())?;
            Ok((replay(&text)?, EXIT_OK))
        }),
        (None, Some(cmd)) => run(&Context { global: cli.global.clone() }, cmd),
        (None, None) => Err(Failure {
            code: EXIT_INVALID,
            message: "no command given; see `blinksig --help`".into(),
        }),
    };
    let (text, code) = match result {
        Ok(ok) => ok,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    if let Err(f) = emit(&cli.global, &text) {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    ExitCode::from(code)
}
