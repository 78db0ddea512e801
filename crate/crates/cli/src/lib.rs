//! The `dgcalc` command line: workspace files in, deterministic text
//! reports out.
//!
//! Exit codes: 0 success, 1 validation failure, 2 requested degrees outside
//! the exactness bound, 3 parse or schema error, 4 entity not found.

pub mod error;
pub mod format;
pub mod workspace;

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use dgcalc_core::bar::{hochschild_via_adj_bar, HochschildComplex};
use dgcalc_core::{
    nat_complex, opposite, rank, segal_check, sum_cat, tensor_cat, tensor_cx, BarComplex, BettiLine, ChainComplex,
    Field, Grading, SafeBound,
};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{from_core, CliError};
use crate::format::Entity;
use crate::workspace::{category_to_doc, complex_to_doc, validate_value, workspace_of, Loaded, Value};

/// Degrees reported when no upper degree is given: this many above the
/// lowest possible degree, capped by the exactness bound.
const DEFAULT_SPAN: i64 = 4;

#[derive(Parser, Debug)]
#[command(name = "dgcalc", version, about = "Exact dg-category and bar-construction computations over GF(p)")]
struct Cli {
    /// Worker threads for rank computations; reports do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run every validator on every entity.
    Validate { file: PathBuf },
    /// Betti numbers of a complex, or of every hom or slot of a category or bimodule.
    Homology {
        file: PathBuf,
        #[arg(long)]
        entity: String,
    },
    /// Betti numbers of the composite bimodule, slot by slot.
    Compose {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        trunc: usize,
        #[command(flatten)]
        window: Window,
    },
    /// Hochschild homology as the cyclic bar complex, or through the adjunction.
    Hochschild {
        file: PathBuf,
        #[arg(long)]
        cat: String,
        #[arg(long)]
        trunc: usize,
        #[arg(long)]
        via_adj: bool,
        #[command(flatten)]
        window: Window,
    },
    /// Tensor product of two categories or two complexes, as a workspace file.
    Tensor {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        args: Vec<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Disjoint union of two categories, as a workspace file.
    Sum {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        args: Vec<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Opposite category, as a workspace file.
    Oppose {
        file: PathBuf,
        #[arg(long, num_args = 1, value_names = ["A"])]
        args: Vec<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Homology of the strict complex of natural transformations.
    Nat {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Strict Segal condition for every (m, n) with m + n ≤ depth.
    Segal {
        file: PathBuf,
        #[arg(long)]
        sset: String,
        #[arg(long)]
        depth: usize,
    },
    /// Rank of a seeded random square matrix, with wall time.
    BenchRank {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        field: u32,
    },
    /// Print a workspace file in canonical form.
    Canon { file: PathBuf },
}

#[derive(clap::Args, Debug)]
struct Window {
    /// Lowest total degree reported (default: lowest possible).
    #[arg(long, allow_hyphen_values = true)]
    min_degree: Option<i64>,
    /// Highest total degree reported.
    #[arg(long, allow_hyphen_values = true)]
    max_degree: Option<i64>,
    /// Report degrees outside the exactness bound instead of failing.
    #[arg(long)]
    allow_unverified: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 3,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.cmd)),
            Err(e) => Err(fail(CliError::Schema(format!("cannot start {n} threads: {e}")))),
        },
        None => dispatch(cli.cmd),
    };
    match result {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err((stdout, e)) => Outcome {
            code: e.code(),
            stdout,
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Partial output travels with the error so checks can still print it.
type CmdResult = Result<String, (String, CliError)>;

fn fail(e: CliError) -> (String, CliError) {
    (String::new(), e)
}

fn dispatch(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Validate { file } => validate(&file),
        Cmd::Homology { file, entity } => homology(&load_valid(&file).map_err(fail)?, &entity).map_err(fail),
        Cmd::Compose {
            file,
            left,
            right,
            trunc,
            window,
        } => compose(&load_valid(&file).map_err(fail)?, &left, &right, trunc, &window).map_err(fail),
        Cmd::Hochschild {
            file,
            cat,
            trunc,
            via_adj,
            window,
        } => hochschild(&load_valid(&file).map_err(fail)?, &cat, trunc, via_adj, &window).map_err(fail),
        Cmd::Tensor { file, args, name } => {
            binary_op(&load_valid(&file).map_err(fail)?, "tensor", &args, name).map_err(fail)
        }
        Cmd::Sum { file, args, name } => binary_op(&load_valid(&file).map_err(fail)?, "sum", &args, name).map_err(fail),
        Cmd::Oppose { file, args, name } => oppose(&load_valid(&file).map_err(fail)?, &args[0], name).map_err(fail),
        Cmd::Nat { file, left, right } => nat(&load_valid(&file).map_err(fail)?, &left, &right).map_err(fail),
        Cmd::Segal { file, sset, depth } => segal(&load_valid(&file).map_err(fail)?, &sset, depth),
        Cmd::BenchRank {
            size,
            density,
            seed,
            field,
        } => bench_rank(size, density, seed, field).map_err(fail),
        Cmd::Canon { file } => workspace::read(&file)
            .map(|ws| format::to_canonical_string(&ws))
            .map_err(fail),
    }
}

/// Loads a workspace and requires every entity to pass its validator.
fn load_valid(path: &Path) -> Result<Loaded, CliError> {
    let loaded = workspace::load(path)?;
    for (name, (kind, v)) in &loaded.values {
        if let Some(report) = validate_value(v) {
            return Err(CliError::Validation(format!(
                "entities.{name} ({kind}) fails validation:\n{}",
                report.trim_end()
            )));
        }
    }
    Ok(loaded)
}

fn validate(path: &Path) -> CmdResult {
    let loaded = workspace::load(path).map_err(fail)?;
    let mut out = String::new();
    let mut failed = 0;
    for (name, (kind, v)) in &loaded.values {
        match validate_value(v) {
            None => writeln!(out, "{name} {kind} ok").unwrap(),
            Some(report) => {
                failed += 1;
                writeln!(out, "{name} {kind} FAIL").unwrap();
                for line in report.lines() {
                    writeln!(out, "  {line}").unwrap();
                }
            }
        }
    }
    if failed > 0 {
        Err((out, CliError::Validation(format!("{failed} entities fail validation"))))
    } else {
        Ok(out)
    }
}

fn betti_lines(out: &mut String, c: &ChainComplex) {
    if let (Some(lo), Some(hi)) = (c.min_degree(), c.max_degree()) {
        for t in lo..=hi {
            writeln!(out, "t {t} betti {}", c.betti(t)).unwrap();
        }
    }
}

fn homology(ws: &Loaded, name: &str) -> Result<String, CliError> {
    let mut out = String::new();
    match ws.get(name)? {
        Value::Complex(c) => {
            writeln!(out, "homology of {name}").unwrap();
            betti_lines(&mut out, c);
        }
        Value::Category(cat) => {
            writeln!(out, "homology of {name}, hom by hom").unwrap();
            for (a, x) in cat.objects().iter().enumerate() {
                for (b, y) in cat.objects().iter().enumerate() {
                    if !cat.hom(a, b).is_empty() {
                        writeln!(out, "hom {x}|{y}").unwrap();
                        betti_lines(&mut out, cat.hom(a, b));
                    }
                }
            }
        }
        Value::Bimodule(v) => {
            writeln!(out, "homology of {name}, slot by slot").unwrap();
            for (a, x) in v.left_cat().objects().iter().enumerate() {
                for (b, y) in v.right_cat().objects().iter().enumerate() {
                    if v.slot_dim(a, b) > 0 {
                        writeln!(out, "slot {x}|{y}").unwrap();
                        betti_lines(&mut out, v.slot(a, b));
                    }
                }
            }
        }
        _ => return Err(CliError::NotFound(format!("entity `{name}` has no homology"))),
    }
    Ok(out)
}

/// The reported degree window, or a truncation error.
fn window(w: &Window, grading: Grading, lowest: i64, bound: SafeBound, trunc: usize) -> Result<RangeInclusive<i64>, CliError> {
    let lo = w.min_degree.unwrap_or(lowest);
    let hi = match (w.max_degree, grading) {
        (Some(h), _) => h,
        (None, Grading::Z2) => 1,
        (None, Grading::Z) => match bound {
            SafeBound::UpTo(_) if w.allow_unverified => lo + DEFAULT_SPAN,
            SafeBound::UpTo(b) => (lo + DEFAULT_SPAN).min(b),
            _ => lo + DEFAULT_SPAN,
        },
    };
    let lo = match grading {
        Grading::Z => lo,
        Grading::Z2 => lo.clamp(0, 1),
    };
    if hi < lo {
        return Err(CliError::Truncation(format!(
            "no degree at or above {lo} is exact at bar truncation {trunc} (exact through {bound}); raise --trunc"
        )));
    }
    if !w.allow_unverified {
        if let Some(t) = (lo..=hi).find(|&t| !(grading == Grading::Z && bound.covers(t))) {
            return Err(CliError::Truncation(format!(
                "degree {t} is outside the exactness bound ({bound}) at bar truncation {trunc}; \
                 raise --trunc or pass --allow-unverified"
            )));
        }
    }
    Ok(lo..=hi)
}

fn write_lines(out: &mut String, lines: &[BettiLine]) {
    for l in lines {
        writeln!(out, "{l}").unwrap();
    }
}

fn compose(ws: &Loaded, left: &str, right: &str, trunc: usize, w: &Window) -> Result<String, CliError> {
    let (v1, v2) = (ws.bimodule(left)?, ws.bimodule(right)?);
    let bound = dgcalc_core::safe_degree_bound(&v1, &v2, trunc);
    let lowest = v1.min_degree().unwrap_or(0) + v2.min_degree().unwrap_or(0);
    let degrees = window(w, ws.grading, lowest, bound, trunc)?;
    let mut out = String::new();
    writeln!(out, "composition {left} ∘ {right}, bar truncation {trunc}, exact through {bound}").unwrap();
    let (a_objs, c_objs) = (v1.left_cat().objects().to_vec(), v2.right_cat().objects().to_vec());
    for (a, x) in a_objs.iter().enumerate() {
        for (c, y) in c_objs.iter().enumerate() {
            let bar = BarComplex::new(v1.clone(), v2.clone(), a, c, trunc).map_err(from_core)?;
            writeln!(out, "slot {x}|{y}").unwrap();
            write_lines(&mut out, &bar.report(degrees.clone()).map_err(from_core)?);
        }
    }
    Ok(out)
}

fn hochschild(ws: &Loaded, name: &str, trunc: usize, via_adj: bool, w: &Window) -> Result<String, CliError> {
    let cat = ws.category(name)?;
    let lowest = cat.min_hom_degree().unwrap_or(0).min(0);
    let (lines, bound, route) = if via_adj {
        let bar = hochschild_via_adj_bar(&cat, trunc).map_err(from_core)?;
        let bound = bar.safe_bound();
        let degrees = window(w, ws.grading, lowest, bound, trunc)?;
        (bar.report(degrees).map_err(from_core)?, bound, "through the adjunction")
    } else {
        let h = HochschildComplex::new(cat.clone(), trunc).map_err(from_core)?;
        let bound = h.safe_bound();
        let degrees = window(w, ws.grading, lowest, bound, trunc)?;
        (h.report(degrees).map_err(from_core)?, bound, "cyclic bar complex")
    };
    let mut out = String::new();
    writeln!(out, "hochschild {name} ({route}), bar truncation {trunc}, exact through {bound}").unwrap();
    write_lines(&mut out, &lines);
    Ok(out)
}

fn emit(ws: &Loaded, name: &str, entity: Entity) -> String {
    format::to_canonical_string(&workspace_of(ws.field, ws.grading, name, entity))
}

fn binary_op(ws: &Loaded, op: &str, args: &[String], name: Option<String>) -> Result<String, CliError> {
    let (a, b) = (&args[0], &args[1]);
    let sym = if op == "tensor" { "⊗" } else { "⊕" };
    let name = name.unwrap_or_else(|| format!("{a}{sym}{b}"));
    match (ws.get(a)?, ws.get(b)?, op) {
        (Value::Category(x), Value::Category(y), "tensor") => {
            let c = tensor_cat(x, y).map_err(from_core)?;
            Ok(emit(ws, &name, Entity::Category(category_to_doc(&c))))
        }
        (Value::Category(x), Value::Category(y), _) => {
            let c = sum_cat(x, y).map_err(from_core)?;
            Ok(emit(ws, &name, Entity::Category(category_to_doc(&c))))
        }
        (Value::Complex(x), Value::Complex(y), "tensor") => {
            let c = tensor_cx(x, y).map_err(from_core)?;
            Ok(emit(ws, &name, Entity::Complex(complex_to_doc(&c))))
        }
        _ => Err(CliError::NotFound(format!(
            "{op} needs two categories{}",
            if op == "tensor" { " or two complexes" } else { "" }
        ))),
    }
}

fn oppose(ws: &Loaded, a: &str, name: Option<String>) -> Result<String, CliError> {
    let cat = ws.category(a)?;
    let name = name.unwrap_or_else(|| format!("{a}^op"));
    Ok(emit(ws, &name, Entity::Category(category_to_doc(&opposite(&cat)))))
}

fn nat(ws: &Loaded, left: &str, right: &str) -> Result<String, CliError> {
    let (v1, v2) = (ws.bimodule(left)?, ws.bimodule(right)?);
    let c = nat_complex(&v1, &v2).map_err(from_core)?;
    let mut out = String::new();
    writeln!(out, "natural transformations {left} → {right} (strict)").unwrap();
    betti_lines(&mut out, &c);
    Ok(out)
}

fn segal(ws: &Loaded, name: &str, depth: usize) -> CmdResult {
    let x = ws.sset(name).map_err(fail)?;
    let mut out = String::new();
    writeln!(out, "segal {name} (strict/discrete variant), m + n ≤ {depth}").unwrap();
    let mut failed = 0;
    for m in 0..=depth {
        for n in 0..=depth - m {
            let v = segal_check(x, m, n).map_err(|e| fail(from_core(e)))?;
            if !v.holds() {
                failed += 1;
            }
            writeln!(out, "{m} {n} {v}").unwrap();
        }
    }
    if failed > 0 {
        let e = CliError::Validation(format!("segal condition fails at {failed} of the (m, n) pairs"));
        Err((out, e))
    } else {
        Ok(out)
    }
}

fn bench_rank(size: usize, density: f64, seed: u64, p: u32) -> Result<String, CliError> {
    let field = Field::new(p).map_err(|e| CliError::Schema(format!("--field: {e}")))?;
    if !(0.0..=1.0).contains(&density) {
        return Err(CliError::Schema(format!("--density {density} is not in [0, 1]")));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let m = dgcalc_core::random::matrix(&mut rng, field, size, size, density);
    let start = Instant::now();
    let r = rank(&m);
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(format!(
        "bench-rank size {size} density {density} seed {seed} field {p} nnz {} rank {r} time_ms {ms:.3}\n",
        m.nnz()
    ))
}

/// Shorthand used by tests: the Betti lines of a report, without headers.
pub fn report_lines(stdout: &str) -> Vec<&str> {
    stdout.lines().filter(|l| l.starts_with("t ")).collect()
}
