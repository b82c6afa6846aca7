//! `spectral-stokes`: spectral numbers, spectral pairs and Seifert form
//! classes of unit upper triangular matrices.
//!
//! Data goes to stdout, diagnostics to stderr. Exit status is 0 on success,
//! 1 when the input is outside the domain of the requested operation (with
//! `{"error": ...}` on stderr) and 2 on a usage error.

mod emit;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use spectral_stokes::json::{with_precision, MatrixFile};
use spectral_stokes::polycore::{palindrome_class, RealMatrix, RealPoly};
use spectral_stokes::real::{parse_real_list, TOL};
use spectral_stokes::seifert::{class_signature, classify, format_class, iso_equal, SeifertPair};
use spectral_stokes::{chain, hor, lowdim, orbit, selftest, Error, Mode, Poly, Real};

use emit::{Emitted, Output, Table};

const MODE_VAR: &str = "SPECTRAL_STOKES_MODE";

#[derive(Parser)]
#[command(name = "spectral-stokes", version, about = "Spectral numbers and Seifert form classes of Stokes-like matrices")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// `exact` or `numeric`; SPECTRAL_STOKES_MODE overrides this flag.
    #[arg(long, global = true, default_value = "exact")]
    mode: Mode,
    /// Tolerance for unit circle membership of eigenvalues.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    output: Option<Output>,
    /// Decimal digits for floating point values.
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// The HOR families: spectra, matrices, identities, path tracking.
    #[command(subcommand)]
    Hor(HorCmd),
    /// Classification of Seifert form pairs.
    #[command(subcommand)]
    Seifert(SeifertCmd),
    /// Chain type singularities.
    #[command(subcommand)]
    Chain(ChainCmd),
    /// Strata of T(3,R).
    #[command(subcommand)]
    Strata3(Strata3Cmd),
    /// The 2x2 case `S = ((1,a),(0,1))`.
    Solve2 {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Braid and sign orbits, and the fiber experiment.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Follows the spectral numbers along a polygon of matrices.
    Track {
        /// JSON array of matrices, or `{"path": [...]}`.
        #[arg(long)]
        path_file: PathBuf,
        #[arg(long, default_value_t = 512)]
        steps: usize,
    },
    /// Runs the acceptance checks.
    Selftest {
        /// Run only this criterion (1 to 9).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=9))]
        criterion: Option<u64>,
    },
}

#[derive(Subcommand)]
enum HorCmd {
    /// Spectrum, spectral pairs and signature from the angles.
    Spectrum {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        k: u8,
        /// Comma separated angles, e.g. `1/3,2/3`.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// HOR matrix of a cyclotomic polynomial, with its class.
    Matrix {
        /// Coefficients low to high, e.g. `1,1,1`.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Family; read from the constant coefficient when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        k: Option<u8>,
    },
    /// Checks the power identity on random cyclotomic polynomials of degree `n`.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Follows the spectrum from the identity to the target polynomial.
    Track {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        k: Option<u8>,
        #[arg(long, allow_hyphen_values = true)]
        target_poly: String,
        #[arg(long, default_value_t = 256)]
        steps: usize,
    },
}

#[derive(Subcommand)]
enum SeifertCmd {
    /// Decomposes a Seifert form into indecomposable types.
    ///
    /// Unit upper triangular input is read as a Stokes matrix `S` with Gram
    /// matrix `S^t`; anything else is read as the Gram matrix itself.
    Classify {
        #[arg(long)]
        matrix: PathBuf,
        /// Refuse inexact input instead of classifying it numerically.
        #[arg(long)]
        exact: bool,
    },
    /// Whether two Seifert forms are isometric.
    Iso {
        a: PathBuf,
        b: PathBuf,
    },
}

#[derive(Subcommand)]
enum ChainCmd {
    /// Compares the Stokes spectrum with the shifted weighted spectrum.
    Verify {
        /// Exponents `a_0,...,a_m`.
        #[arg(long)]
        a: String,
    },
    /// Runs `verify` over a grid of exponent tuples.
    Grid {
        #[arg(long, default_value_t = 3)]
        a0_min: i64,
        #[arg(long, default_value_t = 6)]
        a0_max: i64,
        #[arg(long, default_value_t = 2)]
        aj_min: i64,
        #[arg(long, default_value_t = 4)]
        aj_max: i64,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
    },
    /// Sorted Stokes spectrum of the chain.
    Spectrum {
        #[arg(long)]
        a: String,
        #[arg(long, value_enum)]
        format: Option<Output>,
    },
}

#[derive(Subcommand)]
enum Strata3Cmd {
    /// Stratum and class of one point.
    Classify {
        /// `a1,a2,a3`
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Classifies every point of a cube grid.
    Scan {
        #[arg(long, default_value = "1/4")]
        step: String,
        /// Half width of the cube.
        #[arg(long, default_value = "4")]
        lim: String,
        #[arg(long, value_enum)]
        out: Option<Output>,
    },
}

#[derive(Subcommand)]
enum OrbitCmd {
    /// Breadth first braid and sign orbit of a Stokes matrix.
    Explore {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Groups cyclotomic members by char poly and signature and reports clashes.
    Conj16 {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "cyclotomic")]
        pool_from: Pool,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Pool {
    Cyclotomic,
}

enum Failure {
    Usage(String),
    Domain(Error),
    /// Ran to completion, but some acceptance check failed.
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Run = std::result::Result<Emitted, Failure>;

struct Ctx {
    mode: Mode,
    tol: f64,
    seed: u64,
}

impl Ctx {
    fn real(&self, x: Real) -> Real {
        match self.mode {
            Mode::Exact => x,
            Mode::Numeric => x.to_float(),
        }
    }

    fn reals(&self, s: &str) -> Result<Vec<Real>, Error> {
        Ok(parse_real_list(s)?.into_iter().map(|x| self.real(x)).collect())
    }

    fn matrix(&self, m: RealMatrix) -> RealMatrix {
        match self.mode {
            Mode::Exact => m,
            Mode::Numeric => m.map(Real::to_float),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn read_matrix(path: &Path) -> Result<MatrixFile, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    MatrixFile::parse(&text)
}

fn int_list(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("not an integer list: {s:?}"))))
        .collect()
}

fn family(p: &RealPoly, k: Option<u8>) -> Result<u8, Error> {
    match k {
        Some(k) => Ok(k),
        None => palindrome_class(p, TOL)
            .k
            .ok_or_else(|| Error::NotInFamily("polynomial is in neither family".into())),
    }
}

fn hor(cmd: HorCmd, ctx: &Ctx) -> Run {
    match cmd {
        HorCmd::Spectrum { k, beta } => {
            let b = hor::HorScal { k, beta: ctx.reals(&beta)? };
            hor::scal_to_poly(&b)?;
            let alphas = hor::recipe_spectrum(&b);
            Ok(Emitted::json(json!({
                "k": k,
                "beta": to_value(&b.beta),
                "spectrum": to_value(&alphas),
                "spp": to_value(&hor::recipe_spectral_pairs(&b)?),
                "signature": to_value(&hor::predicted_signature(&alphas)),
            })))
        }
        HorCmd::Matrix { poly, k } => {
            let p = Poly::new(ctx.reals(&poly)?);
            let k = family(&p, k)?;
            let h = hor::poly_to_matrix(&p, k)?;
            let b = h.scal()?;
            let types = classify(&SeifertPair::from_stokes(&h.s)?, ctx.tol)?;
            Ok(Emitted::json(json!({
                "k": k,
                "n": h.n,
                "poly": to_value(&h.p),
                "stokes": to_value(&MatrixFile::from_matrix(&h.s)),
                "beta": to_value(&b.beta),
                "spectrum": to_value(&hor::recipe_spectrum(&b)),
                "spp": to_value(&hor::recipe_spectral_pairs(&b)?),
                "types": to_value(&types),
                "class": format_class(&types),
            })))
        }
        HorCmd::Verify { n, samples } => {
            if n < 1 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let mut failures = 0;
            let mut first = Value::Null;
            for _ in 0..samples {
                let (p, k) = hor::random_cyclotomic_poly(n, &mut rng);
                let h = hor::poly_to_matrix(&p.map(|c| ctx.real(c.clone())), k)?;
                let c = hor::verify_power_identity(&h);
                if !c.holds() {
                    failures += 1;
                    if first.is_null() {
                        first = json!({"k": k, "poly": to_value(&h.p), "power": c.power, "isometry": c.isometry});
                    }
                }
            }
            Ok(Emitted::json(json!({
                "n": n,
                "samples": samples,
                "seed": ctx.seed,
                "failures": failures,
                "first_failure": first,
                "holds": failures == 0,
            })))
        }
        HorCmd::Track { k, target_poly, steps } => {
            let p = Poly::new(ctx.reals(&target_poly)?);
            let k = family(&p, k)?;
            let h = hor::poly_to_matrix(&p, k)?;
            Ok(Emitted::json(to_value(&hor::simplex_path_track(&h, steps)?)))
        }
    }
}

fn seifert_pair(f: &MatrixFile, ctx: &Ctx) -> Result<SeifertPair, Error> {
    let m = ctx.matrix(f.to_matrix()?);
    if m.is_unit_upper_triangular() {
        SeifertPair::from_stokes(&m)
    } else {
        SeifertPair::new(m)
    }
}

fn seifert(cmd: SeifertCmd, ctx: &Ctx) -> Run {
    match cmd {
        SeifertCmd::Classify { matrix, exact } => {
            let f = read_matrix(&matrix)?;
            let pair = seifert_pair(&f, ctx)?;
            if exact && !pair.g.is_exact() {
                return Err(Error::Invalid("--exact needs rational entries and exact mode".into()).into());
            }
            let types = classify(&pair, ctx.tol)?;
            Ok(Emitted::json(json!({
                "n": pair.n(),
                "types": to_value(&types),
                "class": format_class(&types),
                "signature": to_value(&class_signature(&types)),
            })))
        }
        SeifertCmd::Iso { a, b } => {
            let pa = seifert_pair(&read_matrix(&a)?, ctx)?;
            let pb = seifert_pair(&read_matrix(&b)?, ctx)?;
            Ok(Emitted::json(json!({ "isomorphic": iso_equal(&pa, &pb)? })))
        }
    }
}

fn chain(cmd: ChainCmd, global: Option<Output>) -> Run {
    match cmd {
        ChainCmd::Verify { a } => Ok(Emitted::json(to_value(&chain::verify_spectrum_shift(&int_list(&a)?)?))),
        ChainCmd::Grid { a0_min, a0_max, aj_min, aj_max, m_max } => {
            let grid = chain::exponent_grid(a0_min, a0_max, aj_min, aj_max, m_max);
            let reports: Vec<_> = grid.par_iter().map(|a| chain::verify_spectrum_shift(a)).collect();
            let mut rows = Vec::new();
            let mut list = Vec::new();
            for r in reports {
                let r = r?;
                let a = r.a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                rows.push(vec![
                    json!(a),
                    json!(r.mu),
                    json!(r.k),
                    json!(r.stokes_matches),
                    json!(r.basis_matches),
                    json!(r.order_matches),
                    json!(r.holds),
                ]);
                list.push(json!({"a": r.a, "mu": r.mu, "holds": r.holds}));
            }
            let table = Table { header: vec!["a", "mu", "k", "stokes", "basis", "order", "holds"], rows };
            Ok(Emitted::tabular(Value::Array(list), table, Output::Csv))
        }
        ChainCmd::Spectrum { a, format } => {
            let a = int_list(&a)?;
            let inv = chain::chain_invariants(&a)?;
            let sp = chain::sorted(chain::stokes_spectrum(&a)?);
            let rows = sp.iter().enumerate().map(|(j, x)| vec![json!(j + 1), to_value(x)]).collect();
            let v = json!({"a": a, "mu": inv.milnor, "spectrum": to_value(&sp)});
            let mut e = Emitted::tabular(v, Table { header: vec!["j", "alpha"], rows }, Output::Json);
            if let Some(f) = format.or(global) {
                e.default = f;
            }
            Ok(e)
        }
    }
}

fn point3(s: &str, ctx: &Ctx) -> Result<[Real; 3], Failure> {
    let v = ctx.reals(s)?;
    v.try_into().map_err(|_| Failure::Usage(format!("--a needs three numbers, got {s:?}")))
}

fn strata3(cmd: Strata3Cmd, ctx: &Ctx) -> Run {
    match cmd {
        Strata3Cmd::Classify { a } => {
            let c = lowdim::classify3(&point3(&a, ctx)?);
            let mut v = to_value(&c);
            v["stratum"] = json!(c.stratum.to_string());
            v["class"] = json!(format_class(&c.types));
            Ok(Emitted::json(v))
        }
        Strata3Cmd::Scan { step, lim, out } => {
            let step: Real = step.parse()?;
            let lim: Real = lim.parse()?;
            if step <= Real::zero() || lim < Real::zero() {
                return Err(Failure::Usage("--step must be positive and --lim nonnegative".into()));
            }
            let rows = lowdim::scan3(&ctx.real(step), &ctx.real(lim));
            let table_rows = rows
                .iter()
                .map(|r| {
                    let mut row: Vec<Value> = r.a.iter().map(to_value).collect();
                    row.push(to_value(&r.f));
                    row.push(json!(r.stratum.to_string()));
                    row.push(json!(r.types));
                    row
                })
                .collect();
            let mut e = Emitted::tabular(
                to_value(&rows),
                Table { header: vec!["a1", "a2", "a3", "f", "stratum", "type"], rows: table_rows },
                Output::Csv,
            );
            if let Some(o) = out {
                e.default = o;
            }
            Ok(e)
        }
    }
}

fn orbit(cmd: OrbitCmd) -> Run {
    match cmd {
        OrbitCmd::Explore { matrix, depth, budget } => {
            let s = read_matrix(&matrix)?.to_unit_upper()?;
            let r = orbit::orbit_explore(&s, depth, budget)?;
            let mut v = to_value(&r);
            v["size"] = json!(r.nodes.len());
            Ok(Emitted::json(v))
        }
        OrbitCmd::Conj16 { n, pool_from: Pool::Cyclotomic } => {
            let pool = orbit::cyclotomic_pool(n)?;
            Ok(Emitted::json(to_value(&orbit::conjecture16_check(&pool)?)))
        }
    }
}

fn track(path_file: &Path, steps: usize, ctx: &Ctx) -> Run {
    let text =
        std::fs::read_to_string(path_file).map_err(|e| Error::Parse(format!("{}: {e}", path_file.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let list = match v {
        Value::Object(mut m) => m.remove("path").unwrap_or(Value::Null),
        other => other,
    };
    let files: Vec<MatrixFile> = serde_json::from_value(list).map_err(|e| Error::Parse(e.to_string()))?;
    let path = files.iter().map(|f| f.to_unit_upper().map(|m| ctx.matrix(m))).collect::<Result<Vec<_>, _>>()?;
    match orbit::generic_path_track(&path, steps) {
        Ok(t) => Ok(Emitted::json(to_value(&t))),
        // leaving T(n,R) is an answer about the path, not a failure
        Err(Error::LeftT { r }) => Ok(Emitted::json(json!({"left_t": true, "r": r}))),
        Err(e) => Err(e.into()),
    }
}

fn run_selftest(criterion: Option<u64>) -> Run {
    let results = match criterion {
        Some(id) => vec![selftest::run(id as usize)],
        None => selftest::run_all(),
    };
    for r in &results {
        eprintln!("{}", r.line());
    }
    if results.iter().all(|r| r.passed) {
        Ok(Emitted::json(to_value(&results)))
    } else {
        println!("{}", to_value(&results));
        Err(Failure::Checks)
    }
}

fn dispatch(cli: Cli, ctx: &Ctx) -> Run {
    let global = cli.global.output;
    match cli.cmd {
        Cmd::Hor(c) => hor(c, ctx),
        Cmd::Seifert(c) => seifert(c, ctx),
        Cmd::Chain(c) => chain(c, global),
        Cmd::Strata3(c) => strata3(c, ctx),
        Cmd::Solve2 { a } => {
            let a: Real = a.parse()?;
            let s = lowdim::solve2(&ctx.real(a))?;
            let mut v = to_value(&s);
            v["class"] = json!(format_class(&s.types));
            Ok(Emitted::json(v))
        }
        Cmd::Orbit(c) => orbit(c),
        Cmd::Track { path_file, steps } => track(&path_file, steps, ctx),
        Cmd::Selftest { criterion } => run_selftest(criterion),
    }
}

fn print(e: &Emitted, output: Option<Output>, precision: usize) -> Result<(), Failure> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let io = |e: std::io::Error| Failure::Domain(Error::Invalid(format!("writing output: {e}")));
    match output.unwrap_or(e.default) {
        Output::Json => writeln!(out, "{}", with_precision(e.json.clone(), precision)).map_err(io),
        Output::Csv => match &e.table {
            Some(t) => emit::write_csv(t, precision, out).map_err(|e| Failure::Domain(Error::Invalid(e.to_string()))),
            None => Err(Failure::Usage("csv output is only available for strata3 scan, chain grid and chain spectrum".into())),
        },
        Output::Table => write!(out, "{}", emit::render_table(e, precision)).map_err(io),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut mode = cli.global.mode;
    if let Ok(v) = std::env::var(MODE_VAR) {
        match v.parse::<Mode>() {
            Ok(m) => mode = m,
            Err(e) => {
                eprintln!("error: {MODE_VAR}: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if !(cli.global.tol > 0.0) || cli.global.precision < 1 {
        eprintln!("error: --tol must be positive and --precision at least 1");
        return ExitCode::from(2);
    }
    let ctx = Ctx { mode, tol: cli.global.tol, seed: cli.global.seed };
    let (output, precision) = (cli.global.output, cli.global.precision);
    let result = dispatch(cli, &ctx).and_then(|e| print(&e, output, precision));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(1)
        }
        Err(Failure::Checks) => ExitCode::from(1),
    }
}
