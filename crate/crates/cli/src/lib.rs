//! The `sosgram` command-line tool.
//!
//! Every subcommand prints one JSON document on stdout. Failures print
//! `{"error": {"kind": ..., "message": ...}}` on stderr. Exit codes: 0 success,
//! 1 usage or input error, 2 infeasible or negative result, 3 numerical failure.

pub mod io;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};
use sosgram::binary::{enumerate_rank2, BinaryError, Which};
use sosgram::config::{Config, ConfigError};
use sosgram::gram::{
    extract_sos, gram_apply, gram_space, hurwitz_form, hurwitz_sos, rational_sos, rationalize, GramError, GramSpace,
};
use sosgram::hermitian::{
    enumerate_herm_rank1, herm_gram_space, herm_minimize_rank, low_rank_sum, HermMatrix, HermitianError,
};
use sosgram::kummer::{optimize_closed_form, sample_surface, section, KummerError, SampleOptions, SexticCoeffs};
use sosgram::poly::{AnyPolynomial, PolyError};
use sosgram::polytope::{hermitian_pataki_interval, pataki_interval, toric_profile, LatticePolytope, PolytopeError};
use sosgram::sdp::{maximize, minimize_rank, solve_feasibility, SdpError, SdpOptions, SdpStatus};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Negative(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 1,
            CliError::Negative(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Negative(_) => "infeasible",
            CliError::Numerical(_) => "numerical",
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PolytopeError> for CliError {
    fn from(e: PolytopeError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SdpError> for CliError {
    fn from(e: SdpError) -> Self {
        match e {
            SdpError::Infeasible { .. } => CliError::Negative(e.to_string()),
            SdpError::MaxIterations { .. } | SdpError::Numerical(_) => CliError::Numerical(e.to_string()),
            SdpError::ObjectiveLength { .. } | SdpError::InvalidSection(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GramError> for CliError {
    fn from(e: GramError) -> Self {
        match e {
            GramError::NotPsd { .. } => CliError::Negative(e.to_string()),
            GramError::NotGramMatrix { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<BinaryError> for CliError {
    fn from(e: BinaryError) -> Self {
        match e {
            BinaryError::RealRoot | BinaryError::NotPositive => CliError::Negative(e.to_string()),
            BinaryError::Roots(_) => CliError::Numerical(e.to_string()),
            BinaryError::RepeatedRoot { .. } | BinaryError::NotSextic(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<KummerError> for CliError {
    fn from(e: KummerError) -> Self {
        match e {
            KummerError::Binary(b) => b.into(),
            KummerError::Sdp(s) => s.into(),
            KummerError::Empty => CliError::Negative(e.to_string()),
            KummerError::NotProportional { .. } => CliError::Numerical(e.to_string()),
            KummerError::NotSextic(_) | KummerError::DegenerateDirection => CliError::Input(e.to_string()),
        }
    }
}

impl From<HermitianError> for CliError {
    fn from(e: HermitianError) -> Self {
        match e {
            HermitianError::Binary(b) => b.into(),
            HermitianError::Gram(g) => g.into(),
            HermitianError::Sdp(s) => s.into(),
            HermitianError::Infeasible => CliError::Negative(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sosgram", version, about = "Sums of squares via Gram spectrahedra")]
struct Cli {
    /// JSON configuration file (seed, tolerances, solver limits).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Random seed; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find a PSD Gram matrix and an SOS certificate.
    Decompose(DecomposeArgs),
    /// Enumerate the rank-two Gram matrices of a positive binary form.
    #[command(name = "enumerate-rank2")]
    EnumerateRank2(EnumerateArgs),
    /// Optimize a linear function over the Gram spectrahedron of a binary sextic in closed form.
    KummerOpt(KummerOptArgs),
    /// Write OBJ meshes of the spectrahedron boundary and the dual surface of a binary sextic.
    SurfaceSample(SurfaceArgs),
    /// Rank range of extreme points of generic spectrahedra.
    Pataki(PatakiArgs),
    /// Toric degree data and the predicted generic SOS length of a polytope.
    ClassifyPolytope(ClassifyArgs),
    /// Hermitian Gram spectrahedra.
    Hermitian(HermitianArgs),
    /// The product-of-sums-of-squares identity for r in {1, 2, 4, 8}.
    Hurwitz(HurwitzArgs),
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    /// Polynomial JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Lattice polytope whose points index the monomials (default: half the Newton polytope).
    #[arg(long)]
    polytope: Option<PathBuf>,
    /// Search for a low-rank Gram matrix.
    #[arg(long)]
    rank_min: bool,
    /// Number of random objectives tried by --rank-min.
    #[arg(long, default_value_t = 8)]
    trials: usize,
    /// Also produce an exact certificate (requires "p/q" string coefficients).
    #[arg(long)]
    rational: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WhichArg {
    Psd,
    Real,
    All,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    /// Polynomial JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Which rank-two matrices to report.
    #[arg(long, value_enum, default_value = "psd")]
    which: WhichArg,
}

#[derive(Debug, Args)]
struct KummerOptArgs {
    /// Polynomial JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Coefficients c1,c2,c3 of c1·x + c2·y + c3·z.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', num_args = 1)]
    objective: Vec<f64>,
    /// Cross-check the optima with the interior-point solver.
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    /// Polynomial JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Grid cells per axis.
    #[arg(long, default_value_t = 32)]
    res: usize,
    /// Half-width of the sampling cube for the dual surface.
    #[arg(long, default_value_t = 2.0)]
    dual_extent: f64,
    /// Output OBJ file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PatakiArgs {
    /// Matrix size.
    #[arg(long = "N")]
    size: usize,
    /// Dimension of the affine section (real case).
    #[arg(long, conflicts_with = "c")]
    m: Option<usize>,
    /// Codimension of the affine section; for real sections m = N(N+1)/2 − c.
    #[arg(long)]
    c: Option<usize>,
    /// Hermitian interval, parametrized by --c.
    #[arg(long)]
    hermitian: bool,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Polytope JSON `{"points": [[...], ...]}`.
    #[arg(long, conflicts_with_all = ["simplex", "cayley"])]
    input: Option<PathBuf>,
    /// Dilated standard simplex `n,d`.
    #[arg(long, value_delimiter = ',', num_args = 1, conflicts_with = "cayley")]
    simplex: Option<Vec<i64>>,
    /// Cayley polytope of segments with the given lengths.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    cayley: Option<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HermOp {
    Enumerate,
    Lowrank,
    Solve,
}

#[derive(Debug, Args)]
struct HermitianArgs {
    /// Polynomial JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Rank-one enumeration, a low-rank sum or the Hermitian SDP.
    #[arg(long, value_enum)]
    op: HermOp,
    /// Number of rank-one summands for `lowrank`.
    #[arg(long, default_value_t = 2)]
    s: usize,
    /// Random objectives tried by `solve`.
    #[arg(long, default_value_t = 8)]
    trials: usize,
}

#[derive(Debug, Args)]
struct HurwitzArgs {
    /// Number of variables in each group.
    #[arg(long)]
    r: usize,
}

/// A finished command: the JSON report and the exit code to return with it.
struct Report {
    body: Value,
    code: i32,
}

impl Report {
    fn ok(body: Value) -> Self {
        Report { body, code: 0 }
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => return report_error(&CliError::Usage(e.to_string().trim_end().to_owned()), stderr),
    };
    match execute(cli) {
        Ok(report) => match serde_json::to_string_pretty(&report.body) {
            Ok(text) if writeln!(stdout, "{text}").is_ok() => report.code,
            _ => report_error(&CliError::Numerical("could not write the report".into()), stderr),
        },
        Err(e) => report_error(&e, stderr),
    }
}

fn report_error(e: &CliError, stderr: &mut dyn Write) -> i32 {
    let body = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
    let _ = writeln!(stderr, "{body}");
    e.exit_code()
}

fn execute(cli: Cli) -> Result<Report, CliError> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let opts = SdpOptions::from(&config);
    match cli.command {
        Command::Decompose(a) => decompose(&a, &opts),
        Command::EnumerateRank2(a) => enumerate(&a),
        Command::KummerOpt(a) => kummer_opt(&a, &opts),
        Command::SurfaceSample(a) => surface(&a, &opts),
        Command::Pataki(a) => pataki(&a),
        Command::ClassifyPolytope(a) => classify(&a),
        Command::Hermitian(a) => hermitian(&a, &opts),
        Command::Hurwitz(a) => hurwitz(&a),
    }
}

fn optional_polytope(path: &Option<PathBuf>) -> Result<Option<LatticePolytope>, CliError> {
    path.as_deref().map(io::read_polytope).transpose()
}

fn verify_residual(residual: f64, scale: f64, opts: &SdpOptions) -> Result<(), CliError> {
    let bound = opts.tolerances.residual_tol * scale.max(1.0);
    if residual > bound {
        return Err(CliError::Numerical(format!("certificate residual {residual:e} exceeds {bound:e}")));
    }
    Ok(())
}

fn decompose(args: &DecomposeArgs, opts: &SdpOptions) -> Result<Report, CliError> {
    let f = io::read_polynomial(&args.input)?;
    let polytope = optional_polytope(&args.polytope)?;
    let target = f.to_f64();
    let space = gram_space(&target, polytope.as_ref())?;
    let interval = pataki_interval(space.n(), space.m())?;
    let base = json!({
        "order": io::ORDER,
        "monomials": io::monomials(space.monomials()),
        "N": space.n(),
        "m": space.m(),
        "pataki_interval": interval,
    });

    let interior = solve_feasibility(&space, opts)?;
    if interior.status == SdpStatus::Infeasible {
        let mut body = base;
        body["status"] = json!("infeasible");
        body["separating_functional"] = json!(interior.certificate);
        return Ok(Report { body, code: 2 });
    }
    let sol = if args.rank_min { minimize_rank(&space, args.trials, opts)? } else { interior.clone() };
    let cert = extract_sos(&space, &sol.point, &opts.tolerances)?;
    let image = gram_apply(&space, &sol.point)?;
    let gram_residual = image.distance(&target)?;
    verify_residual(cert.residual.max(gram_residual), target.max_norm(), opts)?;

    let mut body = base;
    body["status"] = json!("feasible");
    body["strictly_feasible"] = json!(interior.strictly_feasible);
    body["gram_matrix"] = io::matrix(&sol.point);
    body["rank"] = json!(sol.numerical_rank);
    body["min_eigenvalue"] = json!(sol.min_eigenvalue);
    body["iterations"] = json!(sol.iterations);
    body["certificate"] = json!({
        "mode": cert.mode,
        "length": cert.len(),
        "summands": io::polynomials(&cert.summands),
        "residual": cert.residual,
        "gram_residual": gram_residual,
    });
    if args.rational {
        body["rational_certificate"] = rational_certificate(&f, polytope.as_ref(), &interior.point, interior.strictly_feasible)?;
    }
    Ok(Report::ok(body))
}

fn rational_certificate(
    f: &AnyPolynomial,
    polytope: Option<&LatticePolytope>,
    interior: &sosgram::gram::SymMatrix<f64>,
    strictly_feasible: bool,
) -> Result<Value, CliError> {
    let exact = f
        .as_rational()
        .ok_or_else(|| CliError::Usage("--rational needs exact coefficients written as \"p/q\" strings".into()))?;
    if !strictly_feasible {
        return Err(CliError::Negative("no positive definite Gram matrix; rounding cannot give an exact one".into()));
    }
    let space: GramSpace<BigRational> = gram_space(exact, polytope)?;
    for digits in 1..=12u32 {
        let max_den = 10u64.pow(digits);
        let a = rationalize(&space, interior, max_den)?;
        match rational_sos(&space, &a) {
            Ok(cert) => {
                let exact_identity = &cert.expand(exact.nvars()) == exact;
                return Ok(json!({
                    "mode": cert.mode,
                    "length": cert.len(),
                    "rank": cert.source_rank,
                    "max_denominator": max_den,
                    "gram_matrix": io::matrix(&a),
                    "summands": io::polynomials(&cert.summands),
                    "residual": "0",
                    "verified": exact_identity,
                }));
            }
            Err(GramError::NotPsd { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(CliError::Negative("no PSD rational Gram matrix found by rounding".into()))
}

fn enumerate(args: &EnumerateArgs) -> Result<Report, CliError> {
    let f = io::read_binary_form(&args.input)?;
    let which = match args.which {
        WhichArg::Psd => Which::Psd,
        WhichArg::Real => Which::Real,
        WhichArg::All => Which::All,
    };
    let e = enumerate_rank2(&f, which)?;
    let mut body = json!(e);
    let d = f.half_degree() as u32;
    body["order"] = json!(io::ORDER);
    body["monomials"] = json!((0..=d).map(|k| [d - k, k]).collect::<Vec<_>>());
    Ok(Report::ok(body))
}

fn sextic(path: &Path) -> Result<SexticCoeffs, CliError> {
    Ok(SexticCoeffs::from_form(&io::read_binary_form(path)?)?)
}

fn kummer_opt(args: &KummerOptArgs, opts: &SdpOptions) -> Result<Report, CliError> {
    let c: [f64; 3] = args
        .objective
        .as_slice()
        .try_into()
        .map_err(|_| CliError::Usage(format!("--objective needs 3 values, got {}", args.objective.len())))?;
    let a = sextic(&args.input)?;
    let closed = optimize_closed_form(&a, c, opts.tolerances.psd_tol, opts.tolerances.rank_tol)?;
    let mut body = json!(closed);
    body["coefficients"] = json!((0..7).map(|i| *a.a(i)).collect::<Vec<f64>>());
    if args.verify {
        let sec = section(&a);
        let max = maximize(&sec, &c, opts)?;
        let min = maximize(&sec, &c.map(|v| -v), opts)?;
        body["sdp"] = json!({
            "maximum": max.objective_value,
            "minimum": -min.objective_value,
            "max_error": (max.objective_value - closed.maximum.value).abs(),
            "min_error": (-min.objective_value - closed.minimum.value).abs(),
        });
    }
    Ok(Report::ok(body))
}

fn surface(args: &SurfaceArgs, opts: &SdpOptions) -> Result<Report, CliError> {
    if args.res == 0 {
        return Err(CliError::Usage("--res must be positive".into()));
    }
    let a = sextic(&args.input)?;
    let sample = sample_surface(&a, &SampleOptions { resolution: args.res, dual_extent: args.dual_extent }, opts)?;
    let write = || -> std::io::Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(&args.out)?);
        sample.write_obj(&mut out)?;
        out.flush()
    };
    write().map_err(|e| CliError::Input(format!("{}: {e}", args.out.display())))?;
    Ok(Report::ok(json!({
        "out": args.out,
        "resolution": args.res,
        "bounds": sample.bounds,
        "primal": {"vertices": sample.primal.vertices.len(), "faces": sample.primal.faces.len()},
        "dual": {"vertices": sample.dual.vertices.len(), "faces": sample.dual.faces.len()},
    })))
}

fn pataki(args: &PatakiArgs) -> Result<Report, CliError> {
    let n = args.size;
    let interval = if args.hermitian {
        let c = args.c.ok_or_else(|| CliError::Usage("--hermitian needs --c".into()))?;
        hermitian_pataki_interval(n, c)?
    } else {
        let m = match (args.m, args.c) {
            (Some(m), _) => m,
            (None, Some(c)) => (n * (n + 1) / 2)
                .checked_sub(c)
                .ok_or_else(|| CliError::Usage(format!("--c {c} exceeds dim Sym_{n}")))?,
            (None, None) => return Err(CliError::Usage("pass --m or --c".into())),
        };
        pataki_interval(n, m)?
    };
    let mut body = json!(interval);
    body["ranks"] = json!(interval.ranks().collect::<Vec<_>>());
    body["hermitian"] = json!(args.hermitian);
    Ok(Report::ok(body))
}

fn classify(args: &ClassifyArgs) -> Result<Report, CliError> {
    let p = match (&args.input, &args.simplex, &args.cayley) {
        (Some(path), _, _) => io::read_polytope(path)?,
        (_, Some(nd), _) => match nd.as_slice() {
            &[n, d] if n > 0 => LatticePolytope::simplex(n as usize, d)?,
            _ => return Err(CliError::Usage("--simplex takes n,d".into())),
        },
        (_, _, Some(lengths)) => LatticePolytope::cayley_segments(lengths)?,
        _ => return Err(CliError::Usage("pass --input, --simplex or --cayley".into())),
    };
    let profile = toric_profile(&p)?;
    let mut body = json!(profile);
    body["vertices"] = json!(p.vertices());
    body["two_normal_witness"] = json!(p.is_two_normal()?.witness);
    Ok(Report::ok(body))
}

fn real_rank(a: &HermMatrix, tol: f64) -> usize {
    a.re().numerical_rank(tol)
}

fn hermitian(args: &HermitianArgs, opts: &SdpOptions) -> Result<Report, CliError> {
    let tol = opts.tolerances.rank_tol;
    let body = match args.op {
        HermOp::Enumerate => {
            let f = io::read_binary_form(&args.input)?;
            let ones = enumerate_herm_rank1(&f)?;
            let items: Vec<Value> = ones
                .iter()
                .map(|o| {
                    json!({
                        "choice": o.choice,
                        "factor": o.factor.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                        "matrix": o.matrix,
                        "real_part_rank": real_rank(&o.matrix, tol),
                    })
                })
                .collect();
            json!({"count": ones.len(), "rank_ones": items})
        }
        HermOp::Lowrank => {
            let f = io::read_binary_form(&args.input)?;
            let low = low_rank_sum(&f, args.s, tol)?;
            let real_sum = low.members.iter().fold(sosgram::gram::SymMatrix::zeros(f.half_degree() + 1), |acc, m| {
                acc.add(&m.matrix.re())
            });
            let mut body = json!(low);
            body["real_sum_rank"] = json!(real_sum.numerical_rank(tol));
            body
        }
        HermOp::Solve => {
            let f = io::read_polynomial(&args.input)?.to_f64();
            let space = herm_gram_space(&f, None)?;
            let sol = herm_minimize_rank(&space, args.trials, opts)?;
            verify_residual(sol.certificate.residual, f.max_norm(), opts)?;
            let interval = hermitian_pataki_interval(space.n(), space.codimension())?;
            let mut body = json!(sol);
            body["monomials"] = io::monomials(space.real().monomials());
            body["order"] = json!(io::ORDER);
            body["codimension"] = json!(space.codimension());
            body["pataki_interval"] = json!(interval);
            body["certificate"] = json!({
                "mode": "hermitian",
                "length": sol.certificate.len(),
                "summands": io::polynomials(&sol.certificate.summands),
                "residual": sol.certificate.residual,
            });
            body
        }
    };
    Ok(Report::ok(body))
}

fn hurwitz(args: &HurwitzArgs) -> Result<Report, CliError> {
    let cert = hurwitz_sos(args.r)?;
    let form = hurwitz_form(args.r);
    let verified = cert.expand(form.nvars()) == form;
    if !verified {
        return Err(CliError::Numerical("identity does not expand to the product form".into()));
    }
    Ok(Report::ok(json!({
        "r": args.r,
        "form": io::polynomial(&form),
        "mode": cert.mode,
        "length": cert.len(),
        "summands": io::polynomials(&cert.summands),
        "residual": "0",
        "verified": verified,
    })))
}
