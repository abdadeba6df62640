//! Command-line harness: runs interpolation or Galerkin convergence studies
//! for the immersed elasticity spaces and emits CSV or markdown tables.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use ife_elasticity::assembly::{assemble, QuadSettings};
use ife_elasticity::convergence::{
    parse_space, ConvergenceRecord, NormConvention, StudyConfig, StudyMode,
};
use ife_elasticity::error::Error;
use ife_elasticity::levelset::{catalog, LameField};
use ife_elasticity::mesh::{build_mesh, Rect};
use ife_elasticity::space::IfeSpace;

#[derive(Parser, Debug)]
#[command(
    name = "ife-elasticity",
    about = "Immersed finite element convergence studies for planar elasticity \
             interface problems on Cartesian meshes"
)]
struct Cli {
    /// Finite element space: linear | bilinear | rotated-q1
    #[arg(long, default_value = "bilinear")]
    space: String,

    /// Study mode: interp (Lagrange interpolation) | solve (Galerkin)
    #[arg(long, default_value = "interp")]
    mode: String,

    /// Coarsest subdivisions per axis
    #[arg(long, default_value_t = 10)]
    n_start: usize,

    /// Number of mesh levels (n doubles per level)
    #[arg(long, default_value_t = 5)]
    levels: usize,

    #[arg(long, default_value_t = 1.0)]
    lambda_minus: f64,
    #[arg(long, default_value_t = 5.0)]
    lambda_plus: f64,
    #[arg(long, default_value_t = 2.0)]
    mu_minus: f64,
    #[arg(long, default_value_t = 10.0)]
    mu_plus: f64,

    /// Interface shape from the catalog (ellipse)
    #[arg(long, default_value = "ellipse")]
    interface: String,

    /// Ellipse semi-axis a (default pi / 6.28)
    #[arg(long, default_value_t = ife_elasticity::exact::BENCHMARK_SEMI_AXIS)]
    a: f64,
    /// Ellipse semi-axis b (default pi / 6.28)
    #[arg(long, default_value_t = ife_elasticity::exact::BENCHMARK_SEMI_AXIS)]
    b: f64,

    /// Exponent of the first displacement component
    #[arg(long, default_value_t = 5.0)]
    alpha1: f64,
    /// Exponent of the second displacement component
    #[arg(long, default_value_t = 7.0)]
    alpha2: f64,

    /// Subcells per axis for interface-classified quadrature
    #[arg(long, default_value_t = 16)]
    quad_subcells: usize,

    /// Output file for the table (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Table format: csv | md
    #[arg(long, default_value = "md")]
    format: String,

    /// Config file of `key = value` lines overriding the flags
    #[arg(long)]
    config: Option<PathBuf>,

    /// Dump the assembled stiffness matrix of the coarsest level in
    /// `row col value` text format (solve-style assembly)
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
}

fn apply_config_file(cli: &mut Cli, path: &PathBuf) -> Result<(), Error> {
    let text = std::fs::read_to_string(path)?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::BadConfig(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        let bad =
            |what: &str| Error::BadConfig(format!("line {}: bad {what}: {value}", lineno + 1));
        match key.as_str() {
            "space" => cli.space = value.to_string(),
            "mode" => cli.mode = value.to_string(),
            "n-start" => cli.n_start = value.parse().map_err(|_| bad("integer"))?,
            "levels" => cli.levels = value.parse().map_err(|_| bad("integer"))?,
            "lambda-minus" => cli.lambda_minus = value.parse().map_err(|_| bad("number"))?,
            "lambda-plus" => cli.lambda_plus = value.parse().map_err(|_| bad("number"))?,
            "mu-minus" => cli.mu_minus = value.parse().map_err(|_| bad("number"))?,
            "mu-plus" => cli.mu_plus = value.parse().map_err(|_| bad("number"))?,
            "interface" => cli.interface = value.to_string(),
            "a" => cli.a = value.parse().map_err(|_| bad("number"))?,
            "b" => cli.b = value.parse().map_err(|_| bad("number"))?,
            "alpha1" => cli.alpha1 = value.parse().map_err(|_| bad("number"))?,
            "alpha2" => cli.alpha2 = value.parse().map_err(|_| bad("number"))?,
            "quad-subcells" => cli.quad_subcells = value.parse().map_err(|_| bad("integer"))?,
            "out" => cli.out = Some(PathBuf::from(value)),
            "format" => cli.format = value.to_string(),
            "dump-matrix" => cli.dump_matrix = Some(PathBuf::from(value)),
            other => {
                return Err(Error::BadConfig(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(())
}

fn run(mut cli: Cli) -> Result<(), Error> {
    if let Some(path) = cli.config.clone() {
        apply_config_file(&mut cli, &path)?;
    }

    let mode = match cli.mode.as_str() {
        "interp" => StudyMode::Interp,
        "solve" => StudyMode::Solve,
        other => return Err(Error::BadConfig(format!("unknown mode `{other}`"))),
    };
    let config = StudyConfig {
        space: parse_space(&cli.space)?,
        mode,
        domain: Rect::square(-1.0, 1.0),
        lame: LameField::new(cli.lambda_minus, cli.lambda_plus, cli.mu_minus, cli.mu_plus)?,
        n_start: cli.n_start,
        levels: cli.levels,
        a: cli.a,
        b: cli.b,
        alpha1: cli.alpha1,
        alpha2: cli.alpha2,
        quad: QuadSettings {
            gamma_subcells: cli.quad_subcells,
            ..QuadSettings::default()
        },
        ..StudyConfig::default()
    };
    // Validate the interface name through the catalog.
    let ls = catalog(&cli.interface, cli.a, cli.b)?;

    if let Some(path) = &cli.dump_matrix {
        let mesh = build_mesh(config.domain, config.n_start, config.space.mesh_kind())?;
        let space = IfeSpace::build(mesh, config.space, ls.as_ref(), &config.lame)?;
        let exact = config.exact();
        let system = assemble(
            &space,
            &config.lame,
            ls.as_ref(),
            &|side, p| exact.f(side, p),
            config.quad,
        )?;
        let mut file = std::fs::File::create(path)?;
        system.matrix.write_coo(&mut file)?;
        eprintln!(
            "wrote {} x {} stiffness matrix ({} entries) to {}",
            system.matrix.n,
            system.matrix.n,
            system.matrix.values.len(),
            path.display()
        );
    }

    eprintln!(
        "space = {}, mode = {}, lambda = ({}, {}), mu = ({}, {}), a = {:.6}, b = {:.6}",
        config.space,
        config.mode,
        config.lame.lambda_minus,
        config.lame.lambda_plus,
        config.lame.mu_minus,
        config.lame.mu_plus,
        config.a,
        config.b
    );

    let mut raw = Vec::new();
    for level in 0..config.levels {
        let n = config.n_start << level;
        let t0 = std::time::Instant::now();
        let out = ife_elasticity::convergence::run_level(&config, n)?;
        eprintln!(
            "level n = {n}: {} cut elements, {:.2?}",
            out.cut_elements,
            t0.elapsed()
        );
        raw.push((
            out.n,
            out.h,
            out.norms.l2(NormConvention::RootSumSquares),
            out.norms.h1(NormConvention::RootSumSquares),
        ));
    }
    let record = ConvergenceRecord::from_errors(config.space, config.mode, &raw);

    let rendered = match cli.format.as_str() {
        "csv" => record.to_csv(),
        "md" => record.to_markdown(),
        other => return Err(Error::BadConfig(format!("unknown format `{other}`"))),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
