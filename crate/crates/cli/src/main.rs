mod config;
mod grid;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cfkernel::export::{planar_from_csv, planar_to_csv, samples_to_csv, samples_to_json};
use cfkernel::hermite::{apply_transform, predicted_mu, relative_residual, HermiteIndex, HermiteSpec, Side, XGrid};
use cfkernel::intpoly::{is_bounded_family, row_a1, row_a2, special_case};
use cfkernel::numlaplace::QuadratureSpec;
use cfkernel::time_kernel::{confirm, kernel_general, kernel_with_route, KernelSample, Route};
use cfkernel::verify::{run, Suite, VerifyOptions};
use cfkernel::{Error, IntPoly, Multivector, VectorM};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::FileConfig;

const GRID_HELP: &str = "Grid of (x, y) pairs, e.g. `x1=-2:2:11,x2=0.5,y1=1,y2=-1:1:5`. \
Each coordinate x1..xm, y1..ym takes a value or an inclusive range start:end:count; \
unnamed coordinates are 0. x1 varies slowest, ym fastest.";

#[derive(Parser, Debug)]
#[command(name = "cfkernel", version, about = "Generalized Clifford-Fourier kernels")]
struct Cli {
    /// TOML file with [quadrature] and [hermite] defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (0 = rayon default).
    #[arg(long, global = true, env = "CFKERNEL_THREADS", default_value_t = 0)]
    threads: usize,

    /// Drop the constant term of G (it only contributes the global phase i^{G(0)}).
    #[arg(long, global = true)]
    strip_constant: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Residue table, phase rows and bounded-family verdict for G.
    Classify {
        g: String,
        /// Dimension used for the A² row.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate K_{m,G}(x, y) at a point or on a grid.
    Kernel {
        #[arg(long)]
        g: String,
        #[arg(long)]
        m: usize,
        /// Comma-separated coordinates of x.
        #[arg(long, requires = "y", conflicts_with = "grid", allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, requires = "x", allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long, help = GRID_HELP, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Force a route instead of the dispatcher's choice.
        #[arg(long)]
        route: Option<RouteArg>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Confirm every value by a second route and refuse to emit otherwise.
        #[arg(long)]
        strict: bool,
        /// Largest relative disagreement accepted under --strict.
        #[arg(long, default_value_t = 1e-6)]
        strict_tolerance: f64,
    },
    /// Run a seeded verification suite (or `all`).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Apply the m = 2 transform to a Clifford-Hermite function or a sampled input.
    Transform {
        #[arg(long)]
        g: String,
        /// Hermite indices `j,k,l`.
        #[arg(long, conflicts_with = "input")]
        psi: Option<String>,
        /// CSV (x1,x2,blade,re,im) sampled on the quadrature nodes; see --dump-input.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write the sampled input on the quadrature nodes to this path.
        #[arg(long)]
        dump_input: Option<PathBuf>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        y_nodes: Option<usize>,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    ClosedForm,
    Quadrature,
    GeneratingFunction,
    Talbot,
    Oracle2d,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::ClosedForm => Route::ClosedForm,
            RouteArg::Quadrature => Route::Quadrature,
            RouteArg::GeneratingFunction => Route::GeneratingFunction,
            RouteArg::Talbot => Route::Talbot,
            RouteArg::Oracle2d => Route::Oracle2d,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

/// A failure with its exit code: 1 tolerance, 2 parse/config, 3 unsupported route.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn tolerance(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::NonIntegerCoefficient(_)
            | Error::Config(_)
            | Error::OutOfRange(_)
            | Error::DimensionMismatch { .. } => 2,
            Error::UnsupportedRoute(_) | Error::UnsupportedDimension(..) | Error::NotBoundedFamily(_) => 3,
            Error::NonConvergence { .. } | Error::TailBound { .. } | Error::Singular(_) | Error::NotUnitBivector(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

fn parse_g(text: &str, strip: bool) -> CliResult<IntPoly> {
    let g = IntPoly::parse(text)?;
    Ok(if strip { g.without_constant() } else { g })
}

fn parse_coords(text: &str, m: usize) -> CliResult<VectorM> {
    let coords: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Failure::config(format!("`{s}` is not a number"))))
        .collect::<CliResult<_>>()?;
    if coords.len() != m {
        return Err(Failure::config(format!("expected {m} coordinates, got {}", coords.len())));
    }
    Ok(VectorM::new(coords)?)
}

fn emit(text: &str, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::config(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::config(format!("stdout: {e}"))),
    }
}

#[derive(Serialize)]
struct Classification {
    g: String,
    residues: BTreeMap<i64, u8>,
    a1_row: String,
    a2_row: String,
    m: usize,
    s0: i128,
    s1: i128,
    a1: i128,
    bounded_family: bool,
    special_case: Option<&'static str>,
}

fn classify(g: &IntPoly, m: usize, json: bool) -> CliResult<String> {
    let p = g.parity_profile();
    let c = Classification {
        g: g.to_string(),
        residues: (-3..=3).map(|k| (k, g.residue_mod4(k))).collect(),
        a1_row: row_a1(g).to_string(),
        a2_row: row_a2(g, m).to_string(),
        m,
        s0: p.s0,
        s1: p.s1,
        a1: p.a1,
        bounded_family: is_bounded_family(g),
        special_case: special_case(g).map(|s| s.tag()),
    };
    if json {
        return Ok(serde_json::to_string_pretty(&c).expect("plain data") + "\n");
    }
    let mut out = format!("G = {}\n", c.g);
    out.push_str("k        ");
    for k in c.residues.keys() {
        out.push_str(&format!("{k:>4}"));
    }
    out.push_str("\nG(k)%4   ");
    for r in c.residues.values() {
        out.push_str(&format!("{r:>4}"));
    }
    out.push_str(&format!("\nA1       {}\nA2(m={m})  {}\n", c.a1_row, c.a2_row));
    out.push_str(&format!("s0 = {}, s1 = {}, a1 = {}\n", c.s0, c.s1, c.a1));
    out.push_str(&format!("bounded_family = {}\n", c.bounded_family));
    out.push_str(&format!("tag = {}\n", c.special_case.unwrap_or("none")));
    Ok(out)
}

fn kernel(
    g: &IntPoly,
    m: usize,
    points: Vec<(VectorM, VectorM)>,
    route: Option<Route>,
    spec: &QuadratureSpec,
    strict: Option<f64>,
) -> CliResult<Vec<KernelSample>> {
    points
        .par_iter()
        .map(|(x, y)| -> CliResult<KernelSample> {
            let sample = match route {
                Some(r) => kernel_with_route(g, m, x, y, r, spec)?,
                None => kernel_general(g, m, x, y, spec)?,
            };
            if let Some(tol) = strict {
                let c = confirm(&sample, spec)?;
                if !(c.difference <= tol) {
                    return Err(Failure::tolerance(format!(
                        "{} and {} disagree by {:.3e} at x = {:?}, y = {:?}",
                        sample.route,
                        c.route,
                        c.difference,
                        x.coords(),
                        y.coords()
                    )));
                }
            }
            Ok(sample)
        })
        .collect()
}

fn parse_psi(text: &str) -> CliResult<HermiteIndex> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Failure::config(format!("`{text}`: expected j,k,l"));
    let [j, k, l] = parts.as_slice() else {
        return Err(bad());
    };
    let j = j.parse().map_err(|_| bad())?;
    let k = k.parse().map_err(|_| bad())?;
    let l = l.parse().map_err(|_| bad())?;
    Ok(HermiteIndex::new(j, k, l)?)
}

fn match_grid(grid: &XGrid, points: &[[f64; 2]]) -> CliResult<()> {
    if points.len() != grid.points.len() {
        return Err(Failure::config(format!(
            "input has {} points but the quadrature grid has {}",
            points.len(),
            grid.points.len()
        )));
    }
    for (i, (p, q)) in points.iter().zip(&grid.points).enumerate() {
        if (p[0] - q[0]).abs() > 1e-9 || (p[1] - q[1]).abs() > 1e-9 {
            return Err(Failure::config(format!("input point {i} is not quadrature node {q:?}")));
        }
    }
    Ok(())
}

fn real_main(cli: Cli) -> CliResult<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Failure::config(e.to_string()))?;
    }
    let cfg = FileConfig::load(cli.config.as_deref()).map_err(Failure::config)?;
    let strip = cli.strip_constant;
    match cli.command {
        Command::Classify { g, m, json } => {
            let g = parse_g(&g, strip)?;
            emit(&classify(&g, m, json)?, None)
        }
        Command::Kernel { g, m, x, y, grid, route, format, output, strict, strict_tolerance } => {
            let g = parse_g(&g, strip)?;
            let points: Vec<(VectorM, VectorM)> = match (x, y, grid) {
                (Some(x), Some(y), None) => vec![(parse_coords(&x, m)?, parse_coords(&y, m)?)],
                (None, None, Some(spec)) => grid::parse_grid(&spec, m)
                    .map_err(Failure::config)?
                    .into_iter()
                    .map(|(x, y)| Ok((VectorM::new(x)?, VectorM::new(y)?)))
                    .collect::<CliResult<_>>()?,
                _ => return Err(Failure::config("give either --x and --y, or --grid")),
            };
            let samples = kernel(&g, m, points, route.map(Route::from), &cfg.quadrature, strict.then_some(strict_tolerance))?;
            let text = match format {
                Format::Csv => samples_to_csv(&samples)?,
                Format::Json => samples_to_json(&samples) + "\n",
            };
            emit(&text, output.as_deref())
        }
        Command::Verify { suite, seed, json } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>()?]
            };
            let opts = VerifyOptions { seed, quadrature: cfg.quadrature, hermite: cfg.hermite };
            let mut reports = Vec::new();
            for s in suites {
                let r = run(s, &opts)?;
                if !json {
                    emit(&r.render(), None)?;
                }
                reports.push(r);
            }
            if json {
                emit(&(serde_json::to_string_pretty(&reports).expect("plain data") + "\n"), None)?;
            }
            let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::tolerance(format!("tolerance not met in: {}", failed.join(", "))))
            }
        }
        Command::Transform { g, psi, input, dump_input, nodes, y_nodes, side, output } => {
            let g = parse_g(&g, strip)?;
            let mut spec: HermiteSpec = cfg.hermite;
            if let Some(n) = nodes {
                spec.nodes = n;
            }
            if let Some(n) = y_nodes {
                spec.y_nodes = n;
            }
            if let Some(s) = side {
                spec.side = match s {
                    SideArg::Left => Side::Left,
                    SideArg::Right => Side::Right,
                };
            }
            spec.validate()?;
            let grid = XGrid::from_spec(&spec);
            let (f, index) = match (psi, input) {
                (Some(p), None) => {
                    let ix = parse_psi(&p)?;
                    (grid.sample(|x| ix.eval(x)), Some(ix))
                }
                (None, Some(path)) => {
                    let text = fs::read_to_string(&path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
                    let (points, values) = planar_from_csv(&text)?;
                    match_grid(&grid, &points)?;
                    (values, None)
                }
                _ => return Err(Failure::config("give either --psi or --input")),
            };
            if let Some(path) = dump_input {
                emit(&planar_to_csv(&grid.points, &f)?, Some(&path))?;
            }
            let ys = spec.y_grid();
            let image = apply_transform(&g, &f, &grid, &ys, &spec)?;
            if let Some(ix) = index {
                let mu = predicted_mu(&g, ix.j, ix.k, 2);
                let expect: Vec<Multivector> = ys.iter().map(|&y| ix.eval(y).scale(mu.to_complex())).collect();
                eprintln!(
                    "psi_({},{},{}): predicted mu = {mu}, relative residual = {:.3e}",
                    ix.j,
                    ix.k,
                    ix.l,
                    relative_residual(&image, &expect)
                );
            }
            emit(&planar_to_csv(&ys, &image)?, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
