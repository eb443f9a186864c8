//! `trispec` command-line pipeline.

use std::ops::Range;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use trispec::analysis::{
    cheng_bound, compare_spectra, projection_residual, restrict, theorem1_admissible_mesh,
    AdmissibilityInput, EigenfunctionId, ResidualReport,
};
use trispec::eig::{solve_iterative, DENSE_THRESHOLD, DEFAULT_REL_GAP};
use trispec::io::{
    load_mesh, load_spectrum, matrix_to_matrix_market, matrix_to_triplet_json, save_mesh,
    to_json, write_json, write_text, IoError, LoadedMesh, MeshFile, SpectrumFile,
};
use trispec::manifolds::{generate_sphere_mesh, generate_torus_mesh};
use trispec::metric::{validate_metric, DEGENERACY_TOL};
use trispec::{assemble, check_closed_pseudomanifold, solve_dense, MeshStats, ModelManifold};

#[derive(Parser)]
#[command(name = "trispec", version, about = "Spectra of discrete Laplacians on geodesic triangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a triangulation of a model manifold
    Gen(GenArgs),
    /// Validate a mesh and print its statistics; exit 1 if it is not a clean closed pseudomanifold
    Check {
        mesh: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve for the lowest eigenpairs of a mesh
    Spectrum(SpectrumArgs),
    /// Compare a spectrum against the analytic spectrum of the mesh's manifold
    Compare(CompareArgs),
    /// Projection residuals of restricted analytic eigenfunctions
    Residuals(ResidualArgs),
    /// Export mass and stiffness matrices
    Export(ExportArgs),
    /// Evaluate closed-form bounds
    Bound {
        #[command(subcommand)]
        which: BoundCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ManifoldKind {
    Sphere,
    Torus,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    manifold: ManifoldKind,
    /// Icosahedral subdivision level (sphere)
    #[arg(long, default_value_t = 2)]
    level: u32,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Grid size MxK (torus)
    #[arg(long, default_value = "8x8", value_parser = parse_grid)]
    grid: (usize, usize),
    /// Periods a,b (torus); defaults to 2π,2π
    #[arg(long, value_parser = parse_periods)]
    periods: Option<[f64; 2]>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverChoice {
    /// Dense up to the dense threshold, iterative above it
    Auto,
    Dense,
    Iterative,
}

#[derive(Args)]
struct SpectrumArgs {
    mesh: PathBuf,
    #[arg(long)]
    num_eigs: usize,
    #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
    solver: SolverChoice,
    /// Shift for the iterative solver; must lie below the spectrum
    #[arg(long, default_value_t = 0.0)]
    shift: f64,
    /// Include eigenvectors in the output
    #[arg(long)]
    eigvecs: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    spectrum: PathBuf,
    #[arg(long)]
    mesh: PathBuf,
    /// Number of analytic clusters to compare; defaults to as many as the spectrum covers
    #[arg(long)]
    clusters: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_REL_GAP)]
    rel_gap: f64,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ResidualArgs {
    spectrum: PathBuf,
    #[arg(long)]
    mesh: PathBuf,
    /// Analytic cluster indices p..q (half-open)
    #[arg(long, value_parser = parse_range)]
    clusters: Range<usize>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Triplets,
    MatrixMarket,
}

#[derive(Args)]
struct ExportArgs {
    mesh: PathBuf,
    #[arg(long, value_enum, default_value_t = MatrixFormat::MatrixMarket)]
    format: MatrixFormat,
    #[arg(long)]
    mass: PathBuf,
    #[arg(long)]
    stiffness: PathBuf,
}

#[derive(Subcommand)]
enum BoundCommand {
    /// Largest admissible mesh size for (1 ± ε) eigenvalue agreement
    Thm1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        diam: f64,
        #[arg(long)]
        inj: f64,
        #[arg(long)]
        thinness: f64,
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 1.0)]
        cn: f64,
    },
    /// Upper bound on the k-th eigenvalue
    Cheng {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        diam: f64,
        #[arg(long)]
        inj: f64,
        #[arg(long, default_value_t = 1.0)]
        cn: f64,
    },
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (m, k) = s.split_once(['x', 'X']).ok_or("expected MxK")?;
    Ok((
        m.trim().parse().map_err(|e| format!("{e}"))?,
        k.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn parse_periods(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or("expected a,b")?;
    Ok([
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
    ])
}

fn parse_range(s: &str) -> Result<Range<usize>, String> {
    let (p, q) = s.split_once("..").ok_or("expected p..q")?;
    let p: usize = p.trim().parse().map_err(|e| format!("{e}"))?;
    let q: usize = q.trim().parse().map_err(|e| format!("{e}"))?;
    if p >= q {
        return Err(format!("empty range {p}..{q}"));
    }
    Ok(p..q)
}

/// An error reported on stderr as `{"error": {"kind", "message"}}`.
struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Self {
            kind,
            message: message.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let message = match &e {
            IoError::Validation { details, .. } if !details.is_null() => {
                format!("{e}: {details}")
            }
            _ => e.to_string(),
        };
        Self::new(e.kind(), message)
    }
}

macro_rules! impl_failure {
    ($($ty:ty => $kind:literal),* $(,)?) => {
        $(impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Self::new($kind, e)
            }
        })*
    };
}

impl_failure! {
    trispec::metric::MetricError => "metric_error",
    trispec::eig::SolverError => "solver_error",
    trispec::analysis::AnalysisError => "analysis_error",
    trispec::manifolds::ManifoldError => "manifold_error",
}

fn require_vertexed(mesh: LoadedMesh) -> Result<trispec::VertexedMesh, Failure> {
    match mesh {
        LoadedMesh::Vertexed(m) => Ok(m),
        LoadedMesh::Metric(_) => Err(Failure::new(
            "missing_manifold",
            "the mesh has no positions and manifold tag, so no analytic spectrum is available",
        )),
    }
}

fn check_spectrum_matches(spec: &SpectrumFile, n: usize) -> Result<(), Failure> {
    if spec.num_vertices != n {
        return Err(Failure::new(
            "dimension_mismatch",
            format!("spectrum has {} vertices, mesh has {n}", spec.num_vertices),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Gen(args) => {
            let mesh = match args.manifold {
                ManifoldKind::Sphere => {
                    ModelManifold::Sphere { radius: args.radius }.validate()?;
                    generate_sphere_mesh(args.radius, args.level)
                }
                ManifoldKind::Torus => {
                    let periods = args.periods.unwrap_or([std::f64::consts::TAU; 2]);
                    ModelManifold::FlatTorus { periods }.validate()?;
                    generate_torus_mesh(periods, args.grid.0, args.grid.1)?
                }
            };
            save_mesh(&args.output, &MeshFile::from_vertexed(&mesh))?;
        }
        Command::Check { mesh, output } => {
            let loaded = load_mesh(&mesh)?;
            let mc = loaded.metric();
            let closedness = check_closed_pseudomanifold(mc.complex());
            let metric = validate_metric(mc, DEGENERACY_TOL);
            let stats = mc.mesh_stats()?;
            let mut lengths: Vec<f64> = mc.edge_lengths().map(|(_, _, l)| l).collect();
            lengths.sort_by(f64::total_cmp);
            lengths.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
            let valid = closedness.is_closed() && metric.is_valid();
            let report = json!({
                "valid": valid,
                "closedness": closedness,
                "metric": metric,
                "stats": stats,
                "euler_characteristic": mc.complex().euler_characteristic(),
                "distinct_edge_lengths": lengths.len(),
            });
            emit(output.as_ref(), &report)?;
            if !valid {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Spectrum(args) => {
            let loaded = load_mesh(&args.mesh)?;
            let fp = assemble(loaded.metric())?;
            let n = fp.num_vertices();
            let result = match args.solver {
                SolverChoice::Dense => solve_dense(&fp, args.num_eigs)?,
                SolverChoice::Iterative => solve_iterative(&fp, args.num_eigs, args.shift)?,
                SolverChoice::Auto if n <= DENSE_THRESHOLD => solve_dense(&fp, args.num_eigs)?,
                SolverChoice::Auto => solve_iterative(&fp, args.num_eigs, args.shift)?,
            };
            let file = SpectrumFile::from_result(&result, n, Some(fp.stats), args.eigvecs);
            write_json(&args.output, &file)?;
        }
        Command::Compare(args) => {
            let spec = load_spectrum(&args.spectrum)?;
            let mesh = require_vertexed(load_mesh(&args.mesh)?)?;
            check_spectrum_matches(&spec, mesh.num_vertices())?;
            let count = args.clusters.unwrap_or_else(|| covered_clusters(&mesh.manifold, spec.eigenvalues.len()));
            let analytic = mesh.manifold.analytic_spectrum(count);
            let mut report = compare_spectra(&spec.eigenvalues, &analytic, args.rel_gap)?;
            if let Some(stats) = spec.mesh.as_ref() {
                report = report.with_mesh(stats);
            }
            write_json(&args.output, &report)?;
            if let Some(csv) = args.csv {
                write_text(csv, &report.to_csv())?;
            }
        }
        Command::Residuals(args) => {
            let spec = load_spectrum(&args.spectrum)?;
            let mesh = require_vertexed(load_mesh(&args.mesh)?)?;
            check_spectrum_matches(&spec, mesh.num_vertices())?;
            let fp = assemble(&mesh.metric)?;
            let analytic = mesh.manifold.analytic_spectrum(args.clusters.end);
            let result = spec.into_result();
            let mut reports = Vec::new();
            let mut start: usize = analytic[..args.clusters.start].iter().map(|c| c.multiplicity).sum();
            for c in args.clusters.clone() {
                let target = start..start + analytic[c].multiplicity;
                start = target.end;
                let vectors = (0..analytic[c].multiplicity)
                    .map(|member| {
                        let id = EigenfunctionId { cluster: c, member };
                        restrict(&mesh, id).map(|v| (id.to_string(), v))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let report = projection_residual(&fp, &result, &vectors, target)?;
                reports.push(ClusterResidual {
                    cluster: c,
                    eigenvalue: analytic[c].eigenvalue,
                    report,
                });
            }
            write_json(
                &args.output,
                &ResidualFile {
                    mesh: fp.stats,
                    clusters: reports,
                },
            )?;
        }
        Command::Export(args) => {
            let fp = assemble(load_mesh(&args.mesh)?.metric())?;
            let render = match args.format {
                MatrixFormat::Triplets => matrix_to_triplet_json,
                MatrixFormat::MatrixMarket => matrix_to_matrix_market,
            };
            write_text(&args.mass, &render(&fp.mass))?;
            write_text(&args.stiffness, &render(&fp.stiffness))?;
        }
        Command::Bound { which } => {
            let value = match which {
                BoundCommand::Thm1 {
                    n,
                    eps,
                    lambda,
                    diam,
                    inj,
                    thinness,
                    order,
                    cn,
                } => {
                    let input = AdmissibilityInput {
                        n,
                        epsilon: eps,
                        lambda,
                        diameter: diam,
                        injectivity: inj,
                        thinness,
                        order,
                        c_n: cn,
                    };
                    json!({ "admissible_mesh": theorem1_admissible_mesh(&input), "input": input })
                }
                BoundCommand::Cheng {
                    n,
                    k,
                    lambda,
                    diam,
                    inj,
                    cn,
                } => json!({ "bound": cheng_bound(n, k, lambda, diam, inj, cn) }),
            };
            print!("{}", to_json(&value));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ClusterResidual {
    cluster: usize,
    eigenvalue: f64,
    report: ResidualReport,
}

#[derive(Serialize)]
struct ResidualFile {
    mesh: MeshStats,
    clusters: Vec<ClusterResidual>,
}

/// Number of leading analytic clusters whose multiplicities fit in `available`.
fn covered_clusters(manifold: &ModelManifold, available: usize) -> usize {
    let spectrum = manifold.analytic_spectrum(available);
    let mut used = 0;
    spectrum
        .iter()
        .take_while(|c| {
            used += c.multiplicity;
            used <= available
        })
        .count()
}

fn emit(output: Option<&PathBuf>, value: &serde_json::Value) -> Result<(), IoError> {
    match output {
        Some(path) => write_json(path, value),
        None => {
            print!("{}", to_json(value));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            let body = json!({ "error": { "kind": f.kind, "message": f.message } });
            eprintln!("{body}");
            ExitCode::from(1)
        }
    }
}
