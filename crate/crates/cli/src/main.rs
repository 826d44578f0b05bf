//! `polyvem` command-line driver: dataset generation, quality scoring,
//! single solves, convergence studies and plotting.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyvem::basis::BasisKind;
use polyvem::datasets::{generate, load_manifest, write_dataset};
use polyvem::mesh::read_mesh;
use polyvem::quality::{dataset_quality, mesh_quality, quality_csv};
use polyvem::study::{read_study_csv, run_study, study_csv, study_plots, StudyConfig};
use polyvem::vem::{solve_problem, ElementOptions, ModelProblem, SolveStatus, StabKind};
use polyvem::{DatasetError, DatasetKind, DatasetSpec, MeshIoError, StudyError};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::InvalidSpec(_) | DatasetError::TooLarge { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<MeshIoError> for CliError {
    fn from(e: MeshIoError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<StudyError> for CliError {
    fn from(e: StudyError) -> Self {
        match e {
            StudyError::Config(m) => CliError::Usage(m),
            StudyError::Dataset(d) => d.into(),
            StudyError::Io(io) => io.into(),
        }
    }
}

#[derive(Parser)]
#[command(name = "polyvem", version, about = "Virtual elements on pathological polygonal meshes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a dataset as OFF files plus a JSON manifest.
    Generate {
        #[command(flatten)]
        ds: DatasetArgs,
        /// JSON dataset spec; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "data")]
        out: PathBuf,
    },
    /// Score an OFF mesh or every level of a dataset manifest.
    Quality {
        /// An `.off` mesh or a `*_manifest.json` file.
        path: PathBuf,
        /// Also write per-element (mesh) or per-level (manifest) CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the sin-sin model problem on one mesh.
    Solve {
        /// OFF mesh; alternatively use --kind and --level.
        mesh: Option<PathBuf>,
        #[command(flatten)]
        ds: DatasetArgs,
        /// Level of the generated dataset to solve on.
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "drecipe")]
        stab: StabKind,
        #[arg(long, default_value = "ortho")]
        basis: BasisKind,
    },
    /// Run a convergence study and write results.csv, quality tables and plots.
    Study {
        /// JSON study config; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        ds: DatasetArgs,
        /// Orders, comma separated.
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<usize>>,
        #[arg(long)]
        stab: Option<StabKind>,
        #[arg(long)]
        basis: Option<BasisKind>,
        #[arg(long)]
        quality_only: bool,
        #[arg(long)]
        no_plots: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw error plots from a results.csv written by `study`.
    Plot {
        csv: PathBuf,
        #[arg(long, default_value = "plots")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DatasetArgs {
    #[arg(long)]
    kind: Option<DatasetKind>,
    /// Index of the last level.
    #[arg(long)]
    levels: Option<usize>,
    /// Elements inserted per mirroring step.
    #[arg(long)]
    nel: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
}

impl DatasetArgs {
    fn apply(&self, spec: &mut DatasetSpec) {
        if let Some(k) = self.kind {
            spec.kind = k;
        }
        if let Some(l) = self.levels {
            spec.levels = l;
        }
        if let Some(n) = self.nel {
            spec.n_el = n;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
    }

    fn any(&self) -> bool {
        self.kind.is_some() || self.levels.is_some() || self.nel.is_some() || self.seed.is_some()
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn json_error(path: &Path, e: serde_json::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

fn write(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn cmd_generate(ds: &DatasetArgs, config: Option<&Path>, out: &Path) -> Result<(), CliError> {
    let mut spec = match config {
        Some(p) => serde_json::from_str(&read_text(p)?).map_err(|e| json_error(p, e))?,
        None => {
            let kind = ds.kind.ok_or_else(|| CliError::Usage("--kind or --config is required".into()))?;
            DatasetSpec::new(kind)
        }
    };
    ds.apply(&mut spec);
    spec.validate()?;
    let dataset = generate(&spec)?;
    for (l, v) in dataset.violations() {
        eprintln!("warning: level {l}: {v}");
    }
    let manifest = write_dataset(&dataset, out)?;
    println!("{}", manifest.display());
    Ok(())
}

fn cmd_quality(path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    if path.extension().is_some_and(|e| e == "json") {
        let (manifest, meshes) = load_manifest(path)?;
        let mut rows = dataset_quality(&meshes);
        for (r, l) in rows.iter_mut().zip(&manifest.levels) {
            r.level = l.level;
        }
        let csv = quality_csv(&rows);
        print!("{csv}");
        if let Some(o) = out {
            write(o, &csv)?;
        }
        return Ok(());
    }
    let mesh = read_mesh(path)?;
    let r = mesh_quality(&mesh);
    let m = r.means();
    println!("rho {:.6}", r.rho);
    println!("rho1 {:.6}\nrho2 {:.6}\nrho3 {:.6}\nrho4 {:.6}", m[0], m[1], m[2], m[3]);
    let s = r.stats;
    println!("h {:.6e}\na_ratio {:.6e}\ne_ratio {:.6e}", s.h, s.a_ratio, s.e_ratio);
    println!("vertices {}\nelements {}", s.n_vertices, s.n_elements);
    if let Some(o) = out {
        write(o, &r.element_csv())?;
    }
    Ok(())
}

fn cmd_solve(mesh: Option<&Path>, ds: &DatasetArgs, level: usize, opts: ElementOptions) -> Result<(), CliError> {
    let m = match (mesh, ds.kind) {
        (Some(p), _) => read_mesh(p)?,
        (None, Some(kind)) => {
            let mut spec = DatasetSpec::new(kind);
            ds.apply(&mut spec);
            spec.levels = spec.levels.max(level);
            polyvem::datasets::generate_level(&spec, level)?
        }
        (None, None) => return Err(CliError::Usage("give a mesh file or --kind".into())),
    };
    let (rep, _) = solve_problem(&m, &opts, &ModelProblem::sin_sin()).map_err(|e| CliError::Numerical(e.to_string()))?;
    println!("n_dof {}", rep.n_dof);
    println!("h {:.6e}", rep.h);
    println!("err_l2_rel {:.6e}", rep.err_l2_rel);
    println!("err_h1_rel {:.6e}", rep.err_h1_rel);
    println!("max_log10_cond_g {:.3}", rep.max_log10_cond_g);
    println!("max_log10_cond_h {:.3}", rep.max_log10_cond_h);
    println!("max_log10_pinabla_id {:.3}", rep.max_log10_pinabla_id);
    println!("max_log10_pi0_id {:.3}", rep.max_log10_pi0_id);
    println!("residual {:.3e}", rep.residual);
    println!("status {}", rep.status.as_str());
    match rep.status {
        SolveStatus::Ok => Ok(()),
        _ => Err(CliError::Numerical(rep.message.unwrap_or_else(|| rep.status.as_str().into()))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_study(
    config: Option<&Path>,
    ds: &DatasetArgs,
    k: Option<Vec<usize>>,
    stab: Option<StabKind>,
    basis: Option<BasisKind>,
    quality_only: bool,
    no_plots: bool,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut cfg: StudyConfig = match config {
        Some(p) => serde_json::from_str(&read_text(p)?).map_err(|e| json_error(p, e))?,
        None => StudyConfig::default(),
    };
    if let Some(kind) = ds.kind {
        cfg.datasets = vec![DatasetSpec::new(kind)];
    }
    if ds.any() {
        cfg.datasets.iter_mut().for_each(|d| ds.apply(d));
    }
    if let Some(k) = k {
        cfg.orders = k;
    }
    if let Some(s) = stab {
        cfg.stab = s;
    }
    if let Some(b) = basis {
        cfg.basis = b;
    }
    cfg.quality_only |= quality_only;
    cfg.plots &= !no_plots;
    if let Some(o) = out {
        cfg.out = o;
    }

    let result = run_study(&cfg)?;
    fs::create_dir_all(&cfg.out)?;
    for (name, rows) in &result.quality {
        write(&cfg.out.join(format!("{name}_quality.csv")), &quality_csv(rows))?;
    }
    if !cfg.quality_only {
        write(&cfg.out.join("results.csv"), &study_csv(&result.rows))?;
        if cfg.plots {
            for (file, svg) in study_plots(&result.rows) {
                write(&cfg.out.join(file), &svg)?;
            }
        }
        for r in result.rows.iter().filter(|r| r.status != "ok") {
            eprintln!("{} level {} k = {}: {}", r.dataset, r.level, r.k, r.status);
        }
    }
    println!("{}", cfg.out.display());
    Ok(())
}

fn cmd_plot(csv: &Path, out: &Path) -> Result<(), CliError> {
    let text = read_text(csv)?;
    let rows = read_study_csv(&text)?;
    fs::create_dir_all(out)?;
    for (file, svg) in study_plots(&rows) {
        let p = out.join(file);
        write(&p, &svg)?;
        println!("{}", p.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Generate { ds, config, out } => cmd_generate(&ds, config.as_deref(), &out),
        Cmd::Quality { path, out } => cmd_quality(&path, out.as_deref()),
        Cmd::Solve { mesh, ds, level, k, stab, basis } => {
            if !(1..=3).contains(&k) {
                return Err(CliError::Usage(format!("--k must be 1, 2 or 3, got {k}")));
            }
            cmd_solve(mesh.as_deref(), &ds, level, ElementOptions::new(k, basis, stab))
        }
        Cmd::Study { config, ds, k, stab, basis, quality_only, no_plots, out } => {
            cmd_study(config.as_deref(), &ds, k, stab, basis, quality_only, no_plots, out)
        }
        Cmd::Plot { csv, out } => cmd_plot(&csv, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
