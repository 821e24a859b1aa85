//! Pipeline plumbing behind the `pruess` binary: configuration, potential
//! loading, mesh/method dispatch, and the text emitters. Kept as a library so
//! tests can drive the exact pipeline the subcommands use.

use std::fmt;
use std::path::{Path, PathBuf};

use pruess::fitting::{slope_table, Method};
use pruess::mesh::{adaptive_mesh, mesh_penalties, uniform_mesh, Mesh, PenaltyKind};
use pruess::potentials::{builtin, from_table, parse_table_csv, CaseId, PotentialSpec};
use pruess::solver::{find_eigenvalues, BoundaryConditions, Problem, SolveConfig};

/// Method labels used in reports: `U`niform/`A`daptive mesh crossed with
/// `P`iecewise-constant/e`X`tended fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Up,
    Ux,
    Ap,
    Ax,
}

impl MethodChoice {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "up" => Some(Self::Up),
            "ux" => Some(Self::Ux),
            "ap" => Some(Self::Ap),
            "ax" => Some(Self::Ax),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Up => "U-P",
            Self::Ux => "U-X",
            Self::Ap => "A-P",
            Self::Ax => "A-X",
        }
    }

    pub fn fit_method(&self) -> Method {
        match self {
            Self::Up | Self::Ap => Method::Pruess,
            Self::Ux | Self::Ax => Method::Extended,
        }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, Self::Ap | Self::Ax)
    }

    /// Penalty minimized by the adaptive mesh: the constant misfit for the
    /// piecewise-constant fit, the secant-linear misfit for the extended one.
    pub fn penalty_kind(&self) -> PenaltyKind {
        match self.fit_method() {
            Method::Pruess => PenaltyKind::Constant,
            Method::Extended => PenaltyKind::Linear,
        }
    }
}

#[derive(Debug, Clone)]
pub enum PotentialSource {
    Case(CaseId),
    Table(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: PotentialSource,
    pub method: MethodChoice,
    pub k: usize,
    pub num_eigen: usize,
    pub tol: f64,
    pub scan_step: Option<f64>,
    pub lambda_max: Option<f64>,
}

impl RunConfig {
    pub fn new(source: PotentialSource, method: MethodChoice, k: usize) -> Self {
        Self {
            source,
            method,
            k,
            num_eigen: 25,
            tol: 1e-10,
            scan_step: None,
            lambda_max: None,
        }
    }

    fn solve_config(&self) -> SolveConfig {
        let mut cfg = SolveConfig {
            rel_tolerance: self.tol,
            ..SolveConfig::default()
        };
        if let Some(step) = self.scan_step {
            cfg.initial_step = step;
        }
        cfg.lambda_ceiling = self.lambda_max;
        cfg
    }
}

/// Pipeline failure annotated with the stage that produced it.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Stage {
        stage: &'static str,
        source: pruess::Error,
    },
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Stage { stage, source } => write!(f, "{stage} failed: {source}"),
            CliError::Io { path, source } => {
                write!(f, "cannot access {}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    /// 2 for configuration problems, 3 for numerical/solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Stage { .. } => 3,
        }
    }
}

pub fn load_potential(source: &PotentialSource) -> Result<PotentialSpec, CliError> {
    match source {
        PotentialSource::Case(case) => Ok(builtin(*case)),
        PotentialSource::Table(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let samples = parse_table_csv(&text)
                .and_then(|s| from_table(&s).map(|p| (s, p)))
                .map(|(_, p)| p)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            Ok(samples)
        }
    }
}

pub fn build_mesh(p: &PotentialSpec, cfg: &RunConfig) -> Result<Mesh, CliError> {
    let mesh = if cfg.method.is_adaptive() {
        adaptive_mesh(|x| p.eval(x), cfg.k, cfg.method.penalty_kind())
    } else {
        uniform_mesh(cfg.k)
    };
    mesh.map_err(|source| CliError::Stage {
        stage: "mesh construction",
        source,
    })
}

pub fn build_problem(cfg: &RunConfig) -> Result<Problem, CliError> {
    let p = load_potential(&cfg.source)?;
    let mesh = build_mesh(&p, cfg)?;
    Problem::new(
        p,
        BoundaryConditions::dirichlet(),
        mesh,
        cfg.method.fit_method(),
    )
    .map_err(|source| CliError::Stage {
        stage: "segment fitting",
        source,
    })
}

/// One line of the eigenvalue report.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub case: String,
    pub method: &'static str,
    pub k: usize,
    pub index: usize,
    pub lambda: f64,
}

/// Builds the problem and solves for the requested number of eigenvalues.
pub fn run(cfg: &RunConfig) -> Result<Vec<Row>, CliError> {
    let problem = build_problem(cfg)?;
    let case = problem.potential().id.clone();
    let results =
        find_eigenvalues(&problem, cfg.num_eigen, &cfg.solve_config()).map_err(|source| {
            CliError::Stage {
                stage: "eigenvalue search",
                source,
            }
        })?;
    Ok(results
        .into_iter()
        .map(|r| Row {
            case: case.clone(),
            method: cfg.method.label(),
            k: cfg.k,
            index: r.index,
            lambda: r.lambda,
        })
        .collect())
}

fn format_lambda(lambda: f64, paper_digits: bool) -> String {
    if paper_digits {
        format!("{lambda:.4e}")
    } else {
        format!("{lambda:.9e}")
    }
}

/// Renders rows as CSV (`case,method,K,index,lambda`) or an aligned Markdown
/// table. Output is deterministic for a given input.
pub fn render_rows(rows: &[Row], format: OutputFormat, paper_digits: bool) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("case,method,K,index,lambda\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.case,
                    r.method,
                    r.k,
                    r.index,
                    format_lambda(r.lambda, paper_digits)
                ));
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = String::from("| case | method | K | index | lambda |\n");
            out.push_str("|---|---|---|---|---|\n");
            for r in rows {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} |\n",
                    r.case,
                    r.method,
                    r.k,
                    r.index,
                    format_lambda(r.lambda, paper_digits)
                ));
            }
            out
        }
    }
}

/// Potential and fitted model sampled on a uniform grid (`x,p,model` CSV).
pub fn approximation_csv(cfg: &RunConfig, samples: usize) -> Result<String, CliError> {
    let problem = build_problem(cfg)?;
    let p = problem.potential().clone();
    let segments = problem.segments();
    let mut out = String::from("x,p,model\n");
    let n = samples.max(2);
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        // Half-open segments; the last breakpoint belongs to the last one.
        let k = segments
            .iter()
            .position(|s| x < s.right())
            .unwrap_or(segments.len() - 1);
        let model = segments[k].model_value(x);
        out.push_str(&format!("{x:.9e},{:.9e},{model:.9e}\n", p.eval(x)));
    }
    Ok(out)
}

/// Breakpoints and per-segment penalties (`index,breakpoint,segment_penalty`
/// CSV; the final breakpoint has no segment after it).
pub fn mesh_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let p = load_potential(&cfg.source)?;
    let mesh = build_mesh(&p, cfg)?;
    let penalties = mesh_penalties(&|x| p.eval(x), &mesh, cfg.method.penalty_kind());
    let mut out = String::from("index,breakpoint,segment_penalty\n");
    for (i, &x) in mesh.points().iter().enumerate() {
        match penalties.get(i) {
            Some(pen) => out.push_str(&format!("{i},{x:.9e},{pen:.9e}\n")),
            None => out.push_str(&format!("{i},{x:.9e},\n")),
        }
    }
    Ok(out)
}

/// The slope-matching table (`u,t,q_prime` CSV).
pub fn slope_table_csv() -> String {
    let mut out = String::from("u,t,q_prime\n");
    for &(u, t) in &slope_table().nodes {
        out.push_str(&format!(
            "{u:.9e},{t:.9e},{:.9e}\n",
            pruess::basis::cossq_slope(t)
        ));
    }
    out
}

/// Sibling path for the secondary mesh artifact of `approx`.
pub fn mesh_artifact_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push("_mesh.csv");
    out.with_file_name(name)
}
