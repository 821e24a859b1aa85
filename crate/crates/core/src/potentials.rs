//! Registry of the built-in benchmark potentials and user-supplied tables.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Identifier of a built-in benchmark potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [
        CaseId::Case1,
        CaseId::Case2,
        CaseId::Case3,
        CaseId::Case4,
        CaseId::Case5,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CaseId::Case1 => "case1",
            CaseId::Case2 => "case2",
            CaseId::Case3 => "case3",
            CaseId::Case4 => "case4",
            CaseId::Case5 => "case5",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "case1" | "1" => Ok(CaseId::Case1),
            "case2" | "2" => Ok(CaseId::Case2),
            "case3" | "3" => Ok(CaseId::Case3),
            "case4" | "4" => Ok(CaseId::Case4),
            "case5" | "5" => Ok(CaseId::Case5),
            other => Err(Error::UnknownCase(other.to_string())),
        }
    }
}

/// A potential on `[0, 1]`: identifier, total evaluator, display formula.
#[derive(Clone)]
pub struct PotentialSpec {
    pub id: String,
    pub formula: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl PotentialSpec {
    pub fn new<F>(id: impl Into<String>, formula: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            id: id.into(),
            formula: formula.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("id", &self.id)
            .field("formula", &self.formula)
            .finish()
    }
}

/// The five built-in test potentials on `[0, 1]`.
pub fn builtin(case: CaseId) -> PotentialSpec {
    use std::f64::consts::PI;
    match case {
        CaseId::Case1 => PotentialSpec::new("case1", "pi^2 / (pi x + 0.1)^2", |x| {
            let d = PI * x + 0.1;
            PI * PI / (d * d)
        }),
        CaseId::Case2 => PotentialSpec::new(
            "case2",
            "1 + cos(pi t) + 5 cos(2 pi t) - 2 cos(3 pi t) - 3 cos(4 pi t), t = x - 1/2",
            |x| {
                let t = x - 0.5;
                1.0 + (PI * t).cos() + 5.0 * (2.0 * PI * t).cos()
                    - 2.0 * (3.0 * PI * t).cos()
                    - 3.0 * (4.0 * PI * t).cos()
            },
        ),
        CaseId::Case3 => PotentialSpec::new("case3", "x sin(1/x) for x >= 1e-6, else 0", |x| {
            if x >= 1e-6 {
                x * (1.0 / x).sin()
            } else {
                0.0
            }
        }),
        CaseId::Case4 => PotentialSpec::new("case4", "1 / cos^2(x)", |x| {
            let c = x.cos();
            1.0 / (c * c)
        }),
        CaseId::Case5 => PotentialSpec::new("case5", "1 / (0.2 + sqrt(x (1 - x)))", |x| {
            1.0 / (0.2 + (x * (1.0 - x)).sqrt())
        }),
    }
}

/// Piecewise-linear interpolant of tabulated `(x, p)` samples.
///
/// The abscissae must be strictly increasing and cover `[0, 1]`.
pub fn from_table(samples: &[(f64, f64)]) -> Result<PotentialSpec> {
    if samples.len() < 2 {
        return Err(Error::Table("need at least two samples".into()));
    }
    for w in samples.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::Table(format!(
                "abscissae must be strictly increasing, got {} then {}",
                w[0].0, w[1].0
            )));
        }
    }
    let first = samples[0].0;
    let last = samples[samples.len() - 1].0;
    if first > 0.0 || last < 1.0 {
        return Err(Error::Table(format!(
            "samples must cover [0, 1], got [{first}, {last}]"
        )));
    }
    let table: Vec<(f64, f64)> = samples.to_vec();
    let eval = move |x: f64| -> f64 {
        let idx = table.partition_point(|&(xs, _)| xs <= x);
        let hi = idx.clamp(1, table.len() - 1);
        let (x0, p0) = table[hi - 1];
        let (x1, p1) = table[hi];
        let t = (x - x0) / (x1 - x0);
        p0 + t * (p1 - p0)
    };
    Ok(PotentialSpec::new(
        "tabulated",
        format!("piecewise linear through {} samples", samples.len()),
        eval,
    ))
}

/// Parses two-column `x,p` CSV text; a non-numeric header line is skipped.
pub fn parse_table_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
            return Err(Error::Table(format!(
                "line {}: expected two columns",
                lineno + 1
            )));
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(p)) => samples.push((x, p)),
            _ if lineno == 0 => continue, // header
            _ => {
                return Err(Error::Table(format!(
                    "line {}: cannot parse '{line}' as two numbers",
                    lineno + 1
                )))
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::Table("no numeric rows found".into()));
    }
    Ok(samples)
}
