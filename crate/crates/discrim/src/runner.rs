//! Sweep orchestration: error-probability tables over N, rate tables over
//! purity, the collective-vs-PPT rate gap, asymptotic rate fits, the copies
//! ratio, and CSV/JSON emission.

use serde::{Deserialize, Serialize};

use crate::adaptive::{self, PriorGrid};
use crate::error::{Error, Result};
use crate::helstrom;
use crate::local;
use crate::qubit::StatePair;
use crate::sdp::{self, SolveStatus};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// One of the four discrimination protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Collective,
    Ppt,
    Repeated,
    Adaptive,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Collective,
        Strategy::Ppt,
        Strategy::Repeated,
        Strategy::Adaptive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Collective => "collective",
            Strategy::Ppt => "ppt",
            Strategy::Repeated => "repeated",
            Strategy::Adaptive => "adaptive",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "collective" => Ok(Strategy::Collective),
            "ppt" => Ok(Strategy::Ppt),
            "repeated" => Ok(Strategy::Repeated),
            "adaptive" => Ok(Strategy::Adaptive),
            other => Err(Error::domain(
                "strategy",
                format!("unknown strategy {other:?}"),
            )),
        }
    }
}

/// Largest copy count accepted for the iterative solvers without an
/// explicit override.
pub const MAX_COPIES_DEFAULT: u32 = 40;

/// Full description of a sweep; serialized verbatim into JSON output so a
/// table is self-describing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub r0: f64,
    pub r1: f64,
    pub theta: f64,
    pub n_min: u32,
    pub n_max: u32,
    pub strategies: Vec<Strategy>,
    /// Suboptimality tolerance passed to the PPT solver.
    pub sdp_tol: f64,
    /// Prior-lattice size for the adaptive dynamic program.
    pub grid_points: usize,
    /// Accept copy counts above [`MAX_COPIES_DEFAULT`].
    #[serde(default)]
    pub allow_large: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        StatePair::new(self.r0, self.r1, self.theta)?;
        if self.strategies.is_empty() {
            return Err(Error::domain("strategies", "strategy set is empty"));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::domain(
                "n_min",
                format!("bad copy range {}..={}", self.n_min, self.n_max),
            ));
        }
        if self.n_max > MAX_COPIES_DEFAULT && !self.allow_large {
            return Err(Error::Resource(format!(
                "N = {} exceeds the default cap of {MAX_COPIES_DEFAULT}; set allow_large to override",
                self.n_max
            )));
        }
        Ok(())
    }

    pub fn pair(&self) -> Result<StatePair> {
        StatePair::new(self.r0, self.r1, self.theta)
    }
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            r0: 0.8,
            r1: 0.8,
            theta: std::f64::consts::FRAC_PI_2,
            n_min: 1,
            n_max: 10,
            strategies: Strategy::ALL.to_vec(),
            sdp_tol: 1e-8,
            grid_points: adaptive::DEFAULT_GRID_POINTS,
            allow_large: false,
        }
    }
}

/// One table entry: either a number or the status of the failed computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Value(f64),
    Missing(String),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Missing(_) => None,
        }
    }
}

/// A rectangular result table with named columns and per-row status notes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// One entry per row: "ok" or semicolon-joined flags.
    pub status: Vec<String>,
}

impl Table {
    fn new(columns: Vec<String>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            status: Vec::new(),
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// CSV with a header row; floats print as shortest round-trip decimals,
    /// so identical inputs give byte-identical output.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push_str(",status\n");
        for (row, status) in self.rows.iter().zip(&self.status) {
            let mut fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Value(v) => format!("{v}"),
                    Cell::Missing(_) => String::new(),
                })
                .collect();
            fields.push(status.clone());
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON document with a metadata block (spec echo, crate version, wall
    /// time) followed by the table.
    pub fn to_json(&self, spec: &SweepSpec, wall_seconds: f64) -> Result<String> {
        let doc = serde_json::json!({
            "metadata": {
                "generator": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
                "spec": spec,
                "wall_seconds": wall_seconds,
            },
            "columns": self.columns,
            "rows": self.rows,
            "status": self.status,
        });
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Solver(e.to_string()))
    }
}

/// Error probability of one strategy at one copy count.
pub fn error_probability(
    pair: &StatePair,
    n: u32,
    strategy: Strategy,
    spec: &SweepSpec,
) -> Result<f64> {
    match strategy {
        Strategy::Collective => helstrom::collective_error(pair, n),
        Strategy::Ppt => {
            let bound = sdp::ppt_error(pair, n, spec.sdp_tol)?;
            match bound.status {
                SolveStatus::NumericalFailure => Err(Error::Solver(
                    "PPT solver lost numerical feasibility".into(),
                )),
                _ => Ok(bound.p_error),
            }
        }
        Strategy::Repeated => Ok(local::repeated_error_opt(pair, n).0),
        Strategy::Adaptive => {
            let grid = PriorGrid::new(spec.grid_points)?;
            Ok(adaptive::dp_solve(pair, n, &grid)?.p_error)
        }
    }
}

/// Per-copy error rate -log(P_e)/N.
pub fn rate_from_error(p_error: f64, n: u32) -> f64 {
    (-(p_error.max(1e-300)).ln() / n as f64).max(0.0)
}

fn ordering_flags(spec: &SweepSpec, row: &[Cell]) -> Vec<String> {
    // columns follow spec.strategies order; compare the canonical chain
    let get = |s: Strategy| {
        spec.strategies
            .iter()
            .position(|&x| x == s)
            .and_then(|i| row[i + 1].value())
    };
    let chain = [
        Strategy::Collective,
        Strategy::Ppt,
        Strategy::Adaptive,
        Strategy::Repeated,
    ];
    let mut flags = Vec::new();
    let present: Vec<(Strategy, f64)> = chain
        .iter()
        .filter_map(|&s| get(s).map(|v| (s, v)))
        .collect();
    for pair in present.windows(2) {
        let (sa, va) = pair[0];
        let (sb, vb) = pair[1];
        if va > vb + 1e-5 {
            flags.push(format!("ordering:{sa}>{sb}"));
        }
    }
    flags
}

/// Error-probability table over the copy range of the spec, one row per N.
pub fn sweep_n(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let pair = spec.pair()?;
    let mut columns = vec!["N".to_string()];
    columns.extend(spec.strategies.iter().map(|s| s.name().to_string()));
    let mut table = Table::new(columns);
    for n in spec.n_min..=spec.n_max {
        let mut row = vec![Cell::Value(n as f64)];
        let mut flags = Vec::new();
        for &strategy in &spec.strategies {
            match error_probability(&pair, n, strategy, spec) {
                Ok(v) => row.push(Cell::Value(v)),
                Err(e) => {
                    flags.push(format!("{strategy}:failed"));
                    row.push(Cell::Missing(e.to_string()));
                }
            }
        }
        flags.extend(ordering_flags(spec, &row));
        table.rows.push(row);
        table
            .status
            .push(if flags.is_empty() { "ok".into() } else { flags.join(";") });
    }
    Ok(table)
}

/// Error-rate table over a purity list at fixed N and theta (r0 = r1 = r),
/// one row per r; entries are C = -log(P_e)/N.
pub fn sweep_r(theta: f64, n: u32, r_list: &[f64], spec: &SweepSpec) -> Result<Table> {
    if r_list.is_empty() {
        return Err(Error::domain("r_list", "empty purity list"));
    }
    let mut columns = vec!["r".to_string()];
    columns.extend(spec.strategies.iter().map(|s| s.name().to_string()));
    let mut table = Table::new(columns);
    for &r in r_list {
        let pair = StatePair::new(r, r, theta)?;
        let cell_spec = SweepSpec {
            r0: r,
            r1: r,
            theta,
            n_min: n,
            n_max: n,
            ..spec.clone()
        };
        cell_spec.validate()?;
        let mut row = vec![Cell::Value(r)];
        let mut flags = Vec::new();
        for &strategy in &spec.strategies {
            match error_probability(&pair, n, strategy, &cell_spec) {
                Ok(pe) => row.push(Cell::Value(rate_from_error(pe, n))),
                Err(e) => {
                    flags.push(format!("{strategy}:failed"));
                    row.push(Cell::Missing(e.to_string()));
                }
            }
        }
        table.rows.push(row);
        table
            .status
            .push(if flags.is_empty() { "ok".into() } else { flags.join(";") });
    }
    Ok(table)
}

/// The collective-vs-PPT rate gap at one copy count.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Gap {
    /// Delta = -log(P_col / P_ppt) / N, clamped at zero.
    pub delta: f64,
    pub p_collective: f64,
    pub p_ppt: f64,
    /// True when the raw value was slightly negative (within solver
    /// tolerance) and clamped.
    pub clamped: bool,
}

/// Gap between the collective and PPT error rates for N copies.
pub fn gap(pair: &StatePair, n: u32, tol: f64) -> Result<Gap> {
    let p_col = helstrom::collective_error(pair, n)?;
    let p_ppt = sdp::ppt_error(pair, n, tol)?.p_error;
    if p_col <= 0.0 || p_ppt <= 0.0 {
        return Err(Error::Solver(
            "zero error probability; the rate gap is undefined".into(),
        ));
    }
    let raw = -(p_col / p_ppt).ln() / n as f64;
    let eps = tol.max(1e-12);
    if raw < -eps {
        return Err(Error::Solver(format!(
            "PPT bound fell below the collective optimum by {raw:.3e} per copy"
        )));
    }
    Ok(Gap {
        delta: raw.max(0.0),
        p_collective: p_col,
        p_ppt,
        clamped: raw < 0.0,
    })
}

/// Least-squares fit of the finite-N rate model
/// C(N) = C0 + C1 log(N)/N + C2/N.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RateFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub residual: f64,
    pub n_min: u32,
    pub n_max: u32,
}

impl RateFit {
    pub fn evaluate(&self, n: u32) -> f64 {
        let nf = n as f64;
        self.c0 + self.c1 * nf.ln() / nf + self.c2 / nf
    }
}

/// Fits the rate model to (N, P_e) rows restricted to the window.
pub fn fit_rate(rows: &[(u32, f64)], n_min: u32, n_max: u32) -> Result<RateFit> {
    let selected: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(n, _)| (n_min..=n_max).contains(n))
        .map(|&(n, pe)| (n as f64, rate_from_error(pe, n)))
        .collect();
    if selected.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 rows in N = {n_min}..={n_max}, have {}",
            selected.len()
        )));
    }
    let design = nalgebra::DMatrix::from_fn(selected.len(), 3, |i, j| {
        let n = selected[i].0;
        match j {
            0 => 1.0,
            1 => n.ln() / n,
            _ => 1.0 / n,
        }
    });
    let target = nalgebra::DVector::from_iterator(selected.len(), selected.iter().map(|&(_, c)| c));
    let svd = design.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    if svd.singular_values.min() < 1e-12 * max_sv {
        return Err(Error::Fit("degenerate fit window (singular design matrix)".into()));
    }
    let coeffs = svd
        .solve(&target, 1e-12 * max_sv)
        .map_err(|e| Error::Fit(e.to_string()))?;
    let residual = (&design * &coeffs - &target).norm();
    Ok(RateFit {
        c0: coeffs[0],
        c1: coeffs[1],
        c2: coeffs[2],
        residual,
        n_min,
        n_max,
    })
}

/// The copies ratio f = C^col / C^PPT and its ingredients.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CopiesRatio {
    pub f: f64,
    pub rate_collective: f64,
    pub rate_ppt: f64,
}

/// Ratio of collective to PPT error rates at N copies; f N copies of the
/// LOCC-bound strategy match N copies of the collective one.
pub fn copies_ratio(pair: &StatePair, n: u32, tol: f64) -> Result<CopiesRatio> {
    let p_col = helstrom::collective_error(pair, n)?;
    let p_ppt = sdp::ppt_error(pair, n, tol)?.p_error;
    if p_ppt >= 0.5 || p_col <= 0.0 {
        return Err(Error::Solver(
            "degenerate error probabilities; the rate ratio is undefined".into(),
        ));
    }
    let rate_col = rate_from_error(p_col, n);
    let rate_ppt = rate_from_error(p_ppt, n);
    if rate_ppt <= 0.0 {
        return Err(Error::Solver("PPT rate vanished; ratio undefined".into()));
    }
    Ok(CopiesRatio {
        f: rate_col / rate_ppt,
        rate_collective: rate_col,
        rate_ppt,
    })
}

/// Convenience wrapper timing a table build for JSON emission.
pub fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let value = f()?;
    Ok((value, start.elapsed().as_secs_f64()))
}
