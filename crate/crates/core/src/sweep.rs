//! Parameter sweeps of the entangling power and their CSV form.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::average::{time_average_ep, AveragingWindow};
use crate::error::{Error, Result};
use crate::heisenberg::{
    heisenberg_ep_time_average, heisenberg_period, heisenberg_qubit_qudit_ep_analytic, su2_evolution,
    HeisenbergSpectrum,
};
use crate::ising::{ising_ep_analytic, ising_ep_time_average, ising_evolution, IsingParams, ISING_PERIOD};
use crate::linalg::{BipartiteOperator, UnitaryPath};
use crate::montecarlo::{monte_carlo_ep_with_tol, MonteCarloEstimate};
use crate::oracle::{entangling_power_permutation_oracle, MAX_ORACLE_DIM};
use crate::power::{entangling_power_with_tol, max_linear_entropy};
use crate::spin::SpinSystem;

pub const CSV_HEADER: &str = "param,ep_analytic,ep_matrix,ep_mc,ep_mc_stderr,ep_oracle";

pub const DEFAULT_MC_SAMPLES: usize = 10_000;

/// Panels used for numeric time averages.
pub const TIME_AVERAGE_PANELS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// `H = g S1^z S2^z`, swept over `θ = −g t`.
    Ising,
    /// `H = S1·S2`, swept over `t`.
    Heisenberg,
    /// A unitary read from a file, swept over the exponent `p` of `U^p`.
    Generic,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ising" => Ok(Self::Ising),
            "heisenberg" => Ok(Self::Heisenberg),
            "generic" => Ok(Self::Generic),
            _ => Err(Error::Domain(format!(
                "unknown model `{s}` (expected ising, heisenberg or generic)"
            ))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ising => "ising",
            Self::Heisenberg => "heisenberg",
            Self::Generic => "generic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Analytic,
    Matrix,
    MonteCarlo,
    Oracle,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytic" => Ok(Self::Analytic),
            "matrix" => Ok(Self::Matrix),
            "mc" | "monte-carlo" => Ok(Self::MonteCarlo),
            "oracle" | "permutation-oracle" => Ok(Self::Oracle),
            _ => Err(Error::Domain(format!(
                "unknown method `{s}` (expected analytic, matrix, mc or oracle)"
            ))),
        }
    }
}

/// A set of evaluation methods.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Methods {
    pub analytic: bool,
    pub matrix: bool,
    pub mc: bool,
    pub oracle: bool,
}

impl Methods {
    pub fn only(method: Method) -> Self {
        let mut m = Self::default();
        m.insert(method);
        m
    }

    pub fn insert(&mut self, method: Method) {
        match method {
            Method::Analytic => self.analytic = true,
            Method::Matrix => self.matrix = true,
            Method::MonteCarlo => self.mc = true,
            Method::Oracle => self.oracle = true,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.analytic || self.matrix || self.mc || self.oracle)
    }

    /// Parses a comma-separated list such as `analytic,matrix`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let mut m = Self::default();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            m.insert(part.parse()?);
        }
        Ok(m)
    }
}

impl FromIterator<Method> for Methods {
    fn from_iter<I: IntoIterator<Item = Method>>(iter: I) -> Self {
        let mut m = Self::default();
        for method in iter {
            m.insert(method);
        }
        m
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub model: Model,
    pub d1: usize,
    pub d2: usize,
    pub start: f64,
    pub end: f64,
    pub steps: usize,
    pub methods: Methods,
    pub mc_samples: usize,
    pub seed: u64,
    pub unitarity_tol: f64,
    /// Base operator of a generic sweep.
    pub operator: Option<BipartiteOperator>,
}

impl SweepConfig {
    pub fn new(model: Model, d1: usize, d2: usize, start: f64, end: f64, steps: usize, methods: Methods) -> Self {
        Self {
            model,
            d1,
            d2,
            start,
            end,
            steps,
            methods,
            mc_samples: DEFAULT_MC_SAMPLES,
            seed: 0,
            unitarity_tol: crate::linalg::UNITARITY_TOL,
            operator: None,
        }
    }

    /// Generic sweep over `U^p` for `p` in `[start, end]`.
    pub fn generic(operator: BipartiteOperator, start: f64, end: f64, steps: usize, methods: Methods) -> Self {
        let mut cfg = Self::new(Model::Generic, operator.d1(), operator.d2(), start, end, steps, methods);
        cfg.operator = Some(operator);
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        if self.steps < 1 {
            return bad("steps must be at least 1".into());
        }
        if !(self.start.is_finite() && self.end.is_finite()) {
            return bad("parameter range must be finite".into());
        }
        if self.end < self.start {
            return bad(format!("range end {} is below start {}", self.end, self.start));
        }
        if self.methods.is_empty() {
            return bad("select at least one method".into());
        }
        if self.d1 == 0 || self.d2 == 0 {
            return bad("dimensions must be positive".into());
        }
        if self.methods.mc && self.mc_samples < 2 {
            return bad("mc-samples must be at least 2".into());
        }
        match self.model {
            Model::Ising => {}
            Model::Heisenberg => {
                if self.d1 > self.d2 {
                    return bad(format!(
                        "heisenberg needs d1 <= d2, got {}x{}",
                        self.d1, self.d2
                    ));
                }
                if self.methods.analytic && self.d1 != 2 {
                    return bad("the analytic heisenberg curve needs d1 = 2".into());
                }
                if self.d2 < 2 {
                    return bad("heisenberg needs d2 >= 2".into());
                }
            }
            Model::Generic => {
                if self.methods.analytic {
                    return bad("no analytic curve for a generic operator".into());
                }
                match &self.operator {
                    None => return bad("a generic sweep needs an operator file".into()),
                    Some(op) if (op.d1(), op.d2()) != (self.d1, self.d2) => {
                        return bad(format!(
                            "operator is {}x{} but the sweep is {}x{}",
                            op.d1(),
                            op.d2(),
                            self.d1,
                            self.d2
                        ))
                    }
                    Some(_) => {}
                }
            }
        }
        if self.methods.oracle && self.d1 * self.d2 > MAX_ORACLE_DIM {
            return bad(format!(
                "oracle needs d1*d2 <= {MAX_ORACLE_DIM}, got {}",
                self.d1 * self.d2
            ));
        }
        Ok(())
    }

    /// Grid points `start + k (end − start) / (steps − 1)`, ending exactly at `end`.
    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.end - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| if k + 1 == self.steps { self.end } else { self.start + k as f64 * h })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub analytic: Option<f64>,
    pub matrix: Option<f64>,
    pub mc: Option<MonteCarloEstimate>,
    pub oracle: Option<f64>,
}

impl SweepRow {
    /// Every entangling-power value in the row.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        [self.analytic, self.matrix, self.mc.map(|m| m.mean), self.oracle]
            .into_iter()
            .flatten()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub d1: usize,
    pub d2: usize,
    pub rows: Vec<SweepRow>,
}

fn field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.param,
                field(r.analytic),
                field(r.matrix),
                field(r.mc.map(|m| m.mean)),
                field(r.mc.map(|m| m.std_error)),
                field(r.oracle)
            ));
        }
        out
    }

    /// Largest distance of any value from `[0, 1 − 1/min(d1, d2)]`.
    pub fn max_range_violation(&self) -> f64 {
        let hi = max_linear_entropy(self.d1, self.d2);
        self.rows
            .iter()
            .flat_map(SweepRow::values)
            .map(|v| (-v).max(v - hi).max(0.0))
            .fold(0.0, f64::max)
    }
}

/// Builds the operator of a model at one parameter value.
enum OperatorSource {
    Ising(SpinSystem, SpinSystem),
    Heisenberg(SpinSystem, SpinSystem),
    Generic(UnitaryPath),
}

impl OperatorSource {
    fn from_config(cfg: &SweepConfig) -> Result<Self> {
        let s1 = SpinSystem::from_dim(cfg.d1)?;
        let s2 = SpinSystem::from_dim(cfg.d2)?;
        Ok(match cfg.model {
            Model::Ising => Self::Ising(s1, s2),
            Model::Heisenberg => Self::Heisenberg(s1, s2),
            Model::Generic => {
                let op = cfg.operator.as_ref().expect("validated");
                Self::Generic(UnitaryPath::new(op, cfg.unitarity_tol)?)
            }
        })
    }

    fn operator(&self, p: f64) -> Result<BipartiteOperator> {
        match self {
            Self::Ising(s1, s2) => Ok(ising_evolution(&IsingParams::new(*s1, *s2, p))),
            Self::Heisenberg(s1, s2) => su2_evolution(&HeisenbergSpectrum::isotropic(*s1, *s2, p)?),
            Self::Generic(path) => Ok(path.at(p)),
        }
    }

    fn analytic(&self, p: f64) -> Result<f64> {
        match self {
            Self::Ising(s1, s2) => Ok(ising_ep_analytic(&IsingParams::new(*s1, *s2, p))),
            Self::Heisenberg(_, s2) => heisenberg_qubit_qudit_ep_analytic(*s2, p),
            Self::Generic(_) => Err(Error::Domain("no analytic curve for a generic operator".into())),
        }
    }
}

fn evaluate(src: &OperatorSource, cfg: &SweepConfig, p: f64) -> Result<SweepRow> {
    let m = &cfg.methods;
    let analytic = if m.analytic { Some(src.analytic(p)?) } else { None };
    let needs_op = m.matrix || m.mc || m.oracle;
    let op = if needs_op { Some(src.operator(p)?) } else { None };
    let tol = cfg.unitarity_tol;
    let matrix = match (&op, m.matrix) {
        (Some(u), true) => Some(entangling_power_with_tol(u, tol)?),
        _ => None,
    };
    // Every grid point reuses the same seed, so Monte Carlo noise is
    // correlated along the curve.
    let mc = match (&op, m.mc) {
        (Some(u), true) => Some(monte_carlo_ep_with_tol(u, cfg.mc_samples, cfg.seed, tol)?),
        _ => None,
    };
    let oracle = match (&op, m.oracle) {
        (Some(u), true) => Some(entangling_power_permutation_oracle(u)?),
        _ => None,
    };
    Ok(SweepRow {
        param: p,
        analytic,
        matrix,
        mc,
        oracle,
    })
}

/// Evaluates every requested method at every grid point. Points run in
/// parallel; rows come back in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let src = OperatorSource::from_config(cfg)?;
    let rows = cfg
        .grid()
        .into_par_iter()
        .map(|p| evaluate(&src, cfg, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        d1: cfg.d1,
        d2: cfg.d2,
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeAverageReport {
    pub closed_form: f64,
    /// Trapezoid average of the matrix-formula curve over one period.
    pub numeric: Option<f64>,
}

impl TimeAverageReport {
    pub fn abs_diff(&self) -> Option<f64> {
        self.numeric.map(|n| (n - self.closed_form).abs())
    }
}

/// Closed-form long-time average for a model, optionally checked against
/// exact-period quadrature of the matrix formula.
pub fn time_average(model: Model, d1: usize, d2: usize, numeric: bool) -> Result<TimeAverageReport> {
    let s1 = SpinSystem::from_dim(d1)?;
    let s2 = SpinSystem::from_dim(d2)?;
    let (closed_form, period, src) = match model {
        Model::Ising => (ising_ep_time_average(s1, s2), ISING_PERIOD, OperatorSource::Ising(s1, s2)),
        Model::Heisenberg => {
            if d1 != 2 || d2 < 2 {
                return Err(Error::Domain(format!(
                    "the heisenberg time average needs d1 = 2 and d2 >= 2, got {d1}x{d2}"
                )));
            }
            (heisenberg_ep_time_average(s2)?, heisenberg_period(s2), OperatorSource::Heisenberg(s1, s2))
        }
        Model::Generic => {
            return Err(Error::Domain("time averages exist only for ising and heisenberg".into()))
        }
    };
    let numeric = if numeric {
        let values: Vec<f64> = (0..=TIME_AVERAGE_PANELS)
            .into_par_iter()
            .map(|k| {
                let t = period * k as f64 / TIME_AVERAGE_PANELS as f64;
                src.operator(t).and_then(|u| crate::power::entangling_power(&u))
            })
            .collect::<Result<_>>()?;
        let h = period / TIME_AVERAGE_PANELS as f64;
        let lookup = |t: f64| values[(t / h).round() as usize];
        Some(time_average_ep(lookup, AveragingWindow::Period(period), TIME_AVERAGE_PANELS)?)
    } else {
        None
    };
    Ok(TimeAverageReport { closed_form, numeric })
}

/// Sweep range covering one period of the model's curve.
pub fn default_range(model: Model, d2: usize) -> (f64, f64) {
    match model {
        Model::Ising => (0.0, 2.0 * PI),
        Model::Heisenberg => (0.0, 4.0 * PI / d2.max(1) as f64),
        Model::Generic => (0.0, 1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(model: Model, d1: usize, d2: usize, methods: &str) -> SweepConfig {
        SweepConfig::new(model, d1, d2, 0.0, 2.0 * PI, 9, Methods::parse_list(methods).unwrap())
    }

    #[test]
    fn parses_methods() {
        let m = Methods::parse_list("analytic,mc").unwrap();
        assert!(m.analytic && m.mc && !m.matrix && !m.oracle);
        assert!(Methods::parse_list("analytic,foo").is_err());
        assert!(Methods::parse_list("").unwrap().is_empty());
        assert_eq!("Ising".parse::<Model>().unwrap(), Model::Ising);
    }

    #[test]
    fn grid_includes_endpoints() {
        let g = cfg(Model::Ising, 2, 2, "analytic").grid();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[8], 2.0 * PI);
        assert_eq!(g[4], PI);
        let mut one = cfg(Model::Ising, 2, 2, "analytic");
        one.steps = 1;
        assert_eq!(one.grid(), vec![0.0]);
    }

    #[test]
    fn validation() {
        assert!(cfg(Model::Ising, 2, 2, "").validate().is_err());
        assert!(cfg(Model::Heisenberg, 3, 3, "analytic").validate().is_err());
        assert!(cfg(Model::Heisenberg, 3, 3, "matrix").validate().is_ok());
        assert!(cfg(Model::Heisenberg, 3, 2, "matrix").validate().is_err());
        assert!(cfg(Model::Ising, 4, 5, "oracle").validate().is_err());
        assert!(cfg(Model::Generic, 2, 2, "matrix").validate().is_err());
        let mut c = cfg(Model::Ising, 2, 2, "analytic");
        c.end = -1.0;
        assert!(c.validate().is_err());
        c.end = 1.0;
        c.steps = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn two_qubit_ising_row_at_pi() {
        let res = run_sweep(&cfg(Model::Ising, 2, 2, "analytic,matrix")).unwrap();
        let row = &res.rows[4];
        assert_eq!(row.param, PI);
        assert!((row.analytic.unwrap() - 2.0 / 9.0).abs() < 1e-15);
        assert!((row.matrix.unwrap() - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let mut c = cfg(Model::Ising, 2, 2, "analytic");
        c.steps = 2;
        c.end = PI;
        let csv = run_sweep(&c).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "0,0,,,,");
        assert!(lines[2].starts_with("3.141592653589793,0.222222"));
        assert!(csv.ends_with(",,,,\n"));
    }

    #[test]
    fn generic_identity_sweep() {
        let c = SweepConfig::generic(BipartiteOperator::identity(2, 3), 0.0, 1.0, 3, Methods::parse_list("matrix,mc,oracle").unwrap());
        let res = run_sweep(&c).unwrap();
        for row in &res.rows {
            for v in row.values() {
                assert!(v.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn time_averages() {
        let r = time_average(Model::Ising, 2, 2, true).unwrap();
        assert!((r.closed_form - 1.0 / 9.0).abs() < 1e-15);
        assert!(r.abs_diff().unwrap() < 1e-8);
        let r = time_average(Model::Heisenberg, 2, 2, true).unwrap();
        assert!((r.closed_form - 1.0 / 12.0).abs() < 1e-15);
        assert!(r.abs_diff().unwrap() < 1e-8);
        assert_eq!(time_average(Model::Ising, 1, 5, false).unwrap().closed_form, 0.0);
        assert!(time_average(Model::Generic, 2, 2, false).is_err());
        assert!(time_average(Model::Heisenberg, 3, 3, false).is_err());
    }
}
