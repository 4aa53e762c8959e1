//! The acceptance suite: twelve criteria, each reduced to one number
//! compared against a pinned tolerance.
//!
//! A suite directory holds one catalog config per scenario
//! (`<scenario>.cfg`, supplying grids, flows and model constants) and an
//! optional `suite.cfg` with `tolerance.<n> = value` overrides and a
//! `criteria = 1, 7, ...` selection.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use crate::config::{parse_assignments, parse_config, PerturbKind, RunConfig, ScenarioName};
use crate::crocco::CroccoProblem;
use crate::error::{Error, Result};
use crate::estimates::{l1_stability, trace_residual, weak_residual, StabilityConstant, TestFunctionFamily};
use crate::kolmogorov::kernel::{dilation_pairs, residual_order};
use crate::kolmogorov::{
    certify, density_ratio, dilation_defect, model_scenarios, normalization, normalize_for_density, oscillation_table,
    poincare_measurement, solve_rough, DensitySpec, KernelPoint, LogTransform, PoincareOutcome, RoughField,
    RoughGrid,
};
use crate::mms::{standard_studies, Direction};
use crate::par::Execution;
use crate::scenario::{
    build_data, build_flow, grid_refinement_proxy, perturbed, poincare_cutoff, uniform_estimates, variation,
    NORMALIZATION_POINT, POINCARE_LEVEL, RESIDUAL_STEPS,
};
use crate::solver::{solve, viscosity_sweep, FieldHistory, Forcing};
use crate::{artifact_header, GridSpec};

/// How a criterion's value is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionDef {
    pub id: u8,
    pub name: &'static str,
    pub tolerance: f64,
    pub comparison: Comparison,
    /// What `value` measures.
    pub measures: &'static str,
}

pub const CRITERIA: [CriterionDef; 12] = [
    CriterionDef { id: 1, name: "exact_stationary", tolerance: 1e-8, comparison: Comparison::AtMost, measures: "max |u - (1-y)| over eps" },
    CriterionDef { id: 2, name: "mms_orders", tolerance: 1.0, comparison: Comparison::AtMost, measures: "max required/measured order" },
    CriterionDef { id: 3, name: "eps_uniform_bounds", tolerance: 0.10, comparison: Comparison::Below, measures: "max relative spread over eps" },
    CriterionDef { id: 4, name: "vanishing_viscosity", tolerance: 10.0, comparison: Comparison::Below, measures: "final L1 difference / grid proxy" },
    CriterionDef { id: 5, name: "weak_identity", tolerance: 1e-2, comparison: Comparison::AtMost, measures: "weak residual at base grid" },
    CriterionDef { id: 6, name: "l1_stability", tolerance: 0.20, comparison: Comparison::Below, measures: "max relative spread of c6 per family" },
    CriterionDef { id: 7, name: "kernel_identities", tolerance: 1e-8, comparison: Comparison::AtMost, measures: "max |mass - 1|" },
    CriterionDef { id: 8, name: "cutoff_certificate", tolerance: 1.0, comparison: Comparison::AtMost, measures: "max |chi'| / bound" },
    CriterionDef { id: 9, name: "density", tolerance: 1.0, comparison: Comparison::AtMost, measures: "(1/11) / min density ratio" },
    CriterionDef { id: 10, name: "weak_poincare", tolerance: 0.25, comparison: Comparison::AtMost, measures: "relative change of C under refinement" },
    CriterionDef { id: 11, name: "oscillation_decay", tolerance: 1.0, comparison: Comparison::Below, measures: "beta_bar" },
    CriterionDef { id: 12, name: "determinism", tolerance: 0.0, comparison: Comparison::AtMost, measures: "differing CSV rows across two runs" },
];

/// Viscosities of criterion 1.
pub const EXACT_EPS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
/// Viscosities of criterion 6.
pub const STABILITY_EPS: [f64; 2] = [1e-2, 1e-3];
/// Relative perturbation size of criterion 6.
pub const STABILITY_DELTA: f64 = 1e-3;
/// Wall-clock limit of one base-grid solve in criterion 1.
pub const SOLVE_TIME_LIMIT: Duration = Duration::from_secs(10);
/// Rough-coefficient family of criteria 9 to 11.
pub const ROUGH_FAMILY: [(&str, f64); 3] = [("checkerboard", 2.0), ("checkerboard", 4.0), ("seeded-random", 4.0)];

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub def: CriterionDef,
    pub tolerance: f64,
    pub value: f64,
    /// Side conditions that hold regardless of the tolerance.
    pub gates: Vec<(String, bool)>,
    pub detail: String,
    pub error: Option<String>,
}

impl CriterionResult {
    pub fn pass(&self) -> bool {
        let within = match self.def.comparison {
            Comparison::AtMost => self.value <= self.tolerance,
            Comparison::Below => self.value < self.tolerance,
        };
        self.error.is_none() && within && self.gates.iter().all(|(_, g)| *g)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.16e},{:e}",
            self.def.id,
            if self.pass() { "pass" } else { "fail" },
            self.value,
            self.tolerance
        )
    }

    pub fn summary_line(&self) -> String {
        let mut s = format!(
            "criterion {:>2} {:<20} {}  {} = {:.4e} (tol {:e})",
            self.def.id,
            self.def.name,
            if self.pass() { "PASS" } else { "FAIL" },
            self.def.measures,
            self.value,
            self.tolerance
        );
        for (g, ok) in &self.gates {
            if !ok {
                let _ = write!(s, "; gate failed: {g}");
            }
        }
        if let Some(e) = &self.error {
            let _ = write!(s, "; error: {e}");
        }
        if !self.detail.is_empty() {
            let _ = write!(s, "; {}", self.detail);
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub configs: BTreeMap<ScenarioName, RunConfig>,
    pub tolerances: BTreeMap<u8, f64>,
    pub selected: Vec<u8>,
}

impl Suite {
    /// Catalog defaults with every criterion selected.
    pub fn defaults() -> Self {
        Suite {
            configs: ScenarioName::ALL.into_iter().map(|s| (s, RunConfig::new(s))).collect(),
            tolerances: BTreeMap::new(),
            selected: CRITERIA.iter().map(|c| c.id).collect(),
        }
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let mut suite = Suite::defaults();
        for s in ScenarioName::ALL {
            let p = dir.join(format!("{}.cfg", s.as_str()));
            if !p.is_file() {
                return Err(Error::Config(format!("suite {} lacks catalog config {}", dir.display(), p.display())));
            }
            let c = parse_config(&p)?;
            if c.scenario != s {
                return Err(Error::Config(format!("{} names scenario {}", p.display(), c.scenario)));
            }
            suite.configs.insert(s, c);
        }
        let p = dir.join("suite.cfg");
        if p.is_file() {
            let label = p.display().to_string();
            let text = std::fs::read_to_string(&p).map_err(|e| Error::Io(format!("{label}: {e}")))?;
            for (key, a) in parse_assignments(&text, &label)? {
                let bad = |message: String| Error::ConfigSyntax {
                    path: label.clone(),
                    line: a.line,
                    message,
                };
                if let Some(id) = key.strip_prefix("tolerance.") {
                    let id: u8 = id.parse().ok().filter(|i| (1..=12).contains(i)).ok_or_else(|| bad(format!("no criterion `{id}`")))?;
                    let v: f64 = a.value.parse().map_err(|_| bad(format!("`{key}` expects a number")))?;
                    suite.tolerances.insert(id, v);
                } else if key == "criteria" {
                    suite.selected = a
                        .value
                        .split(',')
                        .map(|s| s.trim().parse().ok().filter(|i| (1..=12).contains(i)))
                        .collect::<Option<Vec<u8>>>()
                        .ok_or_else(|| bad(format!("`criteria` expects ids 1 to 12, found `{}`", a.value)))?;
                } else {
                    return Err(bad(format!("unknown key `{key}`")));
                }
            }
        }
        Ok(suite)
    }

    fn config(&self, s: ScenarioName) -> &RunConfig {
        &self.configs[&s]
    }
}

/// Value, gates and detail of one evaluation.
struct Measured {
    value: f64,
    gates: Vec<(String, bool)>,
    detail: String,
}

fn base_problem(c: &RunConfig) -> Result<CroccoProblem> {
    Ok(CroccoProblem::new(build_flow(c)?, build_data(c)?))
}

fn solve_plain(pb: &CroccoProblem, g: &GridSpec, eps: f64, exec: Execution) -> Result<FieldHistory> {
    solve(pb, g, eps, &Forcing::none(), exec)
}

fn exact_stationary(s: &Suite, exec: Execution) -> Result<Measured> {
    let c = s.config(ScenarioName::ExactProfile);
    let pb = base_problem(c)?;
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for eps in EXACT_EPS {
        let t0 = Instant::now();
        let h = solve_plain(&pb, &c.grid, eps, exec)?;
        slowest = slowest.max(t0.elapsed());
        worst = worst.max(h.max_deviation(|_, y, _| 1.0 - y));
    }
    Ok(Measured {
        value: worst,
        gates: vec![(format!("each {} solve under {:?}", c.grid.label(), SOLVE_TIME_LIMIT), slowest < SOLVE_TIME_LIMIT)],
        detail: String::new(),
    })
}

fn mms_orders(s: &Suite, exec: Execution) -> Result<Measured> {
    let eps = s.config(ScenarioName::ExactProfile).eps;
    let studies = standard_studies(eps, exec)?;
    let mut value: f64 = 0.0;
    let mut detail = String::new();
    for st in &studies {
        let need = if st.direction == Direction::Y { 1.9 } else { 0.9 };
        value = value.max(need / st.order);
        let _ = write!(detail, "{} order {:.3} ", st.direction.name(), st.order);
    }
    Ok(Measured {
        value,
        gates: vec![],
        detail: detail.trim_end().to_string(),
    })
}

fn eps_uniform(s: &Suite, exec: Execution) -> Result<Measured> {
    let c = s.config(ScenarioName::FavorableAccel);
    let pb = base_problem(c)?;
    let rows = exec
        .map_slice(&c.eps_list, |&eps| uniform_estimates(&solve_plain(&pb, &c.grid, eps, exec)?))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut value: f64 = 0.0;
    let mut worst = String::new();
    for (k, (name, _)) in rows[0].iter().enumerate() {
        let v = variation(&rows.iter().map(|r| r[k].1).collect::<Vec<_>>());
        if v > value {
            value = v;
            worst = name.clone();
        }
    }
    Ok(Measured {
        value,
        gates: vec![],
        detail: format!("largest spread in {worst}"),
    })
}

fn vanishing_viscosity(s: &Suite, exec: Execution) -> Result<Measured> {
    let c = s.config(ScenarioName::ViscositySweep);
    let pb = base_problem(c)?;
    let table = viscosity_sweep(&pb, &c.grid, &c.eps_list, exec)?;
    let diffs = table.differences();
    let finest = c.eps_list[c.eps_list.len() - 1];
    let h = solve_plain(&pb, &c.grid, finest, exec)?;
    let proxy = grid_refinement_proxy(&pb, &c.grid, finest, &h, exec)?;
    let last = diffs.as_ref().and_then(|d| d.last().copied()).unwrap_or(f64::INFINITY);
    Ok(Measured {
        value: last / proxy,
        gates: vec![
            ("every sweep entry solved".into(), diffs.is_some()),
            ("L1 differences strictly decreasing".into(), table.strictly_decreasing()),
        ],
        detail: format!("final difference {last:.3e}, grid proxy {proxy:.3e}"),
    })
}

fn weak_identity(s: &Suite, exec: Execution) -> Result<Measured> {
    let c = s.config(ScenarioName::ExactProfile);
    let pb = base_problem(c)?;
    let fam = TestFunctionFamily::default();
    let coarse = solve_plain(&pb, &c.grid, c.eps, exec)?;
    let fine = solve_plain(&pb, &c.grid.refined(2), c.eps, exec)?;
    let (rc, rf) = (weak_residual(&coarse, &fam, c.alpha).max, weak_residual(&fine, &fam, c.alpha).max);
    let trace = trace_residual(&coarse).wall_regularized.sup;
    Ok(Measured {
        value: rc,
        gates: vec![
            ("residual drops by 1.8 under refinement".into(), rc >= 1.8 * rf),
            ("wall trace residual <= 1e-6".into(), trace <= 1e-6),
        ],
        detail: format!("refined residual {rf:.3e}, wall trace {trace:.3e}"),
    })
}

fn stability_constants(s: &Suite, exec: Execution) -> Result<Measured> {
    let c = s.config(ScenarioName::StabilityPerturb);
    let pb = base_problem(c)?;
    let grids = [c.grid, c.grid.refined(2)];
    let mut cases = Vec::new();
    for kind in PerturbKind::ALL {
        for g in grids {
            for eps in STABILITY_EPS {
                cases.push((kind, g, eps));
            }
        }
    }
    let per_case = exec.map_slice(&cases, |&(kind, g, eps)| {
        let other = CroccoProblem::new(pb.flow.clone(), perturbed(&pb.data, kind, STABILITY_DELTA));
        let a = solve_plain(&pb, &g, eps, Execution::Sequential)?;
        let b = solve_plain(&other, &g, eps, Execution::Sequential)?;
        Ok(l1_stability(&a, &b)?.constant)
    });
    let per_case = per_case.into_iter().collect::<Result<Vec<_>>>()?;
    let mut value: f64 = 0.0;
    let mut all_ratios = true;
    let mut detail = String::new();
    for (k, kind) in PerturbKind::ALL.iter().enumerate() {
        let fam = &per_case[k * 4..(k + 1) * 4];
        all_ratios &= fam.iter().all(|c| matches!(c, StabilityConstant::Ratio(_)));
        let vals: Vec<f64> = fam.iter().map(StabilityConstant::value).collect();
        let v = variation(&vals);
        value = value.max(v);
        let hi = vals.iter().copied().fold(0.0, f64::max);
        let _ = write!(detail, "{} c6 <= {hi:.3} ({:.1}%) ", kind.as_str(), 100.0 * v);
    }
    let a = solve_plain(&pb, &c.grid, c.eps, exec)?;
    let b = solve_plain(&pb, &c.grid, c.eps, exec)?;
    let same = l1_stability(&a, &b)?;
    let lhs = same.lhs.iter().copied().fold(0.0, f64::max);
    Ok(Measured {
        value,
        gates: vec![
            ("finite c6 for every family, grid and eps".into(), all_ratios),
            ("identical data give LHS <= 1e-12".into(), lhs <= 1e-12),
        ],
        detail: detail.trim_end().to_string(),
    })
}

fn kernel_identities(s: &Suite) -> Result<Measured> {
    let c = s.config(ScenarioName::KolmogorovChecks);
    let mass = [0.1, 1.0]
        .iter()
        .map(|&t| (normalization(NORMALIZATION_POINT, t) - 1.0).abs())
        .fold(0.0, f64::max);
    let defect = dilation_pairs(c.seed, 100)
        .iter()
        .map(|&(z, mu)| dilation_defect(z, mu))
        .fold(0.0, f64::max);
    let order = residual_order(NORMALIZATION_POINT, KernelPoint::ORIGIN, &RESIDUAL_STEPS)?;
    Ok(Measured {
        value: mass,
        gates: vec![
            ("dilation defect <= 1e-12 on 100 pairs".into(), defect <= 1e-12),
            ("residual order >= 1.9".into(), order >= 1.9),
        ],
        detail: format!("dilation defect {defect:.2e}, residual order {order:.3}"),
    })
}

fn cutoff_certificate(s: &Suite) -> Result<Measured> {
    let c = s.config(ScenarioName::KolmogorovChecks);
    let spec = poincare_cutoff(c)?;
    let cert = certify(&spec, 33);
    let slope = cert
        .checks
        .iter()
        .find(|k| k.name == "chi_derivative_bound")
        .map_or(f64::INFINITY, |k| k.worst);
    Ok(Measured {
        value: slope,
        gates: cert.checks.iter().map(|k| (k.name.to_string(), k.pass)).collect(),
        detail: String::new(),
    })
}

fn rough_config(s: &Suite) -> &RunConfig {
    s.config(ScenarioName::OscillationLab)
}

/// The rough family on the base grid and, if `refined`, twice as fine.
fn rough_runs(s: &Suite, refined: bool, exec: Execution) -> Result<Vec<RoughField>> {
    let c = rough_config(s);
    let n = if refined { 2 * c.grid.nx } else { c.grid.nx };
    ROUGH_FAMILY
        .iter()
        .map(|&(kind, lambda)| solve_rough(&model_scenarios(kind, lambda, c.seed)?, RoughGrid::new(n)?, exec))
        .collect()
}

fn density(s: &Suite, runs: &[RoughField]) -> Result<Measured> {
    let c = rough_config(s);
    let ds = DensitySpec {
        r: 1.0,
        alpha: c.density_alpha,
        beta: c.beta,
        h1: c.h1,
    };
    let one = RoughField::from_fn(runs[0].grid, |_, _, _| 1.0);
    let unit = density_ratio(&one, &ds)?;
    let mut min = f64::INFINITY;
    let mut met = true;
    for u in runs {
        let (v, _) = normalize_for_density(u, ds.r)?;
        let d = density_ratio(&v, &ds)?;
        met &= d.hypothesis_met();
        min = min.min(d.min_ratio().unwrap_or(0.0));
    }
    Ok(Measured {
        value: crate::kolmogorov::lab::DENSITY_FLOOR / min,
        gates: vec![
            ("u = 1 gives ratio 1".into(), unit.min_ratio() == Some(1.0)),
            ("normalized runs meet the hypothesis".into(), met),
        ],
        detail: format!("min ratio {min:.4}"),
    })
}

fn poincare_family(s: &Suite, runs: &[RoughField], exec: Execution) -> Result<(f64, bool, String)> {
    let c = rough_config(s);
    let spec = poincare_cutoff(c)?;
    let mut family_c: f64 = 0.0;
    let mut violated = false;
    let mut detail = String::new();
    for u in runs {
        let m = poincare_measurement(u, &spec, POINCARE_LEVEL, LogTransform::Shifted, exec)?;
        match m.ratio.value() {
            Some(v) => family_c = family_c.max(v),
            None => violated = true,
        }
        let _ = write!(detail, "{:.3e} ", m.ratio.value().unwrap_or(f64::NAN));
        violated |= m.ratio.outcome == PoincareOutcome::Violated;
    }
    Ok((family_c, violated, detail))
}

fn weak_poincare(s: &Suite, coarse: &[RoughField], fine: &[RoughField], exec: Execution) -> Result<Measured> {
    let (c0, v0, d0) = poincare_family(s, coarse, exec)?;
    let (c1, v1, d1) = poincare_family(s, fine, exec)?;
    let change = if c0 == 0.0 && c1 == 0.0 {
        0.0
    } else {
        (c1 - c0).abs() / c0.max(c1)
    };
    Ok(Measured {
        value: change,
        gates: vec![("no run has LHS > 0 with RHS = 0".into(), !v0 && !v1)],
        detail: format!("C = {c0:.3e} -> {c1:.3e}; ratios {}| {}", d0, d1.trim_end()),
    })
}

fn oscillation(s: &Suite, runs: &[RoughField], exec: Execution) -> Result<Measured> {
    let c = rough_config(s);
    let mut beta: f64 = 0.0;
    let mut holder = f64::INFINITY;
    for u in runs {
        let t = oscillation_table(u, c.theta_bar, &c.r_list, exec)?;
        beta = beta.max(t.beta_bar());
        holder = holder.min(t.holder_exponent().unwrap_or(f64::NEG_INFINITY));
    }
    let control = RoughField::from_fn(runs[0].grid, |_, y, _| 1.0 - y);
    let ct = oscillation_table(&control, c.theta_bar, &c.r_list, exec)?;
    let dev = ct.rows.iter().map(|r| (r.ratio - c.theta_bar).abs()).fold(0.0, f64::max);
    Ok(Measured {
        value: beta,
        gates: vec![
            ("Holder exponent > 0".into(), holder > 0.0),
            ("linear control ratio equals theta_bar".into(), dev <= 1e-9),
        ],
        detail: format!("min Holder exponent {holder:.3}, control deviation {dev:.1e}"),
    })
}

fn finish(def: CriterionDef, s: &Suite, m: Result<Measured>) -> CriterionResult {
    let tolerance = s.tolerances.get(&def.id).copied().unwrap_or(def.tolerance);
    match m {
        Ok(m) => CriterionResult {
            def,
            tolerance,
            value: m.value,
            gates: m.gates,
            detail: m.detail,
            error: None,
        },
        Err(e) => CriterionResult {
            def,
            tolerance,
            value: f64::NAN,
            gates: vec![],
            detail: String::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Evaluates the selected criteria among 1 to 11.
fn evaluate(s: &Suite, exec: Execution) -> Vec<CriterionResult> {
    let want = |id: u8| s.selected.contains(&id);
    let mut out = Vec::new();
    let mut push = |id: u8, m: Result<Measured>| out.push(finish(CRITERIA[id as usize - 1], s, m));
    if want(1) {
        push(1, exact_stationary(s, exec));
    }
    if want(2) {
        push(2, mms_orders(s, exec));
    }
    if want(3) {
        push(3, eps_uniform(s, exec));
    }
    if want(4) {
        push(4, vanishing_viscosity(s, exec));
    }
    if want(5) {
        push(5, weak_identity(s, exec));
    }
    if want(6) {
        push(6, stability_constants(s, exec));
    }
    if want(7) {
        push(7, kernel_identities(s));
    }
    if want(8) {
        push(8, cutoff_certificate(s));
    }
    if want(9) || want(10) || want(11) {
        match rough_runs(s, false, exec) {
            Ok(coarse) => {
                if want(9) {
                    push(9, density(s, &coarse));
                }
                if want(10) {
                    push(10, rough_runs(s, true, exec).and_then(|fine| weak_poincare(s, &coarse, &fine, exec)));
                }
                if want(11) {
                    push(11, oscillation(s, &coarse, exec));
                }
            }
            Err(e) => {
                for id in [9, 10, 11].into_iter().filter(|&i| want(i)) {
                    push(id, Err(e.clone()));
                }
            }
        }
    }
    out
}

/// Runs the suite. Criterion 12 repeats the evaluation of the other
/// selected criteria and compares their CSV rows byte for byte.
pub fn run_suite(s: &Suite, exec: Execution) -> Vec<CriterionResult> {
    let mut results = evaluate(s, exec);
    if s.selected.contains(&12) {
        let again = evaluate(s, exec);
        let differing = results
            .iter()
            .zip(&again)
            .filter(|(a, b)| a.csv_row() != b.csv_row())
            .count()
            + results.len().abs_diff(again.len());
        results.push(finish(
            CRITERIA[11],
            s,
            Ok(Measured {
                value: differing as f64,
                gates: vec![],
                detail: format!("{} rows compared", results.len()),
            }),
        ));
    }
    results
}

pub fn all_passed(results: &[CriterionResult]) -> bool {
    results.iter().all(CriterionResult::pass)
}

/// `criterion,verdict,value,tolerance` with the artifact header.
pub fn to_csv(results: &[CriterionResult], s: &Suite) -> String {
    let c = s.config(ScenarioName::ExactProfile);
    let mut out = artifact_header("acceptance", &c.grid, c.eps);
    out.push_str("\ncriterion,verdict,value,tolerance\n");
    for r in results {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn summary(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&r.summary_line());
        out.push('\n');
    }
    let failed = results.iter().filter(|r| !r.pass()).count();
    let _ = writeln!(out, "{} of {} criteria passed", results.len() - failed, results.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn suite(ids: &[u8]) -> Suite {
        Suite {
            selected: ids.to_vec(),
            ..Suite::defaults()
        }
    }

    #[test]
    fn table_is_consistent() {
        for (k, c) in CRITERIA.iter().enumerate() {
            assert_eq!(c.id as usize, k + 1);
        }
    }

    #[test]
    fn kernel_criteria_pass() {
        let r = run_suite(&suite(&[7, 8]), Execution::Parallel);
        assert_eq!(r.len(), 2);
        assert!(all_passed(&r), "{}", summary(&r));
    }

    #[test]
    fn zero_tolerance_breaks_only_its_criterion() {
        let mut s = suite(&[7, 8]);
        s.tolerances.insert(8, 0.0);
        let r = run_suite(&s, Execution::Parallel);
        assert!(r[0].pass());
        assert!(!r[1].pass());
        assert!(to_csv(&r, &s).contains("\n8,fail,"));
    }

    #[test]
    fn errors_fail_the_criterion() {
        let mut s = suite(&[7]);
        s.configs.get_mut(&ScenarioName::KolmogorovChecks).unwrap().theta = 0.5;
        let r = run_suite(&s, Execution::Parallel);
        assert!(r[0].pass(), "criterion 7 does not read theta");
        let r = run_suite(&suite(&[8]), Execution::Parallel);
        assert!(r[0].pass());
        let mut s = suite(&[8]);
        s.configs.get_mut(&ScenarioName::KolmogorovChecks).unwrap().theta = 0.5;
        let r = run_suite(&s, Execution::Parallel);
        assert!(!r[0].pass() && r[0].error.is_some());
    }

    #[test]
    fn determinism_row_is_appended() {
        let r = run_suite(&suite(&[7, 12]), Execution::Parallel);
        assert_eq!(r.last().unwrap().def.id, 12);
        assert_eq!(r.last().unwrap().value, 0.0);
        assert!(r.last().unwrap().pass());
    }
}
