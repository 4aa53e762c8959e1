//! Named experiments: each turns a [`RunConfig`] into an
//! [`EstimateReport`] plus a set of CSV and text artifacts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::{PerturbKind, RunConfig, ScenarioName};
use crate::crocco::{validate, CroccoProblem, ExternalFlow, ProblemData, ValidationReport};
use crate::error::{Error, Result};
use crate::estimates::{
    bv_seminorm, comparison_constant, l1_stability, physical_stability, trace_residual, weak_residual,
    weighted_dyy_measure, weighted_grad_norms, Domain, EstimateReport, StabilityConstant, TestFunctionFamily,
};
use crate::kolmogorov::kernel::{dilation_pairs, normalization_of, residual_order};
use crate::kolmogorov::{
    certify, density_ratio, dilation_defect, gamma0, gamma0_as_printed, gamma0_consistency, model_scenarios,
    normalization, normalize_for_density, oscillation_table, poincare_measurement, solve_rough, CutoffSpec,
    DensitySpec, KernelPoint, LogTransform, PoincareOutcome, RoughField, RoughGrid,
};
use crate::par::Execution;
use crate::solver::{solve, viscosity_sweep, FieldHistory, Forcing};
use crate::table::Table2;
use crate::{artifact_header, GridSpec};

/// Profile data with curvature: w0 = w1 = (1 − y)(2 + y), v0 = −1.
pub fn favorable_data() -> ProblemData {
    ProblemData::new(|_, y| (1.0 - y) * (2.0 + y), |y, _| (1.0 - y) * (2.0 + y), |_, _| -1.0)
}

/// Built-in data of a scenario: the linear profile for exact_profile,
/// [`favorable_data`] otherwise.
pub fn builtin_data(s: ScenarioName) -> ProblemData {
    match s {
        ScenarioName::ExactProfile => ProblemData::linear_profile(-1.0),
        _ => favorable_data(),
    }
}

/// Scales the data term named by `kind` by 1 + δ.
pub fn perturbed(data: &ProblemData, kind: PerturbKind, delta: f64) -> ProblemData {
    let f = 1.0 + delta;
    let (w0, w1, v0) = (data.w0.clone(), data.w1.clone(), data.v0.clone());
    match kind {
        PerturbKind::Initial => ProblemData::new(move |x, y| f * w0(x, y), move |y, t| w1(y, t), move |x, t| v0(x, t)),
        PerturbKind::Inflow => ProblemData::new(move |x, y| w0(x, y), move |y, t| f * w1(y, t), move |x, t| v0(x, t)),
        PerturbKind::Suction => ProblemData::new(move |x, y| w0(x, y), move |y, t| w1(y, t), move |x, t| f * v0(x, t)),
    }
}

pub fn build_flow(c: &RunConfig) -> Result<ExternalFlow> {
    let (l, t) = (c.grid.length, c.grid.horizon);
    match &c.flow_table {
        Some(p) => ExternalFlow::from_table(Table2::read_csv(p, ["x", "t", "U"])?, l, t),
        None => ExternalFlow::builtin(&c.flow, l, t),
    }
}

/// Scenario data with any configured tables substituted.
pub fn build_data(c: &RunConfig) -> Result<ProblemData> {
    let mut data = builtin_data(c.scenario);
    if let Some(p) = &c.u0_table {
        let t = Table2::read_csv(p, ["x", "y", "u0"])?;
        data.w0 = std::sync::Arc::new(move |x, y| t.eval(x, y));
    }
    if let Some(p) = &c.u1_table {
        let t = Table2::read_csv(p, ["y", "t", "u1"])?;
        data.w1 = std::sync::Arc::new(move |y, s| t.eval(y, s));
    }
    if let Some(p) = &c.v0_table {
        let t = Table2::read_csv(p, ["x", "t", "v0"])?;
        data.v0 = std::sync::Arc::new(move |x, s| t.eval(x, s));
    }
    Ok(data)
}

fn is_crocco(s: ScenarioName) -> bool {
    !matches!(s, ScenarioName::KolmogorovChecks | ScenarioName::OscillationLab)
}

/// Viscosities a scenario solves with.
fn eps_values(c: &RunConfig) -> Vec<f64> {
    match c.scenario {
        ScenarioName::FavorableAccel | ScenarioName::ViscositySweep => c.eps_list.clone(),
        _ => vec![c.eps],
    }
}

/// Everything that can be checked before compute: the data hypotheses and
/// the transport bound for Crocco scenarios, parameter ranges for the
/// model-problem ones. Returns the data validation report when there is one.
pub fn precheck(c: &RunConfig) -> Result<Option<ValidationReport>> {
    if !is_crocco(c.scenario) {
        CutoffSpec::new(c.theta, 0.5 * c.theta, c.density_alpha, c.beta)?;
        model_scenarios(&c.coefficient, c.lambda, c.seed)?;
        RoughGrid::new(c.grid.nx)?;
        return Ok(None);
    }
    let problem = CroccoProblem::new(build_flow(c)?, build_data(c)?);
    let report = validate(&problem.data, &problem.flow, &c.grid);
    if let Some(v) = report.violations.first() {
        return Err(Error::Validation {
            location: v.location.clone(),
            message: format!("{} fails by {:e}", v.condition, v.margin),
        });
    }
    let eps_max = eps_values(c).into_iter().fold(0.0, f64::max);
    let (ax, bmax) = problem.transport_bounds(&c.grid, eps_max);
    c.grid.check_cfl(ax, bmax)?;
    Ok(Some(report))
}

/// Output files of a run, written as they are produced when a directory is set.
#[derive(Debug, Default)]
pub struct Artifacts {
    dir: Option<PathBuf>,
    pub files: BTreeMap<String, String>,
}

impl Artifacts {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn to_dir(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        Ok(Artifacts {
            dir: Some(dir.to_path_buf()),
            files: BTreeMap::new(),
        })
    }

    pub fn put(&mut self, name: &str, content: String) -> Result<()> {
        if let Some(d) = &self.dir {
            let p = d.join(name);
            std::fs::write(&p, &content).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        }
        self.files.insert(name.to_string(), content);
        Ok(())
    }
}

/// `t,x,y,u` rows for every node of every level.
pub fn fields_csv(h: &FieldHistory, header: &str) -> String {
    let g = &h.grid;
    let mut s = String::with_capacity(80 * (g.nt + 1) * g.nodes_per_snapshot());
    s.push_str(header);
    s.push_str("\nt,x,y,u\n");
    for (n, snap) in h.snapshots.iter().enumerate() {
        for i in 0..=g.nx {
            for j in 0..=g.ny {
                let _ = writeln!(s, "{:.16e},{:.16e},{:.16e},{:.16e}", g.t(n), g.x(i), g.y(j), snap.at(i, j));
            }
        }
    }
    s
}

/// Relative spread (max − min)/min of a set of positive values.
pub fn variation(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (hi - lo) / lo
}

/// Names and values of the ε-uniform estimates on one history.
pub fn uniform_estimates(h: &FieldHistory) -> Result<Vec<(String, f64)>> {
    let mut v = vec![
        ("comparison_constant".to_string(), comparison_constant(h, Domain::Full).value),
        ("bv_seminorm".to_string(), bv_seminorm(h, Domain::Full)),
    ];
    for a in [0.0, 1.0, 2.0] {
        let (n1, n2) = weighted_grad_norms(h, a, Domain::Full)?;
        v.push((format!("weighted_grad_n1[alpha={a}]"), n1));
        v.push((format!("weighted_grad_n2[alpha={a}]"), n2));
    }
    v.push(("weighted_dyy_measure[alpha=1]".to_string(), weighted_dyy_measure(h, 1.0, Domain::Full)?));
    Ok(v)
}

fn crocco_estimates(report: &mut EstimateReport, h: &FieldHistory, alpha: f64) -> Result<()> {
    let (grid, eps) = (h.grid.label(), h.eps);
    let cmp = comparison_constant(h, Domain::Full);
    report.number("comparison_constant", cmp.value, &grid, eps, Domain::Full);
    report.number("comparison_constant.interior", comparison_constant(h, Domain::Interior).value, &grid, eps, Domain::Interior);
    report.number("bv_seminorm", bv_seminorm(h, Domain::Full), &grid, eps, Domain::Full);
    let (n1, n2) = weighted_grad_norms(h, alpha, Domain::Full)?;
    report.number("weighted_grad_n1", n1, &grid, eps, Domain::Full);
    report.number("weighted_grad_n2", n2, &grid, eps, Domain::Full);
    report.number("weighted_dyy_measure", weighted_dyy_measure(h, alpha, Domain::Full)?, &grid, eps, Domain::Full);
    let tr = trace_residual(h);
    report.number("trace.wall_regularized", tr.wall_regularized.sup, &grid, eps, Domain::Full);
    report.number("trace.wall", tr.wall.sup, &grid, eps, Domain::Full);
    report.number("trace.initial", tr.initial.sup, &grid, eps, Domain::Full);
    report.number("trace.inflow", tr.inflow.sup, &grid, eps, Domain::Full);
    report.number("trace.top", tr.top.sup, &grid, eps, Domain::Full);
    let weak = weak_residual(h, &TestFunctionFamily::default(), alpha);
    report.number("weak_residual", weak.max, &grid, eps, Domain::Full);
    report.number("min_value", h.min_value(), &grid, eps, Domain::Full);
    report.verdict("comparison", cmp.is_finite());
    report.verdict("trace_wall", tr.wall_regularized.sup <= 1e-6);
    report.verdict("weak_identity", weak.max <= 1e-2);
    Ok(())
}

/// Runs the scenario, handing each artifact to `out` as soon as it exists.
pub fn run(c: &RunConfig, out: &mut Artifacts, exec: Execution) -> Result<EstimateReport> {
    let header = artifact_header(c.scenario.as_str(), &c.grid, c.eps);
    precheck(c)?;
    let report = match c.scenario {
        ScenarioName::ExactProfile => exact_profile(c, out, &header, exec)?,
        ScenarioName::FavorableAccel => favorable_accel(c, out, exec)?,
        ScenarioName::ViscositySweep => sweep(c, out, &header, exec)?,
        ScenarioName::StabilityPerturb => stability(c, out, &header, exec)?,
        ScenarioName::KolmogorovChecks => kolmogorov_checks(c, exec)?,
        ScenarioName::OscillationLab => oscillation_lab(c, out, &header, exec)?,
    };
    out.put("report.txt", report.to_text(&header))?;
    out.put("report.csv", report.to_csv(&header))?;
    Ok(report)
}

/// Runs into `dir`; on error the files written so far stay and a
/// `FAILED` marker holds the message.
pub fn run_to_dir(c: &RunConfig, dir: &Path, exec: Execution) -> Result<EstimateReport> {
    let mut out = Artifacts::to_dir(dir)?;
    let _ = std::fs::remove_file(dir.join("FAILED"));
    run(c, &mut out, exec).inspect_err(|e| {
        let _ = std::fs::write(dir.join("FAILED"), format!("{e}\n"));
    })
}

fn problem(c: &RunConfig) -> Result<CroccoProblem> {
    Ok(CroccoProblem::new(build_flow(c)?, build_data(c)?))
}

fn exact_profile(c: &RunConfig, out: &mut Artifacts, header: &str, exec: Execution) -> Result<EstimateReport> {
    let pb = problem(c)?;
    let h = solve(&pb, &c.grid, c.eps, &Forcing::none(), exec)?;
    out.put("fields.csv", fields_csv(&h, header))?;
    let mut r = EstimateReport::default();
    crocco_estimates(&mut r, &h, c.alpha)?;
    let dev = h.max_deviation(|_, y, _| 1.0 - y);
    r.number("deviation_from_linear", dev, &c.grid.label(), c.eps, Domain::Full);
    if !c.has_data_tables() && c.flow == "uniform" {
        r.verdict("exact_reproduction", dev <= 1e-8);
    }
    Ok(r)
}

fn favorable_accel(c: &RunConfig, out: &mut Artifacts, exec: Execution) -> Result<EstimateReport> {
    let pb = problem(c)?;
    let runs = exec.map_slice(&c.eps_list, |&eps| {
        let h = solve(&pb, &c.grid, eps, &Forcing::none(), exec)?;
        let est = uniform_estimates(&h)?;
        Ok((h, est))
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let mut r = EstimateReport::default();
    let grid = c.grid.label();
    for (h, est) in &runs {
        for (k, v) in est {
            r.number(format!("{k}[eps={}]", h.eps), *v, &grid, h.eps, Domain::Full);
        }
    }
    let finest = c.eps_list[c.eps_list.len() - 1];
    for (k, (name, _)) in runs[0].1.iter().enumerate() {
        let vals: Vec<f64> = runs.iter().map(|(_, e)| e[k].1).collect();
        let var = variation(&vals);
        r.number(format!("{name}.variation"), var, &grid, finest, Domain::Full);
        r.verdict(format!("eps_uniform.{name}"), var < 0.1);
    }
    let (h, _) = &runs[runs.len() - 1];
    out.put("fields.csv", fields_csv(h, &artifact_header(c.scenario.as_str(), &c.grid, finest)))?;
    Ok(r)
}

/// L¹(Q_T) distance between a run and the same run on a grid twice as fine,
/// compared at the coarse nodes.
pub fn grid_refinement_proxy(pb: &CroccoProblem, grid: &GridSpec, eps: f64, coarse: &FieldHistory, exec: Execution) -> Result<f64> {
    let fine = solve(pb, &grid.refined(2), eps, &Forcing::none(), exec)?;
    let restricted = fine.coarsened(2).expect("refined grid divides by 2");
    Ok(coarse.l1_distance(&restricted))
}

fn sweep(c: &RunConfig, out: &mut Artifacts, header: &str, exec: Execution) -> Result<EstimateReport> {
    let pb = problem(c)?;
    let table = viscosity_sweep(&pb, &c.grid, &c.eps_list, exec)?;
    out.put("sweep.csv", table.to_csv(header))?;
    let mut r = EstimateReport::default();
    let grid = c.grid.label();
    for row in &table.rows {
        match &row.l1_diff {
            Ok(d) => r.number(format!("l1_diff[{}->{}]", row.eps_hi, row.eps_lo), *d, &grid, row.eps_lo, Domain::Full),
            Err(m) => r.text(format!("l1_diff[{}->{}]", row.eps_hi, row.eps_lo), format!("failed: {m}"), &grid, row.eps_lo),
        }
    }
    r.verdict("strictly_decreasing", table.strictly_decreasing());
    let finest = c.eps_list[c.eps_list.len() - 1];
    let h = solve(&pb, &c.grid, finest, &Forcing::none(), exec)?;
    let proxy = grid_refinement_proxy(&pb, &c.grid, finest, &h, exec)?;
    r.number("grid_proxy", proxy, &grid, finest, Domain::Full);
    if let Some(Ok(last)) = table.rows.last().map(|row| row.l1_diff.clone()) {
        r.number("final_over_proxy", last / proxy, &grid, finest, Domain::Full);
        r.verdict("final_below_grid_proxy", last < 10.0 * proxy);
    }
    Ok(r)
}

fn stability(c: &RunConfig, out: &mut Artifacts, header: &str, exec: Execution) -> Result<EstimateReport> {
    let base = problem(c)?;
    let other = CroccoProblem::new(base.flow.clone(), perturbed(&base.data, c.perturb_kind, c.perturb_size));
    let pair = exec.map(2, |k| solve(if k == 0 { &base } else { &other }, &c.grid, c.eps, &Forcing::none(), exec));
    let mut pair = pair.into_iter();
    let a = pair.next().expect("two runs")?;
    let b = pair.next().expect("two runs")?;
    let s = l1_stability(&a, &b)?;
    let p = physical_stability(&a, &b, &base.flow)?;
    let (grid, eps) = (c.grid.label(), c.eps);
    let mut r = EstimateReport::default();
    r.text("perturb_kind", c.perturb_kind.as_str(), &grid, eps);
    r.number("perturb_size", c.perturb_size, &grid, eps, Domain::Full);
    r.text("l1_stability", s.constant.label(), &grid, eps);
    r.number("lhs_max", s.lhs.iter().copied().fold(0.0, f64::max), &grid, eps, Domain::Full);
    r.number("rhs_max", s.rhs.iter().copied().fold(0.0, f64::max), &grid, eps, Domain::Full);
    r.text("physical_stability", p.constant.label(), &grid, eps);
    r.verdict("l1_stability", s.constant != StabilityConstant::Unbounded);
    r.verdict("physical_stability", p.constant != StabilityConstant::Unbounded);
    let mut csv = format!("{header}\nt,lhs,rhs\n");
    for (n, (l, rh)) in s.lhs.iter().zip(&s.rhs).enumerate() {
        let _ = writeln!(csv, "{:.16e},{l:.16e},{rh:.16e}", c.grid.t(n));
    }
    out.put("stability.csv", csv)?;
    Ok(r)
}

/// Point at which the kernel mass is measured.
pub const NORMALIZATION_POINT: KernelPoint = KernelPoint { x: 0.1, y: 0.2, t: 1.0 };
/// Stencil widths of the kernel residual order fit.
pub const RESIDUAL_STEPS: [f64; 3] = [4e-3, 2e-3, 1e-3];

fn kolmogorov_checks(c: &RunConfig, exec: Execution) -> Result<EstimateReport> {
    let (grid, eps) = (c.grid.label(), c.eps);
    let mut r = EstimateReport::default();
    let z = NORMALIZATION_POINT;
    let mut worst_mass: f64 = 0.0;
    for s in [0.1, 1.0] {
        let m = normalization(z, s);
        worst_mass = worst_mass.max((m - 1.0).abs());
        r.number(format!("normalization[s={s}]"), m, &grid, eps, Domain::Full);
    }
    r.number("normalization_as_printed[s=1]", normalization_of(gamma0_as_printed, z, 1.0), &grid, eps, Domain::Full);
    r.number("gamma0_axis", gamma0(KernelPoint::new(0.0, 0.0, 1.0), KernelPoint::ORIGIN), &grid, eps, Domain::Full);
    r.verdict("normalization", worst_mass <= 1e-8);

    let pairs = dilation_pairs(c.seed, 100);
    let defect = pairs.iter().map(|&(z, mu)| dilation_defect(z, mu)).fold(0.0, f64::max);
    r.number("dilation_defect_max", defect, &grid, eps, Domain::Full);
    r.verdict("dilation", defect <= 1e-12);

    let order = residual_order(z, KernelPoint::ORIGIN, &RESIDUAL_STEPS)?;
    r.number("l0_residual_order", order, &grid, eps, Domain::Full);
    r.verdict("l0_residual_order", order >= 1.9);

    let spec = CutoffSpec::new(c.theta, 0.5 * c.theta, c.density_alpha, c.beta)?;
    let cert = certify(&spec, 33);
    r.number("cutoff.alpha1", spec.alpha1, &grid, eps, Domain::Full);
    for check in &cert.checks {
        r.number(format!("cutoff.{}", check.name), check.worst, &grid, eps, Domain::Full);
        r.verdict(format!("cutoff.{}", check.name), check.pass);
    }

    let errors = exec.map_slice(&[16usize, 32], |&n| gamma0_consistency(RoughGrid::new(n)?, Execution::Sequential));
    let errors = errors.into_iter().collect::<Result<Vec<_>>>()?;
    r.number("kernel_consistency[n=16]", errors[0], &grid, eps, Domain::Full);
    r.number("kernel_consistency[n=32]", errors[1], &grid, eps, Domain::Full);
    r.verdict("kernel_consistency", errors[1] < errors[0]);
    Ok(r)
}

/// Cut-off used by the Poincaré measurement: r = θ/2, so B⁻_{r/θ} = B⁻_{1/2}.
pub fn poincare_cutoff(c: &RunConfig) -> Result<CutoffSpec> {
    CutoffSpec::new(c.theta, 0.5 * c.theta, c.density_alpha, c.beta)
}

/// Level h of the logarithmic transform.
pub const POINCARE_LEVEL: f64 = 0.25;

pub fn rough_run(c: &RunConfig, exec: Execution) -> Result<RoughField> {
    let coef = model_scenarios(&c.coefficient, c.lambda, c.seed)?;
    solve_rough(&coef, RoughGrid::new(c.grid.nx)?, exec)
}

fn oscillation_lab(c: &RunConfig, out: &mut Artifacts, header: &str, exec: Execution) -> Result<EstimateReport> {
    let (grid, eps) = (c.grid.label(), c.eps);
    let u = rough_run(c, exec)?;
    let mut r = EstimateReport::default();
    r.text("coefficient", c.coefficient.clone(), &grid, eps);
    r.number("Lambda", c.lambda, &grid, eps, Domain::Full);

    let table = oscillation_table(&u, c.theta_bar, &c.r_list, exec)?;
    out.put("oscillation.csv", table.to_csv(header))?;
    r.number("beta_bar", table.beta_bar(), &grid, eps, Domain::Full);
    let holder = table.holder_exponent();
    match holder {
        Some(a) => r.number("holder_exponent", a, &grid, eps, Domain::Full),
        None => r.text("holder_exponent", "undefined", &grid, eps),
    }
    r.verdict("oscillation_decay", table.beta_bar() < 1.0 && holder.is_some_and(|a| a > 0.0));

    let control = RoughField::from_fn(u.grid, |_, y, _| 1.0 - y);
    let ct = oscillation_table(&control, c.theta_bar, &c.r_list, exec)?;
    let dev = ct.rows.iter().map(|row| (row.ratio - c.theta_bar).abs()).fold(0.0, f64::max);
    r.number("control_ratio_deviation", dev, &grid, eps, Domain::Full);

    let ds = DensitySpec {
        r: 1.0,
        alpha: c.density_alpha,
        beta: c.beta,
        h1: c.h1,
    };
    let (scaled, factor) = normalize_for_density(&u, ds.r)?;
    let density = density_ratio(&scaled, &ds)?;
    out.put("density.csv", density.to_csv(header))?;
    r.number("density.scale", factor, &grid, eps, Domain::Full);
    r.number("density.hypothesis_fraction", density.hypothesis_fraction, &grid, eps, Domain::Full);
    match (density.passed(), density.min_ratio()) {
        (Some(pass), Some(min)) => {
            r.number("density.min_ratio", min, &grid, eps, Domain::Full);
            r.verdict("density", pass);
        }
        _ => r.text("density", "hypothesis not met", &grid, eps),
    }

    let spec = poincare_cutoff(c)?;
    for t in [LogTransform::Shifted, LogTransform::Plain] {
        let m = poincare_measurement(&u, &spec, POINCARE_LEVEL, t, exec)?;
        let key = |k: &str| format!("poincare.{}.{k}", t.name());
        r.number(key("i0"), m.i0, &grid, eps, Domain::Full);
        r.number(key("lambda0"), m.lambda0, &grid, eps, Domain::Full);
        r.number(key("lhs"), m.ratio.lhs, &grid, eps, Domain::Full);
        r.number(key("rhs"), m.ratio.rhs, &grid, eps, Domain::Full);
        match m.ratio.outcome {
            PoincareOutcome::Ratio(v) => r.number(key("ratio"), v, &grid, eps, Domain::Full),
            PoincareOutcome::Vacuous => r.text(key("ratio"), "vacuous", &grid, eps),
            PoincareOutcome::Violated => r.text(key("ratio"), "violated", &grid, eps),
        }
        r.verdict(format!("poincare.{}", t.name()), m.ratio.outcome != PoincareOutcome::Violated);
    }
    Ok(r)
}
