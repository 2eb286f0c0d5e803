//! Command-line front end: problem files in, `report.json` (and a CSV
//! summary for some tasks) out.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 input error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ansatz::{
    enumerate_points, extract_coefficient_system, hensel_lift, unknown_names, CandidateGrid,
    CandidateSource, LiftStatus,
};
use crate::blocks::{covers, decompose, DecomposeInput};
use crate::growth::{build_growth_series, verify_growth, GrowthSpec};
use crate::interp::{
    interp_det, interp_det_with_model, poly_interp_det, select_hypersurface, GermModel,
};
use crate::pfaff::{multiplicity_budget, verify_chain, wilkie_budget, Chain, ChainKind};
use crate::series::{MPoly, PolyCurve, Rat, TPoly, TermJson};
use crate::weier::{estimate_e, fiber_count, find_split, with_user_nu, Certificate};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_GUARD: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Extract,
    Lift,
    Enumerate,
    InterpDet,
    SelectHyp,
    EstimateE,
    ChainVerify,
    Budget,
    Decompose,
    Growth,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Extract => "extract",
            Task::Lift => "lift",
            Task::Enumerate => "enumerate",
            Task::InterpDet => "interp-det",
            Task::SelectHyp => "select-hyp",
            Task::EstimateE => "estimate-e",
            Task::ChainVerify => "chain-verify",
            Task::Budget => "budget",
            Task::Decompose => "decompose",
            Task::Growth => "growth",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub task: Task,
    pub payload: Value,
}

/// The emitted report. Reports parse back into this type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub task: Task,
    pub passed: bool,
    pub seed: u64,
    pub result: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    pub trunc: Option<usize>,
    pub guard: usize,
    pub seed: u64,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            trunc: None,
            guard: DEFAULT_GUARD,
            seed: 0,
        }
    }
}

impl Flags {
    fn truncation(&self, payload_m: Option<usize>, r: usize) -> usize {
        self.trunc.or(payload_m).unwrap_or(r + self.guard)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(e: impl std::fmt::Display) -> InputError {
    InputError(e.to_string())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<Csv>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            1
        }
    }
}

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        InputError(format!("{what}: at {path}: {}", e.inner()))
    })
}

fn parse_value<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T, InputError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        InputError(format!("{what}: at {path}: {}", e.inner()))
    })
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, InputError> {
    let file: ProblemFile = parse_json(text, "problem file")?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(InputError(format!(
            "problem file: unsupported schema_version {}",
            file.schema_version
        )));
    }
    Ok(file)
}

/// Ambient variables in file order with `t` moved last.
struct Vars {
    names: Vec<String>,
    /// `map[i]` is the internal index of file variable `i`.
    map: Vec<usize>,
}

impl Vars {
    fn new(vars: &[String]) -> Result<Self, InputError> {
        let t_pos = vars.iter().position(|v| v == "t");
        if vars.iter().filter(|v| *v == "t").count() > 1 {
            return Err(InputError("payload.vars: t listed twice".into()));
        }
        let mut names = Vec::new();
        let mut map = vec![0; vars.len()];
        for (i, v) in vars.iter().enumerate() {
            if Some(i) != t_pos {
                if names.contains(v) {
                    return Err(InputError(format!("payload.vars: {v} listed twice")));
                }
                map[i] = names.len();
                names.push(v.clone());
            }
        }
        if let Some(p) = t_pos {
            map[p] = names.len();
        }
        Ok(Vars { names, map })
    }

    fn n(&self) -> usize {
        self.names.len()
    }

    fn file_arity(&self) -> usize {
        self.map.len()
    }

    fn poly(&self, terms: &[TermJson], what: &str) -> Result<MPoly, InputError> {
        let p = MPoly::from_json(terms, self.file_arity())
            .map_err(|e| InputError(format!("{what}: {e}")))?;
        Ok(p.remap(&self.map))
    }

    fn polys(&self, list: &[Vec<TermJson>], what: &str) -> Result<Vec<MPoly>, InputError> {
        list.iter()
            .enumerate()
            .map(|(i, t)| self.poly(t, &format!("{what}[{i}]")))
            .collect()
    }

    fn index(&self, name: &str) -> Result<usize, InputError> {
        self.names
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| InputError(format!("unknown variable {name}")))
    }

    fn with_t(&self) -> Vec<String> {
        let mut v = self.names.clone();
        v.push("t".into());
        v
    }
}

fn poly_json(p: &MPoly, names: &[String]) -> Value {
    json!({ "text": p.fmt_with(names), "terms": p.to_json(names.len()) })
}

fn tpoly_degree(p: &TPoly) -> i64 {
    p.degree().map_or(-1, |d| d as i64)
}

fn status_label(s: &LiftStatus) -> String {
    match s {
        LiftStatus::PolynomialWitnessed { r } => format!("polynomial_witnessed({r})"),
        LiftStatus::NonPolynomialToOrder { m } => format!("non_polynomial_to_order({m})"),
        LiftStatus::Singular => "singular".into(),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtractPayload {
    vars: Vec<String>,
    equations: Vec<Vec<TermJson>>,
    r: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftPayload {
    vars: Vec<String>,
    equations: Vec<Vec<TermJson>>,
    fiber_point: Vec<Rat>,
    #[serde(default)]
    r: Option<usize>,
    #[serde(rename = "M", default)]
    m: Option<usize>,
}

#[derive(Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum Mode {
    Lift,
    Grid,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridJson {
    free: Vec<String>,
    /// `axes[f][l]`: candidate values for the `t^l` coefficient of free
    /// coordinate `f`.
    axes: Vec<Vec<Vec<Rat>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnumeratePayload {
    vars: Vec<String>,
    equations: Vec<Vec<TermJson>>,
    r: usize,
    #[serde(rename = "M", default)]
    m: Option<usize>,
    mode: Mode,
    #[serde(default)]
    fiber_points: Option<Vec<Vec<Rat>>>,
    #[serde(default)]
    grid: Option<GridJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InterpDetPayload {
    vars: Vec<String>,
    curves: Vec<PolyCurve>,
    #[serde(default)]
    functions: Option<Vec<Vec<TermJson>>>,
    #[serde(default)]
    g: Option<Vec<Vec<TermJson>>>,
    #[serde(default)]
    d: Option<usize>,
    #[serde(default)]
    model: Option<GermModel>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SelectHypPayload {
    vars: Vec<String>,
    curves: Vec<PolyCurve>,
    g: Vec<Vec<TermJson>>,
    d: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberCheck {
    v: Vec<Rat>,
    t0: Rat,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EstimatePayload {
    vars: Vec<String>,
    equations: Vec<Vec<TermJson>>,
    #[serde(default)]
    z: Option<Vec<String>>,
    #[serde(default)]
    m: Option<usize>,
    #[serde(default)]
    nu: Option<u64>,
    #[serde(default)]
    check: Option<FiberCheck>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BudgetPayload {
    beta: u64,
    r: u64,
    n: usize,
    ell: usize,
    kind: ChainKind,
    #[serde(default = "yes")]
    t_algebraic: bool,
    #[serde(default)]
    noetherian_exponent: Option<u32>,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecomposePayload {
    vars: Vec<String>,
    equations: Vec<Vec<TermJson>>,
    algebraic: bool,
    r: usize,
    #[serde(rename = "M", default)]
    m: Option<usize>,
    #[serde(default)]
    mode: Option<Mode>,
    #[serde(default)]
    fiber_points: Option<Vec<Vec<Rat>>>,
    #[serde(default)]
    grid: Option<GridJson>,
    #[serde(default)]
    curves: Option<Vec<PolyCurve>>,
    #[serde(default)]
    nu: Option<u64>,
    /// Defining degree, for the block budget check.
    #[serde(default)]
    beta: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthPayload {
    #[serde(rename = "N")]
    pub n: Vec<u64>,
    pub depth: usize,
    #[serde(default)]
    pub imax: Option<usize>,
    #[serde(rename = "M", default)]
    pub m: Option<usize>,
}

fn candidate_source(
    vars: &Vars,
    mode: Mode,
    fiber_points: Option<Vec<Vec<Rat>>>,
    grid: Option<GridJson>,
) -> Result<CandidateSource, InputError> {
    match mode {
        Mode::Lift => fiber_points
            .map(CandidateSource::FiberPoints)
            .ok_or_else(|| InputError("payload.fiber_points: required in lift mode".into())),
        Mode::Grid => {
            let g = grid.ok_or_else(|| InputError("payload.grid: required in grid mode".into()))?;
            let free = g
                .free
                .iter()
                .map(|v| vars.index(v))
                .collect::<Result<Vec<_>, _>>()?;
            if free.len() != g.axes.len() {
                return Err(InputError(
                    "payload.grid: one axis list per free variable".into(),
                ));
            }
            Ok(CandidateSource::Grid(CandidateGrid::product(free, &g.axes)))
        }
    }
}

fn run_extract(p: ExtractPayload) -> Result<(Value, Option<Csv>, bool), InputError> {
    let vars = Vars::new(&p.vars)?;
    let f = vars.polys(&p.equations, "payload.equations")?;
    let sys = extract_coefficient_system(&f, &vars.names, p.r).map_err(input_err)?;
    let mut names = unknown_names(&vars.names, p.r);
    names.push("t".into());
    let equations: Vec<Value> = sys
        .equations
        .iter()
        .map(|e| {
            json!({
                "source": e.source,
                "power": e.power,
                "poly": poly_json(&e.poly, &names),
            })
        })
        .collect();
    let result = json!({
        "n": sys.n,
        "r": sys.r,
        "unknowns": sys.unknowns,
        "equations": equations,
        "dimension": to_value(&sys.dimension()),
    });
    Ok((result, None, true))
}

fn run_lift(p: LiftPayload, flags: &Flags) -> Result<(Value, Option<Csv>, bool), InputError> {
    let vars = Vars::new(&p.vars)?;
    let f = vars.polys(&p.equations, "payload.equations")?;
    let m = flags.truncation(p.m, p.r.unwrap_or(1));
    let lift = hensel_lift(&f, &p.fiber_point, m).map_err(input_err)?;
    let passed = lift.status != LiftStatus::Singular;
    let result = json!({
        "M": m,
        "curve": to_value(&lift.curve),
        "status": to_value(&lift.status),
    });
    Ok((result, None, passed))
}

fn run_enumerate(
    p: EnumeratePayload,
    flags: &Flags,
) -> Result<(Value, Option<Csv>, bool), InputError> {
    let vars = Vars::new(&p.vars)?;
    let f = vars.polys(&p.equations, "payload.equations")?;
    let m = flags.truncation(p.m, p.r);
    let source = candidate_source(&vars, p.mode, p.fiber_points, p.grid)?;
    let en = enumerate_points(&f, vars.n(), p.r, &source, m).map_err(input_err)?;
    let curves: Vec<Value> = en
        .found
        .iter()
        .map(|e| {
            json!({
                "candidate": e.candidate,
                "curve": to_value(&e.curve),
                "status": to_value(&e.status),
            })
        })
        .collect();
    let rows = en
        .found
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let degs: Vec<String> = e
                .curve
                .components()
                .iter()
                .map(|c| tpoly_degree(c).to_string())
                .collect();
            vec![
                i.to_string(),
                e.candidate.to_string(),
                degs.join(";"),
                status_label(&e.status),
            ]
        })
        .collect();
    let csv = Csv {
        header: vec![
            "curve".into(),
            "candidate".into(),
            "degrees".into(),
            "status".into(),
        ],
        rows,
    };
    let result = json!({
        "M": m,
        "count": en.found.len(),
        "curves": curves,
        "rejected": to_value(&en.rejected),
    });
    Ok((result, Some(csv), true))
}

fn run_interp_det(p: InterpDetPayload) -> Result<(Value, Option<Csv>, bool), InputError> {
    let vars = Vars::new(&p.vars)?;
    let report = match (&p.functions, &p.g, p.d) {
        (Some(fs), None, None) => {
            let f = vars.polys(fs, "payload.functions")?;
            match p.model {
                Some(model) => interp_det_with_model(&f, &p.curves, model),
                None => interp_det(&f, &p.curves),
            }
        }
        (None, Some(gs), Some(d)) => {
            let g = vars.polys(gs, "payload.g")?;
            poly_interp_det(&g, d, &p.curves)
        }
        _ => {
            return Err(InputError(
                "payload: give either functions, or g together with d".into(),
            ))
        }
    }
    .map_err(input_err)?;
    let passed = report.bounds_hold();
    let mut result = to_value(&report);
    result["ord"] = to_value(&report.value.ord());
    result["deg"] = to_value(&report.value.degree());
    Ok((result, None, passed))
}

fn run_select_hyp(p: SelectHypPayload) -> Result<(Value, Option<Csv>, bool), InputError> {
    let vars = Vars::new(&p.vars)?;
    let g = vars.polys(&p.g, "payload.g")?;
    let h = select_hypersurface(&p.curves, &g, p.d).map_err(input_err)?;
    let vanishes = h.vanishes_on(&g, &p.curves).map_err(input_err)?;
    let mut names: Vec<String> = (0..g.len()).map(|i| format!("g{i}")).collect();
    names.push("t".into());
    let ambient = h
        .poly
        .remap(&(0..g.len()).chain([vars.n()]).collect::<Vec<_>>());
    let ambient_in_vars = if g.iter().enumerate().all(|(i, gi)| *gi == MPoly::var(i)) {
        Some(poly_json(&ambient, &vars.with_t()))
    } else {
        None
    };
    let result = json!({
        "d": p.d,
        "mu": h.basis.mu(),
        "hypersurface": poly_json(&h.poly, &names),
        "in_vars": ambient_in_vars,
        "coefficients": to_value(&h.coefficients),
        "vanishes_on_all": vanishes,
    });
    Ok((result, None, vanishes))
}

fn run_estimate(p: EstimatePayload) -> Result<(Value, Option<Csv>, bool), InputError> {
    let vars = Vars::new(&p.vars)?;
    let f = vars.polys(&p.equations, "payload.equations")?;
    let n = vars.n();
    let z =
        p.z.as_ref()
            .map(|zs| {
                zs.iter()
                    .map(|v| vars.index(v))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
    let split = match (z, p.nu) {
        (Some(z), Some(nu)) => with_user_nu(n, &z, nu),
        (Some(z), None) => estimate_e(&f, n, &z),
        (None, None) => find_split(&f, n, p.m.unwrap_or(n.saturating_sub(f.len()))),
        (None, Some(_)) => return Err(InputError("payload.nu: requires z".into())),
    }
    .map_err(input_err)?;
    let mut passed = !split.degenerate;
    let mut check = Value::Null;
    if let Some(c) = p.check {
        let count = fiber_count(&f, n, &split, &c.v, &c.t0).map_err(input_err)?;
        let ok = match split.certificate {
            Certificate::Resultant | Certificate::UserSupplied => count == split.nu,
            Certificate::BezoutUpperBound => count <= split.nu,
        };
        passed &= ok;
        check = json!({ "fiber_count": count, "consistent": ok });
    }
    let z_names: Vec<&String> = split.z_indices.iter().map(|&i| &vars.names[i]).collect();
    let w_names: Vec<&String> = split.w_indices.iter().map(|&i| &vars.names[i]).collect();
    let result = json!({
        "split": to_value(&split),
        "z": z_names,
        "w": w_names,
        "check": check,
    });
    Ok((result, None, passed))
}

fn run_chain(chain: Chain, flags: &Flags) -> Result<(Value, Option<Csv>, bool), InputError> {
    let mut chain = chain;
    if let Some(t) = flags.trunc {
        chain.trunc = chain.trunc.min(t as u32);
    }
    let report = verify_chain(&chain).map_err(input_err)?;
    let result = json!({ "trunc": chain.trunc, "report": to_value(&report) });
    Ok((result, None, report.passed))
}

fn run_budget(p: BudgetPayload) -> Result<(Value, Option<Csv>, bool), InputError> {
    let mult = multiplicity_budget(
        p.beta,
        p.n,
        p.ell,
        p.kind,
        p.t_algebraic,
        p.noetherian_exponent,
    );
    let wilkie = (p.kind == ChainKind::Pfaffian).then(|| wilkie_budget(p.beta, p.r, p.n, p.ell));
    let result = json!({
        "multiplicity": to_value(&mult),
        "wilkie": to_value(&wilkie),
    });
    Ok((result, None, true))
}

fn run_decompose(
    p: DecomposePayload,
    flags: &Flags,
) -> Result<(Value, Option<Csv>, bool), InputError> {
    let vars = Vars::new(&p.vars)?;
    let f = vars.polys(&p.equations, "payload.equations")?;
    let n = vars.n();
    let curves = match (p.curves, p.mode) {
        (Some(c), None) => c,
        (None, Some(mode)) => {
            let m = flags.truncation(p.m, p.r);
            let source = candidate_source(&vars, mode, p.fiber_points, p.grid)?;
            enumerate_points(&f, n, p.r, &source, m)
                .map_err(input_err)?
                .curves()
        }
        _ => return Err(InputError("payload: give either curves or mode".into())),
    };
    let input = DecomposeInput {
        n,
        equations: f,
        algebraic: p.algebraic,
        curves: curves.clone(),
        nu: p.nu.unwrap_or(1),
        seed: flags.seed,
    };
    let blocks = decompose(&input).map_err(input_err)?;
    let covered = covers(&blocks, &curves);
    let budget = p.beta.map(|b| wilkie_budget(b, p.r as u64, n, 0));
    let within = budget.as_ref().is_none_or(|w| {
        blocks.len() as u128 <= w.block_count_bound
            && blocks
                .iter()
                .all(|b| b.degree as u128 <= w.block_degree_bound)
    });
    let names = vars.with_t();
    let block_json: Vec<Value> = blocks
        .iter()
        .map(|b| {
            json!({
                "id": b.id,
                "dim": b.dim,
                "degree": b.degree,
                "flag": to_value(&b.flag),
                "generators": b.generators.iter().map(|g| poly_json(g, &names)).collect::<Vec<_>>(),
                "absorbed": to_value(&b.absorbed),
                "provenance": to_value(&b.provenance),
            })
        })
        .collect();
    let rows = blocks
        .iter()
        .map(|b| {
            vec![
                b.id.to_string(),
                b.dim.to_string(),
                b.degree.to_string(),
                b.absorbed.len().to_string(),
            ]
        })
        .collect();
    let csv = Csv {
        header: vec![
            "block".into(),
            "dim".into(),
            "degree".into(),
            "absorbed".into(),
        ],
        rows,
    };
    let result = json!({
        "curves": curves.len(),
        "blocks": block_json,
        "covers_all": covered,
        "budget": to_value(&budget),
        "within_budget": within,
        "seed": flags.seed,
    });
    Ok((result, Some(csv), covered && within))
}

pub fn run_growth(
    p: GrowthPayload,
    flags: &Flags,
) -> Result<(Value, Option<Csv>, bool), InputError> {
    let spec = GrowthSpec {
        n: p.n,
        depth: p.depth,
        m: flags.trunc.or(p.m),
    };
    spec.validate().map_err(input_err)?;
    let imax = p.imax.unwrap_or(spec.n.len());
    if imax == 0 || imax > spec.n.len() {
        return Err(InputError(format!(
            "payload.imax: must be between 1 and {}",
            spec.n.len()
        )));
    }
    let series = build_growth_series(&spec);
    let report = verify_growth(&series, &spec.n, imax);
    let rows = report
        .rows
        .iter()
        .map(|w| {
            vec![
                w.i.to_string(),
                w.j.to_string(),
                w.deg.to_string(),
                w.pass.to_string(),
            ]
        })
        .collect();
    let csv = Csv {
        header: vec!["i".into(), "j".into(), "deg".into(), "pass".into()],
        rows,
    };
    let result = json!({
        "N": spec.n,
        "depth": spec.depth,
        "M": spec.truncation(),
        "imax": imax,
        "monotone": report.monotone,
        "levels": to_value(&report.levels),
        "rows": report.rows.len(),
    });
    Ok((result, Some(csv), report.passed))
}

/// Runs one task on a JSON payload.
pub fn dispatch(task: Task, payload: &Value, flags: &Flags) -> Result<Outcome, InputError> {
    const W: &str = "payload";
    let (result, csv, passed) = match task {
        Task::Extract => run_extract(parse_value(payload, W)?),
        Task::Lift => run_lift(parse_value(payload, W)?, flags),
        Task::Enumerate => run_enumerate(parse_value(payload, W)?, flags),
        Task::InterpDet => run_interp_det(parse_value(payload, W)?),
        Task::SelectHyp => run_select_hyp(parse_value(payload, W)?),
        Task::EstimateE => run_estimate(parse_value(payload, W)?),
        Task::ChainVerify => run_chain(parse_value(payload, W)?, flags),
        Task::Budget => run_budget(parse_value(payload, W)?),
        Task::Decompose => run_decompose(parse_value(payload, W)?, flags),
        Task::Growth => run_growth(parse_value(payload, W)?, flags),
    }?;
    Ok(Outcome {
        report: Report {
            schema_version: SCHEMA_VERSION,
            task,
            passed,
            seed: flags.seed,
            result,
        },
        csv,
    })
}

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn csv_text(csv: &Csv) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&csv.header).expect("in-memory write");
    for r in &csv.rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Writes `report.json` and, if present, `summary.csv` into `dir`.
pub fn write_artifacts(out: &Outcome, dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), report_json(&out.report))?;
    if let Some(csv) = &out.csv {
        fs::write(dir.join("summary.csv"), csv_text(csv))?;
    }
    Ok(())
}

#[derive(Parser, Debug)]
#[command(
    name = "ffcount",
    version,
    about = "Count and certify polynomial curves on varieties over Q((t))"
)]
pub struct Args {
    /// Output directory for report.json and summary.csv.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Series truncation order; overrides any M in the payload.
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Extra terms beyond r used when no truncation is given.
    #[arg(long, global = true, default_value_t = DEFAULT_GUARD)]
    pub guard: usize,
    /// Seed for random point streams; FFCOUNT_SEED takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a problem file {schema_version, task, payload}.
    Run { file: PathBuf },
    /// Coefficient system of the curve ansatz.
    Extract { payload: PathBuf },
    /// Newton lift of one fiber point.
    Lift { payload: PathBuf },
    /// Enumerate curves from fiber points or a grid.
    Enumerate { payload: PathBuf },
    /// Interpolation determinant with its order and degree bounds.
    InterpDet { payload: PathBuf },
    /// Hypersurface through a set of curves.
    SelectHyp { payload: PathBuf },
    /// Weierstrass split and fiber degree.
    EstimateE { payload: PathBuf },
    /// Check a Pfaffian or Noetherian chain.
    ChainVerify { payload: PathBuf },
    /// Multiplicity and block budgets.
    Budget { payload: PathBuf },
    /// Block decomposition of the enumerated curves.
    Decompose { payload: PathBuf },
    /// Growth family witnesses; flags build the payload when no file is given.
    Growth {
        payload: Option<PathBuf>,
        #[arg(long = "N", value_delimiter = ',')]
        n: Option<Vec<u64>>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        imax: Option<usize>,
    },
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn read_payload(path: &Path) -> Result<Value, InputError> {
    parse_json(&read(path)?, &path.display().to_string())
}

fn resolve(command: &Command) -> Result<(Task, Value), InputError> {
    Ok(match command {
        Command::Run { file } => {
            let pf = parse_problem(&read(file)?)?;
            (pf.task, pf.payload)
        }
        Command::Extract { payload } => (Task::Extract, read_payload(payload)?),
        Command::Lift { payload } => (Task::Lift, read_payload(payload)?),
        Command::Enumerate { payload } => (Task::Enumerate, read_payload(payload)?),
        Command::InterpDet { payload } => (Task::InterpDet, read_payload(payload)?),
        Command::SelectHyp { payload } => (Task::SelectHyp, read_payload(payload)?),
        Command::EstimateE { payload } => (Task::EstimateE, read_payload(payload)?),
        Command::ChainVerify { payload } => (Task::ChainVerify, read_payload(payload)?),
        Command::Budget { payload } => (Task::Budget, read_payload(payload)?),
        Command::Decompose { payload } => (Task::Decompose, read_payload(payload)?),
        Command::Growth {
            payload,
            n,
            depth,
            imax,
        } => {
            let mut v = match payload {
                Some(p) => read_payload(p)?,
                None => json!({}),
            };
            let obj = v
                .as_object_mut()
                .ok_or_else(|| InputError("growth payload must be an object".into()))?;
            if let Some(n) = n {
                obj.insert("N".into(), json!(n));
            }
            if let Some(d) = depth {
                obj.insert("depth".into(), json!(d));
            }
            if let Some(i) = imax {
                obj.insert("imax".into(), json!(i));
            }
            (Task::Growth, v)
        }
    })
}

fn seed_from_env(flag: u64) -> Result<u64, InputError> {
    match std::env::var("FFCOUNT_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| InputError(format!("FFCOUNT_SEED: not an integer: {s}"))),
        Err(_) => Ok(flag),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = seed_from_env(args.seed).and_then(|seed| {
        let flags = Flags {
            trunc: args.trunc,
            guard: args.guard,
            seed,
        };
        let (task, payload) = resolve(&args.command)?;
        dispatch(task, &payload, &flags)
    });
    match outcome {
        Ok(out) => {
            if let Err(e) = write_artifacts(&out, &args.out) {
                eprintln!("error: writing to {}: {e}", args.out.display());
                return 2;
            }
            println!(
                "{}: {}",
                out.report.task.name(),
                if out.report.passed { "pass" } else { "FAIL" }
            );
            out.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Flags {
        Flags::default()
    }

    #[test]
    fn extract_parabola_has_three_equations() {
        let payload = json!({
            "vars": ["x", "y", "t"],
            "equations": [[
                {"exps": [0, 1, 0], "coeff": "1"},
                {"exps": [2, 0, 0], "coeff": "-1"}
            ]],
            "r": 2
        });
        let out = dispatch(Task::Extract, &payload, &flags()).unwrap();
        assert!(out.report.passed);
        assert_eq!(out.report.result["equations"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn t_may_appear_anywhere_in_vars() {
        let a = json!({"vars": ["x", "y", "t"], "r": 2, "equations": [[
            {"exps": [0, 1, 0], "coeff": "1"}, {"exps": [1, 0, 1], "coeff": "-1"}]]});
        let b = json!({"vars": ["t", "x", "y"], "r": 2, "equations": [[
            {"exps": [0, 0, 1], "coeff": "1"}, {"exps": [1, 1, 0], "coeff": "-1"}]]});
        let ra = dispatch(Task::Extract, &a, &flags()).unwrap().report;
        let rb = dispatch(Task::Extract, &b, &flags()).unwrap().report;
        assert_eq!(ra, rb);
    }

    #[test]
    fn growth_report_has_seven_rows() {
        let payload = json!({"N": [1, 2, 4], "depth": 3, "imax": 3});
        let out = dispatch(Task::Growth, &payload, &flags()).unwrap();
        assert!(out.report.passed);
        assert_eq!(out.csv.unwrap().rows.len(), 7);
    }

    #[test]
    fn bad_rational_is_an_input_error_with_path() {
        let payload = json!({"vars": ["x", "t"], "r": 1, "equations": [[
            {"exps": [1, 0], "coeff": "1/0"}]]});
        let err = dispatch(Task::Extract, &payload, &flags()).unwrap_err();
        assert!(err.0.contains("equations[0][0].coeff"), "{}", err.0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"schema_version": 1, "task": "budget", "payload": {}, "extra": 1}"#;
        assert!(parse_problem(text).is_err());
        let payload = json!({"beta": 2, "r": 2, "n": 1, "ell": 1, "kind": "pfaffian", "bogus": 0});
        assert!(dispatch(Task::Budget, &payload, &flags()).is_err());
    }

    #[test]
    fn report_round_trips() {
        let payload = json!({"beta": 2, "r": 2, "n": 1, "ell": 1, "kind": "pfaffian"});
        let out = dispatch(Task::Budget, &payload, &flags()).unwrap();
        let text = report_json(&out.report);
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, out.report);
        assert_eq!(report_json(&back), text);
    }
}
