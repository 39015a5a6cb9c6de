//! The `alephfree` command.
//!
//! Every subcommand produces a JSON payload on stdout (or a short text
//! rendering with `--format text`) and a one-line summary on stderr. Exit
//! codes: 0 for success, 1 for a negative mathematical verdict, 2 for
//! invalid invocations and unusable inputs.

mod args;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::Parser;
use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use args::{Cli, Command, Format, FormulaCmd, GroupCmd};

use crate::codec::{self, AckermannIndex};
use crate::formula::{is_delta0, parse_formula, relativize, Formula, Var};
use crate::group::{
    self, complement_summand, is_pure, pontryagin_certify_with, pure_closure, quotient_presentation,
    verify_witness, GeneratorSet, GroupError, GroupFile, LatticeGroup, LevelledGroup, PresentationFile,
    PresentedGroup, Verdict,
};
use crate::hf::{absoluteness_scan, evaluate, v_level, Assignment, HfSet, ModelDomain, ModelFile};
use crate::linalg::{hnf, snf, IntMatrix, MatrixFile};
use crate::SCHEMA_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// What a command run produced; [`crate`]'s binary just prints this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Outcome {
    negative: bool,
    payload: Value,
    summary: String,
}

impl Outcome {
    fn new(negative: bool, payload: Value, summary: impl Into<String>) -> Self {
        Outcome { negative, payload, summary: summary.into() }
    }
}

/// Failure that maps to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Outcome, UsageError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult { exit_code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                CommandResult { exit_code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = match cli.command {
        Command::Formula(c) => formula_cmd(c),
        Command::Group(c) => group_cmd(c),
    };
    match result {
        Ok(o) => {
            let stdout = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&o.payload).expect("payload is plain JSON");
                    s.push('\n');
                    s
                }
                Format::Text => format!("{}\n", o.summary),
            };
            CommandResult {
                exit_code: if o.negative { EXIT_NEGATIVE } else { EXIT_OK },
                stdout,
                stderr: format!("{}\n", o.summary),
            }
        }
        Err(UsageError(msg)) => {
            CommandResult { exit_code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") }
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn parse(text: &str) -> Result<Formula, UsageError> {
    Ok(parse_formula(text)?)
}

/// `V:k` or a model file.
fn load_model(spec: &str) -> Result<ModelDomain, UsageError> {
    if let Some(k) = spec.strip_prefix("V:") {
        let k: usize = k.parse().map_err(|_| UsageError(format!("bad level in `{spec}`")))?;
        return Ok(v_level(k)?);
    }
    let file: ModelFile = read_json(Path::new(spec))?;
    Ok(ModelDomain::from_file(&file))
}

fn parse_assignment(pairs: &[String]) -> Result<Assignment, UsageError> {
    pairs
        .iter()
        .map(|p| {
            let (v, idx) = p
                .split_once('=')
                .ok_or_else(|| UsageError(format!("expected var=index, got `{p}`")))?;
            let idx: BigUint = idx
                .trim()
                .parse()
                .map_err(|_| UsageError(format!("`{idx}` is not an Ackermann index")))?;
            Ok((Var::new(v.trim()), HfSet::decode(&idx)))
        })
        .collect()
}

fn formula_cmd(cmd: FormulaCmd) -> CmdResult {
    match cmd {
        FormulaCmd::Parse(a) => {
            let phi = parse(&a.formula)?;
            let free: Vec<Var> = phi.free_variables().into_iter().collect();
            let summary = format!("{phi}");
            Ok(Outcome::new(
                false,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "formula": phi.to_string(),
                    "ast": to_value(&phi),
                    "free_variables": free,
                    "depth": phi.depth(),
                }),
                summary,
            ))
        }
        FormulaCmd::Delta0(a) => {
            let phi = parse(&a.formula)?;
            let v = is_delta0(&phi);
            let summary = if v.verdict {
                format!("Delta0: {phi}")
            } else {
                let locs: Vec<&str> = v.violations().map(|e| e.locator.as_str()).collect();
                format!("not Delta0: unbounded quantifier at {}", locs.join(", "))
            };
            Ok(Outcome::new(
                !v.verdict,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "formula": phi.to_string(),
                    "delta0": v.verdict,
                    "trace": to_value(&v.trace),
                }),
                summary,
            ))
        }
        FormulaCmd::Relativize { f, model_var } => {
            let phi = parse(&f.formula)?;
            let m = Var::new(model_var);
            let r = relativize(&phi, &m)?;
            Ok(Outcome::new(
                false,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "formula": phi.to_string(),
                    "model_var": m,
                    "relativized": r.to_string(),
                    "ast": to_value(&r),
                }),
                r.to_string(),
            ))
        }
        FormulaCmd::Eval { f, model, assign } => {
            let phi = parse(&f.formula)?;
            let dom = load_model(&model)?;
            let a = parse_assignment(&assign)?;
            let value = evaluate(&phi, &dom, &a)?;
            let shown: BTreeMap<&Var, AckermannIndex> =
                a.iter().map(|(v, x)| (v, AckermannIndex(x.index().clone()))).collect();
            Ok(Outcome::new(
                false,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "formula": phi.to_string(),
                    "model": dom.name(),
                    "assignment": to_value(&shown),
                    "value": value,
                }),
                format!("{value} in {}", dom.name()),
            ))
        }
        FormulaCmd::Scan { f, m, n, ambient } => {
            let phi = parse(&f.formula)?;
            let (dm, dn) = (load_model(&m)?, load_model(&n)?);
            let mut report = absoluteness_scan(&phi, &dm, &dn)?;
            if let Some(a) = ambient {
                load_model(&a)?;
                report.ambient = a;
            }
            let summary = format!(
                "{} of {} assignments agree between {} and {}; {} failures",
                report.agreed,
                report.assignments,
                report.m,
                report.n,
                report.failures.len()
            );
            Ok(Outcome::new(!report.absolute, to_value(&report), summary))
        }
    }
}

/// A flat `{rows, cols, entries}` file or a list of rows.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Flat(MatrixFile),
    Rows(#[serde(with = "codec::bigint_rows")] Vec<Vec<BigInt>>),
}

fn load_matrix(path: &Path) -> Result<IntMatrix, UsageError> {
    Ok(match read_json::<MatrixInput>(path)? {
        MatrixInput::Flat(f) => IntMatrix::from_file(f)?,
        MatrixInput::Rows(rows) => {
            let cols = rows.first().map_or(0, Vec::len);
            IntMatrix::from_rows(cols, rows)?
        }
    })
}

fn load_group(path: &Path) -> Result<LatticeGroup, UsageError> {
    Ok(LatticeGroup::from_file(read_json::<GroupFile>(path)?)?)
}

fn rows_value(m: &IntMatrix) -> Value {
    Value::Array(
        m.row_vecs()
            .into_iter()
            .map(|r| Value::Array(r.into_iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn ints_value(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

fn basis_value(g: &LatticeGroup) -> Value {
    to_value(&g.basis())
}

fn show_basis(g: &LatticeGroup) -> String {
    let b: Vec<String> = g.basis().iter().map(ToString::to_string).collect();
    format!("⟨{}⟩", b.join(", "))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FreenessInput {
    Presented(PresentationFile),
    Lattice(GroupFile),
}

#[derive(Deserialize)]
struct LevelsFile {
    name: String,
    levels: Vec<GroupFile>,
}

fn freeness_payload(p: &PresentedGroup, kind: &str) -> Outcome {
    let free = p.is_free();
    let torsion = p.torsion_coefficients();
    let summary = if free {
        format!("free of rank {}", p.torsion_free_rank())
    } else {
        let t: Vec<String> = torsion.iter().map(|d| format!("Z/{d}")).collect();
        format!("not free: torsion {} with torsion-free rank {}", t.join(" + "), p.torsion_free_rank())
    };
    Outcome::new(
        !free,
        json!({
            "schema_version": SCHEMA_VERSION,
            "input": kind,
            "free": free,
            "torsion_free": p.is_torsion_free(),
            "torsion_free_rank": p.torsion_free_rank(),
            "invariant_factors": ints_value(&p.invariant_factors()),
            "torsion_coefficients": ints_value(&torsion),
        }),
        summary,
    )
}

fn group_cmd(cmd: GroupCmd) -> CmdResult {
    match cmd {
        GroupCmd::Snf { matrix } => {
            let a = load_matrix(&matrix)?;
            let s = snf(&a);
            let inv = s.invariant_factors();
            let summary = format!("invariant factors {:?}", inv.iter().map(ToString::to_string).collect::<Vec<_>>());
            Ok(Outcome::new(
                false,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "rows": a.rows(),
                    "cols": a.cols(),
                    "rank": s.rank,
                    "invariant_factors": ints_value(&inv),
                    "d": rows_value(&s.d),
                    "u": rows_value(&s.u),
                    "v": rows_value(&s.v),
                }),
                summary,
            ))
        }
        GroupCmd::Hnf { matrix } => {
            let a = load_matrix(&matrix)?;
            let h = hnf(&a);
            Ok(Outcome::new(
                false,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "rows": a.rows(),
                    "cols": a.cols(),
                    "rank": h.rank(),
                    "pivots": h.pivots,
                    "h": rows_value(&h.h),
                    "u": rows_value(&h.u),
                }),
                format!("rank {}, pivot columns {:?}", h.rank(), h.pivots),
            ))
        }
        GroupCmd::PureClosure { g, set } => {
            let g = load_group(&g.group)?;
            let s: GeneratorSet = read_json(&set)?;
            let c = pure_closure(&g, &s)?;
            Ok(Outcome::new(
                false,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "basis": basis_value(&c),
                    "rank0": c.rank0(),
                }),
                show_basis(&c),
            ))
        }
        GroupCmd::Purity(a) => {
            let (g, h) = (load_group(&a.g.group)?, load_group(&a.subgroup)?);
            let r = is_pure(&h, &g)?;
            let verified = r.witness.as_ref().map(|w| w.verify(&h, &g));
            let summary = match &r.witness {
                None => "pure".to_owned(),
                Some(w) => format!("not pure: {} = {}·{} with {} outside the subgroup", w.x, w.n, w.y, w.y),
            };
            Ok(Outcome::new(
                !r.pure,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "pure": r.pure,
                    "witness": to_value(&r.witness),
                    "witness_verified": verified,
                }),
                summary,
            ))
        }
        GroupCmd::Freeness { group } => match read_json::<FreenessInput>(&group)? {
            FreenessInput::Presented(f) => Ok(freeness_payload(&PresentedGroup::from_file(f)?, "presentation")),
            FreenessInput::Lattice(f) => {
                let g = LatticeGroup::from_file(f)?;
                Ok(freeness_payload(&g.presentation(), "lattice"))
            }
        },
        GroupCmd::Quotient(a) => {
            let (g, h) = (load_group(&a.g.group)?, load_group(&a.subgroup)?);
            let q = quotient_presentation(&g, &h)?;
            let torsion = q.torsion_coefficients();
            Ok(Outcome::new(
                false,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "presentation": to_value(&q.to_file()),
                    "invariant_factors": ints_value(&q.invariant_factors()),
                    "torsion_coefficients": ints_value(&torsion),
                    "torsion_free_rank": q.torsion_free_rank(),
                    "free": q.is_free(),
                }),
                format!(
                    "quotient: Z^{} plus torsion {:?}",
                    q.torsion_free_rank(),
                    torsion.iter().map(ToString::to_string).collect::<Vec<_>>()
                ),
            ))
        }
        GroupCmd::Complement(a) => {
            let (g, h) = (load_group(&a.g.group)?, load_group(&a.subgroup)?);
            match complement_summand(&g, &h) {
                Ok(c) => Ok(Outcome::new(
                    false,
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "pure": true,
                        "complement": basis_value(&c.complement),
                        "change_of_basis": rows_value(&c.change_of_basis),
                        "determinant": c.determinant.to_string(),
                        "verified": group::verify_complement(&g, &h, &c.complement),
                    }),
                    format!("complement {} with determinant {}", show_basis(&c.complement), c.determinant),
                )),
                Err(GroupError::NotPure(w)) => Ok(Outcome::new(
                    true,
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "pure": false,
                        "witness": to_value(&*w),
                        "witness_verified": w.verify(&h, &g),
                    }),
                    format!("no complement: subgroup is not pure ({} = {}·{})", w.x, w.n, w.y),
                )),
                Err(e) => Err(e.into()),
            }
        }
        GroupCmd::Certify { family, levels, depth, size, threshold } => {
            let g = match (family, levels) {
                (Some(f), _) => LevelledGroup::family(f.parse()?),
                (None, Some(path)) => {
                    let file: LevelsFile = read_json(&path)?;
                    let ls = file
                        .levels
                        .into_iter()
                        .map(LatticeGroup::from_file)
                        .collect::<Result<Vec<_>, _>>()?;
                    LevelledGroup::from_levels(file.name, ls)
                }
                (None, None) => return Err(UsageError("one of --family or --levels is required".into())),
            };
            let report = pontryagin_certify_with(&g, depth, size, threshold)?;
            let verified = report.witness.as_ref().map(|w| verify_witness(&g, depth, w).is_ok());
            let summary = match report.verdict {
                Verdict::CertifiedToDepth => format!(
                    "{}: certified to depth {} ({} subsets, {} summands verified)",
                    report.group, depth, report.subsets_checked, report.summands_verified
                ),
                Verdict::NonFreeWitness => format!("{}: non-free witness found", report.group),
            };
            let mut payload = to_value(&report);
            payload["witness_verified"] = json!(verified);
            Ok(Outcome::new(report.verdict == Verdict::NonFreeWitness, payload, summary))
        }
        GroupCmd::CheckThm42(a) => harness(group::run_transitivity_harness(a.trials, a.seed)?),
        GroupCmd::CheckThm43(a) => harness(group::run_quotient_harness(a.trials, a.seed)?),
    }
}

fn harness(r: group::HarnessReport) -> CmdResult {
    let summary = format!(
        "{} trials (seed {}): {} premise satisfied, {} vacuous, {} violations",
        r.trials, r.seed, r.premise_satisfied, r.vacuous, r.violations
    );
    Ok(Outcome::new(r.violations > 0, to_value(&r), summary))
}
