use crate::cli::{Cli, Command, FourierOp, LpOp, ModeArg, PpModeArg, ReduceOp, TemplateArgs};
use crate::format::*;
use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::Path;
use vpcsp_core::algebra::{PayoffFormula, ValuedTemplate};
use vpcsp_core::canonical::{synthesize, verify_canonical, Beta, CanonicalRequest, DualWitness, Family, Mode, Outcome as LpOutcome};
use vpcsp_core::fourier::{self, FunctionTable, GlcReport, HastadConfig, PmFunction};
use vpcsp_core::lp::{self, LpResult};
use vpcsp_core::num::{fmt_q, parse_q, Q};
use vpcsp_core::polymorphism::{enumerate_polymorphisms, MinionCache};
use vpcsp_core::reductions::*;
use vpcsp_core::search::{brute_force_max, classify, classify_cf};
use vpcsp_core::valued::{
    check_plurimorphism, check_template, payoff_points, sampled_mixture_violation, Mixture, Point, TemplateVerdict, Weighting,
};
use vpcsp_core::{zoo, Limits};

/// What a command found: `negative` selects exit code 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub negative: bool,
    pub result: Value,
    pub certificates: Vec<Value>,
}

impl Outcome {
    fn ok(result: Value) -> Outcome {
        Outcome { negative: false, result, certificates: Vec::new() }
    }

    fn verdict(positive: bool, result: Value) -> Outcome {
        Outcome { negative: !positive, result, certificates: Vec::new() }
    }

    fn with(mut self, kind: &str, check: &str, data: Value) -> Outcome {
        self.certificates.push(json!({ "kind": kind, "check": check, "data": data }));
        self
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("file formats serialize")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Loads `T` from a bare file or from the first certificate of `kind` inside a report.
fn load<T: DeserializeOwned>(path: &Path, kind: &str) -> Result<T> {
    let text = read(path)?;
    let located = |e: FormatError, prefix: &str| anyhow!("{}: {}{}: {}", path.display(), prefix, e.pointer, e.message);
    let value: Value = serde_json::from_str(&text).map_err(|e| anyhow!("{}: invalid JSON: {e}", path.display()))?;
    if let Some(certs) = value.get("certificates").and_then(Value::as_array) {
        let Some(i) = certs.iter().position(|c| c.get("kind").and_then(Value::as_str) == Some(kind)) else {
            bail!("{}: the report carries no {kind} certificate", path.display());
        };
        let data = serde_json::to_string(&certs[i]["data"])?;
        return from_json(&data).map_err(|e| located(e, &format!("/certificates/{i}/data")));
    }
    from_json(&text).map_err(|e| located(e, ""))
}

fn with_path<T>(path: &Path, r: std::result::Result<T, FormatError>) -> Result<T> {
    r.map_err(|e| anyhow!("{}: {}: {}", path.display(), e.pointer, e.message))
}

/// `name k=v k=v`, with flags taking precedence.
fn builtin_template(spec: &str, flags: &TemplateArgs) -> Result<ValuedTemplate> {
    let mut words = spec.split_whitespace();
    let name = words.next().ok_or_else(|| anyhow!("empty builtin name"))?;
    let mut params = BTreeMap::new();
    for kv in words.map(String::from).chain(flags.params.iter().cloned()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| anyhow!("parameter {kv:?} is not key=value"))?;
        params.insert(k.to_string(), v.to_string());
    }
    for (k, v) in [("c", &flags.c), ("s", &flags.s), ("kappa", &flags.kappa)] {
        if let Some(v) = v {
            params.insert(k.to_string(), v.clone());
        }
    }
    Ok(zoo::builtin(name, &params)?)
}

fn template_file(path: &Path) -> Result<ValuedTemplate> {
    let file: TemplateFile = load(path, "template")?;
    with_path(path, file.to_template())
}

pub fn load_template(t: &TemplateArgs) -> Result<ValuedTemplate> {
    match (&t.builtin, &t.template) {
        (Some(spec), _) => builtin_template(spec, t),
        (None, Some(path)) => {
            if t.c.is_some() || t.s.is_some() || t.kappa.is_some() || !t.params.is_empty() {
                bail!("parameters only apply to --builtin templates");
            }
            template_file(path)
        }
        (None, None) => bail!("give --builtin NAME or --template FILE"),
    }
}

/// A file path if one exists, otherwise a zoo spec.
fn template_spec(spec: &str) -> Result<ValuedTemplate> {
    let path = Path::new(spec);
    if path.is_file() {
        template_file(path)
    } else {
        builtin_template(spec, &TemplateArgs::default())
    }
}

fn formula(path: &Path, t: &ValuedTemplate) -> Result<PayoffFormula> {
    let file: FormulaFile = load(path, "formula")?;
    with_path(path, file.to_formula(t.sig()))
}

fn q_arg(s: &str, what: &str) -> Result<Q> {
    parse_q(s).map_err(|_| anyhow!("{what}: {s:?} is not a rational"))
}

fn formula_json(f: &PayoffFormula, t: &ValuedTemplate) -> Value {
    to_value(&FormulaFile::from_formula(f, t.sig()))
}

fn weightings_json(ws: &[Weighting]) -> Value {
    to_value(&WeightingsFile::from_weightings(ws))
}

fn dual_json(d: &DualWitness) -> Value {
    json!({ "kappa": fmt_q(&d.kappa), "weightings": weightings_json(&d.weightings) })
}

fn mixture_json(m: &Mixture) -> Value {
    json!({
        "points": m.weights.iter().map(|(i, w)| json!([i, fmt_q(w)])).collect::<Vec<_>>(),
        "x": fmt_q(&m.x),
        "y": fmt_q(&m.y),
    })
}

fn lp_certificate(sys: &lp::LpSystem, r: &LpResult) -> Value {
    to_value(&LpCertificateFile::new(sys, r))
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let limits = cli.guards.limits();
    match &cli.command {
        Command::CheckTemplate(t) => check_template_cmd(&load_template(t)?, &limits),
        Command::Pol { t, arity } => {
            let t = load_template(t)?;
            let lvl = enumerate_polymorphisms(&t.a, &t.b, *arity, &limits)?;
            let fs: Vec<Value> = lvl.functions.iter().map(|f| json!(f.table)).collect();
            Ok(Outcome::ok(json!({ "arity": arity, "count": fs.len(), "functions": fs })))
        }
        Command::Pluri { t, weightings, samples } => pluri_cmd(&load_template(t)?, weightings, *samples, cli.seed, &limits),
        Command::Canonical { t, mode, c2, s2, families, arity, alpha, beta, dump_lp } => {
            let t = load_template(t)?;
            let mode = match mode {
                ModeArg::Baby => Mode::Baby,
                ModeArg::Improved => Mode::Improved,
                ModeArg::Cf => Mode::ConstantFactor,
                ModeArg::Thresholds => {
                    let (Some(c), Some(s)) = (c2, s2) else { bail!("--mode thresholds needs --c2 and --s2") };
                    Mode::Thresholds { c: q_arg(c, "--c2")?, s: q_arg(s, "--s2")? }
                }
            };
            let fams = match (families, arity) {
                (Some(path), _) => {
                    let files: Vec<FamilyFile> = load(path, "families")?;
                    files.iter().enumerate().map(|(i, f)| with_path(path, f.to_family(&format!("/{i}")))).collect::<Result<Vec<_>>>()?
                }
                (None, Some(n)) => vec![inline_family(*n, alpha.as_deref(), beta.as_deref())?],
                (None, None) => bail!("give --families FILE or --arity N with --alpha and --beta"),
            };
            canonical_cmd(&t, mode, fams, dump_lp.as_deref(), &limits)
        }
        Command::Reduce { op } => reduce_cmd(op, &limits),
        Command::Gadget { target, k, c, s, map } => {
            let flip = map.as_deref().map_or(target == "4lin2", |m| m == "flip");
            gadget_cmd(target, *k, &q_arg(c, "--c")?, &q_arg(s, "--s")?, flip, &limits)
        }
        Command::Ppdef { source, target, psi, mode } => ppdef_cmd(source, target, psi, *mode, &limits),
        Command::Fourier { op } => match op {
            FourierOp::VerifyHastad { d, e, delta } => hastad_cmd(*d, *e, &q_arg(delta, "--delta")?, cli.jobs),
            FourierOp::Expand { table } => expand_cmd(table),
        },
        Command::Lp { op } => match op {
            LpOp::Solve { system } => {
                let sys = lp_system(system)?;
                let r = lp::solve_verified(&sys)?;
                let result = json!({ "feasible": r.is_feasible(), "rows": sys.rows(), "columns": sys.cols() });
                Ok(Outcome::verdict(r.is_feasible(), result).with("lp", "lp verify", lp_certificate(&sys, &r)))
            }
            LpOp::Verify { input } => {
                let file: LpCertificateFile = load(input, "lp")?;
                let (sys, r) = with_path(input, file.parts())?;
                let ok = lp::verify(&sys, &r);
                Ok(Outcome::verdict(ok, json!({ "verified": ok, "feasible": r.is_feasible() })))
            }
        },
    }
}

/// A bare system, or the system inside a certificate or report.
fn lp_system(path: &Path) -> Result<lp::LpSystem> {
    let value: Value = serde_json::from_str(&read(path)?).map_err(|e| anyhow!("{}: invalid JSON: {e}", path.display()))?;
    if value.get("certificates").is_some() || value.get("system").is_some() {
        let file: LpCertificateFile = load(path, "lp")?;
        return Ok(with_path(path, file.parts())?.0);
    }
    let file: LpFile = load(path, "lp")?;
    with_path(path, file.to_system())
}

fn check_template_cmd(t: &ValuedTemplate, limits: &Limits) -> Result<Outcome> {
    Ok(match check_template(t, limits)? {
        TemplateVerdict::Valid { kappa, weighting } => {
            let ws = weightings_json(std::slice::from_ref(&weighting));
            Outcome::ok(json!({ "valid": true, "kappa": fmt_q(&kappa), "weighting": ws["weightings"][0] })).with(
                "weightings",
                "pluri --weightings",
                ws,
            )
        }
        TemplateVerdict::Invalid { formula } => {
            let (c, s) = t.cs()?;
            let w = formula.weight();
            let (max_a, max_b) = (brute_force_max(&formula, &t.a), brute_force_max(&formula, &t.b));
            let result = json!({
                "valid": false,
                "max_a": max_a.render(),
                "yes_threshold": fmt_q(&(c * &w)),
                "max_b": max_b.render(),
                "no_threshold": fmt_q(&(s * &w)),
                "confirmed": max_a.ge_q(&(c * &w)) && max_b.lt_q(&(s * &w)),
            });
            Outcome::verdict(false, result).with("formula", "reduce classify --formula", formula_json(&formula, t))
        }
    })
}

fn pluri_cmd(t: &ValuedTemplate, path: &Path, samples: usize, seed: u64, limits: &Limits) -> Result<Outcome> {
    let (c, s) = t.cs().context("plurimorphisms are defined for gap templates")?;
    let file: WeightingsFile = load(path, "weightings")?;
    let ws = with_path(path, file.to_weightings())?;
    let mut cache = MinionCache::new(&t.a, &t.b, *limits);
    let mut points = Vec::new();
    for (m, w) in ws.iter().enumerate() {
        w.validate(&mut cache).map_err(|e| anyhow!("{}: /weightings/{m}: {e}", path.display()))?;
        for (x, y) in payoff_points(t, &mut cache, w)? {
            points.push(Point { member: m, x, y });
        }
    }
    let r = check_plurimorphism(&points, ws.len(), c, s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampled = sampled_mixture_violation(&points, c, s, samples, &mut rng)?;
    let result = json!({
        "plurimorphism": r.is_plurimorphism(),
        "kappa": r.slope.as_ref().map(fmt_q),
        "pairwise": r.pairwise,
        "segments_avoid_region": r.segments_avoid,
        "points": points.len(),
        "witness": r.witness.as_ref().map(mixture_json),
        "sampled": samples,
        "sampled_violation": sampled.as_ref().map(mixture_json),
    });
    Ok(Outcome::verdict(r.is_plurimorphism(), result))
}

fn inline_family(n: usize, alpha: Option<&str>, beta: Option<&str>) -> Result<Family> {
    let alpha = alpha.ok_or_else(|| anyhow!("--arity needs --alpha"))?;
    let beta = beta.ok_or_else(|| anyhow!("--arity needs --beta"))?;
    let mut a: Vec<Q> = alpha.split(',').map(|v| q_arg(v, "--alpha")).collect::<Result<_>>()?;
    if a.len() == 1 {
        a = vec![a[0].clone(); n];
    }
    if a.len() != n {
        bail!("--alpha has {} values for arity {n}", a.len());
    }
    Ok(Family { arity: n, alpha: a, beta: Beta::constant(q_arg(beta, "--beta")?) })
}

fn canonical_cmd(t: &ValuedTemplate, mode: Mode, families: Vec<Family>, dump: Option<&Path>, limits: &Limits) -> Result<Outcome> {
    let mut cache = MinionCache::new(&t.a, &t.b, *limits);
    let req = CanonicalRequest { template: t, mode, families };
    let res = synthesize(&req, &mut cache)?;
    let verified = verify_canonical(&req, &res, &mut cache)?;
    let cert = lp_certificate(&res.lp, &res.solution);
    if let Some(p) = dump {
        std::fs::write(p, serde_json::to_string_pretty(&cert)? + "\n").with_context(|| format!("cannot write {}", p.display()))?;
    }
    let lp_size = json!({ "rows": res.lp.rows(), "columns": res.lp.cols() });
    let out = match &res.outcome {
        LpOutcome::Formulas(f) => Outcome::verdict(
            true,
            json!({
                "outcome": "formulas",
                "verified": verified,
                "lp": lp_size,
                "formulas": f.formulas.iter().map(|x| formula_json(x, t)).collect::<Vec<_>>(),
                "gamma": f.gamma.as_ref().map(fmt_q),
                "delta_in": f.delta_in.iter().map(fmt_q).collect::<Vec<_>>(),
                "delta_out": f.delta_out.iter().map(fmt_q).collect::<Vec<_>>(),
                "delta": f.delta.as_ref().map(fmt_q),
            }),
        ),
        LpOutcome::Dual(d) => {
            let mut v = dual_json(d);
            v["outcome"] = json!("dual");
            v["verified"] = json!(verified);
            v["lp"] = lp_size;
            Outcome::verdict(false, v).with("weightings", "pluri --weightings", weightings_json(&d.weightings))
        }
    };
    Ok(out.with("lp", "lp verify", cert))
}

fn completeness(t: &ValuedTemplate, c: Option<&str>) -> Result<Option<Q>> {
    let c = c.map(|v| q_arg(v, "--completeness")).transpose()?;
    match (&c, t.kappa().is_ok()) {
        (None, true) => bail!("constant-factor templates need --completeness"),
        (Some(_), false) => bail!("--completeness only applies to constant-factor templates"),
        _ => Ok(c),
    }
}

fn instance(path: &Path) -> Result<InstanceFile> {
    load(path, "instance")
}

fn reduce_cmd(op: &ReduceOp, limits: &Limits) -> Result<Outcome> {
    match op {
        ReduceOp::PcspToMc { t, formula: f, k } => {
            let t = load_template(t)?;
            let mc = pcsp_to_mc(&formula(f, &t)?, &t, *k)?;
            Ok(Outcome::ok(json!({ "instance": to_value(&InstanceFile::from_mc(&mc)) })))
        }
        ReduceOp::McToPcsp { t, instance: p } => {
            let t = load_template(t)?;
            let mc = with_path(p, instance(p)?.to_mc())?;
            let mut cache = MinionCache::new(&t.a, &t.b, *limits);
            let psi = mc_to_pcsp(&mc, &t, &mut cache)?;
            Ok(Outcome::ok(json!({ "formula": formula_json(&psi.formula, &t) })))
        }
        ReduceOp::PcspToVmc { t, formula: f, k, completeness: c } => {
            let t = load_template(t)?;
            let c = completeness(&t, c.as_deref())?;
            let mut cache = MinionCache::new(&t.a, &t.b, *limits);
            let (inst, promise) = pcsp_to_vmc(&formula(f, &t)?, &t, *k, &mut cache, c)?;
            Ok(Outcome::ok(json!({
                "instance": to_value(&InstanceFile::from_vmc(&inst)),
                "strong_promise": { "c": fmt_q(&promise.c), "s": fmt_q(&promise.s), "kappa": promise.kappa.as_ref().map(fmt_q) },
            })))
        }
        ReduceOp::VmcToPcsp { t, instance: p, fallback } => {
            let t = load_template(t)?;
            let inst = with_path(p, instance(p)?.to_vmc())?;
            let fallback = fallback.as_deref().map(|f| formula(f, &t)).transpose()?;
            let mut cache = MinionCache::new(&t.a, &t.b, *limits);
            let mut memo = SynthesisMemo::default();
            let r = vmc_to_pcsp(&inst, &t, &mut cache, fallback.as_ref(), &mut memo)?;
            let mut out = Outcome::ok(json!({
                "formula": formula_json(&r.formula, &t),
                "completeness": r.completeness.as_ref().map(fmt_q),
                "dual": r.dual.as_ref().map(dual_json),
            }));
            if let Some(d) = &r.dual {
                out = out.with("weightings", "pluri --weightings", weightings_json(&d.weightings));
            }
            Ok(out)
        }
        ReduceOp::Classify { t, formula: f, completeness: c } => {
            let t = load_template(t)?;
            let f = formula(f, &t)?;
            let c = completeness(&t, c.as_deref())?;
            let cl = match &c {
                Some(c) => classify_cf(&f, &t, c)?,
                None => classify(&f, &t)?,
            };
            Ok(Outcome::ok(json!({
                "yes": cl.yes,
                "no": cl.no,
                "weight": fmt_q(&f.weight()),
                "max_a": brute_force_max(&f, &t.a).render(),
                "max_b": brute_force_max(&f, &t.b).render(),
            })))
        }
        ReduceOp::ClassifyVmc { t, instance: p } => {
            let t = load_template(t)?;
            let inst = with_path(p, instance(p)?.to_vmc())?;
            let mut cache = MinionCache::new(&t.a, &t.b, *limits);
            let cl = inst.classify(&mut cache, t.kappa().ok())?;
            Ok(Outcome::ok(json!({ "yes": cl.yes, "no": cl.no })))
        }
    }
}

fn gadget_cmd(target: &str, k: usize, c: &Q, s: &Q, flip: bool, limits: &Limits) -> Result<Outcome> {
    let src = zoo::klin2(3, c.clone(), s.clone())?;
    let (arity, rows) = match target {
        "4lin2" => (4, vec![PadRow::Copy(0), PadRow::Copy(1), PadRow::Copy(2), PadRow::Const(0)]),
        _ => (5, vec![PadRow::Copy(0), PadRow::Copy(1), PadRow::Copy(2), PadRow::Copy(2), PadRow::Copy(2)]),
    };
    let tgt = zoo::klin2(arity, c.clone(), s.clone())?;
    let lifts: Vec<SymbolLift> = (0..2).map(|sym| SymbolLift { target_sym: sym, rows: rows.clone() }).collect();
    let mut cache = MinionCache::new(&tgt.a, &tgt.b, *limits);
    let xi = tabulate_hom(&mut cache, k, |f, sp| if flip { flip_if_one(f, sp) } else { f.clone() })?;
    let r = verify_gadget_hom(&xi, &src, &tgt, &lifts, k)?;
    Ok(Outcome::verdict(
        r.ok(),
        json!({
            "target": target,
            "k": k,
            "map": if flip { "flip" } else { "identity" },
            "ok": r.ok(),
            "pairs_checked": r.pairs_checked,
            "uncovered": r.uncovered.as_ref().map(|f| json!(f.table)),
            "mismatch": r.mismatch,
            "minor_failure": r.minor_failure.as_ref().map(|v| format!("{v:?}")),
        }),
    ))
}

fn ppdef_cmd(source: &str, target: &str, psi: &str, mode: PpModeArg, limits: &Limits) -> Result<Outcome> {
    let src = template_spec(source)?;
    let tgt = template_spec(target)?;
    let sym = tgt.sig().symbol_index(psi).ok_or_else(|| anyhow!("target has no symbol {psi:?}"))?;
    let mode = match mode {
        PpModeArg::Crisp => PpMode::Crisp,
        PpModeArg::Valued => PpMode::Valued,
    };
    let mut cache = MinionCache::new(&src.a, &src.b, *limits);
    Ok(match synthesize_pp_definition(sym, &src, &tgt, mode, &mut cache)? {
        PpSynthesis::Defined(d) => {
            let verified = verify_pp_definition(&d, &src, &tgt, mode)?;
            let iota: Vec<&str> = d.iota.iter().map(|&x| d.formula.vars[x].name.as_str()).collect();
            Outcome::ok(
                json!({ "definable": true, "verified": verified, "psi": psi, "iota": iota, "formula": formula_json(&d.formula, &src) }),
            )
        }
        PpSynthesis::NotDefinable(NonDefinability::Escapes(f)) => {
            Outcome::verdict(false, json!({ "definable": false, "reason": "escapes", "polymorphism": f.table }))
        }
        PpSynthesis::NotDefinable(NonDefinability::Dual(d)) => {
            let mut v = dual_json(&d);
            v["definable"] = json!(false);
            v["reason"] = json!("dual");
            Outcome::verdict(false, v)
        }
    })
}

fn hastad_cmd(d: usize, e: usize, delta: &Q, jobs: usize) -> Result<Outcome> {
    let cfg = HastadConfig::new(d, e, delta.clone())?;
    fourier::check_scan_size(&cfg)?;
    let dt = FunctionTable::new(d)?;
    let et = FunctionTable::new(e)?;
    let maps = cfg.maps();
    let chunk = maps.len().div_ceil(jobs.max(1)).max(1);
    let reports = std::thread::scope(|scope| {
        let handles: Vec<_> = maps
            .chunks(chunk)
            .map(|part| {
                scope.spawn(|| part.iter().map(|pi| fourier::verify_map(&cfg, pi, &dt, &et)).collect::<vpcsp_core::Result<Vec<_>>>())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect::<vpcsp_core::Result<Vec<_>>>()
    })?;
    let r = GlcReport {
        d,
        e,
        delta: delta.clone(),
        epsilon: cfg.epsilon(),
        maps: reports.into_iter().flatten().collect(),
        auxiliary_ok: fourier::auxiliary_bound(&cfg),
    };
    let ok = r.ok();
    let violations: Vec<Value> = r
        .maps
        .iter()
        .flat_map(|m| &m.violations)
        .take(10)
        .map(|v| json!({ "pi": v.pi, "f_d": v.f_d, "f_e": v.f_e, "gamma": fmt_q(&v.gamma), "rhs": fmt_q(&v.rhs) }))
        .collect();
    Ok(Outcome::verdict(
        ok,
        json!({
            "d": d,
            "e": e,
            "delta": fmt_q(delta),
            "epsilon": fmt_q(&r.epsilon),
            "c": fmt_q(&cfg.c()),
            "s": fmt_q(&cfg.s()),
            "maps": r.maps.iter().map(|m| json!({
                "pi": m.pi,
                "condition1": m.condition1.iter().map(fmt_q).collect::<Vec<_>>(),
                "pairs": m.pairs,
                "violations": m.violations.len(),
                "min_margin": fmt_q(&m.min_margin),
                "chain_failures": m.chain_failures,
            })).collect::<Vec<_>>(),
            "pairs": r.pairs(),
            "violations": r.violations(),
            "first_violations": violations,
            "chain_failures": r.chain_failures(),
            "auxiliary_ok": r.auxiliary_ok,
            "ok": ok,
        }),
    ))
}

fn expand_cmd(table: &str) -> Result<Outcome> {
    let values: Vec<i8> =
        table.split(',').map(|v| v.trim().parse::<i8>().map_err(|_| anyhow!("--table: {v:?} is not 1 or -1"))).collect::<Result<_>>()?;
    if !values.len().is_power_of_two() {
        bail!("--table needs 2^n values, got {}", values.len());
    }
    let f = PmFunction::new(values.len().trailing_zeros() as usize, values)?;
    let coeffs = |x: &fourier::FourierExpansion| -> Vec<Value> {
        x.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(i, c)| json!({ "set": (0..f.arity()).filter(|n| i >> n & 1 == 1).collect::<Vec<_>>(), "value": fmt_q(c) }))
            .collect()
    };
    let x = fourier::fourier_expand(&f)?;
    let mut result = json!({ "arity": f.arity(), "coefficients": coeffs(&x), "mass": fmt_q(&x.mass()) });
    if f.arity() > 0 {
        let p = fourier::fold(&f)?;
        result["folded"] = json!(p.table());
        result["folded_coefficients"] = json!(coeffs(&fourier::fourier_expand(&p)?));
        result["lambda"] = json!(fourier::lambda_dist(&f)?.iter().map(fmt_q).collect::<Vec<_>>());
    }
    Ok(Outcome::ok(result))
}
