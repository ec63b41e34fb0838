use rand::Rng;

use super::boolean::{
    compose, fold, fourier_expand, is_representative, lambda_from_expansion, noise_expectation, oddim, representative, FourierExpansion,
    PmFunction,
};
use crate::algebra::{all_maps, Constraint, FnSpace, NaryFunction, PayoffFormula, ValuedTemplate, Var};
use crate::error::{Error, Result};
use crate::num::{fmt_q, one, qi, zero, Ext, Q};
use crate::polymorphism::MinionHomTable;
use crate::prelude::*;
use crate::zoo;

/// Bound on `2^{|E| + 2|D|}`, the number of sampled triples behind `Φ_π`.
pub const PHI_GUARD: u64 = 1 << 22;
/// Bound on function pairs times maps in the exhaustive condition-2 scan.
pub const PAIR_GUARD: u128 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HastadConfig {
    pub d: usize,
    pub e: usize,
    pub delta: Q,
}

impl HastadConfig {
    pub fn new(d: usize, e: usize, delta: Q) -> Result<HastadConfig> {
        if d == 0 || e == 0 {
            return Err(Error::Config(String::from("D and E must be nonempty")));
        }
        if d > 5 || e > 5 {
            return Err(Error::Config(String::from("|D| and |E| are limited to 5")));
        }
        if delta <= zero() || delta > Q::new(1.into(), 4.into()) {
            return Err(Error::Config(format!("delta must lie in (0, 1/4], got {}", fmt_q(&delta))));
        }
        Ok(HastadConfig { d, e, delta })
    }

    pub fn c(&self) -> Q {
        one() - qi(2) * &self.delta
    }

    pub fn s(&self) -> Q {
        qi(2) * &self.delta
    }

    /// `ε = 16δ³`.
    pub fn epsilon(&self) -> Q {
        qi(16) * &self.delta * &self.delta * &self.delta
    }

    /// `γ(r) = 16δ²(r - δ)`.
    pub fn gamma(&self, r: &Q) -> Q {
        qi(16) * &self.delta * &self.delta * (r - &self.delta)
    }

    /// The `{1,-1}` presentation of 3LIN2(1 - δ, 1/2 + δ).
    pub fn template(&self) -> Result<ValuedTemplate> {
        zoo::klin2_pm(3, &self.delta)
    }

    pub fn maps(&self) -> Vec<Vec<usize>> {
        all_maps(self.d, self.e)
    }
}

fn sign_name(prefix: &str, a: u32, arity: usize) -> String {
    let mut s = String::from(prefix);
    s.push(':');
    for i in 0..arity {
        s.push(if a >> i & 1 == 1 { '-' } else { '+' });
    }
    s
}

/// Variable layout of `Φ_π`: representatives of `A^E`, then of `A^D`.
pub fn phi_variables(cfg: &HastadConfig) -> Vec<Var> {
    let mut vars = Vec::new();
    for a in (0..1u32 << cfg.e).filter(|&a| is_representative(a)) {
        vars.push(Var { name: sign_name("E", a, cfg.e), sort: 0 });
    }
    for b in (0..1u32 << cfg.d).filter(|&b| is_representative(b)) {
        vars.push(Var { name: sign_name("D", b, cfg.d), sort: 0 });
    }
    vars
}

fn e_var(a: u32) -> usize {
    (a >> 1) as usize
}

fn d_var(cfg: &HastadConfig, b: u32) -> usize {
    (1usize << (cfg.e - 1)) + (b >> 1) as usize
}

/// `Φ_π` as an exact normalized payoff formula, one constraint per distinct outcome.
pub fn build_phi_pi(cfg: &HastadConfig, pi: &[usize]) -> Result<PayoffFormula> {
    if pi.len() != cfg.d || pi.iter().any(|&p| p >= cfg.e) {
        return Err(Error::Contract(String::from("pi must map D into E")));
    }
    let triples = 1u64 << (cfg.e + 2 * cfg.d);
    if triples > PHI_GUARD {
        return Err(Error::ResourceLimit {
            what: String::from("constraints of Phi_pi"),
            needed: format!("{triples}"),
            limit: format!("{PHI_GUARD}"),
        });
    }
    let t = cfg.template()?;
    let uniform = qi(1i64 << (cfg.d + cfg.e));
    let noise: Vec<Q> = (0..=cfg.d)
        .map(|k| {
            let mut p = one();
            for _ in 0..k {
                p *= &cfg.delta;
            }
            for _ in k..cfg.d {
                p *= one() - &cfg.delta;
            }
            p / &uniform
        })
        .collect();
    let mut weights: BTreeMap<(usize, [usize; 3]), Q> = BTreeMap::new();
    for a in 0..1u32 << cfg.e {
        let api = compose(a, pi);
        for b in 0..1u32 << cfg.d {
            for nu in 0..1u32 << cfg.d {
                let third = api ^ b ^ nu;
                let flips = [!is_representative(a), !is_representative(b), !is_representative(third)].iter().filter(|&&x| x).count();
                let sym = flips % 2;
                let args =
                    [e_var(representative(a, cfg.e)), d_var(cfg, representative(b, cfg.d)), d_var(cfg, representative(third, cfg.d))];
                *weights.entry((sym, args)).or_insert_with(zero) += &noise[nu.count_ones() as usize];
            }
        }
    }
    let constraints = weights.into_iter().map(|((sym, args), weight)| Constraint { weight, sym, args: args.to_vec() }).collect();
    PayoffFormula::new(phi_variables(cfg), constraints, t.sig())
}

/// The assignment `(f_D, f_E)` restricted to representative variables.
pub fn phi_assignment(cfg: &HastadConfig, t: &ValuedTemplate, f_d: &PmFunction, f_e: &PmFunction) -> Result<Vec<usize>> {
    if f_d.arity() != cfg.d || f_e.arity() != cfg.e {
        return Err(Error::Contract(String::from("functions must have arities |D| and |E|")));
    }
    let elem = |v: i8| t.a.dom.at(0, usize::from(v == -1));
    let mut h = Vec::new();
    for a in (0..1u32 << cfg.e).filter(|&a| is_representative(a)) {
        h.push(elem(f_e.value(a)));
    }
    for b in (0..1u32 << cfg.d).filter(|&b| is_representative(b)) {
        h.push(elem(f_d.value(b)));
    }
    Ok(h)
}

/// `Φ_π^A(f_D, f_E)` by evaluating the materialized formula.
pub fn phi_direct(cfg: &HastadConfig, t: &ValuedTemplate, phi: &PayoffFormula, f_d: &PmFunction, f_e: &PmFunction) -> Result<Q> {
    match phi.evaluate(&t.a, &phi_assignment(cfg, t, f_d, f_e)?) {
        Ext::Fin(v) => Ok(v),
        Ext::NegInf => Err(Error::Contract(String::from("the template is finite-valued"))),
    }
}

fn closed_form(cfg: &HastadConfig, pi: &[usize], p: &FourierExpansion, q: &FourierExpansion) -> Q {
    let mut total = zero();
    for (k, pk) in p.coeffs.iter().enumerate() {
        if num_traits::Zero::is_zero(pk) {
            continue;
        }
        let qk = q.coeff(oddim(pi, k as u32));
        if num_traits::Zero::is_zero(qk) {
            continue;
        }
        total += pk * pk * qk * noise_expectation(&cfg.delta, (k as u32).count_ones() as usize);
    }
    total
}

/// `Σ_K p̂_K² q̂_{oddim(K)} (1 - 2δ)^{|K|}` with `p = ⌊f_D⌋`, `q = ⌊f_E⌋`.
pub fn phi_closed_form(cfg: &HastadConfig, pi: &[usize], f_d: &PmFunction, f_e: &PmFunction) -> Result<Q> {
    if f_d.arity() != cfg.d || f_e.arity() != cfg.e || pi.len() != cfg.d {
        return Err(Error::Contract(String::from("arities do not match the configuration")));
    }
    Ok(closed_form(cfg, pi, &fourier_expand(&fold(f_d)?)?, &fourier_expand(&fold(f_e)?)?))
}

/// Folded expansions and `Λ` for every function of one arity.
#[derive(Clone, Debug)]
pub struct FunctionTable {
    pub arity: usize,
    pub expansions: Vec<FourierExpansion>,
    pub lambdas: Vec<Vec<Q>>,
}

impl FunctionTable {
    pub fn new(arity: usize) -> Result<FunctionTable> {
        if arity > 4 {
            return Err(Error::ResourceLimit {
                what: String::from("Boolean functions to tabulate"),
                needed: format!("2^{}", 1u64 << arity),
                limit: String::from("2^16"),
            });
        }
        let count = 1u64 << (1u64 << arity);
        let mut expansions = Vec::new();
        let mut lambdas = Vec::new();
        for i in 0..count {
            let p = fourier_expand(&fold(&PmFunction::from_index(arity, i)?)?)?;
            lambdas.push(lambda_from_expansion(&p));
            expansions.push(p);
        }
        Ok(FunctionTable { arity, expansions, lambdas })
    }

    pub fn len(&self) -> usize {
        self.expansions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expansions.is_empty()
    }
}

/// A pair breaking condition 2, by function index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlcViolation {
    pub pi: Vec<usize>,
    pub f_d: u64,
    pub f_e: u64,
    pub gamma: Q,
    pub rhs: Q,
}

/// Outcome for one map `π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapReport {
    pub pi: Vec<usize>,
    /// `Φ_π^A(proj_d, proj_{π(d)})` per `d`.
    pub condition1: Vec<Q>,
    pub pairs: u64,
    pub violations: Vec<GlcViolation>,
    /// Smallest `E π(d, e) - γ(Φ)` over all pairs.
    pub min_margin: Q,
    /// Pairs where a link of the final chain fails.
    pub chain_failures: u64,
    pub weight: Q,
}

/// Checks both conditions for one `π` over all pairs of tabulated functions.
pub fn verify_map(cfg: &HastadConfig, pi: &[usize], dt: &FunctionTable, et: &FunctionTable) -> Result<MapReport> {
    let t = cfg.template()?;
    let phi = build_phi_pi(cfg, pi)?;
    let mut condition1 = Vec::new();
    for d in 0..cfg.d {
        let v = phi_direct(cfg, &t, &phi, &PmFunction::projection(cfg.d, d)?, &PmFunction::projection(cfg.e, pi[d])?)?;
        condition1.push(v);
    }
    let four_delta = qi(4) * &cfg.delta;
    let mut report = MapReport {
        pi: pi.to_vec(),
        condition1,
        pairs: 0,
        violations: Vec::new(),
        min_margin: zero(),
        chain_failures: 0,
        weight: phi.weight(),
    };
    let mut first = true;
    for (i, (p, lp)) in dt.expansions.iter().zip(&dt.lambdas).enumerate() {
        for (j, (q, lq)) in et.expansions.iter().zip(&et.lambdas).enumerate() {
            let value = closed_form(cfg, pi, p, q);
            let gamma = cfg.gamma(&value);
            let rhs: Q = (0..cfg.d).filter(|&d| !num_traits::Zero::is_zero(&lp[d])).map(|d| &lp[d] * &lq[pi[d]]).sum();
            let margin = &rhs - &gamma;
            if first || margin < report.min_margin {
                report.min_margin = margin.clone();
                first = false;
            }
            if margin < zero() {
                report.violations.push(GlcViolation {
                    pi: pi.to_vec(),
                    f_d: i as u64,
                    f_e: j as u64,
                    gamma: gamma.clone(),
                    rhs: rhs.clone(),
                });
            }
            // E π(d,e) >= Σ p̂²q̂²/|K| >= 4δΦ² >= γ(Φ); the middle link is the squared form.
            let mut lower = zero();
            for (k, pk) in p.coeffs.iter().enumerate().skip(1) {
                let qk = q.coeff(oddim(pi, k as u32));
                if !num_traits::Zero::is_zero(pk) && !num_traits::Zero::is_zero(qk) {
                    lower += pk * pk * qk * qk / qi(i64::from((k as u32).count_ones()));
                }
            }
            let square = &four_delta * &value * &value;
            if rhs < lower || lower < square || square < gamma {
                report.chain_failures += 1;
            }
            report.pairs += 1;
        }
    }
    Ok(report)
}

/// Aggregate over all maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlcReport {
    pub d: usize,
    pub e: usize,
    pub delta: Q,
    pub epsilon: Q,
    pub maps: Vec<MapReport>,
    /// `1/|K| >= 4δ(1 - 2δ)^{2|K|}` for `|K| = 1..=|D|`.
    pub auxiliary_ok: bool,
}

impl GlcReport {
    pub fn condition1_ok(&self, c: &Q) -> bool {
        self.maps.iter().all(|m| m.condition1.iter().all(|v| v >= c))
    }

    pub fn violations(&self) -> usize {
        self.maps.iter().map(|m| m.violations.len()).sum()
    }

    pub fn pairs(&self) -> u64 {
        self.maps.iter().map(|m| m.pairs).sum()
    }

    pub fn chain_failures(&self) -> u64 {
        self.maps.iter().map(|m| m.chain_failures).sum()
    }

    pub fn min_margin(&self) -> Option<&Q> {
        self.maps.iter().map(|m| &m.min_margin).min()
    }

    pub fn ok(&self) -> bool {
        let c = one() - qi(2) * &self.delta;
        self.condition1_ok(&c) && self.violations() == 0 && self.chain_failures() == 0 && self.auxiliary_ok
    }
}

/// Guard for the exhaustive scan.
pub fn check_scan_size(cfg: &HastadConfig) -> Result<()> {
    let fd = 1u128 << (1u128 << cfg.d).min(127);
    let fe = 1u128 << (1u128 << cfg.e).min(127);
    let maps = (cfg.e as u128).pow(cfg.d as u32);
    let needed = fd.saturating_mul(fe).saturating_mul(maps);
    if cfg.d > 4 || cfg.e > 4 || needed > PAIR_GUARD {
        return Err(Error::ResourceLimit {
            what: String::from("function pairs times maps"),
            needed: format!("{needed}"),
            limit: format!("{PAIR_GUARD}"),
        });
    }
    Ok(())
}

pub fn auxiliary_bound(cfg: &HastadConfig) -> bool {
    (1..=cfg.d).all(|k| {
        let n = noise_expectation(&cfg.delta, 2 * k);
        Q::new(1.into(), (k as i64).into()) >= qi(4) * &cfg.delta * n
    })
}

/// Both conditions for every `π: D → E` and every pair `(f_D, f_E)`.
pub fn verify_glc_conditions(cfg: &HastadConfig) -> Result<GlcReport> {
    check_scan_size(cfg)?;
    let dt = FunctionTable::new(cfg.d)?;
    let et = FunctionTable::new(cfg.e)?;
    let maps = cfg.maps().iter().map(|pi| verify_map(cfg, pi, &dt, &et)).collect::<Result<Vec<_>>>()?;
    Ok(GlcReport { d: cfg.d, e: cfg.e, delta: cfg.delta.clone(), epsilon: cfg.epsilon(), maps, auxiliary_ok: auxiliary_bound(cfg) })
}

/// Choices `λ_D: M^{(D)} → D` and `λ_E: M^{(E)} → E`, indexed by [`PmFunction::index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaChoice {
    pub d: Vec<usize>,
    pub e: Vec<usize>,
}

fn sample_index<R: Rng>(probs: &[Q], rng: &mut R) -> Result<usize> {
    let mut denom = num_bigint::BigInt::from(1);
    for p in probs {
        denom = num_integer::Integer::lcm(&denom, p.denom());
    }
    let scaled: Vec<u64> = probs
        .iter()
        .map(|p| {
            u64::try_from(p.numer() * (&denom / p.denom())).map_err(|_| Error::Contract(String::from("probability too fine to sample")))
        })
        .collect::<Result<_>>()?;
    let total: u64 = scaled.iter().sum();
    if total == 0 {
        return Err(Error::Contract(String::from("empty distribution")));
    }
    let mut x = rng.gen_range(0..total);
    for (i, &s) in scaled.iter().enumerate() {
        if x < s {
            return Ok(i);
        }
        x -= s;
    }
    unreachable!("x < total")
}

impl LambdaChoice {
    /// Samples `λ(f) ~ Λ(f)` independently for every `f`.
    pub fn sample<R: Rng>(cfg: &HastadConfig, rng: &mut R) -> Result<LambdaChoice> {
        let dt = FunctionTable::new(cfg.d)?;
        let et = FunctionTable::new(cfg.e)?;
        Ok(LambdaChoice {
            d: dt.lambdas.iter().map(|l| sample_index(l, rng)).collect::<Result<_>>()?,
            e: et.lambdas.iter().map(|l| sample_index(l, rng)).collect::<Result<_>>()?,
        })
    }
}

/// Layout of the label-cover minion: sort `D` then sort `E`.
pub fn glc_space(cfg: &HastadConfig, n: usize) -> Result<FnSpace> {
    FnSpace::from_sizes(vec![cfg.d, cfg.e], vec![cfg.d, cfg.e], n)
}

/// `ξ^{(N)}(f) = (d ↦ λ_D(f^{(d)}), e ↦ λ_E(f^{(e)}))` for all Boolean `f` of arity `1..=k`.
pub fn xi_from_lambda(cfg: &HastadConfig, lambda: &LambdaChoice, k: usize) -> Result<MinionHomTable> {
    if k > 3 {
        return Err(Error::ResourceLimit { what: String::from("xi table arity"), needed: format!("{k}"), limit: String::from("3") });
    }
    if lambda.d.len() != 1 << (1 << cfg.d) || lambda.e.len() != 1 << (1 << cfg.e) {
        return Err(Error::Contract(String::from("lambda tables do not cover every function")));
    }
    let mut levels = BTreeMap::new();
    for n in 1..=k {
        let space = glc_space(cfg, n)?;
        let d_tuples = all_maps(n, cfg.d);
        let e_tuples = all_maps(n, cfg.e);
        let mut level = BTreeMap::new();
        for idx in 0..1u64 << (1u64 << n) {
            let f = PmFunction::from_index(n, idx)?;
            let mut table = vec![0u32; space.cells];
            for (r, dt) in d_tuples.iter().enumerate() {
                table[space.cell(0, r)] = lambda.d[f.minor(dt, cfg.d)?.index() as usize] as u32;
            }
            for (r, et) in e_tuples.iter().enumerate() {
                table[space.cell(1, r)] = lambda.e[f.minor(et, cfg.e)?.index() as usize] as u32;
            }
            level.insert(f.to_nary(), NaryFunction { arity: n, table });
        }
        levels.insert(n, level);
    }
    Ok(MinionHomTable { k, levels })
}
