//! The twelve acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach stdout:
//! `cargo test -p vpcsp-core --test acceptance`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;
use vpcsp_core::algebra::{for_each_tuple, FnSpace, NaryFunction, ValuedStructure, ValuedTemplate};
use vpcsp_core::canonical::{
    assignment_function, crisp_canonical_formula, synthesize, verify_canonical, Beta, CanonicalRequest, Family, Mode, Outcome,
};
use vpcsp_core::fourier::*;
use vpcsp_core::lp::{fm_feasible, solve, verify, LpResult, LpSystem};
use vpcsp_core::num::{fmt_q, q, qi};
use vpcsp_core::polymorphism::{enumerate_polymorphisms, MinionCache, MinionHomTable};
use vpcsp_core::reductions::*;
use vpcsp_core::search::{brute_force_max, classify, classify_cf};
use vpcsp_core::valued::{
    check_plurimorphism, check_template, payoff_points, sampled_mixture_violation, Point, TemplateVerdict, Weighting,
};
use vpcsp_core::{corpus, zoo, Limits};

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn e<E: std::fmt::Debug>(x: E) -> String {
    format!("{x:?}")
}

fn cfg(d: usize, e: usize) -> HastadConfig {
    HastadConfig::new(d, e, q(1, 8)).unwrap()
}

fn c1_condition_one() -> Verdict {
    let mut checked = 0;
    for d in [2, 3] {
        for en in [1, 2] {
            let c = cfg(d, en);
            let t = c.template().map_err(e)?;
            for pi in c.maps() {
                let phi = build_phi_pi(&c, &pi).map_err(e)?;
                for dd in 0..d {
                    let fd = PmFunction::projection(d, dd).map_err(e)?;
                    let fe = PmFunction::projection(en, pi[dd]).map_err(e)?;
                    let v = phi_direct(&c, &t, &phi, &fd, &fe).map_err(e)?;
                    ensure!(v == q(3, 4), "|D|={d} |E|={en} pi={pi:?} d={dd}: {v}");
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (pi, d) cases equal 3/4"))
}

fn c2_condition_two() -> Verdict {
    let r = verify_glc_conditions(&cfg(3, 2)).map_err(e)?;
    ensure!(r.epsilon == q(1, 32), "epsilon {}", r.epsilon);
    ensure!(r.maps.len() == 8, "{} maps", r.maps.len());
    ensure!(r.pairs() == 8 * 256 * 16, "{} pairs", r.pairs());
    ensure!(r.violations() == 0, "{} violations, first {:?}", r.violations(), r.maps.iter().flat_map(|m| &m.violations).next());
    ensure!(r.ok(), "chain failures {}, auxiliary {}", r.chain_failures(), r.auxiliary_ok);
    Ok(format!("{} pairs, 0 violators, min margin {}", r.pairs(), r.min_margin().map(fmt_q).unwrap_or_default()))
}

fn mask_compose(a: u32, pi: &[usize]) -> u32 {
    pi.iter().enumerate().fold(0, |m, (k, &p)| m | ((a >> p & 1) << k))
}

fn facts_for(f: &PmFunction) -> Result<(), String> {
    let n = f.arity();
    let x = fourier_expand(f).map_err(e)?;
    for set in 0..1u32 << n {
        let direct: i64 = (0..1u32 << n).map(|a| i64::from(f.value(a)) * i64::from(chi_value(set, a))).sum();
        ensure!(*x.coeff(set) == q(direct, 1 << n), "coefficient mismatch");
    }
    ensure!(x.mass() == qi(1), "F1 fails for {:?}", f.table());
    if n > 0 {
        let p = fold(f).map_err(e)?;
        ensure!(*fourier_expand(&p).map_err(e)?.coeff(0) == qi(0), "F2 fails for {:?}", f.table());
    }
    Ok(())
}

fn chi_facts(n: usize, i: u32, j: u32, a: u32, b: u32) -> Result<(), String> {
    ensure!(chi_value(i, a ^ b) == chi_value(i, a) * chi_value(i, b), "F3 at {i} {a} {b}");
    ensure!(chi_value(i, a) * chi_value(j, a) == chi_value(i ^ j, a), "F4 at {i} {j} {a}");
    let mean: i64 = (0..1u32 << n).map(|x| i64::from(chi_value(i, x))).sum();
    ensure!(mean == if i == 0 { 1 << n } else { 0 }, "F5 at {i}");
    Ok(())
}

fn f6(pi: &[usize], i: u32, a: u32) -> Result<(), String> {
    ensure!(chi_value(i, mask_compose(a, pi)) == chi_value(oddim(pi, i), a), "F6 at {pi:?} {i} {a}");
    Ok(())
}

fn c3_fourier_facts() -> Verdict {
    let mut functions = 0u64;
    for n in 0..=3usize {
        for idx in 0..1u64 << (1u64 << n) {
            facts_for(&PmFunction::from_index(n, idx).map_err(e)?)?;
            functions += 1;
        }
        let sets = 1u32 << n;
        for i in 0..sets {
            for j in 0..sets {
                for a in 0..sets {
                    for b in 0..sets {
                        chi_facts(n, i, j, a, b)?;
                    }
                }
            }
        }
        for m in 1..=3 {
            for pi in vpcsp_core::algebra::all_maps(n, m) {
                for i in 0..sets {
                    for a in 0..1u32 << m {
                        f6(&pi, i, a)?;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let f = PmFunction::new(4, (0..16).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect()).map_err(e)?;
        facts_for(&f)?;
        let (i, j, a, b) = (rng.gen_range(0..16), rng.gen_range(0..16), rng.gen_range(0..16), rng.gen_range(0..16));
        chi_facts(4, i, j, a, b)?;
        let m = rng.gen_range(1..=4);
        let pi: Vec<usize> = (0..4).map(|_| rng.gen_range(0..m)).collect();
        f6(&pi, i, rng.gen_range(0..1u32 << m))?;
    }
    Ok(format!("{functions} functions at |N| <= 3, 10000 random at |N| = 4"))
}

fn c4_closed_form() -> Verdict {
    let c = cfg(3, 2);
    let t = c.template().map_err(e)?;
    let dfs: Vec<PmFunction> = (0..256).map(|i| PmFunction::from_index(3, i).unwrap()).collect();
    let efs: Vec<PmFunction> = (0..16).map(|i| PmFunction::from_index(2, i).unwrap()).collect();
    let mut n = 0;
    for pi in c.maps() {
        let phi = build_phi_pi(&c, &pi).map_err(e)?;
        for fd in &dfs {
            for fe in &efs {
                let closed = phi_closed_form(&c, &pi, fd, fe).map_err(e)?;
                let direct = phi_direct(&c, &t, &phi, fd, fe).map_err(e)?;
                ensure!(closed == direct, "pi={pi:?} f_D={} f_E={}: {closed} vs {direct}", fd.index(), fe.index());
                n += 1;
            }
        }
    }
    Ok(format!("{n} pairs agree"))
}

/// Polymorphism by definition: apply `f` to every choice of one feasible tuple per coordinate.
fn brute_polymorphism(a: &ValuedStructure, b: &ValuedStructure, f: &NaryFunction) -> bool {
    for sym in 0..a.num_symbols() {
        let tuples = a.feasible_tuples(sym);
        let arity = tuples.first().map_or(0, Vec::len);
        let mut ok = true;
        for_each_tuple(&vec![tuples.len(); f.arity], |pick| {
            if !ok {
                return;
            }
            let image: Vec<usize> = (0..arity)
                .map(|z| {
                    let rank = pick.iter().rev().fold(0usize, |r, &p| r * 2 + tuples[p][z]);
                    f.table[rank] as usize
                })
                .collect();
            ok = b.value_elems(sym, &image).is_finite();
        });
        if !ok {
            return false;
        }
    }
    true
}

fn c5_polymorphism_oracle() -> Verdict {
    let t = zoo::klin2_crisp(3, qi(0)).map_err(e)?;
    let lvl = enumerate_polymorphisms(&t.a, &t.b, 3, &Limits::default()).map_err(e)?;
    let brute: Vec<NaryFunction> = (0..256u32)
        .map(|i| NaryFunction { arity: 3, table: (0..8).map(|a| i >> a & 1).collect() })
        .filter(|f| brute_polymorphism(&t.a, &t.b, f))
        .collect();
    let parities: Vec<NaryFunction> = [0b001u32, 0b010, 0b100, 0b111]
        .iter()
        .map(|&set| NaryFunction { arity: 3, table: (0..8u32).map(|a| (a & set).count_ones() % 2).collect() })
        .collect();
    let mut got = lvl.functions.clone();
    got.sort();
    let mut want = parities.clone();
    want.sort();
    let mut brute_sorted = brute.clone();
    brute_sorted.sort();
    ensure!(got == want, "enumerated {got:?}");
    ensure!(brute_sorted == want, "brute force {brute_sorted:?}");
    Ok(String::from("4 odd-subset parities, brute force agrees"))
}

fn canonical_law(t: &ValuedTemplate) -> Result<usize, String> {
    let mut cache = MinionCache::new(&t.a, &t.b, Limits::default());
    let mat = cache.mat(1).map_err(e)?;
    let space = FnSpace::new(&t.a.dom, &t.b.dom, 1).map_err(e)?;
    let pol = enumerate_polymorphisms(&t.a, &t.b, 1, &Limits::default()).map_err(e)?;
    let phi = crisp_canonical_formula(t, &mat).map_err(e)?;
    let mut bad = None;
    let mut count = 0;
    for_each_tuple(&vec![t.b.dom.len(); phi.vars.len()], |h| {
        let f = assignment_function(&t.b.dom, &space, h);
        let feasible = phi.evaluate(&t.b, h).is_finite();
        if feasible {
            count += 1;
        }
        if feasible != pol.contains(&f) && bad.is_none() {
            bad = Some(f);
        }
    });
    match bad {
        Some(f) => Err(format!("disagreement at {f:?}")),
        None if count == pol.len() => Ok(count),
        None => Err(format!("{count} feasible assignments, {} polymorphisms", pol.len())),
    }
}

fn c6_canonical_law() -> Verdict {
    let lin = canonical_law(&zoo::klin2_crisp(3, qi(0)).map_err(e)?)?;
    let k3 = canonical_law(&zoo::clique(3).map_err(e)?)?;
    Ok(format!("3LIN2: {lin} unary polymorphisms, K3: {k3}"))
}

fn random_system(rng: &mut ChaCha8Rng) -> LpSystem {
    let (rows, cols) = (rng.gen_range(1..=8), rng.gen_range(1..=4));
    let mut s = LpSystem::new((0..cols).map(|j| format!("y{j}")).collect());
    for i in 0..rows {
        let row = (0..cols).map(|_| q(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
        s.push_row(format!("r{i}"), row, qi(rng.gen_range(-5..=5)));
    }
    s
}

fn c7_lp_certificates() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut feasible, mut infeasible) = (0, 0);
    for k in 0..10_000 {
        let s = random_system(&mut rng);
        let r = solve(&s);
        ensure!(verify(&s, &r), "system {k}: answer does not verify");
        let oracle = fm_feasible(&s).map_err(e)?;
        ensure!(r.is_feasible() == oracle, "system {k}: simplex {} vs elimination {oracle}", r.is_feasible());
        match r {
            LpResult::Feasible { .. } => feasible += 1,
            LpResult::Infeasible { .. } => infeasible += 1,
        }
    }
    Ok(format!("{feasible} feasible, {infeasible} infeasible, all certificates verify"))
}

fn random_weighting(cache: &mut MinionCache, rng: &mut ChaCha8Rng) -> Result<Weighting, String> {
    let n = rng.gen_range(1..=2);
    let level = cache.level(n).map_err(e)?;
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    let total: i64 = raw.iter().sum();
    let input = if total == 0 { (0..n).map(|i| qi(i64::from(i == 0))).collect() } else { raw.iter().map(|&r| q(r, total)).collect() };
    let k = rng.gen_range(1..=3.min(level.len()));
    let mut picks: BTreeMap<NaryFunction, i64> = BTreeMap::new();
    for _ in 0..k {
        *picks.entry(level.functions[rng.gen_range(0..level.len())].clone()).or_default() += rng.gen_range(1..=3);
    }
    let total: i64 = picks.values().sum();
    Weighting::new(input, picks.into_iter().map(|(f, w)| (f, q(w, total))).collect()).map_err(e)
}

fn c8_plurimorphisms() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cs = [q(1, 2), q(3, 4), qi(1)];
    let ss = [q(1, 4), q(1, 2), q(3, 4), qi(1)];
    let mut templates = Vec::new();
    for c in &cs {
        for s in &ss {
            templates.push(zoo::klin2(3, c.clone(), s.clone()).map_err(e)?);
        }
    }
    templates.push(zoo::independent_set(q(1, 2)).map_err(e)?);
    templates.push(zoo::vertex_cover(qi(1)).map_err(e)?);
    let mut caches: Vec<MinionCache> = templates.iter().map(|t| MinionCache::new(&t.a, &t.b, Limits::default())).collect();
    let (mut yes, mut no) = (0, 0);
    for fam in 0..1000 {
        let ti = rng.gen_range(0..templates.len());
        let t = &templates[ti];
        let (c, s) = t.cs().map_err(e)?;
        let members = rng.gen_range(1..=3);
        let mut points = Vec::new();
        for m in 0..members {
            let w = random_weighting(&mut caches[ti], &mut rng)?;
            for (x, y) in payoff_points(t, &mut caches[ti], &w).map_err(e)? {
                points.push(Point { member: m, x, y });
            }
        }
        let r = check_plurimorphism(&points, members, c, s);
        let a = r.is_plurimorphism();
        ensure!(a == r.pairwise, "family {fam}: slope {a} vs all-pairs {}", r.pairwise);
        ensure!(a == r.segments_avoid, "family {fam}: slope {a} vs segment test {}", r.segments_avoid);
        if let Some(m) = &r.witness {
            ensure!(m.violates(c, s), "family {fam}: witness mixture misses the region");
        }
        let sampled = sampled_mixture_violation(&points, c, s, 1000, &mut rng).map_err(e)?;
        if let Some(m) = sampled {
            ensure!(!a, "family {fam}: sampled mixture {m:?} lands in the region of a plurimorphism");
            ensure!(m.violates(c, s), "family {fam}: bogus sampled violation");
        }
        if a {
            yes += 1;
        } else {
            no += 1;
        }
    }
    ensure!(yes > 0 && no > 0, "degenerate sample: {yes} plurimorphisms, {no} not");
    Ok(format!("{yes} plurimorphisms, {no} non-plurimorphisms, tests consistent"))
}

fn c9_round_trips() -> Verdict {
    let t = zoo::klin2_crisp(3, qi(0)).map_err(e)?;
    let formulas = corpus::formula_corpus(t.sig(), 3, 4).map_err(e)?;
    let mut cache = MinionCache::new(&t.a, &t.b, Limits::default());
    let mut memo = SynthesisMemo::default();
    let (mut yes, mut no) = (0, 0);
    for (i, f) in formulas.iter().enumerate() {
        let before = classify(f, &t).map_err(e)?;
        yes += usize::from(before.yes);
        no += usize::from(before.no);
        let (inst, _) = pcsp_to_vmc(f, &t, 4, &mut cache, None).map_err(e)?;
        let r = vmc_to_pcsp(&inst, &t, &mut cache, None, &mut memo).map_err(e)?;
        let after = classify(&r.formula, &t).map_err(e)?;
        ensure!(after == before, "VMC route, formula {i}: {before:?} became {after:?}");
        let crisp = classify_crisp(f, &t);
        let mc = pcsp_to_mc(f, &t, 4).map_err(e)?;
        let psi = mc_to_pcsp(&mc, &t, &mut cache).map_err(e)?;
        let back = classify_crisp(&psi.formula, &t);
        ensure!(back == crisp, "MC route, formula {i}: {crisp:?} became {back:?}");
    }
    Ok(format!("{} formulas ({yes} yes, {no} no), both routes preserve classification", formulas.len()))
}

fn valid(t: &ValuedTemplate) -> Result<bool, String> {
    Ok(matches!(check_template(t, &Limits::default()).map_err(e)?, TemplateVerdict::Valid { .. }))
}

fn c10_template_checker() -> Verdict {
    for delta in [q(1, 8), q(1, 4)] {
        let t = zoo::klin2(3, qi(1) - &delta, q(1, 2) + &delta).map_err(e)?;
        ensure!(valid(&t)?, "3LIN2(1-d, 1/2+d) rejected at d = {delta}");
    }
    let bad = zoo::klin2(3, q(1, 2), q(3, 4)).map_err(e)?;
    let formula = match check_template(&bad, &Limits::default()).map_err(e)? {
        TemplateVerdict::Invalid { formula } => formula,
        v => return Err(format!("3LIN2(1/2, 3/4) accepted: {v:?}")),
    };
    let w = formula.weight();
    ensure!(brute_force_max(&formula, &bad.a).ge_q(&(q(1, 2) * &w)), "counter-formula is not a yes-instance");
    ensure!(brute_force_max(&formula, &bad.b).lt_q(&(q(3, 4) * &w)), "counter-formula is not a no-instance");
    ensure!(valid(&zoo::vertex_cover(qi(1)).map_err(e)?)?, "vertex cover rejected");
    ensure!(valid(&zoo::independent_set(q(1, 2)).map_err(e)?)?, "independent set rejected");
    Ok(format!("counter-formula with {} constraints confirmed by brute force", formula.constraints.len()))
}

fn lin(k: usize) -> ValuedTemplate {
    zoo::klin2(k, q(3, 4), q(1, 2)).unwrap()
}

fn lifts(rows: &[PadRow]) -> Vec<SymbolLift> {
    (0..2).map(|s| SymbolLift { target_sym: s, rows: rows.to_vec() }).collect()
}

fn hom_table(t: &ValuedTemplate, k: usize, flip: bool) -> Result<MinionHomTable, String> {
    let mut cache = MinionCache::new(&t.a, &t.b, Limits::default());
    tabulate_hom(&mut cache, k, |f, sp| if flip { flip_if_one(f, sp) } else { f.clone() }).map_err(e)
}

fn c11_gadgets() -> Verdict {
    let (src, four, five) = (lin(3), lin(4), lin(5));
    let four_rows = lifts(&[PadRow::Copy(0), PadRow::Copy(1), PadRow::Copy(2), PadRow::Const(0)]);
    let five_rows = lifts(&[PadRow::Copy(0), PadRow::Copy(1), PadRow::Copy(2), PadRow::Copy(2), PadRow::Copy(2)]);
    let xi = hom_table(&four, 3, true)?;
    let r = verify_gadget_hom(&xi, &src, &four, &four_rows, 3).map_err(e)?;
    ensure!(r.ok(), "4LIN2 map rejected: {r:?}");
    let id = hom_table(&five, 3, false)?;
    let r5 = verify_gadget_hom(&id, &src, &five, &five_rows, 3).map_err(e)?;
    ensure!(r5.ok(), "5LIN2 identity rejected: {r5:?}");
    let plain = verify_gadget_hom(&hom_table(&four, 3, false)?, &src, &four, &four_rows, 3).map_err(e)?;
    ensure!(!plain.ok(), "the unflipped 4LIN2 map was accepted");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut mutations = 0;
    for (n, level) in &xi.levels {
        let keys: Vec<NaryFunction> = level.keys().cloned().collect();
        for _ in 0..8 {
            let f = &keys[rng.gen_range(0..keys.len())];
            let mut bad = xi.clone();
            let g = bad.levels.get_mut(n).unwrap().get_mut(f).unwrap();
            let cell = rng.gen_range(0..g.table.len());
            g.table[cell] ^= 1;
            let rb = verify_gadget_hom(&bad, &src, &four, &four_rows, 3).map_err(e)?;
            ensure!(!rb.ok(), "mutation at arity {n} of {f:?} went unnoticed");
            mutations += 1;
        }
    }
    Ok(format!("{} pairs checked, {mutations} mutations detected", r.pairs_checked))
}

fn c12_constant_factor() -> Verdict {
    let t = zoo::with_kappa(zoo::klin2(3, qi(1), qi(1)).map_err(e)?, qi(1)).map_err(e)?;
    let mut cache = MinionCache::new(&t.a, &t.b, Limits::default());
    let mut outcomes = Vec::new();
    for beta in [qi(-1), qi(1)] {
        let req = CanonicalRequest {
            template: &t,
            mode: Mode::ConstantFactor,
            families: vec![Family { arity: 1, alpha: vec![qi(0)], beta: Beta::constant(beta.clone()) }],
        };
        let res = synthesize(&req, &mut cache).map_err(e)?;
        ensure!(verify_canonical(&req, &res, &mut cache).map_err(e)?, "beta = {beta}: result does not verify");
        match (&res.outcome, beta == qi(-1)) {
            (Outcome::Dual(d), true) => {
                let w = &d.weightings[0];
                ensure!(w.expect_out(|_| qi(-1)) < &d.kappa * w.expect_in(&[qi(0)]), "dual witness inequality fails");
                outcomes.push("dual");
            }
            (Outcome::Formulas(_), false) => outcomes.push("formulas"),
            (o, _) => return Err(format!("beta = {beta}: unexpected outcome {o:?}")),
        }
    }
    let t = zoo::with_kappa(zoo::klin2_crisp(3, qi(1)).map_err(e)?, qi(1)).map_err(e)?;
    let formulas = corpus::formula_corpus(t.sig(), 3, 4).map_err(e)?;
    let mut cache = MinionCache::new(&t.a, &t.b, Limits::default());
    let mut memo = SynthesisMemo::default();
    for (i, f) in formulas.iter().enumerate() {
        let c = f.weight();
        let before = classify_cf(f, &t, &c).map_err(e)?;
        let (inst, _) = pcsp_to_vmc(f, &t, 4, &mut cache, Some(c)).map_err(e)?;
        let r = vmc_to_pcsp(&inst, &t, &mut cache, None, &mut memo).map_err(e)?;
        let c2 = r.completeness.as_ref().ok_or("no completeness on the reduced instance")?;
        let after = classify_cf(&r.formula, &t, c2).map_err(e)?;
        ensure!(after == before, "formula {i}: {before:?} became {after:?}");
    }
    Ok(format!("{} / {}; {} formulas round-trip", outcomes[0], outcomes[1], formulas.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Verdict)> = vec![
        ("Hastad condition 1 exact", c1_condition_one),
        ("Hastad condition 2 exhaustive", c2_condition_two),
        ("Fourier facts F1-F6", c3_fourier_facts),
        ("closed form vs direct", c4_closed_form),
        ("polymorphism oracle", c5_polymorphism_oracle),
        ("canonical formula law", c6_canonical_law),
        ("LP certificates", c7_lp_certificates),
        ("plurimorphism equivalence", c8_plurimorphisms),
        ("reduction soundness", c9_round_trips),
        ("template checker", c10_template_checker),
        ("gadget verification", c11_gadgets),
        ("constant-factor templates", c12_constant_factor),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let handles: Vec<_> = criteria
        .into_iter()
        .enumerate()
        .filter(|(i, _)| filter.is_empty() || filter.contains(&(i + 1)))
        .map(|(i, (name, f))| {
            let h = std::thread::spawn(move || {
                let t0 = Instant::now();
                let r = f();
                (r, t0.elapsed())
            });
            (i + 1, name, h)
        })
        .collect();
    let mut failed = 0;
    for (i, name, h) in handles {
        let (verdict, detail) = match h.join() {
            Ok((Ok(d), t)) => ("PASS", format!("{d} [{:.1}s]", t.as_secs_f64())),
            Ok((Err(d), t)) => ("FAIL", format!("{d} [{:.1}s]", t.as_secs_f64())),
            Err(p) => (
                "FAIL",
                format!(
                    "panic: {}",
                    p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
                ),
            ),
        };
        failed += usize::from(verdict == "FAIL");
        println!("criterion {i:>2} {verdict}: {name}: {detail}");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
