use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vpcsp_core::algebra::{all_maps, Domain};
use vpcsp_core::fourier::*;
use vpcsp_core::num::{q, qi, Q};
use vpcsp_core::polymorphism::{verify_minion_hom, MinionCache};
use vpcsp_core::valued::{payoff_points, polymorphism_slope, Weighting};
use vpcsp_core::{zoo, Error};

fn all_functions(n: usize) -> impl Iterator<Item = PmFunction> {
    (0..1u64 << (1u64 << n)).map(move |i| PmFunction::from_index(n, i).unwrap())
}

fn random_function(n: usize, rng: &mut ChaCha8Rng) -> PmFunction {
    PmFunction::new(n, (0..1 << n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect()).unwrap()
}

/// `⟨f, χ_I⟩` by direct summation.
fn inner(f: &PmFunction, set: u32) -> Q {
    let n = f.arity();
    let s: i64 = (0..1u32 << n).map(|a| i64::from(f.value(a)) * i64::from(chi_value(set, a))).sum();
    q(s, 1 << n)
}

/// Folding from the definition: negate the argument coordinatewise.
fn fold_oracle(f: &PmFunction) -> PmFunction {
    let n = f.arity();
    PmFunction::from_fn(n, |a| {
        let neg = a ^ ((1u32 << n) - 1);
        if a & 1 == 0 {
            f.value(a)
        } else {
            -f.value(neg)
        }
    })
    .unwrap()
}

fn cfg(d: usize, e: usize) -> HastadConfig {
    HastadConfig::new(d, e, q(1, 8)).unwrap()
}

#[test]
fn expansion_matches_inner_products() {
    for n in 0..=3 {
        for f in all_functions(n) {
            let x = fourier_expand(&f).unwrap();
            for set in 0..1u32 << n {
                assert_eq!(*x.coeff(set), inner(&f, set));
            }
            let back: Vec<Q> = f.table().iter().map(|&v| qi(i64::from(v))).collect();
            assert_eq!(x.reconstruct(), back);
        }
    }
}

#[test]
fn expansion_examples() {
    for set in 0..8 {
        let x = fourier_expand(&PmFunction::chi(3, set).unwrap()).unwrap();
        for i in 0..8 {
            assert_eq!(*x.coeff(i), qi(i64::from(i == set)));
        }
    }
    let one = fourier_expand(&PmFunction::constant(3, 1).unwrap()).unwrap();
    assert_eq!(*one.coeff(0), qi(1));
    let maj = PmFunction::from_fn(3, |a| if a.count_ones() >= 2 { -1 } else { 1 }).unwrap();
    let x = fourier_expand(&maj).unwrap();
    for set in 0..8u32 {
        let want = match set.count_ones() {
            1 => q(1, 2),
            3 => q(-1, 2),
            _ => qi(0),
        };
        assert_eq!(*x.coeff(set), want);
    }
    let big = PmFunction::constant(7, 1).unwrap();
    assert!(matches!(fourier_expand(&big), Err(Error::ResourceLimit { .. })));
    assert!(fourier_expand_bounded(&big, 7).is_ok());
}

#[test]
fn folding() {
    for n in 1..=3 {
        for f in all_functions(n) {
            let p = fold(&f).unwrap();
            assert_eq!(p, fold_oracle(&f));
            assert!(p.is_folded());
            assert_eq!(fold(&p).unwrap(), p);
            if f.is_folded() {
                assert_eq!(p, f);
            }
        }
        for i in 0..n {
            let pr = PmFunction::projection(n, i).unwrap();
            assert_eq!(fold(&pr).unwrap(), pr);
        }
        let c = fold(&PmFunction::constant(n, 1).unwrap()).unwrap();
        for a in 0..1u32 << n {
            assert_eq!(c.value(a), if is_representative(a) { 1 } else { -1 });
        }
    }
    assert!(fold(&PmFunction::constant(0, 1).unwrap()).is_err());
}

#[test]
fn lambda_examples() {
    for d in 0..3 {
        let l = lambda_dist(&PmFunction::projection(3, d).unwrap()).unwrap();
        assert_eq!(l, (0..3).map(|i| qi(i64::from(i == d))).collect::<Vec<_>>());
    }
    let parity = PmFunction::chi(3, 0b111).unwrap();
    assert_eq!(lambda_dist(&parity).unwrap(), vec![q(1, 3); 3]);
    for f in all_functions(3) {
        let l = lambda_dist(&f).unwrap();
        assert_eq!(l.iter().sum::<Q>(), qi(1));
        assert!(l.iter().all(|p| *p >= qi(0)));
    }
}

#[test]
fn oddim_examples() {
    assert_eq!(oddim(&[2, 0, 1], 0b011), 0b101);
    assert_eq!(oddim(&[0, 0, 0, 0], 0b0110), 0);
    assert_eq!(oddim(&[0, 0, 1], 0b111), 0b10);
}

fn check_facts(n: usize, f: &PmFunction, a: u32, b: u32, i: u32, j: u32) {
    let x = fourier_expand(f).unwrap();
    assert_eq!(x.mass(), qi(1), "F1");
    let p = fourier_expand(&fold(f).unwrap()).unwrap();
    if n > 0 {
        assert_eq!(*p.coeff(0), qi(0), "F2");
    }
    assert_eq!(chi_value(i, a ^ b), chi_value(i, a) * chi_value(i, b), "F3");
    assert_eq!(chi_value(i, a) * chi_value(j, a), chi_value(i ^ j, a), "F4");
}

fn f5(n: usize, i: u32) {
    let s: i64 = (0..1u32 << n).map(|a| i64::from(chi_value(i, a))).sum();
    assert_eq!(s, if i == 0 { 1 << n } else { 0 }, "F5");
}

fn f6(pi: &[usize], target: usize, i: u32, a: u32) {
    let api = pi.iter().enumerate().fold(0u32, |m, (k, &p)| m | ((a >> p & 1) << k));
    assert_eq!(chi_value(i, api), chi_value(oddim(pi, i), a), "F6");
    assert!(target > 0);
}

#[test]
fn facts_exhaustive() {
    for n in 0..=3usize {
        let sets = 1u32 << n;
        for f in all_functions(n) {
            let x = fourier_expand(&f).unwrap();
            assert_eq!(x.mass(), qi(1));
            if n > 0 {
                assert_eq!(*fourier_expand(&fold(&f).unwrap()).unwrap().coeff(0), qi(0));
            }
        }
        for i in 0..sets {
            f5(n, i);
            for j in 0..sets {
                for a in 0..sets {
                    assert_eq!(chi_value(i, a) * chi_value(j, a), chi_value(i ^ j, a));
                    for b in 0..sets {
                        assert_eq!(chi_value(i, a ^ b), chi_value(i, a) * chi_value(i, b));
                    }
                }
            }
        }
        for m in 1..=3usize {
            for pi in all_maps(n, m) {
                for i in 0..sets {
                    for a in 0..1u32 << m {
                        f6(&pi, m, i, a);
                    }
                }
            }
        }
    }
}

#[test]
fn facts_random_arity_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10_000 {
        let f = random_function(4, &mut rng);
        let (a, b, i, j) = (rng.gen_range(0..16), rng.gen_range(0..16), rng.gen_range(0..16), rng.gen_range(0..16));
        check_facts(4, &f, a, b, i, j);
        f5(4, i);
        let m = rng.gen_range(1..=4);
        let pi: Vec<usize> = (0..4).map(|_| rng.gen_range(0..m)).collect();
        f6(&pi, m, i, rng.gen_range(0..1u32 << m));
    }
}

#[test]
fn noise_expectation_by_enumeration() {
    let delta = q(1, 8);
    for k in 0..4usize {
        let mut total = qi(0);
        for nu in 0..1u32 << k {
            let neg = nu.count_ones() as usize;
            let mut p = qi(1);
            for _ in 0..neg {
                p *= &delta;
            }
            for _ in neg..k {
                p *= qi(1) - &delta;
            }
            total += p * qi(i64::from(chi_value(nu, nu)));
        }
        assert_eq!(total, noise_expectation(&delta, k));
    }
    assert_eq!(noise_expectation(&delta, 2), q(9, 16));
}

#[test]
fn config_guards() {
    assert!(matches!(HastadConfig::new(2, 1, q(3, 8)), Err(Error::Config(_))));
    assert!(matches!(HastadConfig::new(2, 1, qi(0)), Err(Error::Config(_))));
    assert!(HastadConfig::new(2, 1, q(1, 4)).is_ok());
    let c = cfg(3, 2);
    assert_eq!(c.gamma(&c.s()), c.epsilon());
    assert_eq!(c.epsilon(), q(1, 32));
}

#[test]
fn phi_weights_and_condition_one() {
    for (d, e) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let c = cfg(d, e);
        let t = c.template().unwrap();
        for pi in c.maps() {
            let phi = build_phi_pi(&c, &pi).unwrap();
            assert_eq!(phi.weight(), qi(1));
            for dd in 0..d {
                let v =
                    phi_direct(&c, &t, &phi, &PmFunction::projection(d, dd).unwrap(), &PmFunction::projection(e, pi[dd]).unwrap()).unwrap();
                assert_eq!(v, q(3, 4));
            }
        }
    }
}

/// Direct expectation over independently enumerated `(a, b, ν)` of `q(a) p(b) p((a∘π) b ν)`.
fn sampled_expectation(c: &HastadConfig, pi: &[usize], f_d: &PmFunction, f_e: &PmFunction) -> Q {
    let (p, qf) = (fold_oracle(f_d), fold_oracle(f_e));
    let mut total = qi(0);
    for a in 0..1u32 << c.e {
        let api = pi.iter().enumerate().fold(0u32, |m, (k, &j)| m | ((a >> j & 1) << k));
        for b in 0..1u32 << c.d {
            for nu in 0..1u32 << c.d {
                let neg = nu.count_ones() as usize;
                let mut w = q(1, 1 << (c.d + c.e));
                for _ in 0..neg {
                    w *= &c.delta;
                }
                for _ in neg..c.d {
                    w *= qi(1) - &c.delta;
                }
                let v = qf.value(a) * p.value(b) * p.value(api ^ b ^ nu);
                total += w * qi(i64::from(v));
            }
        }
    }
    total
}

#[test]
fn closed_form_matches_direct_small() {
    let c = cfg(2, 2);
    let t = c.template().unwrap();
    for pi in c.maps() {
        let phi = build_phi_pi(&c, &pi).unwrap();
        for f_d in all_functions(2) {
            for f_e in all_functions(2) {
                let closed = phi_closed_form(&c, &pi, &f_d, &f_e).unwrap();
                assert_eq!(closed, phi_direct(&c, &t, &phi, &f_d, &f_e).unwrap());
                assert_eq!(closed, sampled_expectation(&c, &pi, &f_d, &f_e));
            }
        }
    }
    let c = cfg(3, 2);
    let pi = [0, 1, 1];
    let proj = phi_closed_form(&c, &pi, &PmFunction::projection(3, 2).unwrap(), &PmFunction::projection(2, 1).unwrap()).unwrap();
    assert_eq!(proj, c.c());
    let konst = PmFunction::constant(2, 1).unwrap();
    let phi = build_phi_pi(&c, &pi).unwrap();
    let f_d = PmFunction::from_index(3, 0b1001_0110).unwrap();
    assert_eq!(phi_closed_form(&c, &pi, &f_d, &konst).unwrap(), phi_direct(&c, &c.template().unwrap(), &phi, &f_d, &konst).unwrap());
}

#[test]
fn glc_small_sizes_pass() {
    let r = verify_glc_conditions(&cfg(2, 1)).unwrap();
    assert!(r.ok(), "{r:?}");
    assert_eq!(r.pairs(), 16 * 4);
    assert!(r.auxiliary_ok);
    let r = verify_glc_conditions(&HastadConfig::new(2, 2, q(1, 4)).unwrap()).unwrap();
    assert!(r.ok());
    assert!(matches!(verify_glc_conditions(&cfg(5, 5)), Err(Error::ResourceLimit { .. })));
}

fn domains(c: &HastadConfig) -> (Domain, Domain) {
    let pm = Domain::single(&["1", "-1"]);
    let glc = zoo::label_cover(c.d, c.e, false, c.epsilon()).unwrap().a.dom;
    (pm, glc)
}

#[test]
fn xi_maps_projections_to_projections() {
    let c = cfg(2, 2);
    let lambda = LambdaChoice {
        d: (0..16u64).map(|i| (0..2).find(|&d| PmFunction::projection(2, d).unwrap().index() == i).unwrap_or(0)).collect(),
        e: (0..16u64).map(|i| (0..2).find(|&d| PmFunction::projection(2, d).unwrap().index() == i).unwrap_or(1)).collect(),
    };
    let xi = xi_from_lambda(&c, &lambda, 3).unwrap();
    for n in 1..=3 {
        let space = glc_space(&c, n).unwrap();
        for i in 0..n {
            let f = PmFunction::projection(n, i).unwrap().to_nary();
            assert_eq!(*xi.get(&f).unwrap(), space.projection(i).unwrap());
        }
    }
}

#[test]
fn sampled_xi_preserves_minors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (d, e) in [(2, 1), (2, 2), (3, 2)] {
        let c = cfg(d, e);
        let (pm, glc) = domains(&c);
        for _ in 0..3 {
            let lambda = LambdaChoice::sample(&c, &mut rng).unwrap();
            let xi = xi_from_lambda(&c, &lambda, 2).unwrap();
            assert_eq!(verify_minion_hom(&xi, (&pm, &pm), (&glc, &glc)).unwrap(), None);
        }
    }
}

#[test]
fn xi_is_local_in_lambda() {
    let c = cfg(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = LambdaChoice::sample(&c, &mut rng).unwrap();
    let g = 6usize;
    let mut b = a.clone();
    b.d[g] = 1 - b.d[g];
    let (xa, xb) = (xi_from_lambda(&c, &a, 2).unwrap(), xi_from_lambda(&c, &b, 2).unwrap());
    for n in 1..=2 {
        let space = glc_space(&c, n).unwrap();
        for (f, img) in &xa.levels[&n] {
            let other = &xb.levels[&n][f];
            let pf = PmFunction::from_nary(f).unwrap();
            for (r, dt) in all_maps(n, 2).iter().enumerate() {
                let cell = space.cell(0, r);
                let hits = pf.minor(dt, 2).unwrap().index() == g as u64;
                assert_eq!(img.table[cell] != other.table[cell], hits);
            }
            for r in 0..space.sort_cells(1) {
                let cell = space.cell(1, r);
                assert_eq!(img.table[cell], other.table[cell]);
            }
        }
    }
}

/// Polymorphisms of the rescaled template at arities 1 and 2, from a small grid of weightings.
fn grid_polymorphisms(c: &HastadConfig) -> Vec<Weighting> {
    let t = c.template().unwrap();
    let mut cache = MinionCache::new(&t.a, &t.b, Default::default());
    let mut out = Vec::new();
    for n in 1..=2usize {
        let funcs: Vec<_> = all_functions(n).map(|f| f.to_nary()).collect();
        let inputs: Vec<Vec<Q>> =
            if n == 1 { vec![vec![qi(1)]] } else { vec![vec![qi(1), qi(0)], vec![q(1, 2), q(1, 2)], vec![qi(0), qi(1)]] };
        let mut outputs = Vec::new();
        for (i, f) in funcs.iter().enumerate() {
            outputs.push(vec![(f.clone(), qi(1))]);
            for g in &funcs[i + 1..] {
                outputs.push(vec![(f.clone(), q(1, 2)), (g.clone(), q(1, 2))]);
            }
        }
        for input in &inputs {
            for o in &outputs {
                let w = Weighting::new(input.clone(), o.iter().cloned().collect()).unwrap();
                let pts = payoff_points(&t, &mut cache, &w).unwrap();
                if polymorphism_slope(&pts, &c.c(), &c.s()).is_some() {
                    out.push(w);
                }
            }
        }
    }
    out
}

#[test]
fn simplified_homomorphism_spot_checks() {
    let c = cfg(2, 2);
    let polys = grid_polymorphisms(&c);
    assert!(polys.iter().any(|w| w.arity == 2));
    let eps = c.epsilon();
    for w in &polys {
        let n = w.arity;
        for pi in c.maps() {
            for dt in all_maps(n, c.d) {
                for et in all_maps(n, c.e) {
                    let consistent = (0..n).all(|i| w.input[i] == qi(0) || pi[dt[i]] == et[i]);
                    if !consistent {
                        continue;
                    }
                    let mut value = qi(0);
                    for (f, p) in &w.output {
                        let pf = PmFunction::from_nary(f).unwrap();
                        let ld = lambda_dist(&pf.minor(&dt, c.d).unwrap()).unwrap();
                        let le = lambda_dist(&pf.minor(&et, c.e).unwrap()).unwrap();
                        let hit: Q = (0..c.d).map(|x| &ld[x] * &le[pi[x]]).sum();
                        value += p * hit;
                    }
                    assert!(value >= eps, "n = {n}, pi = {pi:?}");
                }
            }
        }
    }
}
