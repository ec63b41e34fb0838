use vpcsp_core::algebra::{for_each_tuple, PayoffFormula, ValuedTemplate};
use vpcsp_core::corpus::formula_corpus;
use vpcsp_core::num::{q, Ext};
use vpcsp_core::polymorphism::{MinionCache, MinionHomTable};
use vpcsp_core::reductions::*;
use vpcsp_core::zoo;

fn lin(k: usize) -> ValuedTemplate {
    zoo::klin2(k, q(3, 4), q(1, 2)).unwrap()
}

fn lifts(rows: &[PadRow]) -> Vec<SymbolLift> {
    (0..2).map(|s| SymbolLift { target_sym: s, rows: rows.to_vec() }).collect()
}

fn four_lifts() -> Vec<SymbolLift> {
    lifts(&[PadRow::Copy(0), PadRow::Copy(1), PadRow::Copy(2), PadRow::Const(0)])
}

fn five_lifts() -> Vec<SymbolLift> {
    lifts(&[PadRow::Copy(0), PadRow::Copy(1), PadRow::Copy(2), PadRow::Copy(2), PadRow::Copy(2)])
}

fn table(t: &ValuedTemplate, k: usize, flip: bool) -> MinionHomTable {
    let mut cache = MinionCache::new(&t.a, &t.b, Default::default());
    tabulate_hom(&mut cache, k, |f, sp| if flip { flip_if_one(f, sp) } else { f.clone() }).unwrap()
}

#[test]
fn four_lin_flip_is_a_gadget_hom() {
    let (src, tgt) = (lin(3), lin(4));
    for k in [2, 3] {
        let r = verify_gadget_hom(&table(&tgt, k, true), &src, &tgt, &four_lifts(), k).unwrap();
        assert!(r.ok(), "k = {k}: {r:?}");
        assert!(r.pairs_checked > 0);
    }
}

#[test]
fn four_lin_without_flip_fails() {
    let (src, tgt) = (lin(3), lin(4));
    let r = verify_gadget_hom(&table(&tgt, 2, false), &src, &tgt, &four_lifts(), 2).unwrap();
    assert!(!r.ok());
    assert!(r.mismatch.is_some());
}

#[test]
fn five_lin_padding_identity() {
    let (src, tgt) = (lin(3), lin(5));
    let r = verify_gadget_hom(&table(&tgt, 3, false), &src, &tgt, &five_lifts(), 3).unwrap();
    assert!(r.ok(), "{r:?}");
}

#[test]
fn single_entry_mutation_is_detected() {
    let (src, tgt) = (lin(3), lin(4));
    let good = table(&tgt, 2, true);
    let mut caught = 0;
    let mut tried = 0;
    for (n, level) in &good.levels {
        for f in level.keys() {
            let mut bad = good.clone();
            let g = bad.levels.get_mut(n).unwrap().get_mut(f).unwrap();
            g.table[0] ^= 1;
            tried += 1;
            let r = verify_gadget_hom(&bad, &src, &tgt, &four_lifts(), 2).unwrap();
            caught += usize::from(!r.ok());
        }
    }
    assert_eq!(caught, tried);
}

#[test]
fn missing_image_reported() {
    let (src, tgt) = (lin(3), lin(4));
    let mut t = table(&tgt, 2, true);
    let level = t.levels.get_mut(&2).unwrap();
    let f = level.keys().next().unwrap().clone();
    level.remove(&f);
    let r = verify_gadget_hom(&t, &src, &tgt, &four_lifts(), 2).unwrap();
    assert_eq!(r.uncovered, Some(f));
}

fn four_gadgets(src: &ValuedTemplate, tgt: &ValuedTemplate) -> Vec<Gadget> {
    let args = [GadgetArg::Coord(0), GadgetArg::Coord(1), GadgetArg::Coord(2), GadgetArg::Shared("z".into())];
    (0..2).map(|s| simple_gadget(src.sig(), tgt.sig(), s, s, &args).unwrap()).collect()
}

fn five_gadgets(src: &ValuedTemplate, tgt: &ValuedTemplate) -> Vec<Gadget> {
    let c = GadgetArg::Coord;
    let args = [c(0), c(1), c(2), c(2), c(2)];
    (0..2).map(|s| simple_gadget(src.sig(), tgt.sig(), s, s, &args).unwrap()).collect()
}

fn value(f: &PayoffFormula, t: &ValuedTemplate, h: &[usize]) -> Ext {
    f.evaluate(&t.a, h)
}

#[test]
fn substitution_shapes() {
    let (src, tgt) = (lin(3), lin(4));
    let f = PayoffFormula {
        vars: (0..4).map(|i| vpcsp_core::algebra::Var { name: format!("x{i}"), sort: 0 }).collect(),
        constraints: vec![
            vpcsp_core::algebra::Constraint { weight: q(2, 1), sym: 0, args: vec![0, 1, 2] },
            vpcsp_core::algebra::Constraint { weight: q(1, 3), sym: 1, args: vec![1, 2, 3] },
        ],
    };
    let g = gadget_substitute(&f, src.sig(), tgt.sig(), &four_gadgets(&src, &tgt)).unwrap();
    assert_eq!(g.vars.len(), 5);
    let z = g.var_index("z").unwrap();
    assert!(g.constraints.iter().all(|c| c.args[3] == z));
    assert_eq!(g.weight(), f.weight());
    let h = gadget_substitute(&f, src.sig(), lin(5).sig(), &five_gadgets(&src, &lin(5))).unwrap();
    assert_eq!(h.vars.len(), 4);
    assert_eq!(h.constraints[1].args, vec![1, 2, 3, 3, 3]);
}

#[test]
fn identity_gadget_keeps_the_formula() {
    let t = lin(3);
    let args = [GadgetArg::Coord(0), GadgetArg::Coord(1), GadgetArg::Coord(2)];
    let gs: Vec<Gadget> = (0..2).map(|s| simple_gadget(t.sig(), t.sig(), s, s, &args).unwrap()).collect();
    for f in formula_corpus(t.sig(), 2, 3).unwrap() {
        assert_eq!(gadget_substitute(&f, t.sig(), t.sig(), &gs).unwrap(), f);
    }
}

#[test]
fn arity_mismatch_is_rejected() {
    let (src, tgt) = (lin(3), lin(4));
    let args = [GadgetArg::Coord(0), GadgetArg::Coord(1), GadgetArg::Coord(2)];
    assert!(simple_gadget(src.sig(), tgt.sig(), 0, 0, &args).is_err());
}

/// Every assignment of the image, flipped when `z = 1`, gives the same payoff in the source, and every
/// source assignment extends with `z = 0`.
#[test]
fn gadget_semantics_on_small_inputs() {
    let src = lin(3);
    for (tgt, four) in [(lin(4), true), (lin(5), false)] {
        let gadgets = if four { four_gadgets(&src, &tgt) } else { five_gadgets(&src, &tgt) };
        for f in formula_corpus(src.sig(), 3, 4).unwrap() {
            let g = gadget_substitute(&f, src.sig(), tgt.sig(), &gadgets).unwrap();
            let z = g.var_index("z");
            let mut best_src = Ext::NegInf;
            let mut best_img = Ext::NegInf;
            for_each_tuple(&vec![2; g.vars.len()], |h| {
                let flip = z.is_some_and(|z| h[z] == 1);
                let proj: Vec<usize> = (0..f.vars.len()).map(|x| h[x] ^ usize::from(flip)).collect();
                let v = value(&g, &tgt, h);
                assert_eq!(v, value(&f, &src, &proj));
                best_img = best_img.clone().max(v);
            });
            for_each_tuple(&vec![2; f.vars.len()], |h| {
                let mut ext = h.to_vec();
                ext.resize(g.vars.len(), 0);
                let v = value(&f, &src, h);
                assert_eq!(value(&g, &tgt, &ext), v);
                best_src = best_src.clone().max(v);
            });
            assert_eq!(best_src, best_img);
        }
    }
}
