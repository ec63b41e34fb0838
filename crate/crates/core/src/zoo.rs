//! Built-in templates.

use crate::algebra::{Domain, Params, Signature, SymbolDecl, ValuedStructure, ValuedTemplate};
use crate::error::{contract, Result};
use crate::num::{one, qi, zero, Ext, Q};
use crate::prelude::*;
use num_traits::Signed;

fn boolean() -> Domain {
    Domain::single(&["0", "1"])
}

fn parity_sig(k: usize) -> Signature {
    Signature::single_sorted("bool", &[("phi0", k), ("phi1", k)])
}

/// kLIN2(c, s): `φ_i(a) = 1` if `a_1 + ... + a_k ≡ i (mod 2)`, else `0`.
pub fn klin2(k: usize, c: Q, s: Q) -> Result<ValuedTemplate> {
    let a = ValuedStructure::from_fn(parity_sig(k), boolean(), |i, t| Ext::int(i64::from(t.iter().sum::<usize>() % 2 == i)))?;
    ValuedTemplate::gap(a.clone(), a, c, s)
}

/// Crisp kLIN2 with payoff `top` on satisfying tuples and `-inf` elsewhere; `c = s = top`.
pub fn klin2_crisp(k: usize, top: Q) -> Result<ValuedTemplate> {
    let a = ValuedStructure::from_fn(parity_sig(k), boolean(), |i, t| {
        if t.iter().sum::<usize>() % 2 == i {
            Ext::Fin(top.clone())
        } else {
            Ext::NegInf
        }
    })?;
    ValuedTemplate::gap(a.clone(), a, top.clone(), top)
}

/// kLIN2 over `{1, -1}`: `φ_i(a) = i · a_1 ⋯ a_k`, symbols `phi1` (i = 1) and `phim1` (i = -1).
/// Position 0 is `+1`, position 1 is `-1`. Thresholds `c = 1 - 2δ`, `s = 2δ`.
pub fn klin2_pm(k: usize, delta: &Q) -> Result<ValuedTemplate> {
    let sig = Signature::single_sorted("pm", &[("phi1", k), ("phim1", k)]);
    let dom = Domain::single(&["1", "-1"]);
    let a = ValuedStructure::from_fn(sig, dom, |i, t| {
        let neg = t.iter().filter(|&&p| p == 1).count() + i;
        Ext::int(if neg % 2 == 0 { 1 } else { -1 })
    })?;
    let two = qi(2);
    ValuedTemplate::gap(a.clone(), a, one() - &two * delta, &two * delta)
}

/// Vertex cover as a maximisation: `φ(a) = -a`, `ψ(0,0) = -inf`; thresholds `(-c, -c)`.
pub fn vertex_cover(c: Q) -> Result<ValuedTemplate> {
    let sig = Signature::single_sorted("bool", &[("phi", 1), ("psi", 2)]);
    let a = ValuedStructure::from_fn(sig, boolean(), |i, t| match i {
        0 => Ext::int(-(t[0] as i64)),
        _ if t == [0, 0] => Ext::NegInf,
        _ => Ext::zero(),
    })?;
    ValuedTemplate::gap(a.clone(), a, -c.clone(), -c)
}

/// Independent set: `φ(a) = a`, `ψ(1,1) = -inf`; thresholds `(c, c)` with `0 < c <= 1`.
pub fn independent_set(c: Q) -> Result<ValuedTemplate> {
    if !c.is_positive() || c > one() {
        return contract("independent set needs 0 < c <= 1");
    }
    let sig = Signature::single_sorted("bool", &[("phi", 1), ("psi", 2)]);
    let a = ValuedStructure::from_fn(sig, boolean(), |i, t| match i {
        0 => Ext::int(t[0] as i64),
        _ if t == [1, 1] => Ext::NegInf,
        _ => Ext::zero(),
    })?;
    ValuedTemplate::gap(a.clone(), a, c.clone(), c)
}

/// Crisp k-clique: one binary disequality symbol `neq`.
pub fn clique(k: usize) -> Result<ValuedTemplate> {
    let labels: Vec<String> = (0..k).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let sig = Signature::single_sorted("v", &[("neq", 2)]);
    let a = ValuedStructure::from_fn(sig, Domain::single(&refs), |_, t| if t[0] != t[1] { Ext::zero() } else { Ext::NegInf })?;
    ValuedTemplate::gap(a.clone(), a, zero(), zero())
}

/// Symbol name of a map `π: D → E` given by its images.
pub fn map_name(images: &[usize]) -> String {
    let mut s = String::from("pi");
    for i in images {
        s.push('_');
        s.push_str(&i.to_string());
    }
    s
}

fn all_images(d: usize, e: usize) -> Vec<Vec<usize>> {
    crate::algebra::all_maps(d, e)
}

fn cover_structure(d: usize, e: usize, maps: &[Vec<usize>], crisp: bool, same_sort: bool) -> Result<ValuedStructure> {
    let (sorts, dsort, esort) =
        if same_sort { (vec![String::from("L")], 0, 0) } else { (vec![String::from("D"), String::from("E")], 0, 1) };
    let symbols = maps
        .iter()
        .map(|m| SymbolDecl { name: map_name(m), coords: vec![String::from("d"), String::from("e")], sorts: vec![dsort, esort] })
        .collect();
    let sig = Signature::new(sorts, symbols)?;
    let mut elems: Vec<(String, usize)> = (0..d).map(|i| (format!("d{i}"), dsort)).collect();
    if !same_sort {
        elems.extend((0..e).map(|i| (format!("e{i}"), esort)));
    }
    let dom = Domain::new(sig.sorts.len(), elems)?;
    ValuedStructure::from_fn(sig, dom, |i, t| {
        let hit = maps[i][t[0]] == t[1];
        match (crisp, hit) {
            (true, true) => Ext::zero(),
            (true, false) => Ext::NegInf,
            (false, h) => Ext::int(i64::from(h)),
        }
    })
}

/// Label cover `LC_{D,E}`: sorts `D`, `E`; payoff `1` when `π(d) = e`, else `0`.
/// With `crisp`, the relation itself (`0` / `-inf`, thresholds `0, 0`); otherwise thresholds `(1, eps)`.
pub fn label_cover(d: usize, e: usize, crisp: bool, eps: Q) -> Result<ValuedTemplate> {
    let maps = all_images(d, e);
    let a = cover_structure(d, e, &maps, crisp, false)?;
    let params = if crisp { Params::Gap { c: zero(), s: zero() } } else { Params::Gap { c: one(), s: eps } };
    ValuedTemplate::new(a.clone(), a, params)
}

/// Unique games on `n` labels: bijections only, thresholds `(1 - eps, eps)`.
pub fn unique_games(n: usize, eps: Q) -> Result<ValuedTemplate> {
    let maps: Vec<Vec<usize>> = all_images(n, n).into_iter().filter(|m| m.iter().collect::<BTreeSet<_>>().len() == n).collect();
    let a = cover_structure(n, n, &maps, false, true)?;
    ValuedTemplate::gap(a.clone(), a, one() - &eps, eps)
}

/// The same structures as a constant-factor template.
pub fn with_kappa(t: ValuedTemplate, kappa: Q) -> Result<ValuedTemplate> {
    ValuedTemplate::new(t.a, t.b, Params::ConstantFactor { kappa })
}

/// Parses `name` plus `key=value` parameters, e.g. `3lin2 c=1 s=1/2`.
/// A `kappa=` parameter turns any of them into a constant-factor template.
pub fn builtin(name: &str, params: &BTreeMap<String, String>) -> Result<ValuedTemplate> {
    let t = builtin_gap(name, params)?;
    match params.get("kappa") {
        Some(k) => with_kappa(t, crate::num::parse_q(k)?),
        None => Ok(t),
    }
}

fn builtin_gap(name: &str, params: &BTreeMap<String, String>) -> Result<ValuedTemplate> {
    let get = |k: &str, default: &str| -> Result<Q> { crate::num::parse_q(params.get(k).map(String::as_str).unwrap_or(default)) };
    let get_n = |k: &str, default: usize| -> Result<usize> {
        match params.get(k) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| crate::error::Error::Config(format!("{k} must be a natural number"))),
        }
    };
    let lin = |s: &str| s.strip_suffix("lin2").and_then(|k| k.parse::<usize>().ok());
    if let Some(k) = name.strip_suffix("-crisp").and_then(lin) {
        return klin2_crisp(k, get("top", "0")?);
    }
    if let Some(k) = name.strip_suffix("-pm").and_then(lin) {
        return klin2_pm(k, &get("delta", "1/8")?);
    }
    if let Some(k) = lin(name) {
        return klin2(k, get("c", "1")?, get("s", "1")?);
    }
    match name {
        "vertex-cover" => vertex_cover(get("c", "1")?),
        "independent-set" => independent_set(get("c", "1")?),
        "k3" => clique(3),
        "clique" => clique(get_n("k", 3)?),
        "label-cover" => label_cover(get_n("d", 3)?, get_n("e", 2)?, true, zero()),
        "glc" => label_cover(get_n("d", 3)?, get_n("e", 2)?, false, get("eps", "1/2")?),
        "unique-games" => unique_games(get_n("n", 2)?, get("eps", "1/4")?),
        _ => Err(crate::error::Error::Config(format!("unknown builtin template {name}"))),
    }
}

/// Names accepted by [`builtin`].
pub const BUILTINS: &[&str] = &[
    "<k>lin2 c= s=",
    "<k>lin2-crisp top=",
    "<k>lin2-pm delta=",
    "vertex-cover c=",
    "independent-set c=",
    "k3",
    "clique k=",
    "label-cover d= e=",
    "glc d= e= eps=",
    "unique-games n= eps=",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn lin2_tables() {
        let t = klin2(3, one(), one()).unwrap();
        assert_eq!(t.a.value_pos(0, &[1, 1, 0]), &Ext::int(1));
        assert_eq!(t.a.value_pos(1, &[1, 1, 0]), &Ext::int(0));
        let c = klin2_crisp(3, zero()).unwrap();
        assert_eq!(c.a.feasible_tuples(0).len(), 4);
        assert!(c.a.is_crisp());
    }

    #[test]
    fn pm_signs() {
        let t = klin2_pm(3, &q(1, 8)).unwrap();
        // (+1, -1, -1) has product +1
        assert_eq!(t.a.value_pos(0, &[0, 1, 1]), &Ext::int(1));
        assert_eq!(t.a.value_pos(1, &[0, 1, 1]), &Ext::int(-1));
        assert_eq!(t.cs().unwrap(), (&q(3, 4), &q(1, 4)));
    }

    #[test]
    fn label_cover_shape() {
        let t = label_cover(3, 2, true, zero()).unwrap();
        assert_eq!(t.sig().symbols.len(), 8);
        assert_eq!(t.a.dom.sort_sizes(), vec![3, 2]);
        let ug = unique_games(3, q(1, 4)).unwrap();
        assert_eq!(ug.sig().symbols.len(), 6);
    }
}
