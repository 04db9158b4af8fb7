//! Brute-force oracles shared by the integration tests. Each one works on
//! explicit group elements and matrices, never on the precomputed linear
//! maps the library uses.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use parcon::contraction::{build_context, ContractionContext, Elem};
use parcon::roots::{LieTypeSpec, PartitionSpec, Series};
use parcon::scalars::{CycloNumber, Prime};
use parcon::superchar::SupercharTheory;

pub fn ctx(series: Series, n: usize, sizes: Option<&[usize]>, p: u32) -> ContractionContext {
    let spec = LieTypeSpec::new(series, n).unwrap();
    let part = match sizes {
        Some(s) => PartitionSpec::new(spec, s).unwrap(),
        None => PartitionSpec::borel(spec),
    };
    build_context(spec, part, Prime::new(p).unwrap()).unwrap()
}

struct Dsu(Vec<u32>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n as u32).collect())
    }
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let up = self.0[self.0[x as usize] as usize];
            self.0[x as usize] = up;
            x = up;
        }
        x
    }
    fn union(&mut self, a: u32, b: u32) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b) as usize] = a.min(b);
        }
    }
    fn classes(mut self) -> Vec<Vec<u64>> {
        let mut by: HashMap<u32, Vec<u64>> = HashMap::new();
        for x in 0..self.0.len() as u32 {
            let r = self.find(x);
            by.entry(r).or_default().push(x as u64);
        }
        let mut out: Vec<Vec<u64>> = by.into_values().collect();
        out.sort();
        out
    }
}

/// Orbits on u^a of the defining action, by union-find over every point and
/// every generator applied as a matrix product.
pub fn orbits_on_ua(c: &ContractionContext) -> Vec<Vec<u64>> {
    let n = c.ua_order();
    let mut dsu = Dsu::new(n as usize);
    for x in 0..n {
        let xe = c.decode(x);
        for g in &c.orbit_gens {
            let imgs = match c.spec.series {
                Series::A => vec![c.act_two_sided(g, &xe, &c.one()), c.act_two_sided(&c.one(), &xe, g)],
                _ => vec![c.act_dagger(g, &xe)],
            };
            for y in imgs {
                dsu.union(x as u32, c.encode(&y) as u32);
            }
        }
    }
    dsu.classes()
}

/// Orbits of the full group GL^a(n) × GL^a(n) for type A, every pair of
/// group elements applied to every point.
pub fn orbits_two_sided_full(c: &ContractionContext) -> Vec<Vec<u64>> {
    let group: Vec<Elem> = (0..c.ga_order()).map(|id| c.ga_elem(id)).collect();
    let n = c.ua_order();
    let mut dsu = Dsu::new(n as usize);
    for x in 0..n {
        let xe = c.decode(x);
        for a in &group {
            let ax = c.mul(a, &xe);
            for b in &group {
                dsu.union(x as u32, c.encode(&c.mul(&ax, b)) as u32);
            }
        }
    }
    dsu.classes()
}

/// Every element of a group, by closing the generators under products.
pub fn closure(c: &ContractionContext, gens: &[Elem]) -> Vec<Elem> {
    let mut seen: HashSet<Elem> = HashSet::new();
    let mut stack = vec![c.one()];
    seen.insert(c.one());
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = c.mul(&x, g);
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Conjugacy classes of a group given as explicit elements with ids.
pub fn conjugacy_classes_brute(
    c: &ContractionContext,
    elems: &[(u64, Elem)],
    id: impl Fn(&Elem) -> u64,
) -> Vec<Vec<u64>> {
    let index: HashMap<u64, usize> = elems.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();
    let mut dsu = Dsu::new(elems.len());
    for (i, (_, x)) in elems.iter().enumerate() {
        for (_, g) in elems {
            let y = c.adjoint(g, x).unwrap();
            dsu.union(i as u32, index[&id(&y)] as u32);
        }
    }
    let mut out: Vec<Vec<u64>> = dsu
        .classes()
        .into_iter()
        .map(|k| {
            let mut v: Vec<u64> = k.into_iter().map(|i| elems[i as usize].0).collect();
            v.sort();
            v
        })
        .collect();
    out.sort();
    out
}

/// Gram matrix Σ_g χ_i(g)·conj χ_j(g) summed over every group element.
pub fn pointwise_gram(th: &SupercharTheory) -> Vec<Vec<CycloNumber>> {
    let vals: Vec<Vec<CycloNumber>> =
        th.chars.iter().map(|ch| (0..th.order).map(|g| ch.pointwise.value(g).to_cyclo()).collect()).collect();
    let k = vals.len();
    let mut out = vec![vec![CycloNumber::zero(1); k]; k];
    for i in 0..k {
        for j in 0..k {
            let mut s = CycloNumber::zero(vals[i][0].conductor());
            for g in 0..th.order as usize {
                s = &s + &(&vals[i][g] * &vals[j][g].conj());
            }
            out[i][j] = s;
        }
    }
    out
}
