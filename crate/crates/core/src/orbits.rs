//! Orbits of linear actions on u^a and its dual, invariant subspaces,
//! superclasses of U^a and G^a, and conjugacy classes.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::contraction::{Coder, ContractionContext, Elem, LinMap};
use crate::error::{Error, Result};
use crate::matfq::Mat;
use crate::rook::BasicPair;
use crate::scalars::Prime;

/// A subspace of F_p^d in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    d: usize,
    p: Prime,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(d: usize, p: Prime) -> Self {
        Subspace { d, p, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(d: usize, p: Prime) -> Self {
        let mut s = Self::zero(d, p);
        for k in 0..d {
            let mut v = vec![0; d];
            v[k] = 1;
            s.insert(&v);
        }
        s
    }

    pub fn span(d: usize, p: Prime, vs: &[Vec<u32>]) -> Self {
        let mut s = Self::zero(d, p);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of the coset v + S: pivot coordinates cleared.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = p.sub(*x, p.mul(c, r));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds a vector; returns true if the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let p = self.p;
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else { return false };
        let iv = p.inv(w[pc]).expect("nonzero");
        for x in w.iter_mut() {
            *x = p.mul(*x, iv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&w) {
                    *x = p.sub(*x, p.mul(c, r));
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > pc).unwrap_or(self.pivots.len());
        self.rows.insert(at, w);
        self.pivots.insert(at, pc);
        true
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> bool {
        self.rows.iter().all(|r| o.contains(r))
    }

    /// {μ : μ(v) = 0 for all v ∈ S} under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        let p = self.p;
        let free: Vec<usize> = (0..self.d).filter(|c| !self.pivots.contains(c)).collect();
        let vs: Vec<Vec<u32>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![0; self.d];
                v[f] = 1;
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    v[pc] = p.neg(row[f]);
                }
                v
            })
            .collect();
        Subspace::span(self.d, p, &vs)
    }

    /// Smallest subspace containing S and invariant under every map.
    pub fn invariant_closure(mut self, maps: &[LinMap]) -> Subspace {
        let mut queue: VecDeque<Vec<u32>> = self.rows.iter().cloned().collect();
        while let Some(v) = queue.pop_front() {
            for m in maps {
                let w = m.apply(&v);
                if self.insert(&w) {
                    queue.push_back(w);
                }
            }
        }
        self
    }
}

/// An orbit as a sorted list of coordinate codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub seed: u64,
    pub elements: Vec<u64>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

fn apply_code(coder: Coder, m: &LinMap, x: u64) -> u64 {
    coder.encode(&m.apply(&coder.decode(x)))
}

/// Breadth-first orbit of `seed` under the group generated by `maps`.
pub fn orbit_bfs(coder: Coder, maps: &[LinMap], seed: u64, cap: usize) -> Result<Orbit> {
    let mut seen = HashSet::from([seed]);
    let mut queue = VecDeque::from([seed]);
    while let Some(x) = queue.pop_front() {
        for m in maps {
            let y = apply_code(coder, m, x);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::OrbitCap { cap, seen: seen.len() });
                }
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<u64> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(Orbit { seed, elements })
}

/// All orbits on F_p^d, ordered by least element, plus the orbit index of every code.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    pub orbits: Vec<Orbit>,
    pub label: Vec<u32>,
}

pub fn all_orbits(coder: Coder, maps: &[LinMap], cap: usize) -> Result<OrbitPartition> {
    let size = coder.size();
    if size > 50_000_000 {
        return Err(Error::Spec(format!("|u^a| = {} is beyond exhaustive enumeration", size)));
    }
    let images: Vec<Vec<u32>> = maps
        .par_iter()
        .map(|m| (0..size).map(|x| apply_code(coder, m, x) as u32).collect())
        .collect();
    let mut label = vec![u32::MAX; size as usize];
    let mut orbits = Vec::new();
    for s in 0..size as usize {
        if label[s] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        label[s] = id;
        let mut els = vec![s as u64];
        let mut head = 0;
        while head < els.len() {
            let x = els[head] as usize;
            head += 1;
            for img in &images {
                let y = img[x] as usize;
                if label[y] == u32::MAX {
                    label[y] = id;
                    els.push(y as u64);
                    if els.len() > cap {
                        return Err(Error::OrbitCap { cap, seen: els.len() });
                    }
                }
            }
        }
        els.sort_unstable();
        orbits.push(Orbit { seed: s as u64, elements: els });
    }
    Ok(OrbitPartition { orbits, label })
}

/// A superclass: labels, element ids and a representative.
#[derive(Clone, Debug, Serialize)]
pub struct Superclass {
    pub labels: Vec<String>,
    #[serde(skip)]
    pub pairs: Vec<(BasicPair, Option<usize>)>,
    pub representative: u64,
    pub size: usize,
    #[serde(skip)]
    pub elements: Vec<u64>,
}

/// Classes of U^a matched to canonical basic pairs.
#[derive(Clone, Debug)]
pub struct UaClassification {
    pub partition: OrbitPartition,
    /// orbit index of each canonical label
    pub orbit_of_label: Vec<usize>,
    pub labels: Vec<BasicPair>,
    pub classes: Vec<Superclass>,
}

/// Orbits of the defining action on u^a, each matched to exactly one
/// canonical label; the class of u is the orbit of its coordinate vector
/// (X = u − 1 for A, f(u) for BCD).
pub fn superclasses_ua(ctx: &ContractionContext, labels: &[BasicPair], cap: usize) -> Result<UaClassification> {
    let maps = ctx.orbit_maps()?;
    let partition = all_orbits(ctx.coder(), &maps, cap)?;
    let mut orbit_of_label = Vec::with_capacity(labels.len());
    let mut hit: HashMap<usize, usize> = HashMap::new();
    for (k, bp) in labels.iter().enumerate() {
        let code = ctx.coder().encode(&ctx.x_coords(&bp.terms())?);
        let o = partition.label[code as usize] as usize;
        if let Some(prev) = hit.insert(o, k) {
            return Err(Error::Claim(format!(
                "labels {} and {} lie in one orbit",
                labels[prev].label(),
                bp.label()
            )));
        }
        orbit_of_label.push(o);
    }
    if hit.len() != partition.orbits.len() {
        return Err(Error::Claim(format!(
            "{} orbits but {} canonical labels",
            partition.orbits.len(),
            labels.len()
        )));
    }
    let classes = labels
        .iter()
        .zip(&orbit_of_label)
        .map(|(bp, &o)| {
            let orb = &partition.orbits[o];
            Superclass {
                labels: vec![bp.label()],
                pairs: vec![(bp.clone(), None)],
                representative: ctx.coder().encode(&ctx.x_coords(&bp.terms()).expect("checked")),
                size: orb.len(),
                elements: orb.elements.clone(),
            }
        })
        .collect();
    Ok(UaClassification { partition, orbit_of_label, labels: labels.to_vec(), classes })
}

/// Ad_h on coordinates.
pub fn adjoint_map(ctx: &ContractionContext, h: &Mat) -> Result<LinMap> {
    let he = Elem::from_parabolic(h.clone());
    let hi = ctx.inv(&he)?;
    ctx.linear_map(|x| ctx.mul(&ctx.mul(&he, x), &hi))
}

/// Smallest invariant subspace u^a_h with Ad_h trivial on u^a/u^a_h.
pub fn smallest_invariant_ideal(ctx: &ContractionContext, h: &Mat) -> Result<Subspace> {
    let ad = adjoint_map(ctx, h)?;
    let d = ctx.dim();
    let p = ctx.p;
    let moved = |k: usize| {
        let mut e = vec![0; d];
        e[k] = 1;
        let img = ad.apply(&e);
        img.iter().zip(&e).map(|(&a, &b)| p.sub(a, b)).collect::<Vec<u32>>()
    };
    let s = Subspace::span(d, p, &(0..d).map(moved).collect::<Vec<_>>());
    let s = s.invariant_closure(&ctx.orbit_maps()?);
    if !(0..d).all(|k| s.contains(&moved(k))) {
        return Err(Error::Internal("Ad_h is not trivial on the quotient".into()));
    }
    Ok(s)
}

/// Dual orbit G·Λ under the dual action.
pub fn dual_orbit(ctx: &ContractionContext, form: &[u32], cap: usize) -> Result<Orbit> {
    orbit_bfs(ctx.coder(), &ctx.dual_orbit_maps()?, ctx.coder().encode(form), cap)
}

/// u^a_D = ⋂ Ker g·Λ_{D,φ}, the annihilator of the span W*_D of the dual orbit.
pub fn ideal_uad(ctx: &ContractionContext, bp: &BasicPair, cap: usize) -> Result<(Subspace, Subspace)> {
    let lam = ctx.x_coords(&bp.terms())?;
    let orb = dual_orbit(ctx, &lam, cap)?;
    let vs: Vec<Vec<u32>> = orb.elements.iter().map(|&c| ctx.coder().decode(c)).collect();
    let w = Subspace::span(ctx.dim(), ctx.p, &vs);
    Ok((w.annihilator(), w))
}

/// Conjugacy classes of L under conjugation by its generators.
pub fn levi_conjugacy(ctx: &ContractionContext) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let gens: Vec<(Mat, Mat)> =
        ctx.levi_gens.iter().map(|g| Ok((g.clone(), g.inverse()?))).collect::<Result<_>>()?;
    let n = ctx.levi.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for s in 0..n {
        if class_of[s] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[s] = id;
        let mut cls = vec![s];
        let mut head = 0;
        while head < cls.len() {
            let x = &ctx.levi[cls[head]];
            head += 1;
            for (g, gi) in &gens {
                let y = g.mul(x).mul(gi);
                let yi = ctx.levi_position(&y).ok_or_else(|| Error::Internal("L is not closed".into()))?;
                if class_of[yi] == usize::MAX {
                    class_of[yi] = id;
                    cls.push(yi);
                }
            }
        }
        cls.sort_unstable();
        classes.push(cls);
    }
    Ok((classes, class_of))
}

/// Superclasses CL_L(h)·{u : coords(u) + u^a_h meets the orbit of X_{D,φ}}
/// over labels (D, φ, h), h ∈ H_D up to L-conjugacy; equal sets merged.
pub fn assemble_superclasses_ga(
    ctx: &ContractionContext,
    ua: &UaClassification,
    h_d: &[Vec<usize>],
) -> Result<Vec<Superclass>> {
    let (lclasses, lclass_of) = levi_conjugacy(ctx)?;
    let coder = ctx.coder();
    let size = coder.size();
    let mut ideal_cache: HashMap<usize, Subspace> = HashMap::new();
    let mut reduced_cache: HashMap<usize, Vec<u64>> = HashMap::new();
    let mut merged: BTreeMap<(usize, Vec<u64>), Vec<(BasicPair, usize)>> = BTreeMap::new();
    for (k, bp) in ua.labels.iter().enumerate() {
        let orbit = &ua.partition.orbits[ua.orbit_of_label[k]];
        let mut seen_classes = HashSet::new();
        for &h in &h_d[k] {
            let c = lclass_of[h];
            if !seen_classes.insert(c) {
                continue;
            }
            let rep = *lclasses[c].iter().filter(|x| h_d[k].contains(x)).min().unwrap_or(&h);
            if !ideal_cache.contains_key(&c) {
                ideal_cache.insert(c, smallest_invariant_ideal(ctx, &ctx.levi[rep])?);
            }
            let ideal = &ideal_cache[&c];
            let red = reduced_cache.entry(c).or_insert_with(|| {
                (0..size).into_par_iter().map(|x| coder.encode(&ideal.reduce(&coder.decode(x)))).collect()
            });
            let targets: HashSet<u64> = orbit.elements.iter().map(|&x| red[x as usize]).collect();
            let uset: Vec<u64> = (0..size).filter(|&x| targets.contains(&red[x as usize])).collect();
            merged.entry((c, uset)).or_default().push((bp.clone(), rep));
        }
    }
    let n = ctx.ua_order();
    let mut out: Vec<Superclass> = merged
        .into_iter()
        .map(|((c, uset), labels)| {
            let mut elements: Vec<u64> =
                lclasses[c].iter().flat_map(|&h| uset.iter().map(move |&u| h as u64 * n + u)).collect();
            elements.sort_unstable();
            let (bp0, h0) = &labels[0];
            let rep_u = ctx.coder().encode(&ctx.x_coords(&bp0.terms()).expect("label in u^a"));
            Superclass {
                labels: labels.iter().map(|(bp, h)| format!("{} h#{}", bp.label(), h)).collect(),
                pairs: labels.iter().map(|(bp, h)| (bp.clone(), Some(*h))).collect(),
                representative: *h0 as u64 * n + rep_u,
                size: elements.len(),
                elements,
            }
        })
        .collect();
    out.sort_by_key(|c| c.elements[0]);
    Ok(out)
}

/// Finite group accessed through element ids and conjugation by generators.
pub trait GroupOracle: Sync {
    fn order(&self) -> u64;
    fn identity(&self) -> u64;
    fn num_gens(&self) -> usize;
    /// s_k x s_k^{-1}
    fn conj(&self, k: usize, x: u64) -> Result<u64>;
}

/// U^a with ids from [`ContractionContext::ua_index`].
pub struct UaGroup<'a> {
    ctx: &'a ContractionContext,
    gens: Vec<(Elem, Elem)>,
}

impl<'a> UaGroup<'a> {
    pub fn new(ctx: &'a ContractionContext) -> Result<Self> {
        let gens = ctx.unipotent_gens.iter().map(|g| Ok((g.clone(), ctx.inv(g)?))).collect::<Result<_>>()?;
        Ok(UaGroup { ctx, gens })
    }
}

impl GroupOracle for UaGroup<'_> {
    fn order(&self) -> u64 {
        self.ctx.ua_order()
    }
    fn identity(&self) -> u64 {
        0
    }
    fn num_gens(&self) -> usize {
        self.gens.len()
    }
    fn conj(&self, k: usize, x: u64) -> Result<u64> {
        let (g, gi) = &self.gens[k];
        let u = self.ctx.ua_elem(x);
        self.ctx.ua_index(&self.ctx.mul(&self.ctx.mul(g, &u), gi))
    }
}

/// G^a with ids h·|U^a| + u.
pub struct GaGroup<'a> {
    ctx: &'a ContractionContext,
    gens: Vec<(Elem, Elem)>,
}

impl<'a> GaGroup<'a> {
    pub fn new(ctx: &'a ContractionContext) -> Result<Self> {
        let gens = ctx.group_gens.iter().map(|g| Ok((g.clone(), ctx.inv(g)?))).collect::<Result<_>>()?;
        Ok(GaGroup { ctx, gens })
    }
}

impl GroupOracle for GaGroup<'_> {
    fn order(&self) -> u64 {
        self.ctx.ga_order()
    }
    fn identity(&self) -> u64 {
        let id = self.ctx.levi_position(&Mat::identity(self.ctx.m, self.ctx.p)).unwrap_or(0);
        id as u64 * self.ctx.ua_order()
    }
    fn num_gens(&self) -> usize {
        self.gens.len()
    }
    fn conj(&self, k: usize, x: u64) -> Result<u64> {
        let (g, gi) = &self.gens[k];
        let e = self.ctx.ga_elem(x);
        self.ctx.ga_id(&self.ctx.mul(&self.ctx.mul(g, &e), gi))
    }
}

/// Conjugacy classes by closure under conjugation by generators.
pub fn conjugacy_classes(g: &dyn GroupOracle) -> Result<(Vec<Vec<u64>>, Vec<u32>)> {
    let n = g.order() as usize;
    let mut class_of = vec![u32::MAX; n];
    let mut classes = Vec::new();
    for s in 0..n {
        if class_of[s] != u32::MAX {
            continue;
        }
        let id = classes.len() as u32;
        class_of[s] = id;
        let mut cls = vec![s as u64];
        let mut head = 0;
        while head < cls.len() {
            let x = cls[head];
            head += 1;
            let imgs: Vec<u64> = (0..g.num_gens()).map(|k| g.conj(k, x)).collect::<Result<_>>()?;
            for y in imgs {
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = id;
                    cls.push(y);
                }
            }
        }
        cls.sort_unstable();
        classes.push(cls);
    }
    Ok((classes, class_of))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::build_context;
    use crate::rook::canonical_basic_pairs;
    use crate::roots::{LieTypeSpec, PartitionSpec, Series};

    fn ctx(s: Series, n: usize, sizes: Option<&[usize]>, p: u32) -> ContractionContext {
        let spec = LieTypeSpec::new(s, n).unwrap();
        let part = match sizes {
            Some(z) => PartitionSpec::new(spec, z).unwrap(),
            None => PartitionSpec::borel(spec),
        };
        build_context(spec, part, Prime::new(p).unwrap()).unwrap()
    }

    #[test]
    fn subspace_basics() {
        let p = Prime::new(3).unwrap();
        let s = Subspace::span(3, p, &[vec![1, 1, 0], vec![2, 2, 0]]);
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&[2, 2, 0]));
        let a = s.annihilator();
        assert_eq!(a.dim(), 2);
        for v in a.basis() {
            assert_eq!((v[0] + v[1]) % 3, 0);
        }
    }

    #[test]
    fn a2_orbits() {
        let c = ctx(Series::A, 2, None, 3);
        let maps = c.orbit_maps().unwrap();
        let part = all_orbits(c.coder(), &maps, 1000).unwrap();
        let mut sizes: Vec<usize> = part.orbits.iter().map(|o| o.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 2, 4]);
        let e12 = c.coder().encode(&c.x_coords(&[(*c.sys.find((1, 2)).unwrap(), 1)]).unwrap());
        assert_eq!(orbit_bfs(c.coder(), &maps, e12, 100).unwrap().len(), 2);
        assert_eq!(orbit_bfs(c.coder(), &maps, 0, 100).unwrap().elements, vec![0]);
    }

    #[test]
    fn bcd_orbit_counts() {
        for (s, n, expect) in [(Series::C, 2, 119), (Series::B, 2, 19), (Series::D, 2, 7)] {
            let c = ctx(s, n, None, 3);
            let labels = canonical_basic_pairs(&c).unwrap();
            let ua = superclasses_ua(&c, &labels, 1 << 20).unwrap();
            assert_eq!(ua.classes.len(), expect);
        }
    }

    #[test]
    fn scalar_h_gives_zero_ideal() {
        let c = ctx(Series::A, 3, None, 5);
        let h = Mat::diag(c.p, &[2, 2, 2]);
        assert_eq!(smallest_invariant_ideal(&c, &h).unwrap().dim(), 0);
        let h = Mat::diag(c.p, &[1, 2, 3]);
        assert_eq!(smallest_invariant_ideal(&c, &h).unwrap().dim(), c.dim());
    }

    #[test]
    fn ua_superclasses_partition() {
        let c = ctx(Series::A, 3, Some(&[2, 1]), 3);
        let labels = canonical_basic_pairs(&c).unwrap();
        let ua = superclasses_ua(&c, &labels, 1 << 20).unwrap();
        let total: usize = ua.classes.iter().map(|k| k.size).sum();
        assert_eq!(total as u64, c.ua_order());
    }

    #[test]
    fn conjugacy_in_ua() {
        let c = ctx(Series::A, 2, None, 3);
        let g = UaGroup::new(&c).unwrap();
        let (classes, _) = conjugacy_classes(&g).unwrap();
        assert_eq!(classes.len(), 9);
        let g = GaGroup::new(&c).unwrap();
        let (classes, _) = conjugacy_classes(&g).unwrap();
        let total: usize = classes.iter().map(|k| k.len()).sum();
        assert_eq!(total, 36);
        assert!(classes.iter().all(|k| 36 % k.len() == 0));
    }
}
