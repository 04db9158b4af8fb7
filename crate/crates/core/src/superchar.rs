//! Supercharacters: stabilizers U^a_D, the characters ξ_D, ζ_D, χ_α for
//! type A and σ_{D,φ}, σ_a for BCD, the subgroups H_γ, H_D, induction, and
//! assembly of complete theories.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::contraction::{ContextSummary, ContractionContext, DualSide, Elem};
use crate::error::{Error, Result};
use crate::grouptools::{character_table, CharacterTable, SmallGroup};
use crate::matfq::Mat;
use crate::orbits::{
    assemble_superclasses_ga, conjugacy_classes, dual_orbit, ideal_uad, superclasses_ua, GaGroup, GroupOracle,
    Orbit, Subspace, Superclass, UaClassification,
};
use crate::rook::{canonical_basic_pairs, BasicPair, RookPlacement};
use crate::roots::Series;
use crate::scalars::{reduce_exps, ExpSum};

/// F(x) = Σ_{μ ∈ orbit} ζ_p^{μ·x} for every code x, as flattened count
/// vectors of length p, by a transform along one coordinate at a time.
pub fn orbit_exponential_sums(p: u32, d: usize, orbit: &[u64]) -> Vec<i64> {
    let p = p as usize;
    let size = p.pow(d as u32);
    let mut a = vec![0i64; size * p];
    for &mu in orbit {
        a[mu as usize * p] += 1;
    }
    let mut stride = 1;
    for _ in 0..d {
        let mut out = vec![0i64; size * p];
        for base in 0..size {
            if (base / stride) % p != 0 {
                continue;
            }
            for x in 0..p {
                let dst = (base + x * stride) * p;
                for mu in 0..p {
                    let src = (base + mu * stride) * p;
                    let shift = mu * x % p;
                    for k in 0..p {
                        let v = a[src + k];
                        if v != 0 {
                            out[dst + (k + shift) % p] += v;
                        }
                    }
                }
            }
        }
        a = out;
        stride *= p;
    }
    a
}

fn slice_sum(n: usize, table: &[i64], x: u64) -> ExpSum {
    let x = x as usize;
    ExpSum::from_counts(n, table[x * n..(x + 1) * n].to_vec())
}

/// Element-level values of a character, used to re-check constancy.
#[derive(Clone, Debug)]
pub enum Pointwise {
    /// One count vector of conductor `n` per element id.
    Dense { n: usize, table: Arc<Vec<i64>> },
    /// value(h·|U| + u) = levi[h] · ua[u]; `None` is zero.
    Product { levi: Arc<Vec<Option<ExpSum>>>, n: usize, ua: Arc<Vec<i64>>, ua_order: u64 },
    /// One value per conjugacy class.
    Classwise { class_of: Arc<Vec<u32>>, values: Arc<Vec<ExpSum>> },
}

impl Pointwise {
    pub fn value(&self, id: u64) -> ExpSum {
        match self {
            Pointwise::Dense { n, table } => slice_sum(*n, table, id),
            Pointwise::Product { levi, n, ua, ua_order } => match &levi[(id / ua_order) as usize] {
                Some(t) => t.mul(&slice_sum(*n, ua, id % ua_order)),
                None => ExpSum::zero(1),
            },
            Pointwise::Classwise { class_of, values } => values[class_of[id as usize] as usize].clone(),
        }
    }
}

/// A character given as `scale` times integral values on superclasses.
#[derive(Clone, Debug)]
pub struct Supercharacter {
    pub label: String,
    pub scale: BigRational,
    pub values: Vec<ExpSum>,
    pub pointwise: Pointwise,
}

impl Supercharacter {
    pub fn value(&self, k: usize) -> crate::scalars::CycloNumber {
        self.values[k].to_cyclo().scale(&self.scale)
    }

    pub fn degree(&self, identity_class: usize) -> BigRational {
        let s: i64 = self.values[identity_class].reduced().first().copied().unwrap_or(0);
        &self.scale * BigRational::from_integer(s.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Ua,
    Ga,
}

/// Paired superclasses and supercharacters of U^a or G^a.
#[derive(Clone, Debug)]
pub struct SupercharTheory {
    pub summary: ContextSummary,
    pub target: Target,
    pub theorem: &'static str,
    pub order: u64,
    pub identity: u64,
    pub classes: Vec<Superclass>,
    pub chars: Vec<Supercharacter>,
    pub diagnostics: BTreeMap<String, serde_json::Value>,
}

impl SupercharTheory {
    pub fn identity_class(&self) -> Option<usize> {
        self.classes.iter().position(|c| c.elements.binary_search(&self.identity).is_ok())
    }
}

// ----- stabilizers

/// Coordinates excluded by S(γ): returns (S₊ ∪ S₋) as basis indices.
pub fn s_gamma(ctx: &ContractionContext, gamma: (usize, usize)) -> Vec<usize> {
    let part = &ctx.partition;
    let (k, m) = (part.block_of(gamma.0), part.block_of(gamma.1));
    ctx.basis
        .iter()
        .enumerate()
        .filter(|(_, b)| b.pos.0 == gamma.0)
        .filter(|(_, b)| {
            let t = part.block_of(b.pos.1);
            if k < m {
                b.upper && k < t && t < m
            } else {
                (!b.upper && t < m) || (b.upper && t > k)
            }
        })
        .map(|(i, _)| i)
        .collect()
}

fn root_position(ctx: &ContractionContext, pair: (i64, i64)) -> Result<(usize, usize)> {
    let s = ctx.style();
    match (s.position(pair.0), s.position(pair.1)) {
        (Some(i), Some(j)) => Ok((i, j)),
        _ => Err(Error::RootOutside(format!("{:?}", pair))),
    }
}

/// u^a_D from S(γ): coordinates outside S(D).
pub fn stabilizer_formula(ctx: &ContractionContext, d: &RookPlacement) -> Result<Subspace> {
    let mut excluded = vec![false; ctx.dim()];
    for r in d.roots() {
        for i in s_gamma(ctx, root_position(ctx, r.pair)?) {
            excluded[i] = true;
        }
    }
    let vs: Vec<Vec<u32>> = (0..ctx.dim())
        .filter(|&i| !excluded[i])
        .map(|i| {
            let mut v = vec![0; ctx.dim()];
            v[i] = 1;
            v
        })
        .collect();
    Ok(Subspace::span(ctx.dim(), ctx.p, &vs))
}

/// {Y : Λ(u X) = Λ(X) for all X, u = 1 + Y} by enumerating every Y.
pub fn brute_stabilizer(ctx: &ContractionContext, form: &[u32]) -> Subspace {
    let d = ctx.dim();
    let p = ctx.p;
    // pairing[j][k] = Λ(b_j b_k)
    let pairing: Vec<Vec<u32>> = ctx
        .basis
        .iter()
        .map(|bj| ctx.basis.iter().map(|bk| ctx.pair(form, &ctx.coords(&ctx.mul(&bj.vector, &bk.vector)))).collect())
        .collect();
    let coder = ctx.coder();
    let members: Vec<Vec<u32>> = (0..coder.size())
        .into_par_iter()
        .filter_map(|y| {
            let yv = coder.decode(y);
            let ok = (0..d).all(|k| {
                let mut s = 0u32;
                for j in 0..d {
                    s = p.add(s, p.mul(yv[j], pairing[j][k]));
                }
                s == 0
            });
            ok.then_some(yv)
        })
        .collect();
    let s = Subspace::span(d, p, &members);
    debug_assert_eq!(p.get().pow(s.dim() as u32) as usize, members.len());
    s
}

/// U^a_D via S(γ), cross-checked against the brute-force stabilizer of Λ_D.
pub fn stabilizer_uad_a(ctx: &ContractionContext, d: &RookPlacement) -> Result<Subspace> {
    let formula = stabilizer_formula(ctx, d)?;
    let lam = ctx.x_coords(&BasicPair::trivial(d.clone()).terms())?;
    let brute = brute_stabilizer(ctx, &lam);
    if formula != brute {
        return Err(Error::Claim(format!(
            "stabilizer of Λ_D for D = {:?}: S(γ) gives dimension {}, enumeration gives {}",
            d.pairs(),
            formula.dim(),
            brute.dim()
        )));
    }
    Ok(formula)
}

/// Genuineness data for ξ_D = Σ_{p∈L} ε^{(pΛ_D)(X)} on U^a_D.
#[derive(Clone, Debug, Serialize)]
pub struct XiReport {
    pub degree: usize,
    /// every summand is a linear character of U^a_D
    pub linear: bool,
    /// multiplicities of the distinct linear constituents
    pub multiplicities: Vec<usize>,
    pub genuine: bool,
}

/// Summands u ↦ ε^{μ(X)} with μ = Λ_D(p^{-1}Xp) are linear characters iff
/// μ vanishes on products of u^a_D; then ξ_D is their nonnegative sum.
pub fn xi_d(ctx: &ContractionContext, d: &RookPlacement, uad: &Subspace) -> Result<XiReport> {
    let lam = ctx.x_coords(&BasicPair::trivial(d.clone()).terms())?;
    let sub: Vec<Elem> = uad.basis().iter().map(|v| ctx.from_coords(v)).collect();
    let mut counts: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut linear = true;
    for h in &ctx.levi {
        let g = Elem::from_parabolic(h.clone());
        let mu = ctx.dual_act(&g, &lam, DualSide::Coadjoint)?;
        for x in &sub {
            for y in &sub {
                if ctx.pair(&mu, &ctx.coords(&ctx.mul(x, y))) != 0 {
                    linear = false;
                }
            }
        }
        let restricted: Vec<u32> = uad.basis().iter().map(|v| ctx.pair(&mu, v)).collect();
        *counts.entry(restricted).or_default() += 1;
    }
    if !linear {
        return generic_xi(ctx, &lam, uad);
    }
    Ok(XiReport {
        degree: ctx.levi.len(),
        linear,
        multiplicities: counts.into_values().collect(),
        genuine: true,
    })
}

fn generic_xi(ctx: &ContractionContext, lam: &[u32], uad: &Subspace) -> Result<XiReport> {
    let p = ctx.p;
    let elems: Vec<Elem> = (0..p.get().pow(uad.dim() as u32) as u64)
        .map(|c| {
            let mut v = vec![0u32; ctx.dim()];
            let mut c = c;
            for row in uad.basis() {
                let t = (c % p.get() as u64) as u32;
                c /= p.get() as u64;
                for (a, &r) in v.iter_mut().zip(row) {
                    *a = p.add(*a, p.mul(t, r));
                }
            }
            ctx.one().add(&ctx.from_coords(&v))
        })
        .collect();
    let g = SmallGroup::from_elements(&elems, |a, b| ctx.mul(a, b))?;
    let table = character_table(&g)?;
    let mus: Vec<Vec<u32>> = ctx
        .levi
        .iter()
        .map(|h| ctx.dual_act(&Elem::from_parabolic(h.clone()), lam, DualSide::Coadjoint))
        .collect::<Result<_>>()?;
    let values: Vec<crate::scalars::CycloNumber> = table
        .classes
        .iter()
        .map(|cls| {
            let x = ctx.coords(&elems[cls[0]].sub(&ctx.one()));
            let mut s = ExpSum::zero(p.get() as usize);
            for mu in &mus {
                s.add_term(ctx.pair(mu, &x) as i64, 1);
            }
            s.to_cyclo()
        })
        .collect();
    let mults = crate::grouptools::decompose(&values, &table);
    let genuine = crate::grouptools::is_genuine(&mults);
    let multiplicities = mults
        .iter()
        .filter_map(|m| m.as_rational())
        .filter(|r| !r.is_zero())
        .map(|r| r.to_integer().try_into().unwrap_or(0usize))
        .collect();
    Ok(XiReport { degree: ctx.levi.len(), linear: false, multiplicities, genuine })
}

// ----- H_γ and H_D

fn is_common_scalar(ctx: &ContractionContext, h: &Mat, blocks: &[usize]) -> bool {
    let part = &ctx.partition;
    let mut scalar = None;
    for &b in blocks {
        for i in part.range(b) {
            for j in part.range(b) {
                let v = h.get(i, j);
                if i == j {
                    if *scalar.get_or_insert(v) != v {
                        return false;
                    }
                } else if v != 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn scalar_blocks(nb: usize, k: usize, m: usize) -> Vec<usize> {
    if k < m {
        (k..=m).collect()
    } else {
        (0..=m).chain(k..nb).collect()
    }
}

fn in_h_position(ctx: &ContractionContext, h: &Mat, pos: (usize, usize)) -> bool {
    let part = &ctx.partition;
    let blocks = scalar_blocks(part.num_blocks(), part.block_of(pos.0), part.block_of(pos.1));
    is_common_scalar(ctx, h, &blocks)
}

/// H_γ as sorted indices into L; for BCD the intersection over γ and its mirror.
pub fn h_gamma(ctx: &ContractionContext, pair: (i64, i64)) -> Result<Vec<usize>> {
    let pos = root_position(ctx, pair)?;
    let mm = ctx.m - 1;
    let mirror = (mm - pos.1, mm - pos.0);
    Ok((0..ctx.levi.len())
        .filter(|&i| {
            let h = &ctx.levi[i];
            in_h_position(ctx, h, pos) && (ctx.form.is_none() || in_h_position(ctx, h, mirror))
        })
        .collect())
}

/// H_D = ⋂_{γ∈D} H_γ; H_∅ = L.
pub fn h_d(ctx: &ContractionContext, d: &RookPlacement) -> Result<Vec<usize>> {
    let mut cur: Vec<usize> = (0..ctx.levi.len()).collect();
    for r in d.roots() {
        let hg = h_gamma(ctx, r.pair)?;
        cur.retain(|x| hg.binary_search(x).is_ok());
    }
    Ok(cur)
}

/// {h ∈ L : Ad*_h fixes every form of the orbit}, by enumeration.
pub fn h_by_stabilizer(ctx: &ContractionContext, orbit: &Orbit) -> Result<Vec<usize>> {
    let forms: Vec<Vec<u32>> = orbit.elements.iter().map(|&c| ctx.coder().decode(c)).collect();
    let mut out = Vec::new();
    for (i, h) in ctx.levi.iter().enumerate() {
        let g = Elem::from_parabolic(h.clone());
        let hi = ctx.inv(&g)?;
        let t = ctx.linear_map(|x| ctx.mul(&ctx.mul(&hi, x), &g))?.transpose();
        if forms.iter().all(|f| t.apply(f) == *f) {
            out.push(i);
        }
    }
    Ok(out)
}

/// Checks (Ad_h − id)v ∈ u^a_D for every h ∈ H_D and basis vector v.
pub fn check_hd_trivial_on_quotient(ctx: &ContractionContext, hd: &[usize], uad: &Subspace) -> Result<()> {
    for &h in hd {
        let ad = crate::orbits::adjoint_map(ctx, &ctx.levi[h])?;
        for k in 0..ctx.dim() {
            let mut e = vec![0; ctx.dim()];
            e[k] = 1;
            let img = ad.apply(&e);
            let diff: Vec<u32> = img.iter().zip(&e).map(|(&a, &b)| ctx.p.sub(a, b)).collect();
            if !uad.contains(&diff) {
                return Err(Error::Claim(format!("Ad_h moves basis vector {} outside u^a_D (h = L#{})", k, h)));
            }
        }
    }
    Ok(())
}

/// H_D as a table group with its character table.
pub fn levi_subgroup(ctx: &ContractionContext, idx: &[usize]) -> Result<(SmallGroup, CharacterTable)> {
    let els: Vec<Mat> = idx.iter().map(|&i| ctx.levi[i].clone()).collect();
    let g = SmallGroup::from_elements(&els, |a, b| a.mul(b))?;
    let t = character_table(&g)?;
    Ok((g, t))
}

// ----- induction

/// Ind_S^G χ on conjugacy classes: |G|·Σ_{y∈cl∩S} χ(y) / (|cl|·|S|),
/// from the class sums Σ_{y∈cl∩S} χ(y). Values must be algebraic integers.
pub fn induce_from_sums(
    group_order: u64,
    class_sizes: &[usize],
    sub_order: u64,
    sums: &[ExpSum],
) -> Result<Vec<ExpSum>> {
    sums.iter()
        .zip(class_sizes)
        .map(|(s, &size)| {
            let n = s.conductor();
            let red = s.reduced();
            let num = BigInt::from(group_order);
            let den = BigInt::from(size as u64) * BigInt::from(sub_order);
            let mut counts = vec![0i64; n];
            for (k, &c) in red.iter().enumerate() {
                let v = BigInt::from(c) * &num;
                if (&v % &den) != BigInt::zero() {
                    return Err(Error::Claim("induced value is not an algebraic integer".into()));
                }
                counts[k] = i64::try_from(v / &den).map_err(|_| Error::Internal("overflow".into()))?;
            }
            Ok(ExpSum::from_counts(n, counts))
        })
        .collect()
}

/// Ind_S^G χ for S given by membership of element ids, per conjugacy class.
pub fn induce(
    classes: &[Vec<u64>],
    class_of: &[u32],
    in_sub: impl Fn(u64) -> bool,
    chi: impl Fn(u64) -> ExpSum,
) -> Result<Vec<ExpSum>> {
    let order: u64 = classes.iter().map(|c| c.len() as u64).sum();
    let mut sums: Vec<ExpSum> = vec![ExpSum::zero(1); classes.len()];
    let mut sub_order = 0u64;
    for x in 0..order {
        if in_sub(x) {
            sub_order += 1;
            let c = class_of[x as usize] as usize;
            sums[c] = sums[c].add(&chi(x));
        }
    }
    let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    induce_from_sums(order, &sizes, sub_order, &sums)
}

// ----- per-label dual data

/// Dual orbit of Λ_{D,φ} and its exponential-sum table over u^a.
#[derive(Clone, Debug)]
pub struct DualData {
    pub label: BasicPair,
    pub orbit: Orbit,
    pub table: Arc<Vec<i64>>,
}

pub fn dual_data(ctx: &ContractionContext, labels: &[BasicPair], cap: usize) -> Result<Vec<DualData>> {
    labels
        .par_iter()
        .map(|bp| {
            let lam = ctx.x_coords(&bp.terms())?;
            let orbit = dual_orbit(ctx, &lam, cap)?;
            let table = Arc::new(orbit_exponential_sums(ctx.p.get(), ctx.dim(), &orbit.elements));
            Ok(DualData { label: bp.clone(), orbit, table })
        })
        .collect()
}

fn check_dual_partition(ctx: &ContractionContext, data: &[DualData]) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut total = 0u64;
    for d in data {
        total += d.orbit.len() as u64;
        if !seen.insert(d.orbit.elements[0]) {
            return false;
        }
    }
    total == ctx.ua_order()
}

/// Options for theory assembly.
#[derive(Clone, Copy, Debug)]
pub struct TheoryOptions {
    pub orbit_cap: usize,
}

impl Default for TheoryOptions {
    fn default() -> Self {
        TheoryOptions { orbit_cap: 1 << 22 }
    }
}

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Supercharacter theory of U^a (Λ_D-orbit sums; Cayley coordinates for BCD).
pub fn theory_ua(ctx: &ContractionContext, opts: TheoryOptions) -> Result<SupercharTheory> {
    let labels = canonical_basic_pairs(ctx)?;
    let ua = superclasses_ua(ctx, &labels, opts.orbit_cap)?;
    theory_ua_from(ctx, &ua, opts)
}

pub fn theory_ua_from(ctx: &ContractionContext, ua: &UaClassification, opts: TheoryOptions) -> Result<SupercharTheory> {
    let data = dual_data(ctx, &ua.labels, opts.orbit_cap)?;
    let p = ctx.p.get() as usize;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("dual_orbits_partition".into(), serde_json::json!(check_dual_partition(ctx, &data)));
    let is_a = ctx.spec.series == Series::A;
    let mut chars = Vec::with_capacity(data.len());
    for dd in &data {
        let scale = if is_a {
            let uad = stabilizer_uad_a(ctx, &dd.label.placement)?;
            ratio(ctx.p.get().pow((ctx.dim() - uad.dim()) as u32) as u64, dd.orbit.len() as u64)
        } else {
            BigRational::one()
        };
        let values = ua.classes.iter().map(|c| slice_sum(p, &dd.table, c.representative)).collect();
        chars.push(Supercharacter {
            label: dd.label.label(),
            scale,
            values,
            pointwise: Pointwise::Dense { n: p, table: dd.table.clone() },
        });
    }
    Ok(SupercharTheory {
        summary: ctx.summary(),
        target: Target::Ua,
        theorem: if is_a { "unipotent radical, type A" } else { "unipotent radical, orthogonal/symplectic" },
        order: ctx.ua_order(),
        identity: 0,
        classes: ua.classes.clone(),
        chars,
        diagnostics,
    })
}

/// Supercharacter theory of G^a.
pub fn theory_ga(ctx: &ContractionContext, opts: TheoryOptions) -> Result<SupercharTheory> {
    let labels = canonical_basic_pairs(ctx)?;
    let ua = superclasses_ua(ctx, &labels, opts.orbit_cap)?;
    let hds: Vec<Vec<usize>> = labels.iter().map(|bp| h_d(ctx, &bp.placement)).collect::<Result<_>>()?;
    let classes = assemble_superclasses_ga(ctx, &ua, &hds)?;
    let data = dual_data(ctx, &labels, opts.orbit_cap)?;
    if ctx.spec.series == Series::A {
        theory_ga_a(ctx, classes, &data, &hds)
    } else {
        theory_ga_bcd(ctx, classes, &data, &hds, opts)
    }
}

fn identity_id(ctx: &ContractionContext) -> u64 {
    GaGroup::new(ctx).map(|g| g.identity()).unwrap_or(0)
}

fn theory_ga_a(
    ctx: &ContractionContext,
    classes: Vec<Superclass>,
    data: &[DualData],
    hds: &[Vec<usize>],
) -> Result<SupercharTheory> {
    let p = ctx.p.get() as usize;
    let n_u = ctx.ua_order();
    let nl = ctx.levi.len() as u64;
    let mut chars = Vec::new();
    for (dd, hd) in data.iter().zip(hds) {
        let uad = stabilizer_uad_a(ctx, &dd.label.placement)?;
        let zeta_scale = ratio(ctx.p.get().pow((ctx.dim() - uad.dim()) as u32) as u64, dd.orbit.len() as u64);
        let scale = zeta_scale * ratio(nl * nl, hd.len() as u64);
        let (_, table) = levi_subgroup(ctx, hd)?;
        for t in 0..table.chars.len() {
            let mut levi = vec![None; ctx.levi.len()];
            for (pos, &h) in hd.iter().enumerate() {
                levi[h] = Some(table.value(t, pos).clone());
            }
            let pw = Pointwise::Product { levi: Arc::new(levi), n: p, ua: dd.table.clone(), ua_order: n_u };
            let values = classes.iter().map(|c| pw.value(c.representative)).collect();
            chars.push(Supercharacter {
                label: format!("{} θ{}", dd.label.label(), t),
                scale: scale.clone(),
                values,
                pointwise: pw,
            });
        }
    }
    Ok(SupercharTheory {
        summary: ctx.summary(),
        target: Target::Ga,
        theorem: "parabolic contraction, type A",
        order: ctx.ga_order(),
        identity: identity_id(ctx),
        classes,
        chars,
        diagnostics: BTreeMap::new(),
    })
}

fn theory_ga_bcd(
    ctx: &ContractionContext,
    classes: Vec<Superclass>,
    data: &[DualData],
    hds: &[Vec<usize>],
    opts: TheoryOptions,
) -> Result<SupercharTheory> {
    let g = GaGroup::new(ctx)?;
    let (conj, class_of) = conjugacy_classes(&g)?;
    let class_of = Arc::new(class_of);
    let sizes: Vec<usize> = conj.iter().map(|c| c.len()).collect();
    let p = ctx.p.get() as usize;
    let n_u = ctx.ua_order();
    let order = ctx.ga_order();
    let mut chars = Vec::new();
    let mut proportional = true;
    for (dd, hd) in data.iter().zip(hds) {
        let (uad, _) = ideal_uad(ctx, &dd.label, opts.orbit_cap)?;
        check_hd_trivial_on_quotient(ctx, hd, &uad)?;
        let (_, table) = levi_subgroup(ctx, hd)?;
        let pos_in_hd: HashMap<usize, usize> = hd.iter().enumerate().map(|(i, &h)| (h, i)).collect();
        // S[c][h] = Σ σ(u) over elements (h, u) of class c with h ∈ H_D
        let mut agg: HashMap<(u32, usize), Vec<i64>> = HashMap::new();
        for &h in hd {
            let base = h as u64 * n_u;
            for u in 0..n_u {
                let c = class_of[(base + u) as usize];
                let e = agg.entry((c, h)).or_insert_with(|| vec![0; p]);
                let src = &dd.table[u as usize * p..(u as usize + 1) * p];
                for (a, &b) in e.iter_mut().zip(src) {
                    *a += b;
                }
            }
        }
        let sub_order = hd.len() as u64 * n_u;
        let mut keys: Vec<&(u32, usize)> = agg.keys().collect();
        keys.sort_unstable();
        for t in 0..table.chars.len() {
            let mut sums = vec![ExpSum::zero(1); conj.len()];
            for key in &keys {
                let (c, h) = **key;
                let th = table.value(t, pos_in_hd[&h]);
                let s = ExpSum::from_counts(p, agg[*key].clone());
                sums[c as usize] = sums[c as usize].add(&th.mul(&s));
            }
            let values = Arc::new(induce_from_sums(order, &sizes, sub_order, &sums)?);
            let pw = Pointwise::Classwise { class_of: class_of.clone(), values };
            let class_values: Vec<ExpSum> = classes.iter().map(|k| pw.value(k.representative)).collect();
            let ch = Supercharacter {
                label: format!("{} θ{}", dd.label.label(), t),
                scale: BigRational::one(),
                values: class_values,
                pointwise: pw,
            };
            proportional &= check_proportional(ctx, &ch, &classes, &table, t, &pos_in_hd, dd)?;
            chars.push(ch);
        }
    }
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("conjugacy_classes".into(), serde_json::json!(conj.len()));
    diagnostics.insert("induced_proportional_to_closed_form".into(), serde_json::json!(proportional));
    Ok(SupercharTheory {
        summary: ctx.summary(),
        target: Target::Ga,
        theorem: "parabolic contraction, orthogonal/symplectic",
        order,
        identity: g.identity(),
        classes,
        chars,
        diagnostics,
    })
}

/// σ_a(hu) = c·θ̇(h)·σ_{D,φ}(u) on every superclass representative.
fn check_proportional(
    ctx: &ContractionContext,
    ch: &Supercharacter,
    classes: &[Superclass],
    table: &CharacterTable,
    t: usize,
    pos_in_hd: &HashMap<usize, usize>,
    dd: &DualData,
) -> Result<bool> {
    let p = ctx.p.get() as usize;
    let n_u = ctx.ua_order();
    let closed = |id: u64| -> ExpSum {
        match pos_in_hd.get(&((id / n_u) as usize)) {
            Some(&i) => table.value(t, i).mul(&slice_sum(p, &dd.table, id % n_u)),
            None => ExpSum::zero(1),
        }
    };
    let one = GaGroup::new(ctx)?.identity();
    let a = ch.pointwise.value(one).reduced()[0];
    let b = closed(one).reduced()[0];
    if b == 0 {
        return Ok(false);
    }
    let c = ratio(a.unsigned_abs(), b.unsigned_abs()) * BigRational::from_integer((a.signum() * b.signum()).into());
    Ok(classes.iter().all(|k| {
        let lhs = ch.pointwise.value(k.representative).to_cyclo();
        let rhs = closed(k.representative).to_cyclo().scale(&c);
        lhs == rhs
    }))
}

/// Any power-basis value as integers; used for exact comparisons.
pub fn reduced(v: &ExpSum) -> Vec<i64> {
    reduce_exps(v.conductor(), v.counts())
}

/// Ind_{U^a_D}^{U^a} ξ_D divided by ζ_D on each superclass of U^a; `Some`
/// when the ratio is one constant.
pub fn zeta_induction_ratio(
    ctx: &ContractionContext,
    ua: &UaClassification,
    label: usize,
) -> Result<Option<BigRational>> {
    let bp = &ua.labels[label];
    let uad = stabilizer_uad_a(ctx, &bp.placement)?;
    let lam = ctx.x_coords(&bp.terms())?;
    let mus: Vec<Vec<u32>> = ctx
        .levi
        .iter()
        .map(|h| ctx.dual_act(&Elem::from_parabolic(h.clone()), &lam, DualSide::Coadjoint))
        .collect::<Result<_>>()?;
    let g = crate::orbits::UaGroup::new(ctx)?;
    let (classes, class_of) = conjugacy_classes(&g)?;
    let coder = ctx.coder();
    let p = ctx.p.get() as usize;
    let ind = induce(
        &classes,
        &class_of,
        |x| uad.contains(&coder.decode(x)),
        |x| {
            let v = coder.decode(x);
            let mut s = ExpSum::zero(p);
            for mu in &mus {
                s.add_term(ctx.pair(mu, &v) as i64, 1);
            }
            s
        },
    )?;
    let data = dual_data(ctx, std::slice::from_ref(bp), usize::MAX)?;
    let scale = ratio(ctx.p.get().pow((ctx.dim() - uad.dim()) as u32) as u64, data[0].orbit.len() as u64);
    let mut found: Option<BigRational> = None;
    for cls in &ua.classes {
        let x = cls.representative;
        let lhs = ind[class_of[x as usize] as usize].to_cyclo();
        let rhs = slice_sum(p, &data[0].table, x).to_cyclo().scale(&scale);
        if rhs.is_zero() {
            if !lhs.is_zero() {
                return Ok(None);
            }
            continue;
        }
        let q = &lhs * &rhs.inv().expect("nonzero");
        let Some(r) = q.as_rational() else { return Ok(None) };
        match &found {
            None => found = Some(r),
            Some(f) if *f == r => {}
            Some(_) => return Ok(None),
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::build_context;
    use crate::rook::enumerate_rook_placements;
    use crate::roots::{LieTypeSpec, PartitionSpec};
    use crate::scalars::Prime;

    fn ctx(s: Series, n: usize, sizes: Option<&[usize]>, p: u32) -> ContractionContext {
        let spec = LieTypeSpec::new(s, n).unwrap();
        let part = match sizes {
            Some(z) => PartitionSpec::new(spec, z).unwrap(),
            None => PartitionSpec::borel(spec),
        };
        build_context(spec, part, Prime::new(p).unwrap()).unwrap()
    }

    fn placement(c: &ContractionContext, pairs: &[(i64, i64)]) -> RookPlacement {
        RookPlacement::new(pairs.iter().map(|&q| *c.sys.find(q).unwrap()).collect())
    }

    #[test]
    fn exponential_sums_match_direct() {
        let orbit = [1u64, 5, 7];
        let t = orbit_exponential_sums(3, 2, &orbit);
        for x in 0..9u64 {
            let xv = [(x % 3) as u32, (x / 3) as u32];
            let mut direct = vec![0i64; 3];
            for &m in &orbit {
                let mv = [(m % 3) as u32, (m / 3) as u32];
                direct[((mv[0] * xv[0] + mv[1] * xv[1]) % 3) as usize] += 1;
            }
            assert_eq!(&t[x as usize * 3..x as usize * 3 + 3], &direct[..]);
        }
    }

    #[test]
    fn stabilizer_examples() {
        let c = ctx(Series::A, 2, None, 3);
        let d = placement(&c, &[(1, 2)]);
        assert_eq!(stabilizer_uad_a(&c, &d).unwrap().dim(), c.dim());
        let c = ctx(Series::A, 3, None, 3);
        let d = placement(&c, &[(1, 3)]);
        let s = stabilizer_uad_a(&c, &d).unwrap();
        assert_eq!(s.dim(), c.dim() - 1);
        let e12 = c.coordinate_of((1, 2)).unwrap();
        let mut v = vec![0; c.dim()];
        v[e12] = 1;
        assert!(!s.contains(&v));
    }

    #[test]
    fn stabilizers_all_placements_small() {
        for sizes in [None, Some(&[2usize, 1][..])] {
            let c = ctx(Series::A, 3, sizes, 3);
            for d in enumerate_rook_placements(&c) {
                stabilizer_uad_a(&c, &d).unwrap();
            }
        }
    }

    #[test]
    fn h_gamma_examples() {
        let c = ctx(Series::A, 4, None, 3);
        let hs = h_gamma(&c, (1, 3)).unwrap();
        assert_eq!(hs.len(), 4);
        for &i in &hs {
            let h = &c.levi[i];
            assert!(h.get(0, 0) == h.get(1, 1) && h.get(1, 1) == h.get(2, 2));
        }
        let hs = h_gamma(&c, (3, 1)).unwrap();
        assert_eq!(hs.len(), 4);
        for &i in &hs {
            let h = &c.levi[i];
            assert!(h.get(0, 0) == h.get(2, 2) && h.get(2, 2) == h.get(3, 3));
        }
    }

    #[test]
    fn a2_theories_have_expected_sizes() {
        let c = ctx(Series::A, 2, None, 3);
        let t = theory_ua(&c, TheoryOptions::default()).unwrap();
        assert_eq!((t.classes.len(), t.chars.len()), (4, 4));
        let t = theory_ga(&c, TheoryOptions::default()).unwrap();
        assert_eq!((t.classes.len(), t.chars.len()), (10, 10));
    }

    #[test]
    fn xi_is_genuine_a3() {
        let c = ctx(Series::A, 3, None, 3);
        for d in enumerate_rook_placements(&c) {
            let uad = stabilizer_uad_a(&c, &d).unwrap();
            let r = xi_d(&c, &d, &uad).unwrap();
            assert!(r.genuine);
            assert_eq!(r.multiplicities.iter().sum::<usize>(), c.levi.len());
        }
    }

    #[test]
    fn induction_degree_and_trivial() {
        let c = ctx(Series::A, 2, None, 3);
        let g = crate::orbits::UaGroup::new(&c).unwrap();
        let (classes, class_of) = conjugacy_classes(&g).unwrap();
        let triv = induce(&classes, &class_of, |_| true, |_| ExpSum::unit(1, 0)).unwrap();
        assert!(triv.iter().all(|v| v.reduced() == vec![1]));
        let reg = induce(&classes, &class_of, |x| x == 0, |_| ExpSum::unit(1, 0)).unwrap();
        assert_eq!(reg[class_of[0] as usize].reduced(), vec![9]);
    }

    #[test]
    fn c2_example_h_d() {
        let c = ctx(Series::C, 2, None, 3);
        let d = placement(&c, &[(2, -1), (-1, 1)]);
        let hd = h_d(&c, &d).unwrap();
        assert_eq!(hd.len(), 2);
        for &i in &hd {
            let h = &c.levi[i];
            assert!(h == &Mat::identity(4, c.p) || h == &Mat::identity(4, c.p).neg());
        }
    }
}
