//! Rook placements, basic pairs, rank signatures, Weyl group actions and
//! canonical forms.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::contraction::ContractionContext;
use crate::error::{Error, Result};
use crate::matfq::Mat;
use crate::roots::{prime_map, root_vector, Root, Series};
use crate::scalars::find_nonsquare;

/// A set of roots with at most one per row and column (counting D ∪ D′ for BCD).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RookPlacement {
    roots: Vec<Root>,
}

impl RookPlacement {
    pub fn new(mut roots: Vec<Root>) -> Self {
        roots.sort();
        roots.dedup();
        RookPlacement { roots }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.roots.iter().map(|r| r.pair).collect()
    }

    pub fn positive(&self) -> Vec<Root> {
        self.roots.iter().filter(|r| r.positive).copied().collect()
    }

    pub fn negative(&self) -> Vec<Root> {
        self.roots.iter().filter(|r| !r.positive).copied().collect()
    }

    /// Pairs of D ∪ D′.
    pub fn doubled(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = self.roots.iter().flat_map(|r| [r.pair, prime_map(r.pair)]).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Occupied pairs relevant for the row/column condition.
    pub fn occupied(&self, series: Series) -> Vec<(i64, i64)> {
        match series {
            Series::A => self.pairs(),
            _ => self.doubled(),
        }
    }

    pub fn is_valid(&self, series: Series) -> bool {
        let occ = self.occupied(series);
        let rows: HashSet<i64> = occ.iter().map(|q| q.0).collect();
        let cols: HashSet<i64> = occ.iter().map(|q| q.1).collect();
        rows.len() == occ.len() && cols.len() == occ.len()
    }

    pub fn contains(&self, pair: (i64, i64)) -> bool {
        self.roots.iter().any(|r| r.pair == pair)
    }
}

impl Serialize for RookPlacement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.roots.len()))?;
        for r in &self.roots {
            seq.serialize_element(&[r.pair.0, r.pair.1])?;
        }
        seq.end()
    }
}

/// A rook placement with coefficients φ: D → F_p^*, aligned with `placement.roots()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasicPair {
    pub placement: RookPlacement,
    pub phi: Vec<u32>,
}

impl BasicPair {
    pub fn new(placement: RookPlacement, phi: Vec<u32>) -> Result<Self> {
        if phi.len() != placement.len() || phi.contains(&0) {
            return Err(Error::Spec("φ must be nonzero on every root of D".into()));
        }
        Ok(BasicPair { placement, phi })
    }

    /// φ ≡ 1.
    pub fn trivial(placement: RookPlacement) -> Self {
        let phi = vec![1; placement.len()];
        BasicPair { placement, phi }
    }

    pub fn empty() -> Self {
        Self::trivial(RookPlacement::empty())
    }

    pub fn terms(&self) -> Vec<(Root, u32)> {
        self.placement.roots().iter().copied().zip(self.phi.iter().copied()).collect()
    }

    pub fn label(&self) -> String {
        if self.placement.is_empty() {
            return "{}".into();
        }
        let parts: Vec<String> = self
            .terms()
            .iter()
            .map(|(r, v)| if *v == 1 { r.to_string() } else { format!("{}:{}", r, v) })
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl Serialize for BasicPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            pair: [i64; 2],
            phi: u32,
        }
        let mut st = s.serialize_struct("BasicPair", 1)?;
        let terms: Vec<Term> =
            self.terms().iter().map(|(r, v)| Term { pair: [r.pair.0, r.pair.1], phi: *v }).collect();
        st.serialize_field("roots", &terms)?;
        st.end()
    }
}

/// Block counts r_km over ordered block pairs k ≠ m (position order) and,
/// for series C, the discriminants d_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RankSignature {
    pub r: BTreeMap<(usize, usize), usize>,
    pub d: BTreeMap<usize, i8>,
}

/// A signed permutation of positions: w e_i = signs[i] e_{perm[i]}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(m: usize) -> Self {
        WeylElement { perm: (0..m).collect(), signs: vec![1; m] }
    }

    pub fn from_perm(perm: Vec<usize>) -> Self {
        let m = perm.len();
        WeylElement { perm, signs: vec![1; m] }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j) && self.signs.iter().all(|&s| s == 1)
    }

    pub fn matrix(&self, p: crate::scalars::Prime) -> Mat {
        let m = self.perm.len();
        let mut w = Mat::zeros(m, p);
        for i in 0..m {
            w.set(self.perm[i], i, p.reduce(self.signs[i] as i64));
        }
        w
    }

    pub fn inverse(&self) -> Self {
        let m = self.perm.len();
        let mut perm = vec![0; m];
        let mut signs = vec![1; m];
        for i in 0..m {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        WeylElement { perm, signs }
    }

    pub fn compose(&self, o: &WeylElement) -> Self {
        let m = self.perm.len();
        WeylElement {
            perm: (0..m).map(|i| self.perm[o.perm[i]]).collect(),
            signs: (0..m).map(|i| self.signs[o.perm[i]] * o.signs[i]).collect(),
        }
    }
}

fn positions(ctx: &ContractionContext, r: &Root) -> (usize, usize) {
    let s = ctx.style();
    (s.position(r.pair.0).unwrap(), s.position(r.pair.1).unwrap())
}

fn root_at(ctx: &ContractionContext, i: usize, j: usize) -> Option<Root> {
    let s = ctx.style();
    ctx.sys.find((s.label(i), s.label(j))).copied()
}

/// Δ(u^a) = Δ₊(u^a) ∪ Δ₋(u^a), in basis order.
pub fn delta_roots(ctx: &ContractionContext) -> Vec<Root> {
    ctx.basis.iter().map(|b| b.root).collect()
}

/// All rook placements in Δ(u^a), by backtracking; always contains ∅.
pub fn enumerate_rook_placements(ctx: &ContractionContext) -> Vec<RookPlacement> {
    let roots = delta_roots(ctx);
    let series = ctx.spec.series;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut rows = HashSet::new();
    let mut cols = HashSet::new();
    fn rec(
        k: usize,
        roots: &[Root],
        series: Series,
        cur: &mut Vec<Root>,
        rows: &mut HashSet<i64>,
        cols: &mut HashSet<i64>,
        out: &mut Vec<RookPlacement>,
    ) {
        if k == roots.len() {
            out.push(RookPlacement::new(cur.clone()));
            return;
        }
        rec(k + 1, roots, series, cur, rows, cols, out);
        let r = roots[k];
        let mut occ = vec![r.pair];
        if series != Series::A && prime_map(r.pair) != r.pair {
            occ.push(prime_map(r.pair));
        }
        let rset: HashSet<i64> = occ.iter().map(|q| q.0).collect();
        let cset: HashSet<i64> = occ.iter().map(|q| q.1).collect();
        if rset.len() != occ.len() || cset.len() != occ.len() {
            return;
        }
        if occ.iter().any(|q| rows.contains(&q.0) || cols.contains(&q.1)) {
            return;
        }
        for q in &occ {
            rows.insert(q.0);
            cols.insert(q.1);
        }
        cur.push(r);
        rec(k + 1, roots, series, cur, rows, cols, out);
        cur.pop();
        for q in &occ {
            rows.remove(&q.0);
            cols.remove(&q.1);
        }
    }
    rec(0, &roots, series, &mut cur, &mut rows, &mut cols, &mut out);
    out.sort();
    out
}

/// True for roots (i, −i).
pub fn is_antidiagonal(r: &Root) -> bool {
    r.pair.0 == -r.pair.1
}

/// Series-dependent conditions on (D, φ).
pub fn is_basic_pair(ctx: &ContractionContext, bp: &BasicPair) -> bool {
    if !bp.placement.is_valid(ctx.spec.series) || bp.phi.len() != bp.placement.len() {
        return false;
    }
    match ctx.spec.series {
        Series::A | Series::B | Series::D => bp.phi.iter().all(|&v| v == 1),
        Series::C => {
            let delta = find_nonsquare(ctx.p).value();
            let mut per_block: BTreeMap<usize, usize> = BTreeMap::new();
            for (r, v) in bp.terms() {
                if v != 1 && v != delta {
                    return false;
                }
                let (i, j) = positions(ctx, &r);
                let (bi, bj) = (ctx.partition.block_of(i), ctx.partition.block_of(j));
                let antiblock = bj == ctx.partition.mirror(bi);
                if v == delta && !is_antidiagonal(&r) {
                    return false;
                }
                if antiblock && !is_antidiagonal(&r) {
                    return false;
                }
                if v == delta {
                    *per_block.entry(bi).or_default() += 1;
                }
            }
            per_block.values().all(|&c| c <= 1)
        }
    }
}

/// Every basic pair over Δ(u^a); for type A every placement with φ ≡ 1.
pub fn enumerate_basic_pairs(ctx: &ContractionContext) -> Vec<BasicPair> {
    let delta = find_nonsquare(ctx.p).value();
    let mut out = Vec::new();
    for d in enumerate_rook_placements(ctx) {
        let base = BasicPair::trivial(d);
        if ctx.spec.series != Series::C {
            out.push(base);
            continue;
        }
        let anti: Vec<usize> =
            (0..base.placement.len()).filter(|&k| is_antidiagonal(&base.placement.roots()[k])).collect();
        for mask in 0u32..(1 << anti.len()) {
            let mut bp = base.clone();
            for (t, &k) in anti.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    bp.phi[k] = delta;
                }
            }
            if is_basic_pair(ctx, &bp) {
                out.push(bp);
            }
        }
    }
    out.sort();
    out
}

/// Discriminant of the antidiagonal coefficients in block row `b`.
fn discriminant(ctx: &ContractionContext, bp: &BasicPair, b: usize) -> i8 {
    let mut prod = 1u32;
    let mut any = false;
    for (r, v) in bp.terms() {
        let (i, _) = positions(ctx, &r);
        if is_antidiagonal(&r) && ctx.partition.block_of(i) == b {
            prod = ctx.p.mul(prod, v);
            any = true;
        }
    }
    if !any || ctx.p.is_square(prod) {
        1
    } else {
        -1
    }
}

pub fn rank_signature(ctx: &ContractionContext, bp: &BasicPair) -> RankSignature {
    let l = ctx.partition.num_blocks();
    let mut r = BTreeMap::new();
    for k in 0..l {
        for m in 0..l {
            if k != m {
                r.insert((k, m), 0);
            }
        }
    }
    let style = ctx.style();
    for q in bp.placement.occupied(ctx.spec.series) {
        let i = style.position(q.0).unwrap();
        let j = style.position(q.1).unwrap();
        *r.get_mut(&(ctx.partition.block_of(i), ctx.partition.block_of(j))).unwrap() += 1;
    }
    let mut d = BTreeMap::new();
    if ctx.spec.series == Series::C {
        for b in 0..l {
            if Some(b) != ctx.partition.central() {
                d.insert(b, discriminant(ctx, bp, b));
            }
        }
    }
    RankSignature { r, d }
}

/// X_{D,φ} as a full M×M matrix.
pub fn realize(ctx: &ContractionContext, bp: &BasicPair) -> Result<Mat> {
    let mut x = Mat::zeros(ctx.m, ctx.p);
    for (r, v) in bp.terms() {
        let (e, _) = root_vector(ctx.spec, ctx.p, &r)?;
        x = x.add(&e.scale(v));
    }
    Ok(x)
}

/// Block ranks of the realized matrix, for cross-checking [`rank_signature`].
pub fn realized_block_ranks(ctx: &ContractionContext, bp: &BasicPair) -> Result<BTreeMap<(usize, usize), usize>> {
    let x = realize(ctx, bp)?;
    let l = ctx.partition.num_blocks();
    let mut out = BTreeMap::new();
    for k in 0..l {
        for m in 0..l {
            if k != m {
                out.insert((k, m), crate::matfq::block_rank(&x, ctx.partition.range(k), ctx.partition.range(m)));
            }
        }
    }
    Ok(out)
}

// ----- type A

/// D ↦ {(w1(i), w2(j))}.
pub fn weyl_act_a(
    ctx: &ContractionContext,
    w1: &WeylElement,
    d: &RookPlacement,
    w2: &WeylElement,
) -> Result<RookPlacement> {
    let mut out = Vec::new();
    for r in d.roots() {
        let (i, j) = positions(ctx, r);
        let (a, b) = (w1.perm[i], w2.perm[j]);
        if ctx.partition.block_of(a) != ctx.partition.block_of(i) || ctx.partition.block_of(b) != ctx.partition.block_of(j)
        {
            return Err(Error::Spec("Weyl element does not preserve the blocks".into()));
        }
        out.push(root_at(ctx, a, b).ok_or_else(|| Error::Internal("image is not a root".into()))?);
    }
    Ok(RookPlacement::new(out))
}

/// Canonical type of a type A placement with witnesses w1, w2 such that
/// `weyl_act_a(w1, D, w2)` is the canonical placement.
pub fn canonical_form_a(
    ctx: &ContractionContext,
    d: &RookPlacement,
) -> Result<(RookPlacement, WeylElement, WeylElement)> {
    if ctx.spec.series != Series::A {
        return Err(Error::Spec("canonical_form_a needs type A".into()));
    }
    let part = &ctx.partition;
    let l = part.num_blocks();
    let m = ctx.m;
    let rooks: Vec<(usize, usize)> = d.roots().iter().map(|r| positions(ctx, r)).collect();
    let mut row_map = vec![usize::MAX; m];
    let mut col_map = vec![usize::MAX; m];
    for k in 0..l {
        // rows of block k: rooks sorted by (column block, row)
        let mut rs: Vec<(usize, usize)> =
            rooks.iter().filter(|q| part.block_of(q.0) == k).map(|q| (part.block_of(q.1), q.0)).collect();
        rs.sort();
        let start = part.range(k).start;
        for (t, &(_, i)) in rs.iter().enumerate() {
            row_map[i] = start + t;
        }
        let mut next = start + rs.len();
        for i in part.range(k) {
            if row_map[i] == usize::MAX {
                row_map[i] = next;
                next += 1;
            }
        }
    }
    for mm in 0..l {
        // columns of block m: rooks sorted by (row block, new row)
        let mut cs: Vec<(usize, usize, usize)> = rooks
            .iter()
            .filter(|q| part.block_of(q.1) == mm)
            .map(|q| (part.block_of(q.0), row_map[q.0], q.1))
            .collect();
        cs.sort();
        let start = part.range(mm).start;
        for (t, &(_, _, j)) in cs.iter().enumerate() {
            col_map[j] = start + t;
        }
        let mut next = start + cs.len();
        for j in part.range(mm) {
            if col_map[j] == usize::MAX {
                col_map[j] = next;
                next += 1;
            }
        }
    }
    let w1 = WeylElement::from_perm(row_map);
    let w2 = WeylElement::from_perm(col_map);
    let dc = weyl_act_a(ctx, &w1, d, &w2)?;
    Ok((dc, w1, w2))
}

/// Positions required by the canonical-type formula, from the block counts.
pub fn canonical_positions_a(ctx: &ContractionContext, sig: &RankSignature) -> Vec<(usize, usize)> {
    let part = &ctx.partition;
    let l = part.num_blocks();
    let mut out = Vec::new();
    for k in 0..l {
        for m in 0..l {
            if k == m {
                continue;
            }
            let r = sig.r[&(k, m)];
            let n1 = part.range(k).start + (0..m).filter(|&t| t != k).map(|t| sig.r[&(k, t)]).sum::<usize>();
            let n2 = part.range(m).start + (0..k).filter(|&t| t != m).map(|t| sig.r[&(t, m)]).sum::<usize>();
            for t in 0..r {
                out.push((n1 + t, n2 + t));
            }
        }
    }
    out.sort();
    out
}

fn block_perms(ctx: &ContractionContext, blocks: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![(0..ctx.m).collect::<Vec<usize>>()];
    for &b in blocks {
        let r: Vec<usize> = ctx.partition.range(b).collect();
        let mut next = Vec::new();
        for base in &out {
            for p in permutations(&r) {
                let mut v = base.clone();
                for (a, &t) in r.iter().zip(&p) {
                    v[*a] = t;
                }
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// W_L: permutations within every block.
pub fn weyl_group_a(ctx: &ContractionContext) -> Vec<WeylElement> {
    let blocks: Vec<usize> = (0..ctx.partition.num_blocks()).collect();
    block_perms(ctx, &blocks).into_iter().map(WeylElement::from_perm).collect()
}

// ----- types B, C, D

/// Signed block permutations inside L ∩ G, one per underlying permutation.
pub fn weyl_group_bcd(ctx: &ContractionContext) -> Result<Vec<WeylElement>> {
    let form = ctx.form.ok_or_else(|| Error::Spec("needs a form".into()))?;
    let part = &ctx.partition;
    let m = ctx.m;
    let mirror = |i: usize| m - 1 - i;
    let l = part.num_blocks();
    let upper: Vec<usize> = (0..l).filter(|&b| b < part.mirror(b)).collect();
    let mut perms = block_perms(ctx, &upper);
    for v in perms.iter_mut() {
        for &b in &upper {
            for i in part.range(b) {
                v[mirror(i)] = mirror(v[i]);
            }
        }
    }
    if let Some(c) = part.central() {
        let r: Vec<usize> = part.range(c).collect();
        let cps: Vec<Vec<usize>> = permutations(&r)
            .into_iter()
            .filter(|p| {
                let f: std::collections::HashMap<usize, usize> = r.iter().copied().zip(p.iter().copied()).collect();
                r.iter().all(|&i| f[&mirror(i)] == mirror(f[&i]))
            })
            .collect();
        let mut next = Vec::new();
        for base in &perms {
            for p in &cps {
                let mut v = base.clone();
                for (a, &t) in r.iter().zip(p) {
                    v[*a] = t;
                }
                next.push(v);
            }
        }
        perms = next;
    }
    let mut out = Vec::new();
    for perm in perms {
        let mut found = None;
        for mask in 0u32..(1u32 << m) {
            let w = WeylElement { perm: perm.clone(), signs: (0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect() };
            let wm = w.matrix(ctx.p);
            if form.dagger(&wm).mul(&wm).is_identity() {
                found = Some(w);
                break;
            }
        }
        out.push(found.ok_or_else(|| Error::Internal("no signs make a permutation isometric".into()))?);
    }
    Ok(out)
}

/// Torus normalization of φ: 1 for B and D; for C off-antidiagonal values
/// become 1 and each antidiagonal block keeps at most one δ, on its first root.
pub fn normalize_phi(ctx: &ContractionContext, bp: &BasicPair) -> BasicPair {
    let mut out = BasicPair::trivial(bp.placement.clone());
    if ctx.spec.series != Series::C {
        return out;
    }
    let delta = find_nonsquare(ctx.p).value();
    let mut blocks: BTreeMap<usize, (usize, u32)> = BTreeMap::new();
    for (k, (r, v)) in bp.terms().into_iter().enumerate() {
        if !is_antidiagonal(&r) {
            continue;
        }
        let (i, _) = positions(ctx, &r);
        let b = ctx.partition.block_of(i);
        let e = blocks.entry(b).or_insert((k, 1));
        if positions(ctx, &bp.placement.roots()[e.0]).0 > i {
            e.0 = k;
        }
        e.1 = ctx.p.mul(e.1, v);
    }
    for (first, prod) in blocks.values() {
        if !ctx.p.is_square(*prod) {
            out.phi[*first] = delta;
        }
    }
    out
}

/// w·(D, φ) through X ↦ wXw^†, followed by [`normalize_phi`].
pub fn weyl_act_bcd(ctx: &ContractionContext, w: &WeylElement, bp: &BasicPair) -> Result<BasicPair> {
    let form = ctx.form.ok_or_else(|| Error::Spec("needs a form".into()))?;
    let x = realize(ctx, bp)?;
    let wm = w.matrix(ctx.p);
    let y = wm.mul(&x).mul(&form.dagger(&wm));
    let mut roots = Vec::new();
    let mut phi = Vec::new();
    for r in delta_roots(ctx) {
        let (i, j) = positions(ctx, &r);
        if y.get(i, j) != 0 {
            roots.push(r);
            phi.push(y.get(i, j));
        }
    }
    let mut pairs: Vec<(Root, u32)> = roots.into_iter().zip(phi).collect();
    pairs.sort();
    let image = BasicPair {
        placement: RookPlacement::new(pairs.iter().map(|t| t.0).collect()),
        phi: pairs.iter().map(|t| t.1).collect(),
    };
    if realize(ctx, &image)? != y {
        return Err(Error::Internal("Weyl image is not of the form X_{D,φ}".into()));
    }
    Ok(normalize_phi(ctx, &image))
}

fn order_key(ctx: &ContractionContext, bp: &BasicPair) -> Vec<(usize, usize, u32)> {
    let mut k: Vec<(usize, usize, u32)> = bp
        .terms()
        .iter()
        .map(|(r, v)| {
            let (i, j) = positions(ctx, r);
            (i, j, *v)
        })
        .collect();
    k.sort();
    k
}

/// Least element of the W_L̄-orbit of a basic pair, with a witness.
pub fn canonical_form_bcd(
    ctx: &ContractionContext,
    weyl: &[WeylElement],
    bp: &BasicPair,
) -> Result<(BasicPair, WeylElement)> {
    let mut best: Option<(Vec<(usize, usize, u32)>, BasicPair, WeylElement)> = None;
    for w in weyl {
        let img = weyl_act_bcd(ctx, w, bp)?;
        let key = order_key(ctx, &img);
        if best.as_ref().map_or(true, |b| key < b.0) {
            best = Some((key, img, w.clone()));
        }
    }
    let (_, c, w) = best.ok_or_else(|| Error::Internal("empty Weyl group".into()))?;
    Ok((c, w))
}

/// Canonical labels for one context. Type A uses the closed formula. For
/// BCD the label of a basic pair is the least basic pair (in position order)
/// with the same rank signature.
pub struct Canonicalizer {
    series: Series,
    by_sig: HashMap<RankSignature, BasicPair>,
}

impl Canonicalizer {
    pub fn new(ctx: &ContractionContext) -> Result<Self> {
        let mut by_sig: HashMap<RankSignature, (Vec<(usize, usize, u32)>, BasicPair)> = HashMap::new();
        if ctx.spec.series != Series::A {
            for bp in enumerate_basic_pairs(ctx) {
                let key = order_key(ctx, &bp);
                let sig = rank_signature(ctx, &bp);
                match by_sig.get(&sig) {
                    Some((k, _)) if *k <= key => {}
                    _ => {
                        by_sig.insert(sig, (key, bp));
                    }
                }
            }
        }
        Ok(Canonicalizer { series: ctx.spec.series, by_sig: by_sig.into_iter().map(|(s, (_, b))| (s, b)).collect() })
    }

    pub fn canonical(&self, ctx: &ContractionContext, bp: &BasicPair) -> Result<BasicPair> {
        match self.series {
            Series::A => Ok(BasicPair::trivial(canonical_form_a(ctx, &bp.placement)?.0)),
            _ => self
                .by_sig
                .get(&rank_signature(ctx, bp))
                .cloned()
                .ok_or_else(|| Error::Spec(format!("{} is not a basic pair", bp.label()))),
        }
    }

    /// The distinct labels, sorted.
    pub fn labels(&self, ctx: &ContractionContext) -> Result<Vec<BasicPair>> {
        let mut set = std::collections::BTreeSet::new();
        match self.series {
            Series::A => {
                for bp in enumerate_basic_pairs(ctx) {
                    set.insert(self.canonical(ctx, &bp)?);
                }
            }
            _ => set.extend(self.by_sig.values().cloned()),
        }
        Ok(set.into_iter().collect())
    }
}

/// Distinct canonical basic pairs, sorted.
pub fn canonical_basic_pairs(ctx: &ContractionContext) -> Result<Vec<BasicPair>> {
    Canonicalizer::new(ctx)?.labels(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::build_context;
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
    fn placements_a2() {
        let c = ctx(Series::A, 2, None, 3);
        let all = enumerate_rook_placements(&c);
        assert_eq!(all.len(), 4);
        assert!(all.contains(&RookPlacement::empty()));
    }

    #[test]
    fn basic_pair_counts() {
        let c = ctx(Series::C, 2, None, 3);
        assert_eq!(enumerate_basic_pairs(&c).len(), 119);
        let b = ctx(Series::B, 2, None, 3);
        assert_eq!(enumerate_basic_pairs(&b).len(), 19);
        let d = ctx(Series::D, 2, None, 3);
        assert_eq!(enumerate_basic_pairs(&d).len(), 7);
    }

    #[test]
    fn signature_examples() {
        let c = ctx(Series::C, 2, None, 3);
        let bp = BasicPair::new(placement(&c, &[(1, -1)]), vec![2]).unwrap();
        let sig = rank_signature(&c, &bp);
        let b1 = c.style().position(1).unwrap();
        assert_eq!(sig.d[&b1], -1);
        let a = ctx(Series::A, 3, Some(&[2, 1]), 3);
        let d = placement(&a, &[(1, 3), (2, 3)]);
        assert!(!d.is_valid(Series::A));
        let d = placement(&a, &[(1, 3)]);
        let sig = rank_signature(&a, &BasicPair::trivial(d.clone()));
        assert_eq!(sig.r[&(0, 1)], 1);
        assert_eq!(realized_block_ranks(&a, &BasicPair::trivial(d)).unwrap(), sig.r);
    }

    #[test]
    fn canonical_a_examples() {
        let c = ctx(Series::A, 4, Some(&[2, 2]), 3);
        let d = placement(&c, &[(2, 3)]);
        let (dc, w1, w2) = canonical_form_a(&c, &d).unwrap();
        assert_eq!(dc.pairs(), vec![(1, 3)]);
        assert_eq!(weyl_act_a(&c, &w1, &d, &w2).unwrap(), dc);
        let (again, v1, v2) = canonical_form_a(&c, &dc).unwrap();
        assert_eq!(again, dc);
        assert!(v1.is_identity() && v2.is_identity());
        let b = ctx(Series::A, 4, None, 3);
        let d = placement(&b, &[(2, 3)]);
        assert_eq!(canonical_form_a(&b, &d).unwrap().0, d);
    }

    #[test]
    fn canonical_a_matches_formula_and_orbit_search() {
        for sizes in [&[2usize, 2][..], &[2, 1], &[1, 2, 1], &[3, 1]] {
            let n = sizes.iter().sum();
            let c = ctx(Series::A, n, Some(sizes), 3);
            let w = weyl_group_a(&c);
            for d in enumerate_rook_placements(&c) {
                let (dc, _, _) = canonical_form_a(&c, &d).unwrap();
                let sig = rank_signature(&c, &BasicPair::trivial(d.clone()));
                let pos: Vec<(usize, usize)> = dc.roots().iter().map(|r| positions(&c, r)).collect::<Vec<_>>();
                let mut pos = pos;
                pos.sort();
                assert_eq!(pos, canonical_positions_a(&c, &sig));
                let reachable = w.iter().any(|a| w.iter().any(|b| weyl_act_a(&c, a, &d, b).unwrap() == dc));
                assert!(reachable);
            }
        }
    }

    #[test]
    fn canonical_bcd_keeps_delta() {
        let c = ctx(Series::C, 2, None, 3);
        let weyl = weyl_group_bcd(&c).unwrap();
        let bp = BasicPair::new(placement(&c, &[(1, -1)]), vec![2]).unwrap();
        assert_eq!(canonical_form_bcd(&c, &weyl, &bp).unwrap().0, bp);
        assert_eq!(canonical_form_bcd(&c, &weyl, &BasicPair::empty()).unwrap().0, BasicPair::empty());
    }

    #[test]
    fn canonicalizer_bcd_is_signature_minimum() {
        let c = ctx(Series::C, 2, Some(&[2, 2]), 3);
        let canon = Canonicalizer::new(&c).unwrap();
        let a = BasicPair::trivial(placement(&c, &[(-1, 1), (2, -2)]));
        let b = BasicPair::trivial(placement(&c, &[(-2, 2), (2, -2)]));
        assert_eq!(rank_signature(&c, &a), rank_signature(&c, &b));
        assert_eq!(canon.canonical(&c, &a).unwrap(), canon.canonical(&c, &b).unwrap());
        let weyl = weyl_group_bcd(&c).unwrap();
        assert_ne!(canonical_form_bcd(&c, &weyl, &a).unwrap().0, canonical_form_bcd(&c, &weyl, &b).unwrap().0);
        for bp in enumerate_basic_pairs(&c) {
            let k = canon.canonical(&c, &bp).unwrap();
            assert!(order_key(&c, &k) <= order_key(&c, &bp));
        }
    }

    #[test]
    fn bcd_signature_invariance() {
        for (s, n, sizes) in [(Series::C, 2, vec![2, 2]), (Series::D, 3, vec![2, 2, 2]), (Series::B, 2, vec![1, 3, 1])] {
            let c = ctx(s, n, Some(&sizes), 3);
            let weyl = weyl_group_bcd(&c).unwrap();
            for bp in enumerate_basic_pairs(&c) {
                let sig = rank_signature(&c, &bp);
                for w in &weyl {
                    let img = weyl_act_bcd(&c, w, &bp).unwrap();
                    assert!(is_basic_pair(&c, &img));
                    assert_eq!(rank_signature(&c, &img), sig);
                }
            }
        }
    }
}
