//! The contraction algebra gl^a = p ⊕ u₋^a, its group G^a, the nilpotent
//! part u^a with coordinates, actions, the Cayley map and the bilinear form.
//!
//! Elements of gl^a are pairs (A, B) with A in the parabolic pattern and B
//! strictly block-lower; (A, B)(A', B') = (AA', low(AB' + BA')).

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouptools::closure;
use crate::matfq::{FormKind, IndexStyle, Mat};
use crate::roots::{build_root_system, delta_ua, root_vector, LieTypeSpec, PartitionSpec, Root, RootSystem, Series};
use crate::scalars::{FieldElement, Prime};

/// Element of gl^a.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem {
    pub a: Mat,
    pub b: Mat,
}

impl Elem {
    pub fn zero(m: usize, p: Prime) -> Self {
        Elem { a: Mat::zeros(m, p), b: Mat::zeros(m, p) }
    }
    pub fn one(m: usize, p: Prime) -> Self {
        Elem { a: Mat::identity(m, p), b: Mat::zeros(m, p) }
    }
    pub fn from_parabolic(a: Mat) -> Self {
        let b = Mat::zeros(a.dim(), a.prime());
        Elem { a, b }
    }
    pub fn add(&self, o: &Elem) -> Elem {
        Elem { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }
    pub fn sub(&self, o: &Elem) -> Elem {
        Elem { a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }
    pub fn scale(&self, s: u32) -> Elem {
        Elem { a: self.a.scale(s), b: self.b.scale(s) }
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    /// Compact byte key for hashing.
    pub fn key(&self) -> Vec<u8> {
        self.a.data().iter().chain(self.b.data()).map(|&v| v as u8).collect()
    }
}

/// A group element of G^a stored in algebra coordinates (A, B).
///
/// `parabolic()` is A and `abelian()` is λ with g = A(1 + λ).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement(pub Elem);

/// One vector of the distinguished basis of u^a.
#[derive(Clone, Debug, Serialize)]
pub struct BasisVector {
    pub root: Root,
    /// True for 𝓔_α (upper part), false for 𝓕_α.
    pub upper: bool,
    /// Matrix position read as the coordinate.
    #[serde(skip)]
    pub pos: (usize, usize),
    #[serde(skip)]
    pub vector: Elem,
    pub eta: i64,
}

/// A linear map on coordinate vectors of u^a (or its dual), row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    pub d: usize,
    pub p: Prime,
    pub m: Vec<u32>,
}

impl LinMap {
    pub fn identity(d: usize, p: Prime) -> Self {
        let mut m = vec![0; d * d];
        for i in 0..d {
            m[i * d + i] = 1;
        }
        LinMap { d, p, m }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p.get() as u64;
        (0..self.d)
            .map(|i| {
                let row = &self.m[i * self.d..(i + 1) * self.d];
                (row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p) as u32
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.d;
        let mut m = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                m[j * d + i] = self.m[i * d + j];
            }
        }
        LinMap { d, p: self.p, m }
    }

    pub fn compose(&self, o: &LinMap) -> LinMap {
        let d = self.d;
        let p = self.p;
        let mut m = vec![0u32; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.m[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    m[i * d + j] = p.add(m[i * d + j], p.mul(a, o.m[k * d + j]));
                }
            }
        }
        LinMap { d, p, m }
    }
}

/// Encoding of F_p^d as integers 0..p^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coder {
    pub d: usize,
    pub p: u32,
}

impl Coder {
    pub fn size(self) -> u64 {
        (self.p as u64).pow(self.d as u32)
    }

    pub fn encode(self, v: &[u32]) -> u64 {
        v.iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn decode(self, mut x: u64) -> Vec<u32> {
        let mut v = vec![0; self.d];
        for c in v.iter_mut() {
            *c = (x % self.p as u64) as u32;
            x /= self.p as u64;
        }
        v
    }
}

/// Immutable description of one parabolic contraction.
#[derive(Clone, Debug)]
pub struct ContractionContext {
    pub spec: LieTypeSpec,
    pub partition: PartitionSpec,
    pub p: Prime,
    pub sys: RootSystem,
    pub m: usize,
    pub form: Option<FormKind>,
    pub basis: Vec<BasisVector>,
    coord_of_pos: HashMap<(usize, usize), usize>,
    /// Every element of the Levi factor L (inside O/Sp for BCD).
    pub levi: Vec<Mat>,
    levi_index: HashMap<Mat, usize>,
    /// Generators of L.
    pub levi_gens: Vec<Mat>,
    /// Generators of the group acting on u^a: GL^a(n) two-sidedly for A,
    /// the contraction of GL(M) by X ↦ gXg^† for BCD.
    pub orbit_gens: Vec<Elem>,
    /// Generators of G^a.
    pub group_gens: Vec<Elem>,
    /// Generators of U^a.
    pub unipotent_gens: Vec<Elem>,
}

/// Size caps applied while building a context.
#[derive(Clone, Copy, Debug)]
pub struct BuildLimits {
    pub levi_cap: usize,
    pub dim_cap: usize,
}

impl Default for BuildLimits {
    fn default() -> Self {
        BuildLimits { levi_cap: 200_000, dim_cap: 24 }
    }
}

pub fn build_context(spec: LieTypeSpec, partition: PartitionSpec, p: Prime) -> Result<ContractionContext> {
    build_context_with(spec, partition, p, BuildLimits::default())
}

pub fn build_context_with(
    spec: LieTypeSpec,
    partition: PartitionSpec,
    p: Prime,
    limits: BuildLimits,
) -> Result<ContractionContext> {
    let m = spec.m();
    if partition.sizes().iter().sum::<usize>() != m {
        return Err(Error::Partition("partition does not match the matrix size".into()));
    }
    let sys = build_root_system(spec);
    let form = spec.form();
    let style = spec.index_style();
    let (plus, minus) = delta_ua(&sys, &partition);
    let mut basis = Vec::new();
    for (roots, upper) in [(&plus, true), (&minus, false)] {
        for r in roots.iter() {
            let (x, eta) = root_vector(spec, p, r)?;
            let pos = (style.position(r.pair.0).unwrap(), style.position(r.pair.1).unwrap());
            let vector = split(&partition, &x);
            basis.push(BasisVector { root: *r, upper, pos, vector, eta });
        }
    }
    if basis.len() > limits.dim_cap {
        return Err(Error::Spec(format!("dim u^a = {} exceeds the cap {}", basis.len(), limits.dim_cap)));
    }
    let coord_of_pos = basis.iter().enumerate().map(|(k, b)| (b.pos, k)).collect();

    let (levi_gens, levi) = build_levi(spec, &partition, p, form, limits.levi_cap)?;
    let levi_index = levi.iter().enumerate().map(|(k, h)| (h.clone(), k)).collect();

    let mut ctx = ContractionContext {
        spec,
        partition,
        p,
        sys,
        m,
        form,
        basis,
        coord_of_pos,
        levi,
        levi_index,
        levi_gens,
        orbit_gens: Vec::new(),
        group_gens: Vec::new(),
        unipotent_gens: Vec::new(),
    };
    ctx.orbit_gens = ctx.gl_contraction_gens();
    ctx.unipotent_gens = ctx.build_unipotent_gens()?;
    ctx.group_gens = match spec.series {
        Series::A => ctx.orbit_gens.clone(),
        _ => {
            let mut g: Vec<Elem> = ctx.levi_gens.iter().cloned().map(Elem::from_parabolic).collect();
            g.extend(ctx.unipotent_gens.iter().cloned());
            g
        }
    };
    for g in &ctx.group_gens {
        if !ctx.in_group(g) {
            return Err(Error::Internal("a generator fails the membership condition".into()));
        }
    }
    Ok(ctx)
}

/// Splits an M×M matrix into its parabolic and strictly block-lower parts.
fn split(part: &PartitionSpec, x: &Mat) -> Elem {
    let a = x.masked(|i, j| part.block_of(i) <= part.block_of(j));
    let b = x.masked(|i, j| part.block_of(i) > part.block_of(j));
    Elem { a, b }
}

fn gl_block_gens(p: Prime, range: std::ops::Range<usize>, m: usize) -> Vec<Mat> {
    let g = p.primitive_root();
    let mut out = Vec::new();
    for i in range.clone() {
        let mut t = Mat::identity(m, p);
        t.set(i, i, g);
        out.push(t);
    }
    for i in range.clone() {
        for j in range.clone() {
            if i != j {
                let mut e = Mat::identity(m, p);
                e.set(i, j, 1);
                out.push(e);
            }
        }
    }
    out
}

fn build_levi(
    spec: LieTypeSpec,
    part: &PartitionSpec,
    p: Prime,
    form: Option<FormKind>,
    cap: usize,
) -> Result<(Vec<Mat>, Vec<Mat>)> {
    let m = spec.m();
    let mut gens = Vec::new();
    match form {
        None => {
            for b in 0..part.num_blocks() {
                gens.extend(gl_block_gens(p, part.range(b), m));
            }
        }
        Some(f) => {
            for b in 0..part.num_blocks() {
                if b >= part.mirror(b) {
                    continue;
                }
                for a in gl_block_gens(p, part.range(b), m) {
                    let ad = f.dagger(&a).inverse()?;
                    gens.push(a.mul(&ad));
                }
            }
            if let Some(c) = part.central() {
                gens.extend(central_gens(p, part.range(c), m, f)?);
            }
        }
    }
    let id = Mat::identity(m, p);
    let levi = closure(&gens, id.clone(), |x, y| x.mul(y), cap)?;
    Ok((gens, levi))
}

/// Generators of the isometry group of the form restricted to the central block,
/// found by exhaustive search and greedy selection.
fn central_gens(p: Prime, range: std::ops::Range<usize>, m: usize, f: FormKind) -> Result<Vec<Mat>> {
    let s = range.len();
    let total = (p.get() as u64).checked_pow((s * s) as u32).unwrap_or(u64::MAX);
    if total > 2_000_000 {
        return Err(Error::Spec(format!("central segment of size {} is too large at p = {}", s, p.get())));
    }
    let id = Mat::identity(m, p);
    let mut members = Vec::new();
    for code in 0..total {
        let mut x = id.clone();
        let mut c = code;
        for i in range.clone() {
            for j in range.clone() {
                x.set(i, j, (c % p.get() as u64) as u32);
                c /= p.get() as u64;
            }
        }
        if f.dagger(&x).mul(&x).is_identity() {
            members.push(x);
        }
    }
    let mut gens: Vec<Mat> = Vec::new();
    let mut span = std::collections::HashSet::new();
    span.insert(id.clone());
    for x in members {
        if span.contains(&x) {
            continue;
        }
        gens.push(x);
        span = closure(&gens, id.clone(), |a, b| a.mul(b), usize::MAX)?.into_iter().collect();
    }
    Ok(gens)
}

impl ContractionContext {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coder(&self) -> Coder {
        Coder { d: self.dim(), p: self.p.get() }
    }

    /// |U^a| = p^{dim u^a}.
    pub fn ua_order(&self) -> u64 {
        self.coder().size()
    }

    pub fn levi_order(&self) -> usize {
        self.levi.len()
    }

    pub fn ga_order(&self) -> u64 {
        self.levi.len() as u64 * self.ua_order()
    }

    pub fn style(&self) -> IndexStyle {
        self.spec.index_style()
    }

    pub fn levi_position(&self, h: &Mat) -> Option<usize> {
        self.levi_index.get(h).copied()
    }

    pub fn is_lower(&self, i: usize, j: usize) -> bool {
        self.partition.block_of(i) > self.partition.block_of(j)
    }

    pub fn is_strict_upper(&self, i: usize, j: usize) -> bool {
        self.partition.block_of(i) < self.partition.block_of(j)
    }

    fn low(&self, x: &Mat) -> Mat {
        x.masked(|i, j| self.is_lower(i, j))
    }

    pub fn one(&self) -> Elem {
        Elem::one(self.m, self.p)
    }

    pub fn zero(&self) -> Elem {
        Elem::zero(self.m, self.p)
    }

    /// Product in gl^a.
    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let a = x.a.mul(&y.a);
        let b = self.low(&x.a.mul(&y.b).add(&x.b.mul(&y.a)));
        Elem { a, b }
    }

    /// Inverse of a group element: (A + B)^{-1} = A^{-1} − low(A^{-1} B A^{-1}).
    pub fn inv(&self, g: &Elem) -> Result<Elem> {
        let ai = g.a.inverse()?;
        let b = self.low(&ai.mul(&g.b).mul(&ai)).neg();
        Ok(Elem { a: ai, b })
    }

    /// Componentwise dagger; identity map for type A.
    pub fn dagger(&self, x: &Elem) -> Elem {
        match self.form {
            Some(f) => Elem { a: f.dagger(&x.a), b: f.dagger(&x.b) },
            None => x.clone(),
        }
    }

    /// Membership in G^a: invertible parabolic part, and g^†g = 1 for BCD.
    pub fn in_group(&self, g: &Elem) -> bool {
        if !g.a.is_invertible() {
            return false;
        }
        let pattern = (0..self.m).all(|i| {
            (0..self.m).all(|j| {
                (self.partition.block_of(i) <= self.partition.block_of(j) || g.a.get(i, j) == 0)
                    && (self.is_lower(i, j) || g.b.get(i, j) == 0)
            })
        });
        if !pattern {
            return false;
        }
        match self.form {
            None => true,
            Some(_) => self.mul(&self.dagger(g), g) == self.one(),
        }
    }

    // ----- coordinates

    pub fn coords(&self, x: &Elem) -> Vec<u32> {
        self.basis.iter().map(|b| if b.upper { x.a.get(b.pos.0, b.pos.1) } else { x.b.get(b.pos.0, b.pos.1) }).collect()
    }

    pub fn from_coords(&self, v: &[u32]) -> Elem {
        let mut x = self.zero();
        for (c, b) in v.iter().zip(&self.basis) {
            if *c != 0 {
                x = x.add(&b.vector.scale(*c));
            }
        }
        x
    }

    /// Coordinates of `x`, failing if `x` is not in u^a.
    pub fn coords_checked(&self, x: &Elem) -> Result<Vec<u32>> {
        let v = self.coords(x);
        if self.from_coords(&v) != *x {
            return Err(Error::Internal("element leaves u^a".into()));
        }
        Ok(v)
    }

    pub fn coordinate_of(&self, pair: (i64, i64)) -> Option<usize> {
        let s = self.style();
        let pos = (s.position(pair.0)?, s.position(pair.1)?);
        self.coord_of_pos.get(&pos).copied()
    }

    pub fn encode(&self, x: &Elem) -> u64 {
        self.coder().encode(&self.coords(x))
    }

    pub fn decode(&self, idx: u64) -> Elem {
        self.from_coords(&self.coder().decode(idx))
    }

    /// Matrix of a linear endomorphism of u^a given on elements.
    pub fn linear_map(&self, f: impl Fn(&Elem) -> Elem) -> Result<LinMap> {
        let d = self.dim();
        let mut m = vec![0u32; d * d];
        for (k, b) in self.basis.iter().enumerate() {
            let col = self.coords_checked(&f(&b.vector))?;
            for (i, c) in col.into_iter().enumerate() {
                m[i * d + k] = c;
            }
        }
        Ok(LinMap { d, p: self.p, m })
    }

    // ----- actions

    /// X ↦ aXb for type A.
    pub fn act_two_sided(&self, a: &Elem, x: &Elem, b: &Elem) -> Elem {
        self.mul(&self.mul(a, x), b)
    }

    /// X ↦ gXg^† for BCD.
    pub fn act_dagger(&self, g: &Elem, x: &Elem) -> Elem {
        self.mul(&self.mul(g, x), &self.dagger(g))
    }

    /// Ad_g X = gXg^{-1}.
    pub fn adjoint(&self, g: &Elem, x: &Elem) -> Result<Elem> {
        Ok(self.mul(&self.mul(g, x), &self.inv(g)?))
    }

    /// Linear maps generating the orbit action on u^a: left and right
    /// multiplications for A, X ↦ gXg^† for BCD.
    pub fn orbit_maps(&self) -> Result<Vec<LinMap>> {
        let mut out = Vec::new();
        for g in &self.orbit_gens {
            match self.spec.series {
                Series::A => {
                    out.push(self.linear_map(|x| self.mul(g, x))?);
                    out.push(self.linear_map(|x| self.mul(x, g))?);
                }
                _ => out.push(self.linear_map(|x| self.act_dagger(g, x))?),
            }
        }
        Ok(out)
    }

    /// Generating maps of the dual action on forms: Λ ↦ Λ(Xg), Λ ↦ Λ(gX) for A,
    /// λ ↦ λ(g^†Xg) for BCD.
    pub fn dual_orbit_maps(&self) -> Result<Vec<LinMap>> {
        let mut out = Vec::new();
        for g in &self.orbit_gens {
            match self.spec.series {
                Series::A => {
                    out.push(self.linear_map(|x| self.mul(x, g))?.transpose());
                    out.push(self.linear_map(|x| self.mul(g, x))?.transpose());
                }
                _ => {
                    let gd = self.dagger(g);
                    out.push(self.linear_map(|x| self.mul(&self.mul(&gd, x), g))?.transpose());
                }
            }
        }
        Ok(out)
    }

    /// The dual action of one group element on a form, on a chosen side.
    pub fn dual_act(&self, g: &Elem, form: &[u32], side: DualSide) -> Result<Vec<u32>> {
        let t = match side {
            DualSide::Left => self.linear_map(|x| self.mul(x, g))?,
            DualSide::Right => self.linear_map(|x| self.mul(g, x))?,
            DualSide::Dagger => {
                let gd = self.dagger(g);
                self.linear_map(|x| self.mul(&self.mul(&gd, x), g))?
            }
            DualSide::Coadjoint => {
                let gi = self.inv(g)?;
                self.linear_map(|x| self.mul(&self.mul(&gi, x), g))?
            }
        };
        Ok(t.transpose().apply(form))
    }

    /// λ(X) for a form given by dual-basis coefficients.
    pub fn pair(&self, form: &[u32], x: &[u32]) -> u32 {
        let p = self.p.get() as u64;
        (form.iter().zip(x).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p) as u32
    }

    /// (X₁, X₂) = λ₂(x₁) + λ₁(x₂) with λ(x) = tr(λx), type A.
    pub fn bilinear_form(&self, x1: &Elem, x2: &Elem) -> FieldElement {
        let p = self.p;
        let mut s = 0u32;
        for i in 0..self.m {
            for j in 0..self.m {
                if self.is_strict_upper(i, j) {
                    s = p.add(s, p.mul(x2.b.get(j, i), x1.a.get(i, j)));
                    s = p.add(s, p.mul(x1.b.get(j, i), x2.a.get(i, j)));
                }
            }
        }
        p.elem(s as i64)
    }

    // ----- Cayley map and U^a

    fn nilpotent_powers(&self, x: &Elem) -> Result<Vec<Elem>> {
        let mut out = vec![x.clone()];
        let mut cur = x.clone();
        for _ in 0..=2 * self.m {
            cur = self.mul(&cur, x);
            if cur.is_zero() {
                return Ok(out);
            }
            out.push(cur.clone());
        }
        Err(Error::NotUnipotent)
    }

    /// f(1 + X) = Σ_{k≥0} (−1)^k X^{k+1} / 2^k.
    pub fn cayley(&self, u: &Elem) -> Result<Elem> {
        let x = u.sub(&self.one());
        let half = self.p.inv(2)?;
        let mut acc = self.zero();
        let mut c = 1u32;
        for pw in self.nilpotent_powers(&x)? {
            acc = acc.add(&pw.scale(c));
            c = self.p.neg(self.p.mul(c, half));
        }
        Ok(acc)
    }

    /// f^{-1}(Y) = 1 + Σ_{k≥0} Y^{k+1} / 2^k.
    pub fn cayley_inv(&self, y: &Elem) -> Result<Elem> {
        let half = self.p.inv(2)?;
        let mut acc = self.one();
        let mut c = 1u32;
        for pw in self.nilpotent_powers(y)? {
            acc = acc.add(&pw.scale(c));
            c = self.p.mul(c, half);
        }
        Ok(acc)
    }

    /// The element of U^a with index `idx`: 1 + X for A, f^{-1}(X) for BCD.
    pub fn ua_elem(&self, idx: u64) -> Elem {
        let x = self.decode(idx);
        match self.spec.series {
            Series::A => self.one().add(&x),
            _ => self.cayley_inv(&x).expect("u^a is nilpotent"),
        }
    }

    /// Inverse of [`Self::ua_elem`].
    pub fn ua_index(&self, u: &Elem) -> Result<u64> {
        let x = match self.spec.series {
            Series::A => u.sub(&self.one()),
            _ => self.cayley(u)?,
        };
        Ok(self.coder().encode(&self.coords_checked(&x)?))
    }

    /// Block-diagonal part of the parabolic component.
    pub fn levi_part(&self, g: &Elem) -> Mat {
        g.a.masked(|i, j| self.partition.block_of(i) == self.partition.block_of(j))
    }

    /// g = h·u with h ∈ L and u ∈ U^a, returned as (index of h, index of u).
    pub fn decompose(&self, g: &Elem) -> Result<(usize, u64)> {
        let h = self.levi_part(g);
        let hi = self.levi_position(&h).ok_or_else(|| Error::Internal("Levi part outside L".into()))?;
        let u = self.mul(&Elem::from_parabolic(h.inverse()?), g);
        Ok((hi, self.ua_index(&u)?))
    }

    pub fn compose(&self, h: usize, u: u64) -> Elem {
        self.mul(&Elem::from_parabolic(self.levi[h].clone()), &self.ua_elem(u))
    }

    /// Element id h·|U^a| + u of G^a.
    pub fn ga_id(&self, g: &Elem) -> Result<u64> {
        let (h, u) = self.decompose(g)?;
        Ok(h as u64 * self.ua_order() + u)
    }

    pub fn ga_elem(&self, id: u64) -> Elem {
        let n = self.ua_order();
        self.compose((id / n) as usize, id % n)
    }

    pub fn group_mul(&self, g1: &GroupElement, g2: &GroupElement) -> GroupElement {
        GroupElement(self.mul(&g1.0, &g2.0))
    }

    pub fn group_inv(&self, g: &GroupElement) -> Result<GroupElement> {
        Ok(GroupElement(self.inv(&g.0)?))
    }

    /// The element p(1 + λ) of G^a.
    pub fn group_element(&self, parabolic: &Mat, lambda: &Mat) -> GroupElement {
        let one_plus = Elem { a: Mat::identity(self.m, self.p), b: self.low(lambda) };
        GroupElement(self.mul(&Elem::from_parabolic(parabolic.clone()), &one_plus))
    }

    fn gl_contraction_gens(&self) -> Vec<Elem> {
        let m = self.m;
        let p = self.p;
        let g = p.primitive_root();
        let mut out = Vec::new();
        for i in 0..m {
            let mut t = Mat::identity(m, p);
            t.set(i, i, g);
            out.push(Elem::from_parabolic(t));
        }
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                if self.is_lower(i, j) {
                    out.push(Elem { a: Mat::identity(m, p), b: Mat::unit(m, p, i, j, 1) });
                } else {
                    let mut e = Mat::identity(m, p);
                    e.set(i, j, 1);
                    out.push(Elem::from_parabolic(e));
                }
            }
        }
        out
    }

    fn build_unipotent_gens(&self) -> Result<Vec<Elem>> {
        let mut out = Vec::new();
        for b in &self.basis {
            match self.spec.series {
                Series::A => out.push(self.one().add(&b.vector)),
                _ => {
                    for t in 1..self.p.get() {
                        out.push(self.cayley_inv(&b.vector.scale(t))?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The doubled 2M×2M realization [[A, B], [0, A]].
    pub fn realize_doubled(&self, x: &Elem) -> Mat {
        let m = self.m;
        let mut out = Mat::zeros(2 * m, self.p);
        for i in 0..m {
            for j in 0..m {
                out.set(i, j, x.a.get(i, j));
                out.set(i + m, j + m, x.a.get(i, j));
                out.set(i, j + m, x.b.get(i, j));
            }
        }
        out
    }

    /// Ranks R_km (k < m) and R̃_km (m < k) of the doubled realization.
    pub fn doubled_ranks(&self, x: &Elem) -> (HashMap<(usize, usize), usize>, HashMap<(usize, usize), usize>) {
        let l = self.partition.num_blocks();
        let big = self.realize_doubled(x);
        let mut r = HashMap::new();
        let mut rt = HashMap::new();
        for k in 0..l {
            for mm in 0..l {
                if k < mm {
                    let idx: Vec<usize> = (k..=mm).flat_map(|b| self.partition.range(b)).collect();
                    r.insert((k, mm), big.submatrix_rank(&idx, &idx));
                } else if mm < k {
                    let mut idx: Vec<usize> = (k..l).flat_map(|b| self.partition.range(b)).collect();
                    idx.extend((0..=mm).flat_map(|b| self.partition.range(b).map(|q| q + self.m)));
                    rt.insert((k, mm), big.submatrix_rank(&idx, &idx));
                }
            }
        }
        (r, rt)
    }

    /// Basis index of the vector attached to a root.
    pub fn basis_index(&self, root: &Root) -> Result<usize> {
        self.basis.iter().position(|b| b.root == *root).ok_or_else(|| Error::RootOutside(root.to_string()))
    }

    /// X_{D,φ} as coordinates.
    pub fn x_coords(&self, roots: &[(Root, u32)]) -> Result<Vec<u32>> {
        let mut v = vec![0u32; self.dim()];
        for (r, phi) in roots {
            v[self.basis_index(r)?] = *phi % self.p.get();
        }
        Ok(v)
    }

    pub fn summary(&self) -> ContextSummary {
        ContextSummary {
            series: self.spec.series.to_string(),
            rank: self.spec.n,
            prime: self.p.get(),
            partition: self.partition.sizes().to_vec(),
            central_segment: self.partition.central().is_some(),
            matrix_size: self.m,
            dim_ua: self.dim(),
            ua_order: self.ua_order(),
            levi_order: self.levi_order(),
            ga_order: self.ga_order(),
            basis: self
                .basis
                .iter()
                .map(|b| format!("{}{}", if b.upper { "E" } else { "F" }, b.root))
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualSide {
    /// (g·Λ)(X) = Λ(Xg)
    Left,
    /// (Λ·g)(X) = Λ(gX)
    Right,
    /// (g·λ)(X) = λ(g^†Xg)
    Dagger,
    /// (g·Λ)(X) = Λ(g^{-1}Xg)
    Coadjoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContextSummary {
    pub series: String,
    pub rank: usize,
    pub prime: u32,
    pub partition: Vec<usize>,
    pub central_segment: bool,
    pub matrix_size: usize,
    pub dim_ua: usize,
    pub ua_order: u64,
    pub levi_order: usize,
    pub ga_order: u64,
    pub basis: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(s: Series, n: usize, sizes: Option<&[usize]>, p: u32) -> ContractionContext {
        let spec = LieTypeSpec::new(s, n).unwrap();
        let part = match sizes {
            Some(z) => PartitionSpec::new(spec, z).unwrap(),
            None => PartitionSpec::borel(spec),
        };
        build_context(spec, part, Prime::new(p).unwrap()).unwrap()
    }

    #[test]
    fn orders() {
        let c = ctx(Series::A, 2, None, 3);
        assert_eq!(c.ua_order(), 9);
        assert_eq!(c.ga_order(), 36);
        let c = ctx(Series::C, 2, None, 3);
        assert_eq!(c.ua_order(), 6561);
        assert_eq!(c.levi_order(), 4);
        let c = ctx(Series::A, 3, Some(&[2, 1]), 3);
        assert_eq!(c.ua_order(), 81);
        assert_eq!(c.levi_order(), 96);
        let c = ctx(Series::B, 2, None, 3);
        assert_eq!(c.levi_order(), 8);
    }

    #[test]
    fn structure_relations_a() {
        let c = ctx(Series::A, 3, None, 3);
        let e = |i: i64, j: i64| c.basis[c.coordinate_of((i, j)).unwrap()].vector.clone();
        assert_eq!(c.mul(&e(1, 2), &e(2, 3)), e(1, 3));
        assert!(c.mul(&e(2, 1), &e(3, 2)).is_zero());
        let c2 = ctx(Series::A, 2, None, 3);
        let e2 = |i: i64, j: i64| c2.basis[c2.coordinate_of((i, j)).unwrap()].vector.clone();
        assert!(c2.mul(&e2(1, 2), &e2(2, 1)).is_zero());
    }

    #[test]
    fn cayley_roundtrip_c2() {
        let c = ctx(Series::C, 2, None, 3);
        for idx in (0..c.ua_order()).step_by(37) {
            let u = c.ua_elem(idx);
            assert!(c.in_group(&u));
            assert_eq!(c.ua_index(&u).unwrap(), idx);
        }
    }

    #[test]
    fn doubled_pattern_n2() {
        let c = ctx(Series::A, 2, None, 3);
        let x = c.from_coords(&[1, 2]);
        let big = c.realize_doubled(&x);
        let nz: Vec<(usize, usize)> =
            (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| big.get(i, j) != 0).collect();
        assert_eq!(nz, vec![(0, 1), (1, 2), (2, 3)]);
    }
}
