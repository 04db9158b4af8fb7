//! Small finite groups given by a multiplication table: closure, conjugacy
//! classes, exact character tables and class-function inner products.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{CycloNumber, ExpSum};

/// All products of generators, breadth first from `identity`.
pub fn closure<T: Clone + Eq + Hash>(
    gens: &[T],
    identity: T,
    mul: impl Fn(&T, &T) -> T,
    cap: usize,
) -> Result<Vec<T>> {
    let mut seen: HashMap<T, ()> = HashMap::new();
    let mut out = vec![identity.clone()];
    seen.insert(identity, ());
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for g in gens {
            let y = mul(&x, g);
            if !seen.contains_key(&y) {
                if out.len() >= cap {
                    return Err(Error::GroupCap { cap });
                }
                seen.insert(y.clone(), ());
                out.push(y);
            }
        }
    }
    Ok(out)
}

/// A finite group with elements 0..n and an explicit multiplication table.
#[derive(Clone, Debug)]
pub struct SmallGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
}

pub const TABLE_CAP: usize = 4096;

impl SmallGroup {
    /// Builds the table of a list of elements closed under `mul`.
    pub fn from_elements<T: Clone + Eq + Hash>(elements: &[T], mul: impl Fn(&T, &T) -> T) -> Result<Self> {
        let n = elements.len();
        if n > TABLE_CAP {
            return Err(Error::GroupCap { cap: TABLE_CAP });
        }
        let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let mut table = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let c = mul(a, b);
                let k = *index.get(&c).ok_or_else(|| Error::Internal("element list is not closed".into()))?;
                table[i * n + j] = k as u32;
            }
        }
        Self::from_table(n, table)
    }

    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self> {
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x))
            .ok_or_else(|| Error::Internal("no identity".into()))?;
        let mut inv = vec![0u32; n];
        for x in 0..n {
            inv[x] = (0..n)
                .find(|&y| table[x * n + y] as usize == identity)
                .ok_or_else(|| Error::Internal("element without inverse".into()))? as u32;
        }
        Ok(SmallGroup { n, table, inv, identity })
    }

    /// Z/m1 × Z/m2 × …, elements in mixed radix.
    pub fn abelian(orders: &[usize]) -> Result<Self> {
        let n: usize = orders.iter().product();
        let split = |mut x: usize| {
            orders
                .iter()
                .map(|&m| {
                    let r = x % m;
                    x /= m;
                    r
                })
                .collect::<Vec<_>>()
        };
        let join = |v: &[usize]| v.iter().zip(orders).rev().fold(0, |acc, (&c, &m)| acc * m + c);
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            let va = split(a);
            for b in 0..n {
                let vb = split(b);
                let s: Vec<usize> = va.iter().zip(&vb).zip(orders).map(|((x, y), m)| (x + y) % m).collect();
                table[a * n + b] = join(&s) as u32;
            }
        }
        Self::from_table(n, table)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.n).fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, each sorted, ordered by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for x in 0..self.n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut cls = Vec::new();
            for g in 0..self.n {
                let y = self.mul(self.mul(g, x), self.inv(g));
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    cls.push(y);
                }
            }
            cls.sort_unstable();
            out.push(cls);
        }
        out
    }
}

/// Irreducible characters of a [`SmallGroup`], values as sums of e-th roots of unity.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub exponent: usize,
    pub identity: usize,
    /// chars[i][k] = χ_i on class k.
    pub chars: Vec<Vec<ExpSum>>,
}

impl CharacterTable {
    pub fn degree(&self, i: usize) -> i64 {
        self.chars[i][self.class_of_identity()].counts().iter().sum()
    }

    fn class_of_identity(&self) -> usize {
        self.class_of[self.identity]
    }

    /// χ_i(x) for an element.
    pub fn value(&self, i: usize, x: usize) -> &ExpSum {
        &self.chars[i][self.class_of[x]]
    }

    pub fn order(&self) -> usize {
        self.classes.iter().map(|c| c.len()).sum()
    }

    pub fn as_cyclo(&self) -> Vec<Vec<CycloNumber>> {
        self.chars.iter().map(|r| r.iter().map(|v| v.to_cyclo()).collect()).collect()
    }

    /// Exact row orthogonality and Σ χ(1)² = |G|.
    pub fn check(&self) -> Result<()> {
        let sizes: Vec<usize> = self.classes.iter().map(|c| c.len()).collect();
        let rows = self.as_cyclo();
        let deg2: i64 = (0..rows.len()).map(|i| self.degree(i).pow(2)).sum();
        if deg2 as usize != self.order() {
            return Err(Error::Claim("sum of squared degrees differs from the order".into()));
        }
        for i in 0..rows.len() {
            for j in i..rows.len() {
                let ip = inner_product_classes(&rows[i], &rows[j], &sizes);
                let expect = CycloNumber::from_int(self.exponent, (i == j) as i64);
                if ip != expect {
                    return Err(Error::Claim(format!("characters {i} and {j} fail orthogonality")));
                }
            }
        }
        Ok(())
    }
}

/// Character table; abelian groups go through direct extension of characters,
/// others through class-matrix eigenvectors modulo a prime and a lift.
pub fn character_table(g: &SmallGroup) -> Result<CharacterTable> {
    let classes = g.conjugacy_classes();
    let mut class_of = vec![0; g.order()];
    for (k, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = k;
        }
    }
    let exponent = g.exponent();
    let chars = if g.is_abelian() {
        abelian_chars(g, exponent, &class_of, classes.len())
    } else {
        dixon_chars(g, exponent, &classes, &class_of)?
    };
    let id_class = class_of[g.identity()];
    let mut t = CharacterTable { classes, class_of, exponent, identity: g.identity(), chars };
    t.chars.sort_by_key(|r| (r[id_class].counts().iter().sum::<i64>(), r.iter().map(|v| v.reduced()).collect::<Vec<_>>()));
    t.check()?;
    Ok(t)
}

fn abelian_chars(g: &SmallGroup, e: usize, class_of: &[usize], r: usize) -> Vec<Vec<ExpSum>> {
    // Subgroup A as element list; each character as exponents mod e.
    let mut members = vec![g.identity()];
    let mut in_a = vec![false; g.order()];
    in_a[g.identity()] = true;
    let mut chars: Vec<HashMap<usize, usize>> = vec![HashMap::from([(g.identity(), 0)])];
    for x in 0..g.order() {
        if in_a[x] {
            continue;
        }
        let mut k = 1;
        let mut xk = x;
        while !in_a[xk] {
            xk = g.mul(xk, x);
            k += 1;
        }
        let mut new_members = Vec::new();
        let mut pw = g.identity();
        for _ in 0..k {
            for &a in &members {
                new_members.push(g.mul(a, pw));
            }
            pw = g.mul(pw, x);
        }
        let mut new_chars = Vec::new();
        for chi in &chars {
            let c = chi[&xk];
            let x0 = c / k;
            for t in 0..k {
                let w = (x0 + t * e / k) % e;
                let mut ext = HashMap::new();
                let mut pw = g.identity();
                for j in 0..k {
                    for &a in &members {
                        ext.insert(g.mul(a, pw), (chi[&a] + j * w) % e);
                    }
                    pw = g.mul(pw, x);
                }
                new_chars.push(ext);
            }
        }
        for &y in &new_members {
            in_a[y] = true;
        }
        members = new_members;
        chars = new_chars;
    }
    chars
        .into_iter()
        .map(|chi| {
            let mut row = vec![ExpSum::zero(e); r];
            for (x, v) in chi {
                row[class_of[x]] = ExpSum::unit(e, v as i64);
            }
            row
        })
        .collect()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    r
}

fn invmod(a: u64, m: u64) -> u64 {
    powmod(a, m - 2, m)
}

/// Smallest prime ℓ ≡ 1 mod n with ℓ > lower.
pub fn prime_one_mod(n: u64, lower: u64) -> u64 {
    let mut l = (lower / n + 1) * n + 1;
    while !is_prime(l) {
        l += n;
    }
    l
}

/// An element of multiplicative order n in F_ℓ, ℓ ≡ 1 mod n.
pub fn root_of_unity_mod(n: u64, l: u64) -> u64 {
    let factors: Vec<u64> = (2..=n).filter(|&q| n % q == 0 && is_prime(q)).collect();
    for g in 2..l {
        let z = powmod(g, (l - 1) / n, l);
        if factors.iter().all(|&q| powmod(z, n / q, l) != 1) {
            return z;
        }
    }
    1
}

/// Null space of a matrix over F_ℓ (rows × cols), as column vectors.
fn nullspace(mut a: Vec<Vec<u64>>, cols: usize, l: u64) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(r) = (row..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(row, r);
        let iv = invmod(a[row][c], l);
        for v in a[row].iter_mut() {
            *v = *v * iv % l;
        }
        for r2 in 0..a.len() {
            if r2 != row && a[r2][c] != 0 {
                let f = a[r2][c];
                for k in 0..cols {
                    a[r2][k] = (a[r2][k] + l - f * a[row][k] % l) % l;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (l - a[i][f]) % l;
            }
            v
        })
        .collect()
}

fn dixon_chars(
    g: &SmallGroup,
    e: usize,
    classes: &[Vec<usize>],
    class_of: &[usize],
) -> Result<Vec<Vec<ExpSum>>> {
    let r = classes.len();
    let n = g.order() as u64;
    let root = (n as f64).sqrt().ceil() as u64;
    let l = prime_one_mod(e as u64, 2 * root + 1);
    let z = root_of_unity_mod(e as u64, l);
    // a[i][j][k] = #{(x,y) ∈ C_i × C_j : xy = rep_k}
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let mut mats = vec![vec![vec![0u64; r]; r]; r];
    for (i, ci) in classes.iter().enumerate() {
        for &x in ci {
            for (k, &zk) in reps.iter().enumerate() {
                let y = g.mul(g.inv(x), zk);
                mats[i][class_of[y]][k] += 1;
            }
        }
    }
    // M_i acts on ω by (M_i ω)_j = Σ_k a_ijk ω_k; eigenvalue ω_i.
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|k| {
            let mut v = vec![0u64; r];
            v[k] = 1;
            v
        })
        .collect()];
    for i in 0..r {
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let apply = |v: &Vec<u64>| -> Vec<u64> {
                (0..r).map(|j| (0..r).map(|k| mats[i][j][k] % l * v[k] % l).sum::<u64>() % l).collect()
            };
            let images: Vec<Vec<u64>> = basis.iter().map(apply).collect();
            for lam in 0..l {
                // Solve Σ c_b (image_b − λ basis_b) = 0.
                let s = basis.len();
                let rows: Vec<Vec<u64>> = (0..r)
                    .map(|j| (0..s).map(|b| (images[b][j] + l - lam * basis[b][j] % l) % l).collect())
                    .collect();
                let ns = nullspace(rows, s, l);
                if ns.is_empty() {
                    continue;
                }
                let sub: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|c| (0..r).map(|j| (0..s).map(|b| c[b] * basis[b][j] % l).sum::<u64>() % l).collect())
                    .collect();
                next.push(sub);
            }
        }
        spaces = next;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Internal("class matrices did not split into lines".into()));
    }
    let id_class = class_of[g.identity()];
    let inv_class: Vec<usize> = reps.iter().map(|&x| class_of[g.inv(x)]).collect();
    let mut out = Vec::new();
    for s in spaces {
        let mut w = s[0].clone();
        let f = invmod(w[id_class], l);
        for v in w.iter_mut() {
            *v = *v * f % l;
        }
        // |G| / χ(1)² = Σ_k ω_k ω_{k*} / |C_k|
        let mut sum = 0u64;
        for k in 0..r {
            sum = (sum + w[k] * w[inv_class[k]] % l * invmod(classes[k].len() as u64 % l, l)) % l;
        }
        let d2 = n % l * invmod(sum, l) % l;
        let d = (1..=root).find(|d| d * d % l == d2).ok_or_else(|| Error::Internal("degree not found".into()))?;
        let vals: Vec<u64> =
            (0..r).map(|k| d % l * w[k] % l * invmod(classes[k].len() as u64 % l, l) % l).collect();
        // eigenvalue multiplicities via power maps
        let mut row = Vec::with_capacity(r);
        for &x in &reps {
            let mut counts = vec![0i64; e];
            for (j, cnt) in counts.iter_mut().enumerate() {
                let mut acc = 0u64;
                let mut pw = g.identity();
                for t in 0..e {
                    let zt = powmod(z, ((e - (j * t) % e) % e) as u64, l);
                    acc = (acc + vals[class_of[pw]] * zt) % l;
                    pw = g.mul(pw, x);
                }
                let m = acc * invmod(e as u64 % l, l) % l;
                if m > d {
                    return Err(Error::Internal("eigenvalue multiplicity out of range".into()));
                }
                *cnt = m as i64;
            }
            row.push(ExpSum::from_counts(e, counts));
        }
        out.push(row);
    }
    Ok(out)
}

/// ⟨f, g⟩ = (1/|G|) Σ_k |C_k| f(C_k) conj(g(C_k)).
pub fn inner_product_classes(f: &[CycloNumber], g: &[CycloNumber], sizes: &[usize]) -> CycloNumber {
    let n: usize = sizes.iter().sum();
    let cond = f.iter().chain(g).map(|x| x.conductor()).fold(1, |a, b| a.lcm(&b));
    let mut acc = CycloNumber::zero(cond);
    for ((a, b), &s) in f.iter().zip(g).zip(sizes) {
        acc = &acc + &(a * &b.conj()).scale(&BigRational::from_integer(s.into()));
    }
    acc.scale(&BigRational::new(One::one(), n.into()))
}

pub fn inner_product(table: &CharacterTable, f: &[CycloNumber], g: &[CycloNumber]) -> CycloNumber {
    let sizes: Vec<usize> = table.classes.iter().map(|c| c.len()).collect();
    inner_product_classes(f, g, &sizes)
}

/// Multiplicities ⟨f, χ_i⟩ of a class function given on the classes of `table`.
pub fn decompose(f: &[CycloNumber], table: &CharacterTable) -> Vec<CycloNumber> {
    table.as_cyclo().iter().map(|chi| inner_product(table, f, chi)).collect()
}

/// True when every multiplicity is a nonnegative integer.
pub fn is_genuine(mults: &[CycloNumber]) -> bool {
    mults.iter().all(|m| match m.as_rational() {
        Some(q) => q.is_integer() && q >= BigRational::zero(),
        None => false,
    })
}

/// Orbits of a permutation action given by generator maps on 0..n.
pub fn orbits_of(n: usize, act: impl Fn(usize, usize) -> usize, gens: usize) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[s] = id;
        let mut orb = vec![s];
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for k in 0..gens {
                let y = act(k, x);
                if label[y] == usize::MAX {
                    label[y] = id;
                    orb.push(y);
                    q.push_back(y);
                }
            }
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}
