//! Prime fields, exact cyclotomic numbers and the additive character.
//!
//! [`CycloNumber`] stores an element of Q(ζ_N) in the power basis
//! 1, ζ, …, ζ^{φ(N)−1}, reduced modulo the N-th cyclotomic polynomial.
//! [`ExpSum`] is the cheaper unreduced form Σ c_k ζ_N^k used in hot loops.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An odd prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p < 3 || p > 46_000 || !is_prime(p as u64) {
            return Err(Error::BadPrime(p as i64));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u32) -> Result<u32> {
        if a % self.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.0 as u64 - 2))
    }

    pub fn is_square(self, a: u32) -> bool {
        a == 0 || self.pow(a, (self.0 as u64 - 1) / 2) == 1
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(self) -> u32 {
        let q = self.0 - 1;
        let mut factors = Vec::new();
        let mut m = q;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..self.0)
            .find(|&g| factors.iter().all(|&f| self.pow(g, (q / f) as u64) != 1))
            .unwrap_or(1)
    }

    pub fn elem(self, v: i64) -> FieldElement {
        FieldElement { value: self.reduce(v), p: self }
    }
}

/// An element of F_p, always reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    p: Prime,
}

impl FieldElement {
    pub fn new(p: Prime, v: i64) -> Self {
        p.elem(v)
    }
    pub fn value(self) -> u32 {
        self.value
    }
    pub fn prime(self) -> Prime {
        self.p
    }
    pub fn inv(self) -> Result<Self> {
        Ok(FieldElement { value: self.p.inv(self.value)?, p: self.p })
    }
    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, o: Self) -> Self {
        assert_eq!(self.p, o.p, "mixed moduli");
        FieldElement { value: self.p.add(self.value, o.value), p: self.p }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, o: Self) -> Self {
        assert_eq!(self.p, o.p, "mixed moduli");
        FieldElement { value: self.p.sub(self.value, o.value), p: self.p }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, o: Self) -> Self {
        assert_eq!(self.p, o.p, "mixed moduli");
        FieldElement { value: self.p.mul(self.value, o.value), p: self.p }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        FieldElement { value: self.p.neg(self.value), p: self.p }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

/// Binary and unary field operations; `b` is ignored for `Inv` and `Neg`.
pub fn field_arith(a: FieldElement, b: FieldElement, op: FieldOp) -> Result<FieldElement> {
    Ok(match op {
        FieldOp::Add => a + b,
        FieldOp::Sub => a - b,
        FieldOp::Mul => a * b,
        FieldOp::Inv => a.inv()?,
        FieldOp::Neg => -a,
    })
}

/// The smallest positive non-residue modulo `p`.
pub fn find_nonsquare(p: Prime) -> FieldElement {
    let d = (2..p.get()).find(|&a| !p.is_square(a)).expect("odd prime has non-squares");
    p.elem(d as i64)
}

// ---------------------------------------------------------------------------
// cyclotomic fields

struct CycloField {
    deg: usize,
    /// x^k mod Φ_n for k in 0..2n
    pow: Vec<Vec<i64>>,
    units: Vec<usize>,
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dn = den.len() - 1;
    let mut q = vec![0i64; r.len() - dn];
    for k in (0..q.len()).rev() {
        let c = r[k + dn] / den[dn];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            r[k + i] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn cyclotomic_poly(n: usize) -> Vec<i64> {
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = poly_divexact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

impl CycloField {
    fn build(n: usize) -> Self {
        let phi = cyclotomic_poly(n);
        let deg = phi.len() - 1;
        let mut pow = Vec::with_capacity(2 * n);
        let mut cur = vec![0i64; deg];
        cur[0] = 1;
        if deg == 0 {
            cur = vec![];
        }
        for _ in 0..2 * n.max(1) {
            pow.push(cur.clone());
            if deg == 0 {
                continue;
            }
            let top = cur[deg - 1];
            let mut next = vec![0i64; deg];
            next[1..deg].copy_from_slice(&cur[..deg - 1]);
            for i in 0..deg {
                next[i] -= top * phi[i];
            }
            cur = next;
        }
        let units = (1..=n.max(1)).filter(|&a| a.gcd(&n) == 1).map(|a| a % n.max(1)).collect();
        CycloField { deg, pow, units }
    }
}

fn field(n: usize) -> Arc<CycloField> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CycloField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut g = cache.lock().unwrap();
    g.entry(n).or_insert_with(|| Arc::new(CycloField::build(n))).clone()
}

/// Euler's totient, the degree of Q(ζ_n).
pub fn totient(n: usize) -> usize {
    field(n).deg
}

/// Canonical integer coefficients of Σ c_k ζ_n^k.
pub fn reduce_exps(n: usize, c: &[i64]) -> Vec<i64> {
    let f = field(n);
    let mut out = vec![0i64; f.deg];
    for (k, &ck) in c.iter().enumerate() {
        if ck != 0 {
            for (o, &t) in out.iter_mut().zip(&f.pow[k % n]) {
                *o += ck * t;
            }
        }
    }
    out
}

/// Exact element of the cyclotomic field Q(ζ_n).
#[derive(Clone, Debug)]
pub struct CycloNumber {
    n: usize,
    c: Vec<BigRational>,
}

impl CycloNumber {
    pub fn zero(n: usize) -> Self {
        let n = n.max(1);
        CycloNumber { n, c: vec![BigRational::zero(); field(n).deg] }
    }

    pub fn one(n: usize) -> Self {
        Self::from_rational(n, BigRational::one())
    }

    pub fn from_int(n: usize, v: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(n: usize, v: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = v;
        z
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: usize, k: i64) -> Self {
        let n = n.max(1);
        let f = field(n);
        let k = k.rem_euclid(n as i64) as usize;
        CycloNumber { n, c: f.pow[k].iter().map(|&v| BigRational::from_integer(v.into())).collect() }
    }

    /// Builds Σ c_k ζ_n^k from integer coefficients indexed by exponent.
    pub fn from_exponents(n: usize, c: &[i64]) -> Self {
        let r = reduce_exps(n.max(1), c);
        CycloNumber { n: n.max(1), c: r.into_iter().map(|v| BigRational::from_integer(v.into())).collect() }
    }

    pub fn conductor(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// The rational value if the number lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.c.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Re-express in Q(ζ_m) for a multiple `m` of the conductor.
    pub fn lift(&self, m: usize) -> Self {
        assert!(m % self.n == 0, "conductor {} does not divide {}", self.n, m);
        if m == self.n {
            return self.clone();
        }
        let s = m / self.n;
        let f = field(m);
        let mut out = vec![BigRational::zero(); f.deg];
        for (k, ck) in self.c.iter().enumerate() {
            if !ck.is_zero() {
                for (o, &t) in out.iter_mut().zip(&f.pow[(k * s) % m]) {
                    if t != 0 {
                        *o += ck * BigRational::from_integer(t.into());
                    }
                }
            }
        }
        CycloNumber { n: m, c: out }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.n == b.n {
            (a.clone(), b.clone())
        } else {
            let m = a.n.lcm(&b.n);
            (a.lift(m), b.lift(m))
        }
    }

    fn galois(&self, a: usize) -> Self {
        let f = field(self.n);
        let mut out = vec![BigRational::zero(); f.deg];
        for (k, ck) in self.c.iter().enumerate() {
            if !ck.is_zero() {
                for (o, &t) in out.iter_mut().zip(&f.pow[(k * a) % self.n]) {
                    if t != 0 {
                        *o += ck * BigRational::from_integer(t.into());
                    }
                }
            }
        }
        CycloNumber { n: self.n, c: out }
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        self.galois(self.n - 1)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloNumber { n: self.n, c: self.c.iter().map(|x| x * r).collect() }
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> BigRational {
        let f = field(self.n);
        let mut acc = CycloNumber::one(self.n);
        for &a in &f.units {
            acc = &acc * &self.galois(a);
        }
        acc.c.first().cloned().unwrap_or_else(BigRational::one)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let f = field(self.n);
        let mut acc = CycloNumber::one(self.n);
        for &a in &f.units {
            if a % self.n != 1 % self.n {
                acc = &acc * &self.galois(a);
            }
        }
        let nrm = (&acc * self).as_rational()?;
        Some(acc.scale(&nrm.recip()))
    }

    /// Decimal approximation, for display only.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, ck) in self.c.iter().enumerate() {
            let v = ck.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * k as f64 / self.n as f64;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }

    /// Coefficients rendered as strings, lowest power first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.c.iter().map(|x| x.to_string()).collect()
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, o: &Self) -> bool {
        if self.n == o.n {
            self.c == o.c
        } else {
            let (a, b) = Self::common(self, o);
            a.c == b.c
        }
    }
}

impl Eq for CycloNumber {}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let neg = ck.is_negative();
            let a = ck.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if k == 1 {
                        write!(f, "z{}", self.n)?
                    } else {
                        write!(f, "z{}^{}", self.n, k)?
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, o: &CycloNumber) -> CycloNumber {
        let (a, b) = CycloNumber::common(self, o);
        CycloNumber { n: a.n, c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect() }
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, o: &CycloNumber) -> CycloNumber {
        let (a, b) = CycloNumber::common(self, o);
        CycloNumber { n: a.n, c: a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect() }
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, o: &CycloNumber) -> CycloNumber {
        let (a, b) = CycloNumber::common(self, o);
        let f = field(a.n);
        let mut prod = vec![BigRational::zero(); 2 * f.deg.max(1)];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out = vec![BigRational::zero(); f.deg];
        for (k, ck) in prod.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            if k < f.deg {
                out[k] += ck;
            } else {
                for (o, &t) in out.iter_mut().zip(&f.pow[k]) {
                    if t != 0 {
                        *o += ck * BigRational::from_integer(t.into());
                    }
                }
            }
        }
        CycloNumber { n: a.n, c: out }
    }
}

impl<'a> Neg for &'a CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { n: self.n, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Add for CycloNumber {
    type Output = CycloNumber;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl Sub for CycloNumber {
    type Output = CycloNumber;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl Mul for CycloNumber {
    type Output = CycloNumber;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> Self {
        -&self
    }
}

/// The additive character t ↦ ζ_p^t.
pub fn additive_character(t: FieldElement) -> CycloNumber {
    CycloNumber::root_of_unity(t.prime().get() as usize, t.value() as i64)
}

/// A formal integer combination Σ c_k ζ_n^k of n-th roots of unity.
///
/// Arithmetic happens in Z[x]/(x^n − 1); equality in the field needs
/// [`ExpSum::reduced`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpSum {
    n: usize,
    c: Vec<i64>,
}

impl ExpSum {
    pub fn zero(n: usize) -> Self {
        ExpSum { n: n.max(1), c: vec![0; n.max(1)] }
    }

    pub fn unit(n: usize, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.c[k.rem_euclid(z.n as i64) as usize] = 1;
        z
    }

    pub fn from_counts(n: usize, c: Vec<i64>) -> Self {
        assert_eq!(c.len(), n.max(1));
        ExpSum { n: n.max(1), c }
    }

    pub fn conductor(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[i64] {
        &self.c
    }

    pub fn add_term(&mut self, k: i64, m: i64) {
        let i = k.rem_euclid(self.n as i64) as usize;
        self.c[i] += m;
    }

    pub fn lift(&self, m: usize) -> Self {
        assert!(m % self.n == 0);
        let s = m / self.n;
        let mut out = vec![0; m];
        for (k, &v) in self.c.iter().enumerate() {
            out[k * s] += v;
        }
        ExpSum { n: m, c: out }
    }

    pub fn add(&self, o: &Self) -> Self {
        let m = self.n.lcm(&o.n);
        let (a, b) = (self.lift(m), o.lift(m));
        ExpSum { n: m, c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.n.lcm(&o.n);
        let (a, b) = (self.lift(m), o.lift(m));
        let mut out = vec![0i64; m];
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if y != 0 {
                    out[(i + j) % m] += x * y;
                }
            }
        }
        ExpSum { n: m, c: out }
    }

    pub fn scale(&self, s: i64) -> Self {
        ExpSum { n: self.n, c: self.c.iter().map(|x| x * s).collect() }
    }

    pub fn conj(&self) -> Self {
        let mut out = vec![0; self.n];
        for (k, &v) in self.c.iter().enumerate() {
            out[(self.n - k) % self.n] += v;
        }
        ExpSum { n: self.n, c: out }
    }

    /// Canonical integer coordinates in the power basis of Q(ζ_n).
    pub fn reduced(&self) -> Vec<i64> {
        reduce_exps(self.n, &self.c)
    }

    pub fn to_cyclo(&self) -> CycloNumber {
        CycloNumber::from_exponents(self.n, &self.c)
    }
}
