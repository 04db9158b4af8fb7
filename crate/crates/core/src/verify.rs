//! Axiom checks for supercharacter theories and re-checks of the structural
//! claims behind them, collected in a serializable report.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::contraction::ContractionContext;
use crate::error::Result;
use crate::grouptools::{prime_one_mod, root_of_unity_mod, SmallGroup};
use crate::orbits::{all_orbits, ideal_uad, GroupOracle};
use crate::rook::{
    canonical_basic_pairs, canonical_form_bcd, enumerate_basic_pairs, rank_signature, weyl_group_bcd, BasicPair,
    Canonicalizer, RankSignature,
};
use crate::roots::Series;
use crate::scalars::{reduce_exps, CycloNumber, ExpSum};
use crate::superchar::{check_hd_trivial_on_quotient, h_by_stabilizer, h_d, stabilizer_uad_a, xi_d, SupercharTheory};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    fn push(&mut self, name: &str, timing: bool, f: impl FnOnce() -> std::result::Result<(), String>) {
        let t = Instant::now();
        let r = f();
        self.checks.push(CheckResult {
            name: name.into(),
            passed: r.is_ok(),
            witness: r.err(),
            millis: timing.then(|| t.elapsed().as_millis() as u64),
        });
        self.passed = self.checks.iter().all(|c| c.passed);
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub timing: bool,
}

fn lcm(a: usize, b: usize) -> usize {
    num_integer::lcm(a, b)
}

fn lifted(v: &ExpSum, n: usize) -> Vec<i64> {
    v.lift(n).counts().to_vec()
}

/// Equality of two exponential sums as field elements.
pub fn exp_eq(a: &ExpSum, b: &ExpSum) -> bool {
    if a == b {
        return true;
    }
    let n = lcm(a.conductor(), b.conductor());
    reduce_exps(n, &lifted(a, n)) == reduce_exps(n, &lifted(b, n))
}

/// Checks (1)–(7) of a supercharacter theory against the group oracle.
pub fn check_axioms(theory: &SupercharTheory, group: &dyn GroupOracle, opts: VerifyOptions) -> VerificationReport {
    let mut rep = VerificationReport { passed: true, checks: Vec::new() };
    let order = group.order();
    let mut class_id = vec![u32::MAX; order as usize];
    rep.push("partition", opts.timing, || {
        for (k, c) in theory.classes.iter().enumerate() {
            for &x in &c.elements {
                if x >= order {
                    return Err(format!("class {} contains id {} outside the group", k, x));
                }
                if class_id[x as usize] != u32::MAX {
                    return Err(format!("element {} lies in classes {} and {}", x, class_id[x as usize], k));
                }
                class_id[x as usize] = k as u32;
            }
        }
        match class_id.iter().position(|&c| c == u32::MAX) {
            Some(x) => Err(format!("element {} is in no class", x)),
            None => Ok(()),
        }
    });
    let partition_ok = rep.passed;
    rep.push("identity_class", opts.timing, || {
        let id = group.identity();
        match theory.classes.iter().find(|c| c.elements.contains(&id)) {
            Some(c) if c.elements.len() == 1 => Ok(()),
            Some(c) => Err(format!("class of the identity has {} elements", c.elements.len())),
            None => Err("identity in no class".into()),
        }
    });
    rep.push("union_of_conjugacy_classes", opts.timing, || {
        if !partition_ok {
            return Err("skipped: not a partition".into());
        }
        let bad = (0..order).into_par_iter().find_map_first(|x| {
            for k in 0..group.num_gens() {
                match group.conj(k, x) {
                    Ok(y) if class_id[y as usize] == class_id[x as usize] => {}
                    Ok(y) => return Some(format!("generator {} conjugates {} to {} in another class", k, x, y)),
                    Err(e) => return Some(e.to_string()),
                }
            }
            None
        });
        bad.map_or(Ok(()), Err)
    });
    rep.push("constant_on_classes", opts.timing, || {
        let bad = theory.chars.par_iter().enumerate().find_map_first(|(i, ch)| {
            for (k, cls) in theory.classes.iter().enumerate() {
                for &x in &cls.elements {
                    if !exp_eq(&ch.pointwise.value(x), &ch.values[k]) {
                        return Some(format!("character {} ({}) varies on class {} at element {}", i, ch.label, k, x));
                    }
                }
            }
            None
        });
        bad.map_or(Ok(()), Err)
    });
    rep.push("orthogonality", opts.timing, || orthogonality(theory));
    rep.push("equal_counts", opts.timing, || {
        if theory.chars.len() == theory.classes.len() {
            Ok(())
        } else {
            Err(format!("{} characters, {} classes", theory.chars.len(), theory.classes.len()))
        }
    });
    rep.push("invertible_value_matrix", opts.timing, || invertible(theory));
    rep
}

fn common_conductor(theory: &SupercharTheory) -> usize {
    theory.chars.iter().flat_map(|c| c.values.iter()).fold(1, |n, v| lcm(n, v.conductor()))
}

/// Σ_K |K| v_i(K) conj(v_j(K)) = 0 for i ≠ j, exactly; scales are positive
/// rationals and do not affect vanishing.
fn orthogonality(theory: &SupercharTheory) -> std::result::Result<(), String> {
    let n = common_conductor(theory);
    let rows: Vec<Vec<Vec<i64>>> =
        theory.chars.iter().map(|c| c.values.iter().map(|v| lifted(v, n)).collect()).collect();
    let sizes: Vec<i64> = theory.classes.iter().map(|c| c.size as i64).collect();
    let k = rows.len();
    let bad = (0..k).into_par_iter().find_map_first(|i| {
        for j in i..k {
            let mut acc = vec![0i128; n];
            for (kk, &sz) in sizes.iter().enumerate() {
                let (a, b) = (&rows[i][kk], &rows[j][kk]);
                for (s, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let xs = x as i128 * sz as i128;
                    for (t, &y) in b.iter().enumerate() {
                        if y != 0 {
                            acc[(s + n - t) % n] += xs * y as i128;
                        }
                    }
                }
            }
            let acc: Option<Vec<i64>> = acc.iter().map(|&v| i64::try_from(v).ok()).collect();
            let Some(acc) = acc else { return Some(format!("overflow in ⟨χ{}, χ{}⟩", i, j)) };
            let red = reduce_exps(n, &acc);
            let zero = red.iter().all(|&c| c == 0);
            if i == j && zero {
                return Some(format!("character {} has zero norm", i));
            }
            if i != j && !zero {
                return Some(format!("⟨χ{}, χ{}⟩ ≠ 0", i, j));
            }
        }
        None
    });
    bad.map_or(Ok(()), Err)
}

fn mulmod(a: u64, b: u64, l: u64) -> u64 {
    ((a as u128 * b as u128) % l as u128) as u64
}

fn rank_mod(mut a: Vec<Vec<u64>>, l: u64) -> usize {
    let cols = a.first().map_or(0, |r| r.len());
    let mut row = 0;
    for c in 0..cols {
        let Some(r) = (row..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(row, r);
        let mut e = l - 2;
        let mut base = a[row][c];
        let mut iv = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                iv = mulmod(iv, base, l);
            }
            base = mulmod(base, base, l);
            e >>= 1;
        }
        let pivot: Vec<u64> = a[row].iter().map(|&v| mulmod(v, iv, l)).collect();
        a[row] = pivot.clone();
        a.par_iter_mut().enumerate().for_each(|(r2, rr)| {
            if r2 != row && rr[c] != 0 {
                let f = rr[c];
                for (x, &pv) in rr.iter_mut().zip(&pivot) {
                    *x = (*x + l - mulmod(f, pv, l)) % l;
                }
            }
        });
        row += 1;
    }
    row
}

/// Full rank of [v_i(K_j)] modulo ℓ ≡ 1 mod N under ζ_N ↦ ω certifies a
/// nonzero determinant in Z[ζ_N]; exact elimination decides otherwise.
fn invertible(theory: &SupercharTheory) -> std::result::Result<(), String> {
    let k = theory.chars.len();
    if k != theory.classes.len() {
        return Err("matrix is not square".into());
    }
    let n = common_conductor(theory);
    let mut lower = 1u64 << 30;
    for _ in 0..3 {
        let l = prime_one_mod(n as u64, lower);
        let w = root_of_unity_mod(n as u64, l);
        let pows: Vec<u64> = (0..n).scan(1u64, |s, _| {
            let v = *s;
            *s = mulmod(*s, w, l);
            Some(v)
        })
        .collect();
        let m: Vec<Vec<u64>> = theory
            .chars
            .iter()
            .map(|c| {
                c.values
                    .iter()
                    .map(|v| {
                        lifted(v, n).iter().zip(&pows).fold(0u64, |acc, (&cnt, &pw)| {
                            let c = cnt.rem_euclid(l as i64) as u64;
                            (acc + mulmod(c, pw, l)) % l
                        })
                    })
                    .collect()
            })
            .collect();
        if rank_mod(m, l) == k {
            return Ok(());
        }
        lower = l;
    }
    exact_invertible(theory)
}

fn exact_invertible(theory: &SupercharTheory) -> std::result::Result<(), String> {
    let n = common_conductor(theory);
    let mut a: Vec<Vec<CycloNumber>> =
        theory.chars.iter().map(|c| c.values.iter().map(|v| v.lift(n).to_cyclo()).collect()).collect();
    let k = a.len();
    for c in 0..k {
        let Some(r) = (c..k).find(|&r| !a[r][c].is_zero()) else {
            return Err(format!("value matrix is singular (column {})", c));
        };
        a.swap(c, r);
        let iv = a[c][c].inv().expect("nonzero");
        for r2 in c + 1..k {
            if a[r2][c].is_zero() {
                continue;
            }
            let f = &a[r2][c] * &iv;
            for j in c..k {
                let t = &f * &a[c][j];
                a[r2][j] = &a[r2][j] - &t;
            }
        }
    }
    Ok(())
}

/// Oracle over a table group; conjugation by every element.
pub struct TableGroup<'a>(pub &'a SmallGroup);

impl GroupOracle for TableGroup<'_> {
    fn order(&self) -> u64 {
        self.0.order() as u64
    }
    fn identity(&self) -> u64 {
        self.0.identity() as u64
    }
    fn num_gens(&self) -> usize {
        self.0.order()
    }
    fn conj(&self, k: usize, x: u64) -> Result<u64> {
        let g = self.0;
        Ok(g.mul(g.mul(k, x as usize), g.inv(k)) as u64)
    }
}

/// Exhaustive re-checks of the structural claims at one instance.
pub fn check_claims(ctx: &ContractionContext, opts: VerifyOptions) -> VerificationReport {
    let mut rep = VerificationReport { passed: true, checks: Vec::new() };
    let labels = match canonical_basic_pairs(ctx) {
        Ok(l) => l,
        Err(e) => {
            rep.push("canonical_labels", opts.timing, || Err(e.to_string()));
            return rep;
        }
    };
    let partition = ctx.orbit_maps().and_then(|m| all_orbits(ctx.coder(), &m, usize::MAX));
    rep.push("orbit_labels", opts.timing, || {
        let part = partition.as_ref().map_err(|e| e.to_string())?;
        let mut hit = vec![false; part.orbits.len()];
        for bp in &labels {
            let code = ctx.coder().encode(&ctx.x_coords(&bp.terms()).map_err(|e| e.to_string())?);
            let o = part.label[code as usize] as usize;
            if std::mem::replace(&mut hit[o], true) {
                return Err(format!("two canonical labels in the orbit of {}", bp.label()));
            }
        }
        match hit.iter().position(|h| !h) {
            Some(o) => Err(format!("orbit {} has no canonical label", o)),
            None => Ok(()),
        }
    });
    rep.push("signature_criterion", opts.timing, || {
        let part = partition.as_ref().map_err(|e| e.to_string())?;
        let canon = Canonicalizer::new(ctx).map_err(|e| e.to_string())?;
        let mut by_sig: HashMap<RankSignature, u32> = HashMap::new();
        let mut by_orbit: HashMap<u32, RankSignature> = HashMap::new();
        for bp in enumerate_basic_pairs(ctx) {
            let code = ctx.coder().encode(&ctx.x_coords(&bp.terms()).map_err(|e| e.to_string())?);
            let o = part.label[code as usize];
            let sig = rank_signature(ctx, &bp);
            if let Some(&prev) = by_sig.get(&sig) {
                if prev != o {
                    return Err(format!("equal signatures, different orbits at {}", bp.label()));
                }
            }
            if let Some(prev) = by_orbit.get(&o) {
                if *prev != sig {
                    return Err(format!("one orbit, different signatures at {}", bp.label()));
                }
            }
            by_sig.insert(sig.clone(), o);
            by_orbit.insert(o, sig);
            let c = canon.canonical(ctx, &bp).map_err(|e| e.to_string())?;
            let cc = ctx.coder().encode(&ctx.x_coords(&c.terms()).map_err(|e| e.to_string())?);
            if part.label[cc as usize] != o {
                return Err(format!("canonical form of {} leaves its orbit", bp.label()));
            }
        }
        Ok(())
    });
    if ctx.spec.series == Series::A {
        rep.push("form_identity", opts.timing, || {
            for g in &ctx.group_gens {
                for x1 in &ctx.basis {
                    for x2 in &ctx.basis {
                        let l = ctx.bilinear_form(&ctx.mul(g, &x1.vector), &x2.vector);
                        let r = ctx.bilinear_form(&x1.vector, &ctx.mul(&x2.vector, g));
                        if l != r {
                            return Err(format!("(gX₁, X₂) ≠ (X₁, X₂g) at {} / {}", x1.root, x2.root));
                        }
                    }
                }
            }
            Ok(())
        });
        rep.push("stabilizer", opts.timing, || {
            for bp in enumerate_basic_pairs(ctx) {
                stabilizer_uad_a(ctx, &bp.placement).map_err(|e| e.to_string())?;
            }
            Ok(())
        });
        rep.push("xi_genuine", opts.timing, || {
            for bp in &labels {
                let uad = stabilizer_uad_a(ctx, &bp.placement).map_err(|e| e.to_string())?;
                let r = xi_d(ctx, &bp.placement, &uad).map_err(|e| e.to_string())?;
                if !r.genuine {
                    return Err(format!("ξ_D is not a character for {}", bp.label()));
                }
            }
            Ok(())
        });
        rep.push("h_d_stabilizes_dual_orbit", opts.timing, || {
            for bp in &labels {
                let hd = h_d(ctx, &bp.placement).map_err(|e| e.to_string())?;
                let lam = ctx.x_coords(&bp.terms()).map_err(|e| e.to_string())?;
                let orb = crate::orbits::dual_orbit(ctx, &lam, usize::MAX).map_err(|e| e.to_string())?;
                let st = h_by_stabilizer(ctx, &orb).map_err(|e| e.to_string())?;
                if hd != st {
                    return Err(format!("H_D has {} elements, the stabilizer {} for {}", hd.len(), st.len(), bp.label()));
                }
            }
            Ok(())
        });
    } else {
        rep.push("weyl_conjugacy_criterion", opts.timing, || {
            let weyl = weyl_group_bcd(ctx).map_err(|e| e.to_string())?;
            let mut by_sig: HashMap<RankSignature, BasicPair> = HashMap::new();
            for bp in enumerate_basic_pairs(ctx) {
                let (m, _) = canonical_form_bcd(ctx, &weyl, &bp).map_err(|e| e.to_string())?;
                let sig = rank_signature(ctx, &bp);
                if let Some(prev) = by_sig.get(&sig) {
                    if *prev != m {
                        return Err(format!("{} and {} share an orbit but are not W-conjugate", prev.label(), m.label()));
                    }
                } else {
                    by_sig.insert(sig, m);
                }
            }
            Ok(())
        });
        rep.push("cayley_bijection", opts.timing, || {
            for idx in 0..ctx.ua_order() {
                let u = ctx.ua_elem(idx);
                if !ctx.in_group(&u) {
                    return Err(format!("f^-1 of code {} is not in G^a", idx));
                }
                let x = ctx.cayley(&u).map_err(|e| e.to_string())?;
                if ctx.dagger(&x) != x.scale(ctx.p.get() - 1) {
                    return Err(format!("f(u)† ≠ −f(u) at code {}", idx));
                }
                if ctx.ua_index(&u).map_err(|e| e.to_string())? != idx {
                    return Err(format!("f ∘ f^-1 ≠ id at code {}", idx));
                }
            }
            Ok(())
        });
        rep.push("h_d_trivial_on_quotient", opts.timing, || {
            for bp in &labels {
                let hd = h_d(ctx, &bp.placement).map_err(|e| e.to_string())?;
                let (uad, _) = ideal_uad(ctx, bp, usize::MAX).map_err(|e| e.to_string())?;
                check_hd_trivial_on_quotient(ctx, &hd, &uad).map_err(|e| e.to_string())?;
            }
            Ok(())
        });
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::build_context;
    use crate::grouptools::character_table;
    use crate::orbits::{GaGroup, Superclass, UaGroup};
    use crate::roots::{LieTypeSpec, PartitionSpec};
    use crate::scalars::Prime;
    use crate::superchar::{theory_ga, theory_ua, Pointwise, Supercharacter, Target, TheoryOptions};
    use num_rational::BigRational;
    use num_traits::One;
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn a2() -> ContractionContext {
        let spec = LieTypeSpec::new(Series::A, 2).unwrap();
        build_context(spec, PartitionSpec::borel(spec), Prime::new(3).unwrap()).unwrap()
    }

    fn irr_theory(g: &SmallGroup, ctx: &ContractionContext) -> SupercharTheory {
        let t = character_table(g).unwrap();
        let class_of: Vec<u32> = t.class_of.iter().map(|&c| c as u32).collect();
        let class_of = Arc::new(class_of);
        let classes: Vec<Superclass> = t
            .classes
            .iter()
            .map(|c| Superclass {
                labels: vec![],
                pairs: vec![],
                representative: c[0] as u64,
                size: c.len(),
                elements: c.iter().map(|&x| x as u64).collect(),
            })
            .collect();
        let chars = t
            .chars
            .iter()
            .enumerate()
            .map(|(i, row)| Supercharacter {
                label: format!("irr{}", i),
                scale: BigRational::one(),
                values: row.clone(),
                pointwise: Pointwise::Classwise { class_of: class_of.clone(), values: Arc::new(row.clone()) },
            })
            .collect();
        SupercharTheory {
            summary: ctx.summary(),
            target: Target::Ua,
            theorem: "irreducible characters",
            order: g.order() as u64,
            identity: g.identity() as u64,
            classes,
            chars,
            diagnostics: BTreeMap::new(),
        }
    }

    #[test]
    fn irreducible_theory_of_abelian_group_passes() {
        let g = SmallGroup::abelian(&[3, 2]).unwrap();
        let th = irr_theory(&g, &a2());
        let rep = check_axioms(&th, &TableGroup(&g), VerifyOptions::default());
        assert!(rep.passed, "{:?}", rep.failures());
    }

    #[test]
    fn a2_theories_pass() {
        let c = a2();
        let th = theory_ua(&c, TheoryOptions::default()).unwrap();
        let rep = check_axioms(&th, &UaGroup::new(&c).unwrap(), VerifyOptions::default());
        assert!(rep.passed, "{:?}", rep.failures());
        let th = theory_ga(&c, TheoryOptions::default()).unwrap();
        let rep = check_axioms(&th, &GaGroup::new(&c).unwrap(), VerifyOptions::default());
        assert!(rep.passed, "{:?}", rep.failures());
    }

    #[test]
    fn merged_classes_fail_counts() {
        let c = a2();
        let mut th = theory_ua(&c, TheoryOptions::default()).unwrap();
        let last = th.classes.pop().unwrap();
        let k = th.classes.len() - 1;
        th.classes[k].elements.extend(last.elements);
        th.classes[k].elements.sort_unstable();
        th.classes[k].size = th.classes[k].elements.len();
        for ch in th.chars.iter_mut() {
            ch.values.pop();
        }
        let rep = check_axioms(&th, &UaGroup::new(&c).unwrap(), VerifyOptions::default());
        assert!(!rep.get("equal_counts").unwrap().passed);
    }

    #[test]
    fn claims_a2() {
        let rep = check_claims(&a2(), VerifyOptions::default());
        assert!(rep.passed, "{:?}", rep.failures());
    }
}
