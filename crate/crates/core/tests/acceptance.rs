//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use parcon::contraction::{ContractionContext, Elem};
use parcon::matfq::Mat;
use parcon::orbits::{ideal_uad, smallest_invariant_ideal, GaGroup, GroupOracle, UaGroup};
use parcon::rook::{
    canonical_basic_pairs, canonical_form_a, enumerate_basic_pairs, enumerate_rook_placements, weyl_act_a,
    weyl_act_bcd, weyl_group_a, weyl_group_bcd, BasicPair, Canonicalizer, RookPlacement,
};
use parcon::roots::Series;
use parcon::superchar::{
    check_hd_trivial_on_quotient, h_d, h_gamma, stabilizer_formula, stabilizer_uad_a, theory_ga, theory_ua, xi_d, SupercharTheory,
    TheoryOptions,
};
use parcon::verify::{check_axioms, VerificationReport, VerifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::ctx;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn axioms(th: &SupercharTheory, g: &dyn GroupOracle) -> Result<(), String> {
    let rep: VerificationReport = check_axioms(th, g, VerifyOptions::default());
    match rep.failures().first() {
        None => Ok(()),
        Some(f) => Err(format!("{} failed: {}", f.name, f.witness.clone().unwrap_or_default())),
    }
}

fn ua_suite(c: &ContractionContext) -> Result<SupercharTheory, String> {
    let th = theory_ua(c, TheoryOptions::default()).map_err(|e| e.to_string())?;
    axioms(&th, &UaGroup::new(c).map_err(|e| e.to_string())?)?;
    Ok(th)
}

fn ga_suite(c: &ContractionContext) -> Result<SupercharTheory, String> {
    let th = theory_ga(c, TheoryOptions::default()).map_err(|e| e.to_string())?;
    axioms(&th, &GaGroup::new(c).map_err(|e| e.to_string())?)?;
    Ok(th)
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, || format!("took {:?}, limit {:?}", t.elapsed(), limit))
}

fn sorted_sizes(orbits: &[Vec<u64>]) -> Vec<usize> {
    let mut s: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
    s.sort();
    s
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let c = ctx(Series::A, 2, None, 3);
    let th = ua_suite(&c)?;
    within(t, Duration::from_secs(1))?;
    let mut lib: Vec<usize> = th.classes.iter().map(|k| k.size).collect();
    lib.sort();
    let brute = sorted_sizes(&common::orbits_two_sided_full(&c));
    ensure(lib == vec![1, 2, 2, 4], || format!("class sizes {:?}", lib))?;
    ensure(brute == lib, || format!("oracle sizes {:?}", brute))?;
    Ok(format!("sizes {:?}, |U^a| = {}", lib, c.ua_order()))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let c = ctx(Series::A, 2, None, 3);
    let th = ga_suite(&c)?;
    within(t, Duration::from_secs(5))?;
    ensure(c.ga_order() == 36, || format!("|G^a| = {}", c.ga_order()))?;
    ensure(th.classes.len() == 10 && th.chars.len() == 10, || {
        format!("{} classes, {} characters", th.classes.len(), th.chars.len())
    })?;
    Ok("10 superclasses, 10 supercharacters".into())
}

fn criterion_3() -> Outcome {
    let mut out = Vec::new();
    for sizes in [None, Some(&[2usize, 1][..])] {
        let c = ctx(Series::A, 3, sizes, 3);
        let canonical: BTreeSet<RookPlacement> = enumerate_rook_placements(&c)
            .iter()
            .map(|d| canonical_form_a(&c, d).map(|x| x.0))
            .collect::<parcon::Result<_>>()
            .map_err(|e| e.to_string())?;
        let brute = common::orbits_on_ua(&c).len();
        let th = ua_suite(&c)?;
        ensure(canonical.len() == brute && brute == th.classes.len(), || {
            format!("canonical {}, oracle {}, classes {}", canonical.len(), brute, th.classes.len())
        })?;
        ga_suite(&c)?;
        out.push(format!("{:?}: {}", c.partition.sizes(), brute));
    }
    Ok(out.join(", "))
}

fn criterion_4() -> Outcome {
    let c = ctx(Series::C, 2, None, 3);
    ensure(c.ua_order() == 6561, || format!("|u^a| = {}", c.ua_order()))?;
    let orbits = common::orbits_on_ua(&c);
    let labels = canonical_basic_pairs(&c).map_err(|e| e.to_string())?;
    ensure(orbits.len() == 119 && labels.len() == 119, || {
        format!("{} orbits, {} labels", orbits.len(), labels.len())
    })?;
    let mut hit = vec![0usize; orbits.len()];
    let orbit_of: std::collections::HashMap<u64, usize> =
        orbits.iter().enumerate().flat_map(|(i, o)| o.iter().map(move |&x| (x, i))).collect();
    for bp in &labels {
        let x = c.coder().encode(&c.x_coords(&bp.terms()).map_err(|e| e.to_string())?);
        hit[orbit_of[&x]] += 1;
    }
    ensure(hit.iter().all(|&h| h == 1), || "labels do not biject with orbits".into())?;
    ua_suite(&c)?;
    ga_suite(&c)?;
    Ok("119 orbits, one canonical pair each".into())
}

fn criterion_5() -> Outcome {
    let c = ctx(Series::B, 2, None, 3);
    let th = ua_suite(&c)?;
    for bp in enumerate_basic_pairs(&c) {
        ensure(bp.phi.iter().all(|&v| v == 1), || format!("φ ≠ 1 on {}", bp.label()))?;
    }
    Ok(format!("{} classes, φ ≡ 1", th.classes.len()))
}

fn support(c: &ContractionContext, s: &parcon::orbits::Subspace) -> BTreeSet<((i64, i64), bool)> {
    (0..c.dim())
        .filter(|&k| s.basis().iter().any(|v| v[k] != 0))
        .map(|k| (c.basis[k].root.pair, c.basis[k].upper))
        .collect()
}

fn criterion_6() -> Outcome {
    let c = ctx(Series::A, 2, None, 3);
    let big = c.realize_doubled(&c.from_coords(&[1, 2]));
    let nz: Vec<(usize, usize)> =
        (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| big.get(i, j) != 0).collect();
    ensure(nz == vec![(0, 1), (1, 2), (2, 3)], || format!("doubled pattern {:?}", nz))?;

    let c = ctx(Series::A, 4, None, 3);
    let shape = |pair, eq: [(usize, usize); 2]| -> Result<(), String> {
        let hs = h_gamma(&c, pair).map_err(|e| e.to_string())?;
        let expect: Vec<usize> = (0..c.levi.len())
            .filter(|&i| {
                let h = &c.levi[i];
                eq.iter().all(|&(a, b)| h.get(a, a) == h.get(b, b))
            })
            .collect();
        ensure(hs == expect && hs.len() == 4, || format!("H_{:?} has {} elements", pair, hs.len()))
    };
    shape((1, 3), [(0, 1), (1, 2)])?;
    shape((3, 1), [(0, 2), (2, 3)])?;

    let ideal = smallest_invariant_ideal(&c, &Mat::diag(c.p, &[1, 1, 2, 1])).map_err(|e| e.to_string())?;
    let got: BTreeSet<(i64, i64)> = support(&c, &ideal).into_iter().map(|x| x.0).collect();
    let star: BTreeSet<(i64, i64)> =
        [(1, 3), (1, 4), (2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (3, 4), (4, 3)].into_iter().collect();
    ensure(got == star && ideal.dim() == 9, || format!("u^a_h support {:?}", got))?;

    let c = ctx(Series::C, 2, None, 3);
    let roots = [(2, -1), (-1, 1)].map(|p| *c.sys.find(p).unwrap());
    let bp = BasicPair::trivial(RookPlacement::new(roots.to_vec()));
    let (uad, w) = ideal_uad(&c, &bp, 1 << 20).map_err(|e| e.to_string())?;
    let expect: BTreeSet<((i64, i64), bool)> = [((1, 2), false), ((2, -2), true)].into_iter().collect();
    ensure(support(&c, &uad) == expect && uad.dim() == 2, || format!("u^a_D = {:?}", support(&c, &uad)))?;
    ensure(w.dim() == 6, || format!("dim W*_D = {}", w.dim()))?;
    let hd = h_d(&c, &bp.placement).map_err(|e| e.to_string())?;
    let one = Mat::identity(4, c.p);
    let ok = hd.len() == 2 && hd.iter().all(|&i| c.levi[i] == one || c.levi[i] == one.neg());
    ensure(ok, || format!("|H_D| = {}", hd.len()))?;
    Ok("doubled pattern, H_(1,3), H_(3,1), star pattern, C2 u^a_D / H_D / W*_D".into())
}

fn form_identity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for (n, sizes) in [(2, None), (3, None), (3, Some(&[2usize, 1][..])), (4, Some(&[1usize, 2, 1][..]))] {
        let c = ctx(Series::A, n, sizes, 3);
        for _ in 0..500 {
            let g = c.ga_elem(rng.gen_range(0..c.ga_order()));
            let x1 = c.decode(rng.gen_range(0..c.ua_order()));
            let x2 = c.decode(rng.gen_range(0..c.ua_order()));
            let l = c.bilinear_form(&c.mul(&g, &x1), &x2);
            let r = c.bilinear_form(&x1, &c.mul(&x2, &g));
            ensure(l == r, || format!("(gX₁, X₂) ≠ (X₁, X₂g) at n = {}", n))?;
        }
    }
    Ok(())
}

fn canonical_uniqueness(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let c = ctx(Series::A, 4, Some(&[2, 2]), 3);
    let places = enumerate_rook_placements(&c);
    let w = weyl_group_a(&c);
    for _ in 0..200 {
        let d = &places[rng.gen_range(0..places.len())];
        let (w1, w2) = (&w[rng.gen_range(0..w.len())], &w[rng.gen_range(0..w.len())]);
        let moved = weyl_act_a(&c, w1, d, w2).map_err(|e| e.to_string())?;
        let (a, v1, v2) = canonical_form_a(&c, d).map_err(|e| e.to_string())?;
        let (b, _, _) = canonical_form_a(&c, &moved).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("A: canonical form moved for {:?}", d.pairs()))?;
        ensure(weyl_act_a(&c, &v1, d, &v2).map_err(|e| e.to_string())? == a, || "A: witness does not verify".into())?;
    }
    for (s, n, sizes) in [(Series::B, 2, vec![1, 3, 1]), (Series::C, 2, vec![2, 2]), (Series::D, 3, vec![2, 2, 2])] {
        let c = ctx(s, n, Some(&sizes), 3);
        let pairs = enumerate_basic_pairs(&c);
        let w = weyl_group_bcd(&c).map_err(|e| e.to_string())?;
        let canon = Canonicalizer::new(&c).map_err(|e| e.to_string())?;
        for _ in 0..200 {
            let bp = &pairs[rng.gen_range(0..pairs.len())];
            let moved = weyl_act_bcd(&c, &w[rng.gen_range(0..w.len())], bp).map_err(|e| e.to_string())?;
            let a = canon.canonical(&c, bp).map_err(|e| e.to_string())?;
            let b = canon.canonical(&c, &moved).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{:?}: canonical form moved for {}", s, bp.label()))?;
        }
    }
    Ok(())
}

fn cayley_suite() -> Result<(), String> {
    for s in [Series::C, Series::B] {
        let c = ctx(s, 2, None, 3);
        let group = common::closure(&c, &c.unipotent_gens);
        ensure(group.len() as u64 == c.ua_order(), || format!("{:?}: |U^a| = {}", s, group.len()))?;
        let mut images = HashSet::new();
        for u in &group {
            let y = c.cayley(u).map_err(|e| e.to_string())?;
            let coords = c.coords_checked(&y).map_err(|e| e.to_string())?;
            ensure(c.dagger(&y) == c.zero().sub(&y), || format!("{:?}: f(u)^† ≠ −f(u)", s))?;
            ensure(c.cayley_inv(&y).map_err(|e| e.to_string())? == *u, || format!("{:?}: f⁻¹f(u) ≠ u", s))?;
            images.insert(coords);
        }
        ensure(images.len() == group.len(), || format!("{:?}: f is not injective", s))?;
    }
    Ok(())
}

/// {u = 1 + Y : Λ_D(uX) = Λ_D(X) for all X}, by products in the algebra.
fn stabilizer_oracle(c: &ContractionContext, d: &RookPlacement) -> Vec<Vec<u32>> {
    let lam = c.x_coords(&BasicPair::trivial(d.clone()).terms()).unwrap();
    let value = |x: &Elem| c.pair(&lam, &c.coords(x));
    (0..c.ua_order())
        .map(|y| c.decode(y))
        .filter(|y| {
            let u = c.one().add(y);
            c.basis.iter().all(|b| value(&c.mul(&u, &b.vector)) == value(&b.vector))
        })
        .map(|y| c.coords(&y))
        .collect()
}

fn stabilizer_suite() -> Result<usize, String> {
    let mut count = 0;
    for (n, sizes) in [(2, None), (3, None), (3, Some(&[2usize, 1][..])), (3, Some(&[1usize, 2][..]))] {
        let c = ctx(Series::A, n, sizes, 3);
        for d in enumerate_rook_placements(&c) {
            let formula = stabilizer_formula(&c, &d).map_err(|e| e.to_string())?;
            let brute = stabilizer_oracle(&c, &d);
            let ok = brute.len() as u64 == 3u64.pow(formula.dim() as u32) && brute.iter().all(|v| formula.contains(v));
            ensure(ok, || format!("stabilizer of {:?}: formula dim {}, oracle {}", d.pairs(), formula.dim(), brute.len()))?;
            count += 1;
        }
    }
    Ok(count)
}

fn xi_suite() -> Result<usize, String> {
    let mut count = 0;
    for (n, sizes) in [(2, None), (3, None), (3, Some(&[2usize, 1][..]))] {
        let c = ctx(Series::A, n, sizes, 3);
        for bp in canonical_basic_pairs(&c).map_err(|e| e.to_string())? {
            let uad = stabilizer_uad_a(&c, &bp.placement).map_err(|e| e.to_string())?;
            let r = xi_d(&c, &bp.placement, &uad).map_err(|e| e.to_string())?;
            ensure(r.genuine, || format!("ξ_D not a character for {}", bp.label()))?;
            count += 1;
        }
    }
    Ok(count)
}

fn quotient_suite() -> Result<usize, String> {
    let mut count = 0;
    for s in [Series::C, Series::B] {
        let c = ctx(s, 2, None, 3);
        for bp in canonical_basic_pairs(&c).map_err(|e| e.to_string())? {
            let hd = h_d(&c, &bp.placement).map_err(|e| e.to_string())?;
            let (uad, _) = ideal_uad(&c, &bp, 1 << 20).map_err(|e| e.to_string())?;
            check_hd_trivial_on_quotient(&c, &hd, &uad).map_err(|e| e.to_string())?;
            for &h in &hd {
                let g = Elem::from_parabolic(c.levi[h].clone());
                for b in &c.basis {
                    let moved = c.adjoint(&g, &b.vector).map_err(|e| e.to_string())?.sub(&b.vector);
                    ensure(uad.contains(&c.coords(&moved)), || format!("{:?}: Ad_h − 1 leaves u^a_D at {}", s, bp.label()))?;
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    form_identity(&mut rng)?;
    canonical_uniqueness(&mut rng)?;
    cayley_suite()?;
    let stab = stabilizer_suite()?;
    let xi = xi_suite()?;
    let hd = quotient_suite()?;
    Ok(format!("{} stabilizers, {} ξ_D, {} (h, basis) pairs checked on u^a/u^a_D", stab, xi, hd))
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 7] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
    ];
    let mut failed = 0;
    for (k, f) in criteria {
        let t = Instant::now();
        match f() {
            Ok(note) => println!("criterion {}: PASS ({}; {:.2}s)", k, note, t.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL ({})", k, why);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
