//! The smallest Ad_h-invariant ideal u^a_h, and u^a_D with W*_D for a basic pair.

use parcon::contraction::build_context;
use parcon::matfq::Mat;
use parcon::orbits::{ideal_uad, smallest_invariant_ideal, Subspace};
use parcon::rook::{BasicPair, RookPlacement};
use parcon::roots::{LieTypeSpec, PartitionSpec, Series};
use parcon::scalars::Prime;

fn show(ctx: &parcon::contraction::ContractionContext, s: &Subspace) -> String {
    (0..ctx.dim())
        .filter(|&k| s.basis().iter().any(|v| v[k] != 0))
        .map(|k| format!("{}{}", if ctx.basis[k].upper { "E" } else { "F" }, ctx.basis[k].root))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> parcon::Result<()> {
    let p = Prime::new(3)?;
    let spec = LieTypeSpec::new(Series::A, 4)?;
    let ctx = build_context(spec, PartitionSpec::borel(spec), p)?;
    let h = Mat::diag(p, &[1, 1, 2, 1]);
    let ideal = smallest_invariant_ideal(&ctx, &h)?;
    println!("A_4, h = diag(1,1,2,1): dim u^a_h = {}", ideal.dim());
    println!("  {}", show(&ctx, &ideal));

    let spec = LieTypeSpec::new(Series::C, 2)?;
    let ctx = build_context(spec, PartitionSpec::borel(spec), p)?;
    let roots = [(2, -1), (-1, 1)].map(|r| *ctx.sys.find(r).expect("root"));
    let bp = BasicPair::trivial(RookPlacement::new(roots.to_vec()));
    let (uad, w) = ideal_uad(&ctx, &bp, 1 << 20)?;
    println!("C_2, D = {}: u^a_D = {}, dim W*_D = {}", bp.label(), show(&ctx, &uad), w.dim());
    Ok(())
}
