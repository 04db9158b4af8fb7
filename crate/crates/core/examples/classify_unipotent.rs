//! Superclasses of U^a for a type A contraction, matched to canonical rook placements.
//!
//! cargo run --example classify_unipotent -- 3 2,1

use parcon::contraction::build_context;
use parcon::orbits::superclasses_ua;
use parcon::rook::canonical_basic_pairs;
use parcon::roots::{LieTypeSpec, PartitionSpec, Series};
use parcon::scalars::Prime;

fn main() -> parcon::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(3, |s| s.parse().expect("rank"));
    let sizes: Vec<usize> = match args.get(1) {
        Some(s) => s.split(',').map(|t| t.parse().expect("block size")).collect(),
        None => vec![1; n],
    };
    let spec = LieTypeSpec::new(Series::A, n)?;
    let ctx = build_context(spec, PartitionSpec::new(spec, &sizes)?, Prime::new(3)?)?;
    let labels = canonical_basic_pairs(&ctx)?;
    let ua = superclasses_ua(&ctx, &labels, 1 << 22)?;

    println!("|U^a| = {}, {} superclasses", ctx.ua_order(), ua.classes.len());
    for k in &ua.classes {
        println!("  {:>5}  {}", k.size, k.labels.join(" = "));
    }
    Ok(())
}
