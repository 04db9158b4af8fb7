//! Orbits of the contracted symplectic group on u^a for C_2, with their
//! rank signatures and the discriminant component.

use std::collections::BTreeMap;

use parcon::contraction::build_context;
use parcon::orbits::superclasses_ua;
use parcon::rook::{canonical_basic_pairs, rank_signature};
use parcon::roots::{LieTypeSpec, PartitionSpec, Series};
use parcon::scalars::Prime;

fn main() -> parcon::Result<()> {
    let spec = LieTypeSpec::new(Series::C, 2)?;
    let ctx = build_context(spec, PartitionSpec::borel(spec), Prime::new(3)?)?;
    let labels = canonical_basic_pairs(&ctx)?;
    let ua = superclasses_ua(&ctx, &labels, 1 << 22)?;

    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for k in &ua.classes {
        *by_size.entry(k.size).or_default() += 1;
    }
    println!("{} orbits on {} points", ua.classes.len(), ctx.ua_order());
    for (size, count) in by_size {
        println!("  size {:>4}: {}", size, count);
    }

    let with_delta = labels.iter().filter(|bp| bp.phi.iter().any(|&v| v != 1)).count();
    println!("labels carrying a non-square value: {}", with_delta);
    let bp = labels.last().expect("at least one label");
    let sig = rank_signature(&ctx, bp);
    let r: Vec<_> = sig.r.iter().filter(|(_, &v)| v > 0).collect();
    println!("{}: nonzero r_km {:?}, d_k {:?}", bp.label(), r, sig.d);
    Ok(())
}
