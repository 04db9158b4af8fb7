//! Character table of a Levi subgroup H_D, computed by Burnside-Dixon.

use parcon::contraction::build_context;
use parcon::rook::{BasicPair, RookPlacement};
use parcon::roots::{LieTypeSpec, PartitionSpec, Series};
use parcon::scalars::Prime;
use parcon::superchar::{h_d, levi_subgroup};

fn main() -> parcon::Result<()> {
    let spec = LieTypeSpec::new(Series::A, 4)?;
    let ctx = build_context(spec, PartitionSpec::new(spec, &[2, 2])?, Prime::new(3)?)?;
    for d in [RookPlacement::empty(), RookPlacement::new(vec![*ctx.sys.find((1, 3)).expect("root")])] {
        let hd = h_d(&ctx, &d)?;
        let (g, table) = levi_subgroup(&ctx, &hd)?;
        table.check()?;
        println!("D = {}: |H_D| = {}, {} classes", BasicPair::trivial(d).label(), g.order(), table.classes.len());
        let mut degrees: Vec<i64> = (0..table.chars.len()).map(|i| table.degree(i)).collect();
        degrees.sort();
        println!("  degrees {:?}", degrees);
    }
    Ok(())
}
