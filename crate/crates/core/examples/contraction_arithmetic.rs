//! Group law, Cayley map and the doubled realization in a contraction.

use parcon::contraction::build_context;
use parcon::roots::{LieTypeSpec, PartitionSpec, Series};
use parcon::scalars::Prime;

fn main() -> parcon::Result<()> {
    let spec = LieTypeSpec::new(Series::A, 2)?;
    let ctx = build_context(spec, PartitionSpec::borel(spec), Prime::new(3)?)?;
    println!("basis of u^a:");
    for b in &ctx.basis {
        println!("  {} {}", if b.upper { "E" } else { "F" }, b.root);
    }
    let x = ctx.from_coords(&[1, 2]);
    println!("doubled realization of X = E + 2F:");
    for row in ctx.realize_doubled(&x).rows() {
        println!("  {:?}", row);
    }

    let g = ctx.ga_elem(17);
    let h = ctx.ga_elem(29);
    let gh = ctx.mul(&g, &h);
    println!("#17 * #29 = #{}", ctx.ga_id(&gh)?);
    println!("#17^-1 = #{}", ctx.ga_id(&ctx.inv(&g)?)?);

    let spec = LieTypeSpec::new(Series::B, 2)?;
    let ctx = build_context(spec, PartitionSpec::borel(spec), Prime::new(3)?)?;
    let y = ctx.decode(1234);
    let u = ctx.cayley_inv(&y)?;
    println!("B_2: f^-1(Y) in G: {}, f(f^-1(Y)) = Y: {}", ctx.in_group(&u), ctx.cayley(&u)? == y);
    println!("B_2: Y^dagger = -Y: {}", ctx.dagger(&y) == ctx.zero().sub(&y));
    Ok(())
}
