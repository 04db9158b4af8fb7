//! Prints the supercharacter table of G^a for A_2 over F_3 with exact values.

use parcon::contraction::build_context;
use parcon::orbits::GaGroup;
use parcon::roots::{LieTypeSpec, PartitionSpec, Series};
use parcon::scalars::Prime;
use parcon::superchar::{theory_ga, TheoryOptions};
use parcon::verify::{check_axioms, VerifyOptions};

fn main() -> parcon::Result<()> {
    let spec = LieTypeSpec::new(Series::A, 2)?;
    let ctx = build_context(spec, PartitionSpec::borel(spec), Prime::new(3)?)?;
    let th = theory_ga(&ctx, TheoryOptions::default())?;

    let heads: Vec<String> = th.classes.iter().map(|k| format!("|K|={}", k.size)).collect();
    println!("{:>24} {}", "", heads.join(" "));
    for ch in &th.chars {
        let row: Vec<String> = (0..th.classes.len()).map(|k| ch.value(k).to_string()).collect();
        println!("{:>24} {}", ch.label, row.join(" | "));
    }

    let rep = check_axioms(&th, &GaGroup::new(&ctx)?, VerifyOptions::default());
    println!("axioms pass: {}", rep.passed);
    Ok(())
}
