//! Runs the claim checks and both axiom suites, printing one line per check.
//!
//! cargo run --release --example verify_report -- D 2

use parcon::contraction::build_context;
use parcon::orbits::{GaGroup, UaGroup};
use parcon::roots::{LieTypeSpec, PartitionSpec, Series};
use parcon::scalars::Prime;
use parcon::superchar::{theory_ga, theory_ua, TheoryOptions};
use parcon::verify::{check_axioms, check_claims, VerificationReport, VerifyOptions};

fn print(title: &str, rep: &VerificationReport) {
    println!("{}", title);
    for c in &rep.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        println!("  {} {:<28} {}ms {}", mark, c.name, c.millis.unwrap_or(0), c.witness.as_deref().unwrap_or(""));
    }
}

fn main() -> parcon::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let series: Series = args.first().map_or("A", String::as_str).parse()?;
    let n: usize = args.get(1).map_or(2, |s| s.parse().expect("rank"));
    let spec = LieTypeSpec::new(series, n)?;
    let ctx = build_context(spec, PartitionSpec::borel(spec), Prime::new(3)?)?;
    let opts = VerifyOptions { timing: true };

    print("claims", &check_claims(&ctx, opts));
    let ua = theory_ua(&ctx, TheoryOptions::default())?;
    print(&format!("U^a: {} classes", ua.classes.len()), &check_axioms(&ua, &UaGroup::new(&ctx)?, opts));
    let ga = theory_ga(&ctx, TheoryOptions::default())?;
    print(&format!("G^a: {} classes", ga.classes.len()), &check_axioms(&ga, &GaGroup::new(&ctx)?, opts));
    Ok(())
}
