//! Exact arithmetic in Q(zeta_N): Gauss sums and norms.

use num_rational::BigRational;
use parcon::scalars::{CycloNumber, Prime};

fn gauss_sum(p: Prime) -> CycloNumber {
    let n = p.get() as usize;
    let mut s = CycloNumber::zero(n);
    for t in 1..p.get() {
        let sign = if p.is_square(t) { 1 } else { -1 };
        s = &s + &CycloNumber::root_of_unity(n, t as i64).scale(&BigRational::from_integer(sign.into()));
    }
    s
}

fn main() -> parcon::Result<()> {
    for q in [3, 5, 7, 11, 13] {
        let p = Prime::new(q)?;
        let g = gauss_sum(p);
        println!("p = {:>2}: g^2 = {}, g*conj(g) = {}, norm = {}", q, &g * &g, &g * &g.conj(), g.norm());
    }
    let z = CycloNumber::root_of_unity(12, 1);
    let w = z.lift(24);
    println!("zeta_12 in Q(zeta_24): {}", w);
    println!("inverse of 1 + zeta_12: {}", (&CycloNumber::one(12) + &z).inv().expect("nonzero"));
    Ok(())
}
