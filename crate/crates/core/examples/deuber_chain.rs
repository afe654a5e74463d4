//! From a columns-condition partition to an explicit (m, p, c)-set witness.
//!
//! Run with `cargo run --example deuber_chain`.

use partreg::algebra::Scalar;
use partreg::deuber::{deuber_witness, s_set, SSetSpec};
use partreg::{brauer_matrix, check_columns_condition, Field, IntMatrix};

fn list(v: &[Scalar]) -> String {
    let items: Vec<String> = v.iter().map(Scalar::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn main() -> partreg::Result<()> {
    let schur = IntMatrix::row_vector(&[1, 1, -1]).over(Field::Rational);
    let partition = check_columns_condition(&schur)?.expect("Schur matrix is regular");
    let w = deuber_witness(&schur, &partition)?;
    println!("Schur over Q: partition {:?}, d = {}, F = {}", partition.parts(), w.d, list(&w.multipliers));
    let t = [Scalar::rational(3, 2), Scalar::rational(-5, 7)];
    let x = w.lift(&t)?;
    println!("  t = (3/2, -5/7) gives solution {}", list(&x));
    println!("  check: {:?}", w.check(&schur, &t)?);

    let p = 7;
    let brauer = brauer_matrix(3)?.over(Field::Modular(p));
    let partition = check_columns_condition(&brauer)?.expect("Brauer matrix is regular");
    let w = deuber_witness(&brauer, &partition)?;
    println!("Brauer k = 3 over F7: d = {}, |F| = {}, W =\n{}", w.d, w.multipliers.len(), w.w);
    let mut good = 0;
    for t0 in 0..p as i64 {
        for t1 in 0..p as i64 {
            let t = [Scalar::modular(t0, p), Scalar::modular(t1, p)];
            good += usize::from(w.check(&brauer, &t)?.ok());
        }
    }
    println!("  all {} choices of t give solutions inside S(m, F; t): {}", p * p, good == (p * p) as usize);

    let spec = SSetSpec::new(
        vec![Scalar::modular(0, p), Scalar::modular(1, p)],
        vec![Scalar::modular(1, p), Scalar::modular(3, p)],
    )?;
    let s: Vec<Scalar> = s_set(&spec)?.into_iter().collect();
    println!("S(2, {{0, 1}}; (1, 3)) in F7 = {}", list(&s));
    Ok(())
}
