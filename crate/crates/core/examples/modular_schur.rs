//! h_a(r): colourings of {1..N} inside Z/(N+1)Z that avoid a x + y = z.
//!
//! Run with `cargo run --release --example modular_schur`.

use partreg::search::{modular_schur_number, ModularSchurOptions, SearchBudget};

fn main() -> partreg::Result<()> {
    let budget = SearchBudget::unlimited();
    for a in 1..=3u64 {
        let out = modular_schur_number(a, 2, ModularSchurOptions::default(), &budget)?;
        let refuted: Vec<u64> = out.per_n.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
        println!("h_{a}(2) = {} (scanned up to {}, refuted N: {refuted:?})", out.value, out.cap);
    }
    let coprime = ModularSchurOptions { max_n: Some(12), require_coprime: true };
    let out = modular_schur_number(2, 2, coprime, &budget)?;
    println!("a = 2, only N + 1 odd, N <= 12: largest colourable N = {}", out.value);
    Ok(())
}
