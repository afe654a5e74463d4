//! Bohr sets in Z/NZ, their size bounds and a regular pair of widths.
//!
//! Run with `cargo run --release --example bohr_sets`.

use partreg::fourier::{bohr_bounds_check, large_spectrum, regular_pair, BohrSet};

fn main() -> partreg::Result<()> {
    let n = 1009;
    let freqs = [1, 17, 300];
    for delta in [0.5, 1.0, 2.0] {
        let b = BohrSet::new(n, &freqs, delta)?;
        let bounds = bohr_bounds_check(n, &freqs, delta)?;
        println!(
            "B({freqs:?}, {delta}) has {} elements; lower bound {:.2e} ok = {}; doubling {:.2} <= {} ok = {}",
            b.members()?.len(),
            bounds.lower_bound,
            bounds.lower_ok,
            bounds.doubling_ratio,
            bounds.doubling_bound,
            bounds.doubling_ok,
        );
    }
    for eta in [0.1, 0.5] {
        let pair = regular_pair(n, &freqs[..2], 1.0, eta)?;
        println!("eta = {eta}: {pair:?}");
    }

    let base = BohrSet::new(n, &[1], 1.0)?.members()?;
    let set: Vec<u64> = base.iter().copied().filter(|x| x % 2 == 0).collect();
    let spec = large_spectrum(n, &set, &base, 0.5)?;
    println!("large spectrum of the even part of B({{1}}, 1): {:?}", spec.frequencies);
    Ok(())
}
