//! Exact Schur-type numbers f_a(r) by complete search.
//!
//! Run with `cargo run --release --example schur_numbers`.

use partreg::search::{rado_number, SearchBudget};
use partreg::IntMatrix;

fn main() -> partreg::Result<()> {
    let budget = SearchBudget::unlimited();
    for (a, r) in [(1, 1), (1, 2), (2, 2), (3, 2), (1, 3)] {
        let m = IntMatrix::row_vector(&[a, 1, -1]);
        let out = rado_number(&m, r, &budget, 1000)?;
        let cert = out.certificate.as_ref().map(|c| c.certificate()).unwrap_or_default();
        println!(
            "f_{a}({r}) = {:>3}  ({} nodes)  certificate {cert}",
            out.value, out.stats.nodes
        );
    }
    Ok(())
}
