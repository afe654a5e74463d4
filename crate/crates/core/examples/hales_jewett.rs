//! Monochromatic combinatorial lines in small coloured cubes.
//!
//! Run with `cargo run --example hales_jewett`.

use partreg::deuber::hj_line_search;

fn main() -> partreg::Result<()> {
    let (k, dims) = (2, 2);
    let mut with_line = 0;
    for mask in 0..16usize {
        let colouring: Vec<usize> = (0..4).map(|i| (mask >> i) & 1).collect();
        if let Some(line) = hj_line_search(k, dims, &colouring)? {
            with_line += 1;
            if mask < 3 {
                println!("colouring {colouring:?}: line {:?} with colour {}", line.words(k), line.colour);
            }
        }
    }
    println!("{with_line} of 16 two-colourings of [2]^2 contain a monochromatic line");

    // A 2-colouring of [3]^2 with no monochromatic line exists.
    let colouring = [0, 0, 1, 1, 1, 0, 0, 1, 1];
    println!("[3]^2 example: {:?}", hj_line_search(3, 2, &colouring)?);
    Ok(())
}
