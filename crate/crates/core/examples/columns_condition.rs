//! Columns condition for a few classic matrices.
//!
//! Run with `cargo run --example columns_condition`.

use partreg::{brauer_matrix, check_columns_condition, Field, IntMatrix};

fn show(name: &str, m: &IntMatrix, field: Field) -> partreg::Result<()> {
    let witness = check_columns_condition(&m.over(field))?;
    match witness {
        Some(p) => println!("{name:<22} over {field:<4} satisfies, partition {:?}", p.parts()),
        None => println!("{name:<22} over {field:<4} fails"),
    }
    Ok(())
}

fn main() -> partreg::Result<()> {
    let schur = IntMatrix::row_vector(&[1, 1, -1]);
    let doubling = IntMatrix::row_vector(&[1, 1, -2]);
    let sidon = IntMatrix::row_vector(&[1, 1, -1, -1]);
    let seven = IntMatrix::row_vector(&[1, 7, -7]);

    show("x + y = z", &schur, Field::Rational)?;
    show("x + y = 2z", &doubling, Field::Rational)?;
    show("x + y = z + w", &sidon, Field::Rational)?;
    // Over Q the (1 7 -7) system is regular, but 1 + 7 - 7 never vanishes mod 7
    // unless the 7s do.
    for field in [Field::Rational, Field::Modular(2), Field::Modular(3), Field::Modular(7)] {
        show("x + 7y = 7z", &seven, field)?;
    }
    show("x + y = 3z", &IntMatrix::row_vector(&[1, 1, -3]), Field::Rational)?;

    for k in 2..=5 {
        let b = brauer_matrix(k)?;
        show(&format!("Brauer k = {k}"), &b, Field::Rational)?;
    }
    Ok(())
}
