//! DIMACS export of a colouring problem, solved by the bundled DPLL solver.
//!
//! Run with `cargo run --example cnf_export`.

use partreg::cnf::Cnf;
use partreg::search::{decode_assignment, export_cnf, find_monochromatic, ConstraintSystem, Domain};

fn main() -> partreg::Result<()> {
    for n in [4, 5] {
        let sys = ConstraintSystem::schur(1, Domain::Interval(n))?;
        let text = export_cnf(&sys, 2)?;
        let cnf = Cnf::parse(&text)?;
        let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap_or_default();
        match cnf.solve() {
            Some(assignment) => {
                let colouring = decode_assignment(sys.ground(), 2, &assignment)?;
                let clean = find_monochromatic(&sys, &colouring)?.is_none();
                println!("N = {n}: {header}, satisfiable, colouring {} (valid: {clean})", colouring.certificate());
            }
            None => println!("N = {n}: {header}, unsatisfiable"),
        }
    }
    Ok(())
}
