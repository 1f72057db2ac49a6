//! The exact integer and rational linear algebra underneath.
//!
//! cargo run --example exact_linear_algebra

use toricqh::exactmath::lp::{LinearProgram, LpOutcome, Relation};
use toricqh::exactmath::{hermite_normal_form, rat, smith_normal_form, solve_rational, IntMatrix};

pub fn main() {
    let m = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    let (h, u) = hermite_normal_form(&m);
    println!("HNF rows {:?}, U rows {:?}", h.to_rows(), u.to_rows());
    let snf = smith_normal_form(&m);
    println!("invariant factors {:?}, torsion {:?}", snf.diagonal(), snf.torsion());
    println!("determinant {}", m.determinant());

    let x = solve_rational(&m, &[rat(1, 1), rat(0, 1), rat(-1, 2)]).expect("invertible");
    println!("solution {:?}", x.iter().map(|q| q.to_string()).collect::<Vec<_>>());

    // minimise x + y subject to x + 2y >= 3, 3x + y >= 4
    let mut lp = LinearProgram::new(2).all_nonnegative();
    lp.constrain(vec![rat(1, 1), rat(2, 1)], Relation::Ge, rat(3, 1));
    lp.constrain(vec![rat(3, 1), rat(1, 1)], Relation::Ge, rat(4, 1));
    match lp.minimize(vec![rat(1, 1), rat(1, 1)]).solve() {
        LpOutcome::Optimal { value, point } => {
            println!("LP optimum {value} at {:?}", point.iter().map(|q| q.to_string()).collect::<Vec<_>>())
        }
        other => println!("LP: {other:?}"),
    }
}
