//! The 4x4 R-matrix as a power series in x, and the scalar-layer checks.

use qwalg::rmatrix::{check_crossing, check_f_equation, check_yang_baxter, r_matrix};
use qwalg::scalar::f_series;

fn main() -> qwalg::Result<()> {
    println!("f(x) = {}", f_series(3));
    println!("R(x) to order x^2:\n{}", r_matrix(2));
    println!("{}", check_f_equation(6).summary_line());
    println!("{}", check_crossing(4)?.summary_line());
    println!("{}", check_yang_baxter(2).summary_line());
    Ok(())
}
