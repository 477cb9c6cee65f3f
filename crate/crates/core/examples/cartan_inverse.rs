//! Invert the q-deformed Cartan matrix of A3 and compare with the closed form.

use qwalg::cartan::{c_matrix, c_matrix_closed_form_a, cartan_data, inverse_defect, CartanType};

fn main() -> qwalg::Result<()> {
    let cd = cartan_data(CartanType::A, 3)?;
    let c = c_matrix(&cd)?;
    for (i, row) in c.iter().enumerate() {
        for (j, k) in row.iter().enumerate() {
            println!("C_{}{}(u) = {k}", i + 1, j + 1);
        }
    }
    let defect_zero = inverse_defect(&cd, &c).iter().flatten().all(|k| k.is_zero());
    println!("B C = [m]^2 I: {defect_zero}");
    println!("closed form agrees: {}", c == c_matrix_closed_form_a(4));
    Ok(())
}
