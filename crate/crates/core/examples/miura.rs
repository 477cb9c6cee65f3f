//! Factor the sl_N q-difference operator into first-order pieces and check
//! the Baxter relation for sl2.

use qwalg::cartan::CartanType;
use qwalg::qdiff::{baxter_residual, miura_factorization};
use qwalg::walg::build_preset;

fn main() -> qwalg::Result<()> {
    for rank in 1..=3 {
        let p = build_preset(CartanType::A, rank)?;
        let m = miura_factorization(&p)?;
        println!("N = {}: {}", rank + 1, m.describe());
    }
    let r = baxter_residual(&build_preset(CartanType::A, 1)?)?;
    println!("Baxter residual for sl2: {r}");
    Ok(())
}
