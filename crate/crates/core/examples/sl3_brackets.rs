//! Build the sl3 sigma series and print their three brackets.

use qwalg::cartan::CartanType;
use qwalg::report::Unit;
use qwalg::series::y_name;
use qwalg::walg::{build_preset, sigma_bracket, SigmaLabel};

fn main() -> qwalg::Result<()> {
    let p = build_preset(CartanType::A, 2)?;
    for i in 1..=2 {
        println!("sigma_{i}(z) = {}", p.sigma(SigmaLabel::Index(i))?);
    }
    for (i, j) in [(1, 1), (1, 2), (2, 2)] {
        let b = sigma_bracket(&p, SigmaLabel::Index(i), SigmaLabel::Index(j))?;
        println!("\n{{sigma_{i}(z), sigma_{j}(w)}} = {} * {{\n  {}\n}}", Unit::QDiff.symbol(), b.render(&y_name).replace('\n', "\n  "));
    }
    Ok(())
}
