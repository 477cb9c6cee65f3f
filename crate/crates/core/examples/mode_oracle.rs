//! Re-check engine brackets mode by mode and run the h -> 0 limits.

use std::time::Instant;

use qwalg::modespace::{modespace_ids, verify_modespace, Window};

fn main() -> qwalg::Result<()> {
    let w = Window::default();
    println!("window {w}");
    for id in modespace_ids() {
        let t = Instant::now();
        let r = verify_modespace(id, &w)?;
        println!("{:<60} {:>7.2}s", r.summary_line(), t.elapsed().as_secs_f64());
        if let Some(c) = r.cases.iter().find(|c| c.diff.is_some()) {
            println!("  first failure {}: {} vs {}", c.label, c.lhs, c.rhs);
        }
    }
    Ok(())
}
