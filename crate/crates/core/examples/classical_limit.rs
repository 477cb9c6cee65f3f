//! Expand the sl2 brackets around h = 0 mode by mode.

use qwalg::modespace::{classical_limit_report, dual_limit_report, miura_limit_report};

fn main() -> qwalg::Result<()> {
    for r in [classical_limit_report(6, 3)?, miura_limit_report(4)?, dual_limit_report(6)?] {
        println!("{}", r.summary_line());
        println!("  {}", r.anchors);
    }
    Ok(())
}
