//! Run every identity in the W-algebra registry and print one line each.

use std::time::Instant;

use qwalg::walg::{registry_ids, verify};

fn main() -> qwalg::Result<()> {
    for id in registry_ids() {
        let t = Instant::now();
        let r = verify(id)?;
        println!("{:<60} {:>8.2?}", r.summary_line(), t.elapsed());
    }
    Ok(())
}
