//! Every verification scenario at its default parameters.
//!
//! ```bash
//! cargo run --release --example scenarios
//! ```

use fg_core::scenarios::{paper_verify, Scenario, ScenarioParams};
use fg_core::Result;

fn main() -> Result<()> {
    for sc in Scenario::ALL {
        let report = paper_verify(&ScenarioParams::new(sc), false)?;
        print!("{}", report.render());
        println!();
    }
    let strict = ScenarioParams::new(Scenario::Example31).with(2, 2, 1, 1);
    print!("{}", paper_verify(&strict, true)?.render());
    Ok(())
}
