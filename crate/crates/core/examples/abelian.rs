//! Szmielew invariants of Z^n + Q^m.
//!
//! ```bash
//! cargo run --example abelian
//! ```

use fg_core::abelian::{self, TFAbelianGroup};
use fg_core::parse::{parse_abelian, print_abelian};
use fg_core::Result;

fn main() -> Result<()> {
    for text in ["Z", "Z + Q", "Z^2", "Q^3"] {
        let g = parse_abelian(text)?;
        println!("{:>6}: {}", print_abelian(&g), fg_core::json::szmielew(&g));
    }
    let z = TFAbelianGroup::new(1, 0);
    println!(
        "Z = Z + Q: {}",
        abelian::elem_equiv(&z, &TFAbelianGroup::new(1, 1))
    );
    println!(
        "Z = Z^2:   {}",
        abelian::elem_equiv(&z, &TFAbelianGroup::new(2, 0))
    );

    let s = abelian::small_dim_sentence(&TFAbelianGroup::new(1, 1), 2)?;
    println!("{} holds in Z + Q: {}", s.sentence.render(), s.holds);

    let chain = abelian::chain_demo(5)?;
    for (k, g) in chain.generators.iter().enumerate() {
        println!("H_{} = <{}>, rank {}", k + 1, g.join("; "), chain.ranks[k]);
    }
    Ok(())
}
