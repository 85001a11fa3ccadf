//! Subgroup graphs: membership, bases and equality.
//!
//! ```bash
//! cargo run --example stallings
//! ```

use fg_core::parse::{parse_generating_set, parse_word, print_generating_set};
use fg_core::stallings::SubgroupGraph;
use fg_core::{Alphabet, Result};

fn main() -> Result<()> {
    let al = Alphabet::parse_list("a b x")?;
    let h = SubgroupGraph::build(&parse_generating_set("a, b x^2, x^2 (b x^2)^1", &al)?, 3);
    let k = SubgroupGraph::build(&parse_generating_set("a, b, x^2", &al)?, 3);
    println!("H: {} vertices, rank {}", h.vertex_count(), h.rank());
    println!("basis of H: {}", print_generating_set(&h.basis(), &al));
    println!("H = <a, b, x^2>: {}", h.equal(&k));
    for w in ["x^4 b", "x b x", "a^3 x^-2"] {
        println!("{w:>10} in H: {}", h.member(&parse_word(w, &al)?));
    }

    let c = SubgroupGraph::build(&parse_generating_set("a b a^-1", &al)?, 3);
    println!(
        "<a b a^-1> ~ <b>: {}",
        c.is_conjugate(&SubgroupGraph::build(&[al.gen("b")], 3))
    );
    Ok(())
}
