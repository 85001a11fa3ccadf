//! Primitivity and free factors via Whitehead moves.
//!
//! ```bash
//! cargo run --example whitehead
//! ```

use fg_core::parse::parse_word;
use fg_core::scenarios::b_image_text;
use fg_core::stallings::SubgroupGraph;
use fg_core::{whitehead, Alphabet, Result};

fn main() -> Result<()> {
    let ab = Alphabet::parse_list("a b")?;
    for w in ["a^2 b", "a b a b", "a b a^-1 b^-1", "a^2 b^2"] {
        let m = whitehead::minimize(&parse_word(w, &ab)?, 2)?;
        println!(
            "{w:>14}: minimal {} after {} moves",
            m.min_length,
            m.moves.len()
        );
    }

    // b's image in F(h, b~, x~): primitive exactly when m = 1
    let al = Alphabet::parse_list("a h b~ x~")?;
    for (n, m) in [(1, 1), (1, 2), (2, 2)] {
        let w = parse_word(&b_image_text(n, m), &al)?;
        let min = whitehead::minimize(&w, 4)?.min_length;
        let l = SubgroupGraph::build(&[al.gen("a"), w], 4);
        println!(
            "(n, m) = ({n}, {m}): minimal length {min}, <a, b image> free factor {}",
            whitehead::is_free_factor(&l)?
        );
    }
    Ok(())
}
