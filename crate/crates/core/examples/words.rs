//! Reduction, cyclic cores, roots and conjugators.
//!
//! ```bash
//! cargo run --example words
//! ```

use fg_core::parse::parse_word;
use fg_core::{Alphabet, Result};

fn main() -> Result<()> {
    let al = Alphabet::parse_list("a b x")?;
    let w = parse_word("x^-1 b x^2 b x", &al)?;
    let cw = w.cyclic_reduce();
    println!("w            = {}", al.render(&w));
    println!("cyclic core  = {}", al.render(&cw.core));
    println!("conjugator   = {}", al.render(&cw.conjugator));

    let p = parse_word("(a b a^-1)^6", &al)?;
    let (r, k) = p.root()?;
    println!("root of {} = ({})^{k}", al.render(&p), al.render(&r));

    let u = parse_word("a b^2", &al)?;
    let v = parse_word("x b^2 a x^-1", &al)?;
    if let Some(c) = u.conjugator_to(&v) {
        println!("{} = c u c^-1 with c = {}", al.render(&v), al.render(&c));
    }
    println!(
        "[a, b] = {}",
        al.render(&al.gen("a").commutator(&al.gen("b")))
    );
    Ok(())
}
