//! Centralizer extensions: word problem and free-product embeddings.
//!
//! ```bash
//! cargo run --example towers
//! ```

use fg_core::parse::{parse_tower, print_tower};
use fg_core::towers::{build_primitive_tower, substitute};
use fg_core::{Alphabet, Result};

fn main() -> Result<()> {
    let spec = parse_tower("base: a b\nfree: x\next: t u=x^2 (b x^2)^1\n")?;
    print!("{}", print_tower(&spec));
    let al = spec.alphabet();
    for w in ["t^-1 x^2 b x^2 t", "t x^2 b x^2 t^-1 a", "b^-1 t^-1 b t"] {
        let w = spec.parse_word(w)?;
        let nf = spec.reduce(&w);
        println!(
            "{:>22} -> {:<14} trivial {}",
            al.render(&w),
            al.render(&nf),
            nf.is_identity()
        );
    }

    let t = spec.stable_letters()[0];
    let imgs = spec.embed_free_product(t, 2, &spec.parse_word("b")?)?;
    let x12 = Alphabet::parse_list("x1 x2")?;
    let comm = x12.gen("x1").commutator(&x12.gen("x2"));
    println!(
        "[x1, x2] -> {}",
        al.render(&spec.reduce(&substitute(&comm, &imgs)))
    );
    println!("{:?}", spec.check_injective_sample(&imgs, 300, 8, 1));

    let ab = Alphabet::parse_list("a b")?;
    let tower = build_primitive_tower(&ab, &[ab.gen("a"), ab.gen("b")])?;
    print!("{}", print_tower(&tower));
    Ok(())
}
