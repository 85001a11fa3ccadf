//! Quadratic equations: standard form, disc configurations and search.
//!
//! ```bash
//! cargo run --example quadratic
//! ```

use fg_core::parse::parse_equation;
use fg_core::quadratic::{self, AbelianOutcome, LsOutcome, SolveOutcome};
use fg_core::{Alphabet, Result};

fn main() -> Result<()> {
    let eq = parse_equation("?u^-1 a ?u ?v^-1 b ?v c = 1", None)?;
    let q = quadratic::classify(&eq)?;
    println!(
        "{}: genus {}, m_coef {}, N = {}",
        q.render(),
        q.genus,
        q.m_coef(),
        q.n_bound()
    );
    for c in quadratic::enumerate_configs(&q)? {
        println!("  {}", c.render());
    }

    let al = Alphabet::parse_list("e1 e2 e3")?;
    let eq = parse_equation("?x^8 ?y^2 ?z^-2 = e1^7 e2^2 e3^-2", Some(&al))?;
    match quadratic::abelian_obstruction(&eq) {
        AbelianOutcome::Obstructed { rows } => println!("obstructed at generators {rows:?}"),
        AbelianOutcome::Solvable { witness } => println!("abelian solution {witness:?}"),
    }
    println!("{:?}", quadratic::brute_solve(&eq, 3)?);

    let ab = Alphabet::parse_list("a b")?;
    let eq = parse_equation("a b ?v^-1 a^-1 b^-1 ?v", Some(&ab))?;
    if let SolveOutcome::Solution(vals) = quadratic::brute_solve(&eq, 4)? {
        println!("{} has v = {}", eq.render(), ab.render(&vals[0]));
    }

    let w = |s: &str| fg_core::parse::parse_word(s, &ab);
    if let LsOutcome::Conclusion { a1, a2, k1, k2 } =
        quadratic::ls_check(&w("a b a b")?, &w("b a")?, &w("a b a b a b")?, 2, 4)?
    {
        println!(
            "u = ({})^{k1}, v = ({})^{k2}",
            ab.render(&a1),
            ab.render(&a2)
        );
    }
    println!("{:?}", quadratic::imposs_sweep(2, 2));
    Ok(())
}
