//! Checkers for two word-combinatorial lemmas: long common subwords of
//! powers force common roots, and a short `a^m b^m c^j` forces a
//! commutation between conjugates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LsOutcome {
    PremiseNotMet {
        reason: String,
    },
    /// `u = a1^k1`, `v = a2^k2`, `a1` and `a2` cyclic shifts of each other.
    Conclusion {
        a1: Word,
        a2: Word,
        k1: i64,
        k2: i64,
    },
    /// The premise held but the roots are unrelated. Never expected.
    Counterexample {
        reason: String,
    },
}

fn is_cyclic_shift(x: &Word, y: &Word) -> bool {
    x.len() == y.len() && y.is_subword_of(&(x * x))
}

/// If `w` is a subword of `u^n1` and of `v^n2` with `|w| >= |u| + |v|`,
/// `u` and `v` are powers of cyclic shifts of one word.
pub fn ls_check(u: &Word, v: &Word, w: &Word, n1: i64, n2: i64) -> Result<LsOutcome> {
    for (name, x) in [("u", u), ("v", v)] {
        if x.is_identity() {
            return Err(Error::TrivialInput);
        }
        if !x.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced(format!(
                "{name} is not cyclically reduced"
            )));
        }
    }
    let pu = u.pow(n1);
    let pv = v.pow(n2);
    if !w.is_subword_of(&pu) {
        return Ok(LsOutcome::PremiseNotMet {
            reason: "w is not a subword of u^n1".into(),
        });
    }
    if !w.is_subword_of(&pv) {
        return Ok(LsOutcome::PremiseNotMet {
            reason: "w is not a subword of v^n2".into(),
        });
    }
    if w.len() < u.len() + v.len() {
        return Ok(LsOutcome::PremiseNotMet {
            reason: format!("|w| = {} < |u| + |v| = {}", w.len(), u.len() + v.len()),
        });
    }
    let (a1, k1) = u.root()?;
    let (r2, k2) = v.root()?;
    let (a2, k2) = if is_cyclic_shift(&a1, &r2) {
        (r2, i64::from(k2))
    } else if is_cyclic_shift(&a1, &r2.inverse()) {
        (r2.inverse(), -i64::from(k2))
    } else {
        return Ok(LsOutcome::Counterexample {
            reason: "roots of u and v are not cyclic shifts".into(),
        });
    };
    Ok(LsOutcome::Conclusion {
        a1,
        a2,
        k1: i64::from(k1),
        k2,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutationWitness {
    /// Indices into `(a, b, c)`.
    pub first: usize,
    pub second: usize,
    /// `z` with `first` commuting with `z^-1 second z`.
    #[serde(skip)]
    pub conjugator: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImpossOutcome {
    PremiseNotMet {
        length: usize,
    },
    Witness(CommutationWitness),
    /// The premise held and no pair commutes. Never expected.
    Counterexample {
        length: usize,
    },
}

/// A `z` with `[x, z^-1 y z] = 1`, if any. In a free group this happens
/// iff one of them is trivial or their roots are conjugate up to inversion.
fn commuting_conjugator(x: &Word, y: &Word) -> Option<Word> {
    if x.is_identity() || y.is_identity() {
        return Some(Word::identity());
    }
    let (rx, _) = x.root().ok()?;
    let (ry, _) = y.root().ok()?;
    let w = ry
        .conjugator_to(&rx)
        .or_else(|| ry.inverse().conjugator_to(&rx))?;
    // w ry w^-1 = rx^(+-1), so z = w^-1.
    let z = w.inverse();
    debug_assert!(x.commutes_with(&y.conjugate_by(&z)));
    Some(z)
}

/// Checks the short-product lemma on one triple.
pub fn imposs_check(a: &Word, b: &Word, c: &Word, m: i64, j: i64) -> Result<ImpossOutcome> {
    if !a.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced(
            "a is not cyclically reduced".into(),
        ));
    }
    if m < 9 {
        return Err(Error::Precondition(format!("m = {m} must be at least 9")));
    }
    if j != 7 && j != 8 {
        return Err(Error::Precondition(format!("j = {j} must be 7 or 8")));
    }
    let d = &(&a.pow(m) * &b.pow(m)) * &c.pow(j);
    if d.len() >= a.len() {
        return Ok(ImpossOutcome::PremiseNotMet { length: d.len() });
    }
    let triple = [a, b, c];
    for first in 0..3 {
        for second in 0..3 {
            if first == second {
                continue;
            }
            if let Some(conjugator) = commuting_conjugator(triple[first], triple[second]) {
                return Ok(ImpossOutcome::Witness(CommutationWitness {
                    first,
                    second,
                    conjugator,
                }));
            }
        }
    }
    Ok(ImpossOutcome::Counterexample { length: d.len() })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ImpossSweep {
    pub triples: usize,
    pub premise_held: usize,
    pub witnesses: usize,
    pub counterexamples: usize,
}

/// Every triple over `F(rank)` with `|a|, |b|, |c| <= max_len`, `a`
/// cyclically reduced, for `m = 9` and `j` in `{7, 8}`.
pub fn imposs_sweep(rank: usize, max_len: usize) -> ImpossSweep {
    use rayon::prelude::*;
    let words = Word::enumerate(rank, max_len);
    let firsts: Vec<&Word> = words.iter().filter(|w| w.is_cyclically_reduced()).collect();
    firsts
        .par_iter()
        .map(|a| {
            let mut s = ImpossSweep::default();
            for b in &words {
                for c in &words {
                    for j in [7, 8] {
                        s.triples += 1;
                        match imposs_check(a, b, c, 9, j).expect("preconditions hold") {
                            ImpossOutcome::PremiseNotMet { .. } => {}
                            ImpossOutcome::Witness(_) => {
                                s.premise_held += 1;
                                s.witnesses += 1;
                            }
                            ImpossOutcome::Counterexample { .. } => {
                                s.premise_held += 1;
                                s.counterexamples += 1;
                            }
                        }
                    }
                }
            }
            s
        })
        .reduce(ImpossSweep::default, |x, y| ImpossSweep {
            triples: x.triples + y.triples,
            premise_held: x.premise_held + y.premise_held,
            witnesses: x.witnesses + y.witnesses,
            counterexamples: x.counterexamples + y.counterexamples,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_word;
    use crate::words::Alphabet;

    fn w(s: &str, al: &Alphabet) -> Word {
        parse_word(s, al).unwrap()
    }

    #[test]
    fn ls_examples() {
        let al = Alphabet::parse_list("a b c").unwrap();
        let out = ls_check(&w("a b", &al), &w("b a", &al), &w("b a b a b", &al), 4, 3).unwrap();
        assert_eq!(
            out,
            LsOutcome::Conclusion {
                a1: w("a b", &al),
                a2: w("b a", &al),
                k1: 1,
                k2: 1
            }
        );
        let out = ls_check(&w("a", &al), &w("a", &al), &w("a a", &al), 2, 2).unwrap();
        assert_eq!(
            out,
            LsOutcome::Conclusion {
                a1: w("a", &al),
                a2: w("a", &al),
                k1: 1,
                k2: 1
            }
        );
        let out = ls_check(&w("a b", &al), &w("a c", &al), &w("a", &al), 1, 1).unwrap();
        assert!(matches!(out, LsOutcome::PremiseNotMet { .. }));
    }

    #[test]
    fn ls_negative_powers() {
        let al = Alphabet::parse_list("a b").unwrap();
        let out = ls_check(
            &w("a b", &al),
            &w("a^-1 b^-1", &al),
            &w("b a b a", &al),
            3,
            -3,
        )
        .unwrap();
        match out {
            LsOutcome::Conclusion { a1, a2, k1, k2 } => {
                assert_eq!(a1.pow(k1), w("a b", &al));
                assert_eq!(a2.pow(k2), w("a^-1 b^-1", &al));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ls_rejects_non_cyclically_reduced() {
        let al = Alphabet::parse_list("a b").unwrap();
        assert!(matches!(
            ls_check(&w("a b a^-1", &al), &w("b", &al), &w("b", &al), 1, 1),
            Err(Error::NotCyclicallyReduced(_))
        ));
    }

    #[test]
    fn ls_exhaustive_small() {
        let words = Word::enumerate(2, 4);
        let cr: Vec<&Word> = words
            .iter()
            .filter(|x| !x.is_identity() && x.is_cyclically_reduced())
            .collect();
        let mut reached = 0;
        for u in &cr {
            let pu = u.pow(4);
            for v in &cr {
                let pv = v.pow(4);
                let need = u.len() + v.len();
                for len in need..=pu.len().min(pv.len()) {
                    for start in 0..=pu.len() - len {
                        let sub = Word::reduce(pu.letters()[start..start + len].iter().copied());
                        if !sub.is_subword_of(&pv) {
                            continue;
                        }
                        match ls_check(u, v, &sub, 4, 4).unwrap() {
                            LsOutcome::Conclusion { a1, a2, k1, k2 } => {
                                assert_eq!(&a1.pow(k1), *u);
                                assert_eq!(&a2.pow(k2), *v);
                                assert!(is_cyclic_shift(&a1, &a2));
                                reached += 1;
                            }
                            other => panic!("{other:?} for {u:?} {v:?} {sub:?}"),
                        }
                    }
                }
            }
        }
        assert!(reached > 0);
    }

    #[test]
    fn imposs_examples() {
        let al = Alphabet::parse_list("a b x y").unwrap();
        let a = w("a b a b^-1 a b b b", &al);
        assert_eq!(a.len(), 8);
        let out = imposs_check(&a, &a.inverse(), &w("x", &al), 9, 7).unwrap();
        match out {
            ImpossOutcome::Witness(wit) => {
                let t = [a.clone(), a.inverse(), w("x", &al)];
                assert!(t[wit.first].commutes_with(&t[wit.second].conjugate_by(&wit.conjugator)));
            }
            other => panic!("{other:?}"),
        }
        let out = imposs_check(&w("a b", &al), &w("x", &al), &w("y", &al), 9, 7).unwrap();
        assert!(matches!(out, ImpossOutcome::PremiseNotMet { .. }));
        assert!(imposs_check(&a, &a, &a, 8, 7).is_err());
        assert!(imposs_check(&a, &a, &a, 9, 6).is_err());
    }

    #[test]
    fn imposs_sweep_has_no_counterexample() {
        let s = imposs_sweep(2, 3);
        assert_eq!(s.counterexamples, 0);
        assert!(s.premise_held > 0);
    }
}
