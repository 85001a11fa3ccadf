//! Abelianized solvability and bounded exhaustive search.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{EqSym, Equation};
use crate::error::{Error, Result};
use crate::intlin;
use crate::words::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AbelianOutcome {
    /// `witness[v]` is the exponent vector of variable `v`.
    Solvable { witness: Vec<Vec<i64>> },
    /// Generators whose exponent-sum equation has no integer solution.
    Obstructed { rows: Vec<usize> },
}

/// Decides whether the abelianized equation has an integer solution.
///
/// Row `a` reads `sum_v e_v X_{v,a} = -c_a`, with `e_v` the exponent sum of
/// variable `v` and `c_a` that of generator `a` among the coefficients.
pub fn abelian_obstruction(eq: &Equation) -> AbelianOutcome {
    let r = eq.alphabet().rank();
    let nv = eq.variables().len();
    let mut e = vec![0i64; nv];
    let mut c = vec![0i64; r];
    for s in eq.syms() {
        match *s {
            EqSym::Var(v, inv) => e[v] += if inv { -1 } else { 1 },
            EqSym::Coef(l) => c[l.index()] += l.sign(),
        }
    }
    let cols = nv * r;
    let a: Vec<Vec<i64>> = (0..r)
        .map(|g| {
            let mut row = vec![0i64; cols];
            for v in 0..nv {
                row[v * r + g] = e[v];
            }
            row
        })
        .collect();
    let b: Vec<i64> = c.iter().map(|x| -x).collect();
    match intlin::solve(&a, cols, &b) {
        Some(x) => AbelianOutcome::Solvable {
            witness: (0..nv).map(|v| x[v * r..(v + 1) * r].to_vec()).collect(),
        },
        None => AbelianOutcome::Obstructed {
            rows: (0..r)
                .filter(|&g| intlin::solve(&[e.clone()], nv, &[b[g]]).is_none())
                .collect(),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Vec<Word>),
    NoneWithinBound { bound: usize },
}

/// Upper bound on the number of partial assignments evaluated.
pub const SOLVE_BUDGET: usize = 5_000_000;

/// Exhaustive search over reduced words of length at most `bound`. The
/// solution returned is least by total length, then by the shortlex order
/// of the values taken in variable order.
///
/// The cyclic word is split into two arcs with disjoint variables; the
/// smaller arc's values are tabulated and the larger arc is searched
/// against the table.
pub fn brute_solve(eq: &Equation, bound: usize) -> Result<SolveOutcome> {
    let rank = eq.alphabet().rank();
    let nv = eq.variables().len();
    if nv > 3 || bound > 6 || rank > 3 {
        return Err(Error::BudgetExceeded(format!(
            "search is limited to 3 variables, bound 6 and 3 generators; got {nv}, {bound}, {rank}"
        )));
    }
    let domain = Word::enumerate(rank, bound);
    let syms = eq.cyclic_syms();
    let d = domain.len();
    let (small, big) = best_split(&syms, nv, d);
    let cost = d.pow(small.vars.len() as u32) + d.pow(big.vars.len() as u32);
    if cost > SOLVE_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{cost} assignments needed, budget is {SOLVE_BUDGET}"
        )));
    }

    let mut table: HashMap<Word, Vec<Vec<usize>>> = HashMap::new();
    for_each_assignment(small.vars.len(), d, |idx| {
        let w = eval_arc(&small.syms, &small.vars, idx, &domain);
        table.entry(w).or_default().push(idx.to_vec());
    });

    let k = big.vars.len();
    let total = d.pow(k as u32);
    let best = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let idx = decode(code, k, d);
            let probe = eval_arc(&big.syms, &big.vars, &idx, &domain).inverse();
            let bucket = table.get(&probe)?;
            bucket
                .iter()
                .map(|sidx| {
                    let mut full = vec![0usize; nv];
                    for (&v, &i) in small.vars.iter().zip(sidx) {
                        full[v] = i;
                    }
                    for (&v, &i) in big.vars.iter().zip(&idx) {
                        full[v] = i;
                    }
                    let len: usize = full.iter().map(|&i| domain[i].len()).sum();
                    (len, full)
                })
                .min()
        })
        .min();
    Ok(match best {
        Some((_, full)) => {
            SolveOutcome::Solution(full.into_iter().map(|i| domain[i].clone()).collect())
        }
        None => SolveOutcome::NoneWithinBound { bound },
    })
}

struct Arc {
    syms: Vec<EqSym>,
    vars: Vec<usize>,
}

fn vars_of(s: &[EqSym]) -> Vec<usize> {
    let mut v: Vec<usize> = s
        .iter()
        .filter_map(|x| match x {
            EqSym::Var(i, _) => Some(*i),
            EqSym::Coef(_) => None,
        })
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// The rotation and cut minimizing tabulation cost. Returns
/// `(tabulated, searched)`, where the searched arc follows the tabulated one.
fn best_split(syms: &[EqSym], _nv: usize, d: usize) -> (Arc, Arc) {
    let n = syms.len();
    let mut best: Option<(usize, Arc, Arc)> = None;
    for r in 0..n.max(1) {
        let rot: Vec<EqSym> = syms[r..].iter().chain(&syms[..r]).copied().collect();
        for cut in 0..=n {
            let (x, y) = rot.split_at(cut);
            let (vx, vy) = (vars_of(x), vars_of(y));
            if vx.iter().any(|v| vy.contains(v)) {
                continue;
            }
            let (cx, cy) = (d.pow(vx.len() as u32), d.pow(vy.len() as u32));
            let cost = cx + cy;
            if best.as_ref().is_none_or(|(c, _, _)| cost < *c) {
                let ax = Arc {
                    syms: x.to_vec(),
                    vars: vx,
                };
                let ay = Arc {
                    syms: y.to_vec(),
                    vars: vy,
                };
                // x y = 1 iff y x = 1, so either arc may be tabulated.
                let pair = if cx <= cy { (ax, ay) } else { (ay, ax) };
                best = Some((cost, pair.0, pair.1));
            }
        }
    }
    let (_, a, b) = best.expect("cut at 0 always has disjoint arcs");
    (a, b)
}

fn decode(mut code: usize, k: usize, d: usize) -> Vec<usize> {
    let mut idx = vec![0usize; k];
    for slot in idx.iter_mut().rev() {
        *slot = code % d;
        code /= d;
    }
    idx
}

fn for_each_assignment(k: usize, d: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; k];
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < d {
                break;
            }
            idx[i] = 0;
        }
    }
}

fn eval_arc(syms: &[EqSym], vars: &[usize], idx: &[usize], domain: &[Word]) -> Word {
    let value = |v: usize| -> &Word {
        let p = vars
            .iter()
            .position(|&x| x == v)
            .expect("variable of this arc");
        &domain[idx[p]]
    };
    let mut out: Vec<Letter> = Vec::new();
    let push = |l: Letter, out: &mut Vec<Letter>| {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    };
    for s in syms {
        match *s {
            EqSym::Coef(l) => push(l, &mut out),
            EqSym::Var(v, false) => value(v).letters().iter().for_each(|&l| push(l, &mut out)),
            EqSym::Var(v, true) => value(v)
                .letters()
                .iter()
                .rev()
                .for_each(|&l| push(l.inverse(), &mut out)),
        }
    }
    Word::reduce(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_equation;
    use crate::words::Alphabet;

    fn eq(text: &str, al: &str) -> Equation {
        parse_equation(text, Some(&Alphabet::parse_list(al).unwrap())).unwrap()
    }

    fn check_witness(e: &Equation, witness: &[Vec<i64>]) {
        let r = e.alphabet().rank();
        let mut sum = vec![0i64; r];
        for s in e.syms() {
            match *s {
                EqSym::Var(v, inv) => {
                    for g in 0..r {
                        sum[g] += if inv { -witness[v][g] } else { witness[v][g] };
                    }
                }
                EqSym::Coef(l) => sum[l.index()] += l.sign(),
            }
        }
        assert!(
            sum.iter().all(|&x| x == 0),
            "witness {witness:?} gives {sum:?}"
        );
    }

    #[test]
    fn exponent_sum_obstruction() {
        let e = eq("?x^8 ?y^2 ?z^-2 = e1^7 e2^2 e3^-2", "e1 e2 e3");
        assert_eq!(
            abelian_obstruction(&e),
            AbelianOutcome::Obstructed { rows: vec![0] }
        );
        let e = eq("?x^8 ?y ?z^-1 = e1^7 e2^2 e3^-2", "e1 e2 e3");
        match abelian_obstruction(&e) {
            AbelianOutcome::Solvable { witness } => check_witness(&e, &witness),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conjugate_inverse_is_abelian_solvable() {
        let e = eq("a b ?v^-1 b^-1 a^-1 ?v", "a b");
        assert_eq!(
            abelian_obstruction(&e),
            AbelianOutcome::Solvable {
                witness: vec![vec![0, 0]]
            }
        );
    }

    #[test]
    fn brute_examples() {
        let e = eq("a b ?v^-1 a^-1 b^-1 ?v", "a b");
        let a = e.alphabet().gen("a");
        assert_eq!(
            brute_solve(&e, 6).unwrap(),
            SolveOutcome::Solution(vec![a.inverse()])
        );
        let e = eq("a b ?v^-1 a b ?v", "a b");
        assert_eq!(
            brute_solve(&e, 6).unwrap(),
            SolveOutcome::NoneWithinBound { bound: 6 }
        );
        let e = eq("?x^2 = a^2", "a");
        assert_eq!(
            brute_solve(&e, 3).unwrap(),
            SolveOutcome::Solution(vec![e.alphabet().gen("a")])
        );
    }

    #[test]
    fn solutions_satisfy_equation() {
        let e = eq("?x ?y ?x^-1 ?y^-1 a b a^-1 b^-1", "a b");
        match brute_solve(&e, 2).unwrap() {
            SolveOutcome::Solution(s) => {
                assert!(e.evaluate(&s).is_identity());
                assert_eq!(s.iter().map(Word::len).sum::<usize>(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn obstructed_has_no_small_solution() {
        let e = eq("?x^8 ?y^2 ?z^-2 = e1^7 e2^2 e3^-2", "e1 e2 e3");
        assert_eq!(
            brute_solve(&e, 3).unwrap(),
            SolveOutcome::NoneWithinBound { bound: 3 }
        );
    }

    #[test]
    fn budget() {
        let e = eq("?x ?y ?z ?x ?y ?z a", "a b c");
        assert!(matches!(brute_solve(&e, 6), Err(Error::BudgetExceeded(_))));
        let e = eq("?x a", "a");
        assert!(matches!(brute_solve(&e, 7), Err(Error::BudgetExceeded(_))));
    }
}
