//! Whitehead automorphisms, cyclic-length minimization, primitivity and
//! free-factor detection.
//!
//! Multiplier moves are the type-II Whitehead automorphisms: a multiplier
//! letter `a` (either sign) fixed, and every other generator `y` sent to one
//! of `y`, `y a`, `a^-1 y` or `a^-1 y a`. They are enumerated in a fixed
//! order (multiplier letter, then action vector counted in base 4), which
//! decides every tie.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stallings::SubgroupGraph;
use crate::words::{Alphabet, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Action {
    Fix,
    /// `y -> y a`
    RightMultiply,
    /// `y -> a^-1 y`
    LeftDivide,
    /// `y -> a^-1 y a`
    Conjugate,
}

const ACTIONS: [Action; 4] = [
    Action::Fix,
    Action::RightMultiply,
    Action::LeftDivide,
    Action::Conjugate,
];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WhiteheadMove {
    /// Generator `i` goes to `images[i]`; the images are a signed permutation.
    Permutation { images: Vec<Letter> },
    /// `actions[i]` says what happens to generator `i`; the multiplier's own
    /// entry is [`Action::Fix`].
    Multiplier {
        letter: Letter,
        actions: Vec<Action>,
    },
}

impl WhiteheadMove {
    pub fn rank(&self) -> usize {
        match self {
            WhiteheadMove::Permutation { images } => images.len(),
            WhiteheadMove::Multiplier { actions, .. } => actions.len(),
        }
    }

    pub fn image_of_generator(&self, i: usize) -> Word {
        match self {
            WhiteheadMove::Permutation { images } => Word::letter(images[i]),
            WhiteheadMove::Multiplier { letter, actions } => {
                let y = Word::gen(i);
                let a = Word::letter(*letter);
                match actions[i] {
                    Action::Fix => y,
                    Action::RightMultiply => &y * &a,
                    Action::LeftDivide => &a.inverse() * &y,
                    Action::Conjugate => y.conjugate_by(&a),
                }
            }
        }
    }

    /// Images indexed by letter code: `a, a^-1, b, b^-1, ...`.
    fn letter_images(&self) -> Vec<Word> {
        let mut out = Vec::with_capacity(2 * self.rank());
        for i in 0..self.rank() {
            let w = self.image_of_generator(i);
            let inv = w.inverse();
            out.push(w);
            out.push(inv);
        }
        out
    }

    pub fn apply(&self, w: &Word) -> Word {
        let images = self.letter_images();
        let mut letters: Vec<Letter> = Vec::with_capacity(w.len() * 2);
        for l in w.letters() {
            for &x in images[l.code()].letters() {
                if letters.last() == Some(&x.inverse()) {
                    letters.pop();
                } else {
                    letters.push(x);
                }
            }
        }
        Word::reduce(letters)
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        match self {
            WhiteheadMove::Permutation { images } => {
                let mut inv = vec![Letter::gen(0); images.len()];
                for (i, l) in images.iter().enumerate() {
                    inv[l.index()] = Letter::new(i, l.is_inverse());
                }
                WhiteheadMove::Permutation { images: inv }
            }
            WhiteheadMove::Multiplier { letter, actions } => WhiteheadMove::Multiplier {
                letter: letter.inverse(),
                actions: actions.clone(),
            },
        }
    }

    pub fn describe(&self, al: &Alphabet) -> String {
        let parts: Vec<String> = (0..self.rank())
            .filter_map(|i| {
                let img = self.image_of_generator(i);
                (img != Word::gen(i)).then(|| format!("{} -> {}", al.name(i), al.render(&img)))
            })
            .collect();
        if parts.is_empty() {
            "identity".to_string()
        } else {
            parts.join(", ")
        }
    }

    /// A uniformly chosen multiplier move or signed permutation.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> Self {
        if rank >= 2 && rng.gen_bool(0.75) {
            let letter = Letter::from_code(rng.gen_range(0..2 * rank));
            loop {
                let actions: Vec<Action> = (0..rank)
                    .map(|i| {
                        if i == letter.index() {
                            Action::Fix
                        } else {
                            ACTIONS[rng.gen_range(0..4)]
                        }
                    })
                    .collect();
                if actions.iter().any(|&a| a != Action::Fix) {
                    return WhiteheadMove::Multiplier { letter, actions };
                }
            }
        }
        let mut perm: Vec<usize> = (0..rank).collect();
        for i in (1..rank).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        WhiteheadMove::Permutation {
            images: perm
                .into_iter()
                .map(|j| Letter::new(j, rng.gen_bool(0.5)))
                .collect(),
        }
    }
}

/// Applies `moves` left to right.
pub fn apply_all(moves: &[WhiteheadMove], w: &Word) -> Word {
    moves.iter().fold(w.clone(), |acc, m| m.apply(&acc))
}

/// Every non-identity multiplier move of `F(rank)` in enumeration order.
pub fn multiplier_moves(rank: usize) -> Vec<WhiteheadMove> {
    let mut out = Vec::new();
    if rank < 2 {
        return out;
    }
    let others = rank - 1;
    let count = 4usize.pow(others as u32);
    for code in 0..2 * rank {
        let letter = Letter::from_code(code);
        for v in 1..count {
            let mut digits = v;
            let mut actions = Vec::with_capacity(rank);
            for i in 0..rank {
                if i == letter.index() {
                    actions.push(Action::Fix);
                } else {
                    actions.push(ACTIONS[digits % 4]);
                    digits /= 4;
                }
            }
            out.push(WhiteheadMove::Multiplier { letter, actions });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Minimization {
    pub min_length: usize,
    /// Cyclically reduced representative reached.
    pub minimal: Word,
    pub moves: Vec<WhiteheadMove>,
}

/// Greedy descent of cyclic length by strictly reducing multiplier moves.
/// By Whitehead's theorem a non-minimal cyclic word always admits one, so
/// the final length is the minimum over the automorphism orbit.
pub fn minimize(w: &Word, rank: usize) -> Result<Minimization> {
    if w.is_identity() {
        return Err(Error::TrivialInput);
    }
    check_rank(w, rank)?;
    let moves = multiplier_moves(rank);
    let mut cur = w.cyclic_reduce().core;
    let mut used = Vec::new();
    'descend: loop {
        for m in &moves {
            let img = m.apply(&cur);
            if img.cyclic_len() < cur.len() {
                cur = img.cyclic_reduce().core;
                used.push(m.clone());
                continue 'descend;
            }
        }
        break;
    }
    Ok(Minimization {
        min_length: cur.len(),
        minimal: cur,
        moves: used,
    })
}

fn check_rank(w: &Word, rank: usize) -> Result<()> {
    if w.min_rank() > rank {
        Err(Error::AlphabetMismatch {
            index: w.min_rank() - 1,
            rank,
        })
    } else {
        Ok(())
    }
}

/// Member of some basis of `F(rank)`.
pub fn is_primitive(w: &Word, rank: usize) -> Result<bool> {
    Ok(minimize(w, rank)?.min_length == 1)
}

/// Visited-state bound for the plateau search.
pub const PLATEAU_LIMIT: usize = 1_000;

#[derive(Clone, Debug)]
pub struct SubgroupMinimization {
    pub size: usize,
    pub graph: SubgroupGraph,
    pub basis: Vec<Word>,
    pub moves: Vec<WhiteheadMove>,
    /// Plateau states visited over the whole run.
    pub plateau_states: usize,
}

struct Candidate {
    basis: Vec<Word>,
    graph: SubgroupGraph,
    size: usize,
}

fn candidate(basis: Vec<Word>, rank: usize) -> Candidate {
    let graph = SubgroupGraph::build(&basis, rank);
    let size = graph.cyclic_size();
    let basis = graph.basis();
    Candidate { basis, graph, size }
}

fn images(m: &WhiteheadMove, basis: &[Word]) -> Vec<Word> {
    basis.iter().map(|w| m.apply(w)).collect()
}

/// First strictly reducing move in enumeration order, evaluated in parallel.
fn first_reducing(
    moves: &[WhiteheadMove],
    basis: &[Word],
    rank: usize,
    size: usize,
) -> Option<(usize, Candidate)> {
    moves
        .par_iter()
        .enumerate()
        .map(|(i, m)| (i, candidate(images(m, basis), rank)))
        .find_first(|(_, c)| c.size < size)
}

/// Whitehead minimization of the cyclic core size of a subgroup graph,
/// with breadth-first search through equal-size images (up to `limit`
/// states) whenever no move reduces the size outright.
pub fn minimize_subgroup(h: &SubgroupGraph, limit: usize) -> SubgroupMinimization {
    let rank = h.ambient_rank();
    let moves = multiplier_moves(rank);
    let mut cur = candidate(h.basis(), rank);
    let mut used: Vec<WhiteheadMove> = Vec::new();
    let mut plateau_states = 0;
    // A core of rank k has at least k edges; a rose is already minimal.
    let floor = h.rank();
    loop {
        if cur.size <= floor {
            break;
        }
        if let Some((i, next)) = first_reducing(&moves, &cur.basis, rank, cur.size) {
            used.push(moves[i].clone());
            cur = next;
            continue;
        }
        // Plateau: states are (candidate, parent, move index).
        let mut visited: HashSet<SubgroupGraph> = HashSet::new();
        visited.insert(cur.graph.conjugacy_invariant());
        let mut states: Vec<(Candidate, usize, usize)> = Vec::new();
        let mut found: Option<(usize, usize, Candidate)> = None;
        let start = std::mem::replace(
            &mut cur,
            Candidate {
                basis: Vec::new(),
                graph: SubgroupGraph::build(&[], rank),
                size: 0,
            },
        );
        states.push((start, usize::MAX, usize::MAX));
        let mut head = 0;
        'bfs: while head < states.len() {
            let evaluated: Vec<(usize, Candidate)> = moves
                .par_iter()
                .enumerate()
                .map(|(i, m)| (i, candidate(images(m, &states[head].0.basis), rank)))
                .collect();
            let size = states[head].0.size;
            for (i, c) in evaluated {
                if c.size < size {
                    found = Some((head, i, c));
                    break 'bfs;
                }
                if c.size == size && visited.insert(c.graph.conjugacy_invariant()) {
                    if visited.len() > limit {
                        break 'bfs;
                    }
                    states.push((c, head, i));
                }
            }
            head += 1;
        }
        plateau_states += visited.len();
        match found {
            Some((from, mi, next)) => {
                let mut path = vec![mi];
                let mut k = from;
                while states[k].1 != usize::MAX {
                    path.push(states[k].2);
                    k = states[k].1;
                }
                path.reverse();
                used.extend(path.into_iter().map(|i| moves[i].clone()));
                cur = next;
            }
            None => {
                cur = states.swap_remove(0).0;
                break;
            }
        }
    }
    SubgroupMinimization {
        size: cur.size,
        graph: cur.graph,
        basis: cur.basis,
        moves: used,
        plateau_states,
    }
}

/// Is the subgroup a free factor of the ambient free group? True iff its
/// minimized cyclic core is a rose of single-letter petals.
pub fn is_free_factor(h: &SubgroupGraph) -> Result<bool> {
    is_free_factor_with_limit(h, PLATEAU_LIMIT)
}

pub fn is_free_factor_with_limit(h: &SubgroupGraph, limit: usize) -> Result<bool> {
    if h.rank() == 0 {
        return Err(Error::TrivialInput);
    }
    let min = minimize_subgroup(h, limit);
    Ok(min.graph.cyclic_core().is_rose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_generating_set, parse_word};

    #[test]
    fn apply_examples() {
        let al = Alphabet::parse_list("a b x").unwrap();
        let swap = WhiteheadMove::Permutation {
            images: vec![Letter::gen(1), Letter::gen(0), Letter::gen(2)],
        };
        let ab = parse_word("a b", &al).unwrap();
        assert_eq!(swap.apply(&ab), parse_word("b a", &al).unwrap());

        let mult = WhiteheadMove::Multiplier {
            letter: Letter::gen(0),
            actions: vec![Action::Fix, Action::Fix, Action::RightMultiply],
        };
        assert_eq!(mult.apply(&al.gen("x")), parse_word("x a", &al).unwrap());
        assert_eq!(mult.describe(&al), "x -> x a");
    }

    #[test]
    fn inverse_moves_undo_moves() {
        let mut rng = rand::thread_rng();
        for _ in 0..100 {
            let m = WhiteheadMove::random(&mut rng, 3);
            let len = rng.gen_range(0..12);
            let w = Word::random(&mut rng, 3, len);
            assert_eq!(m.inverse().apply(&m.apply(&w)), w);
        }
    }

    #[test]
    fn enumeration_size() {
        assert_eq!(multiplier_moves(2).len(), 4 * 3);
        assert_eq!(multiplier_moves(3).len(), 6 * 15);
        assert!(multiplier_moves(1).is_empty());
    }

    /// `h (x~^2 (b~ x~^2n)^m h^-m)^-n`
    fn b_image(al: &Alphabet, n: i64, m: i64) -> Word {
        let text = format!("h (x~^2 (b~ x~^{})^{m} h^-{m})^-{n}", 2 * n);
        parse_word(&text, al).unwrap()
    }

    #[test]
    fn minimize_examples() {
        let al = Alphabet::parse_list("a b").unwrap();
        assert_eq!(minimize(&al.gen("a"), 2).unwrap().min_length, 1);
        // (ab)^2 goes to b^2 under b -> a^-1 b.
        let abab = parse_word("a b a b", &al).unwrap();
        let m = minimize(&abab, 2).unwrap();
        assert_eq!(m.min_length, 2);
        assert_eq!(apply_all(&m.moves, &abab).cyclic_len(), 2);
        let comm = parse_word("a^-1 b^-1 a b", &al).unwrap();
        let m = minimize(&comm, 2).unwrap();
        assert_eq!(m.min_length, 4);
        assert!(m.moves.is_empty());
        assert!(matches!(
            minimize(&Word::identity(), 2),
            Err(Error::TrivialInput)
        ));
        assert!(matches!(
            minimize(&al.gen("b"), 1),
            Err(Error::AlphabetMismatch { .. })
        ));

        let al = Alphabet::parse_list("h b~ x~").unwrap();
        assert_eq!(minimize(&b_image(&al, 1, 2), 3).unwrap().min_length, 7);
    }

    #[test]
    fn primitivity_examples() {
        let al = Alphabet::parse_list("h b~ x~").unwrap();
        assert!(is_primitive(&al.gen("h"), 3).unwrap());
        // With m = 1 the letter b~ occurs once per factor and the image is
        // h c^n for a primitive c; with m = 2 it is not primitive.
        let b11 = b_image(&al, 1, 1);
        assert_eq!(al.render(&b11), "h^2 x~^-2 b~^-1 x~^-2");
        assert!(is_primitive(&b11, 3).unwrap());
        assert!(is_primitive(&b_image(&al, 2, 1), 3).unwrap());
        assert!(!is_primitive(&b_image(&al, 1, 2), 3).unwrap());
        assert!(!is_primitive(&b_image(&al, 2, 2), 3).unwrap());

        let al = Alphabet::parse_list("a b").unwrap();
        let w = parse_word("a^2 b", &al).unwrap();
        assert!(is_primitive(&w, 2).unwrap());
        // b -> a^-1 b twice carries a^2 b to b
        let sigma = WhiteheadMove::Multiplier {
            letter: Letter::new(0, false),
            actions: vec![Action::Fix, Action::LeftDivide],
        };
        assert_eq!(apply_all(&[sigma.clone(), sigma], &w), al.gen("b"));
        assert!(!is_primitive(&abab(&al), 2).unwrap());
    }

    fn abab(al: &Alphabet) -> Word {
        parse_word("a b a b", al).unwrap()
    }

    #[test]
    fn free_factor_examples() {
        let al = Alphabet::parse_list("a h b~ x~").unwrap();
        let g = |ws: Vec<Word>| SubgroupGraph::build(&ws, 4);
        assert!(is_free_factor(&g(vec![al.gen("a"), al.gen("h")])).unwrap());
        assert!(is_free_factor(&g(vec![al.gen("a"), b_image(&al, 1, 1)])).unwrap());
        assert!(!is_free_factor_with_limit(&g(vec![al.gen("a"), b_image(&al, 1, 2)]), 50).unwrap());

        let al = Alphabet::parse_list("a b").unwrap();
        let h = SubgroupGraph::build(&parse_generating_set("a^2, b", &al).unwrap(), 2);
        assert!(!is_free_factor(&h).unwrap());
        let h = SubgroupGraph::build(&parse_generating_set("a b a^-1", &al).unwrap(), 2);
        assert!(is_free_factor(&h).unwrap());
        let h = SubgroupGraph::build(&parse_generating_set("a b^2, b", &al).unwrap(), 2);
        assert!(is_free_factor(&h).unwrap());
        assert!(matches!(
            is_free_factor(&SubgroupGraph::build(&[], 2)),
            Err(Error::TrivialInput)
        ));
    }
}
