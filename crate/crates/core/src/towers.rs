//! Iterated centralizer extensions over a free base.
//!
//! A tower is a free group on the base letters, enlarged step by step
//! either by free letters (`L * <y1, ..., yk>`) or by a stable letter `t`
//! commuting with the centralizer of a word `u` in the free letters
//! declared so far. Every `u` must avoid stable letters and the roots of
//! the `u`'s must be pairwise non-conjugate, so each centralizer is the
//! cyclic group generated by `root(u)`. The group is then a multiple HNN
//! extension of a free group with cyclic associated subgroups, and
//! Britton's lemma solves the word problem.

use std::collections::HashMap;
use std::ops::Mul;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::whitehead;
use crate::words::{Alphabet, CyclicWord, Letter, Word};

/// Unvalidated step as written by a user.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    FreeProduct(Vec<String>),
    /// `word` is over the tower's full alphabet in declaration order.
    Centralizer {
        stable: String,
        word: Word,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidStep {
    Free {
        letters: Vec<usize>,
    },
    Centralizer {
        stable: usize,
        word: Word,
        root: Word,
        /// `root = core.conjugator · core.core · core.conjugator^-1`.
        core: CyclicWord,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    alphabet: Alphabet,
    base_len: usize,
    steps: Vec<ValidStep>,
    /// Letter index -> step index, for stable letters.
    stable_step: HashMap<usize, usize>,
}

impl TowerSpec {
    /// Validates a raw description: distinct names, stable-letter-free
    /// nontrivial centralizer words over already declared letters, and
    /// pairwise non-conjugate roots.
    pub fn new<S: Into<String>>(
        base: impl IntoIterator<Item = S>,
        steps: Vec<Step>,
    ) -> Result<Self> {
        let base: Vec<String> = base.into_iter().map(Into::into).collect();
        let base_len = base.len();
        let mut names = base;
        for s in &steps {
            match s {
                Step::FreeProduct(ls) => names.extend(ls.iter().cloned()),
                Step::Centralizer { stable, .. } => names.push(stable.clone()),
            }
        }
        let alphabet = Alphabet::new(names).map_err(|e| match e {
            Error::InvalidAlphabet(m) => Error::InvalidTower(m),
            other => other,
        })?;

        let mut declared = base_len;
        let mut is_stable = vec![false; alphabet.rank()];
        let mut valid = Vec::with_capacity(steps.len());
        let mut stable_step = HashMap::new();
        for (k, s) in steps.into_iter().enumerate() {
            match s {
                Step::FreeProduct(ls) => {
                    valid.push(ValidStep::Free {
                        letters: (declared..declared + ls.len()).collect(),
                    });
                    declared += ls.len();
                }
                Step::Centralizer { stable: _, word } => {
                    let t = declared;
                    declared += 1;
                    is_stable[t] = true;
                    if word.is_identity() {
                        return Err(Error::InvalidTower(format!(
                            "centralizer word of `{}` is trivial",
                            alphabet.name(t)
                        )));
                    }
                    for l in word.letters() {
                        let i = l.index();
                        if i >= alphabet.rank() || i >= t {
                            return Err(Error::InvalidTower(format!(
                                "centralizer word of `{}` uses a letter not yet declared",
                                alphabet.name(t)
                            )));
                        }
                        if is_stable[i] {
                            return Err(Error::InvalidTower(format!(
                                "centralizer word of `{}` contains stable letter `{}`",
                                alphabet.name(t),
                                alphabet.name(i)
                            )));
                        }
                    }
                    let (root, _) = word.root()?;
                    let core = root.cyclic_reduce();
                    for prev in &valid {
                        if let ValidStep::Centralizer {
                            stable, core: pc, ..
                        } = prev
                        {
                            let inv_core = pc.core.inverse().cyclic_reduce().core;
                            if pc.core == core.core || inv_core == core.core {
                                return Err(Error::InvalidTower(format!(
                                    "roots for `{}` and `{}` are conjugate",
                                    alphabet.name(*stable),
                                    alphabet.name(t)
                                )));
                            }
                        }
                    }
                    stable_step.insert(t, k);
                    valid.push(ValidStep::Centralizer {
                        stable: t,
                        word,
                        root,
                        core,
                    });
                }
            }
        }
        Ok(TowerSpec {
            alphabet,
            base_len,
            steps: valid,
            stable_step,
        })
    }

    /// All letters: base, then each step's letters in order.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn base_names(&self) -> &[String] {
        &self.alphabet.names()[..self.base_len]
    }

    pub fn steps(&self) -> &[ValidStep] {
        &self.steps
    }

    pub fn stable_letters(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                ValidStep::Centralizer { stable, .. } => Some(*stable),
                _ => None,
            })
            .collect()
    }

    pub fn is_stable(&self, index: usize) -> bool {
        self.stable_step.contains_key(&index)
    }

    /// Cached root of the centralizer word attached to stable letter `t`.
    pub fn root_of(&self, t: usize) -> Option<&Word> {
        match self.stable_step.get(&t).map(|&k| &self.steps[k]) {
            Some(ValidStep::Centralizer { root, .. }) => Some(root),
            _ => None,
        }
    }

    fn core_of(&self, t: usize) -> &CyclicWord {
        match &self.steps[self.stable_step[&t]] {
            ValidStep::Centralizer { core, .. } => core,
            ValidStep::Free { .. } => unreachable!("stable letter maps to a centralizer step"),
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        crate::parse::parse_word(text, &self.alphabet)
    }

    /// `Some(k)` when the stable-letter-free word `f` equals `root(u_t)^k`.
    fn root_power(&self, t: usize, f: &Word) -> Option<i64> {
        let cw = self.core_of(t);
        let w = f.conjugate_by(&cw.conjugator);
        let p = cw.core.len();
        if !w.len().is_multiple_of(p) {
            return None;
        }
        let k = (w.len() / p) as i64;
        if w == cw.core.pow(k) {
            Some(k)
        } else if w == cw.core.pow(-k) {
            Some(-k)
        } else {
            None
        }
    }

    fn split(&self, w: &Word) -> (Vec<Vec<Letter>>, Vec<Letter>) {
        let mut segs: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut ts: Vec<Letter> = Vec::new();
        for &l in w.letters() {
            if self.is_stable(l.index()) {
                segs.push(Vec::new());
                ts.push(l);
            } else {
                segs.last_mut().expect("nonempty").push(l);
            }
        }
        (segs, ts)
    }

    /// Removes every pinch `t^e f t^-e` with `f` a power of the root
    /// attached to `t`, innermost first. The result is Britton-reduced but
    /// not unique: `t r` and `r t` are both reduced.
    pub fn britton_reduce(&self, w: &Word) -> Word {
        let (segs, ts) = self.pinch(w);
        flatten(&segs, &ts)
    }

    fn pinch(&self, w: &Word) -> (Vec<Word>, Vec<Letter>) {
        let mut segs: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut ts: Vec<Letter> = Vec::new();
        for &l in w.letters() {
            if self.is_stable(l.index()) {
                let top = segs.last().expect("nonempty");
                let pinch = ts.last() == Some(&l.inverse())
                    && self
                        .root_power(l.index(), &Word::from_reduced(top.clone()))
                        .is_some();
                if pinch {
                    ts.pop();
                    let f = segs.pop().expect("segment");
                    let prev = segs.last_mut().expect("segment");
                    for x in f {
                        push_reduced(prev, x);
                    }
                } else {
                    ts.push(l);
                    segs.push(Vec::new());
                }
            } else {
                push_reduced(segs.last_mut().expect("nonempty"), l);
            }
        }
        (segs.into_iter().map(Word::from_reduced).collect(), ts)
    }

    /// Normal form: Britton-reduced, with each free segment before a stable
    /// letter `t` replaced by the shortlex-least element of its coset
    /// `f<root(u_t)>`, the leftover root power carried past `t`. Two words
    /// represent the same element iff their normal forms coincide.
    pub fn reduce(&self, w: &Word) -> Word {
        let (mut segs, ts) = self.pinch(w);
        let mut carry = Word::identity();
        for (j, &t) in ts.iter().enumerate() {
            let f = &carry * &segs[j];
            let (rep, k) = self.coset_rep(t.index(), &f);
            segs[j] = rep;
            carry = self.root_of(t.index()).expect("stable").pow(k);
        }
        let last = segs.len() - 1;
        segs[last] = &carry * &segs[last];
        flatten(&segs, &ts)
    }

    /// `(f r^-k, k)` minimizing `f r^-k` in shortlex order, `r = root(u_t)`.
    fn coset_rep(&self, t: usize, f: &Word) -> (Word, i64) {
        let r = self.root_of(t).expect("stable letter");
        let period = self.core_of(t).core.len().max(1);
        // |f r^-k| >= |k|·period - |f|, so only |k| <= 2|f|/period can beat k = 0.
        let bound = (2 * f.len() / period + 1) as i64;
        let mut best = (f.clone(), 0i64);
        let r_inv = r.inverse();
        let (mut up, mut down) = (f.clone(), f.clone());
        for k in 1..=bound {
            up = &up * &r_inv;
            down = &down * r;
            for (cand, kk) in [(&up, k), (&down, -k)] {
                if *cand < best.0 {
                    best = (cand.clone(), kk);
                }
            }
        }
        best
    }

    /// Britton's lemma: trivial iff the normal form is empty.
    pub fn is_trivial(&self, w: &Word) -> bool {
        let (segs, ts) = self.pinch(w);
        ts.is_empty() && segs[0].is_identity()
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.is_trivial(&(u * &v.inverse()))
    }

    pub fn word(&self, w: Word) -> TowerWord<'_> {
        TowerWord::new(self, w)
    }

    /// Images `t^i g t^i g t^i`, `i = 1..count`, of free generators
    /// `x_1..x_count` under the embedding of `L * <x_1..x_count>` into the
    /// extension by stable letter `t`. Requires `g` outside `<root(u_t)>`.
    pub fn embed_free_product(&self, t: usize, count: usize, g: &Word) -> Result<Vec<Word>> {
        let root = self.root_of(t).ok_or_else(|| {
            Error::Precondition(format!(
                "`{}` is not a stable letter",
                self.alphabet.name(t)
            ))
        })?;
        let nf = self.reduce(g);
        let (_, ts) = self.split(&nf);
        if ts.is_empty() && nf.power_of(root).is_some() {
            return Err(Error::Precondition(format!(
                "g = {} lies in the centralizer <{}>",
                self.alphabet.render(g),
                self.alphabet.render(root)
            )));
        }
        let tw = Word::gen(t);
        Ok((1..=count as i64)
            .map(|i| {
                let ti = tw.pow(i);
                let raw = &(&(&(&ti * g) * &ti) * g) * &ti;
                self.reduce(&raw)
            })
            .collect())
    }

    /// Substitutes `images` into random nontrivial reduced words over
    /// `images.len()` abstract letters and checks that no image is trivial
    /// and no two distinct words collide.
    pub fn check_injective_sample(
        &self,
        images: &[Word],
        trials: usize,
        max_len: usize,
        seed: u64,
    ) -> InjectivityReport {
        let m = images.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<Word> = if m == 0 || max_len == 0 {
            Vec::new()
        } else {
            (0..trials)
                .map(|_| {
                    let len = rng.gen_range(1..=max_len);
                    Word::random(&mut rng, m, len)
                })
                .collect()
        };
        let normal: Vec<Word> = samples
            .par_iter()
            .map(|w| self.reduce(&substitute(w, images)))
            .collect();
        let trivial_images: Vec<usize> = normal
            .iter()
            .enumerate()
            .filter(|(_, nf)| nf.is_identity())
            .map(|(i, _)| i)
            .collect();
        let mut seen: HashMap<&Word, &Word> = HashMap::new();
        let mut collisions = 0;
        for (w, nf) in samples.iter().zip(&normal) {
            if let Some(prev) = seen.insert(nf, w) {
                if prev != w {
                    collisions += 1;
                }
            }
        }
        InjectivityReport {
            seed,
            trials: samples.len(),
            max_len,
            trivial_images: trivial_images.len(),
            collisions,
        }
    }
}

/// Replaces abstract letter `i` by `images[i]`.
pub fn substitute(w: &Word, images: &[Word]) -> Word {
    let inverses: Vec<Word> = images.iter().map(Word::inverse).collect();
    let mut out = Word::identity();
    for l in w.letters() {
        let img = if l.is_inverse() {
            &inverses[l.index()]
        } else {
            &images[l.index()]
        };
        out = &out * img;
    }
    out
}

fn push_reduced(seg: &mut Vec<Letter>, l: Letter) {
    if seg.last() == Some(&l.inverse()) {
        seg.pop();
    } else {
        seg.push(l);
    }
}

fn flatten(segs: &[Word], ts: &[Letter]) -> Word {
    let mut letters = Vec::new();
    for (j, s) in segs.iter().enumerate() {
        letters.extend_from_slice(s.letters());
        if let Some(&t) = ts.get(j) {
            letters.push(t);
        }
    }
    Word::reduce(letters)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub seed: u64,
    pub trials: usize,
    pub max_len: usize,
    pub trivial_images: usize,
    pub collisions: usize,
}

impl InjectivityReport {
    pub fn passed(&self) -> bool {
        self.trivial_images == 0 && self.collisions == 0
    }
}

/// An element of a tower, kept in normal form.
#[derive(Clone, Debug)]
pub struct TowerWord<'a> {
    tower: &'a TowerSpec,
    letters: Word,
}

impl<'a> TowerWord<'a> {
    pub fn new(tower: &'a TowerSpec, raw: Word) -> Self {
        let letters = tower.reduce(&raw);
        TowerWord { tower, letters }
    }

    pub fn letters(&self) -> &Word {
        &self.letters
    }

    pub fn is_trivial(&self) -> bool {
        self.letters.is_identity()
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        TowerWord::new(self.tower, self.letters.inverse())
    }

    pub fn render(&self) -> String {
        self.tower.alphabet.render(&self.letters)
    }
}

impl PartialEq for TowerWord<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.tower, other.tower) && self.letters == other.letters
    }
}

impl<'a> Mul for &TowerWord<'a> {
    type Output = TowerWord<'a>;

    fn mul(self, rhs: Self) -> TowerWord<'a> {
        TowerWord::new(self.tower, &self.letters * &rhs.letters)
    }
}

/// `<L, t_1..t_n | [c_i, t_i] = 1>` for primitive, pairwise non-conjugate `c_i`.
pub fn build_primitive_tower(base: &Alphabet, c: &[Word]) -> Result<TowerSpec> {
    for w in c {
        base.check(w)?;
        if w.is_identity() {
            return Err(Error::Precondition("centralizer element is trivial".into()));
        }
        if !whitehead::is_primitive(w, base.rank())? {
            return Err(Error::Precondition(format!(
                "`{}` is not primitive",
                base.render(w)
            )));
        }
    }
    for (i, a) in c.iter().enumerate() {
        for b in &c[..i] {
            if a.is_conjugate(b) || a.is_conjugate(&b.inverse()) {
                return Err(Error::Precondition(format!(
                    "`{}` and `{}` are conjugate",
                    base.render(b),
                    base.render(a)
                )));
            }
        }
    }
    let mut taken: Vec<String> = base.names().to_vec();
    let steps = c
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let mut name = format!("t{}", i + 1);
            while taken.contains(&name) {
                name.push('\'');
            }
            taken.push(name.clone());
            Step::Centralizer {
                stable: name,
                word: w.clone(),
            }
        })
        .collect();
    TowerSpec::new(base.names().iter().cloned(), steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tower;

    fn example_tower(n: i64, m: i64) -> TowerSpec {
        let text = format!("base: a b\nfree: x\next: t u=x^2 (b x^{})^{m}\n", 2 * n);
        parse_tower(&text).unwrap()
    }

    fn strong_ap_tower() -> TowerSpec {
        parse_tower("base: b x\next: t1 u=x^2 (b x^2)^1\next: t2 u=x^4 (b x^4)^1\n").unwrap()
    }

    #[test]
    fn validate_examples() {
        let l2 = example_tower(1, 1);
        assert_eq!(l2.stable_letters(), vec![3]);
        assert_eq!(l2.alphabet().render(l2.root_of(3).unwrap()), "x^2 b x^2");

        let s = strong_ap_tower();
        assert_eq!(s.stable_letters().len(), 2);

        let bad = parse_tower("base: b x\next: t1 u=x^2 b x^2\next: t2 u=t1 x");
        assert!(matches!(bad, Err(Error::InvalidTower(_))));
    }

    #[test]
    fn conjugate_roots_are_rejected() {
        let al = Alphabet::parse_list("a b").unwrap();
        let ab = crate::parse::parse_word("a b", &al).unwrap();
        let ba_sq = crate::parse::parse_word("(b a)^-2", &al).unwrap();
        let spec = TowerSpec::new(
            ["a", "b"],
            vec![
                Step::Centralizer {
                    stable: "t".into(),
                    word: ab,
                },
                Step::Centralizer {
                    stable: "s".into(),
                    word: ba_sq,
                },
            ],
        );
        assert!(matches!(spec, Err(Error::InvalidTower(_))));
    }

    #[test]
    fn defining_relation_and_britton_premise() {
        let l2 = example_tower(1, 1);
        let u = l2.parse_word("x^2 b x^2").unwrap();
        let w = l2.parse_word("t^-1 x^2 b x^2 t").unwrap();
        assert_eq!(l2.reduce(&w), u);

        let tat = l2.parse_word("t^-1 a t").unwrap();
        assert_eq!(l2.reduce(&tat), tat);
        assert!(!l2.is_trivial(&tat));

        let comm = l2.parse_word("x^-2 b^-1 x^-2 t^-1 x^2 b x^2 t").unwrap();
        assert!(l2.is_trivial(&comm));

        let bt = l2.parse_word("b^-1 t^-1 b t").unwrap();
        assert!(!l2.is_trivial(&bt));
        assert_eq!(l2.britton_reduce(&bt).len(), 4);
    }

    #[test]
    fn strong_ap_identities_in_first_extension() {
        let s = strong_ap_tower();
        // b^-1 · h (x~^2 (b~ x~^2) h^-1)^-1 with h = b x^2, b~ = b^t1, x~ = x^t1
        let h = "(b x^2)";
        let bt = "(t1^-1 b t1)";
        let xt = "(t1^-1 x t1)";
        let text = format!("b^-1 {h} ({xt}^2 ({bt} {xt}^2)^1 {h}^-1)^-1");
        assert!(s.is_trivial(&s.parse_word(&text).unwrap()));
        let text = format!("x^-4 ({xt}^2 ({bt} {xt}^2)^1 {h}^-1)^2");
        assert!(s.is_trivial(&s.parse_word(&text).unwrap()));

        let k = "(b x^4)";
        let bh = "(t2^-1 b t2)";
        let xh = "(t2^-1 x t2)";
        let text = format!("x^-4 ({xh}^4 ({bh} {xh}^4)^1 {k}^-1)^1");
        assert!(s.is_trivial(&s.parse_word(&text).unwrap()));
    }

    #[test]
    fn normal_form_commutes_root_past_stable_letter() {
        let l2 = example_tower(1, 1);
        let lhs = l2.parse_word("t x^2 b x^2 a").unwrap();
        let rhs = l2.parse_word("x^2 b x^2 t a").unwrap();
        assert_ne!(l2.britton_reduce(&lhs), l2.britton_reduce(&rhs));
        assert_eq!(l2.reduce(&lhs), l2.reduce(&rhs));
    }

    #[test]
    fn embedding_images() {
        let spec = parse_tower("base: b x\next: t u=x^2 (b x^2)^1\n").unwrap();
        let t = spec.stable_letters()[0];
        let b = spec.parse_word("b").unwrap();
        let imgs = spec.embed_free_product(t, 1, &b).unwrap();
        assert_eq!(spec.alphabet().render(&imgs[0]), "t b t b t");

        let root = spec.root_of(t).unwrap().clone();
        assert!(matches!(
            spec.embed_free_product(t, 1, &root),
            Err(Error::Precondition(_))
        ));

        let imgs = spec.embed_free_product(t, 3, &b).unwrap();
        assert_eq!(imgs.len(), 3);
        assert!(imgs[0] != imgs[1] && imgs[1] != imgs[2] && imgs[0] != imgs[2]);
    }

    #[test]
    fn commutator_of_embedded_generators_is_nontrivial() {
        let spec = example_tower(1, 1);
        let t = spec.stable_letters()[0];
        let b = spec.parse_word("b").unwrap();
        let imgs = spec.embed_free_product(t, 2, &b).unwrap();
        let comm =
            crate::parse::parse_word("x1 x2 x1^-1 x2^-1", &Alphabet::parse_list("x1 x2").unwrap())
                .unwrap();
        assert!(!spec.is_trivial(&substitute(&comm, &imgs)));
        let report = spec.check_injective_sample(&imgs, 200, 6, 7);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.trials, 200);
    }

    #[test]
    fn primitive_towers() {
        let al = Alphabet::parse_list("a b").unwrap();
        let a = al.gen("a");
        let b = al.gen("b");
        let one = build_primitive_tower(&al, std::slice::from_ref(&a)).unwrap();
        assert_eq!(one.stable_letters().len(), 1);
        let two = build_primitive_tower(&al, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(two.alphabet().names(), ["a", "b", "t1", "t2"]);
        let ab = &a * &b;
        let ba = &b * &a;
        assert!(matches!(
            build_primitive_tower(&al, &[ab, ba]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            build_primitive_tower(&al, &[a.pow(2)]),
            Err(Error::Precondition(_))
        ));
    }
}
