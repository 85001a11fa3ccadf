//! Freely reduced words over a finite alphabet.
//!
//! Words store generator indices only; an [`Alphabet`] supplies the names
//! and the order used for every canonical comparison. Letters are ordered
//! `a < a^-1 < b < b^-1 < ...` following the alphabet.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use rand::Rng;

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Self {
        let k = index as i32 + 1;
        Letter(if inverse { -k } else { k })
    }

    pub fn gen(index: usize) -> Self {
        Letter::new(index, false)
    }

    pub fn index(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn sign(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    #[must_use]
    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Position in the order `a, a^-1, b, b^-1, ...`.
    pub fn code(self) -> usize {
        2 * self.index() + usize::from(self.is_inverse())
    }

    pub fn from_code(code: usize) -> Self {
        Letter::new(code / 2, code % 2 == 1)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code().cmp(&other.code())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}^-1", self.index())
        } else {
            write!(f, "g{}", self.index())
        }
    }
}

/// Ordered list of distinct generator names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidAlphabet("empty generator name".into()));
            }
            if lookup.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate generator `{name}`"
                )));
            }
        }
        Ok(Alphabet { names, lookup })
    }

    /// Generators `names[0], names[1], ...` given as a whitespace-separated list.
    pub fn parse_list(list: &str) -> Result<Self> {
        Alphabet::new(list.split_whitespace())
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    pub fn letter(&self, name: &str, inverse: bool) -> Result<Letter> {
        self.index_of(name)
            .map(|i| Letter::new(i, inverse))
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Generator as a one-letter word; panics on unknown names.
    pub fn gen(&self, name: &str) -> Word {
        Word::letter(self.letter(name, false).expect("generator in alphabet"))
    }

    /// Appends fresh names, failing on any clash.
    pub fn extended<S: Into<String>>(&self, extra: impl IntoIterator<Item = S>) -> Result<Self> {
        Alphabet::new(
            self.names
                .iter()
                .cloned()
                .chain(extra.into_iter().map(Into::into)),
        )
    }

    /// Freely reduces a sequence of `(name, exponent)` pairs.
    pub fn reduce_named(&self, raw: &[(&str, i64)]) -> Result<Word> {
        let mut out = Word::identity();
        for &(name, exp) in raw {
            let g = Word::letter(self.letter(name, false)?);
            out = &out * &g.pow(exp);
        }
        Ok(out)
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.letters.iter().find(|l| l.index() >= self.rank()) {
            Some(l) => Err(Error::AlphabetMismatch {
                index: l.index(),
                rank: self.rank(),
            }),
            None => Ok(()),
        }
    }

    /// Renders in the input grammar, collapsing runs into powers: `x^2 b x^-2`.
    /// The identity renders as `1`.
    pub fn render(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        let ls = &w.letters;
        while i < ls.len() {
            let mut j = i;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let name = self.name(ls[i].index());
            let run = (j - i) as i64 * ls[i].sign();
            parts.push(if run == 1 {
                name.to_string()
            } else {
                format!("{name}^{run}")
            });
            i = j;
        }
        parts.join(" ")
    }
}

/// Freely reduced word; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.letters)
    }
}

impl Ord for Word {
    /// Shortlex: shorter words first, then lexicographic in letter order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn gen(index: usize) -> Self {
        Word::letter(Letter::gen(index))
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if letters.last() == Some(&l.inverse()) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Word { letters }
    }

    /// Wraps letters already known to be freely reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Largest generator index used plus one; 0 for the identity.
    pub fn min_rank(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.index() + 1)
            .max()
            .unwrap_or(0)
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    #[must_use]
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        let mut n = k.unsigned_abs();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                out = &out * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        out
    }

    /// `w^-1 · self · w`.
    #[must_use]
    pub fn conjugate_by(&self, w: &Word) -> Self {
        &(&w.inverse() * self) * w
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    #[must_use]
    pub fn commutator(&self, other: &Word) -> Self {
        let a = &self.inverse() * &other.inverse();
        &(&a * self) * other
    }

    pub fn commutes_with(&self, other: &Word) -> bool {
        self * other == other * self
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Length of the cyclically reduced core.
    pub fn cyclic_len(&self) -> usize {
        let (i, j) = self.core_bounds();
        j - i
    }

    fn core_bounds(&self) -> (usize, usize) {
        let (mut i, mut j) = (0, self.len());
        while j - i >= 2 && self.letters[i] == self.letters[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        (i, j)
    }

    /// Conjugacy-class representative: the least cyclic shift of the
    /// cyclically reduced core, with `conjugator · core · conjugator^-1 = self`.
    pub fn cyclic_reduce(&self) -> CyclicWord {
        let (i, j) = self.core_bounds();
        let middle = &self.letters[i..j];
        let s = least_rotation(middle);
        let mut core = Vec::with_capacity(middle.len());
        core.extend_from_slice(&middle[s..]);
        core.extend_from_slice(&middle[..s]);
        let conjugator = Word::reduce(self.letters[..i].iter().chain(&middle[..s]).copied());
        CyclicWord {
            core: Word::from_reduced(core),
            conjugator,
        }
    }

    /// Rotation `letters[k..] letters[..k]` of a cyclically reduced word.
    #[must_use]
    pub fn rotate(&self, k: usize) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len();
        Word::reduce(self.letters[k..].iter().chain(&self.letters[..k]).copied())
    }

    pub fn exponent_sum(&self, index: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.index() == index)
            .map(|l| l.sign())
            .sum()
    }

    pub fn exponent_vector(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.letters {
            v[l.index()] += l.sign();
        }
        v
    }

    /// Maximal root: `(r, k)` with `r^k = self`, `k` maximal and `r` not a
    /// proper power. Computed on the core and conjugated back.
    pub fn root(&self) -> Result<(Word, u32)> {
        if self.is_identity() {
            return Err(Error::TrivialRoot);
        }
        let cw = self.cyclic_reduce();
        let period = primitive_period(cw.core.letters());
        let power = (cw.core.len() / period) as u32;
        let core_root = Word::from_reduced(cw.core.letters[..period].to_vec());
        let root = &(&cw.conjugator * &core_root) * &cw.conjugator.inverse();
        Ok((root, power))
    }

    pub fn is_proper_power(&self) -> bool {
        matches!(self.root(), Ok((_, k)) if k > 1)
    }

    /// `Some(k)` when `self = base^k`.
    pub fn power_of(&self, base: &Word) -> Option<i64> {
        if self.is_identity() {
            return Some(0);
        }
        if base.is_identity() {
            return None;
        }
        let (r1, k1) = self.root().ok()?;
        let (r2, k2) = base.root().ok()?;
        if k1 % k2 != 0 {
            return None;
        }
        let q = i64::from(k1 / k2);
        if r1 == r2 {
            Some(q)
        } else if r1 == r2.inverse() {
            Some(-q)
        } else {
            None
        }
    }

    /// A `w` with `w · self · w^-1 = other`, when the two are conjugate.
    pub fn conjugator_to(&self, other: &Word) -> Option<Word> {
        let a = self.cyclic_reduce();
        let b = other.cyclic_reduce();
        (a.core == b.core).then(|| &b.conjugator * &a.conjugator.inverse())
    }

    pub fn is_conjugate(&self, other: &Word) -> bool {
        self.cyclic_reduce().core == other.cyclic_reduce().core
    }

    /// Is `self` a contiguous factor of `other`?
    pub fn is_subword_of(&self, other: &Word) -> bool {
        self.is_empty()
            || other
                .letters
                .windows(self.len())
                .any(|w| w == self.letters())
    }

    pub fn concat_unreduced(&self, other: &Word) -> Vec<Letter> {
        self.letters.iter().chain(&other.letters).copied().collect()
    }

    /// Uniformly random reduced word of exactly `len` letters over `rank` generators.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
        assert!(rank > 0 || len == 0);
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let l = Letter::from_code(rng.gen_range(0..2 * rank));
            if letters.last() != Some(&l.inverse()) {
                letters.push(l);
            }
        }
        Word { letters }
    }

    /// Every reduced word of length at most `max_len`, in shortlex order.
    pub fn enumerate(rank: usize, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        let mut start = 0;
        for _ in 0..max_len {
            let end = out.len();
            for i in start..end {
                for code in 0..2 * rank {
                    let l = Letter::from_code(code);
                    if out[i].last() != Some(l.inverse()) {
                        let mut letters = out[i].letters.clone();
                        letters.push(l);
                        out.push(Word { letters });
                    }
                }
            }
            start = end;
        }
        out
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let a = &self.letters;
        let b = &rhs.letters;
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == b[k].inverse() {
            k += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * k);
        letters.extend_from_slice(&a[..a.len() - k]);
        letters.extend_from_slice(&b[k..]);
        Word { letters }
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

/// A word written as `conjugator · core · conjugator^-1` with `core`
/// cyclically reduced and least among its cyclic shifts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    pub core: Word,
    pub conjugator: Word,
}

impl CyclicWord {
    pub fn expand(&self) -> Word {
        &(&self.conjugator * &self.core) * &self.conjugator.inverse()
    }
}

fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match s[(i + k) % n].cmp(&s[(j + k) % n]) {
            Ordering::Equal => {
                k += 1;
                continue;
            }
            Ordering::Greater => i += k + 1,
            Ordering::Less => j += k + 1,
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j).min(n.saturating_sub(1))
}

/// Smallest `d` dividing `s.len()` with `s` a power of `s[..d]`.
fn primitive_period<T: Eq>(s: &[T]) -> usize {
    let n = s.len();
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    let p = n - pi[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}
