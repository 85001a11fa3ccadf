//! Quadratic equations over free groups.
//!
//! An [`Equation`] is a cyclic word over coefficient letters and variables,
//! meaning `w = 1`. [`classify`] recognizes the two standard shapes
//!
//! ```text
//! [x1,y1]...[xg,yg] z1^-1 C1 z1 ... z(m-1)^-1 C(m-1) z(m-1) C      (orientable)
//! x1^2 ... xg^2     z1^-1 C1 z1 ... z(m-1)^-1 C(m-1) z(m-1) C      (non-orientable)
//! ```
//!
//! up to cyclic rotation, with `[x,y] = x^-1 y^-1 x y`.

mod configs;
mod lemmas;
mod solve;

pub use configs::{
    enumerate_configs, enumerate_shape, ConfigShape, DiscConfiguration, Occurrence, Surface,
};
pub use lemmas::{
    imposs_check, imposs_sweep, ls_check, CommutationWitness, ImpossOutcome, ImpossSweep, LsOutcome,
};
pub use solve::{abelian_obstruction, brute_solve, AbelianOutcome, SolveOutcome, SOLVE_BUDGET};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EqSym {
    Coef(Letter),
    /// Variable index and inversion flag.
    Var(usize, bool),
}

impl EqSym {
    #[must_use]
    pub fn inverse(self) -> Self {
        match self {
            EqSym::Coef(l) => EqSym::Coef(l.inverse()),
            EqSym::Var(i, inv) => EqSym::Var(i, !inv),
        }
    }

    fn var(self) -> Option<usize> {
        match self {
            EqSym::Var(i, _) => Some(i),
            EqSym::Coef(_) => None,
        }
    }
}

/// `syms = 1`, freely reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    alphabet: Alphabet,
    variables: Vec<String>,
    syms: Vec<EqSym>,
}

impl Equation {
    pub fn new(alphabet: Alphabet, variables: Vec<String>, syms: Vec<EqSym>) -> Self {
        let mut out: Vec<EqSym> = Vec::with_capacity(syms.len());
        for s in syms {
            if out.last() == Some(&s.inverse()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        Equation {
            alphabet,
            variables,
            syms: out,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn syms(&self) -> &[EqSym] {
        &self.syms
    }

    pub fn occurrences(&self, var: usize) -> usize {
        self.syms.iter().filter(|s| s.var() == Some(var)).count()
    }

    /// Cyclic reduction of the left-hand side.
    pub fn cyclic_syms(&self) -> Vec<EqSym> {
        let s = &self.syms;
        let mut lo = 0;
        let mut hi = s.len();
        while hi - lo >= 2 && s[lo] == s[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        s[lo..hi].to_vec()
    }

    /// Value of the left-hand side under `values[i]` for variable `i`.
    pub fn evaluate(&self, values: &[Word]) -> Word {
        eval_syms(&self.syms, values)
    }

    pub fn render(&self) -> String {
        render_syms(&self.syms, &self.alphabet, &self.variables)
    }
}

pub(crate) fn eval_syms(syms: &[EqSym], values: &[Word]) -> Word {
    let mut letters: Vec<Letter> = Vec::new();
    let push = |x: Letter, letters: &mut Vec<Letter>| {
        if letters.last() == Some(&x.inverse()) {
            letters.pop();
        } else {
            letters.push(x);
        }
    };
    for s in syms {
        match *s {
            EqSym::Coef(l) => push(l, &mut letters),
            EqSym::Var(i, false) => {
                for &l in values[i].letters() {
                    push(l, &mut letters);
                }
            }
            EqSym::Var(i, true) => {
                for &l in values[i].letters().iter().rev() {
                    push(l.inverse(), &mut letters);
                }
            }
        }
    }
    Word::reduce(letters)
}

fn render_syms(syms: &[EqSym], al: &Alphabet, vars: &[String]) -> String {
    if syms.is_empty() {
        return "1 = 1".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < syms.len() {
        let mut j = i;
        while j < syms.len() && syms[j] == syms[i] {
            j += 1;
        }
        let (name, inv) = match syms[i] {
            EqSym::Coef(l) => (al.name(l.index()).to_string(), l.is_inverse()),
            EqSym::Var(v, inv) => (format!("?{}", vars[v]), inv),
        };
        let k = (j - i) as i64 * if inv { -1 } else { 1 };
        parts.push(if k == 1 { name } else { format!("{name}^{k}") });
        i = j;
    }
    format!("{} = 1", parts.join(" "))
}

/// A quadratic equation recognized in standard form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticEquation {
    pub alphabet: Alphabet,
    pub variables: Vec<String>,
    pub genus: usize,
    pub orientable: bool,
    /// `C1 .. C(m-1), C`; the last entry is the trailing coefficient.
    pub coefficients: Vec<Word>,
    /// The standard-form rotation of the equation.
    pub standard: Vec<EqSym>,
}

impl QuadraticEquation {
    pub fn m_coef(&self) -> usize {
        self.coefficients.len()
    }

    /// Reduced Euler characteristic.
    pub fn chi_bar(&self) -> i64 {
        chi_bar(self.orientable, self.genus)
    }

    pub fn n_bound(&self) -> i64 {
        n_bound(self.orientable, self.genus, self.m_coef())
    }

    pub fn shape(&self) -> ConfigShape {
        ConfigShape {
            orientable: self.orientable,
            genus: self.genus,
            m_coef: self.m_coef(),
        }
    }

    pub fn render(&self) -> String {
        render_syms(&self.standard, &self.alphabet, &self.variables)
    }
}

pub fn chi_bar(orientable: bool, genus: usize) -> i64 {
    let g = genus as i64;
    if orientable {
        2 - 2 * g
    } else {
        2 - g
    }
}

/// Bound on the number of boundary variables in a disc configuration.
pub fn n_bound(orientable: bool, genus: usize, m_coef: usize) -> i64 {
    if (genus == 0 && m_coef == 2) || (!orientable && genus == 1 && m_coef == 1) {
        1
    } else {
        3 * (m_coef as i64 - chi_bar(orientable, genus))
    }
}

/// Recognizes `eq` in standard form up to cyclic rotation.
pub fn classify(eq: &Equation) -> Result<QuadraticEquation> {
    let syms = eq.cyclic_syms();
    for (i, name) in eq.variables.iter().enumerate() {
        let k = syms.iter().filter(|s| s.var() == Some(i)).count();
        if k != 2 {
            return Err(Error::NotStandardForm(format!(
                "variable ?{name} occurs {k} times, expected 2"
            )));
        }
    }
    if syms.is_empty() {
        return Err(Error::NotStandardForm("trivial coefficient".into()));
    }
    let starts: Vec<usize> = if eq.variables.is_empty() {
        vec![0]
    } else {
        (0..syms.len())
            .filter(|&i| syms[i].var().is_some())
            .collect()
    };
    let mut bad_coef: Option<Error> = None;
    for r in starts {
        let mut rot = syms[r..].to_vec();
        rot.extend_from_slice(&syms[..r]);
        let Some((genus, orientable, coefficients)) = match_standard(&rot) else {
            continue;
        };
        if let Some(c) = coefficients.iter().find(|c| !c.is_cyclically_reduced()) {
            bad_coef.get_or_insert(Error::NotCyclicallyReduced(format!(
                "coefficient {} is not cyclically reduced",
                eq.alphabet.render(c)
            )));
            continue;
        }
        return Ok(QuadraticEquation {
            alphabet: eq.alphabet.clone(),
            variables: eq.variables.clone(),
            genus,
            orientable,
            coefficients,
            standard: rot,
        });
    }
    Err(bad_coef.unwrap_or_else(|| {
        Error::NotStandardForm(format!("{} is not in standard form", eq.render()))
    }))
}

fn match_standard(s: &[EqSym]) -> Option<(usize, bool, Vec<Word>)> {
    use EqSym::Var;
    let mut p = 0;
    let mut genus = 0;
    let mut orientable = true;
    // Commutators or squares; the first one fixes the shape.
    loop {
        match s.get(p..p + 4) {
            Some(&[Var(x, true), Var(y, true), Var(x2, false), Var(y2, false)])
                if x == x2 && y == y2 && x != y && (genus == 0 || orientable) =>
            {
                genus += 1;
                p += 4;
                continue;
            }
            _ => {}
        }
        match s.get(p..p + 2) {
            Some(&[Var(x, i1), Var(x2, i2)])
                if x == x2 && i1 == i2 && (genus == 0 || !orientable) =>
            {
                if genus == 0 {
                    orientable = false;
                }
                genus += 1;
                p += 2;
                continue;
            }
            _ => {}
        }
        break;
    }
    let mut coefficients = Vec::new();
    // Conjugated coefficients `z^-1 C z`.
    while let Some(&Var(z, true)) = s.get(p) {
        let start = p + 1;
        let mut q = start;
        while let Some(EqSym::Coef(_)) = s.get(q) {
            q += 1;
        }
        if q == start || s.get(q) != Some(&Var(z, false)) {
            return None;
        }
        coefficients.push(coef_word(&s[start..q]));
        p = q + 1;
    }
    let start = p;
    while let Some(EqSym::Coef(_)) = s.get(p) {
        p += 1;
    }
    if p != s.len() || p == start {
        return None;
    }
    coefficients.push(coef_word(&s[start..p]));
    Some((genus, orientable, coefficients))
}

fn coef_word(s: &[EqSym]) -> Word {
    Word::reduce(s.iter().map(|x| match x {
        EqSym::Coef(l) => *l,
        EqSym::Var(..) => unreachable!("coefficient run"),
    }))
}
