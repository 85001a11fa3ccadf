//! Text grammar for words, generating sets, towers, equations and abelian groups.
//!
//! ```text
//! word  := term+
//! term  := atom ['^' integer]
//! atom  := NAME | '(' word ')' | '1'
//! NAME  := [A-Za-z][A-Za-z0-9~']*
//! ```
//!
//! Terms are separated by whitespace. In equations a NAME prefixed with `?`
//! is a variable. The atom `1` denotes the identity, which is how the
//! empty word is printed.

use crate::abelian::TFAbelianGroup;
use crate::error::{Error, Result};
use crate::quadratic::{EqSym, Equation};
use crate::towers::{Step, TowerSpec};
use crate::words::{Alphabet, Letter, Word};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Var(String),
    Int(i64),
    One,
    Caret,
    LParen,
    RParen,
    Comma,
    Equals,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '~' || c == '\''
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
            continue;
        }
        if c == '?' || is_name_start(c) {
            let var = c == '?';
            let start = if var { i + 1 } else { i };
            if var && !chars.get(start).is_some_and(|&(_, c)| is_name_start(c)) {
                return Err(Error::syntax(pos, "expected a variable name after `?`"));
            }
            let mut j = start + 1;
            while j < chars.len() && is_name_char(chars[j].1) {
                j += 1;
            }
            let name: String = chars[start..j].iter().map(|&(_, c)| c).collect();
            out.push((if var { Tok::Var(name) } else { Tok::Name(name) }, pos));
            i = j;
            continue;
        }
        if c == '-' || c == '+' || c.is_ascii_digit() {
            let mut j = i + 1;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let lit: String = chars[i..j].iter().map(|&(_, c)| c).collect();
            let value: i64 = lit
                .parse()
                .map_err(|_| Error::syntax(pos, format!("bad integer `{lit}`")))?;
            out.push((Tok::Int(value), pos));
            i = j;
            continue;
        }
        return Err(Error::syntax(pos, format!("unexpected character `{c}`")));
    }
    // A bare `1` is the identity atom; integers elsewhere follow a caret.
    let mut fixed = Vec::with_capacity(out.len());
    for (k, (t, pos)) in out.iter().enumerate() {
        let after_caret = k > 0 && out[k - 1].0 == Tok::Caret;
        match t {
            Tok::Int(1) if !after_caret => fixed.push((Tok::One, *pos)),
            _ => fixed.push((t.clone(), *pos)),
        }
    }
    Ok(fixed)
}

/// Parsed term tree before name resolution.
#[derive(Debug)]
enum Atom {
    Name(String, bool, usize),
    Group(Vec<Term>),
    One,
}

#[derive(Debug)]
struct Term {
    atom: Atom,
    exp: i64,
}

struct Parser<'t> {
    toks: &'t [(Tok, usize)],
    pos: usize,
    end: usize,
}

impl<'t> Parser<'t> {
    fn new(toks: &'t [(Tok, usize)], end: usize) -> Self {
        Parser { toks, pos: 0, end }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, p)| p)
    }

    fn word(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        while let Some(t) = self.peek() {
            if !matches!(t, Tok::Name(_) | Tok::Var(_) | Tok::One | Tok::LParen) {
                break;
            }
            terms.push(self.term()?);
        }
        if terms.is_empty() {
            return Err(Error::syntax(self.offset(), "expected a word"));
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term> {
        let at = self.offset();
        let atom = match self.toks.get(self.pos).map(|(t, _)| t.clone()) {
            Some(Tok::Name(n)) => {
                self.pos += 1;
                Atom::Name(n, false, at)
            }
            Some(Tok::Var(n)) => {
                self.pos += 1;
                Atom::Name(n, true, at)
            }
            Some(Tok::One) => {
                self.pos += 1;
                Atom::One
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.word()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::syntax(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Atom::Group(inner)
            }
            _ => return Err(Error::syntax(at, "expected a generator or `(`")),
        };
        let mut exp = 1;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek() {
                Some(&Tok::Int(k)) => exp = k,
                Some(Tok::One) => exp = 1,
                _ => return Err(Error::syntax(self.offset(), "expected an integer exponent")),
            }
            self.pos += 1;
        }
        Ok(Term { atom, exp })
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            Err(Error::syntax(self.offset(), "unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

trait Sym: Copy + PartialEq {
    fn inv(self) -> Self;
}

impl Sym for Letter {
    fn inv(self) -> Self {
        self.inverse()
    }
}

impl Sym for EqSym {
    fn inv(self) -> Self {
        self.inverse()
    }
}

fn expand<S: Sym>(
    terms: &[Term],
    resolve: &mut dyn FnMut(&str, bool, usize) -> Result<S>,
    out: &mut Vec<S>,
) -> Result<()> {
    for term in terms {
        let mut block = Vec::new();
        match &term.atom {
            Atom::Name(n, var, pos) => block.push(resolve(n, *var, *pos)?),
            Atom::Group(inner) => expand(inner, resolve, &mut block)?,
            Atom::One => {}
        }
        let reps = term.exp.unsigned_abs();
        let block: Vec<S> = if term.exp < 0 {
            block.iter().rev().map(|s| s.inv()).collect()
        } else {
            block
        };
        for _ in 0..reps {
            for &s in &block {
                if out.last() == Some(&s.inv()) {
                    out.pop();
                } else {
                    out.push(s);
                }
            }
        }
    }
    Ok(())
}

fn resolve_fixed(al: &Alphabet) -> impl FnMut(&str, bool, usize) -> Result<Letter> + '_ {
    move |name, var, pos| {
        if var {
            return Err(Error::syntax(
                pos,
                "variables are only allowed in equations",
            ));
        }
        al.letter(name, false)
    }
}

/// Parses and freely reduces a word over `al`.
pub fn parse_word(text: &str, al: &Alphabet) -> Result<Word> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks, text.len());
    let terms = p.word()?;
    p.expect_end()?;
    let mut letters = Vec::new();
    expand(&terms, &mut resolve_fixed(al), &mut letters)?;
    Ok(Word::reduce(letters))
}

/// Generator names in order of first appearance across `texts`.
pub fn infer_alphabet<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Alphabet> {
    let mut names: Vec<String> = Vec::new();
    for text in texts {
        for (t, _) in tokenize(text)? {
            if let Tok::Name(n) = t {
                if !names.contains(&n) {
                    names.push(n);
                }
            }
        }
    }
    Alphabet::new(names)
}

/// Comma-separated list of words.
pub fn parse_generating_set(text: &str, al: &Alphabet) -> Result<Vec<Word>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let w = parse_word(piece, al).map_err(|e| match e {
            Error::Syntax { pos, message } => Error::Syntax {
                pos: pos + offset,
                message,
            },
            other => other,
        })?;
        out.push(w);
        offset += piece.len();
        offset += text[offset..].chars().next().map_or(0, char::len_utf8);
    }
    Ok(out)
}

pub fn print_generating_set(gens: &[Word], al: &Alphabet) -> String {
    gens.iter()
        .map(|w| al.render(w))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Parses `lhs = rhs` (or a bare `lhs`, meaning `lhs = 1`) into `lhs · rhs^-1`.
///
/// With `al = None` the coefficient alphabet is every non-variable name
/// in order of first appearance.
pub fn parse_equation(text: &str, al: Option<&Alphabet>) -> Result<Equation> {
    let toks = tokenize(text)?;
    let alphabet = match al {
        Some(a) => a.clone(),
        None => infer_alphabet([text])?,
    };
    let mut variables: Vec<String> = Vec::new();
    let mut resolve = |name: &str, var: bool, _pos: usize| -> Result<EqSym> {
        if var {
            let i = match variables.iter().position(|v| v == name) {
                Some(i) => i,
                None => {
                    variables.push(name.to_string());
                    variables.len() - 1
                }
            };
            Ok(EqSym::Var(i, false))
        } else {
            Ok(EqSym::Coef(alphabet.letter(name, false)?))
        }
    };
    let split = toks.iter().position(|(t, _)| *t == Tok::Equals);
    let (lhs_toks, rhs_toks) = match split {
        Some(k) => (&toks[..k], Some(&toks[k + 1..])),
        None => (&toks[..], None),
    };
    let mut p = Parser::new(lhs_toks, split.map_or(text.len(), |k| toks[k].1));
    let lhs = p.word()?;
    p.expect_end()?;
    let mut syms = Vec::new();
    expand(&lhs, &mut resolve, &mut syms)?;
    if let Some(rhs_toks) = rhs_toks {
        let mut p = Parser::new(rhs_toks, text.len());
        let rhs = p.word()?;
        p.expect_end()?;
        let inv = Term {
            atom: Atom::Group(rhs),
            exp: -1,
        };
        expand(std::slice::from_ref(&inv), &mut resolve, &mut syms)?;
    }
    Ok(Equation::new(alphabet, variables, syms))
}

/// Tower file format:
///
/// ```text
/// # comment
/// base: a b
/// free: x
/// ext: t u=x^2 (b x^2)^1
/// ```
pub fn parse_tower(text: &str) -> Result<TowerSpec> {
    let mut base: Option<Vec<String>> = None;
    let mut pending: Vec<(usize, String, Option<String>)> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let here = offset;
        offset += line.len();
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content
            .split_once(':')
            .ok_or_else(|| Error::syntax(here, "expected `base:`, `free:` or `ext:`"))?;
        let rest = rest.trim();
        match key.trim() {
            "base" => {
                if base.is_some() || !pending.is_empty() {
                    return Err(Error::syntax(here, "`base:` must come first and only once"));
                }
                let gens: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                names.extend(gens.iter().cloned());
                base = Some(gens);
            }
            "free" => {
                if base.is_none() {
                    return Err(Error::syntax(here, "`free:` before `base:`"));
                }
                if rest.is_empty() {
                    return Err(Error::syntax(here, "`free:` needs at least one letter"));
                }
                names.extend(rest.split_whitespace().map(str::to_string));
                pending.push((here, rest.to_string(), None));
            }
            "ext" => {
                if base.is_none() {
                    return Err(Error::syntax(here, "`ext:` before `base:`"));
                }
                let (stable, word) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::syntax(here, "expected `ext: t u=<word>`"))?;
                let word = word
                    .trim()
                    .strip_prefix("u=")
                    .ok_or_else(|| Error::syntax(here, "expected `u=<word>`"))?;
                names.push(stable.to_string());
                pending.push((here, stable.to_string(), Some(word.to_string())));
            }
            other => return Err(Error::syntax(here, format!("unknown directive `{other}`"))),
        }
    }
    let base = base.ok_or_else(|| Error::syntax(0, "missing `base:` line"))?;
    // Centralizer words are read over the full declared alphabet so that a
    // stable letter inside some u is caught by validation, not as a typo.
    let all = Alphabet::new(names.iter().cloned()).map_err(|e| match e {
        Error::InvalidAlphabet(msg) => Error::InvalidTower(msg),
        other => other,
    })?;
    let mut steps = Vec::with_capacity(pending.len());
    for (here, head, word) in pending {
        steps.push(match word {
            None => Step::FreeProduct(head.split_whitespace().map(str::to_string).collect()),
            Some(text) => {
                let word = parse_word(&text, &all).map_err(|e| match e {
                    Error::Syntax { pos, message } => Error::Syntax {
                        pos: here + pos,
                        message,
                    },
                    other => other,
                })?;
                Step::Centralizer { stable: head, word }
            }
        });
    }
    TowerSpec::new(base, steps)
}

pub fn print_tower(spec: &TowerSpec) -> String {
    let al = spec.alphabet();
    let mut out = format!("base: {}\n", spec.base_names().join(" "));
    for step in spec.steps() {
        match step {
            crate::towers::ValidStep::Free { letters } => {
                let names: Vec<&str> = letters.iter().map(|&i| al.name(i)).collect();
                out.push_str(&format!("free: {}\n", names.join(" ")));
            }
            crate::towers::ValidStep::Centralizer { stable, word, .. } => {
                out.push_str(&format!(
                    "ext: {} u={}\n",
                    al.name(*stable),
                    al.render(word)
                ));
            }
        }
    }
    out
}

/// `Z^n + Q^m`; summands may repeat (`Z + Z + Q`) and `0` is the trivial group.
pub fn parse_abelian(text: &str) -> Result<TFAbelianGroup> {
    let mut n = 0u64;
    let mut m = 0u64;
    let mut offset = 0;
    for piece in text.split(['+', '⊕']) {
        let here = offset + piece.len() - piece.trim_start().len();
        offset += piece.len();
        offset += text[offset..].chars().next().map_or(0, char::len_utf8);
        let s = piece.trim();
        let (base, exp) = match s.split_once('^') {
            Some((b, e)) => {
                let e: u64 = e
                    .trim()
                    .parse()
                    .map_err(|_| Error::syntax(here, format!("bad exponent in `{s}`")))?;
                (b.trim(), e)
            }
            None => (s, 1),
        };
        match base {
            "Z" => n += exp,
            "Q" => m += exp,
            "0" => {}
            _ => {
                return Err(Error::syntax(
                    here,
                    format!("expected Z, Q or 0, found `{s}`"),
                ))
            }
        }
    }
    Ok(TFAbelianGroup::new(n, m))
}

pub fn print_abelian(g: &TFAbelianGroup) -> String {
    let part = |sym: &str, k: u64| match k {
        0 => None,
        1 => Some(sym.to_string()),
        k => Some(format!("{sym}^{k}")),
    };
    let parts: Vec<String> = [part("Z", g.z_rank()), part("Q", g.q_rank())]
        .into_iter()
        .flatten()
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_grammar_examples() {
        let al = Alphabet::parse_list("a b x").unwrap();
        let w = parse_word("x^2 (b x^2)^1", &al).unwrap();
        assert_eq!(al.render(&w), "x^2 b x^2");
        assert!(parse_word("a a^-1", &al).unwrap().is_identity());

        let al = Alphabet::parse_list("a h b~ x~").unwrap();
        let w = parse_word("h (x~^2 (b~ x~^2)^1 h^-1)^-1", &al).unwrap();
        assert_eq!(al.render(&w), "h^2 x~^-2 b~^-1 x~^-2");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let al = Alphabet::parse_list("a b").unwrap();
        match parse_word("a (b", &al) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse_word("a $", &al) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_word("a^", &al), Err(Error::Syntax { .. })));
        assert!(matches!(parse_word("", &al), Err(Error::Syntax { .. })));
        assert_eq!(
            parse_word("a c", &al),
            Err(Error::UnknownGenerator("c".into()))
        );
    }

    #[test]
    fn primed_and_tilde_names() {
        let al = Alphabet::parse_list("b' x~ k").unwrap();
        let w = parse_word("b' x~^-3 k", &al).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(al.render(&w), "b' x~^-3 k");
    }

    #[test]
    fn identity_round_trips() {
        let al = Alphabet::parse_list("a").unwrap();
        assert!(parse_word("1", &al).unwrap().is_identity());
        assert!(parse_word("a^1 1 a^-1", &al).unwrap().is_identity());
    }

    #[test]
    fn generating_sets() {
        let al = Alphabet::parse_list("a b x").unwrap();
        let gens = parse_generating_set("a, b x^2, x^2 b x^2", &al).unwrap();
        assert_eq!(gens.len(), 3);
        assert_eq!(print_generating_set(&gens, &al), "a, b x^2, x^2 b x^2");
        match parse_generating_set("a, b (", &al) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tower_file_examples() {
        let spec = parse_tower("base: a b\nfree: x\next: t u=x^2 (b x^2)^1\n").unwrap();
        assert_eq!(spec.steps().len(), 2);
        let printed = print_tower(&spec);
        assert_eq!(printed, "base: a b\nfree: x\next: t u=x^2 b x^2\n");
        assert_eq!(parse_tower(&printed).unwrap(), spec);

        let two = parse_tower(
            "# strong AP\nbase: b x\next: t1 u=x^2 (b x^2)^1\next: t2 u=x^4 (b x^4)^1 # second\n",
        )
        .unwrap();
        assert_eq!(two.stable_letters().len(), 2);

        let prim = parse_tower("base: a b\next: t u=a").unwrap();
        assert_eq!(prim.stable_letters().len(), 1);
    }

    #[test]
    fn tower_file_errors() {
        assert!(matches!(parse_tower("free: x"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_tower("base: a\nbogus: q"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_tower("base: a b\nfree: a"),
            Err(Error::InvalidTower(_))
        ));
        assert!(matches!(
            parse_tower("base: a b\next: t u=a\next: s u=t b"),
            Err(Error::InvalidTower(_))
        ));
    }

    #[test]
    fn abelian_groups() {
        let g = parse_abelian("Z^2 + Q^3").unwrap();
        assert_eq!((g.z_rank(), g.q_rank()), (2, 3));
        assert_eq!(print_abelian(&g), "Z^2 + Q^3");
        assert_eq!(
            print_abelian(&parse_abelian("Z + Z ⊕ Q").unwrap()),
            "Z^2 + Q"
        );
        assert_eq!(print_abelian(&parse_abelian("0").unwrap()), "0");
        assert!(matches!(parse_abelian("Z + R"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn equations_move_rhs_left() {
        let eq = parse_equation("?x^2 = a^2", None).unwrap();
        assert_eq!(eq.variables(), ["x".to_string()]);
        assert_eq!(eq.syms().len(), 4);
        assert!(matches!(
            parse_equation("?x = a = b", None),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_equation("? a", None),
            Err(Error::Syntax { .. })
        ));
    }
}
