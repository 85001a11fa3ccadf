//! JSON shapes for command output.
//!
//! ```text
//! word         {"word": "a b"}
//! root         {"root": "a b", "power": 2}
//! generators   {"generators": ["a", "b x^2"]}
//! szmielew     {"alpha": {"2": 1, "3": 1, "5": 1, "...": "1 for all p"}, "z_rank": 1, "q_rank": 0}
//! ```
//!
//! Words are rendered in the text grammar, so every shape with a parser
//! counterpart round-trips through it.

use serde_json::{json, Value};

use crate::abelian::TFAbelianGroup;
use crate::error::{Error, Result};
use crate::parse::parse_word;
use crate::words::{Alphabet, Word};

pub fn word(al: &Alphabet, w: &Word) -> Value {
    json!({ "word": al.render(w) })
}

pub fn word_from(value: &Value, al: &Alphabet) -> Result<Word> {
    let text = value
        .get("word")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidParameter("expected {\"word\": <text>}".into()))?;
    parse_word(text, al)
}

pub fn root(al: &Alphabet, r: &Word, power: u32) -> Value {
    json!({ "root": al.render(r), "power": power })
}

pub fn generators(al: &Alphabet, gens: &[Word]) -> Value {
    json!({ "generators": gens.iter().map(|w| al.render(w)).collect::<Vec<_>>() })
}

/// The characteristic is constant in `p`; the first three primes are
/// listed and the rest summarized.
pub fn szmielew(g: &TFAbelianGroup) -> Value {
    let n = g.z_rank();
    json!({
        "alpha": { "2": n, "3": n, "5": n, "...": format!("{n} for all p") },
        "z_rank": n,
        "q_rank": g.q_rank(),
    })
}

pub fn szmielew_from(value: &Value) -> Result<TFAbelianGroup> {
    let get = |k: &str| {
        value
            .get(k)
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidParameter(format!("missing `{k}`")))
    };
    Ok(TFAbelianGroup::new(get("z_rank")?, get("q_rank")?))
}
