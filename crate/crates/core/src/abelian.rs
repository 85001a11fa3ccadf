//! Szmielew invariants of `Z^n + Q^m` and finitely generated subgroups of
//! `Z + Q`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// `Z^n + Q^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TFAbelianGroup {
    n: u64,
    m: u64,
}

impl TFAbelianGroup {
    pub fn new(n: u64, m: u64) -> Self {
        TFAbelianGroup { n, m }
    }

    pub fn z_rank(&self) -> u64 {
        self.n
    }

    pub fn q_rank(&self) -> u64 {
        self.m
    }

    #[must_use]
    pub fn direct_sum(&self, other: &TFAbelianGroup) -> Self {
        TFAbelianGroup::new(self.n + other.n, self.m + other.m)
    }

    pub fn characteristic(&self) -> SzmielewCharacteristic {
        SzmielewCharacteristic {
            constant: AlphaValue::Finite(self.n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlphaValue {
    Finite(u64),
    Infinite,
}

impl fmt::Display for AlphaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaValue::Finite(k) => write!(f, "{k}"),
            AlphaValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for AlphaValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AlphaValue::Finite(k) => s.serialize_u64(*k),
            AlphaValue::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `p -> dim(A / pA)`. For the groups represented here it does not depend
/// on `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SzmielewCharacteristic {
    constant: AlphaValue,
}

impl SzmielewCharacteristic {
    pub fn alpha(&self, p: u64) -> Result<AlphaValue> {
        check_prime(p)?;
        Ok(self.constant)
    }

    pub fn constant_value(&self) -> AlphaValue {
        self.constant
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{p} is not prime")))
    }
}

/// `dim(A / pA)` over the field with `p` elements; the divisible part
/// contributes nothing.
pub fn alpha_p(a: &TFAbelianGroup, p: u64) -> Result<AlphaValue> {
    a.characteristic().alpha(p)
}

/// Elementary equivalence: equal characteristics at every prime.
pub fn elem_equiv(a: &TFAbelianGroup, b: &TFAbelianGroup) -> bool {
    a.characteristic() == b.characteristic()
}

/// `forall x1 x2 exists y ([x1,x2] = 1 -> OR_{(m1,m2) in S} x1^m1 x2^m2 = y^p)`
/// with `S` the nonzero pairs in `[0, p)^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallDimSentence {
    pub p: u64,
    pub tuples: Vec<(u64, u64)>,
}

impl SmallDimSentence {
    pub fn new(p: u64) -> Result<Self> {
        check_prime(p)?;
        let tuples = (0..p)
            .flat_map(|m1| (0..p).map(move |m2| (m1, m2)))
            .filter(|&t| t != (0, 0))
            .collect();
        Ok(SmallDimSentence { p, tuples })
    }

    pub fn render(&self) -> String {
        let disj: Vec<String> = self
            .tuples
            .iter()
            .map(|(m1, m2)| format!("x1^{m1} x2^{m2} = y^{}", self.p))
            .collect();
        format!(
            "forall x1 x2 exists y ([x1,x2] = 1 -> {})",
            disj.join(" or ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallDimResult {
    pub holds: bool,
    pub sentence: SmallDimSentence,
}

/// Whether every abelian subgroup `A'` has `dim(A'/pA') < 2`; for
/// `Z^n + Q^m` this is `n < 2`.
pub fn small_dim_sentence(a: &TFAbelianGroup, p: u64) -> Result<SmallDimResult> {
    Ok(SmallDimResult {
        holds: a.z_rank() < 2,
        sentence: SmallDimSentence::new(p)?,
    })
}

/// An element of `Z + Q`.
pub type ZQ = (BigInt, BigRational);

/// Rank of the subgroup of `Z + Q` generated by `gens`.
pub fn fg_subgroup_rank(gens: &[ZQ]) -> usize {
    let vecs: Vec<(BigRational, BigRational)> = gens
        .iter()
        .map(|(a, r)| (BigRational::from_integer(a.clone()), r.clone()))
        .filter(|(a, r)| !(a.is_zero() && r.is_zero()))
        .collect();
    let Some((x0, y0)) = vecs.first() else {
        return 0;
    };
    if vecs.iter().any(|(x, y)| !(x0 * y - y0 * x).is_zero()) {
        2
    } else {
        1
    }
}

/// Is `g` in the subgroup generated by `(1, 0)` and `(0, s)`?
fn in_lattice(g: &ZQ, s: &BigRational) -> bool {
    (&g.1 / s).is_integer()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub bound: u64,
    /// `H_0 = <(1, 0)>`.
    pub base_rank: usize,
    /// Ranks of `H_k = <(1, 0), (0, 1/k!)>` for `k = 1..=bound`.
    pub ranks: Vec<usize>,
    /// `H_k <= H_(k+1)` for every consecutive pair.
    pub nested: bool,
    /// Generators of `H_k` rendered as `a,p/q`.
    pub generators: Vec<Vec<String>>,
}

pub fn chain_demo(bound: u64) -> Result<ChainReport> {
    if bound < 2 {
        return Err(Error::InvalidParameter(format!(
            "chain bound must be at least 2, got {bound}"
        )));
    }
    let unit: ZQ = (BigInt::one(), BigRational::zero());
    let base_rank = fg_subgroup_rank(std::slice::from_ref(&unit));
    let mut fact = BigInt::one();
    let mut steps: Vec<(Vec<ZQ>, BigRational)> = Vec::new();
    for k in 1..=bound {
        fact *= BigInt::from(k);
        let s = BigRational::new(BigInt::one(), fact.clone());
        steps.push((vec![unit.clone(), (BigInt::zero(), s.clone())], s));
    }
    let ranks = steps.iter().map(|(g, _)| fg_subgroup_rank(g)).collect();
    let nested = steps
        .windows(2)
        .all(|w| w[0].0.iter().all(|g| in_lattice(g, &w[1].1)));
    let generators = steps
        .iter()
        .map(|(g, _)| g.iter().map(|(a, r)| format!("{a},{r}")).collect())
        .collect();
    Ok(ChainReport {
        bound,
        base_rank,
        ranks,
        nested,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zq(a: i64, p: i64, q: i64) -> ZQ {
        (
            BigInt::from(a),
            BigRational::new(BigInt::from(p), BigInt::from(q)),
        )
    }

    #[test]
    fn alpha_examples() {
        let z = TFAbelianGroup::new(1, 0);
        let q = TFAbelianGroup::new(0, 1);
        for p in [2, 3, 5, 7] {
            assert_eq!(alpha_p(&z, p).unwrap(), AlphaValue::Finite(1));
            assert_eq!(alpha_p(&q, p).unwrap(), AlphaValue::Finite(0));
        }
        assert_eq!(
            alpha_p(&TFAbelianGroup::new(2, 3), 5).unwrap(),
            AlphaValue::Finite(2)
        );
        assert!(matches!(alpha_p(&z, 4), Err(Error::InvalidParameter(_))));
        assert!(alpha_p(&z, 1).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let z = TFAbelianGroup::new(1, 0);
        assert!(elem_equiv(&z, &TFAbelianGroup::new(1, 1)));
        assert!(!elem_equiv(&z, &TFAbelianGroup::new(2, 0)));
        assert!(elem_equiv(
            &TFAbelianGroup::new(0, 1),
            &TFAbelianGroup::new(0, 5)
        ));
    }

    /// Does `(Z/p)^n` satisfy: any two elements admit a nontrivial relation
    /// `m1 x1 + m2 x2 = 0` with `0 <= mi < p`?
    fn brute_sentence(n: u32, p: u64) -> bool {
        let size = p.pow(n);
        let vec_of = |mut c: u64| -> Vec<u64> {
            (0..n)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect()
        };
        let s = SmallDimSentence::new(p).unwrap();
        (0..size).all(|i| {
            (0..size).all(|j| {
                let (x, y) = (vec_of(i), vec_of(j));
                s.tuples
                    .iter()
                    .any(|&(m1, m2)| x.iter().zip(&y).all(|(a, b)| (m1 * a + m2 * b) % p == 0))
            })
        })
    }

    #[test]
    fn sentence_matches_quotient_oracle() {
        for p in [2, 3, 5] {
            for n in 0..=3u32 {
                let g = TFAbelianGroup::new(u64::from(n), 1);
                let r = small_dim_sentence(&g, p).unwrap();
                assert_eq!(r.holds, brute_sentence(n, p), "n={n} p={p}");
                assert_eq!(r.sentence.tuples.len() as u64, p * p - 1);
            }
        }
        assert!(
            small_dim_sentence(&TFAbelianGroup::new(1, 1), 2)
                .unwrap()
                .holds
        );
        assert!(
            !small_dim_sentence(&TFAbelianGroup::new(2, 0), 2)
                .unwrap()
                .holds
        );
        assert!(
            small_dim_sentence(&TFAbelianGroup::new(0, 1), 7)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(
            fg_subgroup_rank(&[zq(1, 0, 1), zq(0, 1, 1), zq(0, 1, 2)]),
            2
        );
        assert_eq!(fg_subgroup_rank(&[zq(2, 1, 1), zq(4, 2, 1)]), 1);
        assert_eq!(fg_subgroup_rank(&[]), 0);
        assert_eq!(fg_subgroup_rank(&[zq(0, 0, 1)]), 0);
        assert_eq!(fg_subgroup_rank(&[zq(0, 1, 3), zq(0, 1, 2)]), 1);
    }

    #[test]
    fn chain_examples() {
        let r = chain_demo(3).unwrap();
        assert_eq!(r.ranks, vec![2, 2, 2]);
        assert!(r.nested);
        assert_eq!(r.base_rank, 1);
        assert_eq!(r.generators[2], vec!["1,0", "0,1/6"]);
        assert_eq!(chain_demo(2).unwrap().ranks, vec![2, 2]);
        assert!(chain_demo(1).is_err());
    }

    proptest! {
        #[test]
        fn divisible_summands_are_invisible(n in 0u64..6, m in 0u64..6, k in 0u64..=5) {
            let a = TFAbelianGroup::new(n, m);
            prop_assert!(elem_equiv(&a, &a.direct_sum(&TFAbelianGroup::new(0, k))));
        }

        #[test]
        fn equivalence_relation(a in 0u64..4, b in 0u64..4, c in 0u64..4) {
            let (x, y, z) = (TFAbelianGroup::new(a, 1), TFAbelianGroup::new(b, 0), TFAbelianGroup::new(c, 2));
            prop_assert!(elem_equiv(&x, &x));
            prop_assert_eq!(elem_equiv(&x, &y), elem_equiv(&y, &x));
            if elem_equiv(&x, &y) && elem_equiv(&y, &z) {
                prop_assert!(elem_equiv(&x, &z));
            }
        }

        #[test]
        fn alpha_independent_of_prime(n in 0u64..10, m in 0u64..10) {
            let g = TFAbelianGroup::new(n, m);
            let first = alpha_p(&g, 2).unwrap();
            for p in (3..=97).filter(|&p| is_prime(p)) {
                prop_assert_eq!(alpha_p(&g, p).unwrap(), first);
            }
        }

        #[test]
        fn rank_bounded_and_monotone(
            gens in prop::collection::vec((-5i64..5, -5i64..5, 1i64..6), 0..6),
            extra in (-5i64..5, -5i64..5, 1i64..6),
        ) {
            let g: Vec<ZQ> = gens.iter().map(|&(a, p, q)| zq(a, p, q)).collect();
            let r = fg_subgroup_rank(&g);
            prop_assert!(r <= 2);
            let mut h = g.clone();
            h.push(zq(extra.0, extra.1, extra.2));
            prop_assert!(fg_subgroup_rank(&h) >= r);
        }
    }
}
