//! End-to-end verification scenarios. Each scenario is a fixed list of
//! named checks run against the library at chosen parameters.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{self, AlphaValue, TFAbelianGroup};
use crate::error::{Error, Result};
use crate::parse::{parse_equation, parse_tower, parse_word};
use crate::quadratic::{self, AbelianOutcome, ConfigShape, SolveOutcome};
use crate::stallings::SubgroupGraph;
use crate::towers::{self, TowerSpec};
use crate::whitehead;
use crate::words::{Alphabet, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Example31,
    Rank3Witness,
    ForallApObstruction,
    StrongAp,
    PrimitiveTower,
    Szmielew,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Example31,
        Scenario::Rank3Witness,
        Scenario::ForallApObstruction,
        Scenario::StrongAp,
        Scenario::PrimitiveTower,
        Scenario::Szmielew,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Scenario::Example31 => "example-3-1",
            Scenario::Rank3Witness => "rank-3-witness",
            Scenario::ForallApObstruction => "forall-ap-obstruction",
            Scenario::StrongAp => "strong-ap",
            Scenario::PrimitiveTower => "primitive-tower",
            Scenario::Szmielew => "szmielew",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.id() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scenario `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioParams {
    pub scenario: Scenario,
    pub n: i64,
    pub m: i64,
    pub p: i64,
    pub q: i64,
    pub trials: usize,
    pub seed: u64,
    pub plateau_limit: usize,
}

pub const DEFAULT_TRIALS: usize = 500;
pub const DEFAULT_SEED: u64 = 1;

impl ScenarioParams {
    /// Defaults: every parameter 1, except `m = q = 2` where evenness is
    /// required.
    pub fn new(scenario: Scenario) -> Self {
        let even = scenario == Scenario::ForallApObstruction;
        ScenarioParams {
            scenario,
            n: 1,
            m: if even { 2 } else { 1 },
            p: 1,
            q: if even { 2 } else { 1 },
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            plateau_limit: whitehead::PLATEAU_LIMIT,
        }
    }

    pub fn with(mut self, n: i64, m: i64, p: i64, q: i64) -> Self {
        (self.n, self.m, self.p, self.q) = (n, m, p, q);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("n", self.n), ("m", self.m), ("p", self.p), ("q", self.q)] {
            if v < 1 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.scenario == Scenario::ForallApObstruction {
            for (name, v) in [("m", self.m), ("q", self.q)] {
                if v % 2 != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "{name} must be even, got {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub params: ScenarioParams,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let p = &self.params;
        let mut out = format!(
            "scenario {} n={} m={} p={} q={} trials={} seed={}\n",
            p.scenario, p.n, p.m, p.p, p.q, p.trials, p.seed
        );
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!("{} checks, {failed} failed\n", self.checks.len()));
        out
    }
}

type Outcome = Result<(bool, String)>;
type CheckFn<'a> = Box<dyn Fn() -> Outcome + Send + Sync + 'a>;

fn entry<'a>(name: &str, f: impl Fn() -> Outcome + Send + Sync + 'a) -> (String, CheckFn<'a>) {
    (name.to_string(), Box::new(f))
}

fn run_one((name, f): &(String, CheckFn<'_>)) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        name: name.clone(),
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

/// Runs every check of the scenario. With `parallel`, checks run
/// concurrently; the report order is fixed either way.
pub fn paper_verify(params: &ScenarioParams, parallel: bool) -> Result<Report> {
    params.validate()?;
    let list = match params.scenario {
        Scenario::Example31 => example_3_1(params)?,
        Scenario::Rank3Witness => rank_3_witness(params)?,
        Scenario::ForallApObstruction => forall_ap(params)?,
        Scenario::StrongAp => strong_ap(params)?,
        Scenario::PrimitiveTower => primitive_tower(params)?,
        Scenario::Szmielew => szmielew(params),
    };
    let checks = if parallel {
        list.par_iter().map(run_one).collect()
    } else {
        list.iter().map(run_one).collect()
    };
    Ok(Report {
        params: params.clone(),
        checks,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// `h (x~^2 (b~ x~^2n)^m h^-m)^-n`, the image of `b` in the basis
/// `h = b x^2n`, `b~`, `x~` of the centralizer extension.
pub fn b_image_text(n: i64, m: i64) -> String {
    format!("h (x~^2 (b~ x~^{})^{m} h^-{m})^-{n}", 2 * n)
}

fn example_3_1(p: &ScenarioParams) -> Result<Vec<(String, CheckFn<'static>)>> {
    let (n, m) = (p.n, p.m);
    let limit = p.plateau_limit;
    let abx = Alphabet::parse_list("a b x")?;
    let lhs = crate::parse::parse_generating_set("a, b, x^2", &abx)?;
    let rhs_text = format!("a, b x^{0}, x^2 (b x^{0})^{m}", 2 * n);
    let rhs = crate::parse::parse_generating_set(&rhs_text, &abx)?;
    let g1 = SubgroupGraph::build(&lhs, 3);
    let g2 = SubgroupGraph::build(&rhs, 3);

    let tower = parse_tower(&format!(
        "base: a b\nfree: x\next: t u=x^2 (b x^{})^{m}\n",
        2 * n
    ))?;
    let t = *tower.stable_letters().first().expect("one stable letter");
    let u = tower.root_of(t).expect("stable").clone();

    let ahbx = Alphabet::parse_list("a h b~ x~")?;
    let bimg = parse_word(&b_image_text(n, m), &ahbx)?;
    let h = ahbx.gen("h");
    let a = ahbx.gen("a");
    let rhs_label = rhs_text.clone();

    Ok(vec![
        entry("subgroup equality", move || {
            Ok((
                g1.equal(&g2),
                format!("<a, b, x^2> = <{rhs_label}>: {}", yes_no(g1.equal(&g2))),
            ))
        }),
        entry("rank", move || {
            let (r1, r2) = (
                SubgroupGraph::build(&lhs, 3).rank(),
                SubgroupGraph::build(&rhs, 3).rank(),
            );
            Ok((
                r1 == 3 && r2 == 3,
                format!("ranks {r1} and {r2}, expected 3"),
            ))
        }),
        entry("u = u^t", move || {
            let tw = Word::gen(t);
            let w = &(&(&u.inverse() * &tw.inverse()) * &u) * &tw;
            let ok = tower.is_trivial(&w);
            Ok((ok, format!("u^-1 t^-1 u t trivial: {}", yes_no(ok))))
        }),
        entry("b image not primitive", move || {
            let mz = whitehead::minimize(&bimg, 4)?;
            Ok((
                mz.min_length > 1,
                format!("minimal length {} over F(a, h, b~, x~)", mz.min_length),
            ))
        }),
        entry("b x^2n image primitive", {
            let h = h.clone();
            move || {
                let ok = whitehead::is_primitive(&h, 4)?;
                Ok((ok, format!("h primitive: {}", yes_no(ok))))
            }
        }),
        {
            let ahbx = ahbx.clone();
            let a = a.clone();
            entry("L not a free factor", move || {
                let bimg = parse_word(&b_image_text(n, m), &ahbx)?;
                let g = SubgroupGraph::build(&[a.clone(), bimg], 4);
                let ff = whitehead::is_free_factor_with_limit(&g, limit)?;
                Ok((!ff, format!("<a, b image> free factor: {}", yes_no(ff))))
            })
        },
        entry("<a, h> free factor", move || {
            let g = SubgroupGraph::build(&[a.clone(), h.clone()], 4);
            let ff = whitehead::is_free_factor_with_limit(&g, limit)?;
            Ok((ff, format!("<a, h> free factor: {}", yes_no(ff))))
        }),
    ])
}

fn rank_3_witness(p: &ScenarioParams) -> Result<Vec<(String, CheckFn<'static>)>> {
    let (n, m) = (p.n, p.m);
    let al = Alphabet::parse_list("h b~ x~")?;
    let h = al.gen("h");
    let bimg = parse_word(&b_image_text(n, m), &al)?;
    Ok(vec![
        entry("h primitive", move || {
            let ok = whitehead::is_primitive(&h, 3)?;
            Ok((ok, format!("is_primitive(h) = {ok}")))
        }),
        entry("b image not primitive", move || {
            let mz = whitehead::minimize(&bimg, 3)?;
            Ok((
                mz.min_length > 1,
                format!("minimal length {} over F(h, b~, x~)", mz.min_length),
            ))
        }),
    ])
}

const OBSTRUCTION_BOUND: usize = 4;

fn forall_ap(p: &ScenarioParams) -> Result<Vec<(String, CheckFn<'static>)>> {
    let (m, q) = (p.m, p.q);
    let al = Alphabet::parse_list("e1 e2 e3")?;
    let text = format!("?x^8 ?y^{m} ?z^-{m} = e1^7 e2^{q} e3^-{q}");
    let eq = parse_equation(&text, Some(&al))?;
    let eq2 = eq.clone();
    let label = text.clone();
    Ok(vec![
        entry("abelian obstruction", move || {
            Ok(match quadratic::abelian_obstruction(&eq) {
                AbelianOutcome::Obstructed { rows } => {
                    let names: Vec<&str> = rows.iter().map(|&r| al.name(r)).collect();
                    (true, format!("{label}: obstructed at {}", names.join(", ")))
                }
                AbelianOutcome::Solvable { .. } => {
                    (false, format!("{label}: abelian solution exists"))
                }
            })
        }),
        entry("configurations m_coef=2", || {
            let cs = quadratic::enumerate_shape(&genus0(2))?;
            let rendered: Vec<String> = cs.iter().map(|c| c.render()).collect();
            Ok((
                cs.len() == 1,
                format!("{} configuration(s): {}", cs.len(), rendered.join("; ")),
            ))
        }),
        entry("configurations m_coef=3", || {
            let shape = genus0(3);
            let cs = quadratic::enumerate_shape(&shape)?;
            let mut sizes: Vec<usize> = cs.iter().map(|c| c.n).collect();
            sizes.sort_unstable();
            sizes.dedup();
            let valid = cs
                .iter()
                .all(|c| c.each_variable_twice() && c.admissible(&shape));
            Ok((
                sizes == [2, 3] && valid,
                format!(
                    "{} configuration(s), |P| in {sizes:?}, all admissible: {}",
                    cs.len(),
                    yes_no(valid)
                ),
            ))
        }),
        entry("bounded search", move || {
            Ok(match quadratic::brute_solve(&eq2, OBSTRUCTION_BOUND)? {
                SolveOutcome::NoneWithinBound { bound } => {
                    (true, format!("no solution with |x|, |y|, |z| <= {bound}"))
                }
                SolveOutcome::Solution(s) => {
                    let r: Vec<String> = s.iter().map(|w| eq2.alphabet().render(w)).collect();
                    (false, format!("solution found: {}", r.join(", ")))
                }
            })
        }),
    ])
}

fn genus0(m: usize) -> ConfigShape {
    ConfigShape {
        orientable: true,
        genus: 0,
        m_coef: m,
    }
}

/// Base `<b, x>` with `t1` centralizing `x^2 (b x^2n)^m` and `t2`
/// centralizing `x^4 (b x^4p)^q`.
pub fn strong_ap_tower(n: i64, m: i64, p: i64, q: i64) -> Result<TowerSpec> {
    parse_tower(&format!(
        "base: b x\next: t1 u=x^2 (b x^{})^{m}\next: t2 u=x^4 (b x^{})^{q}\n",
        2 * n,
        4 * p
    ))
}

/// The four identities in the strong-AP tower, as words that must be
/// trivial: `b` and `x^4` expressed over `H = <h, b~, x~>` and over
/// `K = <k, b', x'>`.
pub fn strong_ap_identities(n: i64, m: i64, p: i64, q: i64) -> Vec<(&'static str, String)> {
    let h = format!("(b x^{})", 2 * n);
    let bt = "(t1^-1 b t1)";
    let xt = "(t1^-1 x t1)";
    let hh = format!("({xt}^2 ({bt} {xt}^{})^{m} {h}^-{m})", 2 * n);
    let k = format!("(b x^{})", 4 * p);
    let bh = "(t2^-1 b t2)";
    let xh = "(t2^-1 x t2)";
    let kk = format!("({xh}^4 ({bh} {xh}^{})^{q} {k}^-{q})", 4 * p);
    vec![
        ("b in H", format!("b^-1 {h} {hh}^-{n}")),
        ("x^4 in H", format!("x^-4 {hh}^2")),
        ("b in K", format!("b^-1 {k} {kk}^-{p}")),
        ("x^4 in K", format!("x^-4 {kk}")),
    ]
}

/// `x'^4 (b' x'^4p)^q k^-q` over `F(k, b', x')`.
pub fn strong_ap_square_candidate(p: i64, q: i64) -> Result<Word> {
    let al = Alphabet::parse_list("k b' x'")?;
    parse_word(&format!("x'^4 (b' x'^{})^{q} k^-{q}", 4 * p), &al)
}

/// Not a square: by the odd `k` exponent sum when `q` is odd, by root
/// extraction (odd power of the root) otherwise.
pub fn certify_not_square(w: &Word, q: i64) -> Result<(bool, String)> {
    if q % 2 != 0 {
        let s = w.exponent_sum(0);
        Ok((s % 2 != 0, format!("k exponent sum {s}")))
    } else {
        let (_, k) = w.root()?;
        Ok((k % 2 == 1, format!("root power {k}")))
    }
}

fn strong_ap(prm: &ScenarioParams) -> Result<Vec<(String, CheckFn<'static>)>> {
    let (n, m, p, q) = (prm.n, prm.m, prm.p, prm.q);
    let tower = std::sync::Arc::new(strong_ap_tower(n, m, p, q)?);
    let mut out: Vec<(String, CheckFn<'static>)> = Vec::new();
    for (name, text) in strong_ap_identities(n, m, p, q) {
        let tower = tower.clone();
        out.push(entry(name, move || {
            let w = tower.parse_word(&text)?;
            let nf = tower.reduce(&w);
            Ok((
                nf.is_identity(),
                format!("normal form {}", tower.alphabet().render(&nf)),
            ))
        }));
    }
    out.push(entry("not a square in F(k, b', x')", move || {
        let w = strong_ap_square_candidate(p, q)?;
        certify_not_square(&w, q)
    }));
    Ok(out)
}

const SAMPLE_LEN: usize = 8;

fn primitive_tower(prm: &ScenarioParams) -> Result<Vec<(String, CheckFn<'static>)>> {
    let count = prm.m as usize;
    let (trials, seed) = (prm.trials, prm.seed);
    let al = Alphabet::parse_list("a b")?;
    let c = vec![al.gen("a"), al.gen("b")];
    let tower = std::sync::Arc::new(towers::build_primitive_tower(&al, &c)?);
    let t1 = tower.stable_letters()[0];
    let g = al.gen("b");
    let images = tower.embed_free_product(t1, count, &g)?;

    let rel = tower.clone();
    let base = tower.clone();
    Ok(vec![
        entry("relators trivial", move || {
            let ok = rel.stable_letters().iter().zip(&c).all(|(&t, ci)| {
                let tw = Word::gen(t);
                rel.is_trivial(&ci.commutator(&tw))
            });
            Ok((ok, format!("[c_i, t_i] = 1 for {} stable letters", c.len())))
        }),
        entry("base injects", move || {
            let words = Word::enumerate(2, 4);
            let bad = words.iter().skip(1).filter(|w| base.is_trivial(w)).count();
            Ok((
                bad == 0,
                format!(
                    "{} nontrivial words of length <= 4, {bad} trivial",
                    words.len() - 1
                ),
            ))
        }),
        entry("free product embeds", move || {
            let r = tower.check_injective_sample(&images, trials, SAMPLE_LEN, seed);
            Ok((
                r.passed(),
                format!(
                    "{} samples of length <= {} in {count} free generator(s), {} trivial, {} collisions",
                    r.trials, r.max_len, r.trivial_images, r.collisions
                ),
            ))
        }),
    ])
}

const PRIMES_UP_TO: u64 = 97;
const CHAIN_BOUND: u64 = 5;

fn szmielew(prm: &ScenarioParams) -> Vec<(String, CheckFn<'static>)> {
    let (n, m) = (prm.n as u64, prm.m as u64);
    let g = TFAbelianGroup::new(n, m);
    let zn = TFAbelianGroup::new(n, 0);
    vec![
        entry("alpha_p", move || {
            let primes: Vec<u64> = (2..=PRIMES_UP_TO)
                .filter(|&p| abelian::is_prime(p))
                .collect();
            let ok = primes
                .iter()
                .map(|&p| abelian::alpha_p(&g, p))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(|a| *a == AlphaValue::Finite(n));
            Ok((
                ok,
                format!(
                    "alpha_p = {n} for the {} primes <= {PRIMES_UP_TO}",
                    primes.len()
                ),
            ))
        }),
        entry("Z^n = Z^n + Q^m", move || {
            let ok = abelian::elem_equiv(&zn, &zn.direct_sum(&TFAbelianGroup::new(0, m)));
            Ok((ok, format!("elementarily equivalent: {}", yes_no(ok))))
        }),
        entry("Z^n != Z^(n+1)", move || {
            let ok = !abelian::elem_equiv(&zn, &TFAbelianGroup::new(n + 1, 0));
            Ok((ok, format!("elementarily equivalent: {}", yes_no(!ok))))
        }),
        entry("chain demo", || {
            let r = abelian::chain_demo(CHAIN_BOUND)?;
            let ok = r.base_rank == 1 && r.ranks.iter().all(|&k| k == 2) && r.nested;
            Ok((
                ok,
                format!(
                    "H_0 rank {}, ranks {:?}, nested: {}",
                    r.base_rank,
                    r.ranks,
                    yes_no(r.nested)
                ),
            ))
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_errors() {
        let p = ScenarioParams::new(Scenario::ForallApObstruction).with(1, 1, 1, 2);
        assert!(matches!(
            paper_verify(&p, false),
            Err(Error::InvalidParameter(_))
        ));
        let p = ScenarioParams::new(Scenario::Example31).with(0, 1, 1, 1);
        assert!(matches!(
            paper_verify(&p, false),
            Err(Error::InvalidParameter(_))
        ));
        assert!("nope".parse::<Scenario>().is_err());
        assert_eq!("strong-ap".parse::<Scenario>().unwrap(), Scenario::StrongAp);
    }

    #[test]
    fn strong_ap_defaults() {
        let r = paper_verify(&ScenarioParams::new(Scenario::StrongAp), false).unwrap();
        assert!(r.passed(), "{}", r.render());
        assert_eq!(r.checks.len(), 5);
    }

    #[test]
    fn szmielew_defaults() {
        let r = paper_verify(&ScenarioParams::new(Scenario::Szmielew), true).unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn parallel_keeps_order() {
        let p = ScenarioParams::new(Scenario::PrimitiveTower);
        let a = paper_verify(&p, false).unwrap();
        let b = paper_verify(&p, true).unwrap();
        let names = |r: &Report| r.checks.iter().map(|c| c.name.clone()).collect::<Vec<_>>();
        assert_eq!(names(&a), names(&b));
        assert_eq!(a.render(), b.render());
        assert!(a.passed(), "{}", a.render());
    }

    #[test]
    fn not_square_certificates() {
        for q in [1, 2, 3, 4] {
            let w = strong_ap_square_candidate(1, q).unwrap();
            assert!(certify_not_square(&w, q).unwrap().0);
        }
        let al = Alphabet::parse_list("k b' x'").unwrap();
        let sq = parse_word("(x' k)^2", &al).unwrap();
        assert!(!certify_not_square(&sq, 2).unwrap().0);
    }
}
