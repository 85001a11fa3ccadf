use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use fg_core::abelian::{self, TFAbelianGroup, ZQ};
use fg_core::parse::{self, parse_abelian, parse_equation, parse_tower, parse_word};
use fg_core::quadratic::{self, AbelianOutcome, ImpossOutcome, LsOutcome, SolveOutcome};
use fg_core::scenarios::{self, Scenario, ScenarioParams};
use fg_core::stallings::SubgroupGraph;
use fg_core::towers::TowerSpec;
use fg_core::{json as js, whitehead, Alphabet, Error, Result, Word};

#[derive(Parser)]
#[command(
    name = "fg",
    version,
    about = "Free groups, towers and quadratic equations"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of sampled trials.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Generator names, space separated (inferred from the input if absent).
    #[arg(long, global = true)]
    alphabet: Option<String>,
    /// Bound on plateau states in subgroup minimization.
    #[arg(long, global = true, default_value_t = whitehead::PLATEAU_LIMIT)]
    plateau_limit: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stallings graph queries.
    #[command(subcommand)]
    Subgroup(SubgroupCmd),
    /// Is the word part of a basis?
    Primitive { word: String },
    /// Is the subgroup a free factor?
    FreeFactor {
        #[arg(short = 'g', required = true)]
        gens: Vec<String>,
    },
    /// Whitehead minimization.
    #[command(subcommand)]
    Whitehead(WhiteheadCmd),
    /// Iterated centralizer extensions.
    Tower(TowerArgs),
    /// Quadratic equations.
    #[command(subcommand)]
    Quad(QuadCmd),
    /// Periodicity lemma on one triple.
    LsCheck {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
        #[arg(long)]
        n1: i64,
        #[arg(long)]
        n2: i64,
    },
    /// Short-product lemma on one triple, or an exhaustive sweep.
    ImpossCheck {
        #[arg(long)]
        sweep: bool,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, required_unless_present = "sweep")]
        a: Option<String>,
        #[arg(long, required_unless_present = "sweep")]
        b: Option<String>,
        #[arg(long, required_unless_present = "sweep")]
        c: Option<String>,
        #[arg(long, default_value_t = 9)]
        m: i64,
        #[arg(long, default_value_t = 7)]
        j: i64,
    },
    /// Torsion-free abelian groups Z^n + Q^m.
    #[command(subcommand)]
    Abelian(AbelianCmd),
    /// Scripted end-to-end verification scenarios.
    #[command(subcommand)]
    Paper(PaperCmd),
}

#[derive(Subcommand)]
enum SubgroupCmd {
    Basis {
        #[arg(short = 'g', required = true)]
        gens: Vec<String>,
    },
    Member {
        #[arg(short = 'g', required = true)]
        gens: Vec<String>,
        word: String,
    },
    /// Compares `-g` with `-k`.
    Equal {
        #[arg(short = 'g', required = true)]
        gens: Vec<String>,
        #[arg(short = 'k', required = true)]
        other: Vec<String>,
    },
    Rank {
        #[arg(short = 'g', required = true)]
        gens: Vec<String>,
    },
}

#[derive(Subcommand)]
enum WhiteheadCmd {
    Minimize { word: String },
}

#[derive(Args)]
struct TowerArgs {
    /// Tower description file.
    #[arg(long)]
    tower: PathBuf,
    #[command(subcommand)]
    cmd: TowerCmd,
}

#[derive(Subcommand)]
enum TowerCmd {
    /// Checks the description and prints it back.
    Validate,
    /// Normal form and triviality of a word.
    Wp {
        word: String,
    },
    /// Images of free generators under the free-product embedding.
    Embed {
        #[arg(long)]
        count: usize,
        #[arg(long = "g")]
        g: String,
        /// Stable letter (defaults to the first).
        #[arg(long)]
        t: Option<String>,
    },
    /// Samples words in the embedded free generators and looks for collisions.
    InjectTest {
        #[arg(long, default_value_t = 2)]
        count: usize,
        #[arg(long = "g")]
        g: String,
        #[arg(long)]
        t: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum QuadCmd {
    Classify {
        equation: String,
    },
    Nbound {
        equation: String,
    },
    Configs {
        equation: String,
    },
    Abelian {
        equation: String,
    },
    Solve {
        equation: String,
        #[arg(long)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum AbelianCmd {
    Alpha {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
    },
    /// Elementary equivalence of two groups written like `Z^2 + Q`.
    Equiv { first: String, second: String },
    /// Rank of a subgroup of Z + Q generated by pairs `a,p/q`.
    Fgsub {
        #[arg(short = 'g', required = true)]
        gens: Vec<String>,
    },
    ChainDemo {
        #[arg(long, default_value_t = 5)]
        bound: u64,
    },
}

#[derive(Subcommand)]
enum PaperCmd {
    Verify {
        scenario: String,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        q: Option<i64>,
        #[arg(long)]
        parallel: bool,
    },
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Output {
            text: text.into(),
            json,
            ok: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                );
            } else {
                print!("{}", out.text);
                if !out.text.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                println!(
                    "{}",
                    json!({ "error": e.to_string(), "exit_code": e.exit_code() })
                );
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn alphabet_for(cli: &Cli, words: &[&str]) -> Result<Alphabet> {
    match &cli.alphabet {
        Some(list) => Alphabet::parse_list(list),
        None => parse::infer_alphabet(words.iter().copied()),
    }
}

fn words(al: &Alphabet, texts: &[String]) -> Result<Vec<Word>> {
    texts.iter().map(|t| parse_word(t, al)).collect()
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.cmd {
        Cmd::Subgroup(c) => subgroup(cli, c),
        Cmd::Primitive { word } => {
            let al = alphabet_for(cli, &[word])?;
            let w = parse_word(word, &al)?;
            let p = whitehead::is_primitive(&w, al.rank())?;
            Ok(Output::new(p.to_string(), json!({ "primitive": p })))
        }
        Cmd::FreeFactor { gens } => {
            let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
            let al = alphabet_for(cli, &refs)?;
            let g = SubgroupGraph::build(&words(&al, gens)?, al.rank());
            let ff = whitehead::is_free_factor_with_limit(&g, cli.plateau_limit)?;
            Ok(Output::new(ff.to_string(), json!({ "free_factor": ff })))
        }
        Cmd::Whitehead(WhiteheadCmd::Minimize { word }) => {
            let al = alphabet_for(cli, &[word])?;
            let w = parse_word(word, &al)?;
            let mz = whitehead::minimize(&w, al.rank())?;
            let moves: Vec<String> = mz.moves.iter().map(|m| m.describe(&al)).collect();
            let mut text = format!("{} (length {})\n", al.render(&mz.minimal), mz.min_length);
            for m in &moves {
                text.push_str(&format!("  {m}\n"));
            }
            Ok(Output::new(
                text,
                json!({ "minimal": al.render(&mz.minimal), "min_length": mz.min_length, "moves": moves }),
            ))
        }
        Cmd::Tower(t) => tower(cli, t),
        Cmd::Quad(q) => quad(cli, q),
        Cmd::LsCheck { u, v, w, n1, n2 } => {
            let al = alphabet_for(cli, &[u, v, w])?;
            let (u, v, w) = (
                parse_word(u, &al)?,
                parse_word(v, &al)?,
                parse_word(w, &al)?,
            );
            Ok(match quadratic::ls_check(&u, &v, &w, *n1, *n2)? {
                LsOutcome::PremiseNotMet { reason } => Output::new(
                    format!("premise not met: {reason}"),
                    json!({ "outcome": "premise-not-met", "reason": reason }),
                ),
                LsOutcome::Conclusion { a1, a2, k1, k2 } => Output::new(
                    format!(
                        "u = ({})^{k1}, v = ({})^{k2}",
                        al.render(&a1),
                        al.render(&a2)
                    ),
                    json!({ "outcome": "conclusion", "a1": al.render(&a1), "a2": al.render(&a2), "k1": k1, "k2": k2 }),
                ),
                LsOutcome::Counterexample { reason } => Output {
                    ok: false,
                    ..Output::new(
                        format!("counterexample: {reason}"),
                        json!({ "outcome": "counterexample", "reason": reason }),
                    )
                },
            })
        }
        Cmd::ImpossCheck {
            sweep,
            rank,
            max_len,
            a,
            b,
            c,
            m,
            j,
        } => {
            if *sweep {
                let s = quadratic::imposs_sweep(*rank, *max_len);
                return Ok(Output {
                    ok: s.counterexamples == 0,
                    ..Output::new(
                        format!(
                            "{} triples, premise held {}, witnesses {}, counterexamples {}",
                            s.triples, s.premise_held, s.witnesses, s.counterexamples
                        ),
                        serde_json::to_value(&s).expect("serializable"),
                    )
                });
            }
            let (a, b, c) = (
                a.as_deref().unwrap_or(""),
                b.as_deref().unwrap_or(""),
                c.as_deref().unwrap_or(""),
            );
            let al = alphabet_for(cli, &[a, b, c])?;
            let (a, b, c) = (
                parse_word(a, &al)?,
                parse_word(b, &al)?,
                parse_word(c, &al)?,
            );
            Ok(match quadratic::imposs_check(&a, &b, &c, *m, *j)? {
                ImpossOutcome::PremiseNotMet { length } => Output::new(
                    format!("premise not met: product has length {length}"),
                    json!({ "outcome": "premise-not-met", "length": length }),
                ),
                ImpossOutcome::Witness(wt) => {
                    let names = ["a", "b", "c"];
                    Output::new(
                        format!(
                            "{} commutes with {}^z for z = {}",
                            names[wt.first],
                            names[wt.second],
                            al.render(&wt.conjugator)
                        ),
                        json!({ "outcome": "witness", "first": names[wt.first], "second": names[wt.second], "conjugator": al.render(&wt.conjugator) }),
                    )
                }
                ImpossOutcome::Counterexample { length } => Output {
                    ok: false,
                    ..Output::new(
                        format!("counterexample: product length {length}, no commuting pair"),
                        json!({ "outcome": "counterexample", "length": length }),
                    )
                },
            })
        }
        Cmd::Abelian(a) => abelian_cmd(a),
        Cmd::Paper(PaperCmd::Verify {
            scenario,
            n,
            m,
            p,
            q,
            parallel,
        }) => {
            let sc: Scenario = scenario.parse()?;
            let mut prm = ScenarioParams::new(sc);
            prm.n = n.unwrap_or(prm.n);
            prm.m = m.unwrap_or(prm.m);
            prm.p = p.unwrap_or(prm.p);
            prm.q = q.unwrap_or(prm.q);
            prm.trials = cli.trials.unwrap_or(prm.trials);
            prm.seed = cli.seed.unwrap_or(prm.seed);
            prm.plateau_limit = cli.plateau_limit;
            let report = scenarios::paper_verify(&prm, *parallel)?;
            Ok(Output {
                ok: report.passed(),
                text: report.render(),
                json: serde_json::to_value(&report).expect("serializable"),
            })
        }
    }
}

fn subgroup(cli: &Cli, c: &SubgroupCmd) -> Result<Output> {
    let mut texts: Vec<&str> = Vec::new();
    match c {
        SubgroupCmd::Basis { gens } | SubgroupCmd::Rank { gens } => {
            texts.extend(gens.iter().map(String::as_str))
        }
        SubgroupCmd::Member { gens, word } => {
            texts.extend(gens.iter().map(String::as_str));
            texts.push(word);
        }
        SubgroupCmd::Equal { gens, other } => {
            texts.extend(gens.iter().chain(other).map(String::as_str))
        }
    }
    let al = alphabet_for(cli, &texts)?;
    let build = |g: &[String]| -> Result<SubgroupGraph> {
        Ok(SubgroupGraph::build(&words(&al, g)?, al.rank()))
    };
    Ok(match c {
        SubgroupCmd::Basis { gens } => {
            let basis = build(gens)?.basis();
            Output::new(
                parse::print_generating_set(&basis, &al),
                js::generators(&al, &basis),
            )
        }
        SubgroupCmd::Rank { gens } => {
            let r = build(gens)?.rank();
            Output::new(r.to_string(), json!({ "rank": r }))
        }
        SubgroupCmd::Member { gens, word } => {
            let w = parse_word(word, &al)?;
            let m = build(gens)?.member(&w);
            Output::new(m.to_string(), json!({ "member": m }))
        }
        SubgroupCmd::Equal { gens, other } => {
            let e = build(gens)?.equal(&build(other)?);
            Output::new(e.to_string(), json!({ "equal": e }))
        }
    })
}

fn stable_letter(spec: &TowerSpec, name: &Option<String>) -> Result<usize> {
    match name {
        None => spec
            .stable_letters()
            .first()
            .copied()
            .ok_or_else(|| Error::Precondition("tower has no stable letter".into())),
        Some(n) => spec
            .alphabet()
            .index_of(n)
            .filter(|&i| spec.is_stable(i))
            .ok_or_else(|| Error::Precondition(format!("`{n}` is not a stable letter"))),
    }
}

fn tower(cli: &Cli, t: &TowerArgs) -> Result<Output> {
    let text = std::fs::read_to_string(&t.tower)
        .map_err(|e| Error::InvalidParameter(format!("{}: {e}", t.tower.display())))?;
    let spec = parse_tower(&text)?;
    let al = spec.alphabet();
    Ok(match &t.cmd {
        TowerCmd::Validate => Output::new(
            parse::print_tower(&spec),
            json!({
                "valid": true,
                "alphabet": al.names(),
                "stable_letters": spec.stable_letters().iter().map(|&i| al.name(i)).collect::<Vec<_>>(),
            }),
        ),
        TowerCmd::Wp { word } => {
            let w = spec.parse_word(word)?;
            let nf = spec.reduce(&w);
            let trivial = nf.is_identity();
            Output::new(
                format!("{}\ntrivial: {trivial}", al.render(&nf)),
                json!({ "normal_form": al.render(&nf), "trivial": trivial }),
            )
        }
        TowerCmd::Embed { count, g, t } => {
            let ti = stable_letter(&spec, t)?;
            let g = spec.parse_word(g)?;
            let imgs = spec.embed_free_product(ti, *count, &g)?;
            Output::new(
                parse::print_generating_set(&imgs, al),
                js::generators(al, &imgs),
            )
        }
        TowerCmd::InjectTest {
            count,
            g,
            t,
            max_len,
        } => {
            let ti = stable_letter(&spec, t)?;
            let g = spec.parse_word(g)?;
            let imgs = spec.embed_free_product(ti, *count, &g)?;
            let r = spec.check_injective_sample(
                &imgs,
                cli.trials.unwrap_or(scenarios::DEFAULT_TRIALS),
                *max_len,
                cli.seed.unwrap_or(scenarios::DEFAULT_SEED),
            );
            Output {
                ok: r.passed(),
                text: format!(
                    "{} samples, seed {}, length <= {}: {} trivial, {} collisions",
                    r.trials, r.seed, r.max_len, r.trivial_images, r.collisions
                ),
                json: serde_json::to_value(&r).expect("serializable"),
            }
        }
    })
}

fn equation(cli: &Cli, text: &str) -> Result<quadratic::Equation> {
    match &cli.alphabet {
        Some(list) => parse_equation(text, Some(&Alphabet::parse_list(list)?)),
        None => parse_equation(text, None),
    }
}

fn quad(cli: &Cli, q: &QuadCmd) -> Result<Output> {
    Ok(match q {
        QuadCmd::Classify { equation: e } => {
            let qe = quadratic::classify(&equation(cli, e)?)?;
            let kind = if qe.orientable {
                "orientable"
            } else {
                "non-orientable"
            };
            Output::new(
                format!(
                    "{}\n{kind}, genus {}, m_coef {}, chi_bar {}",
                    qe.render(),
                    qe.genus,
                    qe.m_coef(),
                    qe.chi_bar()
                ),
                json!({ "standard_form": qe.render(), "orientable": qe.orientable, "genus": qe.genus, "m_coef": qe.m_coef(), "chi_bar": qe.chi_bar() }),
            )
        }
        QuadCmd::Nbound { equation: e } => {
            let qe = quadratic::classify(&equation(cli, e)?)?;
            let n = qe.n_bound();
            Output::new(n.to_string(), json!({ "n_bound": n }))
        }
        QuadCmd::Configs { equation: e } => {
            let qe = quadratic::classify(&equation(cli, e)?)?;
            let cs = quadratic::enumerate_configs(&qe)?;
            let lines: Vec<String> = cs.iter().map(|c| c.render()).collect();
            Output::new(
                lines.join("\n"),
                json!({ "configurations": cs.iter().map(|c| json!({ "boundaries": c.render(), "n": c.n, "surfaces": serde_json::to_value(&c.surfaces).expect("serializable") })).collect::<Vec<_>>() }),
            )
        }
        QuadCmd::Abelian { equation: e } => {
            let eq = equation(cli, e)?;
            match quadratic::abelian_obstruction(&eq) {
                AbelianOutcome::Obstructed { rows } => {
                    let names: Vec<&str> = rows.iter().map(|&r| eq.alphabet().name(r)).collect();
                    Output::new(
                        format!("obstructed at {}", names.join(", ")),
                        json!({ "obstructed": true, "generators": names }),
                    )
                }
                AbelianOutcome::Solvable { witness } => {
                    let text = eq
                        .variables()
                        .iter()
                        .zip(&witness)
                        .map(|(v, x)| format!("{v} -> {x:?}"))
                        .collect::<Vec<_>>()
                        .join("\n");
                    Output::new(
                        format!("solvable\n{text}"),
                        json!({ "obstructed": false, "witness": witness }),
                    )
                }
            }
        }
        QuadCmd::Solve { equation: e, bound } => {
            let eq = equation(cli, e)?;
            match quadratic::brute_solve(&eq, *bound)? {
                SolveOutcome::Solution(vals) => {
                    let pairs: Vec<(String, String)> = eq
                        .variables()
                        .iter()
                        .zip(&vals)
                        .map(|(v, w)| (v.clone(), eq.alphabet().render(w)))
                        .collect();
                    Output::new(
                        pairs
                            .iter()
                            .map(|(v, w)| format!("{v} = {w}"))
                            .collect::<Vec<_>>()
                            .join("\n"),
                        json!({ "solution": pairs.into_iter().map(|(v, w)| (v, Value::String(w))).collect::<serde_json::Map<String, Value>>() }),
                    )
                }
                SolveOutcome::NoneWithinBound { bound } => Output::new(
                    format!("no solution within bound {bound}"),
                    json!({ "solution": null, "bound": bound }),
                ),
            }
        }
    })
}

fn parse_zq(text: &str) -> Result<ZQ> {
    let bad = || Error::syntax(0, format!("expected `a,p/q`, found `{text}`"));
    let (a, r) = text.split_once(',').ok_or_else(bad)?;
    let a: BigInt = a.trim().parse().map_err(|_| bad())?;
    let r: BigRational = r.trim().parse().map_err(|_| bad())?;
    Ok((a, r))
}

fn abelian_cmd(a: &AbelianCmd) -> Result<Output> {
    Ok(match a {
        AbelianCmd::Alpha { n, m, p } => {
            let g = TFAbelianGroup::new(*n, *m);
            let v = abelian::alpha_p(&g, *p)?;
            let mut j = js::szmielew(&g);
            j["p"] = json!(p);
            j["alpha_p"] = serde_json::to_value(v).expect("serializable");
            Output::new(format!("{v}"), j)
        }
        AbelianCmd::Equiv { first, second } => {
            let (g, h) = (parse_abelian(first)?, parse_abelian(second)?);
            let e = abelian::elem_equiv(&g, &h);
            Output::new(e.to_string(), json!({ "equivalent": e }))
        }
        AbelianCmd::Fgsub { gens } => {
            let gs = gens
                .iter()
                .map(|g| parse_zq(g))
                .collect::<Result<Vec<_>>>()?;
            let r = abelian::fg_subgroup_rank(&gs);
            Output::new(r.to_string(), json!({ "rank": r }))
        }
        AbelianCmd::ChainDemo { bound } => {
            let r = abelian::chain_demo(*bound)?;
            let mut text = format!("H_0 = <1,0> rank {}\n", r.base_rank);
            for (k, (g, rank)) in r.generators.iter().zip(&r.ranks).enumerate() {
                text.push_str(&format!("H_{} = <{}> rank {rank}\n", k + 1, g.join("; ")));
            }
            text.push_str(&format!("nested: {}", r.nested));
            Output::new(text, serde_json::to_value(&r).expect("serializable"))
        }
    })
}
