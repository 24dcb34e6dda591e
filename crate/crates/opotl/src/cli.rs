//! The `opotl` command line: parsing, evaluation, automata runs, bounded
//! trace checking, translations, and the randomized cross-check suites.
//!
//! Exit codes: 0 on success (or a true property), 1 when a checked property
//! is false or a counterexample was found (printed), 2 on usage or input
//! errors.

use std::fs;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::alphabet::{builtin_mcall, load_opm, OpAlphabet};
use crate::crosscheck as suites;
use crate::fol::nu;
use crate::opa::{builtin_fig5, load_opa, max_automaton, Opa};
use crate::parser::parse;
use crate::potl::ast::PotlFormula;
use crate::potl::eval::eval;
use crate::potl::ltl::{parse_ltl, translate_ltl};
use crate::potl::syntax::parse_potl;
use crate::uot::{load_tree, tau, tau_inverse};
use crate::words::{load_word, random_compatible_word, OpWord};
use crate::xuntil::{iota, parse_xuntil};

#[derive(Parser)]
#[command(
    name = "opotl",
    about = "Operator precedence words, automata, and the POTL temporal logic",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct WordInput {
    /// Matrix: `mcall` or the path of an OPM file.
    #[arg(short = 'm', long = "matrix", default_value = "mcall")]
    matrix: String,
    /// Word file (whitespace-separated tokens).
    #[arg(short = 'w', long = "word-file")]
    word_file: Option<String>,
    /// Inline word tokens.
    #[arg(long = "word")]
    word: Option<String>,
}

#[derive(Args)]
struct SuiteOpts {
    /// Matrix: `mcall` or the path of an OPM file.
    #[arg(short = 'm', long = "matrix", default_value = "mcall")]
    matrix: String,
    /// Number of random words.
    #[arg(short = 'n', long = "words", default_value_t = 50)]
    words: usize,
    /// Maximum body length of each word.
    #[arg(long = "len", default_value_t = 10)]
    len: usize,
    /// Number of random formulas (or operand pairs).
    #[arg(long = "formulas", default_value_t = 25)]
    formulas: usize,
    /// Maximum formula depth.
    #[arg(long = "depth", default_value_t = 3)]
    depth: usize,
    /// Seed for all randomness (required: there is no ambient randomness).
    #[arg(long = "seed")]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a word: chain pairs, optionally the reduction trace.
    Parse {
        #[command(flatten)]
        input: WordInput,
        /// Also print the bottom-up reduction rows.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the chain relation with per-position contexts.
    Chains {
        #[command(flatten)]
        input: WordInput,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a POTL formula on a word.
    Eval {
        #[command(flatten)]
        input: WordInput,
        /// POTL formula.
        #[arg(short = 'f', long = "formula")]
        formula: String,
        /// Report only the truth value at this position (exit 1 when false).
        #[arg(long = "at")]
        at: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Run an automaton on a word.
    Accept {
        #[command(flatten)]
        input: WordInput,
        /// Automaton: `fig5`, `max`, or the path of an automaton file.
        #[arg(short = 'a', long = "automaton")]
        automaton: String,
        /// Print an accepting run.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate all accepted words up to a body length.
    Enum {
        /// Matrix: `mcall` or the path of an OPM file.
        #[arg(short = 'm', long = "matrix", default_value = "mcall")]
        matrix: String,
        /// Automaton: `fig5`, `max`, or a file path.
        #[arg(short = 'a', long = "automaton")]
        automaton: String,
        /// Maximum body length.
        #[arg(short = 'n', long = "max-body")]
        max_body: usize,
        #[arg(long)]
        json: bool,
    },
    /// Bounded trace checking: evaluate a formula at position 0 of every
    /// accepted word up to a body length, reporting the first counterexample.
    Check {
        /// Matrix: `mcall` or the path of an OPM file.
        #[arg(short = 'm', long = "matrix", default_value = "mcall")]
        matrix: String,
        /// Automaton: `fig5`, `max`, or a file path.
        #[arg(short = 'a', long = "automaton")]
        automaton: String,
        /// POTL formula to check.
        #[arg(short = 'f', long = "formula")]
        formula: String,
        /// Maximum body length.
        #[arg(short = 'n', long = "max-body")]
        max_body: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the tree of a word.
    Tree {
        #[command(flatten)]
        input: WordInput,
        #[arg(long)]
        json: bool,
    },
    /// Rebuild the word of a serialized tree.
    Untree {
        /// Matrix: `mcall` or the path of an OPM file.
        #[arg(short = 'm', long = "matrix", default_value = "mcall")]
        matrix: String,
        /// Tree file.
        #[arg(short = 't', long = "tree-file")]
        tree_file: String,
        #[arg(long)]
        json: bool,
    },
    /// Translate a formula from another logic into POTL or FOL.
    #[command(subcommand)]
    Translate(TranslateCmd),
    /// Run a randomized oracle-equivalence suite.
    #[command(subcommand)]
    Crosscheck(CrosscheckCmd),
    /// Generate random matrix-compatible words.
    Gen {
        /// Matrix: `mcall` or the path of an OPM file.
        #[arg(short = 'm', long = "matrix", default_value = "mcall")]
        matrix: String,
        /// How many words.
        #[arg(short = 'n', long = "count", default_value_t = 10)]
        count: usize,
        /// Maximum body length.
        #[arg(long = "len", default_value_t = 10)]
        len: usize,
        /// Seed (required: there is no ambient randomness).
        #[arg(long = "seed")]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum TranslateCmd {
    /// LTL (with past) into POTL.
    Ltl {
        #[arg(short = 'f', long = "formula")]
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// POTL into first-order logic (lisp-like output).
    Fo {
        #[arg(short = 'f', long = "formula")]
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Tree logic into POTL.
    Xuntil {
        #[arg(short = 'f', long = "formula")]
        formula: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CrosscheckCmd {
    /// POTL evaluator vs FO brute force through the `nu` translation.
    Fo {
        #[command(flatten)]
        opts: SuiteOpts,
        #[arg(long)]
        json: bool,
    },
    /// Tree evaluator vs POTL through the tree-logic translation.
    Xuntil {
        #[command(flatten)]
        opts: SuiteOpts,
        #[arg(long)]
        json: bool,
    },
    /// Direct LTL evaluation vs the POTL translation.
    Ltl {
        #[command(flatten)]
        opts: SuiteOpts,
        #[arg(long)]
        json: bool,
    },
    /// The until/since expansion laws.
    Expansion {
        #[command(flatten)]
        opts: SuiteOpts,
        #[arg(long)]
        json: bool,
    },
}

/// Runs the command line with the given arguments (without the program
/// name) and returns the process exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let mut argv = vec!["opotl".to_string()];
    argv.extend(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            2
        }
    }
}

fn load_matrix(spec: &str) -> Result<Arc<OpAlphabet>, String> {
    if spec == "mcall" {
        return Ok(Arc::new(builtin_mcall()));
    }
    let text = fs::read_to_string(spec).map_err(|e| format!("cannot read `{}`: {}", spec, e))?;
    Ok(Arc::new(load_opm(&text).map_err(|e| e.to_string())?))
}

fn load_word_input(alpha: &Arc<OpAlphabet>, input: &WordInput) -> Result<OpWord, String> {
    let text = match (&input.word, &input.word_file) {
        (Some(inline), None) => inline.clone(),
        (None, Some(path)) => {
            fs::read_to_string(path).map_err(|e| format!("cannot read `{}`: {}", path, e))?
        }
        (Some(_), Some(_)) => return Err("pass either --word or -w, not both".to_string()),
        (None, None) => return Err("a word is required: pass --word or -w FILE".to_string()),
    };
    load_word(alpha, &text).map_err(|e| e.to_string())
}

fn load_automaton(alpha: &Arc<OpAlphabet>, spec: &str) -> Result<Opa, String> {
    match spec {
        "fig5" => Ok(builtin_fig5()),
        "max" => Ok(max_automaton(alpha.clone())),
        path => {
            let text =
                fs::read_to_string(path).map_err(|e| format!("cannot read `{}`: {}", path, e))?;
            load_opa(alpha, &text).map_err(|e| e.to_string())
        }
    }
}

fn parse_formula(s: &str) -> Result<PotlFormula, String> {
    parse_potl(s).map_err(|e| e.to_string())
}

fn dispatch(cmd: Command) -> Result<i32, String> {
    match cmd {
        Command::Parse { input, trace, json } => {
            let alpha = load_matrix(&input.matrix)?;
            let w = load_word_input(&alpha, &input)?;
            match parse(&w) {
                Ok(p) => {
                    let pairs: Vec<(usize, usize)> = p.chains.pairs().collect();
                    if json {
                        let mut doc = json!({
                            "ok": true,
                            "body_len": w.body_len(),
                            "chains": pairs,
                        });
                        if trace {
                            doc["trace"] = json!(p.trace.rows);
                        }
                        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    } else {
                        if trace {
                            for row in &p.trace.rows {
                                println!("{}", row);
                            }
                        }
                        let rendered: Vec<String> =
                            pairs.iter().map(|(i, j)| format!("({},{})", i, j)).collect();
                        println!("chains: {}", rendered.join(" "));
                    }
                    Ok(0)
                }
                Err(e) => {
                    if json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({
                                "ok": false,
                                "error": e.to_string(),
                            }))
                            .unwrap()
                        );
                    } else {
                        println!("not in the universe: {}", e);
                    }
                    Ok(1)
                }
            }
        }
        Command::Chains { input, json } => {
            let alpha = load_matrix(&input.matrix)?;
            let w = load_word_input(&alpha, &input)?;
            let p = match parse(&w) {
                Ok(p) => p,
                Err(e) => {
                    println!("not in the universe: {}", e);
                    return Ok(1);
                }
            };
            if json {
                let per_position: Vec<_> = (0..w.universe_len())
                    .map(|i| {
                        json!({
                            "position": i,
                            "delimiter": w.is_delimiter(i),
                            "right_contexts": p.chains.right_contexts_of(i),
                            "left_contexts": p.chains.left_contexts_of(i),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "chains": p.chains.pairs().collect::<Vec<_>>(),
                        "positions": per_position,
                    }))
                    .unwrap()
                );
            } else {
                let rendered: Vec<String> =
                    p.chains.pairs().map(|(i, j)| format!("({},{})", i, j)).collect();
                println!("chains: {}", rendered.join(" "));
                for i in 0..w.universe_len() {
                    let rights = p.chains.right_contexts_of(i);
                    let lefts = p.chains.left_contexts_of(i);
                    if !rights.is_empty() || !lefts.is_empty() {
                        println!(
                            "pos {:>3}{}: right contexts {:?}, left contexts {:?}",
                            i,
                            if w.is_delimiter(i) { " (delimiter)" } else { "" },
                            rights,
                            lefts
                        );
                    }
                }
            }
            Ok(0)
        }
        Command::Eval { input, formula, at, json } => {
            let alpha = load_matrix(&input.matrix)?;
            let w = load_word_input(&alpha, &input)?;
            let f = parse_formula(&formula)?;
            let p = parse(&w).map_err(|e| format!("word not in the universe: {}", e))?;
            let r = eval(&f, &w, &p.chains);
            match at {
                Some(i) => {
                    if i >= w.universe_len() {
                        return Err(format!(
                            "position {} out of range (word has positions 0..={})",
                            i,
                            w.end()
                        ));
                    }
                    let holds = r.holds(&f, i);
                    if json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({
                                "formula": formula,
                                "position": i,
                                "holds": holds,
                            }))
                            .unwrap()
                        );
                    } else {
                        println!("{}", holds);
                    }
                    Ok(if holds { 0 } else { 1 })
                }
                None => {
                    let positions = r.positions(&f);
                    if json {
                        let detail: Vec<_> = positions
                            .iter()
                            .map(|&i| json!({"position": i, "delimiter": w.is_delimiter(i)}))
                            .collect();
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({
                                "formula": formula,
                                "holds_at": detail,
                            }))
                            .unwrap()
                        );
                    } else {
                        let rendered: Vec<String> = positions
                            .iter()
                            .map(|&i| {
                                if w.is_delimiter(i) {
                                    format!("{}#", i)
                                } else {
                                    format!("{}", i)
                                }
                            })
                            .collect();
                        println!("{{{}}}  (# marks delimiter positions)", rendered.join(", "));
                    }
                    Ok(0)
                }
            }
        }
        Command::Accept { input, automaton, witness, json } => {
            let alpha = load_matrix(&input.matrix)?;
            let w = load_word_input(&alpha, &input)?;
            let a = load_automaton(&alpha, &automaton)?;
            let run = a.accepts_with_witness(&w);
            let accepted = run.is_some();
            if json {
                let mut doc = json!({"accepted": accepted});
                if witness {
                    doc["witness"] = json!(run);
                }
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("{}", if accepted { "accepted" } else { "rejected" });
                if witness {
                    if let Some(steps) = &run {
                        for s in steps {
                            println!("  {:?} at {} -> {}", s.kind, s.lookahead, s.state);
                        }
                    }
                }
            }
            Ok(if accepted { 0 } else { 1 })
        }
        Command::Enum { matrix, automaton, max_body, json } => {
            let alpha = load_matrix(&matrix)?;
            let a = load_automaton(&alpha, &automaton)?;
            let words = a.enumerate_accepted(max_body).map_err(|e| e.to_string())?;
            if json {
                let list: Vec<String> = words.iter().map(|w| w.serialize()).collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"count": list.len(), "words": list}))
                        .unwrap()
                );
            } else {
                for w in &words {
                    let s = w.serialize();
                    println!("{}", if s.is_empty() { "(empty)" } else { &s });
                }
                println!("{} words with body length <= {}", words.len(), max_body);
            }
            Ok(0)
        }
        Command::Check { matrix, automaton, formula, max_body, json } => {
            let alpha = load_matrix(&matrix)?;
            let a = load_automaton(&alpha, &automaton)?;
            let f = parse_formula(&formula)?;
            let words = a.enumerate_accepted(max_body).map_err(|e| e.to_string())?;
            let mut counterexample: Option<String> = None;
            for w in &words {
                let p = parse(w).map_err(|e| format!("accepted word failed to parse: {}", e))?;
                let r = eval(&f, w, &p.chains);
                if !r.holds(&f, 0) {
                    counterexample = Some(w.serialize());
                    break;
                }
            }
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "formula": formula,
                        "max_body": max_body,
                        "words_checked": words.len(),
                        "counterexample": counterexample,
                    }))
                    .unwrap()
                );
            } else {
                match &counterexample {
                    Some(w) => println!("counterexample: {}", w),
                    None => println!(
                        "holds at position 0 of all {} accepted words with body length <= {}",
                        words.len(),
                        max_body
                    ),
                }
            }
            Ok(if counterexample.is_some() { 1 } else { 0 })
        }
        Command::Tree { input, json } => {
            let alpha = load_matrix(&input.matrix)?;
            let w = load_word_input(&alpha, &input)?;
            let p = parse(&w).map_err(|e| format!("word not in the universe: {}", e))?;
            let (t, bij) = tau(&w, &p.chains);
            if json {
                let nodes: Vec<_> = t
                    .preorder()
                    .into_iter()
                    .map(|id| {
                        json!({
                            "address": t.address_string(id),
                            "label": t.alphabet.display_label_set(t.node(id).label),
                            "position": bij.pos_of[id],
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&json!({ "nodes": nodes })).unwrap());
            } else {
                print!("{}", t.serialize());
            }
            Ok(0)
        }
        Command::Untree { matrix, tree_file, json } => {
            let alpha = load_matrix(&matrix)?;
            let text = fs::read_to_string(&tree_file)
                .map_err(|e| format!("cannot read `{}`: {}", tree_file, e))?;
            let t = load_tree(&alpha, &text).map_err(|e| e.to_string())?;
            let w = tau_inverse(&t, &alpha).map_err(|e| e.to_string())?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"word": w.serialize()})).unwrap()
                );
            } else {
                println!("{}", w.serialize());
            }
            Ok(0)
        }
        Command::Translate(tc) => {
            let (text, json) = match tc {
                TranslateCmd::Ltl { formula, json } => {
                    let f = parse_ltl(&formula).map_err(|e| e.to_string())?;
                    (translate_ltl(&f).to_string(), json)
                }
                TranslateCmd::Fo { formula, json } => {
                    let f = parse_formula(&formula)?;
                    (nu(&f).to_string(), json)
                }
                TranslateCmd::Xuntil { formula, json } => {
                    let f = parse_xuntil(&formula).map_err(|e| e.to_string())?;
                    (iota(&f).to_string(), json)
                }
            };
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"translation": text})).unwrap()
                );
            } else {
                println!("{}", text);
            }
            Ok(0)
        }
        Command::Crosscheck(cc) => {
            let (report, json) = match cc {
                CrosscheckCmd::Fo { opts, json } => {
                    let alpha = load_matrix(&opts.matrix)?;
                    (
                        suites::crosscheck_fo(
                            &alpha,
                            opts.words,
                            opts.len,
                            opts.formulas,
                            opts.depth,
                            opts.seed,
                        ),
                        json,
                    )
                }
                CrosscheckCmd::Xuntil { opts, json } => {
                    let alpha = load_matrix(&opts.matrix)?;
                    (
                        suites::crosscheck_xuntil(
                            &alpha,
                            opts.words,
                            opts.len,
                            opts.formulas,
                            opts.depth,
                            opts.seed,
                        ),
                        json,
                    )
                }
                CrosscheckCmd::Ltl { opts, json } => {
                    let alpha = load_matrix(&opts.matrix)?;
                    (
                        suites::crosscheck_ltl(
                            &alpha,
                            opts.words,
                            opts.len,
                            opts.formulas,
                            opts.depth,
                            opts.seed,
                        ),
                        json,
                    )
                }
                CrosscheckCmd::Expansion { opts, json } => {
                    let alpha = load_matrix(&opts.matrix)?;
                    (
                        suites::crosscheck_expansion(
                            &alpha,
                            opts.words,
                            opts.len,
                            opts.formulas,
                            opts.depth,
                            opts.seed,
                        ),
                        json,
                    )
                }
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("{}", report.summary());
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Gen { matrix, count, len, seed, json } => {
            let alpha = load_matrix(&matrix)?;
            let mut words = Vec::new();
            for k in 0..count as u64 {
                let w = random_compatible_word(&alpha, len, seed.wrapping_add(k))
                    .map_err(|e| e.to_string())?;
                words.push(w.serialize());
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&json!({"words": words})).unwrap());
            } else {
                for w in &words {
                    println!("{}", if w.is_empty() { "(empty)" } else { w });
                }
            }
            Ok(0)
        }
    }
}
