//! `bf`: command-line front end for parsing, canonicalization, rewriting,
//! equivalence, evaluation and the M(X) explorer.
//!
//! Exit codes: 0 success or "true", 1 "false", 2 usage or parse errors,
//! 3 step/size budget exceeded.

use std::collections::HashMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bifree::canon::to_dot;
use bifree::equiv::{
    builtin_model, equivalent, evaluate, to_id_polynomial, to_polynomial, Theory, Value,
};
use bifree::mx::{self, m_inject, p_witness, weak_closure, MElement, MxError};
use bifree::poly;
use bifree::rewrite::{
    apply_rule_at, normal_form_id_report, normal_form_with, render_trace_line, rules_r, Limits,
    RewriteError, Strategy,
};
use bifree::term::{render, simplify, RenderMode, Term};

#[derive(Parser)]
#[command(
    name = "bf",
    about = "Free strong bimonoids of polynomial terms",
    version
)]
struct Cli {
    /// Render output terms fully parenthesized (bit-exact interchange form)
    #[arg(long, global = true)]
    full_parens: bool,

    /// Step budget for rewriting (overrides BF_STEP_BUDGET; default 10^7)
    #[arg(long = "bf_step_budget", global = true, value_name = "N")]
    bf_step_budget: Option<u64>,

    /// Term size cap for rewriting (overrides BF_MAX_TERM_SIZE; default 10^6)
    #[arg(long = "bf_max_term_size", global = true, value_name = "N")]
    bf_max_term_size: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// AC-canonical representative of the simplified term
    Canon { term: String },
    /// Apply the unit and zero laws exhaustively
    Simplify { term: String },
    /// Decide equivalence of two terms in a theory; prints true/false
    Eqv {
        #[arg(long, value_parser = ["sb", "rd", "idrd", "ac"])]
        theory: String,
        term1: String,
        term2: String,
    },
    /// Normal form under the rewrite system R (or R_id with --trs rid)
    Nf {
        #[arg(long, default_value = "r", value_parser = ["r", "rid"])]
        trs: String,
        /// innermost, left-first, right-first or random:<seed>
        #[arg(long, default_value = "innermost")]
        strategy: String,
        /// Print step counts after the result
        #[arg(long)]
        stats: bool,
        /// Print one line per rewrite step before the result
        #[arg(long)]
        trace: bool,
        term: String,
    },
    /// Product of two terms as polynomials (id-reduced with --id)
    Mul {
        #[arg(long)]
        id: bool,
        term1: String,
        term2: String,
    },
    /// Sum of two terms as polynomials (id-reduced with --id)
    Add {
        #[arg(long)]
        id: bool,
        term1: String,
        term2: String,
    },
    /// Evaluate a term in a built-in model under an assignment
    Eval {
        #[arg(long, value_parser = ["bool", "plusmin", "plusplus", "words"])]
        model: String,
        /// Comma-separated bindings, e.g. x=3,y=inf
        #[arg(long, default_value = "")]
        assign: String,
        term: String,
    },
    /// Is the term's id-reduced polynomial large? prints true/false
    Large { term: String },
    /// The n-th witness polynomial x * (1 + x * (1 + ...))
    Witness { n: usize },
    /// Weak closure in M(X) of comma-separated seed terms
    Wcl {
        terms: String,
        #[arg(long, default_value = "64")]
        max_iter: usize,
    },
    /// DOT digraph of the simplified term's labeled tree
    Dot { term: String },
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<RewriteError> for Failure {
    fn from(e: RewriteError) -> Failure {
        Failure::Budget(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("bf: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn env_number<T: std::str::FromStr>(name: &str) -> Result<Option<T>, Failure> {
    match std::env::var(name) {
        Ok(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{name} must be a number, got '{v}'"))),
        Err(_) => Ok(None),
    }
}

fn config(cli: &Cli) -> Result<Limits, Failure> {
    let defaults = Limits::default();
    let max_steps = match cli.bf_step_budget {
        Some(n) => n,
        None => env_number("BF_STEP_BUDGET")?.unwrap_or(defaults.max_steps),
    };
    let max_term_size = match cli.bf_max_term_size {
        Some(n) => n,
        None => env_number("BF_MAX_TERM_SIZE")?.unwrap_or(defaults.max_term_size),
    };
    Ok(Limits {
        max_steps,
        max_term_size,
    })
}

fn parse_term(text: &str) -> Result<Term, Failure> {
    Term::parse(text).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let limits = config(&cli)?;
    let mode = if cli.full_parens {
        RenderMode::FullParens
    } else {
        RenderMode::Pretty
    };

    match &cli.cmd {
        Cmd::Canon { term } => {
            let t = simplify(&parse_term(term)?);
            let c = bifree::canon::canonical_term(&t).expect("simplified terms are simple");
            println!("{}", render(&c, mode));
            Ok(0)
        }
        Cmd::Simplify { term } => {
            println!("{}", render(&simplify(&parse_term(term)?), mode));
            Ok(0)
        }
        Cmd::Eqv {
            theory,
            term1,
            term2,
        } => {
            let th: Theory = theory.parse().map_err(Failure::Usage)?;
            let a = parse_term(term1)?;
            let b = parse_term(term2)?;
            if matches!(th, Theory::RD | Theory::IDRD) && a.size().max(b.size()) > 64 {
                eprintln!(
                    "bf: warning: deciding {} on terms of size {} may take exponential time",
                    theory,
                    a.size().max(b.size())
                );
            }
            let eq = equivalent(&a, &b, th)?;
            println!("{eq}");
            Ok(if eq { 0 } else { 1 })
        }
        Cmd::Nf {
            trs,
            strategy,
            stats,
            trace,
            term,
        } => {
            let strat: Strategy = strategy.parse().map_err(Failure::Usage)?;
            let t = parse_term(term)?;
            let report = if trs == "rid" {
                normal_form_id_report(&t, strat, &limits, *trace)?
            } else {
                normal_form_with(&t, &rules_r(), strat, &limits, *trace)?
            };
            if let Some(steps) = &report.trace {
                let rules = rules_r();
                let mut cur = t.clone();
                for (name, pos) in steps {
                    let rule = rules
                        .iter()
                        .find(|r| &r.name == name)
                        .expect("trace rules come from R");
                    cur = apply_rule_at(&cur, rule, pos).expect("trace positions are valid");
                    println!("{}", render_trace_line(name, pos, &cur));
                }
            }
            println!("{}", render(&report.result, mode));
            if *stats {
                println!("total_steps = {}", report.total_steps);
                println!("distributivity_steps = {}", report.distributivity_steps);
            }
            Ok(0)
        }
        Cmd::Mul { id, term1, term2 } | Cmd::Add { id, term1, term2 } => {
            let is_mul = matches!(cli.cmd, Cmd::Mul { .. });
            let a = parse_term(term1)?;
            let b = parse_term(term2)?;
            let out = if *id {
                let (pa, pb) = (to_id_polynomial(&a)?, to_id_polynomial(&b)?);
                let r = if is_mul {
                    poly::mul_id(&pa, &pb)
                } else {
                    poly::add_id(&pa, &pb)
                };
                r.into_rep()
            } else {
                let (pa, pb) = (to_polynomial(&a)?, to_polynomial(&b)?);
                let r = if is_mul {
                    poly::mul_rd(&pa, &pb)
                } else {
                    poly::add(&pa, &pb)
                };
                r.into_rep()
            };
            println!("{}", render(&out, mode));
            Ok(0)
        }
        Cmd::Eval {
            model,
            assign,
            term,
        } => {
            let model = builtin_model(model).ok_or_else(|| {
                Failure::Usage(format!("unknown model '{model}'"))
            })?;
            let t = parse_term(term)?;
            let assignment = parse_assignment(&model.name, assign)?;
            let v = evaluate(&t, &model, &assignment)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{v}");
            Ok(0)
        }
        Cmd::Large { term } => {
            let p = to_id_polynomial(&parse_term(term)?)?;
            let large = mx::is_large(&p).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{large}");
            Ok(if large { 0 } else { 1 })
        }
        Cmd::Witness { n } => {
            println!("{}", render(p_witness(*n).rep(), mode));
            Ok(0)
        }
        Cmd::Wcl { terms, max_iter } => {
            let mut seeds = Vec::new();
            for part in terms.split(',') {
                let p = to_id_polynomial(&parse_term(part)?)?;
                seeds.push(m_inject(&p));
            }
            let closure = weak_closure(&seeds, *max_iter).map_err(|e| match e {
                MxError::IterationBudgetExceeded(_) => Failure::Budget(e.to_string()),
                MxError::InvalidOperand => Failure::Usage(e.to_string()),
            })?;
            let mut elems: Vec<&MElement> = closure.iter().collect();
            elems.sort_by_key(|e| element_sort_key(e));
            for e in elems {
                println!("{}", show_element(e, mode));
            }
            Ok(0)
        }
        Cmd::Dot { term } => {
            let t = simplify(&parse_term(term)?);
            print!("{}", to_dot(&t).expect("simplified terms are simple"));
            Ok(0)
        }
    }
}

fn element_sort_key(e: &MElement) -> (u8, Vec<u8>) {
    match e {
        MElement::Zero => (0, vec![]),
        MElement::Unit => (1, vec![]),
        MElement::Small(p) => (
            2,
            bifree::canon::code(p.rep())
                .expect("payloads are simple")
                .as_bytes()
                .to_vec(),
        ),
        MElement::Large => (3, vec![]),
    }
}

fn show_element(e: &MElement, mode: RenderMode) -> String {
    match e {
        MElement::Small(p) => render(p.rep(), mode),
        other => other.to_string(),
    }
}

fn parse_assignment(model: &str, text: &str) -> Result<HashMap<String, Value>, Failure> {
    let mut out = HashMap::new();
    if text.is_empty() {
        return Ok(out);
    }
    for binding in text.split(',') {
        let (name, value) = binding.split_once('=').ok_or_else(|| {
            Failure::Usage(format!("binding '{binding}' is not of the form name=value"))
        })?;
        out.insert(name.trim().to_string(), parse_value(model, value.trim())?);
    }
    Ok(out)
}

fn parse_value(model: &str, text: &str) -> Result<Value, Failure> {
    let bad = || Failure::Usage(format!("'{text}' is not a value of the {model} model"));
    match model {
        "bool" => match text {
            "0" | "false" => Ok(Value::Bool(false)),
            "1" | "true" => Ok(Value::Bool(true)),
            _ => Err(bad()),
        },
        "plusmin" => match text {
            "inf" => Ok(Value::Inf),
            _ => text.parse::<u64>().map(Value::Nat).map_err(|_| bad()),
        },
        "plusplus" => match text {
            "bot" => Ok(Value::Bot),
            _ => text.parse::<u64>().map(Value::Nat).map_err(|_| bad()),
        },
        "words" => match text {
            "inf" => Ok(Value::Inf),
            "eps" => Ok(Value::Word(String::new())),
            _ => Ok(Value::Word(text.to_string())),
        },
        _ => Err(bad()),
    }
}
