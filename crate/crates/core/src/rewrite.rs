//! The term rewriting system R (ρ1–ρ8) and R_id (ρ1–ρ9): position-based
//! rewriting under several strategies, normal forms with step statistics,
//! the polynomial termination weight, syntactic unification and critical
//! pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::canon;
use crate::term::{position_to_string, render, Position, RenderMode, Term};

/// A term over the signature plus metavariables from `Z` (the rule
/// variables). Object variables act as constants for matching and
/// unification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MetaTerm {
    Zero,
    One,
    Var(String),
    Meta(String),
    Plus(Box<MetaTerm>, Box<MetaTerm>),
    Times(Box<MetaTerm>, Box<MetaTerm>),
}

impl MetaTerm {
    pub fn meta(name: &str) -> MetaTerm {
        MetaTerm::Meta(name.to_string())
    }

    pub fn plus(l: MetaTerm, r: MetaTerm) -> MetaTerm {
        MetaTerm::Plus(Box::new(l), Box::new(r))
    }

    pub fn times(l: MetaTerm, r: MetaTerm) -> MetaTerm {
        MetaTerm::Times(Box::new(l), Box::new(r))
    }

    pub fn from_term(t: &Term) -> MetaTerm {
        match t {
            Term::Zero => MetaTerm::Zero,
            Term::One => MetaTerm::One,
            Term::Var(x) => MetaTerm::Var(x.clone()),
            Term::Plus(l, r) => MetaTerm::plus(Self::from_term(l), Self::from_term(r)),
            Term::Times(l, r) => MetaTerm::times(Self::from_term(l), Self::from_term(r)),
        }
    }

    /// Ground conversion; `None` if a metavariable remains.
    pub fn to_term(&self) -> Option<Term> {
        match self {
            MetaTerm::Zero => Some(Term::Zero),
            MetaTerm::One => Some(Term::One),
            MetaTerm::Var(x) => Some(Term::Var(x.clone())),
            MetaTerm::Meta(_) => None,
            MetaTerm::Plus(l, r) => Some(Term::plus(l.to_term()?, r.to_term()?)),
            MetaTerm::Times(l, r) => Some(Term::times(l.to_term()?, r.to_term()?)),
        }
    }

    /// Grounds metavariables as object variables of the same name. Sound for
    /// joinability checks: a metavariable behaves like an opaque constant.
    pub fn to_term_with_meta_vars(&self) -> Term {
        match self {
            MetaTerm::Zero => Term::Zero,
            MetaTerm::One => Term::One,
            MetaTerm::Var(x) | MetaTerm::Meta(x) => Term::Var(x.clone()),
            MetaTerm::Plus(l, r) => {
                Term::plus(l.to_term_with_meta_vars(), r.to_term_with_meta_vars())
            }
            MetaTerm::Times(l, r) => {
                Term::times(l.to_term_with_meta_vars(), r.to_term_with_meta_vars())
            }
        }
    }

    pub fn metas(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_metas(&mut out);
        out
    }

    fn collect_metas(&self, out: &mut Vec<String>) {
        match self {
            MetaTerm::Meta(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            MetaTerm::Plus(l, r) | MetaTerm::Times(l, r) => {
                l.collect_metas(out);
                r.collect_metas(out);
            }
            _ => {}
        }
    }

    fn rename_metas(&self, f: &impl Fn(&str) -> String) -> MetaTerm {
        match self {
            MetaTerm::Meta(x) => MetaTerm::Meta(f(x)),
            MetaTerm::Plus(l, r) => MetaTerm::plus(l.rename_metas(f), r.rename_metas(f)),
            MetaTerm::Times(l, r) => MetaTerm::times(l.rename_metas(f), r.rename_metas(f)),
            _ => self.clone(),
        }
    }

    pub fn subterm_at(&self, pos: &[u8]) -> Option<&MetaTerm> {
        let mut cur = self;
        for &i in pos {
            cur = match (cur, i) {
                (MetaTerm::Plus(l, _), 1) | (MetaTerm::Times(l, _), 1) => l,
                (MetaTerm::Plus(_, r), 2) | (MetaTerm::Times(_, r), 2) => r,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn replace_at(&self, pos: &[u8], u: MetaTerm) -> Option<MetaTerm> {
        match pos.split_first() {
            None => Some(u),
            Some((&i, rest)) => {
                let (l, r, times) = match self {
                    MetaTerm::Plus(l, r) => (l, r, false),
                    MetaTerm::Times(l, r) => (l, r, true),
                    _ => return None,
                };
                let (nl, nr) = if i == 1 {
                    (l.replace_at(rest, u)?, (**r).clone())
                } else if i == 2 {
                    ((**l).clone(), r.replace_at(rest, u)?)
                } else {
                    return None;
                };
                Some(if times {
                    MetaTerm::times(nl, nr)
                } else {
                    MetaTerm::plus(nl, nr)
                })
            }
        }
    }

    fn positions_non_meta(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        fn go(t: &MetaTerm, path: &mut Position, out: &mut Vec<Position>) {
            if matches!(t, MetaTerm::Meta(_)) {
                return;
            }
            out.push(path.clone());
            if let MetaTerm::Plus(l, r) | MetaTerm::Times(l, r) = t {
                path.push(1);
                go(l, path, out);
                path.pop();
                path.push(2);
                go(r, path, out);
                path.pop();
            }
        }
        go(self, &mut path, &mut out);
        out
    }
}

impl fmt::Display for MetaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_term_with_meta_vars().fmt(f)
    }
}

/// A finite assignment of metavariables to terms with metavariables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Substitution {
    map: BTreeMap<String, MetaTerm>,
}

impl Substitution {
    pub fn get(&self, name: &str) -> Option<&MetaTerm> {
        self.map.get(name)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&String, &MetaTerm)> {
        self.map.iter()
    }

    pub fn apply(&self, t: &MetaTerm) -> MetaTerm {
        match t {
            MetaTerm::Meta(x) => self.map.get(x).cloned().unwrap_or_else(|| t.clone()),
            MetaTerm::Plus(l, r) => MetaTerm::plus(self.apply(l), self.apply(r)),
            MetaTerm::Times(l, r) => MetaTerm::times(self.apply(l), self.apply(r)),
            _ => t.clone(),
        }
    }

    fn insert(&mut self, name: String, value: MetaTerm) {
        // keep the substitution idempotent
        let single = Substitution {
            map: BTreeMap::from([(name.clone(), value.clone())]),
        };
        for v in self.map.values_mut() {
            *v = single.apply(v);
        }
        self.map.insert(name, value);
    }
}

/// A rewrite rule `lhs → rhs` over metavariables; every metavariable of the
/// right-hand side occurs on the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub lhs: MetaTerm,
    pub rhs: MetaTerm,
}

impl Rule {
    pub fn new(name: &str, lhs: MetaTerm, rhs: MetaTerm) -> Rule {
        let lhs_metas = lhs.metas();
        assert!(
            rhs.metas().iter().all(|m| lhs_metas.contains(m)),
            "rule {name}: right-hand side introduces metavariables"
        );
        Rule {
            name: name.to_string(),
            lhs,
            rhs,
        }
    }
}

fn m(name: &str) -> MetaTerm {
    MetaTerm::meta(name)
}

/// The rewrite system R: unit and zero laws ρ1–ρ6, reassociation of `*` (ρ7)
/// and right-distributivity (ρ8). Normal forms are the polynomial terms.
pub fn rules_r() -> Vec<Rule> {
    use MetaTerm::{One, Zero};
    vec![
        Rule::new("rho1", MetaTerm::plus(Zero, m("z")), m("z")),
        Rule::new("rho2", MetaTerm::plus(m("z"), Zero), m("z")),
        Rule::new("rho3", MetaTerm::times(One, m("z")), m("z")),
        Rule::new("rho4", MetaTerm::times(m("z"), One), m("z")),
        Rule::new("rho5", MetaTerm::times(Zero, m("z")), Zero),
        Rule::new("rho6", MetaTerm::times(m("z"), Zero), Zero),
        Rule::new(
            "rho7",
            MetaTerm::times(MetaTerm::times(m("z1"), m("z2")), m("z3")),
            MetaTerm::times(m("z1"), MetaTerm::times(m("z2"), m("z3"))),
        ),
        Rule::new(
            "rho8",
            MetaTerm::times(MetaTerm::plus(m("z1"), m("z2")), m("z3")),
            MetaTerm::plus(
                MetaTerm::times(m("z1"), m("z3")),
                MetaTerm::times(m("z2"), m("z3")),
            ),
        ),
    ]
}

/// R_id = R ∪ {ρ9 : z + z → z}.
pub fn rules_r_id() -> Vec<Rule> {
    let mut rules = rules_r();
    rules.push(Rule::new(
        "rho9",
        MetaTerm::plus(m("z"), m("z")),
        m("z"),
    ));
    rules
}

/// Matches a rule left-hand side against a ground term, returning the unique
/// substitution if one exists.
pub fn match_lhs(lhs: &MetaTerm, t: &Term) -> Option<Substitution> {
    let mut binds: Vec<(&str, &Term)> = Vec::new();
    if match_refs(lhs, t, &mut binds) {
        let mut map = BTreeMap::new();
        for (name, sub) in binds {
            map.insert(name.to_string(), MetaTerm::from_term(sub));
        }
        Some(Substitution { map })
    } else {
        None
    }
}

fn match_refs<'a, 'b>(pat: &'a MetaTerm, t: &'b Term, binds: &mut Vec<(&'a str, &'b Term)>) -> bool {
    match (pat, t) {
        (MetaTerm::Meta(x), _) => {
            if let Some((_, prev)) = binds.iter().find(|(n, _)| n == x) {
                *prev == t
            } else {
                binds.push((x, t));
                true
            }
        }
        (MetaTerm::Zero, Term::Zero) | (MetaTerm::One, Term::One) => true,
        (MetaTerm::Var(a), Term::Var(b)) => a == b,
        (MetaTerm::Plus(p1, p2), Term::Plus(t1, t2))
        | (MetaTerm::Times(p1, p2), Term::Times(t1, t2)) => {
            let mark = binds.len();
            if match_refs(p1, t1, binds) && match_refs(p2, t2, binds) {
                true
            } else {
                binds.truncate(mark);
                false
            }
        }
        _ => false,
    }
}

fn instantiate(rhs: &MetaTerm, binds: &[(&str, &Term)]) -> Term {
    match rhs {
        MetaTerm::Zero => Term::Zero,
        MetaTerm::One => Term::One,
        MetaTerm::Var(x) => Term::Var(x.clone()),
        MetaTerm::Meta(x) => binds
            .iter()
            .find(|(n, _)| n == x)
            .expect("rule metavariables are bound by the lhs")
            .1
            .clone(),
        MetaTerm::Plus(l, r) => Term::plus(instantiate(l, binds), instantiate(r, binds)),
        MetaTerm::Times(l, r) => Term::times(instantiate(l, binds), instantiate(r, binds)),
    }
}

/// Applies `rule` at position `pos` of `t`, if its left-hand side matches
/// there.
pub fn apply_rule_at(t: &Term, rule: &Rule, pos: &[u8]) -> Option<Term> {
    let sub = t.subterm_at(pos).ok()?;
    let mut binds = Vec::new();
    if !match_refs(&rule.lhs, sub, &mut binds) {
        return None;
    }
    let new_sub = instantiate(&rule.rhs, &binds);
    t.replace_at(pos, new_sub).ok()
}

/// Redex selection order. `left-first` is leftmost-outermost, `right-first`
/// is rightmost-innermost, the default is leftmost-innermost; all three reach
/// the same R-normal form, with different rule-application counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    LeftmostInnermost,
    LeftmostOutermost,
    RightmostInnermost,
    Random(u64),
}

impl Strategy {
    /// Expands the topmost factor first; exponentially many distributivity
    /// steps on nested products.
    pub const LEFT_FIRST: Strategy = Strategy::LeftmostOutermost;
    /// Works from the rightmost factor leftwards; linearly many
    /// distributivity steps on nested products.
    pub const RIGHT_FIRST: Strategy = Strategy::RightmostInnermost;
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "innermost" => Ok(Strategy::LeftmostInnermost),
            "left-first" => Ok(Strategy::LeftmostOutermost),
            "right-first" => Ok(Strategy::RightmostInnermost),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed
                    .parse::<u64>()
                    .map(Strategy::Random)
                    .map_err(|_| format!("invalid random seed in strategy '{s}'")),
                None => Err(format!(
                    "unknown strategy '{s}' (expected innermost, left-first, right-first or random:<seed>)"
                )),
            },
        }
    }
}

/// Caps on a rewrite run. Exceeding either is an internal-error surface:
/// R terminates, so a blown budget signals a bug or an adversarial input
/// beyond the configured scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_steps: u64,
    pub max_term_size: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_steps: 10_000_000,
            max_term_size: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("step budget of {budget} exceeded")]
    StepBudgetExceeded { budget: u64 },
    #[error("term size limit of {limit} exceeded (reached {size})")]
    TermSizeExceeded { limit: usize, size: usize },
}

/// Outcome of a normalization run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormReport {
    pub result: Term,
    pub total_steps: u64,
    /// number of ρ8 (right-distributivity) applications
    pub distributivity_steps: u64,
    pub trace: Option<Vec<(String, Position)>>,
}

/// One trace line in the interchange format:
/// `<rule-name> @ <position-as-dotted-path> : <term-after>`.
pub fn render_trace_line(rule: &str, pos: &[u8], after: &Term) -> String {
    format!(
        "{} @ {} : {}",
        rule,
        position_to_string(pos),
        render(after, RenderMode::FullParens)
    )
}

/// Applies one rewrite step under the strategy's position order, trying the
/// rules in their listed order at each position. `None` when `t` is a normal
/// form. The random strategy picks uniformly over all redexes with a PRNG
/// seeded one-shot from its seed.
pub fn rewrite_step(t: &Term, trs: &[Rule], strategy: Strategy) -> Option<(Term, String, Position)> {
    match strategy {
        Strategy::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_step(t, trs, &mut rng)
        }
        _ => {
            let mut path = Vec::new();
            let (pos, rule_idx, new_sub) = find_redex(t, trs, strategy, &mut path)?;
            let rewritten = t.replace_at(&pos, new_sub).expect("redex position is valid");
            Some((rewritten, trs[rule_idx].name.clone(), pos))
        }
    }
}

fn try_rules_at(sub: &Term, trs: &[Rule]) -> Option<(usize, Term)> {
    for (i, rule) in trs.iter().enumerate() {
        let mut binds = Vec::new();
        if match_refs(&rule.lhs, sub, &mut binds) {
            return Some((i, instantiate(&rule.rhs, &binds)));
        }
    }
    None
}

fn find_redex(
    t: &Term,
    trs: &[Rule],
    strategy: Strategy,
    path: &mut Position,
) -> Option<(Position, usize, Term)> {
    let children = t.children();
    let here = |path: &mut Position| {
        try_rules_at(t, trs).map(|(i, new_sub)| (path.clone(), i, new_sub))
    };
    let descend = |i: u8, c: &Term, path: &mut Position| {
        path.push(i);
        let found = find_redex(c, trs, strategy, path);
        path.pop();
        found
    };
    match strategy {
        Strategy::LeftmostOutermost => here(path).or_else(|| {
            children.and_then(|(l, r)| descend(1, l, path).or_else(|| descend(2, r, path)))
        }),
        Strategy::LeftmostInnermost => children
            .and_then(|(l, r)| descend(1, l, path).or_else(|| descend(2, r, path)))
            .or_else(|| here(path)),
        Strategy::RightmostInnermost => children
            .and_then(|(l, r)| descend(2, r, path).or_else(|| descend(1, l, path)))
            .or_else(|| here(path)),
        Strategy::Random(_) => unreachable!("random steps are drawn elsewhere"),
    }
}

fn random_step(t: &Term, trs: &[Rule], rng: &mut ChaCha8Rng) -> Option<(Term, String, Position)> {
    let mut redexes = Vec::new();
    let mut path = Vec::new();
    collect_redexes(t, trs, &mut path, &mut redexes);
    let (pos, rule_idx, new_sub) = redexes.choose(rng)?.clone();
    let rewritten = t.replace_at(&pos, new_sub).expect("redex position is valid");
    Some((rewritten, trs[rule_idx].name.clone(), pos))
}

fn collect_redexes(
    t: &Term,
    trs: &[Rule],
    path: &mut Position,
    out: &mut Vec<(Position, usize, Term)>,
) {
    if let Some((i, new_sub)) = try_rules_at(t, trs) {
        out.push((path.clone(), i, new_sub));
    }
    if let Some((l, r)) = t.children() {
        path.push(1);
        collect_redexes(l, trs, path, out);
        path.pop();
        path.push(2);
        collect_redexes(r, trs, path, out);
        path.pop();
    }
}

/// Iterates [`rewrite_step`] to a normal form under default limits, without
/// trace collection.
pub fn normal_form(t: &Term, trs: &[Rule], strategy: Strategy) -> Result<NormalFormReport, RewriteError> {
    normal_form_with(t, trs, strategy, &Limits::default(), false)
}

/// Normalization with explicit limits and optional trace. For the built-in
/// systems under the leftmost-innermost strategy a recursive normalizer is
/// used that produces the identical step sequence without rescanning the
/// term; all other combinations run the generic search loop.
pub fn normal_form_with(
    t: &Term,
    trs: &[Rule],
    strategy: Strategy,
    limits: &Limits,
    want_trace: bool,
) -> Result<NormalFormReport, RewriteError> {
    if strategy == Strategy::LeftmostInnermost {
        if let Some(rid) = builtin_set(trs) {
            return fast_normal_form(t, rid, limits, want_trace);
        }
    }
    let mut cur = t.clone();
    let mut steps = 0u64;
    let mut dist = 0u64;
    let mut trace = want_trace.then(Vec::new);
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    loop {
        let step = match rng.as_mut() {
            Some(rng) => random_step(&cur, trs, rng),
            None => rewrite_step(&cur, trs, strategy),
        };
        let Some((next, rule, pos)) = step else {
            return Ok(NormalFormReport {
                result: cur,
                total_steps: steps,
                distributivity_steps: dist,
                trace,
            });
        };
        steps += 1;
        if steps > limits.max_steps {
            return Err(RewriteError::StepBudgetExceeded {
                budget: limits.max_steps,
            });
        }
        if rule == "rho8" {
            dist += 1;
        }
        if let Some(tr) = trace.as_mut() {
            tr.push((rule, pos));
        }
        cur = next;
        let size = cur.size();
        if size > limits.max_term_size {
            return Err(RewriteError::TermSizeExceeded {
                limit: limits.max_term_size,
                size,
            });
        }
    }
}

fn builtin_set(trs: &[Rule]) -> Option<bool> {
    if *trs == rules_r() {
        Some(false)
    } else if *trs == rules_r_id() {
        Some(true)
    } else {
        None
    }
}

struct FastCtx {
    rid: bool,
    max_steps: u64,
    max_size: isize,
    size: isize,
    steps: u64,
    dist: u64,
    trace: Option<Vec<(String, Position)>>,
}

impl FastCtx {
    fn record(&mut self, rule: &str, path: &Position, delta: isize) -> Result<(), RewriteError> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(RewriteError::StepBudgetExceeded {
                budget: self.max_steps,
            });
        }
        if rule == "rho8" {
            self.dist += 1;
        }
        self.size += delta;
        if self.size > self.max_size {
            return Err(RewriteError::TermSizeExceeded {
                limit: self.max_size as usize,
                size: self.size as usize,
            });
        }
        if let Some(tr) = self.trace.as_mut() {
            tr.push((rule.to_string(), path.clone()));
        }
        Ok(())
    }
}

fn fast_normal_form(
    t: &Term,
    rid: bool,
    limits: &Limits,
    want_trace: bool,
) -> Result<NormalFormReport, RewriteError> {
    let mut ctx = FastCtx {
        rid,
        max_steps: limits.max_steps,
        max_size: limits.max_term_size as isize,
        size: t.size() as isize,
        steps: 0,
        dist: 0,
        trace: want_trace.then(Vec::new),
    };
    if ctx.size > ctx.max_size {
        return Err(RewriteError::TermSizeExceeded {
            limit: limits.max_term_size,
            size: ctx.size as usize,
        });
    }
    let mut path = Vec::new();
    let result = fast_nf(t, &mut path, &mut ctx)?;
    Ok(NormalFormReport {
        result,
        total_steps: ctx.steps,
        distributivity_steps: ctx.dist,
        trace: ctx.trace,
    })
}

fn fast_nf(t: &Term, path: &mut Position, ctx: &mut FastCtx) -> Result<Term, RewriteError> {
    match t {
        Term::Zero | Term::One | Term::Var(_) => Ok(t.clone()),
        Term::Plus(l, r) => {
            path.push(1);
            let l = fast_nf(l, path, ctx)?;
            path.pop();
            path.push(2);
            let r = fast_nf(r, path, ctx)?;
            path.pop();
            fast_fix(Term::plus(l, r), path, ctx)
        }
        Term::Times(l, r) => {
            path.push(1);
            let l = fast_nf(l, path, ctx)?;
            path.pop();
            path.push(2);
            let r = fast_nf(r, path, ctx)?;
            path.pop();
            fast_fix(Term::times(l, r), path, ctx)
        }
    }
}

// Root-reduction loop; both children of `t` are already in normal form. The
// rule order matches the listed order of R/R_id, so the emitted step
// sequence coincides with the generic leftmost-innermost search.
fn fast_fix(t: Term, path: &mut Position, ctx: &mut FastCtx) -> Result<Term, RewriteError> {
    let mut cur = t;
    loop {
        match cur {
            Term::Plus(l, r) => {
                if *l == Term::Zero {
                    ctx.record("rho1", path, -2)?;
                    cur = *r;
                } else if *r == Term::Zero {
                    ctx.record("rho2", path, -2)?;
                    cur = *l;
                } else if ctx.rid && l == r {
                    ctx.record("rho9", path, -(l.size() as isize) - 1)?;
                    cur = *l;
                } else {
                    return Ok(Term::Plus(l, r));
                }
            }
            Term::Times(l, r) => {
                if *l == Term::One {
                    ctx.record("rho3", path, -2)?;
                    cur = *r;
                } else if *r == Term::One {
                    ctx.record("rho4", path, -2)?;
                    cur = *l;
                } else if *l == Term::Zero {
                    ctx.record("rho5", path, -1 - (r.size() as isize))?;
                    cur = Term::Zero;
                } else if *r == Term::Zero {
                    ctx.record("rho6", path, -1 - (l.size() as isize))?;
                    cur = Term::Zero;
                } else {
                    match *l {
                        Term::Times(a, b) => {
                            ctx.record("rho7", path, 0)?;
                            path.push(2);
                            let inner = fast_fix(Term::Times(b, r), path, ctx)?;
                            path.pop();
                            cur = Term::times(*a, inner);
                        }
                        Term::Plus(a, b) => {
                            ctx.record("rho8", path, r.size() as isize + 1)?;
                            path.push(1);
                            let left = fast_fix(Term::Times(a, Box::new((*r).clone())), path, ctx)?;
                            path.pop();
                            path.push(2);
                            let right = fast_fix(Term::Times(b, r), path, ctx)?;
                            path.pop();
                            cur = Term::plus(left, right);
                        }
                        other => return Ok(Term::times(other, *r)),
                    }
                }
            }
            leaf => return Ok(leaf),
        }
    }
}

/// R-normalizes, then alternates idempotency reduction with unit-factor
/// cleanup to a fixpoint. The result is the AC-canonical id-reduced
/// polynomial term of the input's class.
pub fn normal_form_id(t: &Term) -> Result<Term, RewriteError> {
    normal_form_id_report(t, Strategy::LeftmostInnermost, &Limits::default(), false)
        .map(|r| r.result)
}

/// [`normal_form_id`] with statistics: the R phase counts as usual, each
/// deleted duplicate summand counts as one ρ9 application and each removed
/// unit factor as one ρ4 application. The optional trace covers the R phase.
pub fn normal_form_id_report(
    t: &Term,
    strategy: Strategy,
    limits: &Limits,
    want_trace: bool,
) -> Result<NormalFormReport, RewriteError> {
    let mut report = normal_form_with(t, &rules_r(), strategy, limits, want_trace)?;
    let (reduced, drops, strips) =
        canon::id_reduce_counting(&report.result).expect("R-normal forms are simple");
    report.result = reduced;
    report.total_steps += drops + strips;
    Ok(report)
}

/// The termination weight: leaves and metavariables weigh 2,
/// `|s + t| = |s| + |t|`, `|s * t| = |s|² · |t|`. Strictly decreases under
/// every rule of R_id.
pub fn weight(t: &Term) -> BigUint {
    match t {
        Term::Zero | Term::One | Term::Var(_) => BigUint::from(2u32),
        Term::Plus(l, r) => weight(l) + weight(r),
        Term::Times(l, r) => {
            let wl = weight(l);
            &wl * &wl * weight(r)
        }
    }
}

/// [`weight`] on terms with metavariables.
pub fn weight_meta(t: &MetaTerm) -> BigUint {
    match t {
        MetaTerm::Zero | MetaTerm::One | MetaTerm::Var(_) | MetaTerm::Meta(_) => {
            BigUint::from(2u32)
        }
        MetaTerm::Plus(l, r) => weight_meta(l) + weight_meta(r),
        MetaTerm::Times(l, r) => {
            let wl = weight_meta(l);
            &wl * &wl * weight_meta(r)
        }
    }
}

/// Syntactic first-order unification over the signature extended by object
/// variables as constants. Returns an idempotent most general unifier, or
/// `None` (including on occurs-check failure).
pub fn mgu(s: &MetaTerm, t: &MetaTerm) -> Option<Substitution> {
    let mut subst = Substitution::default();
    let mut work = vec![(s.clone(), t.clone())];
    while let Some((a, b)) = work.pop() {
        let a = subst.apply(&a);
        let b = subst.apply(&b);
        match (a, b) {
            (MetaTerm::Meta(x), MetaTerm::Meta(y)) if x == y => {}
            (MetaTerm::Meta(x), u) | (u, MetaTerm::Meta(x)) => {
                if occurs(&x, &u) {
                    return None;
                }
                subst.insert(x, u);
            }
            (MetaTerm::Zero, MetaTerm::Zero) | (MetaTerm::One, MetaTerm::One) => {}
            (MetaTerm::Var(a), MetaTerm::Var(b)) if a == b => {}
            (MetaTerm::Plus(a1, a2), MetaTerm::Plus(b1, b2))
            | (MetaTerm::Times(a1, a2), MetaTerm::Times(b1, b2)) => {
                work.push((*a2, *b2));
                work.push((*a1, *b1));
            }
            _ => return None,
        }
    }
    Some(subst)
}

fn occurs(x: &str, t: &MetaTerm) -> bool {
    match t {
        MetaTerm::Meta(y) => x == y,
        MetaTerm::Plus(l, r) | MetaTerm::Times(l, r) => occurs(x, l) || occurs(x, r),
        _ => false,
    }
}

/// A critical pair `⟨φ(r_outer), φ(ℓ_outer)[φ(r_inner)]_pos⟩` from an overlap
/// of `inner` (renamed) at a non-metavariable position of `outer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPair {
    pub outer: String,
    pub inner: String,
    pub pos: Position,
    pub left: MetaTerm,
    pub right: MetaTerm,
}

/// All critical pairs of the system: every ordered rule pair, the second
/// rule's metavariables renamed `z* → y*`, overlapped at every
/// non-metavariable position of the first rule's left-hand side. The root
/// overlap of a rule with itself is skipped as trivial.
pub fn critical_pairs(trs: &[Rule]) -> Vec<CriticalPair> {
    let mut out = Vec::new();
    for (i, outer) in trs.iter().enumerate() {
        for (j, inner) in trs.iter().enumerate() {
            let renamed_lhs = inner.lhs.rename_metas(&|n| n.replacen('z', "y", 1));
            let renamed_rhs = inner.rhs.rename_metas(&|n| n.replacen('z', "y", 1));
            for pos in outer.lhs.positions_non_meta() {
                if i == j && pos.is_empty() {
                    continue;
                }
                let at = outer.lhs.subterm_at(&pos).expect("enumerated position");
                if let Some(phi) = mgu(at, &renamed_lhs) {
                    let left = phi.apply(&outer.rhs);
                    let plugged = outer
                        .lhs
                        .replace_at(&pos, renamed_rhs.clone())
                        .expect("non-meta position");
                    let right = phi.apply(&plugged);
                    out.push(CriticalPair {
                        outer: outer.name.clone(),
                        inner: inner.name.clone(),
                        pos,
                        left,
                        right,
                    });
                }
            }
        }
    }
    out
}
