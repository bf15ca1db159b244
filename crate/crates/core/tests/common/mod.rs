//! Shared test support: seeded random term generators, brute-force oracles,
//! and the independently coded inductive multiplication used to cross-check
//! the direct product construction.

#![allow(dead_code)]

use bifree::equiv::{apply_identity_at, Identity};
use bifree::poly::{add, is_monomial_term, Polynomial};
use bifree::rewrite::{apply_rule_at, weight, Rule};
use bifree::term::{Position, Term};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// The nested-product family t_1 = 1 + 1, t_{n+1} = (1 + 1) * t_n.
pub fn t_n(n: usize) -> Term {
    assert!(n >= 1);
    let mut t = Term::plus(Term::One, Term::One);
    for _ in 1..n {
        t = Term::times(Term::plus(Term::One, Term::One), t);
    }
    t
}

fn leaf(rng: &mut ChaCha8Rng, vars: &[&str], with_consts: bool) -> Term {
    if with_consts && rng.gen_bool(0.4) {
        if rng.gen_bool(0.5) {
            Term::Zero
        } else {
            Term::One
        }
    } else {
        Term::var(vars[rng.gen_range(0..vars.len())])
    }
}

/// A uniform-split random term of exactly `size` symbols (odd), leaves drawn
/// from the variables and, when `with_consts`, the constants 0 and 1.
pub fn random_term_exact(
    rng: &mut ChaCha8Rng,
    size: usize,
    vars: &[&str],
    with_consts: bool,
) -> Term {
    assert!(size % 2 == 1);
    if size == 1 {
        return leaf(rng, vars, with_consts);
    }
    let left = 2 * rng.gen_range(0..(size - 1) / 2) + 1;
    let l = random_term_exact(rng, left, vars, with_consts);
    let r = random_term_exact(rng, size - 1 - left, vars, with_consts);
    if rng.gen_bool(0.5) {
        Term::plus(l, r)
    } else {
        Term::times(l, r)
    }
}

pub fn random_term(rng: &mut ChaCha8Rng, max_size: usize, vars: &[&str]) -> Term {
    let size = rng.gen_range(1..=max_size) | 1;
    random_term_exact(rng, size, vars, true)
}

/// A random simple term of size within `[1, max_size]`.
pub fn random_simple_term(rng: &mut ChaCha8Rng, max_size: usize, vars: &[&str]) -> Term {
    loop {
        let t = bifree::term::simplify(&random_term(rng, max_size, vars));
        if t.size() <= max_size {
            return t;
        }
    }
}

/// A random monomial term of exactly `size` symbols with random
/// parenthesization.
pub fn random_monomial_exact(rng: &mut ChaCha8Rng, size: usize, vars: &[&str]) -> Term {
    assert!(size % 2 == 1);
    if size == 1 {
        return Term::var(vars[rng.gen_range(0..vars.len())]);
    }
    let left = 2 * rng.gen_range(0..(size - 1) / 2) + 1;
    Term::times(
        random_monomial_exact(rng, left, vars),
        random_monomial_exact(rng, size - 1 - left, vars),
    )
}

/// A random nonzero polynomial term of exactly `size` symbols. With
/// `allow_one` the term may be the constant 1.
pub fn random_pt_exact(
    rng: &mut ChaCha8Rng,
    size: usize,
    vars: &[&str],
    allow_one: bool,
) -> Term {
    assert!(size % 2 == 1);
    if size == 1 {
        return if allow_one && rng.gen_bool(0.3) {
            Term::One
        } else {
            Term::var(vars[rng.gen_range(0..vars.len())])
        };
    }
    match rng.gen_range(0..4u8) {
        0 => random_monomial_exact(rng, size, vars),
        1 | 2 => {
            let left = 2 * rng.gen_range(0..(size - 1) / 2) + 1;
            Term::plus(
                random_pt_exact(rng, left, vars, true),
                random_pt_exact(rng, size - 1 - left, vars, true),
            )
        }
        _ => {
            // monomial * polynomial, the tail never 0 or 1
            let left = 2 * rng.gen_range(0..(size - 1) / 2) + 1;
            Term::times(
                random_monomial_exact(rng, left, vars),
                random_pt_exact(rng, size - 1 - left, vars, false),
            )
        }
    }
}

pub fn random_pt(rng: &mut ChaCha8Rng, max_size: usize, vars: &[&str]) -> Term {
    let size = rng.gen_range(1..=max_size) | 1;
    random_pt_exact(rng, size, vars, true)
}

/// Swaps the operands of `+` nodes at random; an AC+ (e2) shuffle.
pub fn shuffle_sums(t: &Term, rng: &mut ChaCha8Rng) -> Term {
    match t {
        Term::Plus(l, r) => {
            let l = shuffle_sums(l, rng);
            let r = shuffle_sums(r, rng);
            if rng.gen_bool(0.5) {
                Term::plus(r, l)
            } else {
                Term::plus(l, r)
            }
        }
        Term::Times(l, r) => Term::times(shuffle_sums(l, rng), shuffle_sums(r, rng)),
        _ => t.clone(),
    }
}

/// Applies up to `steps` random identity instances (either direction, random
/// position), never letting the term grow beyond `size_cap`.
pub fn apply_random_identities(
    t: &Term,
    ids: &[Identity],
    steps: usize,
    size_cap: usize,
    rng: &mut ChaCha8Rng,
) -> Term {
    let mut cur = t.clone();
    for _ in 0..steps {
        let id = &ids[rng.gen_range(0..ids.len())];
        let forward = rng.gen_bool(0.5);
        let mut positions = cur.positions();
        positions.shuffle(rng);
        for pos in positions {
            if let Some(next) = apply_identity_at(&cur, id, forward, &pos) {
                if next.size() <= size_cap {
                    cur = next;
                }
                break;
            }
        }
    }
    cur
}

/// All single applications of e1, e2, e4 (either direction) at all positions.
pub fn ac_neighbors(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    for pos in t.positions() {
        let sub = t.subterm_at(&pos).unwrap();
        for variant in local_ac_variants(sub) {
            out.push(t.replace_at(&pos, variant).unwrap());
        }
    }
    out
}

fn local_ac_variants(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Plus(l, r) => {
            // e2
            out.push(Term::plus((**r).clone(), (**l).clone()));
            // e1 right-to-left: (a+b)+c -> a+(b+c)
            if let Term::Plus(a, b) = &**l {
                out.push(Term::plus((**a).clone(), Term::plus((**b).clone(), (**r).clone())));
            }
            // e1 left-to-right: a+(b+c) -> (a+b)+c
            if let Term::Plus(b, c) = &**r {
                out.push(Term::plus(Term::plus((**l).clone(), (**b).clone()), (**c).clone()));
            }
        }
        Term::Times(l, r) => {
            if let Term::Times(a, b) = &**l {
                out.push(Term::times((**a).clone(), Term::times((**b).clone(), (**r).clone())));
            }
            if let Term::Times(b, c) = &**r {
                out.push(Term::times(Term::times((**l).clone(), (**b).clone()), (**c).clone()));
            }
        }
        _ => {}
    }
    out
}

/// The inductive definition of the right-distributive product, coded
/// independently of the direct construction: zero and one cases, then
/// (a) monomials multiply by plain pairing, (b) sums distribute summand-wise,
/// (c) a product `m * q'` multiplies as `m * (q' * r)`.
pub fn mul_rd_inductive(q: &Polynomial, r: &Polynomial) -> Polynomial {
    if q.is_zero() || r.is_zero() {
        return Polynomial::zero();
    }
    if q.is_one() {
        return r.clone();
    }
    if r.is_one() {
        return q.clone();
    }
    let qr = q.rep();
    if is_monomial_term(qr) {
        return Polynomial::new(&Term::times(qr.clone(), r.rep().clone()))
            .expect("monomial * polynomial is a polynomial term");
    }
    match qr {
        Term::Plus(..) => {
            let mut acc: Option<Polynomial> = None;
            for s in flatten(qr, true) {
                let part = mul_rd_inductive(
                    &Polynomial::new(&s).expect("summands of polynomial terms are polynomial"),
                    r,
                );
                acc = Some(match acc {
                    None => part,
                    Some(a) => add(&a, &part),
                });
            }
            acc.expect("sums have summands")
        }
        Term::Times(..) => {
            let factors = flatten(qr, false);
            let split = factors
                .iter()
                .position(|f| matches!(f, Term::Plus(..)))
                .expect("non-monomial products end in a sum factor");
            let m = rebuild(&factors[..split], false);
            let tail = rebuild(&factors[split..], false);
            let inner = mul_rd_inductive(
                &Polynomial::new(&tail).expect("sum tail is a polynomial term"),
                r,
            );
            Polynomial::new(&Term::times(m, inner.rep().clone()))
                .expect("monomial * polynomial is a polynomial term")
        }
        _ => unreachable!("leaves handled above"),
    }
}

fn flatten(t: &Term, sums: bool) -> Vec<Term> {
    fn go(t: &Term, sums: bool, out: &mut Vec<Term>) {
        match t {
            Term::Plus(l, r) if sums => {
                go(l, sums, out);
                go(r, sums, out);
            }
            Term::Times(l, r) if !sums => {
                go(l, sums, out);
                go(r, sums, out);
            }
            _ => out.push(t.clone()),
        }
    }
    let mut out = Vec::new();
    go(t, sums, &mut out);
    out
}

fn rebuild(parts: &[Term], sums: bool) -> Term {
    let mut acc = parts.last().expect("nonempty").clone();
    for p in parts[..parts.len() - 1].iter().rev() {
        acc = if sums {
            Term::plus(p.clone(), acc)
        } else {
            Term::times(p.clone(), acc)
        };
    }
    acc
}

/// Replays a trace from `t`, asserting for every step that the rule applies
/// at the recorded position and that the redex weight strictly drops (the
/// substitution-level descent; context monotonicity lifts it to the whole
/// term). Checks the global weight too while the term is small. Returns the
/// final term.
pub fn replay_check_descent(t: &Term, trace: &[(String, Position)], rules: &[Rule]) -> Term {
    let mut cur = t.clone();
    for (name, pos) in trace {
        let rule = rules
            .iter()
            .find(|r| &r.name == name)
            .unwrap_or_else(|| panic!("unknown rule {name} in trace"));
        let next = apply_rule_at(&cur, rule, pos)
            .unwrap_or_else(|| panic!("trace step {name} does not apply"));
        let before = weight(cur.subterm_at(pos).unwrap());
        let after = weight(next.subterm_at(pos).unwrap());
        assert!(before > after, "step {name} does not decrease the weight");
        if cur.size() <= 40 {
            assert!(weight(&cur) > weight(&next));
        }
        cur = next;
    }
    cur
}

/// One randomized maximal R_id-modulo-AC+ reduction of `t`: random-strategy
/// R_id passes interleaved with AC+ shuffles and with duplicate-summand
/// deletions. A deletion stands for an AC+ rearrangement that brings two
/// AC-equal summands side by side followed by ρ9 — legitimate because on
/// R-normal forms (all products right-nested) AC-equality of summands
/// coincides with AC+-equality. The result is an R_id/AC+ normal form.
pub fn random_rid_acplus_reduction(t: &Term, rng: &mut ChaCha8Rng) -> Term {
    use bifree::equiv::Theory;
    use bifree::rewrite::{normal_form_with, rules_r_id, Limits, Strategy};
    let limits = Limits {
        max_steps: 1_000_000,
        max_term_size: 1_000_000,
    };
    let acplus = Theory::ACPLUS.identities();
    let mut cur = t.clone();
    loop {
        cur = apply_random_identities(&cur, &acplus, 3, usize::MAX, rng);
        cur = normal_form_with(&cur, &rules_r_id(), Strategy::Random(rng.gen()), &limits, false)
            .expect("R_id terminates at this scale")
            .result;
        match modulo_rho9_step(&cur, rng) {
            Some(next) => cur = next,
            None => return cur,
        }
    }
}

// Deletes one member of a randomly chosen AC-equal summand pair in some
// maximal sum of an R-normal term; `None` if no sum has such a pair.
fn modulo_rho9_step(t: &Term, rng: &mut ChaCha8Rng) -> Option<Term> {
    let mut candidates: Vec<(Position, usize, usize)> = Vec::new();
    let mut path = Vec::new();
    collect_dup_candidates(t, true, &mut path, &mut candidates);
    let (pos, keep, drop) = candidates.choose(rng)?.clone();
    let sub = t.subterm_at(&pos).unwrap();
    let mut parts = flatten(sub, true);
    debug_assert!(bifree::canon::ac_equal(&parts[keep], &parts[drop]).unwrap());
    parts.remove(drop);
    let new_sub = rebuild(&parts, true);
    Some(t.replace_at(&pos, new_sub).unwrap())
}

fn collect_dup_candidates(
    t: &Term,
    maximal: bool,
    path: &mut Position,
    out: &mut Vec<(Position, usize, usize)>,
) {
    match t {
        Term::Plus(l, r) => {
            if maximal {
                let parts = flatten(t, true);
                let codes: Vec<_> = parts
                    .iter()
                    .map(|p| bifree::canon::code(p).expect("R-normal subterms are simple"))
                    .collect();
                for i in 0..parts.len() {
                    for j in i + 1..parts.len() {
                        if codes[i] == codes[j] {
                            out.push((path.clone(), i, j));
                        }
                    }
                }
            }
            path.push(1);
            collect_dup_candidates(l, false, path, out);
            path.pop();
            path.push(2);
            collect_dup_candidates(r, false, path, out);
            path.pop();
        }
        Term::Times(l, r) => {
            path.push(1);
            collect_dup_candidates(l, true, path, out);
            path.pop();
            path.push(2);
            collect_dup_candidates(r, true, path, out);
            path.pop();
        }
        _ => {}
    }
}

/// A tiny union-find over `0..n`.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Every term over the leaves {0, 1, x, y} of each odd size up to `max_size`.
pub fn enumerate_terms(max_size: usize) -> Vec<Vec<Term>> {
    let leaves = vec![Term::Zero, Term::One, Term::var("x"), Term::var("y")];
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = leaves;
    }
    for n in (3..=max_size).step_by(2) {
        let mut terms = Vec::new();
        for i in (1..n - 1).step_by(2) {
            let j = n - 1 - i;
            for l in by_size[i].clone() {
                for r in &by_size[j] {
                    terms.push(Term::plus(l.clone(), r.clone()));
                    terms.push(Term::times(l.clone(), r.clone()));
                }
            }
        }
        by_size[n] = terms;
    }
    by_size
}
