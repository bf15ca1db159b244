//! The weakly locally finite quotient M(X): subpolynomials, the
//! large-polynomial predicate, the congruence that collapses all large
//! polynomials into one absorbing class, the witness sequence showing M(X)
//! is not locally finite, and weak-closure enumeration.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::poly::{add_id, mul_id, IdPolynomial};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MxError {
    #[error("operation undefined for the polynomials 0 and 1")]
    InvalidOperand,
    #[error("weak closure did not stabilize within {0} rounds")]
    IterationBudgetExceeded(usize),
}

/// An element of M(X): zero, one, the single absorbing class of all large
/// polynomials, or a non-large id-reduced polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MElement {
    Zero,
    Unit,
    Large,
    Small(IdPolynomial),
}

impl fmt::Display for MElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MElement::Zero => write!(f, "0"),
            MElement::Unit => write!(f, "1"),
            MElement::Large => write!(f, "LARGE"),
            MElement::Small(p) => p.fmt(f),
        }
    }
}

/// True iff some subterm of `q`'s canonical representative is AC-equal to
/// `p`'s. Representatives are canonical, so AC-comparison of subterms is
/// plain structural equality.
pub fn is_subpolynomial(p: &IdPolynomial, q: &IdPolynomial) -> bool {
    subterm_search(q.rep(), p.rep())
}

fn subterm_search(haystack: &Term, needle: &Term) -> bool {
    if haystack == needle {
        return true;
    }
    match haystack.children() {
        Some((l, r)) => subterm_search(l, needle) || subterm_search(r, needle),
        None => false,
    }
}

/// Decides whether an id-reduced polynomial is large: whether it has a
/// subpolynomial of the form `x * ((y1 * p') + … + (yn * p'))` with pairwise
/// different `y_i ∈ X ∪ {1}` (at most one being `1`, contributing a bare `p'`
/// summand) and `p' ∉ {0, 1}`. Undefined for `0` and `1`.
///
/// On canonical representatives the pattern shows up in two shapes: a product
/// spine of three or more factors (the `n = 1` case, where the leading two
/// factors are variables and `p'` is the rest of the spine), or a two-factor
/// spine `x * S` whose sum factor `S` consists of summands sharing one tail
/// `p'`. Spine suffixes need no separate scan: a pattern in a suffix is
/// visible in the full factor list.
pub fn is_large(q: &IdPolynomial) -> Result<bool, MxError> {
    if q.is_zero() || q.is_one() {
        return Err(MxError::InvalidOperand);
    }
    Ok(large_rec(q.rep()))
}

fn factors(t: &Term) -> Vec<&Term> {
    fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
        match t {
            Term::Times(l, r) => {
                go(l, out);
                go(r, out);
            }
            _ => out.push(t),
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    out
}

fn summands(t: &Term) -> Vec<&Term> {
    fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
        match t {
            Term::Plus(l, r) => {
                go(l, out);
                go(r, out);
            }
            _ => out.push(t),
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    out
}

fn large_rec(t: &Term) -> bool {
    match t {
        Term::Zero | Term::One | Term::Var(_) => false,
        Term::Plus(..) => summands(t).into_iter().any(large_rec),
        Term::Times(..) => {
            let fs = factors(t);
            if fs.len() >= 3 {
                // canonical polynomial spines start with variables, so the
                // first two factors head an x * (y * p') subpolynomial
                return true;
            }
            if matches!(fs[0], Term::Var(_)) {
                if let Term::Plus(..) = fs[1] {
                    if shared_tail_sum(fs[1]) {
                        return true;
                    }
                }
            }
            fs.into_iter().any(large_rec)
        }
    }
}

// Does the sum match `(y1 * p') + … + (yn * p')` for some shared tail
// `p' ∉ {0, 1}`? Candidate tails come from the variable-headed product
// summands (the pattern requires at least one). The remaining summands must
// either be absent (all y_i are variables) or reconstruct `p'` exactly: a
// `y_i = 1` contributes `p'` itself as a summand, which the canonical
// flattening merges into the top level when `p'` is a sum — so the leftover
// summands are compared against `p'`'s own summand list. Summands of an
// id-reduced canonical term are pairwise distinct, which already gives the
// pairwise-distinct heads of the pattern.
fn shared_tail_sum(s: &Term) -> bool {
    let parts = summands(s);
    let tails: Vec<&Term> = parts
        .iter()
        .filter_map(|part| match part {
            Term::Times(head, tail) if matches!(**head, Term::Var(_)) => Some(&**tail),
            _ => None,
        })
        .collect();
    for cand in tails {
        let mut matched = 0usize;
        let mut rest: Vec<&Term> = Vec::new();
        for part in &parts {
            match part {
                Term::Times(head, tail)
                    if matches!(**head, Term::Var(_)) && **tail == *cand =>
                {
                    matched += 1;
                }
                other => rest.push(*other),
            }
        }
        if rest.is_empty() {
            if matched >= 2 {
                return true;
            }
            continue;
        }
        // summand lists of canonical sums are sorted by code, so multiset
        // equality is plain sequence equality
        if matched >= 1 && rest == summands(cand) {
            return true;
        }
    }
    false
}

/// The class of an id-reduced polynomial in M(X).
pub fn m_inject(p: &IdPolynomial) -> MElement {
    if p.is_zero() {
        MElement::Zero
    } else if p.is_one() {
        MElement::Unit
    } else if is_large(p).expect("0 and 1 handled above") {
        MElement::Large
    } else {
        MElement::Small(p.clone())
    }
}

fn payload(a: &MElement) -> IdPolynomial {
    match a {
        MElement::Zero => IdPolynomial::zero(),
        MElement::Unit => IdPolynomial::one(),
        MElement::Small(p) => p.clone(),
        MElement::Large => unreachable!("large elements carry no payload"),
    }
}

/// Addition in M(X); the large class absorbs every non-zero summand.
pub fn m_add(a: &MElement, b: &MElement) -> MElement {
    match (a, b) {
        (MElement::Zero, x) | (x, MElement::Zero) => x.clone(),
        (MElement::Large, _) | (_, MElement::Large) => MElement::Large,
        _ => m_inject(&add_id(&payload(a), &payload(b))),
    }
}

/// Multiplication in M(X); zero annihilates, one is neutral, the large
/// class absorbs everything else.
pub fn m_mul(a: &MElement, b: &MElement) -> MElement {
    match (a, b) {
        (MElement::Zero, _) | (_, MElement::Zero) => MElement::Zero,
        (MElement::Unit, x) | (x, MElement::Unit) => x.clone(),
        (MElement::Large, _) | (_, MElement::Large) => MElement::Large,
        (MElement::Small(p), MElement::Small(q)) => m_inject(&mul_id(p, q)),
    }
}

/// The witness polynomials `p_0 = x`, `p_{n+1} = x * (1 + p_n)`: pairwise
/// distinct and never large, so their M(X)-classes generate an infinite
/// substructure from `{1, [x]}`.
pub fn p_witness(n: usize) -> IdPolynomial {
    let x = IdPolynomial::var("x");
    let one = IdPolynomial::one();
    let mut p = x.clone();
    for _ in 0..n {
        p = mul_id(&x, &add_id(&one, &p));
    }
    p
}

/// The weak closure of a seed set: the least superset of
/// `seed ∪ {0, 1}` closed under all sums and under products with seed
/// elements on the right. Stabilizes within `max_iter` rounds or errors.
pub fn weak_closure(
    seed: &[MElement],
    max_iter: usize,
) -> Result<HashSet<MElement>, MxError> {
    let mut closure: HashSet<MElement> = seed.iter().cloned().collect();
    closure.insert(MElement::Zero);
    closure.insert(MElement::Unit);
    for _ in 0..max_iter {
        let mut fresh = Vec::new();
        for a in &closure {
            for b in &closure {
                let s = m_add(a, b);
                if !closure.contains(&s) {
                    fresh.push(s);
                }
            }
            for g in seed {
                let p = m_mul(a, g);
                if !closure.contains(&p) {
                    fresh.push(p);
                }
            }
        }
        if fresh.is_empty() {
            return Ok(closure);
        }
        closure.extend(fresh);
    }
    Err(MxError::IterationBudgetExceeded(max_iter))
}
