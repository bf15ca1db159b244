//! Polynomial terms and id-reduced polynomial terms as canonical class
//! representatives, with the strong bimonoid operations: `+`, the
//! right-distributive multiplication (inductive contract, one-step direct
//! construction), and the idempotent addition.

use thiserror::Error;

use crate::canon::{self, canonical_term, code_bytes};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("term is not simple")]
    NotSimple,
    #[error("term is not a polynomial term")]
    NotAPolynomialTerm,
    #[error("term is not id-reduced")]
    NotIdReduced,
    #[error("operand is zero")]
    ZeroOperand,
    #[error("polynomial is not a product or monomial")]
    NotAProduct,
}

/// True iff `t` is built from variables and `*` only.
pub fn is_monomial_term(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Times(l, r) => is_monomial_term(l) && is_monomial_term(r),
        _ => false,
    }
}

/// True iff `t` is a polynomial term: simple, and the left child of every
/// `*` node is a monomial (contains no `+`). These are the terms reachable
/// from simple terms by right-distributivity and reassociation of `*`.
pub fn is_polynomial_term(t: &Term) -> bool {
    t.is_simple() && pt_shape(t).1
}

// returns (contains a plus, has polynomial shape)
fn pt_shape(t: &Term) -> (bool, bool) {
    match t {
        Term::Zero | Term::One | Term::Var(_) => (false, true),
        Term::Plus(l, r) => {
            let (_, lo) = pt_shape(l);
            let (_, ro) = pt_shape(r);
            (true, lo && ro)
        }
        Term::Times(l, r) => {
            let (lp, lo) = pt_shape(l);
            let (rp, ro) = pt_shape(r);
            (lp || rp, !lp && lo && ro)
        }
    }
}

/// True iff every sum subterm's sum-product decomposition has pairwise
/// AC-distinct summands. Requires a simple term.
pub fn is_id_reduced(t: &Term) -> Result<bool, PolyError> {
    if !t.is_simple() {
        return Err(PolyError::NotSimple);
    }
    Ok(id_reduced_rec(t))
}

fn id_reduced_rec(t: &Term) -> bool {
    match t {
        Term::Zero | Term::One | Term::Var(_) => true,
        Term::Times(l, r) => id_reduced_rec(l) && id_reduced_rec(r),
        Term::Plus(..) => {
            let summands = flatten_summands(t);
            let mut codes: Vec<Vec<u8>> = summands.iter().map(|s| code_bytes(s)).collect();
            codes.sort();
            let distinct = codes.windows(2).all(|w| w[0] != w[1]);
            distinct && summands.into_iter().all(id_reduced_rec)
        }
    }
}

fn flatten_summands(t: &Term) -> Vec<&Term> {
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

/// An element of the right-distributive polynomial strong bimonoid: the
/// AC-class of a polynomial term, stored as its canonical representative.
/// Class equality is therefore plain structural equality of representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    rep: Term,
}

/// An element of the idempotent right-distributive polynomial strong
/// bimonoid: the AC-class of an id-reduced polynomial term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdPolynomial {
    rep: Term,
}

impl Polynomial {
    pub fn new(t: &Term) -> Result<Polynomial, PolyError> {
        if !is_polynomial_term(t) {
            return Err(PolyError::NotAPolynomialTerm);
        }
        Ok(Polynomial {
            rep: canonical_term(t).expect("polynomial terms are simple"),
        })
    }

    pub fn zero() -> Polynomial {
        Polynomial { rep: Term::Zero }
    }

    pub fn one() -> Polynomial {
        Polynomial { rep: Term::One }
    }

    pub fn var(name: &str) -> Polynomial {
        Polynomial {
            rep: Term::var(name),
        }
    }

    pub fn rep(&self) -> &Term {
        &self.rep
    }

    pub fn into_rep(self) -> Term {
        self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep == Term::Zero
    }

    pub fn is_one(&self) -> bool {
        self.rep == Term::One
    }

    pub fn size(&self) -> usize {
        self.rep.size()
    }
}

impl IdPolynomial {
    pub fn new(t: &Term) -> Result<IdPolynomial, PolyError> {
        if !is_polynomial_term(t) {
            return Err(PolyError::NotAPolynomialTerm);
        }
        if !is_id_reduced(t)? {
            return Err(PolyError::NotIdReduced);
        }
        Ok(IdPolynomial {
            rep: canonical_term(t).expect("polynomial terms are simple"),
        })
    }

    pub fn zero() -> IdPolynomial {
        IdPolynomial { rep: Term::Zero }
    }

    pub fn one() -> IdPolynomial {
        IdPolynomial { rep: Term::One }
    }

    pub fn var(name: &str) -> IdPolynomial {
        IdPolynomial {
            rep: Term::var(name),
        }
    }

    pub fn rep(&self) -> &Term {
        &self.rep
    }

    pub fn into_rep(self) -> Term {
        self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep == Term::Zero
    }

    pub fn is_one(&self) -> bool {
        self.rep == Term::One
    }

    /// Forgets idempotency, viewing the class inside the non-idempotent
    /// polynomial bimonoid.
    pub fn as_polynomial(&self) -> Polynomial {
        Polynomial {
            rep: self.rep.clone(),
        }
    }

    pub fn size(&self) -> usize {
        self.rep.size()
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.rep.fmt(f)
    }
}

impl std::fmt::Display for IdPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.rep.fmt(f)
    }
}

/// Class-level addition; `0` is neutral.
pub fn add(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    Polynomial {
        rep: canonical_term(&Term::plus(p.rep.clone(), q.rep.clone()))
            .expect("sum of polynomial terms is simple"),
    }
}

/// The direct one-step product construction `s⟨×t⟩`: every leaf `1` of `s`
/// is replaced by `t`, and every variable that is the rightmost factor of a
/// monomial summand of `s` is replaced by `x * t`. Both operands must be
/// nonzero polynomial terms.
pub fn mul_direct(s: &Term, t: &Term) -> Result<Term, PolyError> {
    if *s == Term::Zero || *t == Term::Zero {
        return Err(PolyError::ZeroOperand);
    }
    debug_assert!(is_polynomial_term(s) && is_polynomial_term(t));
    Ok(md(s, t))
}

fn md(s: &Term, t: &Term) -> Term {
    if *s == Term::One {
        return t.clone();
    }
    if *t == Term::One {
        return s.clone();
    }
    match s {
        Term::Var(_) => Term::times(s.clone(), t.clone()),
        Term::Plus(l, r) => Term::plus(md(l, t), md(r, t)),
        // the left factor of a polynomial product is a monomial: untouched
        Term::Times(l, r) => Term::times((**l).clone(), md(r, t)),
        Term::Zero | Term::One => unreachable!("handled above"),
    }
}

/// The right-distributive class multiplication. Zero annihilates, one is
/// neutral, everything else goes through the direct construction on
/// representatives.
pub fn mul_rd(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() || q.is_zero() {
        return Polynomial::zero();
    }
    if p.is_one() {
        return q.clone();
    }
    if q.is_one() {
        return p.clone();
    }
    let prod = mul_direct(&p.rep, &q.rep).expect("operands checked nonzero");
    Polynomial {
        rep: canonical_term(&prod).expect("direct product is a polynomial term"),
    }
}

/// Splits a product polynomial into its unique leading monomial and sum
/// tail; a monomial has no tail.
pub fn decompose_product(p: &Polynomial) -> Result<(Term, Option<Polynomial>), PolyError> {
    if is_monomial_term(&p.rep) {
        return Ok((p.rep.clone(), None));
    }
    if !matches!(p.rep, Term::Times(..)) {
        return Err(PolyError::NotAProduct);
    }
    let factors = canon::product_sum_decomposition(&p.rep).expect("canonical product");
    let (last, init) = factors.split_last().expect("products have two factors");
    debug_assert!(matches!(last, Term::Plus(..)));
    debug_assert!(init.iter().all(|f| matches!(f, Term::Var(_))));
    let mut m = init.last().expect("nonempty monomial prefix").clone();
    for f in init[..init.len() - 1].iter().rev() {
        m = Term::times(f.clone(), m);
    }
    Ok((
        m,
        Some(Polynomial {
            rep: last.clone(),
        }),
    ))
}

/// The `n`-fold sum `p + … + p`; `n ≥ 1`.
pub fn n_times(p: &Polynomial, n: usize) -> Polynomial {
    assert!(n >= 1, "n_times requires n >= 1");
    let mut acc = p.clone();
    for _ in 1..n {
        acc = add(&acc, p);
    }
    acc
}

/// Idempotent class addition: the union of the two summand lists with
/// duplicates across the operands dropped.
pub fn add_id(p: &IdPolynomial, q: &IdPolynomial) -> IdPolynomial {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    let mut parts: Vec<Term> = flatten_summands(&p.rep).into_iter().cloned().collect();
    let seen: std::collections::HashSet<Vec<u8>> =
        parts.iter().map(code_bytes).collect();
    for s in flatten_summands(&q.rep) {
        if !seen.contains(&code_bytes(s)) {
            parts.push(s.clone());
        }
    }
    let mut acc = parts.pop().expect("nonempty summand list");
    while let Some(s) = parts.pop() {
        acc = Term::plus(s, acc);
    }
    IdPolynomial {
        rep: canonical_term(&acc).expect("sum of id-reduced terms is simple"),
    }
}

/// Multiplication on id-reduced polynomials: the same construction as
/// [`mul_rd`]; the result is id-reduced again.
pub fn mul_id(p: &IdPolynomial, q: &IdPolynomial) -> IdPolynomial {
    let r = mul_rd(&p.as_polynomial(), &q.as_polynomial());
    debug_assert!(is_id_reduced(&r.rep).unwrap_or(false));
    IdPolynomial { rep: r.rep }
}
