//! AC-canonical forms for simple terms: sum-product and product-sum
//! decompositions, the labeled-tree encoding, canonical codes deciding
//! AC-equivalence, canonical class representatives, idempotency reduction
//! and DOT export.

use thiserror::Error;

use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("term is not simple")]
    NotSimple,
    #[error("term is not a sum term")]
    NotASumTerm,
    #[error("term is not a product term")]
    NotAProductTerm,
}

/// Canonical fingerprint of a simple term. Two simple terms have equal codes
/// exactly when they are AC-equivalent (associativity of `+` and `*`,
/// commutativity of `+`). Codes are totally ordered; the order is what fixes
/// the summand layout of canonical representatives.
///
/// The fingerprint is a self-contained canonical byte sequence (sums encode
/// the sorted child codes, products the ordered child codes), so codes from
/// independent calls and threads compare without shared state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Code(Vec<u8>);

impl Code {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

const TAG_ZERO: u8 = 0;
const TAG_ONE: u8 = 1;
const TAG_VAR: u8 = 2;
const TAG_SUM: u8 = 3;
const TAG_PROD: u8 = 4;
// binary product node, used only by the AC+ code where `*` is not flattened
const TAG_TIMES2: u8 = 5;

/// Node labels of the tree encoding of a simple term. Sum children are
/// semantically unordered; product children carry their 1-based index so that
/// tree isomorphism preserves factor order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeLabel {
    Sum,
    Prod,
    Zero,
    One,
    Var(String),
    Indexed(usize, Box<NodeLabel>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    pub label: NodeLabel,
    pub children: Vec<LabeledTree>,
}

fn flatten_plus<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
    match t {
        Term::Plus(l, r) => {
            flatten_plus(l, out);
            flatten_plus(r, out);
        }
        _ => out.push(t),
    }
}

fn flatten_times<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
    match t {
        Term::Times(l, r) => {
            flatten_times(l, out);
            flatten_times(r, out);
        }
        _ => out.push(t),
    }
}

/// The unique sum-product decomposition of a simple sum term: all `+` nesting
/// flattened in source order. Every element is a product term or in `X ∪ {1}`.
pub fn sum_product_decomposition(s: &Term) -> Result<Vec<Term>, CanonError> {
    if !s.is_simple() {
        return Err(CanonError::NotSimple);
    }
    if !matches!(s, Term::Plus(..)) {
        return Err(CanonError::NotASumTerm);
    }
    let mut parts = Vec::new();
    flatten_plus(s, &mut parts);
    Ok(parts.into_iter().cloned().collect())
}

/// The unique product-sum decomposition of a simple product term: all `*`
/// nesting flattened in order. Every element is a sum term or a variable.
pub fn product_sum_decomposition(s: &Term) -> Result<Vec<Term>, CanonError> {
    if !s.is_simple() {
        return Err(CanonError::NotSimple);
    }
    if !matches!(s, Term::Times(..)) {
        return Err(CanonError::NotAProductTerm);
    }
    let mut parts = Vec::new();
    flatten_times(s, &mut parts);
    Ok(parts.into_iter().cloned().collect())
}

/// The labeled tree of a simple term: leaves stay leaves, a sum term becomes
/// a `⊞` node over its summands, a product term a `⊠` node over its factors
/// with each factor's root label replaced by the pair `(i, label)`.
pub fn labeled_tree(s: &Term) -> Result<LabeledTree, CanonError> {
    if !s.is_simple() {
        return Err(CanonError::NotSimple);
    }
    Ok(tree_rec(s))
}

fn tree_rec(s: &Term) -> LabeledTree {
    match s {
        Term::Zero => LabeledTree {
            label: NodeLabel::Zero,
            children: vec![],
        },
        Term::One => LabeledTree {
            label: NodeLabel::One,
            children: vec![],
        },
        Term::Var(x) => LabeledTree {
            label: NodeLabel::Var(x.clone()),
            children: vec![],
        },
        Term::Plus(..) => {
            let mut parts = Vec::new();
            flatten_plus(s, &mut parts);
            LabeledTree {
                label: NodeLabel::Sum,
                children: parts.into_iter().map(tree_rec).collect(),
            }
        }
        Term::Times(..) => {
            let mut parts = Vec::new();
            flatten_times(s, &mut parts);
            let children = parts
                .into_iter()
                .enumerate()
                .map(|(i, f)| {
                    let sub = tree_rec(f);
                    LabeledTree {
                        label: NodeLabel::Indexed(i + 1, Box::new(sub.label)),
                        children: sub.children,
                    }
                })
                .collect();
            LabeledTree {
                label: NodeLabel::Prod,
                children,
            }
        }
    }
}

fn push_var(name: &str, out: &mut Vec<u8>) {
    out.push(TAG_VAR);
    let len = name.len() as u16;
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(name.as_bytes());
}

fn push_children(tag: u8, children: &[Vec<u8>], out: &mut Vec<u8>) {
    out.push(tag);
    out.extend_from_slice(&(children.len() as u32).to_be_bytes());
    for c in children {
        out.extend_from_slice(c);
    }
}

pub(crate) fn code_bytes(t: &Term) -> Vec<u8> {
    match t {
        Term::Zero => vec![TAG_ZERO],
        Term::One => vec![TAG_ONE],
        Term::Var(x) => {
            let mut out = Vec::new();
            push_var(x, &mut out);
            out
        }
        Term::Plus(..) => {
            let mut parts = Vec::new();
            flatten_plus(t, &mut parts);
            let mut codes: Vec<Vec<u8>> = parts.into_iter().map(code_bytes).collect();
            codes.sort();
            let mut out = Vec::new();
            push_children(TAG_SUM, &codes, &mut out);
            out
        }
        Term::Times(..) => {
            let mut parts = Vec::new();
            flatten_times(t, &mut parts);
            let codes: Vec<Vec<u8>> = parts.into_iter().map(code_bytes).collect();
            let mut out = Vec::new();
            push_children(TAG_PROD, &codes, &mut out);
            out
        }
    }
}

// AC+ = {e1, e2} only: sums are flattened and sorted, products stay binary.
pub(crate) fn acplus_code_bytes(t: &Term) -> Vec<u8> {
    match t {
        Term::Zero => vec![TAG_ZERO],
        Term::One => vec![TAG_ONE],
        Term::Var(x) => {
            let mut out = Vec::new();
            push_var(x, &mut out);
            out
        }
        Term::Plus(..) => {
            let mut parts = Vec::new();
            flatten_plus(t, &mut parts);
            let mut codes: Vec<Vec<u8>> = parts.into_iter().map(acplus_code_bytes).collect();
            codes.sort();
            let mut out = Vec::new();
            push_children(TAG_SUM, &codes, &mut out);
            out
        }
        Term::Times(l, r) => {
            let mut out = vec![TAG_TIMES2];
            out.extend_from_slice(&acplus_code_bytes(l));
            out.extend_from_slice(&acplus_code_bytes(r));
            out
        }
    }
}

// AC ∪ {e11}: like `code_bytes` but duplicate summands collapse bottom-up.
pub(crate) fn acid_code_bytes(t: &Term) -> Vec<u8> {
    match t {
        Term::Plus(..) => {
            let mut parts = Vec::new();
            flatten_plus(t, &mut parts);
            let mut codes: Vec<Vec<u8>> = parts.into_iter().map(acid_code_bytes).collect();
            codes.sort();
            codes.dedup();
            if codes.len() == 1 {
                return codes.pop().unwrap();
            }
            let mut out = Vec::new();
            push_children(TAG_SUM, &codes, &mut out);
            out
        }
        Term::Times(..) => {
            let mut parts = Vec::new();
            flatten_times(t, &mut parts);
            let codes: Vec<Vec<u8>> = parts.into_iter().map(acid_code_bytes).collect();
            let mut out = Vec::new();
            push_children(TAG_PROD, &codes, &mut out);
            out
        }
        _ => code_bytes(t),
    }
}

/// The canonical code of a simple term; equality of codes characterizes
/// AC-equivalence.
pub fn code(s: &Term) -> Result<Code, CanonError> {
    if !s.is_simple() {
        return Err(CanonError::NotSimple);
    }
    Ok(Code(code_bytes(s)))
}

/// Decides `s =_AC t` for simple terms in near-linear time.
pub fn ac_equal(s: &Term, t: &Term) -> Result<bool, CanonError> {
    if !s.is_simple() || !t.is_simple() {
        return Err(CanonError::NotSimple);
    }
    Ok(code_bytes(s) == code_bytes(t))
}

// Canonicalizes and returns the code alongside, so parents sort children
// without recomputing. `dedup` drops duplicate summands (rule e11),
// counting the deletions in `drops`.
fn canon_rec(t: &Term, dedup: bool, drops: &mut u64) -> (Term, Vec<u8>) {
    match t {
        Term::Zero | Term::One | Term::Var(_) => (t.clone(), code_bytes(t)),
        Term::Plus(..) => {
            let mut parts = Vec::new();
            flatten_plus(t, &mut parts);
            let mut items: Vec<(Vec<u8>, Term)> = parts
                .into_iter()
                .map(|p| {
                    let (ct, cb) = canon_rec(p, dedup, drops);
                    (cb, ct)
                })
                .collect();
            items.sort_by(|a, b| a.0.cmp(&b.0));
            if dedup {
                let before = items.len();
                items.dedup_by(|a, b| a.0 == b.0);
                *drops += (before - items.len()) as u64;
            }
            if items.len() == 1 {
                let (cb, ct) = items.pop().unwrap();
                return (ct, cb);
            }
            let codes: Vec<Vec<u8>> = items.iter().map(|(c, _)| c.clone()).collect();
            let mut bytes = Vec::new();
            push_children(TAG_SUM, &codes, &mut bytes);
            let term = rebuild_right_comb(items.into_iter().map(|(_, t)| t).collect(), true);
            (term, bytes)
        }
        Term::Times(..) => {
            let mut parts = Vec::new();
            flatten_times(t, &mut parts);
            let items: Vec<(Vec<u8>, Term)> = parts
                .into_iter()
                .map(|p| {
                    let (ct, cb) = canon_rec(p, dedup, drops);
                    (cb, ct)
                })
                .collect();
            let codes: Vec<Vec<u8>> = items.iter().map(|(c, _)| c.clone()).collect();
            let mut bytes = Vec::new();
            push_children(TAG_PROD, &codes, &mut bytes);
            let term = rebuild_right_comb(items.into_iter().map(|(_, t)| t).collect(), false);
            (term, bytes)
        }
    }
}

fn rebuild_right_comb(mut parts: Vec<Term>, sum: bool) -> Term {
    let mut acc = parts.pop().expect("nonempty decomposition");
    while let Some(p) = parts.pop() {
        acc = if sum { Term::plus(p, acc) } else { Term::times(p, acc) };
    }
    acc
}

/// The canonical representative of the AC-class of a simple term: sums and
/// products right-nested, summands sorted by child code ascending (duplicates
/// kept adjacent), factor order preserved.
pub fn canonical_term(s: &Term) -> Result<Term, CanonError> {
    if !s.is_simple() {
        return Err(CanonError::NotSimple);
    }
    let mut drops = 0;
    Ok(canon_rec(s, false, &mut drops).0)
}

/// An id-reduced term of the input's class: canonicalizes bottom-up,
/// drops duplicate summands in every sum, and strips the unit factors that
/// appear when a sum of ones collapses (`x * (1 + 1)` dedups to `x * 1`,
/// which only the unit law can finish off). The result is simple,
/// id-reduced, canonical, and no larger than the input; it is AC∪{e11}-equal
/// to the input except across unit-factor strips, which add e5/e6 steps.
pub fn id_reduce(s: &Term) -> Result<Term, CanonError> {
    id_reduce_counting(s).map(|(t, _, _)| t)
}

// `id_reduce` plus the numbers of deleted summands and stripped unit
// factors; the caller accounts them as ρ9 and ρ4 applications.
pub(crate) fn id_reduce_counting(s: &Term) -> Result<(Term, u64, u64), CanonError> {
    if !s.is_simple() {
        return Err(CanonError::NotSimple);
    }
    let mut cur = s.clone();
    let mut drops = 0;
    let mut strips = 0;
    loop {
        let deduped = canon_rec(&cur, true, &mut drops).0;
        let stripped = strip_unit_factors(&deduped, &mut strips);
        if stripped == cur {
            return Ok((stripped, drops, strips));
        }
        cur = stripped;
    }
}

fn strip_unit_factors(t: &Term, strips: &mut u64) -> Term {
    match t {
        Term::Zero | Term::One | Term::Var(_) => t.clone(),
        Term::Plus(l, r) => Term::plus(
            strip_unit_factors(l, strips),
            strip_unit_factors(r, strips),
        ),
        Term::Times(l, r) => {
            let l = strip_unit_factors(l, strips);
            let r = strip_unit_factors(r, strips);
            if r == Term::One {
                *strips += 1;
                l
            } else if l == Term::One {
                *strips += 1;
                r
            } else {
                Term::times(l, r)
            }
        }
    }
}

fn label_text(label: &NodeLabel) -> String {
    match label {
        NodeLabel::Sum => "⊞".to_string(),
        NodeLabel::Prod => "⊠".to_string(),
        NodeLabel::Zero => "0".to_string(),
        NodeLabel::One => "1".to_string(),
        NodeLabel::Var(x) => x.clone(),
        NodeLabel::Indexed(i, inner) => format!("({},{})", i, label_text(inner)),
    }
}

/// Emits the labeled tree of a simple term as a DOT digraph; edges run
/// parent to child in source order.
pub fn to_dot(s: &Term) -> Result<String, CanonError> {
    let tree = labeled_tree(s)?;
    let mut out = String::from("digraph term {\n");
    let mut next = 0usize;
    dot_rec(&tree, &mut next, &mut out);
    out.push_str("}\n");
    Ok(out)
}

fn dot_rec(t: &LabeledTree, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    out.push_str(&format!(
        "  n{} [label=\"{}\"];\n",
        id,
        label_text(&t.label)
    ));
    for c in &t.children {
        let cid = dot_rec(c, next, out);
        out.push_str(&format!("  n{} -> n{};\n", id, cid));
    }
    id
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        Term::parse(s).unwrap()
    }

    #[test]
    fn sum_product_decomposition_flattens_in_order() {
        let parts = sum_product_decomposition(&p("((x * y) + 1) + (z * x)")).unwrap();
        assert_eq!(parts, vec![p("x * y"), p("1"), p("z * x")]);
        assert_eq!(
            sum_product_decomposition(&p("x + y")).unwrap(),
            vec![p("x"), p("y")]
        );
        assert_eq!(
            sum_product_decomposition(&p("(x + (y + z)) + w")).unwrap(),
            vec![p("x"), p("y"), p("z"), p("w")]
        );
        assert_eq!(
            sum_product_decomposition(&p("x * y")),
            Err(CanonError::NotASumTerm)
        );
    }

    #[test]
    fn product_sum_decomposition_flattens_in_order() {
        let parts = product_sum_decomposition(&p("(x * (1 + y)) * (x + z)")).unwrap();
        assert_eq!(parts, vec![p("x"), p("1 + y"), p("x + z")]);
        assert_eq!(
            product_sum_decomposition(&p("x * y")).unwrap(),
            vec![p("x"), p("y")]
        );
        assert_eq!(
            product_sum_decomposition(&p("x * ((y * z) * w)")).unwrap(),
            vec![p("x"), p("y"), p("z"), p("w")]
        );
        assert_eq!(
            product_sum_decomposition(&p("x + y")),
            Err(CanonError::NotAProductTerm)
        );
    }

    #[test]
    fn labeled_tree_shapes() {
        let t = labeled_tree(&p("x")).unwrap();
        assert_eq!(t.label, NodeLabel::Var("x".into()));
        assert!(t.children.is_empty());

        let t = labeled_tree(&p("x + y")).unwrap();
        assert_eq!(t.label, NodeLabel::Sum);
        assert_eq!(t.children.len(), 2);

        let t = labeled_tree(&p("x * y")).unwrap();
        assert_eq!(t.label, NodeLabel::Prod);
        assert_eq!(
            t.children[0].label,
            NodeLabel::Indexed(1, Box::new(NodeLabel::Var("x".into())))
        );
        assert_eq!(
            t.children[1].label,
            NodeLabel::Indexed(2, Box::new(NodeLabel::Var("y".into())))
        );

        assert_eq!(labeled_tree(&p("x * 1")), Err(CanonError::NotSimple));
    }

    #[test]
    fn code_characterizes_ac() {
        assert_eq!(code(&p("x + y")).unwrap(), code(&p("y + x")).unwrap());
        assert_ne!(code(&p("x * y")).unwrap(), code(&p("y * x")).unwrap());
        assert_eq!(
            code(&p("(x + y) + z")).unwrap(),
            code(&p("x + (y + z)")).unwrap()
        );
        assert_eq!(
            code(&p("(x * y) * z")).unwrap(),
            code(&p("x * (y * z)")).unwrap()
        );
        assert!(ac_equal(&p("x + (y + x)"), &p("(x + x) + y")).unwrap());
        assert!(ac_equal(&p("x"), &p("x")).unwrap());
        assert!(!ac_equal(&p("x + x"), &p("x")).unwrap());
        // products over different sum orders are still AC-equal
        assert!(ac_equal(&p("x * (a + b)"), &p("x * (b + a)")).unwrap());
    }

    #[test]
    fn canonical_term_layout() {
        // code order puts x before y, duplicates stay adjacent
        assert_eq!(canonical_term(&p("(y + x) + y")).unwrap(), p("x + (y + y)"));
        let c = canonical_term(&p("x * (y * z)")).unwrap();
        assert_eq!(c, p("x * (y * z)"));
        let once = canonical_term(&p("(b + a) * ((x + w) + v)")).unwrap();
        assert_eq!(canonical_term(&once).unwrap(), once);
        // canonical representative stays in the AC-class
        assert!(ac_equal(&once, &p("(b + a) * ((x + w) + v)")).unwrap());
    }

    #[test]
    fn id_reduce_examples() {
        assert_eq!(id_reduce(&p("x + x")).unwrap(), p("x"));
        assert_eq!(
            id_reduce(&p("(x + y) + x")).unwrap(),
            canonical_term(&p("x + y")).unwrap()
        );
        assert_eq!(id_reduce(&p("1")).unwrap(), p("1"));
        // nested: inner dedup makes outer summands collide
        assert_eq!(
            id_reduce(&p("(x + x) * y + x * y")).unwrap(),
            p("x * y")
        );
        let r = id_reduce(&p("(x * y + y * x) + x * y")).unwrap();
        assert_eq!(r, canonical_term(&p("x * y + y * x")).unwrap());
    }

    #[test]
    fn id_reduce_cleans_collapsed_unit_sums() {
        // 1 + 1 collapses to 1; the freed unit factor must not survive
        assert_eq!(id_reduce(&p("x * (1 + 1)")).unwrap(), p("x"));
        assert_eq!(id_reduce(&p("1 + 1")).unwrap(), p("1"));
        assert_eq!(id_reduce(&p("x * (1 + 1) + x")).unwrap(), p("x"));
        assert_eq!(
            id_reduce(&p("y * (x * ((1 + 1) + 1))")).unwrap(),
            p("y * x")
        );
        let r = id_reduce(&p("z * ((x + x) + (1 + 1))")).unwrap();
        assert_eq!(r, p("z * (1 + x)"));
        assert!(r.is_simple());
    }

    #[test]
    fn dot_output() {
        let d = to_dot(&p("x")).unwrap();
        assert!(d.contains("label=\"x\""));
        assert_eq!(d.matches("->").count(), 0);

        let d = to_dot(&p("x + y")).unwrap();
        assert!(d.contains("label=\"⊞\""));
        assert_eq!(d.matches("label=").count(), 3);
        assert_eq!(d.matches("->").count(), 2);

        let d = to_dot(&p("x * y")).unwrap();
        assert!(d.contains("label=\"(1,x)\""));
        assert!(d.contains("label=\"(2,y)\""));
    }

    #[test]
    fn ac_preserves_size() {
        let pairs = [("x + (y + x)", "(x + x) + y"), ("x * (y * z)", "(x * y) * z")];
        for (a, b) in pairs {
            let (a, b) = (p(a), p(b));
            assert!(ac_equal(&a, &b).unwrap());
            assert_eq!(a.size(), b.size());
        }
    }
}
