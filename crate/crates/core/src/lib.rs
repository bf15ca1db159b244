//! Free strong bimonoids of polynomial terms.
//!
//! Terms over `{+, *, 0, 1}` and a set of variables are the carrier for
//! three nested algebras: the simple-term classes under AC-equivalence, the
//! right-distributive polynomial strong bimonoid, and its idempotent
//! quotientable refinement of id-reduced polynomials. The crate provides
//!
//! - [`term`]: syntax trees, parsing/printing, positions, the unit/zero
//!   simplifier;
//! - [`canon`]: AC-canonical codes and class representatives, idempotency
//!   reduction, labeled-tree export;
//! - [`poly`]: polynomial and id-reduced polynomial classes with `+`, the
//!   right-distributive product (direct one-step construction) and the
//!   idempotent sum;
//! - [`rewrite`]: the rewrite system R (ρ1–ρ8) and R_id (+ρ9), strategies
//!   with step statistics, the termination weight, unification and critical
//!   pairs;
//! - [`equiv`]: equational deciders for the strong bimonoid theories and
//!   evaluation homomorphisms into user-supplied models;
//! - [`mx`]: the weakly-locally-finite quotient M(X) of the idempotent
//!   bimonoid by the large-polynomial congruence.

pub mod canon;
pub mod equiv;
pub mod mx;
pub mod poly;
pub mod rewrite;
pub mod term;

pub use canon::{ac_equal, canonical_term, code, id_reduce, to_dot, Code, LabeledTree};
pub use equiv::{builtin_models, equivalent, evaluate, to_id_polynomial, to_polynomial, to_simple, BimonoidModel, Theory, Value};
pub use mx::{is_large, m_add, m_inject, m_mul, p_witness, weak_closure, MElement};
pub use poly::{add, add_id, mul_direct, mul_id, mul_rd, IdPolynomial, Polynomial};
pub use rewrite::{
    critical_pairs, mgu, normal_form, normal_form_id, rewrite_step, rules_r, rules_r_id, weight,
    Limits, MetaTerm, NormalFormReport, Rule, Strategy, Substitution,
};
pub use term::{render, simplify, Position, RenderMode, Term};
