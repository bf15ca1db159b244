//! Equational deciders for the strong bimonoid theories, representation
//! constructors, and evaluation homomorphisms into user-supplied strong
//! bimonoids.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::canon::{acid_code_bytes, acplus_code_bytes, code_bytes};
use crate::poly::{IdPolynomial, Polynomial};
use crate::rewrite::{
    self, normal_form, normal_form_id, rules_r, MetaTerm, RewriteError, Strategy,
};
use crate::term::{simplify, Term};

/// An identity `(lhs, rhs)` over metavariables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub name: &'static str,
    pub lhs: MetaTerm,
    pub rhs: MetaTerm,
}

/// The equational theories of the artifact, each a fixed identity set:
/// the strong bimonoid laws `E = {e1..e8}`, the right-distributive extension
/// `E_rd = E ∪ {e9}`, the idempotent extension `E_id,rd = E_rd ∪ {e11}`, and
/// the pure permutation theories AC, AC+ and AC_id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theory {
    SB,
    RD,
    IDRD,
    AC,
    ACPLUS,
    ACID,
}

fn m(name: &str) -> MetaTerm {
    MetaTerm::meta(name)
}

/// The identities e1–e11 in their listed order.
pub fn all_identities() -> Vec<Identity> {
    use MetaTerm::{One, Zero};
    let id = |name, lhs, rhs| Identity { name, lhs, rhs };
    vec![
        id(
            "e1",
            MetaTerm::plus(m("z1"), MetaTerm::plus(m("z2"), m("z3"))),
            MetaTerm::plus(MetaTerm::plus(m("z1"), m("z2")), m("z3")),
        ),
        id("e2", MetaTerm::plus(m("z1"), m("z2")), MetaTerm::plus(m("z2"), m("z1"))),
        id("e3", MetaTerm::plus(m("z"), Zero), m("z")),
        id(
            "e4",
            MetaTerm::times(m("z1"), MetaTerm::times(m("z2"), m("z3"))),
            MetaTerm::times(MetaTerm::times(m("z1"), m("z2")), m("z3")),
        ),
        id("e5", MetaTerm::times(One, m("z")), m("z")),
        id("e6", MetaTerm::times(m("z"), One), m("z")),
        id("e7", MetaTerm::times(m("z"), Zero), Zero),
        id("e8", MetaTerm::times(Zero, m("z")), Zero),
        id(
            "e9",
            MetaTerm::times(MetaTerm::plus(m("z1"), m("z2")), m("z3")),
            MetaTerm::plus(
                MetaTerm::times(m("z1"), m("z3")),
                MetaTerm::times(m("z2"), m("z3")),
            ),
        ),
        id(
            "e10",
            MetaTerm::times(m("z1"), MetaTerm::plus(m("z2"), m("z3"))),
            MetaTerm::plus(
                MetaTerm::times(m("z1"), m("z2")),
                MetaTerm::times(m("z1"), m("z3")),
            ),
        ),
        id("e11", MetaTerm::plus(m("z"), m("z")), m("z")),
    ]
}

impl Theory {
    /// The identity set of the theory.
    pub fn identities(self) -> Vec<Identity> {
        let all = all_identities();
        let names: &[&str] = match self {
            Theory::SB => &["e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8"],
            Theory::RD => &["e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "e9"],
            Theory::IDRD => &["e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "e9", "e11"],
            Theory::AC => &["e1", "e2", "e4"],
            Theory::ACPLUS => &["e1", "e2"],
            Theory::ACID => &["e1", "e2", "e4", "e11"],
        };
        all.into_iter().filter(|i| names.contains(&i.name)).collect()
    }
}

impl FromStr for Theory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sb" => Ok(Theory::SB),
            "rd" => Ok(Theory::RD),
            "idrd" => Ok(Theory::IDRD),
            "ac" => Ok(Theory::AC),
            "acplus" => Ok(Theory::ACPLUS),
            "acid" => Ok(Theory::ACID),
            _ => Err(format!("unknown theory '{s}'")),
        }
    }
}

/// Decides whether `s` and `t` are congruent modulo the theory's identities.
///
/// SB compares simplified terms up to AC; RD compares R-normal forms up to
/// AC; IDRD compares the id-reduced polynomial normal forms. The pure
/// permutation theories compare structural canonical codes directly.
pub fn equivalent(s: &Term, t: &Term, th: Theory) -> Result<bool, RewriteError> {
    Ok(match th {
        Theory::SB => code_bytes(&simplify(s)) == code_bytes(&simplify(t)),
        Theory::RD => {
            let ns = normal_form(s, &rules_r(), Strategy::LeftmostInnermost)?.result;
            let nt = normal_form(t, &rules_r(), Strategy::LeftmostInnermost)?.result;
            code_bytes(&ns) == code_bytes(&nt)
        }
        Theory::IDRD => normal_form_id(s)? == normal_form_id(t)?,
        Theory::AC => code_bytes(s) == code_bytes(t),
        Theory::ACPLUS => acplus_code_bytes(s) == acplus_code_bytes(t),
        Theory::ACID => acid_code_bytes(s) == acid_code_bytes(t),
    })
}

/// The simple representative: all unit and zero laws applied.
pub fn to_simple(t: &Term) -> Term {
    simplify(t)
}

/// The polynomial representative: the class of the R-normal form.
pub fn to_polynomial(t: &Term) -> Result<Polynomial, RewriteError> {
    let nf = normal_form(t, &rules_r(), Strategy::LeftmostInnermost)?.result;
    Ok(Polynomial::new(&nf).expect("R-normal forms are polynomial terms"))
}

/// The id-reduced polynomial representative.
pub fn to_id_polynomial(t: &Term) -> Result<IdPolynomial, RewriteError> {
    let nf = normal_form_id(t)?;
    Ok(IdPolynomial::new(&nf).expect("id-normal forms are id-reduced polynomial terms"))
}

/// A value of a model carrier. The meaning of `Inf` and `Bot` is
/// per model: `Inf` is the `∞` of the plus-min and word models, `Bot` the
/// adjoined zero of the plus-plus model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Bool(bool),
    Nat(u64),
    Inf,
    Bot,
    Word(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Inf => write!(f, "inf"),
            Value::Bot => write!(f, "bot"),
            Value::Word(w) if w.is_empty() => write!(f, "eps"),
            Value::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Saturation cap standing in for unbounded naturals in the numeric models.
pub const NAT_CAP: u64 = 1 << 31;

fn sat_add(a: u64, b: u64) -> u64 {
    (a + b).min(NAT_CAP)
}

type BinOp = Arc<dyn Fn(&Value, &Value) -> Value + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model '{model}' violates axiom: {axiom}")]
    AxiomViolation { model: String, axiom: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable '{0}' is unbound in the assignment")]
    UnboundVariable(String),
}

/// A strong bimonoid given by its constants and total operations, with
/// declared structural flags. Registration spot-checks the axioms and the
/// flags on random triples drawn from the sample set and rejects models
/// that fail.
#[derive(Clone)]
pub struct BimonoidModel {
    pub name: String,
    zero: Value,
    one: Value,
    add: BinOp,
    mul: BinOp,
    pub right_distributive: bool,
    pub idempotent: bool,
    samples: Vec<Value>,
}

impl fmt::Debug for BimonoidModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BimonoidModel")
            .field("name", &self.name)
            .field("zero", &self.zero)
            .field("one", &self.one)
            .field("right_distributive", &self.right_distributive)
            .field("idempotent", &self.idempotent)
            .finish()
    }
}

impl BimonoidModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        zero: Value,
        one: Value,
        add: impl Fn(&Value, &Value) -> Value + Send + Sync + 'static,
        mul: impl Fn(&Value, &Value) -> Value + Send + Sync + 'static,
        right_distributive: bool,
        idempotent: bool,
        samples: Vec<Value>,
    ) -> Result<BimonoidModel, ModelError> {
        let model = BimonoidModel {
            name: name.to_string(),
            zero,
            one,
            add: Arc::new(add),
            mul: Arc::new(mul),
            right_distributive,
            idempotent,
            samples,
        };
        model.spot_check()?;
        Ok(model)
    }

    pub fn zero(&self) -> &Value {
        &self.zero
    }

    pub fn one(&self) -> &Value {
        &self.one
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        (self.add)(a, b)
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        (self.mul)(a, b)
    }

    pub fn samples(&self) -> &[Value] {
        &self.samples
    }

    // 200 random triples from the sample pool against the strong bimonoid
    // axioms and the declared flags.
    fn spot_check(&self) -> Result<(), ModelError> {
        let fail = |axiom| {
            Err(ModelError::AxiomViolation {
                model: self.name.clone(),
                axiom,
            })
        };
        if self.samples.is_empty() {
            return fail("sample set is empty");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0xB1F0);
        let pick = |rng: &mut ChaCha8Rng| {
            self.samples[rng.gen_range(0..self.samples.len())].clone()
        };
        for _ in 0..200 {
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            let c = pick(&mut rng);
            if self.add(&a, &b) != self.add(&b, &a) {
                return fail("addition is not commutative");
            }
            if self.add(&self.add(&a, &b), &c) != self.add(&a, &self.add(&b, &c)) {
                return fail("addition is not associative");
            }
            if self.add(&a, &self.zero) != a || self.add(&self.zero, &a) != a {
                return fail("zero is not neutral for addition");
            }
            if self.mul(&self.mul(&a, &b), &c) != self.mul(&a, &self.mul(&b, &c)) {
                return fail("multiplication is not associative");
            }
            if self.mul(&a, &self.one) != a || self.mul(&self.one, &a) != a {
                return fail("one is not neutral for multiplication");
            }
            if self.mul(&a, &self.zero) != self.zero || self.mul(&self.zero, &a) != self.zero {
                return fail("zero is not annihilating");
            }
            if self.right_distributive
                && self.mul(&self.add(&a, &b), &c)
                    != self.add(&self.mul(&a, &c), &self.mul(&b, &c))
            {
                return fail("declared right-distributive but the law fails");
            }
            if self.idempotent && self.add(&a, &a) != a {
                return fail("declared idempotent but the law fails");
            }
        }
        Ok(())
    }
}

fn bool_model() -> BimonoidModel {
    BimonoidModel::new(
        "bool",
        Value::Bool(false),
        Value::Bool(true),
        |a, b| match (a, b) {
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(*a || *b),
            _ => panic!("bool model applied outside its carrier"),
        },
        |a, b| match (a, b) {
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(*a && *b),
            _ => panic!("bool model applied outside its carrier"),
        },
        true,
        true,
        vec![Value::Bool(false), Value::Bool(true)],
    )
    .expect("boolean model satisfies the axioms")
}

fn plusmin_model() -> BimonoidModel {
    BimonoidModel::new(
        "plusmin",
        Value::Nat(0),
        Value::Inf,
        |a, b| match (a, b) {
            (Value::Inf, _) | (_, Value::Inf) => Value::Inf,
            (Value::Nat(a), Value::Nat(b)) => Value::Nat(sat_add(*a, *b)),
            _ => panic!("plusmin model applied outside its carrier"),
        },
        |a, b| match (a, b) {
            (Value::Inf, v) | (v, Value::Inf) => v.clone(),
            (Value::Nat(a), Value::Nat(b)) => Value::Nat(*a.min(b)),
            _ => panic!("plusmin model applied outside its carrier"),
        },
        false,
        false,
        vec![
            Value::Nat(0),
            Value::Nat(1),
            Value::Nat(2),
            Value::Nat(3),
            Value::Nat(7),
            Value::Nat(19),
            Value::Inf,
        ],
    )
    .expect("plus-min model satisfies the axioms")
}

fn plusplus_model() -> BimonoidModel {
    BimonoidModel::new(
        "plusplus",
        Value::Bot,
        Value::Nat(0),
        |a, b| match (a, b) {
            (Value::Bot, v) | (v, Value::Bot) => v.clone(),
            (Value::Nat(a), Value::Nat(b)) => Value::Nat(sat_add(*a, *b)),
            _ => panic!("plusplus model applied outside its carrier"),
        },
        |a, b| match (a, b) {
            (Value::Bot, _) | (_, Value::Bot) => Value::Bot,
            (Value::Nat(a), Value::Nat(b)) => Value::Nat(sat_add(*a, *b)),
            _ => panic!("plusplus model applied outside its carrier"),
        },
        false,
        false,
        vec![
            Value::Bot,
            Value::Nat(0),
            Value::Nat(1),
            Value::Nat(2),
            Value::Nat(5),
            Value::Nat(11),
        ],
    )
    .expect("plus-plus model satisfies the axioms")
}

fn gcp(u: &str, v: &str) -> String {
    u.chars()
        .zip(v.chars())
        .take_while(|(a, b)| a == b)
        .map(|(a, _)| a)
        .collect()
}

fn words_model() -> BimonoidModel {
    BimonoidModel::new(
        "words",
        Value::Inf,
        Value::Word(String::new()),
        |a, b| match (a, b) {
            (Value::Inf, v) | (v, Value::Inf) => v.clone(),
            (Value::Word(u), Value::Word(v)) => Value::Word(gcp(u, v)),
            _ => panic!("words model applied outside its carrier"),
        },
        |a, b| match (a, b) {
            (Value::Inf, _) | (_, Value::Inf) => Value::Inf,
            (Value::Word(u), Value::Word(v)) => Value::Word(format!("{u}{v}")),
            _ => panic!("words model applied outside its carrier"),
        },
        false,
        true,
        vec![
            Value::Inf,
            Value::Word(String::new()),
            Value::Word("a".into()),
            Value::Word("b".into()),
            Value::Word("ab".into()),
            Value::Word("abb".into()),
            Value::Word("ba".into()),
        ],
    )
    .expect("word model satisfies the axioms")
}

/// The four built-in models: the Boolean semiring, the plus-min strong
/// bimonoid `(N∞, +, min, 0, ∞)`, the plus-plus strong bimonoid with an
/// adjoined zero, and the word strong bimonoid under greatest common prefix
/// and concatenation.
pub fn builtin_models() -> Vec<BimonoidModel> {
    vec![bool_model(), plusmin_model(), plusplus_model(), words_model()]
}

/// Looks up a built-in model by name.
pub fn builtin_model(name: &str) -> Option<BimonoidModel> {
    builtin_models().into_iter().find(|m| m.name == name)
}

/// Bottom-up evaluation of a term in a model under a variable assignment —
/// the homomorphism from the free algebra fixed by the assignment.
pub fn evaluate(
    t: &Term,
    model: &BimonoidModel,
    assignment: &HashMap<String, Value>,
) -> Result<Value, EvalError> {
    match t {
        Term::Zero => Ok(model.zero.clone()),
        Term::One => Ok(model.one.clone()),
        Term::Var(x) => assignment
            .get(x)
            .cloned()
            .ok_or_else(|| EvalError::UnboundVariable(x.clone())),
        Term::Plus(l, r) => Ok(model.add(
            &evaluate(l, model, assignment)?,
            &evaluate(r, model, assignment)?,
        )),
        Term::Times(l, r) => Ok(model.mul(
            &evaluate(l, model, assignment)?,
            &evaluate(r, model, assignment)?,
        )),
    }
}

/// Applies identity `id` (left-to-right if `forward`) at position `pos`,
/// if it matches there. Inverse directions may introduce fresh structure
/// (e.g. `z → z + 0`), so this is the tool for generating congruent term
/// pairs, not a rewrite rule.
pub fn apply_identity_at(
    t: &Term,
    id: &Identity,
    forward: bool,
    pos: &[u8],
) -> Option<Term> {
    let (from, to) = if forward {
        (&id.lhs, &id.rhs)
    } else {
        (&id.rhs, &id.lhs)
    };
    let sub = t.subterm_at(pos).ok()?;
    let phi = rewrite::match_lhs(from, sub)?;
    // metavariables of the target missing from the source (inverse of e3,
    // e5–e8) can be filled arbitrarily; ground them to 0 or 1 leaves
    let mut instantiated = phi.apply(to);
    instantiated = ground_free_metas(&instantiated);
    let new_sub = instantiated.to_term()?;
    t.replace_at(pos, new_sub).ok()
}

fn ground_free_metas(t: &MetaTerm) -> MetaTerm {
    match t {
        MetaTerm::Meta(_) => MetaTerm::One,
        MetaTerm::Plus(l, r) => MetaTerm::plus(ground_free_metas(l), ground_free_metas(r)),
        MetaTerm::Times(l, r) => MetaTerm::times(ground_free_metas(l), ground_free_metas(r)),
        _ => t.clone(),
    }
}
