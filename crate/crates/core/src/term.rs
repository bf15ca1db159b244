//! Syntax trees over the signature `{+, *, 0, 1}` with named variables,
//! together with parsing, printing, positions and the unit/zero simplifier.

use std::fmt;

use thiserror::Error;

/// A term over the binary signature `{+, *}` with constants `0`, `1` and
/// variables drawn from identifier strings.
///
/// Structural equality is plain tree equality; no identity of the algebra is
/// applied implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    Var(String),
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
}

/// A position in a term: the sequence of child indices (`1` or `2`) leading
/// from the root to a subterm. The empty sequence is the root.
pub type Position = Vec<u8>;

/// Renders a position as a dotted path, `ε` for the root.
pub fn position_to_string(pos: &[u8]) -> String {
    if pos.is_empty() {
        "ε".to_string()
    } else {
        pos.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("position {} is not valid in the term", position_to_string(.0))]
pub struct InvalidPosition(pub Position);

/// Output mode for [`render`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    /// Drop parentheses recoverable from precedence and left-association.
    Pretty,
    /// Fully parenthesized; the bit-exact interchange format.
    FullParens,
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn plus(l: Term, r: Term) -> Term {
        Term::Plus(Box::new(l), Box::new(r))
    }

    pub fn times(l: Term, r: Term) -> Term {
        Term::Times(Box::new(l), Box::new(r))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Term::Zero | Term::One | Term::Var(_))
    }

    pub fn children(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Plus(l, r) | Term::Times(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Total number of symbol occurrences (operators, constants, variables).
    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Var(_) => 1,
            Term::Plus(l, r) | Term::Times(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// All positions of the term in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::with_capacity(self.size());
        let mut path = Vec::new();
        collect_positions(self, &mut path, &mut out);
        out
    }

    /// The subterm at `pos`, or an error if `pos` is not a position of `self`.
    pub fn subterm_at(&self, pos: &[u8]) -> Result<&Term, InvalidPosition> {
        let mut cur = self;
        for (k, &i) in pos.iter().enumerate() {
            cur = match (cur.children(), i) {
                (Some((l, _)), 1) => l,
                (Some((_, r)), 2) => r,
                _ => return Err(InvalidPosition(pos[..=k].to_vec())),
            };
        }
        Ok(cur)
    }

    /// Replaces the subterm at `pos` by `u`, returning a fresh term.
    pub fn replace_at(&self, pos: &[u8], u: Term) -> Result<Term, InvalidPosition> {
        // check validity up front so the recursion can stay infallible
        self.subterm_at(pos)?;
        Ok(replace_rec(self, pos, u))
    }

    /// A term is simple if it is `0`, or it contains no `0` and no subterm of
    /// the form `1 * s` or `s * 1`.
    pub fn is_simple(&self) -> bool {
        *self == Term::Zero || is_simple_nonzero(self)
    }

    pub fn parse(text: &str) -> Result<Term, SyntaxError> {
        Parser::new(text).parse_all()
    }
}

fn collect_positions(t: &Term, path: &mut Position, out: &mut Vec<Position>) {
    out.push(path.clone());
    if let Some((l, r)) = t.children() {
        path.push(1);
        collect_positions(l, path, out);
        path.pop();
        path.push(2);
        collect_positions(r, path, out);
        path.pop();
    }
}

fn replace_rec(t: &Term, pos: &[u8], u: Term) -> Term {
    match pos.split_first() {
        None => u,
        Some((&i, rest)) => match t {
            Term::Plus(l, r) => {
                if i == 1 {
                    Term::plus(replace_rec(l, rest, u), (**r).clone())
                } else {
                    Term::plus((**l).clone(), replace_rec(r, rest, u))
                }
            }
            Term::Times(l, r) => {
                if i == 1 {
                    Term::times(replace_rec(l, rest, u), (**r).clone())
                } else {
                    Term::times((**l).clone(), replace_rec(r, rest, u))
                }
            }
            _ => unreachable!("position validated before recursion"),
        },
    }
}

fn is_simple_nonzero(t: &Term) -> bool {
    match t {
        Term::Zero => false,
        Term::One | Term::Var(_) => true,
        Term::Plus(l, r) => is_simple_nonzero(l) && is_simple_nonzero(r),
        Term::Times(l, r) => {
            **l != Term::One
                && **r != Term::One
                && is_simple_nonzero(l)
                && is_simple_nonzero(r)
        }
    }
}

/// Exhaustively applies the unit and zero laws (rules ρ1–ρ6 of the rewrite
/// system) innermost-first. The result is simple, congruent to the input
/// modulo the strong bimonoid identities, and no larger than the input.
pub fn simplify(t: &Term) -> Term {
    match t {
        Term::Zero | Term::One | Term::Var(_) => t.clone(),
        Term::Plus(l, r) => {
            let l = simplify(l);
            let r = simplify(r);
            if l == Term::Zero {
                r
            } else if r == Term::Zero {
                l
            } else {
                Term::plus(l, r)
            }
        }
        Term::Times(l, r) => {
            let l = simplify(l);
            let r = simplify(r);
            if l == Term::Zero || r == Term::Zero {
                Term::Zero
            } else if l == Term::One {
                r
            } else if r == Term::One {
                l
            } else {
                Term::times(l, r)
            }
        }
    }
}

/// Renders a term. `FullParens` round-trips bit-exactly through [`Term::parse`].
pub fn render(t: &Term, mode: RenderMode) -> String {
    let mut out = String::new();
    match mode {
        RenderMode::FullParens => render_full(t, &mut out),
        RenderMode::Pretty => render_pretty(t, 0, &mut out),
    }
    out
}

fn render_full(t: &Term, out: &mut String) {
    match t {
        Term::Zero => out.push('0'),
        Term::One => out.push('1'),
        Term::Var(x) => out.push_str(x),
        Term::Plus(l, r) => {
            out.push('(');
            render_full(l, out);
            out.push_str(" + ");
            render_full(r, out);
            out.push(')');
        }
        Term::Times(l, r) => {
            out.push('(');
            render_full(l, out);
            out.push_str(" * ");
            render_full(r, out);
            out.push(')');
        }
    }
}

// `min_prec`: 0 anywhere, 1 inside a sum, 2 where only a factor may stand
// unparenthesized. Parsing is left-associative, so the right operand needs
// one level more than the node itself.
fn render_pretty(t: &Term, min_prec: u8, out: &mut String) {
    let prec = match t {
        Term::Plus(..) => 1,
        Term::Times(..) => 2,
        _ => 3,
    };
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    match t {
        Term::Zero => out.push('0'),
        Term::One => out.push('1'),
        Term::Var(x) => out.push_str(x),
        Term::Plus(l, r) => {
            render_pretty(l, 1, out);
            out.push_str(" + ");
            render_pretty(r, 2, out);
        }
        Term::Times(l, r) => {
            render_pretty(l, 2, out);
            out.push_str(" * ");
            render_pretty(r, 3, out);
        }
    }
    if parens {
        out.push(')');
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, RenderMode::Pretty))
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn parse_all(mut self) -> Result<Term, SyntaxError> {
        let t = self.parse_sum()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(t)
    }

    fn err(&self, message: &str) -> SyntaxError {
        SyntaxError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse_sum(&mut self) -> Result<Term, SyntaxError> {
        let mut acc = self.parse_product()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let rhs = self.parse_product()?;
            acc = Term::plus(acc, rhs);
        }
        Ok(acc)
    }

    fn parse_product(&mut self) -> Result<Term, SyntaxError> {
        let mut acc = self.parse_atom()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.parse_atom()?;
            acc = Term::times(acc, rhs);
        }
        Ok(acc)
    }

    fn parse_atom(&mut self) -> Result<Term, SyntaxError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.parse_sum()?;
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    Ok(t)
                } else {
                    Err(self.err("expected ')'"))
                }
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Term::One)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    self.pos += 1;
                }
                Ok(Term::Var(self.src[start..self.pos].to_string()))
            }
            Some(_) => Err(self.err("expected '0', '1', an identifier or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
