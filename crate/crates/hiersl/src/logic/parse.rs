//! Recursive-descent parsers for the two formula languages.
//!
//! Shared precedence, loosest to tightest: `<->`, `->` (right
//! associative), `|`, `&`, `U` (right associative), prefix operators.
//! Strategy quantifiers `<<x:o>>`/`[[x:o]]` and bindings `(a,x)` are
//! prefix operators; the propositional quantifier `exists p : {..} .`
//! scopes maximally to the right. Derived operators are desugared here.

use std::collections::BTreeSet;

use super::lex::{lex, ParseError, Span, Tok};
use super::qctl::{QPath, QState};
use super::sli::{Sli, SliNode};

/// Declared name sets that formulas are checked against. A `None` entry
/// leaves that name space open (useful for tests and generated input).
#[derive(Debug, Clone, Default)]
pub struct Signature {
    pub atoms: Option<Vec<String>>,
    pub agents: Option<Vec<String>>,
    pub observations: Option<Vec<String>>,
    pub variables: Option<Vec<String>>,
    /// Number of local-state components, bounding concrete observations.
    pub components: Option<usize>,
}

impl Signature {
    pub fn open() -> Self {
        Signature::default()
    }

    fn check(&self, kind: &str, names: &Option<Vec<String>>, name: &str, span: Span) -> Result<(), ParseError> {
        if let Some(list) = names {
            if !list.iter().any(|n| n == name) {
                return Err(ParseError::new(span, format!("unknown {kind} `{name}`")));
            }
        }
        Ok(())
    }
}

const RESERVED: &[&str] = &["X", "U", "F", "G", "E", "A", "exists", "forall", "true", "false"];

struct P<'a> {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> P<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn peek3(&self) -> &Tok {
        &self.toks[(self.pos + 2).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.next().1)
        } else {
            Err(ParseError::new(self.span(), format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), ParseError> {
        match self.next() {
            (Tok::Ident(s), span) => Ok((s, span)),
            (t, span) => Err(ParseError::new(span, format!("expected {what}, found {t}"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(ParseError::new(self.span(), format!("unexpected {} after formula", self.peek())))
        }
    }
}

// -- strategy-logic formulas --------------------------------------------------

/// Parses a strategy-logic formula against the signature.
pub fn parse_sli(text: &str, sig: &Signature) -> Result<Sli, ParseError> {
    let mut p = P { toks: lex(text)?, pos: 0, sig };
    let phi = sli_iff(&mut p)?;
    p.eof()?;
    Ok(phi)
}

fn sli_iff(p: &mut P) -> Result<Sli, ParseError> {
    let mut lhs = sli_implies(p)?;
    while *p.peek() == Tok::DArrow {
        let span = p.next().1;
        let rhs = sli_implies(p)?;
        let fwd = Sli::implies(lhs.clone(), rhs.clone());
        let back = Sli::implies(rhs, lhs);
        lhs = Sli::spanned(Sli::and(fwd, back).node, span);
    }
    Ok(lhs)
}

fn sli_implies(p: &mut P) -> Result<Sli, ParseError> {
    let lhs = sli_or(p)?;
    if *p.peek() == Tok::Arrow {
        let span = p.next().1;
        let rhs = sli_implies(p)?;
        return Ok(Sli::spanned(Sli::implies(lhs, rhs).node, span));
    }
    Ok(lhs)
}

fn sli_or(p: &mut P) -> Result<Sli, ParseError> {
    let mut lhs = sli_and(p)?;
    while *p.peek() == Tok::Pipe {
        let span = p.next().1;
        let rhs = sli_and(p)?;
        lhs = Sli::spanned(SliNode::Or(Box::new(lhs), Box::new(rhs)), span);
    }
    Ok(lhs)
}

fn sli_and(p: &mut P) -> Result<Sli, ParseError> {
    let mut lhs = sli_until(p)?;
    while *p.peek() == Tok::Amp {
        let span = p.next().1;
        let rhs = sli_until(p)?;
        lhs = Sli::spanned(Sli::and(lhs, rhs).node, span);
    }
    Ok(lhs)
}

fn sli_until(p: &mut P) -> Result<Sli, ParseError> {
    let lhs = sli_unary(p)?;
    if p.at_keyword("U") {
        let span = p.next().1;
        let rhs = sli_until(p)?;
        return Ok(Sli::spanned(SliNode::Until(Box::new(lhs), Box::new(rhs)), span));
    }
    Ok(lhs)
}

fn sli_unary(p: &mut P) -> Result<Sli, ParseError> {
    let span = p.span();
    match p.peek().clone() {
        Tok::Bang => {
            p.next();
            let a = sli_unary(p)?;
            Ok(Sli::spanned(SliNode::Not(Box::new(a)), span))
        }
        Tok::LAngle2 => {
            p.next();
            let (var, vspan) = p.ident("strategy variable")?;
            p.sig.check("variable", &p.sig.variables, &var, vspan)?;
            p.expect(Tok::Colon)?;
            let (obs, ospan) = p.ident("observation symbol")?;
            p.sig.check("observation", &p.sig.observations, &obs, ospan)?;
            p.expect(Tok::RAngle2)?;
            let body = sli_unary(p)?;
            Ok(Sli::spanned(SliNode::Exists { var, obs, body: Box::new(body) }, span))
        }
        Tok::LBrack2 => {
            p.next();
            let (var, vspan) = p.ident("strategy variable")?;
            p.sig.check("variable", &p.sig.variables, &var, vspan)?;
            p.expect(Tok::Colon)?;
            let (obs, ospan) = p.ident("observation symbol")?;
            p.sig.check("observation", &p.sig.observations, &obs, ospan)?;
            p.expect(Tok::RBrack2)?;
            let body = sli_unary(p)?;
            // [[x:o]] φ  desugars to  ! <<x:o>> ! φ
            let inner = Sli::spanned(
                SliNode::Exists { var, obs, body: Box::new(Sli::not(body)) },
                span,
            );
            Ok(Sli::spanned(SliNode::Not(Box::new(inner)), span))
        }
        Tok::LParen => {
            // three-token lookahead separates a binding `(a,x)` from a
            // parenthesised formula
            if matches!(p.peek2(), Tok::Ident(_)) && *p.peek3() == Tok::Comma {
                p.next();
                let (agent, aspan) = p.ident("agent")?;
                p.sig.check("agent", &p.sig.agents, &agent, aspan)?;
                p.expect(Tok::Comma)?;
                let (var, vspan) = p.ident("strategy variable")?;
                p.sig.check("variable", &p.sig.variables, &var, vspan)?;
                p.expect(Tok::RParen)?;
                let body = sli_unary(p)?;
                return Ok(Sli::spanned(SliNode::Bind { agent, var, body: Box::new(body) }, span));
            }
            p.next();
            let inner = sli_iff(p)?;
            p.expect(Tok::RParen)?;
            Ok(inner)
        }
        Tok::Ident(name) => match name.as_str() {
            "X" => {
                p.next();
                let a = sli_unary(p)?;
                Ok(Sli::spanned(SliNode::Next(Box::new(a)), span))
            }
            "F" => {
                p.next();
                let a = sli_unary(p)?;
                Ok(Sli::spanned(Sli::eventually(a).node, span))
            }
            "G" => {
                p.next();
                let a = sli_unary(p)?;
                Ok(Sli::spanned(Sli::always(a).node, span))
            }
            "true" => {
                p.next();
                Ok(Sli::spanned(SliNode::True, span))
            }
            "false" => {
                p.next();
                Ok(Sli::spanned(SliNode::Not(Box::new(Sli::truth())), span))
            }
            "E" | "A" | "exists" | "forall" => {
                Err(ParseError::new(span, format!("`{name}` is not a strategy-logic operator")))
            }
            "U" => Err(ParseError::new(span, "`U` needs a left operand")),
            _ => {
                p.next();
                p.sig.check("atom", &p.sig.atoms, &name, span)?;
                Ok(Sli::spanned(SliNode::Atom(name), span))
            }
        },
        t => Err(ParseError::new(span, format!("expected a formula, found {t}"))),
    }
}

// -- QCTL* formulas -----------------------------------------------------------

/// Parses a state formula against the signature; the state/path
/// stratification is enforced by the grammar.
pub fn parse_qctl(text: &str, sig: &Signature) -> Result<QState, ParseError> {
    let mut p = P { toks: lex(text)?, pos: 0, sig };
    let phi = qs_iff(&mut p)?;
    p.eof()?;
    Ok(phi)
}

fn qs_iff(p: &mut P) -> Result<QState, ParseError> {
    let mut lhs = qs_implies(p)?;
    while *p.peek() == Tok::DArrow {
        p.next();
        let rhs = qs_implies(p)?;
        let fwd = QState::implies(lhs.clone(), rhs.clone());
        let back = QState::implies(rhs, lhs);
        lhs = QState::and(fwd, back);
    }
    Ok(lhs)
}

fn qs_implies(p: &mut P) -> Result<QState, ParseError> {
    let lhs = qs_or(p)?;
    if *p.peek() == Tok::Arrow {
        p.next();
        let rhs = qs_implies(p)?;
        return Ok(QState::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn qs_or(p: &mut P) -> Result<QState, ParseError> {
    let mut lhs = qs_and(p)?;
    while *p.peek() == Tok::Pipe {
        p.next();
        let rhs = qs_and(p)?;
        lhs = QState::or(lhs, rhs);
    }
    Ok(lhs)
}

fn qs_and(p: &mut P) -> Result<QState, ParseError> {
    let mut lhs = qs_unary(p)?;
    while *p.peek() == Tok::Amp {
        p.next();
        let rhs = qs_unary(p)?;
        lhs = QState::and(lhs, rhs);
    }
    if p.at_keyword("U") {
        return Err(ParseError::new(p.span(), "`U` is a path operator; state position expects a state formula"));
    }
    Ok(lhs)
}

fn qs_unary(p: &mut P) -> Result<QState, ParseError> {
    let span = p.span();
    match p.peek().clone() {
        Tok::Bang => {
            p.next();
            let a = qs_unary(p)?;
            Ok(QState { node: super::qctl::QStateNode::Not(Box::new(a)), span })
        }
        Tok::LParen => {
            p.next();
            let inner = qs_iff(p)?;
            p.expect(Tok::RParen)?;
            Ok(inner)
        }
        Tok::Ident(name) => match name.as_str() {
            "E" => {
                p.next();
                let psi = qp_unary(p)?;
                Ok(QState { node: super::qctl::QStateNode::Exists(Box::new(psi)), span })
            }
            "A" => {
                p.next();
                let psi = qp_unary(p)?;
                let mut phi = QState::forall_path(psi);
                phi.span = span;
                Ok(phi)
            }
            "exists" | "forall" => {
                p.next();
                // quantified atoms may be fresh names, so no signature check
                let (ap, _aspan) = p.ident("atom")?;
                p.expect(Tok::Colon)?;
                let obs = obs_set(p)?;
                p.expect(Tok::Dot)?;
                let body = qs_iff(p)?; // maximal scope
                let mut phi = if name == "exists" {
                    QState::quant(ap, obs, body)
                } else {
                    QState::forall_quant(ap, obs, body)
                };
                phi.span = span;
                Ok(phi)
            }
            "true" => {
                p.next();
                Ok(QState { node: super::qctl::QStateNode::True, span })
            }
            "false" => {
                p.next();
                Ok(QState::not(QState { node: super::qctl::QStateNode::True, span }))
            }
            "X" | "F" | "G" => Err(ParseError::new(
                span,
                format!("`{name}` is a path operator; state position expects a state formula"),
            )),
            "U" => Err(ParseError::new(span, "`U` needs a left operand")),
            _ => {
                p.next();
                p.sig.check("atom", &p.sig.atoms, &name, span)?;
                Ok(QState { node: super::qctl::QStateNode::Atom(name), span })
            }
        },
        t => Err(ParseError::new(span, format!("expected a state formula, found {t}"))),
    }
}

fn obs_set(p: &mut P) -> Result<BTreeSet<usize>, ParseError> {
    p.expect(Tok::LBrace)?;
    let mut out = BTreeSet::new();
    if *p.peek() == Tok::RBrace {
        p.next();
        return Ok(out);
    }
    loop {
        match p.next() {
            (Tok::Int(i), span) => {
                if i == 0 {
                    return Err(ParseError::new(span, "component indices start at 1"));
                }
                if let Some(n) = p.sig.components {
                    if i > n {
                        return Err(ParseError::new(
                            span,
                            format!("component index {i} exceeds the declared arity {n}"),
                        ));
                    }
                }
                out.insert(i);
            }
            (t, span) => return Err(ParseError::new(span, format!("expected a component index, found {t}"))),
        }
        match p.next() {
            (Tok::Comma, _) => continue,
            (Tok::RBrace, _) => break,
            (t, span) => return Err(ParseError::new(span, format!("expected `,` or `}}`, found {t}"))),
        }
    }
    Ok(out)
}

// path formulas: same precedence ladder, plus X/F/G/U, with embedded
// state formulas at the leaves

fn qp_iff(p: &mut P) -> Result<QPath, ParseError> {
    let mut lhs = qp_implies(p)?;
    while *p.peek() == Tok::DArrow {
        p.next();
        let rhs = qp_implies(p)?;
        let fwd = QPath::implies(lhs.clone(), rhs.clone());
        let back = QPath::implies(rhs, lhs);
        lhs = QPath::and(fwd, back);
    }
    Ok(lhs)
}

fn qp_implies(p: &mut P) -> Result<QPath, ParseError> {
    let lhs = qp_or(p)?;
    if *p.peek() == Tok::Arrow {
        p.next();
        let rhs = qp_implies(p)?;
        return Ok(QPath::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn qp_or(p: &mut P) -> Result<QPath, ParseError> {
    let mut lhs = qp_and(p)?;
    while *p.peek() == Tok::Pipe {
        p.next();
        let rhs = qp_and(p)?;
        lhs = QPath::or(lhs, rhs);
    }
    Ok(lhs)
}

fn qp_and(p: &mut P) -> Result<QPath, ParseError> {
    let mut lhs = qp_until(p)?;
    while *p.peek() == Tok::Amp {
        p.next();
        let rhs = qp_until(p)?;
        lhs = QPath::and(lhs, rhs);
    }
    Ok(lhs)
}

fn qp_until(p: &mut P) -> Result<QPath, ParseError> {
    let lhs = qp_unary(p)?;
    if p.at_keyword("U") {
        p.next();
        let rhs = qp_until(p)?;
        return Ok(QPath::until(lhs, rhs));
    }
    Ok(lhs)
}

fn qp_unary(p: &mut P) -> Result<QPath, ParseError> {
    let span = p.span();
    match p.peek().clone() {
        Tok::Bang => {
            p.next();
            let a = qp_unary(p)?;
            Ok(QPath::not(a))
        }
        Tok::LParen => {
            p.next();
            let inner = qp_iff(p)?;
            p.expect(Tok::RParen)?;
            Ok(inner)
        }
        Tok::Ident(name) => match name.as_str() {
            "X" => {
                p.next();
                Ok(QPath::next(qp_unary(p)?))
            }
            "F" => {
                p.next();
                Ok(QPath::eventually(qp_unary(p)?))
            }
            "G" => {
                p.next();
                Ok(QPath::always(qp_unary(p)?))
            }
            "U" => Err(ParseError::new(span, "`U` needs a left operand")),
            // anything else starts a state formula (E, A, exists, atoms…)
            _ => Ok(QPath::state(qs_unary(p)?)),
        },
        _ => Ok(QPath::state(qs_unary(p)?)),
    }
}
