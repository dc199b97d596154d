//! Recursive-descent parser producing the surface AST.
//!
//! Expression precedence, loosest first: tuple comma, `->` (right),
//! `fby` (right), `||`, `&&`, comparisons, `+ -`, `* /`, prefix
//! `! - pre Some`, application. `if` and `either` extend as far right as
//! an `->`-level expression reaches.

use crate::builtins;
use crate::diag::{Diagnostic, Loc, Phase};

use super::ast::*;
use super::lexer::{Tok, Token};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub loc: Loc,
    pub found: String,
    pub expected: Vec<String>,
}

impl From<ParseError> for Diagnostic {
    fn from(e: ParseError) -> Self {
        Diagnostic::new(Phase::Parse, Some(e.loc), e.to_string())
    }
}

type PResult<T> = Result<T, ParseError>;

pub struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
}

/// Parses a full token stream into a program.
pub fn parse(tokens: &[Token]) -> PResult<Program> {
    let mut p = Parser { toks: tokens, pos: 0 };
    p.program()
}

/// Parses a single expression (used by tests and tools).
pub fn parse_expr(tokens: &[Token]) -> PResult<Expr> {
    let mut p = Parser { toks: tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos < tokens.len() {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(e)
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.tok)
    }

    fn loc(&self) -> Loc {
        match self.toks.get(self.pos) {
            Some(t) => t.loc,
            None => self.toks.last().map(|t| t.loc).unwrap_or_default(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError {
            loc: self.loc(),
            found: self.peek().map(|t| t.to_string()).unwrap_or_else(|| "end of input".into()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Loc> {
        let loc = self.loc();
        if self.eat(&tok) {
            Ok(loc)
        } else {
            Err(self.unexpected(&[&tok.to_string()]))
        }
    }

    fn ident(&mut self) -> PResult<(String, Loc)> {
        let loc = self.loc();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, loc))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut prog = Program::default();
        while let Some(t) = self.peek() {
            match t {
                Tok::KwStep => prog.steps.push(self.step()?),
                Tok::KwChannel => prog.channels.push(self.channel()?),
                Tok::KwNode => prog.nodes.push(self.node()?),
                _ => return Err(self.unexpected(&["'step'", "'channel'", "'node'"])),
            }
        }
        Ok(prog)
    }

    fn step(&mut self) -> PResult<StepDecl> {
        let loc = self.expect(Tok::KwStep)?;
        let (name, _) = self.ident()?;
        let inputs = self.params()?;
        self.expect(Tok::LongArrow)?;
        let outputs = self.params()?;
        let body = if self.eat(&Tok::LBrace) {
            let mut eqs = Vec::new();
            while !self.eat(&Tok::RBrace) {
                if self.peek().is_none() {
                    return Err(self.unexpected(&["'}'", "equation"]));
                }
                eqs.push(self.equation()?);
            }
            Some(eqs)
        } else {
            None
        };
        Ok(StepDecl { name, inputs, outputs, body, loc })
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        if self.eat(&Tok::Unit) {
            return Ok(Vec::new());
        }
        self.expect(Tok::LParen)?;
        let mut out = vec![self.param()?];
        while self.eat(&Tok::Comma) {
            out.push(self.param()?);
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn param(&mut self) -> PResult<Param> {
        let loc = self.loc();
        let name = match self.peek() {
            Some(Tok::Underscore) => {
                self.pos += 1;
                None
            }
            Some(Tok::Ident(_)) => Some(self.ident()?.0),
            _ => return Err(self.unexpected(&["identifier", "'_'"])),
        };
        self.expect(Tok::Colon)?;
        let ty = self.type_expr()?;
        Ok(Param { name, ty, loc })
    }

    fn type_expr(&mut self) -> PResult<TypeExpr> {
        let mut ty = match self.peek() {
            Some(Tok::Ident(s)) => {
                let t = match s.as_str() {
                    "unit" => TypeExpr::Unit,
                    "bool" => TypeExpr::Bool,
                    "int" => TypeExpr::Int,
                    "float" => TypeExpr::Float,
                    _ => return Err(self.unexpected(&["type"])),
                };
                self.pos += 1;
                t
            }
            Some(Tok::TickIdent(s)) => {
                let t = TypeExpr::Var(s.clone());
                self.pos += 1;
                t
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let mut items = vec![self.type_expr()?];
                while self.eat(&Tok::Comma) {
                    items.push(self.type_expr()?);
                }
                self.expect(Tok::RParen)?;
                if items.len() == 1 {
                    items.pop().unwrap()
                } else {
                    TypeExpr::Tuple(items)
                }
            }
            _ => return Err(self.unexpected(&["type"])),
        };
        while self.eat(&Tok::Question) {
            ty = TypeExpr::Option(Box::new(ty));
        }
        Ok(ty)
    }

    fn channel(&mut self) -> PResult<ChannelDecl> {
        let loc = self.expect(Tok::KwChannel)?;
        let (name, _) = self.ident()?;
        self.expect(Tok::Colon)?;
        let ty = self.type_expr()?;
        Ok(ChannelDecl { name, ty, loc })
    }

    fn node(&mut self) -> PResult<NodeDecl> {
        let loc = self.expect(Tok::KwNode)?;
        let (name, _) = self.ident()?;
        self.expect(Tok::KwImplements)?;
        let (step, _) = self.ident()?;
        let inputs = self.ports()?;
        self.expect(Tok::LongArrow)?;
        let outputs = self.ports()?;
        self.expect(Tok::KwEvery)?;
        let period_us = match self.peek() {
            Some(Tok::Duration(v, unit)) => {
                let us = v.checked_mul(unit.micros()).ok_or_else(|| ParseError {
                    loc: self.loc(),
                    found: "duration out of range".into(),
                    expected: vec!["duration".into()],
                })?;
                self.pos += 1;
                us
            }
            _ => return Err(self.unexpected(&["duration"])),
        };
        Ok(NodeDecl { name, step, inputs, outputs, period_us, loc })
    }

    fn ports(&mut self) -> PResult<Vec<Port>> {
        if self.eat(&Tok::Unit) {
            return Ok(Vec::new());
        }
        self.expect(Tok::LParen)?;
        let mut out = Vec::new();
        loop {
            let (channel, loc) = self.ident()?;
            let optional = self.eat(&Tok::Question);
            out.push(Port { channel, optional, loc });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn equation(&mut self) -> PResult<Equation> {
        let loc = self.loc();
        let pattern = self.pattern()?;
        self.expect(Tok::Assign)?;
        let expr = self.expr()?;
        self.expect(Tok::Semi)?;
        Ok(Equation { pattern, expr, loc })
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        let loc = self.loc();
        let mut items = vec![self.pattern_atom()?];
        while self.eat(&Tok::Comma) {
            items.push(self.pattern_atom()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Pattern::new(PatternKind::Tuple(items), loc) })
    }

    fn pattern_atom(&mut self) -> PResult<Pattern> {
        let loc = self.loc();
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Pattern::new(PatternKind::Var(self.ident()?.0), loc)),
            Some(Tok::Underscore) => {
                self.pos += 1;
                Ok(Pattern::new(PatternKind::Wildcard, loc))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let p = self.pattern()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            _ => Err(self.unexpected(&["identifier", "'_'", "'('"])),
        }
    }

    /// Full expression including tuples.
    pub fn expr(&mut self) -> PResult<Expr> {
        let loc = self.loc();
        let mut items = vec![self.arrow()?];
        while self.eat(&Tok::Comma) {
            items.push(self.arrow()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::new(ExprKind::Tuple(items), loc) })
    }

    fn arrow(&mut self) -> PResult<Expr> {
        let lhs = self.fby()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.arrow()?;
            let loc = lhs.loc;
            return Ok(Expr::new(ExprKind::Arrow(Box::new(lhs), Box::new(rhs)), loc));
        }
        Ok(lhs)
    }

    fn fby(&mut self) -> PResult<Expr> {
        let lhs = self.or()?;
        if self.eat(&Tok::KwFby) {
            let rhs = self.fby()?;
            let loc = lhs.loc;
            return Ok(Expr::new(ExprKind::Fby(Box::new(lhs), Box::new(rhs)), loc));
        }
        Ok(lhs)
    }

    fn binary(name: &str, lhs: Expr, rhs: Expr) -> Expr {
        let loc = lhs.loc;
        let arg = Expr::new(ExprKind::Tuple(vec![lhs, rhs]), loc);
        Expr::new(ExprKind::App(name.to_string(), Box::new(arg)), loc)
    }

    fn left_assoc(&mut self, ops: &[Tok], next: fn(&mut Self) -> PResult<Expr>) -> PResult<Expr> {
        let mut lhs = next(self)?;
        while let Some(t) = self.peek().filter(|t| ops.contains(t)).cloned() {
            self.pos += 1;
            let rhs = next(self)?;
            let name = builtins::binary_for_symbol(&symbol(&t)).expect("operator table");
            lhs = Self::binary(name, lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Expr> {
        self.left_assoc(&[Tok::OrOr], Self::and)
    }

    fn and(&mut self) -> PResult<Expr> {
        self.left_assoc(&[Tok::AndAnd], Self::cmp)
    }

    fn cmp(&mut self) -> PResult<Expr> {
        let lhs = self.add()?;
        let ops = [Tok::EqEq, Tok::NotEq, Tok::Lt, Tok::Le, Tok::Gt, Tok::Ge];
        if let Some(t) = self.peek().filter(|t| ops.contains(t)).cloned() {
            self.pos += 1;
            let rhs = self.add()?;
            let name = builtins::binary_for_symbol(&symbol(&t)).expect("operator table");
            return Ok(Self::binary(name, lhs, rhs));
        }
        Ok(lhs)
    }

    fn add(&mut self) -> PResult<Expr> {
        self.left_assoc(&[Tok::Plus, Tok::Minus], Self::mul)
    }

    fn mul(&mut self) -> PResult<Expr> {
        self.left_assoc(&[Tok::Star, Tok::Slash], Self::unary)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let loc = self.loc();
        let kind = match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                ExprKind::App("not".into(), Box::new(self.unary()?))
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                ExprKind::App("neg".into(), Box::new(self.unary()?))
            }
            Some(Tok::KwPre) => {
                self.pos += 1;
                ExprKind::Pre(Box::new(self.unary()?))
            }
            Some(Tok::KwSome) => {
                self.pos += 1;
                ExprKind::Some(Box::new(self.unary()?))
            }
            _ => return self.application(),
        };
        Ok(Expr::new(kind, loc))
    }

    fn starts_atom(tok: Option<&Tok>) -> bool {
        matches!(
            tok,
            Some(Tok::Ident(_) | Tok::Int(_) | Tok::Float(_) | Tok::Bool(_) | Tok::Unit | Tok::KwNone | Tok::LParen)
        )
    }

    fn application(&mut self) -> PResult<Expr> {
        if let Some(Tok::Ident(name)) = self.peek() {
            if Self::starts_atom(self.peek2()) {
                let name = name.clone();
                let loc = self.loc();
                self.pos += 1;
                let arg = self.atom()?;
                return Ok(Expr::new(ExprKind::App(name, Box::new(arg)), loc));
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Expr> {
        let loc = self.loc();
        let kind = match self.peek() {
            Some(Tok::Ident(_)) => ExprKind::Var(self.ident()?.0),
            Some(Tok::Int(i)) => {
                let i = *i;
                self.pos += 1;
                ExprKind::Const(Literal::Int(i))
            }
            Some(Tok::Float(x)) => {
                let x = *x;
                self.pos += 1;
                ExprKind::Const(Literal::Float(x))
            }
            Some(Tok::Bool(b)) => {
                let b = *b;
                self.pos += 1;
                ExprKind::Const(Literal::Bool(b))
            }
            Some(Tok::Unit) => {
                self.pos += 1;
                ExprKind::Const(Literal::Unit)
            }
            Some(Tok::KwNone) => {
                self.pos += 1;
                ExprKind::None
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            Some(Tok::KwIf) => {
                self.pos += 1;
                let c = self.arrow()?;
                self.expect(Tok::KwThen)?;
                let t = self.arrow()?;
                self.expect(Tok::KwElse)?;
                let e = self.arrow()?;
                ExprKind::If(Box::new(c), Box::new(t), Box::new(e))
            }
            Some(Tok::KwEither) => {
                self.pos += 1;
                let a = self.arrow()?;
                self.expect(Tok::KwOr)?;
                let b = self.arrow()?;
                ExprKind::Either(Box::new(a), Box::new(b))
            }
            _ => return Err(self.unexpected(&["expression"])),
        };
        Ok(Expr::new(kind, loc))
    }
}

fn symbol(t: &Tok) -> String {
    match t {
        Tok::Plus => "+",
        Tok::Minus => "-",
        Tok::Star => "*",
        Tok::Slash => "/",
        Tok::AndAnd => "&&",
        Tok::OrOr => "||",
        Tok::EqEq => "==",
        Tok::NotEq => "!=",
        Tok::Lt => "<",
        Tok::Le => "<=",
        Tok::Gt => ">",
        Tok::Ge => ">=",
        _ => "",
    }
    .to_string()
}
