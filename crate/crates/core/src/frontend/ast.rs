//! Surface syntax tree.

use crate::diag::Loc;
use crate::types::Type;
use crate::value::Value;

#[derive(Debug, Clone, Copy)]
pub enum Literal {
    Unit,
    Bool(bool),
    Int(i64),
    Float(f64),
}

impl PartialEq for Literal {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Literal::Unit, Literal::Unit) => true,
            (Literal::Bool(a), Literal::Bool(b)) => a == b,
            (Literal::Int(a), Literal::Int(b)) => a == b,
            (Literal::Float(a), Literal::Float(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Literal {
    pub fn ty(&self) -> Type {
        match self {
            Literal::Unit => Type::Unit,
            Literal::Bool(_) => Type::Bool,
            Literal::Int(_) => Type::Int,
            Literal::Float(_) => Type::Float,
        }
    }

    pub fn value(&self) -> Value {
        match *self {
            Literal::Unit => Value::Unit,
            Literal::Bool(b) => Value::Bool(b),
            Literal::Int(i) => Value::Int(i),
            Literal::Float(x) => Value::Float(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub loc: Loc,
    /// Filled in by type inference.
    pub ty: Option<Type>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Var(String),
    Const(Literal),
    /// Always at least two elements.
    Tuple(Vec<Expr>),
    Pre(Box<Expr>),
    /// `e1 -> e2`
    Arrow(Box<Expr>, Box<Expr>),
    /// `e1 fby e2`
    Fby(Box<Expr>, Box<Expr>),
    /// Application of a top-level step, prototype or builtin by name.
    App(String, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    None,
    Some(Box<Expr>),
    /// `either e1 or e2`
    Either(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, loc: Loc) -> Self {
        Expr { kind, loc, ty: None }
    }

    /// The inferred type; panics when called before inference.
    pub fn ty(&self) -> &Type {
        self.ty.as_ref().expect("expression typed before use")
    }

    /// Visits this expression and all sub-expressions, parents first.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn walk_mut(&mut self, f: &mut dyn FnMut(&mut Expr)) {
        f(self);
        for c in self.children_mut() {
            c.walk_mut(f);
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Var(_) | ExprKind::Const(_) | ExprKind::None => vec![],
            ExprKind::Tuple(es) => es.iter().collect(),
            ExprKind::Pre(e) | ExprKind::Some(e) | ExprKind::App(_, e) => vec![e],
            ExprKind::Arrow(a, b) | ExprKind::Fby(a, b) | ExprKind::Either(a, b) => vec![a, b],
            ExprKind::If(c, t, e) => vec![c, t, e],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Expr> {
        match &mut self.kind {
            ExprKind::Var(_) | ExprKind::Const(_) | ExprKind::None => vec![],
            ExprKind::Tuple(es) => es.iter_mut().collect(),
            ExprKind::Pre(e) | ExprKind::Some(e) | ExprKind::App(_, e) => vec![e],
            ExprKind::Arrow(a, b) | ExprKind::Fby(a, b) | ExprKind::Either(a, b) => vec![a, b],
            ExprKind::If(c, t, e) => vec![c, t, e],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub kind: PatternKind,
    pub loc: Loc,
    pub ty: Option<Type>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatternKind {
    Var(String),
    Wildcard,
    /// Always at least two elements.
    Tuple(Vec<Pattern>),
}

impl Pattern {
    pub fn new(kind: PatternKind, loc: Loc) -> Self {
        Pattern { kind, loc, ty: None }
    }

    /// Bound variable names, left to right.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.kind {
            PatternKind::Var(v) => out.push(v),
            PatternKind::Wildcard => {}
            PatternKind::Tuple(ps) => ps.iter().for_each(|p| p.collect_vars(out)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub pattern: Pattern,
    pub expr: Expr,
    pub loc: Loc,
}

/// Surface type annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeExpr {
    Unit,
    Bool,
    Int,
    Float,
    Option(Box<TypeExpr>),
    Tuple(Vec<TypeExpr>),
    /// `'a`, stored without the tick.
    Var(String),
}

impl TypeExpr {
    /// Converts a ground semantic type back to syntax.
    pub fn from_type(ty: &Type) -> TypeExpr {
        match ty {
            Type::Unit => TypeExpr::Unit,
            Type::Bool => TypeExpr::Bool,
            Type::Int => TypeExpr::Int,
            Type::Float => TypeExpr::Float,
            Type::Option(t) => TypeExpr::Option(Box::new(TypeExpr::from_type(t))),
            Type::Tuple(ts) => TypeExpr::Tuple(ts.iter().map(TypeExpr::from_type).collect()),
            Type::Var(v) => TypeExpr::Var(format!("t{}", v)),
        }
    }
}

/// One entry of a step signature: `name : type` or `_ : type`.
#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    /// `None` for a wildcard.
    pub name: Option<String>,
    pub ty: TypeExpr,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepDecl {
    pub name: String,
    pub inputs: Vec<Param>,
    pub outputs: Vec<Param>,
    /// `None` for a prototype.
    pub body: Option<Vec<Equation>>,
    pub loc: Loc,
}

impl StepDecl {
    pub fn is_prototype(&self) -> bool {
        self.body.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDecl {
    pub name: String,
    pub ty: TypeExpr,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Port {
    pub channel: String,
    pub optional: bool,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeDecl {
    pub name: String,
    pub step: String,
    pub inputs: Vec<Port>,
    pub outputs: Vec<Port>,
    /// Release period in microseconds.
    pub period_us: u64,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub steps: Vec<StepDecl>,
    pub channels: Vec<ChannelDecl>,
    pub nodes: Vec<NodeDecl>,
}

impl Program {
    pub fn step(&self, name: &str) -> Option<&StepDecl> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn channel(&self, name: &str) -> Option<&ChannelDecl> {
        self.channels.iter().find(|c| c.name == name)
    }
}
