//! Syntax tree of an experiment file. Spans ride along in [`Spanned`] but are
//! ignored by equality, so a re-parsed pretty-print compares equal.

use std::fmt;

use crate::diag::Span;

#[derive(Clone, Debug)]
pub struct Spanned<T> {
    pub value: T,
    pub span: Span,
}

impl<T> Spanned<T> {
    pub fn new(value: T, span: Span) -> Self {
        Spanned { value, span }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

pub type Name = Spanned<String>;
pub type Num = Spanned<f64>;

/// A string literal. `raw` marks literals without escapes, whose text maps
/// byte for byte onto the source after the opening quote.
#[derive(Clone, Debug)]
pub struct Lit {
    pub text: String,
    pub span: Span,
    pub raw: bool,
}

impl PartialEq for Lit {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentSpec {
    pub items: Vec<Item>,
}

impl ExperimentSpec {
    pub fn decls(&self) -> impl Iterator<Item = &Decl> {
        self.items.iter().filter_map(|i| match i {
            Item::Decl(d) => Some(d),
            Item::Task(_) => None,
        })
    }

    pub fn tasks(&self) -> impl Iterator<Item = &Task> {
        self.items.iter().filter_map(|i| match i {
            Item::Task(t) => Some(t),
            Item::Decl(_) => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Decl(Decl),
    Task(Task),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub name: Name,
    pub body: DeclBody,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Seq,
    Scale,
    Family,
    Mollifier,
    Seminorm,
}

impl fmt::Display for DeclKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeclKind::Seq => "seq",
            DeclKind::Scale => "scale",
            DeclKind::Family => "family",
            DeclKind::Mollifier => "mollifier",
            DeclKind::Seminorm => "seminorm",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeclBody {
    Seq { expr: SeqExpr, certify: Option<Cert> },
    Scale(ScaleRef),
    Family(FamilyRef),
    Mollifier(Name),
    Seminorm(SeminormRef),
}

impl DeclBody {
    pub fn kind(&self) -> DeclKind {
        match self {
            DeclBody::Seq { .. } => DeclKind::Seq,
            DeclBody::Scale(_) => DeclKind::Scale,
            DeclBody::Family(_) => DeclKind::Family,
            DeclBody::Mollifier(_) => DeclKind::Mollifier,
            DeclBody::Seminorm(_) => DeclKind::Seminorm,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConvSrc {
    Expr(Lit),
    Heaviside,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeqExpr {
    /// An expression in `n` (scalar) or in `x` and `n` (smooth functions).
    Str(Lit),
    Num(Num),
    Ref(Name),
    /// `delta MOLLIFIER`.
    Delta(Name),
    /// `conv SOURCE MOLLIFIER`.
    Conv { source: ConvSrc, mollifier: Name },
    /// `const "expr in x"`: the constant embedding of a function.
    Const(Lit),
    Deriv(Box<SeqExpr>),
    Neg(Box<SeqExpr>),
    Bin { op: BinOp, lhs: Box<SeqExpr>, rhs: Box<SeqExpr> },
}

/// `certify (C, a[, b[, s, t]])`: `p(f_n) ~ C n^a (ln n)^b exp(s n^t)`.
#[derive(Clone, Debug)]
pub struct Cert {
    pub args: Vec<Num>,
    pub span: Span,
}

impl PartialEq for Cert {
    fn eq(&self, other: &Self) -> bool {
        self.args == other.args
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AsymRef {
    Power,
    Exponential,
    Expr(Lit),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScaleRef {
    Log,
    Power(Num),
    Egorov(Num),
    Asymptotic { family: AsymRef, m: Num },
    Custom { expr: Lit, from: Num },
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyRef {
    Power(Num),
    Egorov(Num),
    Asymptotic { family: AsymRef, count: Num },
    List(Vec<Name>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeminormRef {
    Abs,
    Sup { grid: Option<Num> },
    Sobolev { order: Num, lo: Num, hi: Num },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TaskKind {
    Classify,
    Distance,
    Equal,
    EmbedCheck,
    Family,
    Cauchy,
    VerifyProperties,
}

impl TaskKind {
    pub const ALL: [TaskKind; 7] = [
        TaskKind::Classify,
        TaskKind::Distance,
        TaskKind::Equal,
        TaskKind::EmbedCheck,
        TaskKind::Family,
        TaskKind::Cauchy,
        TaskKind::VerifyProperties,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Classify => "classify",
            TaskKind::Distance => "distance",
            TaskKind::Equal => "equal",
            TaskKind::EmbedCheck => "embed-check",
            TaskKind::Family => "family",
            TaskKind::Cauchy => "cauchy",
            TaskKind::VerifyProperties => "verify-properties",
        }
    }

    pub fn from_name(s: &str) -> Option<TaskKind> {
        TaskKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Members {
    List(Vec<Name>),
    Geometric(Num),
}

/// `{ members: ..., mu_max: N }`.
#[derive(Clone, Debug)]
pub struct CauchyBlock {
    pub members: Members,
    pub mu_max: Num,
    pub span: Span,
}

impl PartialEq for CauchyBlock {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.mu_max == other.mu_max
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Arg {
    Name(Name),
    Block(CauchyBlock),
}

impl Arg {
    pub fn span(&self) -> Span {
        match self {
            Arg::Name(n) => n.span,
            Arg::Block(b) => b.span,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OptValue {
    Num(Num),
    Name(Name),
}

impl OptValue {
    pub fn span(&self) -> Span {
        match self {
            OptValue::Num(n) => n.span,
            OptValue::Name(n) => n.span,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Opt {
    pub key: Name,
    pub value: OptValue,
}

/// `task KIND args... [key=value...];`. Arity and argument types are checked
/// during resolution, not by the parser.
#[derive(Clone, Debug)]
pub struct Task {
    pub kind: Spanned<TaskKind>,
    pub args: Vec<Arg>,
    pub options: Vec<Opt>,
    pub span: Span,
}

impl PartialEq for Task {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.args == other.args && self.options == other.options
    }
}
