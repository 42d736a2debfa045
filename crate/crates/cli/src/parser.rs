//! Recursive-descent parser. The first syntax error is fatal.
//!
//! ```text
//! spec     := item*
//! item     := decl | task
//! decl     := "seq" NAME "=" seqexpr ["certify" "(" NUM ("," NUM)* ")"] ";"
//!           | "scale" NAME "=" scale ";"
//!           | "family" NAME "=" family ";"
//!           | "mollifier" NAME "=" ("gaussian" | "bump") ";"
//!           | "seminorm" NAME "=" ("abs" | "sup" ["grid" NUM] | "sobolev" NUM NUM NUM) ";"
//! scale    := "log" | "power" NUM | "egorov" NUM | "asymptotic" asym NUM
//!           | "custom" STRING "from" NUM
//! family   := "power" NUM | "egorov" NUM | "asymptotic" asym NUM | "[" NAME ("," NAME)* "]"
//! asym     := "power" | "exponential" | STRING
//! seqexpr  := term (("+" | "-") term)*
//! term     := unary ("*" unary)*
//! unary    := "-" unary | "deriv" unary | atom
//! atom     := STRING | NUM | NAME | "(" seqexpr ")" | "delta" NAME
//!           | "conv" (STRING | "heaviside") NAME | "const" STRING
//! task     := "task" KIND (NAME | block | KEY "=" (NUM | NAME))* ";"
//! block    := "{" "members" ":" ("[" NAME ("," NAME)* "]" | "geometric" "(" NUM ")")
//!             "," "mu_max" ":" NUM "}"
//! ```

use crate::ast::*;
use crate::diag::{suggest, Diagnostic, Span};
use crate::lexer::{tokenize, Tok, Token};

const DECL_KEYWORDS: [&str; 6] = ["seq", "scale", "family", "mollifier", "seminorm", "task"];

/// Words that cannot name a declaration.
pub const RESERVED: [&str; 13] = [
    "seq", "scale", "family", "mollifier", "seminorm", "task", "certify", "delta", "conv", "const", "deriv",
    "projective", "inductive",
];

pub fn parse(src: &str) -> Result<ExperimentSpec, Diagnostic> {
    let toks = tokenize(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let mut items = Vec::new();
    while !p.at_eof() {
        items.push(p.item()?);
    }
    Ok(ExperimentSpec { items })
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Token {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)]
    }

    fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn join(&self, a: Span, b: Span) -> Span {
        Span::locate(self.src, a.offset, b.end() - a.offset)
    }

    fn unexpected(&self, what: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(t.span, format!("expected {what}, found {}", t.tok.describe()))
    }

    fn at_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn eat_punct(&mut self, c: char) -> bool {
        let hit = self.at_punct(c);
        if hit {
            self.bump();
        }
        hit
    }

    fn expect_punct(&mut self, c: char) -> PResult<Span> {
        if self.at_punct(c) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let hit = self.at_word(w);
        if hit {
            self.bump();
        }
        hit
    }

    fn expect_word(&mut self, w: &str) -> PResult<Span> {
        if self.at_word(w) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{w}`")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Name> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok(Name::new(s, self.bump().span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// An identifier possibly joined by adjacent hyphens, as in `embed-check`.
    fn compound(&mut self, what: &str) -> PResult<Name> {
        let mut name = self.ident(what)?;
        while self.at_punct('-')
            && self.peek().span.offset == name.span.end()
            && matches!(self.peek_at(1).tok, Tok::Ident(_))
            && self.peek_at(1).span.offset == name.span.end() + 1
        {
            self.bump();
            let next = self.ident(what)?;
            name = Name::new(format!("{}-{}", name.value, next.value), self.join(name.span, next.span));
        }
        Ok(name)
    }

    /// A declared name: not reserved.
    fn decl_name(&mut self) -> PResult<Name> {
        let n = self.ident("a name")?;
        if RESERVED.contains(&n.value.as_str()) {
            return Err(Diagnostic::error(n.span, format!("`{}` is a reserved word", n.value)));
        }
        Ok(n)
    }

    /// A number with an optional leading minus sign.
    fn number(&mut self) -> PResult<Num> {
        let start = self.peek().span;
        let neg = self.at_punct('-') && matches!(self.peek_at(1).tok, Tok::Number(_));
        if neg {
            self.bump();
        }
        match self.peek().tok {
            Tok::Number(v) => {
                let end = self.bump().span;
                Ok(Num::new(if neg { -v } else { v }, self.join(start, end)))
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn string(&mut self) -> PResult<Lit> {
        match &self.peek().tok {
            Tok::Str { text, raw } => {
                let (text, raw) = (text.clone(), *raw);
                Ok(Lit { text, raw, span: self.bump().span })
            }
            _ => Err(self.unexpected("a string")),
        }
    }

    fn name_list(&mut self) -> PResult<Vec<Name>> {
        self.expect_punct('[')?;
        let mut names = vec![self.ident("a name")?];
        while self.eat_punct(',') {
            if self.at_punct(']') {
                break;
            }
            names.push(self.ident("a name")?);
        }
        self.expect_punct(']')?;
        Ok(names)
    }

    fn item(&mut self) -> PResult<Item> {
        let kw = match &self.peek().tok {
            Tok::Ident(s) if DECL_KEYWORDS.contains(&s.as_str()) => s.clone(),
            Tok::Ident(s) => {
                let hint = suggest(s, DECL_KEYWORDS);
                return Err(self.unexpected("a declaration or `task`").with_suggestion(hint));
            }
            _ => return Err(self.unexpected("a declaration or `task`")),
        };
        self.bump();
        if kw == "task" {
            return Ok(Item::Task(self.task()?));
        }
        let name = self.decl_name()?;
        self.expect_punct('=')?;
        let body = match kw.as_str() {
            "seq" => {
                let expr = self.seq_expr()?;
                let certify = if self.at_word("certify") { Some(self.cert()?) } else { None };
                DeclBody::Seq { expr, certify }
            }
            "scale" => DeclBody::Scale(self.scale()?),
            "family" => DeclBody::Family(self.family()?),
            "mollifier" => DeclBody::Mollifier(self.ident("`gaussian` or `bump`")?),
            _ => DeclBody::Seminorm(self.seminorm()?),
        };
        self.expect_punct(';')?;
        Ok(Item::Decl(Decl { name, body }))
    }

    fn cert(&mut self) -> PResult<Cert> {
        let start = self.expect_word("certify")?;
        self.expect_punct('(')?;
        let mut args = vec![self.number()?];
        while self.eat_punct(',') {
            args.push(self.number()?);
        }
        let end = self.expect_punct(')')?;
        Ok(Cert { args, span: self.join(start, end) })
    }

    fn asym(&mut self) -> PResult<AsymRef> {
        if self.eat_word("power") {
            Ok(AsymRef::Power)
        } else if self.eat_word("exponential") {
            Ok(AsymRef::Exponential)
        } else if matches!(self.peek().tok, Tok::Str { .. }) {
            Ok(AsymRef::Expr(self.string()?))
        } else {
            Err(self.unexpected("`power`, `exponential` or a string"))
        }
    }

    fn scale(&mut self) -> PResult<ScaleRef> {
        const KINDS: [&str; 5] = ["log", "power", "egorov", "asymptotic", "custom"];
        let kw = self.ident("a scale kind")?;
        Ok(match kw.value.as_str() {
            "log" => ScaleRef::Log,
            "power" => ScaleRef::Power(self.number()?),
            "egorov" => ScaleRef::Egorov(self.number()?),
            "asymptotic" => ScaleRef::Asymptotic { family: self.asym()?, m: self.number()? },
            "custom" => {
                let expr = self.string()?;
                self.expect_word("from")?;
                ScaleRef::Custom { expr, from: self.number()? }
            }
            other => {
                return Err(Diagnostic::error(kw.span, format!("unknown scale kind `{other}`"))
                    .with_suggestion(suggest(other, KINDS)))
            }
        })
    }

    fn family(&mut self) -> PResult<FamilyRef> {
        const KINDS: [&str; 3] = ["power", "egorov", "asymptotic"];
        if self.at_punct('[') {
            return Ok(FamilyRef::List(self.name_list()?));
        }
        let kw = self.ident("a family kind or `[`")?;
        Ok(match kw.value.as_str() {
            "power" => FamilyRef::Power(self.number()?),
            "egorov" => FamilyRef::Egorov(self.number()?),
            "asymptotic" => FamilyRef::Asymptotic { family: self.asym()?, count: self.number()? },
            other => {
                return Err(Diagnostic::error(kw.span, format!("unknown family kind `{other}`"))
                    .with_suggestion(suggest(other, KINDS)))
            }
        })
    }

    fn seminorm(&mut self) -> PResult<SeminormRef> {
        const KINDS: [&str; 3] = ["abs", "sup", "sobolev"];
        let kw = self.ident("a seminorm kind")?;
        Ok(match kw.value.as_str() {
            "abs" => SeminormRef::Abs,
            "sup" => SeminormRef::Sup { grid: if self.eat_word("grid") { Some(self.number()?) } else { None } },
            "sobolev" => SeminormRef::Sobolev { order: self.number()?, lo: self.number()?, hi: self.number()? },
            other => {
                return Err(Diagnostic::error(kw.span, format!("unknown seminorm kind `{other}`"))
                    .with_suggestion(suggest(other, KINDS)))
            }
        })
    }

    fn seq_expr(&mut self) -> PResult<SeqExpr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_punct('+') {
                BinOp::Add
            } else if self.eat_punct('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = SeqExpr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
    }

    fn term(&mut self) -> PResult<SeqExpr> {
        let mut lhs = self.unary()?;
        while self.eat_punct('*') {
            let rhs = self.unary()?;
            lhs = SeqExpr::Bin { op: BinOp::Mul, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<SeqExpr> {
        if self.eat_punct('-') {
            Ok(SeqExpr::Neg(Box::new(self.unary()?)))
        } else if self.eat_word("deriv") {
            Ok(SeqExpr::Deriv(Box::new(self.unary()?)))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> PResult<SeqExpr> {
        match &self.peek().tok {
            Tok::Str { .. } => Ok(SeqExpr::Str(self.string()?)),
            Tok::Number(v) => {
                let v = *v;
                Ok(SeqExpr::Num(Num::new(v, self.bump().span)))
            }
            Tok::Punct('(') => {
                self.bump();
                let e = self.seq_expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Tok::Ident(w) => match w.as_str() {
                "delta" => {
                    self.bump();
                    Ok(SeqExpr::Delta(self.ident("a mollifier name")?))
                }
                "conv" => {
                    self.bump();
                    let source = if self.eat_word("heaviside") {
                        ConvSrc::Heaviside
                    } else if matches!(self.peek().tok, Tok::Str { .. }) {
                        ConvSrc::Expr(self.string()?)
                    } else {
                        return Err(self.unexpected("a string or `heaviside`"));
                    };
                    Ok(SeqExpr::Conv { source, mollifier: self.ident("a mollifier name")? })
                }
                "const" => {
                    self.bump();
                    Ok(SeqExpr::Const(self.string()?))
                }
                w if RESERVED.contains(&w) => Err(self.unexpected("a sequence expression")),
                _ => Ok(SeqExpr::Ref(self.ident("a name")?)),
            },
            _ => Err(self.unexpected("a sequence expression")),
        }
    }

    fn task(&mut self) -> PResult<Task> {
        let start = self.toks[self.pos - 1].span;
        let kw = self.compound("a task kind")?;
        let kind = TaskKind::from_name(&kw.value).ok_or_else(|| {
            Diagnostic::error(kw.span, format!("unknown task kind `{}`", kw.value))
                .with_suggestion(suggest(&kw.value, TaskKind::ALL.iter().map(|k| k.name())))
        })?;
        let mut args = Vec::new();
        let mut options = Vec::new();
        loop {
            match &self.peek().tok {
                Tok::Punct(';') => break,
                Tok::Punct('{') => args.push(Arg::Block(self.block()?)),
                Tok::Ident(_) if self.peek_at(1).tok == Tok::Punct('=') => {
                    let key = self.ident("an option name")?;
                    self.bump();
                    let value = match self.peek().tok {
                        Tok::Number(_) | Tok::Punct('-') => OptValue::Num(self.number()?),
                        _ => OptValue::Name(self.compound("an option value")?),
                    };
                    options.push(Opt { key, value });
                }
                Tok::Ident(_) => args.push(Arg::Name(self.ident("an argument")?)),
                _ => return Err(self.unexpected("a task argument or `;`")),
            }
        }
        let end = self.expect_punct(';')?;
        Ok(Task { kind: Spanned::new(kind, kw.span), args, options, span: self.join(start, end) })
    }

    fn block(&mut self) -> PResult<CauchyBlock> {
        let start = self.expect_punct('{')?;
        let mut members: Option<Members> = None;
        let mut mu_max: Option<Num> = None;
        loop {
            let key = self.ident("`members` or `mu_max`")?;
            self.expect_punct(':')?;
            let dup = || Diagnostic::error(key.span, format!("field `{}` given twice", key.value));
            match key.value.as_str() {
                "members" => {
                    if members.is_some() {
                        return Err(dup());
                    }
                    members = Some(if self.eat_word("geometric") {
                        self.expect_punct('(')?;
                        let m = self.number()?;
                        self.expect_punct(')')?;
                        Members::Geometric(m)
                    } else {
                        Members::List(self.name_list()?)
                    });
                }
                "mu_max" => {
                    if mu_max.is_some() {
                        return Err(dup());
                    }
                    mu_max = Some(self.number()?);
                }
                other => {
                    return Err(Diagnostic::error(key.span, format!("unknown field `{other}`"))
                        .with_suggestion(suggest(other, ["members", "mu_max"])))
                }
            }
            if !self.eat_punct(',') || self.at_punct('}') {
                break;
            }
        }
        let end = self.expect_punct('}')?;
        let span = self.join(start, end);
        match (members, mu_max) {
            (Some(members), Some(mu_max)) => Ok(CauchyBlock { members, mu_max, span }),
            (None, _) => Err(Diagnostic::error(span, "cauchy block needs `members`")),
            (_, None) => Err(Diagnostic::error(span, "cauchy block needs `mu_max`")),
        }
    }
}
