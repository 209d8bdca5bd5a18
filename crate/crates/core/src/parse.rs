//! Lexer and recursive-descent parser for process terms, conditions and data terms.

use std::collections::BTreeSet;

use logos::Logos;
use thiserror::Error;

use crate::data::DataSpec;
use crate::terms::*;

#[derive(Logos, Clone, Debug, PartialEq)]
#[logos(skip r"[ \t\r\n]+")]
#[logos(skip r"#[^\n]*")]
enum Tok {
    #[regex(r"[A-Za-z_][A-Za-z0-9_']*", |lex| lex.slice().to_string())]
    Ident(String),
    #[regex(r"[0-9]+", |lex| lex.slice().parse::<i64>().ok())]
    Num(i64),
    #[regex(r"[01]b", |lex| lex.slice().starts_with('1'))]
    Bit(bool),
    #[token(":->")]
    Arrow,
    #[token(":=")]
    Assign,
    #[token(":")]
    Colon,
    #[token("||_")]
    LeftMerge,
    #[token("||")]
    Par,
    #[token("|")]
    Comm,
    #[token("+")]
    Plus,
    #[token("-")]
    Minus,
    #[token("*")]
    Star,
    #[token(".")]
    Dot,
    #[token("(")]
    LParen,
    #[token(")")]
    RParen,
    #[token("{")]
    LBrace,
    #[token("}")]
    RBrace,
    #[token(",")]
    Comma,
    #[token("=>")]
    Implies,
    #[token("=")]
    Eq,
    #[token("!=")]
    Ne,
    #[token("<=")]
    Le,
    #[token(">=")]
    Ge,
    #[token("<")]
    Lt,
    #[token(">")]
    Gt,
    #[token("~")]
    Tilde,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Bit(b) => format!("`{}b`", u8::from(*b)),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unexpected character")]
    Lex,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown flexible variable `{0}`")]
    UnknownFlex(String),
    #[error("sort error: {0}")]
    Sort(String),
    #[error("mixing `{0}` and `{1}` needs parentheses")]
    MixedOps(String, String),
    #[error("guarded command used as operand needs parentheses")]
    BareGuard,
    #[error("guard condition must be one-state")]
    TwoStateGuard,
    #[error("trailing input")]
    Trailing,
}

/// Names known to the parser.
#[derive(Clone, Debug, Default)]
pub struct ParseCtx {
    pub flex_vars: BTreeSet<Var>,
    pub actions: BTreeSet<ActName>,
    pub ordinal_vars: BTreeSet<Var>,
}

impl ParseCtx {
    pub fn from_spec(spec: &DataSpec) -> Self {
        ParseCtx {
            flex_vars: spec.flex_vars.iter().cloned().collect(),
            actions: spec.actions.clone(),
            ordinal_vars: BTreeSet::new(),
        }
    }

    pub fn with_ordinal_vars<'a, I: IntoIterator<Item = &'a str>>(mut self, names: I) -> Self {
        self.ordinal_vars.extend(names.into_iter().map(Var::new));
        self
    }
}

pub fn parse_proc(text: &str, ctx: &ParseCtx) -> Result<Proc, ParseError> {
    let mut p = Parser::new(text, ctx)?;
    let t = p.proc_alt()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_cond(text: &str, ctx: &ParseCtx) -> Result<Cond, ParseError> {
    let mut p = Parser::new(text, ctx)?;
    let c = p.cond0()?;
    p.finish()?;
    Ok(c)
}

pub fn parse_data(text: &str, ctx: &ParseCtx) -> Result<DataTerm, ParseError> {
    let mut p = Parser::new(text, ctx)?;
    let d = p.data_add()?;
    p.finish()?;
    Ok(d)
}

pub fn parse_valuation(text: &str, ctx: &ParseCtx) -> Result<Valuation, ParseError> {
    let mut p = Parser::new(text, ctx)?;
    let v = p.valuation()?;
    p.finish()?;
    Ok(v)
}

const KEYWORDS: &[&str] = &[
    "delta", "eps", "true", "false", "not", "or", "and", "exists", "forall", "encap", "eval",
    "omega", "ord", "lt",
];

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a ParseCtx,
    scope: Vec<(Var, Sort)>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(text: &'a str, ctx: &'a ParseCtx) -> PResult<Self> {
        let mut toks = Vec::new();
        for (tok, span) in Tok::lexer(text).spanned() {
            match tok {
                Ok(t) => toks.push((t, span.start)),
                Err(()) => return Err(error_at(text, span.start, ParseErrorKind::Lex)),
            }
        }
        Ok(Parser { text, toks, pos: 0, ctx, scope: Vec::new() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.text.len(), |(_, o)| *o)
    }

    fn err<T>(&self, kind: ParseErrorKind) -> PResult<T> {
        Err(error_at(self.text, self.offset(), kind))
    }

    fn unexpected<T>(&self, expected: &str) -> PResult<T> {
        let found = self.peek().map_or("end of input".to_string(), Tok::describe);
        self.err(ParseErrorKind::Unexpected { expected: expected.to_string(), found })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(what)
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.unexpected(what),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.pos < self.toks.len() {
            return self.err(ParseErrorKind::Trailing);
        }
        Ok(())
    }

    // ---- processes

    fn proc_alt(&mut self) -> PResult<Proc> {
        let mut t = self.proc_group()?;
        while self.eat(&Tok::Plus) {
            let r = self.proc_group()?;
            t = alt(t, r);
        }
        Ok(t)
    }

    fn group_tok(&self) -> Option<&'static str> {
        match self.peek() {
            Some(Tok::Star) => Some("*"),
            Some(Tok::Par) => Some("||"),
            Some(Tok::LeftMerge) => Some("||_"),
            Some(Tok::Comm) => Some("|"),
            _ => None,
        }
    }

    fn proc_group(&mut self) -> PResult<Proc> {
        if let Some(c) = self.try_guard_cond() {
            if c.has_prev() {
                return self.err(ParseErrorKind::TwoStateGuard);
            }
            let body = self.proc_seq()?;
            if self.group_tok().is_some() {
                return self.err(ParseErrorKind::BareGuard);
            }
            return Ok(guard(c, body));
        }
        let mut t = self.proc_seq()?;
        let Some(op) = self.group_tok() else { return Ok(t) };
        while let Some(next) = self.group_tok() {
            if next != op {
                return self.err(ParseErrorKind::MixedOps(op.into(), next.into()));
            }
            self.pos += 1;
            if self.try_guard_cond().is_some() {
                return self.err(ParseErrorKind::BareGuard);
            }
            let r = self.proc_seq()?;
            t = match op {
                "*" => iter(t, r),
                "||" => par(t, r),
                "||_" => left_merge(t, r),
                _ => comm_merge(t, r),
            };
        }
        Ok(t)
    }

    /// Parses `cond :->` if present, otherwise leaves the position untouched.
    fn try_guard_cond(&mut self) -> Option<Cond> {
        let start = self.pos;
        if let Ok(c) = self.cond0() {
            if self.eat(&Tok::Arrow) {
                return Some(c);
            }
        }
        self.pos = start;
        None
    }

    fn proc_seq(&mut self) -> PResult<Proc> {
        let mut t = self.proc_atom()?;
        while self.eat(&Tok::Dot) {
            let r = self.proc_atom()?;
            t = seq(t, r);
        }
        Ok(t)
    }

    fn proc_atom(&mut self) -> PResult<Proc> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.proc_alt()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(s)) => match s.as_str() {
                "delta" => {
                    self.pos += 1;
                    Ok(dead())
                }
                "eps" => {
                    self.pos += 1;
                    Ok(empty())
                }
                "encap" => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(`")?;
                    self.expect(Tok::LBrace, "`{`")?;
                    let mut h = BTreeSet::new();
                    if !self.eat(&Tok::RBrace) {
                        loop {
                            h.insert(self.action_name()?);
                            if self.eat(&Tok::RBrace) {
                                break;
                            }
                            self.expect(Tok::Comma, "`,` or `}`")?;
                        }
                    }
                    self.expect(Tok::Comma, "`,`")?;
                    let t = self.proc_alt()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(encap(h, t))
                }
                "eval" => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(`")?;
                    let rho = self.valuation()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let t = self.proc_alt()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(eval(rho, t))
                }
                _ if self.peek_at(1) == Some(&Tok::Assign) => {
                    let v = Var::new(&s);
                    if !self.ctx.flex_vars.contains(&v) {
                        return self.err(ParseErrorKind::UnknownFlex(s));
                    }
                    self.pos += 2;
                    let e = self.data_add()?;
                    self.expect_data_sort(&e, Sort::Data)?;
                    Ok(atom(AtomicAction::Assign(v, e)))
                }
                _ => {
                    let a = self.action_name()?;
                    if self.eat(&Tok::LParen) {
                        let mut args = Vec::new();
                        loop {
                            let e = self.data_add()?;
                            args.push(e);
                            if self.eat(&Tok::RParen) {
                                break;
                            }
                            self.expect(Tok::Comma, "`,` or `)`")?;
                        }
                        Ok(atom(AtomicAction::Param(a, args)))
                    } else {
                        Ok(atom(AtomicAction::Plain(a)))
                    }
                }
            },
            _ => self.unexpected("a process term"),
        }
    }

    fn action_name(&mut self) -> PResult<ActName> {
        let s = self.ident("an action name")?;
        let a = ActName::new(&s);
        if !self.ctx.actions.contains(&a) {
            self.pos -= 1;
            return self.err(ParseErrorKind::UnknownAction(s));
        }
        Ok(a)
    }

    fn valuation(&mut self) -> PResult<Valuation> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut rho = Valuation::new();
        if self.eat(&Tok::RBrace) {
            return Ok(rho);
        }
        loop {
            let s = self.ident("a flexible variable")?;
            let v = Var::new(&s);
            if !self.ctx.flex_vars.contains(&v) {
                self.pos -= 1;
                return self.err(ParseErrorKind::UnknownFlex(s));
            }
            self.expect(Tok::Colon, "`:`")?;
            let neg = self.eat(&Tok::Minus);
            let n = match self.peek() {
                Some(Tok::Num(n)) => *n,
                _ => return self.unexpected("a numeral"),
            };
            self.pos += 1;
            rho.set(v, if neg { -n } else { n });
            if self.eat(&Tok::RBrace) {
                return Ok(rho);
            }
            self.expect(Tok::Comma, "`,` or `}`")?;
        }
    }

    // ---- conditions

    fn cond0(&mut self) -> PResult<Cond> {
        for (kw, universal) in [("exists", false), ("forall", true)] {
            if self.eat_kw(kw) {
                let x = Var::new(&self.ident("a bound variable")?);
                let sort = if self.eat(&Tok::Colon) {
                    if !self.eat_kw("ord") {
                        return self.unexpected("`ord`");
                    }
                    Sort::Ord
                } else {
                    Sort::Data
                };
                self.expect(Tok::Dot, "`.`")?;
                self.scope.push((x.clone(), sort));
                let body = self.cond0();
                self.scope.pop();
                let body = body?;
                return Ok(if universal { Cond::forall(x, sort, body) } else { Cond::exists(x, sort, body) });
            }
        }
        let a = self.cond1()?;
        if self.eat(&Tok::Implies) {
            let b = self.cond0()?;
            return Ok(Cond::implies(a, b));
        }
        Ok(a)
    }

    fn cond1(&mut self) -> PResult<Cond> {
        let mut c = self.cond2()?;
        while self.eat_kw("or") {
            let r = self.cond2()?;
            c = Cond::or(c, r);
        }
        Ok(c)
    }

    fn cond2(&mut self) -> PResult<Cond> {
        let mut c = self.cond3()?;
        while self.eat_kw("and") {
            let r = self.cond3()?;
            c = Cond::and(c, r);
        }
        Ok(c)
    }

    fn cond3(&mut self) -> PResult<Cond> {
        if self.eat_kw("not") {
            return Ok(Cond::not(self.cond3()?));
        }
        self.cond4()
    }

    fn cond4(&mut self) -> PResult<Cond> {
        if self.eat_kw("true") {
            return Ok(Cond::tt());
        }
        if self.eat_kw("false") {
            return Ok(Cond::False);
        }
        if self.peek() == Some(&Tok::LParen) {
            let start = self.pos;
            self.pos += 1;
            if let Ok(c) = self.cond0() {
                if self.eat(&Tok::RParen) {
                    return Ok(c);
                }
            }
            self.pos = start;
        }
        let at = self.pos;
        let a = self.data_add()?;
        let rel = match self.peek() {
            Some(t @ (Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge)) => t.clone(),
            _ => return self.unexpected("a comparison"),
        };
        self.pos += 1;
        let b = self.data_add()?;
        let (a, b) = coerce_ord(a, b);
        let (sa, sb) = (a.sort(), b.sort());
        if sa != sb {
            self.pos = at;
            return self.err(ParseErrorKind::Sort(format!("cannot compare {a} ({sa:?}) with {b} ({sb:?})")));
        }
        if rel != Tok::Eq && rel != Tok::Ne && sa == Sort::Bool {
            self.pos = at;
            return self.err(ParseErrorKind::Sort("booleans are not ordered".into()));
        }
        Ok(match rel {
            Tok::Eq => Cond::eq(a, b),
            Tok::Ne => Cond::ne(a, b),
            Tok::Lt => Cond::lt(a, b),
            Tok::Le => Cond::le(a, b),
            Tok::Gt => Cond::lt(b, a),
            _ => Cond::not(Cond::lt(a, b)),
        })
    }

    // ---- data terms

    fn expect_data_sort(&self, e: &DataTerm, s: Sort) -> PResult<()> {
        if e.sort() != s {
            return self.err(ParseErrorKind::Sort(format!("{e} is not of sort {s:?}")));
        }
        Ok(())
    }

    fn data_add(&mut self) -> PResult<DataTerm> {
        let mut t = self.data_mul()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => Op::Add,
                Some(Tok::Minus) => Op::Sub,
                _ => return Ok(t),
            };
            let save = self.pos;
            self.pos += 1;
            match self.data_mul() {
                Ok(r) => {
                    self.check_arith(&t, &r)?;
                    t = DataTerm::App(op, vec![t, r]);
                }
                Err(_) if self.operand_follows_as_proc(save) => {
                    self.pos = save;
                    return Ok(t);
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn data_mul(&mut self) -> PResult<DataTerm> {
        let mut t = self.data_unary()?;
        while self.peek() == Some(&Tok::Star) {
            let save = self.pos;
            self.pos += 1;
            match self.data_unary() {
                Ok(r) => {
                    self.check_arith(&t, &r)?;
                    t = DataTerm::App(Op::Mul, vec![t, r]);
                }
                Err(_) if self.operand_follows_as_proc(save) => {
                    self.pos = save;
                    return Ok(t);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(t)
    }

    /// After an operator at `save`, whether the next token starts a process rather than a datum.
    fn operand_follows_as_proc(&self, save: usize) -> bool {
        match self.toks.get(save + 1).map(|(t, _)| t) {
            Some(Tok::Ident(s)) => {
                matches!(s.as_str(), "delta" | "eps" | "encap" | "eval" | "true" | "false" | "not" | "exists" | "forall")
                    || self.ctx.actions.contains(&ActName::new(s))
                    || (self.ctx.flex_vars.contains(&Var::new(s))
                        && self.toks.get(save + 2).map(|(t, _)| t) == Some(&Tok::Assign))
            }
            Some(Tok::LParen) => true,
            _ => false,
        }
    }

    fn check_arith(&self, a: &DataTerm, b: &DataTerm) -> PResult<()> {
        if a.sort() != Sort::Data || b.sort() != Sort::Data {
            return self.err(ParseErrorKind::Sort(format!("arithmetic on {a} and {b}")));
        }
        Ok(())
    }

    fn data_unary(&mut self) -> PResult<DataTerm> {
        if self.peek() == Some(&Tok::Minus) {
            if let Some(Tok::Num(n)) = self.peek_at(1) {
                let n = *n;
                self.pos += 2;
                return Ok(DataTerm::Num(-n));
            }
            self.pos += 1;
            return self.unexpected("a numeral");
        }
        self.data_atom()
    }

    fn data_atom(&mut self) -> PResult<DataTerm> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(DataTerm::Num(n))
            }
            Some(Tok::Bit(b)) => {
                self.pos += 1;
                Ok(DataTerm::Bit(b))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.data_add()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(s)) => match s.as_str() {
                "omega" => {
                    self.pos += 1;
                    Ok(DataTerm::OrdLit(OrdValue::Omega))
                }
                "ord" => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(`")?;
                    let e = self.data_add()?;
                    self.expect_data_sort(&e, Sort::Data)?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(DataTerm::ord(e))
                }
                "lt" => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(`")?;
                    let a = self.data_add()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let b = self.data_add()?;
                    self.expect(Tok::RParen, "`)`")?;
                    let (a, b) = coerce_ord(a, b);
                    if a.sort() != b.sort() || a.sort() == Sort::Bool {
                        return self.err(ParseErrorKind::Sort(format!("lt({a}, {b})")));
                    }
                    Ok(DataTerm::App(Op::Lt, vec![a, b]))
                }
                _ if KEYWORDS.contains(&s.as_str()) => self.unexpected("a data term"),
                _ => {
                    let v = Var::new(&s);
                    if self.ctx.actions.contains(&ActName::new(&s)) {
                        return self.unexpected("a data term");
                    }
                    self.pos += 1;
                    if self.ctx.flex_vars.contains(&v) {
                        if self.eat(&Tok::Tilde) {
                            return Ok(DataTerm::Prev(v));
                        }
                        return Ok(DataTerm::Flex(v));
                    }
                    if self.peek() == Some(&Tok::Tilde) {
                        self.pos -= 1;
                        return self.err(ParseErrorKind::UnknownFlex(s));
                    }
                    let sort = self
                        .scope
                        .iter()
                        .rev()
                        .find(|(x, _)| *x == v)
                        .map(|(_, s)| *s)
                        .unwrap_or(if self.ctx.ordinal_vars.contains(&v) { Sort::Ord } else { Sort::Data });
                    Ok(DataTerm::Bound(v, sort))
                }
            },
            _ => self.unexpected("a data term"),
        }
    }
}

fn coerce_ord(a: DataTerm, b: DataTerm) -> (DataTerm, DataTerm) {
    let lift = |t: DataTerm| match t {
        DataTerm::Num(n) if n >= 0 => DataTerm::OrdLit(OrdValue::Fin(n as u64)),
        other => other,
    };
    match (a.sort(), b.sort()) {
        (Sort::Ord, Sort::Data) => (a, lift(b)),
        (Sort::Data, Sort::Ord) => (lift(a), b),
        _ => (a, b),
    }
}

fn error_at(text: &str, offset: usize, kind: ParseErrorKind) -> ParseError {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError { offset, line, col, kind }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ParseCtx {
        ParseCtx::from_spec(&DataSpec::default_spec())
    }

    #[test]
    fn basic_shapes() {
        let c = ctx();
        assert_eq!(*parse_proc("delta", &c).unwrap(), ProcTerm::Dead);
        let t = parse_proc("(i := i+1) . (i := i+1) || (i := 0)", &c).unwrap();
        let inc = assign("i", DataTerm::add(DataTerm::flex("i"), DataTerm::Num(1)));
        assert_eq!(t, par(seq(inc.clone(), inc), assign("i", DataTerm::Num(0))));
        let g = parse_proc("(i > 0) :-> (i := 2)", &c).unwrap();
        assert_eq!(g, guard(Cond::lt(DataTerm::Num(0), DataTerm::flex("i")), assign("i", DataTerm::Num(2))));
    }

    #[test]
    fn greedy_assignment_stops_at_process() {
        let c = ctx();
        let t = parse_proc("i := 0 . a(j)", &c).unwrap();
        let expected = seq(
            assign("i", DataTerm::Num(0)),
            atom(AtomicAction::Param(ActName::new("a"), vec![DataTerm::flex("j")])),
        );
        assert_eq!(t, expected);
        let t = parse_proc("i := 1 + a", &c).unwrap();
        assert_eq!(t, alt(assign("i", DataTerm::Num(1)), act("a")));
    }

    #[test]
    fn errors_are_positioned() {
        let c = ctx();
        let e = parse_proc("a . zz", &c).unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        assert!(matches!(e.kind, ParseErrorKind::UnknownAction(_)));
        assert!(matches!(parse_proc("k := 1", &c).unwrap_err().kind, ParseErrorKind::UnknownFlex(_)));
        assert!(matches!(parse_proc("a || b * c", &c).unwrap_err().kind, ParseErrorKind::MixedOps(..)));
        assert!(matches!(parse_proc("i = 0 :-> a || b", &c).unwrap_err().kind, ParseErrorKind::BareGuard));
        assert!(matches!(parse_cond("i = 1b", &c).unwrap_err().kind, ParseErrorKind::Sort(_)));
        assert!(matches!(parse_proc("i~ = 0 :-> a", &c).unwrap_err().kind, ParseErrorKind::TwoStateGuard));
    }

    #[test]
    fn conditions_and_sugar() {
        let c = ctx();
        let g = parse_cond("i = i~ + 1 or i = 0", &c).unwrap();
        assert_eq!(g.to_string(), "i = i~ + 1 or i = 0");
        let f = parse_cond("forall X . X <= 3 => exists Y . Y = X", &c).unwrap();
        assert_eq!(parse_cond(&f.to_string(), &c).unwrap(), f);
        let c2 = c.clone().with_ordinal_vars(["alpha"]);
        let w = parse_cond("(i = 0 => alpha = omega) and (not i = 0 => alpha = ord(j))", &c2).unwrap();
        assert_eq!(parse_cond(&w.to_string(), &c2).unwrap(), w);
        let z = parse_cond("exists a':ord . a' <= alpha and a' = 0", &c2).unwrap();
        assert_eq!(parse_cond(&z.to_string(), &c2).unwrap(), z);
    }

    #[test]
    fn print_parse_round_trip() {
        let c = ctx();
        for src in [
            "a . eps + (false :-> b)",
            "true :-> a . eps + delta",
            "(a + b) . c * (i := i - -1)",
            "encap({a, b}, a || b) . eval({i:0, j:-1}, i := i + 1)",
            "(a || b) || c",
            "a || (b || c)",
            "a(i * (-1), 1b) | b",
            "(i = 0 or j != 2 :-> a) + (not (i < j) :-> b . c)",
        ] {
            let t = parse_proc(src, &c).unwrap();
            let printed = t.to_string();
            assert_eq!(parse_proc(&printed, &c).unwrap(), t, "{src} printed as {printed}");
        }
    }
}
