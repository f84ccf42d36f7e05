use std::sync::Arc;

use indexmap::IndexMap;

use super::lexer::{lex, Loc, Tok};
use super::{Atom, Binder, Clause, Goal, ParseError, Program, StrengthenDirective};
use crate::kernel::{normalize, Signature, Symbol, Term, Ty};

#[derive(Clone, Debug)]
enum Expr {
    Id(String, Loc),
    App(Box<Expr>, Box<Expr>),
    Lam(String, Box<Expr>, Loc),
    True(Loc),
    And(Box<Expr>, Box<Expr>),
    Imp(Box<Expr>, Box<Expr>, Loc),
    Pi(String, Option<Ty>, Box<Expr>, Loc),
}

impl Expr {
    fn loc(&self) -> Loc {
        match self {
            Expr::Id(_, l) | Expr::Lam(_, _, l) | Expr::True(l) | Expr::Imp(_, _, l) | Expr::Pi(_, _, _, l) => *l,
            Expr::App(f, _) => f.loc(),
            Expr::And(a, _) => a.loc(),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Loc)>,
    pos: usize,
    stop: Option<&'static str>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, stop: None })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn loc(&self) -> Loc {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Loc) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let l = self.loc();
        Err(ParseError::Syntax { line: l.line, col: l.col, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> PResult<Loc> {
        if *self.peek() == t {
            Ok(self.bump().1)
        } else {
            self.error(format!("expected {}, found {}", t.describe(), self.peek().describe()))
        }
    }

    fn ident(&mut self) -> PResult<(String, Loc)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let l = self.bump().1;
                Ok((s, l))
            }
            t => self.error(format!("expected identifier, found {}", t.describe())),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            t => self.error(format!("expected `{kw}`, found {}", t.describe())),
        }
    }

    fn ident_list(&mut self) -> PResult<Vec<(String, Loc)>> {
        let mut v = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            v.push(self.ident()?);
        }
        Ok(v)
    }

    fn ty(&mut self) -> PResult<Ty> {
        let lhs = match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ty::atom(s)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                t
            }
            t => return self.error(format!("expected type, found {}", t.describe())),
        };
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(Ty::arrow(lhs, self.ty()?))
        } else {
            Ok(lhs)
        }
    }

    fn formula(&mut self) -> PResult<Expr> {
        let lhs = self.conj()?;
        if *self.peek() == Tok::Imp {
            let l = self.bump().1;
            let rhs = self.formula()?;
            return Ok(Expr::Imp(Box::new(lhs), Box::new(rhs), l));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> PResult<Expr> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.conj()?;
            return Ok(Expr::And(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Pi {
            let l = self.bump().1;
            let (name, _) = self.ident()?;
            let ann = if *self.peek() == Tok::Colon {
                self.bump();
                Some(self.ty()?)
            } else {
                None
            };
            self.expect(Tok::Backslash)?;
            let body = self.formula()?;
            return Ok(Expr::Pi(name, ann, Box::new(body), l));
        }
        self.app()
    }

    fn starts_primary(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => self.stop != Some(s.as_str()),
            Tok::LParen | Tok::True => true,
            _ => false,
        }
    }

    fn bare_lambda_ahead(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_)) && *self.peek2() == Tok::Backslash
    }

    fn app(&mut self) -> PResult<Expr> {
        let bare = self.bare_lambda_ahead();
        let mut acc = self.primary()?;
        if bare {
            return Ok(acc);
        }
        while self.starts_primary() {
            let bare = self.bare_lambda_ahead();
            let arg = self.primary()?;
            acc = Expr::App(Box::new(acc), Box::new(arg));
            if bare {
                break;
            }
        }
        Ok(acc)
    }

    fn primary(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Ident(s) if self.stop == Some(s.as_str()) => self.error(format!("expected term, found `{s}`")),
            Tok::Ident(s) => {
                let l = self.bump().1;
                if *self.peek() == Tok::Backslash {
                    self.bump();
                    let body = self.formula()?;
                    return Ok(Expr::Lam(s, Box::new(body), l));
                }
                Ok(Expr::Id(s, l))
            }
            Tok::True => Ok(Expr::True(self.bump().1)),
            Tok::LParen => {
                self.bump();
                let saved = self.stop.take();
                let e = self.formula()?;
                self.stop = saved;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            t => self.error(format!("expected term, found {}", t.describe())),
        }
    }
}

// ---- elaboration ---------------------------------------------------------

#[derive(Clone, Debug)]
enum IType {
    Var(usize),
    Atom(Symbol),
    Arrow(Box<IType>, Box<IType>),
}

impl IType {
    fn from_ty(t: &Ty) -> IType {
        match t {
            Ty::Atom(n) => IType::Atom(n.clone()),
            Ty::Arrow(a, b) => IType::Arrow(Box::new(IType::from_ty(a)), Box::new(IType::from_ty(b))),
        }
    }
}

#[derive(Default)]
struct Infer {
    bindings: Vec<Option<IType>>,
}

impl Infer {
    fn fresh(&mut self) -> IType {
        self.bindings.push(None);
        IType::Var(self.bindings.len() - 1)
    }

    fn walk(&self, t: &IType) -> IType {
        let mut cur = t.clone();
        while let IType::Var(v) = cur {
            match &self.bindings[v] {
                Some(b) => cur = b.clone(),
                None => return IType::Var(v),
            }
        }
        cur
    }

    fn occurs(&self, v: usize, t: &IType) -> bool {
        match self.walk(t) {
            IType::Var(w) => v == w,
            IType::Atom(_) => false,
            IType::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
        }
    }

    fn unify(&mut self, a: &IType, b: &IType) -> bool {
        match (self.walk(a), self.walk(b)) {
            (IType::Var(v), IType::Var(w)) if v == w => true,
            (IType::Var(v), t) | (t, IType::Var(v)) => {
                if self.occurs(v, &t) {
                    return false;
                }
                self.bindings[v] = Some(t);
                true
            }
            (IType::Atom(x), IType::Atom(y)) => x == y,
            (IType::Arrow(a1, b1), IType::Arrow(a2, b2)) => self.unify(&a1, &a2) && self.unify(&b1, &b2),
            _ => false,
        }
    }

    fn resolve(&self, t: &IType) -> Option<Ty> {
        match self.walk(t) {
            IType::Var(_) => None,
            IType::Atom(n) => Some(Ty::Atom(n)),
            IType::Arrow(a, b) => Some(Ty::arrow(self.resolve(&a)?, self.resolve(&b)?)),
        }
    }

    fn show(&self, t: &IType) -> String {
        match self.walk(t) {
            IType::Var(v) => format!("?{v}"),
            IType::Atom(n) => n.to_string(),
            IType::Arrow(a, b) => match self.walk(&a) {
                IType::Arrow(..) => format!("({}) -> {}", self.show(&a), self.show(&b)),
                _ => format!("{} -> {}", self.show(&a), self.show(&b)),
            },
        }
    }
}

enum ETerm {
    Const(Symbol, Ty),
    Local(Symbol, IType),
    Bound(u32, IType),
    Abs(Symbol, IType, Box<ETerm>),
    App(Box<ETerm>, Box<ETerm>),
}

enum EForm {
    Top,
    Atom(Symbol, Vec<ETerm>),
    And(Box<EForm>, Box<EForm>),
    Imp(Box<EForm>, Box<EForm>),
    Pi(Symbol, IType, Box<EForm>),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ScopeKind {
    Lambda,
    Pi,
}

/// What uppercase identifiers without a binder become.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Mode {
    /// Program clause: implicitly universally quantified at the clause head.
    Clause,
    /// Clause whose free variables stay free (context formulas).
    Schematic,
    /// Goal whose free variables stay free.
    Goal,
}

struct Elab<'s> {
    sig: &'s Signature,
    infer: Infer,
    scope: Vec<(Symbol, ScopeKind, IType)>,
    free: Vec<(Symbol, IType)>,
    index: usize,
}

impl<'s> Elab<'s> {
    fn new(sig: &'s Signature, index: usize) -> Self {
        Elab { sig, infer: Infer::default(), scope: Vec::new(), free: Vec::new(), index }
    }

    fn type_error<T>(&self, reason: String) -> PResult<T> {
        Err(ParseError::Type { clause: self.index, reason })
    }

    fn form(&mut self, e: &Expr) -> PResult<EForm> {
        match e {
            Expr::True(_) => Ok(EForm::Top),
            Expr::And(a, b) => Ok(EForm::And(Box::new(self.form(a)?), Box::new(self.form(b)?))),
            Expr::Imp(a, b, _) => Ok(EForm::Imp(Box::new(self.form(a)?), Box::new(self.form(b)?))),
            Expr::Pi(x, ann, body, l) => {
                let ty = match ann {
                    Some(t) => {
                        self.sig.check_type(t).map_err(|source| ParseError::Declaration { line: l.line, col: l.col, source })?;
                        IType::from_ty(t)
                    }
                    None => self.infer.fresh(),
                };
                let x = Symbol::from(x.as_str());
                self.scope.push((x.clone(), ScopeKind::Pi, ty.clone()));
                let b = self.form(body);
                self.scope.pop();
                Ok(EForm::Pi(x, ty, Box::new(b?)))
            }
            Expr::Lam(_, _, l) => Err(ParseError::NonRigidAtom { line: l.line, col: l.col, what: "abstraction in formula position".into() }),
            Expr::Id(..) | Expr::App(..) => {
                let mut args = Vec::new();
                let mut head = e;
                while let Expr::App(f, a) = head {
                    args.push(&**a);
                    head = f;
                }
                args.reverse();
                let (name, l) = match head {
                    Expr::Id(n, l) => (n, *l),
                    other => {
                        let l = other.loc();
                        return Err(ParseError::NonRigidAtom { line: l.line, col: l.col, what: "logical constant or abstraction at the head of an atom".into() });
                    }
                };
                let bound = self.scope.iter().any(|(n, _, _)| &**n == name);
                if bound || (!self.sig.is_const(name) && Symbol::from(name.as_str()).is_upper()) {
                    return Err(ParseError::NonRigidAtom { line: l.line, col: l.col, what: format!("variable `{name}` at the head of an atom") });
                }
                let pty = match self.sig.const_type(name) {
                    Some(t) => t.clone(),
                    None => return Err(ParseError::UnknownIdentifier { line: l.line, col: l.col, name: name.clone() }),
                };
                if !pty.result().is_prop() {
                    return self.type_error(format!("`{name}` has type {pty} and is not a predicate"));
                }
                let (doms, _) = pty.split();
                if doms.len() != args.len() {
                    return self.type_error(format!("`{name}` expects {} argument(s), given {}", doms.len(), args.len()));
                }
                let mut eargs = Vec::new();
                for (i, (a, d)) in args.iter().zip(doms.iter()).enumerate() {
                    let (ea, ta) = self.term(a)?;
                    if !self.infer.unify(&ta, &IType::from_ty(d)) {
                        return self.type_error(format!("argument {} of `{name}` has type {}, expected {d}", i + 1, self.infer.show(&ta)));
                    }
                    eargs.push(ea);
                }
                Ok(EForm::Atom(Symbol::from(name.as_str()), eargs))
            }
        }
    }

    fn term(&mut self, e: &Expr) -> PResult<(ETerm, IType)> {
        match e {
            Expr::Id(name, l) => {
                let mut lambdas = 0u32;
                for (n, kind, ty) in self.scope.iter().rev() {
                    if &**n == name {
                        return Ok(match kind {
                            ScopeKind::Lambda => (ETerm::Bound(lambdas, ty.clone()), ty.clone()),
                            ScopeKind::Pi => (ETerm::Local(n.clone(), ty.clone()), ty.clone()),
                        });
                    }
                    if *kind == ScopeKind::Lambda {
                        lambdas += 1;
                    }
                }
                if let Some(t) = self.sig.lookup(name) {
                    return Ok((ETerm::Const(Symbol::from(name.as_str()), t.clone()), IType::from_ty(t)));
                }
                let sym = Symbol::from(name.as_str());
                if sym.is_upper() {
                    if let Some((_, t)) = self.free.iter().find(|(n, _)| *n == sym) {
                        return Ok((ETerm::Local(sym, t.clone()), t.clone()));
                    }
                    let t = self.infer.fresh();
                    self.free.push((sym.clone(), t.clone()));
                    return Ok((ETerm::Local(sym, t.clone()), t));
                }
                Err(ParseError::UnknownIdentifier { line: l.line, col: l.col, name: name.clone() })
            }
            Expr::App(f, a) => {
                let (ef, tf) = self.term(f)?;
                let (ea, ta) = self.term(a)?;
                let r = self.infer.fresh();
                let want = IType::Arrow(Box::new(ta.clone()), Box::new(r.clone()));
                if !self.infer.unify(&tf, &want) {
                    return self.type_error(format!(
                        "cannot apply a term of type {} to an argument of type {}",
                        self.infer.show(&tf),
                        self.infer.show(&ta)
                    ));
                }
                Ok((ETerm::App(Box::new(ef), Box::new(ea)), r))
            }
            Expr::Lam(x, body, _) => {
                let tx = self.infer.fresh();
                let x = Symbol::from(x.as_str());
                self.scope.push((x.clone(), ScopeKind::Lambda, tx.clone()));
                let r = self.term(body);
                self.scope.pop();
                let (eb, tb) = r?;
                Ok((ETerm::Abs(x, tx.clone(), Box::new(eb)), IType::Arrow(Box::new(tx), Box::new(tb))))
            }
            other => {
                let l = other.loc();
                Err(ParseError::Syntax { line: l.line, col: l.col, msg: "logical connective inside a term".into() })
            }
        }
    }

    fn ty_of(&self, name: &Symbol, t: &IType) -> PResult<Ty> {
        match self.infer.resolve(t) {
            Some(t) => Ok(t),
            None => self.type_error(format!("cannot infer the type of `{name}`")),
        }
    }

    fn build_term(&self, t: &ETerm) -> PResult<Term> {
        Ok(match t {
            ETerm::Const(n, ty) => Term::Const(n.clone(), ty.clone()),
            ETerm::Local(n, ty) => Term::Var(n.clone(), self.ty_of(n, ty)?),
            ETerm::Bound(i, ty) => Term::Bound(*i, self.ty_of(&Symbol::from("bound variable"), ty)?),
            ETerm::Abs(x, ty, b) => Term::mk_abs(x.clone(), self.ty_of(x, ty)?, self.build_term(b)?),
            ETerm::App(f, a) => Term::mk_app(self.build_term(f)?, self.build_term(a)?),
        })
    }

    fn atom(&self, p: &Symbol, args: &[ETerm]) -> PResult<Atom> {
        let args = args.iter().map(|a| self.build_term(a).map(|t| normalize(&t))).collect::<PResult<Vec<_>>>()?;
        Ok(Atom { pred: p.clone(), args })
    }

    fn goal(&self, f: &EForm) -> PResult<Goal> {
        Ok(match f {
            EForm::Top => Goal::Top,
            EForm::Atom(p, args) => Goal::Atom(self.atom(p, args)?),
            EForm::And(a, b) => Goal::and(self.goal(a)?, self.goal(b)?),
            EForm::Imp(d, g) => Goal::implies(self.clause(d)?, self.goal(g)?),
            EForm::Pi(x, t, b) => Goal::pi(Binder::new(x.clone(), self.ty_of(x, t)?), self.goal(b)?),
        })
    }

    fn clause(&self, f: &EForm) -> PResult<Clause> {
        Ok(match f {
            EForm::Top => return Err(ParseError::NotAClause { clause: self.index, reason: "`true` cannot be a clause head".into() }),
            EForm::And(..) => return Err(ParseError::NotAClause { clause: self.index, reason: "conjunction in clause position".into() }),
            EForm::Atom(p, args) => Clause::Fact(self.atom(p, args)?),
            EForm::Imp(g, d) => Clause::imp(self.goal(g)?, self.clause(d)?),
            EForm::Pi(x, t, b) => Clause::pi(Binder::new(x.clone(), self.ty_of(x, t)?), self.clause(b)?),
        })
    }
}

pub(crate) enum Elaborated {
    Goal(Goal),
    Clause(Clause),
}

fn elaborate(sig: &Signature, e: &Expr, mode: Mode, index: usize) -> PResult<Elaborated> {
    let mut el = Elab::new(sig, index);
    let f = el.form(e)?;
    match mode {
        Mode::Goal => Ok(Elaborated::Goal(el.goal(&f)?)),
        Mode::Schematic => Ok(Elaborated::Clause(el.clause(&f)?)),
        Mode::Clause => {
            let mut c = el.clause(&f)?;
            for (n, t) in el.free.iter().rev() {
                c = Clause::pi(Binder::implicit(n.clone(), el.ty_of(n, t)?), c);
            }
            Ok(Elaborated::Clause(c))
        }
    }
}

fn decl_error(l: Loc, source: crate::kernel::KernelError) -> ParseError {
    ParseError::Declaration { line: l.line, col: l.col, source }
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(text)?;
    let mut sig = Signature::new();
    let mut clauses = Vec::new();
    let mut contexts: IndexMap<Symbol, Vec<Clause>> = IndexMap::new();
    let mut strengthen = None;
    let mut index = 0usize;
    loop {
        match p.peek().clone() {
            Tok::Eof => break,
            Tok::Kind => {
                p.bump();
                let names = p.ident_list()?;
                p.expect(Tok::Type)?;
                p.expect(Tok::Dot)?;
                for (n, l) in names {
                    sig.declare_kind(n).map_err(|e| decl_error(l, e))?;
                }
            }
            Tok::Type => {
                p.bump();
                let names = p.ident_list()?;
                let l = p.loc();
                let ty = p.ty()?;
                p.expect(Tok::Dot)?;
                for (n, nl) in names {
                    sig.check_type(&ty).map_err(|e| decl_error(l, e))?;
                    sig.declare_const(n, ty.clone()).map_err(|e| decl_error(nl, e))?;
                }
            }
            Tok::ContextDirective => {
                p.bump();
                let (name, _) = p.ident()?;
                let entry = contexts.entry(Symbol::from(name)).or_default();
                if *p.peek() != Tok::Dot {
                    let e = p.formula()?;
                    if let Elaborated::Clause(c) = elaborate(&sig, &e, Mode::Schematic, index)? {
                        entry.push(c);
                    }
                }
                p.expect(Tok::Dot)?;
            }
            Tok::StrengthenDirective => {
                p.bump();
                let (name, _) = p.ident()?;
                p.keyword("from")?;
                p.stop = Some("in");
                let fe = p.formula();
                p.stop = None;
                let fe = fe?;
                p.keyword("in")?;
                let ge = p.formula()?;
                p.expect(Tok::Dot)?;
                let from = match elaborate(&sig, &fe, Mode::Clause, index)? {
                    Elaborated::Clause(c) => c,
                    Elaborated::Goal(_) => unreachable!(),
                };
                let goal = match elaborate(&sig, &ge, Mode::Goal, index)? {
                    Elaborated::Goal(g) => g,
                    Elaborated::Clause(_) => unreachable!(),
                };
                strengthen = Some(StrengthenDirective { context: Symbol::from(name), from, goal });
            }
            _ => {
                let e = p.formula()?;
                p.expect(Tok::Dot)?;
                if let Elaborated::Clause(c) = elaborate(&sig, &e, Mode::Clause, index)? {
                    clauses.push(Arc::new(c));
                }
                index += 1;
            }
        }
    }
    Ok(Program { signature: sig, clauses, contexts, strengthen })
}

/// Parse a single formula against `sig`; a trailing `.` is optional.
pub(crate) fn parse_formula(sig: &Signature, text: &str, mode: Mode) -> Result<Elaborated, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.formula()?;
    if *p.peek() == Tok::Dot {
        p.bump();
    }
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after formula", p.peek().describe()));
    }
    elaborate(sig, &e, mode, 0)
}

pub fn parse_goal(sig: &Signature, text: &str) -> Result<Goal, ParseError> {
    match parse_formula(sig, text, Mode::Goal)? {
        Elaborated::Goal(g) => Ok(g),
        Elaborated::Clause(_) => unreachable!(),
    }
}

/// Program clause: capitalized free identifiers are universally closed.
pub fn parse_clause(sig: &Signature, text: &str) -> Result<Clause, ParseError> {
    match parse_formula(sig, text, Mode::Clause)? {
        Elaborated::Clause(c) => Ok(c),
        Elaborated::Goal(_) => unreachable!(),
    }
}

/// Clause whose capitalized free identifiers stay free (schematic).
pub fn parse_context_formula(sig: &Signature, text: &str) -> Result<Clause, ParseError> {
    match parse_formula(sig, text, Mode::Schematic)? {
        Elaborated::Clause(c) => Ok(c),
        Elaborated::Goal(_) => unreachable!(),
    }
}
