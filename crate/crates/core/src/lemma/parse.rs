use thiserror::Error;

use super::abella::{AFormula, ATerm, AbellaArtifact, AbellaItem, DefClause, Tactic};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct AbellaParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Id(String),
    Str(String),
    Sym(&'static str),
}

const SYMBOLS: [&str; 20] = [
    ":=", "::", "->", "=>", "\\/", "/\\", "|-", "(", ")", "{", "}", "[", "]", ",", ".", ":", ";", "=", "&", "\\",
];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, AbellaParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line) = (0, 1);
    'outer: while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                i += 1;
            }
            if i == chars.len() {
                return Err(AbellaParseError { line, msg: "unterminated string".into() });
            }
            out.push((Tok::Str(chars[start..i].iter().collect()), line));
            i += 1;
            continue;
        }
        if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '\'' | '?')) {
                i += 1;
            }
            out.push((Tok::Id(chars[start..i].iter().collect()), line));
            continue;
        }
        for s in SYMBOLS {
            let n = s.chars().count();
            if i + n <= chars.len() && chars[i..i + n].iter().copied().eq(s.chars()) {
                out.push((Tok::Sym(s), line));
                i += n;
                continue 'outer;
            }
        }
        return Err(AbellaParseError { line, msg: format!("unexpected character {c:?}") });
    }
    Ok(out)
}

struct P {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const COMMANDS: [&str; 4] = ["Specification", "Define", "Theorem", "Split"];

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map(|(_, l)| *l).unwrap_or(1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AbellaParseError> {
        Err(AbellaParseError { line: self.line(), msg: msg.into() })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn is_id(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Id(x)) if x == s)
    }

    fn sym(&mut self, s: &str) -> Result<(), AbellaParseError> {
        if self.is_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {:?}", self.peek()))
        }
    }

    fn keyword(&mut self, s: &str) -> Result<(), AbellaParseError> {
        if self.is_id(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {:?}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String, AbellaParseError> {
        match self.peek() {
            Some(Tok::Id(s)) if !is_reserved(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            t => self.err(format!("expected identifier, found {t:?}")),
        }
    }

    fn artifact(&mut self) -> Result<AbellaArtifact, AbellaParseError> {
        let mut items = Vec::new();
        while self.peek().is_some() {
            items.push(self.item()?);
        }
        Ok(AbellaArtifact { items })
    }

    fn item(&mut self) -> Result<AbellaItem, AbellaParseError> {
        if self.is_id("Specification") {
            self.pos += 1;
            let name = match self.peek() {
                Some(Tok::Str(s)) => s.clone(),
                t => return self.err(format!("expected a file name, found {t:?}")),
            };
            self.pos += 1;
            self.sym(".")?;
            return Ok(AbellaItem::Specification(name));
        }
        if self.is_id("Define") {
            self.pos += 1;
            let name = self.ident()?;
            self.sym(":")?;
            let mut ty = Vec::new();
            while !self.is_id("by") {
                match self.peek() {
                    Some(Tok::Id(s)) => ty.push(s.clone()),
                    Some(Tok::Sym("->")) => ty.push("->".into()),
                    t => return self.err(format!("bad type token {t:?}")),
                }
                self.pos += 1;
            }
            self.keyword("by")?;
            let mut clauses = Vec::new();
            loop {
                let head = self.formula()?;
                let body = if self.is_sym(":=") {
                    self.pos += 1;
                    Some(self.formula()?)
                } else {
                    None
                };
                clauses.push(DefClause { head, body });
                if self.is_sym(";") {
                    self.pos += 1;
                } else {
                    self.sym(".")?;
                    break;
                }
            }
            return Ok(AbellaItem::Define { name, ty: ty.join(" "), clauses });
        }
        if self.is_id("Theorem") {
            self.pos += 1;
            let name = self.ident()?;
            self.sym(":")?;
            let formula = self.formula()?;
            self.sym(".")?;
            let mut proof = Vec::new();
            while let Some(Tok::Id(s)) = self.peek() {
                if COMMANDS.contains(&s.as_str()) {
                    break;
                }
                proof.push(self.tactic()?);
            }
            return Ok(AbellaItem::Theorem { name, formula, proof });
        }
        if self.is_id("Split") {
            self.pos += 1;
            let source = self.ident()?;
            self.keyword("as")?;
            let mut names = vec![self.ident()?];
            while self.is_sym(",") {
                self.pos += 1;
                names.push(self.ident()?);
            }
            self.sym(".")?;
            return Ok(AbellaItem::Split { source, names });
        }
        self.err(format!("expected a command, found {:?}", self.peek()))
    }

    fn tactic(&mut self) -> Result<Tactic, AbellaParseError> {
        let word = self.ident_any()?;
        let t = match word.as_str() {
            "induction" => {
                self.keyword("on")?;
                let mut ns = Vec::new();
                while let Some(Tok::Id(s)) = self.peek() {
                    let n = s.parse().map_err(|_| AbellaParseError { line: self.line(), msg: format!("bad induction index {s}") })?;
                    ns.push(n);
                    self.pos += 1;
                }
                Tactic::InductionOn(ns)
            }
            "intros" => Tactic::Intros,
            "search" => Tactic::Search,
            "split" => Tactic::Split,
            "case" => Tactic::Case(self.ident()?),
            "apply" => {
                let lemma = self.ident()?;
                let mut to = Vec::new();
                if self.is_id("to") {
                    self.pos += 1;
                    while !self.is_sym(".") {
                        to.push(self.ident()?);
                    }
                }
                Tactic::Apply { lemma, to }
            }
            w => return self.err(format!("unknown tactic {w}")),
        };
        self.sym(".")?;
        Ok(t)
    }

    fn ident_any(&mut self) -> Result<String, AbellaParseError> {
        match self.peek() {
            Some(Tok::Id(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            t => self.err(format!("expected identifier, found {t:?}")),
        }
    }

    fn binder_list(&mut self) -> Result<Vec<String>, AbellaParseError> {
        let mut vs = Vec::new();
        while !self.is_sym(",") {
            vs.push(self.ident()?);
        }
        self.sym(",")?;
        Ok(vs)
    }

    fn formula(&mut self) -> Result<AFormula, AbellaParseError> {
        if self.is_id("forall") || self.is_id("exists") {
            let universal = self.is_id("forall");
            self.pos += 1;
            let vs = self.binder_list()?;
            let body = self.formula()?;
            return Ok(if universal { AFormula::Forall(vs, Box::new(body)) } else { AFormula::Exists(vs, Box::new(body)) });
        }
        let lhs = self.disjunction()?;
        if self.is_sym("->") {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(AFormula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<AFormula, AbellaParseError> {
        let mut f = self.conjunction()?;
        while self.is_sym("\\/") {
            self.pos += 1;
            f = AFormula::Or(Box::new(f), Box::new(self.conjunction()?));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<AFormula, AbellaParseError> {
        let mut f = self.formula_atom()?;
        while self.is_sym("/\\") {
            self.pos += 1;
            f = AFormula::And(Box::new(f), Box::new(self.formula_atom()?));
        }
        Ok(f)
    }

    fn formula_atom(&mut self) -> Result<AFormula, AbellaParseError> {
        if self.is_id("true") {
            self.pos += 1;
            return Ok(AFormula::True);
        }
        if self.is_id("false") {
            self.pos += 1;
            return Ok(AFormula::False);
        }
        if self.is_sym("(") {
            self.pos += 1;
            let f = self.formula()?;
            self.sym(")")?;
            return Ok(f);
        }
        if self.is_sym("{") {
            self.pos += 1;
            let mut items = vec![self.term()?];
            while self.is_sym(",") {
                self.pos += 1;
                items.push(self.term()?);
            }
            let f = if self.is_sym("|-") {
                self.pos += 1;
                let g = self.term()?;
                AFormula::Seq(items, g)
            } else if items.len() == 1 {
                AFormula::Seq(vec![], items.pop().unwrap())
            } else {
                return self.err("sequent without turnstile");
            };
            self.sym("}")?;
            return Ok(f);
        }
        let t = self.application()?;
        if self.is_sym("=") {
            self.pos += 1;
            let rhs = self.term_operand()?;
            return Ok(AFormula::Eq(t, rhs));
        }
        Ok(AFormula::Atom(t))
    }

    fn term(&mut self) -> Result<ATerm, AbellaParseError> {
        if self.is_id("pi") {
            self.pos += 1;
            let x = self.ident()?;
            self.sym("\\")?;
            return Ok(ATerm::Pi(x, Box::new(self.term()?)));
        }
        if matches!(self.peek(), Some(Tok::Id(_))) && matches!(self.peek_at(1), Some(Tok::Sym("\\"))) {
            let x = self.ident()?;
            self.sym("\\")?;
            return Ok(ATerm::Lam(x, Box::new(self.term()?)));
        }
        let lhs = self.term_operand()?;
        let op = match self.peek() {
            Some(Tok::Sym("::")) => "::",
            Some(Tok::Sym("=>")) => "=>",
            Some(Tok::Sym("&")) => "&",
            _ => return Ok(lhs),
        };
        self.pos += 1;
        let rhs = if op == "::" { self.term()? } else { self.term_operand()? };
        Ok(match op {
            "::" => ATerm::cons(lhs, rhs),
            "=>" => ATerm::Imp(Box::new(lhs), Box::new(rhs)),
            _ => ATerm::And(Box::new(lhs), Box::new(rhs)),
        })
    }

    /// An application or a parenthesized term.
    fn term_operand(&mut self) -> Result<ATerm, AbellaParseError> {
        if self.is_sym("(") {
            let save = self.pos;
            self.pos += 1;
            let t = self.term()?;
            self.sym(")")?;
            // `(f x) y` does not occur in emitted text; a parenthesized operand stands alone
            // unless it heads an application.
            if self.starts_arg() {
                self.pos = save;
                return self.application();
            }
            return Ok(t);
        }
        self.application()
    }

    fn starts_arg(&self) -> bool {
        match self.peek() {
            Some(Tok::Id(s)) => !is_reserved(s),
            Some(Tok::Sym("(")) => true,
            _ => false,
        }
    }

    fn arg(&mut self) -> Result<ATerm, AbellaParseError> {
        if self.is_sym("(") {
            self.pos += 1;
            let t = self.term()?;
            self.sym(")")?;
            return Ok(t);
        }
        // object-level truth is an ordinary constant inside {..}
        if self.is_id("true") {
            return Ok(ATerm::Id(self.ident_any()?));
        }
        Ok(ATerm::Id(self.ident()?))
    }

    fn application(&mut self) -> Result<ATerm, AbellaParseError> {
        let head = self.arg()?;
        let mut args = Vec::new();
        while self.starts_arg() && !matches!(self.peek_at(1), Some(Tok::Sym("\\"))) {
            args.push(self.arg()?);
        }
        Ok(ATerm::app(head, args))
    }
}

fn is_reserved(s: &str) -> bool {
    matches!(s, "forall" | "exists" | "pi" | "true" | "false" | "to" | "as" | "by" | "on") || COMMANDS.contains(&s)
}

/// Parse the subset of Abella's command language that [`super::render`] produces.
pub fn parse_abella(text: &str) -> Result<AbellaArtifact, AbellaParseError> {
    P { toks: lex(text)?, pos: 0 }.artifact()
}
