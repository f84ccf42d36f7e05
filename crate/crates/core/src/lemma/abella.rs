use std::collections::HashMap;
use std::fmt::{self, Write};

use thiserror::Error;

/// Terms of the specification logic as Abella prints them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ATerm {
    Id(String),
    App(Box<ATerm>, Vec<ATerm>),
    Lam(String, Box<ATerm>),
    Pi(String, Box<ATerm>),
    Imp(Box<ATerm>, Box<ATerm>),
    And(Box<ATerm>, Box<ATerm>),
    Cons(Box<ATerm>, Box<ATerm>),
}

/// Reasoning-logic formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AFormula {
    True,
    False,
    Atom(ATerm),
    Eq(ATerm, ATerm),
    And(Box<AFormula>, Box<AFormula>),
    Or(Box<AFormula>, Box<AFormula>),
    Imp(Box<AFormula>, Box<AFormula>),
    Forall(Vec<String>, Box<AFormula>),
    Exists(Vec<String>, Box<AFormula>),
    /// `{L, F1, ..., Fn |- G}`, or `{G}` when the context is empty.
    Seq(Vec<ATerm>, ATerm),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tactic {
    InductionOn(Vec<usize>),
    Intros,
    Case(String),
    Apply { lemma: String, to: Vec<String> },
    Search,
    Split,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefClause {
    pub head: AFormula,
    pub body: Option<AFormula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbellaItem {
    Specification(String),
    Define { name: String, ty: String, clauses: Vec<DefClause> },
    Theorem { name: String, formula: AFormula, proof: Vec<Tactic> },
    Split { source: String, names: Vec<String> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AbellaArtifact {
    pub items: Vec<AbellaItem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("{user} refers to {name}, which is only introduced later")]
    UnorderedArtifact { name: String, user: String },
}

impl ATerm {
    pub fn id(s: impl Into<String>) -> ATerm {
        ATerm::Id(s.into())
    }

    pub fn app(head: ATerm, args: Vec<ATerm>) -> ATerm {
        if args.is_empty() {
            head
        } else {
            ATerm::App(Box::new(head), args)
        }
    }

    pub fn cons(a: ATerm, b: ATerm) -> ATerm {
        ATerm::Cons(Box::new(a), Box::new(b))
    }

    fn is_compound(&self) -> bool {
        !matches!(self, ATerm::Id(_) | ATerm::App(..))
    }

    fn write_operand(&self, out: &mut String) {
        if self.is_compound() {
            out.push('(');
            self.write(out);
            out.push(')');
        } else {
            self.write(out);
        }
    }

    fn write_arg(&self, out: &mut String) {
        if matches!(self, ATerm::Id(_)) {
            self.write(out);
        } else {
            out.push('(');
            self.write(out);
            out.push(')');
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            ATerm::Id(s) => out.push_str(s),
            ATerm::App(h, args) => {
                h.write_arg(out);
                for a in args {
                    out.push(' ');
                    a.write_arg(out);
                }
            }
            ATerm::Lam(x, b) => {
                let _ = write!(out, "{x}\\ ");
                b.write(out);
            }
            ATerm::Pi(x, b) => {
                let _ = write!(out, "pi {x}\\ ");
                b.write(out);
            }
            ATerm::Imp(a, b) | ATerm::And(a, b) | ATerm::Cons(a, b) => {
                let op = match self {
                    ATerm::Imp(..) => " => ",
                    ATerm::And(..) => " & ",
                    _ => " :: ",
                };
                a.write_operand(out);
                out.push_str(op);
                // Lists nest to the right without parentheses.
                if matches!(self, ATerm::Cons(..)) && matches!(**b, ATerm::Cons(..)) {
                    b.write(out);
                } else {
                    b.write_operand(out);
                }
            }
        }
    }

    /// Identifiers in head position of applications, including the term itself if it is one.
    fn heads(&self, out: &mut Vec<String>) {
        match self {
            ATerm::Id(s) => out.push(s.clone()),
            ATerm::App(h, args) => {
                h.heads(out);
                for a in args {
                    a.heads(out);
                }
            }
            ATerm::Lam(_, b) | ATerm::Pi(_, b) => b.heads(out),
            ATerm::Imp(a, b) | ATerm::And(a, b) | ATerm::Cons(a, b) => {
                a.heads(out);
                b.heads(out);
            }
        }
    }
}

impl fmt::Display for ATerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}

impl AFormula {
    pub fn imp(a: AFormula, b: AFormula) -> AFormula {
        AFormula::Imp(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: Vec<String>, body: AFormula) -> AFormula {
        if vars.is_empty() {
            body
        } else {
            AFormula::Forall(vars, Box::new(body))
        }
    }

    pub fn exists(vars: Vec<String>, body: AFormula) -> AFormula {
        if vars.is_empty() {
            body
        } else {
            AFormula::Exists(vars, Box::new(body))
        }
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj(items: Vec<AFormula>) -> AFormula {
        items.into_iter().reduce(|a, b| AFormula::Or(Box::new(a), Box::new(b))).unwrap_or(AFormula::False)
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj(items: Vec<AFormula>) -> AFormula {
        items.into_iter().reduce(|a, b| AFormula::And(Box::new(a), Box::new(b))).unwrap_or(AFormula::True)
    }

    pub fn atom(pred: &str, args: Vec<ATerm>) -> AFormula {
        AFormula::Atom(ATerm::app(ATerm::id(pred), args))
    }

    fn is_atomic(&self) -> bool {
        matches!(self, AFormula::True | AFormula::False | AFormula::Atom(_) | AFormula::Eq(..) | AFormula::Seq(..))
    }

    fn write_paren(&self, out: &mut String) {
        out.push('(');
        self.write(out);
        out.push(')');
    }

    fn write(&self, out: &mut String) {
        match self {
            AFormula::True => out.push_str("true"),
            AFormula::False => out.push_str("false"),
            AFormula::Atom(t) => t.write(out),
            AFormula::Eq(a, b) => {
                a.write_operand(out);
                out.push_str(" = ");
                b.write_operand(out);
            }
            AFormula::And(a, b) | AFormula::Or(a, b) => {
                let same = |f: &AFormula| std::mem::discriminant(f) == std::mem::discriminant(self);
                if a.is_atomic() || same(a) {
                    a.write(out);
                } else {
                    a.write_paren(out);
                }
                out.push_str(if matches!(self, AFormula::And(..)) { " /\\ " } else { " \\/ " });
                if b.is_atomic() {
                    b.write(out);
                } else {
                    b.write_paren(out);
                }
            }
            AFormula::Imp(a, b) => {
                if matches!(**a, AFormula::Imp(..) | AFormula::Forall(..) | AFormula::Exists(..)) {
                    a.write_paren(out);
                } else {
                    a.write(out);
                }
                out.push_str(" -> ");
                b.write(out);
            }
            AFormula::Forall(vs, b) | AFormula::Exists(vs, b) => {
                out.push_str(if matches!(self, AFormula::Forall(..)) { "forall " } else { "exists " });
                out.push_str(&vs.join(" "));
                out.push_str(", ");
                b.write(out);
            }
            AFormula::Seq(ctx, g) => {
                out.push('{');
                for (i, c) in ctx.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    c.write_operand(out);
                }
                if !ctx.is_empty() {
                    out.push_str(" |- ");
                }
                g.write(out);
                out.push('}');
            }
        }
    }

    fn heads(&self, out: &mut Vec<String>) {
        match self {
            AFormula::True | AFormula::False | AFormula::Eq(..) | AFormula::Seq(..) => {}
            AFormula::Atom(t) => {
                let mut all = Vec::new();
                t.heads(&mut all);
                out.extend(all.into_iter().take(1));
            }
            AFormula::And(a, b) | AFormula::Or(a, b) | AFormula::Imp(a, b) => {
                a.heads(out);
                b.heads(out);
            }
            AFormula::Forall(_, b) | AFormula::Exists(_, b) => b.heads(out),
        }
    }
}

impl fmt::Display for AFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Tactic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tactic::InductionOn(ns) => {
                let ns: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
                write!(f, "induction on {}.", ns.join(" "))
            }
            Tactic::Intros => f.write_str("intros."),
            Tactic::Case(h) => write!(f, "case {h}."),
            Tactic::Apply { lemma, to } if to.is_empty() => write!(f, "apply {lemma}."),
            Tactic::Apply { lemma, to } => write!(f, "apply {lemma} to {}.", to.join(" ")),
            Tactic::Search => f.write_str("search."),
            Tactic::Split => f.write_str("split."),
        }
    }
}

impl AbellaItem {
    pub fn name(&self) -> Option<&str> {
        match self {
            AbellaItem::Specification(_) => None,
            AbellaItem::Define { name, .. } | AbellaItem::Theorem { name, .. } => Some(name),
            AbellaItem::Split { source, .. } => Some(source),
        }
    }

    /// Names this item introduces.
    pub fn introduces(&self) -> Vec<String> {
        match self {
            AbellaItem::Specification(_) => vec![],
            AbellaItem::Define { name, .. } | AbellaItem::Theorem { name, .. } => vec![name.clone()],
            AbellaItem::Split { names, .. } => names.clone(),
        }
    }

    /// Defined predicates and lemmas this item mentions.
    pub fn references(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            AbellaItem::Specification(_) => {}
            AbellaItem::Define { clauses, .. } => {
                for c in clauses {
                    if let Some(b) = &c.body {
                        b.heads(&mut out);
                    }
                }
            }
            AbellaItem::Theorem { formula, proof, .. } => {
                formula.heads(&mut out);
                for t in proof {
                    if let Tactic::Apply { lemma, .. } = t {
                        out.push(lemma.clone());
                    }
                }
            }
            AbellaItem::Split { source, .. } => out.push(source.clone()),
        }
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            AbellaItem::Specification(s) => {
                let _ = writeln!(out, "Specification \"{s}\".");
            }
            AbellaItem::Define { name, ty, clauses } => {
                let _ = writeln!(out, "Define {name} : {ty} by");
                for (i, c) in clauses.iter().enumerate() {
                    out.push_str("  ");
                    c.head.write(out);
                    if let Some(b) = &c.body {
                        out.push_str(" := ");
                        b.write(out);
                    }
                    out.push_str(if i + 1 == clauses.len() { ".\n" } else { ";\n" });
                }
            }
            AbellaItem::Theorem { name, formula, proof } => {
                let _ = writeln!(out, "Theorem {name} : {formula}.");
                for t in proof {
                    let _ = writeln!(out, "{t}");
                }
            }
            AbellaItem::Split { source, names } => {
                let _ = writeln!(out, "Split {source} as {}.", names.join(", "));
            }
        }
    }
}

impl AbellaArtifact {
    /// Every name used by an item that the artifact itself introduces must be introduced earlier.
    pub fn check_order(&self) -> Result<(), RenderError> {
        let mut position: HashMap<String, usize> = HashMap::new();
        for (i, item) in self.items.iter().enumerate() {
            for n in item.introduces() {
                position.entry(n).or_insert(i);
            }
        }
        for (i, item) in self.items.iter().enumerate() {
            for r in item.references() {
                if let Some(&j) = position.get(&r) {
                    let self_ref = j == i && matches!(item, AbellaItem::Define { .. });
                    if j > i || (j == i && !self_ref) {
                        let user = item.name().unwrap_or("specification").to_string();
                        return Err(RenderError::UnorderedArtifact { name: r, user });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn count_theorems(&self, prefix: &str) -> usize {
        self.items.iter().filter(|i| matches!(i, AbellaItem::Theorem { name, .. } if name.starts_with(prefix))).count()
    }

    pub fn theorem(&self, name: &str) -> Option<(&AFormula, &[Tactic])> {
        self.items.iter().find_map(|i| match i {
            AbellaItem::Theorem { name: n, formula, proof } if n == name => Some((formula, proof.as_slice())),
            _ => None,
        })
    }
}

/// Abella concrete syntax, items separated by blank lines.
pub fn render(artifact: &AbellaArtifact) -> Result<String, RenderError> {
    artifact.check_order()?;
    let mut out = String::new();
    for (i, item) in artifact.items.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        item.write(&mut out);
    }
    Ok(out)
}
