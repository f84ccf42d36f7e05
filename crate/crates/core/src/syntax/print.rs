use std::fmt;

use super::{Atom, Clause, Goal};
use crate::kernel::{Pos, TermPrinter};

/// Precedence levels: 0 admits `=>`, 1 admits `&`, 2 is atomic.
pub(crate) struct FormulaPrinter {
    pub terms: TermPrinter,
    /// Print implicit binders as explicit `pi`.
    pub explicit_implicits: bool,
    /// Print binder type annotations.
    pub annotate: bool,
}

impl FormulaPrinter {
    pub fn new() -> Self {
        FormulaPrinter { terms: TermPrinter::new(), explicit_implicits: false, annotate: true }
    }

    pub fn atom(&mut self, a: &Atom, out: &mut String) {
        out.push_str(&a.pred);
        for t in &a.args {
            out.push(' ');
            self.terms.write(t, Pos::Arg, out);
        }
    }

    pub fn goal(&mut self, g: &Goal, level: u8, out: &mut String) {
        match g {
            Goal::Top => out.push_str("true"),
            Goal::Atom(a) => self.atom(a, out),
            Goal::And(l, r) => {
                let paren = level > 1;
                open(paren, out);
                self.goal(l, 2, out);
                out.push_str(" & ");
                self.goal(r, 1, out);
                close(paren, out);
            }
            Goal::Implies(d, g) => {
                let paren = level > 0;
                open(paren, out);
                self.clause(d, 1, out);
                out.push_str(" => ");
                self.goal(g, 0, out);
                close(paren, out);
            }
            Goal::Pi(b, body) => {
                let paren = level > 0;
                open(paren, out);
                self.binder(&b.name, &b.ty, out);
                self.goal(body, 0, out);
                close(paren, out);
            }
        }
    }

    pub fn clause(&mut self, d: &Clause, level: u8, out: &mut String) {
        match d {
            Clause::Fact(a) => self.atom(a, out),
            Clause::Imp(g, d) => {
                let paren = level > 0;
                open(paren, out);
                self.goal(g, 1, out);
                out.push_str(" => ");
                self.clause(d, 0, out);
                close(paren, out);
            }
            Clause::Pi(b, body) if b.implicit && !self.explicit_implicits => self.clause(body, level, out),
            Clause::Pi(b, body) => {
                let paren = level > 0;
                open(paren, out);
                self.binder(&b.name, &b.ty, out);
                self.clause(body, 0, out);
                close(paren, out);
            }
        }
    }

    fn binder(&mut self, name: &str, ty: &crate::kernel::Ty, out: &mut String) {
        out.push_str("pi ");
        out.push_str(name);
        if self.annotate {
            out.push_str(" : ");
            out.push_str(&ty.to_string());
        }
        out.push_str(" \\ ");
    }
}

fn open(p: bool, out: &mut String) {
    if p {
        out.push('(');
    }
}

fn close(p: bool, out: &mut String) {
    if p {
        out.push(')');
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        FormulaPrinter::new().atom(self, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        FormulaPrinter::new().goal(self, 0, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        FormulaPrinter::new().clause(self, 0, &mut s);
        f.write_str(&s)
    }
}

impl Clause {
    /// Printed with every quantifier explicit, implicit ones included.
    pub fn to_closed_string(&self) -> String {
        let mut p = FormulaPrinter::new();
        p.explicit_implicits = true;
        let mut s = String::new();
        p.clause(self, 0, &mut s);
        s
    }
}
