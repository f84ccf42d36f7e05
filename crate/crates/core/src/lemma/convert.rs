use std::collections::{BTreeSet, HashMap};

use super::abella::ATerm;
use crate::kernel::{fresh_name, Signature, Symbol, Term};
use crate::syntax::{Atom, Clause, Goal};

/// Chooses Abella names for the variables of one emitted formula.
///
/// Free variables become capitalized, binders keep their hint when it is
/// free, and nothing reuses a reserved name or a signature constant.
pub struct Namer<'s> {
    sig: &'s Signature,
    taken: BTreeSet<String>,
    free: HashMap<Symbol, String>,
    free_order: Vec<String>,
    scopes: Vec<(Symbol, String)>,
    stack: Vec<String>,
}

fn capitalize(s: &str) -> String {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_alphabetic() => c.to_uppercase().chain(cs).collect(),
        _ => format!("V{s}"),
    }
}

impl<'s> Namer<'s> {
    pub fn new(sig: &'s Signature, reserved: &[&str]) -> Self {
        Namer {
            sig,
            taken: reserved.iter().map(|s| s.to_string()).collect(),
            free: HashMap::new(),
            free_order: Vec::new(),
            scopes: Vec::new(),
            stack: Vec::new(),
        }
    }

    fn is_taken(&self, s: &str) -> bool {
        self.taken.contains(s) || self.sig.contains(s) || matches!(s, "nil" | "member" | "pi" | "forall" | "exists")
    }

    fn claim(&mut self, base: &str) -> String {
        let name = if self.is_taken(base) { fresh_name(base, |c| self.is_taken(c)).to_string() } else { base.to_string() };
        self.taken.insert(name.clone());
        name
    }

    /// Free variables named so far, in order of first occurrence.
    pub fn free_vars(&self) -> &[String] {
        &self.free_order
    }

    fn free_var(&mut self, x: &Symbol) -> String {
        if let Some(n) = self.free.get(x) {
            return n.clone();
        }
        let n = self.claim(&capitalize(x));
        self.free.insert(x.clone(), n.clone());
        self.free_order.push(n.clone());
        n
    }

    pub fn term(&mut self, t: &Term) -> ATerm {
        match t {
            Term::Const(n, _) => ATerm::id(n.as_str()),
            Term::Var(n, _) => match self.scopes.iter().rev().find(|(x, _)| x == n) {
                Some((_, s)) => ATerm::id(s.clone()),
                None => ATerm::id(self.free_var(n)),
            },
            Term::Bound(i, _) => {
                let i = *i as usize;
                match self.stack.len().checked_sub(i + 1) {
                    Some(k) => ATerm::id(self.stack[k].clone()),
                    None => ATerm::id(format!("B{i}")),
                }
            }
            Term::Meta(m, _) => ATerm::id(self.free_var(&Symbol::from(format!("M{m}")))),
            Term::Abs(h, _, b) => {
                let x = self.claim(h);
                self.stack.push(x.clone());
                let body = self.term(b);
                self.stack.pop();
                ATerm::Lam(x, Box::new(body))
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                let head = self.term(head);
                let args = args.into_iter().map(|a| self.term(a)).collect();
                ATerm::app(head, args)
            }
        }
    }

    pub fn atom(&mut self, a: &Atom) -> ATerm {
        let args = a.args.iter().map(|t| self.term(t)).collect();
        ATerm::app(ATerm::id(a.pred.as_str()), args)
    }

    fn scoped<T>(&mut self, name: &Symbol, f: impl FnOnce(&mut Self) -> T) -> (String, T) {
        let x = self.claim(name);
        self.scopes.push((name.clone(), x.clone()));
        let r = f(self);
        self.scopes.pop();
        (x, r)
    }

    pub fn goal(&mut self, g: &Goal) -> ATerm {
        match g {
            Goal::Top => ATerm::id("true"),
            Goal::Atom(a) => self.atom(a),
            Goal::And(l, r) => ATerm::And(Box::new(self.goal(l)), Box::new(self.goal(r))),
            Goal::Implies(d, g) => ATerm::Imp(Box::new(self.clause(d)), Box::new(self.goal(g))),
            Goal::Pi(b, g) => {
                let (x, body) = self.scoped(&b.name, |s| s.goal(g));
                ATerm::Pi(x, Box::new(body))
            }
        }
    }

    /// Every quantifier is printed, the implicit ones included.
    pub fn clause(&mut self, d: &Clause) -> ATerm {
        match d {
            Clause::Fact(a) => self.atom(a),
            Clause::Imp(g, d) => ATerm::Imp(Box::new(self.goal(g)), Box::new(self.clause(d))),
            Clause::Pi(b, d) => {
                let (x, body) = self.scoped(&b.name, |s| s.clause(d));
                ATerm::Pi(x, Box::new(body))
            }
        }
    }
}
