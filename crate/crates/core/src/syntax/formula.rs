use std::collections::BTreeSet;

use thiserror::Error;

use crate::kernel::term::{collect_typed_vars, collect_vars, mentions_var, rename_var, replace_var};
use crate::kernel::{fresh_name, names, normalize, Symbol, Term, Ty};

/// Rigid atom: a predicate constant applied to terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: Symbol,
    pub args: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binder {
    pub name: Symbol,
    pub ty: Ty,
    /// Introduced by the capitalized-variable convention rather than an explicit `pi`.
    pub implicit: bool,
}

impl Binder {
    pub fn new(name: impl Into<Symbol>, ty: Ty) -> Self {
        Binder { name: name.into(), ty, implicit: false }
    }

    pub fn implicit(name: impl Into<Symbol>, ty: Ty) -> Self {
        Binder { name: name.into(), ty, implicit: true }
    }

    pub fn var(&self) -> Term {
        Term::Var(self.name.clone(), self.ty.clone())
    }
}

/// G ::= true | A | G & G | D => G | pi x. G
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Goal {
    Top,
    Atom(Atom),
    And(Box<Goal>, Box<Goal>),
    Implies(Box<Clause>, Box<Goal>),
    Pi(Binder, Box<Goal>),
}

/// D ::= A | G => D | pi x. D
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    Fact(Atom),
    Imp(Goal, Box<Clause>),
    Pi(Binder, Box<Clause>),
}

/// `pi xs. (G1 & ... & Gn) => A`, with the conjunction kept as a list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalClause {
    pub binders: Vec<Binder>,
    pub antecedents: Vec<Goal>,
    pub head: Atom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("goal has no rigid head predicate")]
pub struct NoHead;

/// An atomic subgoal reached by goal reduction, with the clauses the
/// implication-right rule adds to the dynamic context on the way there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub head: Symbol,
    pub assumptions: Vec<Clause>,
}

impl Atom {
    pub fn new(pred: impl Into<Symbol>, args: Vec<Term>) -> Self {
        Atom { pred: pred.into(), args }
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|a| f(a)).collect() }
    }

    pub fn subst(&self, x: &Symbol, t: &Term) -> Atom {
        let needs_norm = matches!(t, Term::Abs(..));
        self.map_terms(&mut |a| {
            if !mentions_var(a, x) {
                return a.clone();
            }
            let r = replace_var(a, x, t);
            if needs_norm {
                normalize(&r)
            } else {
                r
            }
        })
    }

    fn rename(&self, from: &Symbol, to: &Symbol) -> Atom {
        self.map_terms(&mut |a| rename_var(a, from, to))
    }

    fn collect_free(&self, bound: &[Symbol], out: &mut BTreeSet<Symbol>) {
        let mut s = BTreeSet::new();
        for a in &self.args {
            collect_vars(a, &mut s);
        }
        out.extend(s.into_iter().filter(|v| !bound.contains(v)));
    }

    fn collect_typed_free(&self, bound: &[Symbol], out: &mut Vec<(Symbol, Ty)>) {
        let mut all = Vec::new();
        for a in &self.args {
            collect_typed_vars(a, &mut all);
        }
        for (n, t) in all {
            if !bound.contains(&n) && !out.iter().any(|(m, _)| *m == n) {
                out.push((n, t));
            }
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<Symbol>) {
        out.insert(self.pred.clone());
        for a in &self.args {
            out.extend(names(a));
        }
    }

    pub fn has_metas(&self) -> bool {
        self.args.iter().any(|a| a.has_metas())
    }
}

/// Binder name for `pi b. body` that does not capture free names of `t`.
fn avoid_capture(b: &Binder, t: &Term, body_names: impl FnOnce() -> BTreeSet<Symbol>) -> Option<Symbol> {
    let mut tn = BTreeSet::new();
    collect_vars(t, &mut tn);
    if !tn.contains(&b.name) {
        return None;
    }
    let mut taken = body_names();
    taken.extend(names(t));
    Some(fresh_name(&b.name, |c| taken.contains(c)))
}

impl Goal {
    pub fn atom(pred: impl Into<Symbol>, args: Vec<Term>) -> Goal {
        Goal::Atom(Atom::new(pred, args))
    }

    pub fn and(a: Goal, b: Goal) -> Goal {
        Goal::And(Box::new(a), Box::new(b))
    }

    pub fn implies(d: Clause, g: Goal) -> Goal {
        Goal::Implies(Box::new(d), Box::new(g))
    }

    pub fn pi(b: Binder, g: Goal) -> Goal {
        Goal::Pi(b, Box::new(g))
    }

    /// Right-nested conjunction; `true` for the empty list.
    pub fn conj(goals: Vec<Goal>) -> Goal {
        let mut it = goals.into_iter().rev();
        match it.next() {
            None => Goal::Top,
            Some(last) => it.fold(last, |acc, g| Goal::and(g, acc)),
        }
    }

    /// Head predicate reached through implications and universal quantifiers.
    pub fn head_pred(&self) -> Result<&Symbol, NoHead> {
        match self {
            Goal::Atom(a) => Ok(&a.pred),
            Goal::Implies(_, g) | Goal::Pi(_, g) => g.head_pred(),
            Goal::Top | Goal::And(..) => Err(NoHead),
        }
    }

    /// Clauses exposed as assumptions while reducing the goal to its head.
    pub fn body(&self) -> Vec<Clause> {
        let mut out: Vec<Clause> = Vec::new();
        let mut keys = BTreeSet::new();
        let mut cur = self;
        loop {
            match cur {
                Goal::Implies(d, g) => {
                    if keys.insert(d.key()) {
                        out.push((**d).clone());
                    }
                    cur = g;
                }
                Goal::Pi(_, g) => cur = g,
                _ => return out,
            }
        }
    }

    /// Atomic subgoals with their accumulated assumptions; `&` branches split.
    pub fn leaves(&self) -> Vec<Leaf> {
        let mut out = Vec::new();
        self.collect_leaves(&mut Vec::new(), &mut out);
        out
    }

    fn collect_leaves(&self, ctx: &mut Vec<Clause>, out: &mut Vec<Leaf>) {
        match self {
            Goal::Top => {}
            Goal::Atom(a) => out.push(Leaf { head: a.pred.clone(), assumptions: ctx.clone() }),
            Goal::And(l, r) => {
                l.collect_leaves(ctx, out);
                r.collect_leaves(ctx, out);
            }
            Goal::Implies(d, g) => {
                ctx.push((**d).clone());
                g.collect_leaves(ctx, out);
                ctx.pop();
            }
            Goal::Pi(_, g) => g.collect_leaves(ctx, out),
        }
    }

    /// Capture-avoiding replacement of the free variable `x` by `t`.
    pub fn subst(&self, x: &Symbol, t: &Term) -> Goal {
        match self {
            Goal::Top => Goal::Top,
            Goal::Atom(a) => Goal::Atom(a.subst(x, t)),
            Goal::And(l, r) => Goal::and(l.subst(x, t), r.subst(x, t)),
            Goal::Implies(d, g) => Goal::implies(d.subst(x, t), g.subst(x, t)),
            Goal::Pi(b, g) => {
                if b.name == *x {
                    return self.clone();
                }
                match avoid_capture(b, t, || g.names()) {
                    Some(fresh) => {
                        let g2 = g.rename(&b.name, &fresh);
                        Goal::pi(Binder { name: fresh, ..b.clone() }, g2.subst(x, t))
                    }
                    None => Goal::pi(b.clone(), g.subst(x, t)),
                }
            }
        }
    }

    fn rename(&self, from: &Symbol, to: &Symbol) -> Goal {
        match self {
            Goal::Top => Goal::Top,
            Goal::Atom(a) => Goal::Atom(a.rename(from, to)),
            Goal::And(l, r) => Goal::and(l.rename(from, to), r.rename(from, to)),
            Goal::Implies(d, g) => Goal::implies(d.rename(from, to), g.rename(from, to)),
            Goal::Pi(b, _) if b.name == *from => self.clone(),
            Goal::Pi(b, g) => Goal::pi(b.clone(), g.rename(from, to)),
        }
    }

    /// Apply `f` to every term argument, ignoring binders.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Goal {
        match self {
            Goal::Top => Goal::Top,
            Goal::Atom(a) => Goal::Atom(a.map_terms(f)),
            Goal::And(l, r) => Goal::and(l.map_terms(f), r.map_terms(f)),
            Goal::Implies(d, g) => Goal::implies(d.map_terms(f), g.map_terms(f)),
            Goal::Pi(b, g) => Goal::pi(b.clone(), g.map_terms(f)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
        match self {
            Goal::Top => {}
            Goal::Atom(a) => a.collect_free(bound, out),
            Goal::And(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Goal::Implies(d, g) => {
                d.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Goal::Pi(b, g) => {
                bound.push(b.name.clone());
                g.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Free variables with their types, in order of first occurrence.
    pub fn typed_free_vars(&self) -> Vec<(Symbol, Ty)> {
        let mut out = Vec::new();
        self.collect_typed_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_typed_free(&self, bound: &mut Vec<Symbol>, out: &mut Vec<(Symbol, Ty)>) {
        match self {
            Goal::Top => {}
            Goal::Atom(a) => a.collect_typed_free(bound, out),
            Goal::And(l, r) => {
                l.collect_typed_free(bound, out);
                r.collect_typed_free(bound, out);
            }
            Goal::Implies(d, g) => {
                d.collect_typed_free(bound, out);
                g.collect_typed_free(bound, out);
            }
            Goal::Pi(b, g) => {
                bound.push(b.name.clone());
                g.collect_typed_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn names(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    pub(crate) fn collect_names(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Goal::Top => {}
            Goal::Atom(a) => a.collect_names(out),
            Goal::And(l, r) => {
                l.collect_names(out);
                r.collect_names(out);
            }
            Goal::Implies(d, g) => {
                d.collect_names(out);
                g.collect_names(out);
            }
            Goal::Pi(b, g) => {
                out.insert(b.name.clone());
                g.collect_names(out);
            }
        }
    }

    /// Every atom occurring anywhere, including inside nested clauses.
    pub fn atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Goal::Top => {}
            Goal::Atom(a) => out.push(a),
            Goal::And(l, r) => {
                l.atoms(out);
                r.atoms(out);
            }
            Goal::Implies(d, g) => {
                d.atoms(out);
                g.atoms(out);
            }
            Goal::Pi(_, g) => g.atoms(out),
        }
    }

    pub fn has_metas(&self) -> bool {
        let mut v = Vec::new();
        self.atoms(&mut v);
        v.iter().any(|a| a.has_metas())
    }

    /// Canonical identity: equal keys iff alpha-equivalent up to renaming of free variables.
    pub fn key(&self) -> String {
        let mut k = KeyWriter::default();
        k.goal(self);
        k.out
    }
}

impl Clause {
    pub fn fact(pred: impl Into<Symbol>, args: Vec<Term>) -> Clause {
        Clause::Fact(Atom::new(pred, args))
    }

    pub fn imp(g: Goal, d: Clause) -> Clause {
        Clause::Imp(g, Box::new(d))
    }

    pub fn pi(b: Binder, d: Clause) -> Clause {
        Clause::Pi(b, Box::new(d))
    }

    pub fn head(&self) -> &Atom {
        match self {
            Clause::Fact(a) => a,
            Clause::Imp(_, d) | Clause::Pi(_, d) => d.head(),
        }
    }

    pub fn head_pred(&self) -> &Symbol {
        &self.head().pred
    }

    pub fn subst(&self, x: &Symbol, t: &Term) -> Clause {
        match self {
            Clause::Fact(a) => Clause::Fact(a.subst(x, t)),
            Clause::Imp(g, d) => Clause::imp(g.subst(x, t), d.subst(x, t)),
            Clause::Pi(b, d) => {
                if b.name == *x {
                    return self.clone();
                }
                match avoid_capture(b, t, || d.names()) {
                    Some(fresh) => {
                        let d2 = d.rename(&b.name, &fresh);
                        Clause::pi(Binder { name: fresh, ..b.clone() }, d2.subst(x, t))
                    }
                    None => Clause::pi(b.clone(), d.subst(x, t)),
                }
            }
        }
    }

    fn rename(&self, from: &Symbol, to: &Symbol) -> Clause {
        match self {
            Clause::Fact(a) => Clause::Fact(a.rename(from, to)),
            Clause::Imp(g, d) => Clause::imp(g.rename(from, to), d.rename(from, to)),
            Clause::Pi(b, _) if b.name == *from => self.clone(),
            Clause::Pi(b, d) => Clause::pi(b.clone(), d.rename(from, to)),
        }
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Clause {
        match self {
            Clause::Fact(a) => Clause::Fact(a.map_terms(f)),
            Clause::Imp(g, d) => Clause::imp(g.map_terms(f), d.map_terms(f)),
            Clause::Pi(b, d) => Clause::pi(b.clone(), d.map_terms(f)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
        match self {
            Clause::Fact(a) => a.collect_free(bound, out),
            Clause::Imp(g, d) => {
                g.collect_free(bound, out);
                d.collect_free(bound, out);
            }
            Clause::Pi(b, d) => {
                bound.push(b.name.clone());
                d.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn typed_free_vars(&self) -> Vec<(Symbol, Ty)> {
        let mut out = Vec::new();
        self.collect_typed_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_typed_free(&self, bound: &mut Vec<Symbol>, out: &mut Vec<(Symbol, Ty)>) {
        match self {
            Clause::Fact(a) => a.collect_typed_free(bound, out),
            Clause::Imp(g, d) => {
                g.collect_typed_free(bound, out);
                d.collect_typed_free(bound, out);
            }
            Clause::Pi(b, d) => {
                bound.push(b.name.clone());
                d.collect_typed_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn names(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    pub(crate) fn collect_names(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Clause::Fact(a) => a.collect_names(out),
            Clause::Imp(g, d) => {
                g.collect_names(out);
                d.collect_names(out);
            }
            Clause::Pi(b, d) => {
                out.insert(b.name.clone());
                d.collect_names(out);
            }
        }
    }

    pub fn atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Clause::Fact(a) => out.push(a),
            Clause::Imp(g, d) => {
                g.atoms(out);
                d.atoms(out);
            }
            Clause::Pi(_, d) => d.atoms(out),
        }
    }

    /// Universal closure over the free variables, in order of first occurrence.
    pub fn close(&self) -> Clause {
        let fv = self.typed_free_vars();
        fv.into_iter().rev().fold(self.clone(), |acc, (n, t)| Clause::pi(Binder::implicit(n, t), acc))
    }

    pub fn key(&self) -> String {
        let mut k = KeyWriter::default();
        k.clause(self);
        k.out
    }
}

/// Hoist binders, flatten chained implications and top-level conjunctions.
pub fn normalize_clause(d: &Clause) -> NormalClause {
    let mut binders: Vec<Binder> = Vec::new();
    let mut antecedents: Vec<Goal> = Vec::new();
    let mut cur = d.clone();
    loop {
        match cur {
            Clause::Pi(b, body) => {
                let mut taken = BTreeSet::new();
                for g in &antecedents {
                    g.collect_free(&mut Vec::new(), &mut taken);
                }
                let clash = binders.iter().any(|x| x.name == b.name) || taken.contains(&b.name);
                if clash {
                    let mut all = body.names();
                    all.extend(binders.iter().map(|x| x.name.clone()));
                    all.extend(taken);
                    for g in &antecedents {
                        all.extend(g.names());
                    }
                    let fresh = fresh_name(&b.name, |c| all.contains(c));
                    let renamed = body.rename(&b.name, &fresh);
                    binders.push(Binder { name: fresh, ..b });
                    cur = renamed;
                } else {
                    binders.push(b);
                    cur = *body;
                }
            }
            Clause::Imp(g, body) => {
                flatten_and(g, &mut antecedents);
                cur = *body;
            }
            Clause::Fact(head) => return NormalClause { binders, antecedents, head },
        }
    }
}

fn flatten_and(g: Goal, out: &mut Vec<Goal>) {
    match g {
        Goal::And(l, r) => {
            flatten_and(*l, out);
            flatten_and(*r, out);
        }
        other => out.push(other),
    }
}

impl NormalClause {
    /// `pi xs. (G1 & ... & Gn) => A`; a fact when there are no antecedents.
    pub fn to_clause(&self) -> Clause {
        let inner = if self.antecedents.is_empty() {
            Clause::Fact(self.head.clone())
        } else {
            Clause::imp(Goal::conj(self.antecedents.clone()), Clause::Fact(self.head.clone()))
        };
        self.binders.iter().rev().fold(inner, |acc, b| Clause::pi(b.clone(), acc))
    }

    pub fn head_pred(&self) -> &Symbol {
        &self.head.pred
    }
}

/// Serializes formulas with canonical names: binders by depth, free variables by
/// first occurrence, terms with de Bruijn indices.
#[derive(Default)]
struct KeyWriter {
    out: String,
    bound: Vec<Symbol>,
    free: Vec<Symbol>,
}

impl KeyWriter {
    fn binder(&mut self, b: &Binder) {
        self.out.push_str(&format!("Π{}:{}.", self.bound.len(), b.ty));
        self.bound.push(b.name.clone());
    }

    fn goal(&mut self, g: &Goal) {
        match g {
            Goal::Top => self.out.push('⊤'),
            Goal::Atom(a) => self.atom(a),
            Goal::And(l, r) => {
                self.out.push_str("(&");
                self.goal(l);
                self.out.push(' ');
                self.goal(r);
                self.out.push(')');
            }
            Goal::Implies(d, g) => {
                self.out.push_str("(⇒");
                self.clause(d);
                self.out.push(' ');
                self.goal(g);
                self.out.push(')');
            }
            Goal::Pi(b, g) => {
                self.binder(b);
                self.goal(g);
                self.bound.pop();
            }
        }
    }

    fn clause(&mut self, d: &Clause) {
        match d {
            Clause::Fact(a) => self.atom(a),
            Clause::Imp(g, d) => {
                self.out.push_str("(⊃");
                self.goal(g);
                self.out.push(' ');
                self.clause(d);
                self.out.push(')');
            }
            Clause::Pi(b, d) => {
                self.binder(b);
                self.clause(d);
                self.bound.pop();
            }
        }
    }

    fn atom(&mut self, a: &Atom) {
        self.out.push('(');
        self.out.push_str(&a.pred);
        for t in &a.args {
            self.out.push(' ');
            let n = normalize(t);
            self.term(&n);
        }
        self.out.push(')');
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Const(n, _) => self.out.push_str(n),
            Term::Var(n, _) => {
                if let Some(i) = self.bound.iter().rposition(|b| b == n) {
                    self.out.push_str(&format!("%{i}"));
                } else {
                    let i = match self.free.iter().position(|f| f == n) {
                        Some(i) => i,
                        None => {
                            self.free.push(n.clone());
                            self.free.len() - 1
                        }
                    };
                    self.out.push_str(&format!("$%{i}"));
                }
            }
            Term::Bound(i, _) => self.out.push_str(&format!("#{i}")),
            Term::Meta(m, _) => self.out.push_str(&format!("?{m}")),
            Term::Abs(_, ty, b) => {
                self.out.push_str(&format!("(λ{ty}."));
                self.term(b);
                self.out.push(')');
            }
            Term::App(f, a) => {
                self.out.push('(');
                self.term(f);
                self.out.push(' ');
                self.term(a);
                self.out.push(')');
            }
        }
    }
}
