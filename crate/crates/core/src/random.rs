//! Seeded generators for well-typed terms, propositional programs and
//! provable sequents. Every generator is a pure function of its RNG.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{solve, Sequent};
use crate::kernel::{Signature, Symbol, Term, Ty};
use crate::syntax::{Atom, Clause, Goal, Program};

pub use rand::SeedableRng;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

fn i() -> Ty {
    Ty::atom("i")
}

fn j() -> Ty {
    Ty::atom("j")
}

fn arr(a: Ty, b: Ty) -> Ty {
    Ty::arrow(a, b)
}

/// The signature random terms are drawn over: two base types, first- and
/// second-order constants, and a few free variables.
pub fn term_signature() -> Signature {
    let mut s = Signature::new();
    s.declare_kind("i").unwrap();
    s.declare_kind("j").unwrap();
    let consts = [
        ("a", i()),
        ("b", i()),
        ("c", j()),
        ("f", arr(i(), i())),
        ("g", arr(i(), arr(i(), i()))),
        ("h", arr(arr(i(), i()), i())),
        ("k", arr(i(), j())),
    ];
    for (n, t) in consts {
        s.declare_const(n, t).unwrap();
    }
    for (n, t) in [("x", i()), ("y", i()), ("u", arr(i(), i())), ("w", j())] {
        s.declare_var(n, t).unwrap();
    }
    s
}

/// Generates well-typed terms, redexes included, over [`term_signature`].
pub struct TermGen {
    sig: Signature,
    /// Lambda-bound names in scope, innermost last.
    env: Vec<(Symbol, Ty)>,
}

const BINDERS: [&str; 3] = ["z", "v", "x"];

impl Default for TermGen {
    fn default() -> Self {
        Self::new()
    }
}

impl TermGen {
    pub fn new() -> Self {
        TermGen { sig: term_signature(), env: Vec::new() }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    fn visible(&self) -> Vec<(Symbol, Ty, bool)> {
        let mut out: Vec<(Symbol, Ty, bool)> = Vec::new();
        for (n, t) in self.env.iter().rev() {
            if !out.iter().any(|(m, _, _)| m == n) {
                out.push((n.clone(), t.clone(), true));
            }
        }
        for (n, t) in self.sig.constants() {
            out.push((n.clone(), t.clone(), false));
        }
        for (n, t) in self.sig.variables() {
            if !out.iter().any(|(m, _, _)| m == n) {
                out.push((n.clone(), t.clone(), true));
            }
        }
        out
    }

    fn leaf(n: &Symbol, t: &Ty, var: bool) -> Term {
        if var {
            Term::var(n.clone(), t.clone())
        } else {
            Term::constant(n.clone(), t.clone())
        }
    }

    /// A term of type `ty` of size at most about `budget`.
    pub fn term(&mut self, rng: &mut Rand, ty: &Ty, budget: usize) -> Term {
        let heads: Vec<(Symbol, Ty, bool, usize)> = self
            .visible()
            .into_iter()
            .flat_map(|(n, t, v)| {
                let (args, _) = t.split();
                (0..=args.len()).filter(|&k| &t.result_after(k) == ty).map(|k| (n.clone(), t.clone(), v, k)).collect::<Vec<_>>()
            })
            .collect();
        let atomic: Vec<_> = heads.iter().filter(|h| h.3 == 0).collect();

        if budget <= 2 || rng.gen_bool(0.2) {
            if let Some((n, t, v, _)) = atomic.choose(rng) {
                return Self::leaf(n, t, *v);
            }
        }
        let roll = rng.gen_range(0..10);
        if let Ty::Arrow(dom, cod) = ty {
            if roll < 5 || budget <= 2 {
                return self.lambda(rng, dom, cod, budget - 1);
            }
        }
        if roll == 9 && budget >= 5 {
            let sigma = if rng.gen_bool(0.7) { i() } else { arr(i(), i()) };
            let name = Symbol::from(*BINDERS.choose(rng).unwrap());
            let arg = self.term(rng, &sigma, budget / 3);
            self.env.push((name.clone(), sigma.clone()));
            let body = self.term(rng, ty, budget - 2 - arg.size().min(budget - 3));
            self.env.pop();
            let lam = Term::lam(name, sigma, body).expect("well-typed body");
            return Term::app(lam, arg).expect("matching argument");
        }
        let apps: Vec<_> = heads.iter().filter(|h| h.3 > 0).collect();
        match apps.choose(rng) {
            Some((n, t, v, k)) if budget > 1 + k => {
                let (args, _) = t.split();
                let mut left = budget - 1;
                let mut out = Self::leaf(n, t, *v);
                for (idx, a) in args.iter().take(*k).enumerate() {
                    let share = (left / (k - idx)).max(1);
                    let arg = self.term(rng, a, share);
                    left = left.saturating_sub(arg.size());
                    out = Term::app(out, arg).expect("typed argument");
                }
                out
            }
            _ => match (atomic.choose(rng), ty) {
                (Some((n, t, v, _)), _) => Self::leaf(n, t, *v),
                (None, Ty::Arrow(dom, cod)) => self.lambda(rng, dom, cod, budget.saturating_sub(1).max(1)),
                (None, _) => unreachable!("every base type has a constant"),
            },
        }
    }

    fn lambda(&mut self, rng: &mut Rand, dom: &Ty, cod: &Ty, budget: usize) -> Term {
        let name = Symbol::from(*BINDERS.choose(rng).unwrap());
        self.env.push((name.clone(), dom.clone()));
        let body = self.term(rng, cod, budget.max(1));
        self.env.pop();
        Term::lam(name, dom.clone(), body).expect("well-typed body")
    }

    /// A random type of the shapes the signature can inhabit.
    pub fn ty(&self, rng: &mut Rand) -> Ty {
        [i(), i(), j(), arr(i(), i()), arr(i(), j()), arr(arr(i(), i()), i())].choose(rng).unwrap().clone()
    }
}

/// A well-typed term of size at most `max_size`, with its type.
pub fn random_term(rng: &mut Rand, max_size: usize) -> (Term, Ty) {
    let mut g = TermGen::new();
    loop {
        let ty = g.ty(rng);
        let budget = rng.gen_range(1..=max_size.max(1));
        let t = g.term(rng, &ty, budget);
        if t.size() <= max_size {
            return (t, ty);
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PropParams {
    pub max_preds: usize,
    pub max_clauses: usize,
    /// Maximum nesting of implications inside a clause.
    pub max_nesting: usize,
}

impl Default for PropParams {
    fn default() -> Self {
        PropParams { max_preds: 6, max_clauses: 8, max_nesting: 3 }
    }
}

struct PropGen<'r> {
    rng: &'r mut Rand,
    preds: Vec<Symbol>,
}

impl PropGen<'_> {
    fn atom(&mut self) -> Atom {
        Atom::new(self.preds.choose(self.rng).unwrap().clone(), vec![])
    }

    fn goal(&mut self, nesting: usize) -> Goal {
        match self.rng.gen_range(0..10) {
            0..=4 => Goal::Atom(self.atom()),
            5 | 6 => Goal::and(self.goal(nesting), self.goal(nesting)),
            7 | 8 if nesting > 0 => Goal::implies(self.clause(nesting - 1), self.goal(nesting - 1)),
            9 if self.rng.gen_bool(0.3) => Goal::Top,
            _ => Goal::Atom(self.atom()),
        }
    }

    fn clause(&mut self, nesting: usize) -> Clause {
        if nesting > 0 && self.rng.gen_bool(0.55) {
            Clause::imp(self.goal(nesting - 1), self.clause(nesting - 1))
        } else {
            Clause::Fact(self.atom())
        }
    }
}

fn prop_signature(preds: &[Symbol]) -> Signature {
    let mut s = Signature::new();
    for p in preds {
        s.declare_const(p.clone(), Ty::prop()).unwrap();
    }
    s
}

/// One random strengthening question over a propositional program.
#[derive(Clone, Debug)]
pub struct PropCase {
    pub program: Program,
    pub from: Clause,
    pub goal: Goal,
}

pub fn random_prop_clause(rng: &mut Rand, preds: &[Symbol], max_nesting: usize) -> Clause {
    PropGen { rng, preds: preds.to_vec() }.clause(max_nesting)
}

pub fn random_prop_program(rng: &mut Rand, params: PropParams) -> Program {
    let n = rng.gen_range(1..=params.max_preds);
    let preds: Vec<Symbol> = (0..n).map(|k| Symbol::from(format!("p{k}"))).collect();
    let m = rng.gen_range(1..=params.max_clauses);
    let mut g = PropGen { rng, preds: preds.clone() };
    let clauses = (0..m).map(|_| g.clause(params.max_nesting)).collect();
    Program::new(prop_signature(&preds), clauses)
}

/// A program, a clause F to strengthen away and a goal whose predicate the program defines.
pub fn random_prop_case(rng: &mut Rand, params: PropParams) -> PropCase {
    let program = random_prop_program(rng, params);
    let preds: Vec<Symbol> = program.signature.predicates().map(|(p, _)| p.clone()).collect();
    let from = if rng.gen_bool(0.5) {
        (**program.clauses.choose(rng).unwrap()).clone()
    } else {
        random_prop_clause(rng, &preds, params.max_nesting.min(2))
    };
    let heads: Vec<Symbol> = program.clauses.iter().map(|d| d.head_pred().clone()).collect();
    let head = heads.choose(rng).unwrap().clone();
    let goal = if rng.gen_bool(0.25) {
        let d = random_prop_clause(rng, &preds, 1);
        Goal::implies(d, Goal::atom(head, vec![]))
    } else {
        Goal::atom(head, vec![])
    };
    PropCase { program, from, goal }
}

fn random_list(rng: &mut Rand, len: usize) -> Term {
    let nat = Ty::atom("nat");
    let lst = Ty::atom("lst");
    let mut out = Term::constant("nil", lst.clone());
    for _ in 0..len {
        let mut n = Term::constant("z", nat.clone());
        for _ in 0..rng.gen_range(0..3) {
            n = Term::app(Term::constant("s", arr(nat.clone(), nat.clone())), n).unwrap();
        }
        let cons = Term::constant("cons", arr(nat.clone(), arr(lst.clone(), lst.clone())));
        out = Term::apply(cons, [n, out]).unwrap();
    }
    out
}

fn append_program() -> Program {
    let text = "kind nat type. kind lst type. type z nat. type s nat -> nat. type nil lst.\n\
                type cons nat -> lst -> lst. type append lst -> lst -> lst -> o.\n\
                append nil L L.\n\
                append K L M => append (cons X K) L (cons X M).";
    crate::syntax::parse_program(text).expect("append program parses")
}

/// A sequent that `solve` proves within `depth`, or `None` when the draws all failed.
pub fn random_proved_sequent(rng: &mut Rand, depth: u32) -> Option<Sequent> {
    for _ in 0..64 {
        let s = if rng.gen_bool(0.3) {
            let program = append_program();
            let lst = Ty::atom("lst");
            let n = rng.gen_range(0..(depth as usize).clamp(1, 4));
            let a = random_list(rng, n);
            let m = rng.gen_range(0..3);
            let b = random_list(rng, m);
            let goal = Goal::atom("append", vec![a, b, Term::var("R", lst)]);
            Sequent::new(&program, goal)
        } else {
            let case = random_prop_case(rng, PropParams::default());
            let preds: Vec<Symbol> = case.program.signature.predicates().map(|(p, _)| p.clone()).collect();
            let k = rng.gen_range(0..3);
            let dyns = (0..k).map(|_| random_prop_clause(rng, &preds, 1)).collect();
            Sequent::new(&case.program, case.goal).with_dynamics(dyns)
        };
        if matches!(solve(&s, depth), Ok(o) if o.is_proved()) {
            return Some(s);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::infer_type;

    #[test]
    fn terms_are_well_typed_and_bounded() {
        let mut r = rng(7);
        let g = TermGen::new();
        for _ in 0..300 {
            let (t, ty) = random_term(&mut r, 25);
            assert!(t.size() <= 25);
            assert_eq!(infer_type(g.signature(), &t).unwrap(), ty, "{t}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a: Vec<String> = (0..20).map(|_| random_term(&mut rng(3), 25).0.to_string()).collect();
        let b: Vec<String> = (0..20).map(|_| random_term(&mut rng(3), 25).0.to_string()).collect();
        assert_eq!(a, b);
        let p = random_prop_program(&mut rng(11), PropParams::default());
        assert_eq!(p.to_source(), random_prop_program(&mut rng(11), PropParams::default()).to_source());
    }

    #[test]
    fn prop_programs_respect_bounds() {
        let mut r = rng(1);
        for _ in 0..200 {
            let p = random_prop_program(&mut r, PropParams::default());
            assert!(p.clauses.len() <= 8);
            assert!(p.signature.predicates().count() <= 6);
        }
    }

    #[test]
    fn proved_sequents_are_found() {
        let mut r = rng(5);
        let found = (0..20).filter(|_| random_proved_sequent(&mut r, 6).is_some()).count();
        assert!(found >= 15, "{found}");
    }
}
