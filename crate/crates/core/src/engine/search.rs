use std::sync::Arc;

use super::trace::{ClauseSource, Judgment, Rule, TraceNode};
use super::unify::{Store, UnifyError};
use crate::kernel::{fresh_name, Signature, Symbol, Term};
use crate::syntax::{Atom, Clause, Goal};

pub(crate) type Cont<'k, 'a, T> = &'k mut dyn FnMut(&mut Search<'a>, T) -> bool;

#[derive(Clone)]
pub(crate) struct Env {
    pub dynamic: Vec<Arc<Clause>>,
    /// Level of the innermost eigenvariable in scope.
    pub level: u32,
}

/// Depth-bounded proof search for the focused sequent calculus.
pub(crate) struct Search<'a> {
    sig: &'a Signature,
    statics: &'a [Arc<Clause>],
    pub store: Store,
    pub bound_hit: bool,
    pub non_pattern: bool,
}

enum Step {
    Pi(Clause, Term),
    Imp(Clause),
}

impl<'a> Search<'a> {
    pub fn new(sig: &'a Signature, statics: &'a [Arc<Clause>]) -> Self {
        Search { sig, statics, store: Store::default(), bound_hit: false, non_pattern: false }
    }

    pub fn goal(&mut self, g: &Goal, env: &Env, depth: u32, k: Cont<'_, 'a, TraceNode>) -> bool {
        // continuations nest as deep as the partial proof is large
        stacker::maybe_grow(128 * 1024, 4 * 1024 * 1024, || self.goal_inner(g, env, depth, k))
    }

    fn goal_inner(&mut self, g: &Goal, env: &Env, depth: u32, k: Cont<'_, 'a, TraceNode>) -> bool {
        let judgment = || Judgment::Goal(g.clone());
        match g {
            Goal::Top => k(self, TraceNode::new(Rule::TopR, judgment(), vec![])),
            Goal::And(l, r) => self.goal(l, env, depth, &mut |s, left| {
                s.goal(r, env, depth, &mut |s2, right| k(s2, TraceNode::new(Rule::AndR, judgment(), vec![left.clone(), right])))
            }),
            Goal::Implies(d, body) => {
                let mut env2 = env.clone();
                env2.dynamic.push(Arc::new((**d).clone()));
                self.goal(body, &env2, depth, &mut |s, t| k(s, TraceNode::new(Rule::ImpR, judgment(), vec![t])))
            }
            Goal::Pi(b, body) => {
                let mark = self.store.mark();
                let name = self.fresh_eigen(&b.name);
                let level = self.store.new_eigen(name.clone(), b.ty.clone());
                let body = body.subst(&b.name, &Term::Const(name.clone(), b.ty.clone()));
                let env2 = Env { dynamic: env.dynamic.clone(), level };
                let ok = self.goal(&body, &env2, depth, &mut |s, t| {
                    k(s, TraceNode::new(Rule::PiR { eigen: name.clone() }, judgment(), vec![t]))
                });
                if !ok {
                    self.store.undo(mark);
                }
                ok
            }
            Goal::Atom(a) => {
                if depth == 0 {
                    self.bound_hit = true;
                    return false;
                }
                for i in (0..env.dynamic.len()).rev() {
                    let d = env.dynamic[i].clone();
                    if d.head_pred() != &a.pred {
                        continue;
                    }
                    let source = ClauseSource::Dynamic(i);
                    if self.focus(&d, a, env, depth - 1, &mut |s, t| k(s, TraceNode::new(Rule::Focus { source }, judgment(), vec![t]))) {
                        return true;
                    }
                }
                let statics = self.statics;
                for (i, d) in statics.iter().enumerate() {
                    if d.head_pred() != &a.pred {
                        continue;
                    }
                    let source = ClauseSource::Static(i);
                    if self.focus(d, a, env, depth - 1, &mut |s, t| k(s, TraceNode::new(Rule::Focus { source }, judgment(), vec![t]))) {
                        return true;
                    }
                }
                false
            }
        }
    }

    /// Backchain on `d` against `a`: decompose, unify the head, then solve the antecedents.
    pub fn focus(&mut self, d: &Clause, a: &Atom, env: &Env, depth: u32, k: Cont<'_, 'a, TraceNode>) -> bool {
        let mark = self.store.mark();
        let mut steps = Vec::new();
        let mut antecedents = Vec::new();
        let mut cur = d.clone();
        let head = loop {
            match cur {
                Clause::Pi(ref b, ref body) => {
                    let m = self.store.new_meta(b.ty.clone(), env.level);
                    let next = body.subst(&b.name, &m);
                    steps.push(Step::Pi(cur.clone(), m));
                    cur = next;
                }
                Clause::Imp(ref g, ref body) => {
                    antecedents.push(g.clone());
                    let next = (**body).clone();
                    steps.push(Step::Imp(cur.clone()));
                    cur = next;
                }
                Clause::Fact(h) => break h,
            }
        };
        match self.store.unify_atoms(&head, a) {
            Ok(()) => {}
            Err(e) => {
                if e == UnifyError::NotPattern {
                    self.non_pattern = true;
                }
                self.store.undo(mark);
                return false;
            }
        }
        if (depth as usize) < antecedents.len() {
            self.bound_hit = true;
            self.store.undo(mark);
            return false;
        }
        let init = TraceNode::new(Rule::Init, Judgment::Focused { clause: Clause::Fact(head), atom: a.clone() }, vec![]);
        let ok = self.antecedents(&antecedents, 0, env, depth, Vec::new(), &mut |s, traces| {
            let mut node = init.clone();
            let mut traces = traces.into_iter().rev();
            for step in steps.iter().rev() {
                node = match step {
                    Step::Pi(c, m) => TraceNode::new(
                        Rule::PiL { witness: m.clone() },
                        Judgment::Focused { clause: c.clone(), atom: a.clone() },
                        vec![node],
                    ),
                    Step::Imp(c) => TraceNode::new(
                        Rule::ImpL,
                        Judgment::Focused { clause: c.clone(), atom: a.clone() },
                        vec![traces.next().expect("one trace per antecedent"), node],
                    ),
                };
            }
            k(s, node)
        });
        if !ok {
            self.store.undo(mark);
        }
        ok
    }

    fn antecedents(
        &mut self,
        goals: &[Goal],
        i: usize,
        env: &Env,
        depth: u32,
        acc: Vec<TraceNode>,
        k: Cont<'_, 'a, Vec<TraceNode>>,
    ) -> bool {
        if i == goals.len() {
            return k(self, acc);
        }
        self.goal(&goals[i], env, depth - (i as u32 + 1), &mut |s, t| {
            let mut acc2 = acc.clone();
            acc2.push(t);
            s.antecedents(goals, i + 1, env, depth, acc2, k)
        })
    }

    fn fresh_eigen(&self, base: &Symbol) -> Symbol {
        let taken = |s: &str| self.sig.contains(s) || self.store.is_eigen(s);
        if taken(base) {
            fresh_name(base, taken)
        } else {
            base.clone()
        }
    }
}
