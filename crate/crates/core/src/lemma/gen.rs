use indexmap::IndexMap;
use thiserror::Error;

use super::abella::{AFormula, ATerm, AbellaArtifact, AbellaItem, DefClause, Tactic};
use super::convert::Namer;
use super::spec::{emit_mod, emit_sig};
use crate::analysis::{clause_id, StrengthenCheck, Verdict};
use crate::kernel::{Signature, Symbol};
use crate::syntax::{normalize_clause, Clause, Goal, Program};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("the context of {a} is not contained in the context of {b}")]
    NotASubcontext { a: String, b: String },
    #[error("no analysis cell for predicate {0}")]
    PlanMismatch(Symbol),
    #[error("{0} may be used in deriving the goal; it cannot be strengthened away")]
    Blocked(Symbol),
    #[error("strengthening plan has no predicates")]
    EmptyPlan,
}

/// Everything needed to emit one strengthening development.
#[derive(Clone, Debug)]
pub struct StrengtheningPlan {
    pub goal: Goal,
    pub from: Clause,
    pub goal_pred: Symbol,
    pub from_pred: Symbol,
    /// a1..an; the goal's head predicate comes first.
    pub deps: Vec<Symbol>,
    pub contexts: IndexMap<Symbol, Vec<Clause>>,
    pub user_context: Symbol,
    pub user_formulas: Vec<Clause>,
}

impl StrengtheningPlan {
    pub fn new(check: &StrengthenCheck, from: &Clause, goal: &Goal, user_context: &str, user_formulas: &[Clause]) -> Result<Self, LemmaError> {
        let deps = match &check.verdict {
            Verdict::Blocked(f) => return Err(LemmaError::Blocked(f.clone())),
            Verdict::Validated { deps } => deps.clone(),
        };
        if deps.is_empty() {
            return Err(LemmaError::EmptyPlan);
        }
        let mut contexts = IndexMap::new();
        for a in &deps {
            let cell = check.analysis.contexts.get(a).ok_or_else(|| LemmaError::PlanMismatch(a.clone()))?;
            contexts.insert(a.clone(), cell.iter().cloned().collect());
        }
        Ok(StrengtheningPlan {
            goal: goal.clone(),
            from: from.clone(),
            goal_pred: check.goal_pred.clone(),
            from_pred: check.from_pred.clone(),
            deps,
            contexts,
            user_context: Symbol::from(user_context),
            user_formulas: user_formulas.to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.deps.len()
    }

    fn context(&self, a: &Symbol) -> Result<&[Clause], LemmaError> {
        self.contexts.get(a).map(|v| v.as_slice()).ok_or_else(|| LemmaError::PlanMismatch(a.clone()))
    }

    fn ih(&self, a: &Symbol) -> Result<String, LemmaError> {
        match self.deps.iter().position(|d| d == a) {
            Some(0) => Ok("IH".into()),
            Some(i) => Ok(format!("IH{i}")),
            None => Err(LemmaError::PlanMismatch(a.clone())),
        }
    }

    pub fn theorem_name(&self) -> String {
        format!("stren_{}_from_{}", self.goal_pred, self.from_pred)
    }

    /// The conjunct of the strengthening theorem that covers the goal's predicate.
    pub fn split_name(&self) -> String {
        if self.n() == 1 {
            self.theorem_name()
        } else {
            let i = self.deps.iter().position(|d| d == &self.goal_pred).unwrap_or(0);
            format!("{}_{}", self.theorem_name(), i + 1)
        }
    }

    pub fn user_theorem_name(&self) -> String {
        format!("{}_stren_{}", self.user_context, self.goal_pred)
    }
}

pub fn ctx_name(a: &str) -> String {
    format!("ctx_{a}")
}

pub fn subctx_name(a: &str, b: &str) -> String {
    format!("subctx_{a}_{b}")
}

fn sym(s: &str) -> String {
    s.to_string()
}

fn hyp(i: usize) -> String {
    format!("H{i}")
}

fn list_def(sig: &Signature, name: &str, formulas: &[Clause]) -> AbellaItem {
    let mut clauses = vec![DefClause { head: AFormula::atom(name, vec![ATerm::id("nil")]), body: None }];
    for f in formulas {
        let mut n = Namer::new(sig, &["L"]);
        let cell = ATerm::cons(n.clause(f), ATerm::id("L"));
        clauses.push(DefClause {
            head: AFormula::atom(name, vec![cell]),
            body: Some(AFormula::atom(name, vec![ATerm::id("L")])),
        });
    }
    AbellaItem::Define { name: sym(name), ty: "olist -> prop".into(), clauses }
}

/// `ctx_a nil` plus one cons clause per formula, in input order.
pub fn gen_ctx_definition(sig: &Signature, a: &str, formulas: &[Clause]) -> AbellaItem {
    list_def(sig, &ctx_name(a), formulas)
}

/// `forall E L, ctx_a L -> member E L -> (exists xs, E = F1) \/ ...`
pub fn gen_ctx_member_lemma(sig: &Signature, a: &str, formulas: &[Clause]) -> AbellaItem {
    let disjuncts = formulas
        .iter()
        .map(|f| {
            let mut n = Namer::new(sig, &["E", "L"]);
            let t = n.clause(f);
            AFormula::exists(n.free_vars().to_vec(), AFormula::Eq(ATerm::id("E"), t))
        })
        .collect();
    let formula = AFormula::forall(
        vec![sym("E"), sym("L")],
        AFormula::imp(
            AFormula::atom(&ctx_name(a), vec![ATerm::id("L")]),
            AFormula::imp(AFormula::atom("member", vec![ATerm::id("E"), ATerm::id("L")]), AFormula::disj(disjuncts)),
        ),
    );
    let mut proof = vec![Tactic::InductionOn(vec![1]), Tactic::Intros, Tactic::Case(hyp(1)), Tactic::Case(hyp(2))];
    for _ in formulas {
        proof.extend([
            Tactic::Case(hyp(2)),
            Tactic::Search,
            Tactic::Apply { lemma: "IH".into(), to: vec![hyp(3), hyp(4)] },
            Tactic::Search,
        ]);
    }
    AbellaItem::Theorem { name: format!("ctx_member_{a}"), formula, proof }
}

fn subctx_item(name: String, from_def: &str, to_def: &str, from: &[Clause], to: &[Clause]) -> Result<AbellaItem, LemmaError> {
    let target: Vec<String> = to.iter().map(clause_id).collect();
    if from.iter().any(|d| !target.contains(&clause_id(d))) {
        return Err(LemmaError::NotASubcontext { a: from_def.into(), b: to_def.into() });
    }
    let formula = AFormula::forall(
        vec![sym("L")],
        AFormula::imp(AFormula::atom(from_def, vec![ATerm::id("L")]), AFormula::atom(to_def, vec![ATerm::id("L")])),
    );
    let mut proof = vec![Tactic::InductionOn(vec![1]), Tactic::Intros, Tactic::Case(hyp(1)), Tactic::Search];
    for _ in from {
        proof.extend([Tactic::Apply { lemma: "IH".into(), to: vec![hyp(2)] }, Tactic::Search]);
    }
    Ok(AbellaItem::Theorem { name, formula, proof })
}

/// `forall L, ctx_a L -> ctx_b L`, given C(a) and C(b).
pub fn gen_subctx_lemma(a: &str, ca: &[Clause], b: &str, cb: &[Clause]) -> Result<AbellaItem, LemmaError> {
    subctx_item(subctx_name(a, b), &ctx_name(a), &ctx_name(b), ca, cb)
}

/// The mutually inductive theorem, one conjunct per predicate of the plan.
/// Its proof is left empty; see [`gen_stren_proof`].
pub fn gen_strengthening_conjunction(sig: &Signature, plan: &StrengtheningPlan) -> AbellaItem {
    let conjuncts = plan
        .deps
        .iter()
        .map(|a| {
            let k = sig.lookup(a).map(|t| t.arity()).unwrap_or(0);
            let xs: Vec<String> = (1..=k).map(|i| format!("X{i}")).collect();
            let mut reserved: Vec<&str> = vec!["L"];
            reserved.extend(xs.iter().map(|s| s.as_str()));
            let f = Namer::new(sig, &reserved).clause(&plan.from.close());
            let goal = ATerm::app(ATerm::id(a.as_str()), xs.iter().map(|x| ATerm::id(x.clone())).collect());
            let mut vars = vec![sym("L")];
            vars.extend(xs);
            AFormula::forall(
                vars,
                AFormula::imp(
                    AFormula::atom(&ctx_name(a), vec![ATerm::id("L")]),
                    AFormula::imp(
                        AFormula::Seq(vec![ATerm::id("L"), f], goal.clone()),
                        AFormula::Seq(vec![ATerm::id("L")], goal),
                    ),
                ),
            )
        })
        .collect();
    AbellaItem::Theorem { name: plan.theorem_name(), formula: AFormula::conj(conjuncts), proof: vec![] }
}

/// Tracks hypothesis numbering inside one subgoal.
struct Labels {
    count: usize,
}

impl Labels {
    fn next(&mut self) -> usize {
        self.count += 1;
        self.count
    }
}

struct StrenScript<'p> {
    plan: &'p StrengtheningPlan,
    tactics: Vec<Tactic>,
    /// (a, b) for every `subctx_a_b` applied, in order of first use.
    subctx: Vec<(Symbol, Symbol)>,
}

impl StrenScript<'_> {
    /// Backchaining on a clause with head `a` left its antecedents in the hypotheses after `labels.count`.
    fn antecedents(&mut self, a: &Symbol, antecedents: &[Goal], labels: &mut Labels) -> Result<(), LemmaError> {
        let base = labels.count;
        labels.count += antecedents.len();
        for (j, g) in antecedents.iter().enumerate() {
            let Ok(b) = g.head_pred() else { continue };
            self.plan.context(b)?;
            let ih = self.plan.ih(b)?;
            let lemma = subctx_name(a, b);
            if !self.subctx.iter().any(|(x, y)| x == a && y == b) {
                self.subctx.push((a.clone(), b.clone()));
            }
            self.tactics.push(Tactic::Apply { lemma, to: vec![hyp(1)] });
            let ctx_hyp = labels.next();
            self.tactics.push(Tactic::Apply { lemma: ih, to: vec![hyp(ctx_hyp), hyp(base + j + 1)] });
            labels.next();
        }
        self.tactics.push(Tactic::Search);
        Ok(())
    }

    fn predicate(&mut self, a: &Symbol, program: &Program) -> Result<(), LemmaError> {
        self.tactics.extend([Tactic::Intros, Tactic::Case(hyp(2))]);
        for d in program.clauses.iter().filter(|d| d.head_pred() == a) {
            let n = normalize_clause(d);
            self.antecedents(a, &n.antecedents, &mut Labels { count: 2 })?;
        }
        self.tactics.extend([Tactic::Case(hyp(4)), Tactic::Case(hyp(3))]);
        self.tactics.push(Tactic::Apply { lemma: format!("ctx_member_{a}"), to: vec![hyp(1), hyp(5)] });
        let dynamic = self.plan.context(a)?;
        let mut base = 6;
        if dynamic.len() > 1 {
            self.tactics.push(Tactic::Case(hyp(6)));
            base = 7;
        }
        for d in dynamic {
            self.tactics.push(Tactic::Case(hyp(3)));
            if d.head_pred() == a {
                let n = normalize_clause(d);
                self.antecedents(a, &n.antecedents, &mut Labels { count: base })?;
            }
        }
        Ok(())
    }
}

fn stren_script<'p>(plan: &'p StrengtheningPlan, program: &Program) -> Result<StrenScript<'p>, LemmaError> {
    if plan.deps.is_empty() {
        return Err(LemmaError::EmptyPlan);
    }
    let mut s = StrenScript { plan, tactics: vec![Tactic::InductionOn(vec![2; plan.n()])], subctx: vec![] };
    if plan.n() >= 2 {
        s.tactics.push(Tactic::Split);
    }
    for a in &plan.deps {
        s.predicate(a, program)?;
    }
    Ok(s)
}

/// Proof of the mutually inductive strengthening theorem.
pub fn gen_stren_proof(plan: &StrengtheningPlan, program: &Program) -> Result<Vec<Tactic>, LemmaError> {
    stren_script(plan, program).map(|s| s.tactics)
}

/// Proof of the user's theorem from the split conjunct for the goal's predicate.
pub fn gen_user_theorem_proof(plan: &StrengtheningPlan) -> Vec<Tactic> {
    vec![
        Tactic::Intros,
        Tactic::Apply { lemma: format!("{}_subctx_{}", plan.user_context, ctx_name(&plan.goal_pred)), to: vec![hyp(1)] },
        Tactic::Apply { lemma: plan.split_name(), to: vec![hyp(3), hyp(2)] },
        Tactic::Search,
    ]
}

fn user_theorem(sig: &Signature, plan: &StrengtheningPlan) -> AbellaItem {
    let mut n = Namer::new(sig, &["L"]);
    let g = n.goal(&plan.goal);
    let mut vars = vec![sym("L")];
    vars.extend(n.free_vars().iter().cloned());
    let f = n.clause(&plan.from.close());
    let formula = AFormula::forall(
        vars,
        AFormula::imp(
            AFormula::atom(&plan.user_context, vec![ATerm::id("L")]),
            AFormula::imp(AFormula::Seq(vec![ATerm::id("L"), f], g.clone()), AFormula::Seq(vec![ATerm::id("L")], g)),
        ),
    );
    AbellaItem::Theorem { name: plan.user_theorem_name(), formula, proof: gen_user_theorem_proof(plan) }
}

/// A complete development: the `.thm` items and their specification companions.
#[derive(Clone, Debug)]
pub struct Development {
    pub stem: String,
    pub plan: StrengtheningPlan,
    pub artifact: AbellaArtifact,
    pub sig: String,
    pub module: String,
}

impl Development {
    pub fn render(&self) -> String {
        super::render(&self.artifact).expect("generated developments are ordered")
    }
}

pub fn build_development(program: &Program, plan: StrengtheningPlan, stem: &str) -> Result<Development, LemmaError> {
    let sig = &program.signature;
    let mut items = vec![AbellaItem::Specification(stem.to_string())];
    for a in &plan.deps {
        items.push(gen_ctx_definition(sig, a, plan.context(a)?));
    }
    items.push(list_def(sig, &plan.user_context, &plan.user_formulas));
    for a in &plan.deps {
        items.push(gen_ctx_member_lemma(sig, a, plan.context(a)?));
    }

    let script = stren_script(&plan, program)?;
    for (a, b) in &script.subctx {
        items.push(gen_subctx_lemma(a.as_str(), plan.context(a)?, b.as_str(), plan.context(b)?)?);
    }
    let AbellaItem::Theorem { name, formula, .. } = gen_strengthening_conjunction(sig, &plan) else { unreachable!() };
    items.push(AbellaItem::Theorem { name: name.clone(), formula, proof: script.tactics });
    if plan.n() >= 2 {
        let names = (1..=plan.n()).map(|i| format!("{name}_{i}")).collect();
        items.push(AbellaItem::Split { source: name, names });
    }

    let goal_ctx = ctx_name(&plan.goal_pred);
    items.push(subctx_item(
        format!("{}_subctx_{goal_ctx}", plan.user_context),
        &plan.user_context,
        &goal_ctx,
        &plan.user_formulas,
        plan.context(&plan.goal_pred)?,
    )?);
    items.push(user_theorem(sig, &plan));

    Ok(Development {
        stem: stem.to_string(),
        artifact: AbellaArtifact { items },
        sig: emit_sig(program, stem),
        module: emit_mod(program, stem),
        plan,
    })
}
