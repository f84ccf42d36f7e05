use std::fmt;

use crate::kernel::{Symbol, Term};
use crate::syntax::{Atom, Clause, Goal};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseSource {
    /// Index into the static context, in program order.
    Static(usize),
    /// Index into the dynamic context at that point, oldest first.
    Dynamic(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    TopR,
    AndR,
    ImpR,
    PiR { eigen: Symbol },
    Focus { source: ClauseSource },
    ImpL,
    PiL { witness: Term },
    Init,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::TopR => "top_r",
            Rule::AndR => "and_r",
            Rule::ImpR => "imp_r",
            Rule::PiR { .. } => "pi_r",
            Rule::Focus { .. } => "focus",
            Rule::ImpL => "imp_l",
            Rule::PiL { .. } => "pi_l",
            Rule::Init => "init",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Judgment {
    /// `Σ; Γ; Δ ⊢ G`
    Goal(Goal),
    /// `Σ; Γ; Δ; [D] ⊢ A`
    Focused { clause: Clause, atom: Atom },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceNode {
    pub rule: Rule,
    pub judgment: Judgment,
    pub children: Vec<TraceNode>,
}

impl TraceNode {
    pub fn new(rule: Rule, judgment: Judgment, children: Vec<TraceNode>) -> Self {
        TraceNode { rule, judgment, children }
    }

    pub(crate) fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> TraceNode {
        let rule = match &self.rule {
            Rule::PiL { witness } => Rule::PiL { witness: f(witness) },
            r => r.clone(),
        };
        let judgment = match &self.judgment {
            Judgment::Goal(g) => Judgment::Goal(g.map_terms(f)),
            Judgment::Focused { clause, atom } => Judgment::Focused { clause: clause.map_terms(f), atom: atom.map_terms(f) },
        };
        TraceNode { rule, judgment, children: self.children.iter().map(|c| c.map_terms(f)).collect() }
    }

    fn write(&self, indent: usize, out: &mut String) {
        out.push_str(&"  ".repeat(indent));
        out.push_str(self.rule.name());
        match &self.rule {
            Rule::PiR { eigen } => out.push_str(&format!(" {eigen}")),
            Rule::Focus { source: ClauseSource::Static(i) } => out.push_str(&format!(" static:{i}")),
            Rule::Focus { source: ClauseSource::Dynamic(i) } => out.push_str(&format!(" dynamic:{i}")),
            Rule::PiL { witness } => out.push_str(&format!(" {witness}")),
            _ => {}
        }
        out.push_str("  ");
        match &self.judgment {
            Judgment::Goal(g) => out.push_str(&format!("|- {g}")),
            Judgment::Focused { clause, atom } => out.push_str(&format!("[{}] |- {atom}", clause.to_closed_string())),
        }
        out.push('\n');
        for c in &self.children {
            c.write(indent + 1, out);
        }
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a TraceNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }
}

/// A derivation tree, one rule application per node.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationTrace {
    pub root: TraceNode,
}

impl DerivationTrace {
    /// Rule names in pre-order.
    pub fn rules(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        self.root.walk(&mut |n| v.push(n.rule.name()));
        v
    }

    pub fn size(&self) -> usize {
        self.rules().len()
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.root.write(0, &mut s);
        f.write_str(&s)
    }
}
