use std::fmt::Write;

use crate::syntax::print::FormulaPrinter;
use crate::syntax::{normalize_clause, Clause, Program};

fn strip_implicit(d: &Clause) -> &Clause {
    match d {
        Clause::Pi(b, body) if b.implicit => strip_implicit(body),
        _ => d,
    }
}

/// One `.mod` clause: `A :- G1, G2.` when the clause is a plain implication chain.
fn module_clause(p: &mut FormulaPrinter, d: &Clause, out: &mut String) {
    let d = strip_implicit(d);
    if matches!(d, Clause::Pi(..)) {
        p.clause(d, 0, out);
    } else {
        let n = normalize_clause(d);
        p.atom(&n.head, out);
        for (i, g) in n.antecedents.iter().enumerate() {
            out.push_str(if i == 0 { " :- " } else { ", " });
            p.goal(g, 1, out);
        }
    }
    out.push_str(".\n");
}

/// The `.sig` file named by a `Specification` header.
pub fn emit_sig(program: &Program, stem: &str) -> String {
    let mut out = format!("sig {stem}.\n\n");
    for k in program.signature.kinds() {
        let _ = writeln!(out, "kind {k} type.");
    }
    for (c, t) in program.signature.constants() {
        let _ = writeln!(out, "type {c} {t}.");
    }
    out
}

pub fn emit_mod(program: &Program, stem: &str) -> String {
    let mut out = format!("module {stem}.\n\n");
    let mut p = FormulaPrinter::new();
    p.annotate = false;
    for d in &program.clauses {
        module_clause(&mut p, d, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    #[test]
    fn list_minus_companions() {
        let p = parse_program(
            "kind elt type. kind lst type. type null lst. type cons elt -> lst -> lst.\n\
             type lm elt -> lst -> lst -> o.\n\
             lm X (cons X L) L.\n\
             lm X L K => lm X (cons Y L) (cons Y K).",
        )
        .unwrap();
        let s = emit_sig(&p, "lm");
        assert!(s.starts_with("sig lm.\n\nkind elt type.\nkind lst type.\ntype null lst.\n"));
        assert!(s.contains("type cons elt -> lst -> lst.\n"));
        assert_eq!(emit_mod(&p, "lm"), "module lm.\n\nlm X (cons X L) L.\nlm X (cons Y L) (cons Y K) :- lm X L K.\n");
    }

    #[test]
    fn nested_antecedents_keep_parentheses() {
        let p = parse_program("type f, b, a, g o. f => b. (b => a) => g. a & b => g.").unwrap();
        assert_eq!(emit_mod(&p, "h"), "module h.\n\nb :- f.\ng :- (b => a).\ng :- a, b.\n");
    }
}
