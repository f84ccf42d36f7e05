use super::*;
use crate::kernel::Ty;

const APPEND: &str = include_str!("../../../../corpus/append.hh");
const TYPEOF: &str = include_str!("../../../../corpus/typeof.hh");
const CONSERVATIVE: &str = include_str!("../../../../corpus/conservative.hh");
const LIST_MINUS: &str = include_str!("../../../../corpus/list_minus.hh");
const TYPEOF_NAT: &str = include_str!("../../../../corpus/typeof_nat.hh");

fn names(bs: &[Binder]) -> Vec<String> {
    bs.iter().map(|b| b.name.to_string()).collect()
}

#[test]
fn fact_with_implicit_binder() {
    let p = parse_program("kind list type. type nil list. type append list -> list -> list -> o. append nil L L.").unwrap();
    assert_eq!(p.clauses.len(), 1);
    let nc = normalize_clause(&p.clauses[0]);
    assert_eq!(names(&nc.binders), vec!["L"]);
    assert_eq!(nc.binders[0].ty, Ty::atom("list"));
    assert!(nc.binders[0].implicit);
    assert!(nc.antecedents.is_empty());
    assert_eq!(p.clauses[0].to_string(), "append nil L L");
}

#[test]
fn empty_program() {
    let p = parse_program("").unwrap();
    assert!(p.clauses.is_empty());
    assert!(p.predicates().is_empty());
}

#[test]
fn unbalanced_paren_is_syntax_error() {
    let src = format!("{TYPEOF}\npi x \\ typeof x T1 => typeof (M x) T2) => typeof (abs T1 M) (arr T1 T2).");
    assert!(matches!(parse_program(&src), Err(ParseError::Syntax { .. })));
}

#[test]
fn append_cons_clause_normalizes() {
    let p = parse_program(APPEND).unwrap();
    let nc = normalize_clause(&p.clauses[1]);
    assert_eq!(names(&nc.binders), vec!["L1", "L2", "L3", "X"]);
    assert_eq!(nc.antecedents.len(), 1);
    assert_eq!(nc.antecedents[0].to_string(), "append L1 L2 L3");
    assert_eq!(nc.head.to_string(), "append (cons X L1) L2 (cons X L3)");
}

#[test]
fn typeof_app_clause_flattens_chained_implications() {
    let p = parse_program(TYPEOF).unwrap();
    let nc = normalize_clause(&p.clauses[0]);
    let ants: Vec<String> = nc.antecedents.iter().map(|g| g.to_string()).collect();
    assert_eq!(ants, vec!["typeof M1 (arr T1 T2)", "typeof M2 T1"]);
    assert_eq!(nc.head.to_string(), "typeof (app M1 M2) T2");
}

#[test]
fn typeof_abs_clause_infers_higher_order_variable() {
    let p = parse_program(TYPEOF).unwrap();
    let nc = normalize_clause(&p.clauses[1]);
    let m = nc.binders.iter().find(|b| &*b.name == "M").unwrap();
    assert_eq!(m.ty.to_string(), "tm -> tm");
    assert_eq!(nc.antecedents[0].to_string(), "pi x : tm \\ typeof x T1 => typeof (M x) T2");
}

#[test]
fn fact_q_has_no_antecedents() {
    let p = parse_program("type q o. q.").unwrap();
    let nc = normalize_clause(&p.clauses[0]);
    assert!(nc.antecedents.is_empty() && nc.binders.is_empty());
    assert_eq!(&*nc.head.pred, "q");
}

#[test]
fn head_pred_examples() {
    let p = parse_program("type r, s o. s => r.").unwrap();
    assert_eq!(&**p.clauses[0].head_pred(), "r");
    let ap = parse_program(APPEND).unwrap();
    let g = ap.parse_goal("append nil L L").unwrap();
    assert_eq!(&**g.head_pred().unwrap(), "append");
    assert_eq!(Goal::Top.head_pred(), Err(NoHead));
}

#[test]
fn body_examples() {
    let p = parse_program(CONSERVATIVE).unwrap();
    let g = p.parse_goal("(s => r) => p").unwrap();
    let b: Vec<String> = g.body().iter().map(|c| c.to_string()).collect();
    assert_eq!(b, vec!["s => r"]);

    let t = parse_program(TYPEOF).unwrap();
    let nc = normalize_clause(&t.clauses[1]);
    let b: Vec<String> = nc.antecedents[0].body().iter().map(|c| c.to_string()).collect();
    assert_eq!(b, vec!["typeof x T1"]);

    let a = parse_program(APPEND).unwrap();
    assert!(a.parse_goal("append L1 L2 L3").unwrap().body().is_empty());
}

#[test]
fn body_does_not_descend_into_conjunction() {
    let p = parse_program("type a, b, c o.").unwrap();
    let g = p.parse_goal("a => (b => c) & c").unwrap();
    assert_eq!(g.body().len(), 1);
    let leaves = g.leaves();
    assert_eq!(leaves.len(), 2);
    assert_eq!(leaves[0].assumptions.len(), 2);
    assert_eq!(leaves[1].assumptions.len(), 1);
}

#[test]
fn non_rigid_atoms_rejected() {
    let base = "kind i type. type p i -> o. type c i.";
    assert!(matches!(parse_program(&format!("{base} X c.")), Err(ParseError::NonRigidAtom { .. })));
    assert!(matches!(parse_program(&format!("{base} pi q : o \\ q => p c.")), Err(ParseError::NonRigidAtom { .. })));
}

#[test]
fn unknown_constant_named() {
    match parse_program("type p o. p => zork.") {
        Err(ParseError::UnknownIdentifier { name, .. }) => assert_eq!(name, "zork"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn type_errors_carry_clause_index() {
    let base = "kind i type. kind j type. type p i -> o. type c i. type d j.";
    match parse_program(&format!("{base} p c. p d.")) {
        Err(ParseError::Type { clause, .. }) => assert_eq!(clause, 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn ambiguous_type_rejected() {
    let r = parse_program("type q o. pi x \\ q.");
    assert!(matches!(r, Err(ParseError::Type { .. })), "{r:?}");
}

#[test]
fn directives_parse() {
    let p = parse_program(LIST_MINUS).unwrap();
    let s = p.strengthen.as_ref().unwrap();
    assert_eq!(&*s.context, "lctx");
    assert_eq!(s.from.to_string(), "append null L L");
    assert!(s.from.is_closed());
    assert_eq!(s.goal.to_string(), "list_minus X L1 L2");
    assert_eq!(p.contexts.get("lctx").map(|v| v.len()), Some(0));

    let t = parse_program(TYPEOF_NAT).unwrap();
    let ctx = &t.contexts["tctx"];
    assert_eq!(ctx.len(), 1);
    assert_eq!(ctx[0].free_vars().len(), 2);
}

#[test]
fn predicates_include_goal_only_atoms() {
    let p = parse_program(CONSERVATIVE).unwrap();
    let ps: Vec<String> = p.predicates().into_iter().map(|s| s.to_string()).collect();
    assert_eq!(ps, vec!["p", "q", "r", "s"]);
}

fn reparse_equal(src: &str) {
    let p1 = parse_program(src).unwrap();
    let printed = p1.to_source();
    let p2 = parse_program(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
    assert_eq!(p1, p2, "{printed}");
}

#[test]
fn corpus_round_trips() {
    for src in [APPEND, TYPEOF, CONSERVATIVE, LIST_MINUS, TYPEOF_NAT] {
        reparse_equal(src);
    }
}

#[test]
fn normalize_clause_is_idempotent_on_corpus() {
    for src in [APPEND, TYPEOF, CONSERVATIVE, LIST_MINUS] {
        let p = parse_program(src).unwrap();
        for c in &p.clauses {
            let n1 = normalize_clause(c);
            let n2 = normalize_clause(&n1.to_clause());
            assert_eq!(n1, n2);
            assert_eq!(n1.head_pred(), c.head_pred());
        }
    }
}

#[test]
fn hoisting_renames_clashing_binder() {
    let p = parse_program("kind i type. type p, q i -> o.").unwrap();
    let c = p.parse_clause("pi x : i \\ q x => pi x : i \\ p x").unwrap();
    let nc = normalize_clause(&c);
    assert_eq!(names(&nc.binders), vec!["x", "x1"]);
    assert_eq!(nc.head.to_string(), "p x1");
    assert_eq!(normalize_clause(&nc.to_clause()), nc);
}

#[test]
fn clause_keys_identify_alpha_variants() {
    let p = parse_program("kind i type. type p i -> i -> o. type c i.").unwrap();
    let a = p.parse_context_formula("p X Y").unwrap();
    let b = p.parse_context_formula("p U V").unwrap();
    let c = p.parse_context_formula("p Y X").unwrap();
    let d = p.parse_context_formula("p X X").unwrap();
    assert_eq!(a.key(), b.key());
    assert_eq!(a.key(), c.key());
    assert_ne!(a.key(), d.key());
    let e = p.parse_clause("pi x : i \\ p x c").unwrap();
    let f = p.parse_clause("pi y : i \\ p y c").unwrap();
    assert_eq!(e.key(), f.key());
}

#[test]
fn lambda_arguments_are_normalized() {
    let p = parse_program("kind i type. type c i. type f i -> i. type p (i -> i) -> o.").unwrap();
    let g = p.parse_goal("p (x\\ f x)").unwrap();
    assert_eq!(g.to_string(), "p f");
    let g = p.parse_goal("p ((y\\ y) (x\\ x))").unwrap();
    assert_eq!(g.to_string(), "p (x\\ x)");
}

#[test]
fn precedence_of_connectives() {
    let p = parse_program("type a, b, c, d o.").unwrap();
    let g = p.parse_goal("(a => b) => c & d").unwrap();
    match &g {
        Goal::Implies(d, rest) => {
            assert_eq!(d.to_string(), "a => b");
            assert_eq!(rest.to_string(), "c & d");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(p.parse_goal("a & b => c"), Err(ParseError::NotAClause { .. })));
    let c = p.parse_clause("a & b => c => d").unwrap();
    assert_eq!(normalize_clause(&c).antecedents.len(), 3);
}
