use super::*;
use crate::syntax::parse_program;

const TYPEOF: &str = include_str!("../../../../corpus/typeof.hh");
const APPEND: &str = include_str!("../../../../corpus/append.hh");

fn program(text: &str) -> Program {
    parse_program(text).unwrap()
}

fn solve_text(p: &Program, goal: &str, depth: u32) -> SearchOutcome {
    let g = p.parse_goal(goal).unwrap();
    solve(&Sequent::new(p, g), depth).unwrap()
}

fn replays(p: &Program, goal: &str, outcome: &SearchOutcome) {
    let SearchOutcome::Proved(proof) = outcome else { panic!("not proved: {outcome:?}") };
    let g = instantiate_goal(&p.parse_goal(goal).unwrap(), proof);
    replay(&p.signature, &p.clauses, &[], &g, &proof.trace).unwrap();
}

fn rules_without_pi_l(n: &TraceNode) -> Vec<&'static str> {
    let mut v = Vec::new();
    n.walk(&mut |m| {
        if !matches!(m.rule, Rule::PiL { .. }) {
            v.push(m.rule.name())
        }
    });
    v
}

#[test]
fn top_is_proved() {
    let p = program(APPEND);
    let out = solve_text(&p, "true", 1);
    assert!(out.is_proved());
    replays(&p, "true", &out);
}

#[test]
fn typeof_identity_follows_the_walkthrough() {
    let p = program(TYPEOF);
    let goal = "typeof (abs b (x\\ x)) (arr b b)";
    let out = solve_text(&p, goal, 8);
    let SearchOutcome::Proved(proof) = &out else { panic!("{out:?}") };
    let root = &proof.trace.root;
    assert_eq!(root.rule, Rule::Focus { source: ClauseSource::Static(1) });
    let mut imp_l = None;
    root.walk(&mut |n| {
        if n.rule == Rule::ImpL && imp_l.is_none() {
            imp_l = Some(n);
        }
    });
    let imp_l = imp_l.expect("an implication-left step");
    assert_eq!(rules_without_pi_l(&imp_l.children[0]), ["pi_r", "imp_r", "focus", "init"]);
    assert_eq!(rules_without_pi_l(&imp_l.children[1]), ["init"]);
    let mut dynamic_focus = false;
    imp_l.children[0].walk(&mut |n| dynamic_focus |= n.rule == Rule::Focus { source: ClauseSource::Dynamic(0) });
    assert!(dynamic_focus);
    replays(&p, goal, &out);
}

#[test]
fn typeof_needs_depth_three() {
    let p = program(TYPEOF);
    let goal = "typeof (abs b (x\\ x)) (arr b b)";
    assert_eq!(solve_text(&p, goal, 2), SearchOutcome::Unknown(UnknownReason::DepthBound));
    assert!(solve_text(&p, goal, 3).is_proved());
}

#[test]
fn append_mismatch_is_refuted() {
    let p = program(APPEND);
    assert_eq!(solve_text(&p, "append nil nil (cons 1 nil)", 6), SearchOutcome::Refuted);
}

#[test]
fn append_computes_answers() {
    let p = program(APPEND);
    let out = solve_text(&p, "append (cons 1 nil) (cons 2 nil) L", 6);
    let SearchOutcome::Proved(proof) = &out else { panic!("{out:?}") };
    assert_eq!(proof.answer.len(), 1);
    assert_eq!(proof.answer[0].1.to_string(), "cons 1 (cons 2 nil)");
    replays(&p, "append (cons 1 nil) (cons 2 nil) L", &out);
}

#[test]
fn typeof_infers_a_type() {
    let p = program(TYPEOF);
    let goal = "typeof (abs b (x\\ abs b (y\\ x))) T";
    let out = solve_text(&p, goal, 8);
    let SearchOutcome::Proved(proof) = &out else { panic!("{out:?}") };
    assert_eq!(proof.answer[0].1.to_string(), "arr b (arr b b)");
    replays(&p, goal, &out);
}

#[test]
fn higher_order_pattern_answer() {
    // M must be solved under the eigenvariable introduced for x.
    let p = program(TYPEOF);
    let goal = "pi x \\ typeof x b => typeof (M x) b";
    let out = solve_text(&p, goal, 4);
    let SearchOutcome::Proved(proof) = &out else { panic!("{out:?}") };
    assert_eq!(proof.answer[0].1.to_string(), "x\\ x");
    replays(&p, goal, &out);
}

#[test]
fn eigenvariable_escape_fails() {
    let p = program(TYPEOF);
    // T cannot mention the eigenvariable introduced by pi.
    let g = p.parse_goal("pi x \\ typeof x b => typeof x T").unwrap();
    let out = solve(&Sequent::new(&p, g), 4).unwrap();
    assert!(out.is_proved());
    let g = p.parse_goal("pi x \\ typeof (app x x) T").unwrap();
    assert_ne!(solve(&Sequent::new(&p, g), 4).unwrap(), SearchOutcome::Unknown(UnknownReason::NonPattern));
}

#[test]
fn dynamic_context_is_tried_most_recent_first() {
    let p = program("kind i type. type a, c i. type q i -> o. ");
    let g = p.parse_goal("q a => q c => q X").unwrap();
    let out = solve(&Sequent::new(&p, g), 2).unwrap();
    let SearchOutcome::Proved(proof) = out else { panic!() };
    assert_eq!(proof.answer[0].1.to_string(), "c");
}

#[test]
fn focused_examples() {
    let p = program(TYPEOF);
    let clause = p.clauses[1].as_ref().clone();
    let atom = match p.parse_goal("typeof (abs b (x\\ x)) (arr b b)").unwrap() {
        Goal::Atom(a) => a,
        _ => unreachable!(),
    };
    let s = FocusedSequent { signature: p.signature.clone(), statics: p.clauses.clone(), dynamics: vec![], clause: clause.clone(), atom: atom.clone() };
    let out = solve_focused(&s, 7).unwrap();
    let SearchOutcome::Proved(proof) = &out else { panic!("{out:?}") };
    replay_focused(&p.signature, &p.clauses, &[], &clause, &atom, &proof.trace).unwrap();
    // The app clause's head does not match an abstraction.
    let s2 = FocusedSequent { clause: p.clauses[0].as_ref().clone(), ..s };
    assert_eq!(solve_focused(&s2, 7).unwrap(), SearchOutcome::Refuted);
}

#[test]
fn weakening_preserves_provability() {
    let p = program(APPEND);
    let g = p.parse_goal("append (cons 1 nil) nil (cons 1 nil)").unwrap();
    let s = Sequent::new(&p, g);
    assert!(solve(&s, 4).unwrap().is_proved());
    let extra = p.parse_clause("append nil nil nil").unwrap();
    assert!(check_weakening(&s, &[extra], 4).unwrap());
}

#[test]
fn open_context_is_ill_formed() {
    let p = program(APPEND);
    let g = p.parse_goal("append nil nil nil").unwrap();
    let open = match p.parse_goal("append nil L L").unwrap() {
        Goal::Atom(a) => Clause::Fact(a),
        _ => unreachable!(),
    };
    let s = Sequent::new(&p, g).with_dynamics(vec![open]);
    assert!(matches!(solve(&s, 3), Err(EngineError::IllFormedSequent(_))));
}

#[test]
fn replay_rejects_tampered_traces() {
    let p = program(TYPEOF);
    let goal = "typeof (abs b (x\\ x)) (arr b b)";
    let out = solve_text(&p, goal, 8);
    let SearchOutcome::Proved(proof) = out else { panic!() };
    let g = p.parse_goal(goal).unwrap();
    let mut bad = proof.trace.clone();
    bad.root.rule = Rule::Focus { source: ClauseSource::Static(0) };
    assert!(replay(&p.signature, &p.clauses, &[], &g, &bad).is_err());
    let mut bad = proof.trace.clone();
    bad.root.children.clear();
    assert!(replay(&p.signature, &p.clauses, &[], &g, &bad).is_err());
}

#[test]
fn trace_text_is_indented_one_rule_per_line() {
    let p = program(TYPEOF);
    let SearchOutcome::Proved(proof) = solve_text(&p, "typeof (abs b (x\\ x)) (arr b b)", 8) else { panic!() };
    let text = proof.trace.to_string();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), proof.trace.size());
    assert!(lines[0].starts_with("focus static:1  |- typeof (abs b (x\\ x)) (arr b b)"));
    assert!(lines[1].starts_with("  pi_l "));
}
