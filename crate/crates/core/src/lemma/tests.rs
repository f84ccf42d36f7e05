use super::*;
use crate::analysis::check_strengthenable;
use crate::syntax::{parse_program, Program};

fn corpus(name: &str) -> Program {
    let path = format!("{}/../../corpus/{name}.hh", env!("CARGO_MANIFEST_DIR"));
    parse_program(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn develop(p: &Program, stem: &str) -> Development {
    let s = p.strengthen.as_ref().unwrap();
    let user = p.contexts.get(&s.context).cloned().unwrap_or_default();
    let check = check_strengthenable(p, &s.from, &s.goal, &user).unwrap();
    let plan = StrengtheningPlan::new(&check, &s.from, &s.goal, &s.context, &user).unwrap();
    build_development(p, plan, stem).unwrap()
}

fn tactics(ts: &[Tactic]) -> String {
    ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

fn count_defines(a: &AbellaArtifact, prefix: &str) -> usize {
    a.items.iter().filter(|i| matches!(i, AbellaItem::Define { name, .. } if name.starts_with(prefix))).count()
}

#[test]
fn ctx_definition_renders_cons_clauses() {
    let p = parse_program("type p, r, s o.").unwrap();
    let fs = vec![p.parse_clause("s => r").unwrap(), p.parse_clause("r => p").unwrap()];
    let item = gen_ctx_definition(&p.signature, "p", &fs);
    let text = render(&AbellaArtifact { items: vec![item] }).unwrap();
    assert_eq!(text, "Define ctx_p : olist -> prop by\n  ctx_p nil;\n  ctx_p ((s => r) :: L) := ctx_p L;\n  ctx_p ((r => p) :: L) := ctx_p L.\n");
}

#[test]
fn ctx_definition_empty_has_only_nil() {
    let p = parse_program("type append o.").unwrap();
    let AbellaItem::Define { clauses, .. } = gen_ctx_definition(&p.signature, "append", &[]) else { panic!() };
    assert_eq!(clauses.len(), 1);
}

#[test]
fn member_lemma_empty_context_is_contradiction() {
    let p = parse_program("type append o.").unwrap();
    let AbellaItem::Theorem { formula, proof, .. } = gen_ctx_member_lemma(&p.signature, "append", &[]) else { panic!() };
    assert_eq!(formula.to_string(), "forall E L, ctx_append L -> member E L -> false");
    assert_eq!(tactics(&proof), "induction on 1. intros. case H1. case H2.");
}

#[test]
fn member_lemma_quantifies_each_disjunct() {
    let p = corpus("typeof_nat");
    let fs = vec![p.parse_context_formula("typeof X T").unwrap(), p.parse_context_formula("is_nat z").unwrap()];
    let AbellaItem::Theorem { formula, proof, .. } = gen_ctx_member_lemma(&p.signature, "typeof", &fs) else { panic!() };
    assert_eq!(
        formula.to_string(),
        "forall E L, ctx_typeof L -> member E L -> (exists X T, E = typeof X T) \\/ E = is_nat z"
    );
    assert_eq!(proof.len(), 4 + 4 * 2);
}

#[test]
fn subctx_scripts() {
    let p = parse_program("type p, r, s o.").unwrap();
    let fs = vec![p.parse_clause("s => r").unwrap(), p.parse_clause("r => p").unwrap()];
    let AbellaItem::Theorem { name, proof, .. } = gen_subctx_lemma("a", &[], "b", &[]).unwrap() else { panic!() };
    assert_eq!(name, "subctx_a_b");
    assert_eq!(tactics(&proof), "induction on 1. intros. case H1. search.");
    let AbellaItem::Theorem { proof, .. } = gen_subctx_lemma("p", &fs, "p", &fs).unwrap() else { panic!() };
    assert_eq!(proof.len(), 4 + 2 * 2);
    let x = vec![p.parse_clause("s").unwrap()];
    assert_eq!(
        gen_subctx_lemma("a", &x, "b", &[]),
        Err(LemmaError::NotASubcontext { a: "ctx_a".into(), b: "ctx_b".into() })
    );
}

#[test]
fn list_minus_development() {
    let p = corpus("list_minus");
    let dev = develop(&p, "list_minus");
    let a = &dev.artifact;
    assert_eq!(dev.plan.deps, vec![crate::kernel::Symbol::from("list_minus")]);
    assert_eq!(count_defines(a, "ctx_"), 1);
    assert_eq!(a.count_theorems("ctx_member_"), 1);
    assert!(a.count_theorems("subctx_") >= 1);
    assert_eq!(a.count_theorems("stren_"), 1);
    assert_eq!(a.count_theorems("lctx_stren_"), 1);
    assert!(!a.items.iter().any(|i| matches!(i, AbellaItem::Split { .. })));

    let (f, proof) = a.theorem("stren_list_minus_from_append").unwrap();
    assert_eq!(
        f.to_string(),
        "forall L X1 X2 X3, ctx_list_minus L -> {L, (pi L1\\ append null L1 L1) |- list_minus X1 X2 X3} -> {L |- list_minus X1 X2 X3}"
    );
    assert_eq!(
        tactics(proof),
        "induction on 2. intros. case H2. search. \
         apply subctx_list_minus_list_minus to H1. apply IH to H4 H3. search. \
         case H4. case H3. apply ctx_member_list_minus to H1 H5."
    );
    let (_, user) = a.theorem("lctx_stren_list_minus").unwrap();
    assert_eq!(
        tactics(user),
        "intros. apply lctx_subctx_ctx_list_minus to H1. apply stren_list_minus_from_append to H3 H2. search."
    );
}

#[test]
fn static_apply_and_search_counts() {
    let p = corpus("typeof_nat");
    let dev = develop(&p, "typeof_nat");
    let (_, proof) = dev.artifact.theorem("stren_typeof_from_is_nat").unwrap();
    let text = tactics(proof);
    // two static clauses with 2 and 1 antecedents, then the one dynamic formula
    assert!(text.starts_with(
        "induction on 2. intros. case H2. \
         apply subctx_typeof_typeof to H1. apply IH to H5 H3. apply subctx_typeof_typeof to H1. apply IH to H7 H4. search. \
         apply subctx_typeof_typeof to H1. apply IH to H4 H3. search. \
         case H4. case H3. apply ctx_member_typeof to H1 H5. case H3. search."
    ), "{text}");
}

#[test]
fn harrop_positive_is_mutual() {
    let p = corpus("harrop_positive");
    let dev = develop(&p, "harrop_positive");
    assert_eq!(dev.plan.n(), 2);
    let (_, proof) = dev.artifact.theorem("stren_g_from_f").unwrap();
    assert_eq!(tactics(&proof[..2]), "induction on 2 2. split.");
    assert!(dev.artifact.items.iter().any(|i| matches!(i, AbellaItem::Split { names, .. } if names.len() == 2)));
    let (_, user) = dev.artifact.theorem("gctx_stren_g").unwrap();
    assert_eq!(tactics(&user[2..3]), "apply stren_g_from_f_1 to H3 H2.");
}

#[test]
fn blocked_plan_rejected() {
    let p = parse_program("type f, g o. f => g. f.").unwrap();
    let f = p.parse_clause("f").unwrap();
    let g = p.parse_goal("g").unwrap();
    let check = check_strengthenable(&p, &f, &g, &[]).unwrap();
    assert_eq!(StrengtheningPlan::new(&check, &f, &g, "c", &[]).unwrap_err(), LemmaError::Blocked("f".into()));
}

#[test]
fn unordered_artifact_rejected() {
    let p = parse_program("type a o.").unwrap();
    let items = vec![gen_ctx_member_lemma(&p.signature, "a", &[]), gen_ctx_definition(&p.signature, "a", &[])];
    assert!(matches!(render(&AbellaArtifact { items }), Err(RenderError::UnorderedArtifact { .. })));
    assert_eq!(render(&AbellaArtifact::default()).unwrap(), "");
}

#[test]
fn rendering_round_trips_and_is_stable() {
    for stem in ["list_minus", "harrop_positive", "typeof_nat"] {
        let p = corpus(stem);
        let text = develop(&p, stem).render();
        assert_eq!(text, develop(&p, stem).render());
        let back = parse_abella(&text).unwrap_or_else(|e| panic!("{stem}: {e}\n{text}"));
        assert_eq!(render(&back).unwrap(), text, "{stem}");
    }
}

#[test]
fn theorems_mention_only_dependency_contexts() {
    for stem in ["list_minus", "harrop_positive", "typeof_nat"] {
        let p = corpus(stem);
        let dev = develop(&p, stem);
        let allowed: Vec<String> = dev.plan.deps.iter().map(|a| ctx_name(a)).collect();
        for item in &dev.artifact.items {
            for r in item.references() {
                if r.starts_with("ctx_") && !r.starts_with("ctx_member_") {
                    assert!(allowed.contains(&r), "{stem}: {r}");
                }
            }
        }
    }
}
