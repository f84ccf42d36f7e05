//! Simply-typed lambda calculus: types, terms, typing, substitution and
//! beta-eta normalization.

mod error;
mod normalize;
mod print;
mod sig;
mod symbol;
pub(crate) mod term;
mod ty;

pub use error::KernelError;
pub use normalize::{beta_normal, eta_normal, is_beta_normal, is_eta_normal, is_normal, normalize, normalize_with, Strategy};
pub(crate) use print::{Pos, TermPrinter};
pub use sig::{infer_type, infer_type_with, Signature};
pub use symbol::{fresh_name, Symbol};
pub use term::{alpha_equal, free_vars, names, substitute, MetaId, Term};
pub use ty::{is_reserved_type_name, Ty, ABELLA_PROP, PROP};

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> Ty {
        Ty::atom("nat")
    }

    #[test]
    fn hoas_abs_encoding_types_to_tm() {
        let tm = Ty::atom("tm");
        let tyy = Ty::atom("ty");
        let mut s = Signature::new();
        s.declare_kind("tm").unwrap();
        s.declare_kind("ty").unwrap();
        let abs_ty = Ty::arrow(tyy.clone(), Ty::arrow(Ty::arrow(tm.clone(), tm.clone()), tm.clone()));
        s.declare_const("abs", abs_ty.clone()).unwrap();
        s.declare_const("b", tyy.clone()).unwrap();
        let id = Term::lam("x", tm.clone(), Term::var("x", tm.clone())).unwrap();
        let t = Term::apply(Term::constant("abs", abs_ty), [Term::constant("b", tyy), id]).unwrap();
        assert_eq!(infer_type(&s, &t).unwrap(), tm);
        assert_eq!(t.to_string(), "abs b (x\\ x)");
    }

    #[test]
    fn substitution_skips_bound_occurrence() {
        let id = Term::lam("x", nat(), Term::var("x", nat())).unwrap();
        let r = substitute(&id, &"x".into(), &Term::constant("a", nat())).unwrap();
        assert_eq!(r, id);
        assert_eq!(r.to_string(), "x\\ x");
    }

    #[test]
    fn substitution_renames_capturing_binder() {
        let t = Term::lam("y", nat(), Term::var("x", nat())).unwrap();
        let r = substitute(&t, &"x".into(), &Term::var("y", nat())).unwrap();
        assert_eq!(r.to_string(), "y1\\ y");
        match &r {
            Term::Abs(h, _, _) => assert_eq!(&**h, "y1"),
            _ => panic!(),
        }
    }

    #[test]
    fn substitution_replaces_free_variable() {
        let a = Term::constant("a", nat());
        assert_eq!(substitute(&Term::var("x", nat()), &"x".into(), &a).unwrap(), a);
    }

    #[test]
    fn substitution_type_checked() {
        let t = Term::var("x", nat());
        let err = substitute(&t, &"x".into(), &Term::constant("t", Ty::atom("bool")));
        assert!(matches!(err, Err(KernelError::TypeMismatch { .. })));
    }

    #[test]
    fn alpha_equivalence_examples() {
        let id_x = Term::lam("x", nat(), Term::var("x", nat())).unwrap();
        let id_y = Term::lam("y", nat(), Term::var("y", nat())).unwrap();
        assert!(alpha_equal(&id_x, &id_y));
        let k1 = Term::lam("x", nat(), Term::lam("y", nat(), Term::var("x", nat())).unwrap()).unwrap();
        let k2 = Term::lam("y", nat(), Term::lam("x", nat(), Term::var("x", nat())).unwrap()).unwrap();
        assert!(!alpha_equal(&k1, &k2));
        let a = Term::constant("a", nat());
        assert!(alpha_equal(&a, &a));
    }

    #[test]
    fn free_vars_examples() {
        let ft = Ty::arrow(nat(), Ty::arrow(nat(), nat()));
        let body = Term::apply(Term::var("f", ft), [Term::var("x", nat()), Term::var("y", nat())]).unwrap();
        let t = Term::lam("x", nat(), body).unwrap();
        let fv: Vec<_> = free_vars(&t).into_iter().map(|s| s.to_string()).collect();
        assert_eq!(fv, vec!["f", "y"]);
        assert!(free_vars(&Term::lam("x", nat(), Term::var("x", nat())).unwrap()).is_empty());
        assert_eq!(free_vars(&Term::var("x", nat())).len(), 1);
    }

    #[test]
    fn lam_rejects_conflicting_annotation() {
        let body = Term::var("x", Ty::atom("bool"));
        assert!(matches!(Term::lam("x", nat(), body), Err(KernelError::AnnotationConflict { .. })));
    }

    #[test]
    fn printer_renames_shadowing_hint() {
        // x\ (x\ x') where the inner body refers to the outer binder
        let inner = Term::mk_abs("x".into(), nat(), Term::Bound(1, nat()));
        let t = Term::mk_abs("x".into(), nat(), inner);
        assert_eq!(t.to_string(), "x\\ x1\\ x");
    }
}
