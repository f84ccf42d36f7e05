use indexmap::IndexMap;

use super::ty::{is_reserved_type_name, PROP};
use super::{KernelError, Symbol, Term, Ty};

/// The Σ of judgments: declared atomic types plus typed constants and variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    kinds: Vec<Symbol>,
    consts: IndexMap<Symbol, Ty>,
    vars: IndexMap<Symbol, Ty>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_kind(&mut self, name: impl Into<Symbol>) -> Result<(), KernelError> {
        let name = name.into();
        if is_reserved_type_name(&name) {
            return Err(KernelError::ReservedType(name));
        }
        if self.kinds.contains(&name) {
            return Err(KernelError::Duplicate(name));
        }
        self.kinds.push(name);
        Ok(())
    }

    pub fn has_kind(&self, name: &str) -> bool {
        name == PROP || self.kinds.iter().any(|k| &**k == name)
    }

    pub fn check_type(&self, ty: &Ty) -> Result<(), KernelError> {
        match ty {
            Ty::Atom(n) if self.has_kind(n) => Ok(()),
            Ty::Atom(n) => Err(KernelError::UnknownType(n.clone())),
            Ty::Arrow(a, b) => {
                self.check_type(a)?;
                self.check_type(b)
            }
        }
    }

    pub fn declare_const(&mut self, name: impl Into<Symbol>, ty: Ty) -> Result<(), KernelError> {
        let name = name.into();
        if self.contains(&name) {
            return Err(KernelError::Duplicate(name));
        }
        self.check_type(&ty)?;
        self.consts.insert(name, ty);
        Ok(())
    }

    pub fn declare_var(&mut self, name: impl Into<Symbol>, ty: Ty) -> Result<(), KernelError> {
        let name = name.into();
        if self.contains(&name) {
            return Err(KernelError::Duplicate(name));
        }
        self.check_type(&ty)?;
        self.vars.insert(name, ty);
        Ok(())
    }

    /// `(Σ, c:τ)`, failing when `c` is already present.
    pub fn extended(&self, name: impl Into<Symbol>, ty: Ty) -> Result<Signature, KernelError> {
        let mut s = self.clone();
        s.declare_const(name, ty)?;
        Ok(s)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.consts.contains_key(name) || self.vars.contains_key(name)
    }

    pub fn lookup(&self, name: &str) -> Option<&Ty> {
        self.consts.get(name).or_else(|| self.vars.get(name))
    }

    pub fn const_type(&self, name: &str) -> Option<&Ty> {
        self.consts.get(name)
    }

    pub fn is_const(&self, name: &str) -> bool {
        self.consts.contains_key(name)
    }

    pub fn kinds(&self) -> impl Iterator<Item = &Symbol> {
        self.kinds.iter()
    }

    pub fn constants(&self) -> impl Iterator<Item = (&Symbol, &Ty)> {
        self.consts.iter()
    }

    pub fn variables(&self) -> impl Iterator<Item = (&Symbol, &Ty)> {
        self.vars.iter()
    }

    /// Predicate constants: declared constants whose result type is `o`.
    pub fn predicates(&self) -> impl Iterator<Item = (&Symbol, &Ty)> {
        self.consts.iter().filter(|(_, t)| t.result().is_prop())
    }
}

/// The unique type of `t` under `sig`, by the const/var, app and abs rules.
pub fn infer_type(sig: &Signature, t: &Term) -> Result<Ty, KernelError> {
    infer_type_with(sig, &[], t)
}

/// As [`infer_type`], with `locals` shadowing the signature (innermost last).
pub fn infer_type_with(sig: &Signature, locals: &[(Symbol, Ty)], t: &Term) -> Result<Ty, KernelError> {
    fn go(sig: &Signature, locals: &[(Symbol, Ty)], t: &Term, env: &mut Vec<Ty>) -> Result<Ty, KernelError> {
        match t {
            Term::Const(n, ty) | Term::Var(n, ty) => {
                let declared = locals
                    .iter()
                    .rev()
                    .find(|(x, _)| x == n)
                    .map(|(_, t)| t)
                    .or_else(|| sig.lookup(n))
                    .ok_or_else(|| KernelError::UnknownIdentifier(n.clone()))?;
                if declared != ty {
                    return Err(KernelError::TypeMismatch { term: n.to_string(), expected: declared.clone(), found: ty.clone() });
                }
                Ok(ty.clone())
            }
            Term::Bound(i, ty) => {
                let i = *i as usize;
                if i >= env.len() {
                    return Err(KernelError::Dangling(i as u32));
                }
                let annotated = &env[env.len() - 1 - i];
                if annotated != ty {
                    return Err(KernelError::AnnotationConflict {
                        name: Symbol::from(format!("#{i}")),
                        annotated: annotated.clone(),
                        used: ty.clone(),
                    });
                }
                Ok(ty.clone())
            }
            Term::Meta(_, ty) => Ok(ty.clone()),
            Term::Abs(_, ty, b) => {
                sig.check_type(ty)?;
                env.push(ty.clone());
                let r = go(sig, locals, b, env);
                env.pop();
                Ok(Ty::arrow(ty.clone(), r?))
            }
            Term::App(f, a) => {
                let ft = go(sig, locals, f, env)?;
                let at = go(sig, locals, a, env)?;
                match ft {
                    Ty::Arrow(dom, cod) if *dom == at => Ok((*cod).clone()),
                    Ty::Arrow(dom, _) => Err(KernelError::TypeMismatch { term: a.to_string(), expected: (*dom).clone(), found: at }),
                    ty => Err(KernelError::NotAFunction { term: f.to_string(), ty }),
                }
            }
        }
    }
    go(sig, locals, t, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> Ty {
        Ty::atom("nat")
    }

    #[test]
    fn duplicate_declaration_fails() {
        let mut s = Signature::new();
        s.declare_kind("nat").unwrap();
        s.declare_const("a", nat()).unwrap();
        assert_eq!(s.declare_var("a", nat()), Err(KernelError::Duplicate("a".into())));
        assert!(s.extended("a", nat()).is_err());
        assert!(s.extended("b", nat()).is_ok());
    }

    #[test]
    fn reserved_kinds_rejected() {
        let mut s = Signature::new();
        assert!(s.declare_kind("o").is_err());
        assert!(s.declare_kind("prop").is_err());
    }

    #[test]
    fn unknown_type_rejected() {
        let mut s = Signature::new();
        assert_eq!(s.declare_const("a", nat()), Err(KernelError::UnknownType("nat".into())));
    }

    #[test]
    fn identity_has_arrow_type() {
        let mut s = Signature::new();
        s.declare_kind("nat").unwrap();
        let id = Term::lam("x", nat(), Term::var("x", nat())).unwrap();
        assert_eq!(infer_type(&s, &id).unwrap(), Ty::arrow(nat(), nat()));
    }

    #[test]
    fn application_rule() {
        let mut s = Signature::new();
        s.declare_kind("nat").unwrap();
        s.declare_kind("bool").unwrap();
        let ft = Ty::arrow(nat(), Ty::atom("bool"));
        s.declare_const("f", ft.clone()).unwrap();
        s.declare_const("a", nat()).unwrap();
        let t = Term::app(Term::constant("f", ft), Term::constant("a", nat())).unwrap();
        assert_eq!(infer_type(&s, &t).unwrap(), Ty::atom("bool"));
    }

    #[test]
    fn unknown_identifier_reported() {
        let s = Signature::new();
        let t = Term::constant("zz", Ty::prop());
        assert_eq!(infer_type(&s, &t), Err(KernelError::UnknownIdentifier("zz".into())));
    }

    #[test]
    fn unchecked_mismatch_caught() {
        let mut s = Signature::new();
        s.declare_kind("nat").unwrap();
        s.declare_kind("bool").unwrap();
        let ft = Ty::arrow(nat(), Ty::atom("bool"));
        s.declare_const("f", ft.clone()).unwrap();
        s.declare_const("t", Ty::atom("bool")).unwrap();
        assert!(Term::app(Term::constant("f", ft.clone()), Term::constant("t", Ty::atom("bool"))).is_err());
        let bad = Term::mk_app(Term::constant("f", ft), Term::constant("t", Ty::atom("bool")));
        assert!(matches!(infer_type(&s, &bad), Err(KernelError::TypeMismatch { .. })));
    }
}
