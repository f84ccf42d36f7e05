% Typing judgements do not depend on an unrelated numeral predicate.
kind tm type.
kind ty type.
kind num type.
type app tm -> tm -> tm.
type abs ty -> (tm -> tm) -> tm.
type arr ty -> ty -> ty.
type b ty.
type z num.
type s num -> num.
type typeof tm -> ty -> o.
type is_nat num -> o.

typeof M1 (arr T1 T2) => typeof M2 T1 => typeof (app M1 M2) T2.
(pi x \ typeof x T1 => typeof (M x) T2) => typeof (abs T1 M) (arr T1 T2).
is_nat z.
is_nat N => is_nat (s N).

%context tctx typeof X T.
%strengthen tctx from is_nat z in typeof M T.
