% Simple types for a higher-order abstract syntax encoding of the lambda calculus.
kind tm type.
kind ty type.
type app tm -> tm -> tm.
type abs ty -> (tm -> tm) -> tm.
type arr ty -> ty -> ty.
type b ty.
type typeof tm -> ty -> o.

typeof M1 (arr T1 T2) => typeof M2 T1 => typeof (app M1 M2) T2.
(pi x \ typeof x T1 => typeof (M x) T2) => typeof (abs T1 M) (arr T1 T2).
