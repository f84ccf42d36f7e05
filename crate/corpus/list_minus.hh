% list_minus X L1 L2: L2 is L1 with one occurrence of X removed.
% Its derivations never consult the append clauses.
kind elt type.
kind lst type.
type null lst.
type cons elt -> lst -> lst.
type list_minus elt -> lst -> lst -> o.
type append lst -> lst -> lst -> o.

list_minus X (cons X L) L.
list_minus X L K => list_minus X (cons Y L) (cons Y K).
append null L L.
append L1 L2 L3 => append (cons X L1) L2 (cons X L3).

%context lctx.
%strengthen lctx from append null L L in list_minus X L1 L2.
