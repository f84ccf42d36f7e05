% List concatenation.
kind elt type.
kind list type.
type 1, 2, 3 elt.
type nil list.
type cons elt -> list -> list.
type append list -> list -> list -> o.

append nil L L.
append L1 L2 L3 => append (cons X L1) L2 (cons X L3).
