% g can be strengthened from f: the only use of f is in deriving b,
% and b only ever appears as an assumption.
type f, b, a, g o.

f => b.
(b => a) => g.
a.
f.

%context gctx.
%strengthen gctx from f in g.
