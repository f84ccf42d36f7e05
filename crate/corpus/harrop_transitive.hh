% g depends on f through a.
type f, a, g o.

f => a.
a => g.
f.

%context gctx.
%strengthen gctx from f in g.
