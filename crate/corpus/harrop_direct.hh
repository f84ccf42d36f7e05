% g depends on f directly.
type f, g o.

f => g.
f.

%context gctx.
%strengthen gctx from f in g.
