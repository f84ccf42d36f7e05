% The dependency analysis over-approximates: s is reported as a dependency of p
% although no goal s can arise below p.
type p, q, r, s o.

((s => r) => p) & ((r => p) => p) => q.
