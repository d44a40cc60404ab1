"""
Hunting for counterexamples
===========================

When a coefficient tuple fails, the falsifier builds explicit vectors in an
l^q space that violate the inequality.
"""

import numpy as np

from triq import SearchConfig, falsify_F, falsify_G, random_verify

# aligned vectors break mu = (0.6, 0.6) for p = 2
w = falsify_F(2, (0.6, 0.6)).witness
print(w.probe, w.gap)
print(np.array(w.vectors))

# the same failure in the max-norm plane
w = falsify_F(2, (0.6, 0.6), SearchConfig(space="lq:inf:2")).witness
print(w.space, w.lhs, w.rhs)

# x_1 = -x_2 kills the reverse inequality with two positive coefficients
print(falsify_G(2, (1, 1)).witness.to_json())

# a member: the search comes back empty, random sampling agrees
r = falsify_F(2, (0.5, 0.5))
print(r.found, r.min_gap)
mc = random_verify(2, (0.5, 0.5), "F", SearchConfig(budget=50_000, space="lq:2:3"))
print(mc.samples, mc.min_gap)
