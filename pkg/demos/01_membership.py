"""
Which coefficients make the triangle inequality hold?
=====================================================

For p > 1 and positive mu the inequality
|x_1 + ... + x_n|^p <= sum |x_i|^p / mu_i holds in every normed space
exactly when sum mu_i^(1/(p-1)) <= 1.
"""

import numpy as np

from triq import decide_F, decide_G, decide_H

# the classical "second type" inequality |x + y|^2 <= 2|x|^2 + 2|y|^2
print(decide_F(2, (0.5, 0.5)).describe())

# nudging the coefficients up breaks it
print(decide_F(2, (0.6, 0.6)).describe())

# for p <= 1 only the size of each coefficient matters
print(decide_F(0.5, (1, 1, 1)).describe())

# the reverse inequality needs all but one coefficient negative
for mu in [(2, -1), (1.5, -1), (1, 1), (-1, -1)]:
    print(decide_G(2, mu).describe())

# scan the margin of F(p) along the diagonal mu = (m, m)
m = np.linspace(0.3, 0.7, 9)
print(np.array([decide_F(2, (v, v)).margin for v in m]).round(3))

# two-sided bounds combine both families
print(decide_H(2, (-0.5, -0.5)).describe())
