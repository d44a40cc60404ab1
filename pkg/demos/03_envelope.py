"""
The envelope surface h_p
========================

Each simplex point s gives a hyperplane sum a_i s_i^p = 1 in coefficient
space.  Their envelope is the graph a_n = h_p(a_1, ..., a_{n-1}).
"""

import numpy as np

from triq import envelope_point, envelope_residual, h_p, in_Dp, sample_envelope, simplex_grid

p = 2.0
s = np.array([1 / 3, 2 / 3])
a = envelope_point(p, s)
print(a, h_p(p, a[:-1]))

# the point touches the family at s and nowhere else
print(envelope_residual(p, a, s))
t = np.linspace(0.01, 0.99, 9)
print((a[0] * t**p + a[1] * (1 - t) ** p).round(4))

# lowering a_n by one percent drops it out of the intersection of half-spaces
grid = simplex_grid(2, 200)
print(in_Dp(p, a, grid).inside, in_Dp(p, a * [1, 0.99], grid).inside)

# a small table for plotting elsewhere
for head, h in sample_envelope(3, 2, 5):
    print(head, h)
