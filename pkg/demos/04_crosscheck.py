"""
Closed form against brute force
================================

Draws random exponents and coefficients, decides membership in closed form,
then lets the falsifier try to disagree.
"""

from triq import SearchConfig, crosscheck

report = crosscheck(100, seed=1)
print(report.to_text())

# the small-exponent regime and a different space
report = crosscheck(100, seed=1, p_range=(0.2, 1.0), cfg=SearchConfig(budget=1000, space="lq:1:3"))
print(report.disagreements, report.probe_hits)
