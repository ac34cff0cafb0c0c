"""
Discontinuous fields across x = 0
=================================

Two piecewise constant fields probe which interface traces each element
family keeps continuous.

"""

from hsymcurl.bench import EXACT, estimate_rate, run_convergence
from hsymcurl.elements import Family


def rate(records, which):
    r = estimate_rate(records, which)
    return r if r == EXACT else f"{r:.2f}"


# e1 (x) e1 on the left half has a vanishing tangential trace on x = 0, so the
# edge element represents it exactly
for family in Family:
    rec = run_convergence(family, "normal-jump", [2, 4, 6])
    print(f"normal-jump   {family.value:9s} L2 {rec[0].l2_error:.3e} .. {rec[-1].l2_error:.3e}  rate {rate(rec, 'l2')}")

# the identity on the left half has a jump invisible to the sym Curl trace
for family in Family:
    rec = run_convergence(family, "identity-jump", [2, 4, 6])
    print(f"identity-jump {family.value:9s} L2 {rec[0].l2_error:.3e} .. {rec[-1].l2_error:.3e}  rate {rate(rec, 'l2')}")
