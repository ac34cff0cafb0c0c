"""
Identities of the sym Curl complex
==================================

Check the differential identities exactly on random polynomial fields, then
evaluate a few operators by hand.

"""

import numpy as np

from hsymcurl.identities import run_identity_suite
from hsymcurl.tensorcalc import X, PolyMatrix, matrix_curl, matrix_eval, random_poly_matrix, strong_operator, sym_part

for res in run_identity_suite(seed=1, count=20):
    print("PASS" if res.passed else "FAIL", res.name)

# Curl of x * 1 is skew, so its symmetric part vanishes
C = matrix_curl(PolyMatrix.identity(X))
print(matrix_eval(C, [0.0, 0.0, 0.0]))
print("sym Curl (x 1) is zero:", sym_part(C).is_zero())

# the strong operator keeps the degree of a random cubic field
P = random_poly_matrix(np.random.default_rng(0), degree=3)
print("degree of sym P + Curl sym Curl P:", strong_operator(P).degree())
