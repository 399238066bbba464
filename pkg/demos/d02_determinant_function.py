"""
The determinant function and the Fuglede-Kadison determinant
============================================================

``Lambda(t; x) = exp(int_0^t log mu(s; x) ds)`` interpolates the partial
products of singular values. At ``t = tau(1)`` it is the Fuglede-Kadison
determinant, which is multiplicative.
"""

import numpy as np

from logmaj import BlockOperator, det_fk, lambda_at, lambda_curve, log_det_fk, mu_op

d = BlockOperator.single(np.diag([3.0, 1.0, 2.0]))
for t in (1, 2, 3, 1.5):
    print(f"Lambda({t}) = {lambda_at(d, t):.6g}")

# Multiplicativity on random weighted blocks.
rng = np.random.default_rng(1)


def rand_op():
    return BlockOperator([(1.0, rng.standard_normal((3, 3))), (0.5, rng.standard_normal((2, 2)))])


x, y = rand_op(), rand_op()
print("Delta(xy)          =", det_fk(x @ y))
print("Delta(x) Delta(y)  =", det_fk(x) * det_fk(y))

# A singular factor sends the logarithm to -inf exactly.
s = BlockOperator([(1.0, np.diag([1.0, 0.0, 2.0])), (0.5, np.eye(2))])
print("log Delta(s y) =", log_det_fk(s @ y))

# The Weyl-type inequality Lambda(t; xy) <= Lambda(t; x) Lambda(t; y),
# checked on the curve breakpoints.
cxy, cx, cy = lambda_curve(x @ y), lambda_curve(x), lambda_curve(y)
ts = np.union1d(np.union1d(mu_op(x @ y).breakpoints, mu_op(x).breakpoints), mu_op(y).breakpoints)
gap = [cx.at(t) + cy.at(t) - cxy.at(t) for t in ts]
print("min log gap over breakpoints:", min(gap))

# The curve can be exported for plotting.
print(cxy.to_csv().splitlines()[:3])
