"""
Singular value functions of block operators
===========================================

A weighted block operator ``x = (c_1 X_1, ..., c_k X_k)`` lives in a finite
von Neumann algebra whose trace weighs block ``k`` by ``c_k``. Its singular
value function ``mu(t; x)`` is a decreasing step function: every singular
value of ``X_k`` contributes a step of width ``c_k``.
"""

import numpy as np

from logmaj import BlockOperator, distribution, evaluate, mu_op

# A diagonal example: weights 1 on a 3x3 block, 0.5 on a 1x1 block.
x = BlockOperator([(1.0, np.diag([3.0, 1.0, 2.0])), (0.5, np.array([[2.5]]))])
mu = mu_op(x)
print("pieces (width, value):", mu.pieces)
print("support:", mu.support, " tau(1):", x.tau_one)

# mu is right-continuous and decreasing; sample it on a grid.
ts = np.linspace(0.0, 4.0, 9)
print("mu(t):", np.round(evaluate(mu, ts), 3))

# The distribution function d(s) = tau(e^{|x|}(s, inf)) is the generalized
# inverse of mu: d(mu(t)) <= t, with equality at the left end of each step.
for s in (0.5, 1.5, 2.2, 2.8):
    print(f"d({s}) = {distribution(x, s)}")

# Random operators work the same way; mu depends only on |x|.
rng = np.random.default_rng(0)
y = BlockOperator([(0.7, rng.standard_normal((4, 4))), (2.0, rng.standard_normal((2, 2)))])
assert np.allclose(mu_op(y).values, mu_op(y.H).values)
print("mu(y) has", len(mu_op(y)), "pieces over support", mu_op(y).support)
