"""
Hölder-type inequalities for symmetric norms
============================================

Norm inequalities for products follow from the logarithmic order
``mu(xy) <<_log mu(x) mu(y)`` because every fully symmetric norm is monotone
under it. Here we check the simplest instance, ``||xy||_1 <= ||x||_p ||y||_q``
for conjugate exponents ``1/p + 1/q = 1``, together with the order itself.
"""

import numpy as np

from logmaj import BlockOperator, KyFan, Linf, Lp, combine, log_submajorizes, mu_op, norm_op

rng = np.random.default_rng(2)


def rand_op():
    return BlockOperator([(1.0, rng.standard_normal((4, 4))), (0.25, rng.standard_normal((3, 3)))])


x, y = rand_op(), rand_op()
for p in (1.25, 2.0, 4.0):
    q = p / (p - 1)
    lhs = norm_op(x @ y, Lp(1))
    rhs = norm_op(x, Lp(p)) * norm_op(y, Lp(q))
    print(f"p={p:<5} ||xy||_1 = {lhs:.4f} <= {rhs:.4f}")

v = log_submajorizes(mu_op(x @ y), combine(mu_op(x), mu_op(y), "product"))
print("mu(xy) <<_log mu(x) mu(y):", v.holds, " slack", f"{v.slack:.3g}")

# Every implemented norm is monotone under that order.
for spec in (Lp(2), Linf(), KyFan(1.0)):
    print(spec, norm_op(x @ y, spec) <= norm_op(x, spec) * norm_op(y, Linf()) + 1e-12)
