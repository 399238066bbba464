"""
Uniform majorization
====================

``f ⊲_lambda g`` asks that ``int_{lambda a}^b f <= int_a^b g`` for every
``0 < lambda a <= b``. For the product ``xy`` of operators,
``mu(xy) ⊲_2 mu(x) mu(y)``. The checker decides the relation exactly from
breakpoints; ``min_uniform_lambda`` estimates the best constant.
"""

import numpy as np

from logmaj import (
    BlockOperator,
    StepFunction,
    combine,
    min_uniform_lambda,
    mu_op,
    submajorizes,
    uniform_majorizes,
)

# f spreads mass 2 evenly over [0, 2]; g packs it into [0, 1]. Then f << g,
# but on the window [1, 2] f has mass 1 and g has none, so lambda = 1 fails.
f = StepFunction([(2, 1.0)])
g = StepFunction([(1, 2.0)])
print("f << g     :", submajorizes(f, g).holds)
print("f ⊲_1 g    :", uniform_majorizes(f, g, 1.0).holds)
print("f ⊲_2 g    :", uniform_majorizes(f, g, 2.0).holds)
print("best lambda:", min_uniform_lambda(f, g, 8.0))

rng = np.random.default_rng(3)
x = BlockOperator([(1.0, rng.standard_normal((5, 5)))])
y = BlockOperator([(1.0, rng.standard_normal((5, 5)))])
lhs, rhs = mu_op(x @ y), combine(mu_op(x), mu_op(y), "product")
v = uniform_majorizes(lhs, rhs, 2.0)
print("mu(xy) ⊲_2 mu(x)mu(y):", v.holds, f" slack {v.slack:.3g}")
print("smallest lambda found:", min_uniform_lambda(lhs, rhs, 4.0))
