"""Determinant functions, the log-integrable class and Brown's equivalences.

``Lambda(t; x) = exp(int_0^t log mu(s; x) ds)`` is computed in the log
domain throughout; ``-inf`` encodes ``Lambda = 0``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from logmaj.matalg import BlockOperator, mu_op
from logmaj.stepfn import (
    EPS_ORD,
    IncreasingFn,
    StepFunction,
    Verdict,
    apply_increasing,
    integral,
    leq_slack,
    log1p_power,
    log_integral,
    log_plus,
    log_submajorizes,
    power,
    submajorizes,
)


def _mu(x: BlockOperator | StepFunction) -> StepFunction:
    return x if isinstance(x, StepFunction) else mu_op(x)


def log_lambda_at(x: BlockOperator | StepFunction, t: float) -> float:
    """``log Lambda(t; x)``; ``-inf`` exactly when ``Lambda(t; x) = 0``."""
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t!r}")
    return float(log_integral(_mu(x), t))


def lambda_at(x: BlockOperator | StepFunction, t: float) -> float:
    """Determinant function ``Lambda(t; x)``."""
    lv = log_lambda_at(x, t)
    if lv == -math.inf:
        return 0.0
    return math.exp(lv) if lv < 709.0 else math.inf


def log_det_fk(x: BlockOperator) -> float:
    """``log Delta(x)`` with ``Delta(x) = Lambda(tau(1); x)``."""
    return log_lambda_at(x, x.tau_one)


def det_fk(x: BlockOperator) -> float:
    """Fuglede-Kadison determinant ``prod_k |det x_k|^{c_k}``."""
    return lambda_at(x, x.tau_one)


@dataclass(frozen=True)
class LambdaCurve:
    """The concave piecewise-linear curve ``t -> int_0^t log mu``.

    ``ts`` holds 0 and the breakpoints of ``source``; ``log_values`` the curve
    there (``-inf`` past the support when the tail is 0).
    """

    source: StepFunction
    ts: np.ndarray
    log_values: np.ndarray

    def at(self, t: float) -> float:
        return float(log_integral(self.source, t))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "log_lambda"])
        for t, v in zip(self.ts, self.log_values):
            writer.writerow([repr(float(t)), "-inf" if v == -math.inf else repr(float(v))])
        return buf.getvalue()


def lambda_curve(x: BlockOperator | StepFunction) -> LambdaCurve:
    f = _mu(x)
    ts = np.concatenate(([0.0], f.breakpoints))
    return LambdaCurve(f, ts, np.atleast_1d(log_integral(f, ts)))


# ---------------------------------------------------------------------------
# L_log+ membership


@dataclass(frozen=True)
class LogPlusReport:
    member: bool
    integral_0_1_finite: bool
    in_l1_plus_linf: bool
    integrals_0_t_finite: bool
    integral_0_1: float


def in_log_plus(x: BlockOperator | StepFunction,
                sample_ts: Sequence[float] = (0.5, 1.0, 2.0, 10.0, 100.0)) -> LogPlusReport:
    """Evaluate the three equivalent membership criteria for ``L_log+``.

    For representable (bounded) inputs all three always hold; disagreement
    would indicate a bug and raises ``RuntimeError``.
    """
    lp = apply_increasing(_mu(x), log_plus())
    i01 = float(integral(lp, 1.0))
    c1 = math.isfinite(i01)
    # bounded part sup plus integrable part over the finite pieces
    top = float(lp.values[0]) if len(lp) else lp.tail
    c2 = math.isfinite(top) and math.isfinite(float(integral(lp, lp.support)))
    c3 = all(math.isfinite(float(integral(lp, t))) for t in sample_ts)
    if not (c1 == c2 == c3):
        raise RuntimeError("log_+ membership criteria disagree")
    return LogPlusReport(c1 and c2 and c3, c1, c2, c3, i01)


# ---------------------------------------------------------------------------
# Brown's equivalences


def default_phi_catalog() -> list[IncreasingFn]:
    """Increasing ``phi`` with ``phi(0) = 0`` and ``phi o exp`` convex."""
    return [power(0.5), power(1.0), power(2.0), power(4.0), log1p_power(1.0), log1p_power(2.0)]


def log_plus_mass(f: StepFunction, r: float) -> float:
    """``int_0^inf log_+(r f(s)) ds`` for ``f`` with zero tail."""
    if f.tail != 0:
        raise ValueError("log_plus_mass needs a zero tail")
    if len(f) == 0:
        return 0.0
    with np.errstate(divide="ignore"):
        return float(np.sum(f.widths * np.maximum(np.log(r * f.values), 0.0)))


def r_grid(f: StepFunction, g: StepFunction, r_count: int) -> np.ndarray:
    """Geometric grid over ``[1/max value, 1/min positive value]`` plus every kink.

    ``r -> int log_+(r f) - int log_+(r g)`` is piecewise linear in ``log r``
    with kinks at reciprocals of the values, so its maximum over ``r > 0`` is
    attained at a kink or (if the supports differ) beyond the last one.
    """
    vals = np.concatenate((f.values, g.values))
    vals = vals[vals > 0]
    if len(vals) == 0:
        return np.ones(1)
    grid = np.geomspace(1.0 / vals.max(), 1.0 / vals.min(), max(int(r_count), 1))
    extra = [2.0 / vals.min()]
    # past the last kink the difference is (S_f - S_g) log r + const: add a point past its root
    for a, b in ((f, g), (g, f)):
        gap = a.support - b.support
        if gap > 0 and len(b):
            la = float(np.sum(a.widths * np.log(a.values)))
            lb = float(np.sum(b.widths * np.log(b.values)))
            log_r = max(math.log(extra[0]), (lb - la) / gap + 1.0)
            extra.append(math.exp(min(log_r, 700.0)))
    return np.unique(np.concatenate((grid, 1.0 / vals, extra)))


@dataclass(frozen=True)
class BrownReport:
    """Result of :func:`brown_check`.

    ``status`` is ``"consistent"`` (the equivalence checks out on the sampled
    grids), ``"violation"`` ((i) holds but a sample of (ii) or (iii) fails) or
    ``"inconclusive"`` ((i) fails but no refuting ``r`` was found on the grid).
    """

    cond_i: Verdict
    cond_ii: bool
    cond_iii: bool
    status: str
    witness_r: float | None = None
    ii_slack: float = math.inf
    iii_slack: float = math.inf
    failures: list[str] = field(default_factory=list)


def brown_check(f: StepFunction, g: StepFunction, r_count: int = 64,
                phi_catalog: Sequence[IncreasingFn] | None = None,
                tol: float = EPS_ORD) -> BrownReport:
    """Check (i) log-submajorization, (ii) ``log_+`` masses and (iii) ``phi`` submajorization.

    When (i) holds, (ii) is sampled on a geometric ``r`` grid spanning
    ``[1/max value, 1/min positive value]`` and (iii) is checked for every
    ``phi`` in the catalog. When (i) fails, the same grid is searched for an
    ``r`` refuting (ii).
    """
    if f.tail != 0 or g.tail != 0:
        raise ValueError("brown_check needs zero tails")
    phis = default_phi_catalog() if phi_catalog is None else list(phi_catalog)
    cond_i = log_submajorizes(f, g, tol)
    rs = r_grid(f, g, r_count)
    ii_slacks = np.array([leq_slack(log_plus_mass(f, r), log_plus_mass(g, r)) for r in rs])
    worst = int(np.argmin(ii_slacks))
    ii_ok = bool(ii_slacks[worst] >= -tol)
    if not cond_i.holds:
        if ii_ok:
            return BrownReport(cond_i, True, False, "inconclusive", None, float(ii_slacks[worst]))
        return BrownReport(cond_i, False, False, "consistent", float(rs[worst]),
                           float(ii_slacks[worst]))
    failures = []
    if not ii_ok:
        failures.append(f"(ii) at r={rs[worst]:.6g}")
    iii_slack = math.inf
    for phi in phis:
        v = submajorizes(apply_increasing(f, phi), apply_increasing(g, phi), tol)
        iii_slack = min(iii_slack, v.slack)
        if not v.holds:
            failures.append(f"(iii) for {phi} at t={v.worst_at}")
    iii_ok = not any(m.startswith("(iii)") for m in failures)
    status = "consistent" if not failures else "violation"
    return BrownReport(cond_i, ii_ok, iii_ok, status, None, float(ii_slacks[worst]),
                       iii_slack, failures)
