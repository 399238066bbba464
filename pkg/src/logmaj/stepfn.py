"""Decreasing step functions on the half-line [0, inf).

Every singular value function in this package is a :class:`StepFunction`:
finitely many pieces of positive width with strictly decreasing values,
followed by a constant tail on the remaining infinite-measure interval.
Extended reals (log-integrals, infinite norms) are plain floats that may
be ``-inf`` or ``+inf``.

Order verdicts (``submajorizes``, ``log_submajorizes``, ``uniform_majorizes``)
are decided exactly from breakpoints; float noise is absorbed by the relative
tolerance convention of :func:`leq_slack`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

EPS_ORD = 1e-9
# relative width below which a region past the support is treated as rounding
SUPPORT_RTOL = 1e-12


def leq_slack(lhs: float, rhs: float) -> float:
    """Normalized slack of ``lhs <= rhs``; non-negative means the claim holds.

    ``-inf`` on the left (or ``+inf`` on the right) always passes.
    """
    if lhs == -math.inf or rhs == math.inf:
        return math.inf
    if lhs == math.inf or rhs == -math.inf:
        return -math.inf
    return (rhs - lhs) / (1.0 + abs(lhs) + abs(rhs))


def eq_slack(lhs: float, rhs: float) -> float:
    """Normalized (non-positive) slack of ``lhs == rhs``; infinities must match."""
    if math.isinf(lhs) or math.isinf(rhs):
        return 0.0 if lhs == rhs else -math.inf
    return -abs(rhs - lhs) / (1.0 + abs(lhs) + abs(rhs))


class StepFunction:
    """Canonical decreasing right-continuous step function on ``[0, inf)``.

    Parameters
    ----------
    pieces : iterable of (width, value)
        Consecutive pieces starting at 0. Values must be non-increasing and
        not below ``tail``. Zero-width pieces are dropped.
    tail : float
        Value on ``[sum(widths), inf)``.

    The stored form is canonical: equal neighbours are merged and pieces whose
    value equals the tail are dropped, so values are strictly decreasing and
    strictly above the tail. Merging uses exact float equality.
    """

    __slots__ = ("_widths", "_values", "_tail", "_ends")

    def __init__(self, pieces: Iterable[Sequence[float]] = (), tail: float = 0.0):
        tail = float(tail)
        if not math.isfinite(tail) or tail < 0:
            raise ValueError(f"tail must be finite and >= 0, got {tail!r}")
        widths: list[float] = []
        values: list[float] = []
        prev = math.inf
        for w, v in pieces:
            w, v = float(w), float(v)
            if not (math.isfinite(w) and math.isfinite(v)):
                raise ValueError("widths and values must be finite")
            if w < 0 or v < 0:
                raise ValueError(f"negative width or value in piece ({w}, {v})")
            if v > prev:
                raise ValueError("pieces must be non-increasing; use rearrange()")
            if v < tail:
                raise ValueError(f"piece value {v} below tail {tail}")
            prev = v
            if w == 0 or v == tail:
                continue
            if values and values[-1] == v:
                widths[-1] += w
            else:
                widths.append(w)
                values.append(v)
        self._set(np.array(widths, dtype=float), np.array(values, dtype=float), tail)

    def _set(self, widths: np.ndarray, values: np.ndarray, tail: float) -> None:
        widths.flags.writeable = False
        values.flags.writeable = False
        ends = np.cumsum(widths)
        ends.flags.writeable = False
        self._widths = widths
        self._values = values
        self._tail = tail
        self._ends = ends

    @classmethod
    def _canonical(cls, widths: np.ndarray, values: np.ndarray, tail: float) -> "StepFunction":
        # widths > 0, values strictly decreasing and > tail, already checked
        obj = cls.__new__(cls)
        obj._set(np.asarray(widths, dtype=float), np.asarray(values, dtype=float), float(tail))
        return obj

    @property
    def widths(self) -> np.ndarray:
        return self._widths

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def tail(self) -> float:
        return self._tail

    @property
    def pieces(self) -> list[tuple[float, float]]:
        return [(float(w), float(v)) for w, v in zip(self._widths, self._values)]

    @property
    def breakpoints(self) -> np.ndarray:
        """Right ends of the pieces (the points where the value drops)."""
        return self._ends

    @property
    def support(self) -> float:
        """Measure covered by the pieces; with a zero tail, the support length."""
        return float(self._ends[-1]) if len(self._ends) else 0.0

    def __len__(self) -> int:
        return len(self._widths)

    def __call__(self, t):
        return evaluate(self, t)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        return (
            self._tail == other._tail
            and np.array_equal(self._widths, other._widths)
            and np.array_equal(self._values, other._values)
        )

    def __hash__(self) -> int:
        return hash((self._tail, self._widths.tobytes(), self._values.tobytes()))

    def __repr__(self) -> str:
        body = ", ".join(f"({w:.6g}, {v:.6g})" for w, v in self.pieces)
        return f"StepFunction([{body}], tail={self._tail:.6g})"

    def to_dict(self) -> dict:
        return {"pieces": [[w, v] for w, v in self.pieces], "tail": self._tail}

    @classmethod
    def from_dict(cls, data: dict) -> "StepFunction":
        """Load from ``{"pieces": [[w, v], ...], "tail": t}``, canonicalizing.

        Pieces need not be sorted; they are rearranged.
        """
        try:
            raw = [(float(w), float(v)) for w, v in data["pieces"]]
            tail = float(data.get("tail", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed step function: {exc}") from None
        return rearrange(raw, tail)


ZERO = StepFunction()


@dataclass(frozen=True)
class Verdict:
    """Outcome of an order comparison.

    ``slack`` is the smallest normalized slack found (see :func:`leq_slack`),
    ``worst_at`` the location where it occurs (``t``, ``(a, b)`` or ``inf``)
    and ``lhs``/``rhs`` the compared quantities there.
    """

    holds: bool
    slack: float
    worst_at: object = None
    lhs: float = math.nan
    rhs: float = math.nan

    def __bool__(self) -> bool:
        return self.holds


# ---------------------------------------------------------------------------
# evaluation and integration


def evaluate(f: StepFunction, t):
    """Value of ``f`` at ``t >= 0`` (scalar or array), right-continuous."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("evaluate requires t >= 0")
    idx = np.searchsorted(f.breakpoints, t_arr, side="right")
    vals = np.append(f.values, f.tail)[idx]
    return float(vals) if vals.ndim == 0 else vals


def integral(f: StepFunction, t):
    """``int_0^t f`` for ``t`` in ``[0, inf]`` (scalar or array)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("integral requires t >= 0")
    ends = f.breakpoints
    mass = np.concatenate(([0.0], np.cumsum(f.widths * f.values)))
    starts = np.concatenate(([0.0], ends))
    vals_ext = np.append(f.values, f.tail)
    idx = np.searchsorted(ends, t_arr, side="right")
    finite_t = np.where(np.isinf(t_arr), 0.0, t_arr)
    out = mass[idx] + (finite_t - starts[idx]) * vals_ext[idx]
    out = np.where(np.isinf(t_arr), math.inf if f.tail > 0 else mass[-1], out)
    return float(out) if out.ndim == 0 else out


def log_integral(f: StepFunction, t):
    """``int_0^t log f`` as an extended real; ``-inf`` once a zero region is reached."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("log_integral requires t >= 0")
    ends = f.breakpoints
    logs = np.log(f.values)
    mass = np.concatenate(([0.0], np.cumsum(f.widths * logs)))
    starts = np.concatenate(([0.0], ends))
    n = len(ends)
    idx = np.searchsorted(ends, t_arr, side="right")
    inside = idx < n
    safe = np.minimum(idx, max(n - 1, 0))
    piece_part = np.zeros_like(t_arr)
    if n:
        piece_part = np.where(inside, (t_arr - starts[safe]) * logs[safe], 0.0)
    over = np.where(inside, 0.0, t_arr - (ends[-1] if n else 0.0))
    if f.tail > 0:
        with np.errstate(invalid="ignore"):
            tail_part = over * math.log(f.tail)
    else:
        with np.errstate(invalid="ignore"):
            # a zero region shorter than rounding in the support is not a zero region
            slop = SUPPORT_RTOL * max(float(ends[-1]) if n else 0.0, 1.0)
            tail_part = np.where(over > slop, -math.inf, 0.0)
    if np.any(np.isinf(t_arr)):
        # t = inf: only meaningful with tail exactly 1
        lt = math.log(f.tail) if f.tail > 0 else -math.inf
        inf_val = mass[-1] if lt == 0 else (math.inf if lt > 0 else -math.inf)
        tail_part = np.where(np.isinf(t_arr), 0.0, tail_part)
        out = np.where(np.isinf(t_arr), inf_val, mass[idx] + piece_part + tail_part)
    else:
        out = mass[idx] + piece_part + tail_part
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# constructions


def rearrange(raw: Iterable[Sequence[float]], tail: float = 0.0) -> StepFunction:
    """Decreasing rearrangement of a simple function.

    ``raw`` is an unordered sequence of ``(width, value)`` pairs covering a
    set of finite measure; outside it the function equals ``tail``. The result
    has the same distribution function ``s -> m{f > s}``.
    """
    pairs = []
    for w, v in raw:
        w, v = float(w), float(v)
        if w < 0 or v < 0:
            raise ValueError(f"negative width or value in piece ({w}, {v})")
        if v < tail:
            raise ValueError(f"value {v} below tail {tail}")
        if w > 0:
            pairs.append((w, v))
    pairs.sort(key=lambda p: -p[1])
    return StepFunction(pairs, tail)


def dilate(f: StepFunction, s: float) -> StepFunction:
    """Dilation ``(sigma_s f)(t) = f(t / s)``."""
    if not s > 0:
        raise ValueError(f"dilation factor must be > 0, got {s!r}")
    return StepFunction._canonical(f.widths * s, f.values.copy(), f.tail)


_COMBINE: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "sum": np.add,
    "product": np.multiply,
    "max": np.maximum,
}


def combine(f: StepFunction, g: StepFunction, kind: str) -> StepFunction:
    """Pointwise ``sum``, ``product`` or ``max`` of two step functions."""
    try:
        op = _COMBINE[kind]
    except KeyError:
        raise ValueError(f"unknown combine kind {kind!r}") from None
    ends = np.union1d(f.breakpoints, g.breakpoints)
    starts = np.concatenate(([0.0], ends[:-1]))
    widths = np.diff(np.concatenate(([0.0], ends)))
    vals = op(evaluate(f, starts), evaluate(g, starts)) if len(ends) else np.empty(0)
    tail = float(op(f.tail, g.tail))
    return StepFunction(zip(widths, vals), tail)


@dataclass(frozen=True)
class IncreasingFn:
    """Continuous increasing map of ``[0, inf)`` with ``fn(0) = 0``.

    Built only through the catalog constructors :func:`power`, :func:`scale`,
    :func:`log_plus` and :func:`log1p_power`.
    """

    name: str
    param: float = 1.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            if self.name == "power":
                out = np.power(t, self.param)
            elif self.name == "scale":
                out = self.param * t
            elif self.name == "log_plus":
                out = np.maximum(np.log(np.where(t > 0, t, 1.0)), 0.0)
            elif self.name == "log1p_power":
                out = np.log1p(np.power(t, self.param))
            else:
                raise ValueError(f"unknown function {self.name!r}")
        return float(out) if out.ndim == 0 else out

    @property
    def exp_convex(self) -> bool:
        """Whether ``fn o exp`` is convex (the class used for majorization laws)."""
        return self.name in ("power", "scale", "log1p_power")

    def __str__(self) -> str:
        if self.name == "log_plus":
            return "log_plus"
        return f"{self.name}({self.param:g})"


def power(alpha: float) -> IncreasingFn:
    if not alpha > 0:
        raise ValueError(f"power exponent must be > 0, got {alpha!r}")
    return IncreasingFn("power", float(alpha))


def scale(c: float) -> IncreasingFn:
    if not c > 0:
        raise ValueError(f"scale factor must be > 0, got {c!r}")
    return IncreasingFn("scale", float(c))


def log_plus() -> IncreasingFn:
    return IncreasingFn("log_plus", 0.0)


def log1p_power(p: float = 1.0) -> IncreasingFn:
    """``t -> log(1 + t**p)``; composed with exp it is a convex softplus."""
    if not p > 0:
        raise ValueError(f"exponent must be > 0, got {p!r}")
    return IncreasingFn("log1p_power", float(p))


def apply_increasing(f: StepFunction, fn: IncreasingFn) -> StepFunction:
    """Compose ``fn`` with ``f``; monotone maps keep the pieces ordered."""
    vals = np.atleast_1d(fn(f.values)) if len(f) else np.empty(0)
    return StepFunction(zip(f.widths, vals), fn(f.tail))


# ---------------------------------------------------------------------------
# order relations


def _tail_verdict(tail_f: float, tail_g: float, tol: float) -> Verdict | None:
    s = leq_slack(tail_f, tail_g)
    if s < -tol:
        return Verdict(False, s, math.inf, tail_f, tail_g)
    return None


def _curve_verdict(ts: np.ndarray, lhs: np.ndarray, rhs: np.ndarray, tol: float) -> Verdict:
    if len(ts) == 0:
        return Verdict(True, math.inf)
    slacks = np.array([leq_slack(float(a), float(b)) for a, b in zip(lhs, rhs)])
    i = int(np.argmin(slacks))
    s = float(slacks[i])
    return Verdict(s >= -tol, s, float(ts[i]), float(lhs[i]), float(rhs[i]))


def submajorizes(f: StepFunction, g: StepFunction, tol: float = EPS_ORD) -> Verdict:
    """Decide ``f ≺≺ g``: ``int_0^t f <= int_0^t g`` for every ``t > 0``.

    The integral curves are piecewise linear with kinks at the breakpoints,
    so checking the union of breakpoints and the tail slopes is exact.
    """
    bad = _tail_verdict(f.tail, g.tail, tol)
    if bad is not None:
        return bad
    ts = np.union1d(f.breakpoints, g.breakpoints)
    return _curve_verdict(ts, integral(f, ts), integral(g, ts), tol)


def log_submajorizes(f: StepFunction, g: StepFunction, tol: float = EPS_ORD) -> Verdict:
    """Decide ``f ≺≺_log g``: ``int_0^t log f <= int_0^t log g`` for every ``t > 0``."""
    if f.tail > 0 and g.tail == 0:
        t = max(g.support, f.support) + 1.0
        return Verdict(False, -math.inf, t, float(log_integral(f, t)), -math.inf)
    if f.tail > 0 and g.tail > 0:
        bad = _tail_verdict(math.log(f.tail), math.log(g.tail), tol)
        if bad is not None:
            return bad
    ts = np.union1d(f.breakpoints, g.breakpoints)
    return _curve_verdict(ts, log_integral(f, ts), log_integral(g, ts), tol)


def pointwise_leq(f: StepFunction, g: StepFunction, tol: float = EPS_ORD,
                  min_width: float = 1e-12) -> Verdict:
    """Decide ``f <= g`` pointwise.

    Values are compared at the midpoints of the common refinement; cells
    narrower than ``min_width * (1 + total length)`` are skipped so that
    breakpoints differing by rounding do not produce spurious verdicts.
    """
    bad = _tail_verdict(f.tail, g.tail, tol)
    if bad is not None:
        return bad
    ts = _midpoints(f, g, min_width)
    return _curve_verdict(ts, evaluate(f, ts), evaluate(g, ts), tol)


def _midpoints(f: StepFunction, g: StepFunction, min_width: float) -> np.ndarray:
    ends = np.union1d(f.breakpoints, g.breakpoints)
    edges = np.concatenate(([0.0], ends))
    widths = np.diff(edges)
    keep = widths > min_width * (1.0 + (edges[-1] if len(edges) else 0.0))
    return (edges[:-1] + widths / 2)[keep]


def max_pointwise_gap(f: StepFunction, g: StepFunction, min_width: float = 1e-12) -> float:
    """Largest normalized pointwise difference, tails included (for equality checks)."""
    ts = _midpoints(f, g, min_width)
    fv, gv = np.append(evaluate(f, ts), f.tail), np.append(evaluate(g, ts), g.tail)
    return float(np.max(np.abs(fv - gv) / (1.0 + np.abs(fv) + np.abs(gv))))


def uniform_majorizes(f: StepFunction, g: StepFunction, lam: float,
                      tol: float = EPS_ORD) -> Verdict:
    """Decide ``int_{lam a}^b f <= int_a^b g`` for all ``0 < lam a <= b``.

    With ``h(a, b) = int_a^b g - int_{lam a}^b f`` linear on every cell cut
    out by the candidate grids, the minimum over the constraint region sits at
    a vertex: ``a`` in ``{0} ∪ breaks(g) ∪ breaks(f)/lam`` and ``b`` in
    ``breaks(f) ∪ breaks(g) ∪ {lam a}``. Vertices on the diagonal ``b = lam a``
    with ``b`` a breakpoint have ``h >= 0`` automatically. Unbounded cells are
    handled by the tail comparison.
    """
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam!r}")
    bad = _tail_verdict(f.tail, g.tail, tol)
    if bad is not None:
        return bad
    a = np.union1d(np.concatenate(([0.0], g.breakpoints)), f.breakpoints / lam)
    b = np.union1d(f.breakpoints, g.breakpoints)
    la = lam * a
    # (a_i, b_j) with b_j >= lam a_i, plus (a_i, lam a_i)
    A = np.concatenate((np.repeat(a, len(b)), a))
    B = np.concatenate((np.tile(b, len(a)), la))
    mask = B >= lam * A
    A, B = A[mask], B[mask]
    if len(A) == 0:
        return Verdict(True, math.inf)
    lhs = integral(f, B) - integral(f, lam * A)
    rhs = integral(g, B) - integral(g, A)
    denom = 1.0 + np.abs(lhs) + np.abs(rhs)
    slacks = (rhs - lhs) / denom
    i = int(np.argmin(slacks))
    s = float(slacks[i])
    return Verdict(s >= -tol, s, (float(A[i]), float(B[i])), float(lhs[i]), float(rhs[i]))


def min_uniform_lambda(f: StepFunction, g: StepFunction, lam_hi: float,
                       steps: int = 40, tol: float = EPS_ORD) -> float | None:
    """Smallest ``lam`` in ``[1, lam_hi]`` (to bisection resolution) with ``f ⊲_lam g``.

    Uses that the relation for ``lam`` implies it for every larger ``lam``.
    Returns ``None`` when ``lam_hi`` itself fails.
    """
    if lam_hi < 1:
        raise ValueError(f"lam_hi must be >= 1, got {lam_hi!r}")
    if not uniform_majorizes(f, g, lam_hi, tol):
        return None
    if uniform_majorizes(f, g, 1.0, tol):
        return 1.0
    lo, hi = 1.0, float(lam_hi)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if uniform_majorizes(f, g, mid, tol):
            hi = mid
        else:
            lo = mid
    return hi
