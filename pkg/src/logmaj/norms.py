"""Fully symmetric norms on step functions and their operator lifts.

``||x||_{E(tau)} = ||mu(x)||_E`` for ``E`` one of ``L_p`` (``p >= 1``),
``L_inf`` or the Ky Fan norm ``f -> int_0^t f``. Infinite norms are
returned as ``inf``, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from logmaj.matalg import BlockOperator, mu_op
from logmaj.stepfn import StepFunction, integral


@dataclass(frozen=True)
class Lp:
    p: float

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"L_p needs p >= 1, got {self.p!r}")

    def __str__(self) -> str:
        return f"L{self.p:g}"


@dataclass(frozen=True)
class Linf:
    def __str__(self) -> str:
        return "Linf"


@dataclass(frozen=True)
class KyFan:
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"Ky Fan norm needs t > 0, got {self.t!r}")

    def __str__(self) -> str:
        return f"KyFan({self.t:g})"


NormSpec = Union[Lp, Linf, KyFan]

# the catalog exercised by the Hölder-type laws
STANDARD_NORMS: tuple[NormSpec, ...] = (Lp(1.0), Lp(2.0), Lp(4.0), Linf(), KyFan(1.0))


def norm_to_dict(spec: NormSpec) -> dict:
    if isinstance(spec, Lp):
        return {"kind": "lp", "p": spec.p}
    if isinstance(spec, Linf):
        return {"kind": "linf"}
    if isinstance(spec, KyFan):
        return {"kind": "kyfan", "t": spec.t}
    raise TypeError(f"not a norm spec: {spec!r}")


def norm_from_dict(data: dict) -> NormSpec:
    kind = data.get("kind")
    if kind == "lp":
        return Lp(float(data["p"]))
    if kind == "linf":
        return Linf()
    if kind == "kyfan":
        return KyFan(float(data["t"]))
    raise ValueError(f"unknown norm kind {kind!r}")


def norm_step(f: StepFunction, spec: NormSpec) -> float:
    """Norm of a decreasing step function."""
    if isinstance(spec, Linf):
        return float(f.values[0]) if len(f) else f.tail
    if isinstance(spec, KyFan):
        return float(integral(f, spec.t))
    if isinstance(spec, Lp):
        if f.tail > 0:
            return math.inf
        if len(f) == 0:
            return 0.0
        # factor out the sup to keep large p from overflowing
        top = float(f.values[0])
        s = float(np.sum(f.widths * (f.values / top) ** spec.p))
        return top * s ** (1.0 / spec.p)
    raise TypeError(f"not a norm spec: {spec!r}")


def norm_op(x: BlockOperator, spec: NormSpec) -> float:
    """``||mu(x)||_E``; with one unit-weight block and ``L_p`` this is Schatten-p."""
    return norm_step(mu_op(x), spec)
