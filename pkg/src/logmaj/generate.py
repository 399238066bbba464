"""Seeded random instances: block operators and decreasing step functions."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from logmaj.matalg import BlockOperator
from logmaj.stepfn import StepFunction, log_submajorizes, rearrange

OPERATOR_KINDS = (
    "general", "singular", "psd", "psd_geq_one", "unitary", "contraction", "projection",
)
KINDS = OPERATOR_KINDS + ("stepfn",)


@dataclass(frozen=True)
class GenProfile:
    """What to generate.

    For ``general``/``singular``/``contraction`` the ``value_range`` bounds the
    singular values; for ``psd`` it bounds the singular values of the factor
    ``g`` in ``g* g``; for ``psd_geq_one`` it bounds the eigenvalues added on
    top of the identity; for ``stepfn`` it bounds the piece values.
    """

    kind: str
    dims: tuple[int, ...] = (3,)
    weights: tuple[float, ...] = (1.0,)
    value_range: tuple[float, float] = (0.25, 4.0)
    pieces: int = 4
    tail: float = 0.0

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        lo, hi = self.value_range
        if not (0 <= lo < hi):
            raise ValueError(f"value_range needs 0 <= lo < hi, got {self.value_range}")
        if self.kind == "stepfn":
            if self.pieces < 0:
                raise ValueError("pieces must be >= 0")
            if self.tail < 0 or (self.pieces and self.tail > lo):
                raise ValueError("tail must lie in [0, lo]")
            return
        if len(self.dims) != len(self.weights) or not self.dims:
            raise ValueError("dims and weights must be non-empty and of equal length")
        if any(int(d) < 1 for d in self.dims):
            raise ValueError("block sizes must be >= 1")
        if any(not w > 0 for w in self.weights):
            raise ValueError("weights must be > 0")


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary printable parts."""
    h = hashlib.blake2b("/".join(map(str, parts)).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def _values(rng: np.random.Generator, n: int, lo: float, hi: float) -> np.ndarray:
    if lo > 0:
        return np.exp(rng.uniform(np.log(lo), np.log(hi), n))
    return rng.uniform(lo, hi, n)


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _block(rng: np.random.Generator, kind: str, n: int, lo: float, hi: float) -> np.ndarray:
    if kind == "unitary":
        return haar_unitary(rng, n)
    if kind in ("general", "singular", "contraction"):
        if kind == "contraction":
            s = rng.uniform(min(lo, 1.0), min(hi, 1.0), n)
        else:
            s = _values(rng, n, lo, hi)
        if kind == "singular":
            k = max(1, n // 3)
            s[rng.choice(n, size=k, replace=False)] = 0.0
        u, v = haar_unitary(rng, n), haar_unitary(rng, n)
        return (u * s) @ v.conj().T
    if kind == "psd":
        g = _block(rng, "general", n, lo, hi)
        return g.conj().T @ g
    if kind == "psd_geq_one":
        k = int(rng.integers(0, n + 1))  # dimension of the eigenvalue-1 subspace
        lam = np.concatenate((np.zeros(k), _values(rng, n - k, max(lo, 1e-3), hi)))
        u = haar_unitary(rng, n)
        return np.eye(n) + (u * lam) @ u.conj().T
    if kind == "projection":
        k = int(rng.integers(0, n + 1))
        u = haar_unitary(rng, n)[:, :k]
        return u @ u.conj().T
    raise ValueError(f"not an operator kind: {kind!r}")


def gen_operator(seed: int, profile: GenProfile) -> BlockOperator:
    """Deterministic random :class:`BlockOperator` for ``(seed, profile)``."""
    profile.validate()
    if profile.kind == "stepfn":
        raise ValueError("use gen_stepfn for kind 'stepfn'")
    rng = np.random.default_rng(seed)
    lo, hi = profile.value_range
    blocks = [(w, _block(rng, profile.kind, int(n), lo, hi))
              for n, w in zip(profile.dims, profile.weights)]
    return BlockOperator(blocks)


def gen_stepfn(seed: int, profile: GenProfile) -> StepFunction:
    """Deterministic random decreasing step function with ``profile.pieces`` pieces.

    Values are log-uniform in ``value_range`` and widths uniform in ``[0.2, 2]``.
    """
    profile.validate()
    rng = np.random.default_rng(seed)
    lo, hi = profile.value_range
    lo = max(lo, profile.tail)
    vals = np.sort(_values(rng, profile.pieces, lo, hi))[::-1]
    widths = rng.uniform(0.2, 2.0, profile.pieces)
    return StepFunction(zip(widths, vals), profile.tail)


def gen_shape(rng: np.random.Generator, max_blocks: int = 3, max_dim: int = 6):
    """Random block structure: ``(dims, weights)``."""
    m = int(rng.integers(1, max_blocks + 1))
    dims = tuple(int(d) for d in rng.integers(1, max_dim + 1, m))
    weights = tuple(float(w) for w in np.exp(rng.uniform(np.log(0.25), np.log(2.0), m)))
    return dims, weights


def gen_logsub_pair(rng: np.random.Generator, cells: int = 8,
                    value_range: tuple[float, float] = (0.1, 10.0)):
    """Pair ``(f, g)`` of zero-tail step functions with ``f ≺≺_log g`` by construction.

    ``g`` lives on a grid of equal cells; ``log f`` is a doubly stochastic
    average of ``log g`` (a convex combination of permutations), then lowered
    on a random subset of cells and sometimes zeroed at the end.
    """
    h = float(rng.uniform(0.2, 1.0))
    logg = np.sort(rng.uniform(np.log(value_range[0]), np.log(value_range[1]), cells))[::-1]
    k = int(rng.integers(1, 4))
    weights = rng.dirichlet(np.ones(k))
    logf = sum(w * logg[rng.permutation(cells)] for w in weights)
    logf = np.sort(logf)[::-1]
    logf -= rng.exponential(0.3, cells) * (rng.random(cells) < 0.4)
    f_vals = np.exp(logf)
    if rng.random() < 0.25:
        f_vals[-int(rng.integers(1, 3)):] = 0.0
    g = rearrange([(h, v) for v in np.exp(logg)])
    f = rearrange([(h, v) for v in f_vals])
    return f, g


def gen_non_logsub_pair(rng: np.random.Generator, pieces: int = 5,
                        value_range: tuple[float, float] = (0.1, 10.0), tries: int = 50):
    """Pair ``(f, g)`` of zero-tail step functions with ``f`` not log-submajorized by ``g``."""
    prof = GenProfile("stepfn", pieces=pieces, value_range=value_range)
    for _ in range(tries):
        f = gen_stepfn(int(rng.integers(2**63)), prof)
        g = gen_stepfn(int(rng.integers(2**63)), prof)
        if not log_submajorizes(f, g):
            return f, g
        if not log_submajorizes(g, f):
            return g, f
    raise RuntimeError("could not draw a non-log-submajorized pair")
