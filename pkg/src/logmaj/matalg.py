"""Block operators with a weighted trace.

A :class:`BlockOperator` is a finite direct sum of square complex matrices
``x = x_1 ⊕ ... ⊕ x_m`` in the algebra ``⊕ M_{n_k}`` carrying the trace
``tau(x) = sum_k c_k Tr(x_k)``. Every function here acts block by block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from logmaj.stepfn import IncreasingFn, StepFunction, rearrange

EPS_HERM = 1e-10
EPS_EIG = 1e-10
# singular values below RANK_RTOL * (largest in the block) are treated as exact zeros
RANK_RTOL = 1e-11


class ShapeMismatch(ValueError):
    """Operands do not share block sizes and weights."""


class NotHermitian(ValueError):
    pass


class NotPositive(ValueError):
    pass


class IllConditionedCut(ValueError):
    """An eigenvalue sits within tolerance of a spectral threshold."""


class BlockOperator:
    """Direct sum of weighted square complex blocks.

    Parameters
    ----------
    blocks : sequence of (weight, matrix)
        Each weight is a positive finite float, each matrix square.
    """

    __slots__ = ("weights", "mats")

    def __init__(self, blocks: Sequence[tuple[float, object]]):
        weights, mats = [], []
        for c, m in blocks:
            c = float(c)
            if not (math.isfinite(c) and c > 0):
                raise ValueError(f"block weight must be positive and finite, got {c!r}")
            m = np.array(m, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError(f"blocks must be square matrices, got shape {m.shape}")
            if not np.all(np.isfinite(m)):
                raise ValueError("matrix entries must be finite")
            m.flags.writeable = False
            weights.append(c)
            mats.append(m)
        if not mats:
            raise ValueError("a block operator needs at least one block")
        self.weights = tuple(weights)
        self.mats = tuple(mats)

    @classmethod
    def _wrap(cls, weights: tuple, mats: Sequence[np.ndarray]) -> "BlockOperator":
        obj = cls.__new__(cls)
        obj.weights = weights
        frozen = []
        for m in mats:
            m = np.asarray(m, dtype=complex)
            m.flags.writeable = False
            frozen.append(m)
        obj.mats = tuple(frozen)
        return obj

    @classmethod
    def single(cls, matrix, weight: float = 1.0) -> "BlockOperator":
        return cls([(weight, matrix)])

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(m.shape[0] for m in self.mats)

    @property
    def tau_one(self) -> float:
        """``tau(1) = sum_k c_k n_k``."""
        return float(sum(c * n for c, n in zip(self.weights, self.dims)))

    def like(self, mats: Sequence[np.ndarray]) -> "BlockOperator":
        return BlockOperator._wrap(self.weights, mats)

    def _check(self, other: "BlockOperator") -> None:
        if self.weights != other.weights or self.dims != other.dims:
            raise ShapeMismatch(
                f"block structures differ: {self.dims}/{self.weights} vs "
                f"{other.dims}/{other.weights}"
            )

    def __add__(self, other: "BlockOperator") -> "BlockOperator":
        self._check(other)
        return self.like([a + b for a, b in zip(self.mats, other.mats)])

    def __sub__(self, other: "BlockOperator") -> "BlockOperator":
        self._check(other)
        return self.like([a - b for a, b in zip(self.mats, other.mats)])

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        self._check(other)
        return self.like([a @ b for a, b in zip(self.mats, other.mats)])

    def __mul__(self, scalar: complex) -> "BlockOperator":
        return self.like([scalar * a for a in self.mats])

    __rmul__ = __mul__

    @property
    def H(self) -> "BlockOperator":
        """Adjoint (blockwise conjugate transpose)."""
        return self.like([a.conj().T for a in self.mats])

    def identity_like(self) -> "BlockOperator":
        return self.like([np.eye(n, dtype=complex) for n in self.dims])

    def zeros_like(self) -> "BlockOperator":
        return self.like([np.zeros((n, n), dtype=complex) for n in self.dims])

    def trace(self) -> complex:
        """Weighted trace ``tau(x)``."""
        return complex(sum(c * np.trace(m) for c, m in zip(self.weights, self.mats)))

    def fro_norm(self) -> float:
        """Unweighted Frobenius norm over all blocks (for residual checks)."""
        return float(math.sqrt(sum(np.vdot(m, m).real for m in self.mats)))

    def is_hermitian(self, tol: float = EPS_HERM) -> bool:
        return all(_herm_defect(m) <= tol * max(1.0, np.abs(m).max(initial=0.0)) for m in self.mats)

    def to_dict(self) -> dict:
        return {
            "blocks": [
                {"weight": c, "re": m.real.tolist(), "im": m.imag.tolist()}
                for c, m in zip(self.weights, self.mats)
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BlockOperator":
        """Load ``{"blocks": [{"weight": c, "re": [[...]], "im": [[...]]}, ...]}``."""
        try:
            blocks = []
            for b in data["blocks"]:
                re = np.array(b["re"], dtype=float)
                im = np.array(b["im"], dtype=float) if "im" in b else np.zeros_like(re)
                if re.shape != im.shape:
                    raise ValueError("re/im shapes differ")
                blocks.append((b["weight"], re + 1j * im))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed block operator: {exc}") from None
        return cls(blocks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BlockOperator):
            return NotImplemented
        return self.weights == other.weights and all(
            a.shape == b.shape and np.array_equal(a, b) for a, b in zip(self.mats, other.mats)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"BlockOperator(dims={self.dims}, weights={self.weights})"


def algebra(x: BlockOperator, y=None, kind: str = "add") -> BlockOperator:
    """Functional entry point for the blockwise algebra.

    ``kind`` is one of ``add``, ``mul``, ``adjoint``, ``scale`` (``y`` a
    scalar) or ``identity_like``.
    """
    if kind == "add":
        return x + y
    if kind == "mul":
        return x @ y
    if kind == "adjoint":
        return x.H
    if kind == "scale":
        return x * y
    if kind == "identity_like":
        return x.identity_like()
    raise ValueError(f"unknown algebra kind {kind!r}")


# ---------------------------------------------------------------------------
# Hermitian eigensolvers


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray  # descending
    unitary: np.ndarray  # columns are eigenvectors


def _herm_defect(a: np.ndarray) -> float:
    return float(np.abs(a - a.conj().T).max(initial=0.0))


def jacobi_eigh(a: np.ndarray, tol: float = 1e-13, max_sweeps: int = 64):
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Each rotation first removes the phase of ``a[p, q]`` and then applies
    the real symmetric Jacobi rotation that annihilates it. Sweeps stop once
    the off-diagonal Frobenius norm drops below ``tol * ||a||_F``.

    Returns
    -------
    w : ndarray
        Eigenvalues, unsorted.
    v : ndarray
        Unitary whose columns are the matching eigenvectors.
    sweeps : int
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if n < 2 or scale == 0:
        return a.diagonal().real.copy(), v, 0
    thresh = tol * scale
    negligible = 1e-20 * scale
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(a.diagonal())))
        if off <= thresh:
            sweeps -= 1
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= negligible:
                    # far below the stopping threshold; rotating would divide by a denormal
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    return a.diagonal().real.copy(), v, sweeps


def herm_eigen(a, method: str = "lapack") -> SpectralData:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    ``method`` selects LAPACK (``numpy.linalg.eigh``) or the in-house cyclic
    Jacobi solver (:func:`jacobi_eigh`).
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("herm_eigen needs a square matrix")
    if _herm_defect(a) > EPS_HERM * max(1.0, np.abs(a).max(initial=0.0)):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    a = 0.5 * (a + a.conj().T)
    if method == "lapack":
        w, v = np.linalg.eigh(a)
    elif method == "jacobi":
        w, v, _ = jacobi_eigh(a)
    else:
        raise ValueError(f"unknown eigen method {method!r}")
    order = np.argsort(-w, kind="stable")
    return SpectralData(w[order], v[:, order])


# ---------------------------------------------------------------------------
# functional calculus


def _clip_psd(w: np.ndarray, strict: bool) -> np.ndarray:
    top = max(float(np.max(np.abs(w), initial=0.0)), 1.0)
    if strict and np.any(w < -EPS_EIG * top):
        raise NotPositive(f"operator is not positive: eigenvalue {w.min():.3e}")
    w = np.where(w < RANK_RTOL * max(float(np.max(w, initial=0.0)), 0.0), 0.0, w)
    return np.maximum(w, 0.0)


def psd_apply(a: BlockOperator, fn, strict: bool = True) -> BlockOperator:
    """``fn(a)`` for positive ``a`` by spectral calculus; ``fn`` acts on arrays."""
    out = []
    for m in a.mats:
        sd = herm_eigen(m)
        w = _clip_psd(sd.eigenvalues, strict)
        u = sd.unitary
        out.append((u * np.asarray(fn(w), dtype=float)) @ u.conj().T)
    return a.like(out)


def frac_power(a: BlockOperator, alpha: float) -> BlockOperator:
    """``a**alpha`` for positive ``a``; eigenvalues are clipped at zero first."""
    if not alpha > 0:
        raise ValueError(f"power must be > 0, got {alpha!r}")
    if alpha == 1:
        return psd_apply(a, lambda w: w)
    return psd_apply(a, lambda w: np.power(w, alpha))


def func_psd(a: BlockOperator, fn: IncreasingFn) -> BlockOperator:
    """Catalog function of a positive operator (``f(|x|)`` when ``a = |x|``)."""
    return psd_apply(a, lambda w: np.atleast_1d(fn(w)))


def _svd(m: np.ndarray):
    u, s, vh = np.linalg.svd(m)
    if len(s):
        s = np.where(s <= RANK_RTOL * s[0], 0.0, s)
    return u, s, vh


def singular_values(x: BlockOperator) -> list[np.ndarray]:
    """Descending singular values of each block, with numerical zeros set to 0."""
    out = []
    for m in x.mats:
        s = np.linalg.svd(m, compute_uv=False)
        if len(s):
            s = np.where(s <= RANK_RTOL * s[0], 0.0, s)
        out.append(s)
    return out


def abs_op(x: BlockOperator) -> BlockOperator:
    """``|x| = (x* x)^{1/2}``."""
    return abs_and_polar(x)[1]


def abs_and_polar(x: BlockOperator) -> tuple[BlockOperator, BlockOperator]:
    """Polar decomposition ``x = u |x|``.

    ``u`` is the partial isometry with initial space ``ran |x|``; it vanishes
    on ``ker |x|``.
    """
    us, absx = [], []
    for m in x.mats:
        w, s, vh = _svd(m)
        rank = int(np.count_nonzero(s))
        v = vh.conj().T
        absx.append((v * s) @ vh)
        us.append(w[:, :rank] @ vh[:rank, :])
    return x.like(us), x.like(absx)


def spectral_proj(a: BlockOperator, s: float, eps: float = EPS_EIG) -> BlockOperator:
    """``e^a(s, inf)``: projection onto eigenvectors with eigenvalue ``> s``.

    Raises :class:`IllConditionedCut` when an eigenvalue lies within
    ``eps * max(1, |s|)`` of ``s``.
    """
    out = []
    for m in a.mats:
        sd = herm_eigen(m)
        w = sd.eigenvalues
        if np.any(np.abs(w - s) <= eps * max(1.0, abs(s))):
            raise IllConditionedCut(f"eigenvalue within {eps:g} of cut {s:g}")
        u = sd.unitary[:, w > s]
        out.append(u @ u.conj().T)
    return a.like(out)


def proj_join(p: BlockOperator, q: BlockOperator) -> BlockOperator:
    """Projection onto ``ran p + ran q`` (the lattice join ``p ∨ q``)."""
    p._check(q)
    out = []
    for pm, qm in zip(p.mats, q.mats):
        stacked = np.hstack([pm, qm])
        u, s, _ = np.linalg.svd(stacked)
        top = s[0] if len(s) else 0.0
        rank = int(np.count_nonzero(s > 1e-8 * max(top, 1.0)))
        basis = u[:, :rank]
        out.append(basis @ basis.conj().T)
    return p.like(out)


def rank_tau(p: BlockOperator) -> float:
    """``tau(p)`` for a projection, computed from the rounded ranks."""
    return float(sum(c * round(np.trace(m).real) for c, m in zip(p.weights, p.mats)))


# ---------------------------------------------------------------------------
# singular value function


def mu_op(x: BlockOperator) -> StepFunction:
    """Generalized singular value function ``mu(.; x)``.

    Each singular value of block ``k`` contributes a piece of width ``c_k``;
    the pieces are rearranged into decreasing order. The tail is 0.
    """
    raw = []
    for c, s in zip(x.weights, singular_values(x)):
        raw.extend((c, float(v)) for v in s if v > 0)
    return rearrange(raw, 0.0)


def distribution(x: BlockOperator, s: float) -> float:
    """``d(s; |x|) = tau(e^{|x|}(s, inf))``: weighted count of singular values ``> s``."""
    if s < 0:
        raise ValueError("distribution requires s >= 0")
    return float(sum(c * np.count_nonzero(sv > s) for c, sv in zip(x.weights, singular_values(x))))


def best_approx(x: BlockOperator, k: int) -> float:
    """``min ||x - z||`` over rank ``<= k`` matrices ``z`` (single block, unit weight).

    The minimizer is the truncated singular value decomposition; the returned
    distance is measured as the operator norm of the residual.
    """
    if len(x.mats) != 1 or x.weights[0] != 1.0:
        raise ValueError("best_approx needs a single block with weight 1")
    m = x.mats[0]
    n = m.shape[0]
    if not 0 <= k < n:
        raise ValueError(f"rank must satisfy 0 <= k < {n}, got {k}")
    u, s, vh = np.linalg.svd(m)
    z = (u[:, :k] * s[:k]) @ vh[:k, :]
    return operator_norm(m - z)


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value via the eigenvalues of ``m* m``."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    w = herm_eigen(m.conj().T @ m).eigenvalues
    return math.sqrt(max(float(w[0]), 0.0))
