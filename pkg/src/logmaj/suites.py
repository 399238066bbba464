"""Executable law catalog, suite runner and reports.

Each law ``L1`` ... ``L29`` draws random inputs for one case, evaluates both
sides of an inequality or identity with the library operations and records
every comparison. A case passes when all of its comparisons pass. Reports are
a pure function of ``(suite, master seed, config)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from logmaj.generate import (
    GenProfile,
    derive_seed,
    gen_logsub_pair,
    gen_non_logsub_pair,
    gen_operator,
    gen_shape,
    gen_stepfn,
)
from logmaj.majorize import brown_check, in_log_plus, log_det_fk
from logmaj.matalg import (
    BlockOperator,
    IllConditionedCut,
    abs_and_polar,
    abs_op,
    best_approx,
    frac_power,
    func_psd,
    mu_op,
    operator_norm,
    proj_join,
    rank_tau,
    spectral_proj,
)
from logmaj.norms import STANDARD_NORMS, norm_step
from logmaj.stepfn import (
    StepFunction,
    Verdict,
    apply_increasing,
    combine,
    dilate,
    eq_slack,
    evaluate,
    integral,
    leq_slack,
    log1p_power,
    log_integral,
    log_plus,
    log_submajorizes,
    max_pointwise_gap,
    min_uniform_lambda,
    pointwise_leq,
    power,
    rearrange,
    scale,
    submajorizes,
    uniform_majorizes,
)

# parameter grids swept by the laws
R_GRID = (0.25, 0.5, 1.0, 2.0, 3.0)
P_GRID = (1.25, 2.0, 4.0)
CONJ_PAIRS = tuple((p, p / (p - 1.0)) for p in P_GRID)
NU_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
THETA_GRID = (0.25, 0.5, 0.75)
HOLDER_PQ = tuple((p, q) for p in (0.5, 1.0, 2.0, 4.0) for q in (0.5, 1.0, 2.0, 4.0))
PHI_GRID = (power(0.5), power(1.0), power(2.0), power(4.0), log1p_power(1.0))
WEYL_FNS = (power(1.0), power(0.5), power(2.0), log1p_power(1.0))
UNIFORM_LAMBDA = 2.0

# singular value ranges of the generated factors; narrow enough that powers
# and triple products stay well inside double precision
GENERAL = (0.25, 4.0)
PSD_FACTOR = (0.6, 1.6)

SUITES = {
    "S1": ("L1", "L2", "L3", "L4", "L9"),
    "S2": ("L5", "L6", "L7", "L8"),
    "S3": ("L10", "L11"),
    "S4": ("L12", "L13", "L14"),
    "S5": ("L15", "L16", "L17", "L18", "L19", "L20", "L21"),
    "S6": ("L22",),
    "S7": ("L23", "L24", "L25", "L26", "L27", "L28", "L29"),
}


@dataclass(frozen=True)
class SuiteConfig:
    cases: int = 200
    master_seed: int = 42
    eps_ord: float = 1e-9
    eps_eq: float = 1e-8
    eps_deep: float = 1e-7
    max_blocks: int = 3
    max_dim: int = 6
    shrink: bool = True
    self_test: bool = False


@dataclass(frozen=True)
class Law:
    id: str
    anchor: str
    check: Callable[["Case"], None]
    eq_tol: str = "eps_eq"
    single_block: bool = False


LAWS: dict[str, Law] = {}


def law(law_id: str, anchor: str, eq_tol: str = "eps_eq", single_block: bool = False):
    def register(fn):
        LAWS[law_id] = Law(law_id, anchor, fn, eq_tol, single_block)
        return fn
    return register


class Inconclusive(Exception):
    """The case could not be decided (e.g. a grid search found no witness)."""


# ---------------------------------------------------------------------------
# case bookkeeping


@dataclass
class CaseResult:
    law: str
    index: int
    seed: int
    status: str  # pass | fail | inconclusive
    slack: float = math.inf
    label: str = ""
    lhs: float = math.nan
    rhs: float = math.nan
    comparisons: int = 0
    dims: tuple = ()
    weights: tuple = ()
    witness: dict | None = None
    message: str = ""
    diagnostics: dict = field(default_factory=dict)


class Case:
    """Per-case context: seeded generation plus comparison recording."""

    def __init__(self, law: Law, seed: int, config: SuiteConfig, shape=None):
        self.law = law
        self.config = config
        self.rng = np.random.default_rng(seed)
        if shape is None:
            shape = gen_shape(self.rng, config.max_blocks, config.max_dim)
            if law.single_block:
                shape = ((max(shape[0][0], 2),), (1.0,))
        self.dims, self.weights = shape
        self.negate = config.self_test
        self.eq_tol = getattr(config, law.eq_tol)
        self.inputs: dict[str, object] = {}
        self.diagnostics: dict = {}
        self.count = 0
        self.failed = False
        self.worst = (math.inf, "", math.nan, math.nan)
        self.first_failure: tuple | None = None

    # -- generation
    def seed(self) -> int:
        return int(self.rng.integers(2**63))

    def op(self, kind: str, name: str, value_range=GENERAL) -> BlockOperator:
        prof = GenProfile(kind, tuple(self.dims), tuple(self.weights), value_range)
        x = gen_operator(self.seed(), prof)
        self.inputs[name] = x
        return x

    def stepfn(self, name: str, pieces: int = 5, value_range=(0.1, 10.0)) -> StepFunction:
        f = gen_stepfn(self.seed(), GenProfile("stepfn", pieces=pieces, value_range=value_range))
        self.inputs[name] = f
        return f

    # -- recording
    def _note(self, label: str, lhs: float, rhs: float, slack: float, tol: float) -> None:
        self.count += 1
        if slack < self.worst[0]:
            self.worst = (slack, label, lhs, rhs)
        if slack < -tol and not self.failed:
            self.failed = True
            self.first_failure = (slack, label, lhs, rhs)

    def _record(self, label: str, lhs: float, rhs: float, slack: float, tol: float) -> None:
        """Record an identity or truth check; self-test mode negates its outcome."""
        if self.negate:
            slack = -tol - 1.0 if slack >= -tol else 0.0
        self._note(label, lhs, rhs, slack, tol)

    def le(self, label: str, lhs: float, rhs: float) -> None:
        """Record ``lhs <= rhs``; in self-test mode the sides are swapped."""
        lhs, rhs = float(lhs), float(rhs)
        slack = leq_slack(rhs, lhs) if self.negate else leq_slack(lhs, rhs)
        self._note(label, lhs, rhs, slack, self.config.eps_ord)

    def ge(self, label: str, lhs: float, rhs: float) -> None:
        self.le(label, rhs, lhs)

    def eq(self, label: str, lhs: float, rhs: float, tol: float | None = None) -> None:
        lhs, rhs = float(lhs), float(rhs)
        self._record(label, lhs, rhs, eq_slack(lhs, rhs), self.eq_tol if tol is None else tol)

    def truth(self, label: str, cond: bool) -> None:
        self._record(label, float(bool(cond)), 1.0, 0.0 if cond else -math.inf, 0.0)

    def verdict(self, label: str, relation: Callable[..., Verdict], f: StepFunction,
                g: StepFunction, *args) -> Verdict:
        """Record an order verdict ``relation(f, g, *args)``; self-test swaps ``f`` and ``g``."""
        if self.negate:
            f, g = g, f
        v = relation(f, g, *args, tol=self.config.eps_ord)
        self._note(f"{label} @ {v.worst_at}", v.lhs, v.rhs, v.slack, self.config.eps_ord)
        return v

    def step_eq(self, label: str, f: StepFunction, g: StepFunction,
                tol: float | None = None) -> None:
        gap = max_pointwise_gap(f, g)
        self._record(label, gap, 0.0, -gap, self.eq_tol if tol is None else tol)

    def log_curves(self, label: str, lhs: Iterable[tuple[float, StepFunction]],
                   rhs: Iterable[tuple[float, StepFunction]], kind: str = "le",
                   ts: np.ndarray | None = None, tol: float | None = None) -> None:
        """Compare ``sum c_i log Lambda(t; f_i)`` curves at every breakpoint ``t``."""
        lhs, rhs = list(lhs), list(rhs)
        if ts is None:
            ts = np.union1d(
                np.concatenate([f.breakpoints for _, f in lhs + rhs] + [np.empty(0)]),
                [self.tau_one()],
            )
            ts = ts[ts > 0]
        left = _curve_sum(lhs, ts)
        right = _curve_sum(rhs, ts)
        for t, a, b in zip(ts, left, right):
            if kind == "le":
                self.le(f"{label} t={t:.6g}", a, b)
            else:
                self.eq(f"{label} t={t:.6g}", a, b, tol)

    def tau_one(self) -> float:
        return float(sum(c * n for c, n in zip(self.weights, self.dims)))


def _curve_sum(terms: list[tuple[float, StepFunction]], ts: np.ndarray) -> np.ndarray:
    out = np.zeros(len(ts))
    for c, f in terms:
        vals = np.atleast_1d(log_integral(f, ts))
        with np.errstate(invalid="ignore"):
            out = out + np.where(np.isneginf(vals), -math.inf, c * vals)
    return out


def _pow(f: StepFunction, alpha: float) -> StepFunction:
    return f if alpha == 1 else apply_increasing(f, power(alpha))


def _prod(f: StepFunction, g: StepFunction) -> StepFunction:
    return combine(f, g, "product")


def _psd_pow(a: BlockOperator, alpha: float) -> BlockOperator:
    return a.identity_like() if alpha == 0 else frac_power(a, alpha)


def _norms(f: StepFunction) -> list[float]:
    return [norm_step(f, e) for e in STANDARD_NORMS]


def _norm_le(case: Case, label: str, lhs: list[float], rhs: list[float]) -> None:
    for e, a, b in zip(STANDARD_NORMS, lhs, rhs):
        case.le(f"{label} {e}", a, b)


# ---------------------------------------------------------------------------
# S1: singular value identities


@law("L1", "f(mu(x)) = mu(f(|x|))")
def _law_l1(case: Case) -> None:
    x = case.op("general", "x")
    mu, ax = mu_op(x), abs_op(x)
    for fn in (power(0.5), power(2.0), power(3.0), scale(2.0), log_plus(), log1p_power(1.0)):
        case.step_eq(str(fn), apply_increasing(mu, fn), mu_op(func_psd(ax, fn)))


@law("L2", "tau(f(|x|)) = int_0^inf f(mu(t; x)) dt")
def _law_l2(case: Case) -> None:
    x = case.op("general", "x")
    mu, ax = mu_op(x), abs_op(x)
    for fn in (power(0.5), power(1.0), power(2.0), log_plus(), log1p_power(1.0)):
        case.eq(str(fn), func_psd(ax, fn).trace().real, integral(apply_increasing(mu, fn), math.inf))


@law("L3", "mu(x+y) <= s2 mu(x) + s2 mu(y), mu(xy) <= s2 mu(x) s2 mu(y)")
def _law_l3(case: Case) -> None:
    x, y = case.op("general", "x"), case.op("general", "y")
    dx, dy = dilate(mu_op(x), 2.0), dilate(mu_op(y), 2.0)
    case.verdict("sum", pointwise_leq, mu_op(x + y), combine(dx, dy, "sum"))
    case.verdict("product", pointwise_leq, mu_op(x @ y), combine(dx, dy, "product"))


@law("L4", "log_+ mu(x+y), log_+ mu(xy) in L1 + Linf")
def _law_l4(case: Case) -> None:
    x, y = case.op("general", "x", (0.25, 8.0)), case.op("general", "y", (0.25, 8.0))
    lx = apply_increasing(mu_op(x), log_plus())
    ly = apply_increasing(mu_op(y), log_plus())
    both = combine(lx, ly, "sum")
    case.verdict("product", pointwise_leq, apply_increasing(mu_op(x @ y), log_plus()),
                 dilate(both, 2.0))
    shifted = combine(both, StepFunction((), 2.0 * math.log(2.0)), "sum")
    case.verdict("sum", pointwise_leq, apply_increasing(mu_op(x + y), log_plus()),
                 dilate(shifted, 2.0))
    case.truth("x+y in L_log+", in_log_plus(x + y).member)
    case.truth("xy in L_log+", in_log_plus(x @ y).member)


@law("L9", "mu(t; x) = inf{||x - z||: tau(s(|z|)) <= t}", single_block=True)
def _law_l9(case: Case) -> None:
    x = case.op("general" if case.rng.random() < 0.8 else "singular", "x")
    mu = mu_op(x)
    m = x.mats[0]
    n = m.shape[0]
    for k in range(n):
        case.eq(f"k={k}", best_approx(x, k), evaluate(mu, float(k)))
        # any rank-k competitor does no better than the infimum
        z = gen_operator(case.seed(), GenProfile("general", (n,), (1.0,), GENERAL)).mats[0]
        u, s, vh = np.linalg.svd(z)
        zk = (u[:, :k] * s[:k]) @ vh[:k, :]
        case.le(f"k={k} competitor", evaluate(mu, float(k)), operator_norm(m - zk))


# ---------------------------------------------------------------------------
# S2: determinant function


@law("L5", "Lambda(x) = Lambda(|x|) = Lambda(x*) = Lambda(x*x)^(1/2) ...")
def _law_l5(case: Case) -> None:
    x, y = case.op("general", "x"), case.op("general", "y")
    a = case.op("psd", "a", PSD_FACTOR)
    u, v = case.op("unitary", "u"), case.op("unitary", "v")
    mx = mu_op(x)
    ma = mu_op(a)
    for alpha in (0.5, 2.0, 3.0):
        case.log_curves(f"a^{alpha:g}", [(1.0, mu_op(frac_power(a, alpha)))], [(alpha, ma)], "eq")
    case.log_curves("|x|", [(1.0, mu_op(abs_op(x)))], [(1.0, mx)], "eq")
    case.log_curves("x*", [(1.0, mu_op(x.H))], [(1.0, mx)], "eq")
    case.log_curves("x*x", [(0.5, mu_op(x.H @ x))], [(1.0, mx)], "eq")
    case.log_curves("x*x vs xx*", [(1.0, mu_op(x.H @ x))], [(1.0, mu_op(x @ x.H))], "eq")
    case.log_curves("|x||y*|", [(1.0, mu_op(x @ y))], [(1.0, mu_op(abs_op(x) @ abs_op(y.H)))], "eq")
    case.log_curves("uxv", [(1.0, mu_op(u @ x @ v))], [(1.0, mx)], "eq")


def cofactor_det(m: np.ndarray) -> complex:
    """Determinant by Laplace expansion along the first row (memoized over column sets)."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    memo: dict[tuple[int, int], complex] = {}

    def minor(row: int, cols: int) -> complex:
        if row == n:
            return 1.0
        key = (row, cols)
        if key in memo:
            return memo[key]
        total, sign = 0j, 1.0
        for j in range(n):
            if cols >> j & 1:
                total += sign * m[row, j] * minor(row + 1, cols & ~(1 << j))
                sign = -sign
        memo[key] = total
        return total

    return minor(0, (1 << n) - 1)


def oracle_log_det(x: BlockOperator) -> float:
    """``sum_k c_k log |det x_k|`` by cofactor expansion."""
    total = 0.0
    for c, m in zip(x.weights, x.mats):
        d = abs(cofactor_det(m))
        if d == 0:
            return -math.inf
        total += c * math.log(d)
    return total


@law("L6", "Delta(xy) = Delta(x) Delta(y)")
def _law_l6(case: Case) -> None:
    x, y = case.op("general", "x"), case.op("general", "y")
    xy = x @ y
    lhs = log_det_fk(xy)
    case.eq("multiplicative", lhs, log_det_fk(x) + log_det_fk(y))
    case.eq("oracle", lhs, oracle_log_det(xy))
    s = case.op("singular", "s")
    case.truth("singular factor", log_det_fk(s @ y) == -math.inf)


@law("L7", "Lambda(t; xy) <= Lambda(t; x) Lambda(t; y)")
def _law_l7(case: Case) -> None:
    kx = "singular" if case.rng.random() < 0.3 else "general"
    ky = "singular" if case.rng.random() < 0.3 else "general"
    x, y = case.op(kx, "x"), case.op(ky, "y")
    case.log_curves("weyl", [(1.0, mu_op(x @ y))], [(1.0, mu_op(x)), (1.0, mu_op(y))], "le")


@law("L8", "Lambda(t; ab) = Lambda(t; a) Lambda(t; b) for t >= tau(r)", eq_tol="eps_deep")
def _law_l8(case: Case) -> None:
    lo = 0.5
    a = case.op("psd_geq_one", "a", (lo, 3.0))
    b = case.op("psd_geq_one", "b", (lo, 3.0))
    cut = 1.0 + lo / 2  # inside the spectral gap above 1
    p, q = spectral_proj(a, cut), spectral_proj(b, cut)
    r = proj_join(p, q)
    tr = rank_tau(r)
    case.truth("tau(r) <= tau(p) + tau(q)", tr <= rank_tau(p) + rank_tau(q) + 1e-9)
    ma, mb, mab = mu_op(a), mu_op(b), mu_op(a @ b)
    t1 = case.tau_one()
    pts = [tr, t1] + list(case.rng.uniform(tr, t1, 3))
    pts += [t for f in (ma, mb, mab) for t in f.breakpoints if tr <= t <= t1]
    ts = np.unique([t for t in pts if t > 0])
    case.log_curves("lemma", [(1.0, mab)], [(1.0, ma), (1.0, mb)], "eq", ts=ts)


# ---------------------------------------------------------------------------
# S3: Brown's equivalences


@law("L10", "(i) <=> (ii) <=> (iii) for phi with phi o exp convex")
def _law_l10(case: Case) -> None:
    f, g = gen_logsub_pair(case.rng, cells=int(case.rng.integers(3, 10)))
    case.inputs.update(f=f, g=g)
    rep = brown_check(f, g, r_count=64, tol=case.config.eps_ord)
    case.truth("(i) by construction", rep.cond_i.holds)
    if case.negate:
        rep = brown_check(g, f, r_count=64, tol=case.config.eps_ord)
        case.truth("swapped", rep.cond_i.holds and rep.status == "consistent")
        return
    case.le("(ii)", -rep.ii_slack, 0.0)
    case.le("(iii)", -rep.iii_slack, 0.0)
    case.truth("status", rep.status == "consistent")
    f2, g2 = gen_non_logsub_pair(case.rng)
    case.inputs.update(f_bad=f2, g_bad=g2)
    rep2 = brown_check(f2, g2, r_count=64, tol=case.config.eps_ord)
    case.diagnostics["witness_r"] = rep2.witness_r
    if rep2.status == "inconclusive":
        raise Inconclusive("no (ii) witness on the r grid")


@law("L11", "x <<_log y implies x << y")
def _law_l11(case: Case) -> None:
    x, y = case.op("general", "x"), case.op("general", "y")
    f = mu_op(x @ y)
    g = _prod(mu_op(x), mu_op(y))
    case.verdict("weyl log", log_submajorizes, f, g)
    case.verdict("weyl plain", submajorizes, f, g)
    f2, g2 = gen_logsub_pair(case.rng)
    case.inputs.update(f=f2, g=g2)
    case.verdict("pair log", log_submajorizes, f2, g2)
    case.verdict("pair plain", submajorizes, f2, g2)


# ---------------------------------------------------------------------------
# S4: Araki-Lieb-Thirring


def _alt_sides(a: BlockOperator, b: BlockOperator, r: float):
    """``mu(|ab|^r)`` and ``mu(a^r b^r)``."""
    lhs = mu_op(frac_power(abs_op(a @ b), r))
    rhs = mu_op(frac_power(a, r) @ frac_power(b, r))
    return lhs, rhs


@law("L12", "int phi(mu(|ab|^r)) vs int phi(mu(a^r b^r))")
def _law_l12(case: Case) -> None:
    a, b = case.op("psd", "a", PSD_FACTOR), case.op("psd", "b", PSD_FACTOR)
    for r in R_GRID:
        lhs, rhs = _alt_sides(a, b, r)
        for phi in PHI_GRID:
            fl, fr = apply_increasing(lhs, phi), apply_increasing(rhs, phi)
            if r >= 1:
                case.verdict(f"r={r:g} {phi}", submajorizes, fl, fr)
            if r <= 1:
                case.verdict(f"r={r:g} {phi} reversed", submajorizes, fr, fl)


@law("L13", "|a^t b^t|^(1/t) << |a^u b^u|^(1/u) for t <= u")
def _law_l13(case: Case) -> None:
    a, b = case.op("psd", "a", PSD_FACTOR), case.op("psd", "b", PSD_FACTOR)
    ts = (0.5, 1.0, 2.0)
    curves = {t: _pow(mu_op(frac_power(a, t) @ frac_power(b, t)), 1.0 / t) for t in ts}
    for i, t in enumerate(ts):
        for u in ts[i + 1:]:
            case.verdict(f"t={t:g} u={u:g}", submajorizes, curves[t], curves[u])


@law("L14", "Lambda(|ab|^r) <= Lambda(a^r b^r) (r >= 1), >= (r <= 1)")
def _law_l14(case: Case) -> None:
    a, b = case.op("psd", "a", PSD_FACTOR), case.op("psd", "b", PSD_FACTOR)
    mab = mu_op(a @ b)
    for r in R_GRID:
        lhs = _pow(mab, r)
        rhs = mu_op(frac_power(a, r) @ frac_power(b, r))
        if r >= 1:
            case.verdict(f"r={r:g}", log_submajorizes, lhs, rhs)
        if r <= 1:
            case.verdict(f"r={r:g} reversed", log_submajorizes, rhs, lhs)


# ---------------------------------------------------------------------------
# S5: Hölder family


@law("L15", "x = phi(|x*|) u psi(|x|) with phi psi = id")
def _law_l15(case: Case) -> None:
    x = case.op("singular" if case.rng.random() < 0.3 else "general", "x")
    u, ax = abs_and_polar(x)
    axs = abs_op(x.H)
    scale_ = max(x.fro_norm(), 1e-300)
    case.eq("u|x|", (u @ ax - x).fro_norm() / scale_, 0.0)
    splits = [(th, 1.0 - th) for th in THETA_GRID] + [(1.0 / p, 1.0 / q) for p, q in CONJ_PAIRS]
    for th, ps in splits:
        rec = frac_power(axs, th) @ u @ frac_power(ax, ps)
        case.eq(f"split {th:g}/{ps:g}", (rec - x).fro_norm() / scale_, 0.0)


@law("L16", "Lambda(|axb|^r) <= Lambda^(r/p)(a^p x) Lambda^(r/q)(x b^q)")
def _law_l16(case: Case) -> None:
    a, b = case.op("psd", "a", PSD_FACTOR), case.op("psd", "b", PSD_FACTOR)
    x = case.op("general", "x")
    maxb = mu_op(a @ x @ b)
    for p, q in CONJ_PAIRS:
        m1 = mu_op(frac_power(a, p) @ x)
        m2 = mu_op(x @ frac_power(b, q))
        for r in R_GRID:
            rhs = _prod(_pow(m1, r / p), _pow(m2, r / q))
            case.verdict(f"p={p:g} r={r:g}", log_submajorizes, _pow(maxb, r), rhs)


@law("L17", "|| |xy|^r ||^(1/r) <= || |x|^p ||^(1/p) || |y|^q ||^(1/q)")
def _law_l17(case: Case) -> None:
    # functions on a common partition, not co-monotone
    cells = int(case.rng.integers(2, 9))
    widths = case.rng.uniform(0.2, 2.0, cells)
    xv = np.exp(case.rng.uniform(np.log(0.1), np.log(10.0), cells))
    yv = np.exp(case.rng.uniform(np.log(0.1), np.log(10.0), cells))
    xv[case.rng.random(cells) < 0.15] = 0.0
    case.inputs["x"] = {"widths": widths.tolist(), "values": xv.tolist()}
    case.inputs["y"] = {"widths": widths.tolist(), "values": yv.tolist()}
    for p, q in HOLDER_PQ:
        r = 1.0 / (1.0 / p + 1.0 / q)
        fxy = rearrange(zip(widths, (xv * yv) ** r))
        fx = rearrange(zip(widths, xv ** p))
        fy = rearrange(zip(widths, yv ** q))
        for e in STANDARD_NORMS:
            lhs = norm_step(fxy, e) ** (1.0 / r)
            rhs = norm_step(fx, e) ** (1.0 / p) * norm_step(fy, e) ** (1.0 / q)
            case.le(f"p={p:g} q={q:g} {e}", lhs, rhs)


@law("L18", "|| |axb|^r || <= || |a^p x|^(rp'/p) ||^(1/p') || |x b^q|^(rq'/q) ||^(1/q')")
def _law_l18(case: Case) -> None:
    a, b = case.op("psd", "a", PSD_FACTOR), case.op("psd", "b", PSD_FACTOR)
    x = case.op("general", "x")
    maxb = mu_op(a @ x @ b)
    for p, q in CONJ_PAIRS:
        m1 = mu_op(frac_power(a, p) @ x)
        m2 = mu_op(x @ frac_power(b, q))
        for pp, qq in CONJ_PAIRS:
            for r in R_GRID:
                lhs = _norms(_pow(maxb, r))
                n1 = _norms(_pow(m1, r * pp / p))
                n2 = _norms(_pow(m2, r * qq / q))
                rhs = [u ** (1.0 / pp) * v ** (1.0 / qq) for u, v in zip(n1, n2)]
                _norm_le(case, f"p={p:g} p'={pp:g} r={r:g}", lhs, rhs)


@law("L19", "|| |axb|^r || <= || |a*ax|^(rp/2) ||^(1/p) || |xbb*|^(rq/2) ||^(1/q)")
def _law_l19(case: Case) -> None:
    a, b, x = case.op("general", "a"), case.op("general", "b"), case.op("general", "x")
    m = mu_op(a @ x @ b)
    m1 = mu_op(a.H @ a @ x)
    m2 = mu_op(x @ b @ b.H)
    for p, q in CONJ_PAIRS:
        for r in R_GRID:
            n1, n2 = _norms(_pow(m1, r * p / 2)), _norms(_pow(m2, r * q / 2))
            rhs = [u ** (1.0 / p) * v ** (1.0 / q) for u, v in zip(n1, n2)]
            _norm_le(case, f"p={p:g} r={r:g}", _norms(_pow(m, r)), rhs)


@law("L20", "|| |ab|^r || <= || |a|^(rp) ||^(1/p) || |b|^(rq) ||^(1/q); Bhatia-Davis form")
def _law_l20(case: Case) -> None:
    a, b, x = case.op("general", "a"), case.op("general", "b"), case.op("general", "x")
    mab, ma, mb = mu_op(a @ b), mu_op(a), mu_op(b)
    maxb, m1, m2 = mu_op(a @ x @ b), mu_op(a.H @ a @ x), mu_op(x @ b @ b.H)
    for r in R_GRID:
        for p, q in CONJ_PAIRS:
            n1, n2 = _norms(_pow(ma, r * p)), _norms(_pow(mb, r * q))
            rhs = [u ** (1.0 / p) * v ** (1.0 / q) for u, v in zip(n1, n2)]
            _norm_le(case, f"Ha p={p:g} r={r:g}", _norms(_pow(mab, r)), rhs)
        lhs = [v * v for v in _norms(_pow(maxb, r))]
        rhs = [u * v for u, v in zip(_norms(_pow(m1, r)), _norms(_pow(m2, r)))]
        _norm_le(case, f"Hb r={r:g}", lhs, rhs)


def _nu_norms(a: BlockOperator, x: BlockOperator, b: BlockOperator) -> dict[float, StepFunction]:
    """``mu(a^nu x b^(1-nu))`` over the nu grid."""
    return {nu: mu_op(_psd_pow(a, nu) @ x @ _psd_pow(b, 1.0 - nu)) for nu in NU_GRID}


@law("L21", "|| |a^nu x b^(1-nu)|^r || <= || |ax|^r ||^nu || |xb|^r ||^(1-nu)")
def _law_l21(case: Case) -> None:
    a, b = case.op("psd", "a", PSD_FACTOR), case.op("psd", "b", PSD_FACTOR)
    x = case.op("general", "x")
    mus = _nu_norms(a, x, b)
    for r in R_GRID:
        g = {nu: _norms(_pow(m, r)) for nu, m in mus.items()}
        for nu in NU_GRID:
            rhs = [u ** nu * v ** (1.0 - nu) for u, v in zip(g[1.0], g[0.0])]
            _norm_le(case, f"Hiai2 nu={nu:g} r={r:g}", g[nu], rhs)
            lhs = [u * v for u, v in zip(g[nu], g[1.0 - nu])]
            rhs = [u * v for u, v in zip(g[1.0], g[0.0])]
            _norm_le(case, f"Hiai3 nu={nu:g} r={r:g}", lhs, rhs)


# ---------------------------------------------------------------------------
# S6: Hiai-Zhan convexity

MIDPOINTS = ((0.5, 0.25), (0.5, 0.5), (0.25, 0.25), (0.75, 0.25))


@law("L22", "f(nu) = || |a^nu x b^(1-nu)|^r || || |a^(1-nu) x b^nu|^r || convex, min at 1/2")
def _law_l22(case: Case) -> None:
    a, b = case.op("psd", "a", PSD_FACTOR), case.op("psd", "b", PSD_FACTOR)
    x = case.op("general", "x")
    mus = _nu_norms(a, x, b)
    for r in R_GRID:
        g = {nu: _norms(_pow(m, r)) for nu, m in mus.items()}
        for k, e in enumerate(STANDARD_NORMS):
            f = {nu: g[nu][k] * g[1.0 - nu][k] for nu in NU_GRID}
            tag = f"r={r:g} {e}"
            for t, s in MIDPOINTS:
                fp, fm = f[t + s], f[t - s]
                case.le(f"{tag} log-midpoint t={t:g} s={s:g}", f[t], math.sqrt(fp * fm))
                case.le(f"{tag} midpoint t={t:g} s={s:g}", 2.0 * f[t], fp + fm)
            for nu in NU_GRID:
                case.le(f"{tag} min at 1/2 nu={nu:g}", g[0.5][k] ** 2, f[nu])
                case.le(f"{tag} max at ends nu={nu:g}", f[nu], g[1.0][k] * g[0.0][k])


# ---------------------------------------------------------------------------
# S7: uniform majorization


def _weyl_pair(case: Case, singular_ok: bool = True):
    kx = "singular" if singular_ok and case.rng.random() < 0.2 else "general"
    x, y = case.op(kx, "x"), case.op("general", "y")
    return mu_op(x @ y), mu_op(x), mu_op(y)


@law("L23", "f(|xy|) << f(mu(x) mu(y))")
def _law_l23(case: Case) -> None:
    mxy, mx, my = _weyl_pair(case)
    prod = _prod(mx, my)
    for fn in WEYL_FNS:
        case.verdict(str(fn), submajorizes, apply_increasing(mxy, fn), apply_increasing(prod, fn))


@law("L24", "f(|xy|) ⊲ f(mu(x) mu(y)) with lambda = 2")
def _law_l24(case: Case) -> None:
    mxy, mx, my = _weyl_pair(case)
    prod = _prod(mx, my)
    lams = []
    for fn in WEYL_FNS:
        f, g = apply_increasing(mxy, fn), apply_increasing(prod, fn)
        case.verdict(str(fn), uniform_majorizes, f, g, UNIFORM_LAMBDA)
        lams.append(min_uniform_lambda(f, g, UNIFORM_LAMBDA, steps=20, tol=case.config.eps_ord))
    case.diagnostics["min_lambda"] = [None if v is None else round(v, 6) for v in lams]


@law("L25", "|xy|^r ⊲ mu(x)^r mu(y)^r")
def _law_l25(case: Case) -> None:
    mxy, mx, my = _weyl_pair(case)
    for r in R_GRID:
        case.verdict(f"r={r:g}", uniform_majorizes, _pow(mxy, r),
                     _prod(_pow(mx, r), _pow(my, r)), UNIFORM_LAMBDA)


@law("L26", "|| |xy|^r ||^(1/r) <= || |x|^p ||^(1/p) || |y|^q ||^(1/q), operators")
def _law_l26(case: Case) -> None:
    mxy, mx, my = _weyl_pair(case)
    for p, q in HOLDER_PQ:
        r = 1.0 / (1.0 / p + 1.0 / q)
        lhs = [v ** (1.0 / r) for v in _norms(_pow(mxy, r))]
        n1, n2 = _norms(_pow(mx, p)), _norms(_pow(my, q))
        rhs = [u ** (1.0 / p) * v ** (1.0 / q) for u, v in zip(n1, n2)]
        _norm_le(case, f"p={p:g} q={q:g}", lhs, rhs)


def _ho2_sides(triples, theta: float):
    """``mu`` of ``sum a* x b``, ``sum a* phi^2(|x*|) a`` and ``sum b* psi^2(|x|) b``."""
    s = sum_a = sum_b = None
    for a, x, b in triples:
        term = a.H @ x @ b
        ta = a.H @ frac_power(abs_op(x.H), 2.0 * theta) @ a
        tb = b.H @ frac_power(abs_op(x), 2.0 * (1.0 - theta)) @ b
        s = term if s is None else s + term
        sum_a = ta if sum_a is None else sum_a + ta
        sum_b = tb if sum_b is None else sum_b + tb
    return mu_op(s), mu_op(sum_a), mu_op(sum_b)


def _ho2_compare(case: Case, triples, tag: str) -> None:
    for th in THETA_GRID:
        m, ma, mb = _ho2_sides(triples, th)
        for p, q in CONJ_PAIRS:
            for r in R_GRID:
                n1, n2 = _norms(_pow(ma, p * r / 2)), _norms(_pow(mb, q * r / 2))
                rhs = [u ** (1.0 / p) * v ** (1.0 / q) for u, v in zip(n1, n2)]
                _norm_le(case, f"{tag} theta={th:g} p={p:g} r={r:g}", _norms(_pow(m, r)), rhs)


@law("L27", "|| |a*xb|^r || <= || (a* phi^2(|x*|) a)^(pr/2) ||^(1/p) || (b* psi^2(|x|) b)^(qr/2) ||^(1/q)")
def _law_l27(case: Case) -> None:
    a, x, b = case.op("general", "a"), case.op("general", "x"), case.op("general", "b")
    _ho2_compare(case, [(a, x, b)], "single")


@law("L28", "|| |sum a_i* x_i b_i|^r || <= ...")
def _law_l28(case: Case) -> None:
    n = int(case.rng.integers(2, 4))
    triples = [
        (case.op("general", f"a{i}"), case.op("general", f"x{i}"), case.op("general", f"b{i}"))
        for i in range(n)
    ]
    _ho2_compare(case, triples, f"n={n}")


@law("L29", "x ⊲ y implies ||x|| <= ||y||")
def _law_l29(case: Case) -> None:
    mxy, mx, my = _weyl_pair(case)
    for r in R_GRID:
        f, g = _pow(mxy, r), _prod(_pow(mx, r), _pow(my, r))
        v = case.verdict(f"uniform r={r:g}", uniform_majorizes, f, g, UNIFORM_LAMBDA)
        if v.holds or case.negate:
            _norm_le(case, f"r={r:g}", _norms(f), _norms(g))


# ---------------------------------------------------------------------------
# running


def _serialize(obj):
    if isinstance(obj, (BlockOperator, StepFunction)):
        return obj.to_dict()
    return obj


def _num(v):
    if v is None:
        return None
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _execute(law_: Law, seed: int, config: SuiteConfig, shape=None) -> tuple[Case | None, str, str]:
    case = None
    try:
        case = Case(law_, seed, config, shape)
        law_.check(case)
    except Inconclusive as exc:
        return case, "inconclusive", str(exc)
    except (IllConditionedCut, np.linalg.LinAlgError, FloatingPointError, OverflowError) as exc:
        return case, "inconclusive", f"{type(exc).__name__}: {exc}"
    except Exception as exc:  # a crash in a law is a failure, not a silent pass
        return case, "fail", "".join(traceback.format_exception_only(type(exc), exc)).strip()
    return case, ("fail" if case.failed else "pass"), ""


def run_law(law_id: str, seed: int, config: SuiteConfig = SuiteConfig(), index: int = 0,
            shape=None) -> CaseResult:
    """Run one case of ``law_id`` with the given case seed."""
    try:
        law_ = LAWS[law_id]
    except KeyError:
        raise ValueError(f"unknown law {law_id!r}") from None
    case, status, message = _execute(law_, seed, config, shape)
    res = CaseResult(law_id, index, seed, status, message=message)
    if case is None:
        return res
    res.dims, res.weights = tuple(case.dims), tuple(case.weights)
    res.comparisons = case.count
    res.diagnostics = case.diagnostics
    slack, label, lhs, rhs = case.first_failure if case.failed else case.worst
    res.slack, res.label, res.lhs, res.rhs = slack, label, lhs, rhs
    if status == "fail":
        res.witness = {k: _serialize(v) for k, v in case.inputs.items()}
    return res


def shrink(res: CaseResult, config: SuiteConfig) -> CaseResult:
    """Halve the block sizes while the case keeps failing; return the smallest failure."""
    best = res
    dims = res.dims
    while dims and any(d > 1 for d in dims):
        dims = tuple(max(1, d // 2) for d in dims)
        trial = run_law(res.law, res.seed, config, res.index, (dims, res.weights))
        if trial.status != "fail":
            break
        best = trial
    return best


def case_seed(master_seed: int, law_id: str, index: int) -> int:
    return derive_seed(master_seed, law_id, index)


def _run_one(args) -> CaseResult:
    law_id, index, config = args
    res = run_law(law_id, case_seed(config.master_seed, law_id, index), config, index)
    if res.status == "fail" and config.shrink and not config.self_test and res.dims:
        res = shrink(res, config)
    return res


@dataclass
class LawSummary:
    id: str
    cases: int
    failures: int
    inconclusive: int
    worst_slack: float


@dataclass
class SuiteReport:
    suite: str
    master_seed: int
    config: SuiteConfig
    laws: list[LawSummary]
    results: list[CaseResult]

    @property
    def violations(self) -> list[CaseResult]:
        return [r for r in self.results if r.status == "fail"]

    @property
    def clean(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "master_seed": self.master_seed,
            "config": {k: _num(v) if isinstance(v, float) else v
                       for k, v in asdict(self.config).items()},
            "laws": [
                {"id": s.id, "anchor": LAWS[s.id].anchor, "cases": s.cases,
                 "failures": s.failures, "inconclusive": s.inconclusive,
                 "worst_slack": _num(s.worst_slack)}
                for s in self.laws
            ],
            "violations": [
                {"law": v.law, "index": v.index, "seed": v.seed, "label": v.label,
                 "lhs": _num(v.lhs), "rhs": _num(v.rhs), "slack": _num(v.slack),
                 "dims": list(v.dims), "weights": list(v.weights), "message": v.message,
                 "witness": v.witness}
                for v in self.violations
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_jsonable) + "\n"

    def to_csv(self) -> str:
        """One row per case: the tightest comparison found."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["law", "index", "status", "label", "lhs", "rhs", "slack"])
        for r in self.results:
            w.writerow([r.law, r.index, r.status, r.label, _num(r.lhs), _num(r.rhs),
                        _num(r.slack)])
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def suite_laws(suite: str) -> tuple[str, ...]:
    if suite == "all":
        return tuple(lid for s in SUITES.values() for lid in s)
    if suite in SUITES:
        return SUITES[suite]
    if suite in LAWS:
        return (suite,)
    raise ValueError(f"unknown suite {suite!r}; expected all, S1..S7 or a law id")


def run_suite(suite: str = "all", config: SuiteConfig = SuiteConfig(),
              workers: int = 1) -> SuiteReport:
    """Run ``config.cases`` cases of every law in ``suite``.

    Cases are independent and seeded from ``(master_seed, law, index)``; with
    ``workers > 1`` they run in a process pool and are merged by index, so the
    report does not depend on scheduling.
    """
    law_ids = suite_laws(suite)
    jobs = [(lid, i, config) for lid in law_ids for i in range(config.cases)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=16))
    else:
        results = [_run_one(j) for j in jobs]
    results.sort(key=lambda r: (law_ids.index(r.law), r.index))
    summaries = []
    for lid in law_ids:
        rs = [r for r in results if r.law == lid]
        summaries.append(LawSummary(
            lid,
            len(rs),
            sum(r.status == "fail" for r in rs),
            sum(r.status == "inconclusive" for r in rs),
            min((r.slack for r in rs), default=math.inf),
        ))
    return SuiteReport(suite, config.master_seed, config, summaries, results)


def self_test(law_ids: Iterable[str] | None = None, cases: int = 3,
              master_seed: int = 7) -> dict[str, int]:
    """Run laws with negated comparisons; returns the failure count per law."""
    cfg = SuiteConfig(cases=cases, master_seed=master_seed, self_test=True, shrink=False)
    out = {}
    for lid in law_ids or LAWS:
        rep = run_suite(lid, cfg)
        out[lid] = rep.laws[0].failures
    return out


__all__ = [
    "CaseResult", "GenProfile", "LAWS", "Law", "SuiteConfig", "SuiteReport", "SUITES",
    "gen_operator", "gen_stepfn", "run_law", "run_suite", "self_test", "shrink",
]
