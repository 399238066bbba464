import json
import math

import numpy as np
import pytest

from logmaj.generate import (
    GenProfile,
    derive_seed,
    gen_logsub_pair,
    gen_operator,
    gen_stepfn,
)
from logmaj.majorize import log_det_fk
from logmaj.matalg import BlockOperator
from logmaj.stepfn import StepFunction, log_submajorizes
from logmaj.suites import (
    LAWS,
    SUITES,
    SuiteConfig,
    cofactor_det,
    oracle_log_det,
    run_law,
    run_suite,
    self_test,
    shrink,
)

# ---------------------------------------------------------------------------
# generators


def test_gen_operator_deterministic():
    prof = GenProfile("general", (3, 2), (1.0, 0.5))
    a, b = gen_operator(7, prof), gen_operator(7, prof)
    assert all(np.array_equal(x, y) for x, y in zip(a.mats, b.mats))
    assert a.weights == (1.0, 0.5)


@pytest.mark.parametrize("seed", range(20))
def test_gen_operator_kinds(seed):
    dims, w = (4, 2), (1.0, 2.0)
    psd = gen_operator(seed, GenProfile("psd", dims, w))
    assert min(np.linalg.eigvalsh(m).min() for m in psd.mats) >= -1e-12
    u = gen_operator(seed, GenProfile("unitary", dims, w))
    assert max(np.linalg.norm(m.conj().T @ m - np.eye(len(m))) for m in u.mats) <= 1e-10
    ge1 = gen_operator(seed, GenProfile("psd_geq_one", dims, w))
    assert min(np.linalg.eigvalsh(m).min() for m in ge1.mats) >= 1 - 1e-12
    c = gen_operator(seed, GenProfile("contraction", dims, w, (0.1, 1.0)))
    assert max(np.linalg.norm(m, 2) for m in c.mats) <= 1 + 1e-12
    p = gen_operator(seed, GenProfile("projection", dims, w))
    assert max(np.linalg.norm(m @ m - m) for m in p.mats) <= 1e-12
    s = gen_operator(seed, GenProfile("singular", dims, w))
    assert log_det_fk(s) == -math.inf


def test_gen_profile_validation():
    for bad in (
        GenProfile("blob"),
        GenProfile("general", (3,), (1.0, 2.0)),
        GenProfile("general", (0,), (1.0,)),
        GenProfile("general", (3,), (-1.0,)),
        GenProfile("general", value_range=(2.0, 1.0)),
        GenProfile("stepfn", pieces=-1),
    ):
        with pytest.raises(ValueError):
            bad.validate()
    with pytest.raises(ValueError):
        gen_operator(0, GenProfile("stepfn"))


def test_gen_stepfn():
    f = gen_stepfn(3, GenProfile("stepfn", pieces=1))
    assert len(f) == 1 and f.tail == 0
    prof = GenProfile("stepfn", pieces=6, value_range=(0.1, 10.0))
    f, g = gen_stepfn(3, prof), gen_stepfn(3, prof)
    assert f == g
    assert np.all(np.diff(f.values) < 0) and np.all(f.widths > 0)
    assert f.values.min() >= 0.1 and f.values.max() <= 10.0
    assert StepFunction(f.pieces, f.tail) == f
    h = gen_stepfn(4, GenProfile("stepfn", pieces=3, value_range=(0.5, 2.0), tail=0.25))
    assert h.tail == 0.25


def test_derive_seed_stable():
    assert derive_seed(42, "L7", 3) == derive_seed(42, "L7", 3)
    assert derive_seed(42, "L7", 3) != derive_seed(42, "L7", 4)
    assert 0 <= derive_seed("x") < 2**64


def test_gen_logsub_pair_holds():
    rng = np.random.default_rng(0)
    for _ in range(200):
        f, g = gen_logsub_pair(rng)
        assert log_submajorizes(f, g)


# ---------------------------------------------------------------------------
# determinant oracle


def test_cofactor_det():
    rng = np.random.default_rng(1)
    for n in range(1, 7):
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        assert cofactor_det(m) == pytest.approx(np.linalg.det(m), rel=1e-10)
    x = BlockOperator([(2.0, np.diag([3.0, 1.0])), (0.5, np.array([[4.0]]))])
    assert oracle_log_det(x) == pytest.approx(2 * math.log(3) + 0.5 * math.log(4))


# ---------------------------------------------------------------------------
# laws


def test_catalog_complete():
    assert set(LAWS) == {f"L{i}" for i in range(1, 30)}
    grouped = [lid for ids in SUITES.values() for lid in ids]
    assert sorted(grouped) == sorted(LAWS)
    assert all(LAWS[lid].anchor for lid in LAWS)


def test_l6_small_nonsingular_pair():
    res = run_law("L6", 1, shape=((2,), (1.0,)))
    assert res.status == "pass" and res.slack >= -1e-8


def test_l7_singular_passes_via_minus_infinity():
    for seed in range(30):
        res = run_law("L7", seed)
        assert res.status == "pass"


def test_self_test_l7_fails_with_witness():
    res = run_law("L7", 3, SuiteConfig(self_test=True))
    assert res.status == "fail"
    assert res.witness and {"x", "y"} <= set(res.witness)
    x = BlockOperator.from_dict(res.witness["x"])
    assert x.dims == res.dims


def test_self_test_every_law_is_live():
    counts = self_test(cases=3)
    assert set(counts) == set(LAWS)
    dead = [lid for lid, n in counts.items() if n == 0]
    assert not dead


def test_unknown_law():
    with pytest.raises(ValueError):
        run_law("L99", 0)
    with pytest.raises(ValueError):
        run_suite("S9")


# ---------------------------------------------------------------------------
# suites and reports


def test_empty_suite():
    rep = run_suite("all", SuiteConfig(cases=0))
    assert rep.clean and all(s.cases == 0 for s in rep.laws)
    assert json.loads(rep.to_json())["violations"] == []


def test_report_deterministic():
    cfg = SuiteConfig(cases=100)
    a, b = run_suite("S2", cfg).to_json(), run_suite("S2", cfg).to_json()
    assert a == b
    data = json.loads(a)
    assert data["suite"] == "S2" and data["master_seed"] == 42
    assert [law["id"] for law in data["laws"]] == ["L5", "L6", "L7", "L8"]
    assert all(law["cases"] == 100 and law["failures"] == 0 for law in data["laws"])


def test_report_schedule_independent():
    cfg = SuiteConfig(cases=6)
    serial = run_suite("S4", cfg, workers=1).to_json()
    parallel = run_suite("S4", cfg, workers=2).to_json()
    assert serial == parallel


def test_report_serializes_failures():
    rep = run_suite("L7", SuiteConfig(cases=3, self_test=True, shrink=False))
    data = json.loads(rep.to_json())
    assert len(data["violations"]) == 3
    v = data["violations"][0]
    assert {"law", "seed", "witness", "lhs", "rhs", "slack"} <= set(v)
    assert rep.to_csv().startswith("law,index,status,label,lhs,rhs,slack\n")


def test_shrinking_keeps_failure():
    cfg = SuiteConfig(self_test=True)
    res = run_law("L7", 11, cfg, shape=((6, 4), (1.0, 0.5)))
    assert res.status == "fail"
    small = shrink(res, cfg)
    assert small.status == "fail"
    assert all(d <= 6 for d in small.dims) and sum(small.dims) <= sum(res.dims)
    # the shrunken witness re-fails when re-run with its shape
    again = run_law("L7", small.seed, cfg, shape=(small.dims, small.weights))
    assert again.status == "fail"
