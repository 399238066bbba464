"""
Running the law catalog
=======================

The ``suites`` module turns each inequality or identity into a seeded random
test. Reports are deterministic for a given master seed, and self-test mode
inverts every check to confirm that each law can actually fail.
"""

from logmaj.suites import SUITES, SuiteConfig, run_law, run_suite, self_test

print({name: ids for name, ids in SUITES.items()})

report = run_suite("S2", SuiteConfig(cases=20))
for s in report.laws:
    print(f"{s.id}: {s.cases} cases, {s.failures} failures, worst slack {s.worst_slack:.2e}")
print("clean:", report.clean)

# One case in detail.
res = run_law("L7", seed=5)
print(res.law, res.status, res.label, f"lhs={res.lhs:.4f} rhs={res.rhs:.4f}")

# Inverted checks must fail; a law that never fails would be vacuous.
counts = self_test(["L6", "L7", "L24"], cases=3)
print("self-test failures per law:", counts)
