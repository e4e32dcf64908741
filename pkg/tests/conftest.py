import pytest

from cases import example26, nice15_instance

ACCEPTANCE = {
    "test_ac01_iteration_bound": "AC1 iteration bound and increasing separators",
    "test_ac02_oracle_agreement": "AC2 FFL and generic outputs in brute-force set",
    "test_ac03_example_matrices": "AC3 block matrices of the 4-vertex example",
    "test_ac04_counterexample": "AC4 fractional extreme point of Q(I), rank 9",
    "test_ac05_representation_vectors": "AC5 combinatorial y equals exact solve",
    "test_ac06_ordinal_uniqueness": "AC6 ordinal pivot entering column is unique",
    "test_ac07_utility_dynamics": "AC7 utility dynamics at every ordinal pivot",
    "test_ac08_pivot_classification": "AC8 pivot classification consistency",
    "test_ac09_nice_invariant": "AC9 nice-basis invariant in verify mode",
    "test_ac10_performance": "AC10 n=10^4, m=10^5 runtime and scan bound",
}
_results = {}


@pytest.fixture
def ex26():
    return example26()


@pytest.fixture
def nice15():
    return nice15_instance()


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if name not in ACCEPTANCE:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in ACCEPTANCE.items():
        if name in _results:
            verdict = "PASS" if _results[name] == "passed" else "FAIL"
            terminalreporter.write_line(f"{verdict}  {label}")
