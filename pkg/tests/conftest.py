import pytest

CRITERIA = {
    1: "soundness, exhaustive over structures of size <= 3",
    2: "soundness, randomized (seed 42, 10,000 cases)",
    3: "three-variable bound on emitted FO3 atoms",
    4: "closure of IP relations under converse, meet, composition",
    5: "FRAG_CAP paths denote IP relations",
    6: "eight-way complement of FRAG_LOOP paths",
    7: "interval Helly property",
    8: "c1..c4 direct semantics vs expansion",
    9: "generators produce IP relations",
    10: "negative control finds a disagreement",
    11: "parse/print round trip",
}


def pytest_configure(config):
    config._acceptance = {}


@pytest.fixture
def record(request):
    """record(k, ok, detail): remember the verdict of acceptance criterion k."""
    store = request.config._acceptance

    def _record(k, ok, detail=""):
        store[k] = (bool(ok), detail)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config._acceptance
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in CRITERIA.items():
        ok, detail = store.get(k, (False, "not run or crashed"))
        line = f"[{'PASS' if ok else 'FAIL'}] {k:>2}. {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
