import pytest

from wfgraph import ConcurrentGraph

_CRITERIA = {}


@pytest.fixture
def graph():
    return ConcurrentGraph(max_threads=16)


@pytest.fixture
def tid(graph):
    return graph.register_thread()


@pytest.fixture
def detail(request):
    """Attach a one-line measurement to an acceptance test's summary row."""

    def put(text):
        request.node.criterion_detail = text

    return put


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    num, title = mark.args
    info = getattr(item, "criterion_detail", "")
    if rep.failed:
        lines = str(rep.longrepr).strip().splitlines()
        info = (info + " | " if info else "") + (lines[-1] if lines else "failed")
    _CRITERIA[num] = (title, rep.passed, info)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok, info = _CRITERIA[num]
        line = f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {title}"
        tr.write_line(line + (f"  [{info}]" if info else ""))
