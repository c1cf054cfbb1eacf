import pytest

_ACCEPTANCE = []


class _Verdict:
    def __init__(self, criterion: int, title: str):
        self.criterion = criterion
        self.title = title
        self.line = None

    def __call__(self, ok: bool, detail: str):
        status = "PASS" if ok else "FAIL"
        self.line = f"[{status}] criterion {self.criterion}: {self.title} ({detail})"
        print(self.line)
        return ok


@pytest.fixture
def verdict(request):
    """Record one pass/fail line per acceptance criterion."""
    marker = request.node.get_closest_marker("criterion")
    v = _Verdict(*marker.args)
    yield v
    if v.line is None:
        v.line = f"[FAIL] criterion {v.criterion}: {v.title} (raised before a verdict)"
        print(v.line)
    _ACCEPTANCE.append(v.line)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
