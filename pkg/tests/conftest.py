import time

import pytest

from qcnt.modelset import enumerate_points, lattice_spec, sigma_ring


@pytest.fixture(scope="session")
def golden_ring():
    """d=5 ring {alpha in O_K : |alpha'| <= 1} up to 10^4."""
    return enumerate_points(sigma_ring(5), 1e4)


@pytest.fixture(scope="session")
def integers_1e5():
    return enumerate_points(lattice_spec(), 1e5)


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


class _Criterion:
    def __init__(self, log, number, title, seconds):
        self.log = log
        self.number = number
        self.title = title
        self.seconds = seconds
        self.failures = []
        self.details = []

    def require(self, ok, detail):
        self.details.append(detail)
        if not ok:
            self.failures.append(detail)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        self.require(elapsed < self.seconds, f"{elapsed:.1f} s (< {self.seconds} s)")
        passed = not self.failures
        shown = self.failures if not passed else self.details
        line = f"criterion {self.number:2d} {'PASS' if passed else 'FAIL'}  {self.title}"
        if shown:
            line += "  [" + "; ".join(shown) + "]"
        self.log.append(line)
        print(line)
        if exc is None and not passed:
            raise AssertionError("; ".join(self.failures))
        return False


@pytest.fixture
def criterion(request):
    log = request.config.stash[ACCEPTANCE]

    def make(number, title, seconds):
        return _Criterion(log, number, title, seconds)

    return make


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
