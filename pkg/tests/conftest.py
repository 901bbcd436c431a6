import numpy as np
import pytest

from evdrange import SymMatrix, random_spsd

# fixed seeds; the corpus is regenerated identically on every platform
CORPUS_SIZE = 1000

_VERDICTS = {}


def corpus_dim(k: int) -> int:
    return 2 + k % 11


def record_verdict(number: int, ok: bool, detail: str):
    """Collect one line per acceptance criterion (AND-ed across sub-checks)."""
    prev_ok, prev_detail = _VERDICTS.get(number, (True, ""))
    joined = f"{prev_detail}; {detail}" if prev_detail else detail
    _VERDICTS[number] = (prev_ok and ok, joined)


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        ok, detail = _VERDICTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def corpus():
    return [random_spsd(corpus_dim(k), k) for k in range(CORPUS_SIZE)]


@pytest.fixture
def mat_c():
    return SymMatrix([[0.4427, 0.1067], [0.1067, 0.4427]])


@pytest.fixture
def mat_d():
    return SymMatrix([[33.4834, 22.2054], [22.2054, 33.4834]])


@pytest.fixture
def mat_y():
    return SymMatrix([[46.7785, 28.3501, 18.8598],
                      [28.3501, 20.1805, 13.0975],
                      [18.8598, 13.0975, 8.6377]])


@pytest.fixture
def mat_z():
    return SymMatrix(np.array([
        [107.6724, 97.1687, 107.1030, 101.8092, 78.4556],
        [97.1687, 118.4738, 109.0664, 114.7589, 101.8092],
        [107.1030, 109.0664, 126.1528, 109.0664, 107.1030],
        [101.8092, 114.7589, 109.0664, 118.4738, 97.1687],
        [78.4556, 101.8092, 107.1030, 97.1687, 107.6724],
    ]))

