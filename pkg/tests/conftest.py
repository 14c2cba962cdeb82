import numpy as np
import pytest

from periodic_psido.lattice import PeriodMatrix, enumerate_truncation
from periodic_psido.symbol import PeriodicSymbol

LATTICES = {
    "identity": PeriodMatrix.identity(2),
    "diag": PeriodMatrix.diagonal([2.0, 0.5]),
    "shear": PeriodMatrix([[1.0, 1.0], [0.0, 1.0]]),
}


def random_symbol(rng, L, terms=4, K=3, zero=False):
    """Random complex coefficients on ``terms`` distinct indices of the K-box."""
    box = enumerate_truncation(K, L.n)
    if not zero:
        box = box[1:]
    idx = rng.choice(len(box), size=terms, replace=False)
    return PeriodicSymbol(L, {box[i]: complex(rng.normal(), rng.normal()) for i in idx})


def rel(a, b):
    return (a - b).norm() / b.norm()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE: dict = {}


def record(number: int, title: str, ok: bool, detail: str) -> None:
    """Store one acceptance verdict; printed in the terminal summary."""
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
