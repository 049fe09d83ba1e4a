import numpy as np
import pytest

from riccati_diag.core import BlockPartition

_ACCEPTANCE_LINES: list[str] = []


def random_hermitian(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (a + a.conj().T) / 2


def random_complex(rng, shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def random_gapped_partition(rng, n, k):
    """Random blocks with H+ shifted so that max eig(H-) + gap = min eig(H+)."""
    hp = random_hermitian(rng, k)
    hm = random_hermitian(rng, n - k)
    gap = rng.uniform(0.5, 2.0)
    shift = np.linalg.eigvalsh(hm).max() - np.linalg.eigvalsh(hp).min() + gap
    hp = hp + shift * np.eye(k)
    v = random_complex(rng, (n - k, k))
    return BlockPartition(k, hp, hm, v)


@pytest.fixture
def rng():
    return np.random.default_rng(20260514)


@pytest.fixture
def record_criterion():
    """Collect one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(number: int, title: str, passed: bool, detail: str) -> None:
        _ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} -- {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
