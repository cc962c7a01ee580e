"""Shared fixtures: random matrix corpora, data-file discovery, and the
acceptance-report hook that prints one line per criterion."""

import os
from pathlib import Path

import numpy as np
import pytest

from quadlog.testmats import gen_frank, gen_parter, gen_spd, gen_vand, read_matrix_market

# ---------------------------------------------------------------------------
# acceptance reporting

_ACCEPTANCE_LINES = {}


def record_criterion(number, ok, detail):
    """Store one pass/fail line for the terminal summary, then return ok."""
    _ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    return ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[number])


# ---------------------------------------------------------------------------
# data files (SuiteSparse test matrices are not redistributed here)

DATA_FILES = ("bcsstk02.mtx", "bcsstk03.mtx", "ck104.mtx")


def find_data_file(name):
    """Look for a named matrix file in QUADLOG_DATA_DIR, then tests/data."""
    candidates = []
    env = os.environ.get("QUADLOG_DATA_DIR", "").strip()
    if env:
        candidates.append(Path(env))
    candidates.append(Path(__file__).parent / "data")
    for root in candidates:
        path = root / name
        if path.is_file():
            return path
    return None


def load_data_matrix(name):
    path = find_data_file(name)
    if path is None:
        return None
    return read_matrix_market(str(path))


# ---------------------------------------------------------------------------
# random corpora

CORPUS_SEED = 735001


def _random_spd(master):
    n = int(master.integers(2, 21))
    kappa = 10.0 ** float(master.uniform(1.0, 8.0))
    seed = int(master.integers(0, 2**31))
    return gen_spd(n, kappa, seed)


def _random_diagonalizable(master):
    """Nonsymmetric diagonalizable matrix with positive, well-separated
    eigenvalues and two-norm condition number at most 1e8."""
    while True:
        n = int(master.integers(2, 21))
        # Adjacent eigenvalue ratios at least 2 keep power iteration fast;
        # total spread <= 1e7 leaves condition-number headroom for the
        # similarity transform.
        r_max = min(4.0, 10.0 ** (7.0 / (n - 1)))
        ratios = np.exp(master.uniform(np.log(2.0), np.log(r_max), size=n - 1))
        d = np.concatenate([[1.0], 1.0 / np.cumprod(ratios)])
        d *= 10.0 ** float(master.uniform(0.2, 1.7))
        v = np.eye(n) + 0.25 * master.standard_normal((n, n)) / np.sqrt(n)
        a = v @ np.diag(d) @ np.linalg.inv(v)
        s = np.linalg.svd(a, compute_uv=False)
        if s[0] / s[-1] <= 1e8:
            return a


@pytest.fixture(scope="session")
def spd_corpus():
    master = np.random.default_rng(CORPUS_SEED)
    return [_random_spd(master) for _ in range(200)]


@pytest.fixture(scope="session")
def diag_corpus():
    master = np.random.default_rng(CORPUS_SEED + 1)
    return [_random_diagonalizable(master) for _ in range(50)]


@pytest.fixture(scope="session")
def full_corpus(spd_corpus, diag_corpus):
    return spd_corpus + diag_corpus


# ---------------------------------------------------------------------------
# the nine-matrix evaluation set (generators plus optional data files)

GENERATOR_TABLE = (
    ("spd1", lambda: gen_spd(50, 1e1, 1)),
    ("spd2", lambda: gen_spd(50, 1e4, 1)),
    ("spd3", lambda: gen_spd(50, 1e7, 1)),
    ("parter", lambda: gen_parter(10)),
    ("frank", lambda: gen_frank(10)),
    ("vand", lambda: gen_vand(10)),
)


@pytest.fixture(scope="session")
def eval_matrices():
    """name -> matrix for the evaluation corpus; data-file entries map to
    None when the file is not supplied."""
    out = {name: make() for name, make in GENERATOR_TABLE}
    for fname in DATA_FILES:
        out[fname[:-4]] = load_data_matrix(fname)
    return out
