import itertools

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def word_span_dim(mats, unital=True, tol=1e-9):
    """Dimension of the span of all words in ``mats`` (and 1).

    Independent of the package: enumerate words layer by layer (length k+1 =
    generator times length k) with numpy's SVD, stopping once a layer adds
    nothing, since then no longer word can either.
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    d = mats[0].shape[0]

    def rank(ws):
        if not ws:
            return 0
        flat = np.array([w.reshape(-1) / max(np.linalg.norm(w), 1e-300) for w in ws])
        s = np.linalg.svd(flat, compute_uv=False)
        return int(np.sum(s > tol * max(s[0], 1.0)))

    words = ([np.eye(d, dtype=complex)] if unital else []) + [m for m in mats if np.any(m)]
    layer = list(words)
    current = rank(words)
    for _ in range(d * d):
        layer = [a @ w for a in mats for w in layer if np.any(a @ w)]
        flat = np.array([w.reshape(-1) for w in layer]) if layer else None
        if flat is None:
            break
        _, s, vh = np.linalg.svd(flat, full_matrices=False)
        layer = [v.reshape(d, d) for v in vh[s > tol * s[0]]]
        nxt = rank(words + layer)
        if nxt == current:
            break
        words += layer
        current = nxt
    return current


def brute_commutant_dim(mats):
    from scipy.linalg import null_space

    mats = [np.asarray(m, dtype=complex) for m in mats]
    d = mats[0].shape[0]
    cols = []
    for i, j in itertools.product(range(d), repeat=2):
        e = np.zeros((d, d), dtype=complex)
        e[i, j] = 1
        cols.append(np.concatenate([(a @ e - e @ a).reshape(-1) for a in mats]))
    m = np.array(cols).T
    return null_space(m, rcond=1e-10).shape[1]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
