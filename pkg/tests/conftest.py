import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from birkhoffkit.sl2z import IntMatrix2


def all_mixed_words(max_len, min_len=2):
    """Brute-force list of mixed words (independent of the library generator)."""
    out = []
    for k in range(min_len, max_len + 1):
        for letters in itertools.product("RL", repeat=k):
            w = "".join(letters)
            if "R" in w and "L" in w:
                out.append(w)
    return out


def np_word_matrix(w):
    gens = {"R": np.array([[1, 1], [0, 1]], dtype=object),
            "L": np.array([[1, 0], [1, 1]], dtype=object)}
    m = np.eye(2, dtype=int).astype(object)
    for ch in w:
        m = m.dot(gens[ch])
    return m


def as_np(m: IntMatrix2):
    return np.array([[m.a, m.b], [m.c, m.d]], dtype=object)


def brute_rotation_min(w):
    key = str.maketrans("RL", "01")
    return min((w[i:] + w[:i] for i in range(len(w))), key=lambda s: s.translate(key))


mixed_words = st.text(alphabet="RL", min_size=2, max_size=14).filter(
    lambda w: "R" in w and "L" in w)

_STEPS = {"R": IntMatrix2(1, 1, 0, 1), "L": IntMatrix2(1, 0, 1, 1),
          "r": IntMatrix2(1, -1, 0, 1), "l": IntMatrix2(1, 0, -1, 1)}


def _product(letters):
    m = IntMatrix2(1, 0, 0, 1)
    for ch in letters:
        m = m @ _STEPS[ch]
    return m


# random elements of SL(2,Z) as products of generators and inverses
sl2_matrices = st.lists(st.sampled_from("RLrl"), max_size=12).map(_product)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("GHYS_CACHE_DIR", str(tmp_path / "ghys-cache"))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
