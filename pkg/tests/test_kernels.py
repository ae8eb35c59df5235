import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from twistalg.core import _kernels_py
from twistalg.core.kernels import BACKEND

try:
    from twistalg.core import _ckernels
except ImportError:
    _ckernels = None

needs_compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")

primes = st.sampled_from([2, 3, 5, 7, 101])


@needs_compiled
@settings(max_examples=80, deadline=None)
@given(primes, st.integers(0, 6), st.integers(0, 6), st.randoms(use_true_random=False))
def test_rref_backends_agree(p, r, c, rnd):
    rows = [[rnd.randrange(-3 * p, 3 * p) for _ in range(c)] for _ in range(r)]
    assert _ckernels.rref_modp([x[:] for x in rows], c, p) == _kernels_py.rref_modp(rows, c, p)


@needs_compiled
@settings(max_examples=80, deadline=None)
@given(primes, st.lists(st.integers(0, 200), max_size=12), st.lists(st.integers(0, 200), max_size=12),
       st.integers(0, 15))
def test_series_mul_backends_agree(p, a, b, n):
    assert _ckernels.series_mul_modp(a, b, n, p) == _kernels_py.series_mul_modp(a, b, n, p)


def test_rref_is_reduced():
    rows, piv = _kernels_py.rref_modp([[2, 4, 1], [1, 2, 0]], 3, 5)
    assert piv == [0, 2]
    assert rows == [[1, 2, 0], [0, 0, 1]]


def test_pure_fallback_is_selectable():
    env = dict(os.environ, TWISTALG_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from twistalg.core.kernels import BACKEND; print(BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert BACKEND in ("python", "cython")
