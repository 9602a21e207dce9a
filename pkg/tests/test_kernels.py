import importlib
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given

from cliquemis import _kernels_py, kernels
from cliquemis.graph import gnp_random

from conftest import graphs_with_order

try:
    from cliquemis import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

needs_ext = pytest.mark.skipif(_kernels_c is None, reason="compiled extension not built")


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_env_var_forces_pure_python():
    code = "import cliquemis.kernels as k; print(k.BACKEND)"
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env={"CLIQUEMIS_PURE_PYTHON": "1", "PATH": ""}
    )
    assert out.stdout.strip() == "python"


@needs_ext
@given(graphs_with_order(max_n=16))
def test_greedy_trace_backends_agree(case):
    g, perm = case
    a = _kernels_py.greedy_trace(g.indptr, g.indices, perm)
    b = _kernels_c.greedy_trace(g.indptr, g.indices, perm)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


@needs_ext
@given(graphs_with_order(max_n=16))
def test_residual_degrees_backends_agree(case):
    g, perm = case
    mask = perm % 2 == 0
    assert np.array_equal(
        _kernels_py.residual_degrees(g.indptr, g.indices, mask),
        _kernels_c.residual_degrees(g.indptr, g.indices, mask),
    )


@needs_ext
def test_backends_agree_on_a_larger_graph():
    g = gnp_random(600, 0.05, seed=4)
    perm = np.random.default_rng(0).permutation(600)
    for x, y in zip(_kernels_py.greedy_trace(g.indptr, g.indices, perm), _kernels_c.greedy_trace(g.indptr, g.indices, perm)):
        assert np.array_equal(x, y)
