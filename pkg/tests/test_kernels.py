"""The numba and numpy kernels must agree with each other and with the tuple layer."""
import os
import subprocess
import sys

import numpy as np
import pytest

from hurwitz import _accel
from hurwitz._kernels_numpy import apply_codes as np_apply, closure_size as np_closure
from hurwitz.orbits import OrbitQuery, build_space, move_table, orbit_decompose
from hurwitz.tuples import Move, apply_move

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")

KIND = {0: "H", 1: "lambda", 2: "mu", 3: "zeta"}


@pytest.fixture
def backend_guard():
    before = _accel.backend()
    yield
    _accel.set_backend(before)


def _space(E, tv, p, zeta=True):
    q = OrbitQuery(E, tv, p, zeta=zeta)
    return q, build_space(q)


@pytest.mark.parametrize("which,tv,p", [("s3m", (2, 1), 1), ("s4t", (3,), 1), ("s3t", (2,), 2)])
def test_apply_codes_agree_with_tuple_moves(request, which, tv, p):
    from hurwitz import _kernels_numba as nb

    E = request.getfixturevalue(which)
    q, sp = _space(E, tv, p)
    rng = np.random.default_rng(0)
    codes = sp.states[rng.integers(0, sp.size, 200)]
    for kind, idx, _ in move_table(q).tolist():
        for dr in (1, -1):
            mv = np.array([kind, idx, dr], dtype=np.int64)
            a = np_apply(sp.tables, q.n, p, codes, mv, sp.radices)
            b = nb.apply_codes(sp.tables, q.n, p, codes, mv, sp.radices)
            assert np.array_equal(a, b)
            for c, out in zip(codes[:25].tolist(), a[:25].tolist()):
                t = sp.decode(c)
                assert sp.encode(apply_move(t, Move(KIND[kind], idx + 1, dr))) == out


def test_closure_size_agree(s4m):
    from hurwitz import _kernels_numba as nb
    from hurwitz.tables import group_tables

    T = group_tables(s4m)
    rng = np.random.default_rng(1)
    for _ in range(30):
        gens = sorted(set(rng.integers(1, T.order, rng.integers(1, 4)).tolist()))
        assert np_closure(T, gens) == nb.closure_size(T, gens)


@pytest.mark.parametrize("which,tv,p,zeta", [("s3t", (4,), 1, False), ("s3m", (2, 2), 1, True),
                                             ("s4t", (6,), 0, False), ("v4", (1, 1, 2), 1, False)])
def test_orbit_reports_identical(request, backend_guard, which, tv, p, zeta):
    E = request.getfixturevalue(which)
    q = OrbitQuery(E, tv, p, boundary=E.group.identity, zeta=zeta)
    out = {}
    for be in ("numpy", "numba"):
        _accel.set_backend(be)
        out[be] = orbit_decompose(q, keep_space=False).to_dict()
    assert out["numpy"] == out["numba"]


def test_tablefree_path_agrees(monkeypatch, backend_guard, s4t):
    # groups above TABLE_LIMIT multiply by composing image arrays
    from hurwitz import tables

    q = OrbitQuery(s4t, (6,), 0, boundary=s4t.group.identity)
    ref = orbit_decompose(q, keep_space=False).to_dict()
    monkeypatch.setattr(tables, "TABLE_LIMIT", 0)
    tables.group_tables.cache_clear()
    assert tables.group_tables(s4t).table.shape == (0, 0)
    for be in ("numpy", "numba"):
        _accel.set_backend(be)
        assert orbit_decompose(q, keep_space=False).to_dict() == ref
    tables.group_tables.cache_clear()


def test_set_backend_validation(backend_guard):
    with pytest.raises(ValueError):
        _accel.set_backend("cuda")
    _accel.set_backend("numpy")
    assert _accel.backend() == "numpy"
    assert _accel.kernels().__name__.endswith("_kernels_numpy")


def test_env_flag_forces_numpy():
    env = dict(os.environ, HURWITZ_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import hurwitz; print(hurwitz.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
