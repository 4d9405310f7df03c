"""Integer encodings of an equipped group for the array kernels.

Group elements are indexed by their position in ``PermGroup.elements``
(lexicographic on image arrays, so the identity is 0).  A permutation's
*key* packs its image array in base ``d`` with the image of point 1 most
significant; keys are therefore sorted in element-index order and a binary
search maps a key back to its index.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .equipped import EquippedGroup

# full multiplication table only while it stays small
TABLE_LIMIT = 1 << 24


@dataclass(frozen=True, eq=False)
class GroupTables:
    degree: int
    order: int
    perms: np.ndarray    # (N, d) int64 image arrays
    keys: np.ndarray     # (N,) int64 packed images, ascending
    inv: np.ndarray      # (N,) inverse element index
    table: np.ndarray    # (N, N) int64 product table, or shape (0, 0)
    o2g: np.ndarray      # (|O|,) element index of each letter of O
    g2o: np.ndarray      # (N,) letter index or -1
    oclass: np.ndarray   # (|O|,) class index of each letter

    @property
    def n_letters(self) -> int:
        return len(self.o2g)

    def as_tuple(self):
        return (self.table, self.perms, self.keys, self.inv, self.o2g, self.g2o)

    # numpy helpers, elementwise over arrays of element indices
    def mul(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        if self.table.shape[0]:
            return self.table[x, y]
        x, y = np.broadcast_arrays(x, y)
        shape = x.shape
        px = self.perms[x.ravel()]
        py = self.perms[y.ravel()]
        comp = np.take_along_axis(py, px, axis=1)
        return self.lookup(comp).reshape(shape)

    def lookup(self, images: np.ndarray) -> np.ndarray:
        weights = self.degree ** np.arange(self.degree - 1, -1, -1, dtype=np.int64)
        key = images.astype(np.int64) @ weights
        return np.searchsorted(self.keys, key)

    def conj(self, x, y):
        """x^y = y^-1 x y."""
        return self.mul(self.mul(self.inv[y], x), y)

    def comm(self, a, b):
        """[a, b] = a b a^-1 b^-1."""
        return self.mul(self.mul(a, b), self.mul(self.inv[a], self.inv[b]))


@lru_cache(maxsize=16)
def group_tables(E: EquippedGroup) -> GroupTables:
    G = E.group
    d = G.degree
    perms = np.array([g.images for g in G.elements], dtype=np.int64).reshape(len(G), d)
    weights = d ** np.arange(d - 1, -1, -1, dtype=np.int64)
    keys = perms @ weights
    assert np.all(np.diff(keys) > 0)
    inv_images = np.argsort(perms, axis=1)
    inv = np.searchsorted(keys, inv_images @ weights)
    N = len(G)
    if N * N <= TABLE_LIMIT:
        # table[x, y][i] = perms[y][perms[x][i]]
        table = np.empty((N, N), dtype=np.int64)
        for x in range(N):
            comp = perms[:, perms[x]]  # row y: perms[y][perms[x]]
            table[x] = np.searchsorted(keys, comp @ weights)
    else:
        table = np.zeros((0, 0), dtype=np.int64)
    o2g = np.array([G.index(g) for g in E.O], dtype=np.int64)
    g2o = np.full(N, -1, dtype=np.int64)
    g2o[o2g] = np.arange(len(o2g))
    oclass = np.array([E.class_index(g) for g in E.O], dtype=np.int64)
    return GroupTables(d, N, perms, keys, inv, table, o2g, g2o, oclass)
