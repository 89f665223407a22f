"""Dyadic cubes on the periodic unit box [0,1)^n.

A cube is the pair (j, m): side 2^-j, lower corner m * 2^-j.  In periodic
mode the index is taken mod 2^j for j >= 0.  Homogeneous mode allows j < 0
down to a configured floor; such a "cube" covers the torus (possibly many
times over) and is represented as the full torus with its scale kept as
metadata, since only the phi(ell) prefactor sees scales > 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DyadicCube:
    j: int
    m: tuple  # integer index vector, length n

    def __post_init__(self):
        if self.j >= 0:
            mm = tuple(int(k) % (1 << self.j) for k in self.m)
        else:
            mm = tuple(0 for _ in self.m)
        object.__setattr__(self, "m", mm)

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def side(self) -> float:
        return 2.0 ** (-self.j)

    @property
    def volume(self) -> float:
        return self.side ** self.n

    @property
    def lower(self) -> tuple:
        return tuple(k * self.side for k in self.m)

    @property
    def center(self) -> tuple:
        return tuple((k + 0.5) * self.side for k in self.m)

    def literal(self) -> str:
        return f"{self.j}:" + ",".join(str(k) for k in self.m)

    @staticmethod
    def from_literal(text: str) -> "DyadicCube":
        j, ms = text.split(":")
        return DyadicCube(int(j), tuple(int(x) for x in ms.split(",")))

    def contains_point(self, x) -> bool:
        """Point membership with periodic wrap (for j >= 0)."""
        if self.j < 0:
            return True
        for xi, mi in zip(x, self.m):
            t = (xi % 1.0) / self.side
            if not (mi <= t < mi + 1):
                return False
        return True


def dilate(Q: DyadicCube, d: float) -> tuple[tuple, tuple]:
    """Concentric box: (center, half-widths), side d * ell(Q)."""
    if d <= 0:
        raise ValueError("dilation factor must be positive")
    half = 0.5 * d * Q.side
    return Q.center, tuple(half for _ in Q.m)


def box_mask(center, half, G: int, n: int) -> np.ndarray:
    """Grid-cell indicator of a box on the periodic G^n grid.

    A cell belongs to the box iff its lower-left corner lies in the box
    (consistent with half-open dyadic cells)."""
    axes = []
    for c, hw in zip(center, half):
        idx = np.arange(G) / G
        # periodic distance of the cell corner from the box center
        delta = (idx - c + 0.5) % 1.0 - 0.5
        if 2 * hw >= 1.0:
            axes.append(np.ones(G, dtype=bool))
        else:
            axes.append((delta >= -hw - 1e-12) & (delta < hw - 1e-12))
    out = axes[0]
    for a in axes[1:]:
        out = np.multiply.outer(out, a)
    return out


def cube_mask(Q: DyadicCube, G: int) -> np.ndarray:
    """Exact grid indicator of the cube itself (requires G >= 2^j)."""
    if Q.j < 0:
        return np.ones((G,) * Q.n, dtype=bool)
    if (1 << Q.j) > G:
        raise ValueError("cube finer than the grid")
    w = G >> Q.j
    axes = []
    for mi in Q.m:
        a = np.zeros(G, dtype=bool)
        a[mi * w:(mi + 1) * w] = True
        axes.append(a)
    out = axes[0]
    for a in axes[1:]:
        out = np.multiply.outer(out, a)
    return out


@dataclass(frozen=True)
class CubeLattice:
    n: int
    depth: int  # max level J
    homogeneous_floor: int = 0  # min level (negative in homogeneous mode)
    periodic: bool = True

    def levels(self):
        return range(self.homogeneous_floor, self.depth + 1)

    def cubes(self, j: int):
        if j < 0:
            yield DyadicCube(j, (0,) * self.n)
            return
        side = 1 << j
        for m in itertools.product(range(side), repeat=self.n):
            yield DyadicCube(j, m)

    def count(self, j: int) -> int:
        return 1 if j < 0 else (1 << j) ** self.n


def ancestor(Q: DyadicCube, j_prime: int) -> DyadicCube:
    """The unique level-j' cube containing Q (j' <= j)."""
    if j_prime > Q.j:
        raise ValueError("ancestor level must not exceed the cube level")
    if j_prime < 0:
        return DyadicCube(j_prime, (0,) * Q.n)
    shift = Q.j - j_prime
    return DyadicCube(j_prime, tuple(k >> shift for k in Q.m))


def trace_boxes(S: DyadicCube):
    """The three boxes over a dyadic cube S in the hyperplane:

    E(S) = S x (ell, 2 ell)   (pairwise disjoint over all S)
    F(S) = S x (0, 2 ell)
    G(S) = S x (0, ell)

    Each is returned as (S, (lo, hi)) with the vertical interval open."""
    ell = S.side
    return (S, (ell, 2 * ell)), (S, (0.0, 2 * ell)), (S, (0.0, ell))
