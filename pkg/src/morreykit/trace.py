"""Trace and extension operators on coefficient fields and grid functions.

The trace of a coefficient field keeps, per hyperplane cube Q' at level j,
the coefficients of the source cubes whose closure touches the hyperplane
x_n = 0 (last index 0 or 2^j - 1).  The extension plants a hyperplane field
on the last-index-0 slab, so trace(extend(mu)) = mu exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dyadic import DyadicCube
from .growth import (SpaceParams, check_trace_summability, dyadic_scales,
                     trace_transform)
from .gridfn import GridFunction, RychkovPair
from .norms import CoeffField, seq_norm

INF = math.inf


@dataclass
class TraceProblem:
    """Validated source/target parameter pair for the trace operator.

    Raises unless
      * n >= 2,
      * s > 1/q + (n-1) (1/min(1,q) - 1)        (N-variant), resp.
        s > 1/q + (n-1) (1/min(1,q,r) - 1)      (E-variant),
      * phi*(t) = phi(t) t^{-1/q} is summable along dyadic chains:
        sup_s phi*(s) sum_{2^j s <= 1} 1/phi*(2^j s) stays bounded."""
    params: SpaceParams
    star: SpaceParams = field(init=False)
    threshold: float = field(init=False)
    summability_constant: float = field(init=False)

    def __post_init__(self):
        p = self.params
        if p.n < 2:
            raise ValueError("trace needs n >= 2")
        w = min(1.0, p.q) if p.variant == "N" else min(1.0, p.q, p.r)
        self.threshold = 1.0 / p.q + (p.n - 1) * (1.0 / w - 1.0)
        if not p.s > self.threshold + 1e-12:
            raise ValueError(
                f"s = {p.s} must exceed the trace threshold {self.threshold}")
        self.star = trace_transform(p)
        ok, C = check_trace_summability(self.star.phi, dyadic_scales(-12, 0))
        if not ok:
            raise ValueError("phi* fails the dyadic summability condition")
        self.summability_constant = C


# ---------------------------------------------------------------------------
# coefficient-level trace / extension

def _touching_slices(j: int):
    """Last-index values of level-j cubes whose closure meets {x_n = 0}."""
    if j <= 0:
        return (0,)
    return tuple(sorted({0, (1 << j) - 1}))


def trace_coeff(lam: CoeffField, problem: TraceProblem) -> CoeffField:
    """Collapse the last index: lam'_{j m'} = sum over touching slices of
    lam_{j (m', m_n)}."""
    n = lam.n
    if n != problem.params.n:
        raise ValueError("field dimension does not match the problem")
    out = {}
    for j in lam.level_list():
        v = lam.levels[j]
        if j < 0:
            out[j] = v
            continue
        acc = None
        for mn in _touching_slices(j):
            sl = v[..., mn]
            acc = sl.copy() if acc is None else acc + sl
        out[j] = acc
    return CoeffField(n - 1, out)


def extend_coeff(mu: CoeffField, problem: TraceProblem) -> CoeffField:
    """Plant the hyperplane field on the m_n = 0 slab of the full lattice."""
    n = problem.params.n
    if mu.n != n - 1:
        raise ValueError("field dimension does not match the trace lattice")
    out = {}
    for j in mu.level_list():
        v = mu.levels[j]
        if j < 0:
            out[j] = v
            continue
        side = 1 << j
        arr = np.zeros((side,) * n, dtype=np.complex128)
        arr[..., 0] = v
        out[j] = arr
    return CoeffField(n, out)


# ---------------------------------------------------------------------------
# empirical trace constants

def _trace_cell_fields(lam: CoeffField, problem: TraceProblem):
    """|trace coefficients| per level, expanded to the finest (n-1)-lattice."""
    from .norms import _cell_fields
    tl = trace_coeff(lam, problem)
    tl = CoeffField(tl.n, {j: (np.abs(v) if j >= 0 else abs(v))
                           for j, v in tl.levels.items()})
    cl = tl.max_level
    return _cell_fields(tl, cl), cl


def trace_bound_I(lam: CoeffField, problem: TraceProblem) -> float:
    """sup over hyperplane cubes Q' of

        phi*(l) ( |Q'|^{-1} int_{Q'} sum_{j >= j_{Q'}} 2^{j s* q} S_j^q )^{1/q}
        -----------------------------------------------------------------
                       || lam ||  (source sequence norm)

    with S_j the level-j trace indicator aggregate.  Finite constants here
    witness the fine-scale half of the trace estimate."""
    from .gridfn import _block_mean
    star = problem.star
    q, s = star.q, star.s
    phi = star.phi
    fields, cl = _trace_cell_fields(lam, problem)
    denom = seq_norm(lam, problem.params)
    if denom == 0:
        return 0.0
    side = 1 << cl
    nn = star.n
    # cumulative-from-above level sums of 2^{j s q} S_j^q on the cell lattice
    levels = sorted(j for j in fields if j >= 0)
    best = 0.0
    for j0 in range(0, cl + 1):
        acc = np.zeros((side,) * nn)
        for j in levels:
            if j >= j0:
                acc += (2.0 ** (j * s) * fields[j]) ** q
        # homogeneous scalar levels below j0 are excluded by j >= j_{Q'}
        c = side >> j0
        means = _block_mean(acc, c) if c > 1 else acc
        val = phi(2.0 ** (-j0)) * float(means.max()) ** (1.0 / q)
        best = max(best, val)
    return best / denom


def trace_bound_II(lam: CoeffField, problem: TraceProblem) -> float:
    """sup over hyperplane cubes Q' of

        phi*(l) ( sum_{j=0}^{j_{Q'}} 2^{j s* q} |lam_{j (m'(j), 0)}|^q )^{1/q}
        ------------------------------------------------------------------
                       || lam ||  (source sequence norm)

    where m'(j) runs over the ancestors of Q': the coarse-scale chain of
    hyperplane-adjacent coefficients."""
    star = problem.star
    q, s = star.q, star.s
    phi = star.phi
    denom = seq_norm(lam, problem.params)
    if denom == 0:
        return 0.0
    nn = star.n
    src_levels = [j for j in lam.level_list() if j >= 0]
    if not src_levels:
        return 0.0
    cl = max(src_levels)
    side = 1 << cl
    # chain sums on the finest hyperplane lattice: at cell y, the ancestor
    # coefficient at level j is lam[j][(y >> (cl - j), 0)]
    acc = np.zeros((side,) * nn)
    best = 0.0
    for j0 in range(0, cl + 1):
        if j0 in lam.levels:
            slab = np.abs(lam.levels[j0][..., 0])
            rep = 1 << (cl - j0)
            expanded = slab
            for ax in range(nn):
                expanded = np.repeat(expanded, rep, axis=ax)
            acc = acc + (2.0 ** (j0 * s) * expanded) ** q
        val = phi(2.0 ** (-j0)) * float(acc.max()) ** (1.0 / q)
        best = max(best, val)
    return best / denom


def extension_bound(mu: CoeffField, problem: TraceProblem) -> float:
    """|| extend(mu) ||_source / || mu ||_trace."""
    denom = seq_norm(mu, problem.star)
    if denom == 0:
        return 0.0
    return seq_norm(extend_coeff(mu, problem), problem.params) / denom


# ---------------------------------------------------------------------------
# function-level trace

def trace_function(f: GridFunction, pair: RychkovPair):
    """Restrict f (n = 2) to the line x_2 = 0 through its atomic split.

    Returns (trace from atoms, direct restriction); the two agree to FFT
    precision because the atom sum reproduces f exactly."""
    from .decomp import atomic_analyze
    if f.n != 2:
        raise ValueError("function trace is implemented for n = 2")
    G = f.G
    lam, atoms = atomic_analyze(f, pair)
    out = np.zeros(G, dtype=np.complex128)
    for (j, m), atom in atoms.items():
        w = lam.get(j, m)
        if w == 0:
            continue
        o0, o1 = atom.origin
        # coarse patches exceed the grid and are G-periodic; one period counts
        pw = min(atom.patch.shape[0], G)
        P = min(atom.patch.shape[1], G)
        # row index of the line x_2 = 0 inside the patch, if covered
        row = (-o1) % G
        if row >= P:
            continue
        idx = np.arange(o0, o0 + pw) % G
        np.add.at(out, idx, w * atom.patch[:pw, row])
    direct = GridFunction(1, f.samples[:, 0].copy())
    return GridFunction(1, out), direct
