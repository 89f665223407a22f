"""Norm functionals: Morrey, function-space (N/E), sequence-space, quark.

Sequence-space norms are evaluated exactly: indicator aggregates are
piecewise constant on the finest coefficient lattice, so every cube average
is a mean of finitely many cell values with no sampling error.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .growth import GrowthFunction, SpaceParams, check_nakai, dyadic_scales
from .gridfn import FilterBank, GridFunction, band, _block_mean, _expand

INF = math.inf


# ---------------------------------------------------------------------------
# coefficient fields

@dataclass
class CoeffField:
    """Doubly indexed coefficients lambda_{jm}, dense per level.

    Level j >= 0 holds an array of shape (2^j,)*n; homogeneous levels j < 0
    hold a single complex value (the whole-torus pseudo-cube)."""
    n: int
    levels: dict = field(default_factory=dict)  # j -> ndarray or complex

    def __post_init__(self):
        clean = {}
        for j, v in self.levels.items():
            j = int(j)
            if j < 0:
                clean[j] = complex(np.asarray(v).ravel()[0])
            else:
                arr = np.asarray(v, dtype=np.complex128)
                want = (1 << j,) * self.n
                if arr.shape != want:
                    raise ValueError(f"level {j} array must have shape {want}")
                clean[j] = arr
        self.levels = clean

    def level_list(self):
        return sorted(self.levels)

    @property
    def max_level(self) -> int:
        pos = [j for j in self.levels if j >= 0]
        return max(pos) if pos else 0

    def get(self, j: int, m: tuple) -> complex:
        if j not in self.levels:
            return 0.0
        if j < 0:
            return self.levels[j]
        return complex(self.levels[j][tuple(int(k) % (1 << j) for k in m)])

    def scaled(self, c) -> "CoeffField":
        return CoeffField(self.n, {j: (v * c if j >= 0 else v * c)
                                   for j, v in self.levels.items()})

    def __add__(self, other: "CoeffField") -> "CoeffField":
        out = {}
        for j in set(self.levels) | set(other.levels):
            a = self.levels.get(j)
            b = other.levels.get(j)
            if a is None:
                out[j] = b
            elif b is None:
                out[j] = a
            else:
                out[j] = a + b
        return CoeffField(self.n, out)

    # -- CSV persistence -----------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["j"] + [f"m{i+1}" for i in range(self.n)] + ["re", "im"])
        for j in self.level_list():
            v = self.levels[j]
            if j < 0:
                w.writerow([j] + [0] * self.n + [v.real, v.imag])
                continue
            it = np.ndindex(v.shape)
            for m in it:
                z = v[m]
                if z != 0:
                    w.writerow([j] + list(m) + [z.real, z.imag])
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str, n: int) -> "CoeffField":
        rows = list(csv.reader(io.StringIO(text)))
        levels = {}
        for row in rows[1:]:
            if not row:
                continue
            j = int(row[0])
            m = tuple(int(x) for x in row[1:1 + n])
            z = complex(float(row[1 + n]), float(row[2 + n]))
            if j < 0:
                levels[j] = levels.get(j, 0.0) + z
            else:
                if j not in levels:
                    levels[j] = np.zeros((1 << j,) * n, dtype=np.complex128)
                levels[j][m] += z
        return CoeffField(n, levels)


@dataclass
class QuarkCoeffs:
    """Triply indexed coefficients lambda^beta_{nu m}: one CoeffField per
    multi-index beta."""
    n: int
    beta_cutoff: int
    rho: float
    fields: dict = field(default_factory=dict)  # beta tuple -> CoeffField
    meta: dict = field(default_factory=dict)

    def betas(self):
        return sorted(self.fields, key=lambda b: (sum(b), b))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["beta", "nu"] + [f"m{i+1}" for i in range(self.n)]
                   + ["re", "im"])
        for beta in self.betas():
            fld = self.fields[beta]
            tag = "-".join(str(b) for b in beta)
            for j in fld.level_list():
                v = fld.levels[j]
                if j < 0:
                    w.writerow([tag, j] + [0] * self.n + [v.real, v.imag])
                    continue
                for m in np.ndindex(v.shape):
                    z = v[m]
                    if z != 0:
                        w.writerow([tag, j] + list(m) + [z.real, z.imag])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# Morrey norm on grid functions

def _morrey_of_array(a: np.ndarray, q: float, phi: GrowthFunction) -> float:
    """sup over dyadic cubes (levels 0..J) of phi(ell) (cube mean of a)^{1/q};
    a holds |f|^q >= 0 on the grid."""
    G = a.shape[0]
    J = G.bit_length() - 1
    best = phi(1.0) * float(a.mean()) ** (1.0 / q)
    for lev in range(1, J + 1):
        c = G >> lev
        means = _block_mean(a, c)
        best = max(best, phi(2.0 ** (-lev)) * float(means.max()) ** (1.0 / q))
    return best


def morrey_norm(f: GridFunction, q: float, phi: GrowthFunction) -> float:
    """Generalized Morrey norm: sup_Q phi(ell(Q)) (|Q|^{-1} int_Q |f|^q)^{1/q},
    sup over the dyadic lattice down to single grid cells."""
    if q <= 0:
        raise ValueError("q must be positive")
    return _morrey_of_array(np.abs(f.samples) ** q, q, phi)


# ---------------------------------------------------------------------------
# function-space norms

def space_norm(f: GridFunction, params: SpaceParams, bank: FilterBank,
               return_meta: bool = False):
    """N-variant: ||theta(D)f|| + (sum_{j>=1} 2^{jsr} ||tau_j(D)f||^r)^{1/r}.
    E-variant: ||theta(D)f|| + Morrey norm of the pointwise ell^r aggregate.
    Homogeneous mode drops theta and sums j over the full floored range.
    r = infinity uses sup semantics."""
    q, r, s, phi = params.q, params.r, params.s, params.phi
    meta = {}
    if params.variant == "E" and r != INF:
        ok, _, _ = check_nakai(phi, dyadic_scales())
        if not ok:
            meta["nakai_warning"] = True
    if params.homogeneous != bank.homogeneous:
        raise ValueError("bank homogeneity does not match params")
    levels = list(bank.levels())
    if params.homogeneous:
        tau_levels = levels
        low = None
    else:
        tau_levels = [j for j in levels if j >= 1]
        low = band(f, bank, 0)

    if params.variant == "N":
        terms = []
        for j in tau_levels:
            nj = morrey_norm(band(f, bank, j), q, phi)
            terms.append(2.0 ** (j * s) * nj)
        if r == INF:
            high = max(terms) if terms else 0.0
        else:
            high = float(np.sum(np.array(terms) ** r)) ** (1.0 / r)
    else:
        agg = None
        for j in tau_levels:
            bj = np.abs(band(f, bank, j).samples)
            w = 2.0 ** (j * s)
            if r == INF:
                cand = w * bj
                agg = cand if agg is None else np.maximum(agg, cand)
            else:
                cand = (w * bj) ** r
                agg = cand if agg is None else agg + cand
        if agg is None:
            high = 0.0
        else:
            if r != INF:
                agg = agg ** (1.0 / r)
            high = morrey_norm(GridFunction(f.n, agg.astype(np.complex128)),
                               q, phi)

    total = high if params.homogeneous else morrey_norm(low, q, phi) + high
    if return_meta:
        return total, meta
    return total


# ---------------------------------------------------------------------------
# sequence-space norms (exact piecewise-constant arithmetic)

def _cell_fields(lam: CoeffField, cell_level: int) -> dict:
    """|lambda_j| expanded to the cell lattice at level cell_level."""
    n = lam.n
    side = 1 << cell_level
    out = {}
    for j in lam.level_list():
        v = lam.levels[j]
        if j < 0:
            out[j] = np.full((side,) * n, abs(v))
        else:
            out[j] = _expand(np.abs(v), 1 << (cell_level - j))
    return out


def seq_norm(lam: CoeffField, params: SpaceParams) -> float:
    """Sequence-space norm of the indicator aggregate, exact on the lattice.

    'N' (n-type): (sum_j 2^{jsr} || sum_m lambda_jm chi_Q ||^r)^{1/r}
    'E' (e-type): || (sum_j 2^{jsr} (sum_m |lambda_jm| chi_Q)^r)^{1/r} ||"""
    if not lam.levels:
        return 0.0
    q, r, s, phi = params.q, params.r, params.s, params.phi
    cl = lam.max_level
    fields = _cell_fields(lam, cl)
    if params.variant == "N":
        terms = []
        for j, a in fields.items():
            nj = _morrey_of_array(a ** q, q, phi)
            terms.append(2.0 ** (j * s) * nj)
        if r == INF:
            return max(terms) if terms else 0.0
        return float(np.sum(np.array(terms) ** r)) ** (1.0 / r)
    agg = None
    for j, a in fields.items():
        w = 2.0 ** (j * s)
        if r == INF:
            cand = w * a
            agg = cand if agg is None else np.maximum(agg, cand)
        else:
            cand = (w * a) ** r
            agg = cand if agg is None else agg + cand
    if agg is None:
        return 0.0
    if r != INF:
        agg = agg ** (1.0 / r)
    return _morrey_of_array(agg ** q, q, phi)


def quark_norm(qlam: QuarkCoeffs, params: SpaceParams, rho: float = None) -> float:
    """sup_beta 2^{rho |beta|} seq_norm(lambda^beta)."""
    if rho is None:
        rho = qlam.rho
    best = 0.0
    for beta, fld in qlam.fields.items():
        best = max(best, 2.0 ** (rho * sum(beta)) * seq_norm(fld, params))
    return best


# ---------------------------------------------------------------------------
# quasi-triangle inequality probe

def min_triangle_check(f, g, norm_kind: str, params: SpaceParams,
                       bank: FilterBank = None) -> tuple[float, float]:
    """Returns (||f+g||^w, ||f||^w + ||g||^w) with w = min(1,q) for the
    Morrey norm and w = min(1,q,r) for the space norms; the inequality
    lhs <= rhs (up to rounding) is the quasi-triangle property."""
    q = params.q
    if norm_kind == "morrey":
        w = min(1.0, q)
        nf = morrey_norm(f, q, params.phi)
        ng = morrey_norm(g, q, params.phi)
        nfg = morrey_norm(f + g, q, params.phi)
    elif norm_kind == "space":
        w = params.w
        nf = space_norm(f, params, bank)
        ng = space_norm(g, params, bank)
        nfg = space_norm(f + g, params, bank)
    elif norm_kind == "seq":
        w = params.w
        nf = seq_norm(f, params)
        ng = seq_norm(g, params)
        nfg = seq_norm(f + g, params)
    else:
        raise ValueError(norm_kind)
    return nfg ** w, nf ** w + ng ** w
