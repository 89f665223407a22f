"""Atoms, molecules and quarks: validators, analysis, synthesis.

Atoms live on patches: an atom at cube (j, m) is stored on the 4c-cell
window (c = grid cells per cube side) starting one cube side before the
cube, which contains its full support 3Q.  Analysis computes

    gamma_jm = phi_j * (chi_{Q_jm} . (psi_j * f))

with the reproducing pair, so summing all gamma over (j, m) telescopes back
to f exactly (Fubini split of the reproducing identity).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .dyadic import DyadicCube, cube_mask, dilate
from .gridfn import (FilterBank, GridFunction, RychkovPair, band, smoothstep7,
                     _bump_axis, _multi_indices, centered_axis, kappa_profile,
                     wavenumbers, TWO_PI)
from .norms import CoeffField, QuarkCoeffs

TINY = 1e-300


# ---------------------------------------------------------------------------
# specs

@dataclass
class AtomSpec:
    K: int
    L: int  # -1 allowed: no moment condition
    support_dilate: float = 3.0
    deriv_tol: float = 1e-6
    moment_tol: float = 1e-8

    def __post_init__(self):
        if self.K < 0 or self.L < -1:
            raise ValueError("need K >= 0 and L >= -1")

    @staticmethod
    def admissible(params) -> "AtomSpec":
        """Smallest (K, L) the synthesis theorem allows for the given space:
        K >= [1+s]_+ and L >= max(-1, [sigma - s]) with sigma = sigma_q for
        the N-variant and sigma_qr for the E-variant."""
        K = max(0, math.floor(1 + params.s))
        sigma = params.sigma_q if params.variant == "N" else params.sigma_qr
        L = max(-1, math.floor(sigma - params.s))
        return AtomSpec(K=K, L=L)


@dataclass
class MoleculeSpec:
    K: int
    L: int
    N: float  # decay order, N > K + n
    deriv_tol: float = 1e-6
    moment_tol: float = 1e-8

    def validate_for(self, n: int):
        if self.N <= self.K + n:
            raise ValueError("molecule decay must satisfy N > K + n")


# ---------------------------------------------------------------------------
# atoms as patches

@dataclass
class Atom:
    j: int
    m: tuple
    patch: np.ndarray  # (4c,)*n for j >= 1; full grid for j <= 0
    origin: tuple  # cell index of patch[0,...,0] on the full grid

    def to_grid(self, G: int, n: int) -> GridFunction:
        out = np.zeros((G,) * n, dtype=np.complex128)
        idx = [np.arange(o, o + s) % G for o, s in zip(self.origin, self.patch.shape)]
        out[np.ix_(*idx)] += self.patch
        return GridFunction(n, out)


def add_patch(accum: np.ndarray, atom: Atom, weight=1.0):
    G = accum.shape[0]
    idx = [np.arange(o, o + s) % G for o, s in zip(atom.origin, atom.patch.shape)]
    accum[np.ix_(*idx)] += weight * atom.patch


# ---------------------------------------------------------------------------
# validators

def _spectral_derivative(samples: np.ndarray, alpha) -> np.ndarray:
    n = samples.ndim
    G = samples.shape[0]
    spec = np.fft.fftn(samples)
    k = wavenumbers(G)
    for ax, a in enumerate(alpha):
        if a:
            shape = [1] * n
            shape[ax] = G
            spec = spec * (2j * math.pi * k).reshape(shape) ** a
    return np.fft.ifftn(spec)


def _centered_on_cube(f: GridFunction, Q: DyadicCube) -> np.ndarray:
    """Roll samples so the cube center sits at index 0, where the wrapped
    coordinate is 0 and polynomial across the seam; moments are then read
    in unwrapped cube-centered coordinates (exact while 3Q fits the torus)."""
    G = f.G
    shift = [-int(round(c * G)) for c in Q.center]
    return np.roll(f.samples, shift, axis=tuple(range(f.n)))


def validate_atom(a: GridFunction, Q: DyadicCube, spec: AtomSpec) -> dict:
    """Check the three atom conditions; returns a per-condition report.

    (1) support inside dilate(Q, d);
    (2) 2^{-j|alpha|} |d^alpha a| <= 1 for |alpha| <= K (spectral derivatives,
        tolerance 1 + deriv_tol);
    (3) discrete moments vanish for |beta| <= L when j >= 1 (grid Riemann
        sums, tolerance moment_tol); j = 0 atoms skip this."""
    n, G = a.n, a.G
    j = Q.j
    center, half = dilate(Q, spec.support_dilate)
    mask = _support_mask(center, half, G, n)
    amax = float(np.abs(a.samples).max())
    outside = float(np.abs(a.samples[~mask]).max()) if (~mask).any() else 0.0
    support_ok = outside <= 1e-10 * max(amax, TINY)

    worst_deriv = 0.0
    for alpha in _multi_indices(n, spec.K):
        d = _spectral_derivative(a.samples, alpha)
        worst_deriv = max(worst_deriv,
                          2.0 ** (-j * sum(alpha)) * float(np.abs(d).max()))
    deriv_ok = worst_deriv <= 1.0 + spec.deriv_tol

    moment_worst = 0.0
    if j >= 1 and spec.L >= 0:
        rolled = _centered_on_cube(a, Q)
        x = centered_axis(G)
        h = 1.0 / G
        for beta in _multi_indices(n, spec.L):
            m = rolled
            for ax, b in enumerate(beta):
                if b:
                    shape = [1] * n
                    shape[ax] = G
                    m = m * (x ** b).reshape(shape)
            moment_worst = max(moment_worst, abs(complex(m.sum() * h ** n)))
    moment_ok = moment_worst <= spec.moment_tol * max(amax, TINY) * Q.volume \
        or moment_worst <= spec.moment_tol

    return {
        "support_ok": support_ok,
        "support_leak": outside,
        "deriv_ok": deriv_ok,
        "deriv_sup": worst_deriv,
        "moment_ok": moment_ok,
        "moment_worst": moment_worst,
        "pass": support_ok and deriv_ok and moment_ok,
    }


def _support_mask(center, half, G, n) -> np.ndarray:
    from .dyadic import box_mask
    return box_mask(center, half, G, n)


def validate_molecule(b: GridFunction, Q: DyadicCube, spec: MoleculeSpec) -> dict:
    """Molecule check: |d^alpha b(x)| <= 2^{|alpha| j} (1 + 2^j d(x, corner))^{-N}
    pointwise on the torus (compact support replaced by the decay envelope)."""
    spec.validate_for(b.n)
    n, G = b.n, b.G
    j = Q.j
    # torus distance from the cube corner 2^-j m
    axes = []
    for mi, _ in zip(Q.m, range(n)):
        x = coord = np.arange(G) / G
        d = np.abs(((coord - mi * Q.side) + 0.5) % 1.0 - 0.5)
        axes.append(d ** 2)
    r2 = axes[0]
    for d2 in axes[1:]:
        r2 = np.add.outer(r2, d2)
    envelope = (1.0 + 2.0 ** j * np.sqrt(r2)) ** (-spec.N)

    worst = 0.0
    for alpha in _multi_indices(n, spec.K):
        d = np.abs(_spectral_derivative(b.samples, alpha))
        ratio = d / (2.0 ** (j * sum(alpha)) * envelope)
        worst = max(worst, float(ratio.max()))
    deriv_ok = worst <= 1.0 + spec.deriv_tol

    moment_worst = 0.0
    if j >= 1 and spec.L >= 0:
        rolled = _centered_on_cube(b, Q)
        x = centered_axis(G)
        h = 1.0 / G
        for beta in _multi_indices(n, spec.L):
            m = rolled
            for ax, bb in enumerate(beta):
                if bb:
                    shape = [1] * n
                    shape[ax] = G
                    m = m * (x ** bb).reshape(shape)
            moment_worst = max(moment_worst, abs(complex(m.sum() * h ** n)))
    moment_ok = moment_worst <= spec.moment_tol

    return {"deriv_ok": deriv_ok, "deriv_sup": worst,
            "moment_ok": moment_ok, "moment_worst": moment_worst,
            "pass": deriv_ok and moment_ok}


# ---------------------------------------------------------------------------
# analysis: f -> coefficients + atoms

def _patch_kernel(kernel_full: np.ndarray, size: int) -> np.ndarray:
    """Crop a full-grid convolution kernel (centered at index 0) to a
    size-cell circular window, preserving the wrap layout."""
    n = kernel_full.ndim
    G = kernel_full.shape[0]
    half = size // 2
    idx = [np.concatenate([np.arange(0, half), np.arange(G - (size - half), G)]) % G
           for _ in range(n)]
    out = kernel_full[np.ix_(*idx)]
    # reorder into wrap layout of the small window: indices 0..half-1 stay,
    # the negative offsets go to the tail
    return out


def atomic_analyze(f: GridFunction, pair: RychkovPair, K_norm: int = None):
    """Split f into atoms: returns (lam: CoeffField, atoms: {(j,m): Atom}).

    lam_{jm} = max(sup_{|alpha| <= K} 2^{-j|alpha|} ||d^alpha gamma_jm||_inf,
    tiny) with K = max(1, L) unless overridden; derivatives are spectral,
    matching validate_atom.  Summing lam_jm * a_jm over everything
    reproduces f to FFT precision."""
    n, G = f.n, f.G
    if pair.G != G or pair.n != n:
        raise ValueError("pair was built for a different grid")
    if K_norm is None:
        K_norm = max(1, pair.L)
    alphas = list(_multi_indices(n, K_norm))
    lam_levels = {}
    atoms = {}
    for j in pair.levels:
        U = pair.conv_psi(f, j).samples
        if j <= 0:
            gamma = GridFunction.from_spectrum(
                n, GridFunction(n, U).spectrum() * pair.phi_spec[j]).samples
            lam = TINY
            for alpha in alphas:
                d = _spectral_derivative(gamma, alpha)
                lam = max(lam, 2.0 ** (-j * sum(alpha)) * float(np.abs(d).max()))
            lam_levels.setdefault(j, {})[(0,) * n] = lam
            atoms[(j, (0,) * n)] = Atom(j, (0,) * n, gamma / lam, (0,) * n)
            continue
        c = G >> j
        if pair.phi_half_cells[j] > c:
            raise ValueError(
                f"kernel support at level {j} exceeds 3Q; lower L or refine G")
        kernels = _derivative_kernels(pair, j, alphas)
        stacks = _level_analysis(U, kernels, c)
        side = 1 << j
        patch_axes = tuple(range(n, 2 * n))
        lam = np.full((side,) * n, TINY)
        for alpha, st in zip(alphas, stacks):
            cand = 2.0 ** (-j * sum(alpha)) * np.abs(st).max(axis=patch_axes)
            lam = np.maximum(lam, cand)
        gam = stacks[0]
        for m in itertools.product(range(side), repeat=n):
            origin = tuple((mi * c - c) % G for mi in m)
            atoms[(j, m)] = Atom(j, m, gam[m] / lam[m], origin)
        lam_levels[j] = lam
    levels = {}
    for j, v in lam_levels.items():
        if isinstance(v, dict):
            v = v[(0,) * n] if j < 0 else np.full((1,) * n, v[(0,) * n])
        levels[j] = v
    return CoeffField(n, levels), atoms


def _derivative_kernels(pair: RychkovPair, j: int, alphas) -> list:
    """Full-grid spatial kernels of d^alpha phi_j via spectral
    differentiation (alpha = 0 gives phi_j itself, exactly compact)."""
    n, G = pair.n, pair.G
    k = wavenumbers(G)
    out = []
    for alpha in alphas:
        spec = pair.phi_spec[j]
        for ax, a in enumerate(alpha):
            if a:
                shape = [1] * n
                shape[ax] = G
                spec = spec * (2j * math.pi * k).reshape(shape) ** a
        out.append(np.fft.ifftn(spec * G ** n))
    return out


def _level_analysis(U: np.ndarray, kernels: list, c: int) -> list:
    """All masked convolutions of one level at once, on 4c patches.

    Returns, per kernel, an array indexed by the cube multi-index m whose
    entries are the (4c,)*n patches of kernel * (chi_{Q_m} U) in patch
    coordinates (origin = cube corner minus one cube side).  Exact as long
    as the kernel support half-width stays below 2c cells."""
    n = U.ndim
    G = U.shape[0]
    side = G // c
    size = 4 * c
    # blocks of U per cube, zero-extended into the 4c patch at offset c
    shape = []
    for _ in range(n):
        shape += [side, c]
    blk = U.reshape(shape)
    order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    blk = blk.transpose(order)
    ext = np.zeros((side,) * n + (size,) * n, dtype=np.complex128)
    sl = (slice(None),) * n + (slice(c, 2 * c),) * n
    ext[sl] = blk
    axes = tuple(range(n, 2 * n))
    ext_hat = np.fft.fftn(ext, axes=axes)
    out = []
    hn = G ** (-n)  # quadrature weight of the sample-space convolution
    for kernel in kernels:
        kern = _patch_kernel(kernel, size)
        conv = np.fft.ifftn(ext_hat * np.fft.fftn(kern)[(None,) * n],
                            axes=axes) * hn
        out.append(conv)
    return out


def synthesize(lam: CoeffField, atoms: dict, G: int) -> GridFunction:
    """f = sum_j sum_m lam_jm a_jm, increasing j then lexicographic m."""
    n = lam.n
    out = np.zeros((G,) * n, dtype=np.complex128)
    for j in lam.level_list():
        v = lam.levels[j]
        if j < 0 or np.isscalar(v) or getattr(v, "shape", None) == ():
            key = (j, (0,) * n)
            if key not in atoms:
                if v != 0:
                    raise KeyError(f"missing atom for level {j}")
                continue
            add_patch(out, atoms[key], v)
            continue
        for m in itertools.product(range(v.shape[0]), repeat=n):
            w = v[m]
            if w == 0:
                continue
            key = (j, m)
            if key not in atoms:
                raise KeyError(f"missing atom for coefficient {key}")
            add_patch(out, atoms[key], w)
    return GridFunction(n, out)


# ---------------------------------------------------------------------------
# constructed atom dictionaries (for synthesis-direction tests)

def make_atom(Q: DyadicCube, spec: AtomSpec, G: int, seed: int = 0) -> GridFunction:
    """Seeded smooth (K, L)-atom on 3Q: bump times a random low-order
    polynomial, moments removed by projection, then normalized so the
    derivative sup equals 1."""
    n = Q.n
    rng = np.random.default_rng(seed)
    j = Q.j
    x = centered_axis(G)
    # coordinates centered on the cube, units of the cube side
    t_axes = []
    for ci in Q.center:
        d = ((x + 0.5 - ci) % 1.0) - 0.5
        t_axes.append(d / Q.side)
    window_ax = [_bump_axis(t / 1.4) for t in t_axes]
    window = window_ax[0]
    for wa in window_ax[1:]:
        window = np.multiply.outer(window, wa)
    mesh = np.meshgrid(*t_axes, indexing="ij") if n > 1 else \
        [t_axes[0]]
    poly = np.zeros((G,) * n)
    for beta in _multi_indices(n, max(spec.L + 1, 2)):
        coef = rng.standard_normal()
        term = np.ones((G,) * n)
        for ax, b in enumerate(beta):
            if b:
                shape = [1] * n
                shape[ax] = G
                term = term * (t_axes[ax] ** b).reshape(shape)
        poly += coef * term
    a = window * poly

    if spec.L >= 0 and j >= 1:
        a = _remove_moments(a, window, t_axes, spec.L)

    # normalize the derivative sup to 1
    worst = 0.0
    for alpha in _multi_indices(n, spec.K):
        d = _spectral_derivative(a, alpha)
        worst = max(worst, 2.0 ** (-j * sum(alpha)) * float(np.abs(d).max()))
    if worst == 0:
        raise ValueError("degenerate atom draw")
    return GridFunction(n, a / worst)


def _remove_moments(a: np.ndarray, window: np.ndarray, t_axes, L: int) -> np.ndarray:
    """Project out all moments |beta| <= L using window-times-monomial
    corrections supported in the same box."""
    n = a.ndim
    betas = list(_multi_indices(n, L))
    basis = []
    for beta in betas:
        term = window.astype(np.complex128)
        for ax, b in enumerate(beta):
            if b:
                shape = [1] * n
                shape[ax] = a.shape[0]
                term = term * (t_axes[ax] ** b).reshape(shape)
        basis.append(term)

    def mom(g, beta):
        m = g
        for ax, b in enumerate(beta):
            if b:
                shape = [1] * n
                shape[ax] = a.shape[0]
                m = m * (t_axes[ax] ** b).reshape(shape)
        return complex(m.sum())

    M = np.array([[mom(bf, beta) for bf in basis] for beta in betas])
    rhs = np.array([mom(a.astype(np.complex128), beta) for beta in betas])
    coef = np.linalg.solve(M, rhs)
    out = a.astype(np.complex128)
    for cc, bf in zip(coef, basis):
        out = out - cc * bf
    return out


def make_molecule(Q: DyadicCube, spec: MoleculeSpec, G: int, seed: int = 0) -> GridFunction:
    """Seeded molecule with genuine power-law tails.

    sin(pi w)/pi smoothly periodizes the distance (no seam kink) and
    (1 + r^2)^{-N/2} keeps the center smooth while matching the prescribed
    tail rate; a gentle unit-scale modulation randomizes the draw without
    inflating far-field derivatives.  The tail is what makes the coarse-band
    rate of the two-regime bound measurable; a faster (e.g. Gaussian)
    envelope would satisfy the definition but never exhibit the N-rate."""
    spec.validate_for(Q.n)
    n = Q.n
    rng = np.random.default_rng(seed)
    x = centered_axis(G)
    s_axes = [np.sin(math.pi * (x - ci)) / (math.pi * Q.side)
              for ci in Q.center]
    r2 = s_axes[0] ** 2
    for t in s_axes[1:]:
        r2 = np.add.outer(r2, t ** 2)
    mod = np.ones((G,) * n)
    for ax in range(n):
        freq = rng.integers(1, 4)
        wave = 1.0 + 0.3 * np.cos(2.0 * math.pi * freq * x
                                  + rng.uniform(0, 2 * math.pi))
        shape = [1] * n
        shape[ax] = G
        mod = mod * wave.reshape(shape)
    base = (1.0 + r2) ** (-spec.N / 2.0) * mod
    if spec.L >= 0 and Q.j >= 1:
        # moment removal against a compactly supported window on 3Q
        t_axes = []
        for ci in Q.center:
            d = ((x + 0.5 - ci) % 1.0) - 0.5
            t_axes.append(d / Q.side)
        window_ax = [_bump_axis(t / 1.4) for t in t_axes]
        window = window_ax[0]
        for wa in window_ax[1:]:
            window = np.multiply.outer(window, wa)
        base = _remove_moments(base, window, t_axes, spec.L)
    g = GridFunction(n, base)
    report = validate_molecule(g, Q, MoleculeSpec(spec.K, -1, spec.N))
    scale = report["deriv_sup"]
    return GridFunction(n, base / (scale * (1.0 + 1e-9)))


# ---------------------------------------------------------------------------
# band decay measurement

def band_decay_profile(a: GridFunction, Q: DyadicCube, bank: FilterBank,
                       P: float, maximal_field: np.ndarray = None) -> dict:
    """sup_x |tau_nu(D) a(x)| / M[chi_Q](x)^{P/n} per level nu."""
    from .gridfn import hl_maximal
    n, G = a.n, a.G
    if maximal_field is None:
        chi = GridFunction(n, cube_mask(Q, G).astype(np.complex128))
        maximal_field = hl_maximal(chi).samples.real
    env = maximal_field ** (P / n)
    out = {}
    for nu in bank.levels():
        if nu == 0 and not bank.homogeneous:
            continue
        bnu = np.abs(band(a, bank, nu).samples)
        out[nu] = float((bnu / env).max())
    return out


def fit_decay_slopes(profile: dict, j: int) -> tuple[float, float]:
    """log2-linear slopes of the profile above and below the atom level."""
    his = sorted(nu for nu in profile if nu > j and profile[nu] > 0)
    los = sorted(nu for nu in profile if nu < j and profile[nu] > 0)

    def fit(nus):
        if len(nus) < 2:
            return 0.0
        ys = [math.log2(profile[nu]) for nu in nus]
        A = np.vstack([nus, np.ones(len(nus))]).T
        slope, _ = np.linalg.lstsq(A, np.array(ys), rcond=None)[0]
        return float(slope)

    return fit(his), fit(los)


# ---------------------------------------------------------------------------
# quarks

@dataclass
class QuarkGen:
    """Separable partition-of-unity window for quarks.

    psi1(x) = s(x + 1/2) - s(x - 1/2) with s a unit-width smooth step, so
    sum_m psi1(x - m) telescopes to 1 exactly.  supp psi1 = (-1, 1), hence
    R = 0, rho = [R + 1] = 1, and supp of every quark is 3Q_{nu m}."""
    n: int = 1
    R: float = 0.0
    rho: int = 1

    @property
    def support_dilate(self) -> float:
        # supp psi subset Q(2^R); the quark at (nu, m) covers the cube dilated
        # by d = 2^(R+1) + 1
        return 2.0 ** (self.R + 1) + 1.0

    def psi1(self, t):
        t = np.asarray(t, dtype=float)
        return smoothstep7(t + 1.0) - smoothstep7(t)

    def partition_residual(self, samples: int = 4096) -> float:
        x = np.linspace(-0.5, 0.5, samples, endpoint=False)
        total = sum(self.psi1(x - m) for m in range(-2, 3))
        return float(np.max(np.abs(total - 1.0)))

    def quark_axis(self, beta_i: int, t):
        return np.asarray(t, dtype=float) ** beta_i * self.psi1(t)

    def quark_field(self, beta, nu_q: int, lam_level: np.ndarray, G: int) -> np.ndarray:
        """sum_l lam_l (beta qu)_{nu_q, l} sampled on the G-grid via the comb
        convolution (requires 2^nu_q | G)."""
        n = self.n
        S = 1 << nu_q
        if G % S:
            raise ValueError("quark level finer than the grid")
        step = G // S
        x = centered_axis(G)
        # kernel W(u) = prod (2^nu_q u_i)^beta_i psi1(2^nu_q u_i), periodized
        ker_ax = []
        for b in beta:
            t = 2.0 ** nu_q * x
            ax = np.zeros(G)
            for sft in range(-1, 2):
                ax += self.quark_axis(b, t + sft * 2.0 ** nu_q)
            ker_ax.append(ax)
        ker = ker_ax[0]
        for ka in ker_ax[1:]:
            ker = np.multiply.outer(ker, ka)
        comb = np.zeros((G,) * n, dtype=np.complex128)
        comb[(slice(None, None, step),) * n] = lam_level
        # ker is already in wrap layout: centered_axis puts u = 0 at index 0
        return np.fft.ifftn(np.fft.fftn(comb) * np.fft.fftn(ker))


SAMPLE_GAP = 3  # band nu is sampled on the 2^(nu+SAMPLE_GAP) lattice


def quark_analyze(f: GridFunction, gen: QuarkGen, bank: FilterBank,
                  beta_cutoff: int) -> QuarkCoeffs:
    """Taylor-expansion quark coefficients.

    Band nu of the partition bank is reconstructed exactly from its samples
    on the 2^-(nu+3) lattice (the torus Nyquist factor is 2 pi, not the
    factor 2 of the real-line geometry, hence the gap of 3 octaves); the
    sampling kernel is then Taylor-expanded against the partition window at
    the finer level nu_s + rho, giving

        lam^beta_{nu_s+rho, l} = (b^|beta| / beta!) sum_m Lambda_{nu m}
                                  d^beta g(b l - a m)

    with a = 2^-nu_s, b = 2^-(nu_s+rho)."""
    n, G = f.n, f.G
    J = G.bit_length() - 1
    spec = f.spectrum()
    fields = {beta: {} for beta in _multi_indices(n, beta_cutoff)}
    lam_norms = {}
    for nu in bank.levels():
        bnu = band(f, bank, nu)
        if bnu.linf() <= 1e-14 * max(f.linf(), TINY):
            continue
        nu_s = nu + SAMPLE_GAP
        if nu_s + gen.rho > J:
            raise ValueError(
                f"band {nu} carries energy but level {nu_s + gen.rho} exceeds the grid")
        S = 1 << nu_s
        step = G // S
        Lam = bnu.samples[(slice(None, None, step),) * n]
        lam_norms[nu] = float(np.abs(Lam).max())
        Sf = S * (1 << gen.rho)
        # kernel derivative samples on the Sf lattice (independent of G)
        kf = wavenumbers(Sf)
        kwin_ax = kf
        u = np.abs(kf)
        for _ in range(n - 1):
            u = np.maximum.outer(u, np.abs(kf))
        window = kappa_profile(TWO_PI * u / S)
        b_spacing = 1.0 / Sf
        for beta in fields:
            wspec = window.astype(np.complex128)
            for ax, bb in enumerate(beta):
                if bb:
                    shape = [1] * n
                    shape[ax] = Sf
                    wspec = wspec * (2j * math.pi * kf).reshape(shape) ** bb
            Dg = np.fft.ifftn(wspec * Sf ** n) / S ** n  # kernel has 1/S^n weight
            # lam^beta(l) = scale * sum_m Lam(m) Dg(l - 2^rho m)
            comb = np.zeros((Sf,) * n, dtype=np.complex128)
            comb[(slice(None, None, 1 << gen.rho),) * n] = Lam
            conv = np.fft.ifftn(np.fft.fftn(comb) * np.fft.fftn(Dg))
            log_scale = sum(beta) * math.log(b_spacing) \
                - sum(math.lgamma(bb + 1) for bb in beta)
            fields[beta][nu_s + gen.rho] = conv * math.exp(log_scale)
    qfields = {}
    for beta, levels in fields.items():
        if levels:
            qfields[beta] = CoeffField(n, levels)
    return QuarkCoeffs(n=n, beta_cutoff=beta_cutoff, rho=gen.rho,
                       fields=qfields,
                       meta={"R": gen.R, "lam_norms": lam_norms,
                             "sample_gap": SAMPLE_GAP})


def quark_synthesize(qlam: QuarkCoeffs, gen: QuarkGen, G: int) -> GridFunction:
    """sum_beta sum_nu sum_m lam^beta_{nu m} (beta qu)_{nu m}, beta-major."""
    n = qlam.n
    out = np.zeros((G,) * n, dtype=np.complex128)
    for beta in qlam.betas():
        fld = qlam.fields[beta]
        for nu_q in fld.level_list():
            out += gen.quark_field(beta, nu_q, fld.levels[nu_q], G)
    return GridFunction(n, out)
