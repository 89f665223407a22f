import math

import numpy as np
import pytest

from morreykit.dyadic import DyadicCube, cube_mask
from morreykit.decomp import (Atom, AtomSpec, MoleculeSpec, QuarkGen,
                              atomic_analyze, band_decay_profile,
                              fit_decay_slopes, make_atom, make_molecule,
                              quark_analyze, quark_synthesize, synthesize,
                              validate_atom, validate_molecule)
from morreykit.growth import SpaceParams, power
from morreykit.gridfn import (GridFunction, make_bank, random_bandlimited,
                              rychkov_pair)
from morreykit.norms import quark_norm


def test_atom_spec_validation():
    with pytest.raises(ValueError):
        AtomSpec(K=-1, L=0)
    with pytest.raises(ValueError):
        AtomSpec(K=1, L=-2)
    AtomSpec(K=0, L=-1)  # no moment condition is fine


def test_atom_spec_admissible():
    params = SpaceParams(q=0.5, r=2.0, s=0.25, phi=power(2.0), variant="N", n=1)
    spec = AtomSpec.admissible(params)
    assert spec.K == math.floor(1 + params.s)
    assert spec.L == math.floor(params.sigma_q - params.s)


def test_molecule_spec_needs_decay():
    with pytest.raises(ValueError):
        MoleculeSpec(K=1, L=-1, N=1.5).validate_for(1)
    MoleculeSpec(K=1, L=-1, N=2.5).validate_for(1)


def test_make_atom_passes_validator():
    G = 256
    for K, L, j, m in ((1, -1, 2, (1,)), (2, 0, 3, (5,)), (2, 1, 4, (9,))):
        spec = AtomSpec(K, L)
        a = make_atom(DyadicCube(j, m), spec, G, seed=3)
        rep = validate_atom(a, DyadicCube(j, m), spec)
        assert rep["pass"], rep


def test_indicator_is_not_an_atom():
    # chi_Q is supported right but has no derivative bound
    G = 128
    Q = DyadicCube(2, (1,))
    chi = GridFunction(1, cube_mask(Q, G).astype(np.complex128))
    rep = validate_atom(chi, Q, AtomSpec(K=1, L=-1))
    assert rep["support_ok"]
    assert not rep["deriv_ok"]


def test_scaled_atom_fails_derivative_bound():
    G = 128
    Q = DyadicCube(2, (1,))
    a = make_atom(Q, AtomSpec(1, 0), G, seed=0)
    rep = validate_atom(GridFunction(1, 1.5 * a.samples), Q, AtomSpec(1, 0))
    assert not rep["deriv_ok"]


def test_atom_moments_vanish():
    G = 256
    Q = DyadicCube(3, (2,))
    a = make_atom(Q, AtomSpec(2, 1), G, seed=7)
    rep = validate_atom(a, Q, AtomSpec(2, 1))
    assert rep["moment_ok"] and rep["moment_worst"] < 1e-10


def test_compact_atom_is_a_molecule():
    # compact support sits under the decay envelope once rescaled by its
    # worst value on 3Q: the support reaches 2^j d = 2, envelope (1+2)^{-N}
    G = 128
    N = 3.0
    Q = DyadicCube(2, (1,))
    a = make_atom(Q, AtomSpec(1, -1), G, seed=1)
    scaled = GridFunction(1, a.samples / 3.0 ** N)
    rep = validate_molecule(scaled, Q, MoleculeSpec(K=1, L=-1, N=N))
    assert rep["deriv_ok"]


def test_make_molecule_passes_validator():
    for n, G, j, m in ((1, 256, 3, (5,)), (2, 64, 2, (1, 3))):
        spec = MoleculeSpec(K=1, L=-1, N=n + 1.5)
        b = make_molecule(DyadicCube(j, m), spec, G, seed=2)
        rep = validate_molecule(b, DyadicCube(j, m), spec)
        assert rep["pass"], rep


def test_slow_decay_fails_stricter_envelope():
    # a profile built for decay order N fails validation at order N + 2
    G = 256
    Q = DyadicCube(3, (5,))
    b = make_molecule(Q, MoleculeSpec(K=1, L=-1, N=2.2), G, seed=0)
    rep = validate_molecule(b, Q, MoleculeSpec(K=1, L=-1, N=4.2))
    assert not rep["deriv_ok"]


def test_atomic_analyze_zero_input():
    G = 64
    pair = rychkov_pair(1, n=1, G=G)
    lam, atoms = atomic_analyze(GridFunction(1, np.zeros(G)), pair)
    for j in lam.level_list():
        assert np.abs(np.atleast_1d(lam.levels[j])).max() < 1e-200


def test_atomic_round_trip():
    for n, G in ((1, 128), (2, 32)):
        pair = rychkov_pair(1, n=n, G=G)
        f = random_bandlimited(n, G, G // 8, seed=5)
        lam, atoms = atomic_analyze(f, pair)
        rec = synthesize(lam, atoms, G)
        assert (rec - f).l2() / f.l2() < 1e-12


def test_atomic_analyze_grid_mismatch():
    pair = rychkov_pair(1, n=1, G=64)
    with pytest.raises(ValueError):
        atomic_analyze(random_bandlimited(1, 128, 8, seed=0), pair)


def test_synthesize_scaling():
    G = 64
    pair = rychkov_pair(0, n=1, G=G)
    f = random_bandlimited(1, G, 6, seed=6)
    lam, atoms = atomic_analyze(f, pair)
    rec1 = synthesize(lam, atoms, G)
    rec3 = synthesize(lam.scaled(3.0), atoms, G)
    assert np.allclose(rec3.samples, 3.0 * rec1.samples)


def test_analyzed_atoms_validate():
    G = 128
    L = 1
    pair = rychkov_pair(L, n=1, G=G)
    f = random_bandlimited(1, G, 10, seed=8)
    lam, atoms = atomic_analyze(f, pair)
    spec = AtomSpec(K=max(1, L), L=L, deriv_tol=1e-6)
    checked = 0
    for (j, m), atom in atoms.items():
        if j < 1 or abs(lam.get(j, m)) < 1e-8:
            continue
        rep = validate_atom(atom.to_grid(G, 1), DyadicCube(j, m), spec)
        assert rep["pass"], (j, m, rep)
        checked += 1
    assert checked > 10


def test_fit_decay_slopes_synthetic():
    # profile 2^{a nu} above and 2^{b nu} below the atom level
    j = 4
    profile = {nu: 2.0 ** (-3.0 * nu) for nu in range(5, 9)}
    profile.update({nu: 2.0 ** (1.5 * nu) for nu in range(1, 4)})
    hi, lo = fit_decay_slopes(profile, j)
    assert hi == pytest.approx(-3.0)
    assert lo == pytest.approx(1.5)
    # fewer than two points on a side -> 0 by convention
    hi, lo = fit_decay_slopes({5: 1.0}, 4)
    assert hi == 0.0 and lo == 0.0


def test_band_decay_profile_smoke():
    G = 128
    Q = DyadicCube(3, (2,))
    a = make_atom(Q, AtomSpec(1, 0), G, seed=9)
    bank = make_bank(1, G)
    prof = band_decay_profile(a, Q, bank, P=1.0)
    assert set(prof) == set(j for j in bank.levels() if j >= 1)
    assert all(v >= 0 for v in prof.values())


def test_quark_partition_of_unity():
    gen = QuarkGen(n=1)
    assert gen.partition_residual() < 1e-12
    assert gen.rho == 1
    assert gen.support_dilate == pytest.approx(3.0)


def test_quark_round_trip_improves_with_cutoff():
    G = 512
    gen = QuarkGen(n=1)
    bank = make_bank(1, G)
    f = random_bandlimited(1, G, 24, seed=10)
    prev = np.inf
    for cutoff in (0, 1, 2):
        qlam = quark_analyze(f, gen, bank, cutoff)
        rec = quark_synthesize(qlam, gen, G)
        resid = (rec - f).l2() / f.l2()
        assert resid < prev
        prev = resid
    assert prev < 5e-3


def test_quark_rejects_too_fine_bands():
    G = 64
    gen = QuarkGen(n=1)
    bank = make_bank(1, G)
    f = random_bandlimited(1, G, 24, seed=11)  # energy beyond the lattice
    with pytest.raises(ValueError):
        quark_analyze(f, gen, bank, 1)


def test_quark_norm_resolution_invariant():
    # band-limited input: the quark coefficients are G-independent
    gen = QuarkGen(n=1)
    params = SpaceParams(q=1.0, r=2.0, s=1.0, phi=power(2.0), variant="N", n=1)
    vals = []
    for G in (512, 1024):
        f = random_bandlimited(1, G, 24, seed=12)
        qlam = quark_analyze(f, gen, make_bank(1, G), 2)
        vals.append(quark_norm(qlam, params))
    assert vals[0] == pytest.approx(vals[1], rel=1e-9)


def test_atom_patch_to_grid_consistency():
    G = 64
    pair = rychkov_pair(1, n=1, G=G)
    f = random_bandlimited(1, G, 6, seed=13)
    lam, atoms = atomic_analyze(f, pair)
    total = np.zeros(G, dtype=np.complex128)
    for (j, m), atom in atoms.items():
        total += lam.get(j, m) * atom.to_grid(G, 1).samples
    assert np.abs(total - f.samples).max() < 1e-10 * f.linf()
