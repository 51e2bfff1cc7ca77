"""Tests for symmetry-resolved diagonalization and spectral observables.

Dense oracles run on the (1, 2) surface patch (5 links, 32-dim) where the
full Hamiltonian matrix is cheap to build directly from Pauli matrices.
"""

import math

import numpy as np
import pytest

from gaugemem import PauliOp
from gaugemem.codes import surface_code
from gaugemem.errors import (
    DataQualityError,
    ResourceRefusalError,
    ValidationError,
)
from gaugemem.hamiltonians import (
    TermList,
    boundary_perturbation,
    surface_field_model,
    surface_symmetries,
)
from gaugemem.pauli import apply_pauli
from gaugemem.spectral import (
    GOE_MEAN_RATIO,
    POISSON_MEAN_RATIO,
    Sector,
    entanglement_entropy,
    goe_ratio_density,
    max_pairing_gap,
    mean_spacing_ratio,
    page_entropy,
    poisson_ratio_density,
    register_bipartition,
    ratio_histogram,
    require_memory,
    spacing_ratios,
    spectrum,
)


def dense(terms: TermList) -> np.ndarray:
    dim = 2 ** terms.n
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, op in terms:
        out += coeff * op.to_matrix()
    out += terms.offset * np.eye(dim)
    return out


@pytest.fixture(scope="module")
def patch12():
    return surface_code(1, 2)


@pytest.fixture(scope="module")
def model12(patch12):
    return surface_field_model(patch12, 0.9, 1.1, 0.4, 0.6)


@pytest.fixture(scope="module")
def strings12(patch12):
    syms = surface_symmetries(patch12)
    return [syms["global_x"], syms["global_z"]]


# ---------------------------------------------------------------------------
# sectors
# ---------------------------------------------------------------------------


def test_full_space_sector_matches_dense(model12):
    sector = Sector(5, [], [])
    assert sector.dim == 32
    mat = sector.matrix(model12)
    assert np.allclose(mat, dense(model12), atol=1e-13)


def test_sector_blocks_reassemble_full_spectrum(model12, strings12, patch12):
    logical_z = patch12.logical_pairs[0][1]
    syms = strings12 + [logical_z]
    full = np.sort(np.linalg.eigvalsh(dense(model12)))
    collected = []
    for bits in np.ndindex(2, 2, 2):
        sector = Sector(5, syms, list(bits))
        assert sector.dim == 4
        collected.append(spectrum(sector.matrix(model12)))
    merged = np.sort(np.concatenate(collected))
    assert np.allclose(merged, full, atol=1e-10)


def test_sector_frame_maps_symmetries_to_z(strings12):
    sector = Sector(5, strings12, [0, 1])
    for target, sym in zip(sector.targets, sector.symmetries):
        rot = sector.circuit.conjugate(sym)
        assert rot == PauliOp.single(5, target, "Z")


def test_sector_rejects_nonpreserving_terms(patch12, strings12):
    sector = Sector(5, strings12, [0, 0])
    with pytest.raises(ValidationError, match="does not preserve"):
        sector.pack_terms(boundary_perturbation(patch12, 0.1))


def test_sector_rejects_wrong_width(model12, strings12):
    sector = Sector(5, strings12, [0, 0])
    with pytest.raises(ValidationError):
        sector.pack_terms(TermList(4, [(1.0, PauliOp.from_label("XIII"))]))
    with pytest.raises(ValidationError):
        Sector(5, strings12, [0])


def test_eigenvectors_map_back_to_physical_eigenstates(model12, strings12):
    h_full = dense(model12)
    for bits in ([0, 0], [1, 0], [0, 1], [1, 1]):
        sector = Sector(5, strings12, bits)
        evals, evecs = spectrum(sector.matrix(model12), vectors=True)
        psi = sector.to_physical(evecs[:, 0])
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
        # physical eigenstate of the full Hamiltonian
        assert np.linalg.norm(h_full @ psi - evals[0] * psi) < 1e-10
        # carries the requested symmetry eigenvalues
        for sym, bit in zip(strings12, bits):
            expect = -1.0 if bit else 1.0
            assert np.allclose(apply_pauli(sym, psi), expect * psi, atol=1e-12)
        # restriction inverts the embedding up to global phase
        back = sector.restrict(psi)
        overlap = np.vdot(evecs[:, 0], back)
        assert abs(abs(overlap) - 1.0) < 1e-12


def test_packed_apply_matches_matrix(model12, strings12):
    sector = Sector(5, strings12, [0, 1])
    packed = sector.pack_terms(model12)
    mat = packed.matrix()
    rng = np.random.default_rng(3)
    vec = rng.normal(size=sector.dim) + 1j * rng.normal(size=sector.dim)
    assert np.allclose(packed.apply(vec), mat @ vec, atol=1e-12)
    cols = rng.normal(size=(sector.dim, 3))
    assert np.allclose(packed.apply(cols), mat @ cols, atol=1e-12)


def test_sector_offset_shifts_spectrum(model12):
    sector = Sector(5, [], [])
    shifted = TermList(5, model12.terms, offset=2.5)
    base = spectrum(sector.matrix(model12))
    moved = spectrum(sector.matrix(shifted))
    assert np.allclose(moved, base + 2.5, atol=1e-12)


def test_require_memory_refuses_absurd_allocations():
    require_memory(1024)
    with pytest.raises(ResourceRefusalError):
        require_memory(1e18)


# ---------------------------------------------------------------------------
# level statistics
# ---------------------------------------------------------------------------


def test_poisson_spectrum_mean_ratio():
    rng = np.random.default_rng(11)
    evals = np.cumsum(rng.exponential(size=20001))
    rbar = mean_spacing_ratio(evals)
    assert abs(rbar - POISSON_MEAN_RATIO) < 0.01


def test_goe_matrix_mean_ratio():
    rng = np.random.default_rng(12)
    a = rng.normal(size=(2000, 2000))
    evals = np.linalg.eigvalsh((a + a.T) / 2.0)
    rbar = mean_spacing_ratio(evals)
    assert abs(rbar - GOE_MEAN_RATIO) < 0.02


def test_reference_densities_normalize_to_their_means():
    r = np.linspace(0.0, 1.0, 20001)
    for density, mean in (
        (goe_ratio_density, GOE_MEAN_RATIO),
        (poisson_ratio_density, POISSON_MEAN_RATIO),
    ):
        p = density(r)
        assert np.trapezoid(p, r) == pytest.approx(1.0, abs=1e-4)
        assert np.trapezoid(r * p, r) == pytest.approx(mean, abs=1e-3)


def test_ratio_histogram_is_a_density():
    rng = np.random.default_rng(4)
    edges, density = ratio_histogram(rng.uniform(size=5000))
    assert len(edges) == 51 and len(density) == 50
    widths = np.diff(edges)
    assert (density * widths).sum() == pytest.approx(1.0)


def test_spacing_ratios_guard_rails():
    with pytest.raises(ValidationError):
        spacing_ratios(np.array([1.0, 2.0]))
    with pytest.raises(DataQualityError):
        spacing_ratios(np.array([0.0, 0.0, 1.0, 2.0]))
    ratios = spacing_ratios(np.array([0.0, 1.0, 3.0, 4.0]))
    assert np.allclose(ratios, [0.5, 0.5])
    assert ratios.max() <= 1.0


def test_max_pairing_gap():
    paired = np.array([0.0, 1e-13, 1.0, 1.0 + 2e-13, 3.0, 3.0])
    assert max_pairing_gap(paired) < 1e-13
    broken = np.array([0.0, 1.0, 2.0, 3.0])
    assert max_pairing_gap(broken) == pytest.approx(1.0 / 3.0)
    with pytest.raises(ValidationError):
        max_pairing_gap(np.array([0.0, 1.0, 2.0]))


# ---------------------------------------------------------------------------
# entanglement
# ---------------------------------------------------------------------------


def test_entropy_of_known_states():
    bell = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)
    assert entanglement_entropy(bell, [0]) == pytest.approx(math.log(2.0))
    product = np.zeros(4)
    product[2] = 1.0
    assert entanglement_entropy(product, [0]) == pytest.approx(0.0, abs=1e-12)
    ghz = np.zeros(8)
    ghz[0] = ghz[7] = 1.0 / math.sqrt(2.0)
    assert entanglement_entropy(ghz, [0]) == pytest.approx(math.log(2.0))
    assert entanglement_entropy(ghz, [0, 2]) == pytest.approx(math.log(2.0))


def test_entropy_symmetric_under_complement():
    rng = np.random.default_rng(8)
    state = rng.normal(size=16) + 1j * rng.normal(size=16)
    state /= np.linalg.norm(state)
    a = entanglement_entropy(state, [0, 3])
    b = entanglement_entropy(state, [1, 2])
    assert a == pytest.approx(b, abs=1e-12)


def test_entropy_against_density_matrix_oracle():
    rng = np.random.default_rng(9)
    state = rng.normal(size=32) + 1j * rng.normal(size=32)
    state /= np.linalg.norm(state)
    part = [1, 3]
    # direct partial-trace oracle
    psi = state.reshape([2] * 5)  # axis q holds qubit 4 - q (big-endian)
    axes = [4 - q for q in part]
    rest = [ax for ax in range(5) if ax not in axes]
    perm = np.transpose(psi, axes + rest).reshape(4, 8)
    rho = perm @ perm.conj().T
    probs = np.linalg.eigvalsh(rho)
    probs = probs[probs > 1e-15]
    expect = float(-(probs * np.log(probs)).sum())
    assert entanglement_entropy(state, part) == pytest.approx(expect, abs=1e-12)


def test_entropy_rejects_bad_length():
    with pytest.raises(ValidationError):
        entanglement_entropy(np.ones(6), [0])


def test_page_entropy_values():
    assert page_entropy(7, 6) == pytest.approx(7 * math.log(2.0) - 1.0)
    assert page_entropy(7, 6) == pytest.approx(3.85203, abs=1e-5)
    assert page_entropy(1, 9) == pytest.approx(math.log(2.0), abs=2e-3)


def test_register_bipartition_is_the_first_half():
    lat = surface_code(2, 3).lattice
    part = register_bipartition(lat)
    # the larger half of the link register: two vertical rows plus one link
    assert part == [0, 1, 2, 3, 4, 5, 6]
    assert register_bipartition(lat, 3) == [0, 1, 2]
