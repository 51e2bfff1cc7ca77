"""Tests for the model-Hamiltonian term lists.

Dense checks run on the (1, 2) surface patch (5 links, 32-dim) where every
operator identity can be verified against explicit matrices.
"""

import numpy as np
import pytest

from gaugemem import PauliOp, ValidationError
from gaugemem.codes import bacon_shor_code, surface_code
from gaugemem.hamiltonians import (
    TermList,
    bacon_shor_couplings,
    bacon_shor_model,
    boundary_perturbation,
    disordered_field_model,
    memory_model,
    number_operators,
    square_free_integers,
    surface_field_model,
    surface_hopping_model,
    surface_symmetries,
    termwise_commutes,
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
def patch23():
    return surface_code(2, 3)


# ---------------------------------------------------------------------------
# TermList container
# ---------------------------------------------------------------------------


def test_termlist_add_and_identity_folding():
    tl = TermList(3)
    tl.add(0.5, PauliOp.from_label("XIZ"))
    tl.add(2.0, PauliOp.identity(3))
    tl.add(1.0, PauliOp(3, 0, 0, 2))  # -I
    assert len(tl) == 1
    assert tl.offset == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        tl.add(1.0, PauliOp(3, 0, 0, 1))  # iI has no real coefficient
    with pytest.raises(ValidationError):
        tl.add(1.0, PauliOp.identity(4))


def test_termlist_arithmetic():
    a = TermList(2, [(1.0, PauliOp.from_label("XI"))], offset=0.5)
    b = TermList(2, [(2.0, PauliOp.from_label("ZZ"))], offset=-0.25)
    c = a + b
    assert len(c) == 2 and c.offset == pytest.approx(0.25)
    d = c.scaled(-2.0)
    assert d.offset == pytest.approx(-0.5)
    assert d.terms[0][0] == pytest.approx(-2.0)
    with pytest.raises(ValidationError):
        a + TermList(3)


def test_termlist_realness_flag():
    real = TermList(2, [(1.0, PauliOp.from_label("XX")),
                        (1.0, PauliOp.from_label("YY"))])
    assert real.is_real() and real.is_hermitian()
    with_y = TermList(2, [(1.0, PauliOp.from_label("YI"))])
    assert with_y.is_hermitian() and not with_y.is_real()
    mat = dense(with_y)
    assert np.abs(mat.imag).max() > 0.5


def test_termlist_round_trip(tmp_path):
    tl = TermList(4)
    tl.add(0.125, PauliOp.from_label("XYZI"))
    tl.add(-3.5, PauliOp.from_label("IIZZ"))
    tl.add(1.0 / 3.0, PauliOp.from_label("XXII"))
    tl.offset = 2.75
    text = tl.to_text()
    back = TermList.from_text(text)
    assert back.to_text() == text
    assert back.offset == tl.offset
    assert [(c, op.label()) for c, op in back] == [
        (c, op.label()) for c, op in tl
    ]
    path = tmp_path / "terms.tsv"
    tl.to_file(path)
    assert TermList.from_file(path).to_text() == text


def test_termlist_rejects_malformed():
    with pytest.raises(ValidationError):
        TermList.from_text("")
    with pytest.raises(ValidationError):
        TermList.from_text("1.0 XX\n")  # space, not tab
    with pytest.raises(ValidationError):
        TermList.from_text("1.0\tXX\n2.0\tXXX\n")  # width change
    with pytest.raises(ValidationError):
        TermList.from_text("1.0\tXQ\n")


# ---------------------------------------------------------------------------
# surface-patch models
# ---------------------------------------------------------------------------


def test_field_model_term_counts(patch12, patch23):
    # (1, 2): 2 stars, 2 plaquettes, one bulk link for each field type
    tl = surface_field_model(patch12, 1.0, 1.0, 1.0, 1.0)
    assert len(tl) == 2 + 2 + 1 + 1
    # (2, 3): 6 + 6 stars/plaquettes, 13 - 6 bulk links per type
    tl = surface_field_model(patch23, 0.3, 0.3, 0.1, 0.1)
    assert len(tl) == 6 + 6 + 7 + 7
    assert tl.is_real() and tl.is_hermitian()
    assert tl.offset == 0.0


def test_field_model_per_site_parameters(patch23):
    lat = patch23.lattice
    rng = np.random.default_rng(5)
    h_star = rng.uniform(0.8, 1.2, size=len(lat.vertices))
    h_plaq = rng.uniform(0.8, 1.2, size=len(lat.plaquettes))
    j_x = rng.uniform(0.5, 1.5, size=7)
    j_z = rng.uniform(0.5, 1.5, size=7)
    tl = surface_field_model(patch23, h_star, h_plaq, j_x, j_z)
    assert len(tl) == 6 + 6 + 7 + 7
    coeffs = [c for c, _ in tl]
    assert coeffs[:6] == [pytest.approx(v) for v in h_star]
    with pytest.raises(ValidationError):
        surface_field_model(patch23, h_star[:-1], h_plaq, 1.0, 1.0)
    with pytest.raises(ValidationError):
        surface_field_model(patch23, 1.0, 1.0, j_x[:3], 1.0)


def test_disordered_field_model_seeded(patch23):
    a = disordered_field_model(patch23, seed=9)
    b = disordered_field_model(patch23, seed=9)
    assert a.to_text() == b.to_text()
    assert len(a) == 6 + 6 + 7 + 7
    coeffs = dict((op.label(), c) for c, op in a)
    for op in patch23.gauge_gens:
        assert 0.8 <= coeffs[op.label()] <= 1.2
    # link fields stay uniform at 1
    link_coeffs = [c for c, op in a if op.weight == 1]
    assert link_coeffs == [1.0] * 14


def test_field_model_symmetries(patch23):
    tl = surface_field_model(patch23, 0.3, 0.4, 0.1, 0.2)
    syms = surface_symmetries(patch23)
    for op in syms.values():
        assert termwise_commutes(tl, op)


def test_surface_symmetries_match_code_structure(patch23):
    syms = surface_symmetries(patch23)
    # the two global strings close the recorded product relations
    assert syms["global_x"] == patch23.stabilizer_gens[-2]
    assert syms["global_z"] == patch23.stabilizer_gens[-1]
    lx, lz = patch23.logical_pairs[0]
    assert syms["logical_x"] == lx and syms["logical_z"] == lz
    assert not syms["logical_x"].commutes(syms["logical_z"])


def test_field_model_twofold_degeneracy(patch12):
    # anticommuting conserved logicals pair up the whole spectrum
    tl = surface_field_model(patch12, 0.37, 0.71, 0.13, 0.29)
    evals = np.linalg.eigvalsh(dense(tl))
    width = evals[-1] - evals[0]
    paired = evals.reshape(-1, 2)
    assert np.all(paired[:, 1] - paired[:, 0] < 1e-9 * width)


def test_hopping_model_term_counts(patch12, patch23):
    assert len(surface_hopping_model(patch12, 1.0)) == 4
    assert len(surface_hopping_model(patch23, 1.0)) == 28


def test_hopping_terms_have_disjoint_supports(patch23):
    # each dressed hop is X (or Z) on one link times a disjoint dual string
    tl = surface_hopping_model(patch23, 1.0)
    for _, op in tl:
        assert op.e == 0
        assert op.x & op.z == 0
    assert tl.is_real()


def test_hopping_conserves_both_numbers(patch12):
    h = dense(surface_hopping_model(patch12, 1.0))
    n_x, n_z = number_operators(patch12)
    for num in (n_x, n_z):
        m = dense(num)
        comm = h @ m - m @ h
        assert np.abs(comm).max() < 1e-13


def test_hopping_model_symmetries(patch23):
    tl = surface_hopping_model(patch23, 0.7)
    for op in surface_symmetries(patch23).values():
        assert termwise_commutes(tl, op)


def test_number_operator_spectrum(patch12):
    # excitation counts over two commuting +-1 operators: 0, 1, 2
    n_x, n_z = number_operators(patch12)
    assert n_x.offset == 1.0 and n_z.offset == 1.0
    assert len(n_x) == 2 and len(n_z) == 2
    for num in (n_x, n_z):
        evals = np.linalg.eigvalsh(dense(num))
        assert np.allclose(np.unique(np.round(evals, 9)), [0.0, 1.0, 2.0])


def test_boundary_perturbation_counts_and_action(patch12, patch23):
    assert len(boundary_perturbation(patch12, 0.15)) == 8
    v23 = boundary_perturbation(patch23, 0.15)
    assert len(v23) == 12
    syms = surface_symmetries(patch23)
    # each boundary field toggles exactly one star or plaquette, so the
    # global strings anticommute with it
    for _, op in v23:
        assert not op.commutes(syms["global_x"]) or not op.commutes(
            syms["global_z"]
        )
    n_x, n_z = number_operators(patch12)
    v = dense(boundary_perturbation(patch12, 0.15))
    m = dense(n_x + n_z)
    assert np.abs(v @ m - m @ v).max() > 0.01


def test_memory_model_assembly(patch23):
    nu_x = 2.0
    nu_z = 2.0 * np.sqrt(3.0)
    tl = memory_model(patch23, nu_x, nu_z, j=0.1, g=0.15)
    # 6 + 6 number-operator terms, 28 hopping terms, 12 boundary fields
    assert len(tl) == 6 + 6 + 28 + 12
    # half-filling offsets of the two excitation counts
    assert tl.offset == pytest.approx(3.0 * nu_x + 3.0 * nu_z)
    assert tl.is_real() and tl.is_hermitian()


def test_memory_model_conserves_numbers_until_perturbed(patch12):
    n_x, n_z = number_operators(patch12)
    h0 = dense(memory_model(patch12, 2.0, 3.0, j=0.1, g=0.0))
    h1 = dense(memory_model(patch12, 2.0, 3.0, j=0.1, g=0.15))
    for num in (n_x, n_z):
        m = dense(num)
        assert np.abs(h0 @ m - m @ h0).max() < 1e-13
        assert np.abs(h1 @ m - m @ h1).max() > 0.01


def test_memory_model_dense_hermitian(patch12):
    h = dense(memory_model(patch12, 2.0, 3.0, j=0.1, g=0.15))
    assert np.abs(h.imag).max() == 0.0
    assert np.abs(h - h.T.conj()).max() < 1e-12


def test_models_reject_wrong_code():
    code = bacon_shor_code(3, 3)
    with pytest.raises(ValidationError):
        surface_field_model(code, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValidationError):
        bacon_shor_model(surface_code(1, 2), seed=0)


# ---------------------------------------------------------------------------
# Bacon-Shor chain model
# ---------------------------------------------------------------------------


def test_square_free_integers():
    assert square_free_integers(12) == [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17]


def test_bacon_shor_model_structure():
    code = bacon_shor_code(3, 3)
    tl = bacon_shor_model(code, seed=7)
    # every gauge coupling plus one field per X-type stabilizer
    assert len(tl) == len(code.gauge_gens) + 2
    coeffs = dict((op.label(), c) for c, op in tl)
    assert coeffs[code.stabilizer_gens[0].label()] == pytest.approx(10.0)
    assert coeffs[code.stabilizer_gens[1].label()] == pytest.approx(
        10.0 * np.sqrt(2.0)
    )
    assert tl.is_real() and tl.is_hermitian()


def test_bacon_shor_couplings_seeded():
    code = bacon_shor_code(3, 3)
    a = bacon_shor_couplings(code, seed=3)
    b = bacon_shor_couplings(code, seed=3)
    c = bacon_shor_couplings(code, seed=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert a.min() >= 0.9 and a.max() <= 1.1
    assert len(a) == len(code.gauge_gens)


def test_bacon_shor_model_symmetries():
    code = bacon_shor_code(3, 3)
    tl = bacon_shor_model(code, seed=11)
    for stab in code.stabilizer_gens:
        assert termwise_commutes(tl, stab)
    logical_z = code.logical_pairs[0][1]
    assert termwise_commutes(tl, logical_z)
