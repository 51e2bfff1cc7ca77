"""Model Hamiltonians as explicit Pauli term lists.

A :class:`TermList` is a real linear combination of Pauli operators plus a
scalar offset.  Model builders below produce the Hamiltonians studied on the
disentangled surface patch (commuting star/plaquette fields, symmetric link
fields, number-conserving hopping, boundary perturbations) and the disordered
Bacon-Shor chain model.  Everything stays symbolic here; dense assembly lives
in :mod:`gaugemem.spectral`.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np

from .codes import SubsystemCode, SurfaceLattice
from .errors import ValidationError
from .pauli import PauliOp

__all__ = [
    "TermList",
    "surface_field_model",
    "disordered_field_model",
    "surface_hopping_model",
    "number_operators",
    "boundary_perturbation",
    "memory_model",
    "surface_symmetries",
    "square_free_integers",
    "bacon_shor_couplings",
    "bacon_shor_model",
    "termwise_commutes",
]


class TermList:
    """A weighted sum of Pauli operators with a scalar offset.

    Coefficients are real; Hermiticity of the sum is the caller's business
    but every builder in this module produces Hermitian terms only.
    """

    def __init__(self, n: int, terms: Optional[Iterable] = None, offset: float = 0.0):
        self.n = n
        self.terms: list = []
        self.offset = float(offset)
        if terms is not None:
            for coeff, op in terms:
                self.add(coeff, op)

    def add(self, coeff: float, op: PauliOp) -> None:
        if op.n != self.n:
            raise ValidationError("term width does not match the term list")
        if op.x == 0 and op.z == 0:
            # fold scalar operators into the offset
            if op.e % 2:
                raise ValidationError("identity term with imaginary phase")
            self.offset += float(coeff) * (-1.0 if op.e == 2 else 1.0)
            return
        self.terms.append((float(coeff), op))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "TermList") -> "TermList":
        if other.n != self.n:
            raise ValidationError("cannot add term lists of different widths")
        out = TermList(self.n, self.terms, self.offset)
        out.terms.extend(other.terms)
        out.offset += other.offset
        return out

    def scaled(self, factor: float) -> "TermList":
        out = TermList(self.n, offset=self.offset * factor)
        out.terms = [(c * factor, op) for c, op in self.terms]
        return out

    def is_real(self) -> bool:
        """True when every term has a real matrix in the computational basis."""
        return all(op.e % 2 == 0 for _, op in self.terms)

    def is_hermitian(self) -> bool:
        return all(op.is_hermitian() for _, op in self.terms)

    # -- serialization: one "coefficient<TAB>label" row per term; a trailing
    #    identity row carries a nonzero offset -------------------------------

    def to_text(self) -> str:
        rows = [f"{coeff!r}\t{op.label()}" for coeff, op in self.terms]
        if self.offset != 0.0:
            rows.append(f"{self.offset!r}\t{'I' * self.n}")
        return "\n".join(rows) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TermList":
        rows = [line for line in text.splitlines() if line]
        if not rows:
            raise ValidationError("empty term list")
        first_op = None
        out = None
        for row in rows:
            parts = row.split("\t")
            if len(parts) != 2:
                raise ValidationError(f"malformed term row {row!r}")
            coeff = float(parts[0])
            op = PauliOp.from_label(parts[1])
            if first_op is None:
                first_op = op
                out = cls(op.n)
            out.add(coeff, op)
        return out

    def to_file(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_file(cls, path) -> "TermList":
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_text(fh.read())

    def __repr__(self) -> str:
        return f"<TermList n={self.n} terms={len(self.terms)} offset={self.offset}>"


def termwise_commutes(terms: TermList, op: PauliOp) -> bool:
    """True when every single term commutes with ``op``."""
    return all(t.commutes(op) for _, t in terms)


# ---------------------------------------------------------------------------
# surface-patch models (on the disentangled link register)
# ---------------------------------------------------------------------------


def _require_surface(code: SubsystemCode) -> SurfaceLattice:
    if code.kind != "surface" or code.lattice is None:
        raise ValidationError("this model needs a disentangled surface code")
    return code.lattice


def _star_plaquette_ops(code: SubsystemCode):
    lat = code.lattice
    n_v = len(lat.vertices)
    n_p = len(lat.plaquettes)
    stars = code.gauge_gens[:n_v]
    plaqs = code.gauge_gens[n_v:n_v + n_p]
    return stars, plaqs


def _per_site(value, count: int, name: str) -> list:
    """Broadcast a scalar coefficient or validate a per-site sequence."""
    if np.ndim(value) == 0:
        return [float(value)] * count
    vals = [float(v) for v in value]
    if len(vals) != count:
        raise ValidationError(f"{name} needs {count} entries, got {len(vals)}")
    return vals


def surface_field_model(
    code: SubsystemCode,
    h_star=0.0,
    h_plaq=0.0,
    j_x=0.0,
    j_z=0.0,
) -> TermList:
    """Commuting star/plaquette fields plus symmetric single-link fields.

    ``h_star``/``h_plaq`` multiply the star and plaquette operators; ``j_x``
    puts X on every link away from the smooth columns and ``j_z`` puts Z on
    every link away from the rough rows.  Every term commutes with the two
    global strings and with both bare logicals, and the full spectrum is
    twofold degenerate.

    Each parameter is either a scalar applied uniformly or a sequence with
    one entry per operator: stars in lattice vertex order, plaquettes in
    lattice plaquette order, links ascending over the eligible links.  Zero
    entries are dropped.
    """
    lat = _require_surface(code)
    stars, plaqs = _star_plaquette_ops(code)
    n = code.n
    smooth = set(lat.smooth_links())
    rough = set(lat.rough_links())
    x_links = [link for link in range(n) if link not in smooth]
    z_links = [link for link in range(n) if link not in rough]
    out = TermList(n)
    for coeff, op in zip(_per_site(h_star, len(stars), "h_star"), stars):
        if coeff:
            out.add(coeff, op)
    for coeff, op in zip(_per_site(h_plaq, len(plaqs), "h_plaq"), plaqs):
        if coeff:
            out.add(coeff, op)
    for coeff, link in zip(_per_site(j_x, len(x_links), "j_x"), x_links):
        if coeff:
            out.add(coeff, PauliOp.single(n, link, "X"))
    for coeff, link in zip(_per_site(j_z, len(z_links), "j_z"), z_links):
        if coeff:
            out.add(coeff, PauliOp.single(n, link, "Z"))
    return out


def disordered_field_model(
    code: SubsystemCode,
    seed: int,
    h_low: float = 0.8,
    h_high: float = 1.2,
    j: float = 1.0,
) -> TermList:
    """Field model with unit link fields and disordered star/plaquette
    fields, the standard nonintegrable draw for level statistics."""
    lat = _require_surface(code)
    rng = np.random.default_rng(seed)
    h_star = rng.uniform(h_low, h_high, size=len(lat.vertices))
    h_plaq = rng.uniform(h_low, h_high, size=len(lat.plaquettes))
    return surface_field_model(code, h_star=h_star, h_plaq=h_plaq, j_x=j, j_z=j)


def surface_hopping_model(code: SubsystemCode, j: float) -> TermList:
    """Excitation-number-conserving hopping on the surface patch.

    For every link with two flanking plaquettes the pair
    ``j/2 * (X_l - X_l * B_p B_p')`` hops a plaquette excitation across the
    link, and dually ``j/2 * (Z_l - Z_l * A_v A_v')`` for links with two
    vertex stars.  Both number operators commute with every term.
    """
    lat = _require_surface(code)
    stars, plaqs = _star_plaquette_ops(code)
    n = code.n
    plaq_of = {}
    for (i, jj), op in zip(lat.plaquettes, plaqs):
        plaq_of[lat.plaquette_qubit(i, jj)] = op
    star_of = {}
    for (i, jj), op in zip(lat.vertices, stars):
        star_of[lat.vertex_qubit(i, jj)] = op

    out = TermList(n)
    for link in range(n):
        sides = lat.link_plaquettes(link)
        if len(sides) == 2:
            x_l = PauliOp.single(n, link, "X")
            bb = plaq_of[sides[0]] * plaq_of[sides[1]]
            out.add(0.5 * j, x_l)
            out.add(-0.5 * j, x_l * bb)
        ends = lat.link_vertices(link)
        if len(ends) == 2:
            z_l = PauliOp.single(n, link, "Z")
            aa = star_of[ends[0]] * star_of[ends[1]]
            out.add(0.5 * j, z_l)
            out.add(-0.5 * j, z_l * aa)
    return out


def number_operators(code: SubsystemCode) -> tuple:
    """The two conserved charges of the hopping model: the excitation
    counts ``N_X = sum_v (1 - A_v)/2`` and ``N_Z = sum_p (1 - B_p)/2``.

    Eigenvalues are the integers from zero up to the number of stars resp.
    plaquettes; each hopping term moves an excitation without changing
    either count, and the two global strings measure their parities.
    """
    _require_surface(code)
    stars, plaqs = _star_plaquette_ops(code)
    n = code.n
    n_x = TermList(n, [(-0.5, op) for op in stars], offset=0.5 * len(stars))
    n_z = TermList(n, [(-0.5, op) for op in plaqs], offset=0.5 * len(plaqs))
    return n_x, n_z


def boundary_perturbation(code: SubsystemCode, g: float) -> TermList:
    """Boundary fields: X on every smooth-column link and Z on every
    rough-row link.

    Each such field toggles exactly one star or plaquette operator, so it
    moves single excitations on and off the boundary: both number operators
    and both global strings stop being conserved once ``g`` is nonzero.
    """
    lat = _require_surface(code)
    n = code.n
    out = TermList(n)
    for link in lat.smooth_links():
        out.add(g, PauliOp.single(n, link, "X"))
    for link in lat.rough_links():
        out.add(g, PauliOp.single(n, link, "Z"))
    return out


def memory_model(
    code: SubsystemCode,
    nu_x: float,
    nu_z: float,
    j: float,
    g: float,
    h_star: float = 0.0,
    h_plaq: float = 0.0,
) -> TermList:
    """The full quantum-memory Hamiltonian on the surface patch:

    ``nu_x N_X + nu_z N_Z`` energy penalties on the two charges, the
    number-conserving hopping at strength ``j``, and boundary fields at
    strength ``g`` that move single excitations on and off the edges.
    Optional uniform star/plaquette fields round out the unperturbed part.
    With ``g = 0`` both charges are conserved exactly.
    """
    n_x, n_z = number_operators(code)
    out = n_x.scaled(nu_x) + n_z.scaled(nu_z)
    out = out + surface_hopping_model(code, j)
    if h_star != 0.0 or h_plaq != 0.0:
        out = out + surface_field_model(code, h_star=h_star, h_plaq=h_plaq)
    if g:
        out = out + boundary_perturbation(code, g)
    return out


def surface_symmetries(code: SubsystemCode) -> dict:
    """The commuting symmetry operators of the surface-patch models."""
    lat = _require_surface(code)
    n = code.n
    logical_x, logical_z = code.logical_pairs[0]
    return {
        "global_x": PauliOp.from_support(n, "X", lat.rough_links()),
        "global_z": PauliOp.from_support(n, "Z", lat.smooth_links()),
        "logical_x": logical_x,
        "logical_z": logical_z,
    }


# ---------------------------------------------------------------------------
# Bacon-Shor chain model
# ---------------------------------------------------------------------------


def square_free_integers(count: int) -> list:
    """The first ``count`` square-free positive integers: 1, 2, 3, 5, 6, ..."""
    out = []
    m = 1
    while len(out) < count:
        mm = m
        ok = True
        d = 2
        while d * d <= mm:
            if mm % (d * d) == 0:
                ok = False
                break
            if mm % d == 0:
                mm //= d
            d += 1
        if ok:
            out.append(m)
        m += 1
    return out


def bacon_shor_couplings(
    code: SubsystemCode, seed: int, base: float = 1.0, spread: float = 0.1
) -> np.ndarray:
    """Uniform disorder on every gauge coupling, one draw per generator."""
    rng = np.random.default_rng(seed)
    return rng.uniform(base - spread, base + spread, size=len(code.gauge_gens))


def bacon_shor_model(
    code: SubsystemCode,
    seed: int,
    base: float = 1.0,
    spread: float = 0.1,
    mu0: float = 10.0,
) -> TermList:
    """Disordered Bacon-Shor Hamiltonian with incommensurate stabilizer
    fields.

    Every XX and ZZ gauge coupling gets an independent uniform draw from
    ``[base - spread, base + spread]``; the X-type stabilizers get fields
    ``mu0 * sqrt(p_i)`` with ``p_i`` running over the square-free integers,
    so no two field sums ever match.
    """
    if code.kind != "bacon_shor":
        raise ValidationError("this model needs a bacon_shor code")
    out = TermList(code.n)
    couplings = bacon_shor_couplings(code, seed, base, spread)
    for coeff, op in zip(couplings, code.gauge_gens):
        out.add(float(coeff), op)
    lx, ly = code.dims
    n_xstab = ly - 1
    roots = square_free_integers(n_xstab)
    for mu_idx in range(n_xstab):
        out.add(mu0 * math.sqrt(roots[mu_idx]), code.stabilizer_gens[mu_idx])
    return out
