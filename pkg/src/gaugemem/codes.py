"""Subsystem code objects, lattice geometry, and the code builders.

A subsystem code is held as explicit generator lists: gauge generators G,
stabilizer generators spanning the center Z(G) (possibly overcomplete, with
the product relations recorded), and bare logical pairs from C(G)/S.  All
operators are exact :class:`~gaugemem.pauli.PauliOp` instances, so signs are
never approximate.

The surface-patch geometry is pinned once here and reused everywhere:

* vertical links (i, j) with 0 <= i <= Lx and 0 <= j <= Ly-1, laid out
  row-major (j outer); the rows j = 0 and j = Ly-1 are the rough boundaries.
* horizontal links (i, j) with 0 <= i <= Lx-1 and 1 <= j <= Ly-1; the
  columns i = 0 and i = Lx of vertical links are the smooth boundaries.
* matter vertices (i, j) with 0 <= i <= Lx, 1 <= j <= Ly-1 and matter
  plaquettes (i, j) with 0 <= i <= Lx-1, 0 <= j <= Ly-1.

Qubit order is links (vertical then horizontal), then vertex matter, then
plaquette matter, each block row-major.  The four corner vertical links
belong to both a rough row and a smooth column.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .errors import ValidationError
from .pauli import Circuit, PauliGroup, PauliOp, product

__all__ = [
    "SubsystemCode",
    "SurfaceLattice",
    "surface_code_with_matter",
    "surface_code",
    "surface_disentangler",
    "repetition_code",
    "repetition_code_global",
    "h_code",
    "four_qubit_code",
    "bacon_shor_code",
    "color_code_triangle",
    "multiboundary_code",
    "build_code",
    "CODE_BUILDERS",
]


class SubsystemCode:
    """A stabilizer subsystem code given by explicit generator lists.

    Parameters
    ----------
    n : int
        Number of physical qubits.
    gauge_gens : sequence of PauliOp
        Generators of the gauge group G.
    stabilizer_gens : sequence of PauliOp
        Generators of the stabilizer group S = Z(G).  May be overcomplete;
        dependencies are declared through ``relations``.
    logical_pairs : sequence of (PauliOp, PauliOp)
        Bare logical pairs (X-type, Z-type); each commutes with every gauge
        generator and the two members of a pair anticommute.
    relations : sequence of sequence of int
        Index lists into ``stabilizer_gens`` whose ordered product is exactly
        the identity with a plus sign.
    dressed_examples : sequence of (int, str, PauliOp)
        Optional witnesses (pair index, "X" or "Z", operator) of low-weight
        dressed logicals; checked by :meth:`verify`.
    local_symmetric_gens : sequence of PauliOp, optional
        Extra operators that commute with the global symmetries but not with
        S; used to draw symmetric random circuits.
    """

    def __init__(
        self,
        n: int,
        gauge_gens: Sequence[PauliOp],
        stabilizer_gens: Sequence[PauliOp],
        logical_pairs: Sequence,
        relations: Sequence = (),
        kind: str = "custom",
        dims: Optional[tuple] = None,
        dressed_examples: Sequence = (),
        local_symmetric_gens: Optional[Sequence[PauliOp]] = None,
        lattice=None,
    ):
        self.n = n
        self.gauge_gens = list(gauge_gens)
        self.stabilizer_gens = list(stabilizer_gens)
        self.logical_pairs = [tuple(p) for p in logical_pairs]
        self.relations = [list(r) for r in relations]
        self.kind = kind
        self.dims = tuple(dims) if dims is not None else None
        self.dressed_examples = list(dressed_examples)
        self.local_symmetric_gens = (
            list(local_symmetric_gens) if local_symmetric_gens is not None else None
        )
        self.lattice = lattice

    # -- derived structure --------------------------------------------------

    def gauge_group(self) -> PauliGroup:
        return PauliGroup(self.n, self.gauge_gens)

    def stabilizer_group(self) -> PauliGroup:
        return PauliGroup(self.n, self.stabilizer_gens)

    @property
    def k(self) -> int:
        return len(self.logical_pairs)

    @property
    def stabilizer_rank(self) -> int:
        return self.stabilizer_group().rank

    @property
    def gauge_rank(self) -> int:
        return self.gauge_group().rank

    @property
    def r(self) -> int:
        """Number of gauge qubits."""
        return (self.gauge_rank - self.stabilizer_rank) // 2

    def params(self) -> tuple:
        return (self.n, self.k, self.r, self.stabilizer_rank)

    def distance(self, max_rank: int = 14) -> int:
        """Dressed distance: minimum weight over nontrivial logical classes.

        Enumerates logical cosets of the full gauge group, so it refuses
        above ``max_rank`` gauge generators.
        """
        gauge = self.gauge_group()
        reps = []
        for a in range(1 << self.k):
            for b in range(1 << self.k):
                if a == 0 and b == 0:
                    continue
                ops = []
                for i, (lx, lz) in enumerate(self.logical_pairs):
                    if (a >> i) & 1:
                        ops.append(lx)
                    if (b >> i) & 1:
                        ops.append(lz)
                reps.append(product(ops))
        return gauge.min_coset_weight(reps, max_rank=max_rank)

    # -- validation -----------------------------------------------------------

    def verify(self) -> None:
        """Check the full set of structural invariants; raise on failure."""
        errors = []
        all_named = (
            [("gauge", g) for g in self.gauge_gens]
            + [("stabilizer", s) for s in self.stabilizer_gens]
            + [("logical", op) for pair in self.logical_pairs for op in pair]
        )
        for name, op in all_named:
            if op.n != self.n:
                errors.append(f"{name} generator {op} has wrong width")
            if not op.is_hermitian():
                errors.append(f"{name} generator {op} is not Hermitian")
        if errors:
            raise ValidationError("; ".join(errors))

        gauge = self.gauge_group()
        stab = self.stabilizer_group()

        for i, s in enumerate(self.stabilizer_gens):
            for g in self.gauge_gens:
                if not s.commutes(g):
                    errors.append(f"stabilizer {i} fails to commute with gauge {g}")
            for j, t in enumerate(self.stabilizer_gens[i + 1:], start=i + 1):
                if not s.commutes(t):
                    errors.append(f"stabilizers {i} and {j} do not commute")

        # S must equal the center of G as a symplectic span.
        center = PauliGroup(self.n, gauge.center())
        if center.rank != stab.rank:
            errors.append(
                f"stabilizer rank {stab.rank} differs from center rank {center.rank}"
            )
        for s in self.stabilizer_gens:
            if not center.contains_vector(s):
                errors.append(f"stabilizer {s} lies outside the gauge center")
        for c in center.ops:
            if not stab.contains_vector(c):
                errors.append("gauge center is not covered by the stabilizers")

        for rel in self.relations:
            if any(not 0 <= i < len(self.stabilizer_gens) for i in rel):
                errors.append(f"relation {rel} indexes outside the stabilizer list")
                continue
            prod = product([self.stabilizer_gens[i] for i in rel])
            if not prod.is_identity():
                errors.append(f"relation {rel} multiplies to {prod}, not +I")

        for i, (lx, lz) in enumerate(self.logical_pairs):
            if lx.commutes(lz):
                errors.append(f"logical pair {i} does not anticommute")
            for g in self.gauge_gens:
                if not lx.commutes(g) or not lz.commutes(g):
                    errors.append(f"logical pair {i} is not bare (fails on {g})")
                    break
            for j, (mx, mz) in enumerate(self.logical_pairs):
                if i == j:
                    continue
                if not (lx.commutes(mx) and lx.commutes(mz)
                        and lz.commutes(mx) and lz.commutes(mz)):
                    errors.append(f"logical pairs {i} and {j} do not commute")
            if gauge.contains_vector(lx) or gauge.contains_vector(lz):
                errors.append(f"logical pair {i} lies inside the gauge group")

        ext = PauliGroup(self.n, gauge.ops)
        for lx, lz in self.logical_pairs:
            ext.add(lx)
            ext.add(lz)
        if ext.rank != gauge.rank + 2 * self.k:
            errors.append("logical pairs are not independent of the gauge group")

        g_rank, s_rank = gauge.rank, stab.rank
        if (g_rank - s_rank) % 2 != 0:
            errors.append("gauge/stabilizer rank difference is odd")
        elif self.n != self.k + (g_rank - s_rank) // 2 + s_rank:
            errors.append(
                f"rank arithmetic broken: n={self.n}, k={self.k}, "
                f"r={(g_rank - s_rank) // 2}, rank(S)={s_rank}"
            )

        for pair_idx, which, op in self.dressed_examples:
            if not 0 <= pair_idx < self.k or which not in ("X", "Z"):
                errors.append(f"malformed dressed example ({pair_idx}, {which})")
                continue
            lx, lz = self.logical_pairs[pair_idx]
            bare, partner = (lx, lz) if which == "X" else (lz, lx)
            for s in self.stabilizer_gens:
                if not op.commutes(s):
                    errors.append(f"dressed example {op} breaks stabilizer {s}")
                    break
            if op.commutes(partner):
                errors.append(f"dressed example {op} commutes with its partner")
            if not gauge.contains_vector(op * bare):
                errors.append(f"dressed example {op} is not in the class of {bare}")

        if errors:
            raise ValidationError("; ".join(errors))

    # -- serialization ----------------------------------------------------------

    def to_text(self) -> str:
        dims = ",".join(str(d) for d in self.dims) if self.dims else "-"
        lines = [f"CODE {self.kind} dims={dims} n={self.n}"]
        lines.append("GAUGE")
        lines.extend(g.label() for g in self.gauge_gens)
        lines.append("STABILIZER")
        lines.extend(s.label() for s in self.stabilizer_gens)
        lines.append("LOGICAL")
        lines.extend(f"{lx.label()} {lz.label()}" for lx, lz in self.logical_pairs)
        lines.append("RELATIONS")
        lines.extend(" ".join(str(i) for i in rel) for rel in self.relations)
        return "\n".join(lines) + "\n"

    def to_file(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "SubsystemCode":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("CODE "):
            raise ValidationError("code file must start with a CODE header")
        head = lines[0].split()
        if len(head) != 4 or not head[2].startswith("dims=") or not head[3].startswith("n="):
            raise ValidationError(f"malformed CODE header {lines[0]!r}")
        kind = head[1]
        dims_text = head[2][5:]
        dims = None if dims_text == "-" else tuple(int(d) for d in dims_text.split(","))
        n = int(head[3][2:])

        sections = {"GAUGE": [], "STABILIZER": [], "LOGICAL": [], "RELATIONS": []}
        order = ["GAUGE", "STABILIZER", "LOGICAL", "RELATIONS"]
        current = None
        seen = []
        for line in lines[1:]:
            if line in sections:
                if seen and order.index(line) <= order.index(seen[-1]):
                    raise ValidationError(f"section {line} out of order")
                seen.append(line)
                current = line
                continue
            if current is None:
                raise ValidationError(f"content before first section: {line!r}")
            sections[current].append(line)
        if seen != order:
            raise ValidationError(f"expected sections {order}, found {seen}")

        def parse_op(label):
            op = PauliOp.from_label(label)
            if op.n != n:
                raise ValidationError(f"operator {label!r} has width {op.n}, not {n}")
            return op

        gauge = [parse_op(s) for s in sections["GAUGE"]]
        stabs = [parse_op(s) for s in sections["STABILIZER"]]
        pairs = []
        for line in sections["LOGICAL"]:
            toks = line.split()
            if len(toks) != 2:
                raise ValidationError(f"logical line needs two operators: {line!r}")
            pairs.append((parse_op(toks[0]), parse_op(toks[1])))
        rels = []
        for line in sections["RELATIONS"]:
            idx = [int(t) for t in line.split()]
            if any(not 0 <= i < len(stabs) for i in idx):
                raise ValidationError(f"relation {line!r} indexes outside STABILIZER")
            rels.append(idx)
        return cls(n, gauge, stabs, pairs, rels, kind=kind, dims=dims)

    @classmethod
    def from_file(cls, path) -> "SubsystemCode":
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_text(fh.read())

    def __repr__(self) -> str:
        dims = f" dims={self.dims}" if self.dims else ""
        return (
            f"<SubsystemCode {self.kind}{dims} [[{self.n}, {self.k}, "
            f"{self.r}, rank(S)={self.stabilizer_rank}]]>"
        )


# ---------------------------------------------------------------------------
# Surface patch geometry
# ---------------------------------------------------------------------------


class SurfaceLattice:
    """Open surface patch with rough rows and smooth columns; see module
    docstring for the pinned layout and qubit order."""

    def __init__(self, lx: int, ly: int):
        if lx < 1 or ly < 2:
            raise ValidationError("surface patch needs lx >= 1 and ly >= 2")
        self.lx = lx
        self.ly = ly
        self.vlinks = [(i, j) for j in range(ly) for i in range(lx + 1)]
        self.hlinks = [(i, j) for j in range(1, ly) for i in range(lx)]
        self.links = self.vlinks + self.hlinks
        self.n_links = len(self.links)
        self.vertices = [(i, j) for j in range(1, ly) for i in range(lx + 1)]
        self.plaquettes = [(i, j) for j in range(ly) for i in range(lx)]
        self.n_matter = self.n_links + len(self.vertices) + len(self.plaquettes)

        self._vlink_idx = {c: k for k, c in enumerate(self.vlinks)}
        self._hlink_idx = {
            c: self.n_links - len(self.hlinks) + k for k, c in enumerate(self.hlinks)
        }
        self._vertex_idx = {
            c: self.n_links + k for k, c in enumerate(self.vertices)
        }
        self._plaq_idx = {
            c: self.n_links + len(self.vertices) + k
            for k, c in enumerate(self.plaquettes)
        }

    def vlink(self, i: int, j: int) -> int:
        return self._vlink_idx[(i, j)]

    def hlink(self, i: int, j: int) -> int:
        return self._hlink_idx[(i, j)]

    def vertex_qubit(self, i: int, j: int) -> int:
        return self._vertex_idx[(i, j)]

    def plaquette_qubit(self, i: int, j: int) -> int:
        return self._plaq_idx[(i, j)]

    def vertex_star(self, i: int, j: int) -> list:
        """Links meeting the matter vertex (i, j); three on smooth columns."""
        out = [self.vlink(i, j - 1), self.vlink(i, j)]
        if i >= 1:
            out.append(self.hlink(i - 1, j))
        if i <= self.lx - 1:
            out.append(self.hlink(i, j))
        return sorted(out)

    def plaquette_boundary(self, i: int, j: int) -> list:
        """Links bounding the plaquette (i, j); three on rough rows."""
        out = [self.vlink(i, j), self.vlink(i + 1, j)]
        if j >= 1:
            out.append(self.hlink(i, j))
        if j <= self.ly - 2:
            out.append(self.hlink(i, j + 1))
        return sorted(out)

    def link_vertices(self, link: int) -> list:
        """Matter vertices at the ends of a link (one on rough rows)."""
        kind, i, j = self.link_coords(link)
        if kind == "v":
            return [
                self.vertex_qubit(i, jj)
                for jj in (j, j + 1)
                if 1 <= jj <= self.ly - 1
            ]
        return [self.vertex_qubit(i, j), self.vertex_qubit(i + 1, j)]

    def link_plaquettes(self, link: int) -> list:
        """Matter plaquettes flanking a link (one on smooth columns)."""
        kind, i, j = self.link_coords(link)
        if kind == "v":
            return [
                self.plaquette_qubit(ii, j)
                for ii in (i - 1, i)
                if 0 <= ii <= self.lx - 1
            ]
        return [self.plaquette_qubit(i, j - 1), self.plaquette_qubit(i, j)]

    def link_coords(self, link: int) -> tuple:
        if link < len(self.vlinks):
            i, j = self.vlinks[link]
            return ("v", i, j)
        i, j = self.hlinks[link - len(self.vlinks)]
        return ("h", i, j)

    def link_position(self, link: int) -> tuple:
        kind, i, j = self.link_coords(link)
        if kind == "v":
            return (float(i), j + 0.5)
        return (i + 0.5, float(j))

    def rough_links(self) -> list:
        """Vertical links on the rough rows j = 0 and j = Ly-1."""
        return sorted(
            self.vlink(i, j) for i in range(self.lx + 1) for j in (0, self.ly - 1)
        )

    def smooth_links(self) -> list:
        """Vertical links on the smooth columns i = 0 and i = Lx."""
        return sorted(
            self.vlink(i, j) for i in (0, self.lx) for j in range(self.ly)
        )

    def smooth_pairs(self) -> list:
        """Consecutive link pairs running down each smooth column."""
        out = []
        for i in (0, self.lx):
            for j in range(self.ly - 1):
                out.append((self.vlink(i, j), self.vlink(i, j + 1)))
        return out

    def rough_pairs(self) -> list:
        """Consecutive link pairs running along each rough row."""
        out = []
        for j in (0, self.ly - 1):
            for i in range(self.lx):
                out.append((self.vlink(i, j), self.vlink(i + 1, j)))
        return out

    def logical_x_links(self) -> list:
        """Vertical links of the j = 0 rough row (the bare X string)."""
        return [self.vlink(i, 0) for i in range(self.lx + 1)]

    def logical_z_links(self) -> list:
        """Vertical links of the i = 0 smooth column (the bare Z string)."""
        return [self.vlink(0, j) for j in range(self.ly)]


# ---------------------------------------------------------------------------
# Surface code builders
# ---------------------------------------------------------------------------


def surface_code_with_matter(lx: int, ly: int) -> SubsystemCode:
    """Surface patch coupled to vertex and plaquette matter qubits.

    Gauge generators are the matter singles X_v and Z_p together with the
    link-matter couplings: Z_v Z_l Z_v' across every link with two vertex
    endpoints, X_p X_l X_p' across every link with two flanking plaquettes,
    and the boundary pair terms along the smooth columns and rough rows.
    The stabilizers are the decorated star and plaquette operators A_v, B_p
    plus the two global matter parities.
    """
    lat = SurfaceLattice(lx, ly)
    n = lat.n_matter

    gauge = []
    for (i, j) in lat.vertices:
        gauge.append(PauliOp.single(n, lat.vertex_qubit(i, j), "X"))
    for (i, j) in lat.plaquettes:
        gauge.append(PauliOp.single(n, lat.plaquette_qubit(i, j), "Z"))
    for link in range(lat.n_links):
        ends = lat.link_vertices(link)
        if len(ends) == 2:
            gauge.append(PauliOp.from_support(n, "Z", [link] + ends))
    for link in range(lat.n_links):
        sides = lat.link_plaquettes(link)
        if len(sides) == 2:
            gauge.append(PauliOp.from_support(n, "X", [link] + sides))
    for a, b in lat.smooth_pairs():
        pa = lat.link_plaquettes(a)
        pb = lat.link_plaquettes(b)
        gauge.append(PauliOp.from_support(n, "X", [a, b] + pa + pb))
    for a, b in lat.rough_pairs():
        va = lat.link_vertices(a)
        vb = lat.link_vertices(b)
        gauge.append(PauliOp.from_support(n, "Z", [a, b] + va + vb))

    stabs = []
    for (i, j) in lat.vertices:
        qubits = [lat.vertex_qubit(i, j)] + lat.vertex_star(i, j)
        stabs.append(PauliOp.from_support(n, "X", qubits))
    for (i, j) in lat.plaquettes:
        qubits = [lat.plaquette_qubit(i, j)] + lat.plaquette_boundary(i, j)
        stabs.append(PauliOp.from_support(n, "Z", qubits))
    stabs.append(
        PauliOp.from_support(n, "X", [lat.vertex_qubit(i, j) for i, j in lat.vertices])
    )
    stabs.append(
        PauliOp.from_support(
            n, "Z", [lat.plaquette_qubit(i, j) for i, j in lat.plaquettes]
        )
    )

    logical_x = PauliOp.from_support(n, "X", lat.logical_x_links())
    logical_z = PauliOp.from_support(n, "Z", lat.logical_z_links())

    # Low-weight dressed X witness: multiply the bare string by the XXX
    # gauge terms of the interior j = 0 links; the interior plaquette
    # factors telescope away, leaving the two corner links and their single
    # flanking plaquettes.
    dressed_x = logical_x
    for i in range(1, lx):
        link = lat.vlink(i, 0)
        dressed_x = dressed_x * PauliOp.from_support(
            n, "X", [link] + lat.link_plaquettes(link)
        )

    return SubsystemCode(
        n,
        gauge,
        stabs,
        [(logical_x, logical_z)],
        relations=[],
        kind="surface_matter",
        dims=(lx, ly),
        dressed_examples=[(0, "X", dressed_x)],
        lattice=lat,
    )


def surface_disentangler(lat: SurfaceLattice) -> Circuit:
    """The CX circuit that decouples the matter from the links.

    Vertex blocks come first (control on the vertex matter, targets on its
    star links), then plaquette blocks (controls on the boundary links,
    target on the plaquette matter).
    """
    circ = Circuit(lat.n_matter)
    for (i, j) in lat.vertices:
        v = lat.vertex_qubit(i, j)
        for link in lat.vertex_star(i, j):
            circ.append("CX", v, link)
    for (i, j) in lat.plaquettes:
        p = lat.plaquette_qubit(i, j)
        for link in lat.plaquette_boundary(i, j):
            circ.append("CX", link, p)
    return circ


def _strip_matter(op: PauliOp, lat: SurfaceLattice) -> PauliOp:
    """Project a disentangled operator onto the link register.

    Valid only when the matter factors are X on vertex matter and Z on
    plaquette matter (the +1 eigenoperators of the decoupled state).
    """
    v_mask = 0
    for (i, j) in lat.vertices:
        v_mask |= 1 << lat.vertex_qubit(i, j)
    p_mask = 0
    for (i, j) in lat.plaquettes:
        p_mask |= 1 << lat.plaquette_qubit(i, j)
    if op.z & v_mask:
        raise ValidationError(f"{op} acts as Z or Y on vertex matter")
    if op.x & p_mask:
        raise ValidationError(f"{op} acts as X or Y on plaquette matter")
    link_mask = (1 << lat.n_links) - 1
    return PauliOp(lat.n_links, op.x & link_mask, op.z & link_mask, op.e)


def surface_code(lx: int, ly: int) -> SubsystemCode:
    """Disentangled surface patch on links only.

    The gauge group is abelian (r = 0), generated by the link-only star and
    plaquette operators; the stabilizer list repeats them and appends the two
    global strings, with the two product relations recorded.  The symmetric
    single-link and boundary-pair operators survive as
    ``local_symmetric_gens``.
    """
    matter = surface_code_with_matter(lx, ly)
    lat: SurfaceLattice = matter.lattice
    circ = surface_disentangler(lat)
    nm = lat.n_matter

    def image(op: PauliOp) -> PauliOp:
        return _strip_matter(circ.conjugate(op), lat)

    star_ops = [
        image(PauliOp.single(nm, lat.vertex_qubit(i, j), "X"))
        for (i, j) in lat.vertices
    ]
    plaq_ops = [
        image(PauliOp.single(nm, lat.plaquette_qubit(i, j), "Z"))
        for (i, j) in lat.plaquettes
    ]
    n_v = len(lat.vertices)
    n_p = len(lat.plaquettes)
    global_x = image(
        PauliOp.from_support(
            nm, "X", [lat.vertex_qubit(i, j) for i, j in lat.vertices]
        )
    )
    global_z = image(
        PauliOp.from_support(
            nm, "Z", [lat.plaquette_qubit(i, j) for i, j in lat.plaquettes]
        )
    )
    logical_x = image(PauliOp.from_support(nm, "X", lat.logical_x_links()))
    logical_z = image(PauliOp.from_support(nm, "Z", lat.logical_z_links()))

    local_gens = []
    smooth = set(lat.smooth_links())
    rough = set(lat.rough_links())
    n = lat.n_links
    for link in range(n):
        if link not in smooth:
            local_gens.append(PauliOp.single(n, link, "X"))
    for a, b in lat.smooth_pairs():
        local_gens.append(PauliOp.from_support(n, "X", [a, b]))
    for link in range(n):
        if link not in rough:
            local_gens.append(PauliOp.single(n, link, "Z"))
    for a, b in lat.rough_pairs():
        local_gens.append(PauliOp.from_support(n, "Z", [a, b]))

    stabs = star_ops + plaq_ops + [global_x, global_z]
    relations = [
        list(range(n_v)) + [n_v + n_p],
        list(range(n_v, n_v + n_p)) + [n_v + n_p + 1],
    ]

    return SubsystemCode(
        n,
        star_ops + plaq_ops,
        stabs,
        [(logical_x, logical_z)],
        relations=relations,
        kind="surface",
        dims=(lx, ly),
        local_symmetric_gens=local_gens,
        lattice=lat,
    )


# ---------------------------------------------------------------------------
# Small codes
# ---------------------------------------------------------------------------


def repetition_code(length: int) -> SubsystemCode:
    """Plain repetition code: nearest-neighbor ZZ checks, no gauge qubits."""
    if length < 2:
        raise ValidationError("repetition code needs at least 2 qubits")
    n = length
    checks = [
        PauliOp.from_support(n, "Z", [j, j + 1]) for j in range(n - 1)
    ]
    logical_x = PauliOp.from_support(n, "X", range(n))
    logical_z = PauliOp.single(n, 0, "Z")
    return SubsystemCode(
        n, checks, checks, [(logical_x, logical_z)],
        kind="repetition", dims=(length,),
    )


def repetition_code_global(length: int) -> SubsystemCode:
    """Repetition code with only the end-to-end parity kept as stabilizer.

    Interior X singles join the gauge group, so the pairwise checks become
    gauge operators and the sole stabilizer is the global Z parity of the
    two chain ends.
    """
    if length < 3:
        raise ValidationError("the gauged repetition chain needs length >= 3")
    n = length
    gauge = [PauliOp.from_support(n, "Z", [j, j + 1]) for j in range(n - 1)]
    gauge += [PauliOp.single(n, j, "X") for j in range(1, n - 1)]
    stab = PauliOp.from_support(n, "Z", [0, n - 1])
    logical_x = PauliOp.from_support(n, "X", range(n))
    logical_z = PauliOp.single(n, 0, "Z")
    dressed_x = PauliOp.from_support(n, "X", [0, n - 1])
    return SubsystemCode(
        n, gauge, [stab], [(logical_x, logical_z)],
        kind="repetition_global", dims=(length,),
        dressed_examples=[(0, "X", dressed_x)],
    )


def h_code() -> SubsystemCode:
    """Five-qubit code with a decoupled center qubit and weight-2 logicals."""
    n = 5
    gauge = [
        PauliOp.single(n, 4, "X"),
        PauliOp.single(n, 4, "Z"),
        PauliOp.from_support(n, "Z", [0, 1]),
        PauliOp.from_support(n, "Z", [2, 3]),
        PauliOp.from_support(n, "X", [0, 2]),
        PauliOp.from_support(n, "X", [1, 3]),
    ]
    stabs = [
        PauliOp.from_support(n, "X", [0, 1, 2, 3]),
        PauliOp.from_support(n, "Z", [0, 1, 2, 3]),
    ]
    logical_x = PauliOp.from_support(n, "X", [0, 1])
    logical_z = PauliOp.from_support(n, "Z", [0, 2])
    return SubsystemCode(n, gauge, stabs, [(logical_x, logical_z)], kind="h_code")



def four_qubit_code() -> SubsystemCode:
    """The four-qubit error-detecting code: stabilizers XXXX and ZZZZ,
    two logical qubits, distance 2."""
    n = 4
    stabs = [
        PauliOp.from_support(n, "X", [0, 1, 2, 3]),
        PauliOp.from_support(n, "Z", [0, 1, 2, 3]),
    ]
    pairs = [
        (PauliOp.from_support(n, "X", [0, 1]), PauliOp.from_support(n, "Z", [0, 2])),
        (PauliOp.from_support(n, "X", [0, 2]), PauliOp.from_support(n, "Z", [0, 1])),
    ]
    return SubsystemCode(n, list(stabs), stabs, pairs, kind="detecting")

def bacon_shor_code(lx: int, ly: int) -> SubsystemCode:
    """Bacon-Shor code on an lx-by-ly grid.

    Qubit (i, j) sits at index ``i * ly + j``.  XX gauge couplings run along
    j, ZZ couplings along i; the stabilizers are adjacent column pairs of X
    and adjacent row pairs of Z.
    """
    if lx < 2 or ly < 2:
        raise ValidationError("bacon-shor grid needs lx, ly >= 2")
    n = lx * ly

    def q(i, j):
        return i * ly + j

    gauge = []
    for j in range(ly - 1):
        for i in range(lx):
            gauge.append(PauliOp.from_support(n, "X", [q(i, j), q(i, j + 1)]))
    for i in range(lx - 1):
        for j in range(ly):
            gauge.append(PauliOp.from_support(n, "Z", [q(i, j), q(i + 1, j)]))

    stabs = []
    for j in range(ly - 1):
        qubits = [q(i, jj) for i in range(lx) for jj in (j, j + 1)]
        stabs.append(PauliOp.from_support(n, "X", qubits))
    for i in range(lx - 1):
        qubits = [q(ii, j) for j in range(ly) for ii in (i, i + 1)]
        stabs.append(PauliOp.from_support(n, "Z", qubits))

    logical_x = PauliOp.from_support(n, "X", [q(i, 0) for i in range(lx)])
    logical_z = PauliOp.from_support(n, "Z", [q(0, j) for j in range(ly)])
    return SubsystemCode(
        n, gauge, stabs, [(logical_x, logical_z)],
        kind="bacon_shor", dims=(lx, ly),
    )


def color_code_triangle(side: int) -> SubsystemCode:
    """Triangular gauge color code with only global string stabilizers.

    The boundary is a cycle of ``6*(side-1)`` qubits with corners every
    ``2*(side-1)`` positions; the remaining ``3*side**2 - 9*side + 7``
    qubits are bulk.  Gauge generators are X and Z singles on the bulk,
    consecutive pairs along each side away from the corners, and the
    corner-centered triples.  For side 2 this reproduces the seven-qubit
    code whose stabilizers are the four weight-4 strings.
    """
    if side < 2:
        raise ValidationError("triangle side must be at least 2")
    n = 3 * side * side - 3 * side + 1
    boundary = 6 * (side - 1)
    step = 2 * (side - 1)
    corners = [0, step, 2 * step]

    gauge = []
    for kind in ("X", "Z"):
        for v in range(boundary, n):
            gauge.append(PauliOp.single(n, v, kind))
        for c in range(3):
            lo = corners[c]
            for t in range(lo + 1, lo + step - 1):
                a = t % boundary
                b = (t + 1) % boundary
                gauge.append(PauliOp.from_support(n, kind, [a, b]))
        for c in corners:
            trip = [(c - 1) % boundary, c, (c + 1) % boundary]
            gauge.append(PauliOp.from_support(n, kind, trip))

    group = PauliGroup(n, gauge)
    # The gauge set is CSS, so the X and Z parts of any central element are
    # separately central; split them to get pure-type string stabilizers.
    parts = PauliGroup(n)
    for op in group.center():
        if op.x:
            parts.add(PauliOp(n, op.x, 0, 0))
        if op.z:
            parts.add(PauliOp(n, 0, op.z, 0))

    def sort_key(op):
        return (1 if op.z else 0, op.x | op.z)

    stabs = sorted(parts.ops, key=sort_key)

    side0 = [k % boundary for k in range(corners[0], corners[0] + step + 1)]
    side1 = [k % boundary for k in range(corners[1], corners[1] + step + 1)]
    logical_x = PauliOp.from_support(n, "X", side0)
    logical_z = PauliOp.from_support(n, "Z", side1)
    return SubsystemCode(
        n, gauge, stabs, [(logical_x, logical_z)],
        kind="color_triangle", dims=(side,),
    )


def multiboundary_code(n_round: int) -> SubsystemCode:
    """Minimal cyclic patch with ``n_round`` smooth and rough segments each.

    Segments alternate smooth-then-rough around a cycle; segment k owns one
    interior qubit and shares a corner qubit with each neighbor.  A smooth
    segment carries a Z string logical, a rough segment an X string, and the
    paired basis uses prefix products of the Z strings.  Encodes
    ``n_round - 1`` logical qubits.
    """
    if n_round < 2:
        raise ValidationError("cyclic patch needs at least 2 segment rounds")
    segs = 2 * n_round
    n = 2 * segs  # corners 0..segs-1, interiors segs..2*segs-1

    def corner(k):
        return k % segs

    def interior(k):
        return segs + (k % segs)

    def segment(k):
        return [corner(k - 1), interior(k), corner(k)]

    gauge = []
    for k in range(0, segs, 2):  # smooth segments
        gauge.append(PauliOp.single(n, interior(k), "Z"))
    for k in range(1, segs, 2):  # rough segments
        gauge.append(PauliOp.single(n, interior(k), "X"))
    for k in range(0, segs, 2):
        a, b, c = segment(k)
        gauge.append(PauliOp.from_support(n, "X", [a, b]))
        gauge.append(PauliOp.from_support(n, "X", [b, c]))
    for k in range(1, segs, 2):
        a, b, c = segment(k)
        gauge.append(PauliOp.from_support(n, "Z", [a, b]))
        gauge.append(PauliOp.from_support(n, "Z", [b, c]))

    x_strings = [
        PauliOp.from_support(n, "X", segment(k)) for k in range(1, segs, 2)
    ]
    z_strings = [
        PauliOp.from_support(n, "Z", segment(k)) for k in range(0, segs, 2)
    ]
    stab_x = product(x_strings)
    stab_z = product(z_strings)

    pairs = []
    for ell in range(n_round - 1):
        a = product(z_strings[: ell + 1])
        pairs.append((x_strings[ell], a))

    dressed = [
        (0, "Z", PauliOp.from_support(n, "Z", [corner(-1), corner(0)])),
        (0, "X", PauliOp.from_support(n, "X", [corner(0), corner(1)])),
    ]
    return SubsystemCode(
        n, gauge, [stab_x, stab_z], pairs,
        kind="multiboundary", dims=(n_round,), dressed_examples=dressed,
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

CODE_BUILDERS = {
    "surface": (surface_code, 2),
    "surface_matter": (surface_code_with_matter, 2),
    "repetition": (repetition_code, 1),
    "repetition_global": (repetition_code_global, 1),
    "h_code": (h_code, 0),
    "detecting": (four_qubit_code, 0),
    "bacon_shor": (bacon_shor_code, 2),
    "color_triangle": (color_code_triangle, 1),
    "multiboundary": (multiboundary_code, 1),
}


def build_code(kind: str, dims: Sequence[int] = ()) -> SubsystemCode:
    """Construct a registered code by name and dimension tuple."""
    if kind not in CODE_BUILDERS:
        raise ValidationError(
            f"unknown code {kind!r}; known: {sorted(CODE_BUILDERS)}"
        )
    builder, arity = CODE_BUILDERS[kind]
    dims = tuple(int(d) for d in dims)
    if len(dims) != arity:
        raise ValidationError(f"code {kind!r} takes {arity} dimension(s)")
    return builder(*dims)
