"""Phase-tracked Pauli operators, Clifford circuits, and GF(2) group algebra.

Conventions used throughout the package:

* A Pauli operator on ``n`` qubits is stored as ``i**e * X**x * Z**z`` where
  ``x`` and ``z`` are Python integers interpreted as bitmasks (qubit ``q`` is
  bit ``q``, so qubit 0 is the least significant bit) and ``e`` is an exponent
  of ``i`` modulo 4.  On every qubit the X factor stands to the left of the
  Z factor, so ``Y = i * X * Z`` carries ``e = 1`` per Y letter.
* In text labels qubit 0 is the leftmost character.  The printed sign is the
  coefficient relative to the letters, e.g. the product of ``X`` and ``Z`` on
  one qubit prints as ``-iY``.
* Computational basis states are indexed by integers with the same bit
  convention: bit ``q`` of the index is the value of qubit ``q``.

Everything here is exact integer arithmetic; no floating point enters until
an operator is expanded onto a dense state or matrix.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ResourceRefusalError, ValidationError

_SIGN_LABELS = {0: "", 1: "i", 2: "-", 3: "-i"}
_SIGN_PREFIXES = {"": 0, "+": 0, "i": 1, "+i": 1, "-": 2, "-i": 3}


class PauliOp:
    """An n-qubit Pauli operator with an exact i**e phase.

    Parameters
    ----------
    n : int
        Number of qubits.
    x, z : int
        X and Z bitmasks; bit ``q`` acts on qubit ``q``.
    e : int
        Exponent of ``i`` in front of ``X**x * Z**z``, taken mod 4.
    """

    __slots__ = ("n", "x", "z", "e")

    def __init__(self, n: int, x: int = 0, z: int = 0, e: int = 0):
        if n < 0:
            raise ValidationError("qubit count must be nonnegative")
        mask = (1 << n) - 1
        if x & ~mask or z & ~mask:
            raise ValidationError("x/z mask has bits outside the qubit range")
        self.n = n
        self.x = x
        self.z = z
        self.e = e % 4

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(n, 0, 0, 0)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> "PauliOp":
        """One-qubit X, Y, or Z embedded on ``qubit`` of an n-qubit register."""
        bit = 1 << qubit
        if kind == "X":
            return cls(n, bit, 0, 0)
        if kind == "Z":
            return cls(n, 0, bit, 0)
        if kind == "Y":
            return cls(n, bit, bit, 1)
        raise ValidationError(f"unknown Pauli kind {kind!r}")

    @classmethod
    def from_support(cls, n: int, kind: str, qubits: Iterable[int]) -> "PauliOp":
        """Uniform X-, Y-, or Z-string supported on ``qubits``."""
        mask = 0
        count = 0
        for q in qubits:
            mask |= 1 << q
            count += 1
        if kind == "X":
            return cls(n, mask, 0, 0)
        if kind == "Z":
            return cls(n, 0, mask, 0)
        if kind == "Y":
            return cls(n, mask, mask, count)
        raise ValidationError(f"unknown Pauli kind {kind!r}")

    @classmethod
    def from_label(cls, label: str) -> "PauliOp":
        """Parse a text label such as ``XIZ``, ``-iYY`` or ``+Z``.

        Qubit 0 is the leftmost letter.  The optional prefix is one of
        ``+ - i +i -i``.
        """
        body = label.strip()
        prefix = ""
        while body and body[0] in "+-i":
            prefix += body[0]
            body = body[1:]
        if prefix not in _SIGN_PREFIXES:
            raise ValidationError(f"bad sign prefix in Pauli label {label!r}")
        if not body:
            raise ValidationError(f"empty Pauli body in label {label!r}")
        x = z = 0
        e = _SIGN_PREFIXES[prefix]
        for q, ch in enumerate(body):
            if ch == "I":
                continue
            if ch == "X":
                x |= 1 << q
            elif ch == "Z":
                z |= 1 << q
            elif ch == "Y":
                x |= 1 << q
                z |= 1 << q
                e += 1
            else:
                raise ValidationError(f"bad Pauli letter {ch!r} in {label!r}")
        return cls(len(body), x, z, e)

    # -- basic queries -----------------------------------------------------

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> list:
        m = self.x | self.z
        return [q for q in range(self.n) if (m >> q) & 1]

    def is_hermitian(self) -> bool:
        # i**e X^x Z^z is Hermitian iff e matches the XZ overlap parity.
        return (self.e - (self.x & self.z).bit_count()) % 2 == 0

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0 and self.e == 0

    def commutes(self, other: "PauliOp") -> bool:
        a = (self.x & other.z).bit_count()
        b = (self.z & other.x).bit_count()
        return (a + b) % 2 == 0

    def sym_vector(self) -> int:
        """The symplectic GF(2) vector ``x | (z << n)`` (phase dropped)."""
        return self.x | (self.z << self.n)

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        if self.n != other.n:
            raise ValidationError("qubit count mismatch in Pauli product")
        # Commuting self's Z block past other's X block costs a minus sign
        # per overlapping qubit.
        e = self.e + other.e + 2 * (self.z & other.x).bit_count()
        return PauliOp(self.n, self.x ^ other.x, self.z ^ other.z, e)

    def inverse(self) -> "PauliOp":
        w = (self.x & self.z).bit_count()
        return PauliOp(self.n, self.x, self.z, -self.e - 2 * w)

    def scale_i(self, k: int) -> "PauliOp":
        """Multiply by ``i**k``."""
        return PauliOp(self.n, self.x, self.z, self.e + k)

    def embed(self, n_new: int, mapping: Sequence[int]) -> "PauliOp":
        """Re-index onto a larger register; ``mapping[q]`` is the new slot."""
        x = z = 0
        for q in range(self.n):
            if (self.x >> q) & 1:
                x |= 1 << mapping[q]
            if (self.z >> q) & 1:
                z |= 1 << mapping[q]
        return PauliOp(n_new, x, z, self.e)

    # -- presentation --------------------------------------------------------

    def label(self) -> str:
        chars = []
        n_y = 0
        for q in range(self.n):
            xb = (self.x >> q) & 1
            zb = (self.z >> q) & 1
            if xb and zb:
                chars.append("Y")
                n_y += 1
            elif xb:
                chars.append("X")
            elif zb:
                chars.append("Z")
            else:
                chars.append("I")
        sign = _SIGN_LABELS[(self.e - n_y) % 4]
        return sign + "".join(chars)

    def __str__(self) -> str:
        return self.label()

    def __repr__(self) -> str:
        return f"PauliOp({self.label()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOp):
            return NotImplemented
        return (self.n, self.x, self.z, self.e) == (other.n, other.x, other.z, other.e)

    def __hash__(self) -> int:
        return hash((self.n, self.x, self.z, self.e))

    # -- dense expansion ------------------------------------------------------

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n`` matrix.  Only sensible for small n."""
        if self.n > 12:
            raise ResourceRefusalError("dense matrix refused above 12 qubits")
        dim = 1 << self.n
        idx = np.arange(dim)
        src = idx ^ self.x
        signs = 1.0 - 2.0 * (parity64(src & self.z))
        mat = np.zeros((dim, dim), dtype=complex)
        mat[idx, src] = (1j ** self.e) * signs
        return mat


def parity64(values: np.ndarray) -> np.ndarray:
    """Bit-parity of an unsigned integer array, as 0/1 floats."""
    return (np.bitwise_count(values.astype(np.uint64)) & 1).astype(np.float64)


def apply_pauli(p: PauliOp, psi: np.ndarray) -> np.ndarray:
    """Apply ``p`` to a dense state vector indexed by basis labels."""
    dim = psi.shape[0]
    if dim != 1 << p.n:
        raise ValidationError("state dimension does not match qubit count")
    idx = np.arange(dim, dtype=np.uint64)
    src = idx ^ np.uint64(p.x)
    signs = 1.0 - 2.0 * parity64(src & np.uint64(p.z))
    out = psi[src] * signs
    if p.e % 4 == 1:
        out = out * 1j
    elif p.e % 4 == 2:
        out = -out
    elif p.e % 4 == 3:
        out = out * (-1j)
    return out


def product(ops: Iterable[PauliOp]) -> PauliOp:
    """Left-to-right product of an operator sequence."""
    it = iter(ops)
    try:
        acc = next(it)
    except StopIteration:
        raise ValidationError("product of an empty operator sequence")
    for op in it:
        acc = acc * op
    return acc


# ---------------------------------------------------------------------------
# Clifford circuits
# ---------------------------------------------------------------------------

_GATES_1Q = {"H", "S", "SDG", "X"}
_GATES_2Q = {"CX", "CZ"}


class Circuit:
    """A list of Clifford gates over {H, S, SDG, X, CX, CZ}.

    The first gate in the list acts first, both when the circuit is applied
    to a state and when an operator is conjugated through it.  Conjugation
    maps ``P`` to ``U P U^dagger`` with ``U = g_k ... g_1``.
    """

    def __init__(self, n: int, gates: Optional[Iterable[tuple]] = None):
        self.n = n
        self.gates: list = []
        if gates:
            for g in gates:
                self.append(*g)

    def append(self, name: str, *qubits: int) -> None:
        if name in _GATES_1Q:
            if len(qubits) != 1:
                raise ValidationError(f"{name} takes one qubit")
        elif name in _GATES_2Q:
            if len(qubits) != 2 or qubits[0] == qubits[1]:
                raise ValidationError(f"{name} takes two distinct qubits")
        else:
            raise ValidationError(f"unknown gate {name!r}")
        for q in qubits:
            if not 0 <= q < self.n:
                raise ValidationError(f"gate qubit {q} outside register")
        self.gates.append((name,) + tuple(qubits))

    def append_swap(self, a: int, b: int) -> None:
        self.append("CX", a, b)
        self.append("CX", b, a)
        self.append("CX", a, b)

    def extend(self, other: "Circuit") -> None:
        if other.n != self.n:
            raise ValidationError("circuit width mismatch")
        self.gates.extend(other.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def inverse(self) -> "Circuit":
        inv = Circuit(self.n)
        swap = {"S": "SDG", "SDG": "S"}
        for g in reversed(self.gates):
            inv.gates.append((swap.get(g[0], g[0]),) + g[1:])
        return inv

    # -- operator conjugation ------------------------------------------------

    def conjugate(self, p: PauliOp) -> PauliOp:
        """Return ``U p U^dagger`` for this circuit ``U``."""
        if p.n != self.n:
            raise ValidationError("operator width does not match circuit")
        x, z, e = p.x, p.z, p.e
        for g in self.gates:
            name = g[0]
            if name == "CX":
                c, t = g[1], g[2]
                # X on the control copies to the target, Z on the target
                # copies to the control; no phase is picked up in this
                # X-before-Z convention.
                if (x >> c) & 1:
                    x ^= 1 << t
                if (z >> t) & 1:
                    z ^= 1 << c
            elif name == "H":
                q = g[1]
                xb = (x >> q) & 1
                zb = (z >> q) & 1
                if xb != zb:
                    x ^= 1 << q
                    z ^= 1 << q
                elif xb and zb:
                    e += 2  # XZ -> ZX
            elif name == "S":
                q = g[1]
                if (x >> q) & 1:
                    z ^= 1 << q
                    e += 1
            elif name == "SDG":
                q = g[1]
                if (x >> q) & 1:
                    z ^= 1 << q
                    e += 3
            elif name == "X":
                q = g[1]
                if (z >> q) & 1:
                    e += 2
            elif name == "CZ":
                c, t = g[1], g[2]
                if (x >> c) & 1:
                    z ^= 1 << t
                if (x >> t) & 1:
                    z ^= 1 << c
                if ((x >> c) & 1) and ((x >> t) & 1):
                    e += 2
        return PauliOp(self.n, x, z, e)

    # -- state application -----------------------------------------------------

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Apply the circuit to a dense state vector (first gate first)."""
        dim = 1 << self.n
        if psi.shape[0] != dim:
            raise ValidationError("state dimension does not match circuit")
        out = np.array(psi, copy=True)
        idx = np.arange(dim)
        for g in self.gates:
            name = g[0]
            if name == "CX":
                c, t = g[1], g[2]
                src = idx ^ (((idx >> c) & 1) << t)
                out = out[src]
            elif name == "H":
                q = g[1]
                bit = 1 << q
                lo = (idx & bit) == 0
                a = out[idx[lo]]
                b = out[idx[lo] | bit]
                inv_sqrt2 = 1.0 / np.sqrt(2.0)
                new = np.empty_like(out)
                new[idx[lo]] = (a + b) * inv_sqrt2
                new[idx[lo] | bit] = (a - b) * inv_sqrt2
                out = new
            elif name in ("S", "SDG"):
                q = g[1]
                if not np.iscomplexobj(out):
                    out = out.astype(complex)
                phase = 1j if name == "S" else -1j
                sel = (idx >> q) & 1 == 1
                out[sel] *= phase
            elif name == "X":
                q = g[1]
                out = out[idx ^ (1 << q)]
            elif name == "CZ":
                c, t = g[1], g[2]
                sel = (((idx >> c) & 1) & ((idx >> t) & 1)) == 1
                out = out.copy()
                out[sel] *= -1.0
        return out


# ---------------------------------------------------------------------------
# GF(2) linear algebra on integer bit-vectors
# ---------------------------------------------------------------------------


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank of a GF(2) matrix given as integer bit-rows."""
    pivots: list = []
    for v in rows:
        for p in pivots:
            v = min(v, v ^ p)
        if v:
            pivots.append(v)
            pivots.sort(reverse=True)
    return len(pivots)


def gf2_nullspace(rows: Sequence[int], width: int) -> list:
    """Basis of {v : row . v = 0 (mod 2) for all rows}, as bit-vectors."""
    work = list(rows)
    pivot_cols = []
    r = 0
    for col in range(width):
        bit = 1 << col
        pivot = None
        for i in range(r, len(work)):
            if work[i] & bit:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and (work[i] & bit):
                work[i] ^= work[r]
        pivot_cols.append(col)
        r += 1
    free_cols = [c for c in range(width) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        v = 1 << f
        for i, c in enumerate(pivot_cols):
            if work[i] & (1 << f):
                v |= 1 << c
        basis.append(v)
    return basis


class PauliGroup:
    """A subgroup of the Pauli group tracked as a GF(2) row space.

    Rows are kept in reduced echelon form over the symplectic vectors
    ``x | (z << n)``; every row also carries an exact :class:`PauliOp` that
    is the corresponding product of the generators fed in, so phases are
    never lost.
    """

    def __init__(self, n: int, gens: Optional[Iterable[PauliOp]] = None):
        self.n = n
        self._vecs: list = []
        self._ops: list = []
        if gens is not None:
            for g in gens:
                self.add(g)

    @property
    def rank(self) -> int:
        return len(self._vecs)

    @property
    def ops(self) -> list:
        return list(self._ops)

    def _reduce(self, p: PauliOp):
        """Reduce p's vector; return (residual_vector, used_row_indices)."""
        v = p.sym_vector()
        used = []
        for i, rv in enumerate(self._vecs):
            top = rv.bit_length() - 1
            if (v >> top) & 1:
                v ^= rv
                used.append(i)
        return v, used

    def add(self, p: PauliOp) -> bool:
        """Insert a generator; returns False if it was already in the span."""
        if p.n != self.n:
            raise ValidationError("operator width does not match group")
        v, _ = self._reduce(p)
        if v == 0:
            return False
        top = v.bit_length() - 1
        # Reduce again, this time multiplying the ops so the stored operator
        # stays phase-consistent with the reduced vector.
        acc = p
        vv = p.sym_vector()
        for i, rv in enumerate(self._vecs):
            tp = rv.bit_length() - 1
            if (vv >> tp) & 1:
                vv ^= rv
                acc = acc * self._ops[i]
        # Back-substitute the new pivot out of existing rows.
        for i in range(len(self._vecs)):
            if (self._vecs[i] >> top) & 1:
                self._vecs[i] ^= vv
                self._ops[i] = self._ops[i] * acc
        # Insert keeping rows sorted by pivot, highest first.
        pos = 0
        while pos < len(self._vecs) and self._vecs[pos].bit_length() - 1 > top:
            pos += 1
        self._vecs.insert(pos, vv)
        self._ops.insert(pos, acc)
        return True

    def contains_vector(self, p: PauliOp) -> bool:
        """Membership of the symplectic vector, ignoring the phase."""
        v, _ = self._reduce(p)
        return v == 0

    def span_contains(self, p: PauliOp) -> Optional[int]:
        """If p's (x, z) lies in the span, return d with
        ``p = i**d * product(rows used, ascending row order)``; else None.
        """
        v, used = self._reduce(p)
        if v != 0:
            return None
        if not used:
            return p.e % 4
        prod = product([self._ops[i] for i in sorted(used)])
        if prod.x != p.x or prod.z != p.z:
            raise AssertionError("row bookkeeping out of sync")
        return (p.e - prod.e) % 4

    def center(self) -> list:
        """Generators (as products of rows) of the subgroup commuting with
        every row."""
        k = len(self._vecs)
        gram = []
        for i in range(k):
            row = 0
            for j in range(k):
                if not self._ops[i].commutes(self._ops[j]):
                    row |= 1 << j
            gram.append(row)
        out = []
        for u in gf2_nullspace(gram, k):
            members = [self._ops[j] for j in range(k) if (u >> j) & 1]
            if members:
                out.append(product(members))
        return out

    def centralizer_gens(self, hermitian: bool = True) -> list:
        """Generators of the full-Pauli-group centralizer of this group.

        Phases are chosen so each generator is Hermitian with a plus sign.
        """
        n = self.n
        mask = (1 << n) - 1
        rows = []
        for op in self._ops:
            rows.append(op.z | (op.x << n))  # swapped blocks: symplectic form
        out = []
        for w in gf2_nullspace(rows, 2 * n):
            x = w & mask
            z = w >> n
            e = (x & z).bit_count() % 4 if hermitian else 0
            out.append(PauliOp(n, x, z, e))
        return out

    def quotient_reps(self, sub: "PauliGroup") -> list:
        """Coset representatives of this group modulo a subgroup span."""
        acc = PauliGroup(self.n, sub._ops)
        reps = []
        for op in self._ops:
            if acc.add(op):
                reps.append(op)
        return reps

    def min_coset_weight(self, reps: Sequence[PauliOp], max_rank: int = 14) -> int:
        """Minimum Pauli weight over the cosets ``rep * <group>``.

        Enumerates all ``2**rank`` subgroup elements by a Gray walk, so the
        group rank is capped by ``max_rank``.
        """
        if self.rank > max_rank:
            raise ResourceRefusalError(
                f"coset enumeration over rank {self.rank} exceeds the "
                f"budget of {max_rank}"
            )
        gens = [(op.x, op.z) for op in self._ops]
        cur = [(r.x, r.z) for r in reps]
        best = min(((x | z).bit_count() for x, z in cur), default=0)
        for step in range(1, 1 << len(gens)):
            flip = (step & -step).bit_length() - 1
            gx, gz = gens[flip]
            cur = [(x ^ gx, z ^ gz) for x, z in cur]
            for x, z in cur:
                w = (x | z).bit_count()
                if w < best:
                    best = w
        return best


def symplectic_pairs(ops: Sequence[PauliOp]) -> list:
    """Pair an even-sized symplectic basis into (a_i, b_i) with
    ``a_i`` anticommuting with ``b_i`` only.

    Standard symplectic Gram-Schmidt; remaining operators are corrected by
    ``c -> c * a**<c,b> * b**<c,a>`` after each pair is extracted.
    """
    pool = list(ops)
    pairs = []
    while pool:
        a = pool.pop(0)
        partner = None
        for i, c in enumerate(pool):
            if not a.commutes(c):
                partner = i
                break
        if partner is None:
            raise ValidationError("operator set is not symplectically paired")
        b = pool.pop(partner)
        fixed = []
        for c in pool:
            if not c.commutes(b):
                c = c * a
            if not c.commutes(a):
                c = c * b
            fixed.append(c)
        pool = fixed
        pairs.append((a, b))
    return pairs


# ---------------------------------------------------------------------------
# Symmetry canonicalization
# ---------------------------------------------------------------------------


def canonicalize_symmetries(
    syms: Sequence[PauliOp], targets: Sequence[int]
) -> Circuit:
    """Build a Clifford circuit mapping each symmetry to +Z on its target.

    Parameters
    ----------
    syms : sequence of PauliOp
        Pairwise commuting, independent, Hermitian operators squaring to +1.
    targets : sequence of int
        Distinct qubits; symmetry ``i`` is mapped to ``Z`` on ``targets[i]``.

    Returns
    -------
    Circuit
        ``circuit.conjugate(syms[i])`` equals plus ``Z`` on ``targets[i]``
        exactly.  Qubits already designated for earlier symmetries are never
        touched by later stages, so all images hold simultaneously.
    """
    if len(syms) != len(targets):
        raise ValidationError("one target qubit per symmetry is required")
    if len(set(targets)) != len(targets):
        raise ValidationError("target qubits must be distinct")
    if not syms:
        return Circuit(0)
    n = syms[0].n
    for s in syms:
        if s.n != n:
            raise ValidationError("symmetries act on different registers")
        if not s.is_hermitian():
            # Hermitian Paulis are unitary, so they square to +1.
            raise ValidationError(f"symmetry {s} does not square to +1")
    for i, a in enumerate(syms):
        for b in syms[i + 1:]:
            if not a.commutes(b):
                raise ValidationError("symmetries must pairwise commute")
    if gf2_rank([s.sym_vector() for s in syms]) != len(syms):
        raise ValidationError("symmetries must be independent")
    for t in targets:
        if not 0 <= t < n:
            raise ValidationError(f"target qubit {t} outside register")

    circ = Circuit(n)
    done: list = []  # target qubits already pinned to Z
    for s, tgt in zip(syms, targets):
        cur = circ.conjugate(s)
        # Commutation with the previously pinned Z's forces x to vanish there.
        if cur.x != 0:
            xs = [q for q in range(n) if (cur.x >> q) & 1]
            q = tgt if ((cur.x >> tgt) & 1) and tgt not in done else xs[0]
            for j in xs:
                if j != q:
                    circ.append("CX", q, j)
            cur = circ.conjugate(s)
            if (cur.z >> q) & 1:
                circ.append("S", q)
                cur = circ.conjugate(s)
            for j in range(n):
                if j != q and ((cur.z >> j) & 1):
                    circ.append("CZ", q, j)
            circ.append("H", q)
        else:
            zs = [q for q in range(n) if (cur.z >> q) & 1 and q not in done]
            if not zs:
                raise ValidationError("symmetry dependent on earlier ones")
            q = tgt if ((cur.z >> tgt) & 1) and tgt not in done else zs[0]
            for j in range(n):
                if j != q and ((cur.z >> j) & 1):
                    circ.append("CX", j, q)
        cur = circ.conjugate(s)
        if cur.e == 2:
            circ.append("X", q)
        if q != tgt:
            circ.append_swap(q, tgt)
        cur = circ.conjugate(s)
        if cur != PauliOp.single(n, tgt, "Z"):
            raise AssertionError("canonicalization failed to pin a symmetry")
        done.append(tgt)
    return circ
