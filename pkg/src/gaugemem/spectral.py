"""Symmetry-resolved exact diagonalization.

A :class:`Sector` fixes the eigenvalues of a set of commuting Pauli
symmetries.  The symmetries are rotated onto single-qubit Z operators by a
Clifford circuit, after which the sector basis is simply the set of
computational labels with the target bits frozen; Hamiltonian terms are
rotated through the same circuit and scattered into a dense matrix in
O(terms * dim) work.

The module also carries the spectral observables used downstream: consecutive
level-spacing ratios with their random-matrix and Poisson references, the
twofold-pairing check, and bipartite entanglement entropies of eigenvectors.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np
import psutil
import scipy.linalg

from .errors import DataQualityError, ResourceRefusalError, ValidationError
from .hamiltonians import TermList
from .pauli import Circuit, PauliOp, canonicalize_symmetries

__all__ = [
    "Sector",
    "set_memory_budget",
    "PackedTerms",
    "require_memory",
    "spectrum",
    "spacing_ratios",
    "mean_spacing_ratio",
    "ratio_histogram",
    "goe_ratio_density",
    "poisson_ratio_density",
    "GOE_MEAN_RATIO",
    "POISSON_MEAN_RATIO",
    "max_pairing_gap",
    "entanglement_entropy",
    "page_entropy",
    "register_bipartition",
]

# folded-ratio ensemble means (exact surmise values)
GOE_MEAN_RATIO = 4.0 - 2.0 * math.sqrt(3.0)
POISSON_MEAN_RATIO = 2.0 * math.log(2.0) - 1.0


# optional hard cap below the machine's free memory, set by the CLI
_MEMORY_BUDGET: Optional[float] = None


def set_memory_budget(nbytes: Optional[float]) -> None:
    """Cap dense allocations below the given byte count (None lifts it)."""
    global _MEMORY_BUDGET
    _MEMORY_BUDGET = None if nbytes is None else float(nbytes)


def require_memory(nbytes: float, what: str = "dense workspace") -> None:
    """Refuse up front when the job would not fit in available memory."""
    available = float(psutil.virtual_memory().available)
    if _MEMORY_BUDGET is not None:
        available = min(available, _MEMORY_BUDGET)
    if nbytes > available:
        raise ResourceRefusalError(
            f"{what} needs {nbytes / 2**30:.1f} GiB "
            f"but only {available / 2**30:.1f} GiB is available"
        )


class PackedTerms:
    """Terms rotated into a sector frame and packed onto its free qubits."""

    def __init__(self, dim: int, rows: list, offset: float, is_real: bool):
        self.dim = dim
        self.rows = rows  # (packed_x, packed_z, amplitude)
        self.offset = offset
        self.is_real = is_real

    @property
    def dtype(self):
        return np.float64 if self.is_real else np.complex128

    def apply(self, arr: np.ndarray) -> np.ndarray:
        """Apply the packed operator to a vector or to matrix columns."""
        idx = np.arange(self.dim, dtype=np.uint64)
        out = np.zeros(
            arr.shape, dtype=np.result_type(arr.dtype, self.dtype)
        )
        if self.offset:
            out += self.offset * arr
        for px, pz, amp in self.rows:
            src = idx ^ np.uint64(px)
            vals = amp * _parity_signs(src, pz)
            if arr.ndim == 1:
                out += vals * arr[src]
            else:
                out += vals[:, None] * arr[src, :]
        return out

    def matrix(self) -> np.ndarray:
        """Dense matrix on the sector basis."""
        itemsize = 8 if self.is_real else 16
        require_memory(1.3 * self.dim * self.dim * itemsize, "dense operator")
        mat = np.zeros((self.dim, self.dim), dtype=self.dtype)
        if self.offset:
            np.fill_diagonal(mat, self.offset)
        cols = np.arange(self.dim, dtype=np.uint64)
        for px, pz, amp in self.rows:
            rows = cols ^ np.uint64(px)
            mat[rows, cols] += amp * _parity_signs(cols, pz)
        return mat


def _parity_signs(indices: np.ndarray, mask: int) -> np.ndarray:
    par = np.bitwise_count(indices & np.uint64(mask)).astype(np.float64)
    return 1.0 - 2.0 * (par % 2.0)


class Sector:
    """A joint eigenspace of commuting Pauli symmetries.

    ``bits[i] = 0`` selects the +1 eigenvalue of ``symmetries[i]`` and
    ``bits[i] = 1`` the -1 eigenvalue.  States restricted to the sector are
    expressed in the rotated frame produced by the canonicalization circuit;
    :meth:`to_physical` undoes the rotation.
    """

    def __init__(
        self,
        n: int,
        symmetries: Sequence[PauliOp],
        bits: Sequence[int],
        targets: Optional[Sequence[int]] = None,
    ):
        if len(bits) != len(symmetries):
            raise ValidationError("one eigenvalue bit per symmetry required")
        if targets is None:
            targets = list(range(len(symmetries)))
        self.n = n
        self.symmetries = list(symmetries)
        self.bits = [int(b) & 1 for b in bits]
        self.targets = list(targets)
        if self.symmetries:
            self.circuit = canonicalize_symmetries(self.symmetries, self.targets)
        else:
            self.circuit = Circuit(n)
        self.free = sorted(set(range(n)) - set(self.targets))
        self.dim = 1 << len(self.free)
        self.fixed_mask = 0
        self.fixed_ones = 0
        for t, b in zip(self.targets, self.bits):
            self.fixed_mask |= 1 << t
            self.fixed_ones |= b << t

    @property
    def labels(self) -> np.ndarray:
        """Rotated-frame basis labels of the sector states."""
        p = np.arange(self.dim, dtype=np.uint64)
        out = np.full(self.dim, self.fixed_ones, dtype=np.uint64)
        for k, q in enumerate(self.free):
            out |= ((p >> np.uint64(k)) & np.uint64(1)) << np.uint64(q)
        return out

    def pack_terms(self, terms: TermList) -> PackedTerms:
        """Rotate terms into the sector frame and pack the free qubits.

        Every term must preserve the sector: after rotation its X part may
        not touch a target qubit.
        """
        if terms.n != self.n:
            raise ValidationError("term width does not match the sector")
        rows = []
        is_real = True
        for coeff, op in terms:
            rot = self.circuit.conjugate(op)
            if rot.x & self.fixed_mask:
                raise ValidationError(
                    f"term {op.label()} does not preserve the sector"
                )
            sign = -1.0 if (rot.z & self.fixed_ones).bit_count() % 2 else 1.0
            px = 0
            pz = 0
            for k, q in enumerate(self.free):
                px |= ((rot.x >> q) & 1) << k
                pz |= ((rot.z >> q) & 1) << k
            amp = coeff * sign * (1j ** rot.e)
            if amp.imag == 0.0:
                amp = amp.real
            else:
                is_real = False
            rows.append((px, pz, amp))
        return PackedTerms(self.dim, rows, terms.offset, is_real)

    def matrix(self, terms: TermList) -> np.ndarray:
        return self.pack_terms(terms).matrix()

    def restrict(self, state: np.ndarray) -> np.ndarray:
        """Project a full physical state onto the sector basis."""
        rotated = self.circuit.apply(state)
        return rotated[self.labels]

    def embed(self, vec: np.ndarray) -> np.ndarray:
        """Rotated-frame full-register state with sector amplitudes placed."""
        full = np.zeros(1 << self.n, dtype=vec.dtype)
        full[self.labels] = vec
        return full

    def to_physical(self, vec: np.ndarray) -> np.ndarray:
        """Map a sector vector back to the physical full register."""
        return self.circuit.inverse().apply(self.embed(vec))

    def __repr__(self) -> str:
        sign = "".join("-" if b else "+" for b in self.bits)
        return f"<Sector n={self.n} dim={self.dim} signs={sign or 'full'}>"


# ---------------------------------------------------------------------------
# dense spectra
# ---------------------------------------------------------------------------


def spectrum(mat: np.ndarray, vectors: bool = False):
    """Eigenvalues (and optionally eigenvectors) of a dense Hermitian matrix."""
    itemsize = mat.dtype.itemsize
    require_memory((2.2 if vectors else 1.3) * mat.shape[0] ** 2 * itemsize)
    if vectors:
        return scipy.linalg.eigh(mat, check_finite=False)
    return scipy.linalg.eigh(
        mat, eigvals_only=True, overwrite_a=True, check_finite=False,
        driver="ev",
    )


def spacing_ratios(evals: np.ndarray, guard: float = 1e-12) -> np.ndarray:
    """Folded consecutive-gap ratios min(r, 1/r) of a sorted spectrum.

    Degenerate or near-degenerate levels make the ratio meaningless, so any
    gap below ``guard`` times the spectral width raises
    :class:`DataQualityError` rather than returning junk statistics.
    """
    evals = np.sort(np.asarray(evals, dtype=np.float64))
    if evals.size < 3:
        raise ValidationError("need at least three levels for spacing ratios")
    width = evals[-1] - evals[0]
    gaps = np.diff(evals)
    if width <= 0 or gaps.min() < guard * width:
        raise DataQualityError(
            "spectrum contains (near-)degenerate levels; "
            "ratios would be dominated by them"
        )
    left = gaps[:-1]
    right = gaps[1:]
    return np.minimum(left, right) / np.maximum(left, right)


def mean_spacing_ratio(evals: np.ndarray, guard: float = 1e-12) -> float:
    return float(spacing_ratios(evals, guard).mean())


def ratio_histogram(ratios: np.ndarray, bins: int = 50):
    """Normalized histogram of folded ratios on [0, 1]."""
    edges = np.linspace(0.0, 1.0, bins + 1)
    density, _ = np.histogram(ratios, bins=edges, density=True)
    return edges, density


def goe_ratio_density(r: np.ndarray) -> np.ndarray:
    """Folded Wigner-like surmise for the orthogonal ensemble.

    The unfolded surmise (27/8)(r + r^2)/(1 + r + r^2)^(5/2) is self-dual
    under r -> 1/r, so folding to [0, 1] doubles it; the folded mean is
    exactly 4 - 2*sqrt(3).
    """
    r = np.asarray(r, dtype=np.float64)
    return (27.0 / 4.0) * (r + r * r) / (1.0 + r + r * r) ** 2.5


def poisson_ratio_density(r: np.ndarray) -> np.ndarray:
    """Folded ratio density of an uncorrelated (Poisson) spectrum."""
    r = np.asarray(r, dtype=np.float64)
    return 2.0 / (1.0 + r) ** 2


def max_pairing_gap(evals: np.ndarray) -> float:
    """Largest intra-pair splitting relative to the spectral width.

    Checks that the sorted spectrum comes in twofold-degenerate pairs, as it
    must when two anticommuting operators both commute with the Hamiltonian.
    """
    evals = np.sort(np.asarray(evals, dtype=np.float64))
    if evals.size % 2:
        raise ValidationError("odd spectrum size cannot pair up")
    width = evals[-1] - evals[0]
    pairs = evals.reshape(-1, 2)
    return float((pairs[:, 1] - pairs[:, 0]).max() / width)


# ---------------------------------------------------------------------------
# entanglement
# ---------------------------------------------------------------------------


def entanglement_entropy(state: np.ndarray, part: Iterable[int]) -> float:
    """Von Neumann entropy (nats) of ``part`` for a pure full-register state."""
    n = int(round(math.log2(state.size)))
    if 1 << n != state.size:
        raise ValidationError("state length is not a power of two")
    part = sorted(set(part))
    rest = [q for q in range(n) if q not in part]
    if not part or not rest:
        return 0.0
    idx = np.arange(state.size, dtype=np.uint64)
    row = np.zeros(state.size, dtype=np.uint64)
    for k, q in enumerate(part):
        row |= ((idx >> np.uint64(q)) & np.uint64(1)) << np.uint64(k)
    col = np.zeros(state.size, dtype=np.uint64)
    for k, q in enumerate(rest):
        col |= ((idx >> np.uint64(q)) & np.uint64(1)) << np.uint64(k)
    mat = np.zeros((1 << len(part), 1 << len(rest)), dtype=state.dtype)
    mat[row, col] = state
    sv = scipy.linalg.svd(mat, compute_uv=False)
    p = sv * sv
    p = p[p > 1e-15]
    return float(-(p * np.log(p)).sum())


def page_entropy(n_a: int, n_b: int) -> float:
    """Random-state average entropy for an (n_a, n_b)-qubit bipartition."""
    return n_a * math.log(2.0) - 2.0**n_a / 2.0 ** (n_b + 1)


def register_bipartition(lattice, size: Optional[int] = None) -> list:
    """The first ``size`` links of the register, by default the larger half.

    Vertical links come first in the register, row by row from the bottom,
    so this is a staircase-shaped spatial region.  It keeps the left smooth
    column (the logical string) entirely on one side while splitting every
    other protected string across the cut; mid-spectrum eigenstate entropy
    then plateaus one string's worth below the unconstrained random-state
    value.  Cuts splitting all strings overshoot the plain random-state
    reference, cuts isolating two strings fall far below it.
    """
    n = lattice.n_links
    if size is None:
        size = (n + 1) // 2
    if not 0 < size <= n:
        raise ValidationError(f"bipartition size {size} outside 1..{n}")
    return list(range(size))
