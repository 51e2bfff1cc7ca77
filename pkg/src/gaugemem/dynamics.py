"""Real-time dynamics on exact eigenbases.

Everything here works with the output of one dense diagonalization: quench
expectation series evaluated in batches of times, diagonal-ensemble values
with degenerate levels grouped into clusters, and memory lifetimes defined
as the first crossing of an observable through its diagonal-ensemble value.
Also provides the initial states used by the quench studies: link-basis
product states carrying one protected logical charge, and random sector
states with a sharp logical Bloch vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .codes import SubsystemCode
from .errors import ValidationError
from .hamiltonians import TermList
from .pauli import PauliOp, apply_pauli
from .spectral import PackedTerms, Sector

__all__ = [
    "product_state",
    "ChargeState",
    "charge_product_state",
    "logical_bloch_ops",
    "bloch_sector_state",
    "expectation_series",
    "diagonal_ensemble",
    "first_crossing_time",
    "exp_pauli_rotation",
    "random_gauge_rotation_drift",
    "powerlaw_fit",
]


def product_state(n: int, plus_links: Sequence[int]) -> np.ndarray:
    """Product state with ``|+>`` on the named qubits and ``|0>`` elsewhere."""
    plus_mask = 0
    for q in plus_links:
        plus_mask |= 1 << q
    zero_mask = ((1 << n) - 1) ^ plus_mask
    idx = np.arange(1 << n, dtype=np.uint64)
    state = np.zeros(1 << n, dtype=np.float64)
    sel = (idx & np.uint64(zero_mask)) == 0
    state[sel] = 2.0 ** (-bin(plus_mask).count("1") / 2.0)
    return state


@dataclass
class ChargeState:
    """A logical-carrying product state with its exact charge profile."""

    state: np.ndarray
    minus_links: tuple
    basis: str  # "z": bitstring state, |1> on minus_links; "x": |-> there
    n_x: float  # expectation of the star excitation count
    n_z: float  # expectation of the plaquette excitation count


def charge_product_state(code: SubsystemCode, charge: str) -> ChargeState:
    """The balanced product state carrying one protected logical charge.

    ``charge = "x"`` is a link-basis bitstring state: exactly zero flux,
    half filling of the star excitation count, and a +1 eigenstate of the
    bare logical Z string.  Starting from all ``|0>``, a row of star
    operators is flipped so that the Z expectations on each rough row sum
    to zero.  The flips keep the flux at zero and the logical fixed; the
    balancing matters because an unbalanced rough boundary couples at
    first order to the boundary Z perturbation and drags the diagonal
    ensemble of the tracked count linearly in g away from half filling.
    ``charge = "z"`` is the dual ``|+/->`` product built by flipping a
    column of plaquettes, balanced over the smooth columns.  The label
    names the excitation count the quench tracks.
    """
    lat = code.lattice
    if code.kind != "surface" or lat is None:
        raise ValidationError("charge states need a disentangled surface code")
    n = code.n
    n_v, n_p = len(lat.vertices), len(lat.plaquettes)
    mask = 0
    if charge == "x":
        # flip the j = 1 star row; at ly = 2 both rows are rough, so flip
        # every other star to balance the two rows at once
        cols = range(0, lat.lx + 1, 2 if lat.ly == 2 else 1)
        for i in cols:
            for q in lat.vertex_star(i, 1):
                mask ^= 1 << q
        edge = lat.rough_links()
        n_x, n_z = 0.5 * n_v, 0.0
    elif charge == "z":
        rows = range(0, lat.ly, 2 if lat.lx == 1 else 1)
        for j in rows:
            for q in lat.plaquette_boundary(0, j):
                mask ^= 1 << q
        edge = lat.smooth_links()
        n_x, n_z = 0.0, 0.5 * n_p
    else:
        raise ValidationError("charge must be 'x' or 'z'")
    if sum(1 - 2 * ((mask >> q) & 1) for q in edge) != 0:
        raise ValidationError(
            f"no balanced charge-{charge} state on this patch shape"
        )
    if charge == "x":
        state = np.zeros(1 << n, dtype=np.float64)
        state[mask] = 1.0
    else:
        idx = np.arange(1 << n, dtype=np.uint64)
        signs = np.bitwise_count(idx & np.uint64(mask)).astype(np.int64)
        state = (1.0 - 2.0 * (signs & 1)) * 2.0 ** (-n / 2.0)
    minus = tuple(q for q in range(n) if (mask >> q) & 1)
    return ChargeState(state, minus, "z" if charge == "x" else "x", n_x, n_z)


def logical_bloch_ops(code: SubsystemCode) -> tuple:
    """The bare logical (X, Y, Z) triple of the code's first logical qubit."""
    lx, lz = code.logical_pairs[0]
    ly = (lx * lz).scale_i(1)
    return lx, ly, lz


def bloch_sector_state(
    sector: Sector, direction: Sequence[float], code: SubsystemCode, seed: int
) -> np.ndarray:
    """Random sector state with a sharp logical Bloch vector.

    Draws a Gaussian random sector vector and projects it with
    ``(1 + n . L)/2``; the logical factor then points exactly along ``n``,
    so all three logical expectations are fixed at t = 0.
    """
    direction = np.asarray(direction, dtype=np.float64)
    if direction.shape != (3,) or not np.isclose(
        np.linalg.norm(direction), 1.0
    ):
        raise ValidationError("direction must be a unit 3-vector")
    rng = np.random.default_rng(seed)
    phi = rng.normal(size=sector.dim) + 1j * rng.normal(size=sector.dim)
    phi /= np.linalg.norm(phi)
    psi = phi.copy()
    for coeff, op in zip(direction, logical_bloch_ops(code)):
        packed = sector.pack_terms(TermList(sector.n, [(1.0, op)]))
        psi = psi + coeff * packed.apply(phi)
    psi *= 0.5
    norm = np.linalg.norm(psi)
    if norm < 1e-6:
        raise ValidationError("projection annihilated the random state")
    return psi / norm


# ---------------------------------------------------------------------------
# eigenbasis evolution
# ---------------------------------------------------------------------------


def _as_packed_list(observables):
    if isinstance(observables, PackedTerms):
        return [observables], True
    return list(observables), False


def expectation_series(
    evals: np.ndarray,
    evecs: np.ndarray,
    psi0: np.ndarray,
    observables,
    times: np.ndarray,
    batch: int = 64,
) -> np.ndarray:
    """``<psi(t)| O |psi(t)>`` for each time, evaluated in the eigenbasis.

    ``observables`` is one :class:`PackedTerms` or a sequence of them (all
    must act on the same basis as ``evecs``).  Returns shape ``(n_times,)``
    or ``(n_obs, n_times)``.  When the eigenvectors, the initial state, and
    every observable are real the evolution runs on a pair of real matrix
    products per batch instead of complex ones.
    """
    obs, single = _as_packed_list(observables)
    times = np.asarray(times, dtype=np.float64)
    w = evecs.conj().T @ psi0
    real_path = (
        np.isrealobj(evecs)
        and np.isrealobj(psi0)
        and all(o.is_real for o in obs)
    )
    out = np.empty((len(obs), times.size), dtype=np.float64)
    for start in range(0, times.size, batch):
        ts = times[start:start + batch]
        phase = np.outer(evals, ts)
        if real_path:
            c = evecs @ (np.cos(phase) * w.real[:, None])
            s = evecs @ (np.sin(phase) * w.real[:, None])
            for k, o in enumerate(obs):
                out[k, start:start + batch] = np.einsum(
                    "ib,ib->b", c, o.apply(c)
                ) + np.einsum("ib,ib->b", s, o.apply(s))
        else:
            z = evecs @ (np.exp(-1j * phase) * w[:, None])
            for k, o in enumerate(obs):
                out[k, start:start + batch] = np.einsum(
                    "ib,ib->b", z.conj(), o.apply(z)
                ).real
    return out[0] if single else out


def diagonal_ensemble(
    evals: np.ndarray,
    evecs: np.ndarray,
    psi0: np.ndarray,
    observables,
    cluster_tol: float = 1e-10,
):
    """Infinite-time average of ``<O(t)>``, degenerate levels grouped.

    Levels closer than ``cluster_tol`` times the spectral width count as one
    cluster; the average keeps all matrix elements inside a cluster, which
    equals projecting the initial state onto each cluster eigenspace.
    """
    obs, single = _as_packed_list(observables)
    w = evecs.conj().T @ psi0
    width = float(evals[-1] - evals[0])
    splits = np.nonzero(np.diff(evals) > cluster_tol * width)[0] + 1
    bounds = np.concatenate(([0], splits, [evals.size]))
    multi = [
        (bounds[i], bounds[i + 1])
        for i in range(bounds.size - 1)
        if bounds[i + 1] - bounds[i] > 1
    ]
    in_multi = np.zeros(evals.size, dtype=bool)
    for lo, hi in multi:
        in_multi[lo:hi] = True
    weights = np.abs(w) ** 2
    values = []
    for o in obs:
        ov = o.apply(evecs)
        diag = np.einsum("ij,ij->j", evecs.conj(), ov).real
        val = float((weights * diag)[~in_multi].sum())
        for lo, hi in multi:
            block = evecs[:, lo:hi].conj().T @ ov[:, lo:hi]
            wc = w[lo:hi]
            val += float(np.real(wc.conj() @ block @ wc))
        values.append(val)
    return values[0] if single else np.array(values)


def first_crossing_time(
    evals: np.ndarray,
    evecs: np.ndarray,
    psi0: np.ndarray,
    observable: PackedTerms,
    target: float,
    t_max: float = 1e4,
    dt: float = 0.25,
    batch: int = 512,
    refine: int = 64,
) -> tuple:
    """First time ``<O(t)>`` reaches ``target``, or ``(t_max, True)``.

    Scans a coarse grid in batches with early exit, then brackets the first
    sign change on a grid ``refine`` times finer and interpolates linearly.
    Returns ``(time, censored)``.
    """
    v0 = float(np.real(np.vdot(psi0, observable.apply(psi0))))
    sign0 = np.sign(v0 - target)
    if sign0 == 0.0:
        return 0.0, False

    def crossing_in(ts, vals, prev_t, prev_v):
        hit = np.nonzero(np.sign(vals - target) != sign0)[0]
        if hit.size == 0:
            return None
        k = int(hit[0])
        lo_t = prev_t if k == 0 else ts[k - 1]
        fine = np.linspace(lo_t, ts[k], refine + 1)
        fvals = expectation_series(evals, evecs, psi0, observable, fine)
        fhit = np.nonzero(np.sign(fvals - target) != sign0)[0]
        j = int(fhit[0])
        if j == 0:
            return float(fine[0])
        t_a, t_b = fine[j - 1], fine[j]
        v_a, v_b = fvals[j - 1], fvals[j]
        if v_b == v_a:
            return float(t_b)
        return float(t_a + (target - v_a) * (t_b - t_a) / (v_b - v_a))

    prev_t, prev_v = 0.0, v0
    start = dt
    while start <= t_max:
        ts = start + dt * np.arange(batch)
        ts = ts[ts <= t_max]
        if ts.size == 0:
            break
        vals = expectation_series(evals, evecs, psi0, observable, ts)
        tau = crossing_in(ts, vals, prev_t, prev_v)
        if tau is not None:
            return tau, False
        prev_t, prev_v = float(ts[-1]), float(vals[-1])
        start = ts[-1] + dt
    return float(t_max), True


# ---------------------------------------------------------------------------
# random gauge rotations
# ---------------------------------------------------------------------------


def exp_pauli_rotation(op: PauliOp, theta: float, state: np.ndarray) -> np.ndarray:
    """Apply ``exp(-i theta P)`` to a state using one Pauli application."""
    return math.cos(theta) * state - 1j * math.sin(theta) * apply_pauli(
        op, state
    )


def random_gauge_rotation_drift(
    code: SubsystemCode,
    state: np.ndarray,
    depth: int,
    seed: int,
    pool: Optional[Sequence[PauliOp]] = None,
    observables: Optional[Sequence[PauliOp]] = None,
) -> tuple:
    """Max drift of logical expectations along a random rotation circuit.

    Each step applies ``exp(-i theta P)`` for ``P`` drawn uniformly from the
    pool (default: gauge generators plus the local symmetric operators) and
    ``theta ~ U[0, 2pi)``.  Returns ``(max_drift, final_state)``.
    """
    if pool is None:
        pool = list(code.gauge_gens) + list(code.local_symmetric_gens)
    if observables is None:
        observables = logical_bloch_ops(code)
    if not pool:
        raise ValidationError("empty rotation pool")
    rng = np.random.default_rng(seed)
    psi = state.astype(np.complex128)

    def expect(op):
        return float(np.real(np.vdot(psi, apply_pauli(op, psi))))

    ref = [expect(op) for op in observables]
    drift = 0.0
    for _ in range(depth):
        op = pool[int(rng.integers(len(pool)))]
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        psi = exp_pauli_rotation(op, theta, psi)
        for op_l, r in zip(observables, ref):
            drift = max(drift, abs(expect(op_l) - r))
    return drift, psi


# ---------------------------------------------------------------------------
# power-law fits
# ---------------------------------------------------------------------------


def powerlaw_fit(xs: Sequence[float], ys: Sequence[float]) -> tuple:
    """Least-squares fit of ``y = c * x^a`` on log-log axes.

    Returns ``(a, c, r_squared)``; needs at least three strictly positive
    points.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.size != ys.size or xs.size < 3:
        raise ValidationError("need at least three (x, y) pairs")
    if (xs <= 0).any() or (ys <= 0).any():
        raise ValidationError("power-law fit needs positive data")
    lx = np.log(xs)
    ly = np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    residual = ly - (slope * lx + intercept)
    total = ly - ly.mean()
    denom = float(total @ total)
    r2 = 1.0 - float(residual @ residual) / denom if denom > 0 else 1.0
    return float(slope), float(math.exp(intercept)), r2
