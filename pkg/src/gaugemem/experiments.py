"""End-to-end numerical experiments on the surface-patch memory models.

Each function builds its own code and Hamiltonian, runs one self-contained
study, and returns plain dictionaries of arrays and scalars.  The command
line and the acceptance suite both call these; nothing here does I/O.
"""

from __future__ import annotations

import warnings
from typing import Optional, Sequence

import numpy as np

from .codes import SubsystemCode, bacon_shor_code, surface_code
from .dynamics import (
    bloch_sector_state,
    charge_product_state,
    diagonal_ensemble,
    expectation_series,
    first_crossing_time,
    logical_bloch_ops,
    powerlaw_fit,
    random_gauge_rotation_drift,
)
from .errors import DataQualityError
from .hamiltonians import (
    TermList,
    bacon_shor_model,
    disordered_field_model,
    memory_model,
    number_operators,
    surface_field_model,
    surface_symmetries,
)
from .spectral import (
    Sector,
    entanglement_entropy,
    mean_spacing_ratio,
    page_entropy,
    register_bipartition,
    spacing_ratios,
    spectrum,
)

__all__ = [
    "surface_sector",
    "rstats_experiment",
    "dome_experiment",
    "resonance_scan",
    "quench_experiment",
    "lifetime_point",
    "lifetime_sweep",
    "bacon_shor_rstats",
    "memory_invariance",
]


def surface_sector(code: SubsystemCode, signs=(0, 0, 0)) -> Sector:
    """The (global X string, global Z string, logical Z) sector.

    ``signs = (0, 0, 0)`` picks the all ``+1`` sector used for the level
    statistics and entanglement studies.
    """
    syms = surface_symmetries(code)
    ops = [syms["global_x"], syms["global_z"], syms["logical_z"]]
    return Sector(code.n, ops, list(signs))


def rstats_experiment(
    lx: int,
    ly: int,
    seed: int,
    h_low: float = 0.8,
    h_high: float = 1.2,
    j: float = 1.0,
) -> dict:
    """Level statistics of one disordered field-model draw in the symmetric
    sector: eigenvalues, folded gap ratios, and their mean."""
    code = surface_code(lx, ly)
    model = disordered_field_model(code, seed, h_low, h_high, j)
    sector = surface_sector(code)
    evals = spectrum(sector.matrix(model))
    ratios = spacing_ratios(evals)
    return {
        "dims": (lx, ly),
        "seed": seed,
        "dim": sector.dim,
        "evals": evals,
        "ratios": ratios,
        "rbar": float(ratios.mean()),
        "sem": float(ratios.std(ddof=1) / np.sqrt(ratios.size)),
    }


def dome_experiment(
    lx: int,
    ly: int,
    seed: int,
    part: Optional[Sequence[int]] = None,
    h_low: float = 0.8,
    h_high: float = 1.2,
    j: float = 1.0,
) -> dict:
    """Eigenstate entanglement across the spectrum of one disordered draw.

    Every sector eigenvector is mapped back to the physical register and cut
    along the fixed spatial bipartition; reports the entropy profile, its
    maximum, the random-state reference value, and the dome contrast: mean
    entropy in the central tenth of the energy range minus the mean in the
    outer tenths (windows in energy, since the dome is a curve over energy).
    """
    code = surface_code(lx, ly)
    model = disordered_field_model(code, seed, h_low, h_high, j)
    sector = surface_sector(code)
    if part is None:
        part = register_bipartition(code.lattice)
    part = sorted(part)
    evals, evecs = spectrum(sector.matrix(model), vectors=True)
    entropies = np.empty(sector.dim)
    for k in range(sector.dim):
        psi = sector.to_physical(evecs[:, k])
        entropies[k] = entanglement_entropy(psi, part)
    n_a = len(part)
    n_b = code.n - n_a
    width = evals[-1] - evals[0]
    center = 0.5 * (evals[0] + evals[-1])
    lo = entropies[evals <= evals[0] + 0.1 * width].mean()
    hi = entropies[evals >= evals[-1] - 0.1 * width].mean()
    sel = np.abs(evals - center) <= 0.05 * width
    if not sel.any():  # tiny spectra can leave the central window empty
        sel = np.abs(evals - center) == np.abs(evals - center).min()
    mid = entropies[sel].mean()
    return {
        "dims": (lx, ly),
        "seed": seed,
        "part": part,
        "evals": evals,
        "entropies": entropies,
        "max_entropy": float(entropies.max()),
        "page": page_entropy(n_a, n_b),
        "edge_mean_low": float(lo),
        "edge_mean_high": float(hi),
        "mid_mean": float(mid),
        "contrast": float(mid - max(lo, hi)),
    }


# ---------------------------------------------------------------------------
# quenches and lifetimes on the full register
# ---------------------------------------------------------------------------


def _memory_eigensystem(code: SubsystemCode, nu: float, xi: float,
                        j: float, g: float):
    model = memory_model(code, nu, xi * nu, j, g)
    sector = Sector(code.n, [], [])
    evals, evecs = spectrum(sector.matrix(model), vectors=True)
    return sector, model, evals, evecs


def resonance_scan(
    lx: int,
    ly: int,
    nus: Sequence[float],
    xi: float,
    j: float,
    g: float,
) -> dict:
    """Diagonal-ensemble charges after quenches from both protected states.

    For each drive strength ``nu`` the full register is diagonalized once;
    the X-charge quench starts from the balanced zero-flux state (star
    count pinned at half filling) and reports the diagonal-ensemble value
    of the star count, the Z side dually.
    """
    code = surface_code(lx, ly)
    state_x = charge_product_state(code, "x")
    state_z = charge_product_state(code, "z")
    rows = []
    for nu in nus:
        sector, _, evals, evecs = _memory_eigensystem(code, nu, xi, j, g)
        n_x, n_z = (sector.pack_terms(t) for t in number_operators(code))
        de_x = diagonal_ensemble(evals, evecs, state_x.state, n_x)
        de_z = diagonal_ensemble(evals, evecs, state_z.state, n_z)
        rows.append({
            "nu": float(nu),
            "de_n_x": float(de_x),
            "init_n_x": float(state_x.n_x),
            "de_n_z": float(de_z),
            "init_n_z": float(state_z.n_z),
        })
    return {
        "dims": (lx, ly),
        "xi": float(xi),
        "j": float(j),
        "g": float(g),
        "rows": rows,
    }


def quench_experiment(
    lx: int,
    ly: int,
    nu: float,
    xi: float,
    j: float,
    g: float,
    charge: str,
    t_max: float = 300.0,
    dt: float = 0.1,
) -> dict:
    """Real-time quench from one protected product state.

    Tracks both excitation counts and the bare logical the state is an
    eigenstate of (Z for the zero-flux "x" state, X for the all-plus "z"
    state), and reports their diagonal-ensemble values.
    """
    code = surface_code(lx, ly)
    cs = charge_product_state(code, charge)
    sector, _, evals, evecs = _memory_eigensystem(code, nu, xi, j, g)
    n_x, n_z = number_operators(code)
    lname = {"x": "z", "z": "x"}[charge]
    logical = dict(zip("xz", code.logical_pairs[0]))[lname]
    observables = [
        sector.pack_terms(n_x),
        sector.pack_terms(n_z),
        sector.pack_terms(TermList(code.n, [(1.0, logical)])),
    ]
    times = np.arange(0.0, t_max + dt / 2, dt)
    series = expectation_series(evals, evecs, cs.state, observables, times)
    de = diagonal_ensemble(evals, evecs, cs.state, observables)
    return {
        "dims": (lx, ly),
        "charge": charge,
        "nu": float(nu),
        "xi": float(xi),
        "j": float(j),
        "g": float(g),
        "init": (cs.n_x, cs.n_z),
        "times": times,
        "labels": ("n_x", "n_z", f"logical_{lname}"),
        "series": series,
        "de": np.asarray(de),
    }


def lifetime_point(
    lx: int,
    ly: int,
    nu: float,
    xi: float,
    j: float,
    g: float,
    t_max: float = 1e4,
    dt: float = 0.25,
) -> dict:
    """Memory lifetimes of both logicals at one parameter point.

    One diagonalization serves both quenches: tau_X runs from the all-plus
    logical-X eigenstate, tau_Z from the zero-flux logical-Z eigenstate,
    and each lifetime is the first time the bare logical expectation
    reaches its diagonal-ensemble value.
    """
    code = surface_code(lx, ly)
    sector, _, evals, evecs = _memory_eigensystem(code, nu, xi, j, g)
    out = {"nu": float(nu), "g": float(g)}
    for charge in ("x", "z"):
        cs = charge_product_state(code, {"x": "z", "z": "x"}[charge])
        logical = dict(zip("xz", code.logical_pairs[0]))[charge]
        packed = sector.pack_terms(TermList(code.n, [(1.0, logical)]))
        de = diagonal_ensemble(evals, evecs, cs.state, packed)
        tau, censored = first_crossing_time(
            evals, evecs, cs.state, packed, target=de, t_max=t_max, dt=dt
        )
        out[f"tau_{charge}"] = float(tau)
        out[f"censored_{charge}"] = bool(censored)
        out[f"de_{charge}"] = float(de)
    return out


def _fit_uncensored(points, key_x, key_tau, key_cens):
    xs, ys = [], []
    for row in points:
        if row[key_cens]:
            warnings.warn(
                f"censored lifetime at {key_x}={row[key_x]} excluded from fit"
            )
            continue
        xs.append(row[key_x])
        ys.append(row[key_tau])
    if len(xs) < 3:
        raise DataQualityError(
            f"fewer than three uncensored points for the {key_tau} fit"
        )
    exponent, prefactor, r2 = powerlaw_fit(xs, ys)
    return {"exponent": exponent, "prefactor": prefactor, "r_squared": r2}


def lifetime_sweep(
    lx: int,
    ly: int,
    xi: float,
    j: float,
    nus: Sequence[float],
    fixed_g: float,
    gs: Sequence[float],
    fixed_nu: float,
    t_max: float = 1e4,
    dt: float = 0.25,
) -> dict:
    """Lifetime scaling in the drive strength and in the boundary coupling.

    Sweeps ``nu`` at fixed ``g`` and ``g`` at fixed ``nu``, fits power laws
    through the uncensored points of each sweep, and returns all rows plus
    the four fits.
    """
    nu_rows = [
        lifetime_point(lx, ly, nu, xi, j, fixed_g, t_max, dt) for nu in nus
    ]
    g_rows = [
        lifetime_point(lx, ly, fixed_nu, xi, j, g, t_max, dt) for g in gs
    ]
    fits = {
        "tau_x_vs_nu": _fit_uncensored(nu_rows, "nu", "tau_x", "censored_x"),
        "tau_z_vs_nu": _fit_uncensored(nu_rows, "nu", "tau_z", "censored_z"),
        "tau_x_vs_g": _fit_uncensored(g_rows, "g", "tau_x", "censored_x"),
        "tau_z_vs_g": _fit_uncensored(g_rows, "g", "tau_z", "censored_z"),
    }
    return {
        "dims": (lx, ly),
        "xi": float(xi),
        "j": float(j),
        "nu_rows": nu_rows,
        "g_rows": g_rows,
        "fits": fits,
    }


# ---------------------------------------------------------------------------
# Bacon-Shor chain statistics
# ---------------------------------------------------------------------------


def bacon_shor_rstats(
    lx: int,
    ly: int,
    n_seeds: int,
    seed0: int = 0,
    mu0: float = 10.0,
    base: float = 1.0,
    spread: float = 0.1,
) -> dict:
    """Pooled level statistics of the disordered chain model.

    All Z-type stabilizers and the bare logical Z are fixed at +1; the
    incommensurate X-stabilizer fields become sector offsets, so every sign
    pattern of the X-type stabilizers is resolved and diagonalized
    separately.  Gap ratios are computed per (seed, sector) spectrum and
    pooled.
    """
    code = bacon_shor_code(lx, ly)
    n_xstab = ly - 1
    xstabs = code.stabilizer_gens[:n_xstab]
    zstabs = code.stabilizer_gens[n_xstab:]
    logical_z = code.logical_pairs[0][1]
    syms = list(zstabs) + [logical_z] + list(xstabs)
    n_fixed = len(zstabs) + 1
    sectors = [
        Sector(code.n, syms, [0] * n_fixed + list(bits))
        for bits in np.ndindex(*([2] * n_xstab))
    ]
    pooled = []
    per_seed = []
    example_spectra = []
    for k in range(n_seeds):
        model = bacon_shor_model(code, seed0 + k, base, spread, mu0)
        seed_ratios = []
        for sector in sectors:
            evals = spectrum(sector.matrix(model))
            if k == 0:
                example_spectra.append(evals)
            seed_ratios.append(spacing_ratios(evals))
        seed_ratios = np.concatenate(seed_ratios)
        pooled.append(seed_ratios)
        per_seed.append(float(seed_ratios.mean()))
    pooled = np.concatenate(pooled)
    return {
        "dims": (lx, ly),
        "n_seeds": n_seeds,
        "sector_dim": sectors[0].dim,
        "n_sectors": len(sectors),
        "ratios": pooled,
        "rbar": float(pooled.mean()),
        "sem": float(pooled.std(ddof=1) / np.sqrt(pooled.size)),
        "rbar_per_seed": per_seed,
        "example_spectra": example_spectra,
    }


# ---------------------------------------------------------------------------
# logical invariance under symmetric dynamics
# ---------------------------------------------------------------------------


def memory_invariance(
    lx: int,
    ly: int,
    n_draws: int = 20,
    n_directions: int = 10,
    t_max: float = 100.0,
    dt: float = 0.5,
    depth: int = 500,
    seed0: int = 0,
) -> dict:
    """Drift of the logical Bloch vector under symmetric dynamics.

    For every random draw of the field model (all couplings uniform in
    [0.5, 1.5], independently per site) the symmetric sector is
    diagonalized; random sharp Bloch states are evolved and the largest
    deviation of any logical expectation from its initial value is
    recorded.  The same states then run through random gauge-rotation
    circuits on the full register.
    """
    code = surface_code(lx, ly)
    lat = code.lattice
    syms = surface_symmetries(code)
    sector = Sector(code.n, [syms["global_x"], syms["global_z"]], [0, 0])
    packed_logicals = [
        sector.pack_terms(TermList(code.n, [(1.0, op)]))
        for op in logical_bloch_ops(code)
    ]
    times = np.arange(dt, t_max + dt / 2, dt)
    rng = np.random.default_rng(seed0)
    n_bulk_x = code.n - len(lat.smooth_links())
    n_bulk_z = code.n - len(lat.rough_links())
    hamiltonian_drift = 0.0
    circuit_drift = 0.0
    for draw in range(n_draws):
        model = surface_field_model(
            code,
            h_star=rng.uniform(0.5, 1.5, size=len(lat.vertices)),
            h_plaq=rng.uniform(0.5, 1.5, size=len(lat.plaquettes)),
            j_x=rng.uniform(0.5, 1.5, size=n_bulk_x),
            j_z=rng.uniform(0.5, 1.5, size=n_bulk_z),
        )
        evals, evecs = spectrum(sector.matrix(model), vectors=True)
        for k in range(n_directions):
            direction = rng.normal(size=3)
            direction /= np.linalg.norm(direction)
            psi0 = bloch_sector_state(
                sector, direction, code, seed=seed0 + 1000 * draw + k
            )
            series = expectation_series(
                evals, evecs, psi0, packed_logicals, times
            )
            drift = np.abs(series - direction[:, None]).max()
            hamiltonian_drift = max(hamiltonian_drift, float(drift))
            if draw == 0:
                physical = sector.to_physical(psi0)
                cdrift, _ = random_gauge_rotation_drift(
                    code, physical, depth=depth, seed=seed0 + k
                )
                circuit_drift = max(circuit_drift, float(cdrift))
    return {
        "dims": (lx, ly),
        "n_draws": n_draws,
        "n_directions": n_directions,
        "hamiltonian_drift": hamiltonian_drift,
        "circuit_drift": circuit_drift,
    }
