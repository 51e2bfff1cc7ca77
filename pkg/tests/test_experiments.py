"""Experiment drivers on the smallest patches: shapes, keys, invariants."""

import math

import numpy as np
import pytest

from gaugemem.codes import surface_code
from gaugemem.experiments import (
    bacon_shor_rstats,
    dome_experiment,
    lifetime_point,
    memory_invariance,
    quench_experiment,
    resonance_scan,
    rstats_experiment,
    surface_sector,
)

SQRT3 = math.sqrt(3.0)


def test_surface_sector_partition():
    code = surface_code(1, 2)
    dims = 0
    for a in range(2):
        for b in range(2):
            for c in range(2):
                dims += surface_sector(code, (a, b, c)).dim
    assert dims == 2**code.n
    assert surface_sector(code).dim == 4


def test_rstats_small_patch():
    out = rstats_experiment(1, 2, seed=5)
    assert out["dim"] == 4
    assert out["evals"].shape == (4,)
    assert out["ratios"].shape == (2,)
    assert 0.0 < out["rbar"] <= 1.0


def test_dome_small_patch():
    out = dome_experiment(1, 2, seed=5)
    assert out["part"] == [0, 1, 2]  # bottom rough row plus one middle link
    assert out["entropies"].shape == (4,)
    # sector constraints can push entropy past the plain Page value, but
    # never past the dimensional bound of the smaller side
    assert out["max_entropy"] <= 2 * math.log(2.0) + 1e-9
    assert out["contrast"] == pytest.approx(
        out["mid_mean"] - max(out["edge_mean_low"], out["edge_mean_high"])
    )


def test_resonance_scan_structure():
    out = resonance_scan(1, 2, [2.0, 3.0, 4.0], xi=SQRT3, j=0.1, g=0.15)
    rows = out["rows"]
    assert [row["nu"] for row in rows] == [2.0, 3.0, 4.0]
    assert all(row["init_n_x"] == 1 and row["init_n_z"] == 1 for row in rows)
    # stronger stabilizer penalty pins the charge closer to its initial value
    gaps = [abs(row["de_n_x"] - row["init_n_x"]) for row in rows]
    assert gaps[0] > gaps[1] > gaps[2]


def test_resonance_commensurate_drive_leaks():
    matched = resonance_scan(1, 2, [2.0], xi=SQRT3, j=0.1, g=0.15)
    degenerate = resonance_scan(1, 2, [2.0], xi=1.0, j=0.1, g=0.15)
    gap = lambda row: abs(row["de_n_x"] - row["init_n_x"])
    assert gap(degenerate["rows"][0]) > gap(matched["rows"][0])


def test_quench_experiment_series():
    out = quench_experiment(1, 2, 2.0, SQRT3, 0.1, 0.15, "x",
                            t_max=10.0, dt=0.5)
    # the zero-flux state is a logical-Z eigenstate, so Z is what it tracks
    assert out["labels"] == ("n_x", "n_z", "logical_z")
    assert out["series"].shape == (3, 21)
    assert out["init"] == (1.0, 0.0)
    assert out["series"][0, 0] == pytest.approx(1.0, abs=1e-10)
    assert out["series"][2, 0] == pytest.approx(1.0, abs=1e-10)
    assert out["de"].shape == (3,)


def test_quench_z_charge():
    out = quench_experiment(1, 2, 2.0, SQRT3, 0.1, 0.15, "z",
                            t_max=5.0, dt=0.5)
    assert out["labels"][2] == "logical_x"
    assert out["init"] == (0.0, 1.0)
    assert out["series"][1, 0] == pytest.approx(1.0, abs=1e-10)


def test_lifetime_point_keys():
    row = lifetime_point(1, 2, 1.0, SQRT3, 0.1, 0.5, t_max=100.0)
    assert set(row) == {
        "nu", "g", "tau_x", "tau_z", "censored_x", "censored_z",
        "de_x", "de_z",
    }
    assert not row["censored_x"] and not row["censored_z"]
    assert row["tau_x"] > 0.0 and row["tau_z"] > 0.0


def test_bacon_shor_rstats_small():
    out = bacon_shor_rstats(3, 3, n_seeds=2)
    assert out["n_sectors"] == 4
    assert out["sector_dim"] == 16
    assert out["ratios"].shape == (2 * 4 * 14,)
    assert len(out["example_spectra"]) == 4
    assert all(len(ev) == 16 for ev in out["example_spectra"])
    assert len(out["rbar_per_seed"]) == 2
    assert 0.0 < out["rbar"] <= 1.0


def test_memory_invariance_small():
    out = memory_invariance(1, 2, n_draws=2, n_directions=2,
                            t_max=10.0, dt=1.0, depth=40)
    assert out["hamiltonian_drift"] < 1e-9
    assert out["circuit_drift"] < 1e-9
