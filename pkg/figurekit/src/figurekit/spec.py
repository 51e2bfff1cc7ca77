"""Figure specifications and strict input validation.

A :class:`FigureSpec` names a figure kind, the CSV/JSON artifacts it reads,
the output stem, and free-form style options.  Every kind declares the CSV
headers and sidecar keys it requires; inputs that do not match are refused
with :class:`SchemaError` before any drawing happens.  Numbers shown on the
figures (mean ratios, diagonal-ensemble values, fit exponents) are read
from the sidecars, never recomputed.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

__all__ = ["SchemaError", "FigureSpec", "FIGURE_KINDS", "load_inputs"]


class SchemaError(Exception):
    """An input artifact does not match the declared figure kind."""


# per kind: {csv name: header or None for per-kind checks}, sidecar name,
# keys the sidecar must carry
_SCHEMAS = {
    "rstats": (
        {"ratios.csv": ["index", "ratio"]},
        "rstats.json",
        {"rbar", "goe_mean", "poisson_mean"},
    ),
    "dome": (
        {"dome.csv": ["energy", "entropy"]},
        "dome.json",
        {"page", "max_entropy", "contrast"},
    ),
    "quench": (
        {"quench.csv": None},  # trailing label column varies with the charge
        "quench.json",
        {"de", "nu", "g", "charge"},
    ),
    "lifetime": (
        {"lifetime.csv": ["sweep", "nu", "g", "tau_x", "tau_z", "censored"]},
        "lifetime.json",
        {"fits", "fixed_nu", "fixed_g"},
    ),
    "bacon_shor": (
        {
            "ratios.csv": ["index", "ratio"],
            "spectra.csv": ["sector", "index", "energy"],
        },
        "bs_rstats.json",
        {"rbar", "goe_mean", "poisson_mean", "n_sectors"},
    ),
}

FIGURE_KINDS = tuple(sorted(_SCHEMAS))


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render: kind, input artifacts, output stem, style."""

    kind: str
    inputs: Mapping[str, Path]
    output: Path
    style: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _SCHEMAS:
            raise SchemaError(
                f"unknown figure kind {self.kind!r}; "
                f"expected one of {', '.join(FIGURE_KINDS)}"
            )
        csvs, sidecar, _ = _SCHEMAS[self.kind]
        missing = (set(csvs) | {sidecar}) - set(self.inputs)
        if missing:
            raise SchemaError(
                f"kind {self.kind!r} needs inputs {sorted(missing)}"
            )

    @classmethod
    def from_run_dir(
        cls,
        kind: str,
        run_dir,
        output,
        style: Optional[Mapping[str, object]] = None,
    ) -> "FigureSpec":
        """Point a spec at the artifact names a run directory uses."""
        if kind not in _SCHEMAS:
            raise SchemaError(
                f"unknown figure kind {kind!r}; "
                f"expected one of {', '.join(FIGURE_KINDS)}"
            )
        run_dir = Path(run_dir)
        csvs, sidecar, _ = _SCHEMAS[kind]
        names = list(csvs) + [sidecar]
        inputs = {name: run_dir / name for name in names}
        return cls(kind, inputs, Path(output), dict(style or {}))


def _read_csv(path: Path) -> tuple:
    """Parse one artifact CSV into (header, columns of floats-or-strings)."""
    try:
        lines = path.read_text(encoding="ascii").splitlines()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    body = [ln for ln in lines if not ln.startswith("#")]
    if not body:
        raise SchemaError(f"{path} has no header row")
    header = body[0].split(",")
    rows = list(csv.reader(body[1:]))
    if any(len(r) != len(header) for r in rows):
        raise SchemaError(f"{path} has rows of the wrong width")
    columns = {}
    for i, name in enumerate(header):
        raw = [r[i] for r in rows]
        try:
            columns[name] = [float(v) for v in raw]
        except ValueError:
            columns[name] = raw
    return header, columns


def _check_quench_header(path: Path, header: list) -> None:
    ok = (
        len(header) == 4
        and header[:3] == ["t", "n_x", "n_z"]
        and header[3] in ("logical_x", "logical_z")
    )
    if not ok:
        raise SchemaError(
            f"{path}: header {header} is not a quench series "
            "(want t,n_x,n_z,logical_x|logical_z)"
        )


def load_inputs(spec: FigureSpec) -> tuple:
    """Validate and load a spec's artifacts.

    Returns ``(tables, sidecar)`` where ``tables`` maps each CSV name to its
    column dict.  Raises :class:`SchemaError` on any mismatch.
    """
    csvs, sidecar_name, sidecar_keys = _SCHEMAS[spec.kind]
    tables = {}
    for name, want in csvs.items():
        header, columns = _read_csv(Path(spec.inputs[name]))
        if want is None:
            _check_quench_header(Path(spec.inputs[name]), header)
        elif header != want:
            raise SchemaError(
                f"{spec.inputs[name]}: header {header} does not match "
                f"the {spec.kind!r} schema {want}"
            )
        tables[name] = columns
    sidecar_path = Path(spec.inputs[sidecar_name])
    try:
        sidecar = json.loads(sidecar_path.read_text(encoding="ascii"))
    except (OSError, ValueError) as exc:
        raise SchemaError(f"cannot read {sidecar_path}: {exc}") from exc
    missing = sidecar_keys - set(sidecar)
    if missing:
        raise SchemaError(
            f"{sidecar_path} lacks keys {sorted(missing)} "
            f"required by kind {spec.kind!r}"
        )
    return tables, sidecar
