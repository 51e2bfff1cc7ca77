"""Command-line front end for running experiments from YAML configs.

Subcommands: ``run`` executes one experiment and leaves CSV artifacts, JSON
sidecars with the derived scalars, a resolved-config copy, and an atomically
written run manifest; ``validate`` checks a config without running it;
``list-codes``, ``describe``, and ``dump-terms`` inspect codes and models.

Exit codes: 2 for validation problems, 3 for refused resource use, 4 for
bad numerical data, 0 otherwise.  Artifacts are deterministic: the same
config always produces byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from typing import Optional

import numpy as np
import yaml

from . import __version__
from .codes import CODE_BUILDERS, SubsystemCode, build_code
from .errors import (
    DataQualityError,
    ResourceRefusalError,
    ValidationError,
)
from .experiments import (
    bacon_shor_rstats,
    dome_experiment,
    lifetime_sweep,
    quench_experiment,
    rstats_experiment,
    surface_sector,
)
from .hamiltonians import (
    bacon_shor_model,
    disordered_field_model,
    memory_model,
)
from .spectral import (
    GOE_MEAN_RATIO,
    POISSON_MEAN_RATIO,
    set_memory_budget,
    spectrum,
)

OUTPUT_ROOT_ENV = "GAUGEMEM_OUTPUT_ROOT"

# per-kind config schema: required keys, and optional keys with defaults
_KIND_SCHEMAS = {
    "verify": ({"code"}, {}),
    "spectrum": ({"code"}, {"h_low": 0.8, "h_high": 1.2, "j": 1.0}),
    "rstats": ({"code"}, {"h_low": 0.8, "h_high": 1.2, "j": 1.0}),
    "dome": (
        {"code"},
        {"h_low": 0.8, "h_high": 1.2, "j": 1.0, "part_size": None},
    ),
    "quench": (
        {"code", "nu", "g"},
        {
            "xi": math.sqrt(3.0),
            "j": 0.1,
            "charge": "x",
            "t_max": 300.0,
            "dt": 0.1,
        },
    ),
    "lifetime-sweep": (
        {"code", "nus", "gs", "fixed_nu", "fixed_g"},
        {"xi": math.sqrt(3.0), "j": 0.1, "t_max": 1e4, "dt": 0.25},
    ),
    "bacon-shor-rstats": (
        {"code", "n_seeds"},
        {"mu0": 10.0, "base": 1.0, "spread": 0.1},
    ),
}
_COMMON_DEFAULTS = {"seed": 0, "output": None, "memory_budget_gib": None}

_SURFACE_KINDS = {"spectrum", "rstats", "dome", "quench", "lifetime-sweep"}


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_number(cfg: dict, key: str) -> None:
    if key in cfg and cfg[key] is not None and not _is_number(cfg[key]):
        raise ValidationError(f"config key {key!r} must be a number")


def validate_config(raw) -> dict:
    """Check a raw config mapping strictly and fill in the defaults."""
    if not isinstance(raw, dict):
        raise ValidationError("config must be a mapping")
    if "kind" not in raw:
        raise ValidationError("config needs a 'kind' key")
    kind = raw["kind"]
    if kind not in _KIND_SCHEMAS:
        raise ValidationError(
            f"unknown experiment kind {kind!r}; known: "
            f"{sorted(_KIND_SCHEMAS)}"
        )
    required, optional = _KIND_SCHEMAS[kind]
    allowed = {"kind"} | required | set(optional) | set(_COMMON_DEFAULTS)
    unknown = set(raw) - allowed
    if unknown:
        raise ValidationError(
            f"unknown config keys for {kind}: {sorted(unknown)}"
        )
    missing = required - set(raw)
    if missing:
        raise ValidationError(f"missing config keys: {sorted(missing)}")

    cfg = dict(_COMMON_DEFAULTS)
    cfg.update(optional)
    cfg.update(raw)

    code = cfg["code"]
    if not isinstance(code, dict) or set(code) - {"kind", "dims"}:
        raise ValidationError("'code' must be {kind: ..., dims: [...]}")
    if "kind" not in code:
        raise ValidationError("'code' needs a 'kind'")
    dims = code.get("dims", [])
    if not isinstance(dims, list) or not all(
        isinstance(d, int) and not isinstance(d, bool) for d in dims
    ):
        raise ValidationError("'code.dims' must be a list of integers")
    cfg["code"] = {"kind": code["kind"], "dims": dims}
    if kind in _SURFACE_KINDS and code["kind"] != "surface":
        raise ValidationError(f"experiment {kind!r} needs a surface code")
    if kind == "bacon-shor-rstats" and code["kind"] != "bacon_shor":
        raise ValidationError("bacon-shor-rstats needs a bacon_shor code")

    if not isinstance(cfg["seed"], int) or isinstance(cfg["seed"], bool):
        raise ValidationError("config key 'seed' must be an integer")
    if cfg["output"] is not None and not isinstance(cfg["output"], str):
        raise ValidationError("config key 'output' must be a string")
    _check_number(cfg, "memory_budget_gib")
    for key in ("h_low", "h_high", "j", "nu", "g", "xi", "t_max", "dt",
                "fixed_nu", "fixed_g", "mu0", "base", "spread"):
        _check_number(cfg, key)
    if kind == "quench" and cfg["charge"] not in ("x", "z"):
        raise ValidationError("config key 'charge' must be 'x' or 'z'")
    if kind == "lifetime-sweep":
        for key in ("nus", "gs"):
            vals = cfg[key]
            if not isinstance(vals, list) or not all(
                _is_number(v) for v in vals
            ):
                raise ValidationError(f"config key {key!r} must list numbers")
    if kind == "bacon-shor-rstats":
        n = cfg["n_seeds"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValidationError("'n_seeds' must be a positive integer")
    if kind == "dome" and cfg["part_size"] is not None and not isinstance(
        cfg["part_size"], int
    ):
        raise ValidationError("'part_size' must be an integer")
    return cfg


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise ValidationError(f"config is not valid YAML: {exc}")
    return validate_config(raw)


def _fingerprint(code: SubsystemCode) -> str:
    return hashlib.sha256(code.to_text().encode("ascii")).hexdigest()[:16]


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: str, meta: dict, header: list, rows) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for key, value in meta.items():
            fh.write(f"# {key}: {value}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# experiment runners: each writes its artifacts and returns their names
# ---------------------------------------------------------------------------


def _run_verify(cfg, meta, outdir):
    code = build_code(cfg["code"]["kind"], cfg["code"]["dims"])
    code.verify()
    n, k, r, rank_s = code.params()
    try:
        distance = code.distance()
    except ResourceRefusalError:
        distance = None
    _write_json(os.path.join(outdir, "verify.json"), {
        "code": cfg["code"], "ok": True,
        "n": n, "k": k, "r": r, "rank_s": rank_s,
        "distance": distance,
    })
    return ["verify.json"]


def _run_spectrum(cfg, meta, outdir):
    lx, ly = cfg["code"]["dims"]
    code = build_code("surface", (lx, ly))
    model = disordered_field_model(
        code, cfg["seed"], cfg["h_low"], cfg["h_high"], cfg["j"]
    )
    sector = surface_sector(code)
    evals = spectrum(sector.matrix(model))
    _write_csv(
        os.path.join(outdir, "evals.csv"), meta,
        ["index", "energy"], list(enumerate(evals)),
    )
    _write_json(os.path.join(outdir, "spectrum.json"), {
        "dim": sector.dim,
        "width": float(evals[-1] - evals[0]),
        "seed": cfg["seed"],
    })
    return ["evals.csv", "spectrum.json"]


def _run_rstats(cfg, meta, outdir):
    lx, ly = cfg["code"]["dims"]
    result = rstats_experiment(
        lx, ly, cfg["seed"], cfg["h_low"], cfg["h_high"], cfg["j"]
    )
    _write_csv(
        os.path.join(outdir, "ratios.csv"), meta,
        ["index", "ratio"], list(enumerate(result["ratios"])),
    )
    _write_json(os.path.join(outdir, "rstats.json"), {
        "rbar": result["rbar"],
        "sem": result["sem"],
        "dim": result["dim"],
        "n_ratios": int(result["ratios"].size),
        "goe_mean": GOE_MEAN_RATIO,
        "poisson_mean": POISSON_MEAN_RATIO,
    })
    return ["ratios.csv", "rstats.json"]


def _run_dome(cfg, meta, outdir):
    lx, ly = cfg["code"]["dims"]
    part = None
    if cfg["part_size"] is not None:
        from .spectral import register_bipartition

        code = build_code("surface", (lx, ly))
        part = register_bipartition(code.lattice, cfg["part_size"])
    result = dome_experiment(
        lx, ly, cfg["seed"], part, cfg["h_low"], cfg["h_high"], cfg["j"]
    )
    _write_csv(
        os.path.join(outdir, "dome.csv"), meta,
        ["energy", "entropy"],
        zip(result["evals"], result["entropies"]),
    )
    _write_json(os.path.join(outdir, "dome.json"), {
        "max_entropy": result["max_entropy"],
        "page": result["page"],
        "part": list(result["part"]),
        "mid_mean": result["mid_mean"],
        "edge_mean_low": result["edge_mean_low"],
        "edge_mean_high": result["edge_mean_high"],
        "contrast": result["contrast"],
    })
    return ["dome.csv", "dome.json"]


def _run_quench(cfg, meta, outdir):
    lx, ly = cfg["code"]["dims"]
    result = quench_experiment(
        lx, ly, cfg["nu"], cfg["xi"], cfg["j"], cfg["g"], cfg["charge"],
        cfg["t_max"], cfg["dt"],
    )
    header = ["t"] + list(result["labels"])
    rows = zip(result["times"], *result["series"])
    _write_csv(os.path.join(outdir, "quench.csv"), meta, header, rows)
    _write_json(os.path.join(outdir, "quench.json"), {
        "de": {
            label: float(v)
            for label, v in zip(result["labels"], result["de"])
        },
        "init_n_x": result["init"][0],
        "init_n_z": result["init"][1],
        "nu": result["nu"], "xi": result["xi"],
        "j": result["j"], "g": result["g"],
        "charge": result["charge"],
    })
    return ["quench.csv", "quench.json"]


def _run_lifetime_sweep(cfg, meta, outdir):
    lx, ly = cfg["code"]["dims"]
    result = lifetime_sweep(
        lx, ly, cfg["xi"], cfg["j"],
        cfg["nus"], cfg["fixed_g"], cfg["gs"], cfg["fixed_nu"],
        cfg["t_max"], cfg["dt"],
    )
    rows = []
    for sweep, sweep_rows in (("nu", result["nu_rows"]),
                              ("g", result["g_rows"])):
        for row in sweep_rows:
            censored = "".join(
                c for c in "xz" if row[f"censored_{c}"]
            ) or "none"
            rows.append((
                sweep, row["nu"], row["g"],
                row["tau_x"], row["tau_z"], censored,
            ))
    _write_csv(
        os.path.join(outdir, "lifetime.csv"), meta,
        ["sweep", "nu", "g", "tau_x", "tau_z", "censored"], rows,
    )
    _write_json(os.path.join(outdir, "lifetime.json"), {
        "fits": result["fits"],
        "xi": result["xi"], "j": result["j"],
        "fixed_nu": cfg["fixed_nu"], "fixed_g": cfg["fixed_g"],
        "t_max": cfg["t_max"],
    })
    return ["lifetime.csv", "lifetime.json"]


def _run_bacon_shor_rstats(cfg, meta, outdir):
    lx, ly = cfg["code"]["dims"]
    result = bacon_shor_rstats(
        lx, ly, cfg["n_seeds"], cfg["seed"],
        cfg["mu0"], cfg["base"], cfg["spread"],
    )
    _write_csv(
        os.path.join(outdir, "ratios.csv"), meta,
        ["index", "ratio"], list(enumerate(result["ratios"])),
    )
    _write_csv(
        os.path.join(outdir, "spectra.csv"), meta,
        ["sector", "index", "energy"],
        [
            (s, i, e)
            for s, evals in enumerate(result["example_spectra"])
            for i, e in enumerate(evals)
        ],
    )
    _write_json(os.path.join(outdir, "bs_rstats.json"), {
        "rbar": result["rbar"],
        "sem": result["sem"],
        "n_seeds": result["n_seeds"],
        "sector_dim": result["sector_dim"],
        "n_sectors": result["n_sectors"],
        "rbar_per_seed": result["rbar_per_seed"],
        "goe_mean": GOE_MEAN_RATIO,
        "poisson_mean": POISSON_MEAN_RATIO,
    })
    return ["ratios.csv", "spectra.csv", "bs_rstats.json"]


_RUNNERS = {
    "verify": _run_verify,
    "spectrum": _run_spectrum,
    "rstats": _run_rstats,
    "dome": _run_dome,
    "quench": _run_quench,
    "lifetime-sweep": _run_lifetime_sweep,
    "bacon-shor-rstats": _run_bacon_shor_rstats,
}


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    root = args.output_root or os.environ.get(OUTPUT_ROOT_ENV) or "runs"
    outdir = os.path.join(root, cfg["output"] or cfg["kind"])
    os.makedirs(outdir, exist_ok=True)
    if cfg["memory_budget_gib"] is not None:
        set_memory_budget(cfg["memory_budget_gib"] * 2**30)
    try:
        code = build_code(cfg["code"]["kind"], cfg["code"]["dims"])
        meta = {
            "kind": cfg["kind"],
            "code": f"{cfg['code']['kind']} {cfg['code']['dims']}",
            "seed": cfg["seed"],
            "fingerprint": _fingerprint(code),
            "version": __version__,
        }
        started = time.monotonic()
        artifacts = _RUNNERS[cfg["kind"]](cfg, meta, outdir)
        wall = time.monotonic() - started
    finally:
        set_memory_budget(None)

    with open(
        os.path.join(outdir, "resolved_config.yaml"), "w", encoding="utf-8"
    ) as fh:
        yaml.safe_dump(cfg, fh, sort_keys=True)
    artifacts = artifacts + ["resolved_config.yaml"]
    for name in artifacts:
        if not os.path.exists(os.path.join(outdir, name)):
            raise DataQualityError(f"artifact {name} was not written")
    manifest = {
        "version": __version__,
        "kind": cfg["kind"],
        "config": cfg,
        "code_fingerprint": meta["fingerprint"],
        "wall_seconds": wall,
        "artifacts": sorted(artifacts),
    }
    tmp = os.path.join(outdir, "run_manifest.json.tmp")
    _write_json(tmp, manifest)
    os.replace(tmp, os.path.join(outdir, "run_manifest.json"))
    print(f"{cfg['kind']}: {len(artifacts)} artifacts in {outdir}")
    return 0


def _support_label(op) -> str:
    parts = []
    for q in op.support:
        x = (op.x >> q) & 1
        z = (op.z >> q) & 1
        letter = "Y" if x and z else ("X" if x else "Z")
        parts.append(f"{letter}{q + 1}")
    return "".join(parts) if parts else "I"


def _cmd_list_codes(_args) -> int:
    for kind in sorted(CODE_BUILDERS):
        _, arity = CODE_BUILDERS[kind]
        dims = ", ".join(f"d{i + 1}" for i in range(arity))
        print(f"{kind}({dims})" if dims else kind)
    return 0


def _cmd_describe(args) -> int:
    code = build_code(args.kind, args.dims)
    code.verify()
    n, k, r, rank_s = code.params()
    try:
        distance = str(code.distance())
    except ResourceRefusalError:
        distance = "?"
    print(f"{args.kind} {tuple(args.dims)}: "
          f"[[{n}, {k}, {r}, {distance}]] (rank S = {rank_s})")
    print("gauge generators:")
    for op in code.gauge_gens:
        print(f"  {_support_label(op)}")
    print("stabilizers:")
    for op in code.stabilizer_gens:
        print(f"  {_support_label(op)}")
    print("logical pairs:")
    for lx, lz in code.logical_pairs:
        print(f"  {_support_label(lx)} / {_support_label(lz)}")
    return 0


def _dump_model(cfg):
    kind = cfg["kind"]
    dims = cfg["code"]["dims"]
    if kind == "bacon-shor-rstats":
        code = build_code("bacon_shor", dims)
        return bacon_shor_model(
            code, cfg["seed"], cfg["base"], cfg["spread"], cfg["mu0"]
        )
    code = build_code("surface", dims)
    if kind == "quench":
        return memory_model(
            code, cfg["nu"], cfg["xi"] * cfg["nu"], cfg["j"], cfg["g"]
        )
    if kind == "lifetime-sweep":
        return memory_model(
            code, cfg["fixed_nu"], cfg["xi"] * cfg["fixed_nu"],
            cfg["j"], cfg["fixed_g"],
        )
    if kind in ("spectrum", "rstats", "dome"):
        return disordered_field_model(
            code, cfg["seed"], cfg["h_low"], cfg["h_high"], cfg["j"]
        )
    raise ValidationError(f"experiment {kind!r} has no model to dump")


def _cmd_dump_terms(args) -> int:
    cfg = _load_config(args.config)
    sys.stdout.write(_dump_model(cfg).to_text())
    return 0


def _cmd_validate(args) -> int:
    _load_config(args.config)
    print(f"{args.config}: ok")
    return 0


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gaugemem",
        description="subsystem-code memory experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment from a YAML config")
    run_p.add_argument("config")
    run_p.add_argument(
        "--output-root",
        help=f"artifact root (default ${OUTPUT_ROOT_ENV} or ./runs)",
    )
    run_p.set_defaults(func=_cmd_run)

    list_p = sub.add_parser("list-codes", help="print the code registry")
    list_p.set_defaults(func=_cmd_list_codes)

    desc_p = sub.add_parser("describe", help="print a code's structure")
    desc_p.add_argument("kind")
    desc_p.add_argument("dims", nargs="*", type=int)
    desc_p.set_defaults(func=_cmd_describe)

    dump_p = sub.add_parser(
        "dump-terms", help="print a config's model terms as text"
    )
    dump_p.add_argument("config")
    dump_p.set_defaults(func=_cmd_dump_terms)

    val_p = sub.add_parser("validate", help="check a config without running")
    val_p.add_argument("config")
    val_p.set_defaults(func=_cmd_validate)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceRefusalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DataQualityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
