import json
from pathlib import Path

import pytest

from figurekit import FIGURE_KINDS, FigureSpec, SchemaError, load_inputs

GOLDEN = Path(__file__).parent / "golden"


def spec_for(kind: str, tmp_path, **style) -> FigureSpec:
    return FigureSpec.from_run_dir(
        kind, GOLDEN / kind, tmp_path / kind, style
    )


def test_known_kinds_cover_all_goldens():
    assert set(FIGURE_KINDS) == {
        p.name for p in GOLDEN.iterdir() if p.is_dir()
    }


@pytest.mark.parametrize("kind", FIGURE_KINDS)
def test_golden_inputs_validate(kind, tmp_path):
    tables, sidecar = load_inputs(spec_for(kind, tmp_path))
    assert tables and isinstance(sidecar, dict)


def test_unknown_kind_is_refused(tmp_path):
    with pytest.raises(SchemaError, match="unknown figure kind"):
        FigureSpec.from_run_dir("histogram", GOLDEN / "rstats", tmp_path / "x")
    with pytest.raises(SchemaError, match="unknown figure kind"):
        FigureSpec("histogram", {}, tmp_path / "x")


def test_missing_inputs_are_refused(tmp_path):
    with pytest.raises(SchemaError, match="needs inputs"):
        FigureSpec("dome", {"dome.csv": GOLDEN / "dome/dome.csv"},
                   tmp_path / "x")


def test_wrong_header_is_refused(tmp_path):
    # a dome table is not a ratio table
    spec = FigureSpec(
        "rstats",
        {
            "ratios.csv": GOLDEN / "dome" / "dome.csv",
            "rstats.json": GOLDEN / "rstats" / "rstats.json",
        },
        tmp_path / "x",
    )
    with pytest.raises(SchemaError, match="does not match"):
        load_inputs(spec)


def test_quench_header_variants(tmp_path):
    src = (GOLDEN / "quench" / "quench.csv").read_text()
    ok = tmp_path / "quench.csv"
    ok.write_text(src.replace("logical_z", "logical_x"))
    spec = FigureSpec(
        "quench",
        {"quench.csv": ok, "quench.json": GOLDEN / "quench" / "quench.json"},
        tmp_path / "x",
    )
    load_inputs(spec)

    bad = tmp_path / "bad.csv"
    bad.write_text(src.replace("logical_z", "logical_y"))
    spec = FigureSpec(
        "quench",
        {"quench.csv": bad, "quench.json": GOLDEN / "quench" / "quench.json"},
        tmp_path / "x",
    )
    with pytest.raises(SchemaError, match="not a quench series"):
        load_inputs(spec)


def test_sidecar_missing_keys_is_refused(tmp_path):
    sidecar = tmp_path / "rstats.json"
    sidecar.write_text(json.dumps({"rbar": 0.53}))
    spec = FigureSpec(
        "rstats",
        {"ratios.csv": GOLDEN / "rstats" / "ratios.csv",
         "rstats.json": sidecar},
        tmp_path / "x",
    )
    with pytest.raises(SchemaError, match="lacks keys"):
        load_inputs(spec)


def test_ragged_csv_is_refused(tmp_path):
    bad = tmp_path / "ratios.csv"
    bad.write_text("index,ratio\n0,0.5\n1\n")
    spec = FigureSpec(
        "rstats",
        {"ratios.csv": bad,
         "rstats.json": GOLDEN / "rstats" / "rstats.json"},
        tmp_path / "x",
    )
    with pytest.raises(SchemaError, match="wrong width"):
        load_inputs(spec)
