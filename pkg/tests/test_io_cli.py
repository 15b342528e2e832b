import json
import math

import numpy as np
import pytest

from moebius_motions import geodesic_engine as ge
from moebius_motions import io as mio
from moebius_motions import motion_energy as me
from moebius_motions import validation
from moebius_motions.cli import main
from moebius_motions.kinetic_metric import QuadratureRule, coordinate_fields
from moebius_motions.moebius_group import MoebiusMap


@pytest.fixture(scope="module")
def short_path():
    return ge.centered_clairaut_path(1.0, 1.0, 0.5, dt=0.2)


def test_path_csv_round_trip(tmp_path, short_path):
    dest = tmp_path / "p.csv"
    mio.write_path_csv(short_path, dest)
    lines = dest.read_text().splitlines()
    assert lines[0] == "# moebius-motions/path v1"
    assert lines[1] == ",".join(mio.PATH_COLUMNS)
    back = mio.read_path_csv(dest)
    assert np.array_equal(back.rho, short_path.rho)
    assert np.array_equal(back.theta, short_path.theta)
    assert not back.boundary_reached


def test_path_csv_boundary_footer(tmp_path):
    path = ge.integrate_to_boundary(ge.turning_state(1.0, 1.0))
    dest = tmp_path / "b.csv"
    mio.write_path_csv(path, dest)
    last = dest.read_text().splitlines()[-1]
    assert last.startswith("# boundary_reached s=") and "np.float64" not in last
    assert mio.read_path_csv(dest).boundary_reached


def test_read_path_csv_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("s,t\n1,2\n")
    with pytest.raises(mio.FormatError):
        mio.read_path_csv(bad)
    bad.write_text("# moebius-motions/path v1\ns,t\n1,2\n")
    with pytest.raises(mio.FormatError):
        mio.read_path_csv(bad)


def test_path_json(short_path):
    rec = mio.path_to_json(short_path)
    assert rec["schema"] == mio.PATH_SCHEMA
    assert set(mio.PATH_COLUMNS) <= set(rec)
    json.dumps(rec)


def test_other_tables(tmp_path):
    mio.write_field_csv(coordinate_fields(0.5, QuadratureRule(8))[1], tmp_path / "f.csv")
    assert (tmp_path / "f.csv").read_text().startswith("# moebius-motions/field v1\nindex,z_re")
    mio.write_gram_csv(np.eye(3), tmp_path / "g.csv")
    assert len((tmp_path / "g.csv").read_text().splitlines()) == 5
    mio.write_energy_csv([0.0, 1.0], [math.pi, math.pi], tmp_path / "e.csv")
    assert "t,energy" in (tmp_path / "e.csv").read_text()


def test_map_and_motion_json(tmp_path):
    g = MoebiusMap(1j, 0.25 - 0.5j)
    assert mio.map_from_json(mio.map_to_json(g)) == g
    with pytest.raises(mio.FormatError):
        mio.map_from_json("{")
    m = me.rotation_motion(np.linspace(0, 1, 11))
    mio.write_motion_json(m, tmp_path / "m.json")
    assert json.loads((tmp_path / "m.json").read_text())["schema"] == mio.MOTION_SCHEMA
    back = mio.read_motion_json(tmp_path / "m.json")
    assert np.array_equal(back.times, m.times)
    (tmp_path / "x.json").write_text("[1, 2]")
    with pytest.raises(mio.FormatError):
        mio.read_motion_json(tmp_path / "x.json")


def test_cli_metric(capsys, tmp_path):
    assert main(["metric", "--r", "0.5", "--out", str(tmp_path / "g.csv")]) == 0
    assert "max entrywise error" in capsys.readouterr().out
    assert main(["metric", "--r", "0.3", "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["passed"] and rep["max_error"] < 1e-10
    # near the boundary the uniform rule at 256 nodes cannot reach 1e-10
    assert main(["metric", "--r", "0.99"]) == 1
    assert main(["metric", "--r", "1.5"]) == 2
    assert main(["metric", "--bogus"]) == 2


def test_cli_geodesic(capsys, tmp_path):
    out = tmp_path / "p.csv"
    assert main(["geodesic", "--c", "1", "--v", "1", "--length", "0.5", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "min_rho: 0.57735026" in text
    assert mio.read_path_csv(out).s[-1] == pytest.approx(0.5)
    assert main(["geodesic", "--c", "0", "--length", "5", "--out", str(out)]) == 0
    assert "stopped early" in capsys.readouterr().out
    assert out.read_text().splitlines()[-1].startswith("# boundary_reached")
    assert main(["geodesic", "--c", "1", "--rho0", "0.9", "--length", "0.2", "--format", "json",
                 "--out", str(tmp_path / "p.json")]) == 0
    assert json.loads((tmp_path / "p.json").read_text())["schema"] == mio.PATH_SCHEMA
    assert main(["geodesic", "--step", "0.01"]) == 2
    assert main(["geodesic", "--c", "1", "--rho0", "0.1"]) == 2


def test_cli_validate(capsys, tmp_path):
    assert main(["validate", "--suite", "group,turning", "--out", str(tmp_path / "r.json")]) == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert rep["passed"] and rep["suites"] == ["group", "turning"]
    assert main(["validate", "--suite", "clairaut"]) == 0
    assert "standard form holds" in capsys.readouterr().out
    assert main(["validate", "--suite", "nonsense"]) == 2


def test_cli_energy(capsys, tmp_path):
    path = ge.centered_clairaut_path(1.0, 1.0, 0.4, dt=0.2)
    mio.write_motion_json(me.geodesic_motion(path, 20), tmp_path / "m.json")
    assert main(["energy", str(tmp_path / "m.json"), "--nodes", "64", "--variations", "3",
                 "--out", str(tmp_path / "e.csv")]) == 0
    out = capsys.readouterr().out
    assert "action:" in out and "force_free_residual:" in out
    assert main(["energy", str(tmp_path / "missing.json")]) == 2


def test_cli_plot(capsys, tmp_path):
    csv_path, svg = tmp_path / "a.csv", tmp_path / "a.svg"
    mio.write_path_csv(ge.full_arc(1.0, 1.0, step=5e-4), csv_path)
    assert main(["plot", str(csv_path), "--out", str(svg)]) == 0
    assert "hypocycloid k=" in capsys.readouterr().out
    text = svg.read_text()
    assert text.splitlines()[1] == "<!-- moebius-motions/plot v1 -->"
    assert "<svg" in text
    first = text
    main(["plot", str(csv_path), "--out", str(svg)])
    assert svg.read_text() == first
    mio.write_motion_json(me.rotation_motion(np.linspace(0, 1, 11)), tmp_path / "m.json")
    assert main(["plot", str(tmp_path / "m.json"), "--out", str(tmp_path / "m.svg")]) == 0
    (tmp_path / "bad.csv").write_text("garbage\n")
    assert main(["plot", str(tmp_path / "bad.csv"), "--out", str(svg)]) == 2


def test_validation_report_shape():
    rep = validation.run(["incompleteness"])
    assert rep["schema"] == "moebius-motions/validation v1"
    (length, theta) = rep["checks"]
    assert length["detail"]["limit"] == pytest.approx(math.pi / math.sqrt(2))
    assert length["passed"] and theta["passed"]
    with pytest.raises(KeyError):
        validation.run(["nope"])
