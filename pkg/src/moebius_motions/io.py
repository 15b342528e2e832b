"""File formats: CSV tables and JSON records, each tagged with a schema line."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .geodesic_engine import GeodesicPath, path_to_rows
from .kinetic_metric import InducedField, field_to_rows
from .moebius_group import MoebiusMap
from .motion_energy import SampledMotion

PATH_SCHEMA = "moebius-motions/path v1"
FIELD_SCHEMA = "moebius-motions/field v1"
ENERGY_SCHEMA = "moebius-motions/energy v1"
GRAM_SCHEMA = "moebius-motions/gram v1"
MOTION_SCHEMA = "moebius-motions/motion v1"

PATH_COLUMNS = ("s", "t", "rho", "theta", "dt", "drho", "dtheta", "speed", "clairaut_c")


class FormatError(ValueError):
    """Input file does not follow the expected schema."""


def _write_table(dest, schema, columns, rows, footer=()):
    with open(dest, "w", newline="") as fh:
        fh.write(f"# {schema}\n")
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
        for line in footer:
            fh.write(f"# {line}\n")


def write_path_csv(path: GeodesicPath, dest) -> None:
    footer = []
    if path.boundary_reached:
        footer.append(f"boundary_reached s={float(path.s[-1])!r} rho={float(path.rho[-1])!r}")
    _write_table(dest, PATH_SCHEMA, PATH_COLUMNS, path_to_rows(path), footer)


def read_path_csv(src) -> GeodesicPath:
    text = Path(src).read_text()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# moebius-motions/path"):
        raise FormatError(f"{src}: missing path schema header")
    body = [ln for ln in lines[1:] if ln and not ln.startswith("#")]
    reader = csv.reader(body)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"{src}: empty table") from None
    if tuple(header) != PATH_COLUMNS:
        raise FormatError(f"{src}: unexpected columns {header}")
    try:
        data = np.array([[float(x) for x in row] for row in reader])
    except ValueError as exc:
        raise FormatError(f"{src}: {exc}") from exc
    if data.ndim != 2 or len(data) < 2:
        raise FormatError(f"{src}: need at least two samples")
    s, t, rho, th, dt, drho, dth = (data[:, i] for i in range(7))
    step = float(s[1] - s[0])
    hit = any(ln.startswith("# boundary_reached") for ln in lines)
    return GeodesicPath(s, t, rho, th, dt, drho, dth, step, hit)


def path_to_json(path: GeodesicPath) -> dict:
    rows = np.array(path_to_rows(path))
    out = {"schema": PATH_SCHEMA, "boundary_reached": path.boundary_reached}
    out.update({name: rows[:, i].tolist() for i, name in enumerate(PATH_COLUMNS)})
    return out


def write_field_csv(field: InducedField, dest) -> None:
    _write_table(dest, FIELD_SCHEMA, ("index", "z_re", "z_im", "field_re", "field_im"), field_to_rows(field))


def write_gram_csv(gram: np.ndarray, dest) -> None:
    names = ("t", "rho", "theta")
    _write_table(dest, GRAM_SCHEMA, ("", *names), [(n, *row) for n, row in zip(names, gram)])


def write_energy_csv(times, energies, dest) -> None:
    _write_table(dest, ENERGY_SCHEMA, ("t", "energy"), zip(times, energies))


def map_to_json(g: MoebiusMap) -> str:
    return json.dumps(g.to_dict())


def map_from_json(text: str) -> MoebiusMap:
    try:
        return MoebiusMap.from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise FormatError(str(exc)) from exc


def write_motion_json(motion: SampledMotion, dest) -> None:
    record = {"schema": MOTION_SCHEMA, **motion.to_dict()}
    Path(dest).write_text(json.dumps(record, indent=1))


def read_motion_json(src) -> SampledMotion:
    try:
        data = json.loads(Path(src).read_text())
        return SampledMotion.from_dict(data)
    except (OSError, json.JSONDecodeError, ValueError, AttributeError) as exc:
        raise FormatError(f"{src}: {exc}") from exc
