"""Workspace files: named algebras, modules, maps and resolution references.

The format is JSON with `"format": 1`.  Rationals are exact "p/q" strings
(or plain integers); structure constants are sparse [i, j, k, value]
quadruples; module twists, idempotents and map entries are sparse
[row, col, coords] triples with coords a full coordinate vector over the
algebra basis.  Example:

    {
      "format": 1,
      "use_catalog": ["A2"],
      "algebras": {
        "K": {"basis": [{"label": "1", "degree": 0}],
               "mult": [[0, 0, 0, "1"]],
               "unit": ["1"]}
      },
      "modules": {
        "P2": {"algebra": "A2",
                "generators": [{"label": "g", "shift": 0}],
                "idempotent": [[0, 0, ["0", "1", "0"]]]}
      },
      "maps": {
        "f": {"source": "P2", "target": "P2", "degree": 0,
               "entries": [[0, 0, ["0", "3", "0"]]]}
      },
      "resolutions": {"rA2": "A2"}
    }
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict

from .algebras import DgAlgebra, validate_algebra
from .catalog import catalog, catalog_entry
from .errors import WorkspaceError
from .modules import ModuleMap, PerfectModule, SemiFreeModule
from .resolutions import DiagonalResolution

FORMAT_VERSION = 1


def parse_rational(text, where: str) -> Fraction:
    try:
        if isinstance(text, int):
            return Fraction(text)
        if isinstance(text, str):
            return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    raise WorkspaceError(f"not an exact rational: {text!r}", where)


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


class Workspace:
    """Fully resolved workspace: algebras, modules, maps, resolutions."""

    def __init__(self):
        self.algebras: Dict[str, DgAlgebra] = {}
        self.modules: Dict[str, PerfectModule] = {}
        self.module_algebra: Dict[str, str] = {}
        self.maps: Dict[str, ModuleMap] = {}
        self.map_info: Dict[str, dict] = {}
        self.resolutions: Dict[str, DiagonalResolution] = {}
        self.raw: dict = {"format": FORMAT_VERSION}

    def algebra(self, name: str) -> DgAlgebra:
        if name not in self.algebras:
            raise WorkspaceError(f"unknown algebra {name!r}")
        return self.algebras[name]

    def module(self, name: str) -> PerfectModule:
        if name not in self.modules:
            raise WorkspaceError(f"unknown module {name!r}")
        return self.modules[name]

    def map(self, name: str) -> ModuleMap:
        if name not in self.maps:
            raise WorkspaceError(f"unknown map {name!r}")
        return self.maps[name]

    def resolution(self, name: str) -> DiagonalResolution:
        if name not in self.resolutions:
            raise WorkspaceError(f"unknown resolution {name!r}")
        return self.resolutions[name]


def _parse_algebra(name: str, data: dict) -> DgAlgebra:
    where = f"algebras.{name}"
    basis = data.get("basis")
    if not isinstance(basis, list) or not basis:
        raise WorkspaceError("algebra needs a nonempty basis list", where)
    labels = []
    degrees = []
    for t, b in enumerate(basis):
        if not isinstance(b, dict) or "label" not in b:
            raise WorkspaceError(f"basis[{t}] needs a label", where)
        labels.append(str(b["label"]))
        degrees.append(int(b.get("degree", 0)))
    n = len(labels)
    mult: Dict = {}
    for t, trip in enumerate(data.get("mult", [])):
        if not (isinstance(trip, list) and len(trip) == 4):
            raise WorkspaceError(f"mult[{t}] must be [i, j, k, value]", where)
        i, j, k, val = trip
        for idx in (i, j, k):
            if not isinstance(idx, int) or not 0 <= idx < n:
                raise WorkspaceError(
                    f"mult[{t}] index {idx} out of range 0..{n - 1}", where)
        c = parse_rational(val, f"{where}.mult[{t}]")
        key = (i, j)
        mult.setdefault(key, [])
        mult[key] = list(mult[key]) + [(k, c)]
    mult = {k: tuple(v) for k, v in mult.items()}
    unit_raw = data.get("unit")
    if not isinstance(unit_raw, list) or len(unit_raw) != n:
        raise WorkspaceError("unit must list one coordinate per basis element",
                             where)
    unit = [parse_rational(u, f"{where}.unit") for u in unit_raw]
    diff: Dict = {}
    for t, trip in enumerate(data.get("differential", [])):
        if not (isinstance(trip, list) and len(trip) == 3):
            raise WorkspaceError(f"differential[{t}] must be [i, j, value]", where)
        i, j, val = trip
        if not (isinstance(i, int) and 0 <= i < n and isinstance(j, int)
                and 0 <= j < n):
            raise WorkspaceError(f"differential[{t}] index out of range", where)
        diff.setdefault(i, [])
        diff[i] = list(diff[i]) + [(j, parse_rational(val, where))]
    diff = {k: tuple(v) for k, v in diff.items()}
    try:
        return validate_algebra(labels, degrees, mult, unit, diff)
    except Exception as exc:  # surface validator failures with location
        raise WorkspaceError(f"algebra invalid: {exc}", where)


def _parse_entry_matrix(data, rank_rows: int, rank_cols: int, alg: DgAlgebra,
                        where: str):
    rows = [[alg.zero() for _ in range(rank_cols)] for _ in range(rank_rows)]
    for t, trip in enumerate(data or []):
        if not (isinstance(trip, list) and len(trip) == 3):
            raise WorkspaceError(f"entry[{t}] must be [row, col, coords]", where)
        j, i, coords = trip
        if not (isinstance(j, int) and 0 <= j < rank_rows
                and isinstance(i, int) and 0 <= i < rank_cols):
            raise WorkspaceError(f"entry[{t}] position out of range", where)
        if not isinstance(coords, list) or len(coords) != alg.dim:
            raise WorkspaceError(
                f"entry[{t}] needs {alg.dim} coordinates", where)
        vec = [parse_rational(c, where) for c in coords]
        rows[j][i] = rows[j][i] + alg.element(vec)
    return rows


def _parse_module(name: str, data: dict, ws: Workspace) -> PerfectModule:
    where = f"modules.{name}"
    alg_name = data.get("algebra")
    if alg_name not in ws.algebras:
        raise WorkspaceError(f"unresolved algebra reference {alg_name!r}", where)
    alg = ws.algebras[alg_name]
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens:
        raise WorkspaceError("module needs a nonempty generator list", where)
    labels = [str(g.get("label", f"g{t}")) for t, g in enumerate(gens)]
    shifts = [int(g.get("shift", 0)) for g in gens]
    rank = len(gens)
    twist = _parse_entry_matrix(data.get("twist"), rank, rank, alg,
                                f"{where}.twist")
    try:
        mod = SemiFreeModule(alg, shifts, twist, labels)
    except Exception as exc:
        raise WorkspaceError(f"module invalid: {exc}", where)
    idem = None
    if data.get("idempotent") is not None:
        entries = _parse_entry_matrix(data["idempotent"], rank, rank, alg,
                                      f"{where}.idempotent")
        try:
            idem = ModuleMap(mod, mod, 0, entries)
            return PerfectModule(mod, idem)
        except Exception as exc:
            raise WorkspaceError(f"idempotent invalid: {exc}", where)
    return PerfectModule(mod)


def _parse_map(name: str, data: dict, ws: Workspace) -> ModuleMap:
    where = f"maps.{name}"
    src = data.get("source")
    tgt = data.get("target")
    if src not in ws.modules:
        raise WorkspaceError(f"unresolved module reference {src!r}", where)
    if tgt not in ws.modules:
        raise WorkspaceError(f"unresolved module reference {tgt!r}", where)
    source = ws.modules[src].module
    target = ws.modules[tgt].module
    if not source.algebra.same_structure(target.algebra):
        raise WorkspaceError("map endpoints live over different algebras", where)
    degree = int(data.get("degree", 0))
    entries = _parse_entry_matrix(data.get("entries"), target.rank, source.rank,
                                  source.algebra, f"{where}.entries")
    try:
        return ModuleMap(source, target, degree, entries)
    except Exception as exc:
        raise WorkspaceError(f"map invalid: {exc}", where)


def parse_workspace(text: str) -> Workspace:
    """Parse and fully validate a workspace; the first failure is reported
    with its location."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"syntax error: {exc}")
    if not isinstance(data, dict):
        raise WorkspaceError("workspace must be a JSON object")
    fmt = data.get("format", FORMAT_VERSION)
    if fmt != FORMAT_VERSION:
        raise WorkspaceError(f"unsupported format {fmt!r}")
    ws = Workspace()
    ws.raw = data
    for name in data.get("use_catalog", []):
        try:
            ent = catalog_entry(name)
        except KeyError:
            raise WorkspaceError(f"no catalog algebra named {name!r}",
                                 "use_catalog")
        ws.algebras[name] = ent.algebra
        ws.resolutions[name] = ent.resolution
    for name, adata in (data.get("algebras") or {}).items():
        ws.algebras[name] = _parse_algebra(name, adata)
    for name, mdata in (data.get("modules") or {}).items():
        ws.modules[name] = _parse_module(name, mdata, ws)
        ws.module_algebra[name] = mdata["algebra"]
    for name, fdata in (data.get("maps") or {}).items():
        ws.maps[name] = _parse_map(name, fdata, ws)
        ws.map_info[name] = {"source": fdata["source"],
                             "target": fdata["target"]}
    for name, ref in (data.get("resolutions") or {}).items():
        try:
            ent = catalog_entry(ref)
        except KeyError:
            raise WorkspaceError(
                f"resolution {name!r} references unknown catalog entry {ref!r}",
                "resolutions")
        ws.resolutions[name] = ent.resolution
    return ws


def default_workspace() -> Workspace:
    """Workspace with the whole catalog preloaded."""
    ws = Workspace()
    for name, ent in catalog().items():
        ws.algebras[name] = ent.algebra
        ws.resolutions[name] = ent.resolution
    return ws


def serialize_workspace(ws: Workspace) -> str:
    """Serialize the raw description (round-trips with parse_workspace)."""
    return json.dumps(ws.raw, sort_keys=True, indent=2) + "\n"
