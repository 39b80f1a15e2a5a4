"""Scenario files: spaces, losses, and credal sets as validated JSON.

A scenario file looks like::

    {
      "schema_version": 1,
      "name": "my_problem",
      "description": "optional free text",
      "space": {"x": ["h", "t"], "y": ["h", "t"], "a": ["h", "t"]},
      "loss": [[0, 1], [1, 0]],
      "credal": {"vertices": [[0.5, 0.0, 0.0, 0.5], ...]}
    }

``loss`` is outcome-major (one row per y label, one column per action).
``credal`` holds either ``vertices`` (row-major (x, y) cell weights, one
joint per entry) or ``constraints`` (a list of ``{"coeffs": [...],
"relation": "eq"|"le", "rhs": r}`` over the same cells; the simplex
conditions are implicit).  Loading validates everything and eagerly builds
the credal set, so infeasible constraint systems fail at load time.
Validation errors name the offending JSON path and the closest line in the
source text.
"""

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .core import LossFn, SpaceSpec
from .credal import CredalSet, LinearConstraint, from_constraints
from .errors import CredalkitError, ValidationError

SCHEMA_VERSION = 1
_BUILTIN_PACKAGE = "credalkit.data"


def _find_line(text, path):
    """1-based line of the deepest locatable key prefix of ``path``."""
    if text is None:
        return None
    pos = 0
    for part in path:
        if not isinstance(part, str):
            break
        idx = text.find(f'"{part}"', pos)
        if idx < 0:
            break
        pos = idx
    return text.count("\n", 0, pos) + 1


def _fail(source, text, path, message):
    where = ".".join(
        p if isinstance(p, str) else f"[{p}]" for p in path
    ).replace(".[", "[")
    line = _find_line(text, path)
    anchor = f"{source}:{line}: " if line else (f"{source}: " if source else "")
    raise ValidationError(f"{anchor}{where}: {message}")


def _expect(cond, source, text, path, message):
    if not cond:
        _fail(source, text, path, message)


@dataclass
class Scenario:
    """A validated decision problem: space, loss, credal set."""

    name: str
    description: str
    space: SpaceSpec
    loss: LossFn
    credal_set: CredalSet
    credal_vertices: np.ndarray | None = None     # as given in the file
    credal_constraints: tuple | None = None       # as given in the file

    def to_dict(self):
        credal = {}
        if self.credal_constraints is not None:
            credal["constraints"] = [
                {"coeffs": list(c.coeffs), "relation": c.relation, "rhs": c.rhs}
                for c in self.credal_constraints
            ]
        else:
            vertices = (
                self.credal_vertices
                if self.credal_vertices is not None
                else self.credal_set.flat
            )
            credal["vertices"] = np.asarray(vertices).tolist()
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "description": self.description,
            "space": {
                "x": list(self.space.x_labels),
                "y": list(self.space.y_labels),
                "a": list(self.space.a_labels),
            },
            "loss": self.loss.table.tolist(),
            "credal": credal,
        }


def _parse_labels(data, key, source, text):
    path = ["space", key]
    _expect(isinstance(data, list) and data, source, text, path, "must be a nonempty list")
    _expect(
        all(isinstance(lab, str) for lab in data), source, text, path,
        "labels must be strings",
    )
    return tuple(data)


def parse_scenario(data, source="<dict>", text=None):
    """Validate a scenario dictionary and build all objects."""
    _expect(isinstance(data, dict), source, text, [], "scenario must be a JSON object")
    version = data.get("schema_version", SCHEMA_VERSION)
    _expect(
        version == SCHEMA_VERSION, source, text, ["schema_version"],
        f"unsupported schema version {version!r} (this build reads {SCHEMA_VERSION})",
    )
    for key in ("space", "loss", "credal"):
        _expect(key in data, source, text, [key], "required key is missing")
    name = data.get("name", "unnamed")
    _expect(isinstance(name, str) and name, source, text, ["name"], "must be a nonempty string")
    description = data.get("description", "")
    _expect(isinstance(description, str), source, text, ["description"], "must be a string")

    space_data = data["space"]
    _expect(isinstance(space_data, dict), source, text, ["space"], "must be an object")
    for key in ("x", "y", "a"):
        _expect(key in space_data, source, text, ["space", key], "required key is missing")
    try:
        space = SpaceSpec(
            _parse_labels(space_data["x"], "x", source, text),
            _parse_labels(space_data["y"], "y", source, text),
            _parse_labels(space_data["a"], "a", source, text),
        )
    except CredalkitError as exc:
        _fail(source, text, ["space"], str(exc))

    loss_data = data["loss"]
    _expect(
        isinstance(loss_data, list) and len(loss_data) == space.ny,
        source, text, ["loss"],
        f"must be a list with one row per outcome ({space.ny} rows)",
    )
    for iy, row in enumerate(loss_data):
        _expect(
            isinstance(row, list) and len(row) == space.na,
            source, text, ["loss", iy],
            f"row for outcome {space.y_labels[iy]!r} must have {space.na} entries",
        )
        _expect(
            all(isinstance(v, (int, float)) and np.isfinite(v) for v in row),
            source, text, ["loss", iy], "entries must be finite numbers",
        )
    loss = LossFn(space, np.asarray(loss_data, dtype=np.float64))

    credal_data = data["credal"]
    _expect(isinstance(credal_data, dict), source, text, ["credal"], "must be an object")
    has_vertices = "vertices" in credal_data
    has_constraints = "constraints" in credal_data
    _expect(
        has_vertices != has_constraints, source, text, ["credal"],
        "needs exactly one of 'vertices' or 'constraints'",
    )
    ncell = space.nx * space.ny
    raw_vertices = None
    raw_constraints = None
    if has_vertices:
        vertices = credal_data["vertices"]
        _expect(
            isinstance(vertices, list) and vertices, source, text,
            ["credal", "vertices"], "must be a nonempty list of joints",
        )
        rows = []
        for i, row in enumerate(vertices):
            path = ["credal", "vertices", i]
            _expect(
                isinstance(row, list) and len(row) == ncell, source, text, path,
                f"joint must list {ncell} cell weights (row-major over x, then y)",
            )
            _expect(
                all(isinstance(v, (int, float)) and np.isfinite(v) for v in row),
                source, text, path, "entries must be finite numbers",
            )
            arr = np.asarray(row, dtype=np.float64)
            _expect(arr.min() >= -1e-9, source, text, path, "cell weights must be nonnegative")
            _expect(
                abs(arr.sum() - 1.0) <= 1e-9, source, text, path,
                f"cell weights must sum to 1, got {arr.sum()!r}",
            )
            rows.append(arr)
        raw_vertices = np.asarray(rows)
        credal_set = CredalSet(space, [r.reshape(space.nx, space.ny) for r in rows])
    else:
        constraints = credal_data["constraints"]
        _expect(
            isinstance(constraints, list) and constraints, source, text,
            ["credal", "constraints"], "must be a nonempty list",
        )
        parsed = []
        for i, con in enumerate(constraints):
            path = ["credal", "constraints", i]
            _expect(isinstance(con, dict), source, text, path, "must be an object")
            for key in ("coeffs", "relation", "rhs"):
                _expect(key in con, source, text, path, f"missing key {key!r}")
            _expect(
                isinstance(con["coeffs"], list) and len(con["coeffs"]) == ncell,
                source, text, path,
                f"coeffs must list {ncell} numbers (row-major over x, then y)",
            )
            _expect(
                con["relation"] in ("eq", "le"), source, text, path,
                "relation must be 'eq' or 'le'",
            )
            _expect(
                isinstance(con["rhs"], (int, float)) and np.isfinite(con["rhs"]),
                source, text, path, "rhs must be a finite number",
            )
            parsed.append(LinearConstraint(tuple(con["coeffs"]), con["relation"], float(con["rhs"])))
        raw_constraints = tuple(parsed)
        try:
            credal_set = from_constraints(space, parsed)
        except CredalkitError as exc:
            _fail(source, text, ["credal", "constraints"], str(exc))

    return Scenario(
        name=name,
        description=description,
        space=space,
        loss=loss,
        credal_set=credal_set,
        credal_vertices=raw_vertices,
        credal_constraints=raw_constraints,
    )


def loads_scenario(text, source="<string>"):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{source}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    return parse_scenario(data, source=source, text=text)


def load_scenario(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return loads_scenario(text, source=str(path))


def save_scenario(scenario, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def builtin_names():
    files = resources.files(_BUILTIN_PACKAGE)
    return tuple(
        sorted(
            entry.name[: -len(".json")]
            for entry in files.iterdir()
            if entry.name.endswith(".json")
        )
    )


def load_builtin(name):
    files = resources.files(_BUILTIN_PACKAGE)
    entry = files / f"{name}.json"
    if not entry.is_file():
        raise ValidationError(
            f"unknown built-in scenario {name!r}; available: {', '.join(builtin_names())}"
        )
    return loads_scenario(entry.read_text(encoding="utf-8"), source=f"builtin:{name}")


def resolve_scenario(name_or_path):
    """Treat the argument as a file path first, then as a built-in name."""
    import os

    if os.path.exists(name_or_path):
        return load_scenario(name_or_path)
    if "/" in name_or_path or name_or_path.endswith(".json"):
        raise ValidationError(f"scenario file {name_or_path!r} does not exist")
    return load_builtin(name_or_path)


def load_update_table(path, space):
    """Read an external update-rule table: {"entries": {x: {"vertices": [...]} | null}}.

    Vertices use the same row-major joint layout as scenario credal sets.
    """
    from .updating import UpdateRuleTable

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    source = str(path)
    _expect(isinstance(data, dict) and "entries" in data, source, text, ["entries"],
            "table file needs an 'entries' object")
    entries_data = data["entries"]
    _expect(isinstance(entries_data, dict), source, text, ["entries"], "must be an object")
    ncell = space.nx * space.ny
    entries = {}
    for x in space.x_labels:
        _expect(x in entries_data, source, text, ["entries", x], "missing observation entry")
        val = entries_data[x]
        if val is None:
            entries[x] = None
            continue
        path_x = ["entries", x, "vertices"]
        _expect(
            isinstance(val, dict) and isinstance(val.get("vertices"), list),
            source, text, ["entries", x], "must be null or {'vertices': [...]}",
        )
        rows = []
        for i, row in enumerate(val["vertices"]):
            _expect(
                isinstance(row, list) and len(row) == ncell,
                source, text, path_x + [i], f"joint must list {ncell} cell weights",
            )
            rows.append(np.asarray(row, dtype=np.float64).reshape(space.nx, space.ny))
        try:
            entries[x] = CredalSet(space, rows)
        except CredalkitError as exc:
            _fail(source, text, path_x, str(exc))
    return UpdateRuleTable(space=space, entries=entries, provenance="external", partition=None)
