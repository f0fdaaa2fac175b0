"""
Rule files: JSON documents with every number stored as a 17-digit decimal string.

Generator files ("kind": "generator") hold the structure and one block per
generator; point files ("kind": "points") hold explicit points and weights.
Loading re-validates everything, so a file that breaks a rule invariant is
rejected with the line and field of the problem.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..core.errors import RuleFormatError, StructureError
from ..core.rules import AnyRule, Block, CubatureRule, PointRule, constraint_violation
from ..core.search import RuleStructure
from ..core.symmetry import GENERATOR_TYPES, make_generator

FORMAT_VERSION = 1
SPHERE_AREA = 4.0 * math.pi
WEIGHT_SUM_RTOL = 1e-10


def format_number(value: float) -> str:
    """17 significant digits, enough to read back the same double."""
    return f"{float(value):.17g}"


def rule_to_dict(rule: AnyRule) -> Dict[str, Any]:
    """JSON-ready representation of a rule."""
    if isinstance(rule, CubatureRule):
        blocks = []
        for c, entries in rule.blocks.items():
            for block in entries:
                blocks.append({
                    "class": c,
                    "weight": format_number(block.weight),
                    "params": [format_number(p) for p in block.params],
                })
        return {
            "format": FORMAT_VERSION,
            "kind": "generator",
            "name": rule.name,
            "m": rule.m,
            "degree": rule.degree,
            "structure": list(rule.structure.counts),
            "provenance": rule.provenance,
            "blocks": blocks,
        }
    return {
        "format": FORMAT_VERSION,
        "kind": "points",
        "name": rule.name,
        "degree": rule.degree,
        "points": [[format_number(v) for v in point] for point in rule.points],
        "weights": [format_number(w) for w in rule.weights],
    }


def save(rule: AnyRule, path: Union[str, Path]) -> Path:
    """
    Write a rule file.

    Args:
        rule: CubatureRule or PointRule
        path: Destination file; parent directories are created

    Returns:
        The path written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(rule), encoding="utf-8")
    except OSError as ex:
        raise RuntimeError(f"Failed to write rule file {path}: {ex}")
    return path


def dumps(rule: AnyRule) -> str:
    return json.dumps(rule_to_dict(rule), indent=2, ensure_ascii=False) + "\n"


class _Reader:
    """Field access with error locations taken from the source text."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def line_of(self, key: str, occurrence: int = 0) -> Optional[int]:
        """1-based line of the n-th occurrence of a JSON key, if present."""
        needle = f'"{key}"'
        seen = 0
        for number, line in enumerate(self.lines, start=1):
            if needle in line:
                if seen == occurrence:
                    return number
                seen += 1
        return None

    def fail(self, message: str, field: str, key: Optional[str] = None, occurrence: int = 0) -> RuleFormatError:
        return RuleFormatError(message, self.line_of(key or field.split(".")[-1].split("[")[0], occurrence), field)


def _number(reader: _Reader, value: Any, field: str, key: str, occurrence: int = 0) -> float:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise reader.fail(f"expected a number, got {value!r}", field, key, occurrence)
    try:
        number = float(value)
    except ValueError:
        raise reader.fail(f"cannot parse number {value!r}", field, key, occurrence)
    if not math.isfinite(number):
        raise reader.fail(f"non-finite number {value!r}", field, key, occurrence)
    return number


def _require(reader: _Reader, doc: Dict[str, Any], key: str, kind: type) -> Any:
    if key not in doc:
        raise RuleFormatError(f"missing field '{key}'", None, key)
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, kind):
        raise reader.fail(f"field has type {type(value).__name__}, expected {kind.__name__}", key)
    return value


def _load_generator_rule(reader: _Reader, doc: Dict[str, Any]) -> CubatureRule:
    m = _require(reader, doc, "m", int)
    if m < 1:
        raise reader.fail(f"m must be at least 1, got {m}", "m")
    degree = doc.get("degree")
    if degree is not None and degree != 2 * m + 1:
        raise reader.fail(f"degree {degree} does not match m={m}", "degree")
    counts = _require(reader, doc, "structure", list)
    try:
        structure = RuleStructure(tuple(counts))
        structure.require_u3()
    except StructureError as ex:
        raise reader.fail(str(ex), "structure")

    blocks: Dict[int, List[Block]] = {}
    entries = _require(reader, doc, "blocks", list)
    for index, entry in enumerate(entries):
        field = f"blocks[{index}]"
        if not isinstance(entry, dict):
            raise reader.fail("block must be an object", field, "class", index)
        c = entry.get("class")
        if not isinstance(c, int) or isinstance(c, bool) or not 1 <= c <= 6:
            raise reader.fail(f"class must be an integer in 1..6, got {c!r}", f"{field}.class", "class", index)
        weight = _number(reader, entry.get("weight"), f"{field}.weight", "weight", index)
        raw = entry.get("params")
        if not isinstance(raw, list) or len(raw) != GENERATOR_TYPES[c].param_count:
            raise reader.fail(
                f"class {c} takes {GENERATOR_TYPES[c].param_count} parameters", f"{field}.params", "params", index
            )
        params = tuple(_number(reader, p, f"{field}.params", "params", index) for p in raw)
        violation = constraint_violation(c, params)
        if violation > 1e-12:
            raise reader.fail(
                f"generator {params} violates the on-sphere constraint by {violation:.3e}",
                f"{field}.params",
                "params",
                index,
            )
        try:
            make_generator(c, params)
        except StructureError as ex:
            raise reader.fail(str(ex), f"{field}.params", "params", index)
        blocks.setdefault(c, []).append(Block(weight, params))

    try:
        return CubatureRule(m, structure, blocks, name=doc.get("name", ""), provenance="imported")
    except StructureError as ex:
        raise reader.fail(str(ex), "blocks")


def _load_point_rule(reader: _Reader, doc: Dict[str, Any]) -> PointRule:
    points = _require(reader, doc, "points", list)
    weights = _require(reader, doc, "weights", list)
    coords = []
    for index, point in enumerate(points):
        if not isinstance(point, list) or len(point) != 3:
            raise reader.fail("point must have 3 coordinates", f"points[{index}]", "points")
        coords.append([_number(reader, v, f"points[{index}]", "points") for v in point])
    values = [_number(reader, w, f"weights[{index}]", "weights") for index, w in enumerate(weights)]
    if len(values) != len(coords):
        raise reader.fail(f"{len(coords)} points but {len(values)} weights", "weights")
    total = math.fsum(values)
    if abs(total - SPHERE_AREA) > WEIGHT_SUM_RTOL * SPHERE_AREA:
        raise reader.fail(f"weights sum to {total!r}, expected 4π = {SPHERE_AREA!r}", "weights")
    degree = doc.get("degree")
    if degree is not None and (not isinstance(degree, int) or degree < 1 or degree % 2 == 0):
        raise reader.fail(f"degree must be a positive odd integer, got {degree!r}", "degree")
    return PointRule(coords, values, degree=degree, name=doc.get("name", ""))


def loads(text: str) -> AnyRule:
    """
    Parse a rule document.

    Raises:
        RuleFormatError: malformed JSON, missing fields or invariant violations
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as ex:
        raise RuleFormatError(f"invalid JSON: {ex.msg}", ex.lineno)
    if not isinstance(doc, dict):
        raise RuleFormatError("rule file must hold a JSON object", 1)

    reader = _Reader(text)
    kind = doc.get("kind")
    if kind == "generator":
        return _load_generator_rule(reader, doc)
    if kind == "points":
        return _load_point_rule(reader, doc)
    raise reader.fail(f"kind must be 'generator' or 'points', got {kind!r}", "kind")


def load(path: Union[str, Path]) -> AnyRule:
    """Read a rule file written by save."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as ex:
        raise RuleFormatError(f"Failed to read rule file {path}: {ex}")
    return loads(text)
