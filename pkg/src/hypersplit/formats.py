"""Instance and solution files.

All files are UTF-8 JSON in one canonical layout: object keys sorted, one
key per line, arrays of scalars written inline, rationals written as
normalized ``"p/q"`` or integer strings.  ``emit(parse(text)) == text`` for
every canonical file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Any, Union

from .geometry import Group, Hyperplane, PointConfig, SolutionReport
from .instances import CoverResult, PCMSInstance, PTDInstance, RMCInstance, SetSystem, Violation

__all__ = [
    "ParseError",
    "ValidationError",
    "SolutionFile",
    "format_rational",
    "parse_rational",
    "dumps",
    "parse_instance",
    "emit_instance",
    "parse_solution",
    "emit_solution",
    "solution_from_report",
    "solution_from_cover",
]

Instance = Union[PointConfig, PCMSInstance, PTDInstance, RMCInstance]


class ParseError(ValueError):
    """Malformed file; ``where`` is ``line:col`` or a JSON path."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class ValidationError(ValueError):
    """Well-formed file whose content breaks an instance invariant."""

    def __init__(self, message: str, field_name: str = ""):
        self.field = field_name
        super().__init__(f"{field_name}: {message}" if field_name else message)


# -- rationals --------------------------------------------------------------


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError("expected a rational, got a boolean", where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ParseError("non-finite number", where)
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not an exact rational: {value!r}", where) from None
    raise ParseError(f"expected a rational, got {type(value).__name__}", where)


# -- canonical JSON ---------------------------------------------------------


def _scalar(v: Any) -> str:
    return json.dumps(v, ensure_ascii=False)


def _emit(v: Any, indent: int) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{_scalar(k)}: {_emit(v[k], indent + 1)}" for k in sorted(v)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, list):
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in v):
            return "[" + ", ".join(_scalar(x) for x in v) + "]"
        return "[\n" + ",\n".join(pad + _emit(x, indent + 1) for x in v) + "\n" + end + "]"
    return _scalar(v)


def dumps(obj: Any) -> str:
    """Canonical text of a JSON-compatible value, with trailing newline."""
    return _emit(obj, 0) + "\n"


def _reject_constant(name: str):
    raise ParseError(f"non-finite literal {name}")


def _load(text: str) -> Any:
    try:
        return json.loads(text, parse_float=Decimal, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{exc.lineno}:{exc.colno}") from None


def _get(obj: dict, key: str, where: str, kind=None):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", where)
    if key not in obj:
        raise ParseError(f"missing field {key!r}", where)
    value = obj[key]
    if kind is not None and (not isinstance(value, kind) or isinstance(value, bool) and kind is not bool):
        raise ParseError(f"field {key!r} must be {kind.__name__}", f"{where}.{key}" if where else key)
    return value


def _int_list(value: Any, where: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise ParseError("expected an array of integers", where)
    return value


def _sorted_unique(items: list[int], where: str) -> list[int]:
    if len(set(items)) != len(items):
        raise ValidationError("duplicate index", where)
    return sorted(items)


# -- instances --------------------------------------------------------------


def _validated(build, where: str):
    try:
        return build()
    except ParseError:
        raise
    except ValueError as exc:
        raise ValidationError(str(exc), where) from None


def parse_instance(text: str, kind: str | None = None) -> Instance:
    """Parse any instance file; the kind is taken from ``kind``/``dim`` unless given."""
    data = _load(text)
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    if kind is None:
        kind = "geometric" if "dim" in data else data.get("kind")
    if kind == "geometric":
        return _parse_geometric(data)
    if kind in ("pcms", "ptd", "rmc"):
        return _parse_abstract(data, kind)
    raise ParseError(f"cannot tell the instance kind (got {kind!r})", "kind")


def _parse_geometric(data: dict) -> PointConfig:
    dim = _get(data, "dim", "", int)
    raw_points = _get(data, "points", "", list)
    points = []
    for j, p in enumerate(raw_points):
        if not isinstance(p, list):
            raise ParseError("expected an array of coordinates", f"points[{j}]")
        points.append(tuple(parse_rational(c, f"points[{j}][{k}]") for k, c in enumerate(p)))
    groups = []
    for i, g in enumerate(_get(data, "groups", "", list)):
        where = f"groups[{i}]"
        name = _get(g, "name", where, str)
        members = _sorted_unique(_int_list(_get(g, "members", where), f"{where}.members"), f"{where}.members")
        mu = _get(g, "mu", where, int)
        groups.append(Group(name, frozenset(members), mu))
    return _validated(lambda: PointConfig(dim, points, groups), "points/groups")


def _parse_abstract(data: dict, kind: str):
    n = _get(data, "universe_size", "", int)
    edges = []
    for j, e in enumerate(_get(data, "edges", "", list)):
        edges.append(frozenset(_sorted_unique(_int_list(e, f"edges[{j}]"), f"edges[{j}]")))
    if kind == "ptd":
        demands = _int_list(_get(data, "demands", ""), "demands")
        return _validated(lambda: PTDInstance(SetSystem(n, edges), demands), "demands")
    limit_key = "demand" if kind == "pcms" else "target"
    members, limits = [], []
    for i, g in enumerate(_get(data, "ground_sets", "", list)):
        where = f"ground_sets[{i}]"
        members.append(frozenset(_sorted_unique(_int_list(_get(g, "members", where), f"{where}.members"), where)))
        limits.append(_get(g, limit_key, where, int))
    cls = PCMSInstance if kind == "pcms" else RMCInstance
    return _validated(lambda: cls(n, edges, members, limits), "ground_sets")


def instance_kind(inst: Instance) -> str:
    if isinstance(inst, PointConfig):
        return "geometric"
    if isinstance(inst, PCMSInstance):
        return "pcms"
    if isinstance(inst, PTDInstance):
        return "ptd"
    if isinstance(inst, RMCInstance):
        return "rmc"
    raise TypeError(f"not an instance: {type(inst).__name__}")


def instance_to_json(inst: Instance) -> dict:
    kind = instance_kind(inst)
    if kind == "geometric":
        return {
            "dim": inst.dim,
            "points": [[format_rational(c) for c in p] for p in inst.points],
            "groups": [{"name": g.name, "members": sorted(g.members), "mu": g.mu} for g in inst.groups],
        }
    if kind == "ptd":
        return {
            "kind": "ptd",
            "universe_size": inst.n,
            "edges": [sorted(e) for e in inst.system.edges],
            "demands": list(inst.demands),
        }
    limit_key, limits = ("demand", inst.demands) if kind == "pcms" else ("target", inst.targets)
    return {
        "kind": kind,
        "universe_size": inst.n,
        "edges": [sorted(e) for e in inst.edges],
        "ground_sets": [{"members": sorted(g), limit_key: lim} for g, lim in zip(inst.ground_sets, limits)],
    }


def emit_instance(inst: Instance) -> str:
    return dumps(instance_to_json(inst))


# -- solutions --------------------------------------------------------------


@dataclass
class SolutionFile:
    kind: str
    chosen: list[int]
    f_max: int
    initial_value: int
    trace: list[tuple[int, int, int]]  # (edge, gain, deficiency)
    feasible: bool
    shortfalls: list[int]
    violations: list[Violation] = field(default_factory=list)
    hyperplanes: list[Hyperplane] = field(default_factory=list)


def solution_from_report(report: SolutionReport) -> SolutionFile:
    return SolutionFile(
        kind="geometric",
        chosen=list(report.chosen),
        f_max=report.trace.f_max,
        initial_value=report.trace.initial_value,
        trace=[(s.edge, s.gain, s.deficiency) for s in report.trace.steps],
        feasible=report.feasible,
        shortfalls=list(report.shortfalls),
        violations=list(report.violations),
        hyperplanes=list(report.hyperplanes),
    )


def solution_from_cover(kind: str, res: CoverResult) -> SolutionFile:
    return SolutionFile(
        kind=kind,
        chosen=list(res.chosen),
        f_max=res.trace.f_max,
        initial_value=res.trace.initial_value,
        trace=[(s.edge, s.gain, s.deficiency) for s in res.trace.steps],
        feasible=res.feasible,
        shortfalls=list(res.shortfalls),
        violations=list(res.violations),
    )


def _violation_json(v: Violation) -> dict:
    return {"group": v.group, "members": list(v.members), "count": v.count, "limit": v.limit}


def emit_solution(sol: SolutionFile) -> str:
    return dumps({
        "kind": sol.kind,
        "chosen": list(sol.chosen),
        "f_max": sol.f_max,
        "initial_value": sol.initial_value,
        "trace": [{"edge": e, "gain": g, "deficiency": d} for e, g, d in sol.trace],
        "feasible": sol.feasible,
        "shortfalls": list(sol.shortfalls),
        "violations": [_violation_json(v) for v in sol.violations],
        "hyperplanes": [
            {"a": [format_rational(c) for c in h.normal], "b": format_rational(h.offset)}
            for h in sol.hyperplanes
        ],
    })


def parse_solution(text: str) -> SolutionFile:
    data = _load(text)
    kind = _get(data, "kind", "", str)
    trace = []
    for j, s in enumerate(_get(data, "trace", "", list)):
        where = f"trace[{j}]"
        trace.append((_get(s, "edge", where, int), _get(s, "gain", where, int), _get(s, "deficiency", where, int)))
    violations = []
    for j, v in enumerate(_get(data, "violations", "", list)):
        where = f"violations[{j}]"
        violations.append(Violation(
            _get(v, "group", where, int),
            tuple(_int_list(_get(v, "members", where), f"{where}.members")),
            _get(v, "count", where, int),
            _get(v, "limit", where, int),
        ))
    hyperplanes = []
    for j, h in enumerate(_get(data, "hyperplanes", "", list)):
        where = f"hyperplanes[{j}]"
        a = _get(h, "a", where, list)
        normal = tuple(parse_rational(c, f"{where}.a[{k}]") for k, c in enumerate(a))
        offset = parse_rational(_get(h, "b", where), f"{where}.b")
        hyperplanes.append(_validated(lambda: Hyperplane(normal, offset), where))
    return SolutionFile(
        kind=kind,
        chosen=_int_list(_get(data, "chosen", ""), "chosen"),
        f_max=_get(data, "f_max", "", int),
        initial_value=_get(data, "initial_value", "", int),
        trace=trace,
        feasible=_get(data, "feasible", "", bool),
        shortfalls=_int_list(_get(data, "shortfalls", ""), "shortfalls"),
        violations=violations,
        hyperplanes=hyperplanes,
    )
