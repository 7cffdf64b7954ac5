"""JSON schemas for trees, variables, sequences, processes, and transforms.

One file holds one object.  Numbers are decimal; infinities are the
strings "inf" and "-inf".  In rational mode every numeric literal is
parsed exactly (the raw decimal text goes straight into a Fraction) and
values are emitted as exact decimal strings, or "p/q" when the value has
no finite decimal expansion, so round trips are bit-exact.

Situations are dot-separated state labels; the empty string is the
initial situation.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .credal import AssessmentSet, CredalSet, StateSpace
from .errors import SchemaError
from .evaluate import TreeModel
from .process import Process
from .tree import (
    Cut,
    FinitaryVariable,
    Monotonicity,
    Situation,
    clamp_above_sequence,
    clamp_below_sequence,
    explicit_sequence,
    situations_at,
)
from .xreal import XR, xr


def load_json(path: str, rational: bool):
    with open(path, "r", encoding="utf-8") as handle:
        if rational:
            return json.load(handle, parse_float=Fraction)
        return json.load(handle)


def situation_from_text(space: StateSpace, text: str) -> Situation:
    if text == "":
        return ()
    return tuple(space.index(label) for label in text.split("."))


def situation_to_text(space: StateSpace, s: Situation) -> str:
    return ".".join(space.labels[x] for x in s)


def decode_number(raw, where: str) -> XR:
    if isinstance(raw, str):
        try:
            return XR.parse(raw)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"{where}: cannot parse {raw!r} as a number") from None
    if isinstance(raw, bool) or not isinstance(raw, (int, float, Fraction)):
        raise SchemaError(f"{where}: expected a number, got {type(raw).__name__}")
    try:
        return XR(raw)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def encode_number(value: XR, rational: bool):
    value = xr(value)
    if not value.is_finite:
        return value.to_text()
    if rational:
        return value.to_text()
    return float(value.v)


def _require(mapping, key, where: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise SchemaError(f"{where}: missing required field {key!r}")
    return mapping[key]


def _plain_mass(raw, where: str):
    value = decode_number(raw, where)
    if not value.is_finite:
        raise SchemaError(f"{where}: probability masses must be finite")
    return value.v


def load_credal(raw, where: str) -> CredalSet:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{where}: expected a non-empty array of PMF arrays")
    points = []
    for i, pmf in enumerate(raw):
        if not isinstance(pmf, list):
            raise SchemaError(f"{where}[{i}]: expected a PMF array")
        points.append(tuple(_plain_mass(m, f"{where}[{i}][{j}]") for j, m in enumerate(pmf)))
    try:
        return CredalSet(points)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def dump_credal(model: CredalSet, rational: bool):
    return [[encode_number(XR(m), rational) for m in p] for p in model.extreme_points]


def load_assessments(raw, where: str = "assessments") -> AssessmentSet:
    if not isinstance(raw, list):
        raise SchemaError(f"{where}: expected an array of constraints")
    constraints = []
    for i, item in enumerate(raw):
        gamble = _require(item, "gamble", f"{where}[{i}]")
        upper = _require(item, "upper", f"{where}[{i}]")
        if not isinstance(gamble, list):
            raise SchemaError(f"{where}[{i}].gamble: expected an array")
        row = tuple(_plain_mass(g, f"{where}[{i}].gamble[{j}]") for j, g in enumerate(gamble))
        constraints.append((row, _plain_mass(upper, f"{where}[{i}].upper")))
    return AssessmentSet(tuple(constraints))


def tree_from_obj(obj) -> TreeModel:
    states = _require(obj, "states", "tree")
    if not isinstance(states, list) or not all(isinstance(x, str) for x in states):
        raise SchemaError("tree.states: expected an array of strings")
    try:
        space = StateSpace(tuple(states))
    except ValueError as exc:
        raise SchemaError(f"tree.states: {exc}") from None
    max_depth = _require(obj, "max_depth", "tree")
    if not isinstance(max_depth, int) or max_depth < 0:
        raise SchemaError("tree.max_depth: expected a non-negative integer")
    model = _require(obj, "model", "tree")
    kind = _require(model, "type", "tree.model")
    try:
        if kind == "stationary":
            credal = load_credal(_require(model, "extreme_points", "tree.model"),
                                 "tree.model.extreme_points")
            return TreeModel.stationary(space, credal, max_depth)
        if kind == "by_depth":
            levels_raw = _require(model, "levels", "tree.model")
            if not isinstance(levels_raw, list):
                raise SchemaError("tree.model.levels: expected an array")
            levels = [load_credal(level, f"tree.model.levels[{d}]")
                      for d, level in enumerate(levels_raw)]
            return TreeModel.by_depth(space, levels, max_depth)
        if kind == "table":
            entries = _require(model, "entries", "tree.model")
            if not isinstance(entries, dict):
                raise SchemaError("tree.model.entries: expected an object")
            table = {situation_from_text(space, key):
                     load_credal(value, f"tree.model.entries[{key!r}]")
                     for key, value in entries.items()}
            return TreeModel.table(space, table, max_depth)
    except ValueError as exc:
        raise SchemaError(f"tree.model: {exc}") from None
    raise SchemaError(f"tree.model.type: unknown kind {kind!r}")


def load_tree(path: str, rational: bool) -> TreeModel:
    return tree_from_obj(load_json(path, rational))


def variable_from_obj(obj, space: StateSpace, where: str = "variable") -> FinitaryVariable:
    depth = _require(obj, "depth", where)
    if not isinstance(depth, int) or depth < 0:
        raise SchemaError(f"{where}.depth: expected a non-negative integer")
    values = _require(obj, "values", where)
    if not isinstance(values, list):
        raise SchemaError(f"{where}.values: expected an array")
    if len(values) != space.size**depth:
        raise SchemaError(f"{where}.values: expected {space.size ** depth} entries "
                          f"for depth {depth}, got {len(values)}")
    table = tuple(decode_number(v, f"{where}.values[{i}]") for i, v in enumerate(values))
    return FinitaryVariable(space.size, depth, table)


def dump_variable(f: FinitaryVariable, rational: bool):
    return {"depth": f.depth, "values": [encode_number(v, rational) for v in f.values]}


def sequence_from_obj(obj, space: StateSpace):
    """Either a bare finitary variable or a sequence template.

    Templates: {"kind": "clamp_above", "base": <variable>} for the
    non-decreasing clamp ladder, {"kind": "clamp_below", "base": ...} for
    the lower-cut sweep, {"kind": "explicit", "items": [...],
    "monotonicity": "non_decreasing"|"non_increasing"|"none"}.
    Returns a FinitaryVariable or a FinitarySequence.
    """
    if not isinstance(obj, dict):
        raise SchemaError("variable: expected an object")
    if "kind" not in obj:
        return variable_from_obj(obj, space)
    kind = obj["kind"]
    if kind == "clamp_above":
        base = variable_from_obj(_require(obj, "base", "sequence"), space, "sequence.base")
        return clamp_above_sequence(base)
    if kind == "clamp_below":
        base = variable_from_obj(_require(obj, "base", "sequence"), space, "sequence.base")
        return clamp_below_sequence(base)
    if kind == "explicit":
        items_raw = _require(obj, "items", "sequence")
        if not isinstance(items_raw, list) or not items_raw:
            raise SchemaError("sequence.items: expected a non-empty array")
        items = [variable_from_obj(item, space, f"sequence.items[{i}]")
                 for i, item in enumerate(items_raw)]
        mono_raw = obj.get("monotonicity", "none")
        try:
            mono = Monotonicity(mono_raw)
        except ValueError:
            raise SchemaError(f"sequence.monotonicity: unknown value {mono_raw!r}") from None
        return explicit_sequence(items, mono)
    raise SchemaError(f"sequence.kind: unknown template {kind!r}")


def load_variable_or_sequence(path: str, space: StateSpace, rational: bool):
    return sequence_from_obj(load_json(path, rational), space)


def process_from_obj(obj, space: StateSpace) -> Process:
    horizon = _require(obj, "horizon", "process")
    if not isinstance(horizon, int) or horizon < 0:
        raise SchemaError("process.horizon: expected a non-negative integer")
    values = _require(obj, "values", "process")
    if not isinstance(values, dict):
        raise SchemaError("process.values: expected an object keyed by situations")
    table = {}
    for key, raw in values.items():
        try:
            s = situation_from_text(space, key)
        except ValueError as exc:
            raise SchemaError(f"process.values[{key!r}]: {exc}") from None
        table[s] = decode_number(raw, f"process.values[{key!r}]")
    levels = []
    for depth in range(horizon + 1):
        row = []
        for s in situations_at(depth, space.size):
            if s not in table:
                raise SchemaError(
                    f"process.values: missing situation "
                    f"{situation_to_text(space, s)!r} at depth {depth}")
            row.append(table[s])
        levels.append(tuple(row))
    cut = None
    if obj.get("terminal_cut") is not None:
        raw_cut = obj["terminal_cut"]
        if not isinstance(raw_cut, list):
            raise SchemaError("process.terminal_cut: expected an array of situations")
        try:
            cut = Cut(frozenset(situation_from_text(space, item) for item in raw_cut))
        except ValueError as exc:
            raise SchemaError(f"process.terminal_cut: {exc}") from None
    try:
        return Process(space.size, horizon, tuple(levels), cut)
    except ValueError as exc:
        raise SchemaError(f"process: {exc}") from None


def load_process(path: str, space: StateSpace, rational: bool) -> Process:
    return process_from_obj(load_json(path, rational), space)


def dump_process(M: Process, space: StateSpace, rational: bool):
    values = {}
    for depth in range(M.horizon + 1):
        for s in situations_at(depth, space.size):
            values[situation_to_text(space, s)] = encode_number(M.value_at(s), rational)
    out = {"horizon": M.horizon, "values": values}
    if M.terminal_cut is not None:
        out["terminal_cut"] = [situation_to_text(space, m) for m in M.terminal_cut]
    return out


def dump_cuts(cuts, space: StateSpace):
    return {"root": situation_to_text(space, cuts.root),
            "pairs": [{"V": [situation_to_text(space, m) for m in v_cut],
                       "U": [situation_to_text(space, m) for m in u_cut]}
                      for v_cut, u_cut in cuts.pairs]}
