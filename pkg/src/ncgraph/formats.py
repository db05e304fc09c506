"""JSON file formats for connections, metrics, forms and tensors."""

from __future__ import annotations

import json
from typing import Optional

from .calculus import Tensor
from .geometry import ConnectionData, GeometryError, Metric
from .graph import Digraph
from .rational import format_fraction, to_fraction


class FormatError(ValueError):
    pass


def _rational(v):
    try:
        return to_fraction(v)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"not an exact rational: {v!r}") from exc


def _vertices(row, k, what):
    if not isinstance(row, list) or len(row) != k + 1:
        raise FormatError(f"{what} entries need {k} vertices and a value, got {row!r}")
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in row[:k]):
        raise FormatError(f"{what} vertices must be integers: {row!r}")
    return tuple(row[:k]), _rational(row[k])


def connection_from_json(data, g: Digraph, named_resolver=None) -> ConnectionData:
    """``{"sigma": [[x,y,z,w,"p/q"],...], "alpha": [[x,y,w,"p/q"],...]}`` or ``{"named": ...}``."""
    if not isinstance(data, dict):
        raise FormatError("connection file must hold a JSON object")
    if "named" in data:
        name = data["named"]
        if name == "canonical":
            return ConnectionData.canonical(g)
        if named_resolver is None:
            raise FormatError(f"named connection {name!r} is not available for this input")
        return named_resolver(name)
    sigma = {}
    for row in data.get("sigma", []):
        key, c = _vertices(row, 4, "sigma")
        sigma[key] = sigma.get(key, 0) + c
    alpha = {}
    for row in data.get("alpha", []):
        key, c = _vertices(row, 3, "alpha")
        alpha[key] = alpha.get(key, 0) + c
    try:
        return ConnectionData(g, sigma, alpha)
    except GeometryError as exc:
        raise FormatError(str(exc)) from exc


def connection_to_json(conn: ConnectionData) -> dict:
    return {
        "sigma": [[x, y, z, w, format_fraction(c)] for (x, y, z, w), c in sorted(conn.sigma_entries().items())],
        "alpha": [[x, y, w, format_fraction(c)] for (x, y, w), c in sorted(conn.alpha_entries().items())],
    }


def metric_from_json(data, g: Digraph) -> Metric:
    """``"euclidean"`` or ``{"weights": [[x, y, "p/q"], ...]}``."""
    if data == "euclidean" or (isinstance(data, dict) and data.get("named") == "euclidean"):
        return Metric.euclidean(g)
    if not isinstance(data, dict) or "weights" not in data:
        raise FormatError("metric file must be \"euclidean\" or an object with \"weights\"")
    weights = {}
    for row in data["weights"]:
        key, c = _vertices(row, 2, "weight")
        weights[key] = c
    try:
        return Metric(g, weights)
    except GeometryError as exc:
        raise FormatError(str(exc)) from exc


def metric_to_json(met: Metric) -> dict:
    return {"weights": [[x, y, format_fraction(c)] for (x, y), c in sorted(met.weights.items())]}


def tensor_to_json(t: Tensor) -> list:
    """Rows ``[v0, ..., vk, "p/q"]`` in path order."""
    return [list(p) + [format_fraction(c)] for p, c in sorted(t.items())]


def tensor_from_json(rows, g: Digraph, degree: int) -> Tensor:
    coeffs = {}
    for row in rows:
        key, c = _vertices(row, degree + 1, "tensor")
        coeffs[key] = coeffs.get(key, 0) + c
    try:
        return Tensor(g, degree, coeffs)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def load_json_text(text: str, source: Optional[str] = None):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        where = f" in {source}" if source else ""
        raise FormatError(f"invalid JSON{where}: line {exc.lineno}: {exc.msg}") from exc


def dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"
