"""JSON encoding of services and systems.

Service objects carry a ``kind`` field:

* ``dual_curve``: ``{"u": vec, "v": vec, "b": n}``
* ``min_plus``: ``{"matrix": {"rows": [[..]], "form": "cumulative"|"spectral"}, "b": n}``
* ``uniform_backlog``: ``{"bbar": n, "b": n}``
* ``uniform_delay``: ``{"theta": n, "r": vec, "b": n}`` (``r`` optional)
* ``table``: ``{"entries": [{"q_prefix": [..], "psi": vec}], "b": n}``
* ``single_task``: ``{"delay": n, "horizon": g}``, the spectral hull of a
  flow that carries one task due ``delay`` slots after arrival

Vectors are ``{"prefix": [..], "tail_inc": n|"inf"}`` or a plain list
(constant after its last entry).
"""

from __future__ import annotations

from typing import Any, Mapping

from .cumulative import CumVec, shift_right
from .dualcurve import DualCurve
from .errors import DomainError
from .minplus import MinPlusService, matrix_from_json, step_matrix
from .scheduler import Flow, System
from .worstcase import ServiceState, UniformBacklog, UniformDelay, table_from_json


def service_from_json(obj: Mapping[str, Any]) -> ServiceState:
    try:
        kind = obj["kind"]
        b = int(obj.get("b", 0))
        if kind == "dual_curve":
            return DualCurve(CumVec.from_json(obj["u"]), CumVec.from_json(obj["v"]), b)
        if kind == "min_plus":
            matrix, mb = matrix_from_json(obj["matrix"])
            return MinPlusService(matrix, int(obj.get("b", mb)))
        if kind == "uniform_backlog":
            return UniformBacklog(int(obj["bbar"]), b)
        if kind == "uniform_delay":
            theta = int(obj["theta"])
            if "r" in obj:
                return UniformDelay(theta, CumVec.from_json(obj["r"]), b)
            return UniformDelay(theta, shift_right(CumVec.delta(b), theta), b)
        if kind == "table":
            return table_from_json(obj)
        if kind == "single_task":
            delay = int(obj["delay"])
            return MinPlusService.from_spectral(step_matrix(delay, int(obj.get("horizon", delay + 2))))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed service: {exc}") from exc
    raise DomainError(f"unknown service kind {obj.get('kind')!r}")


def service_to_json(s: ServiceState) -> dict:
    return s.to_json()


def flow_from_json(obj: Mapping[str, Any], index: int) -> Flow:
    return Flow(str(obj.get("id", index)), service_from_json(obj["service"]))


def system_from_json(obj: Mapping[str, Any]) -> System:
    try:
        flows = tuple(flow_from_json(f, i) for i, f in enumerate(obj["flows"]))
        return System(flows, int(obj["capacity"]))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed system: {exc}") from exc


def system_to_json(sys: System) -> dict:
    return {
        "capacity": sys.capacity,
        "flows": [{"id": f.id, "service": f.service.to_json()} for f in sys.flows],
    }


__all__ = [
    "service_from_json",
    "service_to_json",
    "flow_from_json",
    "system_from_json",
    "system_to_json",
]
