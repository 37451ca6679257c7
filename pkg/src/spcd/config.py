"""JSON run configuration: strict parsing and validation.

A run document selects a flow model, a measure flavor, an optional demand
schedule, and numeric options::

    {
      "model": {"family": "malthusian",
                "rates": {"head": [], "tail": {"class": "geometric",
                                               "a": 0.3466, "q": 0.5}}},
      "flavor": "ordinary",
      "demands": [{"t": 1.0, "m": 1.0}, {"t": 2.0, "m": 1.0}],
      "options": {"depth": 100000, "truncation": 8}
    }

Families: ``foerster_lasota`` (gamma), ``black_scholes`` (r, sigma),
``malthusian`` (rates: sequence spec), ``fourier`` (coefficients, length),
``maclaurin`` (coefficients).  Sequence specs are ``{"head": [...], "tail":
{"class": ..., params}}`` with tail classes ``zero``, ``constant`` (c),
``geometric`` (a, q), ``power_law`` (c, p), ``affine_linear`` (s, b),
``quadratic_poly`` (c2, c1, c0), ``alternating_power_law`` (c, p), and
``polynomial`` (coeffs).  Unknown fields are rejected everywhere.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Any

from .flows import (
    BlackScholes,
    FlowModel,
    Fourier,
    FoersterLasota,
    Maclaurin,
    Malthusian,
)
from .measures import FLAVORS
from .sequences import (
    DEFAULT_DEPTH,
    AffineLinear,
    AlternatingPowerLaw,
    Constant,
    Geometric,
    Polynomial,
    PowerLaw,
    QuadraticPoly,
    SequenceSpec,
    TailClass,
    Zero,
)
from .solver import FEASIBILITY_TOLERANCE, DemandSchedule, InvalidSchedule


class ParseError(ValueError):
    """The document is not valid JSON."""


class ValidationError(ValueError):
    """The document is well-formed JSON but violates the run schema; the
    message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    """A fully validated run: model, flavor, schedule, numeric options."""

    model: FlowModel
    flavor: str = "ordinary"
    schedule: DemandSchedule | None = None
    depth: int = DEFAULT_DEPTH
    panels: int = 256
    tolerance: float = FEASIBILITY_TOLERANCE
    truncation: int | None = None
    initial_measure: float | None = None


def _expect_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(f"{path}: expected an object")
    return dict(value)


def _expect_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ValidationError(f"{path}: expected a list")
    return value


def _expect_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path}: expected a number")
    return float(value)


def _expect_integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{path}: expected an integer")
    return value


def _expect_string(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise ValidationError(f"{path}: expected a string")
    return value


def _take(obj: dict, key: str, path: str, required: bool = True) -> Any:
    if key not in obj:
        if required:
            raise ValidationError(f"{path}: missing required field {key!r}")
        return None
    return obj.pop(key)


def _reject_unknown(obj: dict, path: str) -> None:
    if obj:
        name = sorted(obj)[0]
        raise ValidationError(f"{path}: unknown field {name!r}")


def _number_list(value: Any, path: str) -> list[float]:
    return [_expect_number(x, f"{path}[{i}]") for i, x in enumerate(_expect_list(value, path))]


_TAIL_BUILDERS: dict[str, tuple[type, tuple[str, ...]]] = {
    "zero": (Zero, ()),
    "constant": (Constant, ("c",)),
    "geometric": (Geometric, ("a", "q")),
    "power_law": (PowerLaw, ("c", "p")),
    "affine_linear": (AffineLinear, ("s", "b")),
    "quadratic_poly": (QuadraticPoly, ("c2", "c1", "c0")),
    "alternating_power_law": (AlternatingPowerLaw, ("c", "p")),
}


def _build_tail(value: Any, path: str) -> TailClass:
    obj = _expect_object(value, path)
    kind = _expect_string(_take(obj, "class", path), f"{path}.class")
    if kind == "polynomial":
        coeffs = _number_list(_take(obj, "coeffs", path), f"{path}.coeffs")
        _reject_unknown(obj, path)
        return Polynomial(tuple(coeffs))
    if kind not in _TAIL_BUILDERS:
        raise ValidationError(f"{path}.class: unknown tail class {kind!r}")
    cls, params = _TAIL_BUILDERS[kind]
    args = [_expect_number(_take(obj, p, path), f"{path}.{p}") for p in params]
    _reject_unknown(obj, path)
    try:
        return cls(*args)
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _build_sequence_spec(value: Any, path: str) -> SequenceSpec:
    obj = _expect_object(value, path)
    head_value = _take(obj, "head", path, required=False)
    head = tuple(_number_list(head_value, f"{path}.head")) if head_value is not None else ()
    tail = _build_tail(_take(obj, "tail", path), f"{path}.tail")
    _reject_unknown(obj, path)
    return SequenceSpec(head, tail)


def _build_model(value: Any, path: str) -> FlowModel:
    obj = _expect_object(value, path)
    family = _expect_string(_take(obj, "family", path), f"{path}.family")
    try:
        if family == "foerster_lasota":
            gamma = _expect_number(_take(obj, "gamma", path), f"{path}.gamma")
            _reject_unknown(obj, path)
            return FoersterLasota(gamma)
        if family == "black_scholes":
            r = _expect_number(_take(obj, "r", path), f"{path}.r")
            sigma = _expect_number(_take(obj, "sigma", path), f"{path}.sigma")
            _reject_unknown(obj, path)
            return BlackScholes(r, sigma)
        if family == "malthusian":
            rates = _build_sequence_spec(_take(obj, "rates", path), f"{path}.rates")
            _reject_unknown(obj, path)
            return Malthusian(rates)
        if family == "fourier":
            coefficients = _number_list(
                _take(obj, "coefficients", path), f"{path}.coefficients")
            length = _expect_number(_take(obj, "length", path), f"{path}.length")
            _reject_unknown(obj, path)
            return Fourier(tuple(coefficients), length)
        if family == "maclaurin":
            coefficients = _number_list(
                _take(obj, "coefficients", path), f"{path}.coefficients")
            _reject_unknown(obj, path)
            return Maclaurin(tuple(coefficients))
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"{path}: {exc}") from exc
    raise ValidationError(f"{path}.family: unknown family {family!r}")


def _build_schedule(value: Any, path: str) -> DemandSchedule:
    entries = _expect_list(value, path)
    pairs = []
    for i, entry in enumerate(entries):
        obj = _expect_object(entry, f"{path}[{i}]")
        t = _expect_number(_take(obj, "t", f"{path}[{i}]"), f"{path}[{i}].t")
        m = _expect_number(_take(obj, "m", f"{path}[{i}]"), f"{path}[{i}].m")
        _reject_unknown(obj, f"{path}[{i}]")
        pairs.append((t, m))
    try:
        return DemandSchedule.from_pairs(pairs)
    except InvalidSchedule as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def parse_config(document: str) -> RunConfig:
    """Parse and validate a JSON run document.

    Raises:
        ParseError: the text is not valid JSON.
        ValidationError: the document violates the schema; the message
            names the offending field and constraint.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    obj = _expect_object(data, "document")
    model = _build_model(_take(obj, "model", "document"), "model")
    flavor_value = _take(obj, "flavor", "document", required=False)
    flavor = _expect_string(flavor_value, "flavor") if flavor_value is not None else "ordinary"
    if flavor not in FLAVORS:
        raise ValidationError(f"flavor: must be one of {list(FLAVORS)}, got {flavor!r}")
    demands_value = _take(obj, "demands", "document", required=False)
    schedule = _build_schedule(demands_value, "demands") if demands_value is not None else None

    depth, panels = DEFAULT_DEPTH, 256
    tolerance: float = FEASIBILITY_TOLERANCE
    truncation: int | None = None
    initial_measure: float | None = None
    options_value = _take(obj, "options", "document", required=False)
    if options_value is not None:
        options = _expect_object(options_value, "options")
        raw = _take(options, "depth", "options", required=False)
        if raw is not None:
            depth = _expect_integer(raw, "options.depth")
            if depth < 1:
                raise ValidationError("options.depth: must be >= 1")
        raw = _take(options, "panels", "options", required=False)
        if raw is not None:
            panels = _expect_integer(raw, "options.panels")
            if panels < 1:
                raise ValidationError("options.panels: must be >= 1")
        raw = _take(options, "tolerance", "options", required=False)
        if raw is not None:
            tolerance = _expect_number(raw, "options.tolerance")
            if not tolerance > 0.0:
                raise ValidationError("options.tolerance: must be positive")
        raw = _take(options, "truncation", "options", required=False)
        if raw is not None:
            truncation = _expect_integer(raw, "options.truncation")
            if truncation < 1:
                raise ValidationError("options.truncation: must be >= 1")
        raw = _take(options, "m0", "options", required=False)
        if raw is not None:
            initial_measure = _expect_number(raw, "options.m0")
            if not initial_measure > 0.0:
                raise ValidationError("options.m0: must be positive")
        _reject_unknown(options, "options")
    _reject_unknown(obj, "document")
    return RunConfig(
        model=model,
        flavor=flavor,
        schedule=schedule,
        depth=depth,
        panels=panels,
        tolerance=tolerance,
        truncation=truncation,
        initial_measure=initial_measure,
    )


def _tail_to_json(tail: TailClass) -> dict:
    if isinstance(tail, Zero):
        return {"class": "zero"}
    if isinstance(tail, Polynomial):
        return {"class": "polynomial", "coeffs": list(tail.coeffs)}
    for name, (cls, params) in _TAIL_BUILDERS.items():
        if type(tail) is cls:
            return {"class": name, **{p: getattr(tail, p) for p in params}}
    raise TypeError(f"unknown tail class: {type(tail).__name__}")


def _spec_to_json(spec: SequenceSpec) -> dict:
    return {"head": list(spec.head), "tail": _tail_to_json(spec.tail)}


def _model_to_json(model: FlowModel) -> dict:
    if isinstance(model, FoersterLasota):
        return {"family": "foerster_lasota", "gamma": model.gamma}
    if isinstance(model, BlackScholes):
        return {"family": "black_scholes", "r": model.r, "sigma": model.sigma}
    if isinstance(model, Malthusian):
        return {"family": "malthusian", "rates": _spec_to_json(model.rates)}
    if isinstance(model, Fourier):
        return {
            "family": "fourier",
            "coefficients": list(model.coefficients),
            "length": model.length,
        }
    if isinstance(model, Maclaurin):
        return {"family": "maclaurin", "coefficients": list(model.coefficients)}
    raise TypeError(f"unknown flow model: {type(model).__name__}")


def config_to_json(config: RunConfig) -> dict:
    """Resolved JSON echo of a run config; parsing it back reproduces the
    config exactly, so every report is reproducible from its own echo."""
    options = {
        "depth": config.depth,
        "panels": config.panels,
        "tolerance": config.tolerance,
    }
    if config.truncation is not None:
        options["truncation"] = config.truncation
    if config.initial_measure is not None:
        options["m0"] = config.initial_measure
    document: dict = {
        "model": _model_to_json(config.model),
        "flavor": config.flavor,
        "options": options,
    }
    if config.schedule is not None:
        document["demands"] = [
            {"t": d.time, "m": d.amount} for d in config.schedule.demands
        ]
    return document


def override(config: RunConfig, **changes: Any) -> RunConfig:
    """Copy of ``config`` with non-None field overrides applied."""
    effective = {k: v for k, v in changes.items() if v is not None}
    return dataclasses.replace(config, **effective) if effective else config
