"""Scenario files: protocol, deviation, input law and analysis settings in TOML."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import adversary
from .analyzer import VARIABLES, InputLaw
from .bgw import BgwParams, bgw_protocol
from .engine import MISSING, NONZERO_SEQ, PERM, SEQ, SHARE, DEFAULT_BUDGET, Party, ProtocolSpec
from .field import FieldElement, field_from_config
from .hamdist import HamDistParams, hamdist_protocol

SUITES = ("passive", "active")
DEVIATION_KINDS = ("honest", "input_substitution", "uniform_final_share", "message_tamper", "view_leak")


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    name: str
    protocol: ProtocolSpec
    deviation: adversary.Deviation
    input_law: InputLaw
    suite: str = "active"
    track: tuple[str, ...] = ()
    budget: int = DEFAULT_BUDGET
    output: dict = field(default_factory=dict)
    description: str = ""
    source: str | None = None
    raw: dict = field(default_factory=dict)


def shipped_dir():
    return resources.files("trisec") / "scenarios"


def shipped_scenarios() -> list[str]:
    return sorted(p.name for p in shipped_dir().iterdir() if p.name.endswith(".toml"))


def resolve(path_or_name: str) -> Path:
    p = Path(path_or_name)
    if p.is_file():
        return p
    for cand in (path_or_name, path_or_name + ".toml"):
        res = shipped_dir() / cand
        if res.is_file():
            return Path(str(res))
    raise ScenarioError(f"scenario not found: {path_or_name}")


def load_scenario(path_or_name: str) -> Scenario:
    path = resolve(path_or_name)
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{path}: {exc}") from None
    try:
        return scenario_from_config(cfg, source=str(path))
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"{path}: {exc}") from None


def build_protocol(cfg: dict) -> ProtocolSpec:
    name = cfg.get("name")
    if name == "hamdist":
        params = HamDistParams(int(cfg["n"]), field_from_config(cfg["field"]))
        return hamdist_protocol(params, force_identity_perm=bool(cfg.get("force_identity_perm", False)))
    if name == "bgw":
        params = BgwParams(int(cfg["n"]), int(cfg["s"]), int(cfg["N"]),
                           tuple(cfg.get("abscissas", (1, 2, 3))))
        return bgw_protocol(params)
    raise ScenarioError(f"unknown protocol {name!r}")


def decode_input(protocol: ProtocolSpec, values) -> tuple:
    """Integers (or coefficient lists) to a protocol input, range-checked."""
    values = list(values)
    if len(values) != protocol.n:
        raise ScenarioError(f"input needs {protocol.n} symbols, got {len(values)}")
    if protocol.name == "bgw":
        s = protocol.params["s"]
        if not all(isinstance(v, int) and 0 <= v < s for v in values):
            raise ScenarioError(f"input symbols must lie in 0..{s - 1}")
        return tuple(values)
    return tuple(_element(protocol, v, strict=True) for v in values)


def _element(protocol, v, strict=False) -> FieldElement:
    F = protocol.field
    if isinstance(v, list):
        if strict and not all(isinstance(c, int) and 0 <= c < F.p for c in v):
            raise ScenarioError(f"coefficients must lie in 0..{F.p - 1}")
        return F(v)
    if not isinstance(v, int) or (strict and not 0 <= v < F.order):
        raise ScenarioError(f"field symbol {v!r} out of range for {F}")
    return F.from_code(v % F.order)


def decode_payload(protocol: ProtocolSpec, kind: str, value):
    """A payload as written in a tamper table; it need not be valid."""
    if value == "missing":
        return MISSING
    if kind in (SEQ, NONZERO_SEQ):
        return tuple(_element(protocol, v) for v in value)
    if kind == PERM:
        return tuple(int(i) for i in value)
    if kind == SHARE:
        return _element(protocol, value)
    raise ScenarioError(kind)


def build_deviation(protocol: ProtocolSpec, cfg: dict | None) -> adversary.Deviation:
    if not cfg:
        return adversary.honest()
    kind = cfg.get("kind", "honest")
    params = cfg.get("params", {})
    if kind not in DEVIATION_KINDS:
        raise ScenarioError(f"unknown deviation kind {kind!r}")
    if kind == "honest":
        return adversary.honest()
    target = Party.parse(cfg["target"])
    if kind == "input_substitution":
        sub = decode_input(protocol, params["input"])
        return adversary.input_substitution(protocol, target, sub, bool(params.get("leak_input", False)))
    if kind == "uniform_final_share":
        return adversary.uniform_final_share(protocol, target)
    if kind == "view_leak":
        return adversary.view_leak(protocol, target)
    # message_tamper
    table = {}
    if "random_seed" in params:
        table = adversary.random_tamper_table(protocol, target, int(params["random_seed"]))
    for entry in params.get("table", []):
        slot = protocol.slot(entry["slot"])
        if slot.sender != target:
            raise ScenarioError(f"slot {slot.name} is not sent by {target.name.lower()}")
        src = decode_payload(protocol, slot.kind, entry["from"])
        table.setdefault(slot.name, {})[src] = decode_payload(protocol, slot.kind, entry["to"])
    for name in params.get("omit", []):
        slot = protocol.slot(name)
        if slot.sender != target:
            raise ScenarioError(f"slot {name} is not sent by {target.name.lower()}")
    omitted = tuple(params.get("omit", []))
    lookup = adversary.table_transform(table)

    def transform(name, payload, ctx):
        return MISSING if name in omitted else lookup(name, payload, ctx)

    return adversary.message_tamper(
        protocol, target, transform, label=cfg.get("label", "message tamper"),
        params={k: v for k, v in params.items() if k != "table"}
        | ({"table_entries": len(params["table"])} if "table" in params else {}),
    )


def build_input_law(protocol: ProtocolSpec, cfg) -> InputLaw:
    if cfg is None or cfg == "uniform":
        return InputLaw.uniform(protocol)
    if cfg in ("iid-bernoulli", "iid-bernoulli(1/2)"):
        return InputLaw.iid_uniform_bits(protocol)
    if isinstance(cfg, dict) and "table" in cfg:
        weights = {}
        for row in cfg["table"]:
            xy = (decode_input(protocol, row["x"]), decode_input(protocol, row["y"]))
            weights[xy] = weights.get(xy, 0) + int(row.get("weight", 1))
        return InputLaw(weights, "table")
    raise ScenarioError(f"unrecognised input law {cfg!r}")


def scenario_from_config(cfg: dict, source: str | None = None) -> Scenario:
    if "protocol" not in cfg:
        raise ScenarioError("scenario has no [protocol] table")
    protocol = build_protocol(cfg["protocol"])
    deviation = build_deviation(protocol, cfg.get("deviation"))
    suite = cfg.get("suite", "active")
    if suite not in SUITES:
        raise ScenarioError(f"suite must be one of {SUITES}")
    if suite == "passive" and not deviation.is_honest:
        raise ScenarioError("the passive suite runs honest programs only")
    track = tuple(cfg.get("track", ()))
    for v in track:
        if v not in VARIABLES:
            raise ScenarioError(f"unknown tracked variable {v!r}")
    budget = int(cfg.get("budget", DEFAULT_BUDGET))
    if budget <= 0:
        raise ScenarioError("budget must be positive")
    return Scenario(
        name=cfg.get("name", Path(source).stem if source else "scenario"),
        protocol=protocol,
        deviation=deviation,
        input_law=build_input_law(protocol, cfg.get("input_law")),
        suite=suite,
        track=track,
        budget=budget,
        output=cfg.get("output", {}),
        description=cfg.get("description", ""),
        source=source,
        raw=cfg,
    )
