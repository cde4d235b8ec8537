"""Command-line front end.

Exit codes: 0 every checked condition holds, 2 some condition is
violated, 3 some condition could not be checked, 4 the enumeration
budget is too small, 1 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import analyzer
from .adversary import ProtocolMismatch, assemble
from .engine import PARTIES, BudgetExceeded, run
from .scenario import Scenario, ScenarioError, decode_input, load_scenario, shipped_scenarios

EXIT_MALFORMED = 1
EXIT_BUDGET = 4


def _emit(doc: dict, out: str | None):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ScenarioError(f"expected comma-separated integers, got {text!r}") from None


def _budget(args, scenario: Scenario) -> int:
    if args.budget is not None:
        return args.budget
    if "budget" in scenario.raw:
        return scenario.budget
    return int(os.environ.get("TRISEC_BUDGET", scenario.budget))


def _echo(scenario: Scenario) -> dict:
    return {
        "name": scenario.name,
        "source": os.path.basename(scenario.source) if scenario.source else None,
        "suite": scenario.suite,
        "track": list(scenario.track),
    }


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    proto = scenario.protocol
    if args.x is None or args.y is None:
        raise ScenarioError("run needs explicit --x and --y")
    x = decode_input(proto, _ints(args.x))
    y = decode_input(proto, _ints(args.y))
    programs = assemble(proto, scenario.deviation)
    rng = random.Random(args.seed)
    tapes = tuple(rng.choice(programs[p].tape_space) for p in PARTIES)
    record = run(proto, programs, x, y, tapes)
    doc = record.to_json(proto)
    doc["scenario"] = _echo(scenario)
    doc["deviation"] = scenario.deviation.describe()
    doc["seed"] = args.seed
    _emit(doc, args.out)
    return 0


def analyze_scenario(scenario: Scenario, budget: int, order_seed: int | None = None) -> analyzer.SecurityReport:
    if scenario.suite == "passive":
        report = analyzer.check_passive_suite(scenario.protocol, scenario.input_law, budget, order_seed)
    else:
        wants = {"Xbar", "Ybar"} & set(scenario.track)
        report = analyzer.check_active_suite(
            scenario.protocol, scenario.deviation, scenario.input_law, budget, order_seed,
            track_effective_inputs=bool(wants),
        )
    return report


def cmd_analyze(args) -> int:
    scenario = load_scenario(args.scenario)
    budget = _budget(args, scenario)
    report = analyze_scenario(scenario, budget)
    doc = report.to_json()
    doc["scenario"] = _echo(scenario)
    if args.dump_distribution:
        tracked = ("X", "Y", "U", "V", "W", "f")
        doc["distribution"] = analyzer.build_joint(
            scenario.protocol, scenario.deviation, scenario.input_law, tracked, budget
        ).to_json()
    _emit(doc, args.out or scenario.output.get("report"))
    return report.exit_code


def _pmf_json(dist) -> dict:
    return {str(k): str(v) for k, v in sorted(dist.pmf().items())}


def cmd_attack_demo(args) -> int:
    scenario = load_scenario(args.scenario)
    budget = _budget(args, scenario)
    cmp = analyzer.attack_comparison(scenario.protocol, scenario.deviation, scenario.input_law, budget)
    doc = {
        "scenario": _echo(scenario),
        "protocol": {"name": scenario.protocol.name, **scenario.protocol.params},
        "deviation": scenario.deviation.describe(),
        "input_law": scenario.input_law.label,
        "real_output": _pmf_json(cmp["real"]),
        "ideal_output": _pmf_json(cmp["ideal"]),
        "total_variation": str(cmp["tvd"]),
        "correctness": cmp["correctness"].to_json(),
        "output_range": cmp["output_range"],
        "invalid_output_probability": {"real": str(cmp["invalid_real"]), "ideal": str(cmp["invalid_ideal"])},
    }
    _emit(doc, args.out or scenario.output.get("report"))
    return 0


def cmd_list(args) -> int:
    for name in shipped_scenarios():
        try:
            sc = load_scenario(name)
            print(f"{name:32s} {sc.description}")
        except ScenarioError as exc:
            print(f"{name:32s} (invalid: {exc})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trisec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, inputs=False):
        p.add_argument("--scenario", required=True, help="scenario file or shipped scenario name")
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument("--budget", type=int, help="maximum number of enumerated runs")
        if inputs:
            p.add_argument("--x", help="Alice's input, comma-separated integers")
            p.add_argument("--y", help="Bob's input, comma-separated integers")
            p.add_argument("--seed", type=int, default=0, help="selects the random tapes")

    common(sub.add_parser("run", help="execute one run and print its transcript"), inputs=True)
    p = sub.add_parser("analyze", help="exact security report")
    common(p)
    p.add_argument("--dump-distribution", action="store_true")
    common(sub.add_parser("attack-demo", help="real versus ideal output comparison"))
    sub.add_parser("list-scenarios", help="list shipped scenarios")
    return parser


COMMANDS = {"run": cmd_run, "analyze": cmd_analyze, "attack-demo": cmd_attack_demo,
            "list-scenarios": cmd_list}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(json.dumps({"error": "budget_exceeded", "required_atoms": exc.required,
                          "budget": exc.budget}), file=sys.stderr)
        return EXIT_BUDGET
    except (ScenarioError, ProtocolMismatch, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
