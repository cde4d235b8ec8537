"""Exact joint distributions of protocol runs and the security checks on them.

Every verdict is an integer identity on counts.  Mutual information in
bits is reported next to each conditional-independence verdict for
triage only and never decides anything.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Any, Callable, Iterable, Mapping

from .adversary import Deviation, assemble, honest
from .engine import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Party,
    ProtocolSpec,
    enumerate_tapes,
    jsonable,
    run,
    tape_count,
)

VARIABLES = ("X", "Y", "U", "V", "W", "f", "M1", "M2", "M3", "Xbar", "Ybar")

HOLDS = "holds"
VIOLATED = "violated"
NOT_CHECKABLE = "not_checkable"


class UnknownVariable(ValueError):
    pass


class ExtractorUnavailable(ValueError):
    pass


class DomainMismatch(ValueError):
    pass


def canonical_key(value) -> str:
    return json.dumps(jsonable(value), sort_keys=True, separators=(",", ":"))


class _KeyCache(dict):
    def __missing__(self, value):
        k = self[value] = canonical_key(value)
        return k


# -- distributions -----------------------------------------------------------

@dataclass
class JointDistribution:
    """Integer counts over value tuples, with a common denominator."""

    variables: tuple[str, ...]
    atoms: dict[tuple, int]
    denominator: int

    def __post_init__(self):
        self.variables = tuple(self.variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self.atoms = {a: c for a, c in self.atoms.items() if c}
        if any(c < 0 for c in self.atoms.values()):
            raise ValueError("counts must be nonnegative")
        if self.denominator <= 0 or sum(self.atoms.values()) != self.denominator:
            raise ValueError("counts must sum to the denominator")

    @classmethod
    def from_weights(cls, variables, weights: Mapping[tuple, Any]) -> "JointDistribution":
        """Build from rational (or integer) weights; they are normalised."""
        weights = {a: Fraction(w) for a, w in weights.items() if w}
        total = sum(weights.values())
        lcm = reduce(math.lcm, (w.denominator for w in weights.values()), 1)
        counts = {a: int(w * lcm) for a, w in weights.items()}
        denom = int(total * lcm)
        g = reduce(math.gcd, counts.values(), denom)
        return cls(variables, {a: c // g for a, c in counts.items()}, denom // g)

    def _indices(self, names) -> tuple[int, ...]:
        out = []
        for name in names:
            try:
                out.append(self.variables.index(name))
            except ValueError:
                raise UnknownVariable(f"{name!r} not in {self.variables}") from None
        return tuple(out)

    def marginal(self, names) -> "JointDistribution":
        names = _names(names)
        idx = self._indices(names)
        out = Counter()
        for atom, c in self.atoms.items():
            out[tuple(atom[i] for i in idx)] += c
        return JointDistribution(names, dict(out), self.denominator)

    def probability(self, atom) -> Fraction:
        return Fraction(self.atoms.get(tuple(atom), 0), self.denominator)

    def pmf(self) -> dict:
        """Probabilities keyed by value (single variable) or value tuple."""
        single = len(self.variables) == 1
        return {
            (a[0] if single else a): Fraction(c, self.denominator) for a, c in self.atoms.items()
        }

    def merge(self, other: "JointDistribution") -> "JointDistribution":
        """Add the counts of two blocks of the same enumeration."""
        if other.variables != self.variables:
            raise DomainMismatch("cannot merge distributions over different variables")
        out = Counter(self.atoms)
        out.update(other.atoms)
        return JointDistribution(self.variables, dict(out), self.denominator + other.denominator)

    def to_json(self) -> dict:
        rows = [([jsonable(v) for v in atom], c) for atom, c in self.atoms.items()]
        rows.sort(key=lambda r: json.dumps(r[0], sort_keys=True))
        return {
            "variables": list(self.variables),
            "denominator": self.denominator,
            "atoms": [{"values": v, "count": c} for v, c in rows],
        }

    def __len__(self):
        return len(self.atoms)


def _names(names) -> tuple[str, ...]:
    if isinstance(names, str):
        return (names,)
    return tuple(names)


@dataclass(frozen=True)
class InputLaw:
    """Integer weights over input pairs ``(x, y)``."""

    weights: Mapping[tuple, int]
    label: str = "custom"

    def __post_init__(self):
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("input weights must be nonnegative")
        if not any(self.weights.values()):
            raise ValueError("input weights must not all be zero")

    @classmethod
    def uniform(cls, protocol: ProtocolSpec) -> "InputLaw":
        return cls({(x, y): 1 for x in protocol.x_alphabet for y in protocol.y_alphabet}, "uniform")

    @classmethod
    def iid_uniform_bits(cls, protocol: ProtocolSpec) -> "InputLaw":
        """Independent Bernoulli(1/2) symbols; needs a binary alphabet."""
        if len(protocol.x_alphabet) != 2 ** protocol.n or len(protocol.y_alphabet) != 2 ** protocol.n:
            raise ValueError("iid uniform bits need a binary input alphabet")
        return cls({(x, y): 1 for x in protocol.x_alphabet for y in protocol.y_alphabet},
                   "iid-bernoulli(1/2)")

    @classmethod
    def point(cls, x, y) -> "InputLaw":
        return cls({(tuple(x), tuple(y)): 1}, "point")

    @property
    def total(self) -> int:
        return sum(self.weights.values())

    def support(self) -> list[tuple]:
        return [xy for xy, w in self.weights.items() if w]

    def restrict(self, pairs: Iterable[tuple]) -> "InputLaw":
        keep = set(pairs)
        return InputLaw({xy: w for xy, w in self.weights.items() if xy in keep}, self.label)


# -- enumeration -------------------------------------------------------------

def required_atoms(protocol: ProtocolSpec, deviation: Deviation, input_law: InputLaw) -> int:
    return len(input_law.support()) * tape_count(assemble(protocol, deviation))


def build_joint(
    protocol: ProtocolSpec,
    deviation: Deviation | None,
    input_law: InputLaw,
    tracked: Iterable[str] = ("X", "Y", "U", "V", "W", "f"),
    budget: int | None = None,
    order_seed: int | None = None,
) -> JointDistribution:
    """Run every (input, joint tape) once and count the tracked variables.

    Each run is weighted by its input weight; tapes are uniform, so every
    joint tape adds the same count.  ``order_seed`` shuffles the
    enumeration order, which must not change the result.
    """
    deviation = deviation or honest()
    tracked = _names(tracked)
    for v in tracked:
        if v not in VARIABLES:
            raise UnknownVariable(v)
    extract_x = extract_y = None
    if "Xbar" in tracked:
        extract_x = protocol.extractors.get(Party.ALICE)
        if extract_x is None:
            raise ExtractorUnavailable(f"{protocol.name} has no effective-input extractor for Alice")
    if "Ybar" in tracked:
        extract_y = protocol.extractors.get(Party.BOB)
        if extract_y is None:
            raise ExtractorUnavailable(f"{protocol.name} has no effective-input extractor for Bob")

    programs = assemble(protocol, deviation)
    budget = DEFAULT_BUDGET if budget is None else budget
    pairs = input_law.support()
    needed = len(pairs) * tape_count(programs)
    if needed > budget:
        raise BudgetExceeded(needed, budget)
    tapes = list(enumerate_tapes(programs, budget))
    if order_seed is not None:
        rng = random.Random(order_seed)
        pairs = list(pairs)
        rng.shuffle(pairs)
        rng.shuffle(tapes)

    f = protocol.f
    getters = {
        "X": lambda rec: rec.x,
        "Y": lambda rec: rec.y,
        "U": lambda rec: rec.outputs[0],
        "V": lambda rec: rec.outputs[1],
        "W": lambda rec: rec.outputs[2],
        "f": lambda rec: f(rec.x, rec.y),
        "M1": lambda rec: rec.views[0],
        "M2": lambda rec: rec.views[1],
        "M3": lambda rec: rec.views[2],
        "Xbar": extract_x,
        "Ybar": extract_y,
    }
    get = [getters[v] for v in tracked]
    counts = defaultdict(int)
    for x, y in pairs:
        w = input_law.weights[(x, y)]
        for t in tapes:
            rec = run(protocol, programs, x, y, t)
            counts[tuple(g(rec) for g in get)] += w
    return JointDistribution(tracked, dict(counts), input_law.total * len(tapes))


def output_distribution(
    protocol: ProtocolSpec,
    deviation: Deviation | None,
    input_law: InputLaw,
    budget: int | None = None,
    use_batch: bool = True,
) -> JointDistribution:
    """Joint law of ``(X, Y, W)``.

    Uses the protocol's vectorised evaluator when it supports the
    deviation, otherwise plain enumeration through the engine.
    """
    deviation = deviation or honest()
    batch = protocol.batch_outputs if use_batch else None
    if batch is not None:
        counts = {}
        total = None
        for x, y in input_law.support():
            wc = batch(deviation, x, y)
            if wc is None:
                break
            s = sum(wc.values())
            if total is None:
                total = s
            elif s != total:
                raise RuntimeError("batch evaluator returned inconsistent tape totals")
            weight = input_law.weights[(x, y)]
            for w, c in wc.items():
                counts[(x, y, w)] = counts.get((x, y, w), 0) + weight * c
        else:
            return JointDistribution(("X", "Y", "W"), counts, input_law.total * total)
    return build_joint(protocol, deviation, input_law, ("X", "Y", "W"), budget)


# -- exact checks --------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witness: dict | None = None
    leakage_bits: float | None = None

    def __bool__(self):
        return self.holds


def check_cond_indep(dist: JointDistribution, a_set, b_set, c_set=()) -> CheckResult:
    """Is A independent of B given C?  Exact test of N(abc)N(c) = N(ac)N(bc)."""
    A, B, C = _names(a_set), _names(b_set), _names(c_set)
    all_names = A + B + C
    if len(set(all_names)) != len(all_names):
        raise ValueError("variable sets must be disjoint")
    ia, ib, ic = dist._indices(A), dist._indices(B), dist._indices(C)

    n_abc = defaultdict(int)
    for atom, c in dist.atoms.items():
        key = (tuple(atom[i] for i in ia), tuple(atom[i] for i in ib), tuple(atom[i] for i in ic))
        n_abc[key] += c
    n_ac, n_bc, n_c = defaultdict(int), defaultdict(int), defaultdict(int)
    a_given, b_given = defaultdict(set), defaultdict(set)
    for (a, b, c), k in n_abc.items():
        n_ac[(a, c)] += k
        n_bc[(b, c)] += k
        n_c[c] += k
        a_given[c].add(a)
        b_given[c].add(b)

    terms = []
    for (a, b, c), k in n_abc.items():
        ratio = (k * n_c[c]) / (n_ac[(a, c)] * n_bc[(b, c)])
        terms.append(k / dist.denominator * math.log2(ratio))
    # fsum is exactly rounded, so enumeration order cannot move the last bit
    leakage = round(max(math.fsum(terms), 0.0), 12)

    def bad(a, b, c):
        return n_abc.get((a, b, c), 0) * n_c[c] != n_ac[(a, c)] * n_bc[(b, c)]

    found = any(bad(a, b, c) for c in n_c for a in a_given[c] for b in b_given[c])
    if not found:
        return CheckResult(True, None, leakage)

    keys = _KeyCache()
    best = None
    for c in n_c:
        for a in a_given[c]:
            for b in b_given[c]:
                if bad(a, b, c):
                    k = (keys[c], keys[a], keys[b])
                    if best is None or k < best[0]:
                        best = (k, a, b, c)
    _, a, b, c = best
    witness = {
        "A": dict(zip(A, jsonable(a))),
        "B": dict(zip(B, jsonable(b))),
        "C": dict(zip(C, jsonable(c))),
        "count_abc": n_abc.get((a, b, c), 0),
        "count_c": n_c[c],
        "count_ac": n_ac[(a, c)],
        "count_bc": n_bc[(b, c)],
    }
    return CheckResult(False, witness, leakage)


def check_almost_sure(dist: JointDistribution, predicate: Callable[[dict], bool]) -> CheckResult:
    """Does ``predicate`` hold on every atom of positive probability?"""
    names = dist.variables
    failing = [a for a in dist.atoms if not predicate(dict(zip(names, a)))]
    if not failing:
        return CheckResult(True)
    keys = _KeyCache()
    atom = min(failing, key=lambda a: keys[a])
    mass = Fraction(sum(dist.atoms[a] for a in failing), dist.denominator)
    witness = {"atom": dict(zip(names, jsonable(atom))), "failure_probability": str(mass)}
    return CheckResult(False, witness)


# -- reports -----------------------------------------------------------------

@dataclass
class ConditionResult:
    id: str
    statement: str
    verdict: str
    witness: dict | None = None
    leakage_bits: float | None = None
    note: str | None = None

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "paper_eq": self.statement,
            "verdict": self.verdict,
            "leakage_bits": self.leakage_bits,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class SecurityReport:
    suite: str
    protocol: dict
    deviation: dict
    input_law: str
    conditions: list[ConditionResult] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def verdict(self, cond_id: str) -> str:
        for c in self.conditions:
            if c.id == cond_id:
                return c.verdict
        raise KeyError(cond_id)

    @property
    def status(self) -> str:
        verdicts = {c.verdict for c in self.conditions}
        if VIOLATED in verdicts:
            return VIOLATED
        if NOT_CHECKABLE in verdicts:
            return NOT_CHECKABLE
        return HOLDS

    @property
    def exit_code(self) -> int:
        return {HOLDS: 0, VIOLATED: 2, NOT_CHECKABLE: 3}[self.status]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "protocol": self.protocol,
            "deviation": self.deviation,
            "input_law": self.input_law,
            "status": self.status,
            "conditions": [c.to_json() for c in self.conditions],
            **({"extras": self.extras} if self.extras else {}),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


STATEMENTS = {
    "correctness": "Pr[(U,V,W) = (null,null,f(X,Y))] = 1",
    "output-correctness": "Pr[W = f(X,Y)] = 1",
    "alice-privacy": "I(U,Xbar;Y|X) = 0",
    "alice-correctness": "Pr[(V,W) = (null,f(Xbar,Y))] = 1",
    "bob-privacy": "I(V,Ybar;X|Y) = 0",
    "bob-correctness": "Pr[(U,W) = (null,f(X,Ybar))] = 1",
    "charlie-privacy": "I(W;X,Y|f(X,Y)) = 0",
    "charlie-null-outputs": "Pr[(U,V) = (null,null)] = 1",
    "privacy-against-alice": "I(M1;Y,f(X,Y)|X) = 0",
    "privacy-against-bob": "I(M2;X,f(X,Y)|Y) = 0",
    "privacy-against-charlie": "I(M3;X,Y|f(X,Y)) = 0",
}


def _ci(cond_id, dist, a, b, c) -> ConditionResult:
    r = check_cond_indep(dist, a, b, c)
    return ConditionResult(cond_id, STATEMENTS[cond_id], HOLDS if r else VIOLATED, r.witness, r.leakage_bits)


def _as(cond_id, dist, pred, note=None) -> ConditionResult:
    r = check_almost_sure(dist, pred)
    return ConditionResult(cond_id, STATEMENTS[cond_id], HOLDS if r else VIOLATED, r.witness, note=note)


def _header(protocol, deviation, input_law, suite):
    return SecurityReport(
        suite=suite,
        protocol={"name": protocol.name, **jsonable(protocol.params)},
        deviation=deviation.describe(),
        input_law=input_law.label,
    )


def check_active_suite(
    protocol: ProtocolSpec,
    deviation: Deviation | None,
    input_law: InputLaw,
    budget: int | None = None,
    order_seed: int | None = None,
    track_effective_inputs: bool = False,
) -> SecurityReport:
    """Check the active-model conditions that apply to the deviating party.

    Honest runs get the correctness condition.  A deviating Alice or Bob
    gets the privacy and correctness conditions stated with the
    effective input recovered by the protocol's extractor; without an
    extractor both are reported as not checkable and the run is instead
    checked for any change in the outputs.  A deviating Charlie gets the
    privacy and null-output conditions.
    """
    deviation = deviation or honest()
    report = _header(protocol, deviation, input_law, "active")
    f = protocol.f
    target = deviation.target
    base = ("X", "Y", "U", "V", "W", "f")

    def correctness(dist, note=None):
        return _as("correctness", dist,
                   lambda a: a["U"] is None and a["V"] is None and a["W"] == a["f"], note)

    if target is None:
        if track_effective_inputs:
            for party, name, ids in ((Party.ALICE, "Xbar", ("alice-privacy", "alice-correctness")),
                                     (Party.BOB, "Ybar", ("bob-privacy", "bob-correctness"))):
                if party not in protocol.extractors:
                    report.conditions.extend(_not_checkable(protocol, ids))
        dist = build_joint(protocol, deviation, input_law, base, budget, order_seed)
        report.conditions.append(correctness(dist))
        return report

    if target is Party.CHARLIE:
        dist = build_joint(protocol, deviation, input_law, base, budget, order_seed)
        report.conditions.append(_ci("charlie-privacy", dist, "W", ("X", "Y"), "f"))
        report.conditions.append(_as("charlie-null-outputs", dist,
                                     lambda a: a["U"] is None and a["V"] is None))
        return report

    if target is Party.ALICE:
        eff, own, other, ids = "Xbar", "U", "V", ("alice-privacy", "alice-correctness")
    else:
        eff, own, other, ids = "Ybar", "V", "U", ("bob-privacy", "bob-correctness")
    if target not in protocol.extractors:
        report.conditions.extend(_not_checkable(protocol, ids))
        dist = build_joint(protocol, deviation, input_law, base, budget, order_seed)
        report.conditions.append(correctness(
            dist, note="no extractor: checked whether the deviation alters any output"))
        return report

    dist = build_joint(protocol, deviation, input_law, base + (eff,), budget, order_seed)
    if target is Party.ALICE:
        report.conditions.append(_ci(ids[0], dist, (own, eff), "Y", "X"))
        report.conditions.append(_as(ids[1], dist,
                                     lambda a: a["V"] is None and a["W"] == f(a["Xbar"], a["Y"])))
    else:
        report.conditions.append(_ci(ids[0], dist, (own, eff), "X", "Y"))
        report.conditions.append(_as(ids[1], dist,
                                     lambda a: a["U"] is None and a["W"] == f(a["X"], a["Ybar"])))
    return report


def _not_checkable(protocol, ids):
    return [
        ConditionResult(i, STATEMENTS[i], NOT_CHECKABLE,
                        note=f"not checkable: no extractor for {protocol.name}")
        for i in ids
    ]


def check_passive_suite(
    protocol: ProtocolSpec,
    input_law: InputLaw,
    budget: int | None = None,
    order_seed: int | None = None,
) -> SecurityReport:
    """Correctness plus the three view-privacy conditions, all parties honest."""
    dev = honest()
    report = _header(protocol, dev, input_law, "passive")
    dist = build_joint(protocol, dev, input_law,
                       ("X", "Y", "U", "V", "W", "f", "M1", "M2", "M3"), budget, order_seed)
    report.conditions.append(_as("correctness", dist,
                                 lambda a: a["U"] is None and a["V"] is None and a["W"] == a["f"]))
    report.conditions.append(_ci("privacy-against-alice", dist, "M1", ("Y", "f"), "X"))
    report.conditions.append(_ci("privacy-against-bob", dist, "M2", ("X", "f"), "Y"))
    report.conditions.append(_ci("privacy-against-charlie", dist, "M3", ("X", "Y"), "f"))
    return report


# -- ideal model ---------------------------------------------------------------

@dataclass(frozen=True)
class SubstitutionChannel:
    """Conditional law of the input a party hands the trusted party.

    ``law(v)`` maps the true input to ``{substitute: weight}``.
    """

    target: Party
    law: Callable[[Any], Mapping[Any, Any]]
    label: str = "channel"


def identity_channel(target=Party.ALICE) -> SubstitutionChannel:
    return SubstitutionChannel(Party.parse(target), lambda v: {v: 1}, "identity")


def deterministic_channel(target, mapping: Callable[[Any], Any] | Mapping, label="deterministic") -> SubstitutionChannel:
    fn = mapping.__getitem__ if isinstance(mapping, Mapping) else mapping
    return SubstitutionChannel(Party.parse(target), lambda v: {fn(v): 1}, label)


def constant_channel(target, value) -> SubstitutionChannel:
    return SubstitutionChannel(Party.parse(target), lambda v: {value: 1}, "constant")


def uniform_channel(target, alphabet) -> SubstitutionChannel:
    alphabet = tuple(alphabet)
    return SubstitutionChannel(Party.parse(target), lambda v: {a: 1 for a in alphabet}, "uniform")


def ideal_output_distribution(
    f: Callable[[Any, Any], Any],
    input_law: InputLaw,
    channel: SubstitutionChannel | None = None,
    keep_inputs: bool = False,
) -> JointDistribution:
    """Law of the trusted party's output ``f(Xbar, Y)`` (or ``f(X, Ybar)``)."""
    channel = channel or identity_channel()
    weights = defaultdict(Fraction)
    for (x, y), w in input_law.weights.items():
        if not w:
            continue
        src = x if channel.target is Party.ALICE else y
        law = {k: Fraction(v) for k, v in channel.law(src).items() if v}
        tot = sum(law.values())
        if tot <= 0 or any(v < 0 for v in law.values()):
            raise ValueError("substitution weights must be nonnegative and not all zero")
        for sub, q in law.items():
            out = f(sub, y) if channel.target is Party.ALICE else f(x, sub)
            key = (x, y, out) if keep_inputs else (out,)
            weights[key] += Fraction(w) * q / tot
    variables = ("X", "Y", "W") if keep_inputs else ("W",)
    return JointDistribution.from_weights(variables, weights)


def total_variation(d1: JointDistribution, d2: JointDistribution) -> Fraction:
    if d1.variables != d2.variables:
        raise DomainMismatch(f"{d1.variables} vs {d2.variables}")
    support = set(d1.atoms) | set(d2.atoms)
    num = sum(abs(d1.atoms.get(a, 0) * d2.denominator - d2.atoms.get(a, 0) * d1.denominator)
              for a in support)
    return Fraction(num, 2 * d1.denominator * d2.denominator)


def mass_outside(dist: JointDistribution, valid, var: str = "W") -> Fraction:
    i = dist._indices((var,))[0]
    valid = set(valid)
    return Fraction(sum(c for a, c in dist.atoms.items() if a[i] not in valid), dist.denominator)


def attack_comparison(
    protocol: ProtocolSpec,
    deviation: Deviation,
    input_law: InputLaw,
    budget: int | None = None,
) -> dict:
    """Real output law under the deviation against the honest ideal output law."""
    joint = output_distribution(protocol, deviation, input_law, budget)
    real = joint.marginal("W")
    ideal = ideal_output_distribution(protocol.f, input_law)
    valid = protocol.output_range
    f = protocol.f
    output_ok = check_almost_sure(joint, lambda a: a["W"] == f(a["X"], a["Y"]))
    return {
        "correctness": ConditionResult(
            "output-correctness", STATEMENTS["output-correctness"],
            HOLDS if output_ok else VIOLATED, output_ok.witness),
        "real": real,
        "ideal": ideal,
        "tvd": total_variation(real, ideal),
        "invalid_real": mass_outside(real, valid),
        "invalid_ideal": mass_outside(ideal, valid),
        "output_range": sorted(valid),
    }
