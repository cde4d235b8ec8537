"""Masked Hamming distance: one transcript, then the exact security checks.

Alice masks her input with (R, Z, pi) and hands the mask to Bob; Charlie
only ever sees two shuffled, scaled differences and counts where they
disagree.
"""
import json

from trisec.adversary import input_substitution, message_tamper, omit, view_leak
from trisec.analyzer import InputLaw, check_active_suite, check_passive_suite
from trisec.engine import enumerate_tapes, run
from trisec.field import GF
from trisec.hamdist import HamDistParams, hamdist_protocol, seq

F3 = GF(3)
proto = hamdist_protocol(HamDistParams(2, F3))
x, y = seq(F3, (0, 1)), seq(F3, (0, 2))

tapes = list(enumerate_tapes(proto.honest))
print("joint tapes:", len(tapes))
record = run(proto, proto.honest, x, y, tapes[17])
print(json.dumps(record.to_json(proto)["rounds"], indent=1))
print("Charlie outputs", record.W)

law = InputLaw.uniform(proto)
report = check_passive_suite(proto, law)
for c in report.conditions:
    print(f"{c.id:28s} {c.verdict}")

# without the shuffle, Charlie sees which positions match
broken = hamdist_protocol(HamDistParams(2, F3), force_identity_perm=True)
report = check_passive_suite(broken, InputLaw.uniform(broken))
bad = next(c for c in report.conditions if c.id == "privacy-against-charlie")
print("identity permutation:", bad.verdict, f"({bad.leakage_bits} bits)")

for dev in (input_substitution(proto, "alice", seq(F3, (2, 2))),
            message_tamper(proto, "bob", omit("B"), label="bob stays silent"),
            view_leak(proto, "charlie")):
    report = check_active_suite(proto, dev, law)
    print(f"{dev.label:34s}", {c.id: c.verdict for c in report.conditions})
