"""Polynomial sharing: correct when honest, steerable by one forged share.

Alice replaces her final share r(1) with a uniform field element.  Since
interpolation is a bijection in r(1), Charlie's output becomes uniform on
Z_N, which no input substitution in the ideal model can reproduce.
"""
from trisec.adversary import uniform_final_share
from trisec.analyzer import InputLaw, attack_comparison, check_passive_suite
from trisec.bgw import BgwParams, bgw_protocol, lagrange_weights_at_zero

params = BgwParams(n=4, s=2, N=5)
proto = bgw_protocol(params)
print("interpolation weights at 0:", [w.code for w in lagrange_weights_at_zero((1, 2, 3), params.field)])

cmp = attack_comparison(proto, uniform_final_share(proto), InputLaw.iid_uniform_bits(proto))
print("real W :", {w: str(p) for w, p in sorted(cmp["real"].pmf().items())})
print("ideal W:", {w: str(p) for w, p in sorted(cmp["ideal"].pmf().items())})
print("total variation:", cmp["tvd"])
print("correctness under attack:", cmp["correctness"].verdict)

# quadratic distance: some outputs are impossible for any honest input
quad = bgw_protocol(BgwParams(n=1, s=3, N=5))
cmp = attack_comparison(quad, uniform_final_share(quad), InputLaw.uniform(quad))
print("valid outputs:", cmp["output_range"])
print("P(invalid) real:", cmp["invalid_real"], " ideal:", cmp["invalid_ideal"])

# passive view: Charlie holds three points of r, so r itself is exposed
small = bgw_protocol(BgwParams(n=2, s=2, N=5))
for c in check_passive_suite(small, InputLaw.uniform(small)).conditions:
    print(f"{c.id:28s} {c.verdict:10s} leakage={c.leakage_bits}")
