"""Field arithmetic and exact conditional-independence checks."""
from fractions import Fraction

from trisec.analyzer import JointDistribution, check_cond_indep, total_variation
from trisec.field import GF

F4 = GF(2, 2)
print("GF(4) elements:", F4.elements())
x = F4([0, 1])
print("x * x =", x * x, "  inverse of x =", x.inverse())

# multiplication table
for a in F4.elements():
    print(" ".join(f"{repr(a * b):>4}" for b in F4.elements()))

# a fair bit copied into B: dependent, leaks one bit
copy = JointDistribution.from_weights(("A", "B"), {(0, 0): 1, (1, 1): 1})
r = check_cond_indep(copy, "A", "B")
print("A independent of copy B?", bool(r), "leakage:", r.leakage_bits, "bits, witness:", r.witness)

# XOR with a uniform key: A and C are independent even though C depends on A
xor = JointDistribution.from_weights(("A", "K", "C"), {(a, k, a ^ k): 1 for a in (0, 1) for k in (0, 1)})
print("A independent of A xor K?", bool(check_cond_indep(xor, "A", "C")))
print("...but not once K is known:", bool(check_cond_indep(xor, "A", "C", "K")))

u = JointDistribution.from_weights(("W",), {(0,): 1, (1,): 1, (2,): 1})
b = JointDistribution.from_weights(("W",), {(0,): 1, (1,): 2, (2,): 1})
print("TVD(uniform, binomial) =", total_variation(u, b), "=", float(total_variation(u, b)))
assert total_variation(u, b) == Fraction(1, 6)
