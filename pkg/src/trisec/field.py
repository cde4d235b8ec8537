"""Exact arithmetic in GF(p^k) for small fields.

Elements are stored as an integer code ``sum(c_i * p**i)`` over their
low-to-high coefficient vector, and every operation is a table lookup.
The tables are built once per :class:`FieldSpec`; the fields used by the
protocols here have order at most a few dozen.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence


class FieldMismatchError(ValueError):
    """Raised when two elements from different fields are combined."""


# Minimal irreducibles; anything not listed falls back to the first monic
# irreducible in lexicographic order.
DEFAULT_POLYS = {
    (2, 2): (1, 1, 1),      # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),   # x^3 + x + 1
    (3, 2): (1, 0, 1),      # x^2 + 1
    (2, 4): (1, 1, 0, 0, 1),
}


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a, m, p):
    """Remainder of a modulo monic-or-not m over Z_p (low-to-high lists)."""
    a = _poly_trim(a)
    m = _poly_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        q = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - q * mc) % p
        a = _poly_trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _poly_trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def find_irreducible(p: int, k: int) -> tuple[int, ...]:
    for low in product(range(p), repeat=k):
        cand = tuple(reversed(low)) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {k} over Z_{p}")


@dataclass(frozen=True)
class FieldSpec:
    """Description of GF(p^k).

    ``reduction_poly`` is a monic degree-k coefficient tuple, low to high;
    it is ``None`` for prime fields.
    """

    p: int
    k: int = 1
    reduction_poly: tuple[int, ...] | None = None
    _add: tuple = field(default=(), init=False, repr=False, compare=False)
    _mul: tuple = field(default=(), init=False, repr=False, compare=False)
    _neg: tuple = field(default=(), init=False, repr=False, compare=False)
    _inv: tuple = field(default=(), init=False, repr=False, compare=False)
    _elements: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise ValueError("extension degree must be >= 1")
        if self.k == 1:
            if self.reduction_poly is not None:
                raise ValueError("prime fields take no reduction polynomial")
        else:
            poly = self.reduction_poly
            if poly is None:
                poly = DEFAULT_POLYS.get((self.p, self.k)) or find_irreducible(self.p, self.k)
            poly = tuple(int(c) % self.p for c in poly)
            if len(poly) != self.k + 1 or poly[-1] != 1:
                raise ValueError("reduction polynomial must be monic of degree k")
            if not is_irreducible(poly, self.p):
                raise ValueError(f"{poly} is reducible over Z_{self.p}")
            object.__setattr__(self, "reduction_poly", poly)
        self._build_tables()

    @property
    def order(self) -> int:
        return self.p ** self.k

    def _build_tables(self):
        p, k, q = self.p, self.k, self.order
        vecs = [self._vector(c) for c in range(q)]
        add = tuple(
            tuple(self._code([(x + y) % p for x, y in zip(vecs[a], vecs[b])]) for b in range(q))
            for a in range(q)
        )
        mul = []
        for a in range(q):
            row = []
            for b in range(q):
                prod = [0] * (2 * k - 1)
                for i, x in enumerate(vecs[a]):
                    for j, y in enumerate(vecs[b]):
                        prod[i + j] = (prod[i + j] + x * y) % p
                if k > 1:
                    prod = _poly_mod(prod, self.reduction_poly, p)
                row.append(self._code(prod))
            mul.append(tuple(row))
        neg = tuple(self._code([(-x) % p for x in vecs[a]]) for a in range(q))
        # exhaustive search; q is tiny
        inv = [None] * q
        for a in range(1, q):
            inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
        object.__setattr__(self, "_add", add)
        object.__setattr__(self, "_mul", tuple(mul))
        object.__setattr__(self, "_neg", neg)
        object.__setattr__(self, "_inv", tuple(inv))
        object.__setattr__(self, "_elements", tuple(FieldElement(self, c) for c in range(q)))

    def _vector(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def _code(self, coeffs) -> int:
        code = 0
        for c in reversed(list(coeffs) + [0] * (self.k - len(coeffs))):
            code = code * self.p + c
        return code

    # -- constructors --------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        """Build an element from an integer residue (k = 1) or a coefficient list."""
        if isinstance(value, FieldElement):
            _check(value.spec, self)
            return value
        if isinstance(value, (list, tuple)):
            if len(value) > self.k:
                raise ValueError(f"too many coefficients for GF({self.p}^{self.k})")
            return self._elements[self._code([int(c) % self.p for c in value])]
        if self.k == 1:
            return self._elements[int(value) % self.p]
        raise TypeError("extension-field elements are built from coefficient lists")

    def from_code(self, code: int) -> "FieldElement":
        return self._elements[code]

    @property
    def zero(self) -> "FieldElement":
        return self._elements[0]

    @property
    def one(self) -> "FieldElement":
        return self._elements[1]

    def elements(self) -> tuple["FieldElement", ...]:
        return self._elements

    def nonzero(self) -> tuple["FieldElement", ...]:
        return self._elements[1:]

    def to_config(self) -> dict:
        out = {"p": self.p, "k": self.k}
        if self.reduction_poly is not None:
            out["reduction_poly"] = list(self.reduction_poly)
        return out

    def __str__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"


@lru_cache(maxsize=None)
def _gf(p: int, k: int, poly: tuple | None) -> FieldSpec:
    return FieldSpec(p, k, poly)


def GF(p: int, k: int = 1, reduction_poly: Sequence[int] | None = None) -> FieldSpec:
    """Cached field constructor, so equal fields are usually the same object."""
    if k > 1 and reduction_poly is None:
        reduction_poly = DEFAULT_POLYS.get((p, k)) or find_irreducible(p, k)
    poly = None if reduction_poly is None else tuple(int(c) for c in reduction_poly)
    return _gf(p, k, poly)


def field_from_config(cfg: dict) -> FieldSpec:
    """Parse ``{p, k, reduction_poly?}``."""
    unknown = set(cfg) - {"p", "k", "reduction_poly"}
    if unknown:
        raise ValueError(f"unknown field keys: {sorted(unknown)}")
    return GF(int(cfg["p"]), int(cfg.get("k", 1)), cfg.get("reduction_poly"))


def _check(s1: FieldSpec, s2: FieldSpec):
    if s1 is not s2 and s1 != s2:
        raise FieldMismatchError(f"cannot combine elements of {s1} and {s2}")


class FieldElement:
    __slots__ = ("spec", "code", "_hash")

    def __init__(self, spec: FieldSpec, code: int):
        self.spec = spec
        self.code = code
        self._hash = hash((spec.p, spec.k, code))

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coefficient vector, low to high (length k)."""
        return self.spec._vector(self.code)

    def __int__(self):
        return self.code

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.code == other.code and (self.spec is other.spec or self.spec == other.spec)
        return NotImplemented

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        _check(self.spec, other.spec)
        return self.code < other.code

    def __add__(self, other):
        _check(self.spec, other.spec)
        return self.spec._elements[self.spec._add[self.code][other.code]]

    def __sub__(self, other):
        _check(self.spec, other.spec)
        s = self.spec
        return s._elements[s._add[self.code][s._neg[other.code]]]

    def __neg__(self):
        return self.spec._elements[self.spec._neg[self.code]]

    def __mul__(self, other):
        _check(self.spec, other.spec)
        return self.spec._elements[self.spec._mul[self.code][other.code]]

    def inverse(self) -> "FieldElement":
        if self.code == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self.spec}")
        return self.spec._elements[self.spec._inv[self.code]]

    def __truediv__(self, other):
        _check(self.spec, other.spec)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.spec.one
        for _ in range(e):
            out = out * self
        return out

    def to_json(self):
        return self.code if self.spec.k == 1 else list(self.coeffs)

    def __repr__(self):
        if self.spec.k == 1:
            return f"{self.code}"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) or "0"


# Function forms, mirroring the operator methods.

def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def neg(a: FieldElement) -> FieldElement:
    return -a


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def div(a: FieldElement, b: FieldElement) -> FieldElement:
    return a / b


def enumerate_field(spec: FieldSpec) -> list[FieldElement]:
    """All p^k elements in lexicographic order of their coefficient vectors."""
    return list(spec.elements())


def sequences(spec: FieldSpec, n: int, nonzero: bool = False) -> Iterator[tuple[FieldElement, ...]]:
    alphabet = spec.nonzero() if nonzero else spec.elements()
    return product(alphabet, repeat=n)
