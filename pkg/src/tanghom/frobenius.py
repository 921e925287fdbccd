"""The rank-two Frobenius algebra V = Z<1, X> and labeled tensors over circles.

Basis elements are encoded as bits: 0 is ``1`` (degree -1), 1 is ``X``
(degree +1).  A labeling of ``k`` circles is an int whose bit ``j`` is the
label of circle ``j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

ONE, X = 0, 1
NAMES = {ONE: "1", X: "X"}
RINGS = ("Z", "Z2", "Q")


def degree(b: int) -> int:
    return 1 if b else -1


def label_degree(bits: int, k: int) -> int:
    """Sum of factor degrees of a labeling of ``k`` circles."""
    return 2 * bin(bits).count("1") - k


def normalize_coeff(c, ring: str = "Z"):
    if ring == "Z2":
        return c % 2
    if ring == "Q":
        return Fraction(c)
    return int(c)


# -- structure maps on basis elements ------------------------------------------
# Results are dicts basis -> coefficient (tensor factors as tuples).

def mult(x: int, y: int) -> dict[int, int]:
    if x and y:
        return {}
    return {x | y: 1}


def comult(x: int) -> dict[tuple[int, int], int]:
    if x:
        return {(X, X): 1}
    return {(ONE, X): 1, (X, ONE): 1}


def unit() -> int:
    return ONE


def counit(x: int) -> int:
    return 1 if x else 0


# -- linear extensions --------------------------------------------------------

def _add(acc, key, c, ring):
    v = normalize_coeff(acc.get(key, 0) + c, ring)
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def mult_lin(u: Mapping[int, int], v: Mapping[int, int], ring="Z") -> dict[int, int]:
    out: dict[int, int] = {}
    for x, a in u.items():
        for y, b in v.items():
            for z, c in mult(x, y).items():
                _add(out, z, a * b * c, ring)
    return out


def comult_lin(u: Mapping[int, int], ring="Z") -> dict[tuple[int, int], int]:
    out: dict = {}
    for x, a in u.items():
        for z, c in comult(x).items():
            _add(out, z, a * c, ring)
    return out


def counit_lin(u: Mapping[int, int], ring="Z"):
    return normalize_coeff(sum(a * counit(x) for x, a in u.items()), ring)


def apply_on_tensor(f, u: Mapping[tuple, int], slots: tuple[int, ...], ring="Z") -> dict[tuple, int]:
    """Apply ``f`` (basis tuple -> dict of basis tuples) to the factors ``slots``
    of every term of ``u`` and splice the result in place of those factors."""
    out: dict = {}
    lo = slots[0]
    for t, a in u.items():
        args = tuple(t[s] for s in slots)
        rest_l, rest_r = t[:lo], t[lo + len(slots):]
        for r, c in f(*args).items():
            r = r if isinstance(r, tuple) else (r,)
            _add(out, rest_l + r + rest_r, a * c, ring)
    return out


# -- labeled tensors ----------------------------------------------------------

@dataclass(frozen=True)
class LabeledTensor:
    """Formal combination of labelings of circles.

    ``terms`` maps a tuple of ``(circle_id, bit)`` pairs, sorted by circle id,
    to a nonzero coefficient.  ``shift`` is added to every term's degree.
    """

    terms: tuple[tuple[tuple[tuple, ...], int], ...]
    shift: int = 0

    @classmethod
    def build(cls, terms: Mapping, shift: int = 0, ring: str = "Z") -> "LabeledTensor":
        acc: dict = {}
        for key, c in terms.items():
            _add(acc, tuple(sorted(key)), c, ring)
        return cls(tuple(sorted(acc.items())), shift)

    @classmethod
    def basis(cls, circles, bits: int, shift: int = 0) -> "LabeledTensor":
        key = tuple((cid, (bits >> j) & 1) for j, cid in enumerate(circles))
        return cls.build({key: 1}, shift)

    def degrees(self) -> set[int]:
        return {sum(degree(b) for _, b in key) + self.shift for key, _ in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def __add__(self, other: "LabeledTensor") -> "LabeledTensor":
        if self.shift != other.shift:
            raise ValueError("cannot add tensors with different shifts")
        acc = dict(self.terms)
        for k, c in other.terms:
            acc[k] = acc.get(k, 0) + c
        return LabeledTensor.build(acc, self.shift)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.terms:
            body = "⊗".join(NAMES[b] for _, b in key) or "1"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)


def verify_axioms() -> dict[str, bool]:
    """Exhaustive check of the Frobenius algebra axioms on basis elements."""
    B = (ONE, X)
    res = {}
    res["associativity"] = all(
        mult_lin(mult_lin({x: 1}, {y: 1}), {z: 1}) == mult_lin({x: 1}, mult_lin({y: 1}, {z: 1}))
        for x in B for y in B for z in B)
    res["commutativity"] = all(mult(x, y) == mult(y, x) for x in B for y in B)
    res["unit"] = all(mult(unit(), x) == {x: 1} == mult(x, unit()) for x in B)

    def delta_left(x):
        return apply_on_tensor(lambda a: comult(a), {t: c for t, c in comult(x).items()}, (0,))

    def delta_right(x):
        return apply_on_tensor(lambda a: comult(a), {t: c for t, c in comult(x).items()}, (1,))

    res["coassociativity"] = all(delta_left(x) == delta_right(x) for x in B)
    res["cocommutativity"] = all(
        comult(x) == {(b, a): c for (a, b), c in comult(x).items()} for x in B)
    frob = True
    for x in B:
        for y in B:
            lhs = comult_lin(mult(x, y))
            t = apply_on_tensor(lambda a: comult(a), {(x, y): 1}, (1,))      # id ⊗ Δ
            rhs = apply_on_tensor(lambda a, b: mult(a, b), t, (0, 1))          # m ⊗ id
            t2 = apply_on_tensor(lambda a: comult(a), {(x, y): 1}, (0,))     # Δ ⊗ id
            rhs2 = apply_on_tensor(lambda a, b: mult(a, b), t2, (1, 2))        # id ⊗ m
            frob &= lhs == rhs == rhs2
    res["frobenius"] = frob
    counit_ok = True
    for x in B:
        left: dict = {}
        right: dict = {}
        for (a, b), c in comult(x).items():
            if counit(a):
                _add(left, b, c * counit(a), "Z")
            if counit(b):
                _add(right, a, c * counit(b), "Z")
        counit_ok &= left == {x: 1} == right
    res["counit"] = counit_ok
    # degree bookkeeping: m, Δ raise degree by one, ι and ε lower it by one
    deg_ok = all(degree(z) == degree(x) + degree(y) + 1 for x in B for y in B for z in mult(x, y))
    deg_ok &= all(degree(a) + degree(b) == degree(x) + 1 for x in B for (a, b) in comult(x))
    deg_ok &= degree(unit()) == -1
    deg_ok &= all(degree(x) == 1 for x in B if counit(x))
    res["degrees"] = deg_ok
    return res
