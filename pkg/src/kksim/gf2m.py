"""Arithmetic in the binary extension field GF(2^m).

Elements are polynomials over GF(2) stored as bit masks: bit i holds the
coefficient of x^i.  Multiplication is shift-and-XOR with reduction by the
field modulus; at the 256-element scale used here no log/exp tables are
needed.  Every map x -> a*x for a != 0 is a GF(2)-linear bijection, which
is what gives lifted codewords their full-rank right-hand block.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def _poly_degree(p: int) -> int:
    return p.bit_length() - 1


def _poly_mod(a: int, m: int) -> int:
    dm = _poly_degree(m)
    while _poly_degree(a) >= dm and a:
        a ^= m << (_poly_degree(a) - dm)
    return a


def _is_irreducible(modulus: int, m: int) -> bool:
    # Trial division: a composite polynomial of degree m has a factor of
    # degree at most m // 2.
    for d in range(1, m // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if _poly_mod(modulus, q) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldParams:
    """A concrete GF(2^m): extension degree plus irreducible modulus.

    The modulus mask includes the leading x^m term; the default 0x11D
    (x^8+x^4+x^3+x^2+1) is primitive, so x itself generates the
    multiplicative group.
    """

    m: int = 8
    modulus: int = 0x11D

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("extension degree must be positive")
        if _poly_degree(self.modulus) != self.m:
            raise ValueError(
                f"modulus {self.modulus:#x} does not have degree {self.m}"
            )
        if not _is_irreducible(self.modulus, self.m):
            raise ValueError(f"modulus {self.modulus:#x} is reducible")

    @property
    def order(self) -> int:
        return 1 << self.m

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    def alpha_powers(self, count: int) -> tuple["FieldElement", ...]:
        """(x^0, x^1, ..., x^(count-1)) as field elements."""
        out = []
        acc = self.element(1)
        x = self.element(2)
        for _ in range(count):
            out.append(acc)
            acc = mul(acc, x)
        return tuple(out)


@lru_cache(maxsize=None)
def default_field() -> FieldParams:
    return FieldParams()


@dataclass(frozen=True)
class FieldElement:
    """Element of GF(2^m); ``value`` packs the coefficient bits."""

    value: int
    params: FieldParams

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.params.order:
            raise ValueError(f"value {self.value:#x} outside GF(2^{self.params.m})")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return add(self, other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return mul(self, other)

    def __int__(self) -> int:
        return self.value


def _same_field(a: FieldElement, b: FieldElement) -> FieldParams:
    if a.params != b.params:
        raise ValueError("elements from different fields")
    return a.params


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    """Field addition: XOR of coefficient masks (characteristic 2)."""
    return FieldElement(a.value ^ b.value, _same_field(a, b))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Field multiplication, reduced by the modulus."""
    params = _same_field(a, b)
    x, y = a.value, b.value
    top = 1 << params.m
    acc = 0
    while y:
        if y & 1:
            acc ^= x
        y >>= 1
        x <<= 1
        if x & top:
            x ^= params.modulus
    return FieldElement(acc, params)


def expand_bits(a: FieldElement) -> tuple[int, ...]:
    """Coefficient vector of length m, x^0 coefficient first.

    GF(2)-linear: expand(a + b) is the elementwise XOR of the expansions.
    The vector packs back to ``a.value`` under the bit-0-first convention
    shared with :mod:`kksim.bitlinalg`.
    """
    return tuple((a.value >> i) & 1 for i in range(a.params.m))


def eval_linearized(message: FieldElement, point: FieldElement) -> FieldElement:
    """Evaluate the degree-0 linearized polynomial f(x) = message * x.

    GF(2)-linear in ``point``; with one message symbol this is all the
    evaluation the code construction needs.
    """
    return mul(message, point)
