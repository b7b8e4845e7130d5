"""Packed monomials and monomial orders.

A monomial in ``n`` variables is stored as one Python ``int`` holding ``n``
fixed-width fields. The first variable occupies the most significant field,
so integer comparison is the lexicographic order and monomial
multiplication is integer addition. Each field keeps its top bit clear as
a guard, which makes divisibility a single subtract-and-mask.
"""

from __future__ import annotations

FIELD_BITS = 16
FIELD_MASK = (1 << (FIELD_BITS - 1)) - 1  # usable exponent bits
MAX_EXPONENT = FIELD_MASK


class ExponentOverflow(ArithmeticError):
    pass


def guard_mask(nvars: int) -> int:
    g = 0
    for i in range(nvars):
        g |= 1 << (i * FIELD_BITS + FIELD_BITS - 1)
    return g


def pack(exps) -> int:
    m = 0
    for e in exps:
        if e < 0 or e > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent {e} out of range")
        m = (m << FIELD_BITS) | e
    return m


def unpack(m: int, nvars: int) -> tuple[int, ...]:
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = m & FIELD_MASK
        m >>= FIELD_BITS
    return tuple(out)


def shift_of(index: int, nvars: int) -> int:
    """Bit offset of the field that stores variable ``index``."""
    return (nvars - 1 - index) * FIELD_BITS


def exponent(m: int, index: int, nvars: int) -> int:
    return (m >> shift_of(index, nvars)) & FIELD_MASK


def divides(b: int, a: int, gmask: int) -> bool:
    """True when monomial ``b`` divides monomial ``a``."""
    return ((a | gmask) - b) & gmask == gmask


def lcm(a: int, b: int, nvars: int) -> int:
    ea, eb = unpack(a, nvars), unpack(b, nvars)
    return pack(max(x, y) for x, y in zip(ea, eb))


def gcd(a: int, b: int, nvars: int) -> int:
    ea, eb = unpack(a, nvars), unpack(b, nvars)
    return pack(min(x, y) for x, y in zip(ea, eb))


def coprime(a: int, b: int, nvars: int) -> bool:
    for x, y in zip(unpack(a, nvars), unpack(b, nvars)):
        if x and y:
            return False
    return True


def total_degree(m: int, nvars: int) -> int:
    return sum(unpack(m, nvars))


class MonomialOrder:
    """A named monomial order.

    ``encode`` maps a packed monomial to an int whose natural comparison is
    this order. Encodings stay additive (the encoding of a product is the sum
    of encodings) and keep the packed exponents in their low bits, so the
    guard-bit divisibility test of :func:`divides` works on them unchanged.
    """

    name = "abstract"

    def encode(self, m: int, nvars: int) -> int:
        raise NotImplementedError

    def decode(self, enc: int, nvars: int) -> int:
        raise NotImplementedError

    def key(self, m: int, nvars: int) -> int:
        return self.encode(m, nvars)

    def __repr__(self):
        return f"<{self.name} order>"

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.name == self.name

    def __hash__(self):
        return hash(self.name)


class LexOrder(MonomialOrder):
    name = "lex"

    def encode(self, m: int, nvars: int) -> int:
        return m

    def decode(self, enc: int, nvars: int) -> int:
        return enc

    def key(self, m: int, nvars: int) -> int:
        return m


_GREVLEX_BITS = 24


class GrevlexOrder(MonomialOrder):
    """Graded reverse lexicographic order.

    The high part of the encoding packs, for ``j = 0..n-1``, the sum of the
    first ``n - j`` exponents; comparing those partial sums is grevlex and
    they are linear in the exponents.
    """

    name = "grevlex"

    def encode(self, m: int, nvars: int) -> int:
        exps = unpack(m, nvars)
        acc = sum(exps)
        high = 0
        for j in range(nvars):
            high = (high << _GREVLEX_BITS) | acc
            acc -= exps[nvars - 1 - j]
        return (high << (nvars * FIELD_BITS)) | m

    def decode(self, enc: int, nvars: int) -> int:
        return enc & ((1 << (nvars * FIELD_BITS)) - 1)


LEX = LexOrder()
GREVLEX = GrevlexOrder()

ORDERS = {"lex": LEX, "grevlex": GREVLEX}


def get_order(order) -> MonomialOrder:
    if isinstance(order, MonomialOrder):
        return order
    try:
        return ORDERS[str(order)]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}") from None
