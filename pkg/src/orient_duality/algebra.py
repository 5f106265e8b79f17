"""Exact sparse arithmetic in graded coefficient rings.

A coefficient ring is described by its kind plus a truncation bound N >= 1:

* ``additive``       -- the integers, no symbols.
* ``multiplicative`` -- integer polynomials in one symbol ``beta`` with
  ``deg(beta) = -1``.
* ``universal``      -- rational polynomials in ``b1 .. b{N-1}`` with
  ``deg(bm) = -m``; products drop monomials of degree below ``-N``.

Elements are stored in canonical form: a finite map from exponent tuples to
nonzero coefficients, with integers preferred over equal rationals.  Two
elements are equal iff their descriptors and term maps are equal, so ``==``
is exact mathematical equality.  The grading is concentrated in degrees
<= 0 and multiplication adds degrees, which makes the truncated product
associative: a dropped intermediate monomial could only have produced
dropped monomials later on.
"""

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import ParseError, RingMismatchError


class RingKind(Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"
    UNIVERSAL = "universal"

    @staticmethod
    def parse(name: str) -> "RingKind":
        for kind in RingKind:
            if kind.value == name:
                return kind
        raise ParseError("unknown theory %r (expected additive, multiplicative or universal)" % name)


def _canon_coeff(c):
    # Canonical form prefers int over an equal Fraction.
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


@dataclass(frozen=True)
class CoeffRing:
    """Descriptor of a graded coefficient ring.

    ``symbols[i]`` has degree ``symbol_degrees[i]`` (always negative).
    Descriptors compare structurally; operations require equal descriptors.
    """

    kind: RingKind
    truncation: int
    symbols: tuple[str, ...]
    symbol_degrees: tuple[int, ...]

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation bound must be >= 1")
        if len(self.symbols) != len(self.symbol_degrees):
            raise ValueError("symbol table is inconsistent")

    @staticmethod
    def additive(truncation: int) -> "CoeffRing":
        return CoeffRing(RingKind.ADDITIVE, truncation, (), ())

    @staticmethod
    def multiplicative(truncation: int) -> "CoeffRing":
        return CoeffRing(RingKind.MULTIPLICATIVE, truncation, ("beta",), (-1,))

    @staticmethod
    def universal(truncation: int) -> "CoeffRing":
        names = tuple("b%d" % m for m in range(1, truncation))
        degs = tuple(-m for m in range(1, truncation))
        return CoeffRing(RingKind.UNIVERSAL, truncation, names, degs)

    @staticmethod
    def for_kind(kind: RingKind, truncation: int) -> "CoeffRing":
        if kind is RingKind.ADDITIVE:
            return CoeffRing.additive(truncation)
        if kind is RingKind.MULTIPLICATIVE:
            return CoeffRing.multiplicative(truncation)
        return CoeffRing.universal(truncation)

    @property
    def nsymbols(self) -> int:
        return len(self.symbols)

    @property
    def allows_fractions(self) -> bool:
        return self.kind is RingKind.UNIVERSAL

    def monomial_degree(self, expo: tuple[int, ...]) -> int:
        return sum(e * d for e, d in zip(expo, self.symbol_degrees))

    # -- element constructors ------------------------------------------

    def zero(self) -> "RingElem":
        return RingElem(self, {})

    def one(self) -> "RingElem":
        return self.from_coeff(1)

    def from_coeff(self, c) -> "RingElem":
        c = _canon_coeff(c)
        if not c:
            return RingElem(self, {})
        return RingElem(self, {(0,) * self.nsymbols: c})

    def gen(self, index: int) -> "RingElem":
        """The ``index``-th symbol as a ring element."""
        if not 0 <= index < self.nsymbols:
            raise ValueError("no symbol with index %d" % index)
        expo = tuple(1 if i == index else 0 for i in range(self.nsymbols))
        return RingElem(self, {expo: 1})

    def gen_named(self, name: str) -> "RingElem":
        return self.gen(self.symbols.index(name))

    def parse(self, text: str) -> "RingElem":
        return _parse_elem(self, text)


class RingElem:
    """A graded ring element in canonical sparse form.

    ``terms`` maps exponent tuples (one slot per ring symbol) to nonzero
    int or Fraction coefficients.  Instances are immutable by convention;
    all operations return new elements.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoeffRing, terms: dict):
        clean = {}
        # In the universal ring, monomials below degree -truncation are
        # identified with zero; dropping them here (not only in products)
        # keeps every construction path in the same quotient.
        drop = ring.kind is RingKind.UNIVERSAL
        bound = -ring.truncation
        for expo, c in terms.items():
            c = _canon_coeff(c)
            if not c:
                continue
            if drop and ring.monomial_degree(expo) < bound:
                continue
            clean[expo] = c
        self.ring = ring
        self.terms = clean

    # -- queries -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    __hash__ = None

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def degrees(self) -> set[int]:
        """The set of degrees in which the element has a nonzero part."""
        return {self.ring.monomial_degree(e) for e in self.terms}

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nsymbols, 0)

    # -- arithmetic ----------------------------------------------------

    def _check_ring(self, other: "RingElem"):
        if self.ring != other.ring:
            raise RingMismatchError("elements of different coefficient rings")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.from_coeff(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        self._check_ring(other)
        terms = dict(self.terms)
        for expo, c in other.terms.items():
            terms[expo] = terms.get(expo, 0) + c
        return RingElem(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.from_coeff(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            return RingElem(self.ring, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, RingElem):
            return NotImplemented
        self._check_ring(other)
        ring = self.ring
        truncate = ring.kind is RingKind.UNIVERSAL
        bound = -ring.truncation
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                if truncate and ring.monomial_degree(expo) < bound:
                    continue
                terms[expo] = terms.get(expo, 0) + c1 * c2
        return RingElem(ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined here")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    # -- rendering -----------------------------------------------------

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))

    def render(self) -> str:
        """Deterministic text form; ``CoeffRing.parse`` round-trips it."""
        if not self.terms:
            return "0"
        parts = []
        for expo, c in self._sorted_terms():
            factors = []
            for name, e in zip(self.ring.symbols, expo):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append("%s^%d" % (name, e))
            if not factors:
                body = str(abs(c) if isinstance(c, int) else abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = first_body if first_sign == "+" else "-" + first_body
        for sign, body in parts[1:]:
            out += " %s %s" % (sign, body)
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return "RingElem(%s)" % self.render()


# -- element grammar ----------------------------------------------------
#
#   elem   := [sign] term (sign term)*
#   term   := factor ('*' factor)*
#   factor := number | symbol ['^' nat]
#   number := nat | nat '/' nat
#
# Integer rings reject fractional numbers at this boundary, which keeps
# user-supplied data inside the integral subring the theory promises.

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<sym>[A-Za-z][A-Za-z0-9]*)|(?P<op>[\^*+-]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError("unexpected character %r" % text[pos], pos)
            break
        if m.lastgroup == "num":
            tokens.append(("num", m.group("num").replace(" ", ""), m.start("num")))
        elif m.lastgroup == "sym":
            tokens.append(("sym", m.group("sym"), m.start("sym")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return tokens


def _parse_elem(ring: CoeffRing, text: str) -> RingElem:
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty element literal")
    result = ring.zero()
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        # optional sign chain before a term; required between terms
        saw_sign = False
        while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            saw_sign = True
            i += 1
        if not first and not saw_sign:
            raise ParseError("expected '+' or '-' between terms", tokens[i][2])
        if i >= len(tokens):
            raise ParseError("dangling sign at end of element literal")
        coeff = Fraction(sign)
        expo = [0] * ring.nsymbols
        expect_factor = True
        while i < len(tokens):
            kind, val, pos = tokens[i]
            if expect_factor:
                if kind == "num":
                    if "/" in val:
                        if not ring.allows_fractions:
                            raise ParseError("fractional coefficient in an integer ring", pos)
                        coeff *= Fraction(val)
                    else:
                        coeff *= int(val)
                    i += 1
                elif kind == "sym":
                    try:
                        idx = ring.symbols.index(val)
                    except ValueError:
                        raise ParseError("unknown symbol %r" % val, pos) from None
                    power = 1
                    i += 1
                    if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "^":
                        i += 1
                        if i >= len(tokens) or tokens[i][0] != "num" or "/" in tokens[i][1]:
                            raise ParseError("expected integer exponent after '^'", pos)
                        power = int(tokens[i][1])
                        i += 1
                    expo[idx] += power
                else:
                    raise ParseError("expected a number or symbol", pos)
                expect_factor = False
            else:
                if kind == "op" and val == "*":
                    i += 1
                    expect_factor = True
                else:
                    break
        if expect_factor:
            raise ParseError("dangling '*' in element literal")
        term = RingElem(ring, {tuple(expo): coeff})
        result = result + term
        first = False
    if ring.kind is not RingKind.UNIVERSAL and not result.is_integral():
        # can only happen via cancellation tricks like 1/2 + 1/2; the
        # individual factors were already rejected above, but keep the
        # boundary airtight.
        raise ParseError("element is not integral in an integer ring")
    return result
