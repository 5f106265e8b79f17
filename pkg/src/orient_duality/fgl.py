"""Formal group laws over the coefficient rings.

A law is stored by its higher coefficients: F(x, y) = x + y + sum a_ij x^i y^j
with i, j >= 1, i + j <= N and deg(a_ij) = 1 - i - j.  Three built-ins:

* additive:        F = x + y                       over the integers
* multiplicative:  F = x + y - beta*x*y            over Z[beta]
* universal:       F = exp(log(x) + log(y))        over Q[b1..b{N-1}],
                   log(x) = x + b1*x^2 + ... + b{N-1}*x^N

All series live in one formal variable truncated above degree N; the
bivariate and trivariate scratch polynomials used for construction and
axiom checking are truncated above total degree N as well.  Every stored
coefficient is exact.

The logarithm of a law is solved degree by degree from the linear-in-y
slot of log(F(x, y)) = log(x) + log(y) and then checked against the full
identity; a table of coefficients that does not come from an actual group
law fails that check loudly instead of producing plausible garbage.

``pn_class(F, n)`` is the direct image of 1 under the projection from
n-dimensional projective space to the point, read off the logarithm:
g_n = (n + 1) * [x^(n+1)] log.  For the integer rings the values are
proved integral before being returned.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import CoeffRing, RingElem, RingKind
from .errors import (
    InternalConsistencyError,
    RingMismatchError,
    TruncationUnsoundError,
)

# Exact expansion of the axiom checks in many symbols is expensive in pure
# Python, so laws whose coefficients are themselves large polynomials are
# probed up to this total degree instead of the full truncation bound.
# Integer-ring laws are always checked at full precision.
_AXIOM_PROBE_BOUND = 6


@dataclass(frozen=True)
class Series:
    """A truncated power series sum(coeffs[d] * x^d, d <= trunc)."""

    ring: CoeffRing
    trunc: int
    coeffs: tuple

    @staticmethod
    def make(ring: CoeffRing, trunc: int, coeffs) -> "Series":
        cs = [
            ring.from_coeff(c) if isinstance(c, (int, Fraction)) else c
            for c in list(coeffs)[: trunc + 1]
        ]
        cs += [ring.zero()] * (trunc + 1 - len(cs))
        return Series(ring, trunc, tuple(cs))

    @staticmethod
    def zero(ring: CoeffRing, trunc: int) -> "Series":
        return Series.make(ring, trunc, [])

    @staticmethod
    def identity(ring: CoeffRing, trunc: int) -> "Series":
        return Series.make(ring, trunc, [ring.zero(), ring.one()])

    def __getitem__(self, d: int) -> RingElem:
        if 0 <= d <= self.trunc:
            return self.coeffs[d]
        return self.ring.zero()

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.ring, self.trunc) == (other.ring, other.trunc) and self.coeffs == other.coeffs

    __hash__ = None

    def _check(self, other: "Series"):
        if self.ring != other.ring or self.trunc != other.trunc:
            raise RingMismatchError("series over different rings or truncations")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        return Series(self.ring, self.trunc, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Series") -> "Series":
        self._check(other)
        return Series(self.ring, self.trunc, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            return Series(self.ring, self.trunc, tuple(c * other for c in self.coeffs))
        self._check(other)
        out = [self.ring.zero() for _ in range(self.trunc + 1)]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > self.trunc:
                    break
                if b:
                    out[i + j] = out[i + j] + a * b
        return Series(self.ring, self.trunc, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Series":
        out = Series.make(self.ring, self.trunc, [self.ring.one()])
        for _ in range(n):
            out = out * self
        return out

    def shift_coeff(self, d: int, delta: RingElem) -> "Series":
        cs = list(self.coeffs)
        cs[d] = cs[d] + delta
        return Series(self.ring, self.trunc, tuple(cs))

    def compose(self, inner: "Series") -> "Series":
        """self(inner(x)); requires inner(0) = 0."""
        self._check(inner)
        if inner.coeffs[0]:
            raise ValueError("inner series must have zero constant term")
        out = Series.make(self.ring, self.trunc, [self.coeffs[0]])
        power = Series.make(self.ring, self.trunc, [self.ring.one()])
        for d in range(1, self.trunc + 1):
            power = power * inner
            if not power:
                break
            c = self.coeffs[d]
            if c:
                out = out + power * c
        return out

    def reversion(self) -> "Series":
        """Compositional inverse; requires zero constant term and linear
        coefficient +1 or -1."""
        ring = self.ring
        if self.coeffs[0]:
            raise ValueError("cannot revert a series with nonzero constant term")
        lin = self.coeffs[1]
        if lin != ring.one() and lin != -ring.one():
            raise ValueError("reversion needs linear coefficient +-1")
        unit = 1 if lin == ring.one() else -1
        rev = Series.make(ring, self.trunc, [ring.zero(), ring.from_coeff(unit)])
        for d in range(2, self.trunc + 1):
            err = self.compose(rev)[d]
            if err:
                rev = rev.shift_coeff(d, err * (-unit))
        check = self.compose(rev)
        if check != Series.identity(ring, self.trunc):
            raise InternalConsistencyError("series reversion failed to verify")
        return rev

    def eval_nilpotent(self, arg):
        """sum(coeffs[d] * arg^d, d >= 1) for a nilpotent argument.

        ``arg`` is anything with +, * (including scaling by a RingElem)
        and truthiness; the loop stops as soon as a power vanishes, so the
        result is exact whenever arg^(trunc+1) = 0.
        """
        if self.coeffs[0]:
            raise ValueError("eval_nilpotent expects zero constant term")
        out = arg * self.coeffs[1]
        power = arg
        for d in range(2, self.trunc + 1):
            power = power * arg
            if not power:
                break
            c = self.coeffs[d]
            if c:
                out = out + power * c
        return out


class NilPoly:
    """Scratch polynomial in a few nilpotent variables, truncated above a
    total-degree bound.  Used to build laws and check their axioms."""

    __slots__ = ("ring", "nvars", "bound", "terms")

    def __init__(self, ring: CoeffRing, nvars: int, bound: int, terms: dict):
        clean = {e: c for e, c in terms.items() if c and sum(e) <= bound}
        self.ring = ring
        self.nvars = nvars
        self.bound = bound
        self.terms = clean

    @staticmethod
    def gen(ring: CoeffRing, nvars: int, bound: int, index: int) -> "NilPoly":
        expo = tuple(1 if i == index else 0 for i in range(nvars))
        return NilPoly(ring, nvars, bound, {expo: ring.one()})

    @staticmethod
    def from_series(s: Series, nvars: int, bound: int, index: int) -> "NilPoly":
        terms = {}
        for d in range(1, min(s.trunc, bound) + 1):
            c = s[d]
            if c:
                expo = tuple(d if i == index else 0 for i in range(nvars))
                terms[expo] = c
        if s[0]:
            terms[(0,) * nvars] = s[0]
        return NilPoly(s.ring, nvars, bound, terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, NilPoly):
            return NotImplemented
        return (self.ring, self.nvars, self.bound) == (other.ring, other.nvars, other.bound) and self.terms == other.terms

    __hash__ = None

    def coeff(self, expo: tuple) -> RingElem:
        return self.terms.get(expo, self.ring.zero())

    def __add__(self, other: "NilPoly") -> "NilPoly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            prev = terms.get(e)
            terms[e] = c if prev is None else prev + c
        return NilPoly(self.ring, self.nvars, self.bound, terms)

    def __sub__(self, other: "NilPoly") -> "NilPoly":
        return self + (other * (-1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            return NilPoly(self.ring, self.nvars, self.bound, {e: c * other for e, c in self.terms.items()})
        terms: dict = {}
        bound = self.bound
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > bound:
                    continue
                expo = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                prev = terms.get(expo)
                terms[expo] = c if prev is None else prev + c
        return NilPoly(self.ring, self.nvars, self.bound, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "NilPoly":
        out = NilPoly(self.ring, self.nvars, self.bound, {(0,) * self.nvars: self.ring.one()})
        for _ in range(n):
            out = out * self
        return out


def apply_law(F: "FGL", p, q):
    """F(p, q) = p + q + sum a_ij p^i q^j on nilpotent arguments.

    Works uniformly on Series, NilPoly and cohomology classes: anything
    with +, *, integer powers and truthiness.  Exactness is the caller's
    responsibility (arguments must be nilpotent within the truncation).
    """
    out = p + q
    p_pows: dict = {}
    q_pows: dict = {}

    def power(base, cache, n):
        if n not in cache:
            cache[n] = base ** n
        return cache[n]

    for (i, j) in sorted(F.coeffs):
        a = F.coeffs[(i, j)]
        pi = power(p, p_pows, i)
        if not pi:
            continue
        qj = power(q, q_pows, j)
        if not qj:
            continue
        t = pi * qj
        if t:
            out = out + t * a
    return out


@dataclass(eq=False)
class FGL:
    """A formal group law plus memoised derived data.

    The coefficient table is immutable by convention.  The private caches
    (logarithm, point classes, diagonal kernels) are filled idempotently,
    so concurrent readers under the interpreter lock are safe.
    """

    ring: CoeffRing
    truncation: int
    coeffs: dict
    _log: Series | None = field(default=None, repr=False)
    _pn: dict = field(default_factory=dict, repr=False)
    _kernel_cache: dict = field(default_factory=dict, repr=False)
    _axioms_ok: bool = field(default=False, repr=False)

    def a(self, i: int, j: int) -> RingElem:
        return self.coeffs.get((i, j), self.ring.zero())

    @property
    def kind(self) -> RingKind:
        return self.ring.kind

    # -- evaluation ----------------------------------------------------

    def eval(self, p, q):
        """F(p, q) for two cohomology classes on one space.

        Exact only when (total dimension + 1) <= truncation, because the
        discarded tail of the law could otherwise contribute; in that case
        the call refuses.
        """
        space = getattr(p, "space", None)
        if space is not None and space.total_dim + 1 > self.truncation:
            raise TruncationUnsoundError(
                "law truncated at %d cannot evaluate exactly on a space of dimension %d"
                % (self.truncation, space.total_dim)
            )
        return apply_law(self, p, q)

    def x_series(self) -> Series:
        return Series.identity(self.ring, self.truncation)

    def inverse(self) -> Series:
        """The series iota with F(x, iota(x)) = 0."""
        x = self.x_series()
        inv = Series.make(self.ring, self.truncation, [self.ring.zero(), -self.ring.one()])
        for d in range(2, self.truncation + 1):
            err = apply_law(self, x, inv)[d]
            if err:
                inv = inv.shift_coeff(d, -err)
        if apply_law(self, x, inv):
            raise InternalConsistencyError("formal inverse failed to verify")
        return inv

    def m_series(self, m: int) -> Series:
        """The m-fold formal sum [m](x); negative m via the inverse."""
        if m < 0:
            return self.inverse().compose(self.m_series(-m))
        out = Series.zero(self.ring, self.truncation)
        x = self.x_series()
        for _ in range(m):
            out = apply_law(self, x, out)
        return out

    # -- logarithm and point classes ------------------------------------

    def _bivariate(self, bound: int) -> NilPoly:
        x = NilPoly.gen(self.ring, 2, bound, 0)
        y = NilPoly.gen(self.ring, 2, bound, 1)
        return apply_law(self, x, y)

    def log(self) -> Series:
        """The logarithm: log(F(x, y)) = log(x) + log(y), log(x) = x + O(x^2).

        Solved degree by degree from the linear-in-y coefficients, then
        verified against the full identity (up to the probe bound for
        laws with large symbolic coefficients).
        """
        if self._log is None:
            n = self.truncation
            f2 = self._bivariate(n)
            powers = [None, f2]
            for k in range(2, n + 1):
                powers.append(powers[-1] * f2)
            coeffs = [self.ring.zero(), self.ring.one()]
            for m in range(1, n):
                known = f2.coeff((m, 1))
                for j in range(1, m):
                    known = known + powers[j + 1].coeff((m, 1)) * coeffs[j + 1]
                cm = known * Fraction(-1, m + 1)
                coeffs.append(cm)
            log = Series.make(self.ring, n, coeffs)
            self._validate_log(log)
            self._log = log
        return self._log

    def _validate_log(self, log: Series):
        bound = self.truncation
        if self.ring.kind is RingKind.UNIVERSAL:
            bound = min(bound, _AXIOM_PROBE_BOUND)
        f2 = self._bivariate(bound)
        lx = NilPoly.from_series(log, 2, bound, 0)
        ly = NilPoly.from_series(log, 2, bound, 1)
        lhs = _series_on_nilpoly(log, f2)
        if lhs != lx + ly:
            raise InternalConsistencyError(
                "coefficient table admits no logarithm: log(F(x,y)) != log(x) + log(y)"
            )

    def exp(self) -> Series:
        return self.log().reversion()

    def pn_class(self, n: int) -> RingElem:
        """Direct image of 1 under projective n-space -> point.

        g_0 = 1 and g_n = (n+1) * [x^(n+1)] log for n >= 1; integral in
        the integer rings (checked).  Requires n + 1 <= truncation.
        """
        if n < 0:
            raise ValueError("projective dimension must be >= 0")
        if n == 0:
            return self.ring.one()
        if n + 1 > self.truncation:
            raise TruncationUnsoundError(
                "point class g_%d needs truncation >= %d, law has %d" % (n, n + 1, self.truncation)
            )
        if n not in self._pn:
            g = self.log()[n + 1] * (n + 1)
            if self.ring.kind is not RingKind.UNIVERSAL and not g.is_integral():
                raise InternalConsistencyError("g_%d is not integral: %s" % (n, g.render()))
            self._pn[n] = g
        return self._pn[n]


def _series_on_nilpoly(s: Series, arg: NilPoly) -> NilPoly:
    out = NilPoly(arg.ring, arg.nvars, arg.bound, {})
    power = NilPoly(arg.ring, arg.nvars, arg.bound, {(0,) * arg.nvars: arg.ring.one()})
    for d in range(1, min(s.trunc, arg.bound) + 1):
        power = power * arg
        if not power:
            break
        c = s[d]
        if c:
            out = out + power * c
    if s[0]:
        raise ValueError("expected zero constant term")
    return out


# -- built-in laws --------------------------------------------------------


def additive_law(truncation: int) -> FGL:
    """F = x + y over the integers."""
    return FGL(CoeffRing.additive(truncation), truncation, {})


def multiplicative_law(truncation: int) -> FGL:
    """F = x + y - beta*x*y over Z[beta]."""
    ring = CoeffRing.multiplicative(truncation)
    coeffs = {}
    if truncation >= 2:
        coeffs[(1, 1)] = -ring.gen(0)
    return FGL(ring, truncation, coeffs)


def universal_law(truncation: int) -> FGL:
    """F = exp(log(x) + log(y)) with log(x) = x + sum bm x^(m+1)."""
    n = truncation
    ring = CoeffRing.universal(n)
    log = Series.make(
        ring, n, [ring.zero(), ring.one()] + [ring.gen(m - 1) for m in range(1, n)]
    )
    exp = log.reversion()
    lx = NilPoly.from_series(log, 2, n, 0)
    ly = NilPoly.from_series(log, 2, n, 1)
    f2 = _series_on_nilpoly(exp, lx + ly)
    coeffs = {}
    for expo, c in f2.terms.items():
        i, j = expo
        if i >= 1 and j >= 1:
            coeffs[(i, j)] = c
        elif not ((i, j) in ((1, 0), (0, 1)) and c == ring.one()):
            raise InternalConsistencyError("universal law is not in normal form")
    law = FGL(ring, n, coeffs)
    law._validate_log(log)
    law._log = log  # the construction data *is* the logarithm
    return law


def law_for(kind: RingKind, truncation: int) -> FGL:
    if kind is RingKind.ADDITIVE:
        return additive_law(truncation)
    if kind is RingKind.MULTIPLICATIVE:
        return multiplicative_law(truncation)
    if kind is RingKind.UNIVERSAL:
        return universal_law(truncation)
    raise ValueError("unknown ring kind %r" % (kind,))


# -- axiom checking -------------------------------------------------------


def check_axioms(F: FGL) -> str | None:
    """Verify the group-law axioms; returns a witness string or None.

    Symmetry and shape exactly; associativity and the logarithm identity
    up to the probe bound for symbol-heavy rings (full precision for the
    integer rings).  The result is cached on the law.
    """
    if F._axioms_ok:
        return None
    for (i, j), c in F.coeffs.items():
        if i < 1 or j < 1 or i + j > F.truncation:
            return "coefficient a(%d,%d) outside the allowed index range" % (i, j)
        if c != F.a(j, i):
            return "symmetry fails at a(%d,%d)" % (i, j)
        expected = {1 - i - j}
        if c.degrees() - expected:
            return "a(%d,%d) has degree outside %r" % (i, j, expected)
    x = F.x_series()
    zero = Series.zero(F.ring, F.truncation)
    if apply_law(F, x, zero) != x:
        return "F(x, 0) != x"
    bound = F.truncation
    if F.ring.kind is RingKind.UNIVERSAL:
        bound = min(bound, _AXIOM_PROBE_BOUND)
    gx = NilPoly.gen(F.ring, 3, bound, 0)
    gy = NilPoly.gen(F.ring, 3, bound, 1)
    gz = NilPoly.gen(F.ring, 3, bound, 2)
    left = apply_law(F, apply_law(F, gx, gy), gz)
    right = apply_law(F, gx, apply_law(F, gy, gz))
    if left != right:
        return "associativity fails up to degree %d" % bound
    try:
        F.log()
    except InternalConsistencyError as exc:
        return str(exc)
    if F.m_series(-1) != F.inverse():
        return "[-1](x) differs from the formal inverse"
    F._axioms_ok = True
    return None


def with_flipped_coefficient(F: FGL, i: int, j: int, *, keep_log: bool = True, keep_kernels: bool = True) -> FGL:
    """A copy of ``F`` with the sign of a(i,j) flipped, optionally keeping
    derived caches from the original.

    This is a fault-injection harness for the verification suite: a
    consistent recomputation of a flipped *symmetric pair* can produce an
    isomorphic theory, so the interesting failures come from stale caches
    (kept logarithm or kernels) or from asymmetric tables, which the
    logarithm validation rejects.  Not for production use.
    """
    coeffs = dict(F.coeffs)
    old = coeffs.get((i, j), F.ring.zero())
    coeffs[(i, j)] = -old
    mutated = FGL(F.ring, F.truncation, coeffs)
    if keep_log:
        mutated._log = F._log
        mutated._pn = dict(F._pn)
    if keep_kernels:
        mutated._kernel_cache = F._kernel_cache
    return mutated
