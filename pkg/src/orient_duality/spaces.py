"""Products of projective spaces, their cohomology rings and morphisms.

A space is a finite tuple of projective dimensions; the empty tuple is the
point.  Its cohomology over a coefficient ring R is

    R[z1 .. zk] / (z_t^(n_t + 1))

with every z_t in degree 1 (the single collapsed grading).  Classes are
sparse maps from exponent tuples to ring elements; the quotient relations
are enforced at construction by dropping out-of-bound exponents, so equal
classes always have equal term maps.

Morphisms come in four generator shapes plus composites:

* ``Projection``  -- keep an ordered subset of factors;
* ``LinearEmbed`` -- linearly embedded smaller projective space in one factor;
* ``Diagonal``    -- duplicate one factor into two adjacent slots;
* ``Permutation`` -- reorder factors.

Each knows its pullback on classes; the direct images live in ``gysin``
since they depend on the group law.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import CoeffRing, RingElem
from .errors import (
    ParseError,
    RingMismatchError,
    SpaceMismatchError,
    TruncationUnsoundError,
)

_SPACE_RE = re.compile(r"^P(\d+)(xP\d+)*$")


@dataclass(frozen=True)
class Space:
    factors: tuple[int, ...]

    def __post_init__(self):
        if any(n < 0 for n in self.factors):
            raise ValueError("projective dimensions must be >= 0")

    @staticmethod
    def point() -> "Space":
        return Space(())

    @staticmethod
    def parse(text: str) -> "Space":
        text = text.strip()
        if text == "pt":
            return Space(())
        if not _SPACE_RE.match(text):
            raise ParseError("malformed space %r (expected e.g. 'P2xP1' or 'pt')" % text)
        return Space(tuple(int(p[1:]) for p in text.split("x")))

    def render(self) -> str:
        if not self.factors:
            return "pt"
        return "x".join("P%d" % n for n in self.factors)

    def __str__(self) -> str:
        return self.render()

    @property
    def nfactors(self) -> int:
        return len(self.factors)

    @property
    def total_dim(self) -> int:
        return sum(self.factors)

    def times(self, other: "Space") -> "Space":
        return Space(self.factors + other.factors)


def basis(space: Space) -> list[tuple[int, ...]]:
    """All exponent tuples, in graded-lexicographic order."""
    tuples = [()]
    for n in space.factors:
        tuples = [t + (e,) for t in tuples for e in range(n + 1)]
    tuples.sort(key=lambda t: (sum(t), t))
    return tuples


class CohClass:
    """A cohomology class on a space, in canonical sparse form."""

    __slots__ = ("space", "ring", "terms")

    def __init__(self, space: Space, ring: CoeffRing, terms: dict):
        clean = {}
        bounds = space.factors
        for expo, c in terms.items():
            if len(expo) != len(bounds):
                raise SpaceMismatchError("exponent tuple %r does not fit %s" % (expo, space))
            if any(e < 0 for e in expo):
                raise ValueError("negative exponent in %r" % (expo,))
            if any(e > n for e, n in zip(expo, bounds)):
                continue  # the quotient relation z^(n+1) = 0
            if c:
                clean[expo] = c
        self.space = space
        self.ring = ring
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(space: Space, ring: CoeffRing) -> "CohClass":
        return CohClass(space, ring, {})

    @staticmethod
    def one(space: Space, ring: CoeffRing) -> "CohClass":
        return CohClass(space, ring, {(0,) * space.nfactors: ring.one()})

    @staticmethod
    def monomial(space: Space, ring: CoeffRing, expo: tuple[int, ...], coeff=None) -> "CohClass":
        if coeff is None:
            coeff = ring.one()
        elif isinstance(coeff, (int, Fraction)):
            coeff = ring.from_coeff(coeff)
        return CohClass(space, ring, {tuple(expo): coeff})

    @staticmethod
    def zeta(space: Space, ring: CoeffRing, t: int) -> "CohClass":
        if not 0 <= t < space.nfactors:
            raise ValueError("no factor with index %d" % t)
        expo = tuple(1 if i == t else 0 for i in range(space.nfactors))
        return CohClass.monomial(space, ring, expo)

    # -- structure -------------------------------------------------------

    def _check(self, other: "CohClass"):
        if self.space != other.space:
            raise SpaceMismatchError("classes on different spaces")
        if self.ring != other.ring:
            raise RingMismatchError("classes over different coefficient rings")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, CohClass):
            return NotImplemented
        return (self.space, self.ring) == (other.space, other.ring) and self.terms == other.terms

    __hash__ = None

    def coeff(self, expo: tuple[int, ...]) -> RingElem:
        return self.terms.get(tuple(expo), self.ring.zero())

    def __add__(self, other: "CohClass") -> "CohClass":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            prev = terms.get(e)
            terms[e] = c if prev is None else prev + c
        return CohClass(self.space, self.ring, terms)

    def __neg__(self) -> "CohClass":
        return CohClass(self.space, self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "CohClass") -> "CohClass":
        return self + (-other)

    def __mul__(self, other):
        """Cup product, or scaling by a coefficient."""
        if isinstance(other, (int, Fraction, RingElem)):
            if isinstance(other, RingElem) and other.ring != self.ring:
                raise RingMismatchError("scaling by an element of a different ring")
            return CohClass(self.space, self.ring, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, CohClass):
            return NotImplemented
        self._check(other)
        bounds = self.space.factors
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                if any(e > n for e, n in zip(expo, bounds)):
                    continue
                c = c1 * c2
                prev = terms.get(expo)
                terms[expo] = c if prev is None else prev + c
        return CohClass(self.space, self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CohClass":
        out = CohClass.one(self.space, self.ring)
        for _ in range(n):
            out = out * self
        return out

    # -- rendering -------------------------------------------------------

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for expo, c in self._sorted_terms():
            zetas = []
            for t, e in enumerate(expo):
                if e == 1:
                    zetas.append("z%d" % (t + 1))
                elif e > 1:
                    zetas.append("z%d^%d" % (t + 1, e))
            coeff = c.render()
            if not zetas:
                parts.append(coeff)
            elif coeff == "1":
                parts.append("*".join(zetas))
            elif coeff == "-1":
                parts.append("-" + "*".join(zetas))
            elif len(c.terms) == 1:
                parts.append("*".join([coeff] + zetas))
            else:
                parts.append("*".join(["(%s)" % coeff] + zetas))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return "CohClass(%s; %s)" % (self.space.render(), self.render())

    def to_json_obj(self) -> dict:
        return {
            "terms": [
                {"zeta": list(e), "coeff": c.render()} for e, c in self._sorted_terms()
            ]
        }

    @staticmethod
    def from_json_obj(space: Space, ring: CoeffRing, obj) -> "CohClass":
        if not isinstance(obj, dict) or "terms" not in obj or not isinstance(obj["terms"], list):
            raise ParseError('class literal must be an object {"terms": [...]}')
        terms: dict = {}
        for item in obj["terms"]:
            if not isinstance(item, dict) or "zeta" not in item or "coeff" not in item:
                raise ParseError('each term must be {"zeta": [...], "coeff": "..."}')
            expo = tuple(item["zeta"])
            if len(expo) != space.nfactors or any(not isinstance(e, int) or e < 0 for e in expo):
                raise ParseError("exponent list %r does not fit %s" % (item["zeta"], space))
            c = ring.parse(str(item["coeff"]))
            prev = terms.get(expo)
            terms[expo] = c if prev is None else prev + c
        return CohClass(space, ring, terms)


# -- morphisms ------------------------------------------------------------


class Morphism:
    """Base class; concrete shapes define source, target and pullback."""

    source: Space
    target: Space

    def pullback(self, alpha: CohClass) -> CohClass:
        raise NotImplementedError

    def _check_target_class(self, alpha: CohClass):
        if alpha.space != self.target:
            raise SpaceMismatchError(
                "pullback along %s needs a class on %s, got one on %s"
                % (self.render(), self.target, alpha.space)
            )

    def render(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return "%s: %s -> %s" % (self.render(), self.source, self.target)


@dataclass(frozen=True, repr=False)
class Projection(Morphism):
    """Forget all factors outside ``keep`` (an increasing index tuple)."""

    source: Space
    keep: tuple[int, ...]
    target: Space = field(init=False)

    def __post_init__(self):
        keep = tuple(self.keep)
        if any(not 0 <= t < self.source.nfactors for t in keep):
            raise SpaceMismatchError("kept factor index out of range")
        if list(keep) != sorted(set(keep)):
            raise ValueError("kept factors must be strictly increasing")
        object.__setattr__(self, "keep", keep)
        object.__setattr__(self, "target", Space(tuple(self.source.factors[t] for t in keep)))

    @property
    def dropped(self) -> tuple[int, ...]:
        return tuple(t for t in range(self.source.nfactors) if t not in self.keep)

    def pullback(self, alpha: CohClass) -> CohClass:
        self._check_target_class(alpha)
        k = self.source.nfactors
        terms = {}
        for e, c in alpha.terms.items():
            expo = [0] * k
            for pos, t in enumerate(self.keep):
                expo[t] = e[pos]
            terms[tuple(expo)] = c
        return CohClass(self.source, alpha.ring, terms)

    def render(self) -> str:
        return "proj(%s)" % ",".join(str(t) for t in self.keep)


@dataclass(frozen=True, repr=False)
class LinearEmbed(Morphism):
    """A linear subspace P^degree inside factor ``factor`` of the target."""

    target: Space
    factor: int
    degree: int
    source: Space = field(init=False)

    def __post_init__(self):
        t, m = self.factor, self.degree
        if not 0 <= t < self.target.nfactors:
            raise SpaceMismatchError("no factor with index %d" % t)
        if not 0 <= m <= self.target.factors[t]:
            raise SpaceMismatchError(
                "cannot embed P%d linearly in P%d" % (m, self.target.factors[t])
            )
        fs = list(self.target.factors)
        fs[t] = m
        object.__setattr__(self, "source", Space(tuple(fs)))

    def pullback(self, alpha: CohClass) -> CohClass:
        self._check_target_class(alpha)
        # same exponent tuples; the source quotient kills what overflows
        return CohClass(self.source, alpha.ring, dict(alpha.terms))

    def render(self) -> str:
        return "embed(%d,%d)" % (self.factor, self.target.factors[self.factor])


@dataclass(frozen=True, repr=False)
class Diagonal(Morphism):
    """Duplicate factor ``factor`` into two adjacent slots."""

    source: Space
    factor: int
    target: Space = field(init=False)

    def __post_init__(self):
        t = self.factor
        if not 0 <= t < self.source.nfactors:
            raise SpaceMismatchError("no factor with index %d" % t)
        fs = self.source.factors
        object.__setattr__(self, "target", Space(fs[: t + 1] + (fs[t],) + fs[t + 1 :]))

    def pullback(self, alpha: CohClass) -> CohClass:
        self._check_target_class(alpha)
        t = self.factor
        terms: dict = {}
        for e, c in alpha.terms.items():
            expo = e[:t] + (e[t] + e[t + 1],) + e[t + 2 :]
            prev = terms.get(expo)
            terms[expo] = c if prev is None else prev + c
        return CohClass(self.source, alpha.ring, terms)

    def render(self) -> str:
        return "diag(%d)" % self.factor


@dataclass(frozen=True, repr=False)
class Permutation(Morphism):
    """Reorder factors: the image point has coordinates x[perm[i]]."""

    source: Space
    perm: tuple[int, ...]
    target: Space = field(init=False)

    def __post_init__(self):
        perm = tuple(self.perm)
        if sorted(perm) != list(range(self.source.nfactors)):
            raise ValueError("%r is not a permutation of the factors" % (perm,))
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "target", Space(tuple(self.source.factors[p] for p in perm)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return Permutation(self.target, tuple(inv))

    def pullback(self, alpha: CohClass) -> CohClass:
        self._check_target_class(alpha)
        k = self.source.nfactors
        terms = {}
        for e, c in alpha.terms.items():
            expo = [0] * k
            for i, p in enumerate(self.perm):
                expo[p] = e[i]
            terms[tuple(expo)] = c
        return CohClass(self.source, alpha.ring, terms)

    @property
    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm)))

    def render(self) -> str:
        return "perm(%s)" % ",".join(str(p) for p in self.perm)


@dataclass(frozen=True, repr=False)
class Composite(Morphism):
    """parts[0] after parts[1] after ... after parts[-1]."""

    parts: tuple[Morphism, ...]
    source: Space = field(init=False)
    target: Space = field(init=False)

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("a composite needs at least one part")
        for f, g in zip(parts, parts[1:]):
            if f.source != g.target:
                raise SpaceMismatchError(
                    "cannot compose %s after %s: %s != %s" % (f.render(), g.render(), f.source, g.target)
                )
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "source", parts[-1].source)
        object.__setattr__(self, "target", parts[0].target)

    def pullback(self, alpha: CohClass) -> CohClass:
        self._check_target_class(alpha)
        for part in self.parts:
            alpha = part.pullback(alpha)
        return alpha

    def render(self) -> str:
        return ";".join(p.render() for p in self.parts)


def identity(space: Space) -> Permutation:
    return Permutation(space, tuple(range(space.nfactors)))


def compose(*morphisms: Morphism) -> Morphism:
    """compose(f, g) = f after g; flattens nested composites."""
    parts: list[Morphism] = []
    for m in morphisms:
        if isinstance(m, Composite):
            parts.extend(m.parts)
        else:
            parts.append(m)
    if len(parts) == 1:
        return parts[0]
    return Composite(tuple(parts))


def prefix_product(T: Space, f: Morphism) -> Morphism:
    """id_T x f, with the factors of T in front."""
    k = T.nfactors
    if k == 0:
        return f
    if isinstance(f, Projection):
        return Projection(T.times(f.source), tuple(range(k)) + tuple(t + k for t in f.keep))
    if isinstance(f, LinearEmbed):
        return LinearEmbed(T.times(f.target), f.factor + k, f.degree)
    if isinstance(f, Diagonal):
        return Diagonal(T.times(f.source), f.factor + k)
    if isinstance(f, Permutation):
        return Permutation(T.times(f.source), tuple(range(k)) + tuple(p + k for p in f.perm))
    if isinstance(f, Composite):
        return Composite(tuple(prefix_product(T, p) for p in f.parts))
    raise TypeError("unknown morphism shape %r" % type(f).__name__)


def suffix_product(f: Morphism, T: Space) -> Morphism:
    """f x id_T, with the factors of T at the back."""
    if T.nfactors == 0:
        return f
    if isinstance(f, Projection):
        k = f.source.nfactors
        return Projection(f.source.times(T), f.keep + tuple(range(k, k + T.nfactors)))
    if isinstance(f, LinearEmbed):
        return LinearEmbed(f.target.times(T), f.factor, f.degree)
    if isinstance(f, Diagonal):
        return Diagonal(f.source.times(T), f.factor)
    if isinstance(f, Permutation):
        k = f.source.nfactors
        return Permutation(f.source.times(T), f.perm + tuple(range(k, k + T.nfactors)))
    if isinstance(f, Composite):
        return Composite(tuple(suffix_product(p, T) for p in f.parts))
    raise TypeError("unknown morphism shape %r" % type(f).__name__)


def product_morphism(f: Morphism, g: Morphism) -> Morphism:
    """f x g as (f x id) after (id x g)."""
    return compose(suffix_product(f, g.target), prefix_product(f.source, g))


def transposition(space: Space) -> Permutation:
    """Swap the two halves of space x space."""
    k = space.nfactors
    double = space.times(space)
    return Permutation(double, tuple(list(range(k, 2 * k)) + list(range(k))))


def full_diagonal(space: Space) -> Morphism:
    """The diagonal X -> X x X as a composite of generator shapes."""
    k = space.nfactors
    if k == 0:
        return identity(space)
    parts: list[Morphism] = []
    current = space
    for t in range(k):
        d = Diagonal(current, 2 * t)
        parts.append(d)
        current = d.target
    # current = (n1, n1, n2, n2, ...); shuffle the duplicated slots into
    # the (first copy, second copy) block order of X x X.
    sigma = tuple(
        [2 * i for i in range(k)] + [2 * i + 1 for i in range(k)]
    )
    rho = Permutation(current, sigma)
    parts.append(rho)
    return Composite(tuple(reversed(parts)))


# -- Chern and cross classes ----------------------------------------------


def euler(space: Space, degrees: tuple[int, ...], law) -> CohClass:
    """Euler class of O(d1, .., dk): the law applied to the factor classes
    [d_t](z_t).  Exact only when total dimension + 1 <= truncation."""
    if len(degrees) != space.nfactors:
        raise SpaceMismatchError("need one twist degree per factor")
    if space.total_dim + 1 > law.truncation:
        raise TruncationUnsoundError(
            "Euler class on %s (dimension %d) needs truncation >= %d, law has %d"
            % (space, space.total_dim, space.total_dim + 1, law.truncation)
        )
    out = CohClass.zero(space, law.ring)
    for t, d in enumerate(degrees):
        if d == 0:
            continue
        zt = CohClass.zeta(space, law.ring, t)
        ct = law.m_series(d).eval_nilpotent(zt)
        out = law.eval(out, ct)
    return out


def cross_coh(alpha: CohClass, beta: CohClass) -> CohClass:
    """External product on the product space (factors concatenated)."""
    if alpha.ring != beta.ring:
        raise RingMismatchError("classes over different coefficient rings")
    space = alpha.space.times(beta.space)
    terms: dict = {}
    for e1, c1 in alpha.terms.items():
        for e2, c2 in beta.terms.items():
            terms[e1 + e2] = c1 * c2
    return CohClass(space, alpha.ring, terms)
