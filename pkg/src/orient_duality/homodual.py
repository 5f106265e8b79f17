"""Homology classes, products between the two sides, and duality maps.

Homology of a product of projective spaces is modelled as the graded dual
of its cohomology: a class is the finite family of its values on the
monomial basis.  All operations below are forced by that model plus the
Gysin structure:

* ``pair(alpha, a)``            the evaluation <alpha, a>
* ``pushforward_hom(f, a)``     (f_* a)(beta) = a(f^* beta)
* ``shriek_hom(f, a, law)``     (f^! a)(beta) = a(f_! beta)
* ``cap(alpha, a)``             (alpha cap a)(beta) = a(beta * alpha)
* ``cross_hom(a, b)``           (a x b)(e, f) = a(e) * b(f)
* ``slant_l(alpha, a)``         alpha / a, contracting the trailing block
* ``slant_r(alpha, b)``         alpha \\ b, contracting the leading block
* ``fundamental_class(X, law)`` [X](z^e) = prod g_(n_t - e_t)
* ``duality_to_hom``            alpha -> alpha cap [X]
* ``duality_to_coh``            a -> K_X / a  (diagonal class slant a)

The projective bundle decomposition is realised by ``psi``/``pbt_section``
for projections that drop a single factor.
"""

from fractions import Fraction

from .algebra import CoeffRing, RingElem
from .errors import RingMismatchError, SpaceMismatchError
from .fgl import FGL
from .gysin import diagonal_kernel_class, pushforward_coh
from .spaces import CohClass, Morphism, Projection, Space, basis

__all__ = [
    "HomClass",
    "pair",
    "pushforward_hom",
    "shriek_hom",
    "diamond_hom",
    "cap",
    "cross_hom",
    "slant_l",
    "slant_r",
    "fundamental_class",
    "duality_to_hom",
    "duality_to_coh",
    "psi",
    "pbt_section",
]


class HomClass:
    """A homology class: values on the monomial basis, sparsely stored."""

    __slots__ = ("space", "ring", "values")

    def __init__(self, space: Space, ring: CoeffRing, values: dict):
        clean = {}
        bounds = space.factors
        for expo, c in values.items():
            if len(expo) != len(bounds) or any(e < 0 or e > n for e, n in zip(expo, bounds)):
                raise SpaceMismatchError("basis tuple %r does not fit %s" % (expo, space))
            if c:
                clean[expo] = c
        self.space = space
        self.ring = ring
        self.values = clean

    @staticmethod
    def zero(space: Space, ring: CoeffRing) -> "HomClass":
        return HomClass(space, ring, {})

    @staticmethod
    def delta(space: Space, ring: CoeffRing, expo: tuple[int, ...], coeff=None) -> "HomClass":
        """The functional dual to one basis monomial."""
        if coeff is None:
            coeff = ring.one()
        elif isinstance(coeff, (int, Fraction)):
            coeff = ring.from_coeff(coeff)
        return HomClass(space, ring, {tuple(expo): coeff})

    @staticmethod
    def point_class(ring: CoeffRing) -> "HomClass":
        return HomClass.delta(Space.point(), ring, ())

    def _check(self, other: "HomClass"):
        if self.space != other.space:
            raise SpaceMismatchError("homology classes on different spaces")
        if self.ring != other.ring:
            raise RingMismatchError("homology classes over different rings")

    def value(self, expo) -> RingElem:
        return self.values.get(tuple(expo), self.ring.zero())

    def __bool__(self) -> bool:
        return bool(self.values)

    def __eq__(self, other):
        if not isinstance(other, HomClass):
            return NotImplemented
        return (self.space, self.ring) == (other.space, other.ring) and self.values == other.values

    __hash__ = None

    def __add__(self, other: "HomClass") -> "HomClass":
        self._check(other)
        values = dict(self.values)
        for e, c in other.values.items():
            prev = values.get(e)
            values[e] = c if prev is None else prev + c
        return HomClass(self.space, self.ring, values)

    def __neg__(self) -> "HomClass":
        return HomClass(self.space, self.ring, {e: -c for e, c in self.values.items()})

    def __sub__(self, other: "HomClass") -> "HomClass":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            if isinstance(other, RingElem) and other.ring != self.ring:
                raise RingMismatchError("scaling by an element of a different ring")
            return HomClass(self.space, self.ring, {e: c * other for e, c in self.values.items()})
        return NotImplemented

    __rmul__ = __mul__

    def _sorted_values(self):
        return sorted(self.values.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))

    def render(self) -> str:
        if not self.values:
            return "0"
        parts = []
        for e, c in self._sorted_values():
            parts.append("z^(%s): %s" % (",".join(str(x) for x in e), c.render()))
        return "; ".join(parts)

    def __repr__(self) -> str:
        return "HomClass(%s; %s)" % (self.space.render(), self.render())

    def to_json_obj(self) -> dict:
        return {
            "values": [
                {"zeta": list(e), "coeff": c.render()} for e, c in self._sorted_values()
            ]
        }

    @staticmethod
    def from_json_obj(space: Space, ring: CoeffRing, obj) -> "HomClass":
        from .errors import ParseError

        if not isinstance(obj, dict) or "values" not in obj or not isinstance(obj["values"], list):
            raise ParseError('homology literal must be an object {"values": [...]}')
        values: dict = {}
        for item in obj["values"]:
            if not isinstance(item, dict) or "zeta" not in item or "coeff" not in item:
                raise ParseError('each value must be {"zeta": [...], "coeff": "..."}')
            expo = tuple(item["zeta"])
            if len(expo) != space.nfactors or any(not isinstance(e, int) or e < 0 for e in expo):
                raise ParseError("basis tuple %r does not fit %s" % (item["zeta"], space))
            c = ring.parse(str(item["coeff"]))
            prev = values.get(expo)
            values[expo] = c if prev is None else prev + c
        return HomClass(space, ring, values)


# -- pairings and products -------------------------------------------------


def pair(alpha: CohClass, a: HomClass) -> RingElem:
    """The evaluation <alpha, a> in the coefficient ring."""
    if alpha.space != a.space:
        raise SpaceMismatchError("pairing needs both classes on the same space")
    if alpha.ring != a.ring:
        raise RingMismatchError("pairing needs both classes over the same ring")
    out = alpha.ring.zero()
    for e, c in alpha.terms.items():
        v = a.values.get(e)
        if v is not None:
            out = out + c * v
    return out


def pushforward_hom(f: Morphism, a: HomClass) -> HomClass:
    """(f_* a)(beta) = a(f^*(beta))."""
    if a.space != f.source:
        raise SpaceMismatchError("direct image along %s needs a class on %s" % (f.render(), f.source))
    values = {}
    for e in basis(f.target):
        v = pair(f.pullback(CohClass.monomial(f.target, a.ring, e)), a)
        if v:
            values[e] = v
    return HomClass(f.target, a.ring, values)


def shriek_hom(f: Morphism, a: HomClass, law: FGL) -> HomClass:
    """(f^! a)(beta) = a(f_!(beta)); raises homological degree like f_!."""
    if a.space != f.target:
        raise SpaceMismatchError("transfer along %s needs a class on %s" % (f.render(), f.target))
    values = {}
    for e in basis(f.source):
        v = pair(pushforward_coh(f, CohClass.monomial(f.source, a.ring, e), law), a)
        if v:
            values[e] = v
    return HomClass(f.source, a.ring, values)


def diamond_hom(f: Morphism, law: FGL):
    """The operator f_* f^! on homology classes over f.target."""

    def op(a: HomClass) -> HomClass:
        return pushforward_hom(f, shriek_hom(f, a, law))

    return op


def cap(alpha: CohClass, a: HomClass) -> HomClass:
    """(alpha cap a)(beta) = a(beta * alpha)."""
    if alpha.space != a.space:
        raise SpaceMismatchError("cap needs both classes on the same space")
    if alpha.ring != a.ring:
        raise RingMismatchError("cap needs both classes over the same ring")
    values = {}
    bounds = alpha.space.factors
    for e, c in alpha.terms.items():
        for v_expo, v in a.values.items():
            # beta * alpha picks up a at v_expo iff beta = v_expo - e
            b_expo = tuple(x - y for x, y in zip(v_expo, e))
            if any(b < 0 for b in b_expo):
                continue
            contrib = c * v
            prev = values.get(b_expo)
            values[b_expo] = contrib if prev is None else prev + contrib
    return HomClass(alpha.space, alpha.ring, values)


def cross_hom(a: HomClass, b: HomClass) -> HomClass:
    """External product: (a x b)(e + f) = a(e) * b(f)."""
    if a.ring != b.ring:
        raise RingMismatchError("classes over different coefficient rings")
    space = a.space.times(b.space)
    values = {}
    for e, c in a.values.items():
        for f, d in b.values.items():
            values[e + f] = c * d
    return HomClass(space, a.ring, values)


def slant_l(alpha: CohClass, a: HomClass) -> CohClass:
    """alpha / a for alpha on X x Y and a on Y, landing on X.

    Writing alpha = sum alpha_(u,v) z^u z^v over the split exponents,
    (alpha / a) = sum alpha_(u,v) a(z^v) z^u.
    """
    ky = a.space.nfactors
    kx = alpha.space.nfactors - ky
    if kx < 0 or alpha.space.factors[kx:] != a.space.factors:
        raise SpaceMismatchError(
            "slant needs %s to end with %s" % (alpha.space, a.space)
        )
    x_space = Space(alpha.space.factors[:kx])
    terms = {}
    for e, c in alpha.terms.items():
        v = a.values.get(e[kx:])
        if v is None:
            continue
        u = e[:kx]
        contrib = c * v
        prev = terms.get(u)
        terms[u] = contrib if prev is None else prev + contrib
    return CohClass(x_space, alpha.ring, terms)


def slant_r(alpha: CohClass, b: HomClass) -> HomClass:
    """alpha \\ b for alpha on X and b on X x Y, landing on Y:
    (alpha \\ b)(z^f) = sum_e alpha_e b(z^e z^f)."""
    kx = alpha.space.nfactors
    ky = b.space.nfactors - kx
    if ky < 0 or b.space.factors[:kx] != alpha.space.factors:
        raise SpaceMismatchError(
            "slant needs %s to start with %s" % (b.space, alpha.space)
        )
    y_space = Space(b.space.factors[kx:])
    values = {}
    for be, v in b.values.items():
        e, f = be[:kx], be[kx:]
        c = alpha.terms.get(e)
        if c is None:
            continue
        contrib = c * v
        prev = values.get(f)
        values[f] = contrib if prev is None else prev + contrib
    return HomClass(y_space, alpha.ring, values)


# -- fundamental classes and duality ----------------------------------------


def fundamental_class(space: Space, law: FGL) -> HomClass:
    """[X](z^e) = prod_t g_(n_t - e_t); equals the transfer of the point
    class along the projection to the point."""
    values = {}
    for e in basis(space):
        v = law.ring.one()
        for n, x in zip(space.factors, e):
            v = v * law.pn_class(n - x)
            if not v:
                break
        if v:
            values[e] = v
    return HomClass(space, law.ring, values)


def duality_to_hom(alpha: CohClass, law: FGL) -> HomClass:
    """alpha cap [X]."""
    return cap(alpha, fundamental_class(alpha.space, law))


def duality_to_coh(a: HomClass, law: FGL) -> CohClass:
    """K_X / a, the inverse direction of Poincare duality."""
    return slant_l(diagonal_kernel_class(a.space, law), a)


# -- projective bundle decomposition ----------------------------------------


def _single_drop(p: Morphism) -> int:
    if not isinstance(p, Projection) or len(p.dropped) != 1:
        raise ValueError("expected a projection dropping exactly one factor")
    return p.dropped[0]


def psi(i: int, p: Projection, a: HomClass) -> HomClass:
    """The i-th bundle component map: psi_i = p_*(z_t^i cap -)."""
    t = _single_drop(p)
    n = p.source.factors[t]
    if not 0 <= i <= n:
        raise ValueError("component index %d out of range 0..%d" % (i, n))
    if a.space != p.source:
        raise SpaceMismatchError("psi needs a homology class on %s" % p.source)
    expo = tuple(i if s == t else 0 for s in range(p.source.nfactors))
    return pushforward_hom(p, cap(CohClass.monomial(p.source, a.ring, expo), a))


def pbt_section(components: list[HomClass], p: Projection) -> HomClass:
    """The unique b with psi_i(p, b) = components[i] for all i.

    In the dual model psi_i reads off the slice of b at z_t^i, so the
    section is direct reassembly; the round trips both ways are checked
    by the verification suite.
    """
    t = _single_drop(p)
    n = p.source.factors[t]
    if len(components) != n + 1:
        raise ValueError("need exactly %d components" % (n + 1))
    ring = None
    values: dict = {}
    for i, comp in enumerate(components):
        if comp.space != p.target:
            raise SpaceMismatchError("component %d lives on %s, expected %s" % (i, comp.space, p.target))
        ring = comp.ring if ring is None else ring
        if comp.ring != ring:
            raise RingMismatchError("components over different rings")
        for e, v in comp.values.items():
            expo = e[:t] + (i,) + e[t:]
            values[expo] = v
    return HomClass(p.source, ring, values)
