"""Direct images (Gysin maps) along the morphism generators.

The four generator shapes push forward as follows, extended additively
over terms and linearly over the coefficient ring:

* ``LinearEmbed`` (P^m in factor t of P^n):   z_t^e  ->  z_t^(e + n - m);
  in particular 1 maps to z_t^(n-m), the class of the subspace.
* ``Projection`` dropping factor t:  z_t^e * rest  ->  g_(n_t - e) * rest,
  where g_n is the point class of P^n (``fgl.pn_class``); dropping several
  factors multiplies the corresponding g's.
* ``Diagonal`` at factor t: alpha -> pull(alpha) * K, where pull forgets
  the duplicated slot and K is the diagonal kernel of P^(n_t) placed in
  the two slots.
* ``Permutation``: pullback along the inverse reordering.

The diagonal kernel K = sum C_ij z1^i z2^j on P^n x P^n is determined by
the projection formula requirement

    p1_!(K * p2^*(alpha)) = alpha        for every alpha on P^n,

which pins C as the inverse of the pairing matrix M with M[k][l] =
g_(n-k-l) (anti-triangular with unit anti-diagonal, hence invertible over
any coefficient ring by back substitution, no division needed).  Kernels
are memoised on the law object: the cache is read-mostly and fills are
idempotent, so concurrent readers are safe.
"""

from dataclasses import dataclass

from .algebra import RingElem
from .errors import SpaceMismatchError, RingMismatchError
from .fgl import FGL
from .spaces import (
    CohClass,
    Composite,
    Diagonal,
    LinearEmbed,
    Morphism,
    Permutation,
    Projection,
    Space,
    cross_coh,
    transposition,
)


@dataclass(frozen=True)
class GysinKernel:
    """Diagonal data for one projective space P^n.

    ``M[k][l] = g_(n-k-l)`` is the pairing matrix, ``C`` its two-sided
    inverse, and ``K = sum C[i][j] z1^i z2^j`` the diagonal class on
    P^n x P^n.
    """

    n: int
    M: tuple
    C: tuple
    K: CohClass


def kernel(law: FGL, n: int) -> GysinKernel:
    """The diagonal kernel of P^n for the given law (memoised)."""
    cached = law._kernel_cache.get(n)
    if cached is not None:
        return cached
    ring = law.ring
    zero = ring.zero()
    g = [law.pn_class(d) for d in range(n + 1)]
    M = tuple(
        tuple(g[n - k - l] if k + l <= n else zero for l in range(n + 1))
        for k in range(n + 1)
    )
    # Solve M * C = I column by column; row k reads
    #   sum_{j <= n-k} g_(n-k-j) c_j = delta_{k,l},
    # and g_0 = 1 makes the j = n-k entry a unit.
    C_cols = []
    for l in range(n + 1):
        col = [zero] * (n + 1)
        for k in range(n, -1, -1):
            acc = ring.one() if k == l else ring.zero()
            for j in range(n - k):
                if col[j]:
                    acc = acc - g[n - k - j] * col[j]
            col[n - k] = acc
        C_cols.append(col)
    C = tuple(tuple(C_cols[l][i] for l in range(n + 1)) for i in range(n + 1))
    square = Space((n, n))
    K = CohClass(square, ring, {(i, j): C[i][j] for i in range(n + 1) for j in range(n + 1)})
    kern = GysinKernel(n, M, C, K)
    law._kernel_cache[n] = kern
    return kern


def diag_coefficients(law: FGL, n: int) -> tuple:
    """The full (n+1) x (n+1) matrix C of diagonal coefficients.

    Rows and columns are indexed 0..n; the boundary row/column come out of
    the same inversion (C[0][l] = delta_{l,n}), so no special casing is
    needed downstream.
    """
    return kernel(law, n).C


def _check_pushforward_args(f: Morphism, alpha: CohClass, law: FGL):
    if alpha.space != f.source:
        raise SpaceMismatchError(
            "direct image along %s needs a class on %s, got one on %s"
            % (f.render(), f.source, alpha.space)
        )
    if alpha.ring != law.ring:
        raise RingMismatchError("class and law use different coefficient rings")


def pushforward_coh(f: Morphism, alpha: CohClass, law: FGL) -> CohClass:
    """Direct image f_!(alpha) on cohomology."""
    _check_pushforward_args(f, alpha, law)
    if isinstance(f, LinearEmbed):
        shift = f.target.factors[f.factor] - f.degree
        t = f.factor
        terms = {e[:t] + (e[t] + shift,) + e[t + 1 :]: c for e, c in alpha.terms.items()}
        return CohClass(f.target, alpha.ring, terms)
    if isinstance(f, Projection):
        dropped = f.dropped
        dims = f.source.factors
        terms: dict = {}
        for e, c in alpha.terms.items():
            for t in dropped:
                c = c * law.pn_class(dims[t] - e[t])
                if not c:
                    break
            if not c:
                continue
            expo = tuple(e[t] for t in f.keep)
            prev = terms.get(expo)
            terms[expo] = c if prev is None else prev + c
        return CohClass(f.target, alpha.ring, terms)
    if isinstance(f, Diagonal):
        t = f.factor
        kern = kernel(law, f.source.factors[t])
        target = f.target
        k = target.nfactors
        kclass = CohClass(
            target,
            alpha.ring,
            {
                tuple(i if p == t else (j if p == t + 1 else 0) for p in range(k)): c
                for (i, j), c in kern.K.terms.items()
            },
        )
        p1 = Projection(target, tuple(p for p in range(k) if p != t + 1))
        return p1.pullback(alpha) * kclass
    if isinstance(f, Permutation):
        return f.inverse().pullback(alpha)
    if isinstance(f, Composite):
        for part in reversed(f.parts):
            alpha = pushforward_coh(part, alpha, law)
        return alpha
    raise TypeError("unknown morphism shape %r" % type(f).__name__)


def diamond_coh(f: Morphism, law: FGL):
    """The operator f_! f^* on classes over f.target."""

    def op(alpha: CohClass) -> CohClass:
        return pushforward_coh(f, f.pullback(alpha), law)

    return op


def diagonal_kernel_class(space: Space, law: FGL) -> CohClass:
    """The diagonal class of a product space on space x space.

    Built as the external product of the per-factor kernels pulled back
    along the factor shuffle; agrees with pushing 1 along
    ``spaces.full_diagonal`` (the verification suite checks both)."""
    k = space.nfactors
    if k == 0:
        return CohClass.one(Space.point(), law.ring)
    blocks = None
    for n in space.factors:
        kn = kernel(law, n).K
        blocks = kn if blocks is None else cross_coh(blocks, kn)
    # blocks lives on (n1, n1, n2, n2, ...); the shuffle sends X x X there.
    double = space.times(space)
    sigma = []
    for t in range(k):
        sigma.append(t)
        sigma.append(k + t)
    shuffle = Permutation(double, tuple(sigma))
    return shuffle.pullback(blocks)


def kernel_transposed_invariant(space: Space, law: FGL) -> bool:
    """K is symmetric under swapping the two copies."""
    K = diagonal_kernel_class(space, law)
    return transposition(space).pullback(K) == K
