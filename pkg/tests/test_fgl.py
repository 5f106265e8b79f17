from fractions import Fraction

import pytest
import sympy

from orient_duality.algebra import CoeffRing, RingElem, RingKind
from orient_duality.errors import (
    InternalConsistencyError,
    TruncationUnsoundError,
)
from orient_duality.fgl import (
    FGL,
    Series,
    additive_law,
    apply_law,
    check_axioms,
    law_for,
    multiplicative_law,
    universal_law,
    with_flipped_coefficient,
)
from orient_duality.spaces import CohClass, Space

N = 6


@pytest.fixture(scope="module")
def laws():
    return {
        RingKind.ADDITIVE: additive_law(N),
        RingKind.MULTIPLICATIVE: multiplicative_law(N),
        RingKind.UNIVERSAL: universal_law(N),
    }


# -- sympy conversion helpers ------------------------------------------------


def _to_sympy(elem: RingElem, syms):
    out = sympy.Integer(0)
    for expo, c in elem.terms.items():
        mono = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
        for s, e in zip(syms, expo):
            if e:
                mono *= s ** e
        out += mono
    return sympy.expand(out)


def _series_coeff(expr, x, d):
    return sympy.expand(expr).coeff(x, d)


# -- closed forms ------------------------------------------------------------


def test_additive_is_trivial(laws):
    law = laws[RingKind.ADDITIVE]
    assert law.coeffs == {}
    assert all(not c for c in law.log().coeffs[2:])
    for n in range(1, N):
        assert law.pn_class(n) == law.ring.zero()
    assert law.pn_class(0) == law.ring.one()


def test_multiplicative_log_against_sympy(laws):
    # the logarithm of x + y - beta*x*y is -log(1 - beta*x)/beta
    law = laws[RingKind.MULTIPLICATIVE]
    x, beta = sympy.symbols("x beta")
    closed = -sympy.log(1 - beta * x) / beta
    expansion = sympy.series(closed, x, 0, N + 1).removeO()
    for d in range(N + 1):
        got = _to_sympy(law.log()[d], [beta])
        assert sympy.simplify(got - _series_coeff(expansion, x, d)) == 0


def test_multiplicative_point_classes(laws):
    law = laws[RingKind.MULTIPLICATIVE]
    beta = law.ring.gen(0)
    for n in range(N):
        assert law.pn_class(n) == beta ** n


def test_universal_point_classes(laws):
    law = laws[RingKind.UNIVERSAL]
    for n in range(1, N):
        bn = law.ring.gen_named("b%d" % n)
        assert law.pn_class(n) == bn * (n + 1)


def _trunc(expr, gens, bound):
    # keep terms of total degree <= bound in gens; truncates stepwise to
    # keep sympy expansions small
    out = sympy.Integer(0)
    for term in sympy.Add.make_args(sympy.expand(expr)):
        pd = term.as_powers_dict()
        if sum(pd.get(g, 0) for g in gens) <= bound:
            out += term
    return out


def _apply_series(coeffs, arg, gens, bound):
    # sum(coeffs[d] * arg^d) with truncation after every multiplication
    out = sympy.Integer(0)
    power = sympy.Integer(1)
    for d in range(1, len(coeffs)):
        power = _trunc(power * arg, gens, bound)
        if coeffs[d]:
            out += coeffs[d] * power
    return sympy.expand(out)


def test_universal_law_against_sympy():
    # independent construction: revert log with sympy, expand F = exp(log+log)
    nsy = 5
    law = universal_law(nsy)
    x, y = sympy.symbols("x y")
    bs = sympy.symbols("b1:%d" % nsy)  # b1 .. b4
    log_c = [0, 1] + [bs[m - 1] for m in range(1, nsy)]

    exp_c = [sympy.Integer(0), sympy.Integer(1)]
    for d in range(2, nsy + 1):
        exp_c.append(sympy.Integer(0))
        err = _apply_series(log_c, _apply_series(exp_c, x, (x,), nsy), (x,), nsy).coeff(x, d)
        exp_c[d] = -err
    # sympy-side verification that exp really inverts log
    assert _apply_series(log_c, _apply_series(exp_c, x, (x,), nsy), (x,), nsy) == x

    u = _apply_series(log_c, x, (x, y), nsy) + _apply_series(log_c, y, (x, y), nsy)
    F = _apply_series(exp_c, u, (x, y), nsy)
    for (i, j), c in law.coeffs.items():
        assert sympy.expand(_to_sympy(c, bs) - F.coeff(x, i).coeff(y, j)) == 0
    # and nothing extra beyond the stored table
    assert F.coeff(x, 0) == y and F.coeff(y, 0) == x
    for i in range(1, nsy):
        for j in range(1, nsy - i + 1):
            if (i, j) not in law.coeffs:
                assert F.coeff(x, i).coeff(y, j) == 0


def test_universal_low_coefficients(laws):
    law = laws[RingKind.UNIVERSAL]
    ring = law.ring
    assert law.a(1, 1) == ring.parse("-2*b1")
    assert law.a(1, 2) == ring.parse("4*b1^2 - 3*b2")
    assert law.a(2, 1) == law.a(1, 2)


def test_multiplicative_m_series_against_sympy(laws):
    # [m](x) = (1 - (1 - beta*x)^m) / beta
    law = laws[RingKind.MULTIPLICATIVE]
    x, beta = sympy.symbols("x beta")
    for m in (2, 3, -1, -2):
        closed = (1 - (1 - beta * x) ** m) / beta
        expansion = sympy.series(closed, x, 0, N + 1).removeO()
        series = law.m_series(m)
        for d in range(N + 1):
            got = _to_sympy(series[d], [beta])
            assert sympy.simplify(got - _series_coeff(expansion, x, d)) == 0


def test_additive_m_series(laws):
    law = laws[RingKind.ADDITIVE]
    for m in (-3, -1, 0, 1, 4):
        s = law.m_series(m)
        assert s[1] == law.ring.from_coeff(m)
        assert all(not s[d] for d in range(2, N + 1))


def test_universal_inverse_is_exp_of_minus_log(laws):
    # log(iota(x)) = -log(x), so iota = exp . (-log)
    law = laws[RingKind.UNIVERSAL]
    minus_log = Series(law.ring, N, tuple(-c for c in law.log().coeffs))
    assert law.inverse() == law.exp().compose(minus_log)


def test_multiplicative_inverse_frozen(laws):
    law = laws[RingKind.MULTIPLICATIVE]
    beta = law.ring.gen(0)
    inv = law.inverse()
    for d in range(1, N + 1):
        assert inv[d] == -(beta ** (d - 1))


def test_m_series_additivity(laws):
    for law in laws.values():
        lhs = apply_law(law, law.m_series(2), law.m_series(3))
        assert lhs == law.m_series(5)
        assert apply_law(law, law.m_series(1), law.m_series(-1)) == law.m_series(0)


def test_eval_on_classes(laws):
    law = laws[RingKind.MULTIPLICATIVE]
    ring = law.ring
    sq = Space((1, 1))
    z1, z2 = CohClass.zeta(sq, ring, 0), CohClass.zeta(sq, ring, 1)
    beta = ring.gen(0)
    got = law.eval(z1, z2)
    assert got == z1 + z2 - (z1 * z2) * beta
    assert law.eval(CohClass.zero(sq, ring), z2) == z2


def test_eval_refuses_unsound_truncation():
    law = multiplicative_law(3)
    sp = Space((3,))
    z = CohClass.zeta(sp, law.ring, 0)
    with pytest.raises(TruncationUnsoundError):
        law.eval(z, z)


def test_pn_class_needs_truncation():
    law = multiplicative_law(4)
    law.pn_class(3)
    with pytest.raises(TruncationUnsoundError):
        law.pn_class(4)


def test_axioms_pass_for_builtins(laws):
    for law in laws.values():
        assert check_axioms(law) is None


def test_axioms_witness_asymmetric():
    ring = CoeffRing.multiplicative(4)
    beta = ring.gen(0)
    broken = FGL(ring, 4, {(1, 2): beta * beta})
    w = check_axioms(broken)
    assert w is not None and "symmetry" in w


def test_axioms_witness_degree():
    ring = CoeffRing.multiplicative(4)
    broken = FGL(ring, 4, {(1, 1): ring.one()})  # a11 must sit in degree -1
    w = check_axioms(broken)
    assert w is not None and "degree" in w


def test_axioms_witness_not_a_group_law():
    # symmetric, right degrees, but fails associativity / has no logarithm
    ring = CoeffRing.multiplicative(5)
    beta = ring.gen(0)
    broken = FGL(ring, 5, {(1, 1): -beta, (2, 2): beta ** 3})
    assert check_axioms(broken) is not None


def test_flip_asymmetric_is_rejected():
    law = universal_law(5)
    mut = with_flipped_coefficient(law, 1, 2, keep_log=False, keep_kernels=False)
    w = check_axioms(mut)
    assert w is not None and "symmetry" in w


def test_flip_symmetric_pair_gives_conjugate_theory():
    # flipping the single multiplicative coefficient and recomputing all
    # derived data lands on the image of the theory under beta -> -beta;
    # it passes the axioms, with conjugated point classes
    law = multiplicative_law(5)
    law.pn_class(3)
    mut = with_flipped_coefficient(law, 1, 1, keep_log=False, keep_kernels=False)
    assert check_axioms(mut) is None
    beta = law.ring.gen(0)
    assert mut.pn_class(1) == -beta
    assert mut.pn_class(2) == beta * beta


def test_flip_with_stale_log_keeps_old_point_classes():
    law = multiplicative_law(5)
    law.pn_class(2)
    mut = with_flipped_coefficient(law, 1, 1)  # keep caches: fault injection
    beta = law.ring.gen(0)
    assert mut.a(1, 1) == beta
    assert mut.pn_class(1) == beta  # stale, inconsistent with the table


def test_log_validation_rejects_tampered_table():
    # a table whose (1,2)/(2,1) slots are inconsistent with any logarithm
    ring = CoeffRing.universal(5)
    law = universal_law(5)
    coeffs = dict(law.coeffs)
    coeffs[(1, 2)] = -coeffs[(1, 2)]
    coeffs[(2, 1)] = -coeffs[(2, 1)]  # keep symmetry so log() is reached
    broken = FGL(ring, 5, coeffs)
    with pytest.raises(InternalConsistencyError):
        broken.log()


def test_law_for_dispatch():
    for kind in RingKind:
        law = law_for(kind, 5)
        assert law.kind is kind
        assert law.truncation == 5


# -- series utilities --------------------------------------------------------


def test_series_reversion_against_sympy():
    ring = CoeffRing.additive(8)
    s = Series.make(ring, 8, [0, 1, 1])  # x + x^2
    rev = s.reversion()
    x = sympy.symbols("x")
    expansion = sympy.series((-1 + sympy.sqrt(1 + 4 * x)) / 2, x, 0, 9).removeO()
    for d in range(9):
        c = expansion.coeff(x, d)
        assert rev[d] == ring.from_coeff(Fraction(int(sympy.numer(c)), int(sympy.denom(c))))


def test_series_reversion_needs_unit():
    ring = CoeffRing.additive(5)
    with pytest.raises(ValueError):
        Series.make(ring, 5, [0, 2]).reversion()
    with pytest.raises(ValueError):
        Series.make(ring, 5, [1, 1]).reversion()


def test_series_compose_identity():
    ring = CoeffRing.multiplicative(6)
    beta = ring.gen(0)
    s = Series.make(ring, 6, [ring.zero(), ring.one(), beta, beta * beta])
    x = Series.identity(ring, 6)
    assert s.compose(x) == s
    assert x.compose(s) == s


def test_eval_nilpotent_matches_direct_substitution():
    law = multiplicative_law(6)
    sp = Space((2,))
    z = CohClass.zeta(sp, law.ring, 0)
    two = law.m_series(2)
    got = two.eval_nilpotent(z)
    beta = law.ring.gen(0)
    assert got == z * 2 - (z * z) * beta
