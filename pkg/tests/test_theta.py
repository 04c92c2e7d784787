import random

import pytest

from jtcalc.errors import JTCalcError, NotNilpotentError
from jtcalc.fields import GF, PolyRing, TruncatedCurveRing
from jtcalc.jordan import JordanType, jt_of_nilpotent, jt_tensor
from jtcalc.linalg import ExactMatrix
from jtcalc.modules import Explicit, Std, Sym, Tensor, Twist, texp_matrix
from jtcalc.theta import (
    CommutingTuple,
    conjugate_tuple,
    ga_curve_element,
    homotopy_theta,
    jt_at_point,
    jt_exp_infinite,
    jt_power_at_point,
    one_param,
    scale_tuple,
    theta_exp,
    theta_full,
    theta_multi_ga,
)

F3, F5 = GF(3), GF(5)
E3 = ExactMatrix.from_rows(F3, [[0, 1], [0, 0]])
E5 = ExactMatrix.from_rows(F5, [[0, 1], [0, 0]])
J = JordanType.from_blocks


def J3(field):
    return ExactMatrix.from_rows(field, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])


def test_trunc_exp_examples():
    ring5 = TruncatedCurveRing(F5, 1)
    z = ExactMatrix.zeros(F5, 2, 2)
    pair = texp_matrix(z, ring5)
    assert pair.g == ExactMatrix.identity(ring5, 2)
    pair = texp_matrix(E5, ring5)
    t = ring5.t()
    assert pair.g == ExactMatrix.from_rows(ring5, [[ring5.one(), t], [ring5.zero(), ring5.one()]])
    assert pair.g_inv == ExactMatrix.from_rows(ring5, [[ring5.one(), -t], [ring5.zero(), ring5.one()]])
    ring3 = TruncatedCurveRing(F3, 1)
    j3 = J3(F3)
    pair3 = texp_matrix(j3, ring3)
    # I + t J3 + 2 t^2 J3^2 since 1/2 = 2 in GF(3)
    assert pair3.g.coefficient(2) == (j3 @ j3).scalar_mul(F3.from_int(2))
    with pytest.raises(NotNilpotentError):
        texp_matrix(ExactMatrix.identity(F3, 2), ring3)


def test_one_param_examples():
    z = ExactMatrix.zeros(F3, 2, 2)
    tup0 = CommutingTuple.gl([z, z])
    assert one_param(tup0).g == ExactMatrix.identity(TruncatedCurveRing(F3, 2), 2)
    tup1 = CommutingTuple.gl([E3])
    ring1 = TruncatedCurveRing(F3, 1)
    assert one_param(tup1).g == texp_matrix(E3, ring1).g
    tup2 = CommutingTuple.gl([z, E3])
    ring2 = TruncatedCurveRing(F3, 2)
    t = ring2.t()
    expected = ExactMatrix.from_rows(ring2, [[ring2.one(), t**3], [ring2.zero(), ring2.one()]])
    assert one_param(tup2).g == expected


def test_theta_full_examples():
    mod = Tensor(Sym(1, Std(2)), Twist(1, Sym(1, Std(2))))
    z = ExactMatrix.zeros(F3, 2, 2)
    assert theta_full(mod, CommutingTuple.gl([z, z])).matrix.is_zero()
    # r=1 equals the Lie-algebra action
    tup1 = CommutingTuple.gl([E3])
    i2 = ExactMatrix.identity(F3, 2)
    assert theta_full(Std(2), tup1).matrix == E3
    # at r=1 the twisted factor sees no t-coefficient; dp(E) acts on the first slot only
    got1 = theta_full(Tensor(Std(2), Twist(1, Std(2))), tup1).matrix
    assert got1 == E3.kron(i2)
    # r=2 worked operator: a1 (E ox 1) + a0^p (1 ox E)
    for a0v in range(3):
        for a1v in range(3):
            a0, a1 = F3.from_int(a0v), F3.from_int(a1v)
            tup = CommutingTuple.gl([E3.scalar_mul(a0), E3.scalar_mul(a1)])
            got = theta_full(mod, tup).matrix
            want = E3.kron(i2).scalar_mul(a1) + i2.kron(E3).scalar_mul(a0**3)
            assert got == want


def test_theta_exp_examples():
    # zero tuple gives the zero operator and type m[1]
    z = ExactMatrix.zeros(F3, 2, 2)
    mod = Tensor(Std(2), Twist(1, Std(2)))
    tup0 = CommutingTuple.gl([z, z])
    assert theta_exp(mod, tup0).matrix.is_zero()
    assert jt_at_point(mod, tup0, "exp") == J(3, [1, 1, 1, 1])
    # additive kernel: scalar tuple acts as sum a_{r-1-i}^{p^i} alpha_i
    j3 = J3(F3)
    alphas = (j3, j3 @ j3)
    emod = Explicit(alphas)
    rng = random.Random(0)
    for _ in range(20):
        scalars = [F3.random_element(rng) for _ in range(2)]
        tup = CommutingTuple.ga(scalars, F3)
        got = theta_exp(emod, tup).matrix
        want = alphas[0].scalar_mul(scalars[1]) + alphas[1].scalar_mul(scalars[0] ** 3)
        assert got == want
    # r = 2: exp and full agree on every input
    for _ in range(20):
        scalars = [F3.random_element(rng) for _ in range(2)]
        tup = CommutingTuple.ga(scalars, F3)
        assert theta_exp(emod, tup).matrix == theta_full(emod, tup).matrix


def test_theta_multi_ga_examples():
    j2 = ExactMatrix.from_rows(F3, [[0, 1], [0, 0]])
    i2 = ExactMatrix.identity(F3, 2)
    alpha0, alpha1 = j2.kron(i2), i2.kron(j2)
    emod = Explicit((alpha0, alpha1))
    zero = theta_multi_ga(emod, [F3.zero(), F3.zero()])
    assert zero.matrix.is_zero()
    unit = theta_multi_ga(emod, [F3.one(), F3.zero()])
    assert unit.matrix == alpha0
    both = theta_multi_ga(emod, [F3.one(), F3.one()])
    assert jt_of_nilpotent(both.matrix, 3) == J(3, [3, 1])
    # agrees with the module-tree evaluation route
    tup = CommutingTuple.multi_ga([F3.one(), F3.one()], F3)
    assert theta_full(emod, tup).matrix == both.matrix
    with pytest.raises(JTCalcError):
        theta_multi_ga(emod, [F3.one()])


def test_jt_at_point_sl2_regimes():
    # the three height-2 regimes for Sym(l0) ox Tw(Sym(l1))
    for p in (3, 5):
        field = GF(p)
        e = ExactMatrix.from_rows(field, [[0, 1], [0, 0]])
        for lam0 in range(p):
            for lam1 in range(p):
                mod = Tensor(Sym(lam0, Std(2)), Twist(1, Sym(lam1, Std(2))))
                m, n = lam0 + 1, lam1 + 1
                one, zero = field.one(), field.zero()
                jt_a = jt_at_point(mod, CommutingTuple.gl([e, ExactMatrix.zeros(field, 2, 2)]))
                assert jt_a == JordanType.of(p, tuple(m if i == n else 0 for i in range(1, p + 1)))
                jt_b = jt_at_point(mod, CommutingTuple.gl([ExactMatrix.zeros(field, 2, 2), e]))
                assert jt_b == JordanType.of(p, tuple(n if i == m else 0 for i in range(1, p + 1)))
                jt_c = jt_at_point(mod, CommutingTuple.gl([e, e]))
                assert jt_c == jt_tensor(J(p, [m]), J(p, [n]))


def test_jt_power_at_point():
    mod = Sym(4, Std(2))  # 5-dimensional, E acts as a single [5] block
    e = ExactMatrix.from_rows(F5, [[0, 1], [0, 0]])
    tup = CommutingTuple.gl([e])
    assert jt_at_point(mod, tup) == J(5, [5])
    assert jt_power_at_point(mod, tup, "full", 1) == J(5, [5])
    assert jt_power_at_point(mod, tup, "full", 2) == J(5, [3, 2])
    z = ExactMatrix.zeros(F5, 2, 2)
    assert jt_power_at_point(mod, CommutingTuple.gl([z]), "full", 3) == J(5, [1] * 5)
    with pytest.raises(JTCalcError):
        jt_power_at_point(mod, tup, "full", 5)


def test_scale_tuple_examples():
    tup = CommutingTuple.gl([E5, E5.scalar_mul(F5.from_int(3))])
    same = scale_tuple(tup, F5.one())
    assert same.mats[0] == tup.mats[0] and same.mats[1] == tup.mats[1]
    zero = scale_tuple(tup, F5.zero())
    assert zero.is_zero()
    two = scale_tuple(tup, F5.from_int(2))
    assert two.mats[0] == E5.scalar_mul(F5.from_int(2))
    # 2^5 = 32 = 2 mod 5
    assert two.mats[1] == E5.scalar_mul(F5.from_int(3) * F5.from_int(2))


def test_conjugate_tuple_examples():
    tup = CommutingTuple.gl([E3, E3])
    ident = ExactMatrix.identity(F3, 2)
    same = conjugate_tuple(tup, ident)
    assert same.mats[0] == E3
    diag = ExactMatrix.from_rows(F3, [[2, 0], [0, 1]])
    conj = conjugate_tuple(tup, diag)
    assert conj.mats[0] == E3.scalar_mul(F3.from_int(2))
    perm = ExactMatrix.from_rows(F3, [[0, 1], [1, 0]])
    mod = Tensor(Std(2), Twist(1, Std(2)))
    assert jt_at_point(mod, conjugate_tuple(tup, perm)) == jt_at_point(mod, tup)
    with pytest.raises(JTCalcError):
        conjugate_tuple(tup, ExactMatrix.zeros(F3, 2, 2))


def test_homotopy_examples():
    mod = Tensor(Std(2), Twist(1, Std(2)))
    tup = CommutingTuple.gl([E3, E3])
    h_exp = homotopy_theta(mod, tup, F3.one(), F3.zero())
    assert h_exp.matrix == theta_exp(mod, tup).matrix
    h_full = homotopy_theta(mod, tup, F3.zero(), F3.one())
    assert h_full.matrix == theta_full(mod, tup).matrix
    # r = 2: the family is (s + t) times one matrix
    h11 = homotopy_theta(mod, tup, F3.one(), F3.one())
    assert h11.matrix == theta_full(mod, tup).matrix.scalar_mul(F3.from_int(2))
    with pytest.raises(JTCalcError):
        homotopy_theta(mod, tup, F3.zero(), F3.zero())


def test_jt_exp_infinite_examples():
    mod = Tensor(Std(3), Twist(1, Std(3)))
    j3 = J3(F3)
    # single operator: height-1 type of the derived action
    single = jt_exp_infinite([j3], mod)
    tup1 = CommutingTuple.gl([j3])
    assert single == jt_at_point(mod, tup1, "exp")
    zeros = [ExactMatrix.zeros(F3, 3, 3)] * 2
    assert jt_exp_infinite(zeros, mod) == J(3, [1] * 9)
    # reversal convention at r = 2
    pair = [j3, j3 @ j3]
    rev = CommutingTuple.gl([j3 @ j3, j3])
    assert jt_exp_infinite(pair, mod) == jt_at_point(mod, rev, "exp")


def test_nilpotency_of_realized_operators():
    rng = random.Random(6)
    mod = Tensor(Std(2), Twist(1, Sym(2, Std(2))))
    for _ in range(20):
        a0, a1 = F5.random_element(rng), F5.random_element(rng)
        tup = CommutingTuple.gl([E5.scalar_mul(a0), E5.scalar_mul(a1)])
        for theta in (theta_full(mod, tup), theta_exp(mod, tup)):
            assert theta.matrix.pow(5).is_zero()


def test_twist_vanishing_height_slots():
    """Per-factor coefficients on a Frobenius twist of Std are nonzero exactly
    in the matching slot (the airtight case of the twist vanishing claim)."""
    r, p = 3, 3
    field = GF(p)
    b = J3(field)
    ring = TruncatedCurveRing(field, r)
    from jtcalc.modules import eval_unipotent

    for i in range(r):
        mod = Twist(i, Std(3)) if i else Std(3)
        for s in range(r):
            rho = eval_unipotent(mod, texp_matrix(b, ring))
            coeff = rho.g.coefficient(p ** (r - 1 - s))
            if i == r - 1 - s:
                assert not coeff.is_zero()
                assert coeff == b.frobenius(i)
            else:
                # contributions only at powers of p^i; p^(r-1-s) is not one of them
                if (p ** (r - 1 - s)) % (p**i) != 0 or (p ** (r - 1 - s)) // (p**i) >= p:
                    assert coeff.is_zero()


def test_symbolic_and_pointwise_theta_agree():
    ring = PolyRing(F3, ("a0", "a1"), (1, 3))
    zero = ring.zero()
    t0 = ExactMatrix.from_rows(ring, [[zero, ring.var("a0")], [zero, zero]])
    t1 = ExactMatrix.from_rows(ring, [[zero, ring.var("a1")], [zero, zero]])
    sym_tup = CommutingTuple.gl([t0, t1], validated=False)
    mod = Tensor(Std(2), Twist(1, Std(2)))
    sym_theta = theta_full(mod, sym_tup).matrix
    for a0v in range(3):
        for a1v in range(3):
            pt = [F3.from_int(a0v), F3.from_int(a1v)]
            num = ExactMatrix.from_rows(
                F3, [[sym_theta.entry(i, j).evaluate(pt) for j in range(4)] for i in range(4)]
            )
            tup = CommutingTuple.gl([E3.scalar_mul(pt[0]), E3.scalar_mul(pt[1])])
            assert num == theta_full(mod, tup).matrix


def test_dual_module_has_same_types():
    """A module and its dual share every local Jordan type."""
    from jtcalc.modules import Dual

    rng = random.Random(8)
    mod = Tensor(Sym(2, Std(2)), Twist(1, Std(2)))
    dual = Dual(mod)
    for _ in range(10):
        a0, a1 = F3.random_element(rng), F3.random_element(rng)
        tup = CommutingTuple.gl([E3.scalar_mul(a0), E3.scalar_mul(a1)])
        assert jt_at_point(dual, tup) == jt_at_point(mod, tup)
    # additive side
    j3 = J3(F3)
    emod = Explicit((j3, j3 @ j3))
    for _ in range(5):
        tup = CommutingTuple.ga([F3.random_element(rng) for _ in range(2)], F3)
        assert jt_at_point(Dual(emod), tup, "exp") == jt_at_point(emod, tup, "exp")


def test_ga_curve_element():
    tup = CommutingTuple.ga([F3.one(), F3.from_int(2)], F3)
    c = ga_curve_element(tup)
    assert c.coeff(1) == F3.one() and c.coeff(3) == F3.from_int(2)


def test_kind_mismatches_rejected():
    j2 = ExactMatrix.from_rows(F3, [[0, 1], [0, 0]])
    emod = Explicit((j2, ExactMatrix.zeros(F3, 2, 2)))
    gl_tup = CommutingTuple.gl([E3, E3])
    with pytest.raises(JTCalcError):
        theta_full(emod, gl_tup)
    ga_tup = CommutingTuple.ga([F3.one(), F3.one()], F3)
    with pytest.raises(JTCalcError):
        theta_full(Std(2), ga_tup)
    short = CommutingTuple.ga([F3.one()], F3)
    with pytest.raises(JTCalcError):
        theta_full(emod, short)
