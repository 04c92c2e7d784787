"""
Pointwise realizations of the universal p-nilpotent operators.

A point is a commuting tuple: either r pairwise-commuting p-nilpotent N x N
matrices (matrix-group case, modules built from Std), r scalars (additive
curve of height r, modules are Explicit), or s scalars at height 1 (product
of additive lines).  The full operator reads off the t^(p^(r-1)) coefficient
of the module evaluated on the one-parameter group element

    g(t) = prod_s exp(t^(p^s) B_s),

and the exponential variant is the sum over s of the t^(p^(r-1-s))
coefficient of the module evaluated on exp(t B_s) alone.  At heights 1 and 2
the two coincide; from height 3 on they differ by higher product terms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainMismatchError, JTCalcError, NotNilpotentError
from .fields import FiniteField, TruncatedCurveRing, TruncElement
from .jordan import jt_of_nilpotent
from .linalg import ExactMatrix
from .modules import (
    Explicit,
    ModuleExpr,
    Std,
    UnipotentPair,
    eval_ga_point,
    eval_unipotent,
    texp_element,
    texp_matrix,
    validate_commuting_tuple,
)

KIND_GL = "gl"
KIND_GA = "ga"
KIND_MULTI_GA = "multi_ga"

# the truncated exponential of a p-nilpotent matrix, with its inverse
trunc_exp = texp_matrix


@dataclass(frozen=True)
class CommutingTuple:
    """A point of the height-r commuting nilpotent variety.

    kind "gl":        mats are N x N matrices, validated commuting p-nilpotent.
    kind "ga":        mats are 1 x 1 (scalars a_s); the additive restricted
                      structure is trivial, so no nilpotency is imposed.
    kind "multi_ga":  height-1 point of a product of s additive lines.
    """

    kind: str
    domain: object
    height: int
    size: int
    mats: tuple
    validated: bool = True

    def __post_init__(self):
        if len(self.mats) != self.height:
            raise JTCalcError("tuple length disagrees with height")
        if self.kind == KIND_GL and self.validated and isinstance(self.domain, FiniteField):
            report = validate_commuting_tuple(list(self.mats), self.domain.p)
            if report is not None:
                raise NotNilpotentError(report)

    @staticmethod
    def gl(mats, validated=True):
        mats = tuple(mats)
        return CommutingTuple(KIND_GL, mats[0].domain, len(mats), mats[0].rows, mats, validated)

    @staticmethod
    def _scalar_tuple(kind, scalars, domain):
        rows = []
        for a in scalars:
            if isinstance(a, int):
                a = domain.from_int(a) if isinstance(domain, FiniteField) else domain.embed_int(a)
            elif isinstance(domain, FiniteField):
                a = domain.embed(a)
            rows.append(ExactMatrix.from_rows(domain, [[a]]))
        return CommutingTuple(kind, domain, len(rows), 1, tuple(rows))

    @staticmethod
    def ga(scalars, field):
        return CommutingTuple._scalar_tuple(KIND_GA, scalars, field)

    @staticmethod
    def multi_ga(scalars, field):
        return CommutingTuple._scalar_tuple(KIND_MULTI_GA, scalars, field)

    @property
    def p(self):
        return self.domain.p

    def scalars(self):
        return [self.mats[s].entry(0, 0) for s in range(self.height)]

    def is_zero(self):
        return all(m.is_zero() for m in self.mats)

    def serialize(self):
        return [m.serialize() for m in self.mats]


def scale_tuple(tup, alpha):
    """Weighted scaling: B_s goes to alpha^(p^s) * B_s."""
    scaled = []
    factor = alpha
    for m in tup.mats:
        scaled.append(m.scalar_mul(factor))
        factor = factor**tup.p
    return CommutingTuple(tup.kind, tup.domain, tup.height, tup.size, tuple(scaled), tup.validated)


def conjugate_tuple(tup, g):
    """Conjugate every matrix of a gl-kind tuple by an invertible g."""
    if tup.kind != KIND_GL:
        raise JTCalcError("conjugation applies to matrix tuples")
    ginv = g.inverse()
    return CommutingTuple(
        tup.kind, tup.domain, tup.height, tup.size,
        tuple(g @ m @ ginv for m in tup.mats), tup.validated,
    )


@dataclass(frozen=True)
class ThetaMatrix:
    """A realized universal operator: p-nilpotent over the point's domain."""

    module: ModuleExpr
    matrix: ExactMatrix
    variant: str
    point: CommutingTuple
    nilpotency_checked: bool = True


def _trunc_ring(tup):
    # multi_ga points live on a product of height-1 lines: one curve parameter
    # with t^p = 0, regardless of how many lines there are.
    r_eff = 1 if tup.kind == KIND_MULTI_GA else tup.height
    return TruncatedCurveRing(tup.domain, r_eff)


def _has_std(e):
    return any(isinstance(leaf, Std) for leaf in e.leaves())


def _explicit_leaves(e):
    return [leaf for leaf in e.leaves() if isinstance(leaf, Explicit)]


def _check_compat(e, tup):
    expl = _explicit_leaves(e)
    if tup.kind == KIND_GL:
        if expl:
            raise JTCalcError("Explicit modules pair with additive points, not matrix tuples")
        return
    if _has_std(e):
        raise JTCalcError("Std leaves pair with matrix tuples, not additive points")
    for leaf in expl:
        if leaf.field.p != tup.p:
            raise DomainMismatchError("module characteristic differs from tuple field")
        if leaf.height != tup.height:
            raise JTCalcError(
                f"Explicit module of height {leaf.height} used with a {tup.height}-parameter point"
            )


def _embedded_explicit(leaf, field):
    if not isinstance(field, FiniteField) or leaf.field == field:
        return leaf.matrices
    return tuple(m.embed_into(field) for m in leaf.matrices)


def one_param(tup):
    """The one-parameter group element  prod_s exp(t^(p^s) B_s)  with inverse."""
    if tup.kind != KIND_GL:
        raise JTCalcError("one_param needs a matrix tuple")
    ring = _trunc_ring(tup)
    pair = None
    for s, b in enumerate(tup.mats):
        factor = texp_matrix(b, ring)
        twisted = UnipotentPair(factor.g.subs_power(tup.p**s),
                                factor.g_inv.subs_power(tup.p**s), checked=False)
        pair = twisted if pair is None else pair * twisted
    return pair


def ga_curve_element(tup):
    """The additive one-parameter point  c(t) = sum_s a_s t^(p^s)."""
    ring = _trunc_ring(tup)
    coeffs = {}
    for s, a in enumerate(tup.scalars()):
        if not a.is_zero():
            coeffs[tup.p**s] = a
    return TruncElement(ring, coeffs)


def _rho_full(e, tup):
    """Module evaluated on the full one-parameter group element."""
    ring = _trunc_ring(tup)
    if tup.kind == KIND_GL:
        return eval_unipotent(e, one_param(tup))
    if tup.kind == KIND_GA:
        c = ga_curve_element(tup)
        pairs = {leaf: eval_ga_point(_as_explicit(leaf, tup), c) for leaf in _explicit_leaves(e)}
        return eval_unipotent(e, None, pairs)
    # multi_ga: each additive line contributes exp(t a_i alpha_i) on every leaf
    t = ring.t()
    pairs = {}
    for leaf in _explicit_leaves(e):
        mats = _embedded_explicit(leaf, tup.domain)
        pair = None
        for a, alpha in zip(tup.scalars(), mats):
            factor = texp_element(t * a, alpha)
            pair = factor if pair is None else pair * factor
        pairs[leaf] = pair
    return eval_unipotent(e, None, pairs)


def _rho_factor(e, tup, s):
    """Module evaluated on exp(t B_s) alone (untwisted)."""
    ring = _trunc_ring(tup)
    if tup.kind == KIND_GL:
        return eval_unipotent(e, texp_matrix(tup.mats[s], ring))
    if tup.kind == KIND_GA:
        a = tup.scalars()[s]
        c = TruncElement(ring, {1: a})
        pairs = {leaf: eval_ga_point(_as_explicit(leaf, tup), c) for leaf in _explicit_leaves(e)}
        return eval_unipotent(e, None, pairs)
    raise JTCalcError("per-factor evaluation is undefined for multi_ga points")


def _as_explicit(leaf, tup):
    """Re-express the leaf over the point's field when that is an extension.

    Over non-field point domains (symbolic charts, curves) the action
    matrices stay over their own prime field; truncated exponentials embed
    their scalars on the fly.
    """
    if not isinstance(tup.domain, FiniteField) or leaf.field == tup.domain:
        return leaf
    return Explicit(_embedded_explicit(leaf, tup.domain), label=leaf.label)


def _finish(e, tup, matrix, variant, check=None):
    check = isinstance(tup.domain, FiniteField) if check is None else check
    if check:
        if not matrix.pow(tup.p).is_zero():
            raise NotNilpotentError(f"{variant} operator is not p-nilpotent")
    return ThetaMatrix(e, matrix, variant, tup, nilpotency_checked=check)


def theta_full(e, tup):
    """Specialization of the universal operator at the point."""
    _check_compat(e, tup)
    if tup.kind == KIND_MULTI_GA:
        return _theta_multi(e, tup, "full")
    rho = _rho_full(e, tup)
    coeff = rho.g.coefficient(tup.p ** (tup.height - 1))
    return _finish(e, tup, coeff, "full")


def theta_exp(e, tup):
    """The linearized (exponential) operator: sum of per-factor coefficients."""
    _check_compat(e, tup)
    if tup.kind == KIND_MULTI_GA:
        return _theta_multi(e, tup, "exp")
    r = tup.height
    total = None
    for s in range(r):
        rho = _rho_factor(e, tup, s)
        coeff = rho.g.coefficient(tup.p ** (r - 1 - s))
        total = coeff if total is None else total + coeff
    return _finish(e, tup, total, "exp")


def _theta_multi(e, tup, variant):
    if isinstance(e, Explicit):
        # bare additive module: the t-coefficient is exactly sum_i a_i alpha_i
        mats = _embedded_explicit(e, tup.domain)
        if not isinstance(tup.domain, FiniteField):
            mats = tuple(m.map_entries(tup.domain, tup.domain.embed_scalar) for m in mats)
        total = None
        for a, alpha in zip(tup.scalars(), mats):
            term = alpha.scalar_mul(a)
            total = term if total is None else total + term
        return _finish(e, tup, total, variant)
    rho = _rho_full(e, tup)
    coeff = rho.g.coefficient(1)
    return _finish(e, tup, coeff, variant)


def theta_multi_ga(explicit, scalars):
    """Height-1 product-of-lines operator  sum_i a_i alpha_i  on an Explicit module."""
    if not isinstance(explicit, Explicit):
        raise JTCalcError("theta_multi_ga needs an Explicit module")
    if len(scalars) != explicit.height:
        raise JTCalcError("scalar count does not match the number of action matrices")
    field = scalars[0].field
    tup = CommutingTuple.multi_ga(scalars, field)
    mats = _embedded_explicit(explicit, field)
    total = None
    for a, alpha in zip(scalars, mats):
        term = alpha.scalar_mul(a)
        total = term if total is None else total + term
    return _finish(explicit, tup, total, "full")


def homotopy_theta(e, tup, s_val, t_val):
    """The projective-line family  s * theta_exp + t * theta_full  at the point."""
    if s_val.is_zero() and t_val.is_zero():
        raise JTCalcError("homotopy parameters (0, 0) are excluded")
    mat = theta_exp(e, tup).matrix.scalar_mul(s_val) + theta_full(e, tup).matrix.scalar_mul(t_val)
    theta = _finish(e, tup, mat, f"homotopy({s_val}:{t_val})")
    return theta


def jt_at_point(e, tup, variant="full"):
    """Local Jordan type of the selected operator at the point."""
    theta = theta_full(e, tup) if variant == "full" else theta_exp(e, tup)
    return jt_of_nilpotent(theta.matrix, tup.p)


def jt_power_at_point(e, tup, variant, j):
    """Jordan type of the j-th power of the selected operator."""
    if not 1 <= j < tup.p:
        raise JTCalcError(f"power {j} outside 1..p-1")
    theta = theta_full(e, tup) if variant == "full" else theta_exp(e, tup)
    return jt_of_nilpotent(theta.matrix.pow(j), tup.p)


def jt_exp_infinite(blist, e):
    """Stable exponential Jordan type of a finite commuting family.

    The family is reversed into a height-r point; appending zero matrices to
    the family does not change the result.
    """
    if not blist:
        raise JTCalcError("need at least one operator")
    reversed_mats = tuple(reversed(blist))
    first = blist[0]
    if first.rows == 1:
        tup = CommutingTuple.ga([m.entry(0, 0) for m in reversed_mats], first.domain)
    else:
        tup = CommutingTuple.gl(reversed_mats)
    return jt_at_point(e, tup, variant="exp")
