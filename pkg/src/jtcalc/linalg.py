"""
Dense exact matrices over the coefficient domains of `fields`.

Three storage layouts sit behind one facade:

* finite-field matrices are numpy int arrays of shape (rows, cols, n),
  carrying GF(p^n) coordinates, with vectorized mod-p kernels;
* matrices over a truncated curve ring with finite-field base are stored
  as a sparse map  t-exponent -> coefficient matrix  (the hot layout for
  one-parameter subgroups);
* everything else (polynomial rings, function fields, nested truncations)
  is a plain tuple-of-tuples of ring elements.

Rank and kernels are only defined over fields; over GF(q)(x) elimination
clears denominators and runs fraction-free (Bareiss).
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import DomainMismatchError, JTCalcError
from .fields import (
    FFElement,
    FiniteField,
    RationalFunctionField,
    TruncatedCurveRing,
    TruncElement,
    _up_divmod,
    _up_mul,
    _up_trim,
    require_field,
)

_FF = "ff"
_TPOLY = "tpoly"
_OBJ = "obj"


def _freeze(arr):
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


# -- vectorized GF(p^n) kernels ---------------------------------------------


def _ff_reduce(field, conv):
    """Reduce the trailing convolution axis (length 2n-1) modulo the field modulus."""
    n = field.n
    red = field.reduction
    out = conv[..., :n].copy()
    for k in range(n, conv.shape[-1]):
        ck = conv[..., k]
        if not ck.any():
            continue
        row = red[k]
        for j in range(n):
            if row[j]:
                out[..., j] += ck * int(row[j])
    return out % field.p


def _ff_mmul(field, A, B):
    n = field.n
    if n == 1:
        return (A[..., 0] @ B[..., 0])[..., None] % field.p
    conv = np.zeros(A.shape[:1] + B.shape[1:2] + (2 * n - 1,), dtype=np.int64)
    for a in range(n):
        Aa = A[..., a]
        if not Aa.any():
            continue
        for b in range(n):
            Bb = B[..., b]
            if Bb.any():
                conv[..., a + b] += Aa @ Bb
    return _ff_reduce(field, conv)


def _np_kron(Aa, Bb):
    ra, ca = Aa.shape
    rb, cb = Bb.shape
    return (Aa[:, None, :, None] * Bb[None, :, None, :]).reshape(ra * rb, ca * cb)


def _ff_kron(field, A, B):
    n = field.n
    ra, ca = A.shape[0], A.shape[1]
    rb, cb = B.shape[0], B.shape[1]
    if n == 1:
        return (_np_kron(A[..., 0], B[..., 0]) % field.p)[..., None]
    conv = np.zeros((ra * rb, ca * cb, 2 * n - 1), dtype=np.int64)
    for a in range(n):
        Aa = A[..., a]
        if not Aa.any():
            continue
        for b in range(n):
            Bb = B[..., b]
            if Bb.any():
                conv[..., a + b] += _np_kron(Aa, Bb)
    return _ff_reduce(field, conv)


def _ff_scalar(field, A, s):
    n = field.n
    conv = np.zeros(A.shape[:-1] + (2 * n - 1,), dtype=np.int64)
    for a in range(n):
        Aa = A[..., a]
        if not Aa.any():
            continue
        for b in range(n):
            if s[b]:
                conv[..., a + b] += Aa * s[b]
    return _ff_reduce(field, conv)


def _ff_frob(field, A, e):
    if field.n == 1 or e == 0:
        return A % field.p
    F = field.frobenius_matrix
    Fe = np.eye(field.n, dtype=np.int64)
    for _ in range(e % field.n):
        Fe = (F @ Fe) % field.p
    return np.tensordot(A, Fe.T, axes=([A.ndim - 1], [0])) % field.p


def _ff_rref(field, M, full=False):
    """Row-reduce in place (on a copy); returns (matrix, pivot column list)."""
    p, n = field.p, field.n
    M = M.copy()
    rows, cols = M.shape[0], M.shape[1]
    pivots = []
    pr = 0
    for col in range(cols):
        if pr >= rows:
            break
        nzmask = M[pr:, col].any(axis=1)
        if not nzmask.any():
            continue
        piv = pr + int(np.argmax(nzmask))
        if piv != pr:
            M[[pr, piv]] = M[[piv, pr]]
        if not (n == 1 and M[pr, col, 0] == 1):
            pivot = FFElement(field, tuple(int(v) for v in M[pr, col]))
            inv = np.array(pivot.inverse().coeffs, dtype=np.int64)
            M[pr] = _ff_scalar(field, M[pr][None, :, :], inv)[0]
        cand = np.concatenate([np.arange(0, pr), np.arange(pr + 1, rows)]) if full else np.arange(pr + 1, rows)
        if cand.size:
            mask = M[cand, col].any(axis=1)
            sel = cand[mask]
            if sel.size:
                factors = M[sel, col, :]
                pivrow = M[pr]
                conv = np.zeros((len(sel), cols, 2 * n - 1), dtype=np.int64)
                for a in range(n):
                    fa = factors[:, a]
                    if not fa.any():
                        continue
                    for b in range(n):
                        rb = pivrow[:, b]
                        if rb.any():
                            conv[:, :, a + b] += np.outer(fa, rb)
                M[sel] = (M[sel] - _ff_reduce(field, conv)) % p
        pivots.append(col)
        pr += 1
    return M, pivots


# -- generic object-entry kernels -------------------------------------------


def _obj_mmul(domain, A, B):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = domain.zero()
            for k in range(inner):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _obj_rref(domain, A, full=False):
    M = [list(r) for r in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots = []
    pr = 0
    for col in range(cols):
        if pr >= rows:
            break
        piv = -1
        for r in range(pr, rows):
            if not M[r][col].is_zero():
                piv = r
                break
        if piv == -1:
            continue
        M[pr], M[piv] = M[piv], M[pr]
        inv = M[pr][col].inverse()
        M[pr] = [v * inv for v in M[pr]]
        targets = range(rows) if full else range(pr + 1, rows)
        for r in targets:
            if r == pr or M[r][col].is_zero():
                continue
            f = M[r][col]
            M[r] = [a - f * b for a, b in zip(M[r], M[pr])]
        pivots.append(col)
        pr += 1
    return tuple(tuple(r) for r in M), pivots


def _det_subset_dp(domain, entries, rows, cols):
    """Determinant of the square submatrix entries[rows][cols] by subset DP.

    Choosing column c for the next row contributes one inversion per
    already-used column of larger index.
    """
    k = len(rows)
    if k == 0:
        return domain.one()
    states = {0: domain.one()}
    for ri in rows:
        nxt = {}
        for used, val in states.items():
            if val.is_zero():
                continue
            for jpos, cj in enumerate(cols):
                bit = 1 << jpos
                if used & bit:
                    continue
                e = entries[ri][cj]
                if e.is_zero():
                    continue
                inversions = bin(used >> (jpos + 1)).count("1")
                term = val * e
                if inversions % 2:
                    term = -term
                key = used | bit
                acc = nxt.get(key)
                nxt[key] = term if acc is None else acc + term
        states = nxt
        if not states:
            return domain.zero()
    return states.get((1 << k) - 1, domain.zero())


# -- fraction-free rank over univariate polynomials --------------------------


def _bareiss_rank_upoly(field, M):
    """Rank of a matrix of dense univariate coefficient tuples over GF(q)."""
    M = [list(r) for r in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    one = (field.one(),)
    prev = one
    rank = 0
    pr = 0
    for col in range(cols):
        if pr >= rows:
            break
        piv = -1
        for r in range(pr, rows):
            if _up_trim(M[r][col]):
                piv = r
                break
        if piv == -1:
            continue
        M[pr], M[piv] = M[piv], M[pr]
        pivot = M[pr][col]
        for r in range(pr + 1, rows):
            for j in range(cols - 1, col - 1, -1):
                num = tuple(
                    a - b
                    for a, b in itertools.zip_longest(
                        _up_mul(M[r][j], pivot, field),
                        _up_mul(M[r][col], M[pr][j], field),
                        fillvalue=field.zero(),
                    )
                )
                quot, rem = _up_divmod(num, prev, field)
                if _up_trim(rem):
                    raise JTCalcError("fraction-free elimination lost exactness")
                M[r][j] = quot
            M[r][col] = ()
        prev = pivot
        rank += 1
        pr += 1
    return rank


class ExactMatrix:
    """Immutable dense matrix over a fixed coefficient domain."""

    __slots__ = ("domain", "rows", "cols", "_backend", "_data")

    def __init__(self, domain, rows, cols, backend, data):
        self.domain = domain
        self.rows = rows
        self.cols = cols
        self._backend = backend
        self._data = data

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_rows(domain, rows):
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        if any(len(r) != nc for r in rows):
            raise JTCalcError("matrix rows must have equal length")
        if isinstance(domain, FiniteField):
            data = np.zeros((nr, nc, domain.n), dtype=np.int64)
            for i, row in enumerate(rows):
                for j, v in enumerate(row):
                    if isinstance(v, int):
                        v = domain.from_int(v)
                    elif v.field != domain:
                        v = domain.embed(v)
                    data[i, j] = v.coeffs
            return ExactMatrix(domain, nr, nc, _FF, _freeze(data))
        if isinstance(domain, TruncatedCurveRing) and isinstance(domain.base, FiniteField):
            coeffs = {}
            base = domain.base
            for i, row in enumerate(rows):
                for j, v in enumerate(row):
                    if isinstance(v, int):
                        v = domain.constant(v)
                    if isinstance(v, FFElement):
                        v = domain.constant(v)
                    for e, c in v.coeffs.items():
                        mat = coeffs.get(e)
                        if mat is None:
                            mat = np.zeros((nr, nc, base.n), dtype=np.int64)
                            coeffs[e] = mat
                        mat[i, j] = base.embed(c).coeffs
            return ExactMatrix(
                domain, nr, nc, _TPOLY, {e: _freeze(m) for e, m in coeffs.items() if m.any()}
            )
        norm = []
        for row in rows:
            out = []
            for v in row:
                if isinstance(v, int):
                    v = domain.embed_int(v)
                out.append(v)
            norm.append(tuple(out))
        return ExactMatrix(domain, nr, nc, _OBJ, tuple(norm))

    @staticmethod
    def from_int_rows(field, rows):
        return ExactMatrix.from_rows(field, rows)

    @staticmethod
    def zeros(domain, rows, cols):
        if isinstance(domain, FiniteField):
            return ExactMatrix(domain, rows, cols, _FF, _freeze(np.zeros((rows, cols, domain.n))))
        if isinstance(domain, TruncatedCurveRing) and isinstance(domain.base, FiniteField):
            return ExactMatrix(domain, rows, cols, _TPOLY, {})
        z = domain.zero()
        return ExactMatrix(domain, rows, cols, _OBJ, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(domain, n):
        if isinstance(domain, FiniteField):
            data = np.zeros((n, n, domain.n), dtype=np.int64)
            one = domain.one().coeffs
            for i in range(n):
                data[i, i] = one
            return ExactMatrix(domain, n, n, _FF, _freeze(data))
        if isinstance(domain, TruncatedCurveRing) and isinstance(domain.base, FiniteField):
            return ExactMatrix(domain, n, n, _TPOLY, {0: ExactMatrix.identity(domain.base, n)._data})
        one, zero = domain.one(), domain.zero()
        return ExactMatrix(
            domain, n, n, _OBJ,
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)),
        )

    @staticmethod
    def from_tcoeffs(ring, rows, cols, coeff_map):
        """Build a truncated-ring matrix from {t-exponent: base-field ExactMatrix}."""
        data = {}
        for e, m in coeff_map.items():
            if e >= ring.q or not m._data.any():
                continue
            data[e] = m._data
        return ExactMatrix(ring, rows, cols, _TPOLY, data)

    # -- entry access ----------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def entry(self, i, j):
        if self._backend == _FF:
            return FFElement(self.domain, tuple(int(v) for v in self._data[i, j]))
        if self._backend == _TPOLY:
            base = self.domain.base
            return TruncElement(
                self.domain,
                {e: FFElement(base, tuple(int(v) for v in m[i, j])) for e, m in self._data.items()},
            )
        return self._data[i][j]

    def to_rows(self):
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def _obj_rows(self):
        if self._backend == _OBJ:
            return self._data
        return tuple(tuple(self.entry(i, j) for j in range(self.cols)) for i in range(self.rows))

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, ExactMatrix) or other.domain != self.domain:
            raise DomainMismatchError("matrix domains differ")
        return other

    def __add__(self, other):
        other = self._check(other)
        if self.shape != other.shape:
            raise JTCalcError("shape mismatch in matrix addition")
        if self._backend == _FF and other._backend == _FF:
            return ExactMatrix(self.domain, self.rows, self.cols, _FF,
                               _freeze((self._data + other._data) % self.domain.p))
        if self._backend == _TPOLY and other._backend == _TPOLY:
            out = dict(self._data)
            p = self.domain.base.p
            for e, m in other._data.items():
                cur = out.get(e)
                nm = m if cur is None else (cur + m) % p
                if nm.any():
                    out[e] = _freeze(nm)
                elif e in out:
                    del out[e]
            return ExactMatrix(self.domain, self.rows, self.cols, _TPOLY, out)
        a, b = self._obj_rows(), other._obj_rows()
        return ExactMatrix(self.domain, self.rows, self.cols, _OBJ,
                           tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)))

    def __neg__(self):
        if self._backend == _FF:
            return ExactMatrix(self.domain, self.rows, self.cols, _FF,
                               _freeze((-self._data) % self.domain.p))
        if self._backend == _TPOLY:
            p = self.domain.base.p
            return ExactMatrix(self.domain, self.rows, self.cols, _TPOLY,
                               {e: _freeze((-m) % p) for e, m in self._data.items()})
        return ExactMatrix(self.domain, self.rows, self.cols, _OBJ,
                           tuple(tuple(-x for x in r) for r in self._obj_rows()))

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        other = self._check(other)
        if self.cols != other.rows:
            raise JTCalcError("shape mismatch in matrix product")
        if self._backend == _FF and other._backend == _FF:
            return ExactMatrix(self.domain, self.rows, other.cols, _FF,
                               _freeze(_ff_mmul(self.domain, self._data, other._data)))
        if self._backend == _TPOLY and other._backend == _TPOLY:
            ring = self.domain
            base = ring.base
            acc = {}
            for e1, m1 in self._data.items():
                for e2, m2 in other._data.items():
                    e = e1 + e2
                    if e >= ring.q:
                        continue
                    prod = _ff_mmul(base, m1, m2)
                    cur = acc.get(e)
                    acc[e] = prod if cur is None else (cur + prod) % base.p
            return ExactMatrix(ring, self.rows, other.cols, _TPOLY,
                               {e: _freeze(m) for e, m in acc.items() if m.any()})
        return ExactMatrix(self.domain, self.rows, other.cols, _OBJ,
                           _obj_mmul(self.domain, self._obj_rows(), other._obj_rows()))

    def scalar_mul(self, s):
        if self._backend == _FF:
            s = self.domain.embed(s) if not isinstance(s, int) else self.domain.from_int(s)
            arr = _ff_scalar(self.domain, self._data, np.array(s.coeffs, dtype=np.int64))
            return ExactMatrix(self.domain, self.rows, self.cols, _FF, _freeze(arr))
        if self._backend == _TPOLY:
            ring = self.domain
            base = ring.base
            if isinstance(s, int):
                s = ring.constant(s)
            if isinstance(s, FFElement):
                s = ring.constant(s)
            acc = {}
            for e1, m in self._data.items():
                for e2, c in s.coeffs.items():
                    e = e1 + e2
                    if e >= ring.q:
                        continue
                    prod = _ff_scalar(base, m, np.array(base.embed(c).coeffs, dtype=np.int64))
                    cur = acc.get(e)
                    acc[e] = prod if cur is None else (cur + prod) % base.p
            return ExactMatrix(ring, self.rows, self.cols, _TPOLY,
                               {e: _freeze(m) for e, m in acc.items() if m.any()})
        if isinstance(s, int):
            s = self.domain.embed_int(s)
        return ExactMatrix(self.domain, self.rows, self.cols, _OBJ,
                           tuple(tuple(x * s for x in r) for r in self._obj_rows()))

    def kron(self, other):
        other = self._check(other)
        if self._backend == _FF and other._backend == _FF:
            return ExactMatrix(self.domain, self.rows * other.rows, self.cols * other.cols, _FF,
                               _freeze(_ff_kron(self.domain, self._data, other._data)))
        if self._backend == _TPOLY and other._backend == _TPOLY:
            ring = self.domain
            base = ring.base
            acc = {}
            for e1, m1 in self._data.items():
                for e2, m2 in other._data.items():
                    e = e1 + e2
                    if e >= ring.q:
                        continue
                    prod = _ff_kron(base, m1, m2)
                    cur = acc.get(e)
                    acc[e] = prod if cur is None else (cur + prod) % base.p
            return ExactMatrix(ring, self.rows * other.rows, self.cols * other.cols, _TPOLY,
                               {e: _freeze(m) for e, m in acc.items() if m.any()})
        a, b = self._obj_rows(), other._obj_rows()
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                row = []
                for j in range(self.cols):
                    for l in range(other.cols):
                        row.append(a[i][j] * b[k][l])
                out.append(tuple(row))
        return ExactMatrix(self.domain, self.rows * other.rows, self.cols * other.cols, _OBJ, tuple(out))

    def transpose(self):
        if self._backend == _FF:
            return ExactMatrix(self.domain, self.cols, self.rows, _FF,
                               _freeze(self._data.transpose(1, 0, 2)))
        if self._backend == _TPOLY:
            return ExactMatrix(self.domain, self.cols, self.rows, _TPOLY,
                               {e: _freeze(m.transpose(1, 0, 2)) for e, m in self._data.items()})
        rows = self._obj_rows()
        return ExactMatrix(self.domain, self.cols, self.rows, _OBJ,
                           tuple(tuple(rows[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def pow(self, k):
        if self.rows != self.cols:
            raise JTCalcError("matrix power needs a square matrix")
        result = ExactMatrix.identity(self.domain, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return result

    def frobenius(self, e=1):
        """Entry-wise x -> x^(p^e); a ring homomorphism in characteristic p."""
        if e == 0:
            return self
        if self._backend == _FF:
            return ExactMatrix(self.domain, self.rows, self.cols, _FF,
                               _freeze(_ff_frob(self.domain, self._data, e)))
        if self._backend == _TPOLY:
            ring = self.domain
            scale = ring.base.p**e
            out = {}
            for exp, m in self._data.items():
                ne = exp * scale
                if ne < ring.q:
                    out[ne] = _freeze(_ff_frob(ring.base, m, e))
            return ExactMatrix(ring, self.rows, self.cols, _TPOLY, out)
        return ExactMatrix(self.domain, self.rows, self.cols, _OBJ,
                           tuple(tuple(x.frobenius(e) for x in r) for r in self._obj_rows()))

    # -- truncated-ring specials ------------------------------------------------

    def coefficient(self, e):
        """Coefficient of t^e, as a matrix over the base domain."""
        if not isinstance(self.domain, TruncatedCurveRing):
            raise JTCalcError("coefficient extraction needs a truncated curve ring")
        base = self.domain.base
        if self._backend == _TPOLY:
            m = self._data.get(e)
            if m is None:
                return ExactMatrix.zeros(base, self.rows, self.cols)
            return ExactMatrix(base, self.rows, self.cols, _FF, m)
        rows = [[self._data[i][j].coeff(e) for j in range(self.cols)] for i in range(self.rows)]
        return ExactMatrix.from_rows(base, rows)

    def subs_power(self, k):
        """Substitute t -> t^k."""
        if not isinstance(self.domain, TruncatedCurveRing):
            raise JTCalcError("substitution needs a truncated curve ring")
        if self._backend == _TPOLY:
            out = {}
            for e, m in self._data.items():
                ne = e * k
                if ne < self.domain.q:
                    out[ne] = m
            return ExactMatrix(self.domain, self.rows, self.cols, _TPOLY, out)
        return ExactMatrix(self.domain, self.rows, self.cols, _OBJ,
                           tuple(tuple(x.subs_power(k) for x in r) for r in self._obj_rows()))

    # -- predicates ---------------------------------------------------------------

    def is_zero(self):
        if self._backend == _FF:
            return not self._data.any()
        if self._backend == _TPOLY:
            return not self._data
        return all(x.is_zero() for r in self._obj_rows() for x in r)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if other.domain != self.domain or other.shape != self.shape:
            return False
        if self._backend == _FF and other._backend == _FF:
            return bool((self._data == other._data).all())
        if self._backend == _TPOLY and other._backend == _TPOLY:
            keys = set(self._data) | set(other._data)
            for e in keys:
                a, b = self._data.get(e), other._data.get(e)
                if a is None or b is None:
                    return False
                if not (a == b).all():
                    return False
            return True
        a, b = self._obj_rows(), other._obj_rows()
        return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))

    # -- rank / kernel / determinants ----------------------------------------------

    def rank(self):
        """Exact rank; requires the coefficient domain to be a field."""
        if isinstance(self.domain, FiniteField):
            _, pivots = _ff_rref(self.domain, self._data)
            return len(pivots)
        if isinstance(self.domain, RationalFunctionField):
            return _bareiss_rank_upoly(self.domain.field, self._cleared_rows())
        require_field(self.domain)
        _, pivots = _obj_rref(self.domain, self._obj_rows())
        return len(pivots)

    def _cleared_rows(self):
        """Clear denominators row-wise; rows of dense coefficient tuples."""
        field = self.domain.field
        out = []
        for i in range(self.rows):
            entries = [self.entry(i, j) for j in range(self.cols)]
            row_den = (field.one(),)
            for v in entries:
                row_den = _up_mul(row_den, v.den, field)
            row = []
            for v in entries:
                quot, rem = _up_divmod(row_den, v.den, field)
                if _up_trim(rem):
                    raise JTCalcError("denominator clearing failed")
                row.append(_up_mul(v.num, quot, field))
            out.append(row)
        return out

    def kernel_basis(self):
        """Exact basis of the right kernel (list of column vectors as element lists)."""
        if isinstance(self.domain, FiniteField):
            R, pivots = _ff_rref(self.domain, self._data, full=True)
            field = self.domain
            free = [c for c in range(self.cols) if c not in pivots]
            basis = []
            for f in free:
                vec = [field.zero()] * self.cols
                vec[f] = field.one()
                for pr, pc in enumerate(pivots):
                    vec[pc] = -FFElement(field, tuple(int(v) for v in R[pr, f]))
                basis.append(vec)
            return basis
        require_field(self.domain)
        R, pivots = _obj_rref(self.domain, self._obj_rows(), full=True)
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            vec = [self.domain.zero()] * self.cols
            vec[f] = self.domain.one()
            for pr, pc in enumerate(pivots):
                vec[pc] = -R[pr][f]
            basis.append(vec)
        return basis

    def det(self):
        if self.rows != self.cols:
            raise JTCalcError("determinant needs a square matrix")
        return _det_subset_dp(self.domain, self._obj_rows(),
                              tuple(range(self.rows)), tuple(range(self.cols)))

    def minors(self, size):
        """All size x size minors, row-major over (row subset, column subset) pairs."""
        if not 1 <= size <= min(self.rows, self.cols):
            raise JTCalcError(f"minor size {size} out of range")
        rows = self._obj_rows()
        out = []
        for rsel in itertools.combinations(range(self.rows), size):
            for csel in itertools.combinations(range(self.cols), size):
                out.append(_det_subset_dp(self.domain, rows, rsel, csel))
        return out

    def inverse(self):
        if self.rows != self.cols:
            raise JTCalcError("inverse needs a square matrix")
        n = self.rows
        if isinstance(self.domain, FiniteField):
            aug = np.concatenate([self._data, ExactMatrix.identity(self.domain, n)._data], axis=1)
            R, pivots = _ff_rref(self.domain, aug, full=True)
            if len(pivots) < n or pivots[:n] != list(range(n)):
                raise JTCalcError("matrix is singular")
            return ExactMatrix(self.domain, n, n, _FF, _freeze(R[:, n:, :]))
        require_field(self.domain)
        ident = ExactMatrix.identity(self.domain, n)._obj_rows()
        aug = tuple(ra + rb for ra, rb in zip(self._obj_rows(), ident))
        R, pivots = _obj_rref(self.domain, aug, full=True)
        if len(pivots) < n or pivots[:n] != list(range(n)):
            raise JTCalcError("matrix is singular")
        return ExactMatrix(self.domain, n, n, _OBJ, tuple(r[n:] for r in R))

    # -- structure -------------------------------------------------------------------

    def map_entries(self, new_domain, f):
        rows = [[f(self.entry(i, j)) for j in range(self.cols)] for i in range(self.rows)]
        return ExactMatrix.from_rows(new_domain, rows)

    def embed_into(self, bigger_field):
        """Re-express a finite-field matrix over an extension of its prime field."""
        if not isinstance(self.domain, FiniteField) or not isinstance(bigger_field, FiniteField):
            raise JTCalcError("embed_into works on finite-field matrices")
        if self.domain == bigger_field:
            return self
        if self.domain.n != 1 or self.domain.p != bigger_field.p:
            raise DomainMismatchError(f"no embedding of {self.domain} into {bigger_field}")
        data = np.zeros((self.rows, self.cols, bigger_field.n), dtype=np.int64)
        data[:, :, 0] = self._data[:, :, 0]
        return ExactMatrix(bigger_field, self.rows, self.cols, _FF, _freeze(data))

    def serialize(self):
        """Row-major nested list of entry strings."""
        return [[str(self.entry(i, j)) for j in range(self.cols)] for i in range(self.rows)]

    def __str__(self):
        return "[" + "; ".join(", ".join(str(self.entry(i, j)) for j in range(self.cols))
                               for i in range(self.rows)) + "]"

    __repr__ = __str__


def block_diag(a, b):
    if a.domain != b.domain:
        raise DomainMismatchError("block_diag needs matching domains")
    dom = a.domain
    rows = []
    for i in range(a.rows):
        rows.append([a.entry(i, j) for j in range(a.cols)] + [dom.zero()] * b.cols)
    for i in range(b.rows):
        rows.append([dom.zero()] * a.cols + [b.entry(i, j) for j in range(b.cols)])
    return ExactMatrix.from_rows(dom, rows)


def rank(m):
    return m.rank()


def kernel_basis(m):
    return m.kernel_basis()


def minors(m, size):
    return m.minors(size)
