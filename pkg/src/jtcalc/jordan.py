"""
The value space of Jordan types: Young diagrams with at most p columns.

A Jordan type records how many blocks of each size 1..p a p-nilpotent
operator has.  The dominance order, sums, tensor products, perp, powers and
rank profiles all live here; every combinatorial formula has a brute-force
matrix oracle next to it in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceededError, JTCalcError, NotNilpotentError
from .fields import GF
from .linalg import ExactMatrix

TENSOR_DIM_CAP = 4096
DOWN_SET_BOX_CAP = 30


@dataclass(frozen=True)
class JordanType:
    """Block-size multiset <a_1, ..., a_p>; a_i blocks of size i."""

    p: int
    counts: tuple

    def __post_init__(self):
        if len(self.counts) != self.p:
            raise JTCalcError("counts must list block numbers for sizes 1..p")
        if any(c < 0 for c in self.counts):
            raise JTCalcError("block counts must be nonnegative")

    @staticmethod
    def of(p, counts):
        return JordanType(p, tuple(counts))

    @staticmethod
    def from_blocks(p, blocks):
        counts = [0] * p
        for b in blocks:
            if not 1 <= b <= p:
                raise JTCalcError(f"block size {b} outside 1..{p}")
            counts[b - 1] += 1
        return JordanType(p, tuple(counts))

    @property
    def dim(self):
        return sum(i * c for i, c in enumerate(self.counts, start=1))

    def blocks(self):
        """Block sizes in descending order."""
        out = []
        for size in range(self.p, 0, -1):
            out.extend([size] * self.counts[size - 1])
        return out

    def count(self, size):
        return self.counts[size - 1]

    def is_zero(self):
        return all(c == 0 for c in self.counts)

    def to_text(self):
        if self.is_zero():
            return "0"
        chunks = []
        for size in range(self.p, 0, -1):
            c = self.counts[size - 1]
            if c == 0:
                continue
            chunks.append(f"[{size}]" if c == 1 else f"{c}[{size}]")
        return "+".join(chunks)

    def to_json(self):
        return {"p": self.p, "counts": list(self.counts)}

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"JT({self.to_text()}, p={self.p})"


@dataclass(frozen=True)
class RankProfile:
    """Ranks r_s of the s-th operator powers, s = 1..p-1, on an m-dim module."""

    p: int
    m: int
    ranks: tuple

    def __post_init__(self):
        if len(self.ranks) != self.p - 1:
            raise JTCalcError("rank profile needs p-1 entries")

    def validate(self):
        seq = (self.m,) + self.ranks + (0, 0)
        for i in range(len(seq) - 1):
            if seq[i] < seq[i + 1]:
                raise JTCalcError(f"rank profile not monotone at position {i}")
        for i in range(1, self.p + 1):
            if seq[i - 1] - 2 * seq[i] + seq[i + 1] < 0:
                raise JTCalcError(f"rank profile not convex at s={i}")
        return self


def jt_from_rank_profile(rp):
    """Second differences of the rank sequence give the block counts."""
    rp.validate()
    seq = (rp.m,) + rp.ranks + (0, 0)
    counts = tuple(seq[i - 1] - 2 * seq[i] + seq[i + 1] for i in range(1, rp.p + 1))
    jt = JordanType(rp.p, counts)
    if jt.dim != rp.m:
        raise JTCalcError("rank profile dimension mismatch")
    return jt


def _power_ranks(n, p):
    """Ranks of n, n^2, ..., n^(p-1); once a power vanishes the rest are 0."""
    ranks = []
    power = n
    for _ in range(1, p):
        if power.is_zero():
            ranks.append(0)
            continue
        ranks.append(power.rank())
        power = power @ n
    if not power.is_zero():
        raise NotNilpotentError(f"matrix is not {p}-nilpotent")
    return tuple(ranks)


def jt_of_nilpotent(n, p):
    """Jordan type of a p-nilpotent matrix over a field, via ranks of its powers."""
    if n.rows != n.cols:
        raise JTCalcError("operator matrix must be square")
    return jt_from_rank_profile(RankProfile(p, n.rows, _power_ranks(n, p)))


def rank_profile_of(n, p):
    """Rank profile (r_1, ..., r_{p-1}) of a p-nilpotent matrix."""
    return RankProfile(p, n.rows, _power_ranks(n, p))


def jt_rank(a, s):
    """Rank of the s-th power of any matrix realization of a."""
    if not 1 <= s < a.p:
        raise JTCalcError(f"s={s} outside 1..p-1")
    return sum(a.counts[i - 1] * (i - s) for i in range(s + 1, a.p + 1))


def rank_profile(a):
    return RankProfile(a.p, a.dim, tuple(jt_rank(a, s) for s in range(1, a.p)))


def dominance_leq_checked(a, b):
    """(a <= b, dimensions comparable); incomparable dimensions compare False."""
    if a.p != b.p:
        raise JTCalcError("characteristic mismatch in dominance comparison")
    if a.dim != b.dim:
        return False, False
    for s in range(1, a.p):
        if jt_rank(a, s) > jt_rank(b, s):
            return False, True
    return True, True


def dominance_leq(a, b):
    leq, _ = dominance_leq_checked(a, b)
    return leq


def jt_sum(a, b):
    if a.p != b.p:
        raise JTCalcError("characteristic mismatch in sum")
    return JordanType(a.p, tuple(x + y for x, y in zip(a.counts, b.counts)))


def realize_nilpotent(a, field=None):
    """Block-diagonal matrix over GF(p) (or a given field) with Jordan type a."""
    field = field if field is not None else GF(a.p)
    m = a.dim
    mat = ExactMatrix.zeros(field, m, m)
    rows = [[field.zero() for _ in range(m)] for _ in range(m)]
    pos = 0
    for size in a.blocks():
        for i in range(size - 1):
            rows[pos + i][pos + i + 1] = field.one()
        pos += size
    return ExactMatrix.from_rows(field, rows) if m else mat


def jt_tensor(a, b):
    """Tensor pairing on the value space, by the brute-force matrix realization."""
    if a.p != b.p:
        raise JTCalcError("characteristic mismatch in tensor")
    if a.is_zero() or b.is_zero():
        return JordanType(a.p, (0,) * a.p)
    if a.dim * b.dim > TENSOR_DIM_CAP:
        raise CapExceededError(f"tensor dimension {a.dim * b.dim} exceeds cap {TENSOR_DIM_CAP}")
    field = GF(a.p)
    na, nb = realize_nilpotent(a, field), realize_nilpotent(b, field)
    ia, ib = ExactMatrix.identity(field, a.dim), ExactMatrix.identity(field, b.dim)
    op = na.kron(ib) + ia.kron(nb)
    return jt_of_nilpotent(op, a.p)


def jt_power(a, j):
    """Jordan type of N^j for any realization N of a, by the chain count."""
    if not 1 <= j < a.p:
        raise JTCalcError(f"power {j} outside 1..p-1")
    counts = [0] * a.p
    for i in range(1, a.p + 1):
        ai = a.counts[i - 1]
        if ai == 0:
            continue
        for c in range(j):
            if i > c:
                size = -((i - c) // -j)
                counts[size - 1] += ai
    return JordanType(a.p, tuple(counts))


def jt_perp(a):
    """a^perp: block count a_{p-i} becomes the number of blocks of size i."""
    counts = [0] * a.p
    for i in range(1, a.p):
        counts[i - 1] = a.counts[a.p - i - 1]
    return JordanType(a.p, tuple(counts))


@lru_cache(maxsize=None)
def _partitions_capped(m, cap):
    if m == 0:
        return ((),)
    out = []
    for first in range(min(m, cap), 0, -1):
        for rest in _partitions_capped(m - first, first):
            out.append((first,) + rest)
    return tuple(out)


def all_types_of_dim(p, m):
    """Every Jordan type of dimension m in characteristic p."""
    return [JordanType.from_blocks(p, blocks) for blocks in _partitions_capped(m, p)]


def down_set(a):
    """All types of the same dimension below a: the Alexandrov closure of {a}."""
    if a.dim > DOWN_SET_BOX_CAP:
        raise CapExceededError(f"{a.dim} boxes exceed the down-set cap {DOWN_SET_BOX_CAP}")
    return {b for b in all_types_of_dim(a.p, a.dim) if dominance_leq(b, a)}


def is_max_type(a):
    """True iff a = (m/p)[p], the type of an injective module of dimension m."""
    return all(c == 0 for c in a.counts[: a.p - 1])


def induced_quotient_jt(n, subspace_basis, p):
    """Jordan type of the operator induced on the quotient by an invariant subspace.

    subspace_basis: list of column vectors (lists of field elements).
    """
    field = n.domain
    m = n.rows
    if not subspace_basis:
        return jt_of_nilpotent(n, p)
    w_cols = [list(v) for v in subspace_basis]
    w = ExactMatrix.from_rows(field, [[w_cols[k][i] for k in range(len(w_cols))] for i in range(m)])
    k = w.rank()
    if k != len(w_cols):
        raise JTCalcError("subspace basis is linearly dependent")
    # invariance: rank [W | nW] must equal rank W
    nw = n @ w
    stacked = ExactMatrix.from_rows(
        field,
        [[w.entry(i, j) for j in range(k)] + [nw.entry(i, j) for j in range(k)] for i in range(m)],
    )
    if stacked.rank() != k:
        raise JTCalcError("subspace is not invariant under the operator")
    if k == m:
        return JordanType(p, (0,) * p)
    # complete W to a basis with standard vectors, greedily
    cols = [[w.entry(i, j) for i in range(m)] for j in range(k)]
    for idx in range(m):
        if len(cols) == m:
            break
        cand = [field.one() if i == idx else field.zero() for i in range(m)]
        trial = ExactMatrix.from_rows(field, [[col[i] for col in cols + [cand]] for i in range(m)])
        if trial.rank() == len(cols) + 1:
            cols.append(cand)
    pmat = ExactMatrix.from_rows(field, [[col[i] for col in cols] for i in range(m)])
    conj = pmat.inverse() @ n @ pmat
    quot_rows = [[conj.entry(i, j) for j in range(k, m)] for i in range(k, m)]
    return jt_of_nilpotent(ExactMatrix.from_rows(field, quot_rows), p)


def parse_jordan_type(text, p):
    """Parse the canonical 'c[s]+...' text form."""
    text = text.strip().replace(" ", "")
    if text in ("0", ""):
        return JordanType(p, (0,) * p)
    counts = [0] * p
    for chunk in text.split("+"):
        if "[" not in chunk or not chunk.endswith("]"):
            raise JTCalcError(f"bad Jordan type term {chunk!r}")
        head, size_s = chunk[:-1].split("[")
        mult = int(head) if head else 1
        size = int(size_s)
        if not 1 <= size <= p:
            raise JTCalcError(f"block size {size} outside 1..{p}")
        counts[size - 1] += mult
    return JordanType(p, tuple(counts))
