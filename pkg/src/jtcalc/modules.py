"""
Constructor trees for finite-dimensional representations and their evaluation
on unipotent group elements over arbitrary commutative coefficient rings.

A tree is built from Std(N), Trivial(d), Dual, Tensor, DirectSum, Sym, Ext,
Twist and Explicit leaves.  Explicit leaves carry the action matrices of an
additive-group module and are evaluated through truncated exponentials of a
nilpotent curve parameter rather than through a matrix group element.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import comb

from .errors import CapExceededError, JTCalcError, NotNilpotentError, ParseError
from .fields import FiniteField, TruncElement
from .linalg import ExactMatrix, block_diag

SYM_EXT_DIM_CAP = 2000


@dataclass(frozen=True)
class UnipotentPair:
    """A square matrix with its exact inverse; g * g_inv = 1 is checked.

    Internal evaluation may drop the inverse (g_inv None) when no Dual node
    will consume it; such pairs are never checked.
    """

    g: ExactMatrix
    g_inv: ExactMatrix
    checked: bool = True

    def __post_init__(self):
        if self.g.rows != self.g.cols:
            raise JTCalcError("unipotent pair needs a square matrix")
        if self.g_inv is not None and self.g.shape != self.g_inv.shape:
            raise JTCalcError("inverse shape differs")
        if self.checked:
            if self.g_inv is None:
                raise JTCalcError("cannot check a pair without its inverse")
            ident = ExactMatrix.identity(self.g.domain, self.g.rows)
            if self.g @ self.g_inv != ident:
                raise JTCalcError("g * g_inv is not the identity")

    @property
    def size(self):
        return self.g.rows

    @property
    def domain(self):
        return self.g.domain

    def __mul__(self, other):
        inv = None
        if self.g_inv is not None and other.g_inv is not None:
            inv = other.g_inv @ self.g_inv
        return UnipotentPair(self.g @ other.g, inv, checked=False)


# -- expression tree ----------------------------------------------------------


class ModuleExpr:
    def dim(self):
        raise NotImplementedError

    def leaves(self):
        yield self

    def __mul__(self, other):
        return Tensor(self, other)

    def __add__(self, other):
        return DirectSum(self, other)

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class Std(ModuleExpr):
    n: int

    def dim(self):
        return self.n

    def to_text(self):
        return f"Std({self.n})"


@dataclass(frozen=True)
class Trivial(ModuleExpr):
    d: int

    def dim(self):
        return self.d

    def to_text(self):
        return f"Trivial({self.d})"


@dataclass(frozen=True)
class Dual(ModuleExpr):
    inner: ModuleExpr

    def dim(self):
        return self.inner.dim()

    def leaves(self):
        yield from self.inner.leaves()

    def to_text(self):
        return f"Dual({self.inner.to_text()})"


@dataclass(frozen=True)
class Tensor(ModuleExpr):
    left: ModuleExpr
    right: ModuleExpr

    def dim(self):
        return self.left.dim() * self.right.dim()

    def leaves(self):
        yield from self.left.leaves()
        yield from self.right.leaves()

    def to_text(self):
        return f"{self.left.to_text()}*{self.right.to_text()}"


@dataclass(frozen=True)
class DirectSum(ModuleExpr):
    left: ModuleExpr
    right: ModuleExpr

    def dim(self):
        return self.left.dim() + self.right.dim()

    def leaves(self):
        yield from self.left.leaves()
        yield from self.right.leaves()

    def to_text(self):
        return f"{self.left.to_text()}+{self.right.to_text()}"


@dataclass(frozen=True)
class Sym(ModuleExpr):
    d: int
    inner: ModuleExpr

    def __post_init__(self):
        if self.d < 0:
            raise JTCalcError("Sym degree must be nonnegative")
        if self.dim() > SYM_EXT_DIM_CAP:
            raise CapExceededError(f"Sym dimension {self.dim()} exceeds cap {SYM_EXT_DIM_CAP}")

    def dim(self):
        n = self.inner.dim()
        return comb(n + self.d - 1, self.d) if self.d > 0 else 1

    def leaves(self):
        yield from self.inner.leaves()

    def to_text(self):
        return f"Sym({self.d},{self.inner.to_text()})"


@dataclass(frozen=True)
class Ext(ModuleExpr):
    d: int
    inner: ModuleExpr

    def __post_init__(self):
        if self.d < 0:
            raise JTCalcError("Ext degree must be nonnegative")
        if self.dim() > SYM_EXT_DIM_CAP:
            raise CapExceededError(f"Ext dimension {self.dim()} exceeds cap {SYM_EXT_DIM_CAP}")

    def dim(self):
        return comb(self.inner.dim(), self.d)

    def leaves(self):
        yield from self.inner.leaves()

    def to_text(self):
        return f"Ext({self.d},{self.inner.to_text()})"


@dataclass(frozen=True)
class Twist(ModuleExpr):
    i: int
    inner: ModuleExpr

    def __post_init__(self):
        if self.i < 0:
            raise JTCalcError("Twist exponent must be nonnegative")

    def dim(self):
        return self.inner.dim()

    def leaves(self):
        yield from self.inner.leaves()

    def to_text(self):
        return f"Tw({self.i},{self.inner.to_text()})"


@dataclass(frozen=True)
class Explicit(ModuleExpr):
    """Module given by the commuting p-nilpotent action matrices of u_0..u_{r-1}."""

    matrices: tuple
    label: str = ""

    def __post_init__(self):
        if not self.matrices:
            raise JTCalcError("Explicit module needs at least one matrix")
        report = validate_commuting_tuple(list(self.matrices), self.field.p)
        if report is not None:
            raise NotNilpotentError(f"Explicit module invalid: {report}")

    @property
    def height(self):
        return len(self.matrices)

    @property
    def field(self):
        return self.matrices[0].domain

    def dim(self):
        return self.matrices[0].rows

    def to_text(self):
        return f"Explicit({self.label or 'inline'})"

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


def dim(e):
    return e.dim()


def validate_commuting_tuple(matrices, p):
    """None when the tuple is pairwise commuting and p-nilpotent, else a report."""
    size = matrices[0].rows
    for idx, m in enumerate(matrices):
        if m.rows != m.cols or m.rows != size:
            return f"matrix {idx} is not square of size {size}"
        if not m.pow(p).is_zero():
            return f"matrix {idx} is not {p}-nilpotent"
    for i in range(len(matrices)):
        for j in range(i + 1, len(matrices)):
            if matrices[i] @ matrices[j] != matrices[j] @ matrices[i]:
                return f"matrices {i} and {j} do not commute"
    return None


# -- truncated exponentials ----------------------------------------------------


def texp_matrix(b, ring, check=None):
    """Truncated exponential  sum_{i<p} t^i B^i / i!  with its inverse (t -> -t).

    For symbolic entries (polynomial coefficients) the nilpotency and inverse
    checks are skipped: they hold only modulo the chart's constraint ideal
    and are re-verified at every evaluated point.
    """
    p = ring.p
    base = b.domain
    if check is None:
        check = isinstance(base, FiniteField)
    if check and not b.pow(p).is_zero():
        raise NotNilpotentError("truncated exponential needs a p-nilpotent matrix")
    coeffs_pos = {}
    coeffs_neg = {}
    power = ExactMatrix.identity(base, b.rows)
    fact = 1
    for i in range(p):
        if i:
            power = power @ b
            fact = fact * i
        term = power.scalar_mul(base.inv_int(fact))
        if term.is_zero():
            continue
        coeffs_pos[i] = term
        coeffs_neg[i] = term if i % 2 == 0 else -term
    g = _matrix_from_tcoeffs(ring, b.rows, coeffs_pos)
    ginv = _matrix_from_tcoeffs(ring, b.rows, coeffs_neg)
    return UnipotentPair(g, ginv, checked=check)


def _matrix_from_tcoeffs(ring, size, coeffs):
    if isinstance(ring.base, FiniteField):
        return ExactMatrix.from_tcoeffs(ring, size, size, coeffs)
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            row.append(TruncElement(ring, {e: m.entry(i, j) for e, m in coeffs.items()}))
        rows.append(row)
    return ExactMatrix.from_rows(ring, rows)


def texp_element(c, b):
    """Truncated exponential of c*B for a nilpotent ring element c.

    The inverse comes from c -> -c; the product identity is a theorem here
    (commuting powers of one matrix), exercised by the property suite rather
    than re-verified on every call.
    """
    ring = c.ring
    p = ring.p
    base = b.domain
    power = ExactMatrix.identity(base, b.rows)
    cpow = ring.one()
    fact = 1
    pos = ExactMatrix.zeros(ring, b.rows, b.rows)
    neg = pos
    for i in range(p):
        if i:
            power = power @ b
            cpow = cpow * c
            fact = fact * i
        inv = base.inv_int(fact)
        term_mat = power.scalar_mul(inv)
        if term_mat.is_zero() or cpow.is_zero():
            continue
        lifted = _lift_to_ring(term_mat, ring).scalar_mul(cpow)
        pos = pos + lifted
        neg = neg + (lifted if i % 2 == 0 else -lifted)
    return UnipotentPair(pos, neg, checked=False)


def _lift_to_ring(mat, ring):
    """View a base-field matrix as a constant matrix over the truncated ring."""
    if isinstance(ring.base, FiniteField):
        return ExactMatrix.from_tcoeffs(ring, mat.rows, mat.cols, {0: mat})
    return mat.map_entries(ring, lambda v: ring.embed_scalar(v))


def eval_ga_point(e, c):
    """Group element of an additive point c (c^(p^r) = 0) on an Explicit module."""
    if not isinstance(e, Explicit):
        raise JTCalcError("eval_ga_point needs an Explicit module")
    ring = c.ring
    r = e.height
    ctest = c
    for _ in range(r):
        ctest = ctest.frobenius(1)
    if not ctest.is_zero():
        raise NotNilpotentError(f"point is not p^{r}-nilpotent")
    pair = None
    cpj = c
    for j in range(r):
        factor = texp_element(cpj, e.matrices[j])
        pair = factor if pair is None else pair * factor
        cpj = cpj.frobenius(1)
    return pair


# -- functorial evaluation -------------------------------------------------------


def sym_basis(n, d):
    """Exponent vectors of total degree d in n variables, lexicographic descending."""
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(d, -1, -1):
        for rest in sym_basis(n - 1, d - first):
            out.append((first,) + rest)
    return out


def _poly_mul(ring, f, g):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            prod = c1 * c2
            cur = out.get(e)
            out[e] = prod if cur is None else cur + prod
    return {e: c for e, c in out.items() if not c.is_zero()}


def _poly_pow(ring, f, k):
    result = {(0,) * _poly_nvars(f): ring.one()}
    base = f
    while k:
        if k & 1:
            result = _poly_mul(ring, result, base)
        base = _poly_mul(ring, base, base)
        k >>= 1
    return result


def _poly_nvars(f):
    for e in f:
        return len(e)
    return 0


def _sym_matrix(a, d):
    """Induced action on the degree-d monomial basis (lex descending)."""
    ring = a.domain
    n = a.rows
    basis = sym_basis(n, d)
    index = {e: i for i, e in enumerate(basis)}
    one = {(0,) * n: ring.one()}
    images = []
    for v in range(n):
        form = {}
        for u in range(n):
            ent = a.entry(u, v)
            if not ent.is_zero():
                form[tuple(1 if i == u else 0 for i in range(n))] = ent
        images.append(form)
    # incremental powers of each image linear form, shared across columns
    powers = []
    for v in range(n):
        cur = [one]
        for _ in range(d):
            cur.append(_poly_mul(ring, cur[-1], images[v]))
        powers.append(cur)
    columns = []
    for mono in basis:
        acc = None
        for v, k in enumerate(mono):
            if k:
                acc = powers[v][k] if acc is None else _poly_mul(ring, acc, powers[v][k])
        if acc is None:
            acc = one
        col = [ring.zero()] * len(basis)
        for e, cval in acc.items():
            col[index[e]] = cval
        columns.append(col)
    rows = [[columns[j][i] for j in range(len(basis))] for i in range(len(basis))]
    return ExactMatrix.from_rows(ring, rows)


def _ext_matrix(a, d):
    """Induced action on the wedge basis (index subsets, lex ascending)."""
    ring = a.domain
    n = a.rows
    subsets = list(itertools.combinations(range(n), d))
    rows_data = a.to_rows()
    out = []
    for s in subsets:
        row = []
        for t in subsets:
            sub = [[rows_data[i][j] for j in t] for i in s]
            row.append(_det_obj(ring, sub))
        out.append(row)
    return ExactMatrix.from_rows(ring, out)


def _det_obj(ring, rows):
    k = len(rows)
    if k == 0:
        return ring.one()
    states = {0: ring.one()}
    for i in range(k):
        nxt = {}
        for used, val in states.items():
            for j in range(k):
                bit = 1 << j
                if used & bit:
                    continue
                e = rows[i][j]
                if e.is_zero():
                    continue
                inversions = bin(used >> (j + 1)).count("1")
                term = val * e
                if inversions % 2:
                    term = -term
                cur = nxt.get(used | bit)
                nxt[used | bit] = term if cur is None else cur + term
        states = {k2: v for k2, v in nxt.items() if not v.is_zero()}
        if not states:
            return ring.zero()
    return states.get((1 << k) - 1, ring.zero())


def _contains_dual(e):
    if isinstance(e, Dual):
        return True
    if isinstance(e, (Tensor, DirectSum)):
        return _contains_dual(e.left) or _contains_dual(e.right)
    if isinstance(e, (Sym, Ext, Twist)):
        return _contains_dual(e.inner)
    return False


def eval_unipotent(e, gp, explicit_pairs=None):
    """Evaluate the module functor on a unipotent pair.

    Std leaves receive gp itself; Explicit leaves are served from
    explicit_pairs (a mapping leaf -> UnipotentPair) when given, since
    additive-group modules act through eval_ga_point rather than a matrix
    group element.  Inverses are carried along only when a Dual node will
    consume them.
    """
    if gp is None and not explicit_pairs:
        raise JTCalcError("module evaluation needs a group element or additive point")
    ring = gp.domain if gp is not None else next(iter(explicit_pairs.values())).domain
    with_inv = _contains_dual(e)

    def inv(pair, f):
        if with_inv and pair.g_inv is not None:
            return f(pair.g_inv)
        return None

    def inv2(lt, rt, f):
        if with_inv and lt.g_inv is not None and rt.g_inv is not None:
            return f(lt.g_inv, rt.g_inv)
        return None

    def walk(node):
        if isinstance(node, Std):
            if gp is None:
                raise JTCalcError("Std leaf evaluated without a matrix group element")
            if node.n != gp.size:
                raise JTCalcError(f"Std({node.n}) does not match group element size {gp.size}")
            return gp
        if isinstance(node, Trivial):
            ident = ExactMatrix.identity(ring, node.d)
            return UnipotentPair(ident, ident, checked=False)
        if isinstance(node, Explicit):
            if explicit_pairs is None or node not in explicit_pairs:
                raise JTCalcError("Explicit leaf reached without an additive point")
            return explicit_pairs[node]
        if isinstance(node, Dual):
            inner = walk(node.inner)
            if inner.g_inv is None:
                raise JTCalcError("Dual needs the inverse of the group element")
            return UnipotentPair(inner.g_inv.transpose(), inner.g.transpose(), checked=False)
        if isinstance(node, Tensor):
            lt, rt = walk(node.left), walk(node.right)
            return UnipotentPair(lt.g.kron(rt.g), inv2(lt, rt, lambda a, b: a.kron(b)), checked=False)
        if isinstance(node, DirectSum):
            lt, rt = walk(node.left), walk(node.right)
            return UnipotentPair(
                block_diag(lt.g, rt.g), inv2(lt, rt, block_diag), checked=False
            )
        if isinstance(node, Sym):
            inner = walk(node.inner)
            return UnipotentPair(
                _sym_matrix(inner.g, node.d), inv(inner, lambda m: _sym_matrix(m, node.d)), checked=False
            )
        if isinstance(node, Ext):
            inner = walk(node.inner)
            return UnipotentPair(
                _ext_matrix(inner.g, node.d), inv(inner, lambda m: _ext_matrix(m, node.d)), checked=False
            )
        if isinstance(node, Twist):
            inner = walk(node.inner)
            return UnipotentPair(
                inner.g.frobenius(node.i), inv(inner, lambda m: m.frobenius(node.i)), checked=False
            )
        raise JTCalcError(f"unknown module node {node!r}")

    return walk(e)


# -- text grammar -----------------------------------------------------------------


_TOKEN_RE = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\d+|[(),*+=]|\S)")


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            break
        tok = m.group(1)
        tokens.append((tok, m.start(1)))
        pos = m.end()
    return tokens


class _ExprParser:
    def __init__(self, text, loader=None):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.loader = loader

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def next(self):
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of module expression", column=len(self.text))
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, want):
        tok, col = self.next()
        if tok != want:
            raise ParseError(f"expected {want!r}, found {tok!r}", column=col)
        return tok

    def parse(self):
        e = self.parse_sum()
        if self.pos != len(self.tokens):
            tok, col = self.tokens[self.pos]
            raise ParseError(f"trailing input {tok!r}", column=col)
        return e

    def parse_sum(self):
        e = self.parse_product()
        while self.peek() == "+":
            self.next()
            e = DirectSum(e, self.parse_product())
        return e

    def parse_product(self):
        e = self.parse_atom()
        while self.peek() == "*":
            self.next()
            e = Tensor(e, self.parse_atom())
        return e

    def parse_int(self):
        tok, col = self.next()
        if not tok.isdigit():
            raise ParseError(f"expected an integer, found {tok!r}", column=col)
        return int(tok)

    def parse_atom(self):
        tok, col = self.next()
        if tok == "(":
            e = self.parse_sum()
            self.expect(")")
            return e
        name = tok
        if name == "Std":
            self.expect("(")
            n = self.parse_int()
            self.expect(")")
            return Std(n)
        if name in ("Trivial", "Triv"):
            self.expect("(")
            d = self.parse_int()
            self.expect(")")
            return Trivial(d)
        if name == "Dual":
            self.expect("(")
            e = self.parse_sum()
            self.expect(")")
            return Dual(e)
        if name in ("Sym", "Ext"):
            self.expect("(")
            d = self.parse_int()
            self.expect(",")
            e = self.parse_sum()
            self.expect(")")
            return Sym(d, e) if name == "Sym" else Ext(d, e)
        if name in ("Tw", "Twist"):
            self.expect("(")
            i = self.parse_int()
            self.expect(",")
            e = self.parse_sum()
            self.expect(")")
            return Twist(i, e)
        if name == "Explicit":
            self.expect("(")
            key, kcol = self.next()
            if key != "file":
                raise ParseError("Explicit takes file=<path>", column=kcol)
            self.expect("=")
            path_tokens = []
            while self.peek() not in (")", None):
                path_tokens.append(self.next()[0])
            self.expect(")")
            if self.loader is None:
                raise ParseError("no file loader available for Explicit(...)", column=col)
            return self.loader("".join(path_tokens))
        raise ParseError(f"unknown constructor {name!r}", column=col)


def parse_module_expr(text, loader=None):
    """Parse the module grammar; loader maps a path to an Explicit node."""
    return _ExprParser(text, loader).parse()


def load_explicit_file(path, label=None):
    """Read an Explicit module file: field line, size, height, then matrices."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh]
    field = None
    size = None
    mats = []
    current = None
    for lineno, ln in enumerate(lines, start=1):
        if not ln or ln.startswith("#"):
            continue
        if ln.startswith("field"):
            from .parsing import parse_field_spec

            field = parse_field_spec(ln.split(None, 1)[1])
        elif ln.startswith("size"):
            size = int(ln.split()[1])
        elif ln.startswith("height"):
            continue
        elif ln == "matrix":
            if current is not None:
                mats.append(current)
            current = []
        else:
            if current is None or field is None or size is None:
                raise ParseError("matrix data before header", line=lineno)
            entries = []
            for chunk in ln.split():
                entries.append(_parse_entry(chunk, field, lineno))
            if len(entries) != size:
                raise ParseError(f"expected {size} entries", line=lineno)
            current.append(entries)
    if current is not None:
        mats.append(current)
    if field is None or size is None or not mats:
        raise ParseError("explicit module file missing field/size/matrix sections")
    matrices = tuple(ExactMatrix.from_rows(field, m) for m in mats)
    return Explicit(matrices, label=label or path)


def _parse_entry(chunk, field, lineno):
    if chunk.startswith("(") and chunk.endswith(")"):
        coeffs = [int(v) for v in chunk[1:-1].split(",")]
        return field.element(coeffs + [0] * (field.n - len(coeffs)))
    try:
        return field.from_int(int(chunk))
    except ValueError:
        raise ParseError(f"bad matrix entry {chunk!r}", line=lineno)
