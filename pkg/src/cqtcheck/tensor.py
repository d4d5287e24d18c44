"""Leg-typed dense matrices over the exact scalar field.

A Tensor is a linear map between tensor products of small complex spaces,
stored densely in row-major order.  Multi-indices flatten with the leftmost
leg slowest; this is the single index convention of the whole package, and
every pairing convention from the literature is translated to it exactly once
at the point where the relevant matrix is built.

Kronecker products follow (a (x) b)[(i,j),(k,l)] = a[i,k] * b[j,l], so the
mixed-product law (a (x) b)(c (x) d) = ac (x) bd holds on the nose.  Equality
compares flattened shapes and entries; leg lists are bookkeeping and may
differ between equal tensors.

All values are immutable after construction; matrix products skip zero
entries, which makes the permutation-heavy checks in this package cheap.
"""

from __future__ import annotations

from math import prod

from .errors import NotInvertible, ShapeError
from .scalars import ONE, ZERO, ConjMode, Scalar

def _as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    return ZERO + x  # reuses Scalar coercion rules


class Tensor:
    __slots__ = ("cod", "dom", "entries", "nrows", "ncols")

    def __init__(self, cod, dom, entries):
        self.cod = tuple(cod)
        self.dom = tuple(dom)
        self.nrows = prod(self.cod) if self.cod else 1
        self.ncols = prod(self.dom) if self.dom else 1
        if len(entries) != self.nrows * self.ncols:
            raise ShapeError(
                f"{len(entries)} entries for shape {self.nrows}x{self.ncols}"
            )
        self.entries = entries

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zeros(cod, dom) -> "Tensor":
        n = (prod(cod) if cod else 1) * (prod(dom) if dom else 1)
        return Tensor(cod, dom, [ZERO] * n)

    @staticmethod
    def identity(dims) -> "Tensor":
        dims = tuple(dims)
        n = prod(dims) if dims else 1
        entries = [ZERO] * (n * n)
        for k in range(n):
            entries[k * n + k] = ONE
        return Tensor(dims, dims, entries)

    @staticmethod
    def from_rows(rows, cod=None, dom=None) -> "Tensor":
        """Build from a list of row lists; ints/fractions are coerced."""
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        entries = []
        for r in rows:
            if len(r) != nc:
                raise ShapeError("ragged rows")
            entries.extend(_as_scalar(x) for x in r)
        return Tensor(cod if cod is not None else [nr],
                      dom if dom is not None else [nc], entries)

    @staticmethod
    def column(values, cod=None) -> "Tensor":
        vals = [_as_scalar(x) for x in values]
        return Tensor(cod if cod is not None else [len(vals)], (), vals)

    # -- indexing -------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.ncols + j]

    def entry(self, row_multi, col_multi) -> Scalar:
        return self.entries[
            flatten(self.cod, row_multi) * self.ncols + flatten(self.dom, col_multi)
        ]

    def with_legs(self, cod, dom) -> "Tensor":
        """Relabel legs without touching entries; flat shape must agree."""
        t = Tensor(cod, dom, self.entries)
        if t.nrows != self.nrows or t.ncols != self.ncols:
            raise ShapeError("leg relabeling changes flat shape")
        return t

    # -- linear structure ------------------------------------------------------

    def _require_same_shape(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ShapeError(
                f"shape mismatch {self.nrows}x{self.ncols} vs {other.nrows}x{other.ncols}"
            )

    def __add__(self, other):
        self._require_same_shape(other)
        return Tensor(self.cod, self.dom,
                      [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._require_same_shape(other)
        return Tensor(self.cod, self.dom,
                      [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return Tensor(self.cod, self.dom, [-a for a in self.entries])

    def __mul__(self, s):
        s = _as_scalar(s)
        return Tensor(self.cod, self.dom, [a * s for a in self.entries])

    __rmul__ = __mul__

    def __matmul__(self, other: "Tensor") -> "Tensor":
        """Composition self . other (apply other first)."""
        if self.ncols != other.nrows:
            raise ShapeError(
                f"cannot compose {self.nrows}x{self.ncols} with {other.nrows}x{other.ncols}"
            )
        n, m, k = self.nrows, other.ncols, self.ncols
        a, b = self.entries, other.entries
        out = [ZERO] * (n * m)
        for i in range(n):
            arow = i * k
            orow = i * m
            for p in range(k):
                x = a[arow + p]
                if not x.num:
                    continue
                brow = p * m
                for j in range(m):
                    y = b[brow + j]
                    if y.num:
                        out[orow + j] = out[orow + j] + x * y
        return Tensor(self.cod, other.dom, out)

    def transpose(self) -> "Tensor":
        out = [ZERO] * (self.nrows * self.ncols)
        for i in range(self.nrows):
            for j in range(self.ncols):
                out[j * self.nrows + i] = self.entries[i * self.ncols + j]
        return Tensor(self.dom, self.cod, out)

    def conjugate(self, mode: ConjMode) -> "Tensor":
        return Tensor(self.cod, self.dom,
                      [a.conjugate(mode) for a in self.entries])

    def subs(self, value) -> "Tensor":
        return Tensor(self.cod, self.dom, [a.subs(value) for a in self.entries])

    # -- predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(not a.num for a in self.entries)

    def first_nonzero(self):
        """((row multi-index, col multi-index), entry) of the first nonzero."""
        for k, a in enumerate(self.entries):
            if a.num:
                i, j = divmod(k, self.ncols)
                return (unflatten(self.cod, i), unflatten(self.dom, j)), a
        return None

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.entries == other.entries
        )

    def key(self):
        """Hashable identity for deduplication."""
        return (self.nrows, self.ncols, tuple(self.entries))

    # -- inversion and nullspaces -------------------------------------------------

    def inverse(self) -> "Tensor":
        if self.nrows != self.ncols:
            raise ShapeError("inverse of a non-square tensor")
        n = self.nrows
        aug = [list(self.entries[i * n:(i + 1) * n]) + [ZERO] * n for i in range(n)]
        for i in range(n):
            aug[i][n + i] = ONE
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col].num), None)
            if piv is None:
                null = self.nullspace()
                raise NotInvertible(
                    f"singular {n}x{n} tensor", witness=null[0] if null else None
                )
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col].num:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        out = []
        for r in range(n):
            out.extend(aug[r][n:])
        return Tensor(self.dom, self.cod, out)

    def rref(self):
        """Reduced rows and pivot columns of a working copy."""
        rows = [list(self.entries[i * self.ncols:(i + 1) * self.ncols])
                for i in range(self.nrows)]
        pivots = []
        r = 0
        for col in range(self.ncols):
            piv = next((k for k in range(r, self.nrows) if rows[k][col].num), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = rows[r][col].inverse()
            rows[r] = [x * inv for x in rows[r]]
            for k in range(self.nrows):
                if k != r and rows[k][col].num:
                    f = rows[k][col]
                    rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
            pivots.append(col)
            r += 1
            if r == self.nrows:
                break
        return rows, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self):
        """Exact basis of the right nullspace, as column tensors."""
        rows, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            vec = [ZERO] * self.ncols
            vec[free] = ONE
            for r, pc in enumerate(pivots):
                vec[pc] = -rows[r][free]
            basis.append(Tensor(self.dom, (), vec))
        return basis

    # -- display -------------------------------------------------------------------

    def __repr__(self):
        return f"Tensor({list(self.cod)}x{list(self.dom)}, {self.nrows}x{self.ncols})"

    def pretty(self) -> str:
        cells = [[str(self.entries[i * self.ncols + j]) for j in range(self.ncols)]
                 for i in range(self.nrows)]
        width = max((len(c) for row in cells for c in row), default=1)
        lines = ["[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells]
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Index helpers and the standard constructions.
# ---------------------------------------------------------------------------

def flatten(dims, multi) -> int:
    if len(dims) != len(multi):
        raise ShapeError(f"multi-index {multi} against legs {dims}")
    out = 0
    for d, k in zip(dims, multi):
        if not 0 <= k < d:
            raise ShapeError(f"index {k} out of range for leg {d}")
        out = out * d + k
    return out


def unflatten(dims, flat: int):
    out = []
    for d in reversed(dims):
        out.append(flat % d)
        flat //= d
    out.reverse()
    return tuple(out)


def kron(a: Tensor, b: Tensor) -> Tensor:
    """(a (x) b)[(i,j),(k,l)] = a[i,k] b[j,l]; legs concatenate."""
    nr, nc = a.nrows * b.nrows, a.ncols * b.ncols
    out = [ZERO] * (nr * nc)
    for i in range(a.nrows):
        for k in range(a.ncols):
            x = a.entries[i * a.ncols + k]
            if not x.num:
                continue
            for j in range(b.nrows):
                row = (i * b.nrows + j) * nc + k * b.ncols
                brow = j * b.ncols
                for l in range(b.ncols):
                    y = b.entries[brow + l]
                    if y.num:
                        out[row + l] = x * y
    return Tensor(a.cod + b.cod, a.dom + b.dom, out)


def flip(d1: int, d2: int) -> Tensor:
    """The swap map C^d1 (x) C^d2 -> C^d2 (x) C^d1."""
    out = [ZERO] * (d1 * d2) ** 2
    nc = d1 * d2
    for x in range(d1):
        for y in range(d2):
            out[(y * d1 + x) * nc + (x * d2 + y)] = ONE
    return Tensor((d2, d1), (d1, d2), out)


def embed(op: Tensor, left: int, right: int) -> Tensor:
    """1_left (x) op (x) 1_right, without adding trivial legs for dim 1."""
    t = op
    if left > 1:
        t = kron(Tensor.identity((left,)), t)
    if right > 1:
        t = kron(t, Tensor.identity((right,)))
    return t


def pad_with_identity(t: Tensor, pre_dims, post_dims) -> Tensor:
    """id_pre (x) t (x) id_post by direct index placement (no arithmetic)."""
    pre_dims, post_dims = tuple(pre_dims), tuple(post_dims)
    if not pre_dims and not post_dims:
        return t
    P = prod(pre_dims) if pre_dims else 1
    S = prod(post_dims) if post_dims else 1
    nr, nc = t.nrows * P * S, t.ncols * P * S
    out = [ZERO] * (nr * nc)
    for i in range(t.nrows):
        for j in range(t.ncols):
            v = t.entries[i * t.ncols + j]
            if not v.num:
                continue
            for a in range(P):
                for b in range(S):
                    out[((a * t.nrows + i) * S + b) * nc
                        + (a * t.ncols + j) * S + b] = v
    return Tensor(pre_dims + t.cod + post_dims, pre_dims + t.dom + post_dims, out)


def tauconj(a: Tensor, mode: ConjMode) -> Tensor:
    """Swap both leg pairs and conjugate entrywise.

    For a with legs [p,q] x [r,s] returns b with legs [q,p] x [s,r] and
    b[(j,i),(l,k)] = conj(a[(i,j),(k,l)]).  For square two-leg tensors this
    is flip . conj(a) . flip.
    """
    if len(a.cod) != 2 or len(a.dom) != 2:
        raise ShapeError("tauconj needs two legs on each side")
    p, q = a.cod
    r, s = a.dom
    out = [ZERO] * (a.nrows * a.ncols)
    for i in range(p):
        for j in range(q):
            for k in range(r):
                for l in range(s):
                    v = a.entries[(i * q + j) * a.ncols + (k * s + l)]
                    if v.num:
                        out[(j * p + i) * a.ncols + (l * r + k)] = v.conjugate(mode)
    return Tensor((q, p), (s, r), out)


class SpanBasis:
    """Incremental exact span of flat vectors, for membership tests."""

    def __init__(self, length: int):
        self.length = length
        self.rows = []  # (pivot index, normalized vector) sorted by pivot

    def _eliminate(self, vec):
        vec = list(vec)
        for pivot, row in self.rows:
            f = vec[pivot]
            if f.num:
                vec = [x - f * y if y.num else x for x, y in zip(vec, row)]
        return vec

    def add(self, vec) -> bool:
        """Insert a vector; False when it was already in the span."""
        if len(vec) != self.length:
            raise ShapeError("vector length mismatch in span")
        vec = self._eliminate(vec)
        pivot = next((k for k, x in enumerate(vec) if x.num), None)
        if pivot is None:
            return False
        inv = vec[pivot].inverse()
        vec = [x * inv if x.num else x for x in vec]
        for k, (p, row) in enumerate(self.rows):
            f = row[pivot]
            if f.num:
                self.rows[k] = (p, [x - f * y if y.num else x
                                    for x, y in zip(row, vec)])
        self.rows.append((pivot, vec))
        self.rows.sort(key=lambda pr: pr[0])
        return True

    def contains(self, vec) -> bool:
        return all(not x.num for x in self._eliminate(vec))

    def dim(self) -> int:
        return len(self.rows)
