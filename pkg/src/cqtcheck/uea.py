"""Functionals on the inhomogeneous algebra and their exchange relations.

Free words are built from the letters Lam[a,b] (matrix entries of the
vector representation) and y[a] (translations); the coproduct acts by

    split Lam[a,b] = sum_k Lam[a,k] (x) Lam[k,b]
    split y[a]     = sum_j Lam[a,j] (x) y[j]  +  y[a] (x) 1

with counit delta_ab on Lam and 0 on y.  Two matrix-valued unital
homomorphisms are evaluated on such words:

* l, sliced from the extended exchange matrix: l(Lam[a,b])[j,u] =
  R_Q[(j,a),(b,u)] and l(y[a])[j,u] = R_Q[(j,a),(+,u)], so its blocks on
  the vector range are R- and Z-slices, its last column is the column
  s = (R-1)T + m, and its bottom row is the counit;
* X, the antipode-twisted functional with X(Lam[a,b])[i,k] = R[(a,k),(i,b)]
  and X(y[u])[i,+] = delta_iu over the same bottom row.

The exchange relation for l is checked both as a single matrix identity
over the extended index space and, independently, in the four block forms
that use R, Z, R.Z and s separately; the two code paths must agree, and
the block form that is a consequence of two others is asserted to be
implied rather than assumed.  All identities are evaluated on every free
word up to a configurable length (default 2); that is exact on those words
and a truncation of the full functional identity, and reported as such.

Where the datum's invariant column enters (through s), checks run at
interpolation points of its coefficient; each defect is polynomial of
degree at most 3 in the coefficient, so four points decide the identity
for all values.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import cqt
from .errors import ShapeError
from .inhomogeneous import InhomDatum, PoincareCandidate, build_RQ
from .presentation import FunctionalHom
from .scalars import ONE, Scalar, ZERO
from .tensor import SpanBasis, Tensor, flip, kron

INTERP = tuple(Scalar.from_int(k) for k in (0, 1, 2, 3))


def lam(a: int, b: int):
    return ("Lam", a, b)


def y(a: int):
    return ("y", a)


@dataclass
class CoproductTable:
    """Letter-level coproduct and counit for the inhomogeneous letters."""

    N: int

    def splits(self, letter):
        """(left letter or None, right letter or None) pairs of the coproduct."""
        kind = letter[0]
        if kind == "Lam":
            _, a, b = letter
            return [(lam(a, k), lam(k, b)) for k in range(self.N)]
        if kind == "y":
            _, a = letter
            return [(lam(a, j), y(j)) for j in range(self.N)] + [(y(a), None)]
        raise ShapeError(f"unknown letter {letter!r}")

    def counit(self, letter) -> Scalar:
        if letter[0] == "Lam":
            return ONE if letter[1] == letter[2] else ZERO
        return ZERO

    def counit_word(self, word) -> Scalar:
        out = ONE
        for letter in word:
            out = out * self.counit(letter)
            if not out.num:
                break
        return out

    def letters(self):
        return ([lam(a, b) for a in range(self.N) for b in range(self.N)]
                + [y(a) for a in range(self.N)])


def _invariant(d: InhomDatum):
    if d.m0 is not None:
        return d.m0
    return d.invariants[0] if d.invariants else None


def _sample_points(d: InhomDatum, cand: PoincareCandidate, count: int = 4):
    if cand is not None and cand.c is not None:
        return (cand.c,)
    if _invariant(d) is None:
        return (Scalar.from_int(0),)
    return INTERP[:count]


def build_l(d: InhomDatum, cand: PoincareCandidate = None,
            c: Scalar = None) -> FunctionalHom:
    """The exchange functional sliced from R_Q at one coefficient value."""
    if cand is not None and cand.c is not None:
        c = cand.c
    rq = build_RQ(d, _invariant(d), c if c is not None else Scalar.from_int(0))
    N = d.N
    P = N + 1
    values = {}
    for a in range(N):
        for b in range(N):
            values[lam(a, b)] = Tensor(
                (P,), (P,),
                [rq.entry((j, a), (b, u)) for j in range(P) for u in range(P)])
        values[y(a)] = Tensor(
            (P,), (P,),
            [rq.entry((j, a), (N, u)) for j in range(P) for u in range(P)])
    return FunctionalHom(P, values, label="l")


def build_X(d: InhomDatum) -> FunctionalHom:
    """The antipode-twisted functional; independent of the invariant."""
    N = d.N
    P = N + 1
    values = {}
    for a in range(N):
        for b in range(N):
            ent = [ZERO] * (P * P)
            for i in range(N):
                for k in range(N):
                    ent[i * P + k] = d.R.entry((a, k), (i, b))
            ent[N * P + N] = ONE if a == b else ZERO
            values[lam(a, b)] = Tensor((P,), (P,), ent)
        ent = [ZERO] * (P * P)
        for i in range(N):
            for k in range(N):
                ent[i * P + k] = d.Z.entry((a, k), (i,))
            ent[i * P + N] = ONE if i == a else ZERO
        values[y(a)] = Tensor((P,), (P,), ent)
    return FunctionalHom(P, values, label="X")


def convolve(h1: FunctionalHom, ij, h2: FunctionalHom, kl, element,
             cop: CoproductTable) -> Scalar:
    """((i,j) entry of h1 * (k,l) entry of h2) evaluated on a free element."""
    from itertools import product as iproduct
    total = ZERO
    for word, coef in element.items():
        if not coef.num:
            continue
        acc = ZERO
        for split in iproduct(*(cop.splits(letter) for letter in word)):
            uword = tuple(u for u, _ in split if u is not None)
            vword = tuple(v for _, v in split if v is not None)
            a = h1.value(uword)[ij[0], ij[1]]
            if not a.num:
                continue
            b = h2.value(vword)[kl[0], kl[1]]
            if b.num:
                acc = acc + a * b
        total = total + coef * acc
    return total


class ConvTable:
    """Convolution matrices B(word) = (h (x) h)(split of word).

    B is multiplicative over words, and B(word)[(x,y),(u,v)] is the
    convolution of the (x,u) and (y,v) entries of h on the word.
    """

    def __init__(self, h: FunctionalHom, cop: CoproductTable):
        self.h = h
        self.cop = cop
        self.size = h.size
        ident = Tensor.identity((h.size,))
        self.letter_B = {}
        for letter in cop.letters():
            acc = Tensor.zeros((h.size, h.size), (h.size, h.size))
            for u, v in cop.splits(letter):
                hu = h.values[u] if u is not None else ident
                hv = h.values[v] if v is not None else ident
                acc = acc + kron(hu, hv)
            self.letter_B[letter] = acc

    def value(self, word) -> Tensor:
        out = Tensor.identity((self.size, self.size))
        for letter in word:
            out = out @ self.letter_B[letter]
        return out


def _words(cop: CoproductTable, max_len: int):
    letters = cop.letters()
    out = []
    layer = [()]
    for _ in range(max_len):
        layer = [w + (l,) for w in layer for l in letters]
        out.extend(layer)
    return out


def _word_label(word) -> str:
    parts = []
    for letter in word:
        if letter[0] == "Lam":
            parts.append(f"Lam{letter[1]}{letter[2]}")
        else:
            parts.append(f"y{letter[1]}")
    return ".".join(parts) or "1"


def _sector(B: Tensor, N: int, first_plus: bool, second_plus: bool) -> Tensor:
    """Columns of B restricted to a sector, rows kept on the vector range.

    The flags choose, for each slot of the column pair, the translation
    index (True) or the vector range (False).
    """
    rows = [(x, u) for x in range(N) for u in range(N)]
    firsts = [N] if first_plus else list(range(N))
    seconds = [N] if second_plus else list(range(N))
    cols = [(u, v) for u in firsts for v in seconds]
    ent = [B.entry(r, c) for r in rows for c in cols]
    cleg = tuple(d for d, p in ((N, first_plus), (N, second_plus)) if not p)
    return Tensor((N, N), cleg, ent)


class _Merge:
    """First-failure aggregation of one defect family into a report."""

    def __init__(self):
        self.slots = {}

    def feed(self, cid: str, label: str, defect: Tensor):
        slot = self.slots.setdefault(cid, {"fail": None, "checked": 0})
        slot["checked"] += 1
        if slot["fail"] is None:
            fz = defect.first_nonzero()
            if fz is not None:
                slot["fail"] = (label, fz)

    def get(self, cid):
        return self.slots.get(cid)

    def reports(self):
        out = []
        for cid in sorted(self.slots):
            data = self.slots[cid]
            if data["fail"] is None:
                out.append(cqt.CheckReport(cid, "pass", None,
                                           f"{data['checked']} evaluations"))
            else:
                label, fz = data["fail"]
                out.append(cqt.CheckReport(cid, "fail", fz,
                                           f"first failure on {label}"))
        return out


def check_rll(d: InhomDatum, cand: PoincareCandidate = None, max_len: int = 2):
    """Exchange relation of l against R_Q, full and in block form."""
    N = d.N
    P = N + 1
    cop = CoproductTable(N)
    F = flip(P, P)
    FN = flip(N, N)
    inv = _invariant(d)
    points = _sample_points(d, cand)
    merge = _Merge()
    for c in points:
        lhom = build_l(d, c=c)
        rq = build_RQ(d, inv, c)
        frqf = F @ rq @ F
        fRf = FN @ d.R @ FN
        s_col = (d.R - Tensor.identity((N, N))) @ d.T
        if inv is not None:
            s_col = s_col + inv * c
        RZ = d.R @ d.Z
        conv = ConvTable(lhom, cop)
        suffix = f" at coefficient {c}" if len(points) > 1 else ""
        for word in _words(cop, max_len):
            label = _word_label(word) + suffix
            B = conv.value(word)
            lx = lhom.value(word)
            Lx = Tensor((N,), (N,), [lx[i, j] for i in range(N) for j in range(N)])
            Mx = Tensor((N,), (), [lx[i, N] for i in range(N)])
            eps = cop.counit_word(word)
            n = len(word)
            C = F @ B
            merge.feed(f"rll:full:len{n}", label, rq @ C - C @ frqf)
            Bll = _sector(B, N, False, False)
            BpN = _sector(B, N, True, False)   # columns (+, vector)
            BNp = _sector(B, N, False, True)   # columns (vector, +)
            Bpp = _sector(B, N, True, True)
            fBf = FN @ Bll @ FN
            merge.feed(f"rll:block-LL:len{n}", label,
                       d.R @ FN @ Bll - fBf @ d.R @ FN)
            merge.feed(f"rll:block-ML:len{n}", label,
                       d.R @ FN @ BpN + d.Z @ Lx - fBf @ d.Z - FN @ BNp)
            merge.feed(f"rll:block-LM:len{n}", label,
                       d.R @ FN @ BNp - RZ @ Lx + fBf @ RZ - FN @ BpN)
            merge.feed(f"rll:block-MM:len{n}", label,
                       d.R @ FN @ Bpp + d.Z @ Mx - RZ @ Mx + s_col * eps
                       - fBf @ s_col - FN @ Bpp)
    reports = merge.reports()
    for n in range(1, max_len + 1):
        ll = merge.get(f"rll:block-LL:len{n}")
        ml = merge.get(f"rll:block-ML:len{n}")
        lm = merge.get(f"rll:block-LM:len{n}")
        if ll is None:
            continue
        cid = f"rll:implied-LM:len{n}"
        if ll["fail"] is None and ml["fail"] is None and lm["fail"] is not None:
            reports.append(cqt.CheckReport(cid, "fail", lm["fail"][1],
                                           "implied identity fails alone"))
        else:
            reports.append(cqt.CheckReport(cid, "pass", None,
                                           "holds whenever its antecedents do"))
        full = merge.get(f"rll:full:len{n}")
        blocks_ok = all(merge.get(f"rll:block-{kk}:len{n}")["fail"] is None
                        for kk in ("LL", "ML", "LM", "MM"))
        agree = (full["fail"] is None) == blocks_ok
        reports.append(cqt.CheckReport(
            f"rll:paths-agree:len{n}", "pass" if agree else "fail", None,
            "full identity iff all block identities"))
    reports.sort(key=lambda r: r.check_id)
    return reports


def build_K(d: InhomDatum) -> Tensor:
    """The exchange matrix governing the X-functional relations.

    Same sector layout as the extended exchange matrix, with the vector
    block transposed and no shift column.
    """
    N = d.N
    P = N + 1
    out = Tensor.zeros((P, P), (P, P))
    ent = out.entries
    ncols = out.ncols
    for a in range(N):
        for b in range(N):
            r = a * P + b
            for u in range(N):
                for v in range(N):
                    val = d.R.entry((u, v), (a, b))
                    if val.num:
                        ent[r * ncols + u * P + v] = val
    for a in range(N):
        ent[(a * P + N) * ncols + N * P + a] = ONE
        ent[(N * P + a) * ncols + a * P + N] = ONE
    ent[(N * P + N) * ncols + N * P + N] = ONE
    return out


def build_nP(d: InhomDatum, n: Tensor) -> Tensor:
    """Row invariant placed in the same corner block as the column case.

    The entries sit at (vector-vector rows, ++ column); the twisted
    invariance of n is exactly what cancels the extra terms on both sides
    of the exchange relation.
    """
    N = d.N
    P = N + 1
    out = Tensor.zeros((P, P), (P, P))
    for a in range(N):
        for b in range(N):
            v = n.entry((a, b), ())
            if v.num:
                out.entries[(a * P + b) * out.ncols + N * P + N] = v
    return out


def check_xkx(d: InhomDatum, max_len: int = 2, n: Tensor = None):
    """Exchange relation of the X functional against K (and K + row block)."""
    cop = CoproductTable(d.N)
    conv = ConvTable(build_X(d), cop)
    variants = [("xkx:base", build_K(d))]
    if n is not None:
        variants.append(("xkx:with-invariant-row", build_K(d) + build_nP(d, n)))
    merge = _Merge()
    for word in _words(cop, max_len):
        B = conv.value(word)
        for name, K in variants:
            merge.feed(f"{name}:len{len(word)}", _word_label(word), B @ K - K @ B)
    return merge.reports()


def check_pairings(d: InhomDatum, cand: PoincareCandidate = None,
                   k: Tensor = None, n: Tensor = None, max_len: int = 2):
    """Invariance of stored pairings under the convolution action.

    k is a column invariant ((vector rep (x) vector rep) k = k) and n a row
    invariant, both stored as columns of entries.  The direct identities
    run against l at the sample coefficients; the antipode-twisted versions
    run against X.
    """
    N = d.N
    cop = CoproductTable(N)
    points = _sample_points(d, cand, count=3)
    merge = _Merge()
    for c in points:
        conv = ConvTable(build_l(d, c=c), cop)
        suffix = f" at coefficient {c}" if len(points) > 1 else ""
        for word in _words(cop, max_len):
            B = conv.value(word)
            eps = cop.counit_word(word)
            label = _word_label(word) + suffix
            if k is not None:
                ent = []
                for a in range(N):
                    for b in range(N):
                        tot = -k.entry((a, b), ()) * eps
                        for u in range(N):
                            for v in range(N):
                                x = B.entry((b, a), (v, u))
                                if x.num:
                                    tot = tot + x * k.entry((u, v), ())
                        ent.append(tot)
                merge.feed(f"pairing:column:len{len(word)}", label,
                           Tensor((N, N), (), ent))
            if n is not None:
                ent = []
                for u in range(N):
                    for v in range(N):
                        tot = -n.entry((u, v), ()) * eps
                        for a in range(N):
                            for b in range(N):
                                x = n.entry((a, b), ())
                                if x.num:
                                    tot = tot + x * B.entry((b, a), (v, u))
                        ent.append(tot)
                merge.feed(f"pairing:row:len{len(word)}", label,
                           Tensor((N, N), (), ent))
    xconv = ConvTable(build_X(d), cop)
    for word in _words(cop, max_len):
        BX = xconv.value(word)
        eps = cop.counit_word(word)
        label = _word_label(word)
        if k is not None:
            ent = []
            for u in range(N):
                for v in range(N):
                    tot = -k.entry((u, v), ()) * eps
                    for a in range(N):
                        for b in range(N):
                            x = k.entry((a, b), ())
                            if x.num:
                                tot = tot + x * BX.entry((a, b), (u, v))
                    ent.append(tot)
            merge.feed(f"pairing:column-twisted:len{len(word)}", label,
                       Tensor((N, N), (), ent))
        if n is not None:
            ent = []
            for a in range(N):
                for b in range(N):
                    tot = -n.entry((a, b), ()) * eps
                    for u in range(N):
                        for v in range(N):
                            x = BX.entry((a, b), (u, v))
                            if x.num:
                                tot = tot + x * n.entry((u, v), ())
                    ent.append(tot)
            merge.feed(f"pairing:row-twisted:len{len(word)}", label,
                       Tensor((N, N), (), ent))
    return merge.reports()


def ideal_elements_mixed(d: InhomDatum):
    """Free elements of the translation exchange relation, one per (s,a,b).

    y_s Lam_ab - sum R[(s,a),(k,t)] Lam_kb y_t - sum Z[(s,a),k] Lam_kb
               + sum Z[(t,k),b] Lam_st Lam_ak.
    """
    N = d.N
    out = {}
    for s in range(N):
        for a in range(N):
            for b in range(N):
                elt = {}
                _acc(elt, (y(s), lam(a, b)), ONE)
                for k in range(N):
                    for t in range(N):
                        v = d.R.entry((s, a), (k, t))
                        if v.num:
                            _acc(elt, (lam(k, b), y(t)), -v)
                for k in range(N):
                    v = d.Z.entry((s, a), (k,))
                    if v.num:
                        _acc(elt, (lam(k, b),), -v)
                for t in range(N):
                    for k in range(N):
                        v = d.Z.entry((t, k), (b,))
                        if v.num:
                            _acc(elt, (lam(s, t), lam(a, k)), v)
                out[(s, a, b)] = elt
    return out


def ideal_elements_quadratic(d: InhomDatum):
    """Free elements of the quadratic translation relations, one per (k,l).

    sum (R-1)[(k,l),(i,j)] (y_i y_j - Z[(i,j),s] y_s + T_ij
                            - T_mn Lam_im Lam_jn).
    """
    N = d.N
    Rm1 = d.R - Tensor.identity((N, N))
    out = {}
    for kk in range(N):
        for ll in range(N):
            elt = {}
            for i in range(N):
                for j in range(N):
                    r = Rm1.entry((kk, ll), (i, j))
                    if not r.num:
                        continue
                    _acc(elt, (y(i), y(j)), r)
                    for s in range(N):
                        v = d.Z.entry((i, j), (s,))
                        if v.num:
                            _acc(elt, (y(s),), -r * v)
                    t = d.T.entry((i, j), ())
                    if t.num:
                        _acc(elt, (), r * t)
                    for mm in range(N):
                        for nn in range(N):
                            t = d.T.entry((mm, nn), ())
                            if t.num:
                                _acc(elt, (lam(i, mm), lam(j, nn)), -r * t)
            out[(kk, ll)] = elt
    return out


def _acc(elt, word, coef):
    cur = elt.get(word)
    elt[word] = coef if cur is None else cur + coef


def check_ideal_killed(d: InhomDatum, cand: PoincareCandidate = None):
    """Both functionals must annihilate every defining relation element."""
    points = _sample_points(d, cand, count=3)
    mixed = ideal_elements_mixed(d)
    quadratic = ideal_elements_quadratic(d)
    merge = _Merge()
    for c in points:
        lhom = build_l(d, c=c)
        suffix = f" at coefficient {c}" if len(points) > 1 else ""
        for key, elt in mixed.items():
            merge.feed("ideal:mixed:l", f"{key}{suffix}", lhom.value_free(elt))
        for key, elt in quadratic.items():
            merge.feed("ideal:quadratic:l", f"{key}{suffix}",
                       lhom.value_free(elt))
    xhom = build_X(d)
    for key, elt in mixed.items():
        merge.feed("ideal:mixed:X", str(key), xhom.value_free(elt))
    for key, elt in quadratic.items():
        merge.feed("ideal:quadratic:X", str(key), xhom.value_free(elt))
    return merge.reports()


def letter_span_dim(h: FunctionalHom) -> int:
    """Dimension of the span of letter values; a smallness diagnostic."""
    span = SpanBasis(h.size * h.size)
    for v in h.values.values():
        span.add(v.entries)
    return span.dim()


def uea_suite(d: InhomDatum, cand: PoincareCandidate = None, max_len: int = 2,
              with_row: Tensor = None):
    """All functional checks, plus the span-dimension diagnostic."""
    reports = []
    reports.extend(check_rll(d, cand, max_len))
    k_col = _invariant(d)
    n_row = with_row
    if n_row is None and k_col is not None:
        # the invariant column doubles as a row invariant when fixed by the
        # transposed exchange matrix
        if d.R.transpose() @ k_col == k_col:
            n_row = k_col
    reports.extend(check_xkx(d, max_len, n=n_row))
    reports.extend(check_pairings(d, cand, k=k_col, n=n_row, max_len=max_len))
    reports.extend(check_ideal_killed(d, cand))
    reports.append(cqt.CheckReport(
        "uea:letter-span", "pass", None,
        f"l letters span dimension {letter_span_dim(build_l(d, c=Scalar.from_int(1)))}, "
        f"X letters span dimension {letter_span_dim(build_X(d))}"))
    reports.sort(key=lambda r: r.check_id)
    return reports
