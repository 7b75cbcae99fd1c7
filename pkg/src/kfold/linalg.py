"""Exact sparse echelon forms over Q and Q(zeta_k) for Macaulay truncations.

Rows are sparse integer (or integer-vector) dictionaries keyed by column
index.  Elimination is fraction-free: an incoming row is cross-multiplied
against the stored pivot rows and renormalised by integer content, so no
rational arithmetic ever happens inside the hot loop.  Pivoting is fully
deterministic: rows arrive in a fixed order and the pivot column of a row
is always its graded-lexicographically smallest surviving column.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable

from .cyclo import CycloNum, conductor_data


def _content(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


class IntEchelon:
    """Incremental row echelon over Z (rank over Q)."""

    __slots__ = ("pivots", "rank")

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}
        self.rank = 0

    def insert(self, row: dict[int, int]) -> bool:
        r = row
        pivots = self.pivots
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                g = _content(r.values())
                if g > 1:
                    r = {col: v // g for col, v in r.items()}
                if r[c] < 0:
                    r = {col: -v for col, v in r.items()}
                pivots[c] = r
                self.rank += 1
                return True
            a, b = p[c], r[c]
            g = gcd(a, b)
            a //= g
            b //= g
            new = {col: a * v for col, v in r.items()}
            for col, v in p.items():
                w = new.get(col)
                if w is None:
                    new[col] = -b * v
                else:
                    w -= b * v
                    if w:
                        new[col] = w
                    else:
                        del new[col]
            if abs(a) > 1 and new:
                g = _content(new.values())
                if g > 1:
                    new = {col: v // g for col, v in new.items()}
            r = new
        return False


class CycEchelon:
    """Incremental echelon over Z[zeta_k]; entries are integer vectors.

    Z[zeta_k] is an integral domain, so cross-multiplication elimination is
    exact; rows are renormalised by their integer content.
    """

    __slots__ = ("phi", "red", "pivots", "rank")

    def __init__(self, k: int):
        data = conductor_data(k)
        self.phi = data.phi
        # reduction rows for zeta^i, i = phi .. 2*phi-2
        self.red = [data.zeta_powers[i] for i in range(data.phi, 2 * data.phi - 1)]
        self.pivots: dict[int, dict[int, tuple]] = {}
        self.rank = 0

    def _mul(self, a: tuple, b: tuple) -> tuple:
        phi = self.phi
        out = [0] * (2 * phi - 1)
        for i in range(phi):
            ai = a[i]
            if ai:
                for j in range(phi):
                    bj = b[j]
                    if bj:
                        out[i + j] += ai * bj
        res = out[:phi]
        for i in range(phi, 2 * phi - 1):
            c = out[i]
            if c:
                ri = self.red[i - phi]
                for t in range(phi):
                    rt = ri[t]
                    if rt:
                        res[t] += c * rt
        return tuple(res)

    def insert(self, row: dict[int, tuple]) -> bool:
        r = row
        pivots = self.pivots
        zero = (0,) * self.phi
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                g = _content(v for vec in r.values() for v in vec)
                if g > 1:
                    r = {col: tuple(v // g for v in vec) for col, vec in r.items()}
                pivots[c] = r
                self.rank += 1
                return True
            a, b = p[c], r[c]
            ga = _content(a)
            gb = _content(b)
            g = gcd(ga, gb)
            if g > 1:
                a = tuple(v // g for v in a)
                b = tuple(v // g for v in b)
            mul = self._mul
            new: dict[int, tuple] = {}
            for col, vec in r.items():
                new[col] = mul(a, vec)
            for col, vec in p.items():
                bv = mul(b, vec)
                w = new.get(col)
                if w is None:
                    new[col] = tuple(-t for t in bv)
                else:
                    merged = tuple(wi - ti for wi, ti in zip(w, bv))
                    if merged == zero:
                        del new[col]
                    else:
                        new[col] = merged
            if new:
                g = _content(v for vec in new.values() for v in vec)
                if g > 1:
                    new = {col: tuple(v // g for v in vec) for col, vec in new.items()}
            r = new
        return False


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integerize_rational(terms) -> list[tuple[int, int, int]]:
    """[(i, j, Fraction)] -> [(i, j, int)] scaled by the common denominator."""
    denom = 1
    for _, _, c in terms:
        denom = _lcm(denom, c.denominator)
    return [(i, j, int(c * denom)) for i, j, c in terms]


def integerize_cyclotomic(terms, k: int) -> list[tuple[int, int, tuple]]:
    """[(i, j, CycloNum)] -> [(i, j, int vector)] scaled by a common denominator."""
    denom = 1
    for _, _, c in terms:
        for f in c.coeffs:
            denom = _lcm(denom, f.denominator)
    out = []
    for i, j, c in terms:
        out.append((i, j, tuple(int(f * denom) for f in c.coeffs)))
    return out


def monomial_index(i: int, j: int) -> int:
    """Graded-lex position of x^i y^j among all monomials."""
    d = i + j
    return d * (d + 1) // 2 + j


def macaulay_codim(int_gens, N: int, cyclotomic_k: int | None) -> tuple[int, dict]:
    """Codimension of the span of degree-truncated generator multiples.

    ``int_gens`` is a list of integerised term lists; the span is taken inside
    the space of monomials of total degree < N, multipliers run over all
    monomials keeping the product order below N.  Returns (codim, pivot map).
    """
    ncols = N * (N + 1) // 2
    echelon = CycEchelon(cyclotomic_k) if cyclotomic_k else IntEchelon()
    staged = []
    for terms in int_gens:
        if not terms:
            continue
        ordg = min(i + j for i, j, _ in terms)
        maxm = N - 1 - ordg
        if maxm < 0:
            continue
        for d in range(maxm + 1):
            for b in range(d + 1):
                a = d - b
                row = {}
                lead = None
                for i, j, c in terms:
                    if i + a + j + b < N:
                        idx = monomial_index(i + a, j + b)
                        row[idx] = c
                        if lead is None or idx < lead:
                            lead = idx
                if row:
                    staged.append((lead, len(staged), row))
    # rows sorted by leading column keep elimination chains short;
    # the secondary key preserves a deterministic total order
    staged.sort(key=lambda t: (t[0], t[1]))
    for _, _, row in staged:
        echelon.insert(row)
    return ncols - echelon.rank, echelon.pivots


def echelon_staircase(pivot_map: dict, N: int) -> list[tuple[int, int]]:
    """Standard monomials (quotient basis) below degree N, for diagnostics."""
    out = []
    idx = 0
    for d in range(N):
        for j in range(d + 1):
            if idx not in pivot_map:
                out.append((d - j, j))
            idx += 1
    return out
