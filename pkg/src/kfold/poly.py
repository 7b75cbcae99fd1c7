"""Sparse bivariate polynomials over exact or floating coefficient rings.

Terms are kept in a dict keyed by exponent pairs (i, j) for x^i y^j with no
stored zeros.  Three coefficient kinds are supported: "rational"
(fractions.Fraction), ("cyclotomic", k) (CycloNum over one conductor) and
"complex" (python complex, used only by the floating surface pipeline).
Rationals promote to cyclotomic when mixed; demotion is always explicit.

Iteration over terms is in graded-lexicographic order of the exponents so
every derived artifact is reproducible byte for byte.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Tuple, Union

from .cyclo import CycloNum, as_cyclo

Exponent = Tuple[int, int]
RATIONAL = "rational"
COMPLEX = "complex"


def _kind_of(coeff) -> object:
    if isinstance(coeff, CycloNum):
        return ("cyclotomic", coeff.k)
    if isinstance(coeff, (int, Fraction)):
        return RATIONAL
    if isinstance(coeff, (float, complex)):
        return COMPLEX
    raise TypeError(f"unsupported coefficient {coeff!r}")


def _join_kinds(a, b):
    if a == b:
        return a
    if RATIONAL in (a, b):
        other = b if a == RATIONAL else a
        return other
    raise TypeError(f"incompatible coefficient kinds {a} and {b}")


def _promote(coeff, kind):
    if kind == RATIONAL:
        return Fraction(coeff)
    if kind == COMPLEX:
        return complex(coeff)
    if isinstance(coeff, CycloNum):
        return as_cyclo(coeff, kind[1])
    return as_cyclo(Fraction(coeff), kind[1])


def _is_zero(coeff) -> bool:
    if isinstance(coeff, CycloNum):
        return coeff.is_zero()
    return coeff == 0


def grlex_key(exponent: Exponent) -> Tuple[int, int]:
    i, j = exponent
    return (i + j, j)


class BivarPoly:
    """Immutable sparse polynomial in x, y."""

    __slots__ = ("terms", "kind")

    def __init__(self, terms: Mapping[Exponent, object] | Iterable = (), kind=None):
        cleaned: dict[Exponent, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            if _is_zero(c):
                continue
            k = _kind_of(c)
            kind = k if kind is None else _join_kinds(kind, k)
            cleaned[(i, j)] = cleaned.get((i, j), 0) + c if (i, j) in cleaned else c
        if kind is None:
            kind = RATIONAL
        norm: dict[Exponent, object] = {}
        for e, c in cleaned.items():
            v = _promote(c, kind)
            if not _is_zero(v):
                norm[e] = v
        object.__setattr__(self, "terms", norm)
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, *args):
        raise AttributeError("BivarPoly is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(kind=RATIONAL) -> "BivarPoly":
        return BivarPoly({}, kind=kind)

    @staticmethod
    def constant(c) -> "BivarPoly":
        return BivarPoly({(0, 0): c})

    @staticmethod
    def monomial(i: int, j: int, c=1) -> "BivarPoly":
        return BivarPoly({(i, j): Fraction(c) if isinstance(c, int) else c})

    @staticmethod
    def variable(name: str) -> "BivarPoly":
        if name == "x":
            return BivarPoly.monomial(1, 0)
        if name == "y":
            return BivarPoly.monomial(0, 1)
        raise ValueError("variable must be 'x' or 'y'")

    # -- inspection -------------------------------------------------------

    def items(self) -> Iterator[tuple[Exponent, object]]:
        for e in sorted(self.terms, key=grlex_key):
            yield e, self.terms[e]

    def coeff(self, i: int, j: int):
        c = self.terms.get((i, j))
        if c is not None:
            return c
        if self.kind == RATIONAL:
            return Fraction(0)
        if self.kind == COMPLEX:
            return 0j
        return CycloNum.zero(self.kind[1])

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def order(self) -> int:
        """Minimal total degree of a term; -1 for the zero polynomial."""
        return min((i + j for i, j in self.terms), default=-1)

    def constant_term(self):
        return self.coeff(0, 0)

    def linear_part(self):
        return self.coeff(1, 0), self.coeff(0, 1)

    def homogeneous_part(self, d: int) -> "BivarPoly":
        return BivarPoly({e: c for e, c in self.terms.items() if e[0] + e[1] == d},
                         kind=self.kind)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "BivarPoly":
        if isinstance(other, BivarPoly):
            return other
        return BivarPoly.constant(other)

    def __add__(self, other):
        o = self._coerce(other)
        kind = _join_kinds(self.kind, o.kind)
        out: dict[Exponent, object] = dict(self.terms)
        for e, c in o.terms.items():
            if e in out:
                out[e] = out[e] + c
            else:
                out[e] = c
        return BivarPoly(out, kind=kind)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({e: -c for e, c in self.terms.items()}, kind=self.kind)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        kind = _join_kinds(self.kind, o.kind)
        out: dict[Exponent, object] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in o.terms.items():
                e = (i1 + i2, j1 + j2)
                p = c1 * c2
                if e in out:
                    out[e] = out[e] + p
                else:
                    out[e] = p
        return BivarPoly(out, kind=kind)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivarPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = BivarPoly.constant(Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_truncated(self, other: "BivarPoly", max_degree: int) -> "BivarPoly":
        """Product with terms of total degree > max_degree dropped."""
        o = self._coerce(other)
        kind = _join_kinds(self.kind, o.kind)
        out: dict[Exponent, object] = {}
        for (i1, j1), c1 in self.terms.items():
            d1 = i1 + j1
            if d1 > max_degree:
                continue
            for (i2, j2), c2 in o.terms.items():
                if d1 + i2 + j2 > max_degree:
                    continue
                e = (i1 + i2, j1 + j2)
                p = c1 * c2
                if e in out:
                    out[e] = out[e] + p
                else:
                    out[e] = p
        return BivarPoly(out, kind=kind)

    def scale(self, c) -> "BivarPoly":
        return BivarPoly({e: v * c for e, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, BivarPoly):
            if isinstance(other, (int, Fraction, CycloNum, complex)):
                other = BivarPoly.constant(other)
            else:
                return NotImplemented
        if self.kind != other.kind:
            try:
                kind = _join_kinds(self.kind, other.kind)
            except TypeError:
                return False
            return (self - other).is_zero() if kind else False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.kind if self.kind == RATIONAL else tuple(self.kind)
                     if isinstance(self.kind, tuple) else self.kind,
                     tuple(sorted(self.terms.items(), key=lambda t: grlex_key(t[0]),))))

    # -- calculus / substitution ------------------------------------------

    def partial_derivative(self, var: str) -> "BivarPoly":
        out: dict[Exponent, object] = {}
        for (i, j), c in self.terms.items():
            if var == "x" and i > 0:
                out[(i - 1, j)] = c * i
            elif var == "y" and j > 0:
                out[(i, j - 1)] = c * j
        if var not in ("x", "y"):
            raise ValueError("var must be 'x' or 'y'")
        return BivarPoly(out, kind=self.kind)

    def truncate_jet(self, p: int) -> "BivarPoly":
        """Drop all terms of total degree > p."""
        return BivarPoly({e: c for e, c in self.terms.items() if e[0] + e[1] <= p},
                         kind=self.kind)

    def compose_scale_y(self, c) -> "BivarPoly":
        """f(x, c*y); rational coefficients promote if c is cyclotomic."""
        powers: dict[int, object] = {0: 1}
        out: dict[Exponent, object] = {}
        for (i, j), v in self.terms.items():
            if j not in powers:
                cur = max(d for d in powers if d <= j)
                acc = powers[cur]
                while cur < j:
                    acc = acc * c
                    cur += 1
                    powers[cur] = acc
            out[(i, j)] = v * powers[j] if j else v
        return BivarPoly(out)

    def exact_divide_by_y(self) -> "BivarPoly":
        out: dict[Exponent, object] = {}
        for (i, j), c in self.terms.items():
            if j == 0:
                raise ValueError("polynomial is not divisible by y")
            out[(i, j - 1)] = c
        return BivarPoly(out, kind=self.kind)

    def exact_divide_by_x(self) -> "BivarPoly":
        out: dict[Exponent, object] = {}
        for (i, j), c in self.terms.items():
            if i == 0:
                raise ValueError("polynomial is not divisible by x")
        for (i, j), c in self.terms.items():
            out[(i - 1, j)] = c
        return BivarPoly(out, kind=self.kind)

    def substitute(self, x_val, y_val):
        """Full substitution; arguments may be scalars or BivarPoly."""
        xs = x_val if isinstance(x_val, BivarPoly) else BivarPoly.constant(x_val)
        ys = y_val if isinstance(y_val, BivarPoly) else BivarPoly.constant(y_val)
        result = BivarPoly.zero(self.kind)
        xpow: dict[int, BivarPoly] = {0: BivarPoly.constant(Fraction(1))}
        ypow: dict[int, BivarPoly] = {0: BivarPoly.constant(Fraction(1))}

        def power(cache, base, n):
            if n not in cache:
                prev = power(cache, base, n - 1)
                cache[n] = prev * base
            return cache[n]

        for (i, j), c in self.items():
            term = power(xpow, xs, i) * power(ypow, ys, j)
            result = result + term.scale(c)
        return result

    def evaluate(self, x, y):
        """Numeric evaluation (floats/complex)."""
        total = 0
        for (i, j), c in self.terms.items():
            if isinstance(c, CycloNum):
                cv = c.embed()
            elif isinstance(c, Fraction):
                cv = float(c)
            else:
                cv = c
            total = total + cv * (x ** i) * (y ** j)
        return total

    def to_cyclotomic(self, k: int) -> "BivarPoly":
        return BivarPoly({e: as_cyclo(c, k) for e, c in self.terms.items()},
                         kind=("cyclotomic", k))

    def demote_to_rational(self) -> "BivarPoly":
        """Exact demotion; raises if any coefficient has a zeta component."""
        out: dict[Exponent, object] = {}
        for e, c in self.terms.items():
            if isinstance(c, CycloNum):
                out[e] = c.rational_value()
            else:
                out[e] = Fraction(c)
        return BivarPoly(out, kind=RATIONAL)

    def __repr__(self):
        if self.is_zero():
            return "BivarPoly(0)"
        bits = []
        for (i, j), c in self.items():
            mono = ("" if i == 0 else f"x^{i}" if i > 1 else "x") + \
                   ("" if j == 0 else f"y^{j}" if j > 1 else "y")
            bits.append(f"({c})*{mono}" if mono else f"({c})")
        return "BivarPoly(" + " + ".join(bits) + ")"


def poly_from_coeff_map(entries: Mapping[Exponent, object]) -> BivarPoly:
    return BivarPoly(entries)


def poly_compose_scale_y(f: BivarPoly, c) -> BivarPoly:
    return f.compose_scale_y(c)


def partial_derivative(f: BivarPoly, var: str) -> BivarPoly:
    return f.partial_derivative(var)


def truncate_jet(f: BivarPoly, p: int) -> BivarPoly:
    return f.truncate_jet(p)


def exact_divide_by_y(f: BivarPoly) -> BivarPoly:
    return f.exact_divide_by_y()


class JetGerm:
    """Taylor data of the third component f of (x, y) -> (x, y^k, f(x, y)).

    Coefficients are indexed (q, s) with x^(q-s) y^s, 0 <= s <= q <= degree.
    Pure-x coefficients (s = 0) are accepted; the branch functions do not see
    them.  The constant term must vanish.
    """

    __slots__ = ("k", "degree", "coeffs")

    def __init__(self, k: int, coeffs: Mapping[tuple[int, int], object], degree: int = 11):
        if k < 2:
            raise ValueError("fold order k must be >= 2")
        if degree < 2:
            raise ValueError("jet degree must be >= 2")
        cleaned: dict[tuple[int, int], object] = {}
        for (q, s), c in coeffs.items():
            if q < 1 or s < 0 or s > q:
                raise ValueError(f"bad coefficient index ({q}, {s})")
            if q > degree:
                raise ValueError(f"coefficient ({q}, {s}) above jet degree {degree}")
            v = Fraction(c) if isinstance(c, int) else c
            if not _is_zero(v):
                cleaned[(q, s)] = v
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", cleaned)

    def __setattr__(self, *args):
        raise AttributeError("JetGerm is immutable")

    @staticmethod
    def from_poly(k: int, f: BivarPoly, degree: int = 11) -> "JetGerm":
        if not _is_zero(f.constant_term()):
            raise ValueError("germ must vanish at the origin")
        table = {}
        for (i, j), c in f.truncate_jet(degree).terms.items():
            table[(i + j, j)] = c
        return JetGerm(k, table, degree)

    def a(self, q: int, s: int):
        c = self.coeffs.get((q, s))
        if c is not None:
            return c
        return Fraction(0)

    def to_poly(self) -> BivarPoly:
        return BivarPoly({(q - s, s): c for (q, s), c in self.coeffs.items()})

    def coefficient_kind(self):
        kind = RATIONAL
        for c in self.coeffs.values():
            kind = _join_kinds(kind, _kind_of(c))
        return kind

    def __eq__(self, other):
        if not isinstance(other, JetGerm):
            return NotImplemented
        return (self.k, self.degree) == (other.k, other.degree) and \
            self.to_poly() == other.to_poly()

    def __repr__(self):
        return f"JetGerm(k={self.k}, degree={self.degree}, f={self.to_poly()!r})"
