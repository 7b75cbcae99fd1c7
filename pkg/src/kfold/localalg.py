"""Local algebra of plane-curve germs at the origin.

Dimensions of zero-dimensional quotients O_2/I are computed by Macaulay
truncation: for increasing N the span of the generator multiples truncated
at degree N is row-reduced inside the monomials of degree < N, and the
codimension sequence d_N is monitored.  d_N is nondecreasing, and a single
plateau already certifies stabilisation (Nakayama), but the stop rule is
the conservative three-in-a-row d_N = d_{N+1} = d_{N+2}.  Failure to
stabilise below the hard cap is reported as Infinite, never as a number.

A power-series parametrisation of a regular curve gives an independent
second route to intersection numbers (`parametrized_contact`), used as the
cross-check oracle for the truncation method.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cyclo import CycloNum, as_cyclo
from .linalg import (integerize_cyclotomic, integerize_rational,
                     macaulay_codim, echelon_staircase)
from .poly import RATIONAL, BivarPoly

DEFAULT_CAP = 64
STABLE_RUN = 3


@dataclass(frozen=True)
class LocalDim:
    """A local-ring dimension: a non-negative integer or Infinite."""

    value: Optional[int]  # None encodes Infinite

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __int__(self) -> int:
        if self.value is None:
            raise ValueError("dimension is Infinite")
        return self.value

    def __eq__(self, other):
        if isinstance(other, LocalDim):
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return "Infinite" if self.value is None else str(self.value)


INFINITE = LocalDim(None)


def finite(n: int) -> LocalDim:
    return LocalDim(n)


class ContactOverflow(Exception):
    """Contact order exceeded the requested cap (reported distinctly)."""


def _common_field(generators: Sequence[BivarPoly]):
    k = None
    for g in generators:
        if g.kind == "complex":
            raise TypeError("exact quotient dimensions need exact coefficients")
        if isinstance(g.kind, tuple):
            if k is None:
                k = g.kind[1]
            elif k != g.kind[1]:
                raise ValueError("mismatched cyclotomic conductors")
    return k


def _integer_generators(generators: Sequence[BivarPoly], k):
    out = []
    for g in generators:
        terms = [(i, j, c) for (i, j), c in g.items()]
        if k is None:
            out.append(integerize_rational(terms))
        else:
            cyc = [(i, j, as_cyclo(c, k)) for i, j, c in terms]
            out.append(integerize_cyclotomic(cyc, k))
    return out


def _quotient_dim_profile(generators: Sequence[BivarPoly], cap: int = DEFAULT_CAP):
    """Returns (LocalDim, N at stabilisation, staircase or None)."""
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        raise ValueError("all generators are zero")
    if any(g.order() == 0 for g in gens):
        return finite(0), 1, []
    k = _common_field(gens)
    int_gens = _integer_generators(gens, k)
    min_ord = min(g.order() for g in gens)

    d_prev = None
    streak = 0
    last_pivots: dict = {}
    for N in range(1, cap + 1):
        if N <= min_ord:
            d = N * (N + 1) // 2
            last_pivots = {}
        else:
            d, last_pivots = macaulay_codim(int_gens, N, k)
        if d == d_prev:
            streak += 1
            if streak == STABLE_RUN - 1:
                return finite(d), N, echelon_staircase(last_pivots, N)
        else:
            streak = 0
        d_prev = d
    return INFINITE, cap, None


def quotient_dim(generators: Sequence[BivarPoly], cap: int = DEFAULT_CAP,
                 verbose: bool = False) -> LocalDim:
    """dim_K O_2 / <generators> by stabilised Macaulay truncation."""
    dim, n_stab, staircase = _quotient_dim_profile(generators, cap)
    if verbose and staircase is not None:
        print(f"quotient_dim: stabilised at N={n_stab}, "
              f"staircase={staircase}")
    return dim


def milnor_number(g: BivarPoly, cap: int = DEFAULT_CAP) -> LocalDim:
    """Milnor number at the origin, dim O_2/<g_x, g_y>."""
    if g.is_zero():
        return INFINITE
    gx = g.partial_derivative("x")
    gy = g.partial_derivative("y")
    if gx.is_zero() and gy.is_zero():
        return INFINITE
    return quotient_dim([p for p in (gx, gy) if not p.is_zero()], cap)


def intersection_multiplicity(g: BivarPoly, h: BivarPoly,
                              cap: int = DEFAULT_CAP) -> LocalDim:
    """dim O_2/<g, h>; Infinite iff the curves share a component through 0."""
    from .poly import _is_zero  # local import to avoid cycle noise

    if not _is_zero(g.constant_term()) or not _is_zero(h.constant_term()):
        raise ValueError("both curves must pass through the origin")
    if g.is_zero() or h.is_zero():
        return INFINITE
    common = bivar_gcd(g, h)
    if common.total_degree() > 0 and _is_zero(common.constant_term()):
        return INFINITE
    return quotient_dim([g, h], cap)


# -- series parametrisation oracle ----------------------------------------


def _series_trunc(series: dict[int, object], cap: int) -> dict[int, object]:
    return {d: c for d, c in series.items() if d <= cap and not _coeff_zero(c)}


def _coeff_zero(c) -> bool:
    if isinstance(c, CycloNum):
        return c.is_zero()
    return c == 0


def _poly_eval_series(f: BivarPoly, xs: dict[int, object], ys: dict[int, object],
                      cap: int) -> dict[int, object]:
    """f(x(t), y(t)) truncated at degree cap; x, y given as t-series dicts."""

    def series_mul(a, b):
        out: dict[int, object] = {}
        for da, ca in a.items():
            for db, cb in b.items():
                d = da + db
                if d <= cap:
                    out[d] = out.get(d, 0) + ca * cb
        return {d: c for d, c in out.items() if not _coeff_zero(c)}

    xpow = {0: {0: Fraction(1)}}
    ypow = {0: {0: Fraction(1)}}

    def power(cache, base, n):
        if n not in cache:
            cache[n] = series_mul(power(cache, base, n - 1), base)
        return cache[n]

    total: dict[int, object] = {}
    for (i, j), c in f.items():
        term = series_mul(power(xpow, xs, i), power(ypow, ys, j))
        for d, v in term.items():
            total[d] = total.get(d, 0) + c * v
    return {d: c for d, c in total.items() if not _coeff_zero(c)}


def parametrized_contact(g_regular: BivarPoly, h: BivarPoly,
                         order_cap: int = 24) -> int:
    """ord_t h(alpha(t)) for the regular curve alpha parametrising V(g).

    Solves g = 0 for one variable as a power series by fixed-point
    substitution; regular means nonzero linear part.  Raises
    ContactOverflow when the order exceeds order_cap.
    """
    gx0, gy0 = g_regular.linear_part()
    if _coeff_zero(gx0) and _coeff_zero(gy0):
        raise ValueError("curve is singular at the origin")
    solve_for_y = not _coeff_zero(gy0)
    lead = gy0 if solve_for_y else gx0
    if isinstance(lead, CycloNum):
        inv_lead = lead.inverse()
    else:
        inv_lead = Fraction(1) / Fraction(lead)

    # phi(t): the solved variable as a series in the free variable t
    phi: dict[int, object] = {}
    for _ in range(order_cap + 1):
        if solve_for_y:
            xs = {1: Fraction(1)}
            ys = phi
        else:
            xs = phi
            ys = {1: Fraction(1)}
        residual = _poly_eval_series(g_regular, xs, ys, order_cap)
        new = dict(phi)
        for d, c in residual.items():
            new[d] = new.get(d, 0) - c * inv_lead
        new = _series_trunc(new, order_cap)
        if new == phi:
            break
        phi = new

    if solve_for_y:
        series = _poly_eval_series(h, {1: Fraction(1)}, phi, order_cap)
    else:
        series = _poly_eval_series(h, phi, {1: Fraction(1)}, order_cap)
    orders = sorted(d for d, c in series.items() if not _coeff_zero(c))
    if not orders:
        raise ContactOverflow(f"contact order exceeds cap {order_cap}")
    return orders[0]


# -- bivariate gcd (common-component pre-check) ----------------------------


def _as_y_poly(g: BivarPoly):
    """View g in K[x][y]: list of x-polynomials (dicts deg->coeff) by y-degree."""
    degy = max((j for _, j in g.terms), default=0)
    out = [dict() for _ in range(degy + 1)]
    for (i, j), c in g.terms.items():
        out[j][i] = c
    while out and not out[-1]:
        out.pop()
    return out


def _xp_is_zero(p) -> bool:
    return not p


def _xp_mul(a, b):
    out: dict[int, object] = {}
    for i, ca in a.items():
        for j, cb in b.items():
            d = i + j
            if d in out:
                out[d] = out[d] + ca * cb
            else:
                out[d] = ca * cb
    return {d: c for d, c in out.items() if not _coeff_zero(c)}


def _xp_sub(a, b):
    out = dict(a)
    for d, c in b.items():
        if d in out:
            v = out[d] - c
            if _coeff_zero(v):
                del out[d]
            else:
                out[d] = v
        else:
            out[d] = -c
    return out


def _xp_gcd(a, b):
    """Monic gcd of univariate polynomials over the exact field."""
    a, b = dict(a), dict(b)
    while b:
        da, db = max(a), max(b)
        if da < db:
            a, b = b, a
            continue
        lead_b = b[max(b)]
        inv = lead_b.inverse() if isinstance(lead_b, CycloNum) else Fraction(1) / lead_b
        while a and max(a) >= max(b):
            shift = max(a) - max(b)
            f = a[max(a)] * inv
            for d, c in b.items():
                t = d + shift
                v = a.get(t, 0) - f * c
                if _coeff_zero(v):
                    a.pop(t, None)
                else:
                    a[t] = v
        a, b = b, a
    if not a:
        return {}
    lead = a[max(a)]
    inv = lead.inverse() if isinstance(lead, CycloNum) else Fraction(1) / lead
    return {d: c * inv for d, c in a.items()}


def _xp_divexact(a, b):
    """Exact division in K[x]; raises if not exact."""
    if not b:
        raise ZeroDivisionError
    a = dict(a)
    out: dict[int, object] = {}
    lead_b = b[max(b)]
    inv = lead_b.inverse() if isinstance(lead_b, CycloNum) else Fraction(1) / lead_b
    while a:
        da = max(a)
        if da < max(b):
            raise ArithmeticError("non-exact division in K[x]")
        shift = da - max(b)
        f = a[da] * inv
        out[shift] = f
        for d, c in b.items():
            t = d + shift
            v = a.get(t, 0) - f * c
            if _coeff_zero(v):
                a.pop(t, None)
            else:
                a[t] = v
    return out


def _yp_content(yp):
    cont = {}
    for p in yp:
        if p:
            cont = _xp_gcd(cont, p) if cont else _xp_gcd(p, {})
    return cont


def _yp_scale_div(yp, cont):
    return [(_xp_divexact(p, cont) if p else {}) for p in yp]


def _yp_pseudo_rem(a, b):
    """Pseudo-remainder of a by b in K[x][y] (b nonzero, deg_y a >= deg_y b)."""
    a = [dict(p) for p in a]
    db = len(b) - 1
    lead_b = b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        lead_a = a[-1]
        # a := lead_b * a - lead_a * y^(da-db) * b
        new = [_xp_mul(lead_b, p) for p in a]
        shift = da - db
        for t, p in enumerate(b):
            idx = t + shift
            new[idx] = _xp_sub(new[idx], _xp_mul(lead_a, p))
        while new and _xp_is_zero(new[-1]):
            new.pop()
        a = new
    return a


def bivar_gcd(g: BivarPoly, h: BivarPoly) -> BivarPoly:
    """gcd up to a unit, used to detect shared curve components."""
    if g.is_zero():
        return h
    if h.is_zero():
        return g
    if isinstance(g.kind, tuple) or isinstance(h.kind, tuple):
        kk = (g.kind if isinstance(g.kind, tuple) else h.kind)[1]
        g = g.to_cyclotomic(kk)
        h = h.to_cyclotomic(kk)
    a, b = _as_y_poly(g), _as_y_poly(h)
    cont_a, cont_b = _yp_content(a), _yp_content(b)
    cont = _xp_gcd(cont_a, cont_b)
    pa = _yp_scale_div(a, cont_a)
    pb = _yp_scale_div(b, cont_b)
    if len(pa) < len(pb):
        pa, pb = pb, pa
    while pb:
        r = _yp_pseudo_rem(pa, pb)
        if not r:
            pa = pb
            break
        rc = _yp_content(r)
        pa, pb = pb, _yp_scale_div(r, rc)
        if len(pb) == 1:
            # y-degree 0 remainder: primitive parts are coprime in y
            pa = [{0: Fraction(1)}]
            break
    pp = pa
    if not cont:
        cont = {0: Fraction(1)}
    result: dict[tuple[int, int], object] = {}
    for jdeg, p in enumerate(pp):
        for ideg, c in p.items():
            for ci, cc in cont.items():
                key = (ideg + ci, jdeg)
                result[key] = result.get(key, 0) + c * cc
    return BivarPoly(result)


# -- curve germ classification ---------------------------------------------


@dataclass(frozen=True)
class CurveSingType:
    label: str                      # "regular" | "A" | "D4" | "unsupported"
    n: Optional[int] = None         # A-series index
    branch_count: Optional[int] = None
    mu: LocalDim = finite(0)

    def describe(self) -> str:
        if self.label == "A":
            return f"A{self.n}"
        return self.label


def _binary_cubic_discriminant(c30, c21, c12, c03):
    return (18 * c30 * c21 * c12 * c03
            - 4 * c21 ** 3 * c03
            + c21 ** 2 * c12 ** 2
            - 4 * c30 * c12 ** 3
            - 27 * c30 ** 2 * c03 ** 2)


def classify_curve_germ(g: BivarPoly, cap: int = DEFAULT_CAP) -> CurveSingType:
    """Recognise the plane-curve singularity type of V(g) at the origin."""
    from .poly import _is_zero

    if g.is_zero():
        raise ValueError("zero curve germ")
    if not _is_zero(g.constant_term()):
        raise ValueError("curve must pass through the origin")
    lx, ly = g.linear_part()
    if not (_is_zero(lx) and _is_zero(ly)):
        return CurveSingType("regular", branch_count=1, mu=finite(0))

    mu = milnor_number(g, cap)
    if not mu.is_finite:
        return CurveSingType("unsupported", branch_count=None, mu=INFINITE)
    n = int(mu)

    quad = g.homogeneous_part(2)
    if not quad.is_zero():
        # multiplicity 2 with finite Milnor number is the A-series
        branches = 1 if n % 2 == 0 else 2
        return CurveSingType("A", n=n, branch_count=branches, mu=mu)

    cubic = g.homogeneous_part(3)
    if not cubic.is_zero() and n == 4:
        disc = _binary_cubic_discriminant(cubic.coeff(3, 0), cubic.coeff(2, 1),
                                          cubic.coeff(1, 2), cubic.coeff(0, 3))
        if not _is_zero(disc):
            return CurveSingType("D4", branch_count=3, mu=mu)

    branches = newton_branch_count(g)
    return CurveSingType("unsupported", branch_count=branches, mu=mu)


# -- Newton polygon branch counting ----------------------------------------


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    pts = sorted(set(points))
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            cross = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _univ_gcd_frac(a: list, b: list):
    """gcd over the coefficient field for dense univariate lists."""
    pa = {i: c for i, c in enumerate(a) if not _coeff_zero(c)}
    pb = {i: c for i, c in enumerate(b) if not _coeff_zero(c)}
    return _xp_gcd(pa, pb)


def newton_branch_count(g: BivarPoly, depth: int = 8) -> Optional[int]:
    """Number of local analytic branches via Newton polygon recursion.

    Repeated edge roots are followed only when they lie in the coefficient
    field and the edge is unramified; otherwise the count is reported as
    unavailable (None) rather than guessed.
    """
    if depth <= 0:
        return None
    terms = dict(g.terms)
    if not terms:
        return None
    min_i = min(i for i, _ in terms)
    min_j = min(j for _, j in terms)
    count = (1 if min_i > 0 else 0) + (1 if min_j > 0 else 0)
    core = {(i - min_i, j - min_j): c for (i, j), c in terms.items()}
    if (0, 0) in core:
        return count  # remaining factor is a unit
    pts = list(core)
    hull = _lower_hull([(i, j) for i, j in pts])
    # keep only edges with negative slope (compact faces of the Newton polygon)
    for (i1, j1), (i2, j2) in zip(hull, hull[1:]):
        if j2 >= j1:
            continue
        span = gcd(i2 - i1, j1 - j2)
        qstep = (i2 - i1) // span
        pstep = (j1 - j2) // span
        edge = []
        for m in range(span + 1):
            pt = (i1 + m * qstep, j1 - m * pstep)
            edge.append(core.get(pt, Fraction(0)))
        # distinct roots via gcd with derivative
        deriv = [m * c for m, c in enumerate(edge)][1:]
        w = _univ_gcd_frac(edge, deriv)
        n_distinct = (len(edge) - 1) - (max(w) if w else 0)
        mult_part_deg = max(w) if w else 0
        if mult_part_deg == 0:
            count += n_distinct
            continue
        simple = n_distinct - _count_distinct(w)
        count += simple
        # follow repeated roots only in the unramified, in-field case
        if qstep != 1:
            return None
        roots = _field_roots(w)
        if roots is None:
            return None
        for rho in roots:
            sub = _newton_substitute(core, rho, pstep)
            subcount = newton_branch_count(sub, depth - 1)
            if subcount is None:
                return None
            count += subcount
    return count


def _count_distinct(w: dict) -> int:
    dense = [w.get(i, Fraction(0)) for i in range(max(w) + 1)]
    deriv = [m * c for m, c in enumerate(dense)][1:]
    ww = _univ_gcd_frac(dense, deriv)
    return max(w) - (max(ww) if ww else 0)


def _field_roots(w: dict):
    """All roots of the repeated part if it splits into known linear factors."""
    deg = max(w)
    if deg == 0:
        return []
    if deg == 1:
        c1, c0 = w.get(1, Fraction(0)), w.get(0, Fraction(0))
        inv = c1.inverse() if isinstance(c1, CycloNum) else Fraction(1) / c1
        return [-c0 * inv]
    return None


def _newton_substitute(core: dict, rho, pstep: int) -> BivarPoly:
    """Strict transform after y -> x^pstep (rho + y), unramified edges only."""
    x = BivarPoly.variable("x")
    y = BivarPoly.variable("y")
    shift = (BivarPoly.constant(rho) + y)
    result = BivarPoly.zero()
    xpow: dict[int, BivarPoly] = {0: BivarPoly.constant(Fraction(1))}
    spow: dict[int, BivarPoly] = {0: BivarPoly.constant(Fraction(1))}

    def power(cache, base, n):
        if n not in cache:
            cache[n] = power(cache, base, n - 1) * base
        return cache[n]

    for (i, j), c in core.items():
        term = power(xpow, x, i + pstep * j) * power(spow, shift, j)
        result = result + term.scale(c)
    # divide out the full power of x
    terms = result.terms
    if not terms:
        return result
    drop = min(i for i, _ in terms)
    return BivarPoly({(i - drop, j): c for (i, j), c in terms.items()})
