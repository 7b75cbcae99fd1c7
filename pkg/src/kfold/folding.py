"""Branch functions and invariants of order-k folding map-germs.

For the germ (x, y) -> (x, y^k, f(x, y)) the source double-point curve
splits into k-1 branches cut out by the scaled divided differences

    lambda_j = (f(x, y) - f(x, zeta^j y)) / ((1 - zeta^j) y),   1 <= j < k,

whose Taylor coefficients are the jet coefficients of f weighted by the
root-of-unity sums theta(s, j) = 1 + zeta^j + ... + zeta^((s-1)j).  Both
formulas are evaluated and asserted equal, which is cheap insurance against
reduction bugs in the cyclotomic layer.

From the branches the engine derives the cross-cap count, the triple-point
count, the Milnor number of the double-point curve (by branch aggregation
and, independently, as the Milnor number of the product of the branch
functions) and the number of local branches.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cyclo import CycloNum, as_cyclo, root_of_unity
from .localalg import (INFINITE, ContactOverflow, CurveSingType, LocalDim,
                       classify_curve_germ, finite, intersection_multiplicity,
                       milnor_number, quotient_dim, _quotient_dim_profile)
from .poly import BivarPoly, JetGerm


def vartheta(s: int, j: int, k: int) -> CycloNum:
    """theta(s, j) = (1 - zeta^(sj)) / (1 - zeta^j) as a finite geometric sum."""
    if j % k == 0:
        raise ValueError("j must not be divisible by k")
    if s < 0:
        raise ValueError("s must be >= 0")
    total = CycloNum.zero(k)
    for m in range(s):
        total = total + root_of_unity(k, (m * j) % k)
    return total


def lambda_branch(germ: JetGerm, j: int) -> BivarPoly:
    """Branch function lambda_j, computed two independent ways and compared."""
    k = germ.k
    if not 1 <= j <= k - 1:
        raise ValueError("branch index must satisfy 1 <= j <= k-1")
    f = germ.to_poly().to_cyclotomic(k)
    zeta_j = root_of_unity(k, j)
    shifted = f.compose_scale_y(zeta_j)
    numerator = f - shifted
    divided = numerator.exact_divide_by_y().scale(
        (CycloNum.one(k) - zeta_j).inverse())

    direct_terms: dict[tuple[int, int], CycloNum] = {}
    for (q, s), a in germ.coeffs.items():
        if s == 0:
            continue
        w = vartheta(s, j, k)
        if w.is_zero():
            continue
        key = (q - s, s - 1)
        val = w * as_cyclo(a, k)
        if key in direct_terms:
            direct_terms[key] = direct_terms[key] + val
        else:
            direct_terms[key] = val
    direct = BivarPoly(direct_terms, kind=("cyclotomic", k))

    if divided != direct:
        raise AssertionError(
            "divided-difference and theta-expansion branch functions disagree; "
            "cyclotomic reduction is broken")
    return divided


def lambda_pair_diff(germ: JetGerm, j: int, jp: int) -> BivarPoly:
    """(lambda_j - lambda_j') / y, always an exact division."""
    if j == jp:
        raise ValueError("need two distinct branch indices")
    diff = lambda_branch(germ, j) - lambda_branch(germ, jp)
    if diff.is_zero():
        return diff
    return diff.exact_divide_by_y()


def lambda_product(germ: JetGerm, max_degree: Optional[int] = None) -> BivarPoly:
    """Product of all branch functions, truncated at max_degree if given.

    For a germ with rational coefficients the product is invariant under the
    Galois action permuting the branches, so it is demoted to rational
    coefficients exactly (asserted, not assumed).
    """
    k = germ.k
    product = BivarPoly.constant(CycloNum.one(k))
    for j in range(1, k):
        lj = lambda_branch(germ, j)
        if max_degree is None:
            product = product * lj
        else:
            product = product.mul_truncated(lj, max_degree)
    if germ.coefficient_kind() == "rational":
        return product.demote_to_rational()
    return product


def crosscap_count(germ: JetGerm) -> LocalDim:
    """dim O_2 / <y^(k-1), df/dy>, the cross-cap count of a stable deformation."""
    f = germ.to_poly()
    fy = f.partial_derivative("y")
    if fy.is_zero():
        raise ValueError("df/dy vanishes identically")
    yk1 = BivarPoly.monomial(0, germ.k - 1)
    return quotient_dim([yk1, fy])


@dataclass(frozen=True)
class BranchReport:
    j: int
    branch_function: BivarPoly
    sing_type: CurveSingType
    mu: LocalDim
    branch_count: Optional[int]


@dataclass(frozen=True)
class PairContact:
    j: int
    jp: int
    contact: LocalDim
    t_pair: LocalDim


@dataclass(frozen=True)
class InvariantSet:
    C: Optional[int]
    T: Optional[int]
    muD: Optional[LocalDim]          # None means not applicable (empty curve)
    rD: Optional[int]
    finitely_determined: bool
    mu_aggregate: Optional[LocalDim] = None
    mu_direct: Optional[LocalDim] = None
    mu_consistent: Optional[bool] = None
    branches: tuple = field(default_factory=tuple)
    pairs: tuple = field(default_factory=tuple)
    immersion: bool = False


def pair_data(germ: JetGerm, j: int, jp: int) -> PairContact:
    if not j < jp:
        raise ValueError("need j < j'")
    lj = lambda_branch(germ, j)
    ljp = lambda_branch(germ, jp)
    if lj.is_zero() or ljp.is_zero():
        return PairContact(j, jp, INFINITE, INFINITE)
    contact = intersection_multiplicity(lj, ljp)
    diff = lambda_pair_diff(germ, j, jp)
    if diff.is_zero():
        t_pair = INFINITE
    else:
        t_pair = quotient_dim([lj, diff])
    return PairContact(j, jp, contact, t_pair)


def _branch_report(germ: JetGerm, j: int) -> BranchReport:
    lam = lambda_branch(germ, j)
    if lam.is_zero():
        return BranchReport(j, lam, CurveSingType("unsupported", mu=INFINITE),
                            INFINITE, None)
    from .poly import _is_zero
    if not _is_zero(lam.constant_term()):
        # unit branch function: this branch of the double-point curve is empty
        return BranchReport(j, lam, CurveSingType("regular", branch_count=0,
                                                  mu=finite(0)), finite(0), 0)
    st = classify_curve_germ(lam)
    return BranchReport(j, lam, st, st.mu, st.branch_count)


def _product_milnor(germ: JetGerm) -> LocalDim:
    """Milnor number of the full double-point function, adaptively truncated."""
    for depth in (24, 40, 56, 66):
        product = lambda_product(germ, max_degree=depth)
        if product.is_zero():
            return INFINITE
        gx = product.partial_derivative("x")
        gy = product.partial_derivative("y")
        if gx.is_zero() and gy.is_zero():
            return INFINITE
        dim, n_stab, _ = _quotient_dim_profile(
            [p for p in (gx, gy) if not p.is_zero()])
        if not dim.is_finite:
            return INFINITE
        if n_stab <= depth - 1:
            return dim
    return dim


def invariant_set(germ: JetGerm, workers: int = 1,
                  compute_direct_mu: bool = True) -> InvariantSet:
    """All topological invariants of the folding germ, with cross-checks."""
    k = germ.k
    branch_jobs = list(range(1, k))
    pair_jobs = [(j, jp) for j in range(1, k) for jp in range(j + 1, k)]

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            branches = list(pool.map(lambda j: _branch_report(germ, j),
                                     branch_jobs))
            pairs = list(pool.map(lambda p: pair_data(germ, *p), pair_jobs))
    else:
        branches = [_branch_report(germ, j) for j in branch_jobs]
        pairs = [pair_data(germ, j, jp) for j, jp in pair_jobs]

    from .poly import _is_zero
    immersion = all(not _is_zero(b.branch_function.constant_term())
                    for b in branches)

    c_dim = crosscap_count(germ)
    C = int(c_dim) if c_dim.is_finite else None

    if immersion:
        return InvariantSet(C=C, T=0, muD=None, rD=0, finitely_determined=True,
                            mu_aggregate=None, mu_direct=None,
                            mu_consistent=None, branches=tuple(branches),
                            pairs=tuple(pairs), immersion=True)

    fin = all(b.mu.is_finite for b in branches) and \
        all(p.contact.is_finite for p in pairs)

    if not fin:
        return InvariantSet(C=C, T=None, muD=INFINITE, rD=None,
                            finitely_determined=False,
                            mu_aggregate=INFINITE, mu_direct=None,
                            mu_consistent=None, branches=tuple(branches),
                            pairs=tuple(pairs))

    mu_agg = sum(int(b.mu) for b in branches) + \
        2 * sum(int(p.contact) for p in pairs) - k + 2
    mu_aggregate = finite(mu_agg)

    t_total = sum(int(p.t_pair) for p in pairs)
    if t_total % 3 != 0:
        raise RuntimeError(
            f"triple-point total {t_total} is not divisible by 3; "
            "invariant integrality violated")
    T = t_total // 3

    mu_direct = _product_milnor(germ) if compute_direct_mu else None
    mu_consistent = (mu_direct == mu_aggregate) if compute_direct_mu else None

    if any(b.branch_count is None for b in branches):
        rD = None
    else:
        rD = sum(b.branch_count for b in branches)

    return InvariantSet(C=C, T=T, muD=mu_aggregate, rD=rD,
                        finitely_determined=True, mu_aggregate=mu_aggregate,
                        mu_direct=mu_direct, mu_consistent=mu_consistent,
                        branches=tuple(branches), pairs=tuple(pairs))
