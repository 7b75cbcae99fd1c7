"""Exact arithmetic in the cyclotomic fields Q(zeta_k), power-basis representation.

An element is stored as a vector of rationals over the basis 1, zeta, ...,
zeta^(phi(k)-1) of Q[t]/Phi_k(t), where Phi_k is the k-th cyclotomic
polynomial.  Because the representation is canonical, equality and zero
tests are exact coefficient comparisons; this is what every downstream
stratum decision relies on.

Phi_k is obtained once per conductor by dividing t^k - 1 by the cyclotomic
polynomials of the proper divisors of k, and cached for the session.  The
cache is guarded by a lock so concurrent workers can share conductors.
"""
from __future__ import annotations

import cmath
import threading
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, "CycloNum"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def euler_phi(k: int) -> int:
    if k < 1:
        raise ValueError("conductor must be >= 1")
    result, n, p = k, k, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _poly_divmod_int(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, den monic; remainder must vanish
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j, d in enumerate(den):
                num[i - dd + j] -= c * d
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


def cyclotomic_polynomial(k: int) -> list[int]:
    """Dense integer coefficients of Phi_k, constant term first."""
    poly = [-1] + [0] * (k - 1) + [1]  # t^k - 1
    for d in range(1, k):
        if k % d == 0:
            poly = _poly_divmod_int(poly, cyclotomic_polynomial(d))
    return poly


class _Conductor:
    """Per-k tables: Phi_k and reduced powers of zeta up to degree 2*phi-2."""

    def __init__(self, k: int):
        self.k = k
        self.phi = euler_phi(k)
        self.modulus = cyclotomic_polynomial(k)
        top = max(2 * self.phi - 1, k)
        powers: list[tuple[int, ...]] = []
        cur = [0] * self.phi
        cur[0] = 1
        powers.append(tuple(cur))
        for _ in range(top):
            nxt = [0] + cur[:-1]
            lead = cur[-1]
            if lead:
                # zeta^phi = -(Phi_k - t^phi), fold the overflow back
                for i in range(self.phi):
                    nxt[i] -= lead * self.modulus[i]
            cur = nxt
            powers.append(tuple(cur))
        self.zeta_powers = powers  # integer coefficient vectors


_conductors: dict[int, _Conductor] = {}
_conductor_lock = threading.Lock()


def conductor_data(k: int) -> _Conductor:
    data = _conductors.get(k)
    if data is None:
        with _conductor_lock:
            data = _conductors.get(k)
            if data is None:
                data = _Conductor(k)
                _conductors[k] = data
    return data


class CycloNum:
    """An element of Q(zeta_k), immutable, always reduced mod Phi_k."""

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs: Sequence[Fraction]):
        data = conductor_data(k)
        if len(coeffs) != data.phi:
            raise ValueError(f"need {data.phi} coefficients for conductor {k}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))

    def __setattr__(self, *args):
        raise AttributeError("CycloNum is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(k: int, value) -> "CycloNum":
        phi = conductor_data(k).phi
        return CycloNum(k, (Fraction(value),) + (_ZERO,) * (phi - 1))

    @staticmethod
    def zero(k: int) -> "CycloNum":
        return CycloNum.from_rational(k, 0)

    @staticmethod
    def one(k: int) -> "CycloNum":
        return CycloNum.from_rational(k, 1)

    @staticmethod
    def _from_raw(k: int, raw: Sequence[Fraction]) -> "CycloNum":
        """Reduce an arbitrary-length coefficient vector mod Phi_k."""
        data = conductor_data(k)
        phi = data.phi
        out = [_ZERO] * phi
        for i, c in enumerate(raw):
            if not c:
                continue
            if i < phi:
                out[i] += c
            else:
                pw = data.zeta_powers[i] if i < len(data.zeta_powers) else None
                if pw is None:
                    # fall back: reduce exponent via repeated folding
                    pw = _reduce_power(data, i)
                for t, p in enumerate(pw):
                    if p:
                        out[t] += c * p
        return CycloNum(k, out)

    # -- helpers ------------------------------------------------------

    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            if other.k != self.k:
                raise ValueError(f"mismatched conductors {self.k} and {other.k}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNum.from_rational(self.k, other)
        return NotImplemented  # type: ignore[return-value]

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return CycloNum(self.k, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.k, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return CycloNum(self.k, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        data = conductor_data(self.k)
        phi = data.phi
        raw = [_ZERO] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    raw[i + j] += a * b
        out = list(raw[:phi])
        for i in range(phi, 2 * phi - 1):
            c = raw[i]
            if c:
                pw = data.zeta_powers[i]
                for t, p in enumerate(pw):
                    if p:
                        out[t] += c * p
        return CycloNum(self.k, out)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero cyclotomic number")
        data = conductor_data(self.k)
        # extended Euclid in Q[t] between self and Phi_k
        a = list(self.coeffs)
        m = [Fraction(c) for c in data.modulus]
        r0, r1 = m, _trim(a)
        s0, s1 = [_ZERO], [_ONE]
        while _degree(r1) > 0:
            q, r = _poly_divmod_frac(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if not r1:
            raise ZeroDivisionError("element not invertible (shares factor with modulus)")
        inv_lead = _ONE / r1[0]
        coeffs = [c * inv_lead for c in s1]
        return CycloNum._from_raw(self.k, coeffs)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloNum.one(self.k)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- predicates / conversions --------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational cyclotomic number")
        return self.coeffs[0]

    def conjugate(self) -> "CycloNum":
        """Complex conjugation, zeta -> zeta^(k-1)."""
        out = CycloNum.zero(self.k)
        for i, c in enumerate(self.coeffs):
            if c:
                out = out + c * root_of_unity(self.k, (-i) % self.k)
        return out

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNum.from_rational(self.k, other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self.k == other.k and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.k, self.coeffs))

    def embed(self) -> complex:
        """Numerical value at zeta = exp(2*pi*i/k)."""
        zeta = cmath.exp(2j * cmath.pi / self.k)
        total = 0j
        power = 1 + 0j
        for c in self.coeffs:
            if c:
                total += float(c) * power
            power *= zeta
        return total

    def __repr__(self):
        return f"CycloNum(k={self.k}, {list(map(str, self.coeffs))})"


def _reduce_power(data: _Conductor, exponent: int) -> tuple[int, ...]:
    e = exponent % data.k
    if e < len(data.zeta_powers):
        return data.zeta_powers[e]
    # exponent below k always is in the table; keep a defensive path anyway
    acc = CycloNum.one(data.k)
    z = root_of_unity(data.k, 1)
    for _ in range(e):
        acc = acc * z
    return tuple(int(c) for c in acc.coeffs)  # pragma: no cover


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _degree(p: list[Fraction]) -> int:
    return len(p) - 1


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [_ZERO] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _poly_divmod_frac(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    q = [_ZERO] * max(len(num) - len(den) + 1, 0)
    dlead = den[-1]
    for i in range(len(num) - 1, len(den) - 2, -1):
        c = num[i]
        if c:
            f = c / dlead
            q[i - len(den) + 1] = f
            for j, d in enumerate(den):
                num[i - len(den) + 1 + j] -= f * d
    return q, _trim(num)


# -- public operation layer (mirrors the module contract) ----------------


def root_of_unity(k: int, j: int) -> CycloNum:
    """zeta_k^j in canonical reduced form; j is reduced mod k."""
    if k < 1:
        raise ValueError("conductor must be >= 1")
    data = conductor_data(k)
    e = j % k
    vec = data.zeta_powers[e]
    return CycloNum(k, [Fraction(c) for c in vec])


def make_root_of_unity(k: int, j: int) -> CycloNum:
    return root_of_unity(k, j)


def cyclo_add(a: CycloNum, b: CycloNum) -> CycloNum:
    return a + b


def cyclo_mul(a: CycloNum, b: CycloNum) -> CycloNum:
    return a * b


def cyclo_inv(a: CycloNum) -> CycloNum:
    return a.inverse()


def cyclo_is_zero(a: CycloNum) -> bool:
    return a.is_zero()


def embed_to_complex(a) -> complex:
    if isinstance(a, CycloNum):
        return a.embed()
    if isinstance(a, (int, Fraction)):
        return complex(Fraction(a))
    return complex(a)


def as_cyclo(value, k: int) -> CycloNum:
    """Promote a rational (or pass through a matching CycloNum) to Q(zeta_k)."""
    if isinstance(value, CycloNum):
        if value.k != k:
            raise ValueError(f"mismatched conductors {value.k} and {k}")
        return value
    return CycloNum.from_rational(k, value)
