"""Exact spectral kernel of the scrambled-net pair distribution.

Everything here is rational arithmetic end to end: the Walsh coefficients of
the pair density, their closed form for t = 0 nets, the covariance polynomial
they induce under geometric shell decay, the regularized incomplete beta
function for integer parameters, the nonpositivity witness Q_s with its
telescoping difference, a four-term recurrence those values satisfy, and an
independent hypergeometric-style assembly of the same quantity.  Floating
point appears nowhere; dense scans are expected to convert at the edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Callable, Sequence

from .digits import ConfigurationError, validate_base
from .walsh import WalshIndex


def psi_hat_general(
    M: Callable[[tuple[int, ...]], int],
    l: WalshIndex,
    n: int,
) -> Fraction:
    """Walsh coefficient of the pair density from dominated-pair counts.

    M maps a componentwise bound vector (entries may be negative; the counter
    clamps them) to the number of ordered distinct pairs meeting it.  Valid
    for any scrambled digital point set, not only t = 0 nets.
    """
    if n < 2:
        raise ConfigurationError("pair density needs at least two points")
    if l.is_zero():
        raise ConfigurationError("the zero index carries the constant term 1")
    b = l.b
    k_vec = l.k_vec
    active = [j for j, rj in enumerate(l.r_vec) if rj == 1]
    r = len(active)
    total = Fraction(0)
    for bits in product((0, 1), repeat=r):
        e = [0] * l.s
        for j, bit in zip(active, bits):
            e[j] = bit
        w = sum(bits)
        shifted = tuple(kj - ej for kj, ej in zip(k_vec, e))
        term = Fraction(M(shifted), b ** w)
        total += -term if w % 2 else term
    return Fraction(1, n * (n - 1)) * Fraction(b, b - 1) ** r * total


def Psi(b: int, r: int, c: int) -> Fraction:
    """Shell coefficient of the t = 0 pair density, up to the 1/(n-1) scale.

    Depends only on the support size r and the depth excess c; the dimension
    never enters.  Always -1 at c = 0; zero once c reaches r.
    """
    validate_base(b)
    if r < 1:
        raise ConfigurationError(f"support size must be >= 1, got {r}")
    if c < 0:
        raise ConfigurationError(f"depth excess must be >= 0, got {c}")
    if c >= r:
        return Fraction(0)
    total = sum(Fraction((-b) ** i * comb(r - 1, i)) for i in range(r - c))
    return -Fraction(1 - b) ** (1 - r) * total


def psi_hat_zero_t(b: int, m: int, l_or_rc: WalshIndex | tuple[int, int]) -> Fraction:
    """Walsh coefficient of the t = 0 net pair density for a nonzero index,
    given either the index itself or its (support size, depth excess) pair."""
    validate_base(b)
    if isinstance(l_or_rc, WalshIndex):
        if l_or_rc.b != b:
            raise ConfigurationError(f"base mismatch: {l_or_rc.b} vs {b}")
        if l_or_rc.is_zero():
            raise ConfigurationError("the zero index carries the constant term 1")
        r, c = l_or_rc.r, max(l_or_rc.k - m, 0)
    else:
        r, c = l_or_rc
    return Psi(b, r, c) / (b ** m - 1)


@dataclass(frozen=True)
class CovPolynomial:
    """Exact coefficients of the scaled covariance under shell decay
    sigma_k^2 = a^r (bx)^k alpha: value(x) * alpha / (b^m - 1) is the pair
    covariance.  Stored on the (bx) monomial basis, powers 1 .. m+s-1."""

    b: int
    m: int
    s: int
    a: Fraction
    coeffs_bx: tuple[Fraction, ...]

    def coefficient_bx(self, k: int) -> Fraction:
        """Coefficient of (bx)^k."""
        if not 1 <= k <= len(self.coeffs_bx):
            return Fraction(0)
        return self.coeffs_bx[k - 1]

    def x_coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients on the plain x basis, constant term first."""
        out = [Fraction(0)]
        for k, cf in enumerate(self.coeffs_bx, start=1):
            out.append(cf * self.b ** k)
        return tuple(out)

    @property
    def degree(self) -> int:
        deg = 0
        for k, cf in enumerate(self.coeffs_bx, start=1):
            if cf != 0:
                deg = k
        return deg

    def eval(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for cf in reversed(self.coeffs_bx):
            acc = acc * (self.b * x) + cf
        return acc * (self.b * x)

    def covariance(self, x, alpha=1) -> Fraction:
        """Pair covariance of a function with these shell weights."""
        return self.eval(x) * Fraction(alpha) / (self.b ** self.m - 1)

    def to_dict(self) -> dict:
        return {
            "b": self.b, "m": self.m, "s": self.s, "a": str(self.a),
            "basis": "bx",
            "coefficients": {str(k): str(cf) for k, cf
                             in enumerate(self.coeffs_bx, start=1)},
        }


def cov_polynomial(b: int, m: int, s: int, a) -> CovPolynomial:
    """Scaled covariance polynomial under the decay sigma_k^2 = a^r (bx)^k.

    The (bx)^k coefficient aggregates every shell of total length k: choose
    the r occupied coordinates, split k into r positive parts, weight by a^r
    and the shell coefficient at depth excess max(k-m, 0).
    """
    validate_base(b)
    if m < 1 or s < 1:
        raise ConfigurationError("need m >= 1 and s >= 1")
    a = Fraction(a)
    if not 0 <= a <= 1:
        raise ConfigurationError(f"decay weight a must lie in [0,1], got {a}")
    coeffs = []
    for k in range(1, m + s):
        total = Fraction(0)
        for r in range(1, s + 1):
            ways = comb(s, r) * comb(k - 1, r - 1)
            if ways == 0:
                continue
            total += ways * a ** r * Psi(b, r, max(k - m, 0))
        coeffs.append(total)
    return CovPolynomial(b=b, m=m, s=s, a=a, coeffs_bx=tuple(coeffs))


def inc_beta(a: int, b: int, x) -> Fraction:
    """Regularized incomplete beta I_x(a, b) for integer a, b >= 1, as the
    exact binomial-sum polynomial.  Being a polynomial, it is defined for
    every rational x, which is exactly the continuation the alternating
    algebra downstream needs."""
    if a < 1 or b < 1:
        raise ConfigurationError(f"need integer parameters >= 1, got ({a}, {b})")
    x = Fraction(x)
    total = Fraction(0)
    top = a + b - 1
    for j in range(a, top + 1):
        total += comb(top, j) * x ** j * (1 - x) ** (top - j)
    return total


def inc_beta_derivative_form(a: int, b: int, x) -> Fraction:
    """The same function assembled from the derivative expansion: a leading
    x^a / (a-1)! times a falling-factorial alternating sum."""
    if a < 1 or b < 1:
        raise ConfigurationError(f"need integer parameters >= 1, got ({a}, {b})")
    x = Fraction(x)
    top = a + b - 1
    total = Fraction(0)
    for i in range(a, top + 1):
        total += (comb(top, i)
                  * Fraction(factorial(i - 1), factorial(i - a))
                  * (-x) ** (i - a))
    return x ** a / factorial(a - 1) * total


def q_s(b: int, m: int, s: int, x) -> Fraction:
    """Nonpositivity witness for the covariance at the critical decay weight
    a = (b-1)/b: an incomplete-beta combination, rational in x.

    The lone special point is x = 1/b, where the second beta term has a
    removable singularity; the limit drops it.
    """
    validate_base(b)
    if m < 1 or s < 0:
        raise ConfigurationError("need m >= 1 and s >= 0")
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ConfigurationError(f"x must lie in [0,1], got {x}")
    if x == Fraction(1, b):
        return 1 - b ** m * inc_beta(m, s + 1, x)
    head = 1 - b ** m * inc_beta(m, s + 1, x)
    tail = ((1 - x) / (1 - b * x)) ** s * inc_beta(s + 1, m, 1 - b * x)
    return head - tail


def _poly_mul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi == 0:
            continue
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return out


def _poly_add_into(acc: list[int], p: Sequence[int], scale: int) -> None:
    if len(p) > len(acc):
        acc.extend([0] * (len(p) - len(acc)))
    for i, pi in enumerate(p):
        acc[i] += scale * pi


def _poly_pow(p: Sequence[int], e: int) -> list[int]:
    out = [1]
    for _ in range(e):
        out = _poly_mul(out, p)
    return out


def q_s_polynomial(b: int, m: int, s: int) -> tuple[int, ...]:
    """The witness as an explicit polynomial in x, constant term first.

    Both beta terms expand to integer-coefficient polynomials: the head is a
    binomial tail in x, and the other term keeps a factor (1-bx)^{j-s} with
    j > s, which clears the denominator.  Coefficients are exact integers.
    """
    validate_base(b)
    if m < 1 or s < 0:
        raise ConfigurationError("need m >= 1 and s >= 0")
    one_minus_x = [1, -1]
    one_minus_bx = [1, -b]
    bx = [0, b]
    top = m + s
    acc = [1]
    for j in range(m, top + 1):
        term = _poly_mul(_poly_pow([0, 1], j), _poly_pow(one_minus_x, top - j))
        _poly_add_into(acc, term, -(b ** m) * comb(top, j))
    ones = _poly_pow(one_minus_x, s)
    for j in range(s + 1, top + 1):
        term = _poly_mul(ones, _poly_mul(_poly_pow(one_minus_bx, j - s),
                                         _poly_pow(bx, top - j)))
        _poly_add_into(acc, term, -comb(top, j))
    while len(acc) > 1 and acc[-1] == 0:
        acc.pop()
    return tuple(acc)


def delta_s(b: int, m: int, s: int, x) -> Fraction:
    """Consecutive-order difference of the witness: q_s(s-1) - q_s(s).

    Closed form x(b-1)(1-x)^{s-1} sum_{i<m} C(i+s-1, s-1)(bx)^i, manifestly
    nonnegative on [0,1], which is what drives the sign of the whole family.
    """
    validate_base(b)
    if m < 1 or s < 1:
        raise ConfigurationError("need m >= 1 and s >= 1")
    x = Fraction(x)
    total = sum(
        (comb(i + s - 1, s - 1) * (b * x) ** i for i in range(m)), Fraction(0)
    )
    return x * (b - 1) * (1 - x) ** (s - 1) * total


def delta_first_part(b: int, m: int, s: int, x) -> Fraction:
    """The single-binomial piece of the difference: the head terms of the
    two beta expansions collapse to one monomial."""
    x = Fraction(x)
    return b ** m * comb(m + s - 1, s) * x ** m * (1 - x) ** s


def delta_second_part(b: int, m: int, s: int, x) -> Fraction:
    """The tail piece at order s; the difference uses it at s and s-1."""
    if s < 0:
        raise ConfigurationError(f"need s >= 0, got {s}")
    x = Fraction(x)
    total = sum(
        (comb(i + s, s) * (b * x) ** i for i in range(m)), Fraction(0)
    )
    return (1 - x) ** s * (1 - b * x) * total


def recurrence_residual(b: int, m: int, s: int, x, values: Sequence) -> Fraction:
    """Left side of the four-term recurrence in the order s, applied to
    values (c_s, c_{s+1}, c_{s+2}, c_{s+3}) at the point x.  Exact zero when
    the values come from the covariance polynomial at a = (b-1)/b, or from
    the witness q_s."""
    if len(values) != 4:
        raise ConfigurationError("need the four consecutive values c_s..c_{s+3}")
    x = Fraction(x)
    c0, c1, c2, c3 = (Fraction(v) for v in values)
    A = (s + 2) * (b * x - 1)
    B = (m * (b * x - 1) * (x - 1) + b * s * x * (x - 2) + b * x * (x - 3)
         - s * (2 * x - 3) - 3 * x + 5)
    C = -(x - 1) * (b * m * x + b * s * x + b * x + m * x - 2 * m
                    + s * x - 3 * s + x - 4)
    D = (x - 1) ** 2 * (m + s + 1)
    return A * c3 + B * c2 + C * c1 + D * c0


def recmain_eval(b: int, m: int, s: int, x) -> Fraction:
    """The witness assembled the long way round: four hypergeometric-style
    blocks, each Gauss tail rewritten through the incomplete beta before
    evaluation.  Agrees with q_s wherever both are defined; the boundary and
    the removable point are rejected."""
    validate_base(b)
    if m < 1 or s < 0:
        raise ConfigurationError("need m >= 1 and s >= 0")
    x = Fraction(x)
    if not 0 < x < 1 or x == Fraction(1, b):
        raise ValueError(
            f"x = {x} is outside the open domain of this form; use q_s"
        )
    bx = b * x
    bxm = bx ** m
    ratio = ((x - 1) / (bx - 1)) ** s
    t1 = 1 - bxm
    t2 = -(1 - bxm) * ratio
    t3 = bxm * ((x ** m - 1) / x ** m + inc_beta(s + 1, m, 1 - x) / x ** m)
    t4 = bxm * ratio * ((1 - bxm) / bxm - inc_beta(s + 1, m, 1 - bx) / bxm)
    return t1 + t2 + t3 + t4
