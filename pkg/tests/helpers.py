"""Shared test machinery.

The centerpiece is GammaGrid, an independent oracle for the pair covariance:
it integrates (psi - 1) f(x) conj(f(y)) over the full digit grid in exact
rational arithmetic, never touching the coefficient-space shortcut it is
meant to check.  The rest is small: random rational Walsh series, an integer
sign scan for dense polynomial grids, and the rerun policy for statistical
gates.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from netcov.counting import joint_pdf_closed_form
from netcov.walsh import Coefficient, QComplex, WalshPolynomial, index_digits


def length_vectors(s: int, total_max: int):
    """All vectors in N^s with component sum <= total_max."""
    if s == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in length_vectors(s - 1, total_max - first):
            yield (first,) + rest


def random_rational(rng: random.Random, num_abs: int = 8, den_max: int = 4) -> Fraction:
    return Fraction(rng.randint(-num_abs, num_abs), rng.randint(1, den_max))


def random_walsh_polynomial(
    rng: random.Random, b: int, s: int, k_cap: int, n_terms: int
) -> WalshPolynomial:
    """A sparse Walsh series with Gaussian-rational coefficients.

    Every index component stays below b^k_cap, so k_cap bounds the digit
    lengths; root is left at 1 so every coefficient value is exact.
    """
    zero = (0,) * s
    terms = {zero: Coefficient(random_rational(rng), random_rational(rng))}
    while len(terms) < n_terms + 1:
        l = tuple(rng.randrange(0, b ** k_cap) for _ in range(s))
        if l == zero:
            continue
        terms[l] = Coefficient(random_rational(rng), random_rational(rng))
    return WalshPolynomial(b=b, s=s, terms=terms)


class GammaGrid:
    """The digit grid at a fixed resolution with pairwise prefix bookkeeping.

    Cells are half-open base-b intervals of width b^-resolution per axis.  A
    Walsh series whose digit lengths fit inside the resolution is constant on
    each cell, and the pair density of an m-digit net is constant on each
    pair of distinct cells (and zero wherever a coordinate shares >= m
    digits), so the covariance double integral collapses to a finite sum.
    Requires resolution >= m for exactly that reason.
    """

    def __init__(self, b: int, m: int, s: int, resolution: int):
        if resolution < m:
            raise ValueError("resolution below m cannot resolve the density")
        self.b, self.m, self.s, self.res = b, m, s, resolution
        g = b ** resolution
        self.g = g
        idx = np.arange(g)
        digits = np.zeros((g, resolution), dtype=np.int64)
        for d in range(resolution):
            digits[:, d] = (idx // b ** (resolution - 1 - d)) % b
        self.axis_digits = digits

        # gamma between axis cells; the diagonal scores `resolution`, which
        # the density maps to zero because resolution >= m
        gam = np.zeros((g, g), dtype=np.int8)
        alive = np.ones((g, g), dtype=bool)
        for d in range(resolution):
            col = digits[:, d]
            alive &= col[:, None] == col[None, :]
            gam += alive
        self.cells = np.indices((g,) * s).reshape(s, -1)
        nc = g ** s
        key = np.zeros((nc, nc), dtype=np.int16)
        for j in range(s):
            cj = self.cells[j]
            key = key * (resolution + 1) + gam[cj[:, None], cj[None, :]]
        self.key = key

    def _decode(self, kidx: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.s):
            kidx, rem = divmod(kidx, self.res + 1)
            out.append(rem)
        return tuple(reversed(out))

    def _cell_values(self, f: WalshPolynomial):
        """Exact f value per cell as scaled Gaussian integers (re, im, den).

        Base 2 only: there the Walsh characters are +-1 and every value is a
        rational pair.
        """
        if f.b != 2:
            raise ValueError("exact grid evaluation is implemented for base 2")
        if f.max_digit_length() > self.res:
            raise ValueError("function digits exceed the grid resolution")
        nc = self.g ** self.s
        den = 1
        exact = {l: c.exact_value() for l, c in f.terms.items()}
        for v in exact.values():
            den = math.lcm(den, v.re.denominator, v.im.denominator)
        re = np.zeros(nc, dtype=np.int64)
        im = np.zeros(nc, dtype=np.int64)
        for l, v in exact.items():
            e = np.zeros(nc, dtype=np.int64)
            for j, lj in enumerate(l):
                lam = np.array(index_digits(2, lj, self.res), dtype=np.int64)
                e += (self.axis_digits @ lam)[self.cells[j]]
            sign = 1 - 2 * (e % 2)
            re += int(v.re * den) * sign
            im += int(v.im * den) * sign
        return re, im, den

    def covariance(self, f: WalshPolynomial) -> Fraction:
        """Exact double integral of (psi - 1) f(x) conj(f(y)) over the cube
        pair, as a rational number."""
        re, im, den = self._cell_values(f)
        bound = int(max(np.abs(re).max(initial=1), np.abs(im).max(initial=1)))
        # keeps every bincount partial sum an exact float64 integer
        assert 2 * bound * bound * self.key.size < 2 ** 53

        prod_re = np.outer(re, re) + np.outer(im, im)
        prod_im = np.outer(im, re) - np.outer(re, im)
        nkeys = (self.res + 1) ** self.s
        flat = self.key.ravel().astype(np.int64)
        sum_re = np.bincount(flat, weights=prod_re.ravel(), minlength=nkeys)
        sum_im = np.bincount(flat, weights=prod_im.ravel(), minlength=nkeys)

        total = QComplex()
        for kidx in range(nkeys):
            sr, si = int(sum_re[kidx]), int(sum_im[kidx])
            if sr == 0 and si == 0:
                continue
            psi = joint_pdf_closed_form(self.b, self.m, self.s, self._decode(kidx))
            if psi == 0:
                continue
            total = total + QComplex(Fraction(sr), Fraction(si)).scale(psi)

        vol2 = Fraction(1, self.b ** (2 * self.res * self.s))
        total = total.scale(vol2 / den ** 2)
        c0 = f.constant_coefficient().exact_value()
        cov = total - QComplex(c0.abs2())
        assert cov.im == 0, "pair symmetry must cancel the imaginary part"
        return cov.re


def first_sign_violation(coeffs: Sequence[int], den: int) -> int | None:
    """First i in 0..den with p(i/den) > 0, or None.

    coeffs are integer polynomial coefficients, constant first.  Evaluation
    is pure integer Horner on p(i/den) * den^deg, so the sign is exact.
    """
    d = len(coeffs) - 1
    scaled = [c * den ** (d - k) for k, c in enumerate(coeffs)]
    for i in range(den + 1):
        acc = scaled[d]
        for k in range(d - 1, -1, -1):
            acc = acc * i + scaled[k]
        if acc > 0:
            return i
    return None


def run_with_rerun(make_report: Callable[[int], object],
                   gates: Callable[[object], None]):
    """Apply statistical gates; on failure rerun once at 4x replications.

    Returns (report, reran).  A second failure propagates.
    """
    report = make_report(1)
    try:
        gates(report)
        return report, False
    except AssertionError:
        report = make_report(4)
        gates(report)
        return report, True
