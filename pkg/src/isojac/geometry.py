"""Newton-polygon combinatorics and the moduli-count checker.

The curves in scope live on the toric surface of the triangle with vertices
(0,0), (n,0), (0,d); their geometric genus is the number of strictly interior
lattice points, which the closed formula below counts.  The vertical-slice
profile drives the block decomposition of the representation on
differentials.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .numberfield import FieldElement


VERDICT_D = "d-moduli"
VERDICT_D_MINUS_1 = "(d-1)-moduli"
VERDICT_VIOLATED = "hypotheses-violated"


@dataclass(frozen=True)
class SliceProfile:
    d: int
    n: int
    B: int
    p: tuple
    g: int

    def __post_init__(self):
        assert sum(self.p) == self.g
        assert all(1 <= pi <= self.n - 1 for pi in self.p)
        assert self.B == len(self.p)


@dataclass(frozen=True)
class ModuliReport:
    verdict: str
    kappa: FieldElement | None = None
    witness_index: int | None = None
    failed_condition: str | None = None

    @property
    def ok(self):
        return self.verdict != VERDICT_VIOLATED


def genus(d, n):
    """((n-1)(d-1) - (gcd(n,d) - 1)) / 2, always an integer."""
    if d < 1 or n < 1:
        raise ValueError("d and n must be positive")
    num = (n - 1) * (d - 1) - (gcd(n, d) - 1)
    assert num % 2 == 0
    return num // 2


def interior_points(d, n):
    """Integer points strictly inside the triangle d*l1 + n*l2 < d*n, l1,l2 > 0."""
    if d < 1 or n < 1:
        raise ValueError("d and n must be positive")
    pts = []
    for l1 in range(1, n):
        for l2 in range(1, d):
            if d * l1 + n * l2 < d * n:
                pts.append((l1, l2))
    return pts


def _ceil_div(a, b):
    return -(-a // b)


def slice_count(d, n):
    """Number of vertical slices: ceil((1 - 1/n) d) - 1."""
    return _ceil_div(d * (n - 1), n) - 1


def slice_size(d, n, i):
    """Size of the i-th slice: ceil((1 - i/d) n) - 1."""
    return _ceil_div(n * (d - i), d) - 1


def slice_profile(d, n):
    g = genus(d, n)
    if g < 1:
        raise ValueError(f"genus {g} < 1: no slice profile for (d, n) = ({d}, {n})")
    B = slice_count(d, n)
    p = tuple(slice_size(d, n, i) for i in range(1, B + 1))
    return SliceProfile(d=d, n=n, B=B, p=p, g=g)


def moduli_count(f, n, d=None):
    """Moduli verdict for the family P_d(y) = f(x) from the defining coefficients.

    ``f`` is a univariate CorrPoly in x1 with t allowed; writing
    f = sum f_i x^(n-i), the hypotheses are (i) f_0 = 1, (ii) f_1 = 0,
    (iii) f_2 != 0, (iv) f_3 = kappa * f_2 with kappa a constant of the field.
    Verdict is d-moduli when some f_i (2 <= i < n) genuinely involves t,
    else (d-1)-moduli; the verdict is symbolic in d.  When ``d`` is supplied
    the genus hypothesis g_n(d) > 1 is enforced.
    """
    if f.deg_x1() != n:
        raise ValueError(f"expected degree {n}, got {f.deg_x1()}")
    if f.deg_x2() > 0:
        raise ValueError("f must be univariate in x1 (t allowed)")
    if d is not None and genus(d, n) <= 1:
        raise ValueError(f"genus hypothesis fails: g_{n}({d}) = {genus(d, n)} <= 1")

    coeff = [f.x1_coefficient(n - i) for i in range(n + 1)]
    f0 = coeff[0]
    if f0.is_zero() or f0.involves_t() or not (f0.constant_coefficient() == f.tower.one()):
        return ModuliReport(VERDICT_VIOLATED, failed_condition="(i) f_0 = 1")
    if not coeff[1].is_zero():
        return ModuliReport(VERDICT_VIOLATED, failed_condition="(ii) f_1 = 0")
    f2, f3 = coeff[2], coeff[3]
    if f2.is_zero():
        return ModuliReport(VERDICT_VIOLATED, failed_condition="(iii) f_2 != 0")
    kappa = _constant_ratio(f3, f2)
    if kappa is None:
        return ModuliReport(VERDICT_VIOLATED,
                            failed_condition="(iv) f_3 = kappa f_2 with kappa in K")

    witness = next((i for i in range(2, n) if coeff[i].involves_t()), None)
    if witness is not None:
        return ModuliReport(VERDICT_D, kappa=kappa, witness_index=witness)
    return ModuliReport(VERDICT_D_MINUS_1, kappa=kappa)


def _constant_ratio(f3, f2):
    """kappa in the field with f3 = kappa * f2, or None."""
    if f3.is_zero():
        return f2.tower.zero()
    # candidate from any shared monomial
    probe = next(iter(f2.terms))
    if probe not in f3.terms:
        return None
    kappa = f3.terms[probe] * f2.terms[probe].inv()
    if (f2.scale(kappa) - f3).is_zero():
        return kappa
    return None
