"""Sparse exact polynomials in x1, x2 and the deformation parameter t.

CorrPoly values have FieldElement coefficients over a fixed tower and are
keyed by exponent triples (e1, e2, et).  They are immutable; every operation
returns a new value.  The deformation parameter is a genuine third variable,
so matrix entries downstream carry t symbolically until a specialization is
requested.
"""
from __future__ import annotations

from fractions import Fraction

from .numberfield import FieldElement, MixedTowerError


class ShapeError(Exception):
    """A polynomial violates the correspondence-factor shape.

    Carries the offending monomial when one exists.
    """

    def __init__(self, message, monomial=None):
        if monomial is not None:
            message = f"{message} (offending monomial x1^{monomial[0]} x2^{monomial[1]} t^{monomial[2]})"
        super().__init__(message)
        self.monomial = monomial


class ExactDivisionError(Exception):
    """Division left a nonzero remainder; the remainder is attached."""

    def __init__(self, remainder):
        super().__init__(f"nonzero remainder with {len(remainder.terms)} terms")
        self.remainder = remainder


class CorrPoly:
    """Sparse polynomial in (x1, x2, t) over a FieldTower."""

    __slots__ = ("tower", "terms")

    def __init__(self, tower, terms=None):
        self.tower = tower
        clean = {}
        if terms:
            for key, val in terms.items():
                if not isinstance(val, FieldElement):
                    val = tower.from_rational(val)
                elif val.tower is not tower:
                    raise MixedTowerError("coefficient from a different tower")
                if not val.is_zero():
                    clean[(int(key[0]), int(key[1]), int(key[2]))] = val
        self.terms = clean

    # ---- constructors ----

    @classmethod
    def zero(cls, tower):
        return cls(tower)

    @classmethod
    def monomial(cls, tower, e1, e2, et, coeff=1):
        return cls(tower, {(e1, e2, et): coeff if isinstance(coeff, FieldElement)
                           else tower.from_rational(coeff)})

    @classmethod
    def x1(cls, tower):
        return cls.monomial(tower, 1, 0, 0)

    @classmethod
    def x2(cls, tower):
        return cls.monomial(tower, 0, 1, 0)

    @classmethod
    def t(cls, tower):
        return cls.monomial(tower, 0, 0, 1)

    @classmethod
    def constant(cls, tower, c):
        return cls.monomial(tower, 0, 0, 0, c)

    # ---- basic queries ----

    def is_zero(self):
        return not self.terms

    def deg_x1(self):
        return max((k[0] for k in self.terms), default=-1)

    def deg_x2(self):
        return max((k[1] for k in self.terms), default=-1)

    def deg_t(self):
        return max((k[2] for k in self.terms), default=-1)

    def total_degree_xy(self):
        return max((k[0] + k[1] for k in self.terms), default=-1)

    def involves_t(self):
        return any(k[2] > 0 for k in self.terms)

    def constant_coefficient(self):
        return self.terms.get((0, 0, 0), self.tower.zero())

    def as_constant(self):
        """The value of a polynomial that is constant in x1, x2 and t."""
        if any(k != (0, 0, 0) for k in self.terms):
            raise ShapeError("polynomial is not constant")
        return self.constant_coefficient()

    def x1_coefficient(self, i):
        """Coefficient of x1^i, a polynomial in x2 and t."""
        return CorrPoly(self.tower, {(0, k[1], k[2]): v
                                     for k, v in self.terms.items() if k[0] == i})

    def x2_coefficient(self, j):
        """Coefficient of x2^j, a polynomial in x1 and t."""
        return CorrPoly(self.tower, {(k[0], 0, k[2]): v
                                     for k, v in self.terms.items() if k[1] == j})

    def t_coefficient(self, s):
        """Coefficient of t^s, a polynomial in x1 and x2."""
        return CorrPoly(self.tower, {(k[0], k[1], 0): v
                                     for k, v in self.terms.items() if k[2] == s})

    # ---- arithmetic ----

    def _check(self, other):
        if not isinstance(other, CorrPoly):
            raise TypeError(f"expected CorrPoly, got {type(other).__name__}")
        if other.tower is not self.tower:
            raise MixedTowerError("polynomials over different towers")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            w = terms.get(k)
            w = v if w is None else w + v
            if w.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = w
        return CorrPoly(self.tower, terms)

    def __neg__(self):
        return CorrPoly(self.tower, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.scale(other)
        self._check(other)
        terms = {}
        tower = self.tower
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
                p = v1 * v2
                w = terms.get(k)
                terms[k] = p if w is None else w + p
        return CorrPoly(tower, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = CorrPoly.constant(self.tower, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c):
        if not isinstance(c, FieldElement):
            c = self.tower.from_rational(c)
        return CorrPoly(self.tower, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, CorrPoly):
            return NotImplemented
        return self.tower is other.tower and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.tower), frozenset((k, v.coords) for k, v in self.terms.items())))

    # ---- coefficient maps ----

    def sigma(self):
        return CorrPoly(self.tower, {k: v.sigma() for k, v in self.terms.items()})

    def swap_vars(self):
        return CorrPoly(self.tower, {(k[1], k[0], k[2]): v for k, v in self.terms.items()})

    def specialize_t(self, value):
        if not isinstance(value, FieldElement):
            value = self.tower.from_rational(value)
        terms = {}
        for (e1, e2, et), v in self.terms.items():
            w = v * value ** et if et else v
            key = (e1, e2, 0)
            acc = terms.get(key)
            terms[key] = w if acc is None else acc + w
        return CorrPoly(self.tower, terms)

    def substitute_affine(self, a1, b1, a2, b2):
        """x1 <- a1*x1 + b1 and x2 <- a2*x2 + b2, all in the tower."""
        tower = self.tower
        vals = []
        for v in (a1, b1, a2, b2):
            vals.append(v if isinstance(v, FieldElement) else tower.from_rational(v))
        a1, b1, a2, b2 = vals
        if a1.is_zero() or a2.is_zero():
            raise ValueError("affine substitution requires nonzero leading parts")
        x1_img = CorrPoly(tower, {(1, 0, 0): a1, (0, 0, 0): b1})
        x2_img = CorrPoly(tower, {(0, 1, 0): a2, (0, 0, 0): b2})
        out = CorrPoly.zero(tower)
        for (e1, e2, et), v in self.terms.items():
            term = CorrPoly.monomial(tower, 0, 0, et, v)
            if e1:
                term = term * x1_img ** e1
            if e2:
                term = term * x2_img ** e2
            out = out + term
        return out

    # ---- serialization ----

    def to_records(self):
        """Term list serialization: {e1, e2, et, coeff: decimal-string vector}."""
        recs = []
        for k in sorted(self.terms):
            v = self.terms[k]
            recs.append({"e1": k[0], "e2": k[1], "et": k[2],
                         "coeff": [str(c) for c in v.coords]})
        return recs

    @classmethod
    def from_records(cls, tower, records, declared_basis=False):
        terms = {}
        for rec in records:
            key = (int(rec["e1"]), int(rec["e2"]), int(rec["et"]))
            coords = [Fraction(s) for s in rec["coeff"]]
            elem = tower.element_declared(coords) if declared_basis else tower.element(coords)
            if key in terms:
                raise ShapeError("duplicate exponent triple in term list", key)
            terms[key] = elem
        return cls(tower, terms)

    def __repr__(self):
        if not self.terms:
            return "CorrPoly(0)"
        bits = []
        for k in sorted(self.terms, reverse=True):
            v = self.terms[k]
            mono = "".join(s for s, e in (("x1^%d" % k[0], k[0]),
                                          ("x2^%d" % k[1], k[1]),
                                          ("t^%d" % k[2], k[2])) if e)
            bits.append(f"{tuple(v.coords)}{'*' + mono if mono else ''}")
        return "CorrPoly(" + " + ".join(bits) + ")"


def tau(A):
    """The involution swapping x1 and x2."""
    return A.swap_vars()


def shape_check(A, n):
    """Validate the correspondence-factor shape and return r.

    Requires: A nonzero; r := deg_x1 A = deg_x2 A = total (x1,x2)-degree;
    the x1-leading coefficient c_0 free of x2; and writing
    A = sum c_i(x2, t) x1^(r-i), each c_i of x2-degree at most i.
    ``n`` (the ambient polynomial degree) must exceed r.
    """
    if A.is_zero():
        raise ShapeError("zero polynomial has no shape")
    r = A.deg_x1()
    if A.deg_x2() != r:
        worst = max(A.terms, key=lambda k: k[1])
        raise ShapeError(f"x2-degree {A.deg_x2()} differs from x1-degree {r}", worst)
    if A.total_degree_xy() != r:
        worst = max(A.terms, key=lambda k: k[0] + k[1])
        raise ShapeError(f"total degree {A.total_degree_xy()} exceeds {r}", worst)
    for (e1, e2, et), v in A.terms.items():
        i = r - e1
        if e2 > i:
            raise ShapeError(f"coefficient c_{i} has x2-degree {e2} > {i}", (e1, e2, et))
    c0 = A.x1_coefficient(r)
    if c0.deg_x2() > 0:
        worst = max((k for k in A.terms if k[0] == r), key=lambda k: k[1])
        raise ShapeError("leading x1-coefficient involves x2", worst)
    if not 0 <= r < n:
        raise ShapeError(f"x1-degree {r} does not fit a degree-{n} correspondence")
    return r


def exact_divide(F, A):
    """Quotient B with F = A*B exactly, dividing along x1.

    The leading x1-coefficient of A must be a nonzero constant of the field;
    a nonzero remainder raises ExactDivisionError carrying it.
    """
    F._check(A)
    tower = F.tower
    r = A.deg_x1()
    lead = A.x1_coefficient(r).as_constant()
    if lead.is_zero():
        raise ShapeError("divisor has zero leading coefficient")
    lead_inv = lead.inv()
    remainder = F
    quotient = CorrPoly.zero(tower)
    while not remainder.is_zero():
        d = remainder.deg_x1()
        if d < r:
            break
        top = CorrPoly(tower, {k: v for k, v in remainder.terms.items() if k[0] == d})
        q = CorrPoly(tower, {(k[0] - r, k[1], k[2]): v * lead_inv
                             for k, v in top.terms.items()})
        quotient = quotient + q
        remainder = remainder - q * A
    if not remainder.is_zero():
        raise ExactDivisionError(remainder)
    return quotient


def map_coeffs(A, action, **params):
    """Coefficient-wise and variable transforms on a CorrPoly.

    actions: "sigma" | "negate" | "specialize" (params: t) |
             "affine" (params: a1, b1, a2, b2)
    """
    if action == "sigma":
        return A.sigma()
    if action == "negate":
        return -A
    if action == "specialize":
        return A.specialize_t(params["t"])
    if action == "affine":
        return A.substitute_affine(params["a1"], params["b1"],
                                   params["a2"], params["b2"])
    raise ValueError(f"unknown action {action!r}")
