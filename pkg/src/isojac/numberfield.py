"""Exact arithmetic in number fields built as towers of monic extensions.

A tower is a chain of monic defining polynomials: the base step has rational
coefficients, and each later step has coefficients in the field built so far.
Elements are coordinate vectors of exact rationals over the power-product
basis of the tower generators (lexicographic exponent order, first generator
most significant, so the top generator's exponent is the fastest-varying
digit of the basis index).

A tower may designate its top step as the CM step, in which case the top
step must be quadratic and ``sigma`` is the nontrivial automorphism of that
step fixing everything below it.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm


class FieldError(Exception):
    """Base class for tower construction and arithmetic errors."""


class MixedTowerError(FieldError):
    """Operands belong to different towers."""


class NonIntegralElementError(FieldError):
    """An operation required integral coordinates but found denominators."""

    def __init__(self, message, denominators):
        super().__init__(f"{message}: denominators {sorted(set(denominators))}")
        self.denominators = sorted(set(denominators))


def _nested_zero(degrees):
    if not degrees:
        return Fraction(0)
    return [_nested_zero(degrees[:-1]) for _ in range(degrees[-1])]


def _nested_add(a, b, degrees):
    if not degrees:
        return a + b
    return [_nested_add(x, y, degrees[:-1]) for x, y in zip(a, b)]


def _nested_scale(c, a, degrees):
    if not degrees:
        return c * a
    return [_nested_scale(c, x, degrees[:-1]) for x in a]


class FieldTower:
    """A number field presented as a chain of monic extensions.

    ``steps`` is a list of monic polynomials, each given constant-to-leading
    with leading coefficient 1.  Base-step coefficients are rationals; step k
    coefficients are rationals or coordinate vectors over the basis of the
    tower built from the first k steps.

    Non-integral step coefficients are removed at construction by rescaling
    the offending generator (g -> D*g clears a common denominator D); the
    rescalings are recorded in ``self.rescalings`` as (step index, D) pairs
    so that integer regular representations refer to the rescaled order
    basis.  The empty tower is the rational field.
    """

    def __init__(self, steps, cm=False):
        self.degrees = []
        self.rescalings = []
        self._step_coeffs = []      # nested coefficient lists, post-rescaling
        self.steps_input = []       # flat-vector form of the (rescaled) steps
        for k, step in enumerate(steps):
            self._add_step(k, step)
        self.e = 1
        for d in self.degrees:
            self.e *= d
        self.cm = bool(cm)
        if self.cm and (not self.degrees or self.degrees[-1] != 2):
            raise FieldError("CM involution requires a quadratic top step")
        self.exponents = [()]
        for d in self.degrees:
            self.exponents = [ex + (i,) for ex in self.exponents for i in range(d)]
        self._exp_index = {ex: i for i, ex in enumerate(self.exponents)}
        self._build_tables()

    # ---- construction ------------------------------------------------

    def _add_step(self, k, step):
        if len(step) < 2:
            raise FieldError(f"step {k}: degree must be at least 1")
        lead = step[-1]
        if not (isinstance(lead, (int, Fraction)) and Fraction(lead) == 1):
            raise FieldError(f"step {k}: defining polynomial must be monic")
        coeffs = [self._coerce_coeff(k, c) for c in step[:-1]]
        scale = lcm(*(self._denominator_lcm(c) for c in coeffs), 1)
        if scale != 1:
            # replace generator g by D*g: x^d + sum c_j x^j = 0 becomes
            # y^d + sum (D^{d-j} c_j) y^j = 0 with y = D*g
            d = len(coeffs)
            coeffs = [self._nscale(Fraction(scale) ** (d - j), c)
                      for j, c in enumerate(coeffs)]
            self.rescalings.append((k, scale))
        self._step_coeffs.append(coeffs)
        self.steps_input.append([self._flatten(c, self.degrees) for c in coeffs] + [[Fraction(1)] + [Fraction(0)] * (self._sub_e() - 1)])
        self.degrees.append(len(step) - 1)

    def _sub_e(self):
        e = 1
        for d in self.degrees:
            e *= d
        return e

    def _coerce_coeff(self, k, c):
        # plain vectors refer to the generators as declared; FieldElement
        # coordinates are taken as already internal (post-rescaling)
        degrees = self.degrees
        if isinstance(c, FieldElement):
            return self._unflatten(list(c.coords), degrees)
        if isinstance(c, (int, Fraction, str)):
            z = _nested_zero(degrees)
            return self._set_const(z, Fraction(c), degrees)
        vec = [Fraction(x) for x in c]
        if len(vec) != self._sub_e():
            raise FieldError(
                f"step {k}: coefficient vector has length {len(vec)}, "
                f"expected {self._sub_e()}")
        vec = self._declared_to_internal(vec, degrees)
        return self._unflatten(vec, degrees)

    def _declared_to_internal(self, vec, degrees):
        if not self.rescalings:
            return vec
        exps = [()]
        for d in degrees:
            exps = [ex + (i,) for ex in exps for i in range(d)]
        scales = {idx: s for idx, s in self.rescalings if idx < len(degrees)}
        out = []
        for x, ex in zip(vec, exps):
            div = 1
            for idx, s in scales.items():
                div *= s ** ex[idx]
            out.append(x / div)
        return out

    def _denominator_lcm(self, nested):
        if isinstance(nested, Fraction):
            return nested.denominator
        return lcm(*(self._denominator_lcm(x) for x in nested), 1)

    def _nscale(self, c, nested):
        if isinstance(nested, Fraction):
            return c * nested
        return [self._nscale(c, x) for x in nested]

    def _set_const(self, z, v, degrees):
        if not degrees:
            return v
        z[0] = self._set_const(z[0], v, degrees[:-1])
        return z

    def _unflatten(self, vec, degrees):
        if not degrees:
            return vec[0]
        d = degrees[-1]
        return [self._unflatten(vec[top::d], degrees[:-1]) for top in range(d)]

    def _flatten(self, nested, degrees):
        if not degrees:
            return [nested]
        d = degrees[-1]
        subs = [self._flatten(x, degrees[:-1]) for x in nested]
        return [subs[top][lower] for lower in range(len(subs[0])) for top in range(d)]

    def _nmul(self, a, b, height):
        if height == 0:
            return a * b
        sub = self.degrees[:height - 1]
        d = self.degrees[height - 1]
        prod = [_nested_zero(sub) for _ in range(2 * d - 1)]
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = _nested_add(prod[i + j], self._nmul(x, y, height - 1), sub)
        coeffs = self._step_coeffs[height - 1]
        for m in range(2 * d - 2, d - 1, -1):
            top = prod[m]
            for j in range(d):
                corr = self._nmul(_nested_scale(Fraction(-1), coeffs[j], sub), top,
                                  height - 1)
                prod[m - d + j] = _nested_add(prod[m - d + j], corr, sub)
        return prod[:d]

    def _one_nested(self):
        return self._set_const(_nested_zero(self.degrees), Fraction(1), self.degrees)

    def _gen_nested(self, g):
        def build(height):
            degs = self.degrees[:height]
            z = _nested_zero(degs)
            if height - 1 == g:
                z[1] = self._set_const(_nested_zero(degs[:-1]), Fraction(1), degs[:-1])
                return z
            z[0] = build(height - 1)
            return z
        return build(len(self.degrees))

    def _basis_nested(self, ex):
        h = len(self.degrees)
        out = self._one_nested()
        for g, a in enumerate(ex):
            gn = self._gen_nested(g)
            for _ in range(a):
                out = self._nmul(out, gn, h)
        return out

    def _build_tables(self):
        h = len(self.degrees)
        basis = [self._basis_nested(ex) for ex in self.exponents]
        self._table = [
            [tuple(self._flatten(self._nmul(basis[i], basis[j], h), self.degrees))
             for j in range(self.e)]
            for i in range(self.e)]
        self._sigma_images = None
        if self.cm:
            p = self._step_coeffs[-1][1]
            sub = self.degrees[:-1]
            sig_gen = [_nested_scale(Fraction(-1), p, sub),
                       self._set_const(_nested_zero(sub), Fraction(-1), sub)]
            images = []
            for i, ex in enumerate(self.exponents):
                if ex[-1] == 0:
                    images.append(tuple(self._flatten(basis[i], self.degrees)))
                else:
                    low = self._basis_nested(ex[:-1] + (0,))
                    images.append(tuple(self._flatten(self._nmul(low, sig_gen, h),
                                                      self.degrees)))
            self._sigma_images = images

    # ---- element constructors ------------------------------------------

    def zero(self):
        return FieldElement(self, (Fraction(0),) * self.e)

    def one(self):
        return self.from_rational(1)

    def from_rational(self, c):
        v = [Fraction(0)] * self.e
        v[0] = Fraction(c)
        return FieldElement(self, tuple(v))

    def element(self, coords):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != self.e:
            raise FieldError(f"coordinate vector has length {len(coords)}, expected {self.e}")
        return FieldElement(self, coords)

    def element_declared(self, coords):
        """Element from coordinates over the basis of the generators as declared
        (before integrality rescaling)."""
        coords = [Fraction(c) for c in coords]
        if len(coords) != self.e:
            raise FieldError(f"coordinate vector has length {len(coords)}, expected {self.e}")
        return FieldElement(self, tuple(self._declared_to_internal(coords, self.degrees)))

    def gen(self, k):
        """The (possibly rescaled) generator of step k as a field element."""
        ex = tuple(1 if i == k else 0 for i in range(len(self.degrees)))
        v = [Fraction(0)] * self.e
        v[self._exp_index[ex]] = Fraction(1)
        return FieldElement(self, tuple(v))

    def original_gen(self, k):
        """The generator as declared, before any integrality rescaling."""
        scale = next((s for idx, s in self.rescalings if idx == k), 1)
        return self.gen(k) / scale

    def basis_element(self, i):
        v = [Fraction(0)] * self.e
        v[i] = Fraction(1)
        return FieldElement(self, tuple(v))

    # ---- raw coordinate arithmetic --------------------------------------

    def _mul(self, a, b):
        out = [Fraction(0)] * self.e
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                c = x * y
                row = self._table[i][j]
                for k in range(self.e):
                    if row[k]:
                        out[k] += c * row[k]
        return tuple(out)

    def _sigma(self, a):
        if not self.cm:
            return tuple(a)
        out = [Fraction(0)] * self.e
        for i, x in enumerate(a):
            if not x:
                continue
            im = self._sigma_images[i]
            for k in range(self.e):
                if im[k]:
                    out[k] += x * im[k]
        return tuple(out)

    def _regrep_rows(self, a):
        return [self._mul(self._unit(i), a) for i in range(self.e)]

    def _unit(self, i):
        v = [Fraction(0)] * self.e
        v[i] = Fraction(1)
        return tuple(v)

    def _inv(self, a):
        if all(x == 0 for x in a):
            raise ZeroDivisionError("inversion of zero field element")
        rows = self._regrep_rows(a)
        n = self.e
        aug = [[rows[j][i] for j in range(n)] + [Fraction(int(i == 0))] for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise ZeroDivisionError("zero divisor in tower arithmetic")
            aug[col], aug[piv] = aug[piv], aug[col]
            pv = aug[col][col]
            aug[col] = [x / pv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return tuple(aug[i][n] for i in range(n))

    def _norm(self, a):
        rows = [list(r) for r in self._regrep_rows(a)]
        n = self.e
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                det = -det
            pv = rows[col][col]
            det *= pv
            for r in range(col + 1, n):
                if rows[r][col]:
                    f = rows[r][col] / pv
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
        return det

    def __repr__(self):
        degs = "x".join(str(d) for d in self.degrees) or "1"
        return f"FieldTower(degree {self.e} = {degs}, cm={self.cm})"


class FieldElement:
    """An element of a FieldTower: exact rational coordinates over the basis."""

    __slots__ = ("tower", "coords")

    def __init__(self, tower, coords):
        self.tower = tower
        self.coords = coords

    # -- helpers --

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.tower is not self.tower:
                raise MixedTowerError("operands from different towers")
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower.from_rational(other)
        return None

    # -- arithmetic --

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.tower,
                            tuple(x + y for x, y in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.tower, tuple(-x for x in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.tower,
                            tuple(x - y for x, y in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return FieldElement(self.tower, tuple(c * x for x in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.tower, self.tower._mul(self.coords, o.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return FieldElement(self.tower, tuple(x / c for x in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        out = self.tower.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash((id(self.tower), self.coords))

    def __bool__(self):
        return any(self.coords)

    def inv(self):
        return FieldElement(self.tower, self.tower._inv(self.coords))

    def sigma(self):
        return FieldElement(self.tower, self.tower._sigma(self.coords))

    def is_zero(self):
        return not any(self.coords)

    def is_rational(self):
        return not any(self.coords[1:])

    def rational_value(self):
        if not self.is_rational():
            raise FieldError(f"{self!r} is not rational")
        return self.coords[0]

    def is_integral(self):
        return all(x.denominator == 1 for x in self.coords)

    def norm(self):
        """Norm down to the rationals (determinant of multiplication by self)."""
        return self.tower._norm(self.coords)

    def __repr__(self):
        return f"FieldElement{self.coords}"


def make_field(steps, cm=False):
    """Build a FieldTower from monic defining polynomials.

    Each step is a list of coefficients, constant first, leading coefficient 1.
    With ``cm=True`` the top step must be quadratic and sigma is defined as its
    nontrivial automorphism.  ``make_field([])`` is the rational field.
    """
    return FieldTower(steps, cm=cm)


def apply_sigma(a):
    """Image of a under the CM involution (identity on non-CM towers)."""
    return a.sigma()


def regular_rep(a):
    """Integer matrix of multiplication by a on the order basis.

    Row i holds the coordinates of (basis_i * a).  Raises
    NonIntegralElementError when a is not integral over the order basis.
    """
    tower = a.tower
    rows = tower._regrep_rows(a.coords)
    dens = [x.denominator for row in rows for x in row if x.denominator != 1]
    if dens:
        raise NonIntegralElementError("element is not integral in the order basis", dens)
    return [[int(x) for x in row] for row in rows]


def solve_linear(tower, matrix, rhs):
    """Solve M x = rhs over the tower field by Gaussian elimination.

    ``matrix`` is a list of rows of FieldElements, ``rhs`` a list of
    FieldElements.  Returns a coordinate list for x (free variables set to
    zero) or None when the system is inconsistent.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not aug[i][c].is_zero()), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][c].inv()
        aug[r] = [inv * x for x in aug[r]]
        for i in range(nrows):
            if i != r and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not aug[i][ncols].is_zero():
            return None
    sol = [tower.zero() for _ in range(ncols)]
    for i, c in enumerate(pivots):
        sol[c] = aug[i][ncols]
    return sol


def embedding(src, dst, gen_images):
    """Field embedding src -> dst determined by images of the generators.

    ``gen_images[k]`` must be a root in dst of the k-th (rescaled) step of
    src; this is verified.  Returns a function mapping FieldElements of src
    to FieldElements of dst.
    """
    if len(gen_images) != len(src.degrees):
        raise FieldError("one image per tower generator required")

    basis_images = []
    for ex in src.exponents:
        img = dst.one()
        for g, a in enumerate(ex):
            for _ in range(a):
                img = img * gen_images[g]
        basis_images.append(img)

    # check each step polynomial annihilates its generator image
    for k, step in enumerate(src.steps_input):
        acc = dst.zero()
        power = dst.one()
        for coeff in step:
            c_img = dst.zero()
            for i, c in enumerate(coeff):
                if c:
                    c_img = c_img + _sub_basis_image(src, dst, gen_images, k, i) * c
            acc = acc + c_img * power
            power = power * gen_images[k]
        if not acc.is_zero():
            raise FieldError(f"generator image {k} does not satisfy its step polynomial")

    def phi(a):
        if a.tower is not src:
            raise MixedTowerError("element not from the source tower")
        out = dst.zero()
        for i, c in enumerate(a.coords):
            if c:
                out = out + basis_images[i] * c
        return out

    return phi


def _sub_basis_image(src, dst, gen_images, k, flat_index):
    """Image of the flat_index-th basis element of the height-k subtower."""
    sub_exps = [()]
    for d in src.degrees[:k]:
        sub_exps = [ex + (i,) for ex in sub_exps for i in range(d)]
    ex = sub_exps[flat_index]
    img = dst.one()
    for g, a in enumerate(ex):
        for _ in range(a):
            img = img * gen_images[g]
    return img
