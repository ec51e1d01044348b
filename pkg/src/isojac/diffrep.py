"""Representation on differentials of a correspondence factor.

Given a shape-valid factor A of Q_X(x1) - Q_Y(x2), the trace of x1^j down the
degree-r cover is the j-th power sum of the x1-roots of A, computed by the
classical power-sum recurrence from the x1-coefficients of A.  Writing the
power sums in x2 and differentiating gives a lower-triangular matrix block
whose upper-left k x k corners represent the induced map on each vertical
slice of differentials; the full representation is the direct sum of those
corners over the slice profile.
"""
from __future__ import annotations

import json

from .geometry import genus, slice_profile
from .poly import CorrPoly, shape_check, tau


class DiffBlock:
    """The maximal (n-1) x (n-1) lower-triangular block of the representation.

    Entries are CorrPoly values in t alone (x1- and x2-free).
    """

    __slots__ = ("n", "entries")

    def __init__(self, n, entries):
        self.n = n
        k = n - 1
        assert len(entries) == k and all(len(row) == k for row in entries)
        for i in range(k):
            for j in range(i + 1, k):
                assert entries[i][j].is_zero(), "block must be lower-triangular"
        self.entries = tuple(tuple(row) for row in entries)

    @property
    def tower(self):
        return self.entries[0][0].tower

    def submatrix(self, k):
        """Upper-left k x k corner; nesting makes this the slice-k block."""
        if not 1 <= k <= self.n - 1:
            raise ValueError(f"block size {k} outside 1..{self.n - 1}")
        return tuple(tuple(self.entries[i][:k]) for i in range(k))

    def diagonal(self):
        return tuple(self.entries[i][i] for i in range(self.n - 1))

    def sigma(self):
        return DiffBlock(self.n, [[e.sigma() for e in row] for row in self.entries])

    def mul(self, other):
        assert self.n == other.n
        k = self.n - 1
        tower = self.tower
        out = []
        for i in range(k):
            row = []
            for j in range(k):
                acc = CorrPoly.zero(tower)
                # both factors lower-triangular: only j..i contribute
                for l in range(j, i + 1):
                    acc = acc + self.entries[i][l] * other.entries[l][j]
                row.append(acc)
            out.append(row)
        return DiffBlock(self.n, out)

    def specialize_t(self, value):
        return [[e.specialize_t(value).as_constant() for e in row] for row in self.entries]

    def __eq__(self, other):
        if not isinstance(other, DiffBlock):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def to_json_obj(self):
        """Row-major serialization with decimal-string coordinate vectors."""
        rows = []
        for row in self.entries:
            rows.append([
                [{"et": k[2], "coeff": [str(c) for c in v.coords]}
                 for k, v in sorted(e.terms.items())]
                for e in row])
        return {"n": self.n, "entries": rows}

    def render_text(self):
        """Aligned human-readable rendering."""
        cells = [[_render_entry(e) for e in row] for row in self.entries]
        widths = [max(len(cells[i][j]) for i in range(len(cells)))
                  for j in range(len(cells))]
        lines = []
        for row in cells:
            lines.append("[ " + "  ".join(c.rjust(w) for c, w in zip(row, widths)) + " ]")
        return "\n".join(lines)

    def __repr__(self):
        return f"DiffBlock(n={self.n})"


def _render_entry(e):
    if e.is_zero():
        return "0"
    bits = []
    for (e1, e2, et), v in sorted(e.terms.items()):
        coeff = _render_coeff(v)
        if et == 0:
            bits.append(coeff)
        elif et == 1:
            bits.append(f"{coeff}*t")
        else:
            bits.append(f"{coeff}*t^{et}")
    return " + ".join(bits)


def _render_coeff(v):
    if v.is_rational():
        return str(v.rational_value())
    return "(" + ",".join(str(c) for c in v.coords) + ")"


def newton_girard(A, n):
    """Power sums t_1..t_{n-1} of the x1-roots of A, as polynomials in x2, t.

    Uses the classical recurrence t_i = -(i c_i + sum_{j<i} c_j t_{i-j}) / c_0
    with c_i := 0 for r < i < n.
    """
    r = shape_check(A, n)
    tower = A.tower
    c = [A.x1_coefficient(r - i) for i in range(r + 1)]
    c0 = c[0].as_constant()
    neg_c0_inv = -c0.inv()
    sums = [None]
    for i in range(1, n):
        acc = c[i].scale(i) if i <= r else CorrPoly.zero(tower)
        for j in range(1, min(i, r + 1)):
            acc = acc + c[j] * sums[i - j]
        sums.append(acc.scale(neg_c0_inv))
    return sums[1:]


def differential_block(A, n):
    """Algorithm computing the maximal block of the representation.

    Row i, column j holds the coefficient of x2^j in the i-th power sum;
    the x2-constant parts differentiate to zero and are dropped.
    """
    sums = newton_girard(A, n)
    tower = A.tower
    entries = []
    for i in range(1, n):
        ti = sums[i - 1]
        row = []
        for j in range(1, n):
            row.append(ti.x2_coefficient(j))
        entries.append(row)
    return DiffBlock(n, entries)


def assemble_full(D, d):
    """Block-diagonal plan for the full representation at a given d.

    Returns the list of block sizes (the slice profile), each a corner size
    of D; their sum is the genus.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    prof = slice_profile(d, D.n)
    assert all(1 <= p <= D.n - 1 for p in prof.p)
    assert sum(prof.p) == genus(d, D.n)
    return list(prof.p)


def check_split(A, n):
    """The integer m with D(A) D(tau(A)) = m I, or None.

    The product is computed with t symbolic; a scalar verdict requires every
    off-diagonal entry to vanish identically in t and every diagonal entry to
    equal the same positive integer.
    """
    D = differential_block(A, n)
    Dtau = differential_block(tau(A), n)
    prod = D.mul(Dtau)
    tower = A.tower
    m = None
    for i in range(n - 1):
        for j in range(n - 1):
            e = prod.entries[i][j]
            if i != j:
                if not e.is_zero():
                    return None
                continue
            if list(e.terms.keys()) != [(0, 0, 0)]:
                return None
            val = e.constant_coefficient()
            if not val.is_rational():
                return None
            q = val.rational_value()
            if q.denominator != 1 or q <= 0:
                return None
            if m is None:
                m = int(q)
            elif m != int(q):
                return None
    return m
