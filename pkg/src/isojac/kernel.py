"""Integer Smith reduction, finite abelian groups, and the kernel pipeline.

The kernel of the induced isogeny is recovered from integer linear algebra:
restrict scalars through the regular representation of the order basis, take
the cokernel of the resulting block matrix for each corner size, and combine
the cokernels over the slice profile.  The e-th root of the combined group
(unique by primary decomposition) is the kernel.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .diffrep import check_split, differential_block
from .geometry import genus, slice_profile
from .numberfield import NonIntegralElementError, regular_rep

IntMatrix = list  # list[list[int]]


class InfiniteCokernelError(Exception):
    """The cokernel has free rank; the divisor chain is attached."""

    def __init__(self, divisors):
        super().__init__(f"infinite cokernel: divisor chain {divisors}")
        self.divisors = divisors


class GroupRootError(Exception):
    """No e-th root exists: some primary multiplicity is not divisible by e."""


class KernelMismatchError(Exception):
    """The two kernel derivations disagree (possible order defect)."""


def smith_divisors(M):
    """Elementary-divisor chain of an integer matrix.

    Returns min(rows, cols) nonnegative integers d_1 | d_2 | ... with zeros
    for rank deficiency; the cokernel of M is the product of Z/d_i (with
    Z/0 = Z).  Reduction pivots on the minimal absolute value.
    """
    M = [[int(x) for x in row] for row in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    size = min(rows, cols)
    divisors = []
    r = 0
    while r < size:
        piv = None
        best = None
        for i in range(r, rows):
            for j in range(r, cols):
                v = abs(M[i][j])
                if v and (best is None or v < best):
                    best, piv = v, (i, j)
        if piv is None:
            divisors.extend([0] * (size - r))
            break
        i0, j0 = piv
        if i0 != r:
            M[r], M[i0] = M[i0], M[r]
        if j0 != r:
            for row in M:
                row[r], row[j0] = row[j0], row[r]
        dirty = False
        for i in range(r + 1, rows):
            if M[i][r]:
                q = M[i][r] // M[r][r]
                if q:
                    for j in range(r, cols):
                        M[i][j] -= q * M[r][j]
                if M[i][r]:
                    dirty = True
        for j in range(r + 1, cols):
            if M[r][j]:
                q = M[r][j] // M[r][r]
                if q:
                    for i in range(r, rows):
                        M[i][j] -= q * M[i][r]
                if M[r][j]:
                    dirty = True
        if dirty:
            continue
        d = M[r][r]
        offender = None
        for i in range(r + 1, rows):
            for j in range(r + 1, cols):
                if M[i][j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(r, cols):
                M[r][j] += M[offender][j]
            continue
        divisors.append(abs(d))
        r += 1
    return divisors


@dataclass(frozen=True)
class AbelianGroup:
    """Finite abelian group as its chain of nontrivial elementary divisors."""

    divisors: tuple

    def __post_init__(self):
        for d in self.divisors:
            if d < 2:
                raise ValueError(f"nontrivial divisors only, got {d}")
        for a, b in zip(self.divisors, self.divisors[1:]):
            if b % a:
                raise ValueError(f"divisor chain broken: {a} does not divide {b}")

    @classmethod
    def from_divisors(cls, values):
        """Normalize an arbitrary multiset of moduli into a divisor chain."""
        primary = Counter()
        for v in values:
            if v == 0:
                raise InfiniteCokernelError(list(values))
            v = abs(int(v))
            if v == 1:
                continue
            for p, a in _factorint(v).items():
                primary[(p, a)] += 1
        return cls.from_primary(primary)

    @classmethod
    def from_primary(cls, primary):
        """Build from a Counter {(p, exponent): multiplicity}."""
        by_prime = {}
        for (p, a), mult in primary.items():
            by_prime.setdefault(p, []).extend([a] * mult)
        length = max((len(v) for v in by_prime.values()), default=0)
        chain = []
        for pos in range(length):
            d = 1
            for p, exps in by_prime.items():
                exps_sorted = sorted(exps, reverse=True)
                if pos < len(exps_sorted):
                    d *= p ** exps_sorted[pos]
            chain.append(d)
        return cls(tuple(sorted(chain)))

    @classmethod
    def trivial(cls):
        return cls(())

    def primary(self):
        """Counter {(p, exponent): multiplicity} of primary components."""
        out = Counter()
        for d in self.divisors:
            for p, a in _factorint(d).items():
                out[(p, a)] += 1
        return out

    def order(self):
        n = 1
        for d in self.divisors:
            n *= d
        return n

    def exponent(self):
        return self.divisors[-1] if self.divisors else 1

    def direct_sum(self, other):
        return AbelianGroup.from_primary(self.primary() + other.primary())

    def is_trivial(self):
        return not self.divisors

    def render(self):
        """Canonical string such as 'Z/8 x Z/4 x (Z/2)^2'."""
        if not self.divisors:
            return "1"
        runs = []
        for d in sorted(self.divisors, reverse=True):
            if runs and runs[-1][0] == d:
                runs[-1][1] += 1
            else:
                runs.append([d, 1])
        bits = [f"Z/{d}" if c == 1 else f"(Z/{d})^{c}" for d, c in runs]
        return " x ".join(bits)

    def to_json_obj(self):
        return {"divisors": list(self.divisors), "render": self.render()}

    def __str__(self):
        return self.render()


def _factorint(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def group_root(G, e):
    """The group H with H^e isomorphic to G (unique by primary decomposition)."""
    if e < 1:
        raise ValueError("e must be positive")
    if e == 1:
        return G
    primary = G.primary()
    root = Counter()
    for key, mult in primary.items():
        if mult % e:
            raise GroupRootError(
                f"primary component {key[0]}^{key[1]} has multiplicity {mult}, "
                f"not divisible by {e}")
        root[key] = mult // e
    return AbelianGroup.from_primary(root)


def rho_star_block(block_matrix, conjugate_too=True):
    """rho_*(D_k (+) sigma(D_k)) as one integer matrix.

    ``block_matrix`` is a k x k matrix of integral FieldElements (already
    specialized in t); the result is the 2ek x 2ek block-diagonal integer
    matrix of their regular representations alongside the sigma-conjugates.
    """
    k = len(block_matrix)
    tower = block_matrix[0][0].tower
    e = tower.e
    halves = (False, True) if conjugate_too else (False,)
    dim = len(halves) * e * k
    M = [[0] * dim for _ in range(dim)]
    for h, conj in enumerate(halves):
        off = h * e * k
        for i in range(k):
            for j in range(k):
                entry = block_matrix[i][j]
                if conj:
                    entry = entry.sigma()
                if entry.is_zero():
                    continue
                R = regular_rep(entry)
                for ii in range(e):
                    row = M[off + i * e + ii]
                    Rii = R[ii]
                    for jj in range(e):
                        if Rii[jj]:
                            row[off + j * e + jj] = Rii[jj]
    return M


def _specialized_block(A, n, t_value):
    D = differential_block(A, n)
    flat = D.specialize_t(t_value)
    dens = [c.denominator
            for row in flat for ent in row for c in ent.coords if c.denominator != 1]
    if dens:
        raise NonIntegralElementError(
            f"matrix entries not integral at t = {t_value}; try another t_value",
            dens)
    return D, flat


def gak(A, n, t_value=1, ks=None):
    """The sequence of cokernel groups G(A, k).

    For each k, form the block matrix of the regular representations of the
    k x k corner and its sigma-conjugate, and take the cokernel via the
    elementary divisors.  Entries must be integral after specializing
    t = t_value.  ``ks`` restricts the computed indices (default 1..n-1);
    returns a dict {k: AbelianGroup}.

    The order identity |G(A,k)| = |N(det D_k)|^2 is asserted for every
    computed group.
    """
    D, flat = _specialized_block(A, n, t_value)
    if ks is None:
        ks = range(1, n)
    out = {}
    for k in ks:
        corner = [row[:k] for row in flat[:k]]
        M = rho_star_block(corner)
        divisors = smith_divisors(M)
        if any(d == 0 for d in divisors):
            raise InfiniteCokernelError(divisors)
        G = AbelianGroup.from_divisors(divisors)
        det = _triangular_det(corner)
        expected_order = abs(det.norm()) ** 2
        if Fraction(G.order()) != expected_order:
            raise KernelMismatchError(
                f"|G(A,{k})| = {G.order()} but |N(det D_k)|^2 = {expected_order}")
        out[k] = G
    return out


def _triangular_det(corner):
    det = corner[0][0].tower.one()
    for i in range(len(corner)):
        det = det * corner[i][i]
    return det


def kernel_structure(A, d, n, t_value=1):
    """Kernel group of the induced isogeny at a given d.

    Combines the cokernel groups over the slice profile and takes the e-th
    root (e the field degree).  When the split certificate yields a
    squarefree m, the closed form (Z/m)^g is derived independently and the
    two routes must agree; disagreement raises KernelMismatchError (a
    possible order defect, reported rather than suppressed).
    """
    prof = slice_profile(d, n)
    tower = A.tower
    groups = gak(A, n, t_value=t_value, ks=sorted(set(prof.p)))
    total = AbelianGroup.trivial()
    for p in prof.p:
        total = total.direct_sum(groups[p])
    try:
        result = group_root(total, tower.e)
    except GroupRootError as exc:
        raise KernelMismatchError(
            f"no {tower.e}-th root of the combined cokernel (possible order "
            f"defect in the equation order): {exc}") from exc

    m = check_split(A, n)
    if m is not None and _is_squarefree(m):
        g = genus(d, n)
        closed = AbelianGroup.from_divisors([m] * g) if m > 1 else AbelianGroup.trivial()
        if closed != result:
            raise KernelMismatchError(
                f"split-certificate route gives {closed.render()} but the "
                f"cokernel route gives {result.render()} (possible order defect)")
    return result


def _is_squarefree(m):
    return all(a == 1 for a in _factorint(m).values())
