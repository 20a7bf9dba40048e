"""Simply-laced root systems with a fixed structure-constant convention.

A and D carry their standard matrix realizations (special linear and split
even orthogonal), and the sign table is read off honest integer matrix
commutators there.  The E family has no matrix model here; its signs come
from the bilinear cocycle on the root lattice fixed in sign_from_cocycle.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy


class RootSystemError(Exception):
    pass


class Root:
    """A root, held as exact coordinates in the ambient Euclidean space."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(coords)

    def __add__(self, other):
        return Root(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return Root(-a for a in self.coords)

    def __sub__(self, other):
        return Root(a - b for a, b in zip(self.coords, other.coords))

    def dot(self, other):
        return sum(a * b for a, b in zip(self.coords, other.coords))

    def norm2(self):
        return self.dot(self)

    def __eq__(self, other):
        return isinstance(other, Root) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __lt__(self, other):
        return self.coords < other.coords

    def __repr__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


class RootDatum:
    """A root system plus its sign table N_{a,b} on pairs with a+b a root."""

    def __init__(self, family, rank, roots, realization="standard", ambient=None):
        self.family = family
        self.rank = rank
        self.roots = tuple(roots)
        self.realization = realization
        self.ambient = ambient
        self.index = {r: i for i, r in enumerate(self.roots)}
        self.root_set = frozenset(self.roots)
        self._signs = {}
        self._cocycle = None

    @property
    def name(self):
        return f"{self.family}{self.rank}"

    def __contains__(self, root):
        return root in self.root_set

    def __len__(self):
        return len(self.roots)

    def matrix_size(self):
        if self.realization != "standard":
            raise RootSystemError("subsystem data has no matrix realization of its own")
        if self.family == "A":
            return self.rank + 1
        if self.family == "D":
            return 2 * self.rank
        raise RootSystemError(f"no matrix realization for family {self.family}")

    def sign(self, alpha, beta):
        """N_{alpha,beta}, defined exactly when alpha+beta is a root."""
        gamma = alpha + beta
        if alpha not in self.root_set or beta not in self.root_set:
            raise RootSystemError("sign() arguments must be roots")
        if gamma not in self.root_set:
            raise RootSystemError(f"{alpha}+{beta} is not a root")
        key = (self.index[alpha], self.index[beta])
        cached = self._signs.get(key)
        if cached is None:
            cached = self._compute_sign(alpha, beta)
            self._signs[key] = cached
        return cached

    def _compute_sign(self, alpha, beta):
        if self.realization == "sub":
            return self.ambient.sign(alpha, beta)
        if self.family in ("A", "D"):
            return _matrix_sign(self, alpha, beta)
        return _cocycle_sign(self, alpha, beta)

    def a_indices(self, root):
        """(i, j) with root = e_i - e_j, 0-based, for the A realization."""
        i = j = None
        for k, c in enumerate(root.coords):
            if c == 1:
                i = k
            elif c == -1:
                j = k
            elif c != 0:
                raise RootSystemError(f"{root} is not an A-type root")
        return i, j

    def d_pair(self, root):
        """The canonical signed pair (i, j) with |i| < |j| for a D-type root."""
        support = [(k + 1, c) for k, c in enumerate(root.coords) if c != 0]
        if len(support) != 2 or any(c not in (1, -1) for _, c in support):
            raise RootSystemError(f"{root} is not a D-type root")
        (p, cp), (q, cq) = support
        return cp * p, -cq * q

    def d_position(self, signed):
        """Index of basis vector `signed` in the (1..l, -l..-1) ordering."""
        l = self.rank
        return signed - 1 if signed > 0 else 2 * l + signed

    def __repr__(self):
        tag = "" if self.realization == "standard" else " (subsystem)"
        return f"RootDatum({self.name}, {len(self.roots)} roots{tag})"


def build_system(family, rank=None):
    """Build A_l (l>=2), D_l (l>=3) or E_l (l in 6..8) with standard roots.

    Accepts either ("A", 3) or the compact name "A3".
    """
    if rank is None:
        name = family.strip().upper()
        family, rank = name[0], int(name[1:])
    family = family.upper()
    if family == "A":
        if rank < 2:
            raise RootSystemError("A needs rank >= 2")
        roots = [
            Root(tuple(1 if k == i else -1 if k == j else 0 for k in range(rank + 1)))
            for i in range(rank + 1)
            for j in range(rank + 1)
            if i != j
        ]
    elif family == "D":
        if rank < 3:
            raise RootSystemError("D needs rank >= 3")
        roots = []
        for i in range(rank):
            for j in range(i + 1, rank):
                for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    roots.append(
                        Root(tuple(si if k == i else sj if k == j else 0 for k in range(rank)))
                    )
    elif family == "E":
        if rank not in (6, 7, 8):
            raise RootSystemError("E needs rank 6, 7 or 8")
        roots = _e8_roots()
        if rank < 8:
            walls = [Root((0,) * 6 + (1, 1))]
            if rank == 6:
                walls.append(Root((0,) * 5 + (1, -1, 0)))
            roots = [r for r in roots if all(r.dot(w) == 0 for w in walls)]
    else:
        raise RootSystemError(f"family {family} is not simply laced or not supported")
    datum = RootDatum(family, rank, sorted(roots))
    expected = {"A": rank * (rank + 1), "D": 2 * rank * (rank - 1), "E": {6: 72, 7: 126, 8: 240}.get(rank)}
    assert len(datum.roots) == expected[family], (family, rank, len(datum.roots))
    assert all(r.norm2() == 2 for r in datum.roots)
    return datum


def _e8_roots():
    roots = []
    for i in range(8):
        for j in range(i + 1, 8):
            for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                roots.append(Root(tuple(si if k == i else sj if k == j else 0 for k in range(8))))
    half = Fraction(1, 2)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(Root(tuple(half * s for s in signs)))
    return roots


def structure_constant(datum, alpha, beta):
    """N_{alpha,beta} in {+1,-1}; raises when alpha+beta is not a root."""
    return datum.sign(alpha, beta)


# ---------------------------------------------------------------------------
# signs for A and D: read off the integer matrix realization


def _unipotent_int(datum, root, xi=1):
    n = datum.matrix_size()
    m = numpy.eye(n, dtype=numpy.int64)
    if datum.family == "A":
        i, j = datum.a_indices(root)
        m[i, j] = xi
    else:
        i, j = datum.d_pair(root)
        m[datum.d_position(i), datum.d_position(j)] = xi
        m[datum.d_position(-j), datum.d_position(-i)] = -xi
    return m


def _matrix_sign(datum, alpha, beta):
    a = _unipotent_int(datum, alpha, 1)
    b = _unipotent_int(datum, beta, 1)
    ainv = _unipotent_int(datum, alpha, -1)
    binv = _unipotent_int(datum, beta, -1)
    comm = a @ b @ ainv @ binv
    for sign in (1, -1):
        if numpy.array_equal(comm, _unipotent_int(datum, alpha + beta, sign)):
            return sign
    raise RootSystemError(f"commutator of {alpha},{beta} is not a root unipotent")


# ---------------------------------------------------------------------------
# signs for E: the bilinear cocycle on the root lattice


def _positive_system(datum):
    weights = [Fraction(2) ** (datum.rank - k) for k in range(len(datum.roots[0].coords))]

    def height(r):
        return sum(w * c for w, c in zip(weights, r.coords))

    for r in datum.roots:
        if height(r) == 0:
            raise RootSystemError("degenerate height functional")
    pos = [r for r in datum.roots if height(r) > 0]
    pos_set = set(pos)
    simple = [
        g for g in pos
        if not any((g - p) in pos_set for p in pos if p != g)
    ]
    simple.sort()
    return pos, simple


def _cocycle_data(datum):
    if datum._cocycle is None:
        _, simple = _positive_system(datum)
        if len(simple) != datum.rank:
            raise RootSystemError("base extraction failed")
        dim = len(simple[0].coords)
        mat = [[simple[j].coords[i] for j in range(datum.rank)] for i in range(dim)]
        coords = {}
        for r in datum.roots:
            coords[r] = _solve_integer(mat, list(r.coords))
        bond = [
            [1 if i <= j and simple[i].dot(simple[j]) != 0 else 0 for j in range(datum.rank)]
            for i in range(datum.rank)
        ]
        datum._cocycle = (coords, bond)
    return datum._cocycle


def _cocycle_sign(datum, alpha, beta):
    coords, bond = _cocycle_data(datum)
    m, n = coords[alpha], coords[beta]
    total = 0
    for i, mi in enumerate(m):
        if not mi:
            continue
        row = bond[i]
        for j, nj in enumerate(n):
            if nj and row[j]:
                total += mi * nj
    return -1 if total % 2 else 1


def _solve_integer(mat, rhs):
    """Solve mat*x = rhs exactly; x must come out integral."""
    rows = len(mat)
    cols = len(mat[0])
    a = [[Fraction(mat[i][j]) for j in range(cols)] + [Fraction(rhs[i])] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == cols:
            break
    for i in range(r, rows):
        if a[i][cols] != 0:
            raise RootSystemError("inconsistent system")
    x = [Fraction(0)] * cols
    for k, c in enumerate(piv_cols):
        x[c] = a[k][cols]
    out = []
    for v in x:
        if v.denominator != 1:
            raise RootSystemError("non-integral solution")
        out.append(int(v))
    return out


# ---------------------------------------------------------------------------
# A3 subsystems


def a3_subsystems(datum):
    """All closed subsystems of type A_3 (span intersections of 12 roots).

    Each comes back as a RootDatum with realization "sub" whose roots are
    honest roots of the parent and whose signs are the parent's.  Spans are
    deduplicated by reduced row echelon signature before the (more costly)
    membership pass, so triples inside the same subsystem are only solved
    once.
    """
    roots = datum.roots
    n = len(roots)
    members_by_span = {}
    for i, j, k in itertools.combinations(range(n), 3):
        rref = _rref((roots[i].coords, roots[j].coords, roots[k].coords))
        if len(rref) != 3 or rref in members_by_span:
            continue
        members_by_span[rref] = frozenset(
            m for m, r in enumerate(roots) if _reduces_to_zero(r.coords, rref)
        )
    found = {}
    for members in members_by_span.values():
        if len(members) != 12 or members in found:
            continue
        sub_roots = sorted(roots[m] for m in members)
        found[members] = RootDatum("A", 3, sub_roots, realization="sub", ambient=datum)
    return [found[m] for m in sorted(found, key=sorted)]


def _rref(rows):
    """Reduced row echelon form as a canonical tuple; zero rows dropped."""
    work = [[Fraction(c) for c in row] for row in rows]
    cols = len(work[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][c]
        work[r] = [v * inv for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [v - f * w for v, w in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r])


def _reduces_to_zero(coords, rref):
    vec = [Fraction(c) for c in coords]
    cols = len(vec)
    for row in rref:
        lead = next(c for c in range(cols) if row[c] != 0)
        if vec[lead] != 0:
            f = vec[lead]
            vec = [v - f * w for v, w in zip(vec, row)]
    return all(v == 0 for v in vec)
