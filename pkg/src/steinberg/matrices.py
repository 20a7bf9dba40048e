"""Exact matrix models for the A and D families.

Matrices are sparse payload dictionaries over a rings.Ring.  Everything
invertible here is a product of elementary factors, and we keep that
factorization around: inverses and contragredients are computed by
transpose-inverting factors, never by general matrix inversion, so they
stay exact over every ring class.
"""

from __future__ import annotations

from .rings import Elem, UnsupportedRingError, lin_solve


class MatrixError(Exception):
    pass


class Inconclusive(Exception):
    """A search hit its cap; the answer is unknown, not `False`."""


class RVector:
    __slots__ = ("ring", "entries")

    def __init__(self, ring, entries):
        self.ring = ring
        self.entries = tuple(ring.el(x) for x in entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other):
        return RVector(self.ring, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return RVector(self.ring, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return RVector(self.ring, [-a for a in self.entries])

    def scale(self, c):
        c = self.ring.el(c)
        return RVector(self.ring, [a * c for a in self.entries])

    def dot(self, other):
        acc = self.ring.zero()
        for a, b in zip(self.entries, other.entries):
            acc = acc + a * b
        return acc

    def is_zero(self):
        return all(a.is_zero() for a in self.entries)

    def zero_positions(self):
        return [i for i, a in enumerate(self.entries) if a.is_zero()]

    def key(self):
        return tuple(a.payload for a in self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, RVector)
            and self.ring is other.ring
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash((id(self.ring), self.key()))

    def to_literal(self):
        return [self.ring.to_literal(a.payload) for a in self.entries]

    def __repr__(self):
        return "vec[" + ",".join(repr(a) for a in self.entries) + "]"


def vector(ring, entries):
    return RVector(ring, entries)


def basis_vector(ring, n, k, scale=1):
    return RVector(ring, [scale if i == k else 0 for i in range(n)])


class RMatrix:
    """Sparse square matrix; `factors` is the optional elementary provenance.

    Factors are ("unip", datum, root, xi) or ("tv", u, v); a product of
    provenance-carrying matrices carries the concatenated factor list.
    """

    __slots__ = ("ring", "n", "data", "factors", "_rows")

    def __init__(self, ring, n, data, factors=None):
        self.ring = ring
        self.n = n
        self.data = data  # {(i, j): payload}, zero payloads never stored
        self.factors = factors
        self._rows = None

    def rows(self):
        if self._rows is None:
            rows = {}
            for (i, j), p in self.data.items():
                rows.setdefault(i, []).append((j, p))
            self._rows = rows
        return self._rows

    def entry(self, i, j):
        return Elem(self.ring, self.data.get((i, j), self.ring.zero_p))

    def __mul__(self, other):
        if isinstance(other, RVector):
            return self.apply(other)
        if self.ring is not other.ring or self.n != other.n:
            raise MatrixError("matrix shape/ring mismatch")
        ring = self.ring
        padd, pmul, pz = ring.p_add, ring.p_mul, ring.zero_p
        orows = other.rows()
        out = {}
        for (i, k), a in self.data.items():
            row = orows.get(k)
            if not row:
                continue
            for j, b in row:
                key = (i, j)
                cur = out.get(key)
                v = pmul(a, b)
                out[key] = v if cur is None else padd(cur, v)
        out = {k: v for k, v in out.items() if v != pz}
        fac = None
        if self.factors is not None and other.factors is not None:
            fac = self.factors + other.factors
        return RMatrix(ring, self.n, out, fac)

    def apply(self, vec):
        if len(vec) != self.n:
            raise MatrixError("matrix/vector size mismatch")
        ring = self.ring
        padd, pmul, pz = ring.p_add, ring.p_mul, ring.zero_p
        out = [pz] * self.n
        vp = [x.payload for x in vec.entries]
        for (i, j), a in self.data.items():
            if vp[j] != pz:
                out[i] = padd(out[i], pmul(a, vp[j]))
        return RVector(ring, [Elem(ring, p) for p in out])

    def transpose(self):
        return RMatrix(self.ring, self.n, {(j, i): p for (i, j), p in self.data.items()})

    def is_identity(self):
        if len(self.data) != self.n:
            return False
        one = self.ring.one_p
        return all(self.data.get((i, i)) == one for i in range(self.n))

    def key(self):
        return (self.n, tuple(sorted((ij, p) for ij, p in self.data.items())))

    def __eq__(self, other):
        return (
            isinstance(other, RMatrix)
            and self.ring is other.ring
            and self.n == other.n
            and self.data == other.data
        )

    def __hash__(self):
        return hash((id(self.ring), self.key()))

    def to_dense(self):
        return [
            [self.ring.to_literal(self.data.get((i, j), self.ring.zero_p)) for j in range(self.n)]
            for i in range(self.n)
        ]

    def __repr__(self):
        body = "; ".join(
            " ".join(self.ring.p_repr(self.data.get((i, j), self.ring.zero_p)) for j in range(self.n))
            for i in range(self.n)
        )
        return f"[{body}]"


def identity_matrix(ring, n):
    return RMatrix(ring, n, {(i, i): ring.one_p for i in range(n)}, factors=())


def unipotent(datum, root, xi):
    """The elementary root unipotent for the standard A/D realization."""
    n = datum.matrix_size()
    ring = xi.ring
    data = {(i, i): ring.one_p for i in range(n)}
    if not xi.is_zero():
        if datum.family == "A":
            i, j = datum.a_indices(root)
            data[(i, j)] = xi.payload
        else:
            i, j = datum.d_pair(root)
            data[(datum.d_position(i), datum.d_position(j))] = xi.payload
            data[(datum.d_position(-j), datum.d_position(-i))] = ring.p_neg(xi.payload)
    return RMatrix(ring, n, data, factors=(("unip", datum, root, xi),))


def elementary_a(ring, n, i, j, r):
    """t_ij(r) = 1 + r*e_ij over any ring, 0-based indices."""
    r = ring.el(r)
    data = {(k, k): ring.one_p for k in range(n)}
    if not r.is_zero():
        if i == j:
            raise MatrixError("off-diagonal transvection needs i != j")
        data[(i, j)] = r.payload
    return RMatrix(ring, n, data, factors=(("ij", n, i, j, r),))


def transvection(u, v):
    """1 + u*v^t.  Orthogonality is the callers' business, not checked here."""
    if len(u) != len(v):
        raise MatrixError("transvection needs equal-length vectors")
    if u.ring is not v.ring:
        raise MatrixError("transvection vectors must share a ring")
    ring = u.ring
    n = len(u)
    data = {(i, i): ring.one_p for i in range(n)}
    for i, a in enumerate(u.entries):
        if a.is_zero():
            continue
        for j, b in enumerate(v.entries):
            p = ring.p_mul(a.payload, b.payload)
            if p == ring.zero_p:
                continue
            cur = data.get((i, j), ring.zero_p)
            s = ring.p_add(cur, p)
            if s == ring.zero_p:
                data.pop((i, j), None)
            else:
                data[(i, j)] = s
    return RMatrix(ring, n, data, factors=(("tv", u, v),))


def _factor_inverse(f):
    kind = f[0]
    if kind == "unip":
        _, datum, root, xi = f
        return unipotent(datum, root, -xi)
    if kind == "ij":
        _, n, i, j, r = f
        return elementary_a(r.ring, n, i, j, -r)
    if kind == "tv":
        _, u, v = f
        return transvection(u, -v)
    raise MatrixError(f"unknown factor {kind}")


def _factor_contragredient(f):
    kind = f[0]
    if kind == "unip":
        _, datum, root, xi = f
        if datum.family == "A":
            # t_ij(x)* = t_ji(-x)
            return unipotent(datum, -root, -xi)
        # D: (t_(i,j)(x)^t)^-1 = t_(j,i)(-x), which in the canonical pair
        # convention for -alpha is the unipotent at -alpha with coefficient +x
        return unipotent(datum, -root, xi)
    if kind == "ij":
        _, n, i, j, r = f
        return elementary_a(r.ring, n, j, i, -r)
    if kind == "tv":
        _, u, v = f
        if not u.dot(v).is_zero():
            raise MatrixError("contragredient of t(u,v) needs u^t v = 0")
        return transvection(v, -u)
    raise MatrixError(f"unknown factor {kind}")


def inverse(m):
    """Inverse of a product of elementary factors (reverse and negate)."""
    if m.factors is None:
        raise MatrixError("no elementary factorization available for inversion")
    acc = identity_matrix(m.ring, m.n)
    for f in reversed(m.factors):
        acc = acc * _factor_inverse(f)
    return acc


def contragredient(m):
    """(M^t)^-1, computed factor by factor; M must carry its factorization."""
    if m.factors is None:
        raise MatrixError("no elementary factorization available for contragredient")
    acc = identity_matrix(m.ring, m.n)
    for f in m.factors:
        acc = acc * _factor_contragredient(f)
    return acc


def gram_hyperbolic(ring, rank):
    """The anti-diagonal Gram matrix of the split even orthogonal form."""
    n = 2 * rank
    return RMatrix(ring, n, {(i, n - 1 - i): ring.one_p for i in range(n)})


def is_unimodular(u):
    """A certificate w with w^t u = 1, or None; may raise UnsupportedRingError."""
    w = lin_solve(list(u.entries), u.ring.one())
    return None if w is None else RVector(u.ring, w)


def elementary_orbit_witness(u, node_cap=10**6):
    """Letters (i, j, r) with t_(i1 j1)(r1)*...*e_1 == u, or None.

    Finite rings run a breadth-first search over the orbit of e_1; the
    integers use Euclidean reduction.  Exceeding the node cap raises
    Inconclusive rather than answering.
    """
    ring = u.ring
    n = len(u)
    if n < 3:
        raise MatrixError("orbit witness needs n >= 3")
    e1 = basis_vector(ring, n, 0)
    if u == e1:
        return []
    if ring.is_finite:
        return _orbit_bfs(u, node_cap)
    if type(ring).__name__ == "ZRing":
        return _orbit_euclid(u)
    raise UnsupportedRingError(f"orbit search over {ring.spec} is not supported")


def _orbit_bfs(u, node_cap):
    ring = u.ring
    n = len(u)
    target = u.key()
    start = tuple(ring.one_p if i == 0 else ring.zero_p for i in range(n))
    if target == start:
        return []
    gens = []
    nonzero = [p for p in ring.payloads() if p != ring.zero_p]
    for i in range(n):
        for j in range(n):
            if i != j:
                for r in nonzero:
                    gens.append((i, j, r))
    parent = {start: None}
    frontier = [start]
    padd, pmul = ring.p_add, ring.p_mul
    while frontier:
        nxt = []
        for vec in frontier:
            for g in gens:
                i, j, r = g
                if vec[j] == ring.zero_p:
                    continue
                newv = list(vec)
                newv[i] = padd(newv[i], pmul(r, vec[j]))
                newv = tuple(newv)
                if newv in parent:
                    continue
                parent[newv] = (vec, g)
                if newv == target:
                    return _walk_parents(ring, parent, newv)
                if len(parent) > node_cap:
                    raise Inconclusive("orbit search cap exceeded")
                nxt.append(newv)
        frontier = nxt
    return None


def _walk_parents(ring, parent, state):
    letters = []
    while parent[state] is not None:
        state, (i, j, r) = parent[state]
        letters.append((i, j, Elem(ring, r)))
    return letters


def _orbit_euclid(u):
    ring = u.ring
    vals = [x.payload for x in u.entries]
    n = len(vals)
    ops = []  # ops applied to u, in application order, driving it to e_1

    def apply(i, j, r):
        vals[i] += r * vals[j]
        ops.append((i, j, r))

    for j in range(1, n):
        # Euclid between slot 0 and slot j, always shrinking the larger one
        while vals[j] != 0:
            if vals[0] == 0:
                apply(0, j, 1)
            if abs(vals[j]) >= abs(vals[0]):
                apply(j, 0, -(vals[j] // vals[0]))
            else:
                apply(0, j, -(vals[0] // vals[j]))
    if vals[0] == -1:
        apply(1, 0, 1)
        apply(0, 1, -2)
        apply(1, 0, 1)
    if vals[0] != 1 or any(v != 0 for v in vals[1:]):
        return None
    # ops take u to e_1, so u = T_1^-1 ... T_k^-1 e_1: invert in place
    return [(i, j, ring.el(-r)) for i, j, r in ops]


def matrix_group_order(gens, cap=10**7):
    """|<gens>| by breadth-first closure; Inconclusive beyond the cap."""
    if not gens:
        return 1
    ring = gens[0].ring
    if type(ring).__name__ == "ZModRing" and ring.n == 2:
        return _group_order_f2(gens, cap)
    seen = {identity_matrix(ring, gens[0].n).key()}
    frontier = [identity_matrix(ring, gens[0].n)]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = m * g
                k = prod.key()
                if k not in seen:
                    seen.add(k)
                    if len(seen) > cap:
                        raise Inconclusive("matrix group closure cap exceeded")
                    nxt.append(prod)
        frontier = nxt
    return len(seen)


def _group_order_f2(gens, cap):
    n = gens[0].n

    def pack(m):
        rows = [0] * n
        for (i, j), p in m.data.items():
            if p:
                rows[i] |= 1 << j
        return tuple(rows)

    def mul(a, b):
        out = []
        for i in range(n):
            acc = 0
            r = a[i]
            for j in range(n):
                if r >> j & 1:
                    acc ^= b[j]
            out.append(acc)
        return tuple(out)

    packed_gens = [pack(g) for g in gens]
    ident = tuple(1 << i for i in range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in packed_gens:
                prod = mul(m, g)
                if prod not in seen:
                    seen.add(prod)
                    if len(seen) > cap:
                        raise Inconclusive("matrix group closure cap exceeded")
                    nxt.append(prod)
        frontier = nxt
    return len(seen)
