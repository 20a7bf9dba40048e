"""Exact commutative rings with decidable equality.

Every ring here is a unital commutative ring whose elements are immutable
hashable payloads in a canonical form, so equality is literal payload
equality.  Finite rings expose a deterministic enumerator; everything
downstream (linear solving, ideal membership, splitting sections) leans on
that enumerator for reproducible tie-breaking.

Supported constructions, written in the spec grammar used by the CLI:

    z            integers
    z/N          integers mod N
    fP           prime field alias for z/P
    prod(S,T)    direct product
    poly(S,V)    univariate polynomials over S
    quo(poly(S,V),[c0,c1,...])   quotient by a monic relator polynomial
    loc(S,a)     localization by the powers of a
    semi(S,a)    S extended by the augmentation ideal V*S_a[V]
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class RingError(Exception):
    pass


class SpecError(RingError):
    """Malformed or unsupported ring construction expression."""


class UnsupportedRingError(RingError):
    """The question is not decidable for this ring class (inconclusive)."""


class DivisibilityError(RingError):
    """Division requested in an ideal that is not uniquely divisible."""


# ---------------------------------------------------------------------------
# elements


class Elem:
    """A ring element: an owning ring plus a canonical hashable payload."""

    __slots__ = ("ring", "payload")

    def __init__(self, ring, payload):
        self.ring = ring
        self.payload = payload

    def __add__(self, other):
        other = self.ring.el(other)
        return Elem(self.ring, self.ring.p_add(self.payload, other.payload))

    __radd__ = __add__

    def __neg__(self):
        return Elem(self.ring, self.ring.p_neg(self.payload))

    def __sub__(self, other):
        other = self.ring.el(other)
        return Elem(self.ring, self.ring.p_add(self.payload, self.ring.p_neg(other.payload)))

    def __mul__(self, other):
        other = self.ring.el(other)
        return Elem(self.ring, self.ring.p_mul(self.payload, other.payload))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers are not ring operations")
        acc = self.ring.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def is_zero(self):
        return self.payload == self.ring.zero_p

    def is_one(self):
        return self.payload == self.ring.one_p

    def __eq__(self, other):
        return (
            isinstance(other, Elem)
            and self.ring is other.ring
            and self.payload == other.payload
        )

    def __hash__(self):
        return hash((id(self.ring), self.payload))

    def __repr__(self):
        return self.ring.p_repr(self.payload)


class Ring:
    """Base class: payload-level arithmetic plus enumeration hooks."""

    is_finite = False
    is_domain = False
    exact_div = False  # p_try_div gives unique exact quotients

    def __init__(self, spec):
        self.spec = spec
        self._enum_order = None

    # -- payload arithmetic, provided by subclasses
    def p_add(self, a, b):
        raise NotImplementedError

    def p_neg(self, a):
        raise NotImplementedError

    def p_mul(self, a, b):
        raise NotImplementedError

    def p_from_int(self, n):
        neg = n < 0
        n = abs(n)
        acc, one = self.zero_p, self.one_p
        for _ in range(n):
            acc = self.p_add(acc, one)
        return self.p_neg(acc) if neg else acc

    def p_try_div(self, a, b):
        """Payload q with b*q == a, or None.  Only meaningful if exact_div."""
        raise UnsupportedRingError(f"{self.spec}: no exact division")

    def p_repr(self, p):
        return repr(p)

    # -- element-level conveniences
    def el(self, x):
        if isinstance(x, Elem):
            if x.ring is not self:
                raise RingError(f"element of {x.ring.spec} used in {self.spec}")
            return x
        if isinstance(x, int):
            return Elem(self, self.p_from_int(x))
        return Elem(self, self.from_literal(x))

    def zero(self):
        return Elem(self, self.zero_p)

    def one(self):
        return Elem(self, self.one_p)

    # -- enumeration
    def payloads(self):
        raise UnsupportedRingError(f"{self.spec} is not enumerable")

    def elements(self):
        for p in self.payloads():
            yield Elem(self, p)

    def size(self):
        if not self.is_finite:
            raise UnsupportedRingError(f"{self.spec} is infinite")
        return len(self.enum_order())

    def enum_order(self):
        if self._enum_order is None:
            self._enum_order = {p: i for i, p in enumerate(self.payloads())}
        return self._enum_order

    def enum_key(self, p):
        return self.enum_order()[p]

    # -- serialization
    def from_literal(self, lit):
        raise SpecError(f"cannot parse {lit!r} as element of {self.spec}")

    def to_literal(self, p):
        return p

    def __repr__(self):
        return f"Ring({self.spec})"


class ZRing(Ring):
    is_domain = True
    exact_div = True
    zero_p = 0
    one_p = 1

    def p_add(self, a, b):
        return a + b

    def p_neg(self, a):
        return -a

    def p_mul(self, a, b):
        return a * b

    def p_from_int(self, n):
        return n

    def p_try_div(self, a, b):
        if b == 0:
            return 0 if a == 0 else None
        q, r = divmod(a, b)
        return q if r == 0 else None

    def from_literal(self, lit):
        return int(lit)


class ZModRing(Ring):
    is_finite = True
    exact_div = False

    def __init__(self, n, spec=None):
        if n < 1:
            raise SpecError("modulus must be >= 1")
        super().__init__(spec or f"z/{n}")
        self.n = n
        self.zero_p = 0
        self.one_p = 1 % n
        self.is_domain = n > 1 and _is_prime(n)

    def p_add(self, a, b):
        return (a + b) % self.n

    def p_neg(self, a):
        return (-a) % self.n

    def p_mul(self, a, b):
        return (a * b) % self.n

    def p_from_int(self, k):
        return k % self.n

    def payloads(self):
        return range(self.n)

    def from_literal(self, lit):
        return int(lit) % self.n


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class ProductRing(Ring):
    def __init__(self, a, b):
        super().__init__(f"prod({a.spec},{b.spec})")
        self.a = a
        self.b = b
        self.is_finite = a.is_finite and b.is_finite
        self.zero_p = (a.zero_p, b.zero_p)
        self.one_p = (a.one_p, b.one_p)

    def p_add(self, x, y):
        return (self.a.p_add(x[0], y[0]), self.b.p_add(x[1], y[1]))

    def p_neg(self, x):
        return (self.a.p_neg(x[0]), self.b.p_neg(x[1]))

    def p_mul(self, x, y):
        return (self.a.p_mul(x[0], y[0]), self.b.p_mul(x[1], y[1]))

    def p_from_int(self, n):
        return (self.a.p_from_int(n), self.b.p_from_int(n))

    def payloads(self):
        return itertools.product(self.a.payloads(), self.b.payloads())

    def from_literal(self, lit):
        if isinstance(lit, (tuple, list)) and len(lit) == 2:
            return (self.a.from_literal(lit[0]) if not isinstance(lit[0], int) else self.a.p_from_int(lit[0]),
                    self.b.from_literal(lit[1]) if not isinstance(lit[1], int) else self.b.p_from_int(lit[1]))
        raise SpecError(f"product element literal must be a pair, got {lit!r}")

    def to_literal(self, p):
        return [self.a.to_literal(p[0]), self.b.to_literal(p[1])]

    def p_repr(self, p):
        return f"({self.a.p_repr(p[0])},{self.b.p_repr(p[1])})"


def _strip(coeffs, zero):
    i = len(coeffs)
    while i and coeffs[i - 1] == zero:
        i -= 1
    return tuple(coeffs[:i])


class PolyRing(Ring):
    """Dense univariate polynomials; payload is a trailing-stripped tuple."""

    def __init__(self, base, var):
        super().__init__(f"poly({base.spec},{var})")
        self.base = base
        self.var = var
        self.is_domain = base.is_domain
        self.zero_p = ()
        self.one_p = (base.one_p,)
        self.exact_div = base.exact_div or base.is_finite

    def p_add(self, f, g):
        n = max(len(f), len(g))
        bz = self.base.zero_p
        out = [
            self.base.p_add(f[i] if i < len(f) else bz, g[i] if i < len(g) else bz)
            for i in range(n)
        ]
        return _strip(out, bz)

    def p_neg(self, f):
        return tuple(self.base.p_neg(c) for c in f)

    def p_mul(self, f, g):
        if not f or not g:
            return ()
        bz = self.base.zero_p
        out = [bz] * (len(f) + len(g) - 1)
        padd, pmul = self.base.p_add, self.base.p_mul
        for i, a in enumerate(f):
            if a == bz:
                continue
            for j, b in enumerate(g):
                out[i + j] = padd(out[i + j], pmul(a, b))
        return _strip(out, bz)

    def p_from_int(self, n):
        return _strip([self.base.p_from_int(n)], self.base.zero_p)

    def gen(self):
        """The variable itself, as an element."""
        return Elem(self, (self.base.zero_p, self.base.one_p))

    def p_try_div(self, f, g):
        if not g:
            return () if not f else None
        ginv = _unit_inverse(self.base, g[-1])
        if ginv is None:
            raise UnsupportedRingError(f"{self.spec}: leading coefficient not invertible")
        bz = self.base.zero_p
        rem = list(f)
        q = [bz] * max(len(f) - len(g) + 1, 0)
        while len(rem) >= len(g):
            if rem[-1] == bz:
                rem.pop()
                continue
            c = self.base.p_mul(rem[-1], ginv)
            k = len(rem) - len(g)
            q[k] = c
            for i, gc in enumerate(g):
                rem[k + i] = self.base.p_add(rem[k + i], self.base.p_neg(self.base.p_mul(c, gc)))
            rem.pop()
        return _strip(q, bz) if _strip(rem, bz) == () else None

    def from_literal(self, lit):
        if isinstance(lit, (tuple, list)):
            out = []
            for c in lit:
                out.append(self.base.p_from_int(c) if isinstance(c, int) else self.base.from_literal(c))
            return _strip(out, self.base.zero_p)
        if isinstance(lit, int):
            return self.p_from_int(lit)
        raise SpecError(f"polynomial literal must be a coefficient list, got {lit!r}")

    def to_literal(self, p):
        return [self.base.to_literal(c) for c in p]

    def p_repr(self, p):
        if not p:
            return "0"
        terms = []
        for i, c in enumerate(p):
            if c == self.base.zero_p:
                continue
            cs = self.base.p_repr(c)
            if i == 0:
                terms.append(cs)
            else:
                head = "" if c == self.base.one_p else cs + "*"
                terms.append(f"{head}{self.var}" + (f"^{i}" if i > 1 else ""))
        return "+".join(terms)


def _unit_inverse(ring, p):
    """Inverse of a payload, or None.  Search-based for finite rings."""
    if p == ring.one_p:
        return ring.one_p
    if isinstance(ring, ZRing):
        return p if p in (1, -1) else None
    if ring.is_finite:
        for q in ring.payloads():
            if ring.p_mul(p, q) == ring.one_p:
                return q
        return None
    if isinstance(ring, FractionLocalization):
        return ring.p_inv(p)
    return None


class QuoPolyRing(Ring):
    """poly(S,V) modulo a monic relator; payload is the reduced tuple."""

    def __init__(self, polyring, relator):
        if not isinstance(polyring, PolyRing):
            raise SpecError("quo() expects a polynomial ring")
        if len(relator) < 2:
            raise SpecError("relator must have degree >= 1")
        if relator[-1] != polyring.base.one_p:
            raise SpecError("relator must be monic")
        rel_lit = [polyring.base.to_literal(c) for c in relator]
        super().__init__(f"quo({polyring.spec},{_lit_str(rel_lit)})")
        self.poly = polyring
        self.base = polyring.base
        self.var = polyring.var
        self.relator = relator
        self.deg = len(relator) - 1
        self.is_finite = self.base.is_finite
        self.zero_p = ()
        self.one_p = self._reduce(polyring.one_p)

    def _reduce(self, f):
        bz = self.base.zero_p
        rem = list(f)
        while len(rem) > self.deg:
            c = rem[-1]
            k = len(rem) - 1 - self.deg
            if c != bz:
                for i, rc in enumerate(self.relator[:-1]):
                    rem[k + i] = self.base.p_add(rem[k + i], self.base.p_neg(self.base.p_mul(c, rc)))
            rem.pop()
        return _strip(rem, bz)

    def p_add(self, f, g):
        return self.poly.p_add(f, g)

    def p_neg(self, f):
        return self.poly.p_neg(f)

    def p_mul(self, f, g):
        return self._reduce(self.poly.p_mul(f, g))

    def p_from_int(self, n):
        return self._reduce(self.poly.p_from_int(n))

    def gen(self):
        return Elem(self, self._reduce((self.base.zero_p, self.base.one_p)))

    def payloads(self):
        base = list(self.base.payloads())
        for tup in itertools.product(base, repeat=self.deg):
            yield _strip(tup, self.base.zero_p)

    def from_literal(self, lit):
        return self._reduce(self.poly.from_literal(lit))

    def to_literal(self, p):
        return self.poly.to_literal(p)

    def p_repr(self, p):
        return self.poly.p_repr(p)


class FiniteLocalization(Ring):
    """e*R for the idempotent power e of a; the finite model of R_a."""

    def __init__(self, base, a_payload):
        if not base.is_finite:
            raise SpecError("FiniteLocalization needs a finite base")
        e = a_payload
        seen = {}
        k = 1
        while base.p_mul(e, e) != e:
            if e in seen:
                raise RingError("no idempotent power found")  # cannot happen in finite comm rings
            seen[e] = k
            e = base.p_mul(e, a_payload)
            k += 1
        super().__init__(f"loc({base.spec},{_lit_str(base.to_literal(a_payload))})")
        self.base = base
        self.a_payload = a_payload
        self.e = e
        self.is_finite = True
        self.zero_p = base.zero_p
        self.one_p = e
        reps = []
        seen_set = set()
        for p in base.payloads():
            q = base.p_mul(p, e)
            if q not in seen_set:
                seen_set.add(q)
                reps.append(q)
        self._reps = reps

    def p_add(self, x, y):
        return self.base.p_add(x, y)

    def p_neg(self, x):
        return self.base.p_neg(x)

    def p_mul(self, x, y):
        return self.base.p_mul(x, y)

    def p_from_int(self, n):
        return self.base.p_mul(self.base.p_from_int(n), self.e)

    def project(self, p):
        """The localization map on payloads: x -> x*e."""
        return self.base.p_mul(p, self.e)

    def p_inv(self, p):
        for q in self._reps:
            if self.p_mul(p, q) == self.one_p:
                return q
        return None

    def payloads(self):
        return iter(self._reps)

    def from_literal(self, lit):
        return self.project(self.base.from_literal(lit) if not isinstance(lit, int) else self.base.p_from_int(lit))

    def to_literal(self, p):
        return self.base.to_literal(p)

    def p_repr(self, p):
        return self.base.p_repr(p)


class FractionLocalization(Ring):
    """Fractions x/a^k over a domain with exact division; payload (num, k)."""

    def __init__(self, base, a_payload):
        if not (base.is_domain and base.exact_div):
            raise UnsupportedRingError(
                f"localization of {base.spec} by fractions needs an exact-division domain"
            )
        if a_payload == base.zero_p:
            raise SpecError("cannot build fraction localization at 0")
        super().__init__(f"loc({base.spec},{_lit_str(base.to_literal(a_payload))})")
        self.base = base
        self.a_payload = a_payload
        self.is_domain = True
        self.exact_div = True
        self.zero_p = (base.zero_p, 0)
        self.one_p = self._canon(base.one_p, 0)

    def _canon(self, num, k):
        if num == self.base.zero_p:
            return (self.base.zero_p, 0)
        while k > 0:
            q = self.base.p_try_div(num, self.a_payload)
            if q is None:
                break
            num = q
            k -= 1
        return (num, k)

    def _apow(self, k):
        p = self.base.one_p
        for _ in range(k):
            p = self.base.p_mul(p, self.a_payload)
        return p

    def p_add(self, x, y):
        k = max(x[1], y[1])
        nx = self.base.p_mul(x[0], self._apow(k - x[1]))
        ny = self.base.p_mul(y[0], self._apow(k - y[1]))
        return self._canon(self.base.p_add(nx, ny), k)

    def p_neg(self, x):
        return (self.base.p_neg(x[0]), x[1]) if x[0] != self.base.zero_p else x

    def p_mul(self, x, y):
        return self._canon(self.base.p_mul(x[0], y[0]), x[1] + y[1])

    def p_from_int(self, n):
        return self._canon(self.base.p_from_int(n), 0)

    def project(self, p):
        return self._canon(p, 0)

    def p_inv(self, p, cap=64):
        num, k = p
        if num == self.base.zero_p:
            return None
        apow = self.base.one_p
        for s in range(cap):
            q = self.base.p_try_div(apow, num)
            if q is not None:
                # num * q = a^s, so 1/(num/a^k) = q / a^(s-k)
                if s - k >= 0:
                    return self._canon(q, s - k)
                return self._canon(self.base.p_mul(q, self._apow(k - s)), 0)
            apow = self.base.p_mul(apow, self.a_payload)
        return None

    def p_try_div(self, x, y):
        inv = self.p_inv(y)
        if inv is not None:
            return self.p_mul(x, inv)
        # general quotient x/y: scan x*a^s / y in the base
        num_x, kx = x
        num_y, ky = y
        if num_y == self.base.zero_p:
            return self.zero_p if num_x == self.base.zero_p else None
        apow = self.base.one_p
        for s in range(64):
            q = self.base.p_try_div(self.base.p_mul(num_x, apow), num_y)
            if q is not None:
                return self._canon(q, kx + s - ky) if kx + s >= ky else self._canon(
                    self.base.p_mul(q, self._apow(ky - kx - s)), 0
                )
            apow = self.base.p_mul(apow, self.a_payload)
        return None

    def from_literal(self, lit):
        if isinstance(lit, (tuple, list)) and len(lit) == 2 and isinstance(lit[1], int):
            num = self.base.p_from_int(lit[0]) if isinstance(lit[0], int) else self.base.from_literal(lit[0])
            return self._canon(num, lit[1])
        num = self.base.p_from_int(lit) if isinstance(lit, int) else self.base.from_literal(lit)
        return self._canon(num, 0)

    def to_literal(self, p):
        return [self.base.to_literal(p[0]), p[1]]

    def p_repr(self, p):
        num, k = p
        if k == 0:
            return self.base.p_repr(num)
        return f"{self.base.p_repr(num)}/{self.base.p_repr(self.a_payload)}^{k}"


class SemidirectRing(Ring):
    """R extended by the augmentation ideal V*R_a[V].

    Payloads are pairs (r, f) with r in the base and f a polynomial payload
    over the localization with zero constant term; the ideal part multiplies
    as honest polynomials while the base acts through the localization map.
    """

    def __init__(self, base, a_elem):
        loc, lam = localization(base, a_elem)
        super().__init__(f"semi({base.spec},{_lit_str(base.to_literal(a_elem.payload))})")
        self.base = base
        self.a_payload = a_elem.payload
        self.loc = loc
        self._lam_p = lam.p_fn
        self.is_domain = base.is_domain
        self.zero_p = (base.zero_p, ())
        self.one_p = (base.one_p, ())
        self.exact_div = base.exact_div

    def _fcanon(self, coeffs):
        out = _strip(coeffs, self.loc.zero_p)
        if out and out[0] != self.loc.zero_p:
            raise RingError("ideal part must have zero constant term")
        return out

    def _fadd(self, f, g):
        n = max(len(f), len(g))
        lz = self.loc.zero_p
        return _strip(
            [
                self.loc.p_add(f[i] if i < len(f) else lz, g[i] if i < len(g) else lz)
                for i in range(n)
            ],
            lz,
        )

    def _fscale(self, c, f):
        return _strip([self.loc.p_mul(c, x) for x in f], self.loc.zero_p)

    def _fmul(self, f, g):
        if not f or not g:
            return ()
        lz = self.loc.zero_p
        out = [lz] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a == lz:
                continue
            for j, b in enumerate(g):
                out[i + j] = self.loc.p_add(out[i + j], self.loc.p_mul(a, b))
        return _strip(out, lz)

    def p_add(self, x, y):
        return (self.base.p_add(x[0], y[0]), self._fadd(x[1], y[1]))

    def p_neg(self, x):
        return (self.base.p_neg(x[0]), tuple(self.loc.p_neg(c) for c in x[1]))

    def p_mul(self, x, y):
        r, f = x
        s, g = y
        mixed = self._fadd(self._fscale(self._lam_p(r), g), self._fscale(self._lam_p(s), f))
        return (self.base.p_mul(r, s), self._fadd(mixed, self._fmul(f, g)))

    def p_from_int(self, n):
        return (self.base.p_from_int(n), ())

    def include_base(self, p):
        return (p, ())

    def gen(self):
        """The augmentation variable V as an element."""
        return Elem(self, (self.base.zero_p, (self.loc.zero_p, self.loc.one_p)))

    def kernel_ideal(self):
        """The augmentation ideal V*R_a[V], as a named ideal."""
        return FGIdeal(self, kind="semi-kernel")

    def p_try_div(self, x, y):
        r0, f0 = y
        if f0 != ():
            return None
        rq = self.base.p_try_div(x[0], r0)
        if rq is None:
            return None
        lam_r0 = self._lam_p(r0)
        fq = []
        for c in x[1]:
            q = self.loc.p_try_div(c, lam_r0) if hasattr(self.loc, "p_try_div") else None
            if q is None:
                return None
            fq.append(q)
        return (rq, _strip(fq, self.loc.zero_p))

    def from_literal(self, lit):
        if isinstance(lit, (tuple, list)) and len(lit) == 2 and isinstance(lit[1], (tuple, list)):
            r = self.base.p_from_int(lit[0]) if isinstance(lit[0], int) else self.base.from_literal(lit[0])
            f = self._fcanon(tuple(
                self.loc.p_from_int(c) if isinstance(c, int) else self.loc.from_literal(c)
                for c in lit[1]
            ))
            return (r, f)
        if isinstance(lit, int):
            return self.p_from_int(lit)
        raise SpecError(f"semidirect element literal must be [base, [coeffs...]], got {lit!r}")

    def to_literal(self, p):
        return [self.base.to_literal(p[0]), [self.loc.to_literal(c) for c in p[1]]]

    def p_repr(self, p):
        r, f = p
        if not f:
            return self.base.p_repr(r)
        fr = PolyRing.p_repr(_FAKE_POLY(self.loc), f)
        return f"({self.base.p_repr(r)}+{fr})"


class _FAKE_POLY:
    # just enough context to reuse PolyRing.p_repr for ideal parts
    def __init__(self, base):
        self.base = base
        self.var = "X"


def _lit_str(lit):
    if isinstance(lit, list):
        return "[" + ",".join(_lit_str(c) for c in lit) + "]"
    if isinstance(lit, tuple):
        return "(" + ",".join(_lit_str(c) for c in lit) + ")"
    return str(lit)


# ---------------------------------------------------------------------------
# morphisms


class RingMorphism:
    """A unital ring map, stored as a payload-level function."""

    def __init__(self, source, target, p_fn, name=""):
        self.source = source
        self.target = target
        self.p_fn = p_fn
        self.name = name

    def __call__(self, x):
        if x.ring is not self.source:
            raise RingError(f"morphism {self.name or '?'} applied to wrong ring")
        return Elem(self.target, self.p_fn(x.payload))

    def compose(self, inner):
        """self after inner."""
        return RingMorphism(
            inner.source, self.target, lambda p: self.p_fn(inner.p_fn(p)),
            name=f"{self.name}*{inner.name}",
        )

    def __repr__(self):
        return f"RingMorphism({self.source.spec} -> {self.target.spec})"


def morphism_failures(m, samples=200, seed=0):
    """Sampled check that m preserves 0, 1, + and *."""
    import random

    rng = random.Random(seed)
    fails = []
    if m.p_fn(m.source.zero_p) != m.target.zero_p:
        fails.append("zero")
    if m.p_fn(m.source.one_p) != m.target.one_p:
        fails.append("one")
    pool = _sample_payloads(m.source, samples, rng)
    for x, y in zip(pool, reversed(pool)):
        if m.p_fn(m.source.p_add(x, y)) != m.target.p_add(m.p_fn(x), m.p_fn(y)):
            fails.append(("add", x, y))
        if m.p_fn(m.source.p_mul(x, y)) != m.target.p_mul(m.p_fn(x), m.p_fn(y)):
            fails.append(("mul", x, y))
    return fails


def _sample_payloads(ring, count, rng):
    if ring.is_finite:
        pool = list(ring.payloads())
        if len(pool) <= count:
            return pool
        return [pool[rng.randrange(len(pool))] for _ in range(count)]
    return [random_payload(ring, rng) for _ in range(count)]


def random_payload(ring, rng, depth=3):
    """A small random payload for infinite rings (bounded degree/height)."""
    if ring.is_finite:
        pool = list(ring.payloads())
        return pool[rng.randrange(len(pool))]
    if isinstance(ring, ZRing):
        return rng.randrange(-9, 10)
    if isinstance(ring, PolyRing):
        deg = rng.randrange(depth + 1)
        return _strip([random_payload(ring.base, rng, depth) for _ in range(deg + 1)], ring.base.zero_p)
    if isinstance(ring, FractionLocalization):
        return ring._canon(random_payload(ring.base, rng, depth), rng.randrange(3))
    if isinstance(ring, SemidirectRing):
        deg = rng.randrange(depth + 1)
        f = [ring.loc.zero_p] + [random_payload(ring.loc, rng, depth - 1) for _ in range(deg)]
        return (random_payload(ring.base, rng, depth), ring._fcanon(tuple(f)))
    if isinstance(ring, ProductRing):
        return (random_payload(ring.a, rng, depth), random_payload(ring.b, rng, depth))
    raise UnsupportedRingError(f"cannot sample {ring.spec}")


def ring_axiom_failures(ring, samples=1000, seed=0, exhaustive_limit=64):
    """Ring axioms on all triples (small finite rings) or random triples."""
    import random

    rng = random.Random(seed)
    fails = []
    if ring.is_finite and ring.size() <= exhaustive_limit:
        pool = list(ring.payloads())
        triples = itertools.product(pool, pool, pool)
    else:
        triples = (
            (random_payload(ring, rng), random_payload(ring, rng), random_payload(ring, rng))
            for _ in range(samples)
        )
    add, mul, neg = ring.p_add, ring.p_mul, ring.p_neg
    z, o = ring.zero_p, ring.one_p
    for x, y, w in triples:
        ok = (
            add(add(x, y), w) == add(x, add(y, w))
            and mul(mul(x, y), w) == mul(x, mul(y, w))
            and add(x, y) == add(y, x)
            and mul(x, y) == mul(y, x)
            and mul(x, add(y, w)) == add(mul(x, y), mul(x, w))
            and add(x, z) == x
            and mul(x, o) == x
            and add(x, neg(x)) == z
        )
        if not ok:
            fails.append((x, y, w))
            if len(fails) >= 5:
                break
    return fails


# ---------------------------------------------------------------------------
# the spec grammar


_RING_CACHE = {}


def make_ring(spec):
    """Build (and intern) a ring from a construction expression."""
    key = "".join(spec.split())
    if key in _RING_CACHE:
        return _RING_CACHE[key]
    ring, rest = _parse_ring(key, 0)
    if rest != len(key):
        raise SpecError(f"trailing junk in ring spec: {key[rest:]!r}")
    _RING_CACHE[key] = ring
    return ring


def _parse_ring(s, i):
    for head in ("prod", "poly", "loc", "semi", "quo"):
        if s.startswith(head + "(", i):
            i += len(head) + 1
            if head == "prod":
                a, i = _parse_ring(s, i)
                i = _expect(s, i, ",")
                b, i = _parse_ring(s, i)
                i = _expect(s, i, ")")
                return _intern(ProductRing(a, b)), i
            if head == "poly":
                base, i = _parse_ring(s, i)
                i = _expect(s, i, ",")
                j = i
                while j < len(s) and (s[j].isalnum() or s[j] == "_"):
                    j += 1
                var = s[i:j]
                if not var:
                    raise SpecError("poly() needs a variable name")
                i = _expect(s, j, ")")
                return _intern(PolyRing(base, var)), i
            if head == "quo":
                base, i = _parse_ring(s, i)
                i = _expect(s, i, ",")
                lit, i = _parse_literal(s, i)
                i = _expect(s, i, ")")
                if not isinstance(base, PolyRing):
                    raise SpecError("quo() expects poly(...) as its first argument")
                rel = base.from_literal(lit)
                return _intern(QuoPolyRing(base, rel)), i
            # loc / semi
            base, i = _parse_ring(s, i)
            i = _expect(s, i, ",")
            lit, i = _parse_literal(s, i)
            i = _expect(s, i, ")")
            a = base.el(lit) if not isinstance(lit, int) else Elem(base, base.p_from_int(lit))
            if head == "loc":
                ring, _ = localization(base, a)
                return ring, i
            return _intern(SemidirectRing(base, a)), i
    if s.startswith("z/", i):
        j = i + 2
        k = j
        while k < len(s) and s[k].isdigit():
            k += 1
        if k == j:
            raise SpecError("z/ needs a modulus")
        return _intern(ZModRing(int(s[j:k]))), k
    if s.startswith("z", i) and (i + 1 == len(s) or not s[i + 1].isalnum()):
        return _intern(ZRing("z")), i + 1
    if s.startswith("f", i):
        j = i + 1
        k = j
        while k < len(s) and s[k].isdigit():
            k += 1
        if k > j:
            p = int(s[j:k])
            if not _is_prime(p):
                raise SpecError(f"f{p}: {p} is not prime")
            return _intern(ZModRing(p, spec=f"f{p}")), k
    raise SpecError(f"cannot parse ring spec at {s[i:]!r}")


def _intern(ring):
    key = "".join(ring.spec.split())
    if key not in _RING_CACHE:
        _RING_CACHE[key] = ring
    return _RING_CACHE[key]


def _expect(s, i, ch):
    if i >= len(s) or s[i] != ch:
        raise SpecError(f"expected {ch!r} at position {i} of {s!r}")
    return i + 1


def _parse_literal(s, i):
    """int | (lit,lit) | [lit,...] used for elements inside spec strings."""
    if i < len(s) and s[i] == "(":
        a, i = _parse_literal(s, i + 1)
        i = _expect(s, i, ",")
        b, i = _parse_literal(s, i)
        i = _expect(s, i, ")")
        return (a, b), i
    if i < len(s) and s[i] == "[":
        out = []
        i += 1
        if i < len(s) and s[i] == "]":
            return out, i + 1
        while True:
            lit, i = _parse_literal(s, i)
            out.append(lit)
            if i < len(s) and s[i] == ",":
                i += 1
                continue
            i = _expect(s, i, "]")
            return out, i
    j = i
    if j < len(s) and s[j] == "-":
        j += 1
    k = j
    while k < len(s) and s[k].isdigit():
        k += 1
    if k == j:
        raise SpecError(f"expected an element literal at {s[i:]!r}")
    return int(s[i:k]), k


# ---------------------------------------------------------------------------
# localization and the semidirect extension


def localization(ring, a):
    """The ring a^-1 R together with the localization morphism.

    Finite rings use the idempotent-power model e*R; exact-division domains
    use reduced fractions.  A nilpotent a over a finite ring collapses to
    the zero ring (e = 0), which is the correct answer, not an error.
    """
    a = ring.el(a)
    if ring.is_finite:
        loc = _intern(FiniteLocalization(ring, a.payload))
        lam = RingMorphism(ring, loc, loc.project, name="lam_a")
        return loc, lam
    if a.is_zero():
        zero = _intern(ZModRing(1))
        return zero, RingMorphism(ring, zero, lambda p: 0, name="lam_0")
    if ring.is_domain and ring.exact_div:
        loc = _intern(FractionLocalization(ring, a.payload))
        lam = RingMorphism(ring, loc, loc.project, name="lam_a")
        return loc, lam
    raise UnsupportedRingError(f"localization of {ring.spec} is not supported")


def semidirect_ring(ring, a):
    """R extended by V*R_a[V]; comes with projection and kernel ideal."""
    a = ring.el(a)
    return _intern(SemidirectRing(ring, a))


def semidirect_projection(semi):
    return RingMorphism(semi, semi.base, lambda p: p[0], name="pr_base")


def semidirect_inclusion(semi):
    return RingMorphism(semi.base, semi, semi.include_base, name="in_base")


# ---------------------------------------------------------------------------
# ideals


class FGIdeal:
    """A finitely generated ideal (or one of the two registered named ones).

    kind "fg": membership by exact linear solving over the generators.
    kind "semi-kernel": the augmentation ideal of a SemidirectRing.
    """

    def __init__(self, ring, gens=(), kind="fg"):
        self.ring = ring
        self.gens = tuple(ring.el(g) for g in gens)
        self.kind = kind
        if kind == "semi-kernel" and not isinstance(ring, SemidirectRing):
            raise SpecError("semi-kernel ideal needs a SemidirectRing")
        self._elem_set = None
        self._div_cache = {}

    def key(self):
        return (self.ring.spec, self.kind, tuple(g.payload for g in self.gens))

    def contains(self, x):
        """A certificate list w with sum(g*w) == x, or None.

        For the named ideals membership is decided by canonical form and the
        certificate is the empty list.
        """
        x = self.ring.el(x)
        if self.kind == "semi-kernel":
            return [] if x.payload[0] == self.ring.base.zero_p else None
        if (
            isinstance(self.ring, PolyRing)
            and len(self.gens) == 1
            and self.gens[0].payload == (self.ring.base.zero_p, self.ring.base.one_p)
        ):
            # principal ideal (V) of a polynomial ring: divide by the variable
            if not x.payload:
                return [self.ring.zero()]
            if x.payload[0] != self.ring.base.zero_p:
                return None
            return [Elem(self.ring, x.payload[1:])]
        return lin_solve(list(self.gens), x)

    def payload_set(self):
        """All payloads of the ideal (finite rings only), as a frozenset."""
        if self._elem_set is None:
            if not self.ring.is_finite:
                raise UnsupportedRingError("ideal enumeration needs a finite ring")
            seeds = {self.ring.p_mul(g.payload, r) for g in self.gens for r in self.ring.payloads()}
            seeds.add(self.ring.zero_p)
            closed = set(seeds)
            frontier = list(seeds)
            while frontier:
                nxt = []
                for x in frontier:
                    for s in seeds:
                        y = self.ring.p_add(x, s)
                        if y not in closed:
                            closed.add(y)
                            nxt.append(y)
                frontier = nxt
            self._elem_set = frozenset(closed)
        return self._elem_set

    def elements(self):
        order = self.ring.enum_order()
        for p in sorted(self.payload_set(), key=order.__getitem__):
            yield Elem(self.ring, p)

    def __repr__(self):
        if self.kind == "semi-kernel":
            return f"Ideal(semi-kernel of {self.ring.spec})"
        return f"Ideal({self.ring.spec}; {list(self.gens)})"


def lin_solve(u, b):
    """Solve sum(u_k * w_k) == b exactly; None when b is outside the ideal.

    Finite rings search exhaustively in enumerator order (so the answer is
    the lexicographically least solution); the integers use the extended
    Euclidean algorithm.  Anything else raises UnsupportedRingError, which
    callers must surface as "inconclusive" rather than "no".
    """
    if not u:
        return [] if b.is_zero() else None
    ring = u[0].ring
    for x in u:
        if x.ring is not ring:
            raise RingError("lin_solve entries must share one ring")
    b = ring.el(b)
    if ring.is_finite:
        pool = list(ring.payloads())
        if len(pool) ** len(u) > 10**7:
            raise UnsupportedRingError("exhaustive linear solve too large")
        ups = [x.payload for x in u]
        for cand in itertools.product(pool, repeat=len(u)):
            acc = ring.zero_p
            for up, wp in zip(ups, cand):
                acc = ring.p_add(acc, ring.p_mul(up, wp))
            if acc == b.payload:
                return [Elem(ring, wp) for wp in cand]
        return None
    if isinstance(ring, ZRing):
        g, coeffs = 0, [0] * len(u)
        for i, x in enumerate(u):
            g2, s, t = _xgcd(g, x.payload)
            coeffs = [c * s for c in coeffs]
            coeffs[i] = t
            g = g2
        if g == 0:
            return [ring.zero() for _ in u] if b.payload == 0 else None
        if b.payload % g:
            return None
        scale = b.payload // g
        return [Elem(ring, c * scale) for c in coeffs]
    raise UnsupportedRingError(f"lin_solve over {ring.spec} is not supported")


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def unique_divide(ideal, a, m):
    """The unique m' in the ideal with a*m' == m.

    Multiplication by a must be a bijection on the ideal; the bijectivity
    witness (the full inverse map for finite ideals, the inverse coefficient
    for the augmentation ideal) is cached on the ideal.
    """
    ring = ideal.ring
    a = ring.el(a)
    m = ring.el(m)
    if ideal.kind == "semi-kernel":
        if m.payload[0] != ring.base.zero_p:
            raise DivisibilityError("element is not in the augmentation ideal")
        if a.payload[1] != ():
            raise DivisibilityError("division only by base-ring elements")
        key = ("semi", a.payload)
        inv = ideal._div_cache.get(key)
        if inv is None:
            lam_a = ring._lam_p(a.payload[0])
            inv = _unit_inverse(ring.loc, lam_a)
            if inv is None:
                raise DivisibilityError(f"{a!r} does not act invertibly on the augmentation ideal")
            ideal._div_cache[key] = inv
        coeffs = tuple(ring.loc.p_mul(c, inv) for c in m.payload[1])
        out = Elem(ring, (ring.base.zero_p, _strip(coeffs, ring.loc.zero_p)))
    else:
        if not ring.is_finite:
            raise UnsupportedRingError("unique_divide needs a finite ring or a named ideal")
        elems = ideal.payload_set()
        if m.payload not in elems:
            raise DivisibilityError("element is not in the ideal")
        key = ("fg", a.payload)
        inv_map = ideal._div_cache.get(key)
        if inv_map is None:
            inv_map = {}
            for x in elems:
                y = ring.p_mul(a.payload, x)
                if y in inv_map:
                    raise DivisibilityError("multiplication by a is not injective on the ideal")
                inv_map[y] = x
            if set(inv_map) != elems:
                raise DivisibilityError("multiplication by a is not surjective on the ideal")
            ideal._div_cache[key] = inv_map
        if m.payload not in inv_map:
            raise DivisibilityError("no quotient in the ideal")
        out = Elem(ring, inv_map[m.payload])
    assert (a * out).payload == m.payload
    return out


# ---------------------------------------------------------------------------
# quotients and splitting sections


class QuotientRing(Ring):
    """R/I for a finite ring; payloads are least coset representatives."""

    def __init__(self, base, ideal):
        super().__init__(f"quo_ideal({base.spec})")
        self.base = base
        self.ideal = ideal
        order = base.enum_order()
        iset = ideal.payload_set()
        rep = {}
        reps = []
        for p in base.payloads():
            if p in rep:
                continue
            coset = sorted((base.p_add(p, i) for i in iset), key=order.__getitem__)
            r = coset[0]
            for q in coset:
                rep[q] = r
            reps.append(r)
        self._rep = rep
        self._reps = reps
        self.is_finite = True
        self.zero_p = rep[base.zero_p]
        self.one_p = rep[base.one_p]

    def rep(self, p):
        return self._rep[p]

    def p_add(self, x, y):
        return self._rep[self.base.p_add(x, y)]

    def p_neg(self, x):
        return self._rep[self.base.p_neg(x)]

    def p_mul(self, x, y):
        return self._rep[self.base.p_mul(x, y)]

    def p_from_int(self, n):
        return self._rep[self.base.p_from_int(n)]

    def payloads(self):
        return iter(self._reps)

    def from_literal(self, lit):
        return self._rep[self.base.from_literal(lit) if not isinstance(lit, int) else self.base.p_from_int(lit)]

    def to_literal(self, p):
        return self.base.to_literal(p)

    def p_repr(self, p):
        return self.base.p_repr(p)


def _is_var_ideal(ring, ideal):
    return (
        isinstance(ring, PolyRing)
        and ideal.kind == "fg"
        and len(ideal.gens) == 1
        and ideal.gens[0].payload == (ring.base.zero_p, ring.base.one_p)
    )


_QUOTIENT_CACHE = {}


def quotient_ring(ring, ideal):
    """(R/I, pi).  Finite rings take least-representative cosets; a
    polynomial ring modulo its variable projects onto the coefficient ring."""
    key = ideal.key()
    if key in _QUOTIENT_CACHE:
        return _QUOTIENT_CACHE[key]
    if _is_var_ideal(ring, ideal):
        pi = RingMorphism(ring, ring.base, lambda p: p[0] if p else ring.base.zero_p, name="pi")
        out = (ring.base, pi)
    elif ring.is_finite:
        q = QuotientRing(ring, ideal)
        out = (q, RingMorphism(ring, q, q.rep, name="pi"))
    else:
        raise UnsupportedRingError(f"quotient of {ring.spec} is not supported")
    _QUOTIENT_CACHE[key] = out
    return out


def splitting_section(ring, ideal, candidate_cap=10**6):
    """A unital ring section of R -> R/I, or None if no section exists.

    The finite case searches candidate maps in enumerator order, so the
    returned section is deterministic.  poly(S,V) with I=(V) short-circuits
    to the constant embedding.
    """
    if _is_var_ideal(ring, ideal):
        return RingMorphism(ring.base, ring, lambda p: _strip((p,), ring.base.zero_p), name="sigma")
    if not ring.is_finite:
        raise UnsupportedRingError(f"no registered section for {ring.spec}")
    quo, pi = quotient_ring(ring, ideal)
    iset = sorted(ideal.payload_set(), key=ring.enum_order().__getitem__)
    qreps = list(quo.payloads())
    # sigma(q) must live in the fiber over q; 0 and 1 are forced
    fibers = []
    free_idx = []
    for idx, q in enumerate(qreps):
        if q == quo.zero_p:
            fibers.append([ring.zero_p])
        elif q == quo.one_p:
            fibers.append([ring.one_p])
        else:
            fibers.append([ring.p_add(q, i) for i in iset])
            free_idx.append(idx)
    total = 1
    for idx in free_idx:
        total *= len(fibers[idx])
        if total > candidate_cap:
            raise UnsupportedRingError("section search space too large")
    pos = {q: i for i, q in enumerate(qreps)}
    for choice in itertools.product(*fibers):
        table = dict(zip(qreps, choice))
        ok = True
        for x in qreps:
            if not ok:
                break
            for y in qreps:
                if table[quo.p_add(x, y)] != ring.p_add(table[x], table[y]):
                    ok = False
                    break
                if table[quo.p_mul(x, y)] != ring.p_mul(table[x], table[y]):
                    ok = False
                    break
        if ok:
            return RingMorphism(quo, ring, lambda p, t=table: t[p], name="sigma")
    return None


@dataclass
class SplitData:
    """A splitting ideal bundled with its quotient, projection and section."""

    ring: Ring
    ideal: FGIdeal
    quotient: Ring
    pi: RingMorphism
    sigma: RingMorphism

    def defect(self, x):
        """x - sigma(pi(x)); the part of x inside the ideal."""
        return x - self.sigma(self.pi(x))


def split_data(ring, ideal):
    quo, pi = quotient_ring(ring, ideal)
    sigma = splitting_section(ring, ideal)
    if sigma is None:
        raise RingError(f"{ideal!r} is not a splitting ideal")
    return SplitData(ring, ideal, quo, pi, sigma)


# ---------------------------------------------------------------------------
# polynomial substitution


def substitute(f, a, n):
    """Image of f under the coefficient-fixing map V -> a^n * W.

    The target is the same polynomial shape in the fresh variable W, which
    we keep in the same handle: coefficient k picks up a factor a^(n*k).
    """
    ring = f.ring
    if not isinstance(ring, PolyRing):
        raise SpecError("substitute() needs a polynomial ring element")
    a = ring.base.el(a)
    scale = ring.base.one()
    step = a**n
    out = []
    for c in f.payload:
        out.append(ring.base.p_mul(c, scale.payload))
        scale = scale * step
    return Elem(ring, _strip(out, ring.base.zero_p))
