"""The constructive generator families behind the relative presentations.

Builds, as explicit Steinberg words over A_(n-1):

  * x_small(u, v): the basic element for orthogonal pairs with a zero slot,
    with matrix image exactly 1 + u v^t,
  * X_gen / Y_gen: the two "one nice argument" generator families,
  * X_tul / Y_tul: their localization-friendly extensions where
    unimodularity of the nice argument is relaxed to a in I(u),
  * the iota images of F/S symbols, the psi twist into the split extension,
    and the lifting map t_map that undoes a principal localization.

Everything carries its certificates (unimodularity witnesses, orbit words,
divisibility data) explicitly; nothing is re-derived implicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import words as W
from .matrices import (
    RVector,
    basis_vector,
    contragredient,
    elementary_orbit_witness,
    vector,
)
from .rings import lin_solve, localization, unique_divide
from .roots import build_system
from .words import StWord, phi, simplify, transpose_anti


class VdkError(Exception):
    pass


@dataclass
class OrthPair:
    """An orthogonal pair of columns with whatever certificates it carries."""

    u: RVector
    v: RVector
    unimodular_cert: RVector = None
    orbit_witness: object = None
    zero_index: int = None

    def __post_init__(self):
        if not self.u.dot(self.v).is_zero():
            raise VdkError("OrthPair needs u^t v = 0")


_SYSTEM_CACHE = {}


def linear_system(n):
    """The A_(n-1) datum for n x n matrices, cached."""
    if n not in _SYSTEM_CACHE:
        _SYSTEM_CACHE[n] = build_system("A", n - 1)
    return _SYSTEM_CACHE[n]


def _scale(v, c):
    return v.scale(c)


# ---------------------------------------------------------------------------
# the basic element x(u, v)


def x_small(u, v, index=None, mode=None, system=None):
    """A word with phi-image exactly 1 + u v^t.

    Needs u^t v = 0 and a zero coordinate in v (primary form) or in u
    (transpose-dual form).  The zero index defaults to the least one in v,
    then the least one in u; both can be forced for well-definedness
    experiments via `index`/`mode`.
    """
    n = len(u)
    if u.ring is not v.ring or n != len(v):
        raise VdkError("x_small arguments must match")
    if not u.dot(v).is_zero():
        raise VdkError("x_small needs u^t v = 0")
    system = system or linear_system(n)
    if mode is None:
        if index is not None:
            raise VdkError("an explicit index needs an explicit mode")
        vz = v.zero_positions()
        if vz:
            mode, index = "v", vz[0]
        else:
            uz = u.zero_positions()
            if not uz:
                raise VdkError("x_small needs a zero coordinate in u or v")
            mode, index = "u", uz[0]
    if mode == "v":
        if not v[index].is_zero():
            raise VdkError(f"v[{index}] is not zero")
        return simplify(_x_small_primary(system, u, v, index))
    if mode == "u":
        if not u[index].is_zero():
            raise VdkError(f"u[{index}] is not zero")
        return simplify(transpose_anti(_x_small_primary(system, v, u, index)))
    raise VdkError(f"unknown mode {mode!r}")


def _x_small_primary(system, u, v, i):
    # t(u,v) = t(e_i u_i, v) * t(u - e_i u_i, v), the second factor being
    # the commutator of the two "column" and "row" products at slot i
    ring = u.ring
    n = len(u)
    head = W.empty(system, ring)
    for j in range(n):
        if j != i:
            head = head * W.x_ij(system, ring, i, j, u[i] * v[j])
    col = W.empty(system, ring)
    row = W.empty(system, ring)
    for j in range(n):
        if j != i:
            col = col * W.x_ij(system, ring, j, i, u[j])
            row = row * W.x_ij(system, ring, i, j, v[j])
    return head * W.commutator(col, row)


# ---------------------------------------------------------------------------
# canonical decompositions


def decomposition_terms(a, b, c):
    """[(e_p b_q - e_q b_p) * (a_p c_q - a_q c_p)]_{p<q}; sums to
    (c^t b) a - (a^t b) c."""
    ring = a.ring
    n = len(a)
    out = []
    for p in range(n):
        for q in range(p + 1, n):
            coef = a[p] * c[q] - a[q] * c[p]
            if coef.is_zero():
                continue
            entries = [ring.zero()] * n
            entries[p] = b[q] * coef
            entries[q] = -(b[p] * coef)
            term = RVector(ring, entries)
            if not term.is_zero():
                out.append(term)
    return out


def canonical_decomposition(u, v, w):
    """Split u into terms u_pq orthogonal to v with two zero slots each.

    Needs n >= 4, w^t v = 1 and u^t v = 0; then the terms sum to u.
    """
    if len(u) < 4:
        raise VdkError("canonical decomposition needs n >= 4")
    if not w.dot(v).is_one():
        raise VdkError("canonical decomposition needs w^t v = 1")
    if not u.dot(v).is_zero():
        raise VdkError("canonical decomposition needs u^t v = 0")
    return decomposition_terms(u, v, w)


def X_gen(u, v, cert=None, witness=None, system=None):
    """Van der Kallen's generator for unimodular u: a word with phi-image
    t(u, v).  The certificate w (w^t u = 1) may be given, or derived from
    an orbit witness, or found by linear solving."""
    cert = _resolve_cert(u, cert, witness)
    if not u.dot(v).is_zero():
        raise VdkError("X_gen needs u^t v = 0")
    terms = decomposition_terms(v, u, cert)
    word = W.empty(system or linear_system(len(u)), u.ring)
    for t in terms:
        word = word * x_small(u, t, system=system)
    return simplify(word)


def Y_gen(u, v, cert=None, witness=None, system=None):
    """The mirrored generator for unimodular v: phi-image t(u, v)."""
    cert = _resolve_cert(v, cert, witness)
    if not u.dot(v).is_zero():
        raise VdkError("Y_gen needs u^t v = 0")
    terms = canonical_decomposition(u, v, cert)
    word = W.empty(system or linear_system(len(u)), u.ring)
    for t in terms:
        word = word * x_small(t, v, system=system)
    return simplify(word)


def _resolve_cert(u, cert, witness):
    if cert is not None:
        got = cert.dot(u)
        if not got.is_one():
            raise VdkError(f"certificate pairs to {got!r}, not 1")
        return cert
    if witness is not None:
        w = contragredient(phi(witness)) * basis_vector(u.ring, len(u), 0)
        if not w.dot(u).is_one():
            raise VdkError("orbit witness does not certify u")
        return w
    sol = lin_solve(list(u.entries), u.ring.one())
    if sol is None:
        raise VdkError("u is not unimodular")
    return RVector(u.ring, sol)


# ---------------------------------------------------------------------------
# Tulenbaev data


@dataclass
class TulenbaevDatum:
    """A fixed vector and a certified decomposition of the moving vector
    into orthogonal two-zero-slot terms; b is the certified ideal element
    that the decomposition ran through (cert^t fixed = b)."""

    fixed: RVector
    terms: list
    b: object  # Elem
    target: RVector
    cert: RVector
    k: int

    def check(self):
        acc = vector(self.fixed.ring, [0] * len(self.fixed))
        for t in self.terms:
            if not t.dot(self.fixed).is_zero():
                raise VdkError("term not orthogonal to the fixed vector")
            if len(t.zero_positions()) < 2:
                raise VdkError("term without two zero slots")
            acc = acc + t
        if acc != self.target:
            raise VdkError("terms do not sum to the target")
        return self


def decompose_with(u, moving, cert, quotient):
    """The canonical decomposition of moving = quotient * (cert^t u)."""
    ring = u.ring
    if len(u) < 4:
        raise VdkError("decomposition needs n >= 4")
    b = cert.dot(u)
    if _scale(quotient, b) != moving:
        raise VdkError("quotient does not reproduce the moving vector")
    if not u.dot(quotient).is_zero():
        raise VdkError("quotient is not orthogonal to u")
    if not u.dot(moving).is_zero():
        raise VdkError("moving vector is not orthogonal to u")
    terms = decomposition_terms(quotient, u, cert)
    return TulenbaevDatum(fixed=u, terms=terms, b=b, target=moving, cert=cert, k=1).check()


def decompose_in_D(u, v, k, a, cert=None, quotient=None, ideal=None):
    """Write v as a sum of u-orthogonal terms with two zero slots each.

    Takes a^k in the ideal generated by the entries of u (certificate
    cert^t u = a^k, found by lin_solve when not supplied) and v divisible
    by a^k; the quotient may be passed in, pulled out of a uniquely
    divisible ideal, or computed by exact division.
    """
    ring = u.ring
    n = len(u)
    if n < 4:
        raise VdkError("decompose_in_D needs n >= 4")
    a = ring.el(a)
    if not u.dot(v).is_zero():
        raise VdkError("decompose_in_D needs u^t v = 0")
    apow = a**k
    if cert is None:
        sol = lin_solve(list(u.entries), apow)
        if sol is None:
            raise VdkError(f"a^{k} is not in the ideal of u")
        cert = RVector(ring, sol)
    elif cert.dot(u) != apow:
        raise VdkError("bad divisibility certificate")
    if quotient is None:
        quotient = _divide_vector(v, apow, ideal)
    datum = decompose_with(u, v, cert, quotient)
    datum.k = k
    return datum


def _divide_vector(v, apow, ideal):
    ring = v.ring
    if apow.is_one():
        return v
    if ideal is not None:
        return RVector(ring, [unique_divide(ideal, apow, x) for x in v.entries])
    if ring.exact_div:
        out = []
        for x in v.entries:
            q = ring.p_try_div(x.payload, apow.payload)
            if q is None:
                raise VdkError("entry not divisible")
            out.append(q)
        from .rings import Elem

        return RVector(ring, [Elem(ring, q) for q in out])
    raise VdkError("no division route available")


def X_tul(datum, mult=None, system=None):
    """X_{u,v}(a) = prod x(u, v_k a); phi-image t(u, v a).

    The multiplier defaults to the certified element the decomposition ran
    through, which is the common case (xeqy, the lifting map); identities
    like the conjugation law use an independent multiplier in I(u)."""
    a = datum.b if mult is None else mult
    ring = datum.fixed.ring
    word = W.empty(system or linear_system(len(datum.fixed)), ring)
    for t in datum.terms:
        word = word * x_small(datum.fixed, _scale(t, a), system=system)
    return simplify(word)


def Y_tul(datum, mult=None, system=None):
    """Y_{u,v}(a) = prod x(u_k a, v); phi-image t(u a, v)."""
    a = datum.b if mult is None else mult
    ring = datum.fixed.ring
    word = W.empty(system or linear_system(len(datum.fixed)), ring)
    for t in datum.terms:
        word = word * x_small(_scale(t, a), datum.fixed, system=system)
    return simplify(word)


def X_tul_of(u, v, a, k=1, cert=None, quotient=None, ideal=None, system=None):
    if ideal is None and quotient is None and cert is None and a.is_one():
        return X_tul(decompose_in_D(u, v, 0, a), system=system)
    return X_tul(decompose_in_D(u, v, k, a, cert, quotient, ideal), system=system)


def Y_tul_of(u, v, a, k=1, cert=None, quotient=None, ideal=None, system=None):
    if ideal is None and quotient is None and cert is None and a.is_one():
        return Y_tul(decompose_in_D(v, u, 0, a), system=system)
    return Y_tul(decompose_in_D(v, u, k, a, cert, quotient, ideal), system=system)


# ---------------------------------------------------------------------------
# the X = Y comparison data


@dataclass
class XeqYWords:
    lhs: StWord       # X_{u, v b^4 r}(b)
    rhs: StWord       # Y_{u b^4 r, v}(b)
    g_direct: StWord  # [Y_{-xbr, v}(b), X_{u, yb}(b)] multiplied out
    path_x: StWord    # the X-route evaluation of the commutator
    path_y: StWord    # the Y-route evaluation


def xeqy_words(x, y, u, v, b, r):
    """All five words of the two-route commutator computation.

    Hypotheses (checked exactly): u^t v = 0, x^t y = b, x^t v = 0,
    u^t y = 0, x^t u = 0, y^t v = 0, and b in I(u) and I(v).
    """
    ring = u.ring
    b = ring.el(b)
    r = ring.el(r)
    checks = [
        (u.dot(v), "u^t v"),
        (x.dot(v), "x^t v"),
        (u.dot(y), "u^t y"),
        (x.dot(u), "x^t u"),
        (y.dot(v), "y^t v"),
    ]
    for val, tag in checks:
        if not val.is_zero():
            raise VdkError(f"hypothesis {tag} = 0 fails")
    if x.dot(y) != b:
        raise VdkError("hypothesis x^t y = b fails")
    zu = lin_solve(list(u.entries), b)
    zv = lin_solve(list(v.entries), b)
    if zu is None or zv is None:
        raise VdkError("b must lie in I(u) and I(v)")
    zu = RVector(ring, zu)
    zv = RVector(ring, zv)
    b3r = b * b * b * r
    lhs = X_tul_of(u, _scale(v, b3r * b), b, cert=zu, quotient=_scale(v, b3r))
    rhs = Y_tul_of(_scale(u, b3r * b), v, b, cert=zv, quotient=_scale(u, b3r))
    y1 = Y_tul_of(_scale(x, -(b * r)), v, b, cert=zv, quotient=_scale(x, -r))
    x1 = X_tul_of(u, _scale(y, b), b, cert=zu, quotient=y)
    g_direct = W.commutator(y1, x1)
    # X route: conjugation rewrites the commutator as
    #   X_{u, yb + v b^4 r}(b) * X_{u, -yb}(b)
    px = X_tul_of(u, _scale(y, b) + _scale(v, b3r * b), b, cert=zu,
                  quotient=y + _scale(v, b3r))
    px = px * X_tul_of(u, _scale(y, -b), b, cert=zu, quotient=-y)
    # Y route: Y_{-xbr, v}(b) * Y_{xbr + u b^4 r, v}(b)
    py = y1 * Y_tul_of(_scale(x, b * r) + _scale(u, b3r * b), v, b, cert=zv,
                       quotient=_scale(x, r) + _scale(u, b3r))
    return XeqYWords(lhs=lhs, rhs=rhs, g_direct=simplify(g_direct),
                     path_x=simplify(px), path_y=simplify(py))


def xeqy_check(x, y, u, v, b, r, exact_equal=None):
    """Tiered equality verdict for the two-route commutator computation.

    Always checks the matrix tier; when an exact-tier equality callable is
    supplied (a coset-table tester for this ring), checks that too.  The
    verdict lists, per comparison, the strongest tier that certified it.
    """
    words = xeqy_words(x, y, u, v, b, r)
    names = ("rhs", "g_direct", "path_x", "path_y")
    others = (words.rhs, words.g_direct, words.path_x, words.path_y)
    base_mat = phi(words.lhs)
    verdict = {}
    all_ok = True
    for name, wrd in zip(names, others):
        if exact_equal is not None:
            ok = exact_equal(words.lhs, wrd)
            tier = "exact"
        else:
            ok = phi(wrd) == base_mat
            tier = "matrix"
        verdict[name] = (ok, tier)
        all_ok = all_ok and ok
    return {"equal": all_ok, "comparisons": verdict, "words": words}


# ---------------------------------------------------------------------------
# generator symbols and the iota images


@dataclass
class OrbitVector:
    """A column in the elementary orbit of e_1, with its defining word."""

    vec: RVector
    witness: StWord

    def cert(self):
        w = contragredient(phi(self.witness)) * basis_vector(self.vec.ring, len(self.vec), 0)
        return w

    @staticmethod
    def from_word(word, n):
        vec = phi(word) * basis_vector(word.ring, n, 0)
        return OrbitVector(vec=vec, witness=word)

    @staticmethod
    def search(vec, system=None, node_cap=10**6):
        letters = elementary_orbit_witness(vec, node_cap)
        if letters is None:
            return None
        system = system or linear_system(len(vec))
        return OrbitVector(vec=vec, witness=W.from_ij_letters(system, vec.ring, letters))


@dataclass
class FSymbol:
    """F(u, v): u in the elementary orbit, v in I^n, u^t v = 0."""

    u: OrbitVector
    v: RVector


@dataclass
class SSymbol:
    """S(u, v): u in I^n, v in the elementary orbit, u^t v = 0."""

    u: RVector
    v: OrbitVector


def iota(sym, system=None):
    """Send F(u,v) to X(u,v) and S(u,v) to Y(u,v), as explicit words."""
    if isinstance(sym, FSymbol):
        return X_gen(sym.u.vec, sym.v, cert=sym.u.cert(), system=system)
    if isinstance(sym, SSymbol):
        return Y_gen(sym.u, sym.v.vec, cert=sym.v.cert(), system=system)
    raise VdkError(f"not a generator symbol: {sym!r}")


def basis_orbit_vector(ring, n, k, system=None):
    """e_k as an orbit vector (a three-letter word moves e_1 there)."""
    system = system or linear_system(n)
    if k == 0:
        return OrbitVector(basis_vector(ring, n, 0), W.empty(system, ring))
    word = (
        W.x_ij(system, ring, k, 0, 1)
        * W.x_ij(system, ring, 0, k, -1)
        * W.x_ij(system, ring, k, 0, 1)
    )
    return OrbitVector.from_word(word, n)


# ---------------------------------------------------------------------------
# psi: St(n, R) -> St*(n, R, I) x| St(n, R/I)


def psi_map(split, n, i, j, xi, system=None):
    """psi(x_ij(xi)) = (X(e_i, e_j xi'), x_ij(pi(xi))) with xi' the ideal
    defect of xi; the pair lives in the split extension."""
    system = system or linear_system(n)
    ring = split.ring
    xi = ring.el(xi)
    defect = split.defect(xi)
    ei = basis_vector(ring, n, i)
    kernel = X_gen(ei, basis_vector(ring, n, j).scale(defect), cert=ei, system=system)
    quotient = W.x_ij(system, split.quotient, i, j, split.pi(xi))
    return W.SemidirectElement(split, system, kernel, quotient)


# ---------------------------------------------------------------------------
# the lifting map T


@dataclass
class TMapResult:
    word: StWord          # a word over B
    m: int
    lift_u: RVector       # lift of u a^m (resp. of v a^m for S symbols)
    lift_w: RVector
    kind: str


def t_map(B, a, ideal, sym, n=4, cap=8, system_b=None):
    """Lift a generator over B_a to a word over B along the localization.

    For F(u, v): find m and lifts with lam(~u) = u a^m, lam(~w) = w a^m,
    ~u^t v = 0 and ~w^t ~u = a^(2m); then the image is
    X_{~u, v/a^(3m)}(a^(2m)).  S symbols mirror this through Y.
    The ideal must be uniquely a-divisible.  Exhausting the cap raises
    VdkError (the search is inconclusive, not failed).
    """
    a = B.el(a)
    loc, lam = localization(B, a)
    system_b = system_b or linear_system(n)
    if isinstance(sym, FSymbol):
        nice, moving, kind = sym.u, sym.v, "F"
    elif isinstance(sym, SSymbol):
        nice, moving, kind = sym.v, sym.u, "S"
    else:
        raise VdkError("t_map needs an F or S symbol")
    if moving.ring is not B:
        raise VdkError("the ideal-side vector must live over B")
    for entry in moving.entries:
        if ideal.contains(entry) is None:
            raise VdkError("moving vector has an entry outside the ideal")
    u = nice.vec
    w = nice.cert()
    moving_loc = RVector(loc, [lam(x) for x in moving.entries])
    if not u.dot(moving_loc).is_zero():
        raise VdkError("generator pairing fails over the localization")
    lift = _find_lifts(B, a, lam, u, w, moving, cap)
    if lift is None:
        raise VdkError(f"no admissible lift with m <= {cap} (inconclusive)")
    m, lu, lw = lift
    a2m = a ** (2 * m)
    target = _divide_vector(moving, a ** (3 * m), ideal)
    quotient = _divide_vector(target, a2m, ideal)
    datum = decompose_in_D(lu, target, 2 * m, a, cert=lw, quotient=quotient)
    if kind == "F":
        word = X_tul(datum, system=system_b)
    else:
        word = Y_tul(datum, system=system_b)
    return TMapResult(word=word, m=m, lift_u=lu, lift_w=lw, kind=kind)


def _find_lifts(B, a, lam, u, w, moving, cap):
    n = len(u)
    loc = u.ring
    finite = B.is_finite
    kernel = None
    if finite:
        kernel = [p for p in B.payloads() if lam.p_fn(p) == loc.zero_p]
    for m in range(cap + 1):
        am = a**m
        base_u = _preimage_vector(B, lam, u, am)
        base_w = _preimage_vector(B, lam, w, am)
        if base_u is None or base_w is None:
            continue
        a2m = am * am
        if finite:
            import itertools

            from .rings import Elem

            for ku in itertools.product(kernel, repeat=n):
                cu = RVector(B, [Elem(B, B.p_add(x.payload, k)) for x, k in zip(base_u, ku)])
                if not cu.dot(moving).is_zero():
                    continue
                for kw in itertools.product(kernel, repeat=n):
                    cw = RVector(B, [Elem(B, B.p_add(x.payload, k)) for x, k in zip(base_w, kw)])
                    if cw.dot(cu) == a2m:
                        return m, cu, cw
        else:
            if base_u.dot(moving).is_zero() and base_w.dot(base_u) == a2m:
                return m, base_u, base_w
    return None


def _preimage_vector(B, lam, vec, am):
    """A canonical preimage of vec * am under the localization map."""
    out = []
    for x in vec.entries:
        target = x * lam(am)
        pre = _preimage_payload(B, lam, target.payload)
        if pre is None:
            return None
        out.append(pre)
    from .rings import Elem

    return RVector(B, [Elem(B, p) for p in out])


def _preimage_payload(B, lam, target):
    loc_ring = lam.target
    if B.is_finite:
        # targets in e*B are their own canonical preimages
        if lam.p_fn(target) == target:
            return target
        for p in B.payloads():
            if lam.p_fn(p) == target:
                return p
        return None
    num, k = target
    return num if k == 0 else None
