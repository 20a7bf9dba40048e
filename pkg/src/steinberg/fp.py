"""Finite presentations, coset enumeration, and the exact equality tier.

The enumerator is a deterministic HLT-style Todd-Coxeter with immediate
coincidence handling and an optional lookahead/compaction pass when the
allocation budget is exceeded.  Completed tables are canonicalized by a
breadth-first renumbering, so identical inputs give byte-identical tables,
which also makes the on-disk cache (STEINBERG_CACHE) sound.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from dataclasses import dataclass

from . import words as W
from .matrices import Inconclusive, inverse, matrix_group_order, unipotent
from .rings import Elem
from .words import simplify


class PresentationError(Exception):
    pass


@dataclass(frozen=True)
class Presentation:
    """Generators 0..ngens-1; letter 2g is generator g, 2g+1 its inverse."""

    ngens: int
    relators: tuple
    names: tuple = ()

    def key(self):
        payload = json.dumps([self.ngens, [list(r) for r in self.relators]]).encode()
        return hashlib.sha256(payload).hexdigest()


def inverse_letters(wordletters):
    return tuple(l ^ 1 for l in reversed(wordletters))


# ---------------------------------------------------------------------------
# Todd-Coxeter


class CosetTable:
    """A complete standardized coset table; coset 0 is the subgroup."""

    def __init__(self, ncols, rows):
        self.ncols = ncols
        self.rows = rows
        self._tree = None

    @property
    def n(self):
        return len(self.rows)

    def order(self):
        return self.n

    def trace(self, coset, letters):
        rows = self.rows
        for l in letters:
            coset = rows[coset][l]
        return coset

    def coset_of(self, letters):
        return self.trace(0, letters)

    def permutation(self, letters):
        return tuple(self.trace(c, letters) for c in range(self.n))

    def rep_letters(self):
        """Spanning-tree words: for each coset, letters carrying 0 there."""
        if self._tree is None:
            parent = {0: ()}
            frontier = [0]
            while frontier:
                nxt = []
                for c in frontier:
                    row = self.rows[c]
                    for x in range(self.ncols):
                        d = row[x]
                        if d not in parent:
                            parent[d] = parent[c] + (x,)
                            nxt.append(d)
                frontier = nxt
            self._tree = [parent[c] for c in range(self.n)]
        return self._tree

    def to_json(self):
        return {"ncols": self.ncols, "rows": [list(r) for r in self.rows]}

    @staticmethod
    def from_json(obj):
        return CosetTable(obj["ncols"], [list(r) for r in obj["rows"]])


def todd_coxeter(pres, subgroup_words=(), max_cosets=10**6, alloc_factor=6):
    """Enumerate cosets of <subgroup_words> in the presented group.

    Raises Inconclusive when the live-coset cap is hit; never reports a
    group infinite.  The returned table is standardized (breadth-first
    numbering), hence deterministic in the inputs alone.
    """
    ncols = 2 * pres.ngens
    rels = [(tuple(w), tuple(l ^ 1 for l in w)) for w in pres.relators]
    subs = [tuple(w) for w in subgroup_words]
    table = [[-1] * ncols]
    p = [0]
    live = 1

    def rep(k):
        while p[k] != k:
            p[k] = p[p[k]]
            k = p[k]
        return k

    def define(a, x):
        nonlocal live
        nu = len(table)
        table.append([-1] * ncols)
        p.append(nu)
        table[a][x] = nu
        table[nu][x ^ 1] = a
        live += 1
        if live > max_cosets:
            raise Inconclusive(f"live cosets exceeded {max_cosets}")
        return nu

    def merge(k, l, queue):
        nonlocal live
        k = rep(k)
        l = rep(l)
        if k == l:
            return
        mu, nu = (k, l) if k < l else (l, k)
        p[nu] = mu
        live -= 1
        queue.append(nu)

    def coincidence(a, b):
        queue = []
        merge(a, b, queue)
        qi = 0
        while qi < len(queue):
            gamma = queue[qi]
            qi += 1
            row = table[gamma]
            for x in range(ncols):
                delta = row[x]
                if delta == -1:
                    continue
                table[delta][x ^ 1] = -1
                mu = rep(gamma)
                nu = rep(delta)
                tmx = table[mu][x]
                if tmx != -1:
                    merge(nu, tmx, queue)
                else:
                    tnxi = table[nu][x ^ 1]
                    if tnxi != -1:
                        merge(mu, tnxi, queue)
                    else:
                        table[mu][x] = nu
                        table[nu][x ^ 1] = mu

    def scan_and_fill(alpha, w, winv, fill=True):
        f, i = alpha, 0
        b, j = alpha, len(w) - 1
        while True:
            while i <= j:
                d = table[f][w[i]]
                if d == -1:
                    break
                f = d
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i:
                d = table[b][winv[j]]
                if d == -1:
                    break
                b = d
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            if not fill:
                return
            define(f, w[i])

    for w in subs:
        scan_and_fill(0, w, tuple(l ^ 1 for l in w))

    alloc_cap = max(alloc_factor * max_cosets // 4, 10000)
    lookaheads = 0
    alpha = 0
    while alpha < len(table):
        if p[alpha] != alpha:
            alpha += 1
            continue
        dead = False
        for w, winv in rels:
            scan_and_fill(alpha, w, winv)
            if p[alpha] != alpha:
                dead = True
                break
        if not dead:
            row = table[alpha]
            for x in range(ncols):
                if row[x] == -1:
                    define(alpha, x)
        alpha += 1
        if len(table) > alloc_cap:
            if lookaheads >= 3:
                raise Inconclusive("allocation cap exceeded after lookahead")
            lookaheads += 1
            for beta in range(len(table)):
                if p[beta] != beta:
                    continue
                for w, winv in rels:
                    scan_and_fill(beta, w, winv, fill=False)
                    if p[beta] != beta:
                        break
            table, p, alpha = _compact(table, p, rep, ncols, alpha)
            alloc_cap = len(table) + alloc_cap

    table, p, _ = _compact(table, p, rep, ncols, len(table))
    rows = _standardize(table, ncols)
    return CosetTable(ncols, rows)


def _compact(table, p, rep, ncols, alpha):
    old_live = [k for k in range(len(table)) if p[k] == k]
    remap = {old: new for new, old in enumerate(old_live)}
    new_table = []
    for old in old_live:
        row = table[old]
        new_table.append([-1 if d == -1 else remap[rep(d)] for d in row])
    new_alpha = sum(1 for k in old_live if k < alpha)
    return new_table, list(range(len(new_table))), new_alpha


def _standardize(table, ncols):
    """Renumber cosets in breadth-first order of first appearance."""
    n = len(table)
    remap = {0: 0}
    order = [0]
    qi = 0
    while qi < len(order):
        c = order[qi]
        qi += 1
        for x in range(ncols):
            d = table[c][x]
            if d != -1 and d not in remap:
                remap[d] = len(remap)
                order.append(d)
    if len(remap) != n:
        raise PresentationError("coset table is not connected")
    rows = [None] * n
    for old, new in remap.items():
        rows[new] = [remap[d] for d in table[old]]
    return rows


def eval_word(tbl, letters):
    """The permutation of cosets induced by a letter word."""
    return tbl.permutation(letters)


# ---------------------------------------------------------------------------
# Steinberg presentations over finite rings


@dataclass
class SteinbergPresentation:
    system: object
    ring: object
    presentation: Presentation
    gen_index: dict  # (root_index, payload) -> generator number

    def word_letters(self, w):
        """Presentation letters of a word (after exact simplification)."""
        out = []
        for idx, c in simplify(w).letters:
            out.append(2 * self.gen_index[(idx, c.payload)])
        return tuple(out)


def steinberg_presentation(datum, ring):
    """Generators x_alpha(r), r != 0; relators are the additivity and
    commutator families instantiated over all of the finite ring."""
    if not ring.is_finite:
        raise PresentationError("presentations need a finite ring")
    gens = []
    gen_index = {}
    names = []
    nonzero = [p for p in ring.payloads() if p != ring.zero_p]
    for ri in range(len(datum.roots)):
        for pay in nonzero:
            gen_index[(ri, pay)] = len(gens)
            gens.append((ri, pay))
            names.append(f"x[{datum.roots[ri]}]({ring.p_repr(pay)})")
    relators = []

    def gen_letter(ri, pay):
        return 2 * gen_index[(ri, pay)]

    def inv_letter(ri, pay):
        return 2 * gen_index[(ri, pay)] + 1

    # additivity within one root subgroup
    for ri in range(len(datum.roots)):
        for r in nonzero:
            for s in nonzero:
                total = ring.p_add(r, s)
                rel = [gen_letter(ri, r), gen_letter(ri, s)]
                if total != ring.zero_p:
                    rel.append(inv_letter(ri, total))
                relators.append(tuple(rel))
    # commutator relations between distinct non-opposite root subgroups
    for ai, alpha in enumerate(datum.roots):
        for bi, beta in enumerate(datum.roots):
            if ai == bi or beta == -alpha:
                continue
            gamma = alpha + beta
            in_phi = gamma in datum
            sign = datum.sign(alpha, beta) if in_phi else 0
            gi = datum.index[gamma] if in_phi else None
            for r in nonzero:
                for s in nonzero:
                    rel = [
                        gen_letter(ai, r),
                        gen_letter(bi, s),
                        inv_letter(ai, r),
                        inv_letter(bi, s),
                    ]
                    if in_phi:
                        prod = ring.p_mul(r, s)
                        if sign < 0:
                            prod = ring.p_neg(prod)
                        if prod != ring.zero_p:
                            rel.append(inv_letter(gi, prod))
                    relators.append(tuple(rel))
    pres = Presentation(ngens=len(gens), relators=tuple(relators), names=tuple(names))
    return SteinbergPresentation(
        system=datum, ring=ring, presentation=pres, gen_index=gen_index
    )


# ---------------------------------------------------------------------------
# table cache


_MEMO = {}


def enumerate_steinberg(sp, subgroup_letterwords=(), max_cosets=10**6):
    """Run (or recall) the enumeration for a Steinberg presentation."""
    key = (
        sp.presentation.key(),
        tuple(tuple(w) for w in subgroup_letterwords),
        max_cosets,
    )
    if key in _MEMO:
        return _MEMO[key]
    cache_dir = os.environ.get("STEINBERG_CACHE")
    path = None
    if cache_dir:
        digest = hashlib.sha256(json.dumps([key[0], [list(w) for w in key[1]], key[2]]).encode()).hexdigest()
        path = os.path.join(cache_dir, f"table-{digest}.json")
        if os.path.exists(path):
            with open(path) as fh:
                tbl = CosetTable.from_json(json.load(fh))
            _MEMO[key] = tbl
            return tbl
    tbl = todd_coxeter(sp.presentation, subgroup_letterwords, max_cosets=max_cosets)
    _MEMO[key] = tbl
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(tbl.to_json(), fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, path)
    return tbl


# ---------------------------------------------------------------------------
# exact-tier word testing


class WordTester:
    """Tiered equality of words over one (system, finite ring) pair."""

    def __init__(self, datum, ring, max_cosets=10**6, exact=True):
        self.datum = datum
        self.ring = ring
        self.sp = steinberg_presentation(datum, ring) if exact else None
        self.table = (
            enumerate_steinberg(self.sp, max_cosets=max_cosets) if exact else None
        )

    def exact_equal(self, w1, w2):
        l1 = self.sp.word_letters(w1)
        l2 = self.sp.word_letters(w2)
        return self.table.coset_of(l1) == self.table.coset_of(l2)

    def exact_trivial(self, w):
        return self.table.coset_of(self.sp.word_letters(w)) == 0

    def matrix_equal(self, w1, w2):
        return W.phi(w1) == W.phi(w2)

    def equal(self, w1, w2, tier="auto"):
        """Returns (verdict, tier_used); matrix equality alone reports the
        weaker tier honestly."""
        if tier in ("exact", "auto") and self.table is not None:
            return self.exact_equal(w1, w2), "exact"
        if simplify(w1) == simplify(w2):
            return True, "syntactic"
        return self.matrix_equal(w1, w2), "matrix"

    def equator(self):
        """The strongest available equality callable with its tier label."""
        if self.table is not None:
            return self.exact_equal, "exact"
        return self.matrix_equal, "matrix"


# ---------------------------------------------------------------------------
# K2 extraction


@dataclass
class KernelReport:
    system: str
    ring: str
    st_order: int
    image_order: int
    kernel_order: int
    kernel_cosets: list
    central: bool
    witnesses: list
    bfs_image_order: int = None

    def factorization_ok(self):
        return self.st_order == self.kernel_order * self.image_order


def k2_compute(datum, ring, max_cosets=10**6, cross_check=True):
    """Enumerate St, push every coset through phi, and cut out the kernel.

    The kernel is exactly the fiber of the identity matrix; centrality is
    tested against every generator, exhaustively, in the table.
    """
    sp = steinberg_presentation(datum, ring)
    tbl = enumerate_steinberg(sp, max_cosets=max_cosets)
    ngens = sp.presentation.ngens
    gens = [None] * ngens
    for (ri, pay), g in sp.gen_index.items():
        gens[g] = unipotent(datum, datum.roots[ri], Elem(ring, pay))
    colmats = []
    for g in range(ngens):
        colmats.append(gens[g])
        colmats.append(inverse(gens[g]))
    # matrices per coset, along the spanning tree
    mats = [None] * tbl.n
    keys = {}
    ident = None
    from .matrices import identity_matrix

    ident = identity_matrix(ring, datum.matrix_size())
    mats[0] = ident
    order = [0]
    qi = 0
    while qi < len(order):
        c = order[qi]
        qi += 1
        row = tbl.rows[c]
        for x in range(tbl.ncols):
            d = row[x]
            if mats[d] is None:
                mats[d] = mats[c] * colmats[x]
                order.append(d)
    kernel = []
    for c in range(tbl.n):
        k = mats[c].key()
        keys.setdefault(k, 0)
        keys[k] += 1
        if mats[c].is_identity():
            kernel.append(c)
    image_order = len(keys)
    # exhaustive centrality: kernel elements must commute with every generator
    witnesses = []
    reps = tbl.rep_letters()
    for c in kernel:
        repw = reps[c]
        for x in range(tbl.ncols):
            left = tbl.trace(tbl.rows[0][x], repw)
            right = tbl.rows[tbl.coset_of(repw)][x]
            if left != right:
                witnesses.append({"kernel_coset": c, "column": x})
    bfs_order = None
    if cross_check:
        bfs_order = matrix_group_order([gens[g] for g in range(ngens)])
    return KernelReport(
        system=datum.name,
        ring=ring.spec,
        st_order=tbl.n,
        image_order=image_order,
        kernel_order=len(kernel),
        kernel_cosets=kernel,
        central=not witnesses,
        witnesses=witnesses,
        bfs_image_order=bfs_order,
    )


# ---------------------------------------------------------------------------
# relative generation by the z-family


@dataclass
class RelativeIndexReport:
    system: str
    ring: str
    index: int
    quotient_order: int

    def ok(self):
        return self.index == self.quotient_order


def relative_subgroup_index(datum, ring, split, max_cosets=10**6):
    """Index of <z_alpha(s, r)> in St(Phi, R) against |St(Phi, R/I)|."""
    sp = steinberg_presentation(datum, ring)
    ideal_payloads = sorted(
        split.ideal.payload_set(), key=ring.enum_order().__getitem__
    )
    subgroup = []
    for ri in range(len(datum.roots)):
        for s in ideal_payloads:
            if s == ring.zero_p:
                continue
            for r in ring.payloads():
                zw = W.z_generator(datum, ring, ri, Elem(ring, s), Elem(ring, r))
                subgroup.append(sp.word_letters(zw))
    tbl = todd_coxeter(sp.presentation, subgroup, max_cosets=max_cosets)
    spq = steinberg_presentation(datum, split.quotient)
    tblq = enumerate_steinberg(spq, max_cosets=max_cosets)
    return RelativeIndexReport(
        system=datum.name, ring=ring.spec, index=tbl.n, quotient_order=tblq.n
    )


# ---------------------------------------------------------------------------
# generator domains with witnesses


def orbit_with_witnesses(ring, n, node_cap=10**6, system=None):
    """Every vector in the elementary orbit of e_1, with a witness word."""
    from .vdk import OrbitVector, linear_system

    system = system or linear_system(n)
    start = tuple(ring.one_p if i == 0 else ring.zero_p for i in range(n))
    parent = {start: None}
    orderl = [start]
    gens = []
    nonzero = [p for p in ring.payloads() if p != ring.zero_p]
    for i in range(n):
        for j in range(n):
            if i != j:
                for r in nonzero:
                    gens.append((i, j, r))
    padd, pmul = ring.p_add, ring.p_mul
    qi = 0
    while qi < len(orderl):
        vec = orderl[qi]
        qi += 1
        for i, j, r in gens:
            if vec[j] == ring.zero_p:
                continue
            newv = list(vec)
            newv[i] = padd(newv[i], pmul(r, vec[j]))
            newv = tuple(newv)
            if newv not in parent:
                parent[newv] = (vec, (i, j, r))
                orderl.append(newv)
                if len(orderl) > node_cap:
                    raise Inconclusive("orbit enumeration cap exceeded")
    out = {}
    from .matrices import RVector

    for vec in orderl:
        letters = []
        state = vec
        while parent[state] is not None:
            state, (i, j, r) = parent[state]
            letters.append((i, j, Elem(ring, r)))
        word = W.from_ij_letters(system, ring, letters)
        out[vec] = OrbitVector(
            vec=RVector(ring, [Elem(ring, p) for p in vec]), witness=word
        )
    return out


# ---------------------------------------------------------------------------
# the two relative presentations and their relator streams


@dataclass
class StarPresentations:
    """Generator domains for the F/S and X presentations over (n, R, I),
    every first argument carrying its orbit witness."""

    n: int
    ring: object
    ideal: object
    orbit: dict
    ideal_vectors: list  # RVectors over I^n
    f_symbols: list
    s_symbols: list

    def x_symbols(self):
        """The one-sided presentation reuses the F-shaped generator domain."""
        return self.f_symbols

    def additivity_triples(self):
        """(g1, g2, g12) instances of the second-argument additivity relator."""
        by_u = {}
        for sym in self.f_symbols:
            by_u.setdefault(sym.u.vec.key(), {})[sym.v.key()] = sym
        for key in sorted(by_u):
            group = by_u[key]
            syms = [group[k] for k in sorted(group)]
            for s1 in syms:
                for s2 in syms:
                    yield s1, s2, group[(s1.v + s2.v).key()]

    def check_map(self, mapper, equal):
        """Verify a generator assignment against the additivity relators.

        mapper: symbol -> word (or anything `equal` accepts); returns the
        list of failing triples.
        """
        bad = []
        cache = {}

        def image(sym):
            k = (sym.u.vec.key(), sym.v.key())
            if k not in cache:
                cache[k] = mapper(sym)
            return cache[k]

        for s1, s2, s12 in self.additivity_triples():
            if not equal(image(s1) * image(s2), image(s12)):
                bad.append((s1, s2, s12))
        return bad


def star_presentations(n, ring, ideal, node_cap=10**6):
    from .matrices import RVector
    from .vdk import FSymbol, SSymbol

    orbit = orbit_with_witnesses(ring, n, node_cap=node_cap)
    ideal_payloads = sorted(ideal.payload_set(), key=ring.enum_order().__getitem__)
    ivecs = [
        RVector(ring, [Elem(ring, p) for p in tup])
        for tup in itertools.product(ideal_payloads, repeat=n)
    ]
    fs = []
    ss = []
    for key in sorted(orbit):
        ov = orbit[key]
        for v in ivecs:
            if ov.vec.dot(v).is_zero():
                fs.append(FSymbol(u=ov, v=v))
                ss.append(SSymbol(u=v, v=ov))
    return StarPresentations(
        n=n,
        ring=ring,
        ideal=ideal,
        orbit=orbit,
        ideal_vectors=ivecs,
        f_symbols=fs,
        s_symbols=ss,
    )


# both relative presentations share their generator enumeration machinery
star_and_tulenbaev_presentations = star_presentations


# ---------------------------------------------------------------------------
# the rank >= 3 amalgam


@dataclass
class AmalgamData:
    system: object
    ring: object
    ideal: object
    subsystems: list
    generators: list        # (sub_index, parent_root_index, s_payload, r_payload)
    gluing_relators: list   # pairs of generator indices to be identified
    root_coverage: dict     # parent root index -> list of subsystem indices

    def canonical_word(self, gen):
        """The image of a z-symbol in St(parent system, R)."""
        _, ri, s, r = self.generators[gen]
        return W.z_generator(
            self.system, self.ring, ri, Elem(self.ring, s), Elem(self.ring, r)
        )


def amalgam_presentation(datum, ring, ideal):
    """The colimit presentation: one z-family per A_3 subsystem, glued along
    shared roots.  Returns the data plus the coverage map; the canonical-map
    identity checks are the callers' (they pick the tier)."""
    from .roots import a3_subsystems

    subs = a3_subsystems(datum)
    if not subs:
        raise PresentationError(f"{datum.name} has no A3 subsystems")
    ideal_payloads = sorted(ideal.payload_set(), key=ring.enum_order().__getitem__)
    nonzero_s = [p for p in ideal_payloads if p != ring.zero_p]
    rpool = list(ring.payloads())
    generators = []
    gen_of = {}
    coverage = {ri: [] for ri in range(len(datum.roots))}
    for si, sub in enumerate(subs):
        for root in sub.roots:
            ri = datum.index[root]
            coverage[ri].append(si)
            for s in nonzero_s:
                for r in rpool:
                    gen_of[(si, ri, s, r)] = len(generators)
                    generators.append((si, ri, s, r))
    gluing = []
    for ri in range(len(datum.roots)):
        present = coverage[ri]
        for a, b in itertools.combinations(present, 2):
            for s in nonzero_s:
                for r in rpool:
                    gluing.append((gen_of[(a, ri, s, r)], gen_of[(b, ri, s, r)]))
    return AmalgamData(
        system=datum,
        ring=ring,
        ideal=ideal,
        subsystems=subs,
        generators=generators,
        gluing_relators=gluing,
        root_coverage=coverage,
    )
