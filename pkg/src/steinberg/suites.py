"""Batch verification suites with deterministic, byte-stable reports.

Every suite is a pure function of its SuiteConfig: sampling is seeded, all
iteration orders are fixed, and the canonical JSON rendering carries no
wall-clock data, so re-running a config reproduces the report byte for
byte.  Failures always carry a witness (the ring, the vectors, the words
involved); a check that cannot decide (caps, unsupported ring class)
counts as inconclusive, which fails the overall verdict without claiming
falsity.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field

import numpy

from . import words as W
from .fp import (
    WordTester,
    amalgam_presentation,
    k2_compute,
    orbit_with_witnesses,
    relative_subgroup_index,
    star_presentations,
)
from .matrices import (
    Inconclusive,
    RMatrix,
    RVector,
    basis_vector,
    contragredient,
    transvection,
    vector,
)
from .rings import Elem, FGIdeal, lin_solve, localization, make_ring, split_data
from .roots import build_system
from .vdk import (
    FSymbol,
    OrbitVector,
    SSymbol,
    X_gen,
    X_tul,
    Y_gen,
    Y_tul,
    canonical_decomposition,
    decompose_with,
    iota,
    linear_system,
    psi_map,
    t_map,
    x_small,
    xeqy_words,
)
from .words import StWord, phi, simplify


@dataclass
class CheckRecord:
    name: str
    tier: str
    instances: int = 0
    failures: list = field(default_factory=list)
    inconclusive: int = 0
    wall_time: float = 0.0
    info: dict = None

    def fail(self, **witness):
        if len(self.failures) < 32:
            self.failures.append(witness)


@dataclass
class SuiteConfig:
    suite: str
    rings: tuple = ()
    systems: tuple = ()
    n: int = 4
    ideal: str = ""
    samples: int = 300
    seed: int = 0
    tier: str = "auto"
    max_cosets: int = 10**6

    @staticmethod
    def from_dict(d):
        cfg = SuiteConfig(suite=d["suite"])
        for k in ("n", "samples", "seed", "max_cosets"):
            if k in d:
                setattr(cfg, k, int(d[k]))
        for k in ("ideal", "tier"):
            if k in d:
                setattr(cfg, k, d[k])
        for k in ("rings", "systems"):
            if k in d:
                setattr(cfg, k, tuple(d[k]))
        return cfg

    def to_dict(self):
        return {
            "suite": self.suite,
            "rings": list(self.rings),
            "systems": list(self.systems),
            "n": self.n,
            "ideal": self.ideal,
            "samples": self.samples,
            "seed": self.seed,
            "tier": self.tier,
            "max_cosets": self.max_cosets,
        }


@dataclass
class VerificationReport:
    suite: str
    config: dict
    checks: list
    warnings: list = field(default_factory=list)

    @property
    def verdict(self):
        if any(c.failures for c in self.checks):
            return "fail"
        if any(c.inconclusive for c in self.checks):
            return "inconclusive"
        return "pass"

    def to_json(self):
        obj = {
            "schema": 1,
            "suite": self.suite,
            "config": self.config,
            "verdict": self.verdict,
            "warnings": list(self.warnings),
            "checks": [
                {
                    "name": c.name,
                    "tier": c.tier,
                    "instances": c.instances,
                    "failures": c.failures,
                    "inconclusive": c.inconclusive,
                    **({"info": c.info} if c.info else {}),
                }
                for c in self.checks
            ],
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"

    def to_text(self):
        lines = [f"suite {self.suite}: {self.verdict}"]
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        for c in self.checks:
            status = "ok" if not (c.failures or c.inconclusive) else "FAIL"
            lines.append(
                f"  [{status}] {c.name} (tier={c.tier}, instances={c.instances}, "
                f"failures={len(c.failures)}, inconclusive={c.inconclusive}, "
                f"{c.wall_time:.2f}s)"
            )
            for f in c.failures[:3]:
                lines.append(f"      witness: {json.dumps(f, sort_keys=True)}")
        return "\n".join(lines) + "\n"


def _timed(fn):
    def wrapper(*args, **kwargs):
        rec = fn(*args, **kwargs)
        return rec

    return wrapper


class _Check:
    """Context helper: times a check and appends it to the suite output."""

    def __init__(self, out, name, tier):
        self.rec = CheckRecord(name=name, tier=tier)
        self.out = out

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self.rec

    def __exit__(self, exc_type, exc, tb):
        self.rec.wall_time = time.perf_counter() - self._t0
        self.out.append(self.rec)
        if exc_type is Inconclusive:
            self.rec.inconclusive += 1
            return True
        return False


def _want(config, floor, cap=None):
    """Sampled-check budget: an explicit zero sample count means vacuous."""
    if config.samples == 0:
        return 0
    out = max(config.samples, floor) if cap is None else min(max(config.samples, floor), cap)
    return out


def _lit(x):
    """JSON-able rendering of elements/vectors/words for witnesses."""
    if isinstance(x, Elem):
        return x.ring.to_literal(x.payload)
    if isinstance(x, RVector):
        return x.to_literal()
    if isinstance(x, StWord):
        return x.to_literal()
    if isinstance(x, RMatrix):
        return x.to_dense()
    return x


def _rand_elem(ring, rng):
    pool = getattr(ring, "_suite_pool", None)
    if pool is None:
        pool = list(ring.payloads())
        ring._suite_pool = pool
    return Elem(ring, pool[rng.randrange(len(pool))])


def _rand_vector(ring, n, rng):
    return RVector(ring, [_rand_elem(ring, rng) for _ in range(n)])


def _rand_orthogonal(ring, n, rng, to):
    """Rejection-sample a vector orthogonal to `to`."""
    while True:
        v = _rand_vector(ring, n, rng)
        if to.dot(v).is_zero():
            return v


def _rand_word(system, ring, rng, length):
    letters = []
    nroots = len(system.roots)
    for _ in range(length):
        letters.append((rng.randrange(nroots), _rand_elem(ring, rng)))
    return simplify(StWord(system, ring, letters))


# ---------------------------------------------------------------------------
# chevalley-relations


def _root_patterns(datum):
    """(positions, signs) per root for building numpy unipotents."""
    n = datum.matrix_size()
    pats = []
    for root in datum.roots:
        if datum.family == "A":
            i, j = datum.a_indices(root)
            pats.append(((i, j, 1),))
        else:
            i, j = datum.d_pair(root)
            pats.append(
                (
                    (datum.d_position(i), datum.d_position(j), 1),
                    (datum.d_position(-j), datum.d_position(-i), -1),
                )
            )
    return pats


def suite_chevalley(config):
    systems = config.systems or ("A3", "A4", "D4", "D5")
    rings = config.rings or tuple(f"z/{k}" for k in range(2, 10))
    checks = []
    for sysname in systems:
        datum = build_system(sysname)
        pats = _root_patterns(datum)
        size = datum.matrix_size()
        nroots = len(datum.roots)
        sums = []
        for ai in range(nroots):
            row = []
            for bi in range(nroots):
                al, be = datum.roots[ai], datum.roots[bi]
                if ai == bi or be == -al:
                    row.append(("skip", 0))
                elif (al + be) in datum:
                    row.append((datum.index[al + be], datum.sign(al, be)))
                else:
                    row.append((None, 0))
            sums.append(row)
        for ringspec in rings:
            ring = make_ring(ringspec)
            N = ring.n
            with _Check(checks, f"chevalley-{sysname}-{ringspec}", "matrix") as rec:
                ident = numpy.eye(size, dtype=numpy.int64)

                def unip(ri, r):
                    m = ident.copy()
                    for i, j, s in pats[ri]:
                        m[i, j] = (s * r) % N
                    return m

                mats = [[unip(ri, r) for r in range(N)] for ri in range(nroots)]
                # additivity
                for ri in range(nroots):
                    for r in range(1, N):
                        for s in range(1, N):
                            lhs = mats[ri][r] @ mats[ri][s] % N
                            rec.instances += 1
                            if not numpy.array_equal(lhs, mats[ri][(r + s) % N]):
                                rec.fail(kind="additivity", root=ri, r=r, s=s)
                # commutators
                for ai in range(nroots):
                    for bi in range(nroots):
                        tag, sign = sums[ai][bi]
                        if tag == "skip":
                            continue
                        for r in range(1, N):
                            ar = mats[ai][r]
                            arinv = mats[ai][N - r]
                            for s in range(1, N):
                                bs = mats[bi][s]
                                comm = ar @ bs @ arinv @ mats[bi][N - s] % N
                                rec.instances += 1
                                if tag is None:
                                    ok = numpy.array_equal(comm, ident)
                                else:
                                    ok = numpy.array_equal(
                                        comm, mats[tag][(sign * r * s) % N]
                                    )
                                if not ok:
                                    rec.fail(
                                        kind="commutator", alpha=ai, beta=bi, r=r, s=s
                                    )
    return checks


# ---------------------------------------------------------------------------
# vdk-identities


def _all_vectors(ring, n):
    pool = list(ring.payloads())
    for tup in itertools.product(pool, repeat=n):
        yield RVector(ring, [Elem(ring, p) for p in tup])


def suite_vdk(config):
    checks = []
    n = config.n
    rng = random.Random(config.seed)
    # x_small contract, exhaustive over the tiny fields
    for ringspec in ("f2", "f3"):
        ring = make_ring(ringspec)
        with _Check(checks, f"x_small-contract-{ringspec}-exhaustive", "matrix") as rec:
            vecs = list(_all_vectors(ring, n))
            for u in vecs:
                for v in vecs:
                    if not u.dot(v).is_zero():
                        continue
                    if not (v.zero_positions() or u.zero_positions()):
                        continue
                    rec.instances += 1
                    if phi(x_small(u, v)) != transvection(u, v):
                        rec.fail(u=_lit(u), v=_lit(v))
    z6 = make_ring("z/6")
    with _Check(checks, "x_small-contract-z/6-random", "matrix") as rec:
        want = _want(config, 500)
        while rec.instances < want:
            u = _rand_vector(z6, n, rng)
            v = _rand_orthogonal(z6, n, rng, u)
            if not (v.zero_positions() or u.zero_positions()):
                continue
            rec.instances += 1
            if phi(x_small(u, v)) != transvection(u, v):
                rec.fail(u=_lit(u), v=_lit(v))
    # the canonical decomposition identity, exhaustive over f2 and f3
    for ringspec in ("f2", "f3"):
        ring = make_ring(ringspec)
        with _Check(checks, f"canonical-split-{ringspec}-exhaustive", "exact-arith") as rec:
            vecs = list(_all_vectors(ring, n))
            for v in vecs:
                ws = [w for w in vecs if w.dot(v).is_one()]
                us = [u for u in vecs if u.dot(v).is_zero()]
                for u in us:
                    for w in ws:
                        rec.instances += 1
                        terms = canonical_decomposition(u, v, w)
                        acc = vector(ring, [0] * n)
                        ok = True
                        for t in terms:
                            if not t.dot(v).is_zero() or len(t.zero_positions()) < 2:
                                ok = False
                            acc = acc + t
                        if not ok or acc != u:
                            rec.fail(u=_lit(u), v=_lit(v), w=_lit(w))
    # X_gen / Y_gen contracts and the additivity shadow over z/6
    with _Check(checks, "xgen-ygen-contract-z/6", "matrix") as rec:
        want_xg = _want(config, 300)
        while rec.instances < want_xg:
            u = _rand_vector(z6, n, rng)
            cert = lin_solve(list(u.entries), z6.one())
            if cert is None:
                continue
            cert = RVector(z6, cert)
            v = _rand_orthogonal(z6, n, rng, u)
            vv = _rand_orthogonal(z6, n, rng, u)
            rec.instances += 1
            if phi(X_gen(u, v, cert=cert)) != transvection(u, v):
                rec.fail(kind="X", u=_lit(u), v=_lit(v))
            if phi(Y_gen(v, u, cert=cert)) != transvection(v, u):
                rec.fail(kind="Y", u=_lit(v), v=_lit(u))
            lhs = phi(X_gen(u, v, cert=cert) * X_gen(u, vv, cert=cert))
            if lhs != transvection(u, v + vv):
                rec.fail(kind="additivity-shadow", u=_lit(u), v=_lit(v), w=_lit(vv))
    # exact-tier well-definedness over f2 (index and certificate choices)
    f2 = make_ring("f2")
    tester = WordTester(
        linear_system(n), f2, max_cosets=config.max_cosets,
        exact=config.tier != "matrix",
    )
    equal, tier_label = tester.equator()
    with _Check(checks, "x_small-index-independence-f2", tier_label) as rec:
        vecs = list(_all_vectors(f2, n))
        for u in vecs:
            for v in vecs:
                if not u.dot(v).is_zero():
                    continue
                choices = [("v", i) for i in v.zero_positions()] + [
                    ("u", i) for i in u.zero_positions()
                ]
                if len(choices) < 2:
                    continue
                base = x_small(u, v, index=choices[0][1], mode=choices[0][0])
                for mode, idx in choices[1:]:
                    rec.instances += 1
                    other = x_small(u, v, index=idx, mode=mode)
                    if not equal(base, other):
                        rec.fail(u=_lit(u), v=_lit(v), mode=mode, index=idx)
    with _Check(checks, "xgen-certificate-independence-f2", tier_label) as rec:
        vecs = list(_all_vectors(f2, n))
        for u in vecs:
            certs = [w for w in vecs if w.dot(u).is_one()]
            if len(certs) < 2:
                continue
            for v in vecs:
                if not u.dot(v).is_zero():
                    continue
                base = X_gen(u, v, cert=certs[0])
                for w in certs[1:3]:
                    rec.instances += 1
                    if not equal(base, X_gen(u, v, cert=w)):
                        rec.fail(kind="X", u=_lit(u), v=_lit(v), cert=_lit(w))
                baseY = Y_gen(v, u, cert=certs[0])
                for w in certs[1:3]:
                    rec.instances += 1
                    if not equal(baseY, Y_gen(v, u, cert=w)):
                        rec.fail(kind="Y", u=_lit(v), v=_lit(u), cert=_lit(w))
    return checks


# ---------------------------------------------------------------------------
# tulenbaev-identities (the eight X/Y laws)


def _sample_xlaw_data(ring, n, rng):
    """u, w orth to u, certificates z (b = z^t u) and y (a = y^t u), g."""
    u = _rand_vector(ring, n, rng)
    w = _rand_orthogonal(ring, n, rng, u)
    z = _rand_vector(ring, n, rng)
    y = _rand_vector(ring, n, rng)
    return u, w, z, y


def _xlaw_checks(rec, ring, n, rng, samples, equal, system):
    for _ in range(samples):
        u, w, z, y = _sample_xlaw_data(ring, n, rng)
        b = z.dot(u)
        a = y.dot(u)
        c = _rand_elem(ring, rng)
        moving = w.scale(b)
        datum = decompose_with(u, moving, z, w)
        # (a) X_{u,vc}(a) = X_{u,v}(ca)
        rec.instances += 1
        lhs = X_tul(decompose_with(u, moving.scale(c), z, w.scale(c)), mult=a, system=system)
        rhs = X_tul(datum, mult=c * a, system=system)
        if not equal(lhs, rhs):
            rec.fail(law="X-scale", u=_lit(u), w=_lit(w), b=_lit(b), a=_lit(a), c=_lit(c))
        # (b) X_{uc,v}(ca) = X_{u,vc^2}(a), instantiated at v = w*b*c
        rec.instances += 1
        uc = u.scale(c)
        lhs = X_tul(decompose_with(uc, moving.scale(c), z, w), mult=c * a, system=system)
        rhs = X_tul(
            decompose_with(u, moving.scale(c * c * c), z, w.scale(c * c * c)),
            mult=a,
            system=system,
        )
        if not equal(lhs, rhs):
            rec.fail(law="X-balance", u=_lit(u), w=_lit(w), b=_lit(b), a=_lit(a), c=_lit(c))
        # (c) X_{u,v}(a) X_{u,v'}(a) = X_{u,v+v'}(a)
        rec.instances += 1
        w2 = _rand_orthogonal(ring, n, rng, u)
        moving2 = w2.scale(b)
        datum2 = decompose_with(u, moving2, z, w2)
        both = decompose_with(u, moving + moving2, z, w + w2)
        lhs = X_tul(datum, mult=a, system=system) * X_tul(datum2, mult=a, system=system)
        rhs = X_tul(both, mult=a, system=system)
        if not equal(lhs, rhs):
            rec.fail(law="X-additivity", u=_lit(u), w=_lit(w), w2=_lit(w2), b=_lit(b), a=_lit(a))
        # (d) g X_{u,wb}(a) g^-1 = X_{gu, g* wb}(a)
        rec.instances += 1
        g = _rand_word(system, ring, rng, 4)
        G = phi(g)
        Gs = contragredient(G)
        lhs = g * X_tul(datum, mult=a, system=system) * g.inverse()
        rhs = X_tul(
            decompose_with(G * u, (Gs * moving), Gs * z, Gs * w), mult=a, system=system
        )
        if not equal(lhs, rhs):
            rec.fail(law="X-conjugation", u=_lit(u), w=_lit(w), b=_lit(b), a=_lit(a), g=_lit(g))


def _ylaw_checks(rec, ring, n, rng, samples, equal, system):
    for _ in range(samples):
        v, w, z, y = _sample_xlaw_data(ring, n, rng)
        b = z.dot(v)
        a = y.dot(v)
        c = _rand_elem(ring, rng)
        moving = w.scale(b)
        datum = decompose_with(v, moving, z, w)
        # (a) Y_{uc,v}(a) = Y_{u,v}(ca)
        rec.instances += 1
        lhs = Y_tul(decompose_with(v, moving.scale(c), z, w.scale(c)), mult=a, system=system)
        rhs = Y_tul(datum, mult=c * a, system=system)
        if not equal(lhs, rhs):
            rec.fail(law="Y-scale", v=_lit(v), w=_lit(w), b=_lit(b), a=_lit(a), c=_lit(c))
        # (b) Y_{u,vc}(ca) = Y_{uc^2,v}(a), instantiated at u = w*b*c
        rec.instances += 1
        vc = v.scale(c)
        lhs = Y_tul(decompose_with(vc, moving.scale(c), z, w), mult=c * a, system=system)
        rhs = Y_tul(
            decompose_with(v, moving.scale(c * c * c), z, w.scale(c * c * c)),
            mult=a,
            system=system,
        )
        if not equal(lhs, rhs):
            rec.fail(law="Y-balance", v=_lit(v), w=_lit(w), b=_lit(b), a=_lit(a), c=_lit(c))
        # (c) Y_{u,v}(a) Y_{u',v}(a) = Y_{u+u',v}(a)
        rec.instances += 1
        w2 = _rand_orthogonal(ring, n, rng, v)
        moving2 = w2.scale(b)
        lhs = Y_tul(datum, mult=a, system=system) * Y_tul(
            decompose_with(v, moving2, z, w2), mult=a, system=system
        )
        rhs = Y_tul(decompose_with(v, moving + moving2, z, w + w2), mult=a, system=system)
        if not equal(lhs, rhs):
            rec.fail(law="Y-additivity", v=_lit(v), w=_lit(w), w2=_lit(w2), b=_lit(b), a=_lit(a))
        # (d) g Y_{wb,v}(a) g^-1 = Y_{g wb, g* v}(a)
        rec.instances += 1
        g = _rand_word(system, ring, rng, 4)
        G = phi(g)
        Gs = contragredient(G)
        lhs = g * Y_tul(datum, mult=a, system=system) * g.inverse()
        rhs = Y_tul(
            decompose_with(Gs * v, (G * moving), G * z, G * w), mult=a, system=system
        )
        if not equal(lhs, rhs):
            rec.fail(law="Y-conjugation", v=_lit(v), w=_lit(w), b=_lit(b), a=_lit(a), g=_lit(g))


def suite_tulenbaev(config):
    checks = []
    n = config.n
    system = linear_system(n)
    f2 = make_ring("f2")
    tester = WordTester(
        system, f2, max_cosets=config.max_cosets, exact=config.tier != "matrix"
    )
    equal, tier_label = tester.equator()
    rng = random.Random(config.seed)
    with _Check(checks, f"xlaws-f2-{tier_label}", tier_label) as rec:
        _xlaw_checks(rec, f2, n, rng, _want(config, 150, 150), equal, system)
    with _Check(checks, f"ylaws-f2-{tier_label}", tier_label) as rec:
        _ylaw_checks(rec, f2, n, rng, _want(config, 150, 150), equal, system)
    matrix_eq = lambda a, b: phi(a) == phi(b)
    for ringspec in config.rings or ("z/4", "z/6"):
        ring = make_ring(ringspec)
        rng2 = random.Random(config.seed + 1)
        with _Check(checks, f"xlaws-{ringspec}-matrix", "matrix") as rec:
            _xlaw_checks(rec, ring, n, rng2, _want(config, 75, max(75, config.samples // 4)), matrix_eq, system)
        with _Check(checks, f"ylaws-{ringspec}-matrix", "matrix") as rec:
            _ylaw_checks(rec, ring, n, rng2, _want(config, 75, max(75, config.samples // 4)), matrix_eq, system)
    return checks


# ---------------------------------------------------------------------------
# xeqy


def suite_xeqy(config):
    checks = []
    n = config.n
    system = linear_system(n)
    f2 = make_ring("f2")
    tester = WordTester(
        system, f2, max_cosets=config.max_cosets, exact=config.tier != "matrix"
    )
    equal, tier_label = tester.equator()
    with _Check(checks, "xeqy-f2-exhaustive", tier_label) as rec:
        vecs = list(_all_vectors(f2, n))
        one = f2.one()
        for x in vecs:
            for y in vecs:
                b = x.dot(y)
                for u in vecs:
                    if not (x.dot(u).is_zero() and u.dot(y).is_zero()):
                        continue
                    if lin_solve(list(u.entries), b) is None:
                        continue
                    for v in vecs:
                        if not (
                            u.dot(v).is_zero()
                            and x.dot(v).is_zero()
                            and y.dot(v).is_zero()
                        ):
                            continue
                        if lin_solve(list(v.entries), b) is None:
                            continue
                        rec.instances += 1
                        rw = xeqy_words(x, y, u, v, b, one)
                        base = rw.lhs
                        for tag, wd in (
                            ("rhs", rw.rhs),
                            ("g", rw.g_direct),
                            ("path_x", rw.path_x),
                            ("path_y", rw.path_y),
                        ):
                            if not equal(base, wd):
                                rec.fail(
                                    side=tag, x=_lit(x), y=_lit(y), u=_lit(u), v=_lit(v)
                                )
    z6 = make_ring("z/6")
    rng = random.Random(config.seed)
    with _Check(checks, "xeqy-z/6-random", "matrix") as rec:
        want = _want(config, 200, max(200, config.samples // 2))
        while rec.instances < want:
            perm = list(range(n))
            rng.shuffle(perm)
            x3, x4, y3, y4 = (_rand_elem(z6, rng) for _ in range(4))
            b = x3 * y3 + x4 * y4
            scales = [z6.el(1), z6.el(5), b, b * 5]
            alpha = scales[rng.randrange(4)]
            beta = scales[rng.randrange(4)]
            if lin_solve([alpha], b) is None or lin_solve([beta], b) is None:
                continue
            u = basis_vector(z6, n, perm[0]).scale(alpha)
            v = basis_vector(z6, n, perm[1]).scale(beta)
            x = basis_vector(z6, n, perm[2]).scale(x3) + basis_vector(z6, n, perm[3]).scale(x4)
            y = basis_vector(z6, n, perm[2]).scale(y3) + basis_vector(z6, n, perm[3]).scale(y4)
            r = _rand_elem(z6, rng)
            rec.instances += 1
            rw = xeqy_words(x, y, u, v, b, r)
            mats = [phi(rw.lhs), phi(rw.rhs), phi(rw.g_direct), phi(rw.path_x), phi(rw.path_y)]
            if any(m != mats[0] for m in mats):
                rec.fail(x=_lit(x), y=_lit(y), u=_lit(u), v=_lit(v), b=_lit(b), r=_lit(r))
    return checks


# ---------------------------------------------------------------------------
# star-presentation (the two-generator-family relations and the X=Y bridge)


def _resolve_ideal(ring, spec_text):
    if spec_text == "kernel":
        return FGIdeal(ring, kind="semi-kernel")
    if spec_text:
        gens = json.loads(spec_text)
        return FGIdeal(ring, [ring.el(g) for g in gens])
    # default: the whole ring
    return FGIdeal(ring, [ring.one()])


def suite_star(config):
    checks = []
    n = config.n
    system = linear_system(n)
    rng = random.Random(config.seed)
    # phi-tier relation checks over f2[eps]
    f2e = make_ring("quo(poly(f2,X),[0,0,1])")
    ideal = FGIdeal(f2e, [f2e.gen()])
    star = star_presentations(n, f2e, ideal)
    iota_cache = {}

    def iota_phi(sym):
        key = (sym.u.vec.key(), sym.v.key())
        hit = iota_cache.get(key)
        if hit is None:
            word = iota(sym)
            hit = (word, phi(word))
            iota_cache[key] = hit
        return hit

    by_u = {}
    for sym in star.f_symbols:
        by_u.setdefault(sym.u.vec.key(), []).append(sym)
    with _Check(checks, "F-additivity-iota-f2[eps]-exhaustive", "matrix") as rec:
        for key in sorted(by_u):
            group = by_u[key]
            ov = group[0].u
            by_v = {sym.v.key(): sym for sym in group}
            for s1 in group:
                for s2 in group:
                    rec.instances += 1
                    target = by_v[(s1.v + s2.v).key()]
                    lhs = iota_phi(s1)[1] * iota_phi(s2)[1]
                    if lhs != iota_phi(target)[1]:
                        rec.fail(u=_lit(ov.vec), v=_lit(s1.v), w=_lit(s2.v))
    with _Check(checks, "S-additivity-iota-f2[eps]-exhaustive", "matrix") as rec:
        # mirrored additivity for the S family, via the transpose symmetry
        for key in sorted(by_u):
            group = by_u[key]
            ov = group[0].u
            cert = ov.cert()
            seen = {}
            for sym in group:
                wrd = Y_gen(sym.v, ov.vec, cert=cert)
                seen[sym.v.key()] = phi(wrd)
            for s1 in group:
                for s2 in group:
                    rec.instances += 1
                    lhs = seen[s1.v.key()] * seen[s2.v.key()]
                    if lhs != seen[(s1.v + s2.v).key()]:
                        rec.fail(v=_lit(ov.vec), u=_lit(s1.v), u2=_lit(s2.v))
    with _Check(checks, "conjugation-iota-f2[eps]-sampled", "matrix") as rec:
        fs = star.f_symbols
        for _ in range(_want(config, 300, 300)):
            s1 = fs[rng.randrange(len(fs))]
            s2 = fs[rng.randrange(len(fs))]
            w1, m1 = iota_phi(s1)
            w2, m2 = iota_phi(s2)
            tuv = transvection(s1.u.vec, s1.v)
            new_u = tuv * s2.u.vec
            new_v = transvection(s1.v, -s1.u.vec) * s2.v
            witness = w1 * s2.u.witness
            rhs_word = X_gen(new_u, new_v, witness=witness)
            rec.instances += 1
            if m1 * m2 * phi(w1.inverse()) != phi(rhs_word):
                rec.fail(u=_lit(s1.u.vec), v=_lit(s1.v), u2=_lit(s2.u.vec), v2=_lit(s2.v))
    # exact tier over f2: the F/S coincidence and the column-split relator
    f2 = make_ring("f2")
    tester = WordTester(
        system, f2, max_cosets=config.max_cosets, exact=config.tier != "matrix"
    )
    equal, tier_label = tester.equator()
    with _Check(checks, f"FS-coincidence-f2-{tier_label}", tier_label) as rec:
        for trial in range(_want(config, 100, 100)):
            mw = _rand_word(system, f2, rng, 5)
            M = phi(mw)
            Ms = contragredient(M)
            u = M * basis_vector(f2, n, 0)
            v = Ms * basis_vector(f2, n, 1)
            ucert = Ms * basis_vector(f2, n, 0)
            vcert = M * basis_vector(f2, n, 1)
            for a_p in f2.payloads():
                a = Elem(f2, a_p)
                rec.instances += 1
                lhs = X_gen(u, v.scale(a), cert=ucert)
                rhs = Y_gen(u.scale(a), v, cert=vcert)
                if not equal(lhs, rhs):
                    rec.fail(M=_lit(mw), a=_lit(a))
    with _Check(checks, f"xy-bridge-two-routes-f2-{tier_label}", tier_label) as rec:
        e1 = basis_vector(f2, n, 0)
        e2 = basis_vector(f2, n, 1)
        e3 = basis_vector(f2, n, 2)
        a = f2.one()
        lhs = X_gen(e1, e2.scale(a), cert=e1)
        rhs = Y_gen(e1.scale(a), e2, cert=e2)
        ym = Y_gen(-e3, e2, cert=e2)
        xm = X_gen(e1, e3.scale(a), cert=e1)
        comm = W.commutator(ym, xm)
        route_x = W.conjugate(ym, xm) * X_gen(e1, -(e3.scale(a)), cert=e1)
        route_y = ym * W.conjugate(xm, Y_gen(e3, e2, cert=e2))
        for tag, pair in (
            ("X=Y", (lhs, rhs)),
            ("comm=X", (comm, lhs)),
            ("routeX=X", (route_x, lhs)),
            ("routeY=Y", (route_y, rhs)),
        ):
            rec.instances += 1
            if not equal(*pair):
                rec.fail(route=tag)
    with _Check(checks, f"column-split-relator-f2-{tier_label}", tier_label) as rec:
        from .vdk import basis_orbit_vector

        e2ov = basis_orbit_vector(f2, n, 1, system=system)
        for trial in range(_want(config, 60, 60)):
            mw = _rand_word(system, f2, rng, 5)
            M = phi(mw)
            Ms = contragredient(M)
            for r_p in f2.payloads():
                for a_p in f2.payloads():
                    r = Elem(f2, r_p)
                    a = Elem(f2, a_p)
                    u1 = M * basis_vector(f2, n, 0)
                    u2 = M * basis_vector(f2, n, 1)
                    v3 = Ms * basis_vector(f2, n, 2)
                    lhs_u = u1.scale(r) + u2
                    # witness: M then t_01(r) carry e_2 to M(e_1 r + e_2)
                    wit = mw * W.x_ij(system, f2, 0, 1, r) * e2ov.witness
                    rec.instances += 1
                    lhs = X_gen(lhs_u, v3.scale(a), witness=wit)
                    rhs = X_gen(u1, v3.scale(a * r), witness=mw) * X_gen(
                        u2, v3.scale(a), witness=mw * e2ov.witness
                    )
                    if not equal(lhs, rhs):
                        rec.fail(M=_lit(mw), r=_lit(r), a=_lit(a))
    with _Check(checks, "kappa-iota-f2[eps]-sampled", "matrix") as rec:
        fs = star.f_symbols
        for _ in range(_want(config, 200, 200)):
            sym = fs[rng.randrange(len(fs))]
            rec.instances += 1
            if iota_phi(sym)[1] != transvection(sym.u.vec, sym.v):
                rec.fail(u=_lit(sym.u.vec), v=_lit(sym.v))
    return checks


# ---------------------------------------------------------------------------
# psi-s-relations


def suite_psi(config):
    checks = []
    n = config.n
    system = linear_system(n)
    f2e = make_ring("quo(poly(f2,X),[0,0,1])")
    ideal = FGIdeal(f2e, [f2e.gen()])
    sd = split_data(f2e, ideal)
    pool = [Elem(f2e, p) for p in f2e.payloads()]
    idx_pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    cache = {}

    def psi(i, j, xi):
        key = (i, j, xi.payload)
        if key not in cache:
            cache[key] = psi_map(sd, n, i, j, xi, system=system)
        return cache[key]

    with _Check(checks, "psi-additivity-f2[eps]-exhaustive", "matrix") as rec:
        for i, j in idx_pairs:
            for xi in pool:
                for eta in pool:
                    rec.instances += 1
                    if not (psi(i, j, xi) * psi(i, j, eta)).matrix_equal(
                        psi(i, j, xi + eta)
                    ):
                        rec.fail(i=i, j=j, xi=_lit(xi), eta=_lit(eta))
    with _Check(checks, "psi-disjoint-commute-f2[eps]-exhaustive", "matrix") as rec:
        for i, j in idx_pairs:
            for h, k in idx_pairs:
                if h == j or k == i or (i, j) == (h, k):
                    continue
                for xi in pool:
                    for eta in pool:
                        rec.instances += 1
                        left = psi(i, j, xi) * psi(h, k, eta)
                        right = psi(h, k, eta) * psi(i, j, xi)
                        if not left.matrix_equal(right):
                            rec.fail(i=i, j=j, h=h, k=k, xi=_lit(xi), eta=_lit(eta))
    with _Check(checks, "psi-commutator-chain-f2[eps]-exhaustive", "matrix") as rec:
        for i, j in idx_pairs:
            for k in range(n):
                if k in (i, j):
                    continue
                for xi in pool:
                    for eta in pool:
                        rec.instances += 1
                        a = psi(i, j, xi)
                        b = psi(j, k, eta)
                        formula = W.semidirect_commutator(a, b)
                        direct = W.semidirect_commutator_direct(a, b)
                        target = psi(i, k, xi * eta)
                        expansion = _expansion_tuple(sd, system, n, i, j, k, xi, eta)
                        ok = (
                            formula.matrix_equal(direct)
                            and direct.matrix_equal(target)
                            and expansion.matrix_equal(target)
                        )
                        if not ok:
                            rec.fail(i=i, j=j, k=k, xi=_lit(xi), eta=_lit(eta))
    return checks


def _expansion_tuple(sd, system, n, i, j, k, xi, eta):
    """The four-factor kernel word of the semidirect commutator expansion."""
    ring = sd.ring
    xi_bar = sd.sigma(sd.pi(xi))
    eta_bar = sd.sigma(sd.pi(eta))
    xi_d = xi - xi_bar
    eta_d = eta - eta_bar
    ei = basis_vector(ring, n, i)
    ej = basis_vector(ring, n, j)
    ek = basis_vector(ring, n, k)
    u2 = ej + ei.scale(xi_bar)
    f1 = X_gen(ei, ej.scale(xi_d), cert=ei, system=system)
    f2_ = X_gen(u2, ek.scale(eta_d), cert=ej, system=system)
    f3 = X_gen(ei, ek.scale(eta_bar * xi_d) - ej.scale(xi_d), cert=ei, system=system)
    f4 = X_gen(ej, -(ek.scale(eta_d)), cert=ej, system=system)
    kernel = f1 * f2_ * f3 * f4
    quotient = W.x_ij(system, sd.quotient, i, k, sd.pi(xi * eta))
    return W.SemidirectElement(sd, system, kernel, quotient)


# ---------------------------------------------------------------------------
# k2-exact / relative-generation / amalgam / tmap-diagram


def suite_k2(config):
    checks = []
    pairs = []
    systems = config.systems or ("A2", "A3")
    rings = config.rings or ("f2",)
    for s in systems:
        for r in rings:
            pairs.append((s, r))
    for sysname, ringspec in pairs:
        datum = build_system(sysname)
        ring = make_ring(ringspec)
        with _Check(checks, f"k2-{sysname}-{ringspec}", "exact") as rec:
            rep = k2_compute(datum, ring, max_cosets=config.max_cosets)
            rec.instances = rep.st_order
            if not rep.factorization_ok():
                rec.fail(kind="factorization", st=rep.st_order,
                         kernel=rep.kernel_order, image=rep.image_order)
            if rep.bfs_image_order != rep.image_order:
                rec.fail(kind="bfs-cross-check", table=rep.image_order,
                         bfs=rep.bfs_image_order)
            if not rep.central:
                for w in rep.witnesses[:5]:
                    rec.fail(kind="centrality", **w)
            rec.info = {
                "st_order": rep.st_order,
                "kernel_order": rep.kernel_order,
                "image_order": rep.image_order,
            }
    return checks


def suite_relative(config):
    checks = []
    systems = config.systems or ("A2", "A3")
    ringspec = (config.rings or ("quo(poly(f2,X),[0,0,1])",))[0]
    ring = make_ring(ringspec)
    ideal = _resolve_ideal(ring, config.ideal or json.dumps([ring.to_literal(ring.gen().payload)]))
    sd = split_data(ring, ideal)
    for sysname in systems:
        datum = build_system(sysname)
        with _Check(checks, f"relative-generation-{sysname}-{ringspec}", "exact") as rec:
            rep = relative_subgroup_index(datum, ring, sd, max_cosets=config.max_cosets)
            rec.instances = rep.index
            if not rep.ok():
                rec.fail(index=rep.index, quotient_order=rep.quotient_order)
    return checks


def suite_amalgam(config):
    checks = []
    sysname = (config.systems or ("D4",))[0]
    ringspec = (config.rings or ("quo(poly(f2,X),[0,0,1])",))[0]
    datum = build_system(sysname)
    ring = make_ring(ringspec)
    ideal = _resolve_ideal(ring, config.ideal or json.dumps([ring.to_literal(ring.gen().payload)]))
    am = amalgam_presentation(datum, ring, ideal)
    with _Check(checks, f"amalgam-coverage-{sysname}", "exact-arith") as rec:
        rec.instances = len(datum.roots)
        for ri in range(len(datum.roots)):
            if not am.root_coverage[ri]:
                rec.fail(root=str(datum.roots[ri]))
    with _Check(checks, f"amalgam-gluing-{sysname}-{ringspec}", "matrix") as rec:
        for g1, g2 in am.gluing_relators:
            rec.instances += 1
            wrd = am.canonical_word(g1) * am.canonical_word(g2).inverse()
            if not phi(wrd).is_identity():
                rec.fail(gen1=am.generators[g1], gen2=am.generators[g2])
    return checks


def suite_tmap(config):
    checks = []
    n = config.n
    rng = random.Random(config.seed)
    # finite product ring: exhaustive small sample
    B = make_ring("prod(f2,f3)")
    a = B.el((0, 1))
    ideal = FGIdeal(B, [a])
    loc, lam = localization(B, a)
    system_loc = linear_system(n)
    with _Check(checks, "tmap-prod(f2,f3)-exhaustive-small", "matrix") as rec:
        orbit = orbit_with_witnesses(loc, n)
        ideal_loc = sorted(
            {lam.p_fn(p) for p in ideal.payload_set()}, key=loc.enum_order().__getitem__
        )
        for key in sorted(orbit):
            ov = orbit[key]
            Ms = contragredient(phi(ov.witness))
            base_v = Ms * basis_vector(loc, n, 1)
            for c_p in ideal_loc:
                if c_p == loc.zero_p:
                    continue
                vloc = base_v.scale(Elem(loc, c_p))
                vB = RVector(B, [Elem(B, x.payload) for x in vloc.entries])
                rec.instances += 1
                res = t_map(B, a, ideal, FSymbol(u=ov, v=vB), n=n)
                if not _tmap_diagram_ok(res, lam, loc, ov.vec, vloc):
                    rec.fail(u=_lit(ov.vec), v=_lit(vB), m=res.m)
    # the augmentation extension of the integers
    Bz = make_ring("semi(z,2)")
    az = Bz.el(2)
    idz = FGIdeal(Bz, kind="semi-kernel")
    locz, lamz = localization(Bz, az)
    with _Check(checks, "tmap-semi(z,2)-sampled", "matrix") as rec:
        want = _want(config, 50, 200)
        made = 0
        while made < want:
            uw = _rand_loc_word(system_loc, Bz, locz, lamz, rng)
            ov = OrbitVector.from_word(uw, n)
            Ms = contragredient(phi(uw))
            j = rng.randrange(1, n)
            cB = _rand_ideal_elem(Bz, rng)
            vloc = (Ms * basis_vector(locz, n, j)).scale(lamz(cB))
            vB_entries = []
            ok = True
            for x in vloc.entries:
                num, k = x.payload
                if k != 0 and num != Bz.zero_p:
                    ok = False
                    break
                vB_entries.append(Elem(Bz, num if k == 0 else Bz.zero_p))
            if not ok:
                # clear denominators: scale by a power of 2 inside the ideal
                vloc = vloc.scale(lamz(az * az))
                vB_entries = []
                for x in vloc.entries:
                    num, k = x.payload
                    if k != 0 and num != Bz.zero_p:
                        ok = False
                        break
                    vB_entries.append(Elem(Bz, num if k == 0 else Bz.zero_p))
                if not ok:
                    continue
            vB = RVector(Bz, vB_entries)
            made += 1
            rec.instances += 1
            if rng.randrange(2):
                res = t_map(Bz, az, idz, FSymbol(u=ov, v=vB), n=n)
                ok = _tmap_diagram_ok(res, lamz, locz, ov.vec, vloc)
            else:
                res = t_map(Bz, az, idz, SSymbol(u=vB, v=ov), n=n)
                ok = _tmap_diagram_ok(res, lamz, locz, ov.vec, vloc, mirrored=True)
            if not ok:
                rec.fail(u=_lit(ov.vec), v=_lit(vB), m=res.m, kind=res.kind)
    return checks


def _tmap_diagram_ok(res, lam, loc, u, vloc, mirrored=False):
    MB = phi(res.word)
    data = {}
    for ij, p in MB.data.items():
        q = lam.p_fn(p)
        if q != loc.zero_p:
            data[ij] = q
    localized = RMatrix(loc, MB.n, data)
    target = transvection(vloc, u) if mirrored else transvection(u, vloc)
    return localized == target


def _rand_loc_word(system, B, loc, lam, rng):
    letters = []
    n = system.rank + 1
    for _ in range(rng.randrange(1, 4)):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = _rand_loc_elem(B, loc, lam, rng)
        letters.append((i, j, c))
    word = W.empty(system, loc)
    for i, j, c in letters:
        word = word * W.x_ij(system, loc, i, j, c)
    return word


def _rand_loc_elem(B, loc, lam, rng):
    r = rng.randrange(-2, 3)
    coeffs = [0] + [rng.randrange(-2, 3) for _ in range(rng.randrange(2))]
    base = Elem(B, B.from_literal([r, [[c, 0] for c in coeffs]]))
    out = lam(base)
    k = rng.randrange(2)
    if k:
        half = Elem(loc, loc._canon(B.one().payload, k))
        out = out * half
    return out


def _rand_ideal_elem(B, rng):
    coeffs = [[0, 0]] + [[rng.randrange(-2, 3), 0] for _ in range(1 + rng.randrange(2))]
    return Elem(B, B.from_literal([0, coeffs]))


# ---------------------------------------------------------------------------
# registry and the runner


SUITES = {
    "chevalley-relations": suite_chevalley,
    "vdk-identities": suite_vdk,
    "tulenbaev-identities": suite_tulenbaev,
    "xeqy": suite_xeqy,
    "star-presentation": suite_star,
    "psi-s-relations": suite_psi,
    "k2-exact": suite_k2,
    "relative-generation": suite_relative,
    "amalgam": suite_amalgam,
    "tmap-diagram": suite_tmap,
}


def run_suite(config):
    if config.suite not in SUITES:
        raise ValueError(f"unknown suite {config.suite!r}; have {sorted(SUITES)}")
    warnings = []
    if config.samples == 0:
        warnings.append("sample count is zero; sampled checks are vacuous")
    checks = SUITES[config.suite](config)
    return VerificationReport(
        suite=config.suite,
        config=config.to_dict(),
        checks=checks,
        warnings=warnings,
    )


def emit_report(report, fmt="json", path=None):
    payload = report.to_json() if fmt == "json" else report.to_text()
    if path:
        with open(path, "w") as fh:
            fh.write(payload)
    return payload
