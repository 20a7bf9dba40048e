"""Words in Steinberg generators x_alpha(xi) and their matrix shadow.

A word is just a letter sequence; no rewriting beyond merging adjacent
same-root letters is ever attempted (naive confluent rewriting is unsound
when the kernel of phi is nontrivial).  Equality therefore comes in tiers:
syntactic after simplify, matrix equality under phi (a necessary
condition), and exact equality through a coset table when one exists.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrices import identity_matrix, unipotent
from .rings import SplitData


class WordError(Exception):
    pass


class StWord:
    """A word over (system, ring); letters are (root index, coefficient)."""

    __slots__ = ("system", "ring", "letters")

    def __init__(self, system, ring, letters=()):
        self.system = system
        self.ring = ring
        self.letters = tuple(letters)

    def __mul__(self, other):
        _check_compat(self, other)
        return StWord(self.system, self.ring, self.letters + other.letters)

    def inverse(self):
        return StWord(
            self.system,
            self.ring,
            tuple((idx, -c) for idx, c in reversed(self.letters)),
        )

    def __len__(self):
        return len(self.letters)

    def is_empty(self):
        return not self.letters

    def key(self):
        return tuple((idx, c.payload) for idx, c in self.letters)

    def __eq__(self, other):
        return (
            isinstance(other, StWord)
            and self.system is other.system
            and self.ring is other.ring
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash((id(self.system), id(self.ring), self.key()))

    def to_literal(self):
        return [[idx, self.ring.to_literal(c.payload)] for idx, c in self.letters]

    def __repr__(self):
        if not self.letters:
            return "1"
        bits = []
        for idx, c in self.letters:
            bits.append(f"x[{self.system.roots[idx]}]({c!r})")
        return "*".join(bits)


def _check_compat(a, b):
    if a.system is not b.system or a.ring is not b.ring:
        raise WordError("words live over different (system, ring) pairs")


def word(system, ring, letters):
    """Build a word from (root, coefficient) pairs (roots or root indices)."""
    out = []
    for root, c in letters:
        idx = root if isinstance(root, int) else system.index[root]
        out.append((idx, ring.el(c)))
    return StWord(system, ring, out)


def generator(system, ring, root, c):
    return word(system, ring, [(root, c)])


def x_ij(system, ring, i, j, c):
    """x_ij over an A-system, 0-based matrix indices (root e_i - e_j)."""
    if system.family != "A":
        raise WordError("x_ij needs an A-family system")
    n = system.rank + 1
    coords = tuple(1 if k == i else -1 if k == j else 0 for k in range(n))
    from .roots import Root

    return generator(system, ring, Root(coords), c)


def from_ij_letters(system, ring, letters):
    """Lift (i, j, coeff) matrix letters to a word, in the same order."""
    out = empty(system, ring)
    for i, j, c in letters:
        out = out * x_ij(system, ring, i, j, c)
    return out


def empty(system, ring):
    return StWord(system, ring, ())


def conjugate(g, h):
    """g h g^-1 (left conjugation)."""
    return g * h * g.inverse()


def commutator(x, y):
    """Left-normed commutator x y x^-1 y^-1."""
    return x * y * x.inverse() * y.inverse()


def simplify(w):
    """Merge adjacent same-root letters and drop zero coefficients.

    Only the additivity relation and free cancellation are used, so the
    result is the same group element in every quotient where the letters
    make sense.
    """
    stack = []
    for idx, c in w.letters:
        if c.is_zero():
            continue
        if stack and stack[-1][0] == idx:
            merged = stack[-1][1] + c
            stack.pop()
            if not merged.is_zero():
                stack.append((idx, merged))
        else:
            stack.append((idx, c))
    return StWord(w.system, w.ring, stack)


def phi(w):
    """The matrix image of a word: the product of its root unipotents."""
    n = w.system.matrix_size()
    acc = identity_matrix(w.ring, n)
    for idx, c in w.letters:
        acc = acc * unipotent(w.system, w.system.roots[idx], c)
    return acc


def transpose_anti(w):
    """The letterwise transpose x_ij(r) -> x_ji(r) with the order reversed.

    An anti-homomorphism on words over an A-system: phi of the result is
    the transpose of phi(w).  It is an involution on canonical forms.
    """
    if w.system.family != "A":
        raise WordError("transpose is only defined for the A family")
    sys = w.system
    out = []
    for idx, c in reversed(w.letters):
        neg = sys.index[-sys.roots[idx]]
        out.append((neg, c))
    return StWord(sys, w.ring, out)


def z_generator(system, ring, alpha, s, r):
    """The relative generator: x_{-a}(r) x_a(s) x_{-a}(-r)."""
    s = ring.el(s)
    r = ring.el(r)
    ia = alpha if isinstance(alpha, int) else system.index[alpha]
    im = system.index[-system.roots[ia]]
    return StWord(system, ring, ((im, r), (ia, s), (im, -r)))


def coefficient_map(morphism, system, w):
    """Apply a ring morphism to every coefficient of a word."""
    return StWord(
        system,
        morphism.target,
        tuple((idx, morphism(c)) for idx, c in w.letters),
    )


# ---------------------------------------------------------------------------
# the split extension St(R) = St(R,I) x| St(R/I)


@dataclass
class SemidirectElement:
    """A pair (kernel word over R, quotient word over R/I) with the
    conjugation action running through the splitting section."""

    split: SplitData
    system: object
    kernel: StWord
    quotient: StWord

    def _lift(self, h):
        return coefficient_map(self.split.sigma, self.system, h)

    def __mul__(self, other):
        lifted = self._lift(self.quotient)
        return SemidirectElement(
            self.split,
            self.system,
            self.kernel * conjugate(lifted, other.kernel),
            self.quotient * other.quotient,
        )

    def inverse(self):
        lifted_inv = self._lift(self.quotient.inverse())
        return SemidirectElement(
            self.split,
            self.system,
            conjugate(lifted_inv, self.kernel.inverse()),
            self.quotient.inverse(),
        )

    def as_word(self):
        """The image in St(R) under (g, h) -> g * sigma^*(h)."""
        return self.kernel * self._lift(self.quotient)

    def phi_pair(self):
        return (phi(self.as_word()).key(), phi(self.quotient).key())

    def matrix_equal(self, other):
        return self.phi_pair() == other.phi_pair()


def semidirect_identity(split, system):
    from_ring = empty(system, split.ring)
    return SemidirectElement(split, system, from_ring, empty(system, split.quotient))


def semidirect_commutator_direct(x, y):
    return x * y * x.inverse() * y.inverse()


def semidirect_commutator(x, y):
    """The closed form for a commutator in a split extension:

        [(a,b), (c,d)] = (a * (c conj by b) * (a^-1 conj by bdb^-1)
                            * (c^-1 conj by [b,d]),  [b,d])

    with all conjugations acting through the lifted quotient words.  Must
    agree with the directly multiplied commutator.
    """
    a, b = x.kernel, x.quotient
    c, d = y.kernel, y.quotient
    lift = x._lift
    part1 = conjugate(lift(b), c)
    part2 = conjugate(lift(b * d * b.inverse()), a.inverse())
    part3 = conjugate(lift(commutator(b, d)), c.inverse())
    return SemidirectElement(
        x.split,
        x.system,
        a * part1 * part2 * part3,
        commutator(b, d),
    )
