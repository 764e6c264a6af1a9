"""Formal characters of connected semisimple groups.

A character is a sparse map weight -> integer multiplicity.  Irreducible
characters come from Freudenthal's recursion on dominant weights and are
spread over Weyl orbits.
"""

import os
from fractions import Fraction
from functools import lru_cache

from .rootdata import RootDataError, weyl_orbit

DEFAULT_BUDGET = 10 ** 6


class CharacterError(ValueError):
    pass


class BudgetExceeded(CharacterError):
    pass


def budget():
    """Enumeration budget, overridable through REPRINGS_BUDGET."""
    raw = os.environ.get("REPRINGS_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise CharacterError("REPRINGS_BUDGET must be an integer")
    return DEFAULT_BUDGET


class FormalCharacter:
    """Immutable finite map from weights to integers (zeros dropped)."""

    __slots__ = ("datum", "terms", "_hash")

    def __init__(self, datum, terms=None):
        self.datum = datum
        clean = {}
        for w, m in (terms or {}).items():
            if m:
                clean[tuple(w)] = clean.get(tuple(w), 0) + m
        self.terms = {w: m for w, m in clean.items() if m}
        self._hash = None

    @classmethod
    def unit(cls, datum):
        return cls(datum, {tuple([0] * datum.rank): 1})

    def __eq__(self, other):
        return (isinstance(other, FormalCharacter) and self.datum == other.datum
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"FormalCharacter({self.datum!r}, {dict(sorted(self.terms.items()))})"

    def __add__(self, other):
        _same(self, other)
        out = dict(self.terms)
        for w, m in other.terms.items():
            out[w] = out.get(w, 0) + m
        return FormalCharacter(self.datum, out)

    def __neg__(self):
        return FormalCharacter(self.datum, {w: -m for w, m in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return FormalCharacter(self.datum, {w: m * other for w, m in self.terms.items()})
        return multiply(self, other)

    __rmul__ = __mul__

    def dimension(self):
        return sum(self.terms.values())

    def is_effective(self):
        return all(m > 0 for m in self.terms.values())

    def is_zero(self):
        return not self.terms

    def mult(self, weight):
        return self.terms.get(tuple(weight), 0)

    def is_weyl_invariant(self):
        for w, m in self.terms.items():
            for i in range(self.datum.rank):
                if self.terms.get(self.datum.reflect(w, i), 0) != m:
                    return False
        return True

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: tuple(-x for x in t[0]))

    def to_json(self):
        return [{"weight": list(w), "mult": m} for w, m in sorted(self.terms.items())]


def _same(a, b):
    if a.datum != b.datum:
        raise CharacterError("characters belong to different root data")


def multiply(a, b):
    """Convolution of weight terms."""
    _same(a, b)
    if len(a.terms) * len(b.terms) > budget() * 10:
        raise BudgetExceeded("bound exceeded: product too large")
    out = {}
    for w1, m1 in a.terms.items():
        for w2, m2 in b.terms.items():
            w = tuple(x + y for x, y in zip(w1, w2))
            out[w] = out.get(w, 0) + m1 * m2
    return FormalCharacter(a.datum, out)


def _check_dominant(datum, weight):
    weight = tuple(weight)
    if len(weight) != datum.rank:
        raise CharacterError("weight length does not match rank")
    if any(x < 0 for x in weight):
        raise CharacterError(f"weight {weight} is not dominant")
    return weight


def dominant_weights_below(datum, top):
    """Dominant weights mu <= top in dominance order (saturated set)."""
    top = tuple(top)
    roots = datum.positive_roots_weights
    seen = {top}
    stack = [top]
    while stack:
        mu = stack.pop()
        for a in roots:
            nu = tuple(x - y for x, y in zip(mu, a))
            if nu not in seen and all(x >= 0 for x in nu):
                seen.add(nu)
                stack.append(nu)
    return seen


def dominant_multiplicities(datum, top):
    """Freudenthal: multiplicities of the dominant weights of V_top."""
    return dict(_freudenthal(datum, tuple(top)))


@lru_cache(maxsize=4096)
def _freudenthal(datum, top):
    rho = datum.rho
    lr = tuple(x + y for x, y in zip(top, rho))
    norm_top = datum.inner(lr, lr)
    doms = dominant_weights_below(datum, top)
    # process by increasing depth below top
    inv = datum.cartan_inverse

    def depth(mu):
        diff = [t - m for t, m in zip(top, mu)]
        return sum(sum(diff[i] * inv[i][j] for i in range(datum.rank)) for j in range(datum.rank))

    order = sorted(doms, key=lambda mu: (depth(mu), tuple(-x for x in mu)))
    mult = {top: 1}
    roots = datum.positive_roots_weights
    # (mu + k alpha, alpha) = (mu, alpha) + k (alpha, alpha)
    for mu in order[1:]:
        total = Fraction(0)
        for a in roots:
            aa = datum.inner(a, a)
            ma = datum.inner(mu, a)
            k = 1
            while True:
                nu = tuple(x + k * y for x, y in zip(mu, a))
                dom = datum.dominant_representative(nu)
                if dom not in doms:
                    break
                m = mult.get(dom, 0)
                if m:
                    total += m * (ma + k * aa)
                k += 1
        mr = tuple(x + y for x, y in zip(mu, rho))
        denom = norm_top - datum.inner(mr, mr)
        value = 2 * total / denom
        if value.denominator != 1:
            raise CharacterError("non-integral Freudenthal multiplicity (internal error)")
        if value:
            mult[mu] = int(value)
    return tuple(sorted(mult.items()))


def irreducible_character(datum, weight):
    """Character of V_weight for dominant ``weight``."""
    weight = _check_dominant(datum, weight)
    return _irreducible_cached(datum, weight)


@lru_cache(maxsize=4096)
def _irreducible_cached(datum, weight):
    terms = {}
    for mu, m in _freudenthal(datum, weight):
        orbit, _ = weyl_orbit(datum, mu)
        for nu in orbit:
            terms[nu] = m
    return FormalCharacter(datum, terms)


def weyl_dimension(datum, weight):
    """Weyl dimension formula in exact rationals."""
    weight = _check_dominant(datum, weight)
    num = Fraction(1)
    for cor in datum.positive_coroots:
        lr = sum((w + 1) * c for w, c in zip(weight, cor))
        r = sum(cor)
        num *= Fraction(lr, r)
    if num.denominator != 1:
        raise CharacterError("non-integral Weyl dimension (internal error)")
    return int(num)


def _lex_key(w):
    return tuple(w)


def decompose(x):
    """Decompose a Weyl-invariant character into irreducibles.

    Returns a list of (dominant weight, multiplicity) sorted with the
    largest weight first.
    """
    if not x.is_weyl_invariant():
        raise CharacterError("character is not Weyl-invariant")
    datum = x.datum
    rest = dict(x.terms)
    out = {}
    while rest:
        doms = [w for w, m in rest.items() if all(c >= 0 for c in w)]
        # a maximal dominant weight: maximise height first so the choice
        # refines dominance, then break ties lexicographically
        top = max(doms, key=lambda w: (_height(datum, w), _lex_key(w)))
        m = rest[top]
        out[top] = out.get(top, 0) + m
        for w, c in irreducible_character(datum, top).terms.items():
            v = rest.get(w, 0) - m * c
            if v:
                rest[w] = v
            else:
                rest.pop(w, None)
    return sorted(((w, m) for w, m in out.items() if m), key=lambda t: _decomp_key(datum, t[0]))


def _decomp_key(datum, w):
    return (-_height(datum, w), tuple(-c for c in w))


def _height(datum, w):
    return sum(datum.weight_to_root_coords(w))


def compose(datum, decomposition):
    """Character of a list of (weight, multiplicity)."""
    out = FormalCharacter(datum)
    for w, m in decomposition:
        out = out + irreducible_character(datum, w) * m
    return out


def tensor_multiplicity(datum, lam, mu, nu):
    """Multiplicity of V_nu in V_lam (x) V_mu by the Brauer-Klimyk rule."""
    lam = _check_dominant(datum, lam)
    mu = _check_dominant(datum, mu)
    nu = tuple(nu)
    rho = datum.rho
    target = tuple(a + b for a, b in zip(nu, rho))
    total = 0
    for w, m in irreducible_character(datum, lam).terms.items():
        v = tuple(a + b + c for a, b, c in zip(w, mu, rho))
        sign, dom = _reflect_to_dominant_signed(datum, v)
        if sign and dom == target:
            total += sign * m
    return total


def _reflect_to_dominant_signed(datum, v):
    sign = 1
    while True:
        for i in range(datum.rank):
            if v[i] < 0:
                v = datum.reflect(v, i)
                sign = -sign
                break
            if v[i] == 0:
                return 0, None
        else:
            return sign, v


def kostant_partition(datum, gamma, limit=None):
    """Number of ways to write gamma (simple-root coords) as a sum of positive roots."""
    limit = budget() if limit is None else limit
    roots = sorted(datum.positive_roots, key=lambda r: (-sum(r), r))
    counter = [0]

    @lru_cache(maxsize=None)
    def count(rest, start):
        counter[0] += 1
        if counter[0] > limit:
            raise BudgetExceeded("bound exceeded: PBW enumeration over budget")
        if not any(rest):
            return 1
        total = 0
        for k in range(start, len(roots)):
            r = roots[k]
            if all(a >= b for a, b in zip(rest, r)):
                total += count(tuple(a - b for a, b in zip(rest, r)), k)
        return total

    return count(tuple(gamma), 0)


def dominant_enough(datum, lam, mu, eta):
    """True when every coordinate of lam and mu exceeds the height of -eta."""
    coords = datum.weight_to_root_coords(eta)
    h = -sum(coords)
    return all(c > h for c in tuple(lam) + tuple(mu))


def prv_multiplicity_check(datum, lam, mu, eta):
    """(tensor multiplicity of V_{lam+mu+eta}, PBW count of (U n-)_eta, equal?)."""
    lam = _check_dominant(datum, lam)
    mu = _check_dominant(datum, mu)
    eta = tuple(eta)
    if len(eta) != datum.rank:
        raise CharacterError("eta has the wrong length")
    coords = datum.weight_to_root_coords(eta)
    if any(c.denominator != 1 for c in coords):
        raise CharacterError("eta is not in the root lattice")
    if any(c > 0 for c in coords):
        raise CharacterError("eta must be a non-positive combination of simple roots")
    nu = tuple(a + b + c for a, b, c in zip(lam, mu, eta))
    tens = tensor_multiplicity(datum, lam, mu, nu) if all(x >= 0 for x in nu) else 0
    pbw = kostant_partition(datum, tuple(-int(c) for c in coords))
    return tens, pbw, tens == pbw


def parse_weight(text, rank=None):
    text = text.strip()
    w = tuple(int(x) for x in text.split(",")) if text else ()
    if rank is not None and len(w) != rank:
        raise RootDataError(f"expected {rank} coordinates, got {len(w)}")
    return w
