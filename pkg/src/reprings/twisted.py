"""Disconnected groups Gamma x| G with Gamma cyclic acting by diagram automorphisms.

The sigma-component of a representation is recorded by its twining
character, a W^sigma-invariant element of Z[P^sigma].  Elements of P^sigma
are written in the basis of sigma-orbit sums of fundamental weights, with
orbits ordered by their smallest vertex.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .characters import FormalCharacter, decompose, irreducible_character, weyl_dimension
from .linalg import determinant, matmul
from .rootdata import (RootDatum, apply_word, build_root_datum, check_automorphism,
                       fold_diagram, named_automorphism,
                       parabolic_longest_word, TorsionTorusElement)


class TwistedError(ValueError):
    pass


# --- Laurent polynomial helpers --------------------------------------------

def _add_into(acc, terms, coeff=1):
    for w, m in terms.items():
        v = acc.get(w, 0) + coeff * m
        if v:
            acc[w] = v
        else:
            acc.pop(w, None)


def laurent_mul(a, b):
    out = {}
    for w1, m1 in a.items():
        for w2, m2 in b.items():
            w = tuple(x + y for x, y in zip(w1, w2))
            out[w] = out.get(w, 0) + m1 * m2
    return {w: m for w, m in out.items() if m}


def laurent_divide(num, den, max_steps=10 ** 6):
    """Exact quotient num / den in Z[Z^n] by lexicographic long division."""
    lead = max(den)
    lc = den[lead]
    rem = dict(num)
    quo = {}
    steps = 0
    while rem:
        steps += 1
        if steps > max_steps:
            raise TwistedError("division did not terminate (not exact)")
        top = max(rem)
        c = Fraction(rem[top], lc)
        if c.denominator != 1:
            raise TwistedError("division is not exact over Z")
        c = int(c)
        shift = tuple(x - y for x, y in zip(top, lead))
        quo[shift] = quo.get(shift, 0) + c
        for w, m in den.items():
            v = tuple(x + y for x, y in zip(w, shift))
            r = rem.get(v, 0) - c * m
            if r:
                rem[v] = r
            else:
                rem.pop(v, None)
    return {w: m for w, m in quo.items() if m}


# --- the twisted torus ------------------------------------------------------

class TwistedTorus:
    """P^sigma with its orbit-sum basis and the action of W^sigma."""

    def __init__(self, datum, sigma):
        check_automorphism(datum, sigma)
        self.datum = datum
        self.sigma = sigma
        self.orbits = tuple(sigma.orbits())
        self.rank = len(self.orbits)
        self.generators = tuple(self._generator(k) for k in range(self.rank))

    def __eq__(self, other):
        return (isinstance(other, TwistedTorus) and self.datum == other.datum
                and self.sigma == other.sigma)

    def __hash__(self):
        return hash((self.datum, self.sigma))

    def orbit_sum(self, k):
        return tuple(int(i in self.orbits[k]) for i in range(self.datum.rank))

    def to_orbit_coords(self, weight):
        for orb in self.orbits:
            if len({weight[i] for i in orb}) != 1:
                raise TwistedError(f"weight {tuple(weight)} is not sigma-invariant")
        return tuple(weight[orb[0]] for orb in self.orbits)

    def from_orbit_coords(self, coords):
        out = [0] * self.datum.rank
        for c, orb in zip(coords, self.orbits):
            for i in orb:
                out[i] = c
        return tuple(out)

    def _generator(self, k):
        """Matrix of the longest element of the k-th orbit parabolic on P^sigma."""
        word = parabolic_longest_word(self.datum, self.orbits[k])
        cols = []
        for j in range(self.rank):
            img = apply_word(self.datum, word, self.orbit_sum(j))
            cols.append(self.to_orbit_coords(img))
        mat = tuple(tuple(cols[j][i] for j in range(self.rank)) for i in range(self.rank))
        if determinant([list(r) for r in mat]) != -1:
            raise TwistedError("orbit generator is not a reflection on P^sigma")
        return mat

    @cached_property
    def weyl_elements(self):
        """All elements of W^sigma acting on P^sigma, with determinant."""
        ident = tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))
        seen = {ident: 1}
        stack = [ident]
        while stack:
            g = stack.pop()
            for s in self.generators:
                h = tuple(tuple(r) for r in matmul([list(r) for r in s], [list(r) for r in g]))
                if h not in seen:
                    seen[h] = -seen[g]
                    stack.append(h)
        return tuple(sorted(seen.items()))

    def act(self, mat, coords):
        return tuple(sum(mat[i][j] * coords[j] for j in range(self.rank)) for i in range(self.rank))

    def orbit(self, coords):
        return {self.act(g, coords) for g, _ in self.weyl_elements}

    @cached_property
    def folded_datum(self):
        """Root datum of the dual folded group, vertices in orbit order.

        Row k is beta_k = e_k - s_k(e_k) in the orbit-sum basis.
        """
        rows = []
        for k, s in enumerate(self.generators):
            ek = tuple(int(i == k) for i in range(self.rank))
            img = self.act(s, ek)
            rows.append(tuple(a - b for a, b in zip(ek, img)))
        return RootDatum(rows)

    def norm(self, weight):
        """N(mu) = mu + sigma(mu) + ... in orbit coordinates."""
        total = [0] * self.datum.rank
        cur = tuple(weight)
        for _ in range(self.sigma.order):
            total = [a + b for a, b in zip(total, cur)]
            cur = self.sigma.act(cur)
        return self.to_orbit_coords(total)


@lru_cache(maxsize=256)
def twisted_torus(datum, sigma):
    return TwistedTorus(datum, sigma)


@dataclass(frozen=True)
class TwistedClassFunction:
    """W^sigma-invariant finite map on P^sigma (orbit-sum coordinates)."""
    terms: tuple   # sorted tuple of (coords, mult)

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(sorted((tuple(w), m) for w, m in d.items() if m)))

    def as_dict(self):
        return dict(self.terms)

    def value_at_identity(self):
        return sum(m for _, m in self.terms)

    def to_json(self):
        return [{"weight": list(w), "mult": m} for w, m in self.terms]


def twining_character(datum, sigma, weight):
    """Trace of sigma * t on V_weight, sigma normalised to fix the highest line.

    Computed as the W^sigma alternating sum over the orbit-sum lattice
    divided by the corresponding Weyl denominator.
    """
    weight = tuple(weight)
    if any(c < 0 for c in weight):
        raise TwistedError("weight is not dominant")
    torus = twisted_torus(datum, sigma)
    lam = torus.to_orbit_coords(weight)
    return TwistedClassFunction.from_dict(_twining(torus, lam))


@lru_cache(maxsize=4096)
def _twining_cached(torus, lam):
    rho = tuple([1] * torus.rank)
    lr = tuple(a + 1 for a in lam)
    num, den = {}, {}
    for g, sign in torus.weyl_elements:
        w = torus.act(g, lr)
        num[w] = num.get(w, 0) + sign
        w = torus.act(g, rho)
        den[w] = den.get(w, 0) + sign
    num = {w: m for w, m in num.items() if m}
    den = {w: m for w, m in den.items() if m}
    return tuple(sorted(laurent_divide(num, den).items()))


def _twining(torus, lam):
    return dict(_twining_cached(torus, tuple(lam)))


def jantzen_check(datum, sigma, weight):
    """Twining character of V_weight equals the folded dual character.

    The right-hand side is the ordinary (Freudenthal) character of the
    tabulated dual folded group, transported through the orbit/vertex map.
    """
    weight = tuple(weight)
    torus = twisted_torus(datum, sigma)
    torus.to_orbit_coords(weight)
    if sigma.is_identity():
        lhs = twining_character(datum, sigma, weight).as_dict()
        return lhs == irreducible_character(datum, weight).terms
    fold = fold_diagram(datum, sigma)
    dual = build_root_datum(fold.dual_type)
    chi = irreducible_character(dual, fold.to_folded(weight))
    rhs = {}
    for nu, m in chi.terms.items():
        coords = tuple(nu[fold.vertex_map[k]] for k in range(len(fold.orbits)))
        rhs[coords] = m
    lhs = twining_character(datum, sigma, weight).as_dict()
    return lhs == rhs


# --- Mohrdieck generators ---------------------------------------------------

def _folded_height(torus, coords):
    inv = torus.folded_datum.cartan_inverse
    return sum(coords[i] * inv[i][j] for i in range(torus.rank) for j in range(torus.rank))


def _reduce_by_generators(torus, f, gens, max_steps=10000):
    """Write a W^sigma-invariant f as an integer polynomial in gens.

    Returns the polynomial as {exponent tuple: coefficient}; raises on failure.
    """
    rest = dict(f)
    poly = {}
    steps = 0
    while rest:
        steps += 1
        if steps > max_steps:
            raise TwistedError(f"reduction did not terminate for {f}")
        doms = [w for w in rest if all(c >= 0 for c in w)]
        if not doms:
            raise TwistedError(f"invariant without dominant terms: {rest}")
        top = max(doms, key=lambda w: (_folded_height(torus, w), w))
        c = rest[top]
        mono = {tuple([0] * torus.rank): 1}
        for k, e in enumerate(top):
            for _ in range(e):
                mono = laurent_mul(mono, gens[k])
        if mono.get(top) != 1:
            raise TwistedError(f"leading coefficient of monomial {top} is not 1")
        poly[top] = poly.get(top, 0) + c
        _add_into(rest, mono, -c)
    return poly


def mohrdieck_invariants(datum, sigma, degree_bound):
    """Twining characters of the orbit fundamental weights, checked to
    generate the W^sigma-invariants of Z[P^sigma] up to the degree bound.

    Returns (generators, certificate) where the certificate maps each
    dominant orbit-sum monomial checked to its polynomial expression.
    """
    torus = twisted_torus(datum, sigma)
    gens = []
    for k in range(torus.rank):
        tw = twining_character(datum, sigma, torus.orbit_sum(k))
        for g, _ in torus.weyl_elements:
            for w, m in tw.terms:
                if tw.as_dict().get(torus.act(g, w)) != m:
                    raise TwistedError("generator is not W^sigma-invariant")
        gens.append(tw)
    gdicts = [g.as_dict() for g in gens]
    cert = {}
    for lam in itertools.product(range(degree_bound + 1), repeat=torus.rank):
        if sum(lam) > degree_bound:
            continue
        orbit_sum = {w: 1 for w in torus.orbit(lam)}
        cert[lam] = _reduce_by_generators(torus, orbit_sum, gdicts)
    return gens, cert


def no_kernel_check(datum, sigma, degree=3):
    """Every central z acting trivially on the Mohrdieck generators lies in
    the image of zeta -> sigma(zeta) / zeta.

    The center is Hom(P/Q, Q/Z); an element is a tuple of residues a_i mod
    d_i pairing with a class c as sum a_i c_i / d_i.
    """
    fg = datum.fundamental_group
    torus = twisted_torus(datum, sigma)
    gens, _ = mohrdieck_invariants(datum, sigma, degree)
    support = set()
    for g in gens:
        for w, _ in g.terms:
            support.add(fg.coords(torus.from_orbit_coords(w)))

    def pair(z, cls):
        return sum(Fraction(a * c, d) for a, c, d in zip(z, cls, fg.factors)) % 1

    center = fg.elements()
    # sigma acts on classes; the dual action on the center: (sigma z)(c) = z(sigma^-1 c)
    inv = sigma.power(sigma.order - 1)
    basis = []
    for k in range(len(fg.factors)):
        e = tuple(int(i == k) for i in range(len(fg.factors)))
        from .rootdata import class_representative
        basis.append(fg.coords(inv.act(class_representative(datum, e))))

    def sigma_z(z):
        # value on basis class e_k is z(sigma^-1 e_k); recover residues
        out = []
        for k, d in enumerate(fg.factors):
            v = pair(z, basis[k])
            out.append(int(v * d) % d)
        return tuple(out)

    image = {tuple((a - b) % d for a, b, d in zip(sigma_z(z), z, fg.factors)) for z in center}
    kernel = [z for z in center if all(pair(z, c) == 0 for c in support)]
    bad = [z for z in kernel if z not in image]
    return not bad, {"kernel": sorted(kernel), "image": sorted(image), "violations": bad}


# --- disconnected groups ----------------------------------------------------

@dataclass(frozen=True)
class IrrepLabel:
    kind: str            # "conn", "ext" or "ind"
    weights: tuple       # highest weights (one, or the Gamma-orbit for "ind")
    twist: int = 0       # character index of Gamma for "ext"
    order: int = 1

    def __str__(self):
        ws = "|".join(",".join(map(str, w)) for w in self.weights)
        if self.kind == "conn":
            return f"V({ws})"
        if self.kind == "ind":
            return f"Ind({ws})"
        if self.order == 2:
            return f"V({ws}){'+-'[self.twist]}"
        return f"V({ws})^{self.twist}"


def parse_label(text):
    text = text.strip()
    if text.startswith("Ind("):
        body = text[4:text.index(")")]
        ws = tuple(tuple(int(x) for x in part.split(",")) for part in body.split("|"))
        return IrrepLabel("ind", ws)
    if text.startswith("V("):
        body = text[2:text.index(")")]
        w = tuple(int(x) for x in body.split(",")) if body else ()
        tail = text[text.index(")") + 1:]
        if not tail:
            return IrrepLabel("conn", (w,))
        if tail in "+-":
            return IrrepLabel("ext", (w,), "+-".index(tail), 2)
        if tail.startswith("^"):
            return IrrepLabel("ext", (w,), int(tail[1:]), 0)
    raise TwistedError(f"cannot parse label {text!r}")


class DisconnectedGroup:
    """Gamma x| G for cyclic Gamma = <gamma> acting through ``sigma``.

    ``classes`` optionally restricts to weights whose P/Q class lies in the
    given subgroup (the character lattice of a quotient of the simply
    connected group).  ``extension_class`` must be trivial for character
    computations.
    """

    def __init__(self, datum, sigma, order=None, classes=None, extension_class=None):
        check_automorphism(datum, sigma)
        self.datum = datum
        self.sigma = sigma
        self.order = order or sigma.order
        if self.order % sigma.order:
            raise TwistedError("Gamma order must be a multiple of the automorphism order")
        if self.order > 6:
            raise TwistedError("unsupported configuration: |Gamma| > 6")
        self.classes = None if classes is None else frozenset(tuple(c) for c in classes)
        self.extension_class = extension_class
        if extension_class is not None and any(extension_class):
            raise TwistedError("unsupported configuration: nontrivial extension class")
        if self.classes is not None:
            for c in self.classes:
                img = datum.fundamental_group.coords(sigma.act(_rep(datum, c)))
                if img not in self.classes:
                    raise TwistedError("character lattice is not sigma-stable")
        from .cohomology import cyclic_group
        self.gamma = cyclic_group(self.order)

    def __repr__(self):
        return (f"DisconnectedGroup({self.datum.diagram.type_string()}, "
                f"sigma={self.sigma.to_json()}, order={self.order})")

    def allows(self, weight):
        if self.classes is None:
            return True
        return self.datum.fundamental_group.coords(weight) in self.classes

    def gamma_orbit(self, weight):
        out, cur = [], tuple(weight)
        while cur not in out:
            out.append(cur)
            cur = self.sigma.act(cur)
        return tuple(sorted(out, reverse=True))

    @cached_property
    def torus(self):
        return twisted_torus(self.datum, self.sigma)

    def dimension(self, label):
        d = weyl_dimension(self.datum, label.weights[0])
        return d * len(label.weights) if label.kind == "ind" else d

    def labels_for(self, weight):
        orb = self.gamma_orbit(weight)
        if len(orb) == 1:
            return [IrrepLabel("ext", orb, j, self.order) for j in range(self.order)]
        if len(orb) == self.order:
            return [IrrepLabel("ind", orb)]
        raise TwistedError("unsupported configuration: stabiliser neither full nor trivial")


def _rep(datum, cls):
    from .rootdata import class_representative
    return class_representative(datum, cls)


def semidirect(datum, sigma, classes=None):
    return DisconnectedGroup(datum, sigma, classes=classes)


def bounded_weights(datum, bound):
    return sorted(itertools.product(range(bound + 1), repeat=datum.rank),
                  key=lambda w: (sum(w), w))


def semidirect_irreducibles(group, bound):
    """Clifford-theory labels of irreducibles with highest-weight coords <= bound."""
    if group.order == 1:
        return [IrrepLabel("conn", (w,)) for w in bounded_weights(group.datum, bound)
                if group.allows(w)]
    seen, out = set(), []
    for w in bounded_weights(group.datum, bound):
        if not group.allows(w):
            continue
        orb = group.gamma_orbit(w)
        if orb in seen:
            continue
        seen.add(orb)
        out.extend(group.labels_for(w))
    return sort_labels(group, out)


def sort_labels(group, labels):
    return sorted(labels, key=lambda l: (label_dimension(group, l), l.kind != "ext",
                                         l.weights, l.twist))


def label_dimension(group, label):
    if isinstance(group, RootDatum):
        return weyl_dimension(group, label.weights[0])
    return group.dimension(label)


# Characters of Z/2 x| G: a pair (identity-component character, twining part)

@dataclass(frozen=True)
class GroupCharacter:
    ident: FormalCharacter
    twisted: tuple   # sorted (P^sigma coords, mult)

    @staticmethod
    def make(ident, twisted):
        return GroupCharacter(ident, tuple(sorted((w, m) for w, m in twisted.items() if m)))

    def __add__(self, other):
        t = dict(self.twisted)
        _add_into(t, dict(other.twisted))
        return GroupCharacter.make(self.ident + other.ident, t)

    def scale(self, c):
        return GroupCharacter.make(self.ident * c, {w: m * c for w, m in self.twisted})

    def __mul__(self, other):
        return GroupCharacter.make(self.ident * other.ident,
                                   laurent_mul(dict(self.twisted), dict(other.twisted)))


def _require_order_two(group):
    if group.order != 2:
        raise TwistedError("unsupported configuration: character arithmetic needs |Gamma| = 2")


def label_character(group, label):
    _require_order_two(group)
    d = group.datum
    if label.kind == "ind":
        ident = FormalCharacter(d)
        for w in label.weights:
            ident = ident + irreducible_character(d, w)
        return GroupCharacter.make(ident, {})
    w = label.weights[0]
    tw = _twining(group.torus, group.torus.to_orbit_coords(w))
    sign = -1 if label.twist else 1
    return GroupCharacter.make(irreducible_character(d, w), {k: sign * m for k, m in tw.items()})


def decompose_group_character(group, x):
    """Decompose a (virtual) character of Z/2 x| G into irreducible labels."""
    _require_order_two(group)
    ident = decompose(x.ident)
    fd = group.torus.folded_datum
    tw = decompose(FormalCharacter(fd, dict(x.twisted))) if x.twisted else []
    tw = dict(tw)
    out = {}
    done = set()
    for w, m in ident:
        orb = group.gamma_orbit(w)
        if len(orb) == 1:
            c = tw.pop(group.torus.to_orbit_coords(w), 0)
            if (m + c) % 2:
                raise TwistedError("parity mismatch in decomposition (internal error)")
            plus, minus = (m + c) // 2, (m - c) // 2
            if plus:
                out[IrrepLabel("ext", orb, 0, 2)] = plus
            if minus:
                out[IrrepLabel("ext", orb, 1, 2)] = minus
        else:
            if orb in done:
                continue
            done.add(orb)
            out[IrrepLabel("ind", orb)] = m
    # stable labels absent from the identity part: V+ - V- pairs
    for coords, c in tw.items():
        if not c:
            continue
        if c % 2:
            raise TwistedError("parity mismatch in decomposition (internal error)")
        orb = (group.torus.from_orbit_coords(coords),)
        out[IrrepLabel("ext", orb, 0, 2)] = c // 2
        out[IrrepLabel("ext", orb, 1, 2)] = -c // 2
    return sorted(out.items(), key=lambda t: (t[0].weights, t[0].kind, t[0].twist))


def group_adams(group, x, n):
    """psi^n on Z/2 x| G; even powers of sigma*t land in the identity component."""
    _require_order_two(group)
    from .lambdaring import adams
    ident = adams(x.ident, n)
    if n % 2:
        tw = {}
        for w, m in x.twisted:
            v = tuple(n * c for c in w)
            tw[v] = tw.get(v, 0) + m
    else:
        tw = {}
        # (t gamma)^2 = t sigma(t), so the terms are mu + sigma(mu)
        for w, m in x.ident.terms.items():
            s = group.sigma.act(w)
            nw = group.torus.to_orbit_coords(tuple(a + b for a, b in zip(w, s)))
            v = tuple((n // 2) * c for c in nw)
            tw[v] = tw.get(v, 0) + m
    return GroupCharacter.make(ident, tw)


def group_exterior_powers(group, x, k_max):
    """lambda^0..lambda^k_max of a group character via Newton's identity."""
    d = group.datum
    zero_t = tuple([0] * group.torus.rank)
    unit = GroupCharacter.make(FormalCharacter.unit(d), {zero_t: 1})
    lams = [unit]
    psis = [None] + [group_adams(group, x, i) for i in range(1, k_max + 1)]
    for k in range(1, k_max + 1):
        acc = GroupCharacter.make(FormalCharacter(d), {})
        for i in range(1, k + 1):
            term = psis[i] * lams[k - i]
            acc = acc + (term if i % 2 else term.scale(-1))
        ident = {}
        for w, m in acc.ident.terms.items():
            if m % k:
                raise TwistedError("non-integral exterior power (internal error)")
            ident[w] = m // k
        tw = {}
        for w, m in acc.twisted:
            if m % k:
                raise TwistedError("non-integral exterior power (internal error)")
            tw[w] = m // k
        lams.append(GroupCharacter.make(FormalCharacter(d, ident), tw))
    return lams


# --- the automorphism phi ---------------------------------------------------

def phi_sign(n, weight):
    """chi_omega(1) = prod (-1)^(i k_i) for omega = sum k_i (omega_i + omega_{2n+1-i})."""
    return -1 if sum((i + 1) * weight[i] for i in range(n)) % 2 else 1


def phi_group(n):
    if n < 1:
        raise TwistedError("n must be positive")
    datum = build_root_datum(f"A{2 * n}")
    return DisconnectedGroup(datum, named_automorphism(datum, "flip"))


def phi_automorphism(n, sign_rule=None):
    """The map phi on labels of Z/2 x| SL(2n+1), as a function."""
    rule = sign_rule or (lambda w: phi_sign(n, w))

    def phi(label):
        if label.kind != "ext":
            return label
        if rule(label.weights[0]) == -1:
            return IrrepLabel("ext", label.weights, 1 - label.twist, 2)
        return label
    return phi


def apply_to_decomposition(f, decomposition):
    out = {}
    for lab, m in decomposition:
        out[f(lab)] = out.get(f(lab), 0) + m
    return sorted(((l, m) for l, m in out.items() if m),
                  key=lambda t: (t[0].weights, t[0].kind, t[0].twist))


def check_phi_semiring(n, bound, sign_rule=None):
    """phi(a b) = phi(a) phi(b) for all unordered pairs of bounded irreducibles.

    Returns (ok, certificate) where the certificate lists checked pairs and
    any witness of failure.
    """
    if n not in (1, 2):
        raise TwistedError("check_phi_semiring supports n = 1 or 2")
    group = phi_group(n)
    phi = phi_automorphism(n, sign_rule)
    labels = semidirect_irreducibles(group, bound)
    chars = {l: label_character(group, l) for l in labels}
    pairs, witnesses = [], []
    for i, a in enumerate(labels):
        for b in labels[i:]:
            lhs = apply_to_decomposition(phi, decompose_group_character(group, chars[a] * chars[b]))
            pa, pb = phi(a), phi(b)
            prod = label_character(group, pa) * label_character(group, pb)
            rhs = decompose_group_character(group, prod)
            pairs.append((str(a), str(b)))
            if lhs != rhs:
                witnesses.append({"pair": [str(a), str(b)],
                                  "phi_of_product": _dec_json(lhs),
                                  "product_of_phi": _dec_json(rhs)})
    return not witnesses, {"pairs": pairs, "witnesses": witnesses}


def _dec_json(dec):
    return [[str(l), m] for l, m in dec]


def epsilon_descriptions(n):
    """The order-two element epsilon of T_sigma for SL(2n+1), three ways.

    Each description is returned as the list of signs on the orbit basis
    omega_i + omega_{2n+1-i}, i = 1..n.
      (a) image of the nontrivial central element of the dual folded group
      (b) the sign (-1)^i
      (c) pi(coweight_n(-1)), evaluated through a lift to the simply
          connected torus: the sign of (2n+1) <mu, coweight_n>.
    """
    datum = build_root_datum(f"A{2 * n}")
    sigma = named_automorphism(datum, "flip")
    torus = twisted_torus(datum, sigma)
    fold = fold_diagram(datum, sigma)
    dual = build_root_datum(fold.dual_type)
    a_desc, b_desc, c_desc = [], [], []
    inv = datum.cartan_inverse
    for i in range(n):
        mu = torus.orbit_sum(i)
        cls = dual.fundamental_group.coords(fold.to_folded(mu))
        a_desc.append(-1 if any(cls) else 1)
        b_desc.append((-1) ** (i + 1))
        pairing = sum(mu[j] * inv[j][n - 1] for j in range(datum.rank)) * (2 * n + 1)
        assert pairing.denominator == 1
        c_desc.append(-1 if int(pairing) % 2 else 1)
    return {"a": a_desc, "b": b_desc, "c": c_desc}


def norm_of_epsilon(n):
    """N(epsilon) as a homomorphism Q -> {+1,-1} on the simple roots."""
    datum = build_root_datum(f"A{2 * n}")
    sigma = named_automorphism(datum, "flip")
    torus = twisted_torus(datum, sigma)
    eps = epsilon_descriptions(n)["c"]
    bits = []
    for j in range(datum.rank):
        alpha = datum.cartan[j]
        coords = torus.norm(alpha)
        sign = 1
        for c, e in zip(coords, eps):
            if c % 2 and e == -1:
                sign = -sign
        bits.append(0 if sign == 1 else 1)
    return TorsionTorusElement("Q", tuple(bits))


def check_phi_adams(n, use_identity=False, bound=1):
    """Look for a label V with phi(psi^2 V) != psi^2(phi V).

    Returns (found, certificate).  With use_identity the map phi is replaced
    by the identity as a control and no witness can exist.
    """
    group = phi_group(n)
    phi = (lambda l: l) if use_identity else phi_automorphism(n)
    witnesses = []
    for lab in semidirect_irreducibles(group, bound):
        psi_v = decompose_group_character(group, group_adams(group, label_character(group, lab), 2))
        lhs = apply_to_decomposition(phi, psi_v)
        rhs = decompose_group_character(group, group_adams(group, label_character(group, phi(lab)), 2))
        if lhs != rhs:
            witnesses.append({"label": str(lab), "phi_psi2": _dec_json(lhs), "psi2_phi": _dec_json(rhs)})
    eps = epsilon_descriptions(n)
    norm = norm_of_epsilon(n)
    if not use_identity and norm.is_trivial():
        raise TwistedError("N(epsilon) is trivial (internal error)")
    cert = {"witnesses": witnesses, "epsilon": eps,
            "epsilon_consistent": eps["a"] == eps["b"] == eps["c"],
            "norm_epsilon": norm.to_json()}
    return bool(witnesses), cert


# --- matrix models and the lift of w0 ---------------------------------------

def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _unit(n, i, j):
    m = [[0] * n for _ in range(n)]
    m[i][j] = 1
    return m


def _madd(a, b, c=1):
    return [[x + c * y for x, y in zip(r, s)] for r, s in zip(a, b)]


@dataclass(frozen=True)
class MatrixGroupModel:
    """Standard representation of SL(n+1) or Sp(2n) with a pinning.

    ``raising[i]`` / ``lowering[i]`` are the pinned root vectors of the
    simple roots, ``weights[k]`` the epsilon-coordinates of basis vector k
    and ``coroots[i]`` those of the simple coroots.
    """
    type_string: str
    size: int
    raising: tuple
    lowering: tuple
    weights: tuple
    roots: tuple
    coroots: tuple
    form: tuple = None

    def s_tilde(self, i):
        """Image of [[0,1],[-1,0]] under the root SL(2) of alpha_i."""
        n = self.size
        x = [list(r) for r in self.raising[i]]
        y = [list(r) for r in self.lowering[i]]
        ex = _madd(_eye(n), x)          # x^2 = 0 in these models
        ey = _madd(_eye(n), y, -1)
        return matmul(matmul(ex, ey), ex)

    def in_group(self, g):
        if determinant(g) != 1:
            return False
        if self.form is not None:
            j = [list(r) for r in self.form]
            gt = [list(r) for r in zip(*g)]
            return matmul(matmul(gt, j), g) == j
        return True


def matrix_model(type_string):
    datum = build_root_datum(type_string)
    (kind, n), = datum.diagram.type_decomposition
    if kind == "A":
        size = n + 1
        raising = tuple(tuple(map(tuple, _unit(size, i, i + 1))) for i in range(n))
        lowering = tuple(tuple(map(tuple, _unit(size, i + 1, i))) for i in range(n))
        weights = tuple(tuple(int(k == j) for j in range(size)) for k in range(size))
        roots = tuple(tuple(int(j == i) - int(j == i + 1) for j in range(size)) for i in range(n))
        return MatrixGroupModel(f"A{n}", size, raising, lowering, weights, roots, roots)
    if kind == "C" or (kind == "A" and n == 1):
        size = 2 * n
        # basis e_1..e_n, e_-n..e_-1 ; J = antidiag(1,..,1,-1,..,-1)
        form = [[0] * size for _ in range(size)]
        for k in range(size):
            form[k][size - 1 - k] = 1 if k < n else -1
        def pos(k):      # index of e_k, k = 1..n
            return k - 1
        def neg(k):      # index of e_-k
            return size - k
        raising, lowering, roots, coroots = [], [], [], []
        for i in range(1, n):
            x = _madd(_unit(size, pos(i), pos(i + 1)), _unit(size, neg(i + 1), neg(i)), -1)
            raising.append(x)
            lowering.append([list(r) for r in zip(*x)])
            r = [0] * n
            r[i - 1], r[i] = 1, -1
            roots.append(tuple(r))
            coroots.append(tuple(r))
        x = _unit(size, pos(n), neg(n))
        raising.append(x)
        lowering.append([list(r) for r in zip(*x)])
        r = [0] * n
        r[n - 1] = 2
        roots.append(tuple(r))
        c = [0] * n
        c[n - 1] = 1
        coroots.append(tuple(c))
        weights = []
        for k in range(size):
            w = [0] * n
            if k < n:
                w[k] = 1
            else:
                w[size - 1 - k] = -1
            weights.append(tuple(w))
        for x in raising:
            xt = [list(r) for r in zip(*x)]
            if _madd(matmul(xt, form), matmul(form, x)) != [[0] * size for _ in range(size)]:
                raise TwistedError("pinning vector is not in sp(2n) (internal error)")
        return MatrixGroupModel(f"C{n}", size, tuple(tuple(map(tuple, m)) for m in raising),
                                tuple(tuple(map(tuple, m)) for m in lowering), tuple(weights),
                                tuple(roots), tuple(coroots), tuple(map(tuple, form)))
    raise TwistedError("matrix models exist for types A_n and C_n")


def _model_datum(model):
    n = len(model.roots)
    cartan = [[sum(a * b for a, b in zip(model.roots[i], model.coroots[j])) for j in range(n)]
              for i in range(n)]
    return RootDatum(cartan)


def w0_lift(model, word):
    g = _eye(model.size)
    for i in word:
        g = matmul(g, model.s_tilde(i - 1))
    return g


def two_rho_check_matrix(model):
    """Diagonal matrix of (-1)^{2 rho-check} on the standard representation."""
    datum = _model_datum(model)
    total = [0] * len(model.weights[0])
    for cor in datum.positive_coroots:
        for c, simple in zip(cor, model.coroots):
            total = [t + c * s for t, s in zip(total, simple)]
    diag = []
    for w in model.weights:
        e = sum(a * b for a, b in zip(w, total))
        diag.append(-1 if e % 2 else 1)
    return [[diag[i] if i == j else 0 for j in range(model.size)] for i in range(model.size)]


def braid_relations_hold(model):
    datum = _model_datum(model)
    n = len(model.roots)
    s = [model.s_tilde(i) for i in range(n)]
    for i in range(n):
        if not model.in_group(s[i]):
            return False
        for j in range(i + 1, n):
            prod = datum.cartan[i][j] * datum.cartan[j][i]
            m = {0: 2, 1: 3, 2: 4, 3: 6}[prod]
            lhs, rhs = _eye(model.size), _eye(model.size)
            for k in range(m):
                lhs = matmul(lhs, s[i] if k % 2 == 0 else s[j])
                rhs = matmul(rhs, s[j] if k % 2 == 0 else s[i])
            if lhs != rhs:
                return False
    return True


def w0_square_check(model):
    """w0-lift squared equals (-1)^{2 rho-check}, independently of the reduced word."""
    datum = _model_datum(model)
    words = [datum.longest_word("low"), datum.longest_word("high")]
    target = two_rho_check_matrix(model)
    squares = []
    for word in words:
        g = w0_lift(model, word)
        squares.append(matmul(g, g))
    ok = all(sq == target for sq in squares) and braid_relations_hold(model)
    return ok, {"words": [list(w) for w in words],
                "square_diagonal": [squares[0][i][i] for i in range(model.size)],
                "square_is_diagonal": all(squares[0][i][j] == 0 for i in range(model.size)
                                          for j in range(model.size) if i != j),
                "target_diagonal": [target[i][i] for i in range(model.size)]}
