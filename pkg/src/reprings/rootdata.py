"""Root data, weight lattices, Weyl orbits, diagram automorphisms and folding.

Conventions
-----------
Vertices are numbered as in Bourbaki (1-based in labels, 0-based in code).
The Cartan matrix entry ``a[i][j]`` is the pairing of the simple root
alpha_i with the simple coroot alpha_j-check, so row i of the matrix is
alpha_i written in the fundamental-weight basis.  Weights are integer tuples
in that basis; a weight is dominant iff all coordinates are >= 0.
"""

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .linalg import (determinant, inverse_fraction, smith_normal_form,
                     unimodular_inverse)


class RootDataError(ValueError):
    pass


# --- Cartan matrices --------------------------------------------------------

def _chain(n):
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        if i + 1 < n:
            a[i][i + 1] = a[i + 1][i] = -1
    return a


def simple_cartan(kind, n):
    """Cartan matrix of a simple type in Bourbaki numbering."""
    kind = kind.upper()
    if kind == "A" and n >= 1:
        return _chain(n)
    if kind == "B" and n >= 2:
        a = _chain(n)
        a[n - 2][n - 1] = -2
        return a
    if kind == "C" and n >= 2:
        a = _chain(n)
        a[n - 1][n - 2] = -2
        return a
    if kind == "D" and n >= 3:
        a = _chain(n)
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return a
    if kind == "E" and n in (6, 7, 8):
        a = [[0] * n for _ in range(n)]
        edges = [(0, 2), (2, 3), (3, 1)] + [(k, k + 1) for k in range(3, n - 1)]
        for i in range(n):
            a[i][i] = 2
        for i, j in edges:
            a[i][j] = a[j][i] = -1
        return a
    if kind == "F" and n == 4:
        return [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    if kind == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    raise RootDataError(f"unknown simple type {kind}{n}")


def block_diagonal(blocks):
    n = sum(len(b) for b in blocks)
    a = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                a[off + i][off + j] = x
        off += len(b)
    return a


def parse_type(text):
    """Parse 'A2', 'A3xA1', 'B2 x G2' (or '' for rank 0) into a Cartan matrix."""
    text = text.strip()
    if text in ("", "0", "T0"):
        return []
    blocks = []
    for part in re.split(r"\s*[xX*]\s*", text):
        m = re.fullmatch(r"([A-Ga-g])(\d+)", part.strip())
        if not m:
            raise RootDataError(f"cannot parse type {text!r}")
        blocks.append(simple_cartan(m.group(1), int(m.group(2))))
    return block_diagonal(blocks)


# --- Dynkin diagrams --------------------------------------------------------

def _components(a):
    n = len(a)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if a[i][j] and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _classify_component(sub):
    """Identify the simple type of a connected Cartan matrix."""
    n = len(sub)
    degree = [sum(1 for j in range(n) if j != i and sub[i][j]) for i in range(n)]
    if n == 1:
        return ("A", 1)
    bonds = {(i, j): sub[i][j] * sub[j][i] for i in range(n) for j in range(n) if i != j and sub[i][j]}
    top = max(bonds.values())
    if top == 3:
        return ("G", 2)
    if top == 2:
        # sub[i][j] = -2 means alpha_i is the long end of the double bond
        (i, j), = [(i, j) for (i, j), b in bonds.items() if b == 2 and sub[i][j] == -2]
        if n == 2:
            return ("B", 2) if i == 0 else ("C", 2)
        if degree[i] == 2 and degree[j] == 2:
            return ("F", 4)
        return ("B", n) if degree[j] == 1 else ("C", n)
    if max(degree) <= 2:
        return ("A", n)
    branch = degree.index(3)
    arms = []
    for nb in [j for j in range(n) if j != branch and sub[branch][j]]:
        length, prev, cur = 1, branch, nb
        while True:
            nxt = [j for j in range(n) if j not in (cur, prev) and sub[cur][j]]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return ("D", n)
    return ("E", n)


@dataclass(frozen=True)
class DynkinDiagram:
    cartan: tuple
    labels: tuple = None

    @cached_property
    def rank(self):
        return len(self.cartan)

    @cached_property
    def edges(self):
        n = self.rank
        return [(i, j, self.cartan[i][j] * self.cartan[j][i])
                for i in range(n) for j in range(i + 1, n) if self.cartan[i][j]]

    @cached_property
    def components(self):
        return _components(self.cartan)

    @cached_property
    def type_decomposition(self):
        out = []
        for comp in self.components:
            sub = [[self.cartan[i][j] for j in comp] for i in comp]
            out.append(_classify_component(sub))
        return out

    @property
    def vertices(self):
        return self.labels or tuple(str(i + 1) for i in range(self.rank))

    def type_string(self):
        if not self.rank:
            return "T0"
        return "x".join(f"{k}{n}" for k, n in self.type_decomposition)


def check_finite_type(a):
    """Raise RootDataError naming the first non-positive leading minor."""
    n = len(a)
    for row in a:
        if len(row) != n:
            raise RootDataError("Cartan matrix must be square")
    for i in range(n):
        if a[i][i] != 2:
            raise RootDataError(f"diagonal entry a[{i}][{i}] = {a[i][i]} != 2")
        for j in range(n):
            if i != j:
                if a[i][j] > 0:
                    raise RootDataError(f"positive off-diagonal entry a[{i}][{j}]")
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise RootDataError(f"a[{i}][{j}] and a[{j}][{i}] disagree on zero")
    d = _symmetrizer(a)
    sym = [[a[i][j] * d[j] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if sym[i][j] != sym[j][i]:
                raise RootDataError("Cartan matrix is not symmetrizable")
    for k in range(1, n + 1):
        minor = determinant([row[:k] for row in a[:k]])
        if minor <= 0:
            raise RootDataError(f"leading principal minor of order {k} is {minor} <= 0")


def _symmetrizer(a):
    """Positive rationals d with a[i][j] * d[j] symmetric (d_j ~ |alpha_j|^2 / 2)."""
    n = len(a)
    d = [None] * n
    for comp in _components(a):
        d[comp[0]] = Fraction(1)
        stack = [comp[0]]
        while stack:
            i = stack.pop()
            for j in comp:
                if a[i][j] and d[j] is None:
                    # a[i][j] d[j] = a[j][i] d[i]
                    d[j] = Fraction(a[j][i]) * d[i] / a[i][j]
                    stack.append(j)
        low = min(d[i] for i in comp)
        for i in comp:
            d[i] = d[i] / low
    return d


# --- root datum -------------------------------------------------------------

@dataclass(frozen=True)
class FundamentalGroup:
    """P/Q as invariant factors, with the change of basis retained.

    ``coords(weight)`` maps a weight to its residues mod the nontrivial
    invariant factors.
    """
    factors: tuple
    column_transform: tuple
    offset: int

    @property
    def order(self):
        out = 1
        for f in self.factors:
            out *= f
        return out

    def coords(self, weight):
        n = len(weight)
        full = [sum(weight[i] * self.column_transform[i][j] for i in range(n))
                for j in range(n)]
        return tuple(full[self.offset + k] % f for k, f in enumerate(self.factors))

    def elements(self):
        return [tuple(c) for c in itertools.product(*[range(f) for f in self.factors])]


class RootDatum:
    """Semisimple simply connected root datum attached to a Cartan matrix."""

    def __init__(self, cartan):
        cartan = [list(map(int, row)) for row in cartan]
        check_finite_type(cartan)
        self.cartan = tuple(tuple(r) for r in cartan)
        self.rank = len(cartan)
        self.diagram = DynkinDiagram(self.cartan)
        self.symmetrizer = tuple(_symmetrizer(cartan))
        self.positive_roots = tuple(self._positive_roots())
        self.fundamental_group = self._fundamental_group()

    def __repr__(self):
        return f"RootDatum({self.diagram.type_string()})"

    def __eq__(self, other):
        return isinstance(other, RootDatum) and self.cartan == other.cartan

    def __hash__(self):
        return hash(self.cartan)

    # roots are stored in the simple-root basis
    def _positive_roots(self):
        n, a = self.rank, self.cartan
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        found = set(simple)
        layer = list(simple)
        while layer:
            nxt = []
            for beta in layer:
                for i in range(n):
                    pair = sum(beta[j] * a[j][i] for j in range(n))
                    p = 0
                    down = list(beta)
                    while True:
                        down[i] -= 1
                        if tuple(down) in found:
                            p += 1
                        else:
                            break
                    if p - pair > 0:
                        up = list(beta)
                        up[i] += 1
                        up = tuple(up)
                        if up not in found:
                            found.add(up)
                            nxt.append(up)
            layer = nxt
        return sorted(found, key=lambda r: (sum(r), tuple(-x for x in r)))

    def _fundamental_group(self):
        if self.rank == 0:
            return FundamentalGroup((), (), 0)
        s, _, v = smith_normal_form(self.cartan)
        diag = [s[i][i] for i in range(self.rank)]
        offset = sum(1 for d in diag if d == 1)
        factors = tuple(d for d in diag if d != 1)
        return FundamentalGroup(factors, tuple(tuple(r) for r in v), offset)

    # --- conversions -----------------------------------------------------
    def root_to_weight(self, root):
        n = self.rank
        return tuple(sum(root[i] * self.cartan[i][j] for i in range(n)) for j in range(n))

    @cached_property
    def cartan_inverse(self):
        return inverse_fraction(self.cartan) if self.rank else []

    def weight_to_root_coords(self, weight):
        """Coordinates in the simple-root basis (Fractions)."""
        n = self.rank
        inv = self.cartan_inverse
        return tuple(sum(Fraction(weight[i]) * inv[i][j] for i in range(n)) for j in range(n))

    def in_root_lattice(self, weight):
        return all(x.denominator == 1 for x in self.weight_to_root_coords(weight))

    @cached_property
    def positive_roots_weights(self):
        return tuple(self.root_to_weight(r) for r in self.positive_roots)

    @cached_property
    def rho(self):
        return tuple([1] * self.rank)

    # --- bilinear form ---------------------------------------------------
    def inner(self, lam, mu):
        """W-invariant form with (alpha_i, alpha_i) = 2 d_i."""
        n = self.rank
        inv = self.cartan_inverse
        total = Fraction(0)
        for i in range(n):
            if lam[i]:
                for j in range(n):
                    if mu[j]:
                        total += lam[i] * mu[j] * inv[i][j] * self.symmetrizer[j]
        return total

    def root_norm_half(self, root):
        """(alpha, alpha) / 2 for a root given in simple-root coordinates."""
        n = self.rank
        return sum(Fraction(root[i] * root[j] * self.cartan[i][j]) * self.symmetrizer[j]
                   for i in range(n) for j in range(n)) / 2

    def coroot_coords(self, root):
        """Coroot of a root, in the simple-coroot basis."""
        dn = self.root_norm_half(root)
        out = []
        for i, c in enumerate(root):
            x = Fraction(c) * self.symmetrizer[i] / dn
            assert x.denominator == 1
            out.append(int(x))
        return tuple(out)

    @cached_property
    def positive_coroots(self):
        return tuple(self.coroot_coords(r) for r in self.positive_roots)

    def pairing(self, weight, coroot):
        """<weight, coroot> with the coroot in simple-coroot coordinates."""
        return sum(w * c for w, c in zip(weight, coroot))

    # --- Weyl group ------------------------------------------------------
    def reflect(self, weight, i):
        c = weight[i]
        if c == 0:
            return tuple(weight)
        row = self.cartan[i]
        return tuple(w - c * r for w, r in zip(weight, row))

    def dominant_representative(self, weight):
        w = tuple(weight)
        while True:
            for i in range(self.rank):
                if w[i] < 0:
                    w = self.reflect(w, i)
                    break
            else:
                return w

    def is_dominant(self, weight):
        return all(x >= 0 for x in weight)

    @cached_property
    def weyl_order(self):
        return len(self.weyl_orbit_with_signs(tuple([1] * self.rank)))

    def weyl_orbit_with_signs(self, weight):
        """Orbit with parity of the length of a reaching element (valid for regular weights)."""
        start = tuple(weight)
        seen = {start: 1}
        stack = [start]
        while stack:
            w = stack.pop()
            for i in range(self.rank):
                x = self.reflect(w, i)
                if x not in seen:
                    seen[x] = -seen[w]
                    stack.append(x)
        return seen

    def longest_word(self, prefer="low"):
        """A reduced word (1-based indices) for the longest Weyl element."""
        w = tuple([1] * self.rank)
        word = []
        order = range(self.rank) if prefer == "low" else range(self.rank - 1, -1, -1)
        while True:
            for i in order:
                if w[i] > 0:
                    w = self.reflect(w, i)
                    word.append(i + 1)
                    break
            else:
                return tuple(reversed(word))


def build_root_datum(cartan):
    """Root datum of the simply connected group with the given Cartan matrix."""
    if isinstance(cartan, str):
        cartan = parse_type(cartan)
    return RootDatum(cartan)


def weyl_orbit(datum, weight):
    """Return (orbit, dominant representative); the orbit is a frozenset."""
    start = tuple(weight)
    if len(start) != datum.rank:
        raise RootDataError("weight length does not match rank")
    seen = {start}
    stack = [start]
    while stack:
        w = stack.pop()
        for i in range(datum.rank):
            x = datum.reflect(w, i)
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return frozenset(seen), datum.dominant_representative(start)


# --- diagram automorphisms --------------------------------------------------

@dataclass(frozen=True)
class DiagramAutomorphism:
    """Vertex permutation, 0-based: vertex i goes to perm[i]."""
    perm: tuple

    @property
    def order(self):
        k, cur = 1, self.perm
        ident = tuple(range(len(self.perm)))
        while cur != ident:
            cur = tuple(self.perm[x] for x in cur)
            k += 1
        return k

    def is_identity(self):
        return self.perm == tuple(range(len(self.perm)))

    def power(self, k):
        cur = tuple(range(len(self.perm)))
        for _ in range(k % self.order):
            cur = tuple(self.perm[x] for x in cur)
        return DiagramAutomorphism(cur)

    def compose(self, other):
        """self after other."""
        return DiagramAutomorphism(tuple(self.perm[other.perm[i]] for i in range(len(self.perm))))

    def act(self, weight):
        """Action on weight coordinates: omega_i goes to omega_{perm[i]}."""
        out = [0] * len(weight)
        for i, c in enumerate(weight):
            out[self.perm[i]] = c
        return tuple(out)

    def orbits(self):
        seen, out = set(), []
        for i in range(len(self.perm)):
            if i in seen:
                continue
            orb, j = [], i
            while j not in orb:
                orb.append(j)
                j = self.perm[j]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return out

    def to_json(self):
        return [p + 1 for p in self.perm]


def check_automorphism(datum, sigma):
    n = datum.rank
    if len(sigma.perm) != n or sorted(sigma.perm) != list(range(n)):
        raise RootDataError("not a permutation of the vertices")
    a = datum.cartan
    for i in range(n):
        for j in range(n):
            if a[sigma.perm[i]][sigma.perm[j]] != a[i][j]:
                raise RootDataError("permutation does not preserve the Cartan matrix")
    return sigma


def diagram_automorphisms(datum):
    """All Cartan-preserving vertex permutations (backtracking)."""
    n, a = datum.rank, datum.cartan
    out = []

    def extend(assign, used):
        k = len(assign)
        if k == n:
            out.append(DiagramAutomorphism(tuple(assign)))
            return
        for t in range(n):
            if t in used or a[t][t] != a[k][k]:
                continue
            if all(a[assign[j]][t] == a[j][k] and a[t][assign[j]] == a[k][j] for j in range(k)):
                assign.append(t)
                used.add(t)
                extend(assign, used)
                assign.pop()
                used.discard(t)

    extend([], set())
    return out


def named_automorphism(datum, name):
    """'flip' (A_n reversal), 'swap' (last two D_n vertices or A end swap),
    'triality' (D4 order 3), 'id', or an explicit 1-based list like '3,2,1'."""
    n = datum.rank
    name = name.strip().lower()
    if name in ("id", "identity"):
        return DiagramAutomorphism(tuple(range(n)))
    if "," in name or name.isdigit():
        perm = tuple(int(x) - 1 for x in name.split(","))
        return check_automorphism(datum, DiagramAutomorphism(perm))
    kinds = datum.diagram.type_decomposition
    if len(kinds) != 1:
        raise RootDataError("named automorphisms need a connected diagram")
    kind, _ = kinds[0]
    if name in ("flip", "swap", "end-swap", "reverse", "order-2"):
        if kind == "A":
            return check_automorphism(datum, DiagramAutomorphism(tuple(range(n - 1, -1, -1))))
        if kind == "D":
            perm = list(range(n))
            perm[n - 2], perm[n - 1] = n - 1, n - 2
            return check_automorphism(datum, DiagramAutomorphism(tuple(perm)))
        if kind == "E" and n == 6:
            return check_automorphism(datum, DiagramAutomorphism((5, 1, 4, 3, 2, 0)))
    if name in ("triality", "order-3") and kind == "D" and n == 4:
        return check_automorphism(datum, DiagramAutomorphism((2, 1, 3, 0)))
    raise RootDataError(f"no automorphism named {name!r} for {datum.diagram.type_string()}")


def act_on_fundamental_group(datum, sigma, cls):
    """Image of a P/Q class (invariant-factor coords) under sigma."""
    w = class_representative(datum, cls)
    return datum.fundamental_group.coords(sigma.act(w))


def class_representative(datum, cls):
    fg = datum.fundamental_group
    n = datum.rank
    full = [0] * n
    for k, c in enumerate(cls):
        full[fg.offset + k] = c
    vinv = unimodular_inverse([list(r) for r in fg.column_transform])
    return tuple(sum(full[j] * vinv[j][i] for j in range(n)) for i in range(n))


# --- folding ----------------------------------------------------------------

@dataclass(frozen=True)
class FoldedData:
    source: str
    sigma: DiagramAutomorphism
    fixed_type: str
    dual_type: str
    orbits: tuple
    folded_cartan: tuple
    vertex_map: tuple = field(default=())

    def to_folded(self, weight):
        """Sigma-invariant source weight -> weight of the dual folded group."""
        for orb in self.orbits:
            vals = {weight[i] for i in orb}
            if len(vals) != 1:
                raise RootDataError("weight is not sigma-invariant")
        out = [0] * len(self.orbits)
        for k, orb in enumerate(self.orbits):
            out[self.vertex_map[k]] = weight[orb[0]]
        return tuple(out)

    def from_folded(self, weight):
        n = sum(len(o) for o in self.orbits)
        out = [0] * n
        for k, orb in enumerate(self.orbits):
            for i in orb:
                out[i] = weight[self.vertex_map[k]]
        return tuple(out)

    def orbit_coords(self, weight):
        """Sigma-invariant weight in the orbit-sum basis (orbit order)."""
        return tuple(weight[o[0]] for o in self.orbits)


_FOLDING_TABLE = {
    # (source kind, parity or n, order) -> (fixed, dual) as functions of n
    "A_even": lambda n: (("B", n // 2), ("C", n // 2)),
    "A_odd": lambda n: (("C", (n + 1) // 2), ("B", (n + 1) // 2)),
    "D2": lambda n: (("B", n - 1), ("C", n - 1)),
    "D3": lambda n: (("G", 2), ("G", 2)),
    "E6": lambda n: (("F", 4), ("F", 4)),
}


def _type_name(kind, n):
    # low-rank coincidences normalised to the A series
    if kind in ("B", "C") and n == 1:
        return "A1"
    return f"{kind}{n}"


def folding_types(kind, n, order):
    if kind == "A" and order == 2:
        key = "A_even" if n % 2 == 0 else "A_odd"
    elif kind == "D" and order == 2:
        key = "D2"
    elif kind == "D" and n == 4 and order == 3:
        key = "D3"
    elif kind == "E" and n == 6 and order == 2:
        key = "E6"
    else:
        raise RootDataError(f"no folding for {kind}{n} with an automorphism of order {order}")
    (fk, fn), (dk, dn) = _FOLDING_TABLE[key](n)
    return _type_name(fk, fn), _type_name(dk, dn)


def folded_cartan_from_source(datum, sigma):
    """Cartan matrix of the dual folded group, derived from W^sigma acting on P^sigma.

    Row k is the simple root beta_k = omega_k - s_k(omega_k) of the folded
    system written in the orbit-sum basis, where s_k is the longest element of
    the parabolic subgroup generated by the k-th orbit.
    """
    orbits = sigma.orbits()
    rows = []
    for orb in orbits:
        ok = _orbit_sum(datum.rank, orb)
        image = apply_word(datum, parabolic_longest_word(datum, orb), ok)
        beta = tuple(x - y for x, y in zip(ok, image))
        rows.append(tuple(beta[o[0]] for o in orbits))
    return tuple(rows)


def _orbit_sum(n, orb):
    return tuple(int(i in orb) for i in range(n))


def apply_word(datum, word, weight):
    """Apply s_{w1} s_{w2} ... s_{wk} (0-based letters) to a weight."""
    w = tuple(weight)
    for i in reversed(word):
        w = datum.reflect(w, i)
    return w


def parabolic_longest_word(datum, subset):
    """Reduced word (0-based) of the longest element of W_subset."""
    w = [0] * datum.rank
    for i in subset:
        w[i] = 1
    w = tuple(w)
    word = []
    while True:
        for i in subset:
            if w[i] > 0:
                w = datum.reflect(w, i)
                word.append(i)
                break
        else:
            return tuple(reversed(word))


def fold_diagram(datum, sigma):
    """Folding data for a nontrivial automorphism of a connected diagram."""
    check_automorphism(datum, sigma)
    if sigma.is_identity():
        raise RootDataError("identity automorphism cannot be folded")
    kinds = datum.diagram.type_decomposition
    if len(kinds) != 1:
        raise RootDataError("folding implemented for connected diagrams")
    kind, n = kinds[0]
    fixed, dual = folding_types(kind, n, sigma.order)
    orbits = tuple(sigma.orbits())
    derived = folded_cartan_from_source(datum, sigma)
    target = parse_type(dual)
    vmap = _match_cartan(derived, target)
    if vmap is None:
        raise RootDataError(f"derived folded Cartan matrix does not match {dual}")
    return FoldedData(datum.diagram.type_string(), sigma, fixed, dual, orbits,
                      derived, tuple(vmap))


def _match_cartan(a, b):
    """Vertex bijection f with b[f(i)][f(j)] = a[i][j], or None."""
    n = len(a)
    if len(b) != n:
        return None
    for perm in itertools.permutations(range(n)):
        if all(b[perm[i]][perm[j]] == a[i][j] for i in range(n) for j in range(n)):
            return list(perm)
    return None


def type_dimension(type_string):
    d = build_root_datum(type_string)
    return d.rank + 2 * len(d.positive_roots)


def fixed_subalgebra_dimension(datum, sigma):
    """dim g^sigma for the pinned automorphism, counted on root orbits.

    Each sigma-orbit of roots contributes one fixed vector, except orbits of
    a fixed root alpha = beta + sigma(beta) (the A_2n phenomenon), where
    sigma acts on the root line by -1.  The Cartan part contributes the
    number of vertex orbits.
    """
    roots = set(datum.positive_roots)
    def act(r):
        out = [0] * datum.rank
        for i, c in enumerate(r):
            out[sigma.perm[i]] = c
        return tuple(out)
    seen, count = set(), 0
    for r in datum.positive_roots:
        if r in seen:
            continue
        orb, x = [], r
        while x not in orb:
            orb.append(x)
            x = act(x)
        seen.update(orb)
        count += 1
        if len(orb) == 1 and sigma.order == 2:
            for b in roots:
                sb = act(b)
                if sb != b and tuple(p + q for p, q in zip(b, sb)) == r:
                    count -= 1
                    break
    return len(sigma.orbits()) + 2 * count


# --- minuscule lift ---------------------------------------------------------

def minuscule_weights(datum):
    out = []
    for bits in itertools.product((0, 1), repeat=datum.rank):
        if all(datum.pairing(bits, c) <= 1 for c in datum.positive_coroots):
            out.append(tuple(bits))
    return out


def minuscule_lift(datum, cls, stab=()):
    """The unique minuscule dominant weight in the P/Q class ``cls``.

    ``cls`` is either a tuple of residues (invariant-factor coordinates) or
    a weight of full rank length representing the class.
    """
    fg = datum.fundamental_group
    cls = tuple(cls)
    if len(cls) == datum.rank and len(cls) != len(fg.factors):
        cls = fg.coords(cls)
    if len(cls) != len(fg.factors):
        raise RootDataError("class has the wrong number of coordinates")
    cls = tuple(c % f for c, f in zip(cls, fg.factors))
    for s in stab:
        check_automorphism(datum, s)
        if act_on_fundamental_group(datum, s, cls) != cls:
            raise RootDataError("class is not invariant under the stabiliser")
    hits = [w for w in minuscule_weights(datum) if fg.coords(w) == cls]
    if len(hits) != 1:
        raise RootDataError("minuscule representative not unique (internal error)")
    return hits[0]


# --- 2-torsion torus elements -----------------------------------------------

@dataclass(frozen=True)
class TorsionTorusElement:
    """A homomorphism lattice -> {+1, -1} stored as values mod 2 on a basis.

    ``lattice`` is "Q" (basis: simple roots) or "P" (basis: fundamental
    weights).
    """
    lattice: str
    bits: tuple

    def __mul__(self, other):
        if self.lattice != other.lattice:
            raise RootDataError("lattice mismatch")
        return TorsionTorusElement(self.lattice, tuple((a + b) % 2 for a, b in zip(self.bits, other.bits)))

    def square(self):
        return self * self

    def is_trivial(self):
        return not any(self.bits)

    def value(self, coords):
        return -1 if sum(a * b for a, b in zip(self.bits, coords)) % 2 else 1

    def to_json(self):
        return {"lattice": self.lattice, "values": [-1 if b else 1 for b in self.bits]}


def epsilon(datum, i):
    """epsilon_i = coweight_i(-1) as a homomorphism Q -> {+1,-1}."""
    return TorsionTorusElement("Q", tuple(int(j == i) for j in range(datum.rank)))


def orbit_epsilon_product(datum, sigma, i):
    """Product of sigma^j(epsilon_i), j = 0 .. ord(sigma) - 1.

    The vertex ``i`` is 0-based.  Requires ord(sigma) = 2m even and i joined
    to sigma^m(i) by an edge.
    """
    check_automorphism(datum, sigma)
    order = sigma.order
    if order % 2:
        raise RootDataError("automorphism must have even order")
    m = order // 2
    partner = sigma.power(m).perm[i]
    if partner == i or datum.cartan[i][partner] == 0:
        raise RootDataError(f"vertex {i + 1} is not joined to its image under sigma^{m}")
    bits = [0] * datum.rank
    for j in range(order):
        bits[sigma.power(j).perm[i]] += 1
    return TorsionTorusElement("Q", tuple(b % 2 for b in bits))


def two_rho_check_sign(datum):
    """(-1)^{2 rho-check} as a homomorphism P -> {+1,-1}."""
    total = [0] * datum.rank
    for c in datum.positive_coroots:
        total = [a + b for a, b in zip(total, c)]
    return TorsionTorusElement("P", tuple(t % 2 for t in total))
