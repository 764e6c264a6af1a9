"""Cohomology of finite groups with coefficients in finite abelian modules.

Cochains are normalised inhomogeneous cochains of the bar resolution.  The
module is split into its p-primary parts; each part is a module over the
local ring Z/p^e where a Smith form with minimal-valuation pivots gives
kernels and cokernels directly.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from .characters import budget
from .linalg import factor_integer, invariant_factors_from_elementary, local_smith


class CohomologyError(ValueError):
    pass


# --- finite groups ----------------------------------------------------------

class FiniteGroup:
    """Group on elements 0..n-1 given by a multiplication table."""

    def __init__(self, table, name=None, perms=None, validate=True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.n = len(self.table)
        self.name = name
        self.perms = perms
        if validate:
            self._validate()
        e = next(i for i in range(self.n) if all(self.table[i][j] == j for j in range(self.n)))
        self.identity = e
        self.inverse = tuple(next(j for j in range(self.n) if self.table[i][j] == e)
                             for i in range(self.n))

    def __repr__(self):
        return f"FiniteGroup({self.name or self.n})"

    def _validate(self):
        n = self.n
        if n == 0:
            raise CohomologyError("empty group")
        for row in self.table:
            if len(row) != n or sorted(row) != list(range(n)):
                raise CohomologyError("table rows must be permutations of the elements")
        for col in range(n):
            if sorted(self.table[r][col] for r in range(n)) != list(range(n)):
                raise CohomologyError("table columns must be permutations of the elements")
        ids = [i for i in range(n) if all(self.table[i][j] == j and self.table[j][i] == j
                                          for j in range(n))]
        if not ids:
            raise CohomologyError("no identity element")
        t = self.table
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise CohomologyError("multiplication is not associative")

    @property
    def order(self):
        return self.n

    def mul(self, a, b):
        return self.table[a][b]

    def power(self, g, k):
        out = self.identity
        for _ in range(k):
            out = self.table[out][g]
        return out

    def element_order(self, g):
        k, x = 1, g
        while x != self.identity:
            x = self.table[x][g]
            k += 1
        return k

    def generated(self, gens):
        elems = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
        return tuple(sorted(elems))

    def is_subgroup(self, elems):
        s = set(elems)
        if self.identity not in s:
            return False
        return all(self.table[a][self.inverse[b]] in s for a in s for b in s)

    def is_normal(self, elems):
        s = set(elems)
        return all(self.table[self.table[g][h]][self.inverse[g]] in s
                   for g in range(self.n) for h in s)

    def conjugate(self, g, h):
        """g h g^-1"""
        return self.table[self.table[g][h]][self.inverse[g]]

    def is_abelian(self):
        return all(self.table[a][b] == self.table[b][a] for a in range(self.n) for b in range(self.n))

    @cached_property
    def cyclic_subgroups(self):
        seen = {}
        for g in range(self.n):
            sub = self.generated([g])
            seen.setdefault(sub, g)
        return sorted(seen.items(), key=lambda t: (len(t[0]), t[1]))

    def subgroup(self, elems):
        """(FiniteGroup on the subset, embedding list)."""
        elems = sorted(set(elems))
        if not self.is_subgroup(elems):
            raise CohomologyError("elements do not form a subgroup")
        # put the identity first
        elems.remove(self.identity)
        elems = [self.identity] + elems
        index = {g: i for i, g in enumerate(elems)}
        table = [[index[self.table[a][b]] for b in elems] for a in elems]
        return FiniteGroup(table, validate=False), elems

    @classmethod
    def from_permutations(cls, gens, name=None):
        gens = [tuple(g) for g in gens]
        if not gens:
            return cls([[0]], name=name or "1", perms=[()])
        k = len(gens[0])
        ident = tuple(range(k))
        elems = [ident]
        index = {ident: 0}
        i = 0
        while i < len(elems):
            x = elems[i]
            for g in gens:
                y = tuple(g[x[j]] for j in range(k))   # g after x
                if y not in index:
                    index[y] = len(elems)
                    elems.append(y)
            i += 1
        table = [[index[tuple(a[b[j]] for j in range(k))] for b in elems] for a in elems]
        out = cls(table, name=name, perms=elems, validate=False)
        out.generators = [index[g] for g in gens]
        return out

    def to_json(self):
        return {"table": [list(r) for r in self.table]}


def group_from_json(obj):
    if "table" in obj:
        return FiniteGroup(obj["table"], name=obj.get("name"))
    if "perm_gens" in obj:
        gens = obj["perm_gens"]
        if gens and min(min(g) for g in gens) == 1:
            gens = [[x - 1 for x in g] for g in gens]
        return FiniteGroup.from_permutations(gens, name=obj.get("name"))
    raise CohomologyError("group JSON needs 'table' or 'perm_gens'")


# --- catalog ----------------------------------------------------------------

def cyclic_group(n):
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], name=f"Z{n}",
                       validate=False)


def direct_product(g, h, name=None):
    n, m = g.n, h.n
    table = [[g.table[a // m][b // m] * m + h.table[a % m][b % m] for b in range(n * m)]
             for a in range(n * m)]
    return FiniteGroup(table, name=name or f"{g.name}x{h.name}", validate=False)


def dihedral_group(n):
    """Symmetries of an n-gon, order 2n."""
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    if n == 2:
        return FiniteGroup.from_permutations([[1, 0, 2, 3], [0, 1, 3, 2]], name="D2")
    return FiniteGroup.from_permutations([rot, ref], name=f"D{n}")


def symmetric_group(k):
    if k < 2:
        return cyclic_group(1)
    gens = [[1, 0] + list(range(2, k)), list(range(1, k)) + [0]]
    return FiniteGroup.from_permutations(gens, name=f"S{k}")


def alternating_group(k):
    gens = [[(1, 2, 0)[i] if i < 3 else i for i in range(k)]]
    for j in range(3, k):
        p = list(range(k))
        p[0], p[1], p[j] = p[1], p[j], p[0]
        gens.append(p)
    return FiniteGroup.from_permutations(gens, name=f"A{k}")


def dicyclic_group(n):
    """Dic_n of order 4n: <a, x | a^2n = 1, x^2 = a^n, x a x^-1 = a^-1>."""
    m = 2 * n
    elems = [(i, j) for j in range(2) for i in range(m)]
    index = {e: k for k, e in enumerate(elems)}

    def mul(p, q):
        (i, j), (k, l) = p, q
        if j == 0:
            return ((i + k) % m, l)
        if l == 0:
            return ((i - k) % m, 1)
        return ((i - k + n) % m, 0)

    table = [[index[mul(p, q)] for q in elems] for p in elems]
    return FiniteGroup(table, name="Q8" if n == 2 else f"Dic{n}", validate=False)


def quaternion_group():
    return dicyclic_group(2)


def metacyclic_group(p, q, r=None):
    """Z/p x| Z/q with the generator of Z/q acting by an element r of order q."""
    if r is None:
        r = next(x for x in range(2, p) if pow(x, q, p) == 1 and all(pow(x, d, p) != 1 for d in range(1, q)))
    elems = [(a, b) for b in range(q) for a in range(p)]
    index = {e: k for k, e in enumerate(elems)}
    table = [[index[((a + pow(r, b, p) * c) % p, (b + d) % q)] for (c, d) in elems]
             for (a, b) in elems]
    return FiniteGroup(table, name=f"Z{p}:Z{q}", validate=False)


def sl23():
    """SL(2, F_3), order 24."""
    mats = []
    for a, b, c, d in itertools.product(range(3), repeat=4):
        if (a * d - b * c) % 3 == 1:
            mats.append((a, b, c, d))
    mats.sort(key=lambda m: m != (1, 0, 0, 1))
    index = {m: i for i, m in enumerate(mats)}

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % 3, (a * f + b * h) % 3, (c * e + d * g) % 3, (c * f + d * h) % 3)

    return FiniteGroup([[index[mul(x, y)] for y in mats] for x in mats], name="SL(2,3)",
                       validate=False)


def group_catalog(max_order=63):
    """Small catalog of test groups (name, group)."""
    out = []
    for n in range(1, max_order + 1):
        out.append(cyclic_group(n))
    for n in range(2, max_order // 2 + 1):
        out.append(dihedral_group(n))
    for n in range(2, max_order // 4 + 1):
        out.append(dicyclic_group(n))
    out += [symmetric_group(3), symmetric_group(4), alternating_group(4), alternating_group(5),
            sl23()]
    for p, q in [(3, 2), (5, 2), (5, 4), (7, 3), (7, 2), (7, 6), (11, 5), (13, 3), (13, 4),
                 (11, 2), (13, 2), (31, 2), (19, 3)]:
        if p * q <= max_order:
            out.append(metacyclic_group(p, q))
    z2, z3, z4 = cyclic_group(2), cyclic_group(3), cyclic_group(4)
    extra = [direct_product(z2, z2), direct_product(z2, z4), direct_product(direct_product(z2, z2), z2),
             direct_product(z3, z3), direct_product(z3, symmetric_group(3)),
             direct_product(z4, symmetric_group(3)), direct_product(z2, alternating_group(4)),
             direct_product(z3, quaternion_group()), direct_product(z4, z4),
             direct_product(cyclic_group(5), symmetric_group(3)),
             direct_product(z3, metacyclic_group(7, 3)) if 63 <= max_order else None]
    out += [g for g in extra if g is not None and g.n <= max_order]
    return [g for g in out if g.n <= max_order]


# --- modules ----------------------------------------------------------------

def _reduce_vec(v, factors):
    return tuple(x % d for x, d in zip(v, factors))


class GModule:
    """Finite abelian group Z = sum Z/d_i with a left action by integer matrices.

    ``matrices[g]`` maps residue vectors (column convention) to residue
    vectors: (g.z)_i = sum_j M[i][j] z_j mod d_i.
    """

    def __init__(self, group, factors, matrices, validate=True):
        self.group = group
        self.factors = tuple(int(d) for d in factors)
        if any(d < 1 for d in self.factors):
            raise CohomologyError("factors must be positive")
        self.rank = len(self.factors)
        self.matrices = tuple(tuple(tuple(int(x) for x in row) for row in m) for m in matrices)
        if len(self.matrices) != group.n:
            raise CohomologyError("need one matrix per group element")
        if validate:
            self._validate()

    @cached_property
    def order(self):
        out = 1
        for d in self.factors:
            out *= d
        return out

    def act(self, g, z):
        m = self.matrices[g]
        return tuple(sum(m[i][j] * z[j] for j in range(self.rank)) % self.factors[i]
                     for i in range(self.rank))

    def add(self, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.factors))

    def neg(self, a):
        return tuple((-x) % d for x, d in zip(a, self.factors))

    def zero(self):
        return tuple([0] * self.rank)

    def elements(self):
        return [tuple(c) for c in itertools.product(*[range(d) for d in self.factors])]

    def _validate(self):
        r, d = self.rank, self.factors
        basis = [tuple(int(i == j) for i in range(r)) for j in range(r)]
        for g in range(self.group.n):
            m = self.matrices[g]
            for j in range(r):
                col = [m[i][j] * d[j] for i in range(r)]
                if any(c % d[i] for i, c in enumerate(col)):
                    raise CohomologyError("action matrix is not well defined modulo the factors")
        for g in range(self.group.n):
            for h in range(self.group.n):
                gh = self.group.mul(g, h)
                for b in basis:
                    if self.act(g, self.act(h, b)) != self.act(gh, b):
                        raise CohomologyError("action does not respect the multiplication table")
        e = self.group.identity
        for b in basis:
            if self.act(e, b) != _reduce_vec(b, d):
                raise CohomologyError("identity does not act trivially")

    def restrict(self, embedding, subgroup):
        return GModule(subgroup, self.factors, [self.matrices[g] for g in embedding], validate=False)

    def is_p_local(self, p):
        return all(set(factor_integer(d)) <= {p} for d in self.factors)

    def primary_part(self, p):
        """(factors, matrices, projection, inclusion) of the p-primary submodule."""
        kept = []
        for j, d in enumerate(self.factors):
            v = factor_integer(d).get(p, 0)
            if v:
                kept.append((j, v))
        pf = tuple(p ** v for _, v in kept)
        scale = [self.factors[j] // p ** v for j, v in kept]
        mats = []
        for g in range(self.group.n):
            m = self.matrices[g]
            rows = []
            for a, (i, vi) in enumerate(kept):
                row = []
                for b, (j, vj) in enumerate(kept):
                    # the image lies in the p-part scale_a * Z/d_i
                    x = m[i][j] * scale[b]
                    row.append(((x % self.factors[i]) // scale[a]) % pf[a])
                rows.append(row)
            mats.append(rows)
        return kept, pf, scale, mats


def trivial_module(group, factors):
    r = len(factors)
    ident = [[int(i == j) for j in range(r)] for i in range(r)]
    return GModule(group, factors, [ident] * group.n, validate=False)


def module_from_generators(group, factors, gen_action):
    """Module from matrices on generating elements {element index: matrix}."""
    r = len(factors)
    ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    mats = {group.identity: ident}
    frontier = [group.identity]
    gens = {int(g): tuple(tuple(int(x) for x in row) for row in m) for g, m in gen_action.items()}
    while frontier:
        x = frontier.pop()
        for g, m in gens.items():
            y = group.mul(g, x)
            if y not in mats:
                prod = tuple(tuple(sum(m[i][k] * mats[x][k][j] for k in range(r)) % factors[i]
                                   for j in range(r)) for i in range(r))
                mats[y] = prod
                frontier.append(y)
    if len(mats) != group.n:
        raise CohomologyError("generators do not generate the group")
    return GModule(group, factors, [mats[g] for g in range(group.n)])


def permutation_quotient_module(group, p):
    """(F_p)^k / F_p (diagonal) for a permutation group on k points."""
    if group.perms is None:
        raise CohomologyError("group has no permutation representation")
    k = len(group.perms[0])
    r = k - 1
    mats = []
    for perm in group.perms:
        m = [[0] * r for _ in range(r)]
        for j in range(r):
            t = perm[j]
            if t < r:
                m[t][j] = (m[t][j] + 1) % p
            else:
                for i in range(r):
                    m[i][j] = (m[i][j] - 1) % p
        mats.append(m)
    return GModule(group, [p] * r, mats)


def sign_module(group, n, sign_of):
    """Z/n on which g acts by sign_of(g) in {+1, -1}."""
    return GModule(group, [n], [[[sign_of(g) % n]] for g in range(group.n)])


def permutation_sign(perm):
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def module_from_json(group, obj):
    factors = obj["factors"]
    action = obj.get("action", {})
    if not action:
        return trivial_module(group, factors)
    gens = getattr(group, "generators", None)
    if gens is not None:
        # keys index the permutation generators
        return module_from_generators(group, factors, {gens[int(k)]: v for k, v in action.items()})
    return module_from_generators(group, factors, {int(k): v for k, v in action.items()})


# --- bar complex ------------------------------------------------------------

def _cells(group, n):
    nonid = [g for g in range(group.n) if g != group.identity]
    return list(itertools.product(nonid, repeat=n))


def _coboundary_entries(group, mats, factors, n):
    """Sparse integer matrix of d^n : C^n -> C^{n+1} in p-part coordinates.

    Returns (rows, cols, entries dict).
    """
    r = len(factors)
    src = _cells(group, n)
    dst = _cells(group, n + 1)
    sidx = {c: k for k, c in enumerate(src)}
    e = group.identity
    entries = {}

    def put(row, col, val):
        if val:
            entries[(row, col)] = entries.get((row, col), 0) + val

    for di, cell in enumerate(dst):
        g1 = cell[0]
        # g1 . f(g2, ..., g_{n+1})
        tail = cell[1:]
        if tail in sidx:
            c = sidx[tail]
            m = mats[g1]
            for i in range(r):
                for j in range(r):
                    put(di * r + i, c * r + j, m[i][j])
        for k in range(n):
            merged = group.mul(cell[k], cell[k + 1])
            if merged == e:
                continue
            face = cell[:k] + (merged,) + cell[k + 2:]
            c = sidx[face]
            sign = -1 if (k + 1) % 2 else 1
            for i in range(r):
                put(di * r + i, c * r + i, sign)
        head = cell[:n]
        c = sidx[head]
        sign = -1 if (n + 1) % 2 else 1
        for i in range(r):
            put(di * r + i, c * r + i, sign)
    return len(dst) * r, len(src) * r, entries


def _dense(rows, cols, entries, q=None, row_scale=None):
    m = [[0] * cols for _ in range(rows)]
    for (i, j), v in entries.items():
        if row_scale is not None:
            v *= row_scale[i]
        m[i][j] = v % q if q else v
    return m


@dataclass
class _PrimeComponent:
    p: int
    e: int
    kept: list
    pf: tuple
    scale: list
    mats: list
    V: list
    Vinv: list
    c: list
    rel_kept: list
    U: list
    D: list
    gens: list          # generator cocycles in p-part coordinates (flat)


class CohomologyGroup:
    """H^n(Gamma, Z) as a finite abelian group with explicit cocycles."""

    def __init__(self, group, module, n):
        if n not in (1, 2, 3):
            raise CohomologyError("degree must be 1, 2 or 3")
        self.group = group
        self.module = module
        self.degree = n
        limit = budget() * 10
        size = ((group.n - 1) ** (n + 1)) * module.rank * ((group.n - 1) ** n) * module.rank
        if size > limit:
            raise CohomologyError(f"budget exceeded: coboundary matrix has {size} entries")
        self.cells = _cells(group, n)
        self.cell_index = {c: k for k, c in enumerate(self.cells)}
        self.components = []
        for p in sorted(set().union(*[factor_integer(d) for d in module.factors]) if module.factors else []):
            self.components.append(self._component(p))

    def _component(self, p):
        n = self.degree
        kept, pf, scale, mats = self.module.primary_part(p)
        r = len(pf)
        e = max(factor_integer(d)[p] for d in pf)
        q = p ** e
        rows, cols, ent = _coboundary_entries(self.group, mats, pf, n)
        row_scale = [q // pf[i % r] for i in range(rows)]
        m = _dense(rows, cols, ent, q, row_scale)
        diag, _, V = local_smith(m, p, e, want_v=True)
        Vinv = np.array(_mod_inverse(V, q), dtype=np.int64).reshape(len(V), len(V))
        V = np.array(V, dtype=np.int64).reshape(len(V), len(V))
        c = []
        for i in range(cols):
            if i < len(diag) and diag[i] != q:
                c.append(q // diag[i])
            else:
                c.append(1)
        # generators of B + R in F coordinates
        prev_rows, prev_cols, prev_ent = _coboundary_entries(self.group, mats, pf, n - 1)
        gens = []
        by_col = {}
        for (i, j), v in prev_ent.items():
            by_col.setdefault(j, {})[i] = v
        for j in sorted(by_col):
            vec = [0] * cols
            for i, v in by_col[j].items():
                vec[i] = v % q
            gens.append(vec)
        for k in range(cols):
            vec = [0] * cols
            vec[k] = pf[k % r] % q
            gens.append(vec)
        # K coordinates: w_i = (Vinv g)_i / c_i, defined mod q / c_i
        orders = [q // ci for ci in c]
        kept_idx = [i for i in range(cols) if orders[i] > 1]
        cols_w = []
        for g in gens:
            z = _matvec_mod(Vinv, g, q)
            w = []
            for i in kept_idx:
                if z[i] % c[i]:
                    raise CohomologyError("coboundary outside the cocycle lattice (internal error)")
                w.append(z[i] // c[i])
            cols_w.append(w)
        m_rows = len(kept_idx)
        if m_rows == 0:
            return _PrimeComponent(p, e, kept, pf, scale, mats, V, Vinv, c, kept_idx, [], [], [])
        pres = [[0] * (m_rows + len(cols_w)) for _ in range(m_rows)]
        for a, i in enumerate(kept_idx):
            pres[a][a] = orders[i] % q
        for b, w in enumerate(cols_w):
            for a in range(m_rows):
                pres[a][m_rows + b] = w[a] % q
        D, U, _ = local_smith(pres, p, e, want_u=True)
        Uinv = _mod_inverse(U, q)
        comp_gens = []
        for a, dval in enumerate(D):
            if dval == 1:
                continue
            w = [Uinv[row][a] for row in range(m_rows)]
            z = [0] * cols
            for k, i in enumerate(kept_idx):
                z[i] = (w[k] * c[i]) % q
            x = _matvec_mod(V, z, q)
            x = [xi % pf[k % r] for k, xi in enumerate(x)]
            comp_gens.append((a, dval, x))
        return _PrimeComponent(p, e, kept, pf, scale, mats, V, Vinv, c, kept_idx, U, D, comp_gens)

    # --- structure -------------------------------------------------------
    @cached_property
    def elementary_divisors(self):
        return [d for comp in self.components for _, d, _ in comp.gens]

    @cached_property
    def invariant_factors(self):
        return invariant_factors_from_elementary(self.elementary_divisors)

    @property
    def order(self):
        out = 1
        for d in self.elementary_divisors:
            out *= d
        return out

    def elements(self):
        return [tuple(c) for c in itertools.product(*[range(d) for d in self.elementary_divisors])]

    # --- cocycles --------------------------------------------------------
    def _embed(self, comp, flat):
        """p-part coordinates (flat over cells) -> module-valued cochain dict."""
        r = len(comp.pf)
        out = {}
        for k, cell in enumerate(self.cells):
            vec = [0] * self.module.rank
            for a, (j, _) in enumerate(comp.kept):
                vec[j] = (flat[k * r + a] * comp.scale[a]) % self.module.factors[j]
            out[cell] = tuple(vec)
        return out

    @cached_property
    def generator_cocycles(self):
        out = []
        for comp in self.components:
            for _, _, x in comp.gens:
                out.append(self._embed(comp, x))
        return out

    def cocycle(self, coords):
        """Representative normalised cocycle of the class with given coordinates."""
        coords = tuple(coords)
        if len(coords) != len(self.elementary_divisors):
            raise CohomologyError("wrong number of coordinates")
        total = {cell: self.module.zero() for cell in self.cells}
        factors = self.module.factors
        for c, f in zip(coords, self.generator_cocycles):
            for cell in self.cells:
                total[cell] = tuple((x + c * y) % d for x, y, d in zip(total[cell], f[cell], factors))
        return total

    def class_of(self, cochain):
        """Coordinates of a normalised cocycle (dict over all or non-identity cells)."""
        if not self.is_cocycle(cochain):
            raise CohomologyError("cochain is not a normalised cocycle")
        coords = []
        for comp in self.components:
            if not comp.gens:
                continue
            q = comp.p ** comp.e
            flat = []
            for cell in self.cells:
                val = cochain[cell]
                for a, (j, _) in enumerate(comp.kept):
                    inv = pow(comp.scale[a], -1, comp.pf[a]) if comp.pf[a] > 1 else 0
                    flat.append((val[j] * inv) % comp.pf[a])
            z = _matvec_mod(comp.Vinv, flat, q)
            w = []
            for i in comp.rel_kept:
                if z[i] % comp.c[i]:
                    raise CohomologyError("cocycle outside kernel lattice (internal error)")
                w.append(z[i] // comp.c[i])
            y = _matvec_mod(comp.U, w, q)
            for a, dval, _ in comp.gens:
                coords.append(y[a] % dval)
        return tuple(coords)

    def is_cocycle(self, cochain):
        g = self.group
        mod = self.module
        n = self.degree
        e = g.identity

        def val(cell):
            if e in cell:
                return mod.zero()
            return cochain[cell]

        for cell in self.cells:
            if tuple(val(cell)) != tuple(x % d for x, d in zip(cochain[cell], mod.factors)):
                return False
        for cell in itertools.product(range(g.n), repeat=n + 1):
            if e in cell:
                continue
            acc = mod.act(cell[0], val(cell[1:]))
            for k in range(n):
                face = cell[:k] + (g.mul(cell[k], cell[k + 1]),) + cell[k + 2:]
                v = val(face)
                acc = mod.add(acc, v if (k + 1) % 2 == 0 else mod.neg(v))
            v = val(cell[:n])
            acc = mod.add(acc, v if (n + 1) % 2 == 0 else mod.neg(v))
            if any(acc):
                return False
        return True

    def to_json(self):
        return {"degree": self.degree, "invariant_factors": self.invariant_factors,
                "elementary_divisors": self.elementary_divisors, "order": self.order}


def _mod_inverse(m, q):
    """Inverse of a square matrix modulo q (q a prime power, m invertible)."""
    n = len(m)
    a = [[x % q for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if gcd(a[r][col], q) == 1), None)
        if piv is None:
            raise CohomologyError("matrix not invertible mod q")
        a[col], a[piv] = a[piv], a[col]
        inv = pow(a[col][col], -1, q)
        a[col] = [(x * inv) % q for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % q for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _matvec_mod(m, v, q):
    a = np.asarray(m, dtype=np.int64)
    if a.size == 0:
        return [0] * len(m)
    b = np.asarray(v, dtype=np.int64) % q
    if (q - 1) ** 2 * a.shape[1] < 2 ** 62:
        return [int(x) for x in (a % q) @ b % q]
    return [sum(x * y for x, y in zip(row, v)) % q for row in m]


_CACHE = {}


def cohomology_group(group, module, n):
    """Memoised CohomologyGroup, keyed by the table, the action and the budget."""
    key = (group.table, module.factors, module.matrices, n, budget())
    H = _CACHE.get(key)
    if H is None:
        H = CohomologyGroup(group, module, n)
        if len(_CACHE) >= 64:
            _CACHE.pop(next(iter(_CACHE)))
        _CACHE[key] = H
    return H


@dataclass(frozen=True)
class CohomologyClass:
    group: CohomologyGroup
    coords: tuple

    @property
    def degree(self):
        return self.group.degree

    def is_zero(self):
        return not any(self.coords)

    def cocycle(self):
        return self.group.cocycle(self.coords)


# --- restriction, corestriction, conjugation --------------------------------

def _full_value(cochain, cell, identity, zero):
    if identity in cell:
        return zero
    return cochain[cell]


def restrict_cochain(cochain, group, embedding, n, zero):
    sub_cells = itertools.product(range(1, len(embedding)), repeat=n)
    return {cell: _full_value(cochain, tuple(embedding[c] for c in cell), group.identity, zero)
            for cell in sub_cells}


def restriction(cls, subgroup_elements):
    """Restrict a class of H^n(Gamma, Z) to a subgroup (list of element indices)."""
    H = cls.group
    sub, emb = H.group.subgroup(subgroup_elements)
    module = H.module.restrict(emb, sub)
    Hs = cohomology_group(sub, module, H.degree)
    f = restrict_cochain(H.cocycle(cls.coords), H.group, emb, H.degree, H.module.zero())
    return CohomologyClass(Hs, Hs.class_of(f))


def corestriction(cls_sub, group, module, embedding):
    """Corestriction H^n(S, Z) -> H^n(Gamma, Z) via homogeneous cochains.

    The S-cochain is extended to Gamma^{n+1} with the S-equivariant retraction
    x -> x t(x)^-1 attached to a right transversal, then averaged over left
    coset representatives.
    """
    Hs = cls_sub.group
    n = Hs.degree
    f = Hs.cocycle(cls_sub.coords)
    zero = module.zero()
    sub_index = {g: i for i, g in enumerate(embedding)}
    # right cosets S x: choose the smallest element as representative
    right_rep = {}
    for x in range(group.n):
        coset = sorted(group.mul(s, x) for s in embedding)
        right_rep[x] = coset[0]

    def retract(x):
        return group.mul(x, group.inverse[right_rep[x]])

    def homog_sub(xs):
        # S-homogeneous cochain from the inhomogeneous f on S-elements
        h0 = sub_index[xs[0]]
        cell = []
        for a, b in zip(xs, xs[1:]):
            cell.append(sub_index[group.mul(group.inverse[a], b)])
        s_id = 0
        val = _full_value(f, tuple(cell), s_id, zero)
        return Hs.module.act(h0, val)

    left_reps = []
    seen = set()
    for x in range(group.n):
        coset = frozenset(group.mul(x, s) for s in embedding)
        if coset not in seen:
            seen.add(coset)
            left_reps.append(min(coset))

    H = cohomology_group(group, module, n)
    out = {}
    for cell in H.cells:
        # homogeneous point (1, g1, g1 g2, ...)
        pts = [group.identity]
        for g in cell:
            pts.append(group.mul(pts[-1], g))
        acc = zero
        for r in left_reps:
            rinv = group.inverse[r]
            xs = [retract(group.mul(rinv, p)) for p in pts]
            acc = module.add(acc, module.act(r, homog_sub(xs)))
        out[cell] = acc
    return CohomologyClass(H, H.class_of(out))


def conjugate_class(cls_sub, group, module, embedding, g):
    """c_g : H^n(S) -> H^n(g S g^-1), (c_g f)(h...) = g f(g^-1 h g, ...)."""
    Hs = cls_sub.group
    n = Hs.degree
    f = Hs.cocycle(cls_sub.coords)
    target = sorted(group.conjugate(g, s) for s in embedding)
    sub2, emb2 = group.subgroup(target)
    mod2 = module.restrict(emb2, sub2)
    H2 = cohomology_group(sub2, mod2, n)
    idx1 = {x: i for i, x in enumerate(embedding)}
    ginv = group.inverse[g]
    out = {}
    for cell in H2.cells:
        pre = tuple(idx1[group.conjugate(ginv, emb2[c])] for c in cell)
        out[cell] = module.act(g, _full_value(f, pre, 0, module.zero()))
    return CohomologyClass(H2, H2.class_of(out)), emb2


# --- Sylow and Zassenhaus ---------------------------------------------------

def sylow_cyclic_check(group):
    """True iff every Sylow subgroup is cyclic (an element of full p-power order exists)."""
    orders = [group.element_order(g) for g in range(group.n)]
    for p, a in factor_integer(group.n).items():
        target = p ** a
        if not any(o % target == 0 for o in orders):
            return False
    return True


def sylow_subgroup(group, p):
    """A Sylow p-subgroup; uses a cyclic one when available, else grows a p-subgroup."""
    a = factor_integer(group.n).get(p, 0)
    target = p ** a
    for g in range(group.n):
        if group.element_order(g) == target:
            return group.generated([g])
    current = (group.identity,)
    while len(current) < target:
        for g in range(group.n):
            if g in current:
                continue
            cand = group.generated(list(current) + [g])
            if len(cand) > len(current) and set(factor_integer(len(cand))) <= {p}:
                current = cand
                break
        else:
            break
    return current


def zassenhaus_decompose(group):
    """(A, B, witness) with A normal cyclic, B cyclic, coprime orders, AB = group.

    Canonical choice: prefer both factors nontrivial, then A with the most
    prime divisors, then the smallest generator index for A and for B.
    Returns None when some Sylow subgroup is not cyclic.
    """
    if not sylow_cyclic_check(group):
        return None
    n = group.n
    cyc = group.cyclic_subgroups
    by_order = {}
    for sub, gen in cyc:
        by_order.setdefault(len(sub), []).append((sub, gen))
    cands = []
    for sub, gen in cyc:
        a = len(sub)
        if n % a or gcd(a, n // a) != 1 or not group.is_normal(sub):
            continue
        bs = by_order.get(n // a, [])
        if not bs:
            continue
        bsub, bgen = min(bs, key=lambda t: t[1])
        both = a > 1 and n // a > 1
        cands.append(((not both, -len(factor_integer(a)), gen, bgen), sub, bsub, gen, bgen))
    if not cands:
        raise CohomologyError("no Zassenhaus decomposition found (internal error)")
    _, A, B, ga, gb = min(cands, key=lambda t: t[0])
    assert len(set(A) & set(B)) == 1
    return A, B, {"A_generator": ga, "B_generator": gb, "A_order": len(A), "B_order": len(B),
                  "A_normal": group.is_normal(A)}


# --- lemma checks -----------------------------------------------------------

def action_image_group(module):
    """Image of Gamma in Aut(Z) as a FiniteGroup."""
    g = module.group
    keys = []
    index = {}
    for x in range(g.n):
        k = tuple(tuple(v % d for v in row) for row, d in zip(module.matrices[x], module.factors))
        if k not in index:
            index[k] = len(keys)
            keys.append(x)
    key_of = {}
    for x in range(g.n):
        k = tuple(tuple(v % d for v in row) for row, d in zip(module.matrices[x], module.factors))
        key_of[x] = index[k]
    table = [[key_of[g.mul(a, b)] for b in keys] for a in keys]
    return FiniteGroup(table)


def cyclic_sylow_vanishing_check(group, module):
    """Every u in H^1 with zero restriction to all cyclic subgroups is zero."""
    if not sylow_cyclic_check(action_image_group(module)):
        raise CohomologyError("image of Gamma in Aut(Z) has a non-cyclic Sylow subgroup")
    H = cohomology_group(group, module, 1)
    subs = []
    for sub, gen in group.cyclic_subgroups:
        if len(sub) > 1:
            s, emb = group.subgroup(sub)
            subs.append((emb, cohomology_group(s, module.restrict(emb, s), 1)))
    counter = []
    checked = 0
    for coords in H.elements():
        f = H.cocycle(coords)
        vanish = True
        for emb, Hs in subs:
            fs = restrict_cochain(f, group, emb, 1, module.zero())
            if any(Hs.class_of(fs)):
                vanish = False
                break
        checked += 1
        if vanish and any(coords):
            counter.append({"coords": list(coords)})
    return not counter, {"h1": H.invariant_factors, "checked": checked, "counterexamples": counter}


def stable_elements_check(group, module, p, n):
    """Restriction to a Sylow p-subgroup is injective onto the stable elements."""
    if not module.is_p_local(p):
        raise CohomologyError("module is not p-local")
    if not sylow_cyclic_check(group):
        orders = [group.element_order(g) for g in range(group.n)]
        a = factor_integer(group.n).get(p, 0)
        if not any(o == p ** a for o in orders):
            raise CohomologyError("Sylow p-subgroup is not cyclic")
    S = sylow_subgroup(group, p)
    H = cohomology_group(group, module, n)
    sub, emb = group.subgroup(S)
    HS = cohomology_group(sub, module.restrict(emb, sub), n)
    # image of restriction
    image = {}
    for coords in H.elements():
        r = restriction(CohomologyClass(H, coords), S)
        image.setdefault(r.coords, []).append(coords)
    injective = all(len(v) == 1 for v in image.values())
    # Cartan-Eilenberg stable elements
    stable = []
    for coords in HS.elements():
        x = CohomologyClass(HS, coords)
        ok = True
        for g in range(group.n):
            conj, emb2 = conjugate_class(x, group, module, emb, g)
            inter = sorted(set(emb) & set(emb2))
            if len(inter) == 1:
                continue
            a = restriction_from(x, group, module, emb, inter)
            b = restriction_from(conj, group, module, emb2, inter)
            if a != b:
                ok = False
                break
        if ok:
            stable.append(coords)
    onto = sorted(image) == sorted(stable)
    return injective and onto, {"sylow_order": len(S), "H": H.invariant_factors,
                                "H_sylow": HS.invariant_factors, "stable": len(stable),
                                "image": len(image), "injective": injective}


def restriction_from(cls_sub, group, module, embedding, target_elements):
    """Restrict a class on the subgroup ``embedding`` to a smaller subgroup."""
    Hs = cls_sub.group
    idx = {x: i for i, x in enumerate(embedding)}
    inner = [idx[x] for x in target_elements]
    sub2, emb2 = Hs.group.subgroup(inner)
    H2 = cohomology_group(sub2, Hs.module.restrict(emb2, sub2), Hs.degree)
    f = restrict_cochain(Hs.cocycle(cls_sub.coords), Hs.group, emb2, Hs.degree, Hs.module.zero())
    return H2.class_of(f)


# --- extensions -------------------------------------------------------------

def extension_automorphisms(group, module, coords):
    """Automorphisms of the extension E_f inducing the identity on Z and Gamma,
    modulo conjugation by Z, found by direct enumeration on E."""
    H2 = cohomology_group(group, module, 2)
    f = H2.cocycle(coords)
    zero = module.zero()
    e = group.identity

    def fval(g, h):
        return zero if e in (g, h) else f[(g, h)]

    elems_z = module.elements()
    E = [(a, g) for g in range(group.n) for a in elems_z]
    index = {x: i for i, x in enumerate(E)}

    def mul(x, y):
        (a, g), (b, h) = x, y
        return (module.add(module.add(a, module.act(g, b)), fval(g, h)), group.mul(g, h))

    table = [[index[mul(x, y)] for y in E] for x in E]
    nonid = [g for g in range(group.n) if g != e]
    count = len(elems_z) ** len(nonid)
    if count > budget():
        raise CohomologyError("budget exceeded: too many candidate maps")
    autos = []
    for values in itertools.product(elems_z, repeat=len(nonid)):
        u = dict(zip(nonid, values))
        u[e] = zero
        img = [index[(module.add(a, u[g]), g)] for (a, g) in E]
        if all(img[table[i][j]] == table[img[i]][img[j]] for i in range(len(E)) for j in range(len(E))):
            autos.append(tuple(u[g] for g in range(group.n)))
    inner = set()
    for z in elems_z:
        zi = index[(z, e)]
        zinv = next(j for j in range(len(E)) if table[zi][j] == index[(zero, e)])
        u = []
        for g in range(group.n):
            x = index[(zero, g)]
            conj = E[table[table[zi][x]][zinv]]
            u.append(conj[0])
        inner.add(tuple(u))
    H1 = cohomology_group(group, module, 1)
    order = len(autos) // len(inner)
    if order != H1.order:
        raise CohomologyError("automorphism count disagrees with |H^1| (internal error)")
    return {"order": order, "automorphisms": len(autos), "inner_by_Z": len(inner),
            "h1": H1.invariant_factors, "extension_order": len(E)}
