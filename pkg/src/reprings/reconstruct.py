"""Truncated lambda-semiring presentations and isomorphism search.

A presentation records, for the irreducibles whose highest weights lie in a
box, the decomposition of every pairwise product, of low exterior powers and
of low Adams operations.  Constituents falling outside the box are dropped
from the recorded decomposition and the entry is flagged as escaped.
"""

import itertools
from dataclasses import dataclass, field

from .characters import budget, decompose, irreducible_character, weyl_dimension
from .lambdaring import adams, exterior_powers
from .rootdata import RootDatum, act_on_fundamental_group
from .twisted import (DisconnectedGroup, IrrepLabel, decompose_group_character, group_adams,
                      group_exterior_powers, label_character, phi_automorphism,
                      semidirect_irreducibles, bounded_weights)


class ReconstructError(ValueError):
    pass


@dataclass(frozen=True)
class Entry:
    decomposition: tuple     # sorted ((label, mult), ...) of in-bound constituents
    escaped: bool

    def as_dict(self):
        return dict(self.decomposition)

    def to_json(self):
        return {"decomposition": [[l, m] for l, m in self.decomposition], "escaped": self.escaped}

    @staticmethod
    def from_json(obj):
        return Entry(tuple(sorted((l, int(m)) for l, m in obj["decomposition"])),
                     bool(obj["escaped"]))


def _entry(pairs, labels):
    inside, esc = {}, False
    for lab, m in pairs:
        if not m:
            continue
        if lab in labels:
            inside[lab] = inside.get(lab, 0) + m
        else:
            esc = True
    return Entry(tuple(sorted((l, m) for l, m in inside.items() if m)), esc)


@dataclass
class LambdaSemiringPresentation:
    labels: list
    dims: dict
    bound: int
    unit: str
    products: dict                       # (a, b) with index(a) <= index(b) -> Entry
    lambdas: dict = field(default_factory=dict)   # (k, label) -> Entry
    adams: dict = field(default_factory=dict)     # (n, label) -> Entry
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {l: i for i, l in enumerate(self.labels)}
        if self.unit not in self.index:
            raise ReconstructError("unit label missing")

    def product(self, a, b):
        if self.index[a] > self.index[b]:
            a, b = b, a
        return self.products[(a, b)]

    def validate(self):
        for (a, b), e in self.products.items():
            if (b, a) in self.products and self.products[(b, a)] != e:
                raise ReconstructError("product table is not symmetric")
            if not e.escaped:
                total = sum(self.dims[l] * m for l, m in e.decomposition)
                if total != self.dims[a] * self.dims[b]:
                    raise ReconstructError(f"dimension mismatch for {a}*{b}")
        return True

    def to_json(self):
        return {
            "bound": self.bound,
            "unit": self.unit,
            "labels": list(self.labels),
            "dims": {l: self.dims[l] for l in self.labels},
            "products": {f"{a}*{b}": e.to_json() for (a, b), e in sorted(
                self.products.items(), key=lambda t: (self.index[t[0][0]], self.index[t[0][1]]))},
            "lambda": {f"lambda:{k}:{l}": e.to_json() for (k, l), e in sorted(
                self.lambdas.items(), key=lambda t: (t[0][0], self.index[t[0][1]]))},
            "adams": {f"psi:{n}:{l}": e.to_json() for (n, l), e in sorted(
                self.adams.items(), key=lambda t: (t[0][0], self.index[t[0][1]]))},
            "meta": self.meta,
        }

    @staticmethod
    def from_json(obj):
        labels = list(obj["labels"])
        products = {}
        for key, e in obj.get("products", {}).items():
            a, b = _split_product_key(key, labels)
            products[(a, b)] = Entry.from_json(e)
        lambdas = {}
        for key, e in obj.get("lambda", {}).items():
            _, k, lab = key.split(":", 2)
            lambdas[(int(k), lab)] = Entry.from_json(e)
        adams_t = {}
        for key, e in obj.get("adams", {}).items():
            _, n, lab = key.split(":", 2)
            adams_t[(int(n), lab)] = Entry.from_json(e)
        p = LambdaSemiringPresentation(labels, {l: int(d) for l, d in obj["dims"].items()},
                                       int(obj["bound"]), obj.get("unit", labels[0]), products,
                                       lambdas, adams_t, obj.get("meta", {}))
        p.validate()
        return p


def _split_product_key(key, labels):
    for a in labels:
        if key.startswith(a + "*") and key[len(a) + 1:] in labels:
            return a, key[len(a) + 1:]
    raise ReconstructError(f"bad product key {key!r}")


# --- building presentations -------------------------------------------------

def _conn_label(w):
    return f"V({','.join(map(str, w))})"


def build_presentation(group, bound, k_max=2, adams_ns=(2, 3), classes=None):
    """Presentation of a connected group (RootDatum, optionally restricted to
    the P/Q classes of a quotient) or of Z/2 x| G."""
    if bound < 0:
        raise ReconstructError("bound must be nonnegative")
    if isinstance(group, RootDatum):
        return _connected_presentation(group, bound, k_max, adams_ns, classes)
    if isinstance(group, DisconnectedGroup):
        if group.order == 1:
            return _connected_presentation(group.datum, bound, k_max, adams_ns, group.classes)
        if group.order != 2:
            raise ReconstructError("unsupported shape: |Gamma| must be 1 or 2")
        return _disconnected_presentation(group, bound, k_max, adams_ns)
    raise ReconstructError("unsupported shape")


def _connected_presentation(datum, bound, k_max, adams_ns, classes):
    fg = datum.fundamental_group
    allowed = None if classes is None else {tuple(c) for c in classes}
    weights = [w for w in bounded_weights(datum, bound)
               if allowed is None or fg.coords(w) in allowed]
    weights.sort(key=lambda w: (weyl_dimension(datum, w), w))
    labels = [_conn_label(w) for w in weights]
    labset = set(labels)
    chars = {w: irreducible_character(datum, w) for w in weights}
    _check_size(len(weights))

    def dec(x):
        return _entry([(_conn_label(w), m) for w, m in decompose(x)], labset)

    products = {}
    for i, a in enumerate(weights):
        for b in weights[i:]:
            products[(_conn_label(a), _conn_label(b))] = dec(chars[a] * chars[b])
    lambdas, adams_t = {}, {}
    for w in weights:
        if k_max >= 2:
            lams = exterior_powers(chars[w], k_max)
            for k in range(2, k_max + 1):
                lambdas[(k, _conn_label(w))] = dec(lams[k])
        for n in adams_ns:
            adams_t[(n, _conn_label(w))] = dec(adams(chars[w], n))
    meta = {"source": datum.diagram.type_string(), "kind": "connected"}
    if allowed is not None:
        meta["classes"] = sorted(list(c) for c in allowed)
    p = LambdaSemiringPresentation(labels, {_conn_label(w): weyl_dimension(datum, w) for w in weights},
                                   bound, _conn_label(tuple([0] * datum.rank)), products,
                                   lambdas, adams_t, meta)
    p.validate()
    return p


def _disconnected_presentation(group, bound, k_max, adams_ns):
    labs = semidirect_irreducibles(group, bound)
    _check_size(len(labs))
    names = [str(l) for l in labs]
    labset = set(names)
    chars = {l: label_character(group, l) for l in labs}

    def dec(x):
        return _entry([(str(l), m) for l, m in decompose_group_character(group, x)], labset)

    products = {}
    for i, a in enumerate(labs):
        for b in labs[i:]:
            products[(str(a), str(b))] = dec(chars[a] * chars[b])
    lambdas, adams_t = {}, {}
    for l in labs:
        if k_max >= 2:
            lams = group_exterior_powers(group, chars[l], k_max)
            for k in range(2, k_max + 1):
                lambdas[(k, str(l))] = dec(lams[k])
        for n in adams_ns:
            adams_t[(n, str(l))] = dec(group_adams(group, chars[l], n))
    unit = str(IrrepLabel("ext", (tuple([0] * group.datum.rank),), 0, 2))
    meta = {"source": group.datum.diagram.type_string(), "kind": "semidirect",
            "sigma": list(group.sigma.perm), "gamma_order": group.order}
    p = LambdaSemiringPresentation(names, {str(l): group.dimension(l) for l in labs}, bound, unit,
                                   products, lambdas, adams_t, meta)
    p.validate()
    return p


def _check_size(n):
    if n * n > budget():
        raise ReconstructError("budget exceeded: too many labels")


# --- normal subsemirings ----------------------------------------------------

@dataclass(frozen=True)
class Subsemiring:
    labels: tuple
    provisional: bool    # closure used an escaped product

    def to_json(self):
        return {"labels": list(self.labels), "provisional": self.provisional}


def normal_subsemirings(p):
    """Label subsets containing the unit and closed under products and lambda.

    Closure is tested on the in-bound part of each entry.  Subsets whose
    closure depends on escaped products are returned with provisional=True
    and a warning, since constituents beyond the bound were not seen.
    """
    others = [l for l in p.labels if l != p.unit]
    if 2 ** len(others) > budget():
        raise ReconstructError("budget exceeded: too many candidate subsets")
    out, warnings = [], []
    for size in range(len(others) + 1):
        for combo in itertools.combinations(others, size):
            s = (p.unit,) + combo
            ss = set(s)
            closed, esc = True, False
            for i, a in enumerate(s):
                for b in s[i:]:
                    e = p.product(a, b)
                    if any(m > 0 and l not in ss for l, m in e.decomposition):
                        closed = False
                        break
                    esc = esc or e.escaped
                if not closed:
                    break
            if closed:
                for (k, l), e in p.lambdas.items():
                    if l in ss and any(m > 0 and c not in ss for c, m in e.decomposition):
                        closed = False
                        break
            if closed:
                s_sorted = tuple(sorted(s, key=p.index.get))
                out.append(Subsemiring(s_sorted, esc))
                if esc and 0 < size < len(others):
                    warnings.append(f"subset {{{', '.join(s_sorted)}}} is provisional: "
                                    f"some products escape bound {p.bound}")
    return out, warnings


def subtable(p, labels):
    """Product entries among ``labels`` (for round-trip comparison)."""
    s = set(labels)
    out = {}
    for (a, b), e in p.products.items():
        if a in s and b in s:
            out[tuple(sorted((a, b)))] = e
    return out


def roundtrip_check(p, subset, q):
    """Compare the sub-table of ``p`` on ``subset`` with presentation ``q``."""
    if set(subset) != set(q.labels):
        return False
    return subtable(p, subset) == subtable(q, q.labels)


# --- isomorphism search -----------------------------------------------------

def _map_entry(f, e):
    return Entry(tuple(sorted((f[l], m) for l, m in e.decomposition)), e.escaped)


def _entry_mapped(f, e):
    return all(l in f for l, _ in e.decomposition)


def find_isomorphisms(p1, p2, require_lambda=False, require_adams=False):
    """All label bijections p1 -> p2 preserving unit, dimensions and products
    (and lambda / Adams tables when requested).  Escaped entries only match
    escaped entries with the same in-bound part."""
    if p1.bound != p2.bound:
        raise ReconstructError("presentations have different truncation bounds")
    if sorted(p1.dims.values()) != sorted(p2.dims.values()) or len(p1.labels) != len(p2.labels):
        return []
    if p1.dims[p1.unit] != 1 or p2.dims[p2.unit] != 1:
        return []
    if require_lambda and set(k for k, _ in p1.lambdas) != set(k for k, _ in p2.lambdas):
        raise ReconstructError("lambda tables have different degrees")
    order = [p1.unit] + [l for l in p1.labels if l != p1.unit]
    cands = {l: [m for m in p2.labels if p2.dims[m] == p1.dims[l]] for l in order}
    cands[p1.unit] = [p2.unit]
    lam_by_label = {}
    for (k, l), e in p1.lambdas.items():
        lam_by_label.setdefault(l, []).append(k)
    ad_by_label = {}
    for (n, l), e in p1.adams.items():
        ad_by_label.setdefault(l, []).append(n)

    results = []
    f, used = {}, set()
    steps = [0]
    limit = budget()

    def consistent(new):
        for a in list(f):
            e1 = p1.product(new, a)
            if _entry_mapped(f, e1) and _map_entry(f, e1) != p2.product(f[new], f[a]):
                return False
        # entries involving earlier labels whose constituents just became mapped
        for (a, b), e1 in p1.products.items():
            if a in f and b in f and new in dict(e1.decomposition) and _entry_mapped(f, e1):
                if _map_entry(f, e1) != p2.product(f[a], f[b]):
                    return False
        tables = []
        if require_lambda:
            tables.append((p1.lambdas, p2.lambdas))
        if require_adams:
            tables.append((p1.adams, p2.adams))
        for t1, t2 in tables:
            for (k, l), e1 in t1.items():
                if l in f and (l == new or new in dict(e1.decomposition)) and _entry_mapped(f, e1):
                    e2 = t2.get((k, f[l]))
                    if e2 is None or _map_entry(f, e1) != e2:
                        return False
        return True

    def rec(i):
        steps[0] += 1
        if steps[0] > limit:
            raise ReconstructError("budget exceeded in isomorphism search")
        if i == len(order):
            results.append(dict(f))
            return
        l = order[i]
        for m in cands[l]:
            if m in used:
                continue
            f[l] = m
            used.add(m)
            if consistent(l):
                rec(i + 1)
            del f[l]
            used.discard(m)

    rec(0)
    return results


def commutes_with_adams(p1, p2, f, ns=(2, 3)):
    for (n, l), e1 in p1.adams.items():
        if n in ns:
            e2 = p2.adams.get((n, f[l]))
            if e2 is None or _map_entry(f, e1) != e2:
                return False
    return True


def phi_bijection(p, n=1):
    """The map phi on the labels of a Z/2 x| SL(2n+1) presentation."""
    from .twisted import parse_label
    phi = phi_automorphism(n)
    return {l: str(phi(parse_label(l))) for l in p.labels}


# --- open-subgroup functor data ---------------------------------------------

@dataclass
class OpenSubgroupFunctorData:
    gamma_order: int
    subgroups: list                  # element tuples of Gamma = Z/m
    presentations: dict              # subgroup -> presentation
    restrictions: dict               # (U, V) -> {label: Entry}
    conjugations: dict               # (g, U) -> {label: label}
    meta: dict = field(default_factory=dict)

    def to_json(self):
        def key(u):
            return ",".join(map(str, u))
        return {
            "gamma_order": self.gamma_order,
            "subgroups": [list(u) for u in self.subgroups],
            "presentations": {key(u): p.to_json() for u, p in self.presentations.items()},
            "maps": {
                **{f"res:{key(u)}>{key(v)}": {l: e.to_json() for l, e in m.items()}
                   for (u, v), m in self.restrictions.items()},
                **{f"conj:{g}:{key(u)}": m for (g, u), m in self.conjugations.items()},
            },
            "meta": self.meta,
        }


def build_functor_data(group, bound, k_max=2, adams_ns=(2, 3), sigma_for_conjugation=None):
    """Functor data over the subgroups {e, Gamma} of Gamma = Z/2 (or Gamma = 1)."""
    if isinstance(group, RootDatum):
        p = build_presentation(group, bound, k_max, adams_ns)
        u = (0,)
        return OpenSubgroupFunctorData(1, [u], {u: p}, {},
                                       {(0, u): {l: l for l in p.labels}},
                                       {"source": p.meta})
    if group.order != 2:
        raise ReconstructError("unsupported shape: |Gamma| must be 1 or 2")
    e, full = (0,), (0, 1)
    pe = build_presentation(group.datum, bound, k_max, adams_ns, classes=group.classes)
    pg = build_presentation(group, bound, k_max, adams_ns)
    from .twisted import parse_label
    res = {}
    labset = set(pe.labels)
    for l in pg.labels:
        lab = parse_label(l)
        res[l] = _entry([(_conn_label(w), 1) for w in lab.weights], labset)
    sigma = group.sigma
    conj_e = {}
    for l in pe.labels:
        w = tuple(int(x) for x in l[2:-1].split(",")) if l != "V()" else ()
        conj_e[l] = _conn_label(sigma.act(w))
    conjugations = {(0, e): {l: l for l in pe.labels}, (1, e): conj_e,
                    (0, full): {l: l for l in pg.labels}, (1, full): {l: l for l in pg.labels}}
    return OpenSubgroupFunctorData(2, [e, full], {e: pe, full: pg}, {(full, e): res},
                                   conjugations, {"sigma": list(sigma.perm)})


@dataclass(frozen=True)
class FamilyClass:
    representative: tuple     # ((subgroup, ((label, label), ...)), ...)
    size: int

    def to_json(self):
        return {"representative": {",".join(map(str, u)): dict(f) for u, f in self.representative},
                "size": self.size}


def functor_isomorphisms(f1, f2, require_lambda=False):
    """Compatible families of per-subgroup isomorphisms, up to conjugation by Gamma.

    Each member isomorphism must also preserve the Adams tables.  Families
    must commute with restriction and conjugation maps.
    """
    if f1.gamma_order != f2.gamma_order or f1.subgroups != f2.subgroups:
        raise ReconstructError("functor data have different Gamma")
    per = []
    for u in f1.subgroups:
        per.append(find_isomorphisms(f1.presentations[u], f2.presentations[u],
                                     require_lambda=require_lambda, require_adams=True))
    families = []
    for combo in itertools.product(*per):
        fam = dict(zip(f1.subgroups, combo))
        if _compatible(f1, f2, fam):
            families.append(fam)
    classes = {}
    for fam in families:
        orbit = [_freeze(_conjugate_family(f2, fam, g)) for g in range(f1.gamma_order)]
        rep = min(orbit)
        classes.setdefault(rep, set()).add(_freeze(fam))
    return [FamilyClass(rep, len(members)) for rep, members in sorted(classes.items())]


def _freeze(fam):
    return tuple((u, tuple(sorted(f.items()))) for u, f in sorted(fam.items()))


def _conjugate_family(f2, fam, g):
    return {u: {l: f2.conjugations[(g, u)][m] for l, m in f.items()} for u, f in fam.items()}


def _compatible(f1, f2, fam):
    for (u, v), m1 in f1.restrictions.items():
        m2 = f2.restrictions[(u, v)]
        fu, fv = fam[u], fam[v]
        for l, e1 in m1.items():
            if _map_entry(fv, e1) != m2[fu[l]]:
                return False
    for (g, u), c1 in f1.conjugations.items():
        c2 = f2.conjugations[(g, u)]
        fu = fam[u]
        for l, m in c1.items():
            if fu[m] != c2[fu[l]]:
                return False
    return True


# --- component data ---------------------------------------------------------

@dataclass
class ComponentData:
    """(Gamma, Delta, Z, nu) for Gamma = Z/m acting through a diagram automorphism."""
    datum: RootDatum
    sigma: object
    gamma_order: int
    extension_class: tuple = ()

    def center_module(self):
        from .cohomology import GModule, cyclic_group
        gamma = cyclic_group(self.gamma_order)
        fg = self.datum.fundamental_group
        r = len(fg.factors)
        basis = [tuple(int(i == j) for i in range(r)) for j in range(r)]
        # sigma on P/Q, then dualised to the center Hom(P/Q, Q/Z)
        s_inv = self.sigma.power(self.sigma.order - 1)
        n_mat = [[0] * r for _ in range(r)]
        for k, b in enumerate(basis):
            img = act_on_fundamental_group(self.datum, s_inv, b)
            for j in range(r):
                n_mat[j][k] = img[j]
        dual = [[(n_mat[j][k] * fg.factors[k] // fg.factors[j]) % fg.factors[k]
                 for j in range(r)] for k in range(r)]
        mats = []
        cur = [[int(i == j) for j in range(r)] for i in range(r)]
        for _ in range(self.gamma_order):
            mats.append(cur)
            cur = [[sum(dual[i][k] * cur[k][j] for k in range(r)) % fg.factors[i]
                    for j in range(r)] for i in range(r)]
        return GModule(gamma, fg.factors, mats)

    def preflight(self):
        """H^2(Gamma, Z) and whether the recorded class is trivial."""
        from .cohomology import cohomology_group
        mod = self.center_module()
        h2 = cohomology_group(mod.group, mod, 2)
        cls = tuple(self.extension_class) or tuple([0] * len(h2.elementary_divisors))
        if len(cls) != len(h2.elementary_divisors):
            raise ReconstructError("extension class has the wrong number of coordinates")
        return {"center": list(mod.factors), "H2": h2.invariant_factors,
                "class_trivial": not any(c % d for c, d in zip(cls, h2.elementary_divisors))}
