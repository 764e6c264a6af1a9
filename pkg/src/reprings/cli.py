"""Command-line front end.

Every subcommand prints a result object {"status", "payload", "diagnostics"}.
JSON output uses sorted keys so repeated runs are byte-identical.
"""

import argparse
import json
import sys

from . import cohomology as coh
from . import reconstruct as rec
from . import twisted as tw
from .characters import (FormalCharacter, CharacterError, decompose, irreducible_character,
                         parse_weight, prv_multiplicity_check, weyl_dimension)
from .lambdaring import adams, exterior_power, lambda_table, lambda_table_json
from .rootdata import (DiagramAutomorphism, RootDataError, build_root_datum, fold_diagram,
                       minuscule_lift, named_automorphism, orbit_epsilon_product)

PAYLOAD_VERSION = 1
DOMAIN_ERRORS = (RootDataError, CharacterError, tw.TwistedError, coh.CohomologyError,
                 rec.ReconstructError, ValueError, KeyError, OverflowError)


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else _key(k)): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return _jsonable(x.to_json())
    return x


def _key(k):
    if isinstance(k, tuple):
        return ",".join(_key(v) for v in k)
    return str(k)


def _weights(dec):
    return [{"weight": list(w), "mult": m} for w, m in dec]


# --- argument helpers -------------------------------------------------------

def _datum(args):
    if not args.type:
        raise UsageError("--type is required")
    return build_root_datum(args.type)


def _sigma(datum, text):
    if text is None:
        raise UsageError("--sigma is required")
    return named_automorphism(datum, text)


def _weight(datum, text, name="--weight"):
    if text is None:
        raise UsageError(f"{name} is required")
    return parse_weight(text, datum.rank)


def _read_in(args):
    if not args.input:
        return None
    with open(args.input) as fh:
        return json.load(fh)


def _named_group(name):
    name = name.strip()
    fixed = {"S3": lambda: coh.symmetric_group(3), "S4": lambda: coh.symmetric_group(4),
             "A4": lambda: coh.alternating_group(4), "A5": lambda: coh.alternating_group(5),
             "Q8": coh.quaternion_group, "SL(2,3)": coh.sl23}
    if name in fixed:
        return fixed[name]()
    for prefix, fn in (("Dic", coh.dicyclic_group), ("Z", coh.cyclic_group), ("D", coh.dihedral_group)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return fn(int(name[len(prefix):]))
    if ":" in name and name.startswith("Z"):
        p, q = name.split(":")
        return coh.metacyclic_group(int(p[1:]), int(q[1:]))
    raise UsageError(f"unknown group {name!r}")


def _group_and_module(args, need_module=True):
    data = _read_in(args)
    if data is not None:
        group = coh.group_from_json(data["group"] if "group" in data else data)
        module = coh.module_from_json(group, data["module"]) if "module" in data else None
    else:
        if not args.group:
            raise UsageError("--group or --in is required")
        group = _named_group(args.group)
        module = _named_module(group, args.module) if args.module else None
    if need_module and module is None:
        raise UsageError("a module is required (--module or 'module' in --in)")
    return group, module


def _named_module(group, text):
    kind, _, arg = text.partition(":")
    if kind == "trivial":
        return coh.trivial_module(group, [int(x) for x in arg.split(",")])
    if kind == "perm-quotient":
        return coh.permutation_quotient_module(group, int(arg))
    if kind == "sign":
        if group.perms is None:
            raise UsageError("sign module needs a permutation group")
        return coh.sign_module(group, int(arg), lambda g: coh.permutation_sign(group.perms[g]))
    raise UsageError(f"unknown module {text!r}")


def _ints(text):
    return tuple(int(x) for x in text.split(",")) if text else ()


def _disconnected(args):
    d = _datum(args)
    if args.sigma is None:
        return d
    return tw.DisconnectedGroup(d, _sigma(d, args.sigma))


def _presentation(args, second=False):
    data = _read_in(args) if not second else None
    if data is not None:
        return rec.LambdaSemiringPresentation.from_json(data)
    if second:
        t, s = args.type2, args.sigma2
        d = build_root_datum(t)
        g = d if s is None else tw.DisconnectedGroup(d, named_automorphism(d, s), order=2)
    else:
        g = _disconnected(args)
    return rec.build_presentation(g, args.bound, k_max=args.k_max)


# --- handlers ---------------------------------------------------------------

def cmd_char(args):
    d = _datum(args)
    w = _weight(d, args.weight)
    chi = irreducible_character(d, w)
    return {"type": d.diagram.type_string(), "weight": list(w), "dimension": chi.dimension(),
            "weyl_dimension": weyl_dimension(d, w), "terms": chi.to_json()}


def cmd_tensor(args):
    d = _datum(args)
    a = _weight(d, args.weight)
    b = _weight(d, args.other, "--other")
    prod = irreducible_character(d, a) * irreducible_character(d, b)
    out = {"type": d.diagram.type_string(), "left": list(a), "right": list(b),
           "decomposition": _weights(decompose(prod)), "dimension": prod.dimension()}
    if args.eta:
        eta = parse_weight(args.eta, d.rank)
        tens, pbw, eq = prv_multiplicity_check(d, a, b, eta)
        out["prv"] = {"eta": list(eta), "tensor_multiplicity": tens, "pbw_count": pbw, "equal": eq}
    return out


def cmd_decompose(args):
    d = _datum(args)
    data = _read_in(args)
    if data is not None:
        terms = {tuple(t["weight"]): t["mult"] for t in data}
    elif args.char:
        terms = {}
        for part in args.char.split(";"):
            w, _, m = part.partition(":")
            terms[parse_weight(w, d.rank)] = int(m or 1)
    else:
        raise UsageError("--char or --in is required")
    x = FormalCharacter(d, terms)
    return {"type": d.diagram.type_string(), "decomposition": _weights(decompose(x))}


def cmd_lambda(args):
    d = _datum(args)
    if args.weight is not None:
        w = _weight(d, args.weight)
        x = exterior_power(irreducible_character(d, w), args.k)
        return {"type": d.diagram.type_string(), "weight": list(w), "k": args.k,
                "dimension": x.dimension(), "decomposition": _weights(decompose(x))}
    entries = lambda_table(d, args.bound, args.k_max, args.n_max)
    return {"type": d.diagram.type_string(), "bound": args.bound, "table": lambda_table_json(entries)}


def cmd_adams(args):
    d = _datum(args)
    w = _weight(d, args.weight)
    x = adams(irreducible_character(d, w), args.n)
    return {"type": d.diagram.type_string(), "weight": list(w), "n": args.n,
            "decomposition": _weights(decompose(x))}


def cmd_fold(args):
    d = _datum(args)
    s = _sigma(d, args.sigma)
    f = fold_diagram(d, s)
    return {"source": f.source, "sigma": s.to_json(), "fixed_type": f.fixed_type,
            "dual_type": f.dual_type, "orbits": [[i + 1 for i in o] for o in f.orbits],
            "folded_cartan": [list(r) for r in f.folded_cartan],
            "vertex_map": [v + 1 for v in f.vertex_map]}


def cmd_minuscule(args):
    d = _datum(args)
    fg = d.fundamental_group
    stab = [named_automorphism(d, s) for s in (args.stab or [])]
    classes = [_ints(args.cls)] if args.cls is not None else fg.elements()
    out = []
    for c in classes:
        w = minuscule_lift(d, c, stab)
        out.append({"class": list(c), "weight": list(w)})
    return {"type": d.diagram.type_string(), "fundamental_group": list(fg.factors), "lifts": out}


def cmd_epsilon_product(args):
    d = _datum(args)
    s = _sigma(d, args.sigma)
    if args.vertex is None:
        raise UsageError("--vertex is required")
    e = orbit_epsilon_product(d, s, args.vertex - 1)
    return {"type": d.diagram.type_string(), "sigma": s.to_json(), "vertex": args.vertex,
            "element": e.to_json(), "trivial": e.is_trivial()}


def cmd_twining(args):
    d = _datum(args)
    s = _sigma(d, args.sigma)
    w = _weight(d, args.weight)
    f = tw.twining_character(d, s, w)
    return {"type": d.diagram.type_string(), "sigma": s.to_json(), "weight": list(w),
            "value_at_identity": f.value_at_identity(), "terms": f.to_json()}


def cmd_jantzen_check(args):
    d = _datum(args)
    s = _sigma(d, args.sigma)
    if args.weight is not None:
        weights = [_weight(d, args.weight)]
    else:
        weights = [w for w in tw.bounded_weights(d, args.bound) if s.act(w) == w]
    results = [{"weight": list(w), "ok": tw.jantzen_check(d, s, w)} for w in weights]
    return {"type": d.diagram.type_string(), "sigma": s.to_json(),
            "ok": all(r["ok"] for r in results), "results": results}


def cmd_mohrdieck(args):
    d = _datum(args)
    s = _sigma(d, args.sigma)
    gens, cert = tw.mohrdieck_invariants(d, s, args.degree)
    return {"type": d.diagram.type_string(), "sigma": s.to_json(), "ok": True,
            "generators": [g.to_json() for g in gens],
            "certificate": {_key(k): [{"exponent": list(e), "coeff": c} for e, c in sorted(v.items())]
                            for k, v in sorted(cert.items())}}


def cmd_semidirect_irreps(args):
    g = _disconnected(args)
    if isinstance(g, tw.DisconnectedGroup):
        labels = tw.semidirect_irreducibles(g, args.bound)
        dims = [g.dimension(l) for l in labels]
    else:
        g = tw.DisconnectedGroup(g, DiagramAutomorphism(tuple(range(g.rank))), order=1)
        labels = tw.semidirect_irreducibles(g, args.bound)
        dims = [weyl_dimension(g.datum, l.weights[0]) for l in labels]
    return {"labels": [{"label": str(l), "dimension": n} for l, n in zip(labels, dims)]}


def cmd_phi(args):
    g = tw.phi_group(args.n)
    phi = tw.phi_automorphism(args.n)
    if args.label:
        labels = [tw.parse_label(args.label)]
    else:
        labels = tw.semidirect_irreducibles(g, args.bound)
    return {"n": args.n, "map": {str(l): str(phi(l)) for l in labels}}


def cmd_phi_semiring_check(args):
    ok, cert = tw.check_phi_semiring(args.n, args.bound)
    return {"n": args.n, "bound": args.bound, "ok": ok, "pairs_checked": len(cert["pairs"]),
            "witnesses": cert["witnesses"]}


def cmd_phi_adams_check(args):
    found, cert = tw.check_phi_adams(args.n, bound=args.bound)
    return {"n": args.n, "ok": found, **cert}


def cmd_no_kernel_check(args):
    d = _datum(args)
    s = _sigma(d, args.sigma)
    ok, info = tw.no_kernel_check(d, s, args.degree)
    return {"type": d.diagram.type_string(), "sigma": s.to_json(), "ok": ok,
            **{k: [list(x) for x in v] for k, v in info.items()}}


def cmd_w0_check(args):
    if not args.type:
        raise UsageError("--type is required")
    ok, info = tw.w0_square_check(tw.matrix_model(args.type))
    return {"type": args.type, "ok": ok, **info}


def cmd_cohomology(args):
    g, m = _group_and_module(args)
    h = coh.cohomology_group(g, m, args.degree)
    out = h.to_json()
    if args.cocycles:
        out["cocycles"] = [{_key(c): list(v) for c, v in f.items()} for f in h.generator_cocycles]
    return out


def cmd_restrict(args):
    g, m = _group_and_module(args)
    h = coh.cohomology_group(g, m, args.degree)
    coords = _ints(args.cls) if args.cls is not None else tuple([0] * len(h.elementary_divisors))
    if len(coords) != len(h.elementary_divisors):
        raise coh.CohomologyError("class has the wrong number of coordinates")
    sub = list(_ints(args.subgroup))
    r = coh.restriction(coh.CohomologyClass(h, coords), sub)
    return {"degree": args.degree, "class": list(coords), "subgroup": sub,
            "restricted": list(r.coords), "target": r.group.to_json(), "zero": r.is_zero()}


def cmd_sylow_cyclic(args):
    g, _ = _group_and_module(args, need_module=False)
    return {"order": g.n, "sylow_cyclic": coh.sylow_cyclic_check(g)}


def cmd_zassenhaus(args):
    g, _ = _group_and_module(args, need_module=False)
    res = coh.zassenhaus_decompose(g)
    if res is None:
        return {"order": g.n, "ok": False}
    a, b, wit = res
    return {"order": g.n, "ok": True, "A": list(a), "B": list(b), "witness": wit}


def cmd_h1_vanishing_check(args):
    g, m = _group_and_module(args)
    ok, info = coh.cyclic_sylow_vanishing_check(g, m)
    return {"ok": ok, **info}


def cmd_stable_elements_check(args):
    g, m = _group_and_module(args)
    ok, info = coh.stable_elements_check(g, m, args.p, args.degree)
    return {"ok": ok, **info}


def cmd_ext_autos(args):
    g, m = _group_and_module(args)
    h2 = coh.cohomology_group(g, m, 2)
    coords = _ints(args.cls) if args.cls is not None else tuple([0] * len(h2.elementary_divisors))
    info = coh.extension_automorphisms(g, m, coords)
    return {"class": list(coords), **info}


def cmd_presentation(args):
    return _presentation(args).to_json()


def cmd_subsemirings(args):
    p = _presentation(args)
    subs, warnings = rec.normal_subsemirings(p)
    return {"bound": p.bound, "subsets": [s.to_json() for s in subs], "_warnings": warnings}


def cmd_isomorphisms(args):
    p1 = _presentation(args)
    if args.input2:
        with open(args.input2) as fh:
            p2 = rec.LambdaSemiringPresentation.from_json(json.load(fh))
    elif args.type2:
        p2 = _presentation(args, second=True)
    else:
        p2 = p1
    isos = rec.find_isomorphisms(p1, p2, require_lambda=args.require_lambda)
    return {"bound": p1.bound, "require_lambda": args.require_lambda, "count": len(isos),
            "isomorphisms": isos}


def cmd_functor_isomorphisms(args):
    g1 = _disconnected(args)
    f1 = rec.build_functor_data(g1, args.bound, k_max=args.k_max)
    if args.control_identity:
        d = _datum(args)
        g2 = tw.DisconnectedGroup(d, DiagramAutomorphism(tuple(range(d.rank))), order=2)
        f2 = rec.build_functor_data(g2, args.bound, k_max=args.k_max)
    else:
        f2 = f1
    classes = rec.functor_isomorphisms(f1, f2, require_lambda=args.require_lambda)
    return {"bound": args.bound, "require_lambda": args.require_lambda,
            "classes": len(classes), "families": [c.to_json() for c in classes]}


COMMANDS = {
    "char": (cmd_char, "irreducible character"),
    "tensor": (cmd_tensor, "tensor product decomposition (optional PRV check)"),
    "decompose": (cmd_decompose, "decompose a Weyl-invariant character"),
    "lambda": (cmd_lambda, "exterior powers or the lambda/psi table"),
    "adams": (cmd_adams, "Adams operation on an irreducible"),
    "fold": (cmd_fold, "fold a diagram by an automorphism"),
    "minuscule": (cmd_minuscule, "minuscule lifts of P/Q classes"),
    "epsilon-product": (cmd_epsilon_product, "product of sigma-translates of epsilon_i"),
    "twining": (cmd_twining, "twining character"),
    "jantzen-check": (cmd_jantzen_check, "twining character versus folded dual character"),
    "mohrdieck": (cmd_mohrdieck, "generators of twisted invariants"),
    "semidirect-irreps": (cmd_semidirect_irreps, "irreducible labels of Gamma x| G"),
    "phi": (cmd_phi, "the label map phi"),
    "phi-semiring-check": (cmd_phi_semiring_check, "phi respects products"),
    "phi-adams-check": (cmd_phi_adams_check, "phi fails to commute with psi^2"),
    "no-kernel-check": (cmd_no_kernel_check, "central kernel lies in the twisted image"),
    "w0-check": (cmd_w0_check, "square of the lift of w0"),
    "cohomology": (cmd_cohomology, "H^i(Gamma, Z)"),
    "restrict": (cmd_restrict, "restriction of a cohomology class"),
    "sylow-cyclic": (cmd_sylow_cyclic, "all Sylow subgroups cyclic?"),
    "zassenhaus": (cmd_zassenhaus, "metacyclic decomposition"),
    "h1-vanishing-check": (cmd_h1_vanishing_check, "H^1 detected on cyclic subgroups"),
    "stable-elements-check": (cmd_stable_elements_check, "restriction to a Sylow subgroup"),
    "ext-autos": (cmd_ext_autos, "automorphisms of an extension"),
    "presentation": (cmd_presentation, "truncated lambda-semiring presentation"),
    "subsemirings": (cmd_subsemirings, "normal subsemirings"),
    "isomorphisms": (cmd_isomorphisms, "presentation isomorphisms"),
    "functor-isomorphisms": (cmd_functor_isomorphisms, "compatible families over subgroups"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--seed", type=int, default=None, help="accepted for interface stability")
    common.add_argument("--in", dest="input", default=None, help="JSON input file")
    common.add_argument("--type")
    common.add_argument("--sigma")
    common.add_argument("--weight")
    common.add_argument("--other")
    common.add_argument("--eta")
    common.add_argument("--char")
    common.add_argument("--bound", type=int, default=1)
    common.add_argument("--k", type=int, default=2)
    common.add_argument("--k-max", type=int, default=2)
    common.add_argument("--n-max", type=int, default=0)
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--class", dest="cls")
    common.add_argument("--stab", action="append")
    common.add_argument("--vertex", type=int)
    common.add_argument("--degree", type=int, default=None)
    common.add_argument("--group")
    common.add_argument("--module")
    common.add_argument("--subgroup", default="")
    common.add_argument("--p", type=int, default=None)
    common.add_argument("--label")
    common.add_argument("--cocycles", action="store_true")
    common.add_argument("--type2")
    common.add_argument("--sigma2")
    common.add_argument("--in2", dest="input2")
    common.add_argument("--lambda", dest="require_lambda", action="store_true")
    common.add_argument("--control-identity", action="store_true")

    parser = argparse.ArgumentParser(prog="reprings", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


_DEFAULT_DEGREE = {"mohrdieck": 3, "no-kernel-check": 3}


def _render_text(result):
    lines = [f"status: {result['status']}"]

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}{k}.", obj[k])
        else:
            lines.append(f"{prefix[:-1]}: {json.dumps(obj, sort_keys=True)}")

    walk("", result.get("payload", {}))
    for w in result["diagnostics"].get("warnings", []):
        lines.append(f"warning: {w}")
    if "error" in result:
        lines.append(f"error: {result['error']}")
    return "\n".join(lines)


def dispatch(argv):
    """Run one subcommand; returns (exit code, result dict, format)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        raise SystemExit(2)
    if args.degree is None:
        args.degree = _DEFAULT_DEGREE.get(args.command, 2 if args.command in ("cohomology", "restrict") else 1)
    handler = COMMANDS[args.command][0]
    try:
        payload = _jsonable(handler(args))
    except UsageError as exc:
        parser.error(str(exc))
    except DOMAIN_ERRORS as exc:
        return 1, {"status": "error", "error": str(exc), "payload": {},
                   "diagnostics": {"warnings": []}, "command": args.command,
                   "version": PAYLOAD_VERSION}, args.format
    warnings = payload.pop("_warnings", []) if isinstance(payload, dict) else []
    return 0, {"status": "ok", "payload": payload, "diagnostics": {"warnings": warnings},
               "command": args.command, "version": PAYLOAD_VERSION}, args.format


def main(argv=None):
    code, result, fmt = dispatch(sys.argv[1:] if argv is None else argv)
    if fmt == "json":
        print(json.dumps(result, sort_keys=True, indent=2))
    else:
        print(_render_text(result))
    return code


if __name__ == "__main__":
    sys.exit(main())
