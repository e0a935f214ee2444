"""Command-line entry point.  Output is sorted-key JSON; matrix, vector and polynomial entries are decimal strings."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
import warnings

from . import compat, duality, fan, polytope, seed
from .errors import ClusterError, DepthBoundNotice, IdentityViolation, InputError
from .exchange import as_matrix, check_square, mutate_along, require_sign_skew_symmetric

VERIFY_CHOICES = ("dualities", "sign-coherence", "sign-synchronicity", "gbc",
                  "polytope-routes", "edges-are-cvectors")


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, {"usage": self.format_usage().strip()})


# serialization -------------------------------------------------------------------

def strs(obj):
    """Recursively turn integers into decimal strings (booleans untouched)."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {k: strs(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [strs(v) for v in obj]
    return obj


def matrix_json(M) -> dict:
    return {"n": len(M), "rows": strs(M)}


def _report_json(rep: dict) -> dict:
    out = dict(rep)
    for key in ("B", "witness"):
        if key in out:
            out[key] = strs(out[key])
    return out


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# input ---------------------------------------------------------------------------

def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}", {"file": path, "reason": exc.strerror}) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}", {"file": path, "line": exc.lineno}) from None


def load_matrix(path: str):
    data = _read_json(path)
    rows = data.get("rows") if isinstance(data, dict) else data
    try:
        B = as_matrix([[int(v) for v in r] for r in rows])
    except (TypeError, ValueError):
        raise InputError("matrix rows must be integers or decimal strings", {"file": path}) from None
    if isinstance(data, dict) and "n" in data and int(data["n"]) != len(B):
        raise InputError("declared n does not match the number of rows", {"n": data["n"], "rows": len(B)})
    check_square(B)
    require_sign_skew_symmetric(B)
    return B


def int_list(text: str | None, name: str) -> tuple[int, ...]:
    if text is None or text.strip() == "":
        return ()
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"{name} must be comma-separated integers", {name: text}) from None


def _path(args, n: int) -> tuple[int, ...]:
    path = int_list(args.path, "path")
    if getattr(args, "k", None) is not None:
        path = path + (args.k,)
    bad = [k for k in path if not 1 <= k <= n]
    if bad:
        raise InputError(f"directions must lie in 1..{n}", {"path": list(path)})
    return path


def _index(args, n: int) -> list[int]:
    if args.index is None:
        return list(range(1, n + 1))
    if not 1 <= args.index <= n:
        raise InputError(f"index must lie in 1..{n}", {"index": args.index})
    return [args.index]


def _eps(text: str | None) -> tuple[int, ...]:
    if text is None:
        return (1, -1)
    return (1,) if text == "+" else (-1,)


# subcommands ---------------------------------------------------------------------

def cmd_matrix_mutate(args):
    B = load_matrix(args.B)
    path = _path(args, len(B))
    Bt = mutate_along(B, path)
    duality.gc_along(B, path)  # lazy TSSS / sign check along the way
    return {"B": matrix_json(Bt), "path": list(path)}


def _seed_at(args):
    B = load_matrix(args.B)
    path = _path(args, len(B))
    return B, path, seed.Pattern(B).seed(path)


def cmd_seed_mutate(args):
    B, path, s = _seed_at(args)
    return {"B": matrix_json(s.B), "C": matrix_json(s.C), "path": list(path),
            "vars": [dict(v.to_json(), text=str(v)) for v in s.vars]}


def cmd_gvec(args):
    B, path, s = _seed_at(args)
    G, _ = duality.gc_checked(B, path, seed.Pattern(B))
    return {"G": matrix_json(G), "path": list(path),
            "g": {str(i): strs(seed.g_vector(s, i, B)) for i in _index(args, len(B))}}


def cmd_cvec(args):
    B = load_matrix(args.B)
    path = _path(args, len(B))
    _, C = duality.gc_checked(B, path)
    return {"C": matrix_json(C), "path": list(path),
            "c": {str(i): strs([r[i - 1] for r in C]) for i in _index(args, len(B))}}


def cmd_dvec(args):
    B, path, s = _seed_at(args)
    return {"path": list(path), "d": {str(i): strs(seed.d_vector(s, i)) for i in _index(args, len(B))}}


def cmd_fpoly(args):
    B, path, s = _seed_at(args)
    out = {}
    for i in _index(args, len(B)):
        F = seed.f_polynomial(s, i)
        out[str(i)] = dict(F.to_json(), text=str(F))
    return {"path": list(path), "F": out}


def cmd_polytope_mutate(args):
    B = load_matrix(args.B)
    n = len(B)
    if args.k is None or not 1 <= args.k <= n:
        raise InputError(f"--k in 1..{n} is required", {"k": args.k})
    if args.polytope:
        data = _read_json(args.polytope)
        if "h" not in data:
            raise InputError("polytope file needs the degree vector h", {"file": args.polytope})
        N = polytope.LatticePolytope.from_json(data)
        h = tuple(int(v) for v in data["h"])
        N2, h2 = polytope.mutate_polytope_geometric(N, h, args.k, B)
        return {"k": args.k, "polytope": dict(N2.to_json(), h=strs(h2)), "route": "geometric"}
    path = int_list(args.path, "path")
    s = seed.Pattern(B).seed(path)
    out = []
    for i in _index(args, n):
        f = s.vars[i - 1]
        N2 = polytope.check_polytope_routes(f, B, args.k)
        h2 = polytope.mutate_degree(polytope.newton(f, B)[1], args.k, B)
        out.append({"index": i, "polytope": dict(N2.to_json(), h=strs(h2))})
    return {"k": args.k, "path": list(path), "route": "geometric=algebraic", "results": out}


def cmd_fan_gsets(args):
    B = load_matrix(args.B)
    n = len(B)
    lam = int_list(args.lam, "lambda") or (1,) * n
    path = _path(args, n)
    levels = fan.g_sets(B, lam, path)
    r = len(path)
    labelled = [{"vertex": f"t{r - 1 - j}", "sets": [strs(G.matrix()) for G in level]}
                for j, level in enumerate(levels[1:])]
    return {"path": list(path), "lambda": strs(lam), "start": strs(levels[0][0].matrix()),
            "levels": labelled, "matrices": [m for lv in labelled for m in lv["sets"]]}


def _depth(args):
    if args.finite and args.depth is not None:
        raise InputError("--finite and --depth are exclusive", {})
    return args.depth


def cmd_fan_ng(args):
    B = load_matrix(args.B)
    depth = _depth(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DepthBoundNotice)
        F = fan.ng_fan(B, route=args.route, depth=depth, max_seeds=args.max_seeds)
    out = {"fan": strs(F.to_json()), "complete": F.is_complete(), "route": args.route}
    notes = [str(w.message) for w in caught if issubclass(w.category, DepthBoundNotice)]
    if notes:
        out["notice"] = notes
    return out


def cmd_enumerate(args):
    B = load_matrix(args.B)
    cat = compat.enumerate_seeds(B, depth=_depth(args), max_seeds=args.max_seeds)
    data = cat.to_json()
    data["g_vectors"] = [strs(cat.g_vector_of(i)) for i in range(len(cat.variables))]
    return data


def _catalog(args):
    if not args.catalog:
        raise InputError("--catalog is required", {})
    return compat.SeedCatalog.from_json(_read_json(args.catalog))


def cmd_compat(args):
    cat = _catalog(args)
    g, h = int_list(args.g, "g"), int_list(args.h, "h")
    if len(g) != cat.rank or len(h) != cat.rank:
        raise InputError(f"g and h need {cat.rank} entries", {"g": list(g), "h": list(h)})
    return strs(compat.are_compatible(cat, g, h))


def cmd_degree(args):
    cat = _catalog(args)
    f_ids = list(int_list(args.f, "f"))
    if not f_ids or args.x is None:
        raise InputError("--f and --x are required", {})
    return {"f": strs(f_ids), "x": str(args.x), "degree": str(compat.compatibility_degree(cat, f_ids, args.x))}


def _random_path(rng: random.Random, n: int, length: int) -> tuple[int, ...]:
    path: list[int] = []
    while len(path) < length:
        k = rng.randint(1, n)
        if not path or path[-1] != k:
            path.append(k)
    return tuple(path)


def _verify_one(which: str, B, path, base, eps=(1, -1)) -> list[dict]:
    if which == "dualities":
        return duality.verify_dualities(B, path, base)
    if which == "gbc":
        return [duality.verify_gbc(B, path, base)]
    if which == "sign-coherence":
        return [duality.verify_sign_coherence(B, path)]
    if which == "sign-synchronicity":
        return [duality.verify_sign_synchronicity(B, path)]
    if which == "edges-are-cvectors":
        rep = fan.verify_edges_are_cvectors(B, path)
        rep["faces_checked"] = {("+" if e > 0 else "-"): fan.check_face_support_criterion(B, path, e)
                                for e in eps}
        return [rep]
    # polytope-routes: every cluster variable of the seed at ``path``, every direction
    s = seed.Pattern(B).seed(path)
    for f in s.vars:
        for k in range(1, len(B) + 1):
            polytope.check_polytope_routes(f, B, k)
    return [{"identity": "polytope-routes", "B": [list(r) for r in B], "path": list(path), "status": "ok"}]


def cmd_verify(args):
    B = load_matrix(args.B)
    n = len(B)
    base = int_list(args.base, "base")
    if args.samples:
        rng = random.Random(args.seed)
        paths = [_random_path(rng, n, rng.randint(0, args.max_length)) for _ in range(args.samples)]
    else:
        paths = [_path(args, n)]
    reports = []
    for p in paths:
        reports += [_report_json(r) for r in _verify_one(args.identity, B, p, base, _eps(args.eps))]
    return {"identity": args.identity, "reports": reports, "status": "ok"}


# parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clusterpoly", description="Cluster-algebra polytopes, fans and dualities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(func=fn)
        sp.add_argument("--B", required=True, help="exchange matrix JSON file")
        sp.add_argument("--out", help="write output here (atomically) instead of stdout")
        return sp

    for name, fn in (("matrix-mutate", cmd_matrix_mutate), ("seed-mutate", cmd_seed_mutate),
                     ("gvec", cmd_gvec), ("cvec", cmd_cvec), ("dvec", cmd_dvec), ("fpoly", cmd_fpoly)):
        sp = add(name, fn)
        sp.add_argument("--path", help="1-based directions, e.g. 1,2,1")
        sp.add_argument("--k", type=int, help="one more direction appended to --path")
        if name not in ("matrix-mutate", "seed-mutate"):
            sp.add_argument("--index", type=int, help="single column / variable (1-based)")

    sp = add("polytope-mutate", cmd_polytope_mutate)
    sp.add_argument("--path", help="seed whose cluster variables are mutated (default: initial)")
    sp.add_argument("--k", type=int)
    sp.add_argument("--index", type=int)
    sp.add_argument("--polytope", help="polytope JSON with degree vector h (geometric route only)")

    sp = add("fan-gsets", cmd_fan_gsets)
    sp.add_argument("--path")
    sp.add_argument("--k", type=int)
    sp.add_argument("--lambda", dest="lam")

    for name, fn in (("fan-ng", cmd_fan_ng), ("enumerate", cmd_enumerate)):
        sp = add(name, fn)
        sp.add_argument("--depth", type=int)
        sp.add_argument("--finite", action="store_true")
        sp.add_argument("--max-seeds", type=int, default=2000)
        if name == "fan-ng":
            sp.add_argument("--route", type=int, choices=(1, 2), default=1)

    for name, fn in (("compat", cmd_compat), ("degree", cmd_degree)):
        sp = sub.add_parser(name)
        sp.set_defaults(func=fn)
        sp.add_argument("--catalog", required=True, help="catalog JSON written by enumerate")
        sp.add_argument("--out")
        if name == "compat":
            sp.add_argument("--g", required=True)
            sp.add_argument("--h", required=True)
        else:
            sp.add_argument("--f", required=True, help="variable id or comma-separated ids")
            sp.add_argument("--x", type=int, required=True)

    sp = add("verify", cmd_verify)
    sp.add_argument("identity", choices=VERIFY_CHOICES)
    sp.add_argument("--path")
    sp.add_argument("--k", type=int)
    sp.add_argument("--base", help="base vertex path for the relative identities")
    sp.add_argument("--eps", choices=("+", "-"))
    sp.add_argument("--samples", type=int, default=0, help="random paths instead of --path")
    sp.add_argument("--max-length", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    return p


_VALUE_FLAGS = {"--lambda", "--g", "--h", "--path", "--f", "--eps", "--base"}


def _glue_values(argv: list[str]) -> list[str]:
    """``--lambda -1,1`` -> ``--lambda=-1,1`` so negative values are not read as flags."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_glue_values(argv))
        payload = args.func(args)
        write_output(dumps(payload), getattr(args, "out", None))
        return 0
    except IdentityViolation as exc:
        diag = exc.diagnostic()
        diag["witness"] = strs(diag["witness"])
        sys.stdout.write(dumps(diag))
        return 2
    except ClusterError as exc:
        sys.stderr.write(dumps(strs(exc.diagnostic())))
        return exc.code
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ArithmeticError, RecursionError, MemoryError) as exc:
        sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc), "witness": {}}))
        return 1


def main() -> None:
    sys.exit(run())
