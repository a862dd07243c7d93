"""Command-line front end: expand, family, construct, report, detect, verify-all, replay."""

import argparse
import csv
import hashlib
import io
import json
import sys

from . import __version__
from .construction import (
    ConstructionError,
    E0Config,
    check_Dn_bound,
    merge_pi,
    sample_E0,
    verify_pattern_containment,
)
from .detectors import detect
from .dimension import DimReport, MeasureContext, dim_reports, minimal_word
from .engel import EngelDomainError, as_rational, cylinder, digits, format_rational
from .family import (
    DEFAULT_SEARCH_CAP,
    ENUMERATIONS,
    FamilyError,
    SearchCapError,
    build_b,
    n_k,
    parse_family,
    verify_b_count,
)


class UsageError(Exception):
    pass


def dump_json(obj):
    return json.dumps(obj, indent=2) + "\n"


def _int_list(text):
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def _pattern(args):
    spec = parse_family(args.family, enumeration=args.enumeration)
    return spec, build_b(spec, args.a, args.K, args.search_cap)


def _b_count_json(pseq, N):
    chk = verify_b_count(pseq, N)
    return {"ok": chk.ok, "N": N, "counts": list(chk.counts), "scope": chk.scope}


def _count_depth(spec, K, depth):
    return max(depth, 2 * n_k(spec, K) ** 2, 1)


def cmd_expand(args):
    x = as_rational(args.x)
    seq = digits(x, args.depth)
    cyl = cylinder(seq)
    out = {
        "command": "expand",
        "x": format_rational(x),
        "depth": args.depth,
        "digits": seq.to_json(),
        "cylinder": {
            "left": None if cyl.left is None else format_rational(cyl.left),
            "right": None if cyl.right is None else format_rational(cyl.right),
            "length": None if cyl.length is None else format_rational(cyl.length),
            "log_length": cyl.log_length,
        },
    }
    return dump_json(out), 0


def cmd_family(args):
    spec, pseq = _pattern(args)
    N = _count_depth(spec, args.K, 1)
    chk = _b_count_json(pseq, N)
    out = {"command": "family", "pattern": pseq.to_json(), "b_count": chk}
    return dump_json(out), 0 if chk["ok"] else 1


def cmd_construct(args):
    if args.seed is None:
        raise UsageError("construct needs an explicit --seed")
    spec, pseq = _pattern(args)
    cfg = E0Config.from_pattern(pseq, args.depth)
    source = sample_E0(cfg, args.depth, args.seed)
    point = merge_pi(source, pseq, seed=args.seed, depth=args.depth)
    contain = verify_pattern_containment(point, spec, pseq, args.K)
    N = _count_depth(spec, args.K, args.depth)
    b_count = _b_count_json(pseq, N)
    dn = check_Dn_bound(cfg, args.depth)
    merged = point.merged.digits
    checks = {
        "containment": {
            "ok": contain.ok,
            "witnesses": list(contain.witnesses),
            "violated": list(contain.violated),
        },
        "b_count": b_count,
        "dn_bound": {"ok": dn.ok, "N": args.depth, "margins": list(dn.margins)},
        "sample_in_E0": cfg.is_prefix(source.digits),
        "strictly_increasing": all(x < y for x, y in zip(merged, merged[1:])),
    }
    all_pass = (
        contain.ok and b_count["ok"] and dn.ok
        and checks["sample_in_E0"] and checks["strictly_increasing"]
    )
    checks["all_pass"] = all_pass
    out = {
        "command": "construct",
        "version": __version__,
        "parameters": _params(args),
        "pattern": pseq.to_json(),
        "point": point.to_json(),
        "verification": checks,
    }
    return dump_json(out), 0 if all_pass else 1


def cmd_report(args):
    if args.N < 1:
        raise UsageError("--N must be >= 1")
    _, pseq = _pattern(args)
    cfg = E0Config.from_pattern(pseq, args.N + 1)
    ctx = MeasureContext(cfg)
    if args.seed is None:
        word = minimal_word(cfg, args.N + 1)
    else:
        word = sample_E0(cfg, args.N + 1, args.seed).digits
    rows = dim_reports(ctx, word, args.N)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=DimReport.CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r.as_row())
    ok = all(r.dn_margin > 0 and r.L_n >= r.chain_bound for r in rows)
    return buf.getvalue(), 0 if ok else 1


def _load_digits(path):
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        if "point" in data:
            data = data["point"]
        for key in ("merged", "digits", "items"):
            if key in data:
                data = data[key]
                break
        else:
            raise UsageError(f"{path}: no 'merged', 'digits' or 'items' field")
    if not isinstance(data, list):
        raise UsageError(f"{path}: expected a JSON array of integers")
    return [int(x) for x in data]


def cmd_detect(args):
    A = _load_digits(args.input)
    q = args.query
    if q == "ap":
        params = {"d": _need(args.d, "--d")}
    elif q == "gp":
        params = {"q": _need(args.q, "--q")}
    elif q in ("translate", "scalar", "power"):
        params = {"B": _need(args.set, "--set")}
    else:
        params = {"windows": args.windows or [1]}
    det = detect(A, q, **params)
    return dump_json(det.to_json()), 0


def _need(value, flag):
    if value is None:
        raise UsageError(f"this query needs {flag}")
    return value


def cmd_verify_all(args):
    from .verify import run_all

    results = run_all(a=args.a, K=args.K, depth=args.depth, seed=args.seed or 1)
    ok = all(r["ok"] for r in results)
    out = {"command": "verify-all", "version": __version__, "checks": results, "all_pass": ok}
    return dump_json(out), 0 if ok else 1


def cmd_replay(args):
    with open(args.manifest) as fh:
        manifest = json.load(fh)
    text, code = run(manifest["argv"])
    digest = hashlib.sha256(text.encode()).hexdigest()
    same = digest == manifest["output_sha256"]
    out = {
        "command": "replay",
        "manifest": args.manifest,
        "expected_sha256": manifest["output_sha256"],
        "actual_sha256": digest,
        "identical": same,
    }
    return dump_json(out), 0 if same else 1


_PARAM_KEYS = ("x", "a", "K", "depth", "seed", "family", "enumeration", "search_cap",
               "N", "input", "query", "d", "q", "set", "windows")


def _params(args):
    out = {}
    for key in _PARAM_KEYS:
        if hasattr(args, key):
            out[key] = getattr(args, key)
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--manifest", help="also write a run manifest to this file")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", default="affine", help="'affine', 'powers' or 'list: n; 2*n+1; ...'")
    fam.add_argument("--enumeration", default="binary", choices=ENUMERATIONS)
    fam.add_argument("--a", type=int, default=5)
    fam.add_argument("--K", type=int, default=3)
    fam.add_argument("--search-cap", type=int, default=DEFAULT_SEARCH_CAP)

    p = argparse.ArgumentParser(prog="engelpat", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("expand", parents=[common], help="Engel digits and cylinder of p/q")
    s.add_argument("x")
    s.add_argument("--depth", type=int, default=20)
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("family", parents=[common, fam], help="thresholds and pattern values")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("construct", parents=[common, fam], help="E_0 sample merged with b_m")
    s.add_argument("--depth", type=int, default=20)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("report", parents=[common, fam], help="dimension quotients as CSV")
    s.add_argument("--N", type=int, default=10)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("detect", parents=[common], help="run a detector on a JSON digit file")
    s.add_argument("input")
    s.add_argument("--query", required=True,
                   choices=("density", "ap", "gp", "translate", "scalar", "power"))
    s.add_argument("--d", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--set", type=_int_list)
    s.add_argument("--windows", type=_int_list)
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("verify-all", parents=[common, fam], help="run the built-in checks")
    s.add_argument("--depth", type=int, default=20)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_verify_all)

    s = sub.add_parser("replay", parents=[common], help="re-run a manifest and compare output")
    s.add_argument("manifest")
    s.set_defaults(func=cmd_replay)
    return p


def _manifest_argv(args, argv):
    # Strip output-routing flags; they do not change the content.
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("--out", "--manifest"):
            skip = True
            continue
        if tok.startswith("--out=") or tok.startswith("--manifest="):
            continue
        out.append(tok)
    return out


def run(argv):
    """Parse and execute; returns ``(text, exit_code)`` without touching stdout."""
    args = build_parser().parse_args(argv)
    return args.func(args)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (EngelDomainError, FamilyError, SearchCapError, ConstructionError, ValueError) as exc:
        print(f"engelpat: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.manifest:
        manifest = {
            "command": args.command,
            "argv": _manifest_argv(args, argv),
            "parameters": _params(args),
            "version": __version__,
            "output_sha256": hashlib.sha256(text.encode()).hexdigest(),
        }
        with open(args.manifest, "w") as fh:
            fh.write(dump_json(manifest))
    return code


if __name__ == "__main__":
    sys.exit(main())
