"""Command-line front end.

Every command builds a plain dict report; ``--json`` dumps it, the default
renders the same dict as indented ``key: value`` lines, and the batch
commands also offer ``--csv``.  Integers are written as exact decimal strings
in JSON.  Integers beyond ``ELIDE_DIGITS`` digits (unit coordinates in the
family tests can have tens of millions of digits) are replaced by their digit
count, leading and trailing digits and a SHA-256 of the full decimal string.

Exit codes: 0 success, 1 verification or search failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import biquad, family, oracle, quadfield
from .arith import is_squarefree
from .errors import InvalidInput, PolyaError
from .sqclass import SquareClass

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
ELIDE_DIGITS = 2000
ELIDE_KEEP = 40


class Failure(Exception):
    """The command ran but its result is a failure (exit 1); carries the report."""

    def __init__(self, report):
        super().__init__("verification failed")
        self.report = report


# -- serialization -----------------------------------------------------------


def _decimal(n) -> str:
    if n.bit_length() < 10_000:
        return str(int(n))
    import gmpy2

    return gmpy2.mpz(n).digits()


def encode_int(n):
    s = _decimal(n)
    body = s.lstrip("-")
    if len(body) <= ELIDE_DIGITS:
        return s
    return {
        "elided": True,
        "sign": "-" if s.startswith("-") else "+",
        "digits": str(len(body)),
        "head": body[:ELIDE_KEEP],
        "tail": body[-ELIDE_KEEP:],
        "sha256": hashlib.sha256(body.encode()).hexdigest(),
    }


def to_jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, SquareClass):
        return encode_int(x.value)
    if hasattr(x, "bit_length"):
        return encode_int(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _human_scalar(v) -> str:
    if isinstance(v, dict) and v.get("elided"):
        sign = "-" if v["sign"] == "-" else ""
        return f"{sign}{v['head']}...{v['tail']} ({v['digits']} digits, sha256 {v['sha256'][:16]})"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, list) and all(not isinstance(e, (dict, list)) for e in v):
        return "[" + ", ".join(_human_scalar(e) for e in v) + "]"
    return str(v)


def render_human(obj, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in obj.items():
        if isinstance(v, dict) and not v.get("elided"):
            lines.append(f"{pad}{k}:")
            lines.append(render_human(v, indent + 1))
        elif isinstance(v, list) and any(isinstance(e, (dict, list)) for e in v):
            lines.append(f"{pad}{k}:")
            for i, e in enumerate(v):
                if isinstance(e, dict) and not e.get("elided"):
                    lines.append(f"{pad}  - [{i}]")
                    lines.append(render_human(e, indent + 2))
                else:
                    lines.append(f"{pad}  - {_human_scalar(e)}")
        else:
            lines.append(f"{pad}{k}: {_human_scalar(v)}")
    return "\n".join(line for line in lines if line)


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _human_scalar(v) for k, v in r.items()})
    return buf.getvalue()


# -- helpers -----------------------------------------------------------------


def _pool_map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _field(d: int) -> quadfield.QuadraticField:
    if d in (0, 1):
        raise InvalidInput(f"d = {d} does not define a quadratic field")
    if not is_squarefree(d):
        raise InvalidInput(f"d = {d} is not squarefree")
    return quadfield.make_field(d)


def _unit_dict(u: quadfield.FundamentalUnit) -> dict:
    return {"x": u.x, "y": u.y, "denom": u.denom}


def _field_dict(F: quadfield.QuadraticField) -> dict:
    return {"d": F.d, "disc": F.disc, "ramified": list(F.ramified), "r": F.r}


def _norm_two_dict(s: quadfield.NormTwoSolvability) -> dict:
    w = None if s.witness is None else {"x": s.witness[0], "y": s.witness[1], "denom": s.witness[2]}
    return {"plus2": s.plus2, "minus2": s.minus2, "witness": w, "witness_norm": s.witness_norm}


# -- commands ----------------------------------------------------------------


def cmd_quad(args) -> dict:
    F = _field(args.d)
    rep = {"command": "quad", "inputs": {"d": args.d, "oracle": args.oracle}, "field": _field_dict(F)}
    if F.is_real:
        u = quadfield.fundamental_unit(F)
        rep["unit"] = _unit_dict(u)
        rep["norm"] = u.norm
        rep["a_value"] = quadfield.a_value(F)
        rep["a_class"] = quadfield.a_class(F)
    rep["hilbert_order"] = quadfield.hilbert_polya_order(F)
    if args.oracle:
        R = oracle.polya_direct(F)
        rep["oracle_order"] = R.order
        rep["agree"] = R.order == rep["hilbert_order"]
        if not rep["agree"]:
            raise Failure(rep)
    return rep


def biquad_dict(K: biquad.BiquadraticField) -> dict:
    R = biquad.polya_order(K)
    h1 = R.h1
    subs = []
    for F, g in zip(K.subfields, biquad.h2_generators(K)[3:]):
        subs.append({**_field_dict(F), "unit_norm": quadfield.unit_norm(F), "a_class": g})
    out = {
        "m1": K.m1,
        "m2": K.m2,
        "m3": K.m3,
        "subfields": subs,
        "ramification": {str(p): e for p, e in K.ram},
        "exponent_product": R.exponent_product,
        "h2_generators": biquad.h2_generators(K),
        "h2_basis": list(h1.h2.basis),
        "h2_order": h1.h2.order,
        "index": h1.index,
        "strict_index": h1.strict_index,
        "interpretations_differ": h1.interpretations_differ,
        "norm_two": None if h1.norm_two is None else [_norm_two_dict(s) for s in h1.norm_two],
        "h1_order": R.h1_order,
        "po_order": R.po_order,
        "rank2": R.rank2,
    }
    return out


def cmd_biquad(args) -> dict:
    K = biquad.make_biquad(args.m1, args.m2)
    return {"command": "biquad", "inputs": {"m1": args.m1, "m2": args.m2}, **biquad_dict(K)}


def parse_signs(text: str, t: int) -> family.SignMatrix:
    table = {"-1": -1, "-": -1, "1": 1, "+1": 1, "+": 1}
    toks = [s for s in text.replace(",", " ").split() if s]
    try:
        signs = [table[s] for s in toks]
    except KeyError as e:
        raise InvalidInput(f"sign {e.args[0]!r} is not one of -1, +1") from None
    return family.SignMatrix.from_upper(t, signs)


def tuple_dict(T: family.PrimeTuple) -> dict:
    return {
        "primes": list(T.primes),
        "product": T.product,
        "certificates": [
            {"i": i + 1, "j": j + 1, "symbol": s} for i, j, s in T.certificates if i < j
        ],
        "search_trace": [
            {
                "index": st.index + 1,
                "residues": list(st.residues),
                "x0": st.x0,
                "modulus": st.modulus,
                "prime": st.prime,
            }
            for st in T.search_trace
        ],
        "probable_primes": list(T.probable_primes),
    }


def _notes(T: family.PrimeTuple) -> list[str]:
    return [f"{p} is a probable prime (40-round Miller-Rabin)" for p in T.probable_primes]


def _check_t(t: int, lo: int):
    if t < lo:
        raise InvalidInput(f"t must be at least {lo}, got {t}")


def cmd_find_primes(args) -> dict:
    _check_t(args.t, 1)
    if (args.signs is None) == (args.pattern is None):
        raise InvalidInput("give exactly one of --signs or --pattern")
    M = family.trotter_pattern(args.t) if args.pattern else parse_signs(args.signs, args.t)
    T = family.find_prime_tuple(M, family.SearchOptions(args.start, args.limit))
    return {
        "command": "find-primes",
        "inputs": {"t": args.t, "signs": M.upper(), "start": args.start, "limit": args.limit},
        **tuple_dict(T),
        "trotter_applies": M.t >= 2 and family.trotter_applies(M),
        "notes": _notes(T),
    }


def _beta_dict(B) -> dict | None:
    if B is None:
        return None
    if B.vacuous:
        return {"vacuous": True, "admissible": True}
    return {
        "vacuous": False,
        "z": B.z,
        "w": B.w,
        "a": B.a,
        "b": B.b,
        "alpha": B.alpha_class,
        "beta": B.beta_class,
        "admissible": B.admissible,
    }


def instance_dict(F: family.FamilyInstance) -> dict:
    rep = family.verify_theorem_instance(F)
    R = rep.polya
    return {
        "t": F.t,
        **tuple_dict(F.tuple),
        "P": F.P,
        "expected_rank": F.expected_rank,
        "norm_u1": rep.norm_u1,
        "norm_u2": rep.norm_u2,
        "norm_u3": rep.norm_u3,
        "trotter_applies": rep.trotter,
        "ramification": {str(p): e for p, e in F.field.ram},
        "exponent_product": F.field.exponent_product,
        "h2_order": None if R is None else R.h1.h2.order,
        "index": None if R is None else R.h1.index,
        "h1_order": None if R is None else R.h1_order,
        "po_order": None if R is None else R.po_order,
        "rank2": None if R is None else R.rank2,
        "beta": _beta_dict(rep.beta),
        "checks": {c.key: {"description": c.description, "passed": c.passed, "detail": c.detail} for c in rep.checks},
        "errors": rep.errors,
        "notes": _notes(F.tuple),
        "passed": rep.passed,
    }


def cmd_family(args) -> dict:
    _check_t(args.t, 2)
    if args.count < 1:
        raise InvalidInput(f"count must be positive, got {args.count}")
    instances = []
    start = args.start
    for _ in range(args.count):
        F = family.build_family_instance(args.t, family.SearchOptions(start, args.limit))
        instances.append(F)
        start = max(F.tuple.primes) + 1
    rows = _pool_map(instance_dict, instances, args.threads)
    rep = {
        "command": "family",
        "inputs": {"t": args.t, "count": args.count, "start": args.start, "limit": args.limit},
        "instances": rows,
        "passed": all(r["passed"] for r in rows),
    }
    if not rep["passed"]:
        raise Failure(rep)
    return rep


def _family_csv(rep) -> list[dict]:
    return [
        {
            "t": r["t"],
            "primes": " ".join(r["primes"]),
            "P": r["P"],
            "po_order": r["po_order"],
            "rank2": r["rank2"],
            "h1_order": r["h1_order"],
            "failed": " ".join(k for k, c in r["checks"].items() if not c["passed"]),
            "passed": r["passed"],
        }
        for r in rep["instances"]
    ]


def parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise InvalidInput(f"range must look like A..B, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise InvalidInput(f"bad range {lo}..{hi}")
    if hi < 2:
        raise InvalidInput(f"range {lo}..{hi} contains no |d| >= 2")
    return max(lo, 2), hi


def _hilbert_row(d: int) -> dict:
    F = quadfield.make_field(d)
    h = quadfield.hilbert_polya_order(F)
    o = oracle.polya_direct(F).order
    return {"d": d, "hilbert": h, "oracle": o, "agree": h == o}


def cmd_verify_hilbert(args) -> dict:
    lo, hi = parse_range(args.range)
    ds = [s * n for n in range(lo, hi + 1) if is_squarefree(n) for s in (1, -1)]
    rows = _pool_map(_hilbert_row, ds, args.threads)
    bad = [r for r in rows if not r["agree"]]
    rep = {
        "command": "verify-hilbert",
        "inputs": {"range": f"{lo}..{hi}"},
        "fields": len(rows),
        "agree": len(rows) - len(bad),
        "mismatches": bad,
        "rows": rows,
        "passed": not bad,
    }
    if bad:
        raise Failure(rep)
    return rep


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON object")
    common.add_argument("--csv", action="store_true", help="CSV rows (batch commands)")
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    common.add_argument("--out", help="write output to FILE instead of stdout")
    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--start", type=int, default=2)
    search.add_argument("--limit", type=int, default=family.DEFAULT_LIMIT)

    p = argparse.ArgumentParser(prog="polya", description="Polya groups of quadratic and bi-quadratic fields")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quad", parents=[common], help="a quadratic field Q(sqrt d)")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--oracle", action="store_true", help="also compute the group directly")
    q.set_defaults(fn=cmd_quad)

    b = sub.add_parser("biquad", parents=[common], help="a bi-quadratic field Q(sqrt m1, sqrt m2)")
    b.add_argument("--m1", type=int, required=True)
    b.add_argument("--m2", type=int, required=True)
    b.set_defaults(fn=cmd_biquad)

    f = sub.add_parser("find-primes", parents=[common, search], help="primes with prescribed symbols")
    f.add_argument("--t", type=int, required=True)
    f.add_argument("--signs", help="upper triangle row by row, e.g. -1,1,-1")
    f.add_argument("--pattern", choices=["trotter"])
    f.set_defaults(fn=cmd_find_primes)

    fa = sub.add_parser("family", parents=[common, search], help="build and verify family instances")
    fa.add_argument("--t", type=int, required=True)
    fa.add_argument("--count", type=int, default=1)
    fa.set_defaults(fn=cmd_family, csv_rows=_family_csv)

    v = sub.add_parser("verify-hilbert", parents=[common], help="Hilbert formula against the direct computation")
    v.add_argument("--range", required=True, help="A..B bounds on |d|")
    v.set_defaults(fn=cmd_verify_hilbert, csv_rows=lambda rep: rep["rows"])
    return p


def _render(args, rep) -> str:
    data = to_jsonable(rep)
    if args.json:
        return json.dumps(data, indent=2) + "\n"
    if args.csv:
        rows_fn = getattr(args, "csv_rows", None)
        if rows_fn is None:
            raise InvalidInput("--csv is only available for batch commands")
        return render_csv(rows_fn(data))
    if args.command == "verify-hilbert":
        data = {k: v for k, v in data.items() if k != "rows"}
    return render_human(data) + "\n"


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.threads < 1:
            raise InvalidInput(f"--threads must be positive, got {args.threads}")
        if args.json and args.csv:
            raise InvalidInput("--json and --csv are exclusive")
        try:
            rep, code = args.fn(args), EXIT_OK
        except Failure as f:
            rep, code = f.report, EXIT_FAIL
        _emit(args, _render(args, rep))
        return code
    except InvalidInput as e:
        print(f"polya: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except PolyaError as e:
        print(f"polya: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
