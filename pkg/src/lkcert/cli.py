"""Command-line front end.

Exit codes: 0 success / certified, 1 negative outcome (witnessed failure,
predicate false, invalid certificate), 2 parse or precondition failure,
3 resource cap exceeded, 4 theorem falsified (hypotheses held, conclusion
did not).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Callable

from . import __version__
from .comb import (
    PkInstance,
    bidiagonal_factorization,
    bidiagonal_positions,
    is_totally_nonnegative,
    minor_positivity,
    pascal_L,
    pk_direct,
    pk_via_trace,
    theorem_pk_check,
)
from .errors import DomainError, PreconditionError, ResourceError, TheoremFalsified
from .exact import format_rat, rat
from .index import index_of, index_to_json, is_upper_triangular
from .lk import (
    TriangularizationCertificate,
    check_certificate,
    commutator_qu_check,
    counterexample_search,
    triangularize,
    verify_main_theorem,
)
from .matrix import MatQ, mat_prod
from .qu import is_quasi_unipotent, is_single_jordan_block
from .tracepoly import expand_trace_poly, hypothesis_verifier, trace_poly_interpolated

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_RESOURCE, EXIT_FALSIFIED = 0, 1, 2, 3, 4


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.environ.get(name, default))
    except ValueError:
        return default


DEFAULT_MAX_DIM = _env_int("LKCERT_MAX_DIM", 8)
DEFAULT_MAX_PASCAL = _env_int("LKCERT_MAX_PASCAL", 16)
DEFAULT_KMAX_CAP = _env_int("LKCERT_KMAX_CAP", 12)
DEFAULT_NMAX_CAP = _env_int("LKCERT_NMAX_CAP", 200)
DEFAULT_TNN_CAP = _env_int("LKCERT_TNN_CAP", 6)


class InputError(Exception):
    pass


@dataclass
class Outcome:
    result: object
    rows: list  # TSV rows, first row is the column header
    code: int = EXIT_OK


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load_matrix(path: str, max_dim: int, data=None) -> MatQ:
    data = load_json(path) if data is None else data
    try:
        M = MatQ.from_json(data)
    except DomainError as exc:
        raise InputError(f"{path}: {exc}") from None
    if M.dim > max_dim:
        raise ResourceError(f"{path}: dimension {M.dim} exceeds --max-dim {max_dim}")
    return M


def parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"{flag}: expected comma-separated integers, got {text!r}") from None


def parse_rat_list(text: str, flag: str) -> list:
    out = []
    for pos, t in enumerate(text.split(",")):
        try:
            out.append(rat(t))
        except (TypeError, ValueError, ZeroDivisionError):
            raise InputError(f"{flag}: item {pos} ({t!r}) is not a rational") from None
    return out


def cap(value: int, limit: int, flag: str) -> int:
    if value < 0:
        raise InputError(f"{flag} must be non-negative")
    if value > limit:
        raise ResourceError(f"{flag}={value} exceeds the cap {limit}")
    return value


def mat_rows(M: MatQ) -> list:
    return [[format_rat(x) for x in row] for row in M.rows]


# -- commands ---------------------------------------------------------------


def cmd_check_qu(args) -> Outcome:
    A = load_matrix(args.A, args.max_dim)
    rep = is_quasi_unipotent(A)
    ok, lam = is_single_jordan_block(A)
    result = rep.to_json() | {"single_jordan_block": ok, "block_eigenvalue": None if lam is None else format_rat(lam)}
    rows = [["field", "value"]] + [[k, json.dumps(v)] for k, v in result.items()]
    return Outcome(result, rows, EXIT_OK if rep else EXIT_NEGATIVE)


def cmd_index(args) -> Outcome:
    A = load_matrix(args.A, args.max_dim)
    ind = index_of(A)
    result = {"index": index_to_json(ind), "upper_triangular": is_upper_triangular(A)}
    return Outcome(result, [["field", "value"], ["index", str(result["index"])], ["upper_triangular", str(result["upper_triangular"]).lower()]])


def cmd_trace_poly(args) -> Outcome:
    A = load_matrix(args.A, args.max_dim)
    B = load_matrix(args.B, args.max_dim)
    k = cap(args.k, args.kmax_cap, "--k")
    if k < 1:
        raise InputError("--k must be positive")
    fn = expand_trace_poly if args.method == "expand" else trace_poly_interpolated
    tp = fn(A, B, k)
    rows = [["degree", "coefficient"]] + [[str(i), format_rat(c)] for i, c in enumerate(tp.poly.coeffs)]
    return Outcome(tp.to_json(), rows)


def _verdict_rows(v) -> list:
    rows = [["field", "value"], ["status", v.status]]
    if v.report is not None:
        rows.append(["verdict", str(v.report.verdict).lower()])
        if v.report.witness is not None:
            w = v.report.witness
            rows += [["witness_k", str(w.k)], ["witness_n1", str(w.n1)], ["witness_n2", str(w.n2)],
                     ["witness_t1", format_rat(w.t1)], ["witness_t2", format_rat(w.t2)]]
    if v.cert is not None:
        rows.append(["common_eigenvector", ",".join(format_rat(x) for x in v.cert.common_eigenvector)])
    if v.error_kind is not None:
        rows.append(["error", v.error_kind])
    return rows


def cmd_verify(args) -> Outcome:
    A = load_matrix(args.A, args.max_dim)
    B = load_matrix(args.B, args.max_dim)
    v = verify_main_theorem(A, B)
    return Outcome(v.to_json(), _verdict_rows(v), v.exit_code)


def cmd_triangularize(args) -> Outcome:
    A = load_matrix(args.A, args.max_dim)
    B = load_matrix(args.B, args.max_dim)
    report = hypothesis_verifier(A, B)
    if not report.verdict:
        return Outcome({"certificate": None, "report": report.to_json()},
                       [["field", "value"], ["status", "hypothesis-fails"]], EXIT_NEGATIVE)
    cert = triangularize(A, B)
    rows = [["field", "value"], ["P", json.dumps(mat_rows(cert.P))], ["A_conj", json.dumps(mat_rows(cert.A_conj))],
            ["B_conj", json.dumps(mat_rows(cert.B_conj))],
            ["common_eigenvector", ",".join(format_rat(x) for x in cert.common_eigenvector)]]
    return Outcome({"certificate": cert.to_json(), "report": report.to_json()}, rows)


def cmd_counterexample(args) -> Outcome:
    A = load_matrix(args.A, args.max_dim)
    B = load_matrix(args.B, args.max_dim)
    kmax = cap(args.kmax, args.kmax_cap, "--kmax")
    nmax = cap(args.nmax, args.nmax_cap, "--nmax")
    w = counterexample_search(A, B, kmax, nmax)
    if w is None:
        return Outcome({"witness": None}, [["field", "value"], ["witness", "none"]])
    rows = [["k", "n", "trace_at_0", "trace_at_n"], [str(w.k), str(w.n), format_rat(w.trace_at_0), format_rat(w.trace_at_n)]]
    return Outcome({"witness": w.to_json()}, rows, EXIT_NEGATIVE)


def cmd_pk(args) -> Outcome:
    x = parse_rat_list(args.x, "--x")
    kmax = cap(args.kmax, args.kmax_cap, "--kmax")
    if args.m + 1 > args.max_dim:
        raise ResourceError(f"m+1={args.m + 1} exceeds --max-dim {args.max_dim}")
    try:
        inst = PkInstance(args.r, args.m, tuple(x))
    except DomainError as exc:
        raise InputError(str(exc)) from None
    table = []
    for k in range(1, kmax + 1):
        direct, via = pk_direct(inst, k), pk_via_trace(inst, k)
        if direct != via:
            raise AssertionError(f"p_{k}: direct sum {direct} differs from trace {via}")
        table.append({"k": k, "p_k": format_rat(direct)})
    all_zero, witness = theorem_pk_check(inst)
    result = {"r": args.r, "m": args.m, "x": [format_rat(v) for v in x], "table": table,
              "all_vanish_up_to_m_plus_1": all_zero, "witness_k": witness}
    rows = [["k", "p_k"]] + [[str(t["k"]), t["p_k"]] for t in table]
    return Outcome(result, rows)


def cmd_tnn(args) -> Outcome:
    A = load_matrix(args.A, args.max_dim)
    ok, spec = is_totally_nonnegative(A, cap=args.tnn_cap)
    result = {"totally_nonnegative": ok, "offending_minor": None if spec is None else spec.to_json()}
    rows = [["field", "value"], ["totally_nonnegative", str(ok).lower()]]
    if spec is not None:
        rows += [["I", ",".join(map(str, spec.I))], ["J", ",".join(map(str, spec.J))]]
    return Outcome(result, rows, EXIT_OK if ok else EXIT_NEGATIVE)


def cmd_pascal(args) -> Outcome:
    if args.n < 1:
        raise InputError("--n must be positive")
    n = cap(args.n, args.max_pascal, "--n")
    L = pascal_L(n)
    result = {"n": n, "L": L.to_json()}
    rows = [["row"] + [str(j) for j in range(1, n + 1)]] + [[str(i + 1)] + r for i, r in enumerate(mat_rows(L))]
    if args.factor:
        factors = bidiagonal_factorization(n)
        product_ok = (mat_prod(factors) if factors else MatQ.identity(n)) == L
        result["factors"] = [{"i": i, "j": i - 1, "matrix": F.to_json()} for i, F in zip(bidiagonal_positions(n), factors)]
        result["product_equals_L"] = product_ok
        rows = [["factor", "i", "j"]] + [[str(t + 1), str(i), str(i - 1)] for t, i in enumerate(bidiagonal_positions(n))]
    return Outcome(result, rows)


def cmd_minor_positivity(args) -> Outcome:
    qs = parse_int_list(args.qs, "--qs")
    if args.r < 0:
        raise InputError("--r must be non-negative")
    if qs and qs[-1] + args.r + 1 > args.max_pascal:
        raise ResourceError(f"ambient dimension {qs[-1] + args.r + 1} exceeds --max-pascal {args.max_pascal}")
    try:
        value, cert = minor_positivity(qs, args.r)
    except DomainError as exc:
        raise InputError(str(exc)) from None
    result = {"qs": qs, "r": args.r, "n": cert.n, "det": format_rat(value), "chain": cert.to_json()}
    rows = [["level", "R"]] + [[str(cert.n - t), ",".join(map(str, R))] for t, R in enumerate(cert.chain)]
    return Outcome(result, rows)


def cmd_commutator_check(args) -> Outcome:
    data = load_json(args.input)
    if not isinstance(data, dict) or not {"g", "xs", "ys"} <= data.keys():
        raise InputError(f"{args.input}: expected an object with 'g', 'xs' and 'ys'")
    g = load_matrix(f"{args.input}#g", args.max_dim, data["g"])
    xs = [load_matrix(f"{args.input}#xs[{i}]", args.max_dim, d) for i, d in enumerate(data["xs"])]
    ys = [load_matrix(f"{args.input}#ys[{i}]", args.max_dim, d) for i, d in enumerate(data["ys"])]
    ok = commutator_qu_check(g, xs, ys)
    rep = is_quasi_unipotent(g)
    result = {"g_quasi_unipotent": ok, "qu_report": rep.to_json()}
    return Outcome(result, [["field", "value"], ["g_quasi_unipotent", str(ok).lower()]], EXIT_OK if ok else EXIT_FALSIFIED)


def cmd_check_cert(args) -> Outcome:
    data = load_json(args.cert)
    # accept the envelope of verify/triangularize output or a bare certificate
    if isinstance(data, dict) and "result" in data:
        data = data["result"]
    if isinstance(data, dict) and "certificate" in data:
        data = data["certificate"]
    if not isinstance(data, dict):
        raise InputError(f"{args.cert}: no certificate found")
    try:
        cert = TriangularizationCertificate.from_json(data)
    except DomainError as exc:
        raise InputError(f"{args.cert}: {exc}") from None
    checks = check_certificate(cert)
    valid = all(checks.values())
    rows = [["check", "ok"]] + [[k, str(v).lower()] for k, v in checks.items()]
    return Outcome({"valid": valid, "checks": checks}, rows, EXIT_OK if valid else EXIT_NEGATIVE)


# -- wiring -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lkcert", description="Exact checks for quasi-unipotent matrix pairs.")
    parser.add_argument("--version", action="version", version=f"lkcert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str, default_format: str = "json"):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--format", choices=("json", "tsv"), default=default_format)
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
        return p

    def matrices(p, *names):
        for name in names:
            p.add_argument(f"--{name}", dest=name, required=True, metavar="FILE", help=f"matrix JSON for {name}")

    p = add("check-qu", cmd_check_qu, "decide quasi-unipotence")
    matrices(p, "A")
    p = add("index", cmd_index, "index of a matrix")
    matrices(p, "A")
    p = add("trace-poly", cmd_trace_poly, "tr((A B^n)^k) as a polynomial in n")
    matrices(p, "A", "B")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("expand", "interpolate"), default="expand")
    p.add_argument("--kmax-cap", type=int, default=DEFAULT_KMAX_CAP)
    p = add("verify", cmd_verify, "run the full pipeline and emit a verdict")
    matrices(p, "A", "B")
    p = add("triangularize", cmd_triangularize, "emit a triangularization certificate")
    matrices(p, "A", "B")
    p = add("counterexample", cmd_counterexample, "search for (k, n) with tr((AB^n)^k) != tr(A^k)")
    matrices(p, "A", "B")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--kmax-cap", type=int, default=DEFAULT_KMAX_CAP)
    p.add_argument("--nmax-cap", type=int, default=DEFAULT_NMAX_CAP)
    p = add("pk", cmd_pk, "tabulate p_k", default_format="tsv")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--x", required=True, help="comma-separated rationals x_1..x_{m+1}")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--kmax-cap", type=int, default=DEFAULT_KMAX_CAP)
    p = add("tnn", cmd_tnn, "exhaustive total nonnegativity scan")
    matrices(p, "A")
    p.add_argument("--tnn-cap", type=int, default=DEFAULT_TNN_CAP)
    p = add("pascal", cmd_pascal, "Pascal matrix L_n and its bidiagonal factors")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--factor", action="store_true")
    p.add_argument("--max-pascal", type=int, default=DEFAULT_MAX_PASCAL)
    p = add("minor-positivity", cmd_minor_positivity, "positive binomial minor with chain certificate")
    p.add_argument("--qs", required=True, help="comma-separated strictly increasing positive integers")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--max-pascal", type=int, default=DEFAULT_MAX_PASCAL)
    p = add("commutator-check", cmd_commutator_check, "quasi-unipotence of a central product of commutators")
    p.add_argument("--input", required=True, metavar="FILE", help='JSON {"g": M, "xs": [M...], "ys": [M...]}')
    p = add("check-cert", cmd_check_cert, "re-validate a triangularization certificate")
    p.add_argument("--cert", required=True, metavar="FILE")
    return parser


def render(args, outcome: Outcome) -> str:
    if args.format == "tsv":
        lines = [f"# lkcert {__version__} {args.command}"]
        lines += ["\t".join(row) for row in outcome.rows]
        return "\n".join(lines) + "\n"
    envelope = {"header": {"tool": "lkcert", "version": __version__, "command": args.command}, "result": outcome.result}
    return json.dumps(envelope, indent=2) + "\n"


def _fail(args, kind: str, message: str, code: int) -> int:
    payload = {"header": {"tool": "lkcert", "version": __version__, "command": getattr(args, "command", None)},
               "error": {"kind": kind, "message": message}}
    print(f"lkcert: {kind}: {message}", file=sys.stderr)
    text = json.dumps(payload, indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        outcome = args.func(args)
    except InputError as exc:
        return _fail(args, "parse-error", str(exc), EXIT_INPUT)
    except PreconditionError as exc:
        return _fail(args, exc.kind, str(exc), EXIT_INPUT)
    except ResourceError as exc:
        return _fail(args, "resource-cap", str(exc), EXIT_RESOURCE)
    except TheoremFalsified as exc:
        return _fail(args, "theorem-falsified", f"{exc} inputs={json.dumps(exc.inputs)}", EXIT_FALSIFIED)
    except DomainError as exc:
        return _fail(args, "domain-error", str(exc), EXIT_INPUT)
    text = render(args, outcome)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return outcome.code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
