"""Command-line interface: sample, integrate, verify, scan, jacobian.

Exit codes: 0 success, 1 invalid input, 2 numeric non-convergence,
3 verification failure.  Errors are reported on stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .admissible import AdmissibleFunction, ArityError
from .euler_param import invert_batch, sample_haar_coords_batch, to_group_batch
from .finite_type import FiniteTypeMonomial, NotFiniteTypeError, evaluate_batch, haar_integral
from .group_core import MAX_DIMENSION, GroupElementError
from .harness import G2_LIMIT_PRESETS, JacobianSpec, MissingLimitError, g2_limit_from_json, scan
from .oracle import QuadratureError, mc_integrate, sample_su_qr_batch
from .verify import SUITES, run_suite

EXIT_INVALID, EXIT_NONCONVERGENCE, EXIT_SUITE = 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with the
    # non-convergence code
    def error(self, message):
        raise UsageError(message)


def _dimension(text: str) -> int:
    n = int(text)
    if not 2 <= n <= MAX_DIMENSION:
        raise argparse.ArgumentTypeError(f"n must be in 2..{MAX_DIMENSION}")
    return n


def _rank(text: str) -> int:
    n = int(text)
    if not 1 <= n <= MAX_DIMENSION:
        raise argparse.ArgumentTypeError(f"n must be in 1..{MAX_DIMENSION}")
    return n


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eulerhaar", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"eulerhaar {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="draw Haar-random SU(n) elements")
    s.add_argument("--group", choices=["su"], default="su")
    s.add_argument("--n", type=_dimension, required=True)
    s.add_argument("--count", type=_positive, required=True)
    s.add_argument("--sampler", choices=["euler", "qr"], default="euler")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--emit", choices=["matrix", "coords"], default="matrix")

    s = sub.add_parser("integrate", help="exact normalised Haar integral of a monomial")
    s.add_argument("--monomial", required=True, help="JSON monomial file")
    s.add_argument("--mc", type=int, default=0, metavar="SAMPLES", help="add a Monte Carlo cross-check")
    s.add_argument("--sampler", choices=["euler", "qr"], default="euler")
    s.add_argument("--seed", type=int, help="required with --mc")

    s = sub.add_parser("verify", help="run verification batteries")
    s.add_argument("--suite", choices=["all", *SUITES], default="all")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=10 ** 6, help="Monte Carlo samples for the haar suite")

    s = sub.add_parser("scan", help="hypothesis integrals for P = 1..pmax and classification")
    s.add_argument("--fn", required=True, help="JSON admissible-function file")
    s.add_argument("--family", choices=["su", "sp", "g2"], required=True)
    s.add_argument("--n", type=_rank)
    s.add_argument("--pmax", type=_positive, required=True)
    s.add_argument("--g2-limit", help=f"JSON file, or preset:{'|'.join(G2_LIMIT_PRESETS)}")
    s.add_argument("--sp-variant", choices=["printed", "squared"], default="printed")
    s.add_argument("--method", choices=["auto", "exact", "numeric"], default="auto")
    s.add_argument("--target-err", type=float, default=1e-9)

    s = sub.add_parser("jacobian", help="print the expanded Jacobian polynomial")
    s.add_argument("--family", choices=["su", "sp", "g2"], required=True)
    s.add_argument("--n", type=_rank)
    s.add_argument("--sp-variant", choices=["printed", "squared"], default="printed")

    for sp in sub.choices.values():
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
    return p


def _meta(args) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}
    return {"tool": "eulerhaar", "version": __version__, "config": config, "seed": getattr(args, "seed", None)}


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _csv(meta: dict, header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(f"# eulerhaar {meta['version']} config={json.dumps(meta['config'], sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _spec(args) -> JacobianSpec:
    if args.family in ("su", "sp") and args.n is None:
        raise UsageError(f"--family {args.family} needs --n")
    limit = None
    if args.family == "g2" and getattr(args, "g2_limit", None):
        if args.g2_limit.startswith("preset:"):
            limit = g2_limit_from_json({"preset": args.g2_limit.split(":", 1)[1]})
        else:
            limit = g2_limit_from_json(_load_json(args.g2_limit))
    return JacobianSpec(args.family, args.n if args.family != "g2" else None, args.sp_variant, limit)


# -- commands ---------------------------------------------------------------------------

def cmd_sample(args):
    rng = np.random.default_rng(args.seed)
    if args.sampler == "euler":
        phi, psi, omega = sample_haar_coords_batch(args.n, args.count, rng)
        mats = to_group_batch(args.n, phi, psi, omega) if args.emit == "matrix" else None
    else:
        mats = sample_su_qr_batch(args.n, args.count, rng)
        if args.emit == "coords":
            phi, psi, omega = invert_batch(mats)
    meta = _meta(args)
    if args.emit == "matrix":
        if args.format == "csv":
            header = ["index"] + [f"g{i + 1}{j + 1}_{p}" for i in range(args.n) for j in range(args.n) for p in ("re", "im")]
            rows = [[b] + [repr(float(v)) for z in m.ravel() for v in (z.real, z.imag)] for b, m in enumerate(mats)]
            return 0, _csv(meta, header, rows)
        data = [[[[float(z.real), float(z.imag)] for z in row] for row in m] for m in mats]
        return 0, {"meta": meta, "matrices": data}
    if args.format == "csv":
        na = phi.shape[1]
        header = (["index"] + [f"phi{i + 1}" for i in range(na)] + [f"psi{i + 1}" for i in range(na)]
                  + [f"omega{i + 1}" for i in range(args.n - 1)])
        rows = [[b] + [repr(float(v)) for v in np.concatenate([phi[b], psi[b], omega[b]])] for b in range(args.count)]
        return 0, _csv(meta, header, rows)
    coords = [{"phi": phi[b].tolist(), "psi": psi[b].tolist(), "omega": omega[b].tolist()} for b in range(args.count)]
    return 0, {"meta": meta, "coordinates": coords}


def cmd_integrate(args):
    data = _load_json(args.monomial)
    try:
        f = FiniteTypeMonomial.from_json(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed monomial: {exc!r}") from None
    if not 2 <= f.n <= MAX_DIMENSION:
        raise UsageError(f"n must be in 2..{MAX_DIMENSION}")
    value = haar_integral(f)
    out = {"meta": _meta(args), "monomial": f.to_json(), "value": value.to_json()}
    if args.mc:
        if args.seed is None:
            raise UsageError("--mc needs --seed")
        est = mc_integrate(lambda c: evaluate_batch(f, *c), f.n, args.mc, sampler=args.sampler, seed=args.seed, on="coords")
        z = complex(est.mean)
        out["mc"] = {"mean": [z.real, z.imag], "stderr": est.stderr, "samples": est.samples,
                     "within_4_sigma": bool(est.within(complex(value)))}
    if args.format == "csv":
        v = out["value"]
        header = ["q", "q_im", "pi_pow", "mc_mean_re", "mc_mean_im", "mc_stderr"]
        mc = out.get("mc")
        row = [v["q"], v.get("q_im", "0"), v["pi_pow"]] + ([*mc["mean"], mc["stderr"]] if mc else ["", "", ""])
        return 0, _csv(out["meta"], header, [row])
    return 0, out


def cmd_verify(args):
    results = run_suite(args.suite, seed=args.seed, samples=args.samples)
    passed = all(r.passed for r in results)
    code = 0 if passed else EXIT_SUITE
    if args.format == "csv":
        rows = [[r.suite, c.name, c.passed] for r in results for c in r.checks]
        return code, _csv(_meta(args), ["suite", "check", "passed"], rows)
    return code, {"meta": _meta(args), "passed": passed, "suites": [r.to_json() for r in results]}


def cmd_scan(args):
    spec = _spec(args)
    if spec.family == "g2" and spec.g2_limit is None:
        raise MissingLimitError("--family g2 needs an explicit --g2-limit (file or preset:NAME); "
                                "the upper limit S(xi_1) has no default")
    try:
        f = AdmissibleFunction.from_json(_load_json(args.fn))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed admissible function: {exc!r}") from None
    report = scan(f, args.pmax, spec, args.method, args.target_err)
    if args.format == "csv":
        meta = _meta(args)
        body = report.to_csv()
        return 0, f"# eulerhaar {meta['version']} config={json.dumps(meta['config'], sort_keys=True)}\n" + body
    return 0, {"meta": _meta(args), **report.to_json()}


def cmd_jacobian(args):
    spec = _spec(args)
    poly = spec.jacobian()
    if args.format == "csv":
        header = ["xexp", "sflags", "re", "im"]
        rows = [[" ".join(map(str, t["xexp"])), " ".join(map(str, t["sflags"])), t["re"], t["im"]]
                for t in poly.to_json()]
        return 0, _csv(_meta(args), header, rows)
    return 0, {"meta": _meta(args), "family": spec.family, "n": spec.n, "k": poly.k,
               "variables": _variable_names(spec), "terms": poly.to_json()}


def _variable_names(spec: JacobianSpec) -> list[str]:
    xi = set(spec.xi_vars)
    names, nx, nxi = [], 0, 0
    for i in range(spec.x_arity):
        if i in xi:
            nxi += 1
            names.append(f"xi{nxi}")
        else:
            nx += 1
            names.append(f"x{nx}")
    return names


COMMANDS = {"sample": cmd_sample, "integrate": cmd_integrate, "verify": cmd_verify,
            "scan": cmd_scan, "jacobian": cmd_jacobian}


def _fail(code: int, exc: BaseException) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code, out = COMMANDS[args.command](args)
    except QuadratureError as exc:
        return _fail(EXIT_NONCONVERGENCE, exc)
    except (UsageError, MissingLimitError, ArityError, NotFiniteTypeError, GroupElementError, ValueError) as exc:
        return _fail(EXIT_INVALID, exc)
    text = out if isinstance(out, str) else json.dumps(out, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
