"""Command-line interface: ``qcf dist | mcm | compare | cf | preset | show``.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .exceptions import ConvergenceError, DomainError
from .inversion import DistResult
from .modelspec import ModelSpec, load_model_spec, parse_grid_spec
from .model import cf_linear_combination
from .presets import preset, preset_documents, preset_names
from .workflow import compare, distribution, select_backend

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


class InputError(Exception):
    """Bad command-line input (reported with exit code 2)."""


def fmt_machine(v: float) -> str:
    return format(float(v), ".17g")


def fmt_human(v: float) -> str:
    v = float(v)
    if v != 0 and (abs(v) >= 1e6 or abs(v) < 1e-3):
        return f"{v:.4e}"
    return f"{v:.4f}"


def fmt_interval(lo: float, hi: float) -> str:
    return f"[{fmt_human(lo)}, {fmt_human(hi)}]"


# ---------------------------------------------------------------------------
# argument helpers


def _load_spec(args) -> ModelSpec:
    if args.preset and args.model:
        raise InputError("give either a model file or --preset, not both")
    if args.preset:
        return preset(args.preset)
    if not args.model:
        raise InputError("a model file or --preset is required")
    path = Path(args.model)
    if not path.is_file():
        raise InputError(f"model file not found: {path}")
    return load_model_spec(path)


def _parse_probs(text: Optional[str], fallback) -> List[float]:
    if text is None:
        return list(fallback) if fallback else [0.025, 0.975]
    try:
        probs = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InputError(f"bad --probs {text!r}") from None
    if not probs:
        raise InputError("--probs is empty")
    return sorted(probs)


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("model", nargs="?", help="model file (JSON)")
    p.add_argument("--preset", choices=preset_names(), help="use a built-in example")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcf",
        description="Distribution of linear combinations of Tsallis q-Gaussian variables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", help="PDF/CDF table, quantiles and coverage interval")
    _add_model_args(d)
    d.add_argument("--x", help="grid: a,b,c | a:b:n | support:n")
    d.add_argument("--probs", help="comma-separated probabilities")
    d.add_argument("--level", type=float, default=0.95, help="coverage level")
    d.add_argument("--backend", choices=["auto", "grid", "adaptive"], default="auto")
    d.add_argument("--out", help="write the table here")
    d.add_argument("--format", choices=["csv", "json"], default=None)

    m = sub.add_parser("mcm", help="Monte Carlo coverage interval")
    _add_model_args(m)
    m.add_argument("--n", type=int, help="number of samples")
    m.add_argument("--seed", type=int, help="random seed")
    m.add_argument("--level", type=float, help="coverage level")
    m.add_argument("--chunks", type=int, help="number of sampling chunks")
    m.add_argument("--out", help="write the result as JSON here")

    c = sub.add_parser("compare", help="CFA and MCM side by side")
    _add_model_args(c)
    c.add_argument("--n", type=int, help="number of samples")
    c.add_argument("--seed", type=int, help="random seed")
    c.add_argument("--level", type=float, help="coverage level")
    c.add_argument("--backend", choices=["auto", "grid", "adaptive"], default="auto")
    c.add_argument("--out", help="write the report as JSON here")

    f = sub.add_parser("cf", help="characteristic function table")
    _add_model_args(f)
    f.add_argument("--t", default="0:10:101", help="grid: a,b,c | a:b:n")
    f.add_argument("--out", help="write the table here (CSV)")

    p = sub.add_parser("preset", help="list or print built-in examples")
    psub = p.add_subparsers(dest="preset_command", required=True)
    psub.add_parser("list", help="list preset names")
    show = psub.add_parser("show", help="print a preset as a model file")
    show.add_argument("name", choices=preset_names())

    s = sub.add_parser("show", help="summarise a JSON result written by 'dist'")
    s.add_argument("result", help="result file (JSON)")
    return parser


# ---------------------------------------------------------------------------
# output


def _terms(n: int) -> str:
    return f"{n} term" if n == 1 else f"{n} terms"


def _summary(result: DistResult, title: str) -> str:
    lines = [title]
    for p, v in result.quantiles:
        lines.append(f"  quantile {p:g}: {fmt_human(v)}")
    if result.coverage is not None:
        cov = result.coverage
        lines.append(f"  {100 * cov.level:g}% coverage interval: {fmt_interval(cov.lower, cov.upper)}")
    d = result.diagnostics
    parts = [f"backend={d.get('backend_used')}"]
    if d.get("n_points_used") is not None:
        parts.append(f"n_points={d['n_points_used']}")
    if d.get("grid_step") is not None:
        parts.append(f"dt={d['grid_step']:.4g}")
    if d.get("truncation_point") is not None:
        parts.append(f"T={d['truncation_point']:.4g}")
    if d.get("est_error") is not None:
        parts.append(f"est_error={d['est_error']:.2g}")
    if d.get("elapsed") is not None:
        parts.append(f"elapsed={d['elapsed']:.3f}s")
    lines.append("  " + " ".join(parts))
    return "\n".join(lines)


def _table_csv(result: DistResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "pdf", "cdf"])
    for row in zip(result.x, result.pdf, result.cdf):
        w.writerow([fmt_machine(v) for v in row])
    return buf.getvalue()


def dumps(obj, indent: int = 0) -> str:
    """JSON text with every float written to 17 significant digits.

    Non-finite floats become ``null``.
    """
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return fmt_machine(v) if math.isfinite(v) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# ---------------------------------------------------------------------------
# commands


def _cmd_dist(args) -> int:
    spec = _load_spec(args)
    model = spec.model()
    x_spec = args.x if args.x is not None else spec.x
    x = parse_grid_spec(x_spec, support=model.support())
    probs = _parse_probs(args.probs, spec.probs)
    backend = args.backend
    if backend == "auto":
        backend = spec.options.get("backend") or select_backend(model, x)
    opts = spec.inversion_options(backend=backend)
    result = distribution(model, x, probs, opts, level=args.level)
    title = f"{spec.name or 'model'}: {_terms(len(model))}"
    fmt = args.format or ("json" if args.out and args.out.endswith(".json") else "csv")
    if fmt == "json":
        doc = result.to_dict()
        doc["model"] = spec.to_dict()
        _write(args.out, dumps(doc) + "\n")
    else:
        _write(args.out, _table_csv(result))
    stream = sys.stdout if args.out else sys.stderr
    print(_summary(result, title), file=stream)
    return EXIT_OK


def _mcm_options(spec: ModelSpec, args):
    overrides = {}
    if args.n is not None:
        overrides["n_samples"] = args.n
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.level is not None:
        overrides["coverage_level"] = args.level
    if getattr(args, "chunks", None) is not None:
        overrides["n_chunks"] = args.chunks
    return spec.mcm_options(**overrides)


def _cmd_mcm(args) -> int:
    spec = _load_spec(args)
    model = spec.model()
    from .mcm import propagate

    opts = _mcm_options(spec, args)
    res = propagate(model, opts)
    print(f"{spec.name or 'model'}: Monte Carlo, N={res.n_samples}, seed={res.seed}")
    print(f"  {100 * res.coverage_level:g}% coverage interval: {fmt_interval(res.ci_lower, res.ci_upper)}")
    if res.sample_mean is not None:
        print(f"  sample mean: {fmt_human(res.sample_mean)}")
    print(f"  elapsed={res.elapsed:.3f}s")
    if args.out:
        _write(args.out, dumps(res.to_dict()) + "\n")
    return EXIT_OK


def _cmd_compare(args) -> int:
    spec = _load_spec(args)
    model = spec.model()
    mcm_opts = _mcm_options(spec, args)
    backend = args.backend
    if backend == "auto":
        backend = spec.options.get("backend") or select_backend(model)
    inv_opts = spec.inversion_options(backend=backend)
    rep = compare(model, inv_opts, mcm_opts)
    dl, du = rep.differences
    rl, ru = rep.relative_differences
    print(f"{spec.name or 'model'}: CFA vs MCM (N={mcm_opts.n_samples}, seed={mcm_opts.seed})")
    print(f"  CFA {fmt_interval(rep.cfa_lower, rep.cfa_upper)}  ({rep.cfa_elapsed:.3f}s, {backend})")
    print(f"  MCM {fmt_interval(rep.mcm.ci_lower, rep.mcm.ci_upper)}  ({rep.mcm.elapsed:.3f}s)")
    print(f"  endpoint differences: {fmt_human(dl)}, {fmt_human(du)} "
          f"(relative {rl:.2%}, {ru:.2%})")
    if rep.flagged:
        print("  FLAG: endpoint relative difference exceeds 10%")
    verdict = "below" if rep.ks_passed else "ABOVE"
    print(f"  KS statistic {rep.ks:.5f} ({verdict} critical value {rep.ks_critical:.5f})")
    if args.out:
        _write(args.out, dumps(rep.to_dict()) + "\n")
    return EXIT_OK


def _cmd_cf(args) -> int:
    spec = _load_spec(args)
    model = spec.model()
    t = np.asarray(parse_grid_spec(args.t), dtype=float)
    values = cf_linear_combination(t, model)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "re", "im"])
    for tt, v in zip(t, np.atleast_1d(values)):
        w.writerow([fmt_machine(tt), fmt_machine(v.real), fmt_machine(v.imag)])
    _write(args.out, buf.getvalue())
    return EXIT_OK


def _cmd_preset(args) -> int:
    if args.preset_command == "list":
        for name, doc in preset_documents().items():
            print(f"{name}  {doc.get('description', '')}")
    else:
        print(dumps(preset_documents()[args.name]))
    return EXIT_OK


def _cmd_show(args) -> int:
    path = Path(args.result)
    if not path.is_file():
        raise InputError(f"result file not found: {path}")
    try:
        data = json.loads(path.read_text())
        result = DistResult.from_dict(data)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a result file ({exc})") from None
    name = (data.get("model") or {}).get("name") or "model"
    n_terms = len((data.get("model") or {}).get("terms", []))
    print(_summary(result, f"{name}: {_terms(n_terms)}"))
    return EXIT_OK


COMMANDS = {
    "dist": _cmd_dist,
    "mcm": _cmd_mcm,
    "compare": _cmd_compare,
    "cf": _cmd_cf,
    "preset": _cmd_preset,
    "show": _cmd_show,
}


_VALUE_FLAGS = ("--x", "--t", "--probs")


def _join_negative_values(argv: Sequence[str]) -> List[str]:
    # argparse takes "--x -1,0,1" for two options; glue such values to their flag
    out: List[str] = []
    it = iter(argv)
    for arg in it:
        if arg in _VALUE_FLAGS:
            value = next(it, None)
            if value is not None and value.startswith("-") and (value[1:2].isdigit() or value[1:2] == "."):
                out.append(f"{arg}={value}")
                continue
            out.append(arg)
            if value is not None:
                out.append(value)
        else:
            out.append(arg)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except (InputError, DomainError) as exc:
        print(f"qcf: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"qcf: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
