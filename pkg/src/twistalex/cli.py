"""Command line front end: ``twistalex compute | scaffold | verify``.

A job file is JSON::

    {
      "field": "cyclo(6)",
      "presentation": "hopf d=3",
      "rank": 1,
      "epsilon": [3, 1, 1],
      "rho": {"x0": [["1"]], "x1": [["1"]], "x2": [["1"]]},
      "reports": ["modules", "polynomials"]
    }

``presentation`` is either a builder call (``hopf d=3``, ``a_singularity
n=2``, ``free g=2``) or presentation text in the line grammar of
:func:`twistalex.presentation.parse_presentation`, given as one string or
a list of lines.  ``epsilon`` and ``rho`` are lists in generator order or
objects keyed by generator name.  Optional keys: ``weights`` (a list of
``[d_l, n_l]`` pairs for the divisibility bound) and
``container_exponent`` (defaults to ``eps(x0)``).

Exit codes: 0 success, 1 validation error, 2 syntax error, 3 a theorem
check came out false.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .analysis import (check_divisibility, check_splitting, default_weights,
                       is_hopf_setup, torsion_certificate)
from .errors import SyntaxProblem, TwistAlexError, ValidationError
from .field import parse_field
from .presentation import (a_singularity_link, free_group, hopf_link, parse_presentation,
                           render_presentation)
from .twisted import alexander_modules, make_setup, wada_quotient

EXIT_OK, EXIT_VALIDATION, EXIT_SYNTAX, EXIT_CHECK = 0, 1, 2, 3

REPORTS = ("modules", "polynomials", "wada", "divisibility", "splitting", "torsion")


class UnknownBuilder(ValidationError):
    pass


class JobError(ValidationError):
    """A job file is valid JSON but misses or misuses a key."""


# -- builders -----------------------------------------------------------

_BUILDERS = {
    "hopf": ("d", lambda v, extra: hopf_link(v)),
    "a_singularity": ("n", lambda v, extra: a_singularity_link(v, bool(extra.get("redundant", 0)))),
    "free": ("g", lambda v, extra: free_group(v)),
}

_BUILDER_CALL = re.compile(r"^\s*([A-Za-z_]\w*)((?:\s+\w+\s*=\s*-?\d+)*)\s*$")


def parse_builder(text: str):
    """``"hopf d=3"`` -> ``("hopf", {"d": 3})``; ``None`` if not a builder call."""
    m = _BUILDER_CALL.match(text)
    if not m or "\n" in text.strip():
        return None
    params = {k: int(v) for k, v in re.findall(r"(\w+)\s*=\s*(-?\d+)", m.group(2))}
    return m.group(1), params


def run_builder(name: str, params: dict):
    if name not in _BUILDERS:
        raise UnknownBuilder(f"unknown builder {name!r}; expected one of {sorted(_BUILDERS)}")
    key, make = _BUILDERS[name]
    if key not in params:
        raise JobError(f"builder {name} needs the parameter {key}=<int>")
    value = params[key]
    if value < 1:
        raise JobError(f"builder parameter {key} must be positive")
    return make(value, params)


def _presentation_of(source):
    if isinstance(source, list):
        source = "\n".join(source)
    if not isinstance(source, str):
        raise JobError("presentation must be a string or a list of lines")
    call = parse_builder(source)
    if call is not None and call[0] in _BUILDERS:
        return run_builder(*call)
    if call is not None and "gens:" not in source:
        raise UnknownBuilder(f"unknown builder {call[0]!r}; expected one of {sorted(_BUILDERS)}")
    return parse_presentation(source)


# -- jobs ---------------------------------------------------------------

def load_job(path) -> dict:
    text = Path(path).read_text()
    try:
        job = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SyntaxProblem(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(job, dict):
        raise JobError("a job file must hold a JSON object")
    return job


def setup_from_job(job: dict):
    for key in ("field", "presentation", "epsilon", "rho"):
        if key not in job:
            raise JobError(f"job is missing the key {key!r}")
    field = parse_field(str(job["field"]))
    pres = _presentation_of(job["presentation"])
    eps, rho = job["epsilon"], job["rho"]
    names = pres.generator_names
    for what, value in (("epsilon", eps), ("rho", rho)):
        if isinstance(value, dict):
            missing = [n for n in names if n not in value]
            extra = [n for n in value if n not in names]
            if missing or extra:
                raise JobError(f"{what} keys do not match the generators "
                               f"(missing {missing}, unknown {extra})")
        elif not isinstance(value, list):
            raise JobError(f"{what} must be a list or an object")
    setup = make_setup(pres, field, eps, rho)
    if "rank" in job and int(job["rank"]) != setup.rank:
        raise JobError(f"rank {job['rank']} does not match {setup.rank}x{setup.rank} matrices")
    return setup


def _poly(prefix, p) -> dict:
    return {prefix: str(p), prefix + "_coefficients": p.coefficient_strings()}


def _module_doc(mod) -> dict:
    return {
        "free_rank": mod.free_rank,
        "torsion": [str(p) for p in mod.torsion],
        "torsion_coefficients": [p.coefficient_strings() for p in mod.torsion],
        **_poly("order", mod.order),
    }


def _echo(setup, job) -> dict:
    return {
        "field": str(setup.field),
        "presentation": render_presentation(setup.presentation),
        "rank": setup.rank,
        "epsilon": dict(zip(setup.presentation.generator_names, setup.epsilon)),
        "rho": {n: [[str(x) for x in row] for row in M]
                for n, M in zip(setup.presentation.generator_names, setup.rho)},
        "reports": _reports_of(job),
    }


def _reports_of(job):
    reports = job.get("reports", ["modules", "polynomials"])
    if not isinstance(reports, list):
        raise JobError("reports must be a list")
    unknown = [r for r in reports if r not in REPORTS]
    if unknown:
        raise JobError(f"unknown reports {unknown}; choose from {list(REPORTS)}")
    return sorted(set(reports), key=REPORTS.index)


def _weights_of(setup, job):
    if "weights" in job:
        return [tuple(w) for w in job["weights"]]
    return default_weights(setup)


def _divisibility_doc(setup, job):
    weights = _weights_of(setup, job)
    r = check_divisibility(setup, weights)
    doc = {"holds": r.holds, "weights": [list(w) for w in weights],
           "bound_factored": str(r.factors),
           **_poly("delta_1", r.delta1), **_poly("bound", r.bound)}
    doc.update(_poly("witness_quotient", r.witness_quotient) if r.holds
               else {"witness_quotient": None})
    return doc


def _splitting_doc(setup, job):
    r = check_splitting(setup, job.get("container_exponent"))
    return {"contained": r.contained, "container_exponent": r.exponent,
            **_poly("delta_1", r.delta1), **_poly("container", r.container),
            **_poly("residue", r.residue)}


def _torsion_doc(setup):
    cert = torsion_certificate(setup)
    return {"acyclic": cert.acyclic,
            "degrees": [{"degree": d.degree, "torsion": d.torsion, "free_rank": d.free_rank,
                         **_poly("order", d.order)} for d in cert.degrees]}


def run_job(job: dict) -> dict:
    """Compute every requested report for a parsed job."""
    setup = setup_from_job(job)
    reports = _reports_of(job)
    mods = alexander_modules(setup)
    doc = {"engine_version": __version__, "job": _echo(setup, job),
           "modules": {f"H{i}": _module_doc(m) for i, m in enumerate(mods)},
           "epsilon_surjective": setup.epsilon_surjective}
    if "polynomials" in reports:
        polys = {}
        for i, m in enumerate(mods):
            polys.update(_poly(f"delta_{i}", m.order))
        doc["polynomials"] = polys
    if "wada" in reports:
        w = wada_quotient(setup)
        doc["wada"] = {"divisible": w.divisible, **_poly("delta_1", w.delta1),
                       **_poly("delta_0", w.delta0)}
        doc["wada"].update(_poly("quotient", w.quotient) if w.divisible else {"quotient": None})
    if "divisibility" in reports:
        doc["divisibility"] = _divisibility_doc(setup, job)
    if "splitting" in reports:
        doc["splitting"] = _splitting_doc(setup, job)
    if "torsion" in reports:
        doc["torsion"] = _torsion_doc(setup)
    return doc


def verify_job(job: dict) -> dict:
    """Theorem checks only: torsion always, divisibility and splitting for Hopf setups."""
    setup = setup_from_job(job)
    checks = {"torsion": _torsion_doc(setup)}
    checks["torsion"]["passed"] = checks["torsion"]["acyclic"]
    if is_hopf_setup(setup):
        checks["divisibility"] = _divisibility_doc(setup, job)
        checks["divisibility"]["passed"] = checks["divisibility"]["holds"]
        checks["splitting"] = _splitting_doc(setup, job)
        checks["splitting"]["passed"] = checks["splitting"]["contained"]
    return {"engine_version": __version__, "job": _echo(setup, job), "checks": checks,
            "passed": all(c["passed"] for c in checks.values())}


def error_doc(exc: Exception) -> dict:
    err = {"type": type(exc).__name__, "message": getattr(exc, "message", None) or str(exc)}
    for attr in ("line", "column", "relator_index", "generator"):
        value = getattr(exc, attr, None)
        if value is not None:
            err[attr] = value
    return {"engine_version": __version__, "error": err}


def exit_code_for(exc: Exception) -> int:
    if isinstance(exc, SyntaxProblem):
        return EXIT_SYNTAX
    return EXIT_VALIDATION


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# -- text rendering -----------------------------------------------------

def render_text(doc: dict) -> str:
    if "error" in doc:
        e = doc["error"]
        where = f" (line {e['line']}, column {e['column']})" if "line" in e else ""
        return f"error: {e['message']}{where}\n"
    lines = [f"field {doc['job']['field']}, rank {doc['job']['rank']}"]
    for name, m in doc.get("modules", {}).items():
        tors = ", ".join(m["torsion"]) or "none"
        lines.append(f"{name}: free rank {m['free_rank']}; torsion {tors}; order {m['order']}")
    for key in ("polynomials", "wada", "divisibility", "splitting", "torsion", "checks"):
        if key in doc:
            lines.append(f"{key}:")
            lines.extend(_flatten(doc[key], "  "))
    if "passed" in doc:
        lines.append("all checks passed" if doc["passed"] else "some checks FAILED")
    return "\n".join(lines) + "\n"


def _is_plain(v):
    # lists of scalars (or of scalar lists) print on one line
    return isinstance(v, list) and all(
        not isinstance(x, dict) and (not isinstance(x, list) or _is_plain(x)) for x in v)


def _flatten(obj, indent):
    out = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if k.endswith("_coefficients"):
                continue
            if _is_plain(v):
                out.append(f"{indent}{k}: {json.dumps(v)}")
            elif isinstance(v, (dict, list)):
                out.append(f"{indent}{k}:")
                out.extend(_flatten(v, indent + "  "))
            else:
                out.append(f"{indent}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                out.append(f"{indent}-")
                out.extend(_flatten(v, indent + "  "))
            else:
                out.append(f"{indent}- {v}")
    return out


# -- commands -----------------------------------------------------------

def _atomic_write(path: Path, text: str):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _compute_one(path) -> tuple:
    """Run one job file; returns ``(exit_code, document)``."""
    try:
        return EXIT_OK, run_job(load_job(path))
    except TwistAlexError as exc:
        return exit_code_for(exc), error_doc(exc)
    except (OSError, TypeError, ValueError, KeyError) as exc:
        return EXIT_VALIDATION, error_doc(JobError(str(exc)))


def _batch_worker(args):
    src, dst = args
    code, doc = _compute_one(src)
    _atomic_write(Path(dst), dumps(doc))
    return code


def _run_batch(directory, out_dir, workers):
    directory = Path(directory)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return EXIT_VALIDATION
    out_dir = Path(out_dir) if out_dir else directory
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = sorted(p for p in directory.glob("*.json") if not p.name.endswith(".result.json"))
    tasks = [(str(p), str(out_dir / (p.stem + ".result.json"))) for p in jobs]
    if workers == 1 or len(tasks) <= 1:
        codes = [_batch_worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            codes = list(pool.map(_batch_worker, tasks))
    for (src, dst), code in zip(tasks, codes):
        print(f"{Path(src).name} -> {Path(dst).name}: exit {code}")
    return max(codes, default=EXIT_OK)


def _emit(doc, fmt, out):
    text = dumps(doc) if fmt == "json" else render_text(doc)
    if out:
        _atomic_write(Path(out), text)
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    if args.jobs:
        return _run_batch(args.jobs, args.out, args.workers)
    if not args.job:
        print("error: give a job file or --jobs <dir>", file=sys.stderr)
        return EXIT_VALIDATION
    code, doc = _compute_one(args.job)
    _emit(doc, args.format, args.out)
    return code


def cmd_verify(args) -> int:
    try:
        doc = verify_job(load_job(args.job))
    except TwistAlexError as exc:
        _emit(error_doc(exc), args.format, None)
        return exit_code_for(exc)
    except (OSError, TypeError, ValueError, KeyError) as exc:
        _emit(error_doc(JobError(str(exc))), args.format, None)
        return EXIT_VALIDATION
    _emit(doc, args.format, None)
    return EXIT_OK if doc["passed"] else EXIT_CHECK


def scaffold(name: str, params: dict) -> dict:
    """A ready-to-run job with trivial rho and linking-number style epsilon."""
    pres = run_builder(name, params)
    names = pres.generator_names
    if name == "hopf":
        d = params["d"]
        eps = [d] + [1] * (d - 1)
    elif name == "a_singularity":
        eps = [1] * (len(names) - 1) + [2]
    else:
        eps = [1] * len(names)
    rank = params.get("rank", 1)
    if rank < 1:
        raise JobError("rank must be positive")
    ident = [["1" if i == j else "0" for j in range(rank)] for i in range(rank)]
    reports = list(REPORTS) if name == "hopf" else ["modules", "polynomials", "torsion"]
    call = f"{name} " + " ".join(f"{k}={v}" for k, v in params.items() if k != "rank")
    return {"field": "Q", "presentation": call, "rank": rank,
            "epsilon": dict(zip(names, eps)),
            "rho": {n: ident for n in names}, "reports": reports}


def cmd_scaffold(args) -> int:
    params = {}
    for item in args.params:
        key, sep, value = item.partition("=")
        if not sep or not re.fullmatch(r"-?\d+", value.strip()):
            print(f"error: parameters look like d=3, got {item!r}", file=sys.stderr)
            return EXIT_SYNTAX
        params[key.strip()] = int(value)
    try:
        doc = scaffold(args.builder, params)
    except TwistAlexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    sys.stdout.write(dumps(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistalex",
                                     description="Twisted Alexander modules of group presentations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute the reports requested by a job file")
    p.add_argument("job", nargs="?", help="job file (JSON)")
    p.add_argument("--jobs", metavar="DIR", help="run every *.json job in DIR")
    p.add_argument("--out", help="output file (or output directory with --jobs)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--workers", type=int, default=None, help="processes for --jobs")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("scaffold", help="print a job file for a built-in presentation")
    p.add_argument("builder", help="hopf, a_singularity or free")
    p.add_argument("params", nargs="*", help="d=<int>, n=<int>, g=<int>, optional rank=<int>")
    p.set_defaults(func=cmd_scaffold)

    p = sub.add_parser("verify", help="run the theorem checks on a job file")
    p.add_argument("job")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
