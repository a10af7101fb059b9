"""Command line front end: read a problem file, decompose, write a JSON report.

Problem files are JSON. Measures mode::

    {"atoms": ["a", "b", "c"],
     "mu": {"a": "1", "b": "1", "c": "0"},
     "nu": {"a": "2", "b": "0", "c": "3"},
     "backend": "exact"}

Forms mode::

    {"a": [["1", "0"], ["0", "0"]], "b": [["1", "0"], ["0", "1"]]}

Weights are decimal strings, ``"p/q"`` rationals, or JSON numbers (parsed as
decimals, so ``0.1`` stays exactly 1/10 in the exact backend). ``backend`` is
optional; the ``--backend`` flag overrides it.

Exit codes: 0 all diagnostics pass, 2 input error, 3 a verification
diagnostic failed.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .forms import FORMS_TOL, PsdForm, decompose_forms
from .hilbert import DEFAULT_TOL, AtomSpace, InputError, SimpleFunction, to_scalar
from .measure import Decomposition, Measure, decompose, standard_form_check

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3

MODES = ("measures", "forms")
BACKENDS = ("exact", "float")


@dataclass(frozen=True)
class ProblemFile:
    mode: str
    backend: str
    atoms: tuple[str, ...] = ()
    mu: Measure | None = None
    nu: Measure | None = None
    a: PsdForm | None = None
    b: PsdForm | None = None


def _load_json(path: Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    return doc


def _weight(raw, where: str, exact: bool):
    if isinstance(raw, bool) or not isinstance(raw, (str, int, Decimal)):
        raise InputError(f"{where}: expected a number or numeric string, got {raw!r}")
    if isinstance(raw, Decimal):
        raw = Fraction(raw)
    try:
        value = to_scalar(to_scalar(raw, True), exact)
    except InputError:
        raise InputError(f"{where}: cannot parse {raw!r}") from None
    if value < 0:
        raise InputError(f"{where}: negative weight {raw!r}")
    return value


def parse_problem(path, mode: str = "measures", backend: str | None = None) -> ProblemFile:
    """Read and validate a problem file; raises :class:`InputError` with a field path."""
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}")
    doc = _load_json(Path(path))
    declared = doc.get("backend")
    if declared is not None and declared not in BACKENDS:
        raise InputError(f"{path}: backend: expected one of {BACKENDS}, got {declared!r}")
    backend = backend or declared or ("exact" if mode == "measures" else "float")
    if mode == "measures":
        return _parse_measures(path, doc, backend)
    if backend != "float":
        raise InputError(f"{path}: forms mode supports only the float backend")
    return _parse_forms(path, doc)


def _parse_measures(path, doc: dict, backend: str) -> ProblemFile:
    exact = backend == "exact"
    for key in ("atoms", "mu", "nu"):
        if key not in doc:
            raise InputError(f"{path}: missing field {key!r}")
    atoms = doc["atoms"]
    if not isinstance(atoms, list) or not atoms or not all(isinstance(a, str) for a in atoms):
        raise InputError(f"{path}: atoms: expected a non-empty list of strings")
    if len(set(atoms)) != len(atoms):
        raise InputError(f"{path}: atoms: duplicate labels")
    space = AtomSpace(tuple(atoms))
    measures = {}
    for key in ("mu", "nu"):
        table = doc[key]
        if not isinstance(table, dict):
            raise InputError(f"{path}: {key}: expected an object mapping atom -> weight")
        if set(table) != set(atoms):
            missing = sorted(set(atoms) - set(table))
            extra = sorted(set(table) - set(atoms))
            raise InputError(f"{path}: {key}: atom labels differ (missing {missing}, extra {extra})")
        weights = tuple(_weight(table[a], f"{path}: {key}.{a}", exact) for a in atoms)
        measures[key] = Measure(space, weights)
    return ProblemFile("measures", backend, tuple(atoms), measures["mu"], measures["nu"])


def _parse_matrix(raw, where: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise InputError(f"{where}: expected a non-empty list of rows")
    n = len(raw)
    rows = []
    for i, row in enumerate(raw):
        if len(row) != n:
            raise InputError(f"{where}[{i}]: expected {n} entries, got {len(row)}")
        out = []
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (str, int, Decimal)):
                raise InputError(f"{where}[{i}][{j}]: expected a number, got {x!r}")
            out.append(float(to_scalar(Fraction(x) if isinstance(x, Decimal) else x, True)))
        rows.append(out)
    return np.array(rows)


def _parse_forms(path, doc: dict) -> ProblemFile:
    mats = {}
    for key in ("a", "b"):
        if key not in doc:
            raise InputError(f"{path}: missing field {key!r}")
        m = _parse_matrix(doc[key], f"{path}: {key}")
        try:
            mats[key] = PsdForm(m)
        except InputError as exc:
            raise InputError(f"{path}: {key}: {exc}") from None
    if mats["a"].n != mats["b"].n:
        raise InputError(f"{path}: a and b have different dimensions")
    return ProblemFile("forms", "float", a=mats["a"], b=mats["b"])


def fmt(x) -> str:
    """Scalar to report string: ``"p/q"`` for rationals, ``repr`` for floats."""
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return str(Fraction(x))
    return repr(float(x))


def _measure_map(m: Measure) -> dict:
    return {a: fmt(w) for a, w in zip(m.space.atoms, m.weights)}


def measures_report(problem: ProblemFile, d: Decomposition, tol) -> dict:
    atoms = problem.atoms
    diag = d.diagnostics
    return {
        "mode": "measures",
        "backend": problem.backend,
        "tol": fmt(d.tol) if d.exact else repr(float(tol)),
        "atoms": list(atoms),
        "mu": _measure_map(problem.mu),
        "nu": _measure_map(problem.nu),
        "p1": {a: fmt(v) for a, v in zip(atoms, d.p1.values)},
        "singular_set": list(d.singular_labels),
        "nu_a": _measure_map(d.nu_a),
        "nu_s": _measure_map(d.nu_s),
        "density": {a: fmt(v) for a, v in d.density.items()},
        "diagnostics": {
            "absolutely_continuous": diag.absolutely_continuous,
            "singular": diag.singular,
            "indicator": diag.indicator,
            "standard_form": diag.standard_form,
            "positivity": diag.positivity,
            "additivity_residual": fmt(diag.additivity_residual),
            "indicator_integral": fmt(diag.indicator_integral),
            "clamped_atoms": list(diag.clamped_atoms),
        },
        "ok": diag.ok,
    }


def _mat(m) -> list:
    return [[repr(float(x)) for x in row] for row in np.asarray(m)]


def forms_report(problem: ProblemFile, fd, tol) -> dict:
    diag = {}
    for k, v in fd.diagnostics.items():
        diag[k] = v if isinstance(v, bool) else repr(float(v))
    return {
        "mode": "forms",
        "backend": "float",
        "tol": repr(float(tol)),
        "dimension": problem.a.n,
        "a": _mat(problem.a.matrix),
        "b": _mat(problem.b.matrix),
        "b_a": _mat(fd.b_a.matrix),
        "b_s": _mat(fd.b_s.matrix),
        "projector": _mat(fd.projector),
        "diagnostics": diag,
        "ok": fd.ok,
    }


def emit(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def load_report(text: str) -> dict:
    """Parse an emitted report, turning exact-backend numbers back into Fractions."""
    report = json.loads(text)
    if report.get("mode") == "measures" and report.get("backend") == "exact":
        for key in ("mu", "nu", "p1", "nu_a", "nu_s", "density"):
            report[key] = {a: Fraction(v) for a, v in report[key].items()}
    return report


def recheck_report(report: dict) -> bool:
    """Re-verify additivity and the standard form from a report's own numbers."""
    if report["mode"] != "measures":
        b = np.array(report["b"], dtype=float)
        total = np.array(report["b_a"], dtype=float) + np.array(report["b_s"], dtype=float)
        return bool(np.max(np.abs(total - b)) <= 1e-10 * max(np.max(np.abs(b)), 1e-300))
    exact = report["backend"] == "exact"
    atoms = tuple(report["atoms"])
    space = AtomSpace(atoms)

    def measure(key):
        return Measure(space, tuple(to_scalar(report[key][a], exact) for a in atoms))

    nu, nu_a, nu_s = measure("nu"), measure("nu_a"), measure("nu_s")
    tol = 0 if exact else float(report["tol"])
    scale = tol * float(nu.total())
    if any(abs(a + s - w) > scale for a, s, w in zip(nu_a.weights, nu_s.weights, nu.weights)):
        return False
    S = frozenset(atoms.index(a) for a in report["singular_set"])
    p1 = SimpleFunction(space, tuple(to_scalar(report["p1"][a], exact) for a in atoms))
    d = Decomposition(nu_a, nu_s, p1, S, {}, exact, tol)
    return standard_form_check(d, nu)


def run(mode: str, input_path, backend: str | None = None, tol=None, out=None,
        timing: bool = True) -> int:
    """Decompose one problem file and write its report; returns the exit code."""
    try:
        problem = parse_problem(input_path, mode, backend)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    start = time.perf_counter()
    if problem.mode == "measures":
        tol = DEFAULT_TOL if tol is None else tol
        d = decompose(problem.mu, problem.nu, tol)
        report = measures_report(problem, d, tol)
    else:
        tol = FORMS_TOL if tol is None else tol
        fd = decompose_forms(problem.a, problem.b, tol)
        report = forms_report(problem, fd, tol)
    if timing:
        report["duration_seconds"] = round(time.perf_counter() - start, 6)
    text = emit(report)
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")
    return EXIT_OK if report["ok"] else EXIT_VERIFY


def _run_one(args: tuple) -> int:
    return run(*args)


def run_batch(mode: str, directory, out_dir, backend=None, tol=None, timing=True,
              jobs: int | None = None) -> int:
    """Process every ``*.json`` in ``directory`` into ``out_dir/<stem>.report.json``.

    Files are independent and run in worker processes; the exit code is the
    largest of the per-file codes.
    """
    directory, out_dir = Path(directory), Path(out_dir)
    files = sorted(directory.glob("*.json"))
    if not files:
        print(f"error: no .json files in {directory}", file=sys.stderr)
        return EXIT_INPUT
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = [
        (mode, f, backend, tol, out_dir / f"{f.stem}.report.json", timing) for f in files
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        codes = list(pool.map(_run_one, tasks))
    return max(codes)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lebdecomp",
        description="Lebesgue decomposition of finite measures or PSD forms.",
    )
    p.add_argument("input", nargs="?", help="problem file (JSON)")
    p.add_argument("--mode", choices=MODES, default="measures")
    p.add_argument("--backend", choices=BACKENDS, default=None,
                   help="default: exact for measures, float for forms")
    p.add_argument("--tol", type=float, default=None,
                   help="default: 1e-12 (measures) / 1e-10 (forms)")
    p.add_argument("--out", default=None, help="report path (default: stdout); a directory with --batch")
    p.add_argument("--batch", metavar="DIR", default=None, help="process every *.json in DIR")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for --batch")
    p.add_argument("--no-timing", action="store_true",
                   help="omit duration_seconds so reports are byte-reproducible")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is not None and not (args.tol > 0):
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    timing = not args.no_timing
    if args.batch:
        if args.input or not args.out:
            print("error: --batch needs --out DIR and no positional input", file=sys.stderr)
            return EXIT_INPUT
        return run_batch(args.mode, args.batch, args.out, args.backend, args.tol, timing, args.jobs)
    if not args.input:
        print("error: an input file is required", file=sys.stderr)
        return EXIT_INPUT
    return run(args.mode, args.input, args.backend, args.tol, args.out, timing)


if __name__ == "__main__":
    sys.exit(main())
