"""Batch front end.

    bottlocal run tasks.json [--mode both] [--seed 0] [--json report.json] [--explain] [--threads 1]
    bottlocal plan tasks.json

A task file is a JSON object with the keys ``spaces``, ``bundles``, ``tasks``
and optionally ``mode`` and ``seed``::

    {
      "spaces": {"G": {"type": "grassmannian", "k": 2, "n": 4}},
      "bundles": {"E": {"space": "G", "op": "sym", "k": 3, "of": {"op": "dual", "of": "S"}}},
      "tasks": [{"name": "lines", "kind": "bott", "space": "G", "spec": "c4(E)", "expect": 27}],
      "mode": "both",
      "seed": 0
    }

Exit codes: 0 success, 1 expectation mismatch, 2 input error, 3 internal
self-check failure.
"""

from __future__ import annotations

import argparse
import copy
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import zoo
from .bundles import (
    bundle_dual,
    bundle_sum,
    bundle_twist,
    determinant,
    line_power,
    sym_power,
    tensor,
    trivial_bundle,
    wedge_power,
)
from .chernspec import ChernIndexError, ChernSpec, ChernSpecError, UnknownBundle
from .chow import ChowModel
from .engine import (
    MODES,
    ModeDisagreement,
    NotInRTError,
    UnsupportedSpec,
    WeightedDegreeError,
    bott_residue,
    euler_characteristic,
    integrate_number,
)
from .planner import DiagonalRep, certify_degrees, free_locus, unstable_locus
from .scalars import Character, InadmissibleSpecialization

log = logging.getLogger(__name__)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_SELFCHECK = 0, 1, 2, 3

TASK_KINDS = ("integrate", "bott", "chi", "planner")


class InputError(ValueError):
    pass


class SelfCheckError(RuntimeError):
    pass


# -- task file ----------------------------------------------------------------


@dataclass(frozen=True)
class TaskFile:
    spaces: dict
    bundles: dict
    tasks: list
    mode: str = "both"
    seed: int = 0

    def as_dict(self):
        return {
            "spaces": copy.deepcopy(self.spaces),
            "bundles": copy.deepcopy(self.bundles),
            "tasks": copy.deepcopy(self.tasks),
            "mode": self.mode,
            "seed": self.seed,
        }


def _require(obj, key, where):
    if key not in obj:
        raise InputError(f"{where}: missing {key!r}")
    return obj[key]


def parse_taskfile(data) -> TaskFile:
    """Validate a decoded task file (a dict) and return a :class:`TaskFile`."""
    if not isinstance(data, dict):
        raise InputError("task file must be a JSON object")
    unknown = set(data) - {"spaces", "bundles", "tasks", "mode", "seed"}
    if unknown:
        raise InputError(f"unknown top-level keys {sorted(unknown)}")
    spaces = data.get("spaces", {})
    bundles = data.get("bundles", {})
    tasks = data.get("tasks", [])
    mode = data.get("mode", "both")
    seed = data.get("seed", 0)
    if not isinstance(spaces, dict) or not isinstance(bundles, dict) or not isinstance(tasks, list):
        raise InputError("'spaces' and 'bundles' must be objects, 'tasks' a list")
    if mode not in MODES:
        raise InputError(f"mode must be one of {list(MODES)}, got {mode!r}")
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise InputError(f"seed must be a non-negative integer, got {seed!r}")
    for name, sp in spaces.items():
        if not isinstance(sp, dict):
            raise InputError(f"space {name!r}: expected an object")
        _require(sp, "type", f"space {name!r}")
    for name, b in bundles.items():
        if not isinstance(b, dict):
            raise InputError(f"bundle {name!r}: expected an object")
        space = _require(b, "space", f"bundle {name!r}")
        if space not in spaces:
            raise InputError(f"bundle {name!r}: unknown space {space!r}")
    for i, t in enumerate(tasks):
        label = f"task {i}" if not isinstance(t, dict) else f"task {t.get('name', i)!r}"
        if not isinstance(t, dict):
            raise InputError(f"{label}: expected an object")
        kind = _require(t, "kind", label)
        if kind not in TASK_KINDS:
            raise InputError(f"{label}: kind must be one of {list(TASK_KINDS)}")
        if kind == "planner":
            _require(t, "rank", label)
            _require(t, "weights", label)
            continue
        space = _require(t, "space", label)
        if space not in spaces:
            raise InputError(f"{label}: unknown space {space!r}")
        if kind in ("integrate", "bott"):
            try:
                spec = ChernSpec(_require(t, "spec", label))
            except ChernSpecError as e:
                raise InputError(f"{label}: {e}") from None
            for b in spec.bundles():
                if b in bundles and bundles[b]["space"] != space:
                    raise InputError(f"{label}: bundle {b!r} lives on space {bundles[b]['space']!r}")
        if kind == "chi":
            _require(t, "bundle", label)
        if "expect" in t:
            _expect_value(t["expect"], label)
        if "mode" in t and t["mode"] not in MODES:
            raise InputError(f"{label}: mode must be one of {list(MODES)}")
    return TaskFile(copy.deepcopy(spaces), copy.deepcopy(bundles), copy.deepcopy(tasks), mode, seed)


def load_taskfile(path) -> TaskFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: JSON parse error at line {e.lineno}, column {e.colno}: {e.msg}") from None
    return parse_taskfile(data)


def _expect_value(v, label):
    try:
        if isinstance(v, bool):
            raise TypeError
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, str):
            return Fraction(v)
        if isinstance(v, dict):
            return Fraction(int(v["num"]), int(v["den"]))
    except (TypeError, ValueError, KeyError, ZeroDivisionError):
        pass
    raise InputError(f"{label}: cannot read expected value {v!r} (use an integer, 'p/q' or {{num, den}})")


# -- building spaces and bundles ---------------------------------------------------


def _weights(spec, count, where):
    if spec is None or spec == "standard":
        return zoo.standard_weights(count)
    if spec == "moment":
        return zoo.moment_weights(count)
    if not isinstance(spec, list) or len(spec) != count:
        raise InputError(f"{where}: expected {count} weights")
    try:
        return [Character([w]) if isinstance(w, int) else Character(w) for w in spec]
    except (TypeError, ValueError):
        raise InputError(f"{where}: weights must be integers or integer lists") from None


def build_space(name, spec, built):
    where = f"space {name!r}"
    kind = spec["type"]
    try:
        if kind == "projective":
            n = _require(spec, "n", where)
            return zoo.projective_space(_weights(spec.get("weights"), n + 1, where))
        if kind == "grassmannian":
            k, n = _require(spec, "k", where), _require(spec, "n", where)
            return zoo.grassmannian(k, _weights(spec.get("weights"), n, where))
        if kind == "toric":
            fan = zoo.Fan(_require(spec, "rays", where), _require(spec, "cones", where))
            return zoo.toric_space(fan, spec.get("weights"))
        if kind == "hirzebruch":
            return zoo.toric_space(zoo.hirzebruch(_require(spec, "a", where)), spec.get("weights"))
        if kind == "product":
            factors = _require(spec, "factors", where)
            if not isinstance(factors, list) or len(factors) < 2:
                raise InputError(f"{where}: 'factors' must list at least two factors")
            X = _factor(factors[0], built, where)
            for f in factors[1:]:
                X = zoo.product_space(X, _factor(f, built, where))
            return X
    except InputError:
        raise
    except (ValueError, TypeError) as e:
        raise InputError(f"{where}: {e}") from None
    raise InputError(f"{where}: unknown type {kind!r}")


def _factor(f, built, where):
    if isinstance(f, str):
        if f not in built:
            raise InputError(f"{where}: factor {f!r} must be defined earlier")
        return built[f]
    if isinstance(f, dict) and "trivial" in f:
        return ChowModel(f["trivial"])
    raise InputError(f"{where}: a factor is a space name or {{'trivial': [n1, ...]}}")


def build_bundle(expr, X, known, where):
    """Evaluate a bundle expression on space ``X``; ``known`` maps names to
    bundles already defined for ``X``."""
    if isinstance(expr, str):
        if expr in known:
            return known[expr]
        if expr in X.bundles:
            return X.bundles[expr]
        raise InputError(f"{where}: unknown bundle {expr!r}; known: {sorted(set(X.bundles) | set(known))}")
    if not isinstance(expr, dict) or "op" not in expr:
        raise InputError(f"{where}: a bundle is a name or an object with an 'op'")
    op = expr["op"]

    def sub(key="of"):
        return build_bundle(_require(expr, key, where), X, known, where)

    def subs():
        items = _require(expr, "of", where)
        if not isinstance(items, list) or not items:
            raise InputError(f"{where}: '{op}' needs a nonempty list 'of'")
        return [build_bundle(e, X, known, where) for e in items]

    try:
        if op == "tangent":
            return X.tangent
        if op == "dual":
            return bundle_dual(sub())
        if op == "sym":
            return sym_power(sub(), int(_require(expr, "k", where)))
        if op == "wedge":
            return wedge_power(sub(), int(_require(expr, "k", where)))
        if op == "det":
            return determinant(sub())
        if op == "twist":
            return bundle_twist(sub(), Character(_require(expr, "character", where)))
        if op == "power":
            return line_power(sub(), int(_require(expr, "d", where)))
        if op == "O":
            return line_power(build_bundle("O(1)", X, known, where), int(_require(expr, "d", where)))
        if op == "sum":
            out = None
            for E in subs():
                out = E if out is None else bundle_sum(out, E)
            return out
        if op == "tensor":
            out = None
            for E in subs():
                out = E if out is None else tensor(out, E)
            return out
        if op == "toric_divisor":
            return zoo.toric_line_bundle(X, _require(expr, "coefficients", where))
        if op == "trivial":
            return trivial_bundle(X.models, int(expr.get("rank", 1)), Character(expr.get("character", [0] * X.rank)))
    except InputError:
        raise
    except (ValueError, TypeError) as e:
        raise InputError(f"{where}: {e}") from None
    raise InputError(f"{where}: unknown bundle operation {op!r}")


def build(tf: TaskFile):
    spaces = {}
    for name, spec in tf.spaces.items():
        spaces[name] = build_space(name, spec, spaces)
    bundles = {name: {} for name in spaces}
    for name, spec in tf.bundles.items():
        sp = spec["space"]
        expr = {k: v for k, v in spec.items() if k != "space"}
        if set(expr) == {"bundle"}:
            expr = expr["bundle"]
        bundles[sp][name] = build_bundle(expr, spaces[sp], bundles[sp], f"bundle {name!r}")
    return spaces, bundles


# -- running ------------------------------------------------------------------


def _frac_json(q: Fraction):
    return {"num": q.numerator, "den": q.denominator}


def _frac_str(q: Fraction):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def run_task(task, spaces, bundles, mode, seed, workers=1, explain=False):
    label = f"task {task.get('name', task['kind'])!r}"
    kind = task["kind"]
    out = {"task": copy.deepcopy(task)}
    if kind == "planner":
        return _run_planner(task, label, out)
    X = spaces[task["space"]]
    named = bundles[task["space"]]
    mode = task.get("mode", mode)
    try:
        if kind == "integrate":
            report = integrate_number(X, task["spec"], named, mode=mode, seed=seed, workers=workers)
        elif kind == "bott":
            spec = ChernSpec(task["spec"])
            used = spec.bundles()
            name = next(iter(used)) if len(used) == 1 else None
            E = build_bundle(name, X, named, label) if name else None
            report = bott_residue(X, spec, E, name, mode=mode, seed=seed, workers=workers)
        else:
            E = build_bundle(task["bundle"], X, named, label)
            report = euler_characteristic(X, E, mode=mode, seed=seed, workers=workers)
    except (ModeDisagreement, NotInRTError) as e:
        raise SelfCheckError(f"{label}: {e}") from None
    except (UnknownBundle, ChernIndexError, WeightedDegreeError, UnsupportedSpec, KeyError) as e:
        raise InputError(f"{label}: {e}") from None
    except InadmissibleSpecialization as e:
        raise SelfCheckError(f"{label}: {e}") from None
    out.update(report.as_dict(explain=explain))
    out["space"] = X.meta.get("name", task["space"])
    if "expect" in task:
        want = _expect_value(task["expect"], label)
        out["expect"] = _frac_json(want)
        out["status"] = "ok" if report.total == want else "mismatch"
    else:
        out["status"] = "ok"
    return out


def _run_planner(task, label, out):
    try:
        rep = DiagonalRep(int(task["rank"]), task["weights"])
    except (ValueError, TypeError) as e:
        raise InputError(f"{label}: {e}") from None
    locus = task.get("locus", "unstable")
    if locus not in ("unstable", "free"):
        raise InputError(f"{label}: locus must be 'unstable' or 'free'")
    result = (unstable_locus if locus == "unstable" else free_locus)(rep)
    out.update(result.as_dict())
    out["subspaces_text"] = [str(s) for s in result.subspaces]
    if "n" in task:
        degs = certify_degrees(rep, int(task["n"]), "closed-free" if locus == "unstable" else "free")
        out["certified_degrees"] = [degs.start, degs.stop - 1] if len(degs) else []
    out["status"] = "ok"
    if "expect_codim" in task:
        out["expect_codim"] = task["expect_codim"]
        if result.codim != task["expect_codim"]:
            out["status"] = "mismatch"
    return out


def run(tf: TaskFile, mode=None, seed=None, workers=1, explain=False, planner_only=False):
    """Execute all tasks; returns ``(report, exit_code)``."""
    mode = tf.mode if mode is None else mode
    seed = tf.seed if seed is None else seed
    tasks = [t for t in tf.tasks if not planner_only or t["kind"] == "planner"]
    needs_spaces = any(t["kind"] != "planner" for t in tasks)
    spaces, bundles = build(tf) if needs_spaces else ({}, {})
    results = [run_task(t, spaces, bundles, mode, seed, workers, explain) for t in tasks]
    code = EXIT_OK if all(r["status"] == "ok" for r in results) else EXIT_MISMATCH
    report = {"input": tf.as_dict(), "mode": mode, "seed": seed, "results": results}
    return report, code


def format_report(report) -> str:
    lines = [f"mode {report['mode']}, seed {report['seed']}"]
    for r in report["results"]:
        t = r["task"]
        name = t.get("name", t["kind"])
        if t["kind"] == "planner":
            lines.append(f"[{r['status']}] {name}: planner ({t.get('locus', 'unstable')}) codim {r['codim']}")
            for s in r["subspaces_text"]:
                lines.append(f"    {s}")
            if "certified_degrees" in r:
                lines.append(f"    certified degrees: {r['certified_degrees']}")
            continue
        total = Fraction(r["total"]["num"], r["total"]["den"])
        what = t.get("spec") or f"chi({t.get('bundle')})"
        line = f"[{r['status']}] {name}: {t['kind']} {what} on {r['space']} = {_frac_str(total)}"
        if "expect" in r:
            line += f" (expected {_frac_str(Fraction(r['expect']['num'], r['expect']['den']))})"
        lines.append(line)
        if r["points"]:
            lines.append("    points: " + "; ".join(str(tuple(p)) for p in r["points"]))
        for c in r["contributions"]:
            v = c["value"]
            v = _frac_str(Fraction(v["num"], v["den"])) if isinstance(v, dict) else v
            lines.append(f"    {c['component']}: {v}")
        if "symbolic_total" in r:
            lines.append(f"    symbolic total: {r['symbolic_total']}")
    return "\n".join(lines)


def _strip_contributions(report, explain):
    # without --explain the table lists totals only; the JSON keeps everything
    if explain:
        return report
    slim = copy.deepcopy(report)
    for r in slim["results"]:
        if "contributions" in r:
            r["contributions"] = []
    return slim


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bottlocal", description="Exact torus localization computations.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run all tasks of a task file")
    p_run.add_argument("file")
    p_run.add_argument("--mode", choices=MODES)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--json", metavar="PATH", help="write a JSON report")
    p_run.add_argument("--explain", action="store_true", help="show per-component contributions")
    p_run.add_argument("--threads", type=int, default=1, help="worker processes per task (0 = auto)")
    p_plan = sub.add_parser("plan", help="run planner tasks only")
    p_plan.add_argument("file")
    p_plan.add_argument("--json", metavar="PATH")
    args = parser.parse_args(argv)

    try:
        tf = load_taskfile(args.file)
        if args.command == "plan":
            report, code = run(tf, planner_only=True)
        else:
            if args.seed is not None and args.seed < 0:
                raise InputError("--seed must be non-negative")
            report, code = run(tf, args.mode, args.seed, args.threads, args.explain)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SelfCheckError as e:
        print(f"self-check failure: {e}", file=sys.stderr)
        return EXIT_SELFCHECK

    explain = getattr(args, "explain", False)
    print(format_report(_strip_contributions(report, explain)))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if code == EXIT_MISMATCH:
        print("expectation mismatch", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
