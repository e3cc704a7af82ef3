"""Fixed-point localization: contributions, integrals and the residue formula.

For a class ``alpha`` on a smooth complete torus variety ``X``,

    pi_*(alpha) = sum_F pi^F_*( alpha|_F / c^T_top(N_F X) ),

and the left side lies in ``R_T``.  In degree ``dim X`` it is a number; in
lower degree it vanishes.  Symbolic mode evaluates every term in the
localized ring and checks the sum is a polynomial of the right degree.
Specialization mode replaces the torus variables by a random integer point
first; the grading is tracked separately, so the degree-``n`` part is
extracted before anything is divided.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .bundles import bundle_twist
from .chernspec import ChernSpec, evaluate_spec
from .chow import LocalClass, degree_F
from .classes import euler_normal, invert_class
from .scalars import (
    DEFAULT_BOX,
    InadmissibleSpecialization,
    LocalizedScalar,
    NumericDomain,
    Specialization,
    SymbolicDomain,
    draw_specialization,
)

log = logging.getLogger(__name__)

MODES = ("symbolic", "spec", "both")


class NotInRTError(ArithmeticError):
    """The localized sum is not a polynomial: the fixed-point data are not the
    restrictions of a global class."""


class ModeDisagreement(RuntimeError):
    """Symbolic and specialized evaluations differ (an internal bug)."""


class WeightedDegreeError(ValueError):
    pass


class UnsupportedSpec(ValueError):
    pass


@dataclass
class Contribution:
    component: object
    value: object  # LocalizedScalar (symbolic) or Fraction (specialized)

    def as_dict(self):
        v = self.value
        if isinstance(v, Fraction):
            return {"component": _jsonable(self.component), "value": {"num": v.numerator, "den": v.denominator}}
        return {"component": _jsonable(self.component), "value": str(v)}


def _jsonable(cid):
    if isinstance(cid, tuple):
        return [_jsonable(c) for c in cid]
    return cid


@dataclass
class IntegrationReport:
    total: Fraction
    contributions: list
    mode: str
    dim: int
    degree: int
    spec: str | None = None
    seed: int | None = None
    specializations: list = field(default_factory=list)
    symbolic_total: LocalizedScalar | None = None
    specialized_contributions: list = field(default_factory=list)

    def as_dict(self, explain=False):
        out = {
            "total": {"num": self.total.numerator, "den": self.total.denominator},
            "mode": self.mode,
            "seed": self.seed,
            "dim": self.dim,
            "degree": self.degree,
            "points": [list(s.point) for s in self.specializations],
            "contributions": [c.as_dict() for c in self.contributions],
        }
        if self.spec is not None:
            out["spec"] = self.spec
        if explain and self.symbolic_total is not None:
            out["symbolic_total"] = str(self.symbolic_total)
        return out


# -- core ---------------------------------------------------------------------


def contribution(X, F, alpha: LocalClass, domain=None) -> Contribution:
    """``pi^F_*(alpha|_F / e^T(N_F X))`` for one fixed component."""
    domain = alpha.domain if domain is None else domain
    e = euler_normal(F, domain)
    inv = invert_class(e, F.normal_characters())
    return Contribution(F.id, degree_F(alpha * inv))


def _fold(values, domain):
    total = domain.zero()
    for v in values:
        total = total + v
    return total


def integrate_component(X, alphas: dict, k: int, domain, contributions=None):
    """Sum of contributions of a family of restricted classes of total degree ``k``.

    Returns a :class:`LocalizedScalar` (symbolic) or a ``Fraction``.  In
    symbolic mode the sum must be a polynomial of degree ``k - dim X``
    (zero when ``k < dim X``), otherwise :class:`NotInRTError` is raised.
    """
    if contributions is None:
        contributions = [contribution(X, F, alphas[F.id], domain) for F in X.components]
    total = _fold((c.value for c in contributions), domain)
    if domain.symbolic:
        _check_in_RT(total, k - X.dim)
    return total


def _check_in_RT(total: LocalizedScalar, degree: int):
    if total.is_zero():
        return
    if not total.is_polynomial():
        raise NotInRTError(f"localized sum {total} is not in R_T")
    if degree < 0 or total.degree != degree:
        raise NotInRTError(f"localized sum {total} is not homogeneous of degree {degree}")


def _component_term(args):
    X, F, spec, bundles, domain, k = args
    alpha = evaluate_spec(spec, F, bundles, domain, max(X.dim, k)).total_degree_part(k)
    return contribution(X, F, alpha, domain)


def _contributions(X, spec, bundles, domain, k, workers):
    jobs = [(X, F, spec, bundles, domain, k) for F in X.components]
    if workers and workers != 1 and len(jobs) > 1:
        n = os.cpu_count() if workers == 0 else workers
        with ProcessPoolExecutor(max_workers=n) as pool:
            return list(pool.map(_component_term, jobs))
    return [_component_term(j) for j in jobs]


def _bundles(X, extra):
    out = dict(X.bundles)
    if extra:
        out.update(extra)
    return out


def _symbolic(X, spec, bundles, k, workers):
    domain = SymbolicDomain(X.rank)
    contribs = _contributions(X, spec, bundles, domain, k, workers)
    total = integrate_component(X, None, k, domain, contribs)
    return total, contribs


def _specialized(X, spec, bundles, k, point: Specialization, workers):
    domain = NumericDomain(point)
    contribs = _contributions(X, spec, bundles, domain, k, workers)
    return _fold((c.value for c in contribs), domain), contribs


def run_mode(
    X,
    spec,
    bundles=None,
    mode: str = "both",
    seed: int | None = 0,
    *,
    points=None,
    box: int = DEFAULT_BOX,
    workers: int = 1,
) -> IntegrationReport:
    """Integrate the degree-``dim X`` part of ``spec`` over ``X``.

    ``mode`` is ``"symbolic"``, ``"spec"`` (one specialization) or ``"both"``
    (symbolic plus two independent specializations, which must all agree).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    spec = ChernSpec.of(spec)
    bundles = _bundles(X, bundles)
    n = X.dim
    report = IntegrationReport(Fraction(0), [], mode, n, n, spec=spec.text, seed=seed)

    if mode in ("symbolic", "both"):
        total, contribs = _symbolic(X, spec, bundles, n, workers)
        report.symbolic_total = total
        report.total = total.to_rational()
        report.contributions = contribs

    if mode in ("spec", "both"):
        count = 1 if mode == "spec" else 2
        avoid = X.all_normal_characters()
        if points is None:
            base = 0 if seed is None else seed
            points = [draw_specialization(X.rank, avoid, base + i, box) for i in range(count)]
        for s in points[:count]:
            bad = next((c for c in avoid if c.dot(s.point) == 0), None)
            if bad is not None:
                raise InadmissibleSpecialization(bad, s.point)
        for s in points[:count]:
            value, contribs = _specialized(X, spec, bundles, n, s, workers)
            report.specializations.append(s)
            report.specialized_contributions.append(contribs)
            if mode == "spec":
                report.total = value
                report.contributions = contribs
            elif value != report.total:
                raise ModeDisagreement(
                    f"{spec.text}: symbolic total {report.total} but {value} at {s.point}"
                )
    log.debug("integrated %s over %r: %s", spec.text, X, report.total)
    return report


def integrate_degree(X, spec, k: int, bundles=None, workers: int = 1):
    """Symbolic pushforward of the total-degree-``k`` part of ``spec``.

    The result lies in ``R_T`` and has degree ``k - dim X``: zero for
    ``k < dim X``, a constant for ``k = dim X``.
    """
    spec = ChernSpec.of(spec)
    domain = SymbolicDomain(X.rank)
    contribs = _contributions(X, spec, _bundles(X, bundles), domain, k, workers)
    return integrate_component(X, None, k, domain, contribs)


def integrate_number(X, spec, bundles=None, mode: str = "symbolic", seed: int | None = 0, **kw) -> IntegrationReport:
    """Degree of the dimension-``n`` part of ``spec`` on ``X``."""
    return run_mode(X, spec, bundles, mode, seed, **kw)


def bott_residue(X, spec, E=None, name: str | None = None, mode: str = "symbolic", seed=0, **kw) -> IntegrationReport:
    """``deg p(E)`` for a polynomial ``p`` of weighted degree ``dim X`` in the
    Chern classes of one bundle ``E``."""
    spec = ChernSpec.of(spec)
    used = spec.bundles()
    if len(used) != 1:
        raise WeightedDegreeError(f"{spec.text!r} must involve exactly one bundle, found {sorted(used)}")
    if spec.weighted_degrees() is None:
        raise WeightedDegreeError(f"{spec.text!r} is not a polynomial in Chern classes")
    if not spec.is_weighted_homogeneous(X.dim):
        raise WeightedDegreeError(
            f"{spec.text!r} has weighted degrees {sorted(spec.weighted_degrees())}, expected {X.dim}"
        )
    bundles = None
    if E is not None:
        bundles = {name or next(iter(used)): E}
    return run_mode(X, spec, bundles, mode, seed, **kw)


_CHI_NAME = "chi_bundle"


def euler_characteristic(X, E, mode: str = "symbolic", seed=0, **kw) -> IntegrationReport:
    """``chi(X, E) = int ch(E) td(T_X)`` evaluated by localization."""
    if isinstance(E, str):
        E = X.bundle(E)
    return run_mode(X, f"ch({_CHI_NAME})*td(tangent)", {_CHI_NAME: E}, mode, seed, **kw)


# -- consistency checks -------------------------------------------------------


def _relabel(meta, cid, perm):
    kind = meta.get("constructor")
    if kind == "projective":
        return perm[cid]
    if kind == "grassmannian":
        return tuple(sorted(perm[i] for i in cid))
    raise UnsupportedSpec(f"space {meta.get('name')!r} does not support weight relabelling")


def weyl_check(X, task, perm) -> bool:
    """Re-run ``task`` (a callable ``Space -> IntegrationReport``) with the
    weights permuted by ``perm``; true iff the total is unchanged and each
    contribution moves to the relabelled component."""
    from . import zoo

    perm = list(perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"{perm} is not a permutation")
    Y = zoo.relabelled(X, perm)
    a, b = task(X), task(Y)
    if a.total != b.total:
        return False
    by_id = {c.component: c.value for c in a.contributions}
    return all(by_id[_relabel(X.meta, c.component, perm)] == c.value for c in b.contributions)


def lift_check(X, spec, name: str, mu, mode: str = "symbolic", seed=0) -> bool:
    """Degree of ``spec`` is the same when bundle ``name`` is given the lift
    twisted by the character ``mu``."""
    spec = ChernSpec.of(spec)
    if name not in spec.bundles():
        raise UnsupportedSpec(f"{spec.text!r} does not involve bundle {name!r}")
    E = X.bundle(name)
    a = run_mode(X, spec, None, mode, seed)
    b = run_mode(X, spec, {name: bundle_twist(E, mu)}, mode, seed)
    return a.total == b.total
