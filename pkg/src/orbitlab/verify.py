"""Independence and generation checking, and the verification report model.

Exact mode is a decision procedure: joint laws are enumerated with rational
arithmetic and compared for equality, so a pass is a proof about the finite
window and a fail carries the violating cylinder.  Monte-Carlo mode is a
chi-square gate at a configured quantile: a screening device for windows
beyond the enumeration budget, never a proof.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from scipy.stats import chi2

from .spaces import (BudgetExceededError, Configuration, DEFAULT_BUDGET,
                     ProductSpace, alphabet_at, derive_seed, enumerate_window,
                     exact_distribution, resample_outside, sample, sample_stream)
from .words import Coset, Word

PASS = "pass"
FAIL = "fail"
UNDETERMINED = "undetermined"

_SEVERITY = {PASS: 0, UNDETERMINED: 1, FAIL: 2}


def worst_verdict(verdicts: Iterable[str]) -> str:
    out = PASS
    for v in verdicts:
        if _SEVERITY[v] > _SEVERITY[out]:
            out = v
    return out


def jsonable(obj):
    """Lossless-enough JSON image: exact rationals as 'p/q', words as tokens."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (Word, Coset)):
        return obj.tokens()
    if isinstance(obj, dict):
        return {_key_str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return repr(obj)


def _key_str(k) -> str:
    if isinstance(k, (Word, Coset)):
        return k.tokens()
    if isinstance(k, tuple):
        return "(" + ", ".join(_key_str(v) for v in k) + ")"
    return str(k)


@dataclass
class VerificationReport:
    """Structured outcome of one check."""

    name: str
    mode: str                      # "exact" | "monte-carlo" | "composite"
    verdict: str                   # "pass" | "fail" | "undetermined"
    parameters: dict = field(default_factory=dict)
    statistics: dict = field(default_factory=dict)
    seed: int | None = None
    notes: tuple = ()
    counterexample: dict | None = None
    subreports: tuple = ()
    runtime_s: float | None = None

    def passed(self) -> bool:
        return self.verdict == PASS

    def to_payload(self) -> dict:
        out = {
            "name": self.name,
            "mode": self.mode,
            "verdict": self.verdict,
            "parameters": jsonable(self.parameters),
            "statistics": jsonable(self.statistics),
            "seed": self.seed,
            "notes": list(self.notes),
        }
        if self.counterexample is not None:
            out["counterexample"] = jsonable(self.counterexample)
        if self.subreports:
            out["subreports"] = [r.to_payload() for r in self.subreports]
        return out


def combine_reports(name: str, subreports: Sequence[VerificationReport],
                    parameters: dict | None = None, notes: tuple = ()) -> VerificationReport:
    return VerificationReport(
        name=name, mode="composite",
        verdict=worst_verdict(r.verdict for r in subreports),
        parameters=parameters or {},
        statistics={"subchecks": len(subreports)},
        notes=notes, subreports=tuple(subreports))


def timed(report: VerificationReport, started: float) -> VerificationReport:
    report.runtime_s = time.perf_counter() - started
    return report


# -- variable families --------------------------------------------------------


@dataclass
class WindowFunction:
    """Named map from configurations to a finite value set, with its
    declared dependency coordinates."""

    name: str
    coords: tuple
    support: int
    fn: Callable[[Configuration], int]

    def __call__(self, x: Configuration) -> int:
        return self.fn(x)


def coordinate_variable(space, coord, name: str | None = None) -> WindowFunction:
    canon = coord if isinstance(space, ProductSpace) else space.index.canonicalize(coord)
    label = name or space.coord_key(canon)
    return WindowFunction(label, (canon,), alphabet_at(space, canon).size,
                          lambda x, c=canon: x.value(c))


def family_window(family: Sequence[WindowFunction]) -> list:
    out = []
    for v in family:
        for c in v.coords:
            if c not in out:
                out.append(c)
    return out


def soundness_spotcheck(family: Sequence[WindowFunction], space, seed: int,
                        trials: int = 10) -> VerificationReport:
    """Spot-check that each declared dependency window is sound: the value
    must not move when everything outside the window is resampled."""
    started = time.perf_counter()
    for i in range(trials):
        x = sample(space, derive_seed(seed, f"sound/{i}"))
        for v in family:
            y = resample_outside(x, v.coords, derive_seed(seed, f"sound/{i}/fresh"))
            if v.fn(x) != v.fn(y):
                return timed(VerificationReport(
                    "window-soundness", "exact", FAIL,
                    parameters={"trials": trials}, seed=seed,
                    counterexample={"variable": v.name, "trial": i}), started)
    return timed(VerificationReport("window-soundness", "exact", PASS,
                                    parameters={"trials": trials}, seed=seed), started)


# -- exact independence -------------------------------------------------------


def independence_exact(space, family: Sequence[WindowFunction], window=None,
                       budget: int = DEFAULT_BUDGET, name: str = "independence-exact",
                       require_uniform: bool = False) -> VerificationReport:
    """Pass iff the exact joint law equals the product of its marginals.

    With require_uniform, additionally demand that the joint law is the
    uniform distribution on the full product of the declared supports.
    """
    started = time.perf_counter()
    window = list(window) if window is not None else family_window(family)
    dist = exact_distribution(space, family, window, budget)
    stats: dict = {"window": len(window), "states": dist.state_count,
                   "outcomes": len(dist.outcomes)}
    deviation, witness = dist.worst_product_deviation()
    stats["worst_product_deviation"] = deviation
    verdict = PASS if deviation == 0 else FAIL
    counter = None if verdict == PASS else {"cylinder": witness,
                                            "deviation": deviation}
    if verdict == PASS and require_uniform:
        if not dist.is_uniform([v.support for v in family]):
            verdict = FAIL
            counter = {"reason": "joint law is not the uniform product"}
    return timed(VerificationReport(
        name, "exact", verdict,
        parameters={"variables": [v.name for v in family], "budget": budget},
        statistics=stats, counterexample=counter), started)


def distribution_equal_exact(space, family, other_space, other_family,
                             name: str = "distribution-equality") -> VerificationReport:
    """Exact equality of two joint laws (used for shift invariance checks)."""
    started = time.perf_counter()
    d1 = exact_distribution(space, family, family_window(family))
    d2 = exact_distribution(other_space, other_family, family_window(other_family))
    same = d1.outcomes == d2.outcomes
    return timed(VerificationReport(
        name, "exact", PASS if same else FAIL,
        statistics={"outcomes": len(d1.outcomes)},
        counterexample=None if same else {
            "left": d1.outcomes, "right": d2.outcomes}), started)


# -- Monte-Carlo independence -------------------------------------------------


def chi_square_threshold(quantile: float, dof: int) -> float:
    return float(chi2.ppf(quantile, dof))


def _chi_square_independence(counts: Mapping[tuple, int], total: int):
    """Chi-square statistic of a joint table against the product of its
    empirical marginals; returns (statistic, dof) over observed supports."""
    k = len(next(iter(counts)))
    marginals: list[dict] = [dict() for _ in range(k)]
    for outcome, c in counts.items():
        for i, v in enumerate(outcome):
            marginals[i][v] = marginals[i].get(v, 0) + c
    supports = [sorted(m) for m in marginals]
    stat = 0.0
    for combo in itertools.product(*supports):
        expected = total
        for i, v in enumerate(combo):
            expected *= marginals[i][v] / total
        observed = counts.get(combo, 0)
        if expected > 0:
            stat += (observed - expected) ** 2 / expected
        elif observed:
            return float("inf"), 0
    cells = 1
    params = 0
    for s in supports:
        cells *= len(s)
        params += len(s) - 1
    dof = max(cells - 1 - params, 1)
    return stat, dof


def independence_mc(space, family: Sequence[WindowFunction], samples: int,
                    seed: int, quantile: float = 0.999,
                    name: str = "independence-mc") -> VerificationReport:
    """Chi-square gate for joint-equals-product-of-marginals on sampled points."""
    started = time.perf_counter()
    counts: dict = {}
    for x in sample_stream(space, seed, samples):
        key = tuple(v.fn(x) for v in family)
        counts[key] = counts.get(key, 0) + 1
    stat, dof = _chi_square_independence(counts, samples)
    threshold = chi_square_threshold(quantile, dof)
    verdict = PASS if stat <= threshold else FAIL
    return timed(VerificationReport(
        name, "monte-carlo", verdict,
        parameters={"samples": samples, "quantile": quantile,
                    "variables": [v.name for v in family]},
        statistics={"chi_square": stat, "dof": dof, "threshold": threshold},
        seed=seed), started)


def goodness_of_fit_mc(values: Iterable[int], expected: Mapping[int, Fraction],
                       seed: int | None, quantile: float = 0.999,
                       name: str = "gof-mc") -> VerificationReport:
    """Chi-square goodness of fit of sampled values against an exact law."""
    started = time.perf_counter()
    counts: dict = {}
    n = 0
    for v in values:
        counts[v] = counts.get(v, 0) + 1
        n += 1
    stat = 0.0
    for v, p in expected.items():
        exp = float(p) * n
        stat += (counts.get(v, 0) - exp) ** 2 / exp
    extra = set(counts) - set(expected)
    if extra:
        stat = float("inf")
    dof = max(len(expected) - 1, 1)
    threshold = chi_square_threshold(quantile, dof)
    verdict = PASS if stat <= threshold else FAIL
    return timed(VerificationReport(
        name, "monte-carlo", verdict,
        parameters={"samples": n, "quantile": quantile},
        statistics={"chi_square": stat, "dof": dof, "threshold": threshold},
        seed=seed), started)


def homogeneity_mc(values_a: Iterable[int], values_b: Iterable[int],
                   seed: int | None, quantile: float = 0.999,
                   name: str = "homogeneity-mc") -> VerificationReport:
    """Two-sample chi-square gate: both samples drawn from one law."""
    started = time.perf_counter()
    counts = [dict(), dict()]
    totals = [0, 0]
    for s, values in enumerate((values_a, values_b)):
        for v in values:
            counts[s][v] = counts[s].get(v, 0) + 1
            totals[s] += 1
    support = sorted(set(counts[0]) | set(counts[1]))
    grand = totals[0] + totals[1]
    stat = 0.0
    for v in support:
        pooled = (counts[0].get(v, 0) + counts[1].get(v, 0)) / grand
        for s in range(2):
            expected = totals[s] * pooled
            if expected > 0:
                stat += (counts[s].get(v, 0) - expected) ** 2 / expected
    dof = max(len(support) - 1, 1)
    threshold = chi_square_threshold(quantile, dof)
    verdict = PASS if stat <= threshold else FAIL
    return timed(VerificationReport(
        name, "monte-carlo", verdict,
        parameters={"samples": totals, "quantile": quantile},
        statistics={"chi_square": stat, "dof": dof, "threshold": threshold},
        seed=seed), started)


# -- the twisted-selector independence engine -----------------------------------


@dataclass
class Selector:
    """Named map z -> (group element, index), reading only the first factor.

    The selector receives a lookup for the x-part only, which enforces the
    "depends only on x" precondition structurally; the injectivity
    precondition is checked pointwise by the engine.
    """

    name: str
    fn: Callable[[Callable], tuple]   # x_lookup -> (h, index)


def selector_independence_exact(x_slots: Sequence[tuple], index_set: Sequence,
                                value_size: int, act: Callable[[object, int], int],
                                family: Sequence[Selector],
                                name: str = "selector-independence",
                                budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Exact decision for families of twisted coordinate lookups.

    The underlying space is X x V^I where X is given by finite slots
    (key, size), I is a finite index set and V a finite value set acted on
    by a measure preserving group action `act`.  Each family member selects
    an index and a group element from x alone; the check verifies that the
    variables z -> act(h(x), y[i(x)]) are jointly uniform on V^family and
    independent of x, provided the selected indices are pairwise distinct
    at every x (reported as a precondition failure otherwise).
    """
    started = time.perf_counter()
    x_keys = [k for k, _ in x_slots]
    x_sizes = [s for _, s in x_slots]
    index_set = list(index_set)
    total_x = 1
    for s in x_sizes:
        total_x *= s
    states = total_x * value_size ** len(index_set)
    if states > budget:
        raise BudgetExceededError(f"{states} states exceed budget {budget}")

    selections = []
    for xs in itertools.product(*[range(s) for s in x_sizes]):
        lookup = dict(zip(x_keys, xs)).__getitem__
        sel = [f.fn(lookup) for f in family]
        picked = [i for _, i in sel]
        if len(set(picked)) != len(picked):
            return timed(VerificationReport(
                name, "exact", FAIL,
                notes=("precondition violation: selected indices collide",),
                counterexample={"x": dict(zip(x_keys, xs)),
                                "selected": [(f.name, s) for f, s in zip(family, sel)]},
                statistics={"x_states": total_x}), started)
        for _, i in sel:
            if i not in index_set:
                return timed(VerificationReport(
                    name, "exact", FAIL,
                    notes=("precondition violation: selected index outside I",),
                    counterexample={"x": dict(zip(x_keys, xs)), "index": i}), started)
        selections.append((xs, sel))

    joint: dict = {}
    weight = Fraction(1, states)
    for xs, sel in selections:
        for ys in itertools.product(range(value_size), repeat=len(index_set)):
            y = dict(zip(index_set, ys))
            outcome = (xs, tuple(act(h, y[i]) for h, i in sel))
            joint[outcome] = joint.get(outcome, Fraction(0)) + weight

    expected = Fraction(1, total_x) * Fraction(1, value_size) ** len(family)
    for xs, _ in selections:
        for vs in itertools.product(range(value_size), repeat=len(family)):
            if joint.get((xs, vs), Fraction(0)) != expected:
                return timed(VerificationReport(
                    name, "exact", FAIL,
                    statistics={"states": states},
                    counterexample={"cylinder": {"x": dict(zip(x_keys, xs)), "values": vs},
                                    "probability": joint.get((xs, vs), Fraction(0)),
                                    "expected": expected}), started)
    return timed(VerificationReport(
        name, "exact", PASS,
        parameters={"family": [f.name for f in family], "index_set_size": len(index_set),
                    "value_size": value_size},
        statistics={"states": states, "per_cylinder_probability": expected}), started)


def selector_independence_on_samples(points: Iterable, selector_of_point: Callable,
                                     index_space, value_size: int,
                                     act: Callable[[object, int], int],
                                     family_names: Sequence[str],
                                     name: str = "selector-independence-sampled",
                                     seed: int | None = None) -> VerificationReport:
    """Conditional variant for infinite x-parts: for each supplied point the
    selected indices must be pairwise distinct, and the y-window joint law,
    enumerated exactly, must be the uniform product."""
    started = time.perf_counter()
    checked = 0
    undetermined = 0
    for x in points:
        try:
            sel = selector_of_point(x)
        except UndeterminedError:
            undetermined += 1
            continue
        picked = [i for _, i in sel]
        if len(set(picked)) != len(picked):
            return timed(VerificationReport(
                name, "exact", FAIL, seed=seed,
                notes=("precondition violation: selected indices collide",),
                counterexample={"point": str(getattr(x, "point_key", x)),
                                "selected": [str(s) for s in sel]}), started)
        joint: dict = {}
        weight = Fraction(1, value_size ** len(picked))
        for ys in itertools.product(range(value_size), repeat=len(picked)):
            outcome = tuple(act(h, y) for (h, _), y in zip(sel, ys))
            joint[outcome] = joint.get(outcome, Fraction(0)) + weight
        expected = Fraction(1, value_size) ** len(sel)
        for vs in itertools.product(range(value_size), repeat=len(sel)):
            if joint.get(vs, Fraction(0)) != expected:
                return timed(VerificationReport(
                    name, "exact", FAIL, seed=seed,
                    counterexample={"point": str(getattr(x, "point_key", x)),
                                    "values": vs}), started)
        checked += 1
    verdict = PASS if undetermined == 0 else UNDETERMINED
    return timed(VerificationReport(
        name, "exact", verdict, seed=seed,
        parameters={"family": list(family_names)},
        statistics={"points_checked": checked, "undetermined_points": undetermined}), started)


class UndeterminedError(RuntimeError):
    """A scan-bounded oracle could not resolve within its radius."""


# -- generation ---------------------------------------------------------------


def generation_check(space, family: Sequence[WindowFunction], window,
                     reconstructor: Callable | None = None,
                     canonicalize: Callable | None = None,
                     budget: int = DEFAULT_BUDGET, samples: int = 0,
                     seed: int | None = None,
                     name: str = "generation") -> VerificationReport:
    """Finite-window surrogate for sigma-algebra generation.

    With a reconstructor: the variables' values must determine the window
    exactly (reconstruct then compare, after `canonicalize` when given).
    Without one: the assignment -> values map must be injective on the
    enumerated window; a collision yields a witness pair of configurations.

    The result is a surrogate: invertibility on a finite window is strictly
    stronger than generation up to null sets, and is what gets checked.
    """
    started = time.perf_counter()
    note = ("finite-window invertibility surrogate for generation",)
    window = list(window)

    def compare_target(x: Configuration):
        y = canonicalize(x) if canonicalize is not None else x
        return tuple(y.value(c) for c in window)

    if samples:
        points = list(sample_stream(space, seed or 0, samples))
        weights = None
    else:
        points = None

    if reconstructor is not None:
        iterator = points if points is not None else \
            (cfg for cfg, _ in enumerate_window(space, window, budget))
        checked = 0
        for x in iterator:
            values = {v.name: v.fn(x) for v in family}
            rebuilt = reconstructor(values)
            expected = compare_target(x)
            got = tuple(rebuilt.value(c) if isinstance(rebuilt, Configuration)
                        else rebuilt[c] for c in window)
            if got != expected:
                return timed(VerificationReport(
                    name, "exact", FAIL, seed=seed, notes=note,
                    counterexample={"window": {space.coord_key(c): v for c, v in
                                               zip(window, expected)},
                                    "reconstructed": {space.coord_key(c): v for c, v in
                                                      zip(window, got)}}), started)
            checked += 1
        return timed(VerificationReport(
            name, "exact", PASS, seed=seed, notes=note,
            parameters={"variables": [v.name for v in family], "window": len(window)},
            statistics={"points": checked}), started)

    seen: dict = {}
    for cfg, _ in enumerate_window(space, window, budget):
        values = tuple(v.fn(cfg) for v in family)
        target = compare_target(cfg)
        if values in seen and seen[values] != target:
            return timed(VerificationReport(
                name, "exact", FAIL, notes=note,
                counterexample={
                    "values": values,
                    "first": {space.coord_key(c): v for c, v in zip(window, seen[values])},
                    "second": {space.coord_key(c): v for c, v in zip(window, target)}}),
                started)
        seen[values] = target
    return timed(VerificationReport(
        name, "exact", PASS, notes=note,
        parameters={"variables": [v.name for v in family], "window": len(window)},
        statistics={"states": len(seen)}), started)
