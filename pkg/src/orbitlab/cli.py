"""Batch harness: declare instances in a JSON config document, run check
suites, write one structured report per check plus a summary.

Exit codes: 0 all checks pass, 1 any check fails, 2 undetermined outcomes
(and no failures), 3 malformed config.  Reports are deterministic functions
of (config, seeds); wall-clock data lives in a separate `timing` section so
payloads compare byte-identically across runs.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .actions import check_coinduced_characterization
from .cocycles import verify_identity, verify_inverse_pair
from .constructions import (CylinderAction, FactorSetting, StarAction,
                            build_cylinder_oe, component_twist_system,
                            coset_freshness_report, cylinder_measure_report,
                            degenerate_stable_oe, dependency_radius_report,
                            extension_action_report,
                            extension_distinctness_report,
                            extension_independence_report,
                            factor_quotient_reconstructor, free_action_on_cosets,
                            increment_equivariance_report, increment_family,
                            increment_grouped_reports, increment_roundtrip_report,
                            match_determinacy_report,
                            match_measure_report, quotient_code, quotient_rho,
                            restriction_consequence_report,
                            restriction_equivariance_report, restriction_family,
                            section_report, star_conjugation_report,
                            star_injectivity_report, star_orbit_report,
                            star_relation_report)
from .groups import FiniteGroup, GroupTableError, cyclic, klein_four, load_group_table, s3
from .spaces import DEFAULT_BUDGET, derive_seed
from .verify import (FAIL, PASS, UNDETERMINED, Selector, VerificationReport,
                     WindowFunction, combine_reports, coordinate_variable,
                     independence_exact, independence_mc,
                     selector_independence_exact, worst_verdict)
from .words import ball, coset, free_group

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"config error at {field_name}: {message}")
        self.field = field_name


@dataclass
class SuiteContext:
    seed: int
    samples: int = 100
    budget: int = DEFAULT_BUDGET
    quantile: float = 0.999
    scan_radius: int = 64
    groups: dict = field(default_factory=dict)

    def group(self, name: str, where: str) -> FiniteGroup:
        if name not in self.groups:
            raise ConfigError(where, f"group {name!r} is not declared")
        return self.groups[name]


def _build_group(name: str, doc: dict) -> FiniteGroup:
    kind = doc.get("kind")
    if kind == "cyclic":
        if "order" not in doc:
            raise ConfigError(f"groups.{name}.order", "cyclic groups need an order")
        return cyclic(int(doc["order"]), doc.get("prefix", ""))
    if kind == "klein":
        return klein_four()
    if kind == "s3":
        return s3()
    if kind == "table":
        try:
            return load_group_table(doc)
        except GroupTableError as err:
            raise ConfigError(f"groups.{name}", str(err)) from None
    raise ConfigError(f"groups.{name}.kind", f"unknown kind {kind!r}")


# -- check registry -------------------------------------------------------------


@dataclass
class CheckSpec:
    name: str
    anchor: str
    description: str
    params: dict                      # parameter name -> default
    runner: Callable

    def catalog_entry(self) -> dict:
        return {"name": self.name, "anchor": self.anchor,
                "description": self.description, "params": dict(self.params)}


REGISTRY: dict[str, CheckSpec] = {}


def register(name, anchor, description, params):
    def deco(fn):
        REGISTRY[name] = CheckSpec(name, anchor, description, params, fn)
        return fn
    return deco


def expect_failure(inner: VerificationReport, name: str) -> VerificationReport:
    """Wrap a negative control: the wrapped check passes iff the inner
    check failed (and the inner counterexample is preserved)."""
    verdict = PASS if inner.verdict == FAIL else FAIL
    return VerificationReport(
        name, inner.mode, verdict,
        notes=("negative control: inner check must fail",),
        counterexample=inner.counterexample, subreports=(inner,))


@register("theorem-b", "theorem-b",
          "increment isomorphism of the diagonal quotient of a group-valued shift",
          {"alphabet": "K", "rank": 2, "family_radius": 1, "roundtrip_radius": 3,
           "equivariance_radius": 2, "mode": "auto", "mc_samples": 10 ** 5,
           "window_radius": None, "samples": None})
def _run_theorem_b(ctx: SuiteContext, params: dict) -> VerificationReport:
    K = ctx.group(params["alphabet"], "checks.theorem-b.alphabet")
    rank = int(params["rank"])
    spec = free_group(*[chr(ord("a") + i) for i in range(rank)])
    samples = int(params["samples"] or ctx.samples)
    family = increment_family(spec, K, int(params["family_radius"]))
    if params["window_radius"] is not None:
        window = ball(spec, int(params["window_radius"]))
    else:
        window = []
        for v in family:
            for c in v.coords:
                if c not in window:
                    window.append(c)
    states = K.size ** len(window)
    mode = params["mode"]
    if mode == "auto":
        mode = "full" if states <= ctx.budget else "grouped"
    subs = []
    if mode == "full":
        from .actions import BernoulliShift
        shift = BernoulliShift(spec, K)
        joint = independence_exact(shift.space, family, window=window,
                                   budget=ctx.budget,
                                   name="increment-joint-uniformity",
                                   require_uniform=True)
        joint.parameters["window_states"] = states
        subs.append(joint)
    else:
        grouped = increment_grouped_reports(spec, K, int(params["family_radius"]),
                                            budget=ctx.budget)
        subs.append(combine_reports("increment-grouped-exact", grouped,
                                    parameters={"checks": len(grouped)}))
        from .actions import BernoulliShift
        shift = BernoulliShift(spec, K)
        subs.append(independence_mc(shift.space, family[:4], int(params["mc_samples"]),
                                    derive_seed(ctx.seed, "tb/mc"), ctx.quantile,
                                    name="increment-subfamily-mc"))
    subs.append(increment_equivariance_report(
        spec, K, int(params["equivariance_radius"]), samples,
        derive_seed(ctx.seed, "tb/equiv")))
    subs.append(increment_roundtrip_report(
        spec, K, int(params["roundtrip_radius"]), samples,
        derive_seed(ctx.seed, "tb/round")))
    return combine_reports("theorem-b", subs,
                           parameters={"alphabet": K.label, "rank": rank,
                                       "mode": mode})


@register("lemma-factor", "lemma-factor",
          "free-factor restriction of a coset shift and its quotient characterization",
          {"gamma": "G", "lam": "L", "K": "K", "radius": 2, "samples": None})
def _run_lemma_factor(ctx: SuiteContext, params: dict) -> VerificationReport:
    setting = FactorSetting(ctx.group(params["gamma"], "checks.lemma-factor.gamma"),
                            ctx.group(params["lam"], "checks.lemma-factor.lam"),
                            ctx.group(params["K"], "checks.lemma-factor.K"))
    samples = int(params["samples"] or ctx.samples)
    radius = int(params["radius"])
    subs = [restriction_consequence_report(setting, radius, samples,
                                           derive_seed(ctx.seed, "lf/conseq")),
            restriction_equivariance_report(setting, samples,
                                            derive_seed(ctx.seed, "lf/equi")),
            independence_exact(setting.shift.space, restriction_family(setting, 1),
                               budget=ctx.budget, require_uniform=True,
                               name="restriction-independence-radius1")]
    _, _, act, _ = quotient_code(setting)

    def variable_coords(t):
        return tuple(coset(setting.spec, setting.gamma, w * t)
                     for w in setting.lam_words(include_identity=True))

    subs.append(check_coinduced_characterization(
        setting.quotient, quotient_rho(setting), act, setting.lam, radius,
        transversal_kwargs={"parts": setting.gamma_group.label, "mode": "syllables"},
        variable_coords=variable_coords,
        reconstructor=factor_quotient_reconstructor(setting, radius),
        canonicalize=setting.quotient.normalize,
        samples=samples, seed=derive_seed(ctx.seed, "lf/char"), budget=ctx.budget))
    return combine_reports("lemma-factor", subs,
                           parameters={"gamma": setting.gamma_group.label,
                                       "lam": setting.lam_group.label,
                                       "K": setting.K.label, "radius": radius})


@register("star-action", "star-action",
          "transported free-product action over a co-induction, with both cocycles",
          {"gamma": "G", "lam": "L", "K": "K", "twist": 1, "relation_radius": 3,
           "orbit_radius": 2, "injectivity_grade": 2, "samples": None})
def _run_star_action(ctx: SuiteContext, params: dict) -> VerificationReport:
    gamma = ctx.group(params["gamma"], "checks.star-action.gamma")
    lam = ctx.group(params["lam"], "checks.star-action.lam")
    K = ctx.group(params["K"], "checks.star-action.K")
    twist = int(params["twist"])
    if not 0 <= twist < K.size:
        raise ConfigError("checks.star-action.twist", "twist must index a K element")
    ident_aut = tuple(range(lam.size))
    trivial = [K.identity] * lam.size
    twisted = [K.identity] * lam.size
    for i in range(lam.size):
        if i != lam.identity:
            twisted[i] = twist
    system = component_twist_system(lam, K, [(ident_aut, trivial),
                                             (ident_aut, twisted)])
    star = StarAction(gamma, system)
    samples = int(params["samples"] or ctx.samples)
    subs = [star_relation_report(star, int(params["relation_radius"]), samples,
                                 derive_seed(ctx.seed, "st/rel")),
            star_orbit_report(star, int(params["orbit_radius"]), samples,
                              derive_seed(ctx.seed, "st/orb")),
            star_injectivity_report(star, int(params["injectivity_grade"]), samples,
                                    derive_seed(ctx.seed, "st/inj")),
            star_conjugation_report(star)]
    return combine_reports("star-action", subs,
                           parameters={"gamma": gamma.label, "lam": lam.label,
                                       "K": K.label, "twist": K.names[twist]})


@register("lemma-2", "lemma-2",
          "cylinder compression of the twisted shift onto a higher-rank action",
          {"kappa": 2, "scan_radius": None, "identity_length": 4,
           "inverse_length": 3, "freshness_grade": 2, "dependency_grade": 2,
           "samples": None, "dependency_samples": 10,
           "determinacy_samples": 10 ** 4, "determinacy": True,
           "measure_mc": True, "measure_samples": 4000})
def _run_lemma_2(ctx: SuiteContext, params: dict) -> VerificationReport:
    kappa = int(params["kappa"])
    scan_radius = int(params["scan_radius"] or ctx.scan_radius)
    samples = int(params["samples"] or ctx.samples)
    system = CylinderAction(kappa, scan_radius)
    om, omp = system.omega(), system.omega_prime()
    subs = [cylinder_measure_report(system)]
    words_id = ball(system.spec_up, int(params["identity_length"]))
    pairs = [(g, h) for g in words_id for h in words_id
             if g.length() + h.length() <= int(params["identity_length"])]
    points = [system.sample_in_cylinder(derive_seed(ctx.seed, f"l2/id/{i}"))
              for i in range(samples)]
    subs.append(verify_identity(om, pairs, points, name="forward-cocycle-identity"))
    words_inv = ball(system.spec_up, int(params["inverse_length"]))
    points_inv = [system.sample_in_cylinder(derive_seed(ctx.seed, f"l2/inv/{i}"))
                  for i in range(samples)]
    subs.append(verify_inverse_pair(om, omp, words_inv, points_inv,
                                    lengths=(system.b_length_up, system.b_length_down),
                                    name="inverse-pair-and-length"))
    subs.append(coset_freshness_report(system, int(params["freshness_grade"]),
                                       min(samples, 20),
                                       derive_seed(ctx.seed, "l2/fresh")))
    subs.append(dependency_radius_report(system, int(params["dependency_grade"]),
                                         int(params["dependency_samples"]),
                                         derive_seed(ctx.seed, "l2/dep")))
    if params["determinacy"]:
        subs.append(match_determinacy_report(kappa, scan_radius,
                                             int(params["determinacy_samples"]),
                                             derive_seed(ctx.seed, "l2/det")))
    if params["measure_mc"]:
        subs.append(match_measure_report(kappa, scan_radius,
                                         int(params["measure_samples"]),
                                         derive_seed(ctx.seed, "l2/mm"),
                                         ctx.quantile))
    return combine_reports("lemma-2", subs,
                           parameters={"kappa": kappa, "scan_radius": scan_radius,
                                       "samples": samples})


@register("lemma-3", "lemma-3",
          "diagonal Bernoulli extension of a stable orbit equivalence",
          {"kappa": 2, "scan_radius": None, "lambda_grade": 1, "y_order": 2,
           "samples": None})
def _run_lemma_3(ctx: SuiteContext, params: dict) -> VerificationReport:
    kappa = int(params["kappa"])
    scan_radius = int(params["scan_radius"] or ctx.scan_radius)
    samples = min(int(params["samples"] or ctx.samples), 25)
    soe = build_cylinder_oe(kappa, scan_radius)
    system = soe.system
    lams = ball(system.spec_up, int(params["lambda_grade"]),
                parts=system.b_parts, exponent_bound=1)
    y_alphabet = cyclic(int(params["y_order"]))
    subs = [extension_distinctness_report(soe, lams, samples,
                                          derive_seed(ctx.seed, "l3/dist"))]
    pairs = [(1, system.spec_up.identity()), (2, system.spec_up.generator("b0"))]
    subs.append(extension_independence_report(soe, pairs, y_alphabet, samples,
                                              derive_seed(ctx.seed, "l3/ind")))
    subs.append(extension_action_report(soe, y_alphabet,
                                        ball(system.spec_up, 1),
                                        min(samples, 10),
                                        derive_seed(ctx.seed, "l3/act")))
    # degenerate whole-space instance: the extension is the plain diagonal
    from .actions import BernoulliShift
    f2 = free_group("a", "b")
    degenerate = degenerate_stable_oe(BernoulliShift(f2, cyclic(2)))
    subs.append(extension_distinctness_report(degenerate, ball(f2, 1), samples,
                                              derive_seed(ctx.seed, "l3/deg")))
    subs.append(extension_independence_report(
        degenerate, [(1, f2.identity()), (1, f2.generator("a"))],
        y_alphabet, samples, derive_seed(ctx.seed, "l3/degi")))
    return combine_reports("lemma-3", subs,
                           parameters={"kappa": kappa, "samples": samples})


@register("appendix-section", "appendix-section",
          "sections of free finite group actions on finite sets",
          {"cases": [["cyclic", 2, 3], ["cyclic", 3, 2]]})
def _run_appendix_section(ctx: SuiteContext, params: dict) -> VerificationReport:
    subs = []
    for kind, order, copies in params["cases"]:
        if kind != "cyclic":
            raise ConfigError("checks.appendix-section.cases",
                              "cases are [\"cyclic\", order, copies] triples")
        K = cyclic(int(order))
        subs.append(section_report(K, free_action_on_cosets(K, int(copies))))
    # negative control: a fixed point must be rejected with a witness
    from .actions import FiniteGroupAlphabetAction
    from .groups import Alphabet
    K = cyclic(2)
    alphabet = Alphabet(["p0", "p1", "p2"], label="3pts")
    nonfree = FiniteGroupAlphabetAction(K, alphabet, [(0, 1, 2), (1, 0, 2)])
    subs.append(expect_failure(section_report(K, nonfree), "non-free-rejected"))
    return combine_reports("appendix-section", subs)


@register("lemma-indep", "lemma-indep",
          "twisted-selector independence decision procedure",
          {"x_size": 2, "value_size": 2, "index_size": 3})
def _run_lemma_indep(ctx: SuiteContext, params: dict) -> VerificationReport:
    x_size = int(params["x_size"])
    value_size = int(params["value_size"])
    index_size = int(params["index_size"])
    H = cyclic(value_size)
    flip = tuple((v + 1) % value_size for v in range(value_size))
    ident = tuple(range(value_size))

    def act(h, v):
        return h[v] if h is not None else v

    positive = [
        Selector("twisted-by-x", lambda x: (flip if x("x") % 2 else ident,
                                            x("x") % index_size)),
        Selector("fixed-slot", lambda x: (ident, index_size - 1)),
    ]
    subs = [selector_independence_exact([("x", x_size)], list(range(index_size)),
                                        value_size, act, positive,
                                        name="selector-independence-positive")]
    duplicated = [
        Selector("first", lambda x: (ident, x("x") % index_size)),
        Selector("clash", lambda x: (ident, x("x") % index_size)),
    ]
    inner = selector_independence_exact([("x", x_size)], list(range(index_size)),
                                        value_size, act, duplicated,
                                        name="selector-independence-duplicated")
    subs.append(expect_failure(inner, "duplicated-index-rejected"))
    single = [Selector("y0", lambda x: (ident, 0))]
    subs.append(selector_independence_exact([("x", 1)], [0], value_size, act, single,
                                            name="selector-single-marginal"))
    return combine_reports("lemma-indep", subs,
                           parameters={"x_size": x_size, "value_size": value_size,
                                       "index_size": index_size})


@register("coinduction-characterization", "coinduction-characterization",
          "the three defining properties of a co-induced action",
          {"instance": "finite-factor", "kappa": 2, "radius": 2, "samples": None})
def _run_characterization(ctx: SuiteContext, params: dict) -> VerificationReport:
    from .actions import CoinducedAction, SubgroupAlphabetAction, TwistedCosetShift
    from .words import free_product
    samples = int(params["samples"] or ctx.samples)
    radius = int(params["radius"])
    instance = params["instance"]
    if instance == "finite-factor":
        G = free_product(cyclic(2, "g"), cyclic(2, "h"))
        inner = SubgroupAlphabetAction(G, "h2", cyclic(2),
                                       elem_perms=[(0, 1), (1, 0)])
        action = CoinducedAction(G, "h2", inner)
        base = coset(G, "h2", G.identity())
        rho = WindowFunction("rho", (base,), 2, lambda y: y.value(base))

        def reconstructor(values):
            return {coset(G, "h2", G.word(t)): v for t, v in values.items()}

        report = check_coinduced_characterization(
            action, rho, lambda lam, v: inner.act(lam, v), "h2", radius,
            transversal_kwargs={"parts": "g2", "mode": "syllables"},
            reconstructor=reconstructor, samples=samples,
            seed=derive_seed(ctx.seed, "cc/fin"), budget=ctx.budget)
    elif instance == "twisted-shift":
        kappa = int(params["kappa"])
        f2 = free_group("a", "b")
        action = TwistedCosetShift(f2, "b", kappa, {"a": 0, "b": 1})
        base = coset(f2, "b", f2.identity())
        rho = WindowFunction("rho", (base,), kappa, lambda x: x.value(base))

        def reconstructor(values):
            out = {}
            for tokens, v in values.items():
                t = f2.word(tokens)
                out[coset(f2, "b", t)] = (v - action.twist(t)) % kappa
            return out

        report = check_coinduced_characterization(
            action, rho, lambda lam, v: (v + action.twist(lam)) % kappa, "b", radius,
            transversal_kwargs={}, reconstructor=reconstructor, samples=samples,
            seed=derive_seed(ctx.seed, "cc/tw"), budget=ctx.budget)
    else:
        raise ConfigError("checks.coinduction-characterization.instance",
                          f"unknown instance {instance!r}")
    report.parameters["instance"] = instance
    return report


@register("negative-control", "negative-control",
          "a deliberately failing independence check (exit-code plumbing)",
          {})
def _run_negative_control(ctx: SuiteContext, params: dict) -> VerificationReport:
    from .actions import BernoulliShift
    f2 = free_group("a", "b")
    shift = BernoulliShift(f2, cyclic(2))
    v = coordinate_variable(shift.space, f2.identity(), "duplicated")
    return independence_exact(shift.space, [v, v], name="negative-control")


# -- config parsing and the suite runner ------------------------------------------


def parse_config(document: dict) -> tuple[SuiteContext, list]:
    if not isinstance(document, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    if document.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError("schema_version",
                          f"expected schema_version {SCHEMA_VERSION}")
    if "seed" not in document or not isinstance(document["seed"], int):
        raise ConfigError("seed", "an integer seed is mandatory")
    ctx = SuiteContext(
        seed=document["seed"],
        samples=int(document.get("samples", 100)),
        budget=int(document.get("budget", DEFAULT_BUDGET)),
        quantile=float(document.get("quantile", 0.999)),
        scan_radius=int(document.get("scan_radius", 64)))
    for name, doc in document.get("groups", {}).items():
        ctx.groups[name] = _build_group(name, doc)
    checks = document.get("checks")
    if not isinstance(checks, list) or not checks:
        raise ConfigError("checks", "a nonempty list of checks is required")
    resolved = []
    for i, entry in enumerate(checks):
        name = entry.get("name")
        if name not in REGISTRY:
            raise ConfigError(f"checks[{i}].name", f"unknown check {name!r}")
        spec = REGISTRY[name]
        params = dict(spec.params)
        for key, value in entry.get("params", {}).items():
            if key not in spec.params:
                raise ConfigError(f"checks[{i}].params.{key}",
                                  f"unknown parameter for check {name!r}")
            params[key] = value
        resolved.append((spec, params))
    return ctx, resolved


def list_checks() -> list[dict]:
    """Self-describing catalog of the registered checks."""
    return [REGISTRY[name].catalog_entry() for name in sorted(REGISTRY)]


def _exit_code(verdicts: list[str]) -> int:
    if FAIL in verdicts:
        return 1
    if UNDETERMINED in verdicts:
        return 2
    return 0


def run_suite(config_path, out_dir, only: str | None = None,
              seed_override: int | None = None, budget_override: int | None = None,
              fmt: str = "text", stream=None) -> int:
    """Run every check of the config document and write report files.

    Returns the exit status (0 pass / 1 fail / 2 undetermined / 3 config
    error); the summary and one report per check land in out_dir.
    """
    stream = stream or sys.stdout
    try:
        document = json.loads(Path(config_path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        print(f"config error at <file>: {err}", file=stream)
        return 3
    try:
        ctx, checks = parse_config(document)
        if seed_override is not None:
            ctx.seed = seed_override
        if budget_override is not None:
            ctx.budget = budget_override
        if only is not None:
            checks = [(spec, params) for spec, params in checks if spec.name == only]
            if not checks:
                raise ConfigError("checks", f"--only {only!r} matches no check")
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        summary_checks = []
        verdicts = []
        for i, (spec, params) in enumerate(checks):
            started = time.perf_counter()
            report = spec.runner(ctx, params)
            runtime = time.perf_counter() - started
            filename = f"{i:02d}-{spec.name}.json"
            payload = {
                "schema_version": SCHEMA_VERSION,
                "check": spec.name,
                "report": report.to_payload(),
            }
            body = dict(payload)
            body["timing"] = {
                "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
                "runtime_s": runtime,
            }
            (out / filename).write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")
            summary_checks.append({"name": spec.name, "verdict": report.verdict,
                                   "file": filename})
            verdicts.append(report.verdict)
            if fmt == "text":
                print(f"[{report.verdict.upper():>12}] {spec.name}", file=stream)
        summary = {
            "schema_version": SCHEMA_VERSION,
            "suite": document.get("suite", Path(config_path).stem),
            "seed": ctx.seed,
            "checks": summary_checks,
            "verdict": worst_verdict(verdicts),
        }
        summary_body = dict(summary)
        summary_body["timing"] = {
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat()}
        (out / "summary.json").write_text(
            json.dumps(summary_body, indent=2, sort_keys=True) + "\n")
        if fmt == "structured":
            print(json.dumps(summary, indent=2, sort_keys=True), file=stream)
        else:
            print(f"suite verdict: {summary['verdict']}", file=stream)
        return _exit_code(verdicts)
    except ConfigError as err:
        print(str(err), file=stream)
        return 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="orbitlab",
        description="run exact/Monte-Carlo verification suites over shift actions")
    parser.add_argument("--config", help="path to the suite config document")
    parser.add_argument("--out", help="directory for report files")
    parser.add_argument("--only", help="run only the named check")
    parser.add_argument("--seed-override", type=int, default=None)
    parser.add_argument("--budget", type=int, default=None,
                        help="override the enumeration budget")
    parser.add_argument("--format", choices=["text", "structured"], default="text")
    parser.add_argument("--list-checks", action="store_true",
                        help="print the check catalog and exit")
    args = parser.parse_args(argv)
    if args.list_checks:
        print(json.dumps(list_checks(), indent=2, sort_keys=True))
        return 0
    if not args.config or not args.out:
        parser.error("--config and --out are required unless --list-checks")
    return run_suite(args.config, args.out, only=args.only,
                     seed_override=args.seed_override, budget_override=args.budget,
                     fmt=args.format)


if __name__ == "__main__":
    sys.exit(main())
