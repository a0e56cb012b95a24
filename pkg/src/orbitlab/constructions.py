"""The explicit builders: the increment isomorphism for diagonal quotients
of group-valued shifts, the free-factor restriction map, transported
(star) actions over co-inductions, the cylinder compression of the twisted
shift onto a higher-rank action, its diagonal Bernoulli extension, and
sections of free finite group actions.

Everything here is assembled from the word/space/action/cocycle layers and
verified by the engines in `verify`; oracle-backed maps (first-return
times, parenthesis matching) carry scan radii and report unresolved scans
as explicit outcomes.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .actions import (Action, BernoulliShift, CoinducedAction,
                      FiniteGroupAlphabetAction, FirstReturnOracle, IntShift,
                      QuotientByDiagonal, SubgroupAlphabetAction, TwistedCosetShift,
                      left_translation_action, value_twist)
from .cocycles import Cocycle, CocycleTarget, identity_cocycle
from .groups import Alphabet, FiniteGroup, cyclic, direct_power, tuple_index
from .spaces import (Configuration, DEFAULT_BUDGET, RecordingConfiguration,
                     SeededConfiguration, Space, agree_on, derive_seed,
                     exact_distribution, quotient_normalize, sample, sample_stream)
from .verify import (FAIL, PASS, UNDETERMINED, UndeterminedError,
                     VerificationReport, WindowFunction, combine_reports,
                     homogeneity_mc, independence_exact,
                     selector_independence_on_samples, timed)
from .words import (Coset, GroupSpec, Word, ball, coset, cosets_ball,
                    extension_sphere, free_group, free_product, transversal_words)


# ===========================================================================
# Increment isomorphism: group-valued shifts modulo diagonal translation
# ===========================================================================
#
# For a free group with generators a_1..a_n and a K-valued configuration x,
# the increment of x along the edge g -> a_i g is x_g^-1 x_{a_i g}.  The
# increment map is invariant under diagonal left translation, equivariant
# for the shift, and invertible on windows after normalization: integrating
# the increments along the left Cayley tree from the base vertex recovers
# the orbit representative.


class IncrementView(Configuration):
    """K^n-valued view of a K-valued configuration over a free group."""

    def __init__(self, base: Configuration, power_group: FiniteGroup,
                 generators: Sequence[Word]):
        self.space = Space(base.space.index, power_group)
        self.base = base
        self.power_group = power_group
        self.generators = tuple(generators)
        self.k_group = base.space.alphabet

    def value(self, coord) -> int:
        g = self.space.index.canonicalize(coord)
        k_inv = self.k_group.inv(self.base.value(g))
        comps = tuple(self.k_group.mul(k_inv, self.base.value(a * g))
                      for a in self.generators)
        return tuple_index(self.power_group, comps)

    def window(self) -> dict:
        # coordinates whose full increment star lies in the base window
        base_window = self.base.window()
        out = {}
        for g in base_window:
            if all((a * g) in base_window for a in self.generators):
                out[g] = self.value(g)
        return out

    @property
    def point_key(self):
        return ("increments", self.base.point_key)


def edge_increments(x: Configuration, power_group: FiniteGroup | None = None
                    ) -> IncrementView:
    """The increment configuration of a group-valued free-group configuration."""
    spec = x.space.index.spec
    generators = [spec.generator(p.name) for p in spec.parts]
    if power_group is None:
        power_group = direct_power(x.space.alphabet, len(generators))
    return IncrementView(x, power_group, generators)


def integrate_increments(v: Configuration, radius: int) -> Configuration:
    """Inverse of the increment map on a ball: the base vertex is pinned to
    the identity and values propagate along the left Cayley tree."""
    power_group: FiniteGroup = v.space.alphabet
    K: FiniteGroup = power_group.factor
    spec = v.space.index.spec
    gen_index = {p.name: i for i, p in enumerate(spec.parts)}
    window: dict = {}
    from .spaces import ExplicitConfiguration, GroupIndex
    for w in ball(spec, radius):
        if w.is_identity:
            window[w] = K.identity
            continue
        letter, rest = w.split_first_letter()
        _, part, exp = letter.syllables[0]
        i = gen_index[spec.parts[part].name]
        if exp == 1:
            # w = a_i . rest: x_w = x_rest * increment(rest)_i
            inc = power_group.component_tuples[v.value(rest)][i]
            window[w] = K.mul(window[rest], inc)
        else:
            # w = a_i^-1 . rest: x_rest = x_w * increment(w)_i
            inc = power_group.component_tuples[v.value(w)][i]
            window[w] = K.mul(window[rest], K.inv(inc))
    return ExplicitConfiguration(Space(GroupIndex(spec), K), window)


def increment_family(spec: GroupSpec, K: FiniteGroup, radius: int
                     ) -> list[WindowFunction]:
    """The variables x -> x_g^-1 x_{a_i g} for g in the radius ball."""
    out = []
    generators = [spec.generator(p.name) for p in spec.parts]
    for g in ball(spec, radius):
        for a in generators:
            out.append(WindowFunction(
                f"{a.tokens()}|{g.tokens()}", (g, a * g), K.size,
                (lambda x, g=g, a=a: K.mul(K.inv(x.value(g)), x.value(a * g)))))
    return out


def increment_equivariance_report(spec: GroupSpec, K: FiniteGroup, radius: int,
                                  samples: int, seed: int) -> VerificationReport:
    """theta(h.x)_g = theta(x)_{gh}, exactly, over the output window."""
    started = time.perf_counter()
    shift = BernoulliShift(spec, K)
    power = direct_power(K, len(spec.parts))
    window = ball(spec, radius)
    words = ball(spec, 3)
    checked = 0
    for x in sample_stream(shift.space, seed, samples):
        v = edge_increments(x, power)
        for h in words:
            vh = edge_increments(shift.apply(h, x), power)
            for g in window:
                if vh.value(g) != v.value(g * h):
                    return timed(VerificationReport(
                        "increment-equivariance", "exact", FAIL, seed=seed,
                        counterexample={"h": h, "g": g}), started)
                checked += 1
    return timed(VerificationReport(
        "increment-equivariance", "exact", PASS, seed=seed,
        parameters={"radius": radius, "samples": samples, "shifts": len(words)},
        statistics={"comparisons": checked}), started)


def increment_roundtrip_report(spec: GroupSpec, K: FiniteGroup, radius: int,
                               samples: int, seed: int) -> VerificationReport:
    """integrate(increments(x)) equals the diagonal-orbit representative of
    x on the radius ball, and increments(integrate(v)) returns v."""
    started = time.perf_counter()
    shift = BernoulliShift(spec, K)
    power = direct_power(K, len(spec.parts))
    window = ball(spec, radius)
    inner_window = ball(spec, radius - 1)
    e = spec.identity()
    for x in sample_stream(shift.space, seed, samples):
        rebuilt = integrate_increments(edge_increments(x, power), radius)
        normalized = quotient_normalize(x, e)
        if not agree_on(rebuilt, normalized, window):
            return timed(VerificationReport(
                "increment-roundtrip", "exact", FAIL, seed=seed,
                notes=("integrate(increments(x)) != normalized x",)), started)
    vspace = Space(shift.space.index, power)
    for v in sample_stream(vspace, derive_seed(seed, "v"), samples):
        x = integrate_increments(v, radius)
        v2 = edge_increments(x, power)
        if not agree_on(v2, v, inner_window):
            return timed(VerificationReport(
                "increment-roundtrip", "exact", FAIL, seed=seed,
                notes=("increments(integrate(v)) != v",)), started)
    return timed(VerificationReport(
        "increment-roundtrip", "exact", PASS, seed=seed,
        parameters={"radius": radius, "samples": samples}), started)


def increment_uniformity_report(spec: GroupSpec, K: FiniteGroup, radius: int,
                                budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Exact joint uniformity of the increment family over the full window."""
    started = time.perf_counter()
    shift = BernoulliShift(spec, K)
    family = increment_family(spec, K, radius)
    report = independence_exact(shift.space, family, budget=budget,
                                name="increment-joint-uniformity",
                                require_uniform=True)
    report.parameters["radius"] = radius
    return timed(report, started)


def increment_grouped_reports(spec: GroupSpec, K: FiniteGroup, radius: int,
                              budget: int = DEFAULT_BUDGET) -> list[VerificationReport]:
    """Exact checks on minimal windows: the per-vertex increment tuple is
    uniform, and every pair of variables is exactly independent."""
    shift = BernoulliShift(spec, K)
    family = increment_family(spec, K, radius)
    per_vertex: dict = {}
    for v in family:
        per_vertex.setdefault(v.coords[0], []).append(v)
    out = []
    for g, vars_ in sorted(per_vertex.items(), key=lambda kv: kv[0].sort_key()):
        out.append(independence_exact(shift.space, vars_, budget=budget,
                                      name=f"increments-at-{g.tokens()}",
                                      require_uniform=True))
    for v1, v2 in itertools.combinations(family, 2):
        out.append(independence_exact(shift.space, [v1, v2], budget=budget,
                                      name=f"pair-{v1.name}-{v2.name}",
                                      require_uniform=True))
    return out


# ===========================================================================
# Free-factor restriction of a coset-indexed shift
# ===========================================================================
#
# For G = Gamma * Lambda acting on K^(Gamma\G) by index translation, with K
# translating values diagonally, restricting a configuration to the
# Lambda-indexed cosets is an equivariant factor map; its normalized
# increments theta_lambda(x) = x_{Gamma e}^-1 x_{Gamma lambda} generate the
# diagonal quotient.


def factor_restriction(x: Configuration, gamma, lam_group: FiniteGroup,
                       lam_part) -> tuple[dict, dict]:
    """Restriction of x to the subgroup-indexed cosets and its normalized
    increments; returns ({lambda: value}, {lambda != e: increment})."""
    spec = x.space.index.spec
    K: FiniteGroup = x.space.alphabet
    values = {}
    for i in range(lam_group.size):
        lam_word = spec.finite_element(lam_part, i)
        values[i] = x.value(coset(spec, gamma, lam_word))
    base_inv = K.inv(values[lam_group.identity])
    increments = {i: K.mul(base_inv, v) for i, v in values.items()
                  if i != lam_group.identity}
    return values, increments


@dataclass
class FactorSetting:
    """G = Gamma * Lambda acting on K^(Gamma\\G), with the diagonal K."""

    gamma_group: FiniteGroup
    lam_group: FiniteGroup
    K: FiniteGroup

    def __post_init__(self):
        self.spec = free_product(self.gamma_group, self.lam_group)
        self.gamma = self.spec.part_index(self.gamma_group.label)
        self.lam = self.spec.part_index(self.lam_group.label)
        self.shift = BernoulliShift(self.spec, self.K, subgroup=self.gamma)
        self.base = coset(self.spec, self.gamma, self.spec.identity())
        self.quotient = QuotientByDiagonal(self.shift, left_translation_action(self.K),
                                           self.base)

    def lam_words(self, include_identity=False) -> list[Word]:
        out = []
        for i in range(self.lam_group.size):
            if i == self.lam_group.identity and not include_identity:
                continue
            out.append(self.spec.finite_element(self.lam, i))
        return out

    def transversal(self, radius: int) -> list[Word]:
        return transversal_words(self.spec, self.lam, radius,
                                 parts=self.gamma_group.label, mode="syllables")


def restriction_consequence_report(setting: FactorSetting, radius: int,
                                   samples: int, seed: int) -> VerificationReport:
    """The restricted increments of a shifted configuration read off the
    original coordinates: theta_lambda of (g.x) equals x_{Gamma g}^-1
    x_{Gamma lambda g}, exactly."""
    started = time.perf_counter()
    sp, K = setting.spec, setting.K
    words = ball(sp, radius, parts=setting.gamma_group.label, mode="syllables")
    checked = 0
    for x in sample_stream(setting.shift.space, seed, samples):
        for g in words:
            gx = setting.shift.apply(g, x)
            _, increments = factor_restriction(gx, setting.gamma,
                                               setting.lam_group, setting.lam)
            for i, got in increments.items():
                lam_word = sp.finite_element(setting.lam, i)
                expected = K.mul(K.inv(x.value(coset(sp, setting.gamma, g))),
                                 x.value(coset(sp, setting.gamma, lam_word * g)))
                if got != expected:
                    return timed(VerificationReport(
                        "restriction-consequence", "exact", FAIL, seed=seed,
                        counterexample={"g": g, "lambda": lam_word}), started)
                checked += 1
    return timed(VerificationReport(
        "restriction-consequence", "exact", PASS, seed=seed,
        parameters={"radius": radius, "samples": samples},
        statistics={"identities": checked}), started)


def restriction_equivariance_report(setting: FactorSetting, samples: int,
                                    seed: int) -> VerificationReport:
    """The restriction intertwines the subgroup translation and the diagonal
    K-translation with their actions on the restricted configuration."""
    started = time.perf_counter()
    sp, K = setting.spec, setting.K
    lam_all = list(range(setting.lam_group.size))
    for x in sample_stream(setting.shift.space, seed, samples):
        values, _ = factor_restriction(x, setting.gamma, setting.lam_group, setting.lam)
        for lw in setting.lam_words():
            shifted, _ = factor_restriction(setting.shift.apply(lw, x),
                                            setting.gamma, setting.lam_group,
                                            setting.lam)
            iw = lw.syllables[0][2]
            for mu in lam_all:
                if shifted[mu] != values[setting.lam_group.mul(mu, iw)]:
                    return timed(VerificationReport(
                        "restriction-equivariance", "exact", FAIL, seed=seed,
                        counterexample={"lambda": lw, "mu": setting.lam_group.names[mu]}),
                        started)
        for k in range(K.size):
            kx = value_twist(x, left_translation_action(K).perms[k])
            kvalues, _ = factor_restriction(kx, setting.gamma, setting.lam_group,
                                            setting.lam)
            if any(kvalues[mu] != K.mul(k, values[mu]) for mu in lam_all):
                return timed(VerificationReport(
                    "restriction-equivariance", "exact", FAIL, seed=seed,
                    counterexample={"k": K.names[k]}), started)
    return timed(VerificationReport(
        "restriction-equivariance", "exact", PASS, seed=seed,
        parameters={"samples": samples}), started)


def restriction_family(setting: FactorSetting, radius: int) -> list[WindowFunction]:
    """The variables x -> x_{Gamma g}^-1 x_{Gamma lambda g} for g in the
    graded transversal and lambda != e."""
    sp, K = setting.spec, setting.K
    out = []
    for g in setting.transversal(radius):
        cg = coset(sp, setting.gamma, g)
        for lw in setting.lam_words():
            clg = coset(sp, setting.gamma, lw * g)
            out.append(WindowFunction(
                f"{lw.tokens()}|{g.tokens()}", (cg, clg), K.size,
                (lambda x, cg=cg, clg=clg: K.mul(K.inv(x.value(cg)), x.value(clg)))))
    return out


def quotient_code(setting: FactorSetting):
    """Encoding of the diagonal quotient of K^Lambda as normalized increment
    tuples, plus the induced subgroup action on codes."""
    K, lam_group = setting.K, setting.lam_group
    nontrivial = [i for i in range(lam_group.size) if i != lam_group.identity]
    size = K.size ** len(nontrivial)

    def encode(values: dict) -> int:
        base_inv = K.inv(values[lam_group.identity])
        code = 0
        for i in nontrivial:
            code = code * K.size + K.mul(base_inv, values[i])
        return code

    def decode(code: int) -> dict:
        values = {lam_group.identity: K.identity}
        for i in reversed(nontrivial):
            values[i] = code % K.size
            code //= K.size
        return values

    def act(lam_word: Word, code: int) -> int:
        values = decode(code)
        j = lam_group.identity if lam_word.is_identity else lam_word.syllables[0][2]
        shifted = {mu: values[lam_group.mul(mu, j)] for mu in values}
        return encode(shifted)

    return encode, decode, act, size


def quotient_rho(setting: FactorSetting) -> WindowFunction:
    encode, _, _, size = quotient_code(setting)
    sp = setting.spec
    coords = tuple(coset(sp, setting.gamma, w)
                   for w in setting.lam_words(include_identity=True))

    def fn(x: Configuration) -> int:
        values = {w.syllables[0][2] if not w.is_identity else setting.lam_group.identity:
                  x.value(coset(sp, setting.gamma, w))
                  for w in setting.lam_words(include_identity=True)}
        return encode(values)

    return WindowFunction("rho-bar", coords, size, fn)


def factor_quotient_reconstructor(setting: FactorSetting, radius: int) -> Callable:
    """Rebuild the normalized window from the transversal increment values.

    Values are keyed by the transversal word tokens (the characterization
    variables); the reconstruction integrates increments grade by grade.
    """
    sp = setting.spec
    lam_group, K = setting.lam_group, setting.K
    _, decode, _, _ = quotient_code(setting)
    transversal = setting.transversal(radius)

    def reconstruct(values: dict) -> dict:
        w: dict = {setting.base: K.identity}
        by_grade = sorted(transversal,
                          key=lambda t: (t.length(setting.gamma, "syllables"),
                                         t.tokens()))
        for t in by_grade:
            increments = decode(values[t.tokens()])
            ct = coset(sp, setting.gamma, t)
            if ct not in w:
                raise KeyError(f"missing base coset for transversal {t.tokens()}")
            for i, inc in increments.items():
                if i == lam_group.identity:
                    continue
                lam_word = sp.finite_element(setting.lam, i)
                w[coset(sp, setting.gamma, lam_word * t)] = K.mul(w[ct], inc)
        return w

    return reconstruct


# ===========================================================================
# Transported (star) actions over a co-induction
# ===========================================================================


class CommutingSystem:
    """A finite set carrying three commuting-by-construction actions: a
    "dot" action of lam1 x K and a "star" action of lam0 x K with the same
    orbits, all essentially free.  This is the inner data from which the
    star action on the co-induced space is transported."""

    def __init__(self, lam0: FiniteGroup, lam1: FiniteGroup, K: FiniteGroup,
                 alphabet: Alphabet, act0: FiniteGroupAlphabetAction,
                 act1: FiniteGroupAlphabetAction, actk: FiniteGroupAlphabetAction):
        self.lam0, self.lam1, self.K = lam0, lam1, K
        self.alphabet = alphabet
        self.act0, self.act1, self.actk = act0, act1, actk
        for name, act in (("lam0", act0), ("lam1", act1)):
            for l in range(act.group.size):
                for k in range(K.size):
                    for v in range(alphabet.size):
                        if actk.act(k, act.act(l, v)) != act.act(l, actk.act(k, v)):
                            raise ValueError(f"K does not commute with the {name} action")
        for label, (ga, gb) in (("dot", (act1, actk)), ("star", (act0, actk))):
            for la in range(ga.group.size):
                for kb in range(gb.group.size):
                    if la == ga.group.identity and kb == gb.group.identity:
                        continue
                    for v in range(alphabet.size):
                        if ga.act(la, gb.act(kb, v)) == v:
                            raise ValueError(f"the {label} product action is not free")
        for v in range(alphabet.size):
            dot_orbit = {actk.act(k, act1.act(l, v))
                         for l in range(lam1.size) for k in range(K.size)}
            star_orbit = {actk.act(k, act0.act(l, v))
                          for l in range(lam0.size) for k in range(K.size)}
            if dot_orbit != star_orbit:
                raise ValueError(f"orbit mismatch at point {alphabet.names[v]}")

    def solve_transport(self) -> tuple[dict, dict]:
        """eta[(l0, v)] = the unique (l1, k) with (l1, k).v = l0 * v, and the
        inverse direction eta'[(l1, v)] with (l0, k) * v = l1 . v."""
        eta: dict = {}
        eta_prime: dict = {}
        for v in range(self.alphabet.size):
            for l0 in range(self.lam0.size):
                target = self.act0.act(l0, v)
                hits = [(l1, k) for l1 in range(self.lam1.size)
                        for k in range(self.K.size)
                        if self.actk.act(k, self.act1.act(l1, v)) == target]
                if len(hits) != 1:
                    raise ValueError(f"transport not uniquely solvable at "
                                     f"({self.lam0.names[l0]}, {self.alphabet.names[v]})")
                eta[(l0, v)] = hits[0]
            for l1 in range(self.lam1.size):
                target = self.act1.act(l1, v)
                hits = [(l0, k) for l0 in range(self.lam0.size)
                        for k in range(self.K.size)
                        if self.actk.act(k, self.act0.act(l0, v)) == target]
                if len(hits) != 1:
                    raise ValueError("inverse transport not uniquely solvable")
                eta_prime[(l1, v)] = hits[0]
        return eta, eta_prime


def component_twist_system(lam: FiniteGroup, K: FiniteGroup,
                           components: Sequence[tuple]) -> CommutingSystem:
    """Points (l, k, j): lam1 = lam left-translates l, K left-translates k,
    and the star copy of lam acts through a per-component automorphism and
    a per-component twist into K:

        l0 * (l, k, j) = (aut_j(l0) . l, k . twist_j(l0), j)

    Each component is (aut, twist): aut a permutation of lam's elements
    (an automorphism) and twist a list giving a homomorphism lam -> K.
    """
    names = [f"({lam.names[l]},{K.names[k]},{j})"
             for j in range(len(components))
             for l in range(lam.size) for k in range(K.size)]
    alphabet = Alphabet(names, label="twist-system")

    def idx(l, k, j):
        return (j * lam.size + l) * K.size + k

    def perms_from(point_map) -> list[tuple]:
        out = []
        for g in range(lam.size):
            perm = [0] * alphabet.size
            for j in range(len(components)):
                for l in range(lam.size):
                    for k in range(K.size):
                        perm[idx(l, k, j)] = point_map(g, l, k, j)
            out.append(tuple(perm))
        return out

    act1 = FiniteGroupAlphabetAction(
        lam, alphabet, perms_from(lambda g, l, k, j: idx(lam.mul(g, l), k, j)))
    actk_perms = []
    for kk in range(K.size):
        perm = [0] * alphabet.size
        for j in range(len(components)):
            for l in range(lam.size):
                for k in range(K.size):
                    perm[idx(l, k, j)] = idx(l, K.mul(kk, k), j)
        actk_perms.append(tuple(perm))
    actk = FiniteGroupAlphabetAction(K, alphabet, actk_perms)
    act0 = FiniteGroupAlphabetAction(
        lam, alphabet,
        perms_from(lambda g, l, k, j: idx(lam.mul(components[j][0][g], l),
                                          K.mul(k, components[j][1][g]), j)))
    return CommutingSystem(lam, lam, K, alphabet, act0, act1, actk)


class StarAction(Action):
    """The transported action of G0 = Gamma * Lam0 on the co-induced space
    of the inner system along Lam1 < G1 = Gamma * Lam1: Gamma acts as in the
    co-induction and Lam0 acts through the transport cocycle evaluated at
    the base coset."""

    def __init__(self, gamma: FiniteGroup, system: CommutingSystem,
                 r_mode: str = "transversal"):
        self.system = system
        self.gamma_group = gamma
        self.spec0 = free_product(gamma, system.lam0)
        self.spec1 = free_product(gamma, system.lam1)
        self.gamma0 = self.spec0.part_index(gamma.label)
        self.gamma1 = self.spec1.part_index(gamma.label)
        self.lam0 = self.spec0.part_index(system.lam0.label)
        self.lam1 = self.spec1.part_index(system.lam1.label)
        self.inner = SubgroupAlphabetAction(self.spec1, self.lam1, system.alphabet,
                                            elem_perms=system.act1.perms)
        self.dot = CoinducedAction(self.spec1, self.lam1, self.inner, r_mode)
        self.space = self.dot.space
        self.group_spec = self.spec0
        self.base = coset(self.spec1, self.lam1, self.spec1.identity())
        self.eta, self.eta_prime = system.solve_transport()
        self.quotient = QuotientByDiagonal(self.dot, system.actk, self.base)
        self._cache: dict = {}

    def to_spec1(self, g: Word) -> Word:
        return self.spec1.word(g.tokens())

    def to_spec0(self, g: Word) -> Word:
        return self.spec0.word(g.tokens())

    def rho(self, y: Configuration) -> int:
        return y.value(self.base)

    def apply_pair(self, pair: tuple, y: Configuration) -> Configuration:
        """The dot action of (word in G1, element of K)."""
        w, k = pair
        return value_twist(self.dot.apply(w, y), self.system.actk.perms[k])

    def apply(self, g: Word, y: Configuration) -> Configuration:
        if g.is_identity:
            return y
        key = (g.syllables, y.point_key)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        letter, rest = g.split_first_letter()
        target = y if rest.is_identity else self.apply(rest, y)
        kind, part, v = letter.syllables[0]
        if part == self.gamma0:
            out = self.dot.apply(self.to_spec1(letter), target)
        else:
            l1, k = self.eta[(v, self.rho(target))]
            out = self.apply_pair((self.spec1.finite_element(self.lam1, l1), k), target)
        self._cache[key] = out
        return out

    def omega(self) -> Cocycle:
        """The glued cocycle with g * y = omega(g, y) . y, valued in G1 x K."""
        target = CocycleTarget(spec=self.spec1, k_group=self.system.K)
        entries = {}
        for i in range(self.gamma_group.size):
            if i == self.gamma_group.identity:
                continue
            image = (self.spec1.finite_element(self.gamma1, i), self.system.K.identity)
            entries[("f", self.gamma0, i)] = (lambda y, image=image: image)
        for l0 in range(self.system.lam0.size):
            if l0 == self.system.lam0.identity:
                continue

            def entry(y, l0=l0):
                l1, k = self.eta[(l0, self.rho(y))]
                return (self.spec1.finite_element(self.lam1, l1), k)

            entries[("f", self.lam0, l0)] = entry
        return Cocycle(self, target, entries, "star-transport")

    def omega_prime(self) -> Cocycle:
        """The inverse-direction cocycle with g . y = omega'(g, y) * y."""
        target = CocycleTarget(spec=self.spec0, k_group=self.system.K)
        entries = {}
        for i in range(self.gamma_group.size):
            if i == self.gamma_group.identity:
                continue
            image = (self.spec0.finite_element(self.gamma0, i), self.system.K.identity)
            entries[("f", self.gamma1, i)] = (lambda y, image=image: image)
        for l1 in range(self.system.lam1.size):
            if l1 == self.system.lam1.identity:
                continue

            def entry(y, l1=l1):
                l0, k = self.eta_prime[(l1, self.rho(y))]
                return (self.spec0.finite_element(self.lam0, l0), k)

            entries[("f", self.lam1, l1)] = entry
        return Cocycle(self.dot, target, entries, "star-transport-inverse")

    def star_pair_apply(self, pair: tuple, y: Configuration) -> Configuration:
        """The star action of (word in G0, element of K)."""
        w, k = pair
        return value_twist(self.apply(w, y), self.system.actk.perms[k])


def star_relation_report(star: StarAction, radius: int, samples: int,
                         seed: int) -> VerificationReport:
    """g * y = omega(g, y) . y on sampled points, compared on a coset window."""
    started = time.perf_counter()
    om = star.omega()
    words = ball(star.spec0, radius, mode="syllables")
    window = cosets_ball(star.spec1, star.lam1, radius + 1,
                         parts=star.gamma_group.label, mode="syllables")
    for y in sample_stream(star.space, seed, samples):
        cache: dict = {}
        for g in words:
            left = star.apply(g, y)
            right = star.apply_pair(om.evaluate(g, y, cache), y)
            if not agree_on(left, right, window):
                return timed(VerificationReport(
                    "star-relation", "exact", FAIL, seed=seed,
                    counterexample={"g": g}), started)
    return timed(VerificationReport(
        "star-relation", "exact", PASS, seed=seed,
        parameters={"radius": radius, "samples": samples,
                    "words": len(words), "window": len(window)}), started)


def star_orbit_report(star: StarAction, radius: int, samples: int,
                      seed: int) -> VerificationReport:
    """Both orbit inclusions on the K-quotient, witnessed by the explicit
    cocycles: the star orbit of the class of y lies in the dot orbit and
    conversely."""
    started = time.perf_counter()
    om, omp = star.omega(), star.omega_prime()
    words0 = ball(star.spec0, radius, mode="syllables")
    words1 = ball(star.spec1, radius, mode="syllables")
    window = cosets_ball(star.spec1, star.lam1, radius + 1,
                         parts=star.gamma_group.label, mode="syllables")
    normalize = star.quotient.normalize
    for y in sample_stream(star.space, seed, samples):
        for g in words0:
            w, _ = om.evaluate(g, y)
            if not agree_on(normalize(star.apply(g, y)),
                            normalize(star.dot.apply(w, y)), window):
                return timed(VerificationReport(
                    "star-orbit-inclusions", "exact", FAIL, seed=seed,
                    counterexample={"direction": "star into dot", "g": g}), started)
        for h in words1:
            w, _ = omp.evaluate(h, y)
            if not agree_on(normalize(star.dot.apply(h, y)),
                            normalize(star.apply(w, y)), window):
                return timed(VerificationReport(
                    "star-orbit-inclusions", "exact", FAIL, seed=seed,
                    counterexample={"direction": "dot into star", "h": h}), started)
    return timed(VerificationReport(
        "star-orbit-inclusions", "exact", PASS, seed=seed,
        parameters={"radius": radius, "samples": samples}), started)


def star_injectivity_report(star: StarAction, max_grade: int, samples: int,
                            seed: int) -> VerificationReport:
    """For each sample, the word part of the cocycle maps the graded
    transversal slices injectively into the corresponding slices of the
    target group (gamma-letter grade and leading-letter side preserved)."""
    started = time.perf_counter()
    om = star.omega()
    gname = star.gamma_group.label
    for y in sample_stream(star.space, seed, samples):
        cache: dict = {}
        for n in range(1, max_grade + 1):
            slice_n = [w for w in transversal_words(star.spec0, star.lam0, n,
                                                    parts=gname, mode="syllables")
                       if w.length(gname, "syllables") == n]
            images = []
            for g in slice_n:
                w, _ = om.evaluate(g, y, cache)
                if w.length(gname, "syllables") != n or w.first_part() != star.gamma1:
                    return timed(VerificationReport(
                        "star-transversal-injectivity", "exact", FAIL, seed=seed,
                        counterexample={"g": g, "image": w, "grade": n}), started)
                images.append(w)
            if len(set(images)) != len(images):
                return timed(VerificationReport(
                    "star-transversal-injectivity", "exact", FAIL, seed=seed,
                    counterexample={"grade": n,
                                    "images": [w.tokens() for w in images]}), started)
    return timed(VerificationReport(
        "star-transversal-injectivity", "exact", PASS, seed=seed,
        parameters={"max_grade": max_grade, "samples": samples}), started)


def star_conjugation_report(star: StarAction) -> VerificationReport:
    """The transport cocycle conjugates under the commuting translation:
    eta(l0, k.v) = k eta(l0, v) k^-1, exhaustively over the inner set."""
    started = time.perf_counter()
    sys_ = star.system
    for l0 in range(sys_.lam0.size):
        for v in range(sys_.alphabet.size):
            l1, kv = star.eta[(l0, v)]
            for k in range(sys_.K.size):
                l1_t, kv_t = star.eta[(l0, sys_.actk.act(k, v))]
                expected = sys_.K.mul(k, sys_.K.mul(kv, sys_.K.inv(k)))
                if (l1_t, kv_t) != (l1, expected):
                    return timed(VerificationReport(
                        "transport-conjugation", "exact", FAIL,
                        counterexample={"l0": sys_.lam0.names[l0],
                                        "point": sys_.alphabet.names[v],
                                        "k": sys_.K.names[k]}), started)
    return timed(VerificationReport(
        "transport-conjugation", "exact", PASS,
        statistics={"triples": sys_.lam0.size * sys_.alphabet.size * sys_.K.size}),
        started)


# ===========================================================================
# Parenthesis matching and the cylinder compression
# ===========================================================================


def parenthesis_match(z: Configuration, target_symbol: int, max_radius: int,
                      inverse: bool = False) -> int:
    """Signed offset of the balanced match between the origin symbol and the
    target symbol.

    Forward mode (origin holds symbol 0): scan right, nesting 0s as openers
    and target symbols as closers; returns m > 0 with z_m = target.  Inverse
    mode (origin holds the target): scan left for the matched 0.  The
    matching is an involution on any orbit segment where it resolves.
    """
    open_symbol = 0
    if not inverse:
        if z.value(0) != open_symbol:
            raise ValueError("forward matching needs the origin on symbol 0")
        depth = 0
        for p in range(1, max_radius + 1):
            v = z.value(p)
            if v == target_symbol and target_symbol != open_symbol:
                if depth == 0:
                    return p
                depth -= 1
            elif v == open_symbol:
                depth += 1
        raise UndeterminedError(f"no match within radius {max_radius}")
    if z.value(0) != target_symbol:
        raise ValueError("inverse matching needs the origin on the target symbol")
    depth = 0
    for p in range(1, max_radius + 1):
        v = z.value(-p)
        if v == open_symbol:
            if depth == 0:
                return -p
            depth -= 1
        elif v == target_symbol and target_symbol != open_symbol:
            depth += 1
    raise UndeterminedError(f"no match within radius {max_radius}")


class Matcher:
    """Orbit matchings between single-symbol cylinders of alphabet^Z.

    The shipped strategy is balanced-parenthesis matching; a user-supplied
    table strategy maps (symbol, point) to offsets directly.
    """

    def __init__(self, scan_radius: int, strategy: str = "parenthesis",
                 table: Callable | None = None):
        self.scan_radius = scan_radius
        self.strategy = strategy
        self.table = table
        self._cache: dict = {}

    def forward_offset(self, z: Configuration, symbol: int) -> int:
        """alpha_symbol: offset m with z_m = symbol, for z in the 0-cylinder."""
        if symbol == 0:
            return 0
        key = ("fwd", symbol, z.point_key)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.table(z, symbol, False) if self.strategy == "table" else \
                parenthesis_match(z, symbol, self.scan_radius)
            self._cache[key] = hit
        return hit

    def backward_offset(self, z: Configuration, symbol: int) -> int:
        """alpha_symbol^-1: offset of the matched 0 for z in the symbol-cylinder."""
        if symbol == 0:
            return 0
        key = ("bwd", symbol, z.point_key)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.table(z, symbol, True) if self.strategy == "table" else \
                parenthesis_match(z, symbol, self.scan_radius, inverse=True)
            self._cache[key] = hit
        return hit


class RestrictionView(Configuration):
    """Z-indexed view of a coset-indexed configuration along the a-axis:
    value(n) = x at the coset of a^n."""

    def __init__(self, x: Configuration, space: Space, a_cosets: Callable):
        self.space = space
        self.x = x
        self.a_cosets = a_cosets

    def value(self, coord) -> int:
        n = self.space.index.canonicalize(coord)
        return self.x.value(self.a_cosets(n))

    def window(self) -> dict:
        return {}

    @property
    def point_key(self):
        return ("a-axis", self.x.point_key)


class CylinderAction(Action):
    """The transported free-product action on the symbol-0 cylinder of the
    twisted coset shift, with its forward and backward cocycles.

    The acting group has generators a, b0..b_{kappa-1}; a acts through the
    induced (first-return) transformation of the a-axis restriction, each
    b_i through conjugating the twisted b-shift by the orbit matchings
    between the symbol cylinders.
    """

    def __init__(self, kappa: int, scan_radius: int = 64,
                 matcher: Matcher | None = None,
                 oracle: FirstReturnOracle | None = None):
        if kappa < 2:
            raise ValueError("kappa must be >= 2")
        self.kappa = kappa
        self.scan_radius = scan_radius
        self.f2 = free_group("a", "b")
        self.twisted = TwistedCosetShift(self.f2, "b", kappa, {"a": 0, "b": 1})
        self.space = self.twisted.space
        self.spec_up = free_group("a", *[f"b{i}" for i in range(kappa)])
        self.group_spec = self.spec_up
        self.a0 = self.f2.generator("a")
        self.b0 = self.f2.generator("b")
        self.base = coset(self.f2, "b", self.f2.identity())
        self.oracle = oracle or FirstReturnOracle(cyclic(kappa), 0, scan_radius)
        self.matcher = matcher or Matcher(scan_radius)
        self.zshift = IntShift(cyclic(kappa))
        self._a_cosets: dict = {}
        self._apply_cache: dict = {}
        self.b_parts = [f"b{i}" for i in range(kappa)]

    # -- plumbing ---------------------------------------------------------

    def a_coset(self, n: int) -> Coset:
        c = self._a_cosets.get(n)
        if c is None:
            c = coset(self.f2, "b", self.a0 ** n)
            self._a_cosets[n] = c
        return c

    def rho(self, x: Configuration) -> Configuration:
        return RestrictionView(x, self.zshift.space, self.a_coset)

    def symbol_index(self, x: Configuration) -> int:
        return x.value(self.base)

    def sample_in_cylinder(self, seed: int) -> Configuration:
        return SeededConfiguration(self.space, seed, {self.base: 0})

    # -- the matched isomorphisms between symbol cylinders -----------------

    def phi_word(self, i: int, x: Configuration) -> Word:
        """Word moving x from the 0-cylinder onto the i-cylinder."""
        if i % self.kappa == 0:
            return self.f2.identity()
        return self.a0 ** self.matcher.forward_offset(self.rho(x), i % self.kappa)

    def psi_word(self, i: int, x: Configuration) -> Word:
        """Word moving x from the i-cylinder back onto the 0-cylinder."""
        if i % self.kappa == 0:
            return self.f2.identity()
        return self.a0 ** self.matcher.backward_offset(self.rho(x), i % self.kappa)

    def theta(self, i: int, x: Configuration) -> Configuration:
        return self.twisted.apply(self.phi_word(i, x), x)

    def theta_inv(self, i: int, x: Configuration) -> Configuration:
        return self.twisted.apply(self.psi_word(i, x), x)

    def q(self, x: Configuration) -> Configuration:
        """Projection of any point onto the 0-cylinder inside its orbit."""
        return self.theta_inv(self.symbol_index(x), x)

    def q0(self, z: Configuration) -> Configuration:
        i = z.value(0)
        if i == 0:
            return z
        return self.zshift.apply(self.matcher.backward_offset(z, i), z)

    def eta_prime(self, n: int, z: Configuration) -> int:
        """Inverse-direction return cocycle: q0(n.z) = eta'(n, z) * q0(z)."""
        nz = self.zshift.apply(n, z)
        p_z = 0 if z.value(0) == 0 else self.matcher.backward_offset(z, z.value(0))
        p_nz = 0 if nz.value(0) == 0 else self.matcher.backward_offset(nz, nz.value(0))
        return self.oracle.steps_to(self.q0(z), n + p_nz - p_z)

    # -- the transported action ---------------------------------------------

    def _letter_apply(self, letter: Word, x: Configuration) -> Configuration:
        kind, part, v = letter.syllables[0]
        name = self.spec_up.part_name(part)
        if name == "a":
            n = self.oracle.eta(v, self.rho(x))
            return self.twisted.apply(self.a0 ** n, x)
        i = self.b_parts.index(name)
        if v == 1:
            return self.theta_inv(i + 1, self.twisted.apply(self.b0, self.theta(i, x)))
        return self.theta_inv(i, self.twisted.apply(self.b0 ** -1,
                                                    self.theta(i + 1, x)))

    def apply(self, g: Word, x: Configuration) -> Configuration:
        if g.is_identity:
            return x
        key = (g.syllables, x.point_key)
        hit = self._apply_cache.get(key)
        if hit is not None:
            return hit
        letter, rest = g.split_first_letter()
        target = x if rest.is_identity else self.apply(rest, x)
        out = self._letter_apply(letter, target)
        self._apply_cache[key] = out
        return out

    # -- the two cocycles ----------------------------------------------------

    def omega(self) -> Cocycle:
        """Forward cocycle into the rank-2 group: g * x = omega(g, x) . x."""
        target = CocycleTarget(spec=self.f2)
        entries = {("g", self.spec_up.part_index("a")):
                   (lambda x: self.a0 ** self.oracle.eta(1, self.rho(x)))}
        for i in range(self.kappa):
            def entry(x, i=i):
                phi = self.phi_word(i, x)
                moved = self.twisted.apply(self.b0 * phi, x)
                return self.psi_word(i + 1, moved) * self.b0 * phi

            entries[("g", self.spec_up.part_index(f"b{i}"))] = entry
        return Cocycle(self, target, entries, "cylinder-forward")

    def omega_prime(self) -> Cocycle:
        """Backward cocycle on the whole twisted space: g . x = omega'(g,x) * x."""
        target = CocycleTarget(spec=self.spec_up)
        entries = {
            ("g", self.f2.part_index("a")):
                (lambda x: self.spec_up.generator("a", self.eta_prime(1, self.rho(x)))),
            ("g", self.f2.part_index("b")):
                (lambda x: self.spec_up.generator(f"b{self.symbol_index(x)}")),
        }
        return Cocycle(self.twisted, target, entries, "cylinder-backward")

    def b_length_up(self, w: Word) -> int:
        return w.length(self.b_parts)

    def b_length_down(self, w: Word) -> int:
        return w.length("b")

    def extension_word(self, i: int, eps: int, g: Word, x: Configuration,
                       omega_cache: dict, om: Cocycle) -> Word:
        """The first-letter witness b^eps phi(g * x) omega(g, x) whose coset
        translates carry the fresh coordinates of grade |g| + 1."""
        gx = self.apply(g, x)
        w = om.evaluate(g, x, omega_cache)
        if eps == 1:
            return self.b0 * self.phi_word(i, gx) * w
        return self.b0 ** -1 * self.phi_word(i + 1, gx) * w


@dataclass
class StableOE:
    """Record of a stable orbit equivalence between an action restricted to
    a positive-measure subset and another group's action on it."""

    system: object
    domain: dict
    compression: Fraction
    forward: Cocycle
    backward: Cocycle
    q: Callable
    partition_count: int
    partition_index: Callable
    partition_word: Callable       # 1-based: partition_word(1, x) = identity


def degenerate_stable_oe(action: Action) -> StableOE:
    """The whole-space degenerate record (compression 1, identity cocycles,
    one partition cell): turns any free action into extension input."""

    class _Whole:
        def __init__(self, inner: Action):
            self.inner = inner
            self.space = inner.space

        def apply(self, g, x):
            return self.inner.apply(g, x)

        def sample_in_cylinder(self, seed: int):
            return sample(self.space, seed)

    ident = identity_cocycle(action)
    e = action.group_spec.identity()
    return StableOE(system=_Whole(action), domain={}, compression=Fraction(1),
                    forward=ident, backward=ident, q=lambda x: x,
                    partition_count=1, partition_index=lambda x: 1,
                    partition_word=lambda i, x: e)


def build_cylinder_oe(kappa: int, scan_radius: int = 64) -> StableOE:
    """The compression of the twisted coset shift onto its base cylinder,
    carrying the higher-rank action and both cocycles."""
    system = CylinderAction(kappa, scan_radius)

    def partition_word(i: int, x: Configuration) -> Word:
        return system.phi_word(i - 1, x)

    return StableOE(
        system=system,
        domain={"base": system.base, "symbol": 0},
        compression=Fraction(1, kappa),
        forward=system.omega(),
        backward=system.omega_prime(),
        q=system.q,
        partition_count=kappa,
        partition_index=lambda x: system.symbol_index(x) + 1,
        partition_word=partition_word)


def cylinder_measure_report(system: CylinderAction) -> VerificationReport:
    """The inducing cylinder has exact measure 1/kappa."""
    started = time.perf_counter()
    dist = exact_distribution(system.space, [lambda x: x.value(system.base)],
                              [system.base])
    p = dist.probability((0,))
    expected = Fraction(1, system.kappa)
    return timed(VerificationReport(
        "cylinder-measure", "exact", PASS if p == expected else FAIL,
        statistics={"measure": p, "expected": expected}), started)


def match_determinacy_report(kappa: int, scan_radius: int, samples: int,
                             seed: int, threshold: Fraction = Fraction(5, 100),
                             context_radius: int = 256) -> VerificationReport:
    """Frequency of unresolved forward matches at the configured radius over
    sampled cylinder points, gated at the threshold.  The same frequency at
    a larger context radius is reported alongside."""
    started = time.perf_counter()
    space = IntShift(cyclic(kappa)).space
    unresolved = unresolved_context = 0
    for i in range(samples):
        z = SeededConfiguration(space, derive_seed(seed, f"det/{i}"), {0: 0})
        for symbol in range(1, kappa):
            try:
                parenthesis_match(z, symbol, scan_radius)
            except UndeterminedError:
                unresolved += 1
            try:
                parenthesis_match(z, symbol, context_radius)
            except UndeterminedError:
                unresolved_context += 1
    total = samples * (kappa - 1)
    freq = Fraction(unresolved, total)
    return timed(VerificationReport(
        "match-determinacy", "monte-carlo",
        PASS if freq < threshold else FAIL,
        parameters={"scan_radius": scan_radius, "samples": samples,
                    "threshold": threshold},
        statistics={"unresolved_frequency": freq,
                    "unresolved": unresolved,
                    "context_radius": context_radius,
                    "context_frequency": Fraction(unresolved_context, total)},
        seed=seed), started)


def match_measure_report(kappa: int, scan_radius: int, samples: int, seed: int,
                         quantile: float = 0.999) -> VerificationReport:
    """Monte-Carlo gate for measure preservation of the matching.

    At a finite scan radius the matching is a piecewise-shift bijection
    between the forward-resolved part of the 0-cylinder and the
    backward-resolved part of the target cylinder, so the honest reference
    for the image cylinder frequencies is a uniform sample of the target
    cylinder conditioned on backward resolution; the two samples are
    compared by a two-sample chi-square gate.
    """
    started = time.perf_counter()
    shift = IntShift(cyclic(kappa))
    space = shift.space
    coords = [-2, -1, 1, 2]
    reports = []
    for symbol in range(1, kappa):
        images = []
        skipped = 0
        for i in range(samples):
            z = SeededConfiguration(space, derive_seed(seed, f"mm/{symbol}/{i}"), {0: 0})
            try:
                m = parenthesis_match(z, symbol, scan_radius)
            except UndeterminedError:
                skipped += 1
                continue
            image = shift.apply(m, z)
            code = 0
            for c in coords:
                code = code * kappa + image.value(c)
            images.append(code)
        reference = []
        skipped_ref = 0
        for i in range(samples):
            w = SeededConfiguration(space, derive_seed(seed, f"mr/{symbol}/{i}"),
                                    {0: symbol})
            try:
                parenthesis_match(w, symbol, scan_radius, inverse=True)
            except UndeterminedError:
                skipped_ref += 1
                continue
            code = 0
            for c in coords:
                code = code * kappa + w.value(c)
            reference.append(code)
        rep = homogeneity_mc(images, reference, seed, quantile,
                             name=f"match-measure-{symbol}")
        rep.statistics["unresolved_forward"] = skipped
        rep.statistics["unresolved_backward"] = skipped_ref
        reports.append(rep)
    return timed(combine_reports("match-measure-preservation", reports,
                                 parameters={"coords": coords, "samples": samples}),
                 started)


def dependency_radius_report(system: CylinderAction, max_grade: int, samples: int,
                             seed: int, exponent_bound: int = 1) -> VerificationReport:
    """Reads of the forward cocycle stay inside the declared window: the
    cosets actually read while evaluating omega(g, .) have b-grade at most
    the b-grade of g, and a-offsets bounded by 2 * letters(g) * scan radius
    (each b-letter chains two matcher scans, each a-letter one return scan)."""
    started = time.perf_counter()
    om = system.omega()
    words = [w for w in ball(system.spec_up, max_grade, parts=system.b_parts,
                             exponent_bound=exponent_bound)
             if not w.is_identity]
    worst = 0
    checked = undetermined = 0
    for i in range(samples):
        base = system.sample_in_cylinder(derive_seed(seed, f"dep/{i}"))
        for g in words:
            log: set = set()
            recorder = RecordingConfiguration(base, log)
            try:
                om.evaluate(g, recorder)
            except UndeterminedError:
                undetermined += 1
                continue
            grade = system.b_length_up(g)
            budget = 2 * g.length() * system.scan_radius
            for c in log:
                b_read = c.rep.length("b")
                a_read = c.rep.length("a")
                worst = max(worst, a_read)
                if b_read > grade or a_read > budget:
                    return timed(VerificationReport(
                        "cocycle-dependency-radius", "exact", FAIL, seed=seed,
                        counterexample={"g": g, "coset": c.rep,
                                        "b_grade": b_read, "a_offset": a_read,
                                        "allowed_grade": grade,
                                        "allowed_offset": budget}), started)
            checked += 1
    verdict = PASS if undetermined == 0 else UNDETERMINED
    return timed(VerificationReport(
        "cocycle-dependency-radius", "exact", verdict, seed=seed,
        parameters={"max_grade": max_grade, "samples": samples,
                    "scan_radius": system.scan_radius},
        statistics={"checked": checked, "undetermined": undetermined,
                    "max_a_offset_seen": worst}), started)


def coset_freshness_report(system: CylinderAction, max_grade: int, samples: int,
                           seed: int, offsets: Sequence[int] = (-2, -1, 1, 2),
                           exponent_bound: int = 1) -> VerificationReport:
    """The fresh-coordinate cosets a^m (b^eps phi omega) of grade n+1 are
    pairwise distinct across (i, eps, g, m) and sit strictly above grade n."""
    started = time.perf_counter()
    om = system.omega()
    checked = undetermined = 0
    for s in range(samples):
        x = system.sample_in_cylinder(derive_seed(seed, f"fresh/{s}"))
        cache: dict = {}
        for n in range(0, max_grade + 1):
            seen: dict = {}
            for i in range(system.kappa):
                for eps in (1, -1):
                    letter = system.spec_up.generator(f"b{i}", eps)
                    grade_n = extension_sphere(system.spec_up, letter, n,
                                               parts=system.b_parts,
                                               exponent_bound=exponent_bound)
                    for g in grade_n:
                        try:
                            wit = system.extension_word(i, eps, g, x, cache, om)
                        except UndeterminedError:
                            undetermined += 1
                            continue
                        if system.b_length_down(wit) != n + 1:
                            return timed(VerificationReport(
                                "fresh-coset-grades", "exact", FAIL, seed=seed,
                                counterexample={"witness": wit, "grade": n}), started)
                        first = wit.syllables[0]
                        if first[1] != system.f2.part_index("b") or \
                                (1 if first[2] > 0 else -1) != eps:
                            return timed(VerificationReport(
                                "fresh-coset-grades", "exact", FAIL, seed=seed,
                                notes=("leading letter of the witness is wrong",),
                                counterexample={"witness": wit, "eps": eps}), started)
                        for m in offsets:
                            c = coset(system.f2, "b", system.a0 ** m * wit)
                            if c.rep.length("b") != n + 1:
                                return timed(VerificationReport(
                                    "fresh-coset-grades", "exact", FAIL, seed=seed,
                                    counterexample={"coset": c.rep, "grade": n}),
                                    started)
                            key = c
                            if key in seen:
                                return timed(VerificationReport(
                                    "fresh-coset-grades", "exact", FAIL, seed=seed,
                                    notes=("coset collision",),
                                    counterexample={"coset": c.rep,
                                                    "first": seen[key],
                                                    "second": (i, eps, g.tokens(), m)}),
                                    started)
                            seen[key] = (i, eps, g.tokens(), m)
                            checked += 1
    verdict = PASS if undetermined == 0 else UNDETERMINED
    return timed(VerificationReport(
        "fresh-coset-grades", "exact", verdict, seed=seed,
        parameters={"max_grade": max_grade, "samples": samples,
                    "offsets": list(offsets)},
        statistics={"checked": checked, "undetermined": undetermined}), started)


# ===========================================================================
# Diagonal Bernoulli extension of a stable orbit equivalence
# ===========================================================================


def extension_selectors(soe: StableOE, pairs: Sequence[tuple]) -> Callable:
    """Selector family x -> phi_i(lam * x) omega(lam, x) for the chosen
    (index, lambda) pairs; selected values are words of the downstairs
    group, the fresh-coordinate addresses of the extension."""
    system = soe.system

    def selector_of_point(x):
        cache: dict = {}
        out = []
        for i, lam in pairs:
            lx = system.apply(lam, x)
            w = soe.forward.target.word_part(soe.forward.evaluate(lam, x, cache))
            out.append((None, soe.partition_word(i, lx) * w))
        return out

    return selector_of_point


def extension_distinctness_report(soe: StableOE, lam_words: Sequence[Word],
                                  samples: int, seed: int) -> VerificationReport:
    """The enumeration family phi_i(lam * x) omega(lam, x) has no repetitions
    across (i, lambda) at sampled points (finite truncation of the
    exhaustive-enumeration property)."""
    started = time.perf_counter()
    system = soe.system
    checked = undetermined = 0
    for s in range(samples):
        x = system.sample_in_cylinder(derive_seed(seed, f"ext/{s}")) \
            if hasattr(system, "sample_in_cylinder") else sample(system.space, s)
        cache: dict = {}
        seen: dict = {}
        try:
            for i in range(1, soe.partition_count + 1):
                for lam in lam_words:
                    lx = system.apply(lam, x)
                    w = soe.forward.target.word_part(soe.forward.evaluate(lam, x, cache))
                    address = soe.partition_word(i, lx) * w
                    if address in seen:
                        return timed(VerificationReport(
                            "extension-address-distinctness", "exact", FAIL,
                            seed=seed,
                            counterexample={"address": address,
                                            "first": seen[address],
                                            "second": (i, lam.tokens())}), started)
                    seen[address] = (i, lam.tokens())
                    checked += 1
        except UndeterminedError:
            undetermined += 1
    verdict = PASS if undetermined == 0 else UNDETERMINED
    return timed(VerificationReport(
        "extension-address-distinctness", "exact", verdict, seed=seed,
        parameters={"lambdas": len(lam_words), "samples": samples},
        statistics={"checked": checked, "undetermined_points": undetermined}), started)


def extension_action_report(soe: StableOE, y_alphabet: FiniteGroup,
                            words: Sequence[Word], samples: int, seed: int,
                            y_window: Sequence[Word] | None = None) -> VerificationReport:
    """The cocycle-twisted product extension lam * (x, y) = (lam * x,
    omega(lam, x) . y) is an action: the composition law holds exactly on
    sampled points (equivalently, the extension cocycle satisfies the
    cocycle identity)."""
    started = time.perf_counter()
    system = soe.system
    down_spec = soe.forward.target.spec
    bern = BernoulliShift(down_spec, y_alphabet)
    window = list(y_window or ball(down_spec, 2))

    def ext_apply(lam, x, y, cache):
        w = soe.forward.target.word_part(soe.forward.evaluate(lam, x, cache))
        return system.apply(lam, x), bern.apply(w, y)

    checked = undetermined = 0
    for s in range(samples):
        x = system.sample_in_cylinder(derive_seed(seed, f"ea/{s}"))
        y = sample(bern.space, derive_seed(seed, f"ea/y/{s}"))
        cache: dict = {}
        for l1 in words:
            for l2 in words:
                try:
                    x1, y1 = ext_apply(l1, x, y, cache)
                    x2, y2 = ext_apply(l2, x1, y1, cache)
                    x12, y12 = ext_apply(l2 * l1, x, y, cache)
                except UndeterminedError:
                    undetermined += 1
                    continue
                x_window = [system.a_coset(n) for n in range(-2, 3)] \
                    if hasattr(system, "a_coset") else list(x2.window()) or window
                if not agree_on(x2, x12, x_window) or not agree_on(y2, y12, window):
                    return timed(VerificationReport(
                        "extension-action", "exact", FAIL, seed=seed,
                        counterexample={"first": l1, "second": l2}), started)
                checked += 1
    verdict = PASS if undetermined == 0 else UNDETERMINED
    return timed(VerificationReport(
        "extension-action", "exact", verdict, seed=seed,
        parameters={"words": len(words), "samples": samples},
        statistics={"checked": checked, "undetermined": undetermined}), started)


def extension_independence_report(soe: StableOE, pairs: Sequence[tuple],
                                  y_alphabet: FiniteGroup, samples: int,
                                  seed: int) -> VerificationReport:
    """Fresh-coordinate lookups of the extension are exactly jointly uniform
    conditioned on each sampled base point (engine run per sample with the
    y-window enumerated exactly)."""
    system = soe.system
    names = [f"y@{i}|{lam.tokens()}" for i, lam in pairs]
    points = [system.sample_in_cylinder(derive_seed(seed, f"ei/{s}"))
              for s in range(samples)]
    selector = extension_selectors(soe, pairs)
    return selector_independence_on_samples(
        points, selector, None, y_alphabet.size,
        lambda h, v: v, names, name="extension-independence", seed=seed)


# ===========================================================================
# Sections of free actions of finite groups on finite sets
# ===========================================================================


def orbit_section(K: FiniteGroup, action: FiniteGroupAlphabetAction
                  ) -> tuple[list[int], dict]:
    """Orbit representatives and the equivariant product parametrization
    theta(k, y) = k.y of a free action; raises on a fixed point."""
    witness = action.free_point_witness()
    if witness is not None:
        raise ValueError(f"action is not free: {witness[0]} fixes {witness[1]}")
    size = action.alphabet.size
    reps: list[int] = []
    seen: set = set()
    for v in range(size):
        if v in seen:
            continue
        reps.append(v)
        for k in range(K.size):
            seen.add(action.act(k, v))
    theta = {(k, y): action.act(k, y) for k in range(K.size) for y in reps}
    return reps, theta


def section_report(K: FiniteGroup, action: FiniteGroupAlphabetAction
                   ) -> VerificationReport:
    """Bijectivity, equivariance and exact measure transport of the section."""
    started = time.perf_counter()
    try:
        reps, theta = orbit_section(K, action)
    except ValueError as err:
        return timed(VerificationReport(
            "orbit-section", "exact", FAIL,
            counterexample={"reason": str(err)}), started)
    size = action.alphabet.size
    checks = []
    image = sorted(theta.values())
    bijective = image == list(range(size)) and len(theta) == size
    checks.append(VerificationReport(
        "section-bijective", "exact", PASS if bijective else FAIL,
        statistics={"orbits": len(reps), "points": size}))
    equivariant = all(
        theta[(K.mul(g, h), y)] == action.act(g, theta[(h, y)])
        for g in range(K.size) for h in range(K.size) for y in reps)
    checks.append(VerificationReport(
        "section-equivariance", "exact", PASS if equivariant else FAIL,
        statistics={"triples": K.size * K.size * len(reps)}))
    push = {}
    cell = Fraction(1, K.size) * Fraction(1, len(reps))
    for pair, v in theta.items():
        push[v] = push.get(v, Fraction(0)) + cell
    uniform = all(p == Fraction(1, size) for p in push.values()) and len(push) == size
    checks.append(VerificationReport(
        "section-pushforward", "exact", PASS if uniform else FAIL,
        statistics={"cell_mass": cell}))
    return timed(combine_reports("orbit-section", checks,
                                 parameters={"group": K.label, "points": size}),
                 started)


def free_action_on_cosets(K: FiniteGroup, copies: int) -> FiniteGroupAlphabetAction:
    """Left translation on `copies` disjoint copies of K: the standard free
    action of K on a set of size copies * |K|."""
    size = K.size * copies
    names = [f"{K.names[v]}#{j}" for j in range(copies) for v in range(K.size)]
    alphabet = Alphabet(names, label=f"{K.label}x{copies}")
    perms = []
    for k in range(K.size):
        perm = [0] * size
        for j in range(copies):
            for v in range(K.size):
                perm[j * K.size + v] = j * K.size + K.mul(k, v)
        perms.append(tuple(perm))
    return FiniteGroupAlphabetAction(K, alphabet, perms)
