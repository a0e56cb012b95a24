"""The action engine: shifts, co-induced and twisted actions, diagonal
products, quotients by a commuting translation action, and first-return
induced transformations.

Applying a group element produces a view of the argument configuration;
views of the same kind flatten (a chain of shifts is one shift), so window
reads stay O(1) in the number of applied elements and a point's identity
can be summarized by a structural key for caching.
"""

from __future__ import annotations

import time
from typing import Callable, Sequence

from .groups import Alphabet, FiniteGroup, cyclic
from .spaces import (Configuration, CosetIndex, DEFAULT_BUDGET, GroupIndex,
                     IntIndex, ProductConfiguration, ProductSpace, Space,
                     derive_seed, sample_stream)
from .spaces import BudgetExceededError
from .verify import (FAIL, PASS, UndeterminedError, VerificationReport,
                     WindowFunction, combine_reports, generation_check,
                     independence_exact, independence_mc, timed)
from .words import GroupSpec, Word, omega_transfer, transversal_words


# -- permutation helpers -------------------------------------------------------


def identity_perm(n: int) -> tuple:
    return tuple(range(n))


def compose_perms(p: Sequence[int], q: Sequence[int]) -> tuple:
    """(p compose q)(i) = p[q[i]]."""
    return tuple(p[q[i]] for i in range(len(q)))


def invert_perm(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_power(p: Sequence[int], k: int) -> tuple:
    if k < 0:
        return perm_power(invert_perm(p), -k)
    out = identity_perm(len(p))
    base = tuple(p)
    while k:
        if k & 1:
            out = compose_perms(out, base)
        base = compose_perms(base, base)
        k >>= 1
    return out


# -- alphabet actions ----------------------------------------------------------


class SubgroupAlphabetAction:
    """Action of one free-product part on a finite alphabet.

    For a rank-1 free part the action is generated by one permutation; for
    a finite part a permutation per element is supplied and checked to be a
    homomorphism against the multiplication table.
    """

    def __init__(self, spec: GroupSpec, subgroup, alphabet: Alphabet,
                 gen_perm: Sequence[int] | None = None,
                 elem_perms: Sequence[Sequence[int]] | None = None):
        self.spec = spec
        self.part = spec.part_index(subgroup) if isinstance(subgroup, str) else subgroup
        self.alphabet = alphabet
        part = spec.parts[self.part]
        if gen_perm is not None:
            self.gen_perm = tuple(gen_perm)
            self.elem_perms = None
        else:
            group: FiniteGroup = part.group
            perms = tuple(tuple(p) for p in elem_perms)
            for a in range(group.size):
                for b in range(group.size):
                    if compose_perms(perms[a], perms[b]) != perms[group.mul(a, b)]:
                        raise ValueError(
                            "element permutations are not a homomorphism at "
                            f"({group.names[a]}, {group.names[b]})")
            self.gen_perm = None
            self.elem_perms = perms
        self._perm_cache: dict = {}

    def perm_of(self, w: Word) -> tuple:
        cached = self._perm_cache.get(w)
        if cached is not None:
            return cached
        out = identity_perm(self.alphabet.size)
        for kind, p, v in w.syllables:
            if p != self.part:
                raise ValueError(f"word {w!r} leaves the acting subgroup")
            step = perm_power(self.gen_perm, v) if kind == "g" else self.elem_perms[v]
            # right-to-left composition matches left action on values
            out = compose_perms(step, out)
        self._perm_cache[w] = out
        return out

    def act(self, w: Word, v: int) -> int:
        return self.perm_of(w)[v]

    def commutes_with(self, perm: Sequence[int]) -> bool:
        gens = [self.gen_perm] if self.gen_perm is not None else \
            [p for p in self.elem_perms]
        return all(compose_perms(perm, g) == compose_perms(g, perm) for g in gens)


def rotation_action(spec: GroupSpec, subgroup, kappa: int) -> SubgroupAlphabetAction:
    """The generator of a rank-1 part acting on Z/kappa by +1."""
    perm = tuple((i + 1) % kappa for i in range(kappa))
    return SubgroupAlphabetAction(spec, subgroup, cyclic(kappa), gen_perm=perm)


class FiniteGroupAlphabetAction:
    """A finite group acting on a finite alphabet by permutations."""

    def __init__(self, group: FiniteGroup, alphabet: Alphabet,
                 perms: Sequence[Sequence[int]]):
        self.group = group
        self.alphabet = alphabet
        self.perms = tuple(tuple(p) for p in perms)
        for a in range(group.size):
            for b in range(group.size):
                if compose_perms(self.perms[a], self.perms[b]) != self.perms[group.mul(a, b)]:
                    raise ValueError(
                        f"permutations are not a homomorphism at ({group.names[a]}, "
                        f"{group.names[b]})")

    def act(self, k: int, v: int) -> int:
        return self.perms[k][v]

    def free_point_witness(self):
        """None if the action is free; otherwise (element, fixed point)."""
        for k in range(self.group.size):
            if k == self.group.identity:
                continue
            for v in range(self.alphabet.size):
                if self.perms[k][v] == v:
                    return (self.group.names[k], self.alphabet.names[v])
        return None


def left_translation_action(group: FiniteGroup) -> FiniteGroupAlphabetAction:
    perms = [[group.mul(k, v) for v in range(group.size)] for k in range(group.size)]
    return FiniteGroupAlphabetAction(group, group, perms)


# -- flattened views -----------------------------------------------------------


class _RelocView(Configuration):
    """value(c) = base(c . u) for the index translation by u."""

    def __init__(self, space, base: Configuration, u):
        self.space = space
        self.base = base
        self.u = u

    def value(self, coord) -> int:
        c = self.space.index.canonicalize(coord)
        return self.base.value(self.space.index.translate(c, self.u))

    def window(self) -> dict:
        inv = self.u.inverse() if isinstance(self.u, Word) else -self.u
        out = {}
        for k in self.base.window():
            c = self.space.index.translate(k, inv)
            out[c] = self.value(c)
        return out

    @property
    def point_key(self):
        return ("reloc", self.u if isinstance(self.u, int) else self.u.syllables,
                self.base.point_key)


class _TwistedView(Configuration):
    """value(c) = (t + base(c . u)) mod kappa."""

    def __init__(self, space, base: Configuration, u: Word, t: int):
        self.space = space
        self.base = base
        self.u = u
        self.t = t

    def value(self, coord) -> int:
        c = self.space.index.canonicalize(coord)
        return (self.t + self.base.value(self.space.index.translate(c, self.u))) \
            % self.space.alphabet.size

    def window(self) -> dict:
        inv = self.u.inverse()
        out = {}
        for k in self.base.window():
            c = self.space.index.translate(k, inv)
            out[c] = self.value(c)
        return out

    @property
    def point_key(self):
        return ("twisted", self.u.syllables, self.t, self.base.point_key)


class _CoinducedView(Configuration):
    """value(c) = inner(transfer(c, u)) applied to base(c . u)."""

    def __init__(self, space, base: Configuration, u: Word,
                 inner: SubgroupAlphabetAction, r_mode: str):
        self.space = space
        self.base = base
        self.u = u
        self.inner = inner
        self.r_mode = r_mode

    def value(self, coord) -> int:
        c = self.space.index.canonicalize(coord)
        lam = omega_transfer(c, self.u, self.r_mode)
        return self.inner.act(lam, self.base.value(c.translate(self.u)))

    def window(self) -> dict:
        inv = self.u.inverse()
        out = {}
        for k in self.base.window():
            c = self.space.index.translate(k, inv)
            out[c] = self.value(c)
        return out

    @property
    def point_key(self):
        return ("coind", self.u.syllables, self.r_mode, self.base.point_key)


class _ValueTwistView(Configuration):
    """value(c) = perm[base(c)] (a coordinatewise alphabet permutation)."""

    def __init__(self, base: Configuration, perm: tuple):
        self.space = base.space
        self.base = base
        self.perm = perm

    def value(self, coord) -> int:
        return self.perm[self.base.value(coord)]

    def window(self) -> dict:
        return {k: self.perm[v] for k, v in self.base.window().items()}

    @property
    def point_key(self):
        return ("vtwist", self.perm, self.base.point_key)


def value_twist(x: Configuration, perm: Sequence[int]) -> Configuration:
    perm = tuple(perm)
    if perm == identity_perm(len(perm)):
        return x
    if isinstance(x, _ValueTwistView):
        return value_twist(x.base, compose_perms(perm, x.perm))
    if isinstance(x, ProductConfiguration):
        raise TypeError("value twist on a product needs a per-slot action")
    return _ValueTwistView(x, perm)


# -- actions -------------------------------------------------------------------


class Action:
    """p.m.p. action interface: apply(g, x) with g a Word of group_spec."""

    group_spec: GroupSpec | None
    space: object

    def apply(self, g, x: Configuration) -> Configuration:
        raise NotImplementedError

    def orbit_map(self, g) -> Callable[[Configuration], Configuration]:
        return lambda x: self.apply(g, x)


class BernoulliShift(Action):
    """(g . x)_h = x_{hg} on alphabet^index for a group or coset index set."""

    def __init__(self, spec: GroupSpec, alphabet: Alphabet, subgroup=None):
        self.group_spec = spec
        index = GroupIndex(spec) if subgroup is None else CosetIndex(spec, subgroup)
        self.space = Space(index, alphabet)

    def apply(self, g: Word, x: Configuration) -> Configuration:
        if g.is_identity:
            return x
        if isinstance(x, _RelocView) and x.space is self.space:
            u = g * x.u
            return x.base if (isinstance(u, Word) and u.is_identity) else \
                _RelocView(self.space, x.base, u)
        if isinstance(x, _ValueTwistView):
            return value_twist(self.apply(g, x.base), x.perm)
        return _RelocView(self.space, x, g)


class IntShift(Action):
    """(n . z)_h = z_{h+n} on alphabet^Z."""

    def __init__(self, alphabet: Alphabet):
        self.group_spec = None
        self.space = Space(IntIndex(), alphabet)

    def apply(self, n: int, z: Configuration) -> Configuration:
        if n == 0:
            return z
        if isinstance(z, _RelocView) and isinstance(z.u, int):
            total = n + z.u
            return z.base if total == 0 else _RelocView(self.space, z.base, total)
        return _RelocView(self.space, z, n)


class TwistedCosetShift(Action):
    """(g . x)_c = twist(g) + x_{c g} on (Z/kappa)^(subgroup\\G).

    twist is the homomorphism to Z/kappa defined by integer weights on the
    free generators (syllables of finite parts contribute 0).
    """

    def __init__(self, spec: GroupSpec, subgroup, kappa: int,
                 weights: dict[str, int]):
        self.group_spec = spec
        self.kappa = kappa
        self.space = Space(CosetIndex(spec, subgroup), cyclic(kappa))
        self._weights = {spec.part_index(name): w % kappa for name, w in weights.items()}

    def twist(self, g: Word) -> int:
        total = 0
        for kind, p, v in g.syllables:
            if kind == "g":
                total += self._weights.get(p, 0) * v
        return total % self.kappa

    def apply(self, g: Word, x: Configuration) -> Configuration:
        if g.is_identity:
            return x
        if isinstance(x, _TwistedView) and x.space is self.space:
            u = g * x.u
            t = (self.twist(g) + x.t) % self.kappa
            if u.is_identity and t == 0:
                return x.base
            return _TwistedView(self.space, x.base, u, t)
        return _TwistedView(self.space, x, g, self.twist(g))


class CoinducedAction(Action):
    """(g . y)_c = transfer(c, g) . y_{c g} for an inner subgroup action.

    The transfer cocycle is computed from the canonical transversal or, in
    homomorphism mode, from the retraction onto the subgroup.
    """

    def __init__(self, spec: GroupSpec, subgroup, inner: SubgroupAlphabetAction,
                 r_mode: str = "transversal"):
        self.group_spec = spec
        self.part = spec.part_index(subgroup) if isinstance(subgroup, str) else subgroup
        self.inner = inner
        self.r_mode = r_mode
        self.space = Space(CosetIndex(spec, self.part), inner.alphabet)

    def apply(self, g: Word, y: Configuration) -> Configuration:
        if g.is_identity:
            return y
        if isinstance(y, _CoinducedView) and y.space is self.space \
                and y.inner is self.inner and y.r_mode == self.r_mode:
            u = g * y.u
            return y.base if u.is_identity else \
                _CoinducedView(self.space, y.base, u, self.inner, self.r_mode)
        if isinstance(y, _ValueTwistView) and self.inner.commutes_with(y.perm):
            return value_twist(self.apply(g, y.base), y.perm)
        return _CoinducedView(self.space, y, g, self.inner, self.r_mode)


class DiagonalAction(Action):
    """Same group acting coordinatewise on a product of spaces."""

    def __init__(self, group_spec: GroupSpec | None, actions: Sequence[Action]):
        self.group_spec = group_spec
        self.actions = tuple(actions)
        self.space = ProductSpace([a.space for a in self.actions])

    def apply(self, g, x: ProductConfiguration) -> ProductConfiguration:
        return ProductConfiguration(
            self.space, [a.apply(g, c) for a, c in zip(self.actions, x.components)])


class DiagonalTranslation(Action):
    """A finite group translating every coordinate value simultaneously."""

    def __init__(self, alpha: FiniteGroupAlphabetAction, space: Space):
        self.group_spec = None
        self.alpha = alpha
        self.space = space

    def apply(self, k: int, x: Configuration) -> Configuration:
        return value_twist(x, self.alpha.perms[k])


class QuotientByDiagonal(Action):
    """The base action on orbit representatives of a commuting free
    translation action: points are normalized so the value at base_coord is
    the minimal element of its orbit."""

    def __init__(self, action: Action, alpha: FiniteGroupAlphabetAction, base_coord):
        witness = alpha.free_point_witness()
        if witness is not None:
            raise ValueError(f"translation action is not free: {witness[0]} fixes {witness[1]}")
        self.group_spec = action.group_spec
        self.base_action = action
        self.alpha = alpha
        self.space = action.space
        self.base_coord = self.space.index.canonicalize(base_coord)
        # orbit representative (minimal index) and the normalizing element
        size = alpha.alphabet.size
        self._normalizer = [None] * size
        for v in range(size):
            best, best_k = v, alpha.group.identity
            for k in range(alpha.group.size):
                img = alpha.perms[k][v]
                if img < best:
                    best, best_k = img, k
            self._normalizer[v] = best_k

    def normalize(self, x: Configuration) -> Configuration:
        k = self._normalizer[x.value(self.base_coord)]
        return value_twist(x, self.alpha.perms[k])

    def apply(self, g, x: Configuration) -> Configuration:
        return self.normalize(self.base_action.apply(g, x))


# -- induced (first-return) transformations ------------------------------------


class FirstReturnOracle:
    """Induced transformation on a one-coordinate cylinder of alphabet^Z.

    `symbol` None means the whole space (the identity instance: the induced
    map is the shift itself).  All scans are bounded by scan_radius and an
    unresolved scan raises UndeterminedError: a reported outcome, not a
    silent failure.
    """

    def __init__(self, alphabet: Alphabet, symbol: int | None, scan_radius: int):
        self.alphabet = alphabet
        self.symbol = symbol
        self.scan_radius = scan_radius
        self.shift = IntShift(alphabet)
        self.space = self.shift.space

    def in_domain(self, z: Configuration) -> bool:
        return self.symbol is None or z.value(0) == self.symbol

    def first_return(self, z: Configuration, direction: int) -> int:
        if self.symbol is None:
            return direction
        for j in range(1, self.scan_radius + 1):
            if z.value(direction * j) == self.symbol:
                return direction * j
        raise UndeterminedError(
            f"no return to the cylinder within scan radius {self.scan_radius}")

    def apply_power(self, n: int, z: Configuration) -> tuple[Configuration, int]:
        """n-th power of the induced map; returns (image, return-time cocycle).

        The cocycle value is the accumulated shift: image = shift(eta, z).
        """
        if not self.in_domain(z):
            raise ValueError("point outside the inducing cylinder")
        eta = 0
        current = z
        step = 1 if n >= 0 else -1
        for _ in range(abs(n)):
            r = self.first_return(current, step)
            eta += r
            current = self.shift.apply(r, current)
        return current, eta

    def eta(self, n: int, z: Configuration) -> int:
        return self.apply_power(n, z)[1]

    def steps_to(self, z: Configuration, total_shift: int) -> int:
        """The m with eta(m, z) = total_shift; the target must be a return."""
        if total_shift == 0:
            return 0
        direction = 1 if total_shift > 0 else -1
        eta, m = 0, 0
        current = z
        while True:
            r = self.first_return(current, direction)
            eta += r
            m += direction
            current = self.shift.apply(r, current)
            if eta == total_shift:
                return m
            if abs(eta) > abs(total_shift):
                raise ValueError("target shift is not a return of the induced map")


def identity_oracle(alphabet: Alphabet, scan_radius: int = 1) -> FirstReturnOracle:
    return FirstReturnOracle(alphabet, None, scan_radius)


# -- co-induction characterization ---------------------------------------------


def subgroup_test_words(spec: GroupSpec, subgroup) -> list[Word]:
    """Small generating sample of the subgroup part for equivariance checks."""
    part = spec.part_index(subgroup) if isinstance(subgroup, str) else subgroup
    from .words import FinitePart
    p = spec.parts[part]
    if isinstance(p, FinitePart):
        return [spec.finite_element(part, i) for i in range(p.group.size)
                if i != p.group.identity]
    gen = spec.parts[part].name
    return [spec.generator(gen, k) for k in (-2, -1, 1, 2)]


def check_coinduced_characterization(
        action: Action, rho: WindowFunction, inner_act: Callable[[Word, int], int],
        subgroup, radius: int, *, samples: int = 25, seed: int = 0,
        budget: int = DEFAULT_BUDGET, transversal_kwargs: dict | None = None,
        variable_coords: Callable[[Word], tuple] | None = None,
        reconstructor: Callable | None = None, canonicalize: Callable | None = None,
        mc_samples: int = 10 ** 4, quantile: float = 0.999) -> VerificationReport:
    """Decide the three defining properties of a co-induced action.

    1. subgroup equivariance of the factor map rho (exact on samples);
    2. generation: the factor maps along the radius-bounded transversal
       determine the window (reconstruction, or injectivity enumeration);
    3. independence: the transversal family has exactly the uniform product
       law (downgraded to a seeded chi-square gate when the window exceeds
       the enumeration budget).
    """
    started = time.perf_counter()
    spec = action.group_spec
    part = spec.part_index(subgroup) if isinstance(subgroup, str) else subgroup
    tkw = dict(transversal_kwargs or {})
    transversal = transversal_words(spec, part, radius, **tkw)

    # 1. equivariance on sampled points
    equivariant = True
    witness = None
    lams = subgroup_test_words(spec, part)
    for i, y in enumerate(sample_stream(action.space, derive_seed(seed, "equiv"), samples)):
        for lam in lams:
            left = rho.fn(action.apply(lam, y))
            right = inner_act(lam, rho.fn(y))
            if left != right:
                equivariant, witness = False, {"lambda": lam, "sample": i,
                                               "lhs": left, "rhs": right}
                break
        if not equivariant:
            break
    sub1 = VerificationReport(
        "subgroup-equivariance", "exact", PASS if equivariant else FAIL,
        parameters={"samples": samples, "subgroup_elements": [w.tokens() for w in lams]},
        seed=seed, counterexample=witness)

    # the transversal variable family
    def coords_of(t: Word) -> tuple:
        if variable_coords is not None:
            return tuple(variable_coords(t))
        index = action.space.index
        return tuple(index.translate(index.canonicalize(c), t) for c in rho.coords)

    family = [WindowFunction(t.tokens(), coords_of(t), rho.support,
                             (lambda y, t=t: rho.fn(action.apply(t, y))))
              for t in transversal]
    window = []
    for v in family:
        for c in v.coords:
            if c not in window:
                window.append(c)

    # 2. generation on the radius window
    sub2 = generation_check(action.space, family, window, reconstructor=reconstructor,
                            canonicalize=canonicalize, budget=budget,
                            name="generation")

    # 3. independence of the transversal family
    try:
        sub3 = independence_exact(action.space, family, window=None, budget=budget,
                                  name="transversal-independence", require_uniform=True)
    except BudgetExceededError:
        sub3 = independence_mc(action.space, family, mc_samples,
                               derive_seed(seed, "indep"), quantile,
                               name="transversal-independence")
        sub3.notes = sub3.notes + ("budget exceeded: downgraded to Monte-Carlo",)

    report = combine_reports(
        "coinduced-characterization", [sub1, sub2, sub3],
        parameters={"radius": radius, "transversal_size": len(transversal)})
    return timed(report, started)
