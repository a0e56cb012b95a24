"""Configuration spaces: finite-alphabet functions on group-like index sets.

A configuration stores a finite window of coordinate values and optionally
extends outside the window by a keyed pseudo-random function of the
coordinate's canonical serialization.  The PRF keying makes every "a.e.
point" reproducible: two reads of the same (seed, coordinate) agree no
matter in which order coordinates are queried, and distinct seeds behave
as independent samples.

Exact cylinder distributions are computed by full enumeration of a finite
window with Fraction arithmetic; there is no floating point anywhere in
the exact path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from hashlib import blake2b
from typing import Callable, Iterator, Mapping, Sequence

from .groups import Alphabet, FiniteGroup
from .words import Coset, GroupSpec, Word, coset

DEFAULT_BUDGET = 2 ** 24

_MASK64 = (1 << 64) - 1


class MissingCoordinateError(KeyError):
    """Read outside the stored window of a configuration with no seed."""

    def __init__(self, coordinate):
        super().__init__(str(coordinate))
        self.coordinate = coordinate

    def __str__(self):
        return f"coordinate {self.coordinate!r} outside the stored window (no extension seed)"


class BudgetExceededError(ValueError):
    """Exact enumeration would exceed the configured state budget."""


def prf_value(seed: int, key: str, size: int) -> int:
    digest = blake2b(key.encode("utf-8"), key=(seed & _MASK64).to_bytes(8, "little"),
                     digest_size=8).digest()
    return int.from_bytes(digest, "little") % size


def derive_seed(seed: int, tag: str) -> int:
    digest = blake2b(tag.encode("utf-8"), key=(seed & _MASK64).to_bytes(8, "little"),
                     digest_size=8).digest()
    return int.from_bytes(digest, "little")


# -- index sets ---------------------------------------------------------------


class GroupIndex:
    """Coordinates are the elements (reduced words) of a group."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec

    def canonicalize(self, coord):
        if not isinstance(coord, Word):
            raise TypeError(f"group coordinate expected, got {coord!r}")
        return coord

    def key(self, coord: Word) -> str:
        return coord.tokens()

    def translate(self, coord: Word, g: Word) -> Word:
        return coord * g

    def __repr__(self):
        return f"GroupIndex({self.spec!r})"


class CosetIndex:
    """Coordinates are right cosets (subgroup)g with canonical representatives."""

    def __init__(self, spec: GroupSpec, subgroup):
        self.spec = spec
        self.part = spec.part_index(subgroup) if isinstance(subgroup, str) else subgroup

    def canonicalize(self, coord):
        if isinstance(coord, Word):
            return coset(self.spec, self.part, coord)
        if isinstance(coord, Coset) and coord.part == self.part:
            return coord
        raise TypeError(f"coset coordinate expected, got {coord!r}")

    def key(self, coord: Coset) -> str:
        return coord.rep.tokens()

    def translate(self, coord: Coset, g: Word) -> Coset:
        return coord.translate(g)

    def __repr__(self):
        return f"CosetIndex({self.spec!r}, {self.spec.part_name(self.part)})"


class IntIndex:
    """Coordinates are integers (the index set Z)."""

    def canonicalize(self, coord):
        if not isinstance(coord, int):
            raise TypeError(f"integer coordinate expected, got {coord!r}")
        return coord

    def key(self, coord: int) -> str:
        return str(coord)

    def translate(self, coord: int, n: int) -> int:
        return coord + n

    def __repr__(self):
        return "IntIndex()"


@dataclass
class Space:
    index: object
    alphabet: Alphabet

    def coord_key(self, coord) -> str:
        return self.index.key(self.index.canonicalize(coord))


class ProductSpace:
    """Finite product of spaces; coordinates are (slot, inner coordinate)."""

    def __init__(self, slots: Sequence[Space]):
        self.slots = tuple(slots)

    def coord_key(self, coord) -> str:
        slot, inner = coord
        return f"{slot}:{self.slots[slot].coord_key(inner)}"

    def alphabet_of(self, coord) -> Alphabet:
        return self.slots[coord[0]].alphabet


def alphabet_at(space, coord) -> Alphabet:
    if isinstance(space, ProductSpace):
        return space.alphabet_of(coord)
    return space.alphabet


# -- configurations -----------------------------------------------------------


class Configuration:
    """Immutable map coordinate -> alphabet index on an index set."""

    space: Space

    def value(self, coord) -> int:
        raise NotImplementedError

    def window(self) -> dict:
        """Explicitly stored coordinates and their values."""
        raise NotImplementedError

    @property
    def point_key(self):
        """Hashable identity used for per-run caching; equal keys imply
        equal configurations (never the converse)."""
        return ("cfg", id(self))


class SeededConfiguration(Configuration):
    """Total configuration: PRF of the coordinate key outside the overrides."""

    def __init__(self, space: Space, seed: int, overrides: Mapping | None = None):
        self.space = space
        self.seed = seed
        self._overrides = dict(overrides or {})
        self._cache: dict = {}
        self._key = ("seeded", seed, tuple(sorted(
            (space.coord_key(k), v) for k, v in self._overrides.items())))

    @property
    def point_key(self):
        return self._key

    def value(self, coord) -> int:
        c = self.space.index.canonicalize(coord)
        if c in self._overrides:
            return self._overrides[c]
        v = self._cache.get(c)
        if v is None:
            v = prf_value(self.seed, self.space.index.key(c), self.space.alphabet.size)
            self._cache[c] = v
        return v

    def window(self) -> dict:
        return dict(self._overrides)


class ExplicitConfiguration(Configuration):
    """Partial configuration: reads outside the stored window are errors."""

    def __init__(self, space: Space, window: Mapping):
        self.space = space
        self._window = dict(window)

    def value(self, coord) -> int:
        c = self.space.index.canonicalize(coord)
        try:
            return self._window[c]
        except KeyError:
            raise MissingCoordinateError(c) from None

    def window(self) -> dict:
        return dict(self._window)

    @property
    def point_key(self):
        return ("explicit", tuple(sorted(
            (self.space.coord_key(k), v) for k, v in self._window.items())))


class MappedConfiguration(Configuration):
    """View of a base configuration through a coordinate and a value map.

        value(c) = value_map(c, base.value(coord_map(c)))

    window_map sends a base window coordinate to the view coordinate it
    shows through (the inverse of coord_map), so the view's window is the
    relocated base window.
    """

    def __init__(self, space: Space, base: Configuration,
                 coord_map: Callable, value_map: Callable,
                 window_map: Callable):
        self.space = space
        self.base = base
        self.coord_map = coord_map
        self.value_map = value_map
        self.window_map = window_map

    def value(self, coord) -> int:
        c = self.space.index.canonicalize(coord)
        return self.value_map(c, self.base.value(self.coord_map(c)))

    def window(self) -> dict:
        out = {}
        for k in self.base.window():
            c = self.window_map(k)
            out[c] = self.value(c)
        return out


class ProductConfiguration(Configuration):
    def __init__(self, space: ProductSpace, components: Sequence[Configuration]):
        self.space = space
        self.components = tuple(components)

    def value(self, coord) -> int:
        slot, inner = coord
        return self.components[slot].value(inner)

    def window(self) -> dict:
        out = {}
        for slot, comp in enumerate(self.components):
            for k, v in comp.window().items():
                out[(slot, k)] = v
        return out

    @property
    def point_key(self):
        return ("prod",) + tuple(c.point_key for c in self.components)


class RecordingConfiguration(Configuration):
    """Pass-through wrapper that records every coordinate actually read."""

    _counter = itertools.count()

    def __init__(self, base: Configuration, log: set):
        self.space = base.space
        self.base = base
        self.log = log
        self._key = ("recording", next(self._counter))

    def value(self, coord) -> int:
        c = self.space.index.canonicalize(coord) if not isinstance(self.space, ProductSpace) \
            else coord
        self.log.add(c)
        return self.base.value(coord)

    def window(self) -> dict:
        return self.base.window()

    @property
    def point_key(self):
        return self._key


def sample(space, seed: int) -> Configuration:
    """Deterministic pseudo-random point of the space for the given seed."""
    if isinstance(space, ProductSpace):
        comps = [sample(slot, derive_seed(seed, f"slot/{i}"))
                 for i, slot in enumerate(space.slots)]
        return ProductConfiguration(space, comps)
    return SeededConfiguration(space, seed)


def sample_stream(space, seed: int, count: int) -> Iterator[Configuration]:
    for i in range(count):
        yield sample(space, derive_seed(seed, f"sample/{i}"))


def explicit_from_assignment(space, assignment: Mapping) -> Configuration:
    if isinstance(space, ProductSpace):
        per_slot: list[dict] = [dict() for _ in space.slots]
        for (slot, inner), v in assignment.items():
            per_slot[slot][inner] = v
        return ProductConfiguration(
            space, [ExplicitConfiguration(s, w) for s, w in zip(space.slots, per_slot)])
    return ExplicitConfiguration(space, assignment)


def resample_outside(x: Configuration, coords, seed: int) -> Configuration:
    """Configuration equal to x on `coords`, fresh pseudo-random elsewhere.

    Used to certify declared dependency windows: a window-sound map must
    take the same value on x and on the resampled configuration.
    """
    space = x.space
    if isinstance(space, ProductSpace):
        per_slot: list[dict] = [dict() for _ in space.slots]
        for (slot, inner) in coords:
            per_slot[slot][inner] = x.value((slot, inner))
        comps = [SeededConfiguration(s, derive_seed(seed, f"slot/{i}"), w)
                 for i, (s, w) in enumerate(zip(space.slots, per_slot))]
        return ProductConfiguration(space, comps)
    window = {space.index.canonicalize(c): x.value(c) for c in coords}
    return SeededConfiguration(space, seed, window)


def agree_on(x: Configuration, y: Configuration, coords) -> bool:
    return all(x.value(c) == y.value(c) for c in coords)


# -- exact distributions ------------------------------------------------------


@dataclass
class CylinderDistribution:
    """Exact joint law of finitely many finite-valued variables."""

    names: tuple[str, ...]
    outcomes: dict          # tuple of values -> Fraction, summing to 1
    state_count: int        # number of enumerated window states

    def probability(self, outcome: tuple) -> Fraction:
        return self.outcomes.get(tuple(outcome), Fraction(0))

    def marginal(self, i: int) -> dict:
        out: dict = {}
        for o, p in self.outcomes.items():
            out[o[i]] = out.get(o[i], Fraction(0)) + p
        return out

    def product_of_marginals(self) -> dict:
        margs = [self.marginal(i) for i in range(len(self.names))]
        prod: dict = {}
        for combo in itertools.product(*[sorted(m.items()) for m in margs]):
            outcome = tuple(v for v, _ in combo)
            p = Fraction(1)
            for _, q in combo:
                p *= q
            prod[outcome] = p
        return prod

    def is_product_of_marginals(self) -> bool:
        prod = self.product_of_marginals()
        keys = set(prod) | set(self.outcomes)
        return all(prod.get(k, Fraction(0)) == self.outcomes.get(k, Fraction(0))
                   for k in keys)

    def worst_product_deviation(self) -> tuple[Fraction, tuple | None]:
        prod = self.product_of_marginals()
        keys = set(prod) | set(self.outcomes)
        worst, witness = Fraction(0), None
        for k in keys:
            d = abs(prod.get(k, Fraction(0)) - self.outcomes.get(k, Fraction(0)))
            if d > worst:
                worst, witness = d, k
        return worst, witness

    def is_uniform(self, support_sizes: Sequence[int]) -> bool:
        total = 1
        for s in support_sizes:
            total *= s
        if len(self.outcomes) != total:
            return False
        p = Fraction(1, total)
        return all(q == p for q in self.outcomes.values())


def window_slots(space, coords) -> list[tuple[object, int]]:
    """Deterministically ordered (coordinate, alphabet size) slots."""
    if isinstance(space, ProductSpace):
        canon = [(slot, space.slots[slot].index.canonicalize(inner))
                 for slot, inner in coords]
    else:
        canon = [space.index.canonicalize(c) for c in coords]
    seen = []
    for c in canon:
        if c not in seen:
            seen.append(c)
    seen.sort(key=lambda c: space.coord_key(c))
    return [(c, alphabet_at(space, c).size) for c in seen]


def enumerate_window(space, coords, budget: int = DEFAULT_BUDGET
                     ) -> Iterator[tuple[Configuration, Fraction]]:
    """All configurations of the window under the uniform product measure."""
    slots = window_slots(space, coords)
    total = 1
    for _, size in slots:
        total *= size
    if total > budget:
        raise BudgetExceededError(f"{total} window states exceed budget {budget}")
    weight = Fraction(1, total)
    keys = [c for c, _ in slots]
    for values in itertools.product(*[range(size) for _, size in slots]):
        yield explicit_from_assignment(space, dict(zip(keys, values))), weight


def exact_distribution(space, variables, window, budget: int = DEFAULT_BUDGET
                       ) -> CylinderDistribution:
    """Exact joint law of the variables over the uniform law on the window.

    Every variable must read only coordinates inside the window; a read
    outside it surfaces as MissingCoordinateError.
    """
    names = tuple(getattr(v, "name", f"var{i}") for i, v in enumerate(variables))
    fns = [getattr(v, "fn", v) for v in variables]
    outcomes: dict = {}
    count = 0
    for config, weight in enumerate_window(space, window, budget):
        count += 1
        key = tuple(fn(config) for fn in fns)
        outcomes[key] = outcomes.get(key, Fraction(0)) + weight
    return CylinderDistribution(names, outcomes, count)


# -- diagonal translation quotients -------------------------------------------


def diagonal_translate(x: Configuration, k: int) -> Configuration:
    """Left-multiply every coordinate value by the group element k."""
    group = x.space.alphabet
    if not isinstance(group, FiniteGroup):
        raise TypeError("diagonal translation needs a group-valued alphabet")
    return MappedConfiguration(x.space, x, lambda c: c,
                               lambda c, v: group.mul(k, v), lambda c: c)


def quotient_normalize(x: Configuration, base_coord) -> Configuration:
    """Canonical representative of the diagonal-translation orbit of x.

    Left-multiplies every value by the inverse of the value at base_coord,
    so the result has the identity there.  Idempotent and constant on
    orbits of the diagonal left translation action.
    """
    group = x.space.alphabet
    if not isinstance(group, FiniteGroup):
        raise TypeError("quotient normalization needs a group-valued alphabet")
    k = group.inv(x.value(base_coord))
    return diagonal_translate(x, k)
