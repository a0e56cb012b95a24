"""Finite alphabets and finite groups given by explicit multiplication tables.

Every alphabet carries the uniform probability measure (weight 1/size per
symbol), which is what makes all downstream distribution checks exactly
computable with rational arithmetic.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence


class GroupTableError(ValueError):
    """A multiplication table fails one of the group axioms."""


class Alphabet:
    """Finite uniform value set; values are handled as indices 0..size-1."""

    def __init__(self, names: Sequence[str], label: str = ""):
        names = tuple(str(n) for n in names)
        if len(names) == 0:
            raise ValueError("alphabet must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError("alphabet symbol names must be distinct")
        self.names = names
        self.label = label or "alphabet%d" % len(names)

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def symbol_probability(self) -> Fraction:
        return Fraction(1, self.size)

    def __repr__(self):
        return f"Alphabet({self.label}, size={self.size})"


class FiniteGroup(Alphabet):
    """Finite group by multiplication table on element indices.

    The table is validated at construction: identity, inverses and full
    associativity.  Violations raise GroupTableError naming the witness.
    """

    def __init__(self, names: Sequence[str], table: Sequence[Sequence[int]], label: str = ""):
        super().__init__(names, label or "G%d" % len(names))
        m = self.size
        if len(table) != m or any(len(row) != m for row in table):
            raise GroupTableError(f"table must be {m}x{m}")
        tab = tuple(tuple(int(v) for v in row) for row in table)
        for row in tab:
            for v in row:
                if not 0 <= v < m:
                    raise GroupTableError(f"table entry {v} out of range 0..{m - 1}")
        self.table = tab
        self.identity = self._find_identity()
        self.inverse_table = self._find_inverses()
        self._check_associativity()

    def _find_identity(self) -> int:
        for e in range(self.size):
            if all(self.table[e][j] == j and self.table[j][e] == j for j in range(self.size)):
                return e
        raise GroupTableError("table has no identity element")

    def _find_inverses(self) -> tuple[int, ...]:
        inv = []
        for a in range(self.size):
            partners = [b for b in range(self.size)
                        if self.table[a][b] == self.identity and self.table[b][a] == self.identity]
            if not partners:
                raise GroupTableError(f"element {self.names[a]!r} has no inverse")
            inv.append(partners[0])
        return tuple(inv)

    def _check_associativity(self):
        t = self.table
        for a in range(self.size):
            for b in range(self.size):
                ab = t[a][b]
                for c in range(self.size):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise GroupTableError(
                            "non-associative triple (%s, %s, %s)"
                            % (self.names[a], self.names[b], self.names[c]))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse_table[a]

    def product(self, elems: Iterable[int]) -> int:
        out = self.identity
        for a in elems:
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            n += 1
        return n

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.size})"


def cyclic(m: int, prefix: str = "") -> FiniteGroup:
    """Additive group of integers mod m; element i is named f"{prefix}{i}"."""
    if m < 1:
        raise ValueError("order must be >= 1")
    names = [f"{prefix}{i}" for i in range(m)]
    table = [[(i + j) % m for j in range(m)] for i in range(m)]
    return FiniteGroup(names, table, label=f"{prefix or 'Z'}{m}" if prefix else f"Z{m}")


def klein_four() -> FiniteGroup:
    names = ["e", "a", "b", "c"]
    table = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    return FiniteGroup(names, table, label="V4")


def s3() -> FiniteGroup:
    """Symmetric group on 3 points, elements named by their one-line images."""
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    names = ["".join(str(i) for i in p) for p in perms]

    def compose(p, q):  # (p*q)(i) = p(q(i))
        return tuple(p[q[i]] for i in range(3))

    table = [[perms.index(compose(p, q)) for q in perms] for p in perms]
    return FiniteGroup(names, table, label="S3")


def direct_power(group: FiniteGroup, n: int) -> FiniteGroup:
    """n-fold direct product of a group with itself; elements are tuples."""
    if n < 1:
        raise ValueError("power must be >= 1")
    idx_tuples = [()]
    for _ in range(n):
        idx_tuples = [t + (i,) for t in idx_tuples for i in range(group.size)]
    names = ["|".join(group.names[i] for i in t) for t in idx_tuples]
    pos = {t: k for k, t in enumerate(idx_tuples)}
    table = [[pos[tuple(group.mul(a, b) for a, b in zip(s, t))] for t in idx_tuples]
             for s in idx_tuples]
    out = FiniteGroup(names, table, label=f"{group.label}^{n}")
    out.factor = group
    out.arity = n
    out.component_tuples = tuple(idx_tuples)
    return out


def tuple_index(power_group: FiniteGroup, components: Sequence[int]) -> int:
    """Index of a component tuple inside a direct_power group."""
    return power_group.component_tuples.index(tuple(components))


def load_group_table(document) -> FiniteGroup:
    """Build a validated group from a table document.

    The document is a mapping (or a JSON string parsing to one) with fields
    `name`, `elements` (array of strings) and `table` (array of arrays of
    element indices).
    """
    if isinstance(document, str):
        document = json.loads(document)
    for field in ("elements", "table"):
        if field not in document:
            raise GroupTableError(f"group table document is missing field {field!r}")
    return FiniteGroup(document["elements"], document["table"],
                       label=document.get("name", ""))
