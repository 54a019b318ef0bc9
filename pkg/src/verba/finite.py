"""Finite groups with dense integer element ids, and word lengths inside them.

Backends:

* ``S<n>`` / ``A<n>`` for ``n <= 8`` -- permutations ordered lexicographically
  by image tuple;
* ``SL2_<p>`` for prime ``p <= 13`` -- determinant-one 2x2 matrices over the
  ``p``-element field, ordered lexicographically by ``(a, b, c, d)``;
* ``D<k>`` for ``k >= 3`` -- dihedral groups, built through the table backend;
* ``table:<path>`` -- an explicit multiplication table file: a line
  ``order N`` followed by ``N`` rows of ``N`` ids (validated to be a group).

Multiplication is "first left, then right" for permutation-like backends,
matching how words act in :mod:`verba.cover`.  Groups of order at most
``TABLE_CAP`` build a dense numpy multiplication table on demand; value-set
enumeration and breadth-first ball growth are vectorized against it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError, ResourceBudgetError, UnknownNameError
from .templates import GAMMA3_FAMILY, Template
from .words import Word

TABLE_CAP = 4096
ENUMERATION_BUDGET = 10**8
_TABLE_ORDER_CAP = 2048

_SL2_PRIMES = (2, 3, 5, 7, 11, 13)


class FiniteGroup:
    """Base class; elements are ids ``0 .. order-1``."""

    spec: str
    order: int
    identity: int

    def __init__(self, spec: str, order: int, identity: int) -> None:
        self.spec = spec
        self.order = order
        self.identity = identity
        self._table: np.ndarray | None = None
        self._inverses: np.ndarray | None = None

    def multiply(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inverse(self, a: int) -> int:
        raise NotImplementedError

    def element_name(self, a: int) -> str:
        return str(a)

    def _build_table(self) -> np.ndarray:
        table = np.empty((self.order, self.order), dtype=np.int32)
        for a in range(self.order):
            for b in range(self.order):
                table[a, b] = self.multiply(a, b)
        return table

    def dense_table(self) -> np.ndarray | None:
        """The full multiplication table, or ``None`` above ``TABLE_CAP``."""
        if self.order > TABLE_CAP:
            return None
        if self._table is None:
            self._table = self._build_table()
        return self._table

    def inverses(self) -> np.ndarray:
        if self._inverses is None:
            self._inverses = np.array(
                [self.inverse(a) for a in range(self.order)], dtype=np.int32
            )
        return self._inverses


class PermutationGroup(FiniteGroup):
    def __init__(self, spec: str, degree: int, even_only: bool) -> None:
        perms = [
            p
            for p in itertools.permutations(range(degree))
            if not even_only or _is_even(p)
        ]
        self.degree = degree
        self._perms = np.array(perms, dtype=np.int64)
        radix = degree ** np.arange(degree, dtype=np.int64)
        self._radix = radix
        codes = self._perms @ radix
        lookup = np.full(degree**degree, -1, dtype=np.int32)
        lookup[codes] = np.arange(len(perms), dtype=np.int32)
        self._lookup = lookup
        identity = int(lookup[np.arange(degree, dtype=np.int64) @ radix])
        super().__init__(spec, len(perms), identity)

    def multiply(self, a: int, b: int) -> int:
        composed = self._perms[b][self._perms[a]]  # first a, then b
        return int(self._lookup[composed @ self._radix])

    def inverse(self, a: int) -> int:
        perm = self._perms[a]
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.degree, dtype=np.int64)
        return int(self._lookup[inv @ self._radix])

    def element_name(self, a: int) -> str:
        return "(" + " ".join(str(v) for v in self._perms[a]) + ")"

    def _build_table(self) -> np.ndarray:
        table = np.empty((self.order, self.order), dtype=np.int32)
        for a in range(self.order):
            composed = self._perms[:, self._perms[a]]  # rows: all b after a
            table[a] = self._lookup[composed @ self._radix]
        return table


def _is_even(perm: tuple[int, ...]) -> bool:
    inversions = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return inversions % 2 == 0


class SL2Group(FiniteGroup):
    def __init__(self, p: int) -> None:
        if p not in _SL2_PRIMES:
            raise UnknownNameError(f"SL2 backend supports primes {_SL2_PRIMES}, not {p}")
        self.p = p
        mats = [
            (a, b, c, d)
            for a in range(p)
            for b in range(p)
            for c in range(p)
            for d in range(p)
            if (a * d - b * c) % p == 1
        ]
        self._mats = np.array(mats, dtype=np.int64)
        radix = np.array([p**3, p**2, p, 1], dtype=np.int64)
        self._radix = radix
        lookup = np.full(p**4, -1, dtype=np.int32)
        lookup[self._mats @ radix] = np.arange(len(mats), dtype=np.int32)
        self._lookup = lookup
        identity = int(lookup[np.array([1, 0, 0, 1], dtype=np.int64) @ radix])
        super().__init__(f"SL2_{p}", len(mats), identity)

    def _mul_rows(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        a1, b1, c1, d1 = left.T
        a2, b2, c2, d2 = right.T
        p = self.p
        return np.stack(
            [
                (a1 * a2 + b1 * c2) % p,
                (a1 * b2 + b1 * d2) % p,
                (c1 * a2 + d1 * c2) % p,
                (c1 * b2 + d1 * d2) % p,
            ],
            axis=-1,
        )

    def multiply(self, a: int, b: int) -> int:
        prod = self._mul_rows(self._mats[a][None, :], self._mats[b][None, :])[0]
        return int(self._lookup[prod @ self._radix])

    def inverse(self, a: int) -> int:
        m = self._mats[a]
        p = self.p
        inv = np.array([m[3] % p, -m[1] % p, -m[2] % p, m[0] % p], dtype=np.int64)
        return int(self._lookup[inv @ self._radix])

    def element_name(self, a: int) -> str:
        m = self._mats[a]
        return f"[[{m[0]},{m[1]}],[{m[2]},{m[3]}]]"

    def _build_table(self) -> np.ndarray:
        table = np.empty((self.order, self.order), dtype=np.int32)
        for a in range(self.order):
            prod = self._mul_rows(self._mats[a][None, :], self._mats)
            table[a] = self._lookup[prod @ self._radix]
        return table


class TableGroup(FiniteGroup):
    def __init__(self, spec: str, table: np.ndarray) -> None:
        order = table.shape[0]
        if order > _TABLE_ORDER_CAP:
            raise ResourceBudgetError(
                f"table backend validates groups up to order {_TABLE_ORDER_CAP}"
            )
        _validate_table(table)
        identity = _find_identity(table)
        super().__init__(spec, order, identity)
        self._table = table.astype(np.int32)
        eye = np.arange(order)
        self._inverses = np.argmax(self._table == identity, axis=1).astype(np.int32)
        if not np.array_equal(self._table[self._inverses, eye], np.full(order, identity)):
            raise ParseError("table has one-sided inverses only; not a group")

    def multiply(self, a: int, b: int) -> int:
        return int(self._table[a, b])

    def inverse(self, a: int) -> int:
        return int(self._inverses[a])


def _validate_table(table: np.ndarray) -> None:
    order = table.shape[0]
    if table.shape != (order, order):
        raise ParseError("multiplication table must be square")
    if table.min() < 0 or table.max() >= order:
        raise ParseError("table entries must be ids in range")
    expect = np.arange(order)
    if not all(np.array_equal(np.sort(row), expect) for row in table):
        raise ParseError("table rows are not permutations (not left-cancellative)")
    if not all(np.array_equal(np.sort(col), expect) for col in table.T):
        raise ParseError("table columns are not permutations (not right-cancellative)")
    for a in range(order):
        left = table[table[a], :]
        right = table[a][table]
        if not np.array_equal(left, right):
            raise ParseError(f"table is not associative (first failure at row {a})")


def _find_identity(table: np.ndarray) -> int:
    order = table.shape[0]
    expect = np.arange(order)
    for e in range(order):
        if np.array_equal(table[e], expect) and np.array_equal(table[:, e], expect):
            return e
    raise ParseError("table has no identity element")


def parse_table_text(spec: str, text: str) -> TableGroup:
    rows: list[list[int]] = []
    order: int | None = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if order is None:
            head, _, value = line.partition(" ")
            if head != "order" or not value.strip().isdigit():
                raise ParseError("table file must start with 'order N'")
            order = int(value)
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise ParseError(f"bad table row {line!r}") from exc
    if order is None:
        raise ParseError("empty table file")
    if len(rows) != order or any(len(r) != order for r in rows):
        raise ParseError(f"expected {order} rows of {order} entries")
    return TableGroup(spec, np.array(rows, dtype=np.int64))


def dihedral_table_text(k: int) -> str:
    """Multiplication table text for the order ``2k`` dihedral group.

    Element ``i + k*f`` is (rotation ``i``, flip ``f``), with
    ``(i,f) * (j,e) = (i + j*(-1)^f mod k, f xor e)``.
    """
    if k < 3:
        raise ValueError("dihedral groups need k >= 3")
    lines = [f"order {2 * k}"]
    for a in range(2 * k):
        i, f = a % k, a // k
        row = []
        for b in range(2 * k):
            j, e = b % k, b // k
            rot = (i + (j if f == 0 else -j)) % k
            row.append(str(rot + k * (f ^ e)))
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def load_group(spec: str) -> FiniteGroup:
    """Instantiate a group from its spec string (see module docstring)."""
    if spec.startswith("table:"):
        path = Path(spec[len("table:") :])
        try:
            text = path.read_text()
        except OSError as exc:
            raise UnknownNameError(f"cannot read table file {path}: {exc}") from exc
        return parse_table_text(spec, text)
    kind = spec[:1]
    if kind in ("S", "A") and spec[1:].isdigit():
        n = int(spec[1:])
        low = 2 if kind == "S" else 3
        if not (low <= n <= 8):
            raise UnknownNameError(f"{kind}<n> backend supports {low} <= n <= 8")
        return PermutationGroup(spec, n, even_only=kind == "A")
    if spec.startswith("SL2_") and spec[4:].isdigit():
        return SL2Group(int(spec[4:]))
    if kind == "D" and spec[1:].isdigit():
        group = parse_table_text(spec, dihedral_table_text(int(spec[1:])))
        group.spec = spec
        return group
    raise UnknownNameError(f"unknown group spec {spec!r}")


def registry_small_groups() -> list[str]:
    """The stock groups of order at most 60 used by the cross-checks."""
    return ["S3", "S4", "A4", "A5", "SL2_3", "D4", "D6", "D7", "D10"]


# ---------------------------------------------------------------------------
# word evaluation and verbal value sets

def eval_word(group: FiniteGroup, w: Word, images: dict[int, int]) -> int:
    """Image of ``w`` under generator assignment ``images`` (ids)."""
    missing = [i for i in w.generators() if i not in images]
    if missing:
        raise ValueError(f"assignment misses generators {missing}")
    acc = group.identity
    for index, sign in w.letters:
        value = images[index] if sign == 1 else group.inverse(images[index])
        acc = group.multiply(acc, value)
    return acc


def _assignment_columns(
    group: FiniteGroup, count: int, start: int, stop: int
) -> list[np.ndarray]:
    """Columns of the mixed-radix assignment block ``start..stop``."""
    idx = np.arange(start, stop, dtype=np.int64)
    return [
        ((idx // (group.order**pos)) % group.order).astype(np.int32)
        for pos in range(count)
    ]


def _eval_template_block(
    group: FiniteGroup, body: Word, columns: dict[int, np.ndarray]
) -> np.ndarray:
    table = group.dense_table()
    assert table is not None
    inv = group.inverses()
    acc = np.full(len(next(iter(columns.values()))), group.identity, dtype=np.int32)
    for index, sign in body.letters:
        col = columns[index] if sign == 1 else inv[columns[index]]
        acc = table[acc, col]
    return acc


def template_values(
    group: FiniteGroup, template: Template, budget: int = ENUMERATION_BUDGET
) -> np.ndarray:
    """Sorted ids of all values of ``template`` in ``group``.

    Enumerates every assignment of the template variables (``order**k`` of
    them; ``ResourceBudgetError`` beyond ``budget``).  The set-valued
    commutator-of-derived-element family is computed from the derived
    subgroup instead of by assignment enumeration.
    """
    if template is GAMMA3_FAMILY or template.key == GAMMA3_FAMILY.key:
        return _gamma3_family_values(group, budget)
    if template.body is None:
        raise UnknownNameError(f"cannot enumerate template {template.label!r}")
    k = len(template.variables)
    total = group.order**k
    if total > budget:
        raise ResourceBudgetError(
            f"enumerating {template.label} over {group.spec} needs {total} assignments"
            f" (budget {budget})"
        )
    if group.dense_table() is None:
        values: set[int] = set()
        for assignment in itertools.product(range(group.order), repeat=k):
            values.add(
                eval_word(group, template.body, dict(zip(template.variables, assignment)))
            )
        return np.array(sorted(values), dtype=np.int32)
    chunk = 1 << 18
    seen = np.zeros(group.order, dtype=bool)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        cols = _assignment_columns(group, k, start, stop)
        columns = dict(zip(template.variables, cols))
        seen[_eval_template_block(group, template.body, columns)] = True
    return np.nonzero(seen)[0].astype(np.int32)


def closure(group: FiniteGroup, seed_ids: np.ndarray) -> np.ndarray:
    """Ids of the subgroup generated by ``seed_ids`` (products of seeds)."""
    table = group.dense_table()
    seeds = np.unique(np.concatenate([seed_ids, group.inverses()[seed_ids]]))
    member = np.zeros(group.order, dtype=bool)
    member[group.identity] = True
    frontier = np.array([group.identity], dtype=np.int32)
    while frontier.size:
        if table is not None:
            products = table[np.ix_(frontier, seeds)].ravel()
        else:
            products = np.array(
                [group.multiply(int(a), int(s)) for a in frontier for s in seeds],
                dtype=np.int32,
            )
        products = np.unique(products)
        fresh = products[~member[products]]
        member[fresh] = True
        frontier = fresh
    return np.nonzero(member)[0].astype(np.int32)


def derived_subgroup(group: FiniteGroup, budget: int = ENUMERATION_BUDGET) -> np.ndarray:
    from .templates import gamma_word

    commutators = template_values(group, gamma_word(2), budget)
    return closure(group, commutators)


def _gamma3_family_values(group: FiniteGroup, budget: int) -> np.ndarray:
    derived = derived_subgroup(group, budget)
    if group.order * len(derived) > budget:
        raise ResourceBudgetError("commutator-of-derived enumeration over budget")
    table = group.dense_table()
    inv = group.inverses()
    seen = np.zeros(group.order, dtype=bool)
    if table is None:
        for u in range(group.order):
            for d in derived:
                ud = group.multiply(u, int(d))
                seen[group.multiply(group.multiply(ud, inv[u]), inv[d])] = True
    else:
        for u in range(group.order):
            ud = table[u, derived]
            seen[table[table[ud, inv[u]], inv[derived]]] = True
    return np.nonzero(seen)[0].astype(np.int32)


# ---------------------------------------------------------------------------
# ball growth

@dataclass
class DistanceTable:
    """Distances from the identity in the (symmetrized) verbal Cayley graph.

    ``distances[g]`` is the least number of template values and inverses of
    values multiplying to ``g``, or ``-1`` when ``g`` is not a product of
    them at all.
    """

    group_spec: str
    template_key: str
    distances: np.ndarray

    def distance(self, element: int) -> int | None:
        value = int(self.distances[element])
        return None if value < 0 else value

    def reachable_count(self) -> int:
        return int((self.distances >= 0).sum())

    def histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.distances[self.distances >= 0], return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}


def wlength_table(
    group: FiniteGroup, template: Template, budget: int = ENUMERATION_BUDGET
) -> DistanceTable:
    """Breadth-first word lengths over the template's value set in ``group``."""
    values = template_values(group, template, budget)
    generators = np.unique(np.concatenate([values, group.inverses()[values]]))
    table = group.dense_table()
    distances = np.full(group.order, -1, dtype=np.int32)
    distances[group.identity] = 0
    frontier = np.array([group.identity], dtype=np.int32)
    level = 0
    while frontier.size:
        level += 1
        if table is not None:
            products = np.unique(table[np.ix_(frontier, generators)].ravel())
        else:
            products = np.unique(
                np.array(
                    [group.multiply(int(a), int(s)) for a in frontier for s in generators],
                    dtype=np.int32,
                )
            )
        fresh = products[distances[products] < 0]
        distances[fresh] = level
        frontier = fresh
    return DistanceTable(group.spec, template.key, distances)


def bi_invariance_check(
    group: FiniteGroup,
    table: DistanceTable,
    trials: int = 1000,
    seed: int = 0,
) -> bool:
    """Spot-check ``d(g,h) = d(fg,fh) = d(gf,hf)`` on random triples.

    ``d(g,h)`` means the table distance of ``g^-1 h``; ``g`` and ``h`` are
    sampled from the reachable set so the distances are defined, ``f`` from
    the whole group.
    """
    rng = np.random.default_rng(seed)
    reachable = np.nonzero(table.distances >= 0)[0]
    if reachable.size == 0:
        return True
    for _ in range(trials):
        g = int(rng.choice(reachable))
        h = int(rng.choice(reachable))
        f = int(rng.integers(group.order))
        base = table.distance(group.multiply(group.inverse(g), h))
        left = table.distance(
            group.multiply(group.inverse(group.multiply(f, g)), group.multiply(f, h))
        )
        right = table.distance(
            group.multiply(group.inverse(group.multiply(g, f)), group.multiply(h, f))
        )
        if not (base == left == right):
            return False
    return True


def quotient_length(
    w: Word,
    template: Template,
    group: FiniteGroup,
    images: dict[int, int],
    budget: int = ENUMERATION_BUDGET,
) -> int | None:
    """Length of the image of ``w`` in ``group`` over the template's values.

    ``None`` means the image is not a product of values at all, which
    certifies that ``w`` itself is no such product.  Any finite result is a
    lower bound for the length of ``w`` wherever the assignment lifts.
    """
    table = wlength_table(group, template, budget)
    return table.distance(eval_word(group, w, images))
