"""Bitmask set families over the ground set {1, ..., n}.

A subset of the ground set is a plain ``int``: element ``i`` lives in bit
``i - 1``. Sorting masks numerically is the same as colexicographic order on
the sets, which is the one order used everywhere in this package.
"""

from __future__ import annotations

import dataclasses
import json
import math
from itertools import combinations
from typing import Iterable, Iterator

from .errors import CapacityError, ContractError

MAX_N = 64


# ---------------------------------------------------------------------------
# element sets

def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for x in elements:
        mask |= 1 << (x - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return out


def bits(mask: int) -> Iterator[int]:
    """Yield the single-bit masks of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def size(mask: int) -> int:
    return mask.bit_count()


def format_set(mask: int) -> str:
    return "{" + ",".join(map(str, elements_of(mask))) + "}"


# ---------------------------------------------------------------------------
# exact counting

def binomial(n: int, i: int) -> int:
    """C(n, i), zero outside 0 <= i <= n."""
    if i < 0 or n < 0 or i > n:
        return 0
    return math.comb(n, i)


def binomial_tail(n: int, s: int) -> int:
    """Sum of C(n, i) for 0 <= i <= s; the empty sum (s < 0) is 0."""
    if s < 0:
        return 0
    total = 0
    term = 1
    for i in range(min(s, n) + 1):
        if i:
            term = term * (n - i + 1) // i
        total += term
    return total


# ---------------------------------------------------------------------------
# families

@dataclasses.dataclass(frozen=True)
class GroundSpec:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or self.k > self.n:
            raise ContractError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")


@dataclasses.dataclass(frozen=True)
class SetFamily:
    """Distinct subsets of [n] stored as colex-sorted bitmasks.

    ``k`` is the uniformity when every member has exactly ``k`` elements,
    ``None`` for mixed-size families such as transversal bases.
    """

    n: int
    sets: tuple[int, ...] = ()
    k: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ContractError(f"ground size must be positive, got {self.n}")
        if self.n > MAX_N:
            raise CapacityError(f"explicit families need n <= {MAX_N}, got {self.n}")
        ordered = tuple(sorted(self.sets))
        if len(set(ordered)) != len(ordered):
            dup = next(a for a, b in zip(ordered, ordered[1:]) if a == b)
            raise ContractError(f"duplicate set {format_set(dup)}")
        full = (1 << self.n) - 1
        for s in ordered:
            if s < 0 or s & ~full:
                raise ContractError(f"set {format_set(s)} leaves the ground set [1..{self.n}]")
        if self.k is not None:
            for s in ordered:
                if s.bit_count() != self.k:
                    raise ContractError(f"set {format_set(s)} is not {self.k}-uniform")
        object.__setattr__(self, "sets", ordered)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]], k: int | None = None) -> SetFamily:
        masks = []
        for members in sets:
            members = list(members)
            for x in members:
                if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= n:
                    raise ContractError(f"element {x!r} outside 1..{n}")
            if len(set(members)) != len(members):
                raise ContractError(f"repeated element in {members}")
            masks.append(mask_of(members))
        return cls(n, tuple(masks), k)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    def __contains__(self, mask: int) -> bool:
        return mask in self.as_set()

    def as_set(self) -> frozenset[int]:
        cached = self.__dict__.get("_frozen")
        if cached is None:
            cached = frozenset(self.sets)
            object.__setattr__(self, "_frozen", cached)
        return cached

    def as_lists(self) -> list[list[int]]:
        return [elements_of(s) for s in self.sets]

    def with_sets(self, sets: Iterable[int]) -> SetFamily:
        return SetFamily(self.n, tuple(sets), self.k)

    def degrees(self) -> list[int]:
        """Degree of element i+1 at index i."""
        return [sum(1 for s in self.sets if s >> i & 1) for i in range(self.n)]

    def to_json(self) -> dict:
        doc = {"n": self.n, "sets": self.as_lists()}
        if self.k is not None:
            doc["k"] = self.k
        return doc

    def __str__(self) -> str:
        return "{" + ", ".join(format_set(s) for s in self.sets) + "}"


def family_from_json(doc: dict) -> SetFamily:
    """Parse the ``{"n", "k", "sets"}`` document; ``k`` is optional."""
    if not isinstance(doc, dict) or "n" not in doc or "sets" not in doc:
        raise ContractError('family document needs keys "n" and "sets"')
    n, k = doc["n"], doc.get("k")
    if not isinstance(n, int) or (k is not None and not isinstance(k, int)):
        raise ContractError('"n" and "k" must be integers')
    return SetFamily.from_sets(n, doc["sets"], k)


def load_family(path) -> SetFamily:
    with open(path) as fh:
        return family_from_json(json.load(fh))


def dump_family(family: SetFamily, path) -> None:
    with open(path, "w") as fh:
        json.dump(family.to_json(), fh, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# enumeration and predicates

def enumerate_k_subsets(ground: GroundSpec) -> Iterator[int]:
    """All k-subsets of [n] in colex order (Gosper's hack)."""
    n, k = ground.n, ground.k
    if n > MAX_N:
        raise CapacityError(f"subset enumeration needs n <= {MAX_N}, got {n}")
    mask = (1 << k) - 1
    limit = 1 << n
    while mask < limit:
        yield mask
        low = mask & -mask
        ripple = mask + low
        mask = (((ripple ^ mask) >> 2) // low) | ripple


def all_k_sets(n: int, k: int, cap: int | None = None) -> list[int]:
    if cap is not None and binomial(n, k) > cap:
        raise CapacityError(f"C({n},{k}) = {binomial(n, k)} exceeds the cap {cap}")
    return list(enumerate_k_subsets(GroundSpec(n, k)))


def is_intersecting(family: SetFamily | Iterable[int]) -> bool:
    sets = list(family)
    return all(a & b for a, b in combinations(sets, 2))


def is_antichain(family: SetFamily | Iterable[int]) -> bool:
    sets = list(family)
    for a, b in combinations(sets, 2):
        inter = a & b
        if inter == a or inter == b:
            return False
    return True


# ---------------------------------------------------------------------------
# relabeling

def relabel(family: SetFamily, perm: dict[int, int] | list[int]) -> SetFamily:
    """Apply a ground-set permutation.

    ``perm`` maps old element -> new element (1-based); a list is read as
    ``perm[i - 1]`` being the image of ``i``.
    """
    if isinstance(perm, dict):
        images = [perm.get(i, i) for i in range(1, family.n + 1)]
    else:
        images = list(perm)
    if sorted(images) != list(range(1, family.n + 1)):
        raise ContractError("not a permutation of the ground set")
    out = []
    for s in family.sets:
        m = 0
        for x in elements_of(s):
            m |= 1 << (images[x - 1] - 1)
        out.append(m)
    return family.with_sets(out)


def _swap_classes(sets: tuple[int, ...], n: int) -> list[int]:
    """Class id per element: x ~ y when the transposition (x y) fixes the family."""
    members = frozenset(sets)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(n):
        for y in range(x + 1, n):
            if find(x) == find(y):
                continue
            both = (1 << x) | (1 << y)
            if all(
                (s ^ both if (s & both) and (s & both) != both else s) in members
                for s in sets
            ):
                parent[find(y)] = find(x)
    return [find(x) for x in range(n)]


def canonical_form(family: SetFamily, max_n: int = 12) -> SetFamily:
    """Least relabeling of ``family`` over all permutations of [n].

    Labels are handed out from n downwards; after each assignment the
    multiset of partial masks (restricted to the labels assigned so far) is
    compared against the best prefix seen, so a relabeling is minimal for
    the key (T_1, ..., T_n) where T_j is the sorted tuple of those partial
    masks. T_n is the relabeled family itself, so equal keys mean equal
    families. Branches are pruned when their prefix is already larger, and
    elements whose transposition is an automorphism are tried only once.
    Low-degree elements are tried first since they tend to win high labels.
    """
    n = family.n
    if n > max_n:
        raise CapacityError(f"exact canonical form limited to n <= {max_n}, got {n}")
    sets = family.sets
    if not sets:
        return family
    cls = _swap_classes(sets, n)
    deg = family.degrees()
    order = sorted(range(n), key=lambda x: (deg[x], x))
    best: list[tuple[int, ...]] = []

    def search(depth, values, used):
        if depth == n:
            return
        tried = set()
        for x in order:
            if used >> x & 1 or cls[x] in tried:
                continue
            tried.add(cls[x])
            bit = 1 << x
            nxt = [(v << 1) | (1 if s & bit else 0) for v, s in zip(values, sets)]
            key = tuple(sorted(nxt))
            if depth < len(best):
                if key > best[depth]:
                    continue
                if key < best[depth]:
                    del best[depth:]
                    best.append(key)
            else:
                best.append(key)
            search(depth + 1, nxt, used | bit)

    search(0, [0] * len(sets), 0)
    return family.with_sets(best[-1])
