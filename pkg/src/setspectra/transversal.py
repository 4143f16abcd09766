"""Transversals, saturation and the minimal-transversal basis of a family."""

from __future__ import annotations

import dataclasses
from itertools import combinations

from .errors import BudgetError, CapacityError, ConsistencyError, ContractError
from .family import (
    GroundSpec,
    SetFamily,
    bits,
    elements_of,
    enumerate_k_subsets,
    format_set,
    is_antichain,
    is_intersecting,
)
from .limits import Limits


def transversals(family: SetFamily, k: int, cap: int = Limits.max_transversals) -> SetFamily:
    """T(G): every subset of size <= k meeting all members of ``family``."""
    n = family.n
    sets = family.sets
    out = []
    for s in range(0, min(k, n) + 1):
        for combo in combinations(range(n), s):
            t = 0
            for x in combo:
                t |= 1 << x
            if all(t & g for g in sets):
                out.append(t)
                if len(out) > cap:
                    raise CapacityError(
                        f"transversal family exceeds the cap {cap}", partial=len(out)
                    )
    return SetFamily(n, tuple(out))


def level(family: SetFamily, ell: int) -> SetFamily:
    return SetFamily(family.n, tuple(s for s in family.sets if s.bit_count() == ell))


def level_upto(family: SetFamily, ell: int) -> SetFamily:
    return SetFamily(family.n, tuple(s for s in family.sets if s.bit_count() <= ell))


def covering_number(family: SetFamily | tuple[int, ...]) -> int:
    """Smallest size of a set meeting every member; 0 for the empty family."""
    sets = tuple(family)
    if not sets:
        return 0
    if 0 in sets:
        raise ContractError("a family containing the empty set has no transversal")

    def hits(budget, chosen):
        for s in sets:
            if not s & chosen:
                break
        else:
            return True
        if budget == 0:
            return False
        return any(hits(budget - 1, chosen | b) for b in bits(s))

    budget = 1
    while not hits(budget, 0):
        budget += 1
    return budget


def _require_uniform_intersecting(family: SetFamily) -> int:
    if family.k is None:
        raise ContractError("family must be k-uniform")
    if not is_intersecting(family):
        raise ContractError("family is not intersecting")
    return family.k


def saturation_violation(family: SetFamily) -> int | None:
    """A k-set outside ``family`` that meets every member, if any."""
    k = _require_uniform_intersecting(family)
    present = family.as_set()
    for g in enumerate_k_subsets(GroundSpec(family.n, k)):
        if g not in present and all(g & f for f in family.sets):
            return g
    return None


def is_saturated(family: SetFamily) -> bool:
    """Whether ``family`` equals the k-th level of its own transversal family."""
    return saturation_violation(family) is None


def saturate(family: SetFamily) -> SetFamily:
    """Greedy completion: add each k-set, in colex order, that keeps it intersecting."""
    k = _require_uniform_intersecting(family)
    if not family.sets:
        raise ContractError("cannot saturate the empty family")
    current = list(family.sets)
    present = set(current)
    for g in enumerate_k_subsets(GroundSpec(family.n, k)):
        if g not in present and all(g & f for f in current):
            current.append(g)
            present.add(g)
    return family.with_sets(current)


# ---------------------------------------------------------------------------
# basis

def _minimal(masks) -> list[int]:
    kept: list[int] = []
    for m in sorted(set(masks), key=lambda x: (x.bit_count(), x)):
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def berge_minimal_transversals(sets, k: int) -> list[int]:
    """Minimal transversals of size <= k, by adding one member at a time."""
    partial = [0]
    for s in sets:
        grown = []
        for t in partial:
            if t & s:
                grown.append(t)
            elif t.bit_count() < k:
                grown.extend(t | b for b in bits(s))
        partial = _minimal(grown)
    return sorted(partial)


def brute_force_minimal_transversals(family: SetFamily, k: int) -> list[int]:
    """Oracle: minimal members of T(F) by enumerating every set of size <= k."""
    if family.n > 16:
        raise CapacityError("brute-force transversal oracle limited to n <= 16")
    return sorted(_minimal(transversals(family, k).sets))


@dataclasses.dataclass(frozen=True)
class Sunflower:
    center: int
    petals: SetFamily

    def to_json(self) -> dict:
        return {"center": elements_of(self.center), "petals": self.petals.as_lists()}


@dataclasses.dataclass(frozen=True)
class TransversalBasis:
    """A minimal-transversal basis with its derived parameters.

    ``t`` is the smallest member size, ``tau`` the covering number, and
    ``levels[l]`` holds the members of size ``l`` for ``t <= l <= k``.
    Construction fails unless the basis is an intersecting antichain with
    ``tau == t``.
    """

    basis: SetFamily
    k: int
    t: int = dataclasses.field(init=False)
    tau: int = dataclasses.field(init=False)
    levels: dict = dataclasses.field(init=False, compare=False)

    def __post_init__(self):
        sets = self.basis.sets
        if not sets:
            raise ContractError("empty basis")
        if any(s.bit_count() > self.k for s in sets):
            raise ContractError(f"basis member larger than k={self.k}")
        if not is_intersecting(sets) or not is_antichain(sets):
            raise ConsistencyError("basis is not an intersecting antichain")
        t = min(s.bit_count() for s in sets)
        tau = covering_number(sets)
        if tau != t:
            raise ConsistencyError(f"covering number {tau} differs from minimum size {t}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(
            self, "levels", {ell: level(self.basis, ell) for ell in range(t, self.k + 1)}
        )

    def upto(self, ell: int) -> SetFamily:
        return level_upto(self.basis, ell)

    def to_json(self) -> dict:
        return {"basis": self.basis.as_lists(), "t": self.t, "tau": self.tau}


def minimal_transversals(
    family: SetFamily, method: str = "berge", limits: Limits | None = None
) -> TransversalBasis:
    """B(F) for a saturated intersecting family, with its structure re-checked.

    Verifies that the basis is an intersecting antichain, that its k-level
    upward closure reproduces ``family`` exactly, that it holds no sunflower
    with k + 1 petals, and that its covering number equals its minimum size.
    """
    limits = limits or Limits()
    violation = saturation_violation(family)
    if violation is not None:
        raise ContractError(
            f"family is not saturated: {format_set(violation)} meets every member"
        )
    k = family.k
    if method == "berge":
        masks = berge_minimal_transversals(family.sets, k)
    elif method == "brute":
        masks = brute_force_minimal_transversals(family, k)
    else:
        raise ContractError(f"unknown method {method!r}")
    basis = TransversalBasis(SetFamily(family.n, tuple(masks)), k)

    closure = [h for h in enumerate_k_subsets(GroundSpec(family.n, k)) if any(b & h == b for b in masks)]
    if tuple(closure) != family.sets:
        raise ConsistencyError("upward closure of the basis does not reproduce the family")
    flower = find_sunflower(basis.basis, k + 1, max_nodes=limits.sunflower_nodes)
    if flower is not None:
        raise ConsistencyError(
            f"basis contains a sunflower of size {k + 1} with center {format_set(flower.center)}"
        )
    return basis


def find_sunflower(family: SetFamily, p: int, max_nodes: int = Limits.sunflower_nodes) -> Sunflower | None:
    """Some p members whose pairwise intersections all equal one center.

    Centers are tried in colex order among pairwise intersections; for each
    center the members strictly containing it are packed by backtracking so
    that their residues are pairwise disjoint. The first packing found is the
    colex-least one for that center.
    """
    if p < 1:
        raise ContractError("sunflower size must be at least 1")
    sets = family.sets
    if p == 1:
        if not sets:
            return None
        return Sunflower(sets[0], family.with_sets(sets[:1]))
    centers = sorted({a & b for a, b in combinations(sets, 2)})
    nodes = 0
    for center in centers:
        residues = [s & ~center for s in sets if s & center == center and s != center]
        if len(residues) < p:
            continue
        chosen: list[int] = []

        def pack(start, used):
            nonlocal nodes
            if len(chosen) == p:
                return True
            for i in range(start, len(residues)):
                if len(residues) - i < p - len(chosen):
                    return False
                nodes += 1
                if nodes > max_nodes:
                    raise BudgetError(f"sunflower search exceeded {max_nodes} nodes")
                r = residues[i]
                if r & used:
                    continue
                chosen.append(r)
                if pack(i + 1, used | r):
                    return True
                chosen.pop()
            return False

        if pack(0, 0):
            petals = tuple(r | center for r in chosen)
            return Sunflower(center, family.with_sets(petals))
    return None


def level_decomposition(family: SetFamily, basis: TransversalBasis) -> dict[int, SetFamily]:
    """Split ``family`` by the size of the largest basis set each member contains."""
    blocks: dict[int, list[int]] = {ell: [] for ell in range(basis.t, basis.k + 1)}
    for f in family.sets:
        sizes = [b.bit_count() for b in basis.basis.sets if b & f == b]
        if not sizes:
            raise ContractError(f"{format_set(f)} contains no basis set")
        blocks[max(sizes)].append(f)
    return {ell: family.with_sets(sets) for ell, sets in blocks.items()}


def alpha(basis: TransversalBasis) -> int:
    """Smallest a with covering number of the size-<=a prefix at least 2."""
    if any(s.bit_count() == 1 for s in basis.basis.sets):
        raise ContractError("star has no alpha: the basis contains a singleton")
    for a in range(1, basis.k + 1):
        if covering_number(basis.upto(a)) >= 2:
            return a
    raise ConsistencyError("no prefix reaches covering number 2, yet t >= 2")


def full_cover_check(family: SetFamily) -> dict | None:
    """For an intersecting k-uniform family needing k points to cover it, |F| <= k^k.

    Returns None when the covering number is below k, so the bound says nothing.
    """
    k = _require_uniform_intersecting(family)
    if covering_number(family.sets) != k:
        return None
    return {"size": len(family), "bound": str(k**k), "pass": len(family) <= k**k}
