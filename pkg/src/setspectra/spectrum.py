"""Intersection spectra, the standard extremal families, and their closed-form counts."""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from itertools import combinations

from .errors import CapacityError, ConsistencyError, ContractError
from .family import SetFamily, all_k_sets, binomial, binomial_tail, load_family
from .limits import Limits
from .transversal import TransversalBasis, level_decomposition


# ---------------------------------------------------------------------------
# spectra

@dataclasses.dataclass(frozen=True)
class SpectrumReport:
    distinct_intersections: SetFamily
    count: int
    tilde_count: int
    by_level: dict = dataclasses.field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "count": str(self.count),
            "tilde_count": str(self.tilde_count),
            "by_level": {str(ell): str(v) for ell, v in sorted(self.by_level.items())},
        }


def _pairwise(sets, pair_budget):
    if len(sets) ** 2 > pair_budget:
        raise CapacityError(
            f"{len(sets)} sets exceed the pair budget {pair_budget}", partial=len(sets)
        )
    return {a & b for a, b in combinations(sets, 2)}


def intersection_spectrum(family: SetFamily, pair_budget: int = Limits.pair_budget) -> SpectrumReport:
    """All distinct F & F' over unordered pairs of distinct members."""
    found = _pairwise(family.sets, pair_budget)
    spectrum = SetFamily(family.n, tuple(found))
    return SpectrumReport(spectrum, len(found), len(found | family.as_set()))


def partitioned_spectrum(
    family: SetFamily, basis: TransversalBasis, pair_budget: int = Limits.pair_budget
) -> SpectrumReport:
    """Spectrum with each intersection charged to the higher level of its pair.

    ``by_level[l]`` counts the distinct intersections F & F' with F at level
    ``l`` and F' at level ``<= l``.
    """
    blocks = level_decomposition(family, basis)
    report = intersection_spectrum(family, pair_budget)
    by_level = {}
    union: set[int] = set()
    lower: list[int] = []
    for ell in sorted(blocks):
        here = blocks[ell].sets
        found = {a & b for a, b in combinations(here, 2)}
        found.update(a & b for a in here for b in lower)
        by_level[ell] = len(found)
        union |= found
        lower.extend(here)
    if union != report.distinct_intersections.as_set():
        raise ConsistencyError("level spectra do not cover the full spectrum")
    return dataclasses.replace(report, by_level=by_level)


# ---------------------------------------------------------------------------
# families

def _check_regime(n, k, allow_2k):
    if k < 1 or n < k:
        raise ContractError(f"need 1 <= k <= n, got n={n}, k={k}")
    if n < 2 * k or (n == 2 * k and not allow_2k):
        raise ContractError(f"need n > 2k, got n={n}, k={k}")


def star(n: int, k: int, x: int = 1, *, allow_2k: bool = False,
         limits: Limits | None = None) -> SetFamily:
    _check_regime(n, k, allow_2k)
    cap = (limits or Limits()).max_sets
    bit = 1 << (x - 1)
    return SetFamily(n, tuple(s for s in all_k_sets(n, k, cap) if s & bit), k)


def family_bp(n: int, k: int, p: int, *, allow_2k: bool = False,
              limits: Limits | None = None) -> SetFamily:
    """k-sets holding at least p elements of {1, ..., 2p - 1}."""
    _check_regime(n, k, allow_2k)
    if not 1 <= p <= k:
        raise ContractError(f"need 1 <= p <= k, got p={p}, k={k}")
    cap = (limits or Limits()).max_sets
    core = (1 << (2 * p - 1)) - 1
    fam = SetFamily(n, tuple(s for s in all_k_sets(n, k, cap) if (s & core).bit_count() >= p), k)
    expected = sum(binomial(2 * p - 1, i) * binomial(n - 2 * p + 1, k - i) for i in range(p, 2 * p))
    if len(fam) != expected:
        raise ConsistencyError(f"|B_{p}({n},{k})| = {len(fam)}, expected {expected}")
    return fam


def family_a(n: int, k: int, **kw) -> SetFamily:
    """k-sets meeting {1, 2, 3} in at least two elements."""
    return family_bp(n, k, 2, **kw)


def hilton_milner(n: int, k: int, *, allow_2k: bool = False,
                  limits: Limits | None = None) -> SetFamily:
    """Sets through 1 that meet {2, ..., k+1}, plus {2, ..., k+1} itself."""
    _check_regime(n, k, allow_2k)
    if k < 2:
        raise ContractError("Hilton-Milner family needs k >= 2")
    cap = (limits or Limits()).max_sets
    block = ((1 << k) - 1) << 1
    sets = [s for s in all_k_sets(n, k, cap) if (s & 1 and s & block) or s == block]
    return SetFamily(n, tuple(sets), k)


KINDS = ("star", "A", "Bp", "HM", "file")


@dataclasses.dataclass(frozen=True)
class FamilyRecipe:
    kind: str
    n: int | None = None
    k: int | None = None
    p: int | None = None
    path: str | None = None


def build_family(recipe: FamilyRecipe, *, allow_2k: bool = False,
                 limits: Limits | None = None) -> SetFamily:
    kind = recipe.kind
    if kind == "file":
        if not recipe.path:
            raise ContractError("file recipe needs a path")
        return load_family(recipe.path)
    if kind not in KINDS:
        raise ContractError(f"unknown family kind {kind!r}")
    if recipe.n is None or recipe.k is None:
        raise ContractError(f"{kind} needs n and k")
    n, k = recipe.n, recipe.k
    kw = {"allow_2k": allow_2k, "limits": limits}
    if kind == "star":
        return star(n, k, **kw)
    if kind == "A":
        return family_a(n, k, **kw)
    if kind == "HM":
        return hilton_milner(n, k, **kw)
    if recipe.p is None:
        raise ContractError("Bp needs p")
    return family_bp(n, k, recipe.p, **kw)


# ---------------------------------------------------------------------------
# closed forms

def formula_star(n: int, k: int) -> int:
    _check_regime(n, k, False)
    return binomial_tail(n - 1, k - 2)


def formula_a(n: int, k: int) -> int:
    """Seven-case count of the spectrum of A(n, k), grouped by the trace on {1, 2, 3}."""
    _check_regime(n, k, False)
    m = n - 3
    return 3 * binomial_tail(m, k - 2) + 3 * binomial_tail(m, k - 3) + binomial_tail(m, k - 4)


def formula_a_simplified(n: int, k: int) -> int:
    _check_regime(n, k, False)
    return 3 * binomial_tail(n - 2, k - 2) + binomial_tail(n - 3, k - 4)


def star_identity_sides(n: int, k: int) -> tuple[int, int]:
    """Both sides of sum C(n-1, i) = 2 sum C(n-2, i) - C(n-2, k-2), i <= k-2."""
    return binomial_tail(n - 1, k - 2), 2 * binomial_tail(n - 2, k - 2) - binomial(n - 2, k - 2)


def formula_bp(n: int, k: int, p: int) -> int:
    if not 1 <= p <= k:
        raise ContractError(f"need 1 <= p <= k, got p={p}, k={k}")
    _check_regime(n, k, False)
    core = 2 * p - 1
    rest = n - core
    low = sum(binomial(core, i) for i in range(1, p)) * binomial_tail(rest, k - p)
    high = sum(binomial(core, i) * binomial_tail(rest, k - i - 1) for i in range(p, core + 1))
    return low + high


def bound_f(n: int, k: int, ell: int) -> int:
    if not 2 <= ell <= k:
        raise ContractError(f"need 2 <= l <= k, got l={ell}, k={k}")
    return 2**ell * ell**2 * k ** (ell - 2) * binomial_tail(n, k - ell)


def level_chain(n: int, k: int, ell: int, level_count: int, basis_level_size: int) -> dict:
    """Check |I_l| <= (2^l - 1) |B^(l)| sum_{i<=k-l} C(n,i) < f(n, k, l)."""
    middle = (2**ell - 1) * basis_level_size * binomial_tail(n, k - ell)
    f = bound_f(n, k, ell)
    return {
        "level": ell,
        "count": level_count,
        "middle": middle,
        "f": f,
        "pass": level_count <= middle < f,
    }


def f_ratio_exceeds(n: int, k: int, ell: int, factor: int = 6) -> bool:
    """Exact test of f(n,k,l) > factor * f(n,k,l+1)."""
    return bound_f(n, k, ell) > factor * bound_f(n, k, ell + 1)


@dataclasses.dataclass(frozen=True)
class StarVsA:
    n: int
    k: int
    star: int
    a: int
    ratio: Fraction
    below_two_thirds: bool
    below_refined: bool
    tilde_star: int = 0
    tilde_a: int = 0

    def to_json(self) -> dict:
        # both readings of the A-versus-star comparison are reported, undecided
        return {
            "n": str(self.n),
            "k": self.k,
            "star": str(self.star),
            "A": str(self.a),
            "ratio": str(self.ratio),
            "below_two_thirds": self.below_two_thirds,
            "below_refined": self.below_refined,
            "tilde_star": str(self.tilde_star),
            "tilde_A": str(self.tilde_a),
            "A_ahead": self.a > self.star,
            "A_ahead_tilde": self.tilde_a > self.tilde_star,
        }


def compare_star_vs_a(n: int, k: int) -> StarVsA:
    """Exact |I(S_x)| / |I(A)| against 2/3 and against n / (3(n - k))."""
    if n <= 2 * k:
        raise ContractError(f"need n > 2k, got n={n}, k={k}")
    s, a = formula_star(n, k), formula_a(n, k)
    # members have size k and pairwise intersections are smaller, so the union is disjoint
    size_star = binomial(n - 1, k - 1)
    size_a = 3 * binomial(n - 3, k - 2) + binomial(n - 3, k - 3)
    return StarVsA(
        n, k, s, a, Fraction(s, a),
        below_two_thirds=3 * s < 2 * a,
        below_refined=3 * (n - k) * s < n * a,
        tilde_star=s + size_star,
        tilde_a=a + size_a,
    )
