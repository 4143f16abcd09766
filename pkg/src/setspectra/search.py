"""Weighted branching over the basis, exhaustive maximizer search, and n = 2k experiments."""

from __future__ import annotations

import dataclasses
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .errors import CapacityError, ConsistencyError, ContractError
from .family import SetFamily, all_k_sets, binomial, canonical_form, elements_of, format_set
from .limits import Limits
from .spectrum import formula_bp, intersection_spectrum
from .transversal import TransversalBasis, covering_number


# ---------------------------------------------------------------------------
# branching process

@dataclasses.dataclass(frozen=True)
class WeightedSequence:
    elements: tuple[int, ...]
    weight: Fraction

    @property
    def underlying(self) -> int:
        m = 0
        for x in self.elements:
            m |= 1 << (x - 1)
        return m

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "weight": str(self.weight)}


@dataclasses.dataclass(frozen=True)
class BranchingOutcome:
    final_sequences: tuple[WeightedSequence, ...]
    covered: dict
    level_bound_checks: tuple[dict, ...]
    total_weight: Fraction
    t: int
    ell: int
    k: int

    @property
    def passed(self) -> bool:
        return self.total_weight == 1 and all(c["pass"] for c in self.level_bound_checks)

    def to_json(self) -> dict:
        return {
            "total_weight": str(self.total_weight),
            "t": self.t,
            "l": self.ell,
            "k": self.k,
            "final_sequences": len(self.final_sequences),
            "eq22_checks": [
                {key: (str(v) if isinstance(v, Fraction) else v) for key, v in c.items()}
                for c in self.level_bound_checks
            ],
            "passed": self.passed,
        }


def _pick_member(sets, avoid: int, max_size: int | None = None) -> int | None:
    # smallest size first, colex among equals
    best = None
    for b in sets:
        if b & avoid or (max_size is not None and b.bit_count() > max_size):
            continue
        if best is None or (b.bit_count(), b) < (best.bit_count(), best):
            best = b
    return best


def branching_process(basis: TransversalBasis, ell: int, k: int | None = None,
                      max_sequences: int = Limits.branching_max_sequences) -> BranchingOutcome:
    """Run the weight-splitting process over ``basis`` and certify |B^(l)|.

    Start from a minimum member B1 (colex-least), giving each (y) with
    y in B1 weight 1/t. The first split of (y) uses a member of size <= l
    avoiding y; later splits take the oldest live sequence missing some
    member B and replace it by its |B| one-element extensions, each with an
    equal share of the weight. Every choice takes the smallest such member,
    colex-least among ties.

    The outcome records, for every level l' from l to k, whether each
    member of that level is the underlying set of some final sequence, the
    smallest weight among final sequences of length l', and the resulting
    bound on the level size.
    """
    k = basis.k if k is None else k
    sets = basis.basis.sets
    t = basis.t
    if t < 2:
        raise ContractError(f"branching needs t >= 2, basis has t = {t}")
    if not 2 <= ell <= k:
        raise ContractError(f"need 2 <= l <= k, got l={ell}, k={k}")
    if covering_number(basis.upto(ell)) < 2:
        raise ContractError(f"members of size <= {ell} have covering number below 2")

    b1 = min((b for b in sets if b.bit_count() == t))
    live: deque[tuple[tuple[int, ...], int, Fraction]] = deque()
    for y in elements_of(b1):
        live.append(((y,), 1 << (y - 1), Fraction(1, t)))

    final: list[WeightedSequence] = []
    created = len(live)
    while live:
        seq, hat, w = live.popleft()
        if len(seq) == 1:
            chosen = _pick_member(sets, hat, max_size=ell)
            if chosen is None:
                raise ConsistencyError(f"no member of size <= {ell} avoids {seq[0]}")
        else:
            chosen = _pick_member(sets, hat)
        if chosen is None:
            final.append(WeightedSequence(seq, w))
            continue
        share = w / chosen.bit_count()
        for y in elements_of(chosen):
            live.append((seq + (y,), hat | (1 << (y - 1)), share))
        created += chosen.bit_count()
        if created > max_sequences:
            raise CapacityError(f"branching created more than {max_sequences} sequences",
                                partial=created)

    total = sum((s.weight for s in final), Fraction(0))
    if total != 1:
        raise ConsistencyError(f"final weights sum to {total}, not 1")
    for s in final:
        hat = s.underlying
        missed = next((b for b in sets if not b & hat), None)
        if missed is not None:
            raise ConsistencyError(f"final sequence {s.elements} misses {format_set(missed)}")

    by_hat: dict[int, WeightedSequence] = {}
    for s in final:
        by_hat.setdefault(s.underlying, s)
    covered = {b: by_hat[b] for b in sets if b in by_hat}
    uncovered = [b for b in sets if b not in by_hat]
    if uncovered:
        raise ConsistencyError(
            "members not realized by any sequence: " + ", ".join(map(format_set, uncovered))
        )

    checks = []
    for lev in range(ell, k + 1):
        members = [b for b in sets if b.bit_count() == lev]
        bound = t * lev * k ** (lev - 2)
        floor = Fraction(1, t * ell * k ** (lev - 2))
        weights = [s.weight for s in final if len(s.elements) == lev]
        lightest = min(weights) if weights else None
        # each member owns a distinct sequence of weight >= floor, and all weights sum to 1
        certified = sum((covered[b].weight for b in members), Fraction(0))
        checks.append({
            "level": lev,
            "size": len(members),
            "bound": bound,
            "lightest": lightest,
            "weight_floor": floor,
            "certified_weight": certified,
            "pass": (len(members) <= bound
                     and (lightest is None or lightest >= floor)
                     and certified <= 1),
        })
    for s in final:
        if len(s.elements) >= 2 and s.weight < Fraction(1, t * ell * k ** (len(s.elements) - 2)):
            raise ConsistencyError(f"sequence {s.elements} has weight {s.weight} below its floor")
    return BranchingOutcome(tuple(final), covered, tuple(checks), total, t, ell, k)


# ---------------------------------------------------------------------------
# exhaustive search

@dataclasses.dataclass(frozen=True)
class SearchResult:
    best_count: int
    witnesses: tuple[SetFamily, ...]
    families_enumerated: int
    iso_classes: int
    exhaustive: bool
    class_counts: tuple[tuple[SetFamily, int], ...] = ()

    def to_json(self) -> dict:
        return {
            "best": str(self.best_count),
            "witnesses": [w.to_json() for w in self.witnesses],
            "families_enumerated": self.families_enumerated,
            "iso_classes": self.iso_classes,
            "exhaustive": self.exhaustive,
        }


class _Stop(Exception):
    pass


def _max_cliques(adj: list[int], r: int, p: int, x: int, emit) -> None:
    """Bron-Kerbosch with Tomita pivoting over int bitsets."""
    if not p and not x:
        emit(r)
        return
    px = p | x
    pivot, most = -1, -1
    while px:
        low = px & -px
        u = low.bit_length() - 1
        c = (p & adj[u]).bit_count()
        if c > most:
            pivot, most = u, c
        px ^= low
    cand = p & ~adj[pivot]
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        _max_cliques(adj, r | low, p & adj[v], x & adj[v], emit)
        p &= ~low
        x |= low
        cand ^= low


def _explore_branch(args):
    n, k, vertices, adj, r, p, x, cap, max_n = args
    found = []

    def emit(clique):
        if len(found) >= cap:
            raise _Stop
        masks = []
        c = clique
        while c:
            low = c & -c
            masks.append(vertices[low.bit_length() - 1])
            c ^= low
        fam = SetFamily(n, tuple(masks), k)
        count = intersection_spectrum(fam).count
        found.append((canonical_form(fam, max_n=max_n).sets, count))

    try:
        _max_cliques(adj, r, p, x, emit)
        return found, False
    except _Stop:
        return found, True


def exhaustive_max_spectrum(n: int, k: int, limits: Limits | None = None,
                            workers: int = 1) -> SearchResult:
    """Largest |I(F)| over all maximal intersecting k-uniform families on [n].

    Maximal families are the maximal cliques of the disjointness complement
    graph on the k-sets, enumerated with pivoting; each one is reduced to its
    canonical form so witnesses are reported once per isomorphism class. Only
    maximal families need visiting because the spectrum grows with the family.
    The top-level branches are independent and may be spread over
    ``workers`` processes; results are merged in branch order, so the outcome
    does not depend on the worker count.
    """
    limits = limits or Limits()
    if n <= 2 * k:
        raise ContractError(f"need n > 2k, got n={n}, k={k}")
    if binomial(n, k) > limits.search_max_vertices:
        raise CapacityError(
            f"C({n},{k}) = {binomial(n, k)} exceeds the search guard {limits.search_max_vertices}"
        )
    vertices = all_k_sets(n, k)
    m = len(vertices)
    adj = [0] * m
    for i, j in combinations(range(m), 2):
        if vertices[i] & vertices[j]:
            adj[i] |= 1 << j
            adj[j] |= 1 << i

    # split the first level of the recursion into independent branches
    p, x = (1 << m) - 1, 0
    pivot = max(range(m), key=lambda u: ((p & adj[u]).bit_count(), -u))
    cand = p & ~adj[pivot]
    branches = []
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        branches.append((low, p & adj[v], x & adj[v]))
        p &= ~low
        x |= low
        cand ^= low

    cap = limits.search_max_cliques
    base = (n, k, vertices, adj)
    if workers > 1:
        jobs = [base + (r, bp, bx, cap, limits.canonical_max_n) for r, bp, bx in branches]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_explore_branch, jobs))
    else:
        outputs = []
        seen = 0
        for r, bp, bx in branches:
            found, stopped = _explore_branch(base + (r, bp, bx, cap - seen, limits.canonical_max_n))
            outputs.append((found, stopped))
            seen += len(found)
            if stopped:
                break

    records = [rec for found, _ in outputs for rec in found]
    exhaustive = len(records) <= cap and not any(stopped for _, stopped in outputs)
    records = records[:cap]

    classes: dict[tuple[int, ...], int] = {}
    counts: dict[tuple[int, ...], int] = {}
    for sets, count in records:
        classes[sets] = classes.get(sets, 0) + 1
        counts[sets] = count
    best = max(counts.values(), default=0)
    ordered = sorted(classes)
    witnesses = tuple(SetFamily(n, s, k) for s in ordered if counts[s] == best)
    return SearchResult(
        best_count=best,
        witnesses=witnesses,
        families_enumerated=len(records),
        iso_classes=len(classes),
        exhaustive=exhaustive,
        class_counts=tuple((SetFamily(n, s, k), counts[s]) for s in ordered),
    )


# ---------------------------------------------------------------------------
# crossover scan

@dataclasses.dataclass(frozen=True)
class ScanResult:
    k: int
    p: int
    q: int
    rows: tuple[tuple[int, int, int, int], ...]  # (n, |I(B_p)|, |I(B_q)|, sign)
    flips: tuple[int, ...]

    @property
    def first_flip(self) -> int | None:
        return self.flips[0] if self.flips else None

    def to_json(self) -> dict:
        return {
            "k": self.k, "p": self.p, "q": self.q,
            "first_flip": self.first_flip,
            "flips": list(self.flips),
            "rows": [
                {"n": n, "Ip": str(a), "Iq": str(b), "sign": s} for n, a, b, s in self.rows
            ],
        }


def crossover_scan(k: int, p: int, q: int, n_values: Iterable[int]) -> ScanResult:
    """Compare |I(B_p(n,k))| with |I(B_q(n,k))| over ``n_values``.

    ``sign`` is +1 when B_p wins. ``flips`` lists every n whose sign differs
    from the previous row's.
    """
    if not (1 <= p <= k and 1 <= q <= k):
        raise ContractError(f"need 1 <= p, q <= k, got p={p}, q={q}, k={k}")
    rows = []
    flips = []
    for n in n_values:
        if n <= 2 * k:
            raise ContractError(f"scan needs n > 2k, got n={n}")
        a, b = formula_bp(n, k, p), formula_bp(n, k, q)
        sign = (a > b) - (a < b)
        if rows and sign != rows[-1][3]:
            flips.append(n)
        rows.append((n, a, b, sign))
    return ScanResult(k, p, q, tuple(rows), tuple(flips))


# ---------------------------------------------------------------------------
# n = 2k constructions

MASK64 = (1 << 64) - 1


def splitmix64(seed: int):
    """SplitMix64 stream; fixed so that seeds reproduce across platforms."""
    state = seed & MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        yield z ^ (z >> 31)


def random_pair_family(k: int, seed: int, limits: Limits | None = None) -> SetFamily:
    """One k-set from each complementary pair of [2k], picked by a seeded coin.

    Pairs are visited in colex order of the member containing 1; the top bit
    of the next SplitMix64 output keeps that member (1) or its complement (0).
    """
    if k < 2:
        raise ContractError("need k >= 2")
    n = 2 * k
    cap = (limits or Limits()).max_sets
    full = (1 << n) - 1
    coins = splitmix64(seed)
    chosen = []
    for a in all_k_sets(n, k, cap):
        if not a & 1:
            continue
        chosen.append(a if next(coins) >> 63 else full ^ a)
    return SetFamily(n, tuple(chosen), k)


def almost_shatters(family: SetFamily | Iterable[int], x: int,
                    max_missing: int = 10) -> tuple[bool, list[int]]:
    """Whether every proper non-empty subset of ``x`` is some F & x.

    Returns the verdict and up to ``max_missing`` unrealized subsets, colex first.
    """
    realized = {f & x for f in family}
    missing = []
    total_missing = 0
    sub = (x - 1) & x
    subsets = []
    while sub:
        subsets.append(sub)
        sub = (sub - 1) & x
    for s in sorted(subsets):
        if s not in realized:
            total_missing += 1
            if len(missing) < max_missing:
                missing.append(s)
    return total_missing == 0, missing


def shattering_profile(family: SetFamily, size: int) -> tuple[int, int]:
    """(number of ``size``-subsets almost shattered, number of ``size``-subsets)."""
    targets = all_k_sets(family.n, size)
    hit = sum(1 for x in targets if almost_shatters(family.sets, x, max_missing=0)[0])
    return hit, len(targets)


def spectrum_completeness(family: SetFamily) -> dict:
    """How many s-subsets, 1 <= s < k, occur as pairwise intersections.

    The realized total is compared with both sum_{i=1}^{k-1} C(n, i) and
    sum_{i=0}^{k-1} C(n, i); the latter also counts the empty set, which an
    intersecting family never realizes.
    """
    if family.k is None:
        raise ContractError("family must be k-uniform")
    n, k = family.n, family.k
    spectrum = intersection_spectrum(family).distinct_intersections.sets
    per_size = {}
    for s in range(1, k):
        realized = sum(1 for i in spectrum if i.bit_count() == s)
        per_size[s] = {
            "realized": realized,
            "possible": binomial(n, s),
            "fraction": Fraction(realized, binomial(n, s)),
        }
    realized_total = sum(v["realized"] for v in per_size.values())
    without_empty = sum(binomial(n, i) for i in range(1, k))
    with_empty = sum(binomial(n, i) for i in range(0, k))
    return {
        "n": n,
        "k": k,
        "per_size": per_size,
        "realized_total": realized_total,
        "spectrum_count": len(spectrum),
        "sum_from_1": without_empty,
        "sum_from_0": with_empty,
        "complete_from_1": realized_total == without_empty,
        "complete_from_0": len(spectrum) == with_empty,
    }


def completeness_to_json(report: dict) -> dict:
    out = dict(report)
    out["per_size"] = {
        str(s): {"realized": v["realized"], "possible": str(v["possible"]),
                 "fraction": str(v["fraction"])}
        for s, v in report["per_size"].items()
    }
    for key in ("sum_from_1", "sum_from_0"):
        out[key] = str(report[key])
    return out
