from __future__ import annotations

import dataclasses
import os

from .errors import ContractError

ENV_VAR = "SETSPECTRA_BUDGET"


@dataclasses.dataclass(frozen=True)
class Limits:
    """Enumeration caps. Every exhaustive routine takes one of these."""

    max_sets: int = 5_000_000          # k-sets scanned when building a family
    max_transversals: int = 1_000_000  # output size of transversals()
    pair_budget: int = 10**8           # |F|^2 bound for intersection_spectrum
    sunflower_nodes: int = 2_000_000   # backtracking nodes in find_sunflower
    canonical_max_n: int = 12          # ground size for exact canonical_form
    search_max_vertices: int = 100     # C(n, k) guard for exhaustive search
    search_max_cliques: int = 10**6    # maximal families visited before giving up
    branching_max_sequences: int = 10**6

    def replace(self, **changes) -> Limits:
        return dataclasses.replace(self, **changes)


def parse_limits(text: str, base: Limits | None = None) -> Limits:
    """Parse ``"key=value,key=value"`` into a Limits.

    A bare integer sets every cap except ``canonical_max_n``.
    """
    base = base or Limits()
    text = text.strip()
    if not text:
        return base
    names = {f.name for f in dataclasses.fields(Limits)}
    if text.isdigit():
        value = int(text)
        return base.replace(**{name: value for name in names if name != "canonical_max_n"})
    changes = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise ContractError(f"bad budget entry {item!r}; known keys: {sorted(names)}")
        try:
            changes[key] = int(value)
        except ValueError:
            raise ContractError(f"budget value for {key} is not an integer: {value!r}") from None
    return base.replace(**changes)


def default_limits() -> Limits:
    return parse_limits(os.environ.get(ENV_VAR, ""))
