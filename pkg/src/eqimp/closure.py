"""Post-hoc propagation of statuses through the implication graph.

Three sound rules close a partial map of decided ordered pairs:

  R1: A->B proven and B->C proven   derives A->C proven
  R2: A->B proven and A-/->C refuted derives B-/->C refuted
  R3: B->C proven and A-/->C refuted derives A-/->B refuted

R2 and R3 transport a countermodel along a proven edge: a magma satisfying A
and violating C also satisfies B (by A->B), so it separates B from C; and a
magma separating A from C cannot satisfy B, else B->C would force C.

Propagation runs as a worklist over the proven-edge graph, never rescanning
the whole map.  Derived entries record their two premise pairs and never
overwrite direct ones; a derivation contradicting an existing status raises
ConsistencyError naming the pair and both justifications.  Unsolved pairs are
simply absent from the map.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

PROVEN = "proven"
REFUTED = "refuted"

Pair = tuple[int, int]


@dataclass(frozen=True)
class StatusEntry:
    status: str  # PROVEN | REFUTED
    provenance: str  # direct method name, or closure:R1 | closure:R2 | closure:R3
    premises: tuple[Pair, Pair] | None = None

    def __post_init__(self):
        if self.status not in (PROVEN, REFUTED):
            raise ValueError(f"unknown status {self.status!r}")


StatusMap = dict[Pair, StatusEntry]


class ConsistencyError(ValueError):
    pass


def _describe(entry: StatusEntry) -> str:
    if entry.premises is None:
        return f"{entry.status} via {entry.provenance}"
    first, second = entry.premises
    return f"{entry.status} via {entry.provenance} from {first} and {second}"


def propagate(statuses: StatusMap) -> StatusMap:
    """Least fixpoint of R1-R3 over the input map; the input is not mutated.

    Iteration order is canonicalized (sorted seeds and neighbor sets), so the
    result, including provenance of derived entries, depends only on the
    map's contents, not on its insertion order."""
    result: StatusMap = dict(statuses)
    proven_out: dict[int, set[int]] = {}
    proven_in: dict[int, set[int]] = {}
    refuted_out: dict[int, set[int]] = {}
    refuted_in: dict[int, set[int]] = {}

    queue: deque[tuple[Pair, str]] = deque()
    for pair in sorted(statuses):
        queue.append((pair, statuses[pair].status))

    def derive(pair: Pair, status: str, rule: str, premises: tuple[Pair, Pair]):
        if pair[0] == pair[1]:
            # reflexive facts are trivial and never recorded
            return
        entry = StatusEntry(status, f"closure:{rule}", premises)
        existing = result.get(pair)
        if existing is not None:
            if existing.status != status:
                raise ConsistencyError(
                    f"pair {pair} is {_describe(existing)} but also derives as "
                    f"{_describe(entry)}"
                )
            return
        result[pair] = entry
        queue.append((pair, status))

    while queue:
        (a, b), status = queue.popleft()
        if status == PROVEN:
            proven_out.setdefault(a, set()).add(b)
            proven_in.setdefault(b, set()).add(a)
            # R1, with (a,b) as either premise
            for c in sorted(proven_out.get(b, ())):
                derive((a, c), PROVEN, "R1", ((a, b), (b, c)))
            for z in sorted(proven_in.get(a, ())):
                derive((z, b), PROVEN, "R1", ((z, a), (a, b)))
            # R2: (a,b) proven, (a,c) refuted  =>  (b,c) refuted
            for c in sorted(refuted_out.get(a, ())):
                derive((b, c), REFUTED, "R2", ((a, b), (a, c)))
            # R3: (a,b) proven, (z,b) refuted  =>  (z,a) refuted
            for z in sorted(refuted_in.get(b, ())):
                derive((z, a), REFUTED, "R3", ((a, b), (z, b)))
        else:
            refuted_out.setdefault(a, set()).add(b)
            refuted_in.setdefault(b, set()).add(a)
            # here (a,b) is the refuted premise A-/->C with A=a, C=b
            for mid in sorted(proven_out.get(a, ())):
                derive((mid, b), REFUTED, "R2", ((a, mid), (a, b)))
            for mid in sorted(proven_in.get(b, ())):
                derive((a, mid), REFUTED, "R3", ((mid, b), (a, b)))
    return result


def derived_count(before: StatusMap, after: StatusMap) -> int:
    """Pairs undecided in before and decided in after."""
    return sum(1 for pair in after if pair not in before)
