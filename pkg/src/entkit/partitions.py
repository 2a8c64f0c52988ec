"""Set-partition structure of n-way separable decompositions.

A separable decomposition of n parties is a sum with one term per set
partition of {0..n-1} into at least two blocks: singleton blocks carry
single-party states, larger blocks carry internally entangled states.
The single-block partition is excluded (it is the fully entangled case
the decomposition is tested against). Terms are canonically encoded as
restricted growth strings and enumerated in lexicographic RGS order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, TextIO

# Enumeration materializes one object per term, so it is capped where the
# term count (Bell(n) - 1) stays desk-sized; pure counting has a looser cap.
ENUMERATION_LIMIT = 12
COUNT_LIMIT = 64
BRUTE_FORCE_LIMIT = 10


def bell_number(n: int) -> int:
    """Exact n-th Bell number via the Bell triangle recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


def term_count(n: int) -> int:
    """Number of terms in the n-party separable decomposition: Bell(n) - 1."""
    if n < 2:
        raise ValueError("a separable decomposition needs at least 2 parties")
    return bell_number(n) - 1


class PartitionTerm:
    """One decomposition term: a partition of the parties into >= 2 blocks.

    Canonical encoding is the restricted growth string (RGS): ``rgs[i]`` is
    the block label of party ``i``, labels assigned in order of first use
    (so ``rgs[0] == 0`` and each entry exceeds the running maximum by at
    most one). Blocks are recovered on demand, ordered by minimum element
    with parties ascending inside each block.
    """

    __slots__ = ("rgs",)

    def __init__(self, rgs: Sequence[int]):
        rgs = tuple(int(v) for v in rgs)
        if not rgs:
            raise ValueError("rgs must be nonempty")
        if rgs[0] != 0:
            raise ValueError("rgs must start with 0")
        running_max = 0
        for i in range(1, len(rgs)):
            v = rgs[i]
            if v < 0 or v > running_max + 1:
                raise ValueError(f"rgs[{i}]={v} violates restricted growth")
            if v > running_max:
                running_max = v
        if running_max == 0:
            raise ValueError("single-block partition is excluded")
        self.rgs = rgs

    @staticmethod
    def _trusted(rgs: tuple) -> "PartitionTerm":
        # Fast path for internally generated, already-valid strings.
        term = PartitionTerm.__new__(PartitionTerm)
        term.rgs = rgs
        return term

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "PartitionTerm":
        """Build a term from party blocks; they must partition {0..n-1}."""
        blocks = [sorted(int(p) for p in block) for block in blocks]
        if any(not block for block in blocks):
            raise ValueError("blocks must be nonempty")
        blocks.sort(key=lambda block: block[0])
        parties = [p for block in blocks for p in block]
        n = len(parties)
        if sorted(parties) != list(range(n)):
            raise ValueError("blocks must partition {0..n-1}")
        rgs = [0] * n
        for label, block in enumerate(blocks):
            for p in block:
                rgs[p] = label
        return cls(rgs)

    @property
    def n(self) -> int:
        return len(self.rgs)

    @property
    def blocks(self) -> tuple:
        """Blocks ordered by minimum element, parties ascending."""
        groups: List[List[int]] = [[] for _ in range(max(self.rgs) + 1)]
        for party, label in enumerate(self.rgs):
            groups[label].append(party)
        return tuple(tuple(g) for g in groups)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "rgs": list(self.rgs),
            "blocks": [list(b) for b in self.blocks],
        }

    def __eq__(self, other) -> bool:
        return isinstance(other, PartitionTerm) and self.rgs == other.rgs

    def __hash__(self) -> int:
        return hash(self.rgs)

    def __lt__(self, other: "PartitionTerm") -> bool:
        return self.rgs < other.rgs

    def __repr__(self) -> str:
        return f"PartitionTerm(rgs={self.rgs!r})"


@dataclass(frozen=True)
class DisentangledForm:
    """All terms of the n-party separable decomposition, in RGS order."""

    n: int
    terms: tuple

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("form needs at least 2 parties")
        expected = term_count(self.n)
        if len(self.terms) != expected:
            raise ValueError(
                f"form for n={self.n} needs {expected} terms, got {len(self.terms)}"
            )
        prev = None
        for term in self.terms:
            if term.n != self.n:
                raise ValueError("term party count mismatch")
            if prev is not None and prev.rgs >= term.rgs:
                raise ValueError("terms must be strictly increasing in RGS order")
            prev = term


@dataclass(frozen=True)
class GrowthRow:
    """Term count of one n against the 2^n reference curve."""

    n: int
    bell: int
    term_count: int
    two_pow_n: int
    exceeds: bool


def _iter_rgs(n: int) -> Iterator[list]:
    """All restricted growth strings of length n, lexicographically.

    Yields an internal buffer; callers must copy before storing.
    """
    rgs = [0] * n
    maxes = [0] * n  # maxes[i] = max(rgs[:i+1])
    while True:
        yield rgs
        i = n - 1
        while i > 0 and rgs[i] > maxes[i - 1]:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        maxes[i] = max(maxes[i - 1], rgs[i])
        for j in range(i + 1, n):
            rgs[j] = 0
            maxes[j] = maxes[j - 1]


def iter_terms(n: int) -> Iterator[PartitionTerm]:
    """Stream the decomposition terms for n parties in canonical order.

    Constant memory; preferred over enumerate_terms() for n >= 11.
    """
    if not 2 <= n <= ENUMERATION_LIMIT:
        raise ValueError(f"enumeration supports 2 <= n <= {ENUMERATION_LIMIT}")
    gen = _iter_rgs(n)
    next(gen)  # skip the all-zeros string: the excluded single-block partition
    for rgs in gen:
        yield PartitionTerm._trusted(tuple(rgs))


def enumerate_terms(n: int) -> DisentangledForm:
    """Materialize the full decomposition for n parties."""
    return DisentangledForm(n=n, terms=tuple(iter_terms(n)))


def brute_force_partitions(n: int) -> List[List[List[int]]]:
    """All set partitions of {0..n-1} by element-to-block assignment.

    Independent of the RGS machinery; serves as the enumeration oracle.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force supports n <= {BRUTE_FORCE_LIMIT}")
    partitions: List[List[List[int]]] = [[]]
    for element in range(n):
        grown: List[List[List[int]]] = []
        for partition in partitions:
            for i in range(len(partition)):
                grown.append(
                    partition[:i] + [partition[i] + [element]] + partition[i + 1 :]
                )
            grown.append(partition + [[element]])
        partitions = grown
    return partitions


def growth_report(n_max: int) -> List[GrowthRow]:
    """Term count versus 2^n for every n in 2..n_max."""
    if not 2 <= n_max <= COUNT_LIMIT:
        raise ValueError(f"growth report supports 2 <= n_max <= {COUNT_LIMIT}")
    rows = []
    for n in range(2, n_max + 1):
        bell = bell_number(n)
        count = bell - 1
        two_pow = 1 << n
        rows.append(
            GrowthRow(
                n=n,
                bell=bell,
                term_count=count,
                two_pow_n=two_pow,
                exceeds=count > two_pow,
            )
        )
    return rows


GROWTH_CSV_HEADER = ["n", "bell", "term_count", "two_pow_n", "exceeds"]


def write_growth_csv(rows: Iterable[GrowthRow], fp: TextIO) -> None:
    """Write growth rows as CSV: integers in decimal, booleans true/false."""
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(GROWTH_CSV_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.n,
                row.bell,
                row.term_count,
                row.two_pow_n,
                "true" if row.exceeds else "false",
            ]
        )
