import itertools
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Tuple

from SkewLab.constants.volumes import MAX_NONCROSSING_N, MAX_PAIR_PARTITION_K
from SkewLab.exceptions import RejectedInputException

BLOCK_REGEX = re.compile(r"\{\s*(\d+)\s*,\s*(\d+)\s*\}")


@dataclass(frozen=True)
class PairPartition:
    """
    A partition of {1, ..., k} into blocks of two elements.

    Blocks are stored as (i, j) tuples with i < j, ordered by their smaller element, so two
    partitions compare equal exactly when they have the same blocks.
    """

    k: int
    blocks: Tuple[Tuple[int, int], ...]
    _mate: Dict[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        validate_ground_set(self.k)
        blocks = []
        for block in self.blocks:
            if len(block) != 2:
                raise RejectedInputException(
                    "Every block must have exactly two elements, got {}".format(block)
                )
            i, j = sorted(int(b) for b in block)
            blocks.append((i, j))
        blocks.sort()

        elements = [e for block in blocks for e in block]
        if sorted(elements) != list(range(1, self.k + 1)):
            raise RejectedInputException(
                "Blocks must be disjoint and cover {{1,...,{}}}".format(self.k)
            )

        mate = {}
        for i, j in blocks:
            mate[i] = j
            mate[j] = i
        object.__setattr__(self, "blocks", tuple(blocks))
        object.__setattr__(self, "_mate", mate)

    def mate(self, i):
        return self._mate[i]

    def __str__(self):
        return format_partition(self)


@dataclass(frozen=True)
class SetPartition:
    n: int
    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        blocks = sorted(tuple(sorted(block)) for block in self.blocks)
        if any(len(block) == 0 for block in blocks):
            raise RejectedInputException("Blocks must be nonempty")
        elements = [e for block in blocks for e in block]
        if sorted(elements) != list(range(1, self.n + 1)):
            raise RejectedInputException(
                "Blocks must be disjoint and cover {{1,...,{}}}".format(self.n)
            )
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def block_sizes(self):
        return tuple(sorted(len(block) for block in self.blocks))


def validate_ground_set(k):
    if isinstance(k, bool) or not isinstance(k, int):
        raise RejectedInputException("k must be an integer, got {!r}".format(k))
    if k < 2:
        raise RejectedInputException("k must be a positive even integer, got {}".format(k))
    if k % 2:
        raise RejectedInputException("k must be even, got {}".format(k))


def _pairings(elements):
    if not elements:
        yield ()
        return
    first, rest = elements[0], elements[1:]
    for index, partner in enumerate(rest):
        remaining = rest[:index] + rest[index + 1 :]
        for tail in _pairings(remaining):
            yield ((first, partner),) + tail


@lru_cache(maxsize=None)
def _pair_partitions(k):
    return tuple(
        PairPartition(k=k, blocks=blocks)
        for blocks in _pairings(tuple(range(1, k + 1)))
    )


def enumerate_pair_partitions(k) -> List[PairPartition]:
    """
    All pair partitions of {1,...,k}, each exactly once.

    The order is canonical: 1 is paired with 2, 3, ..., k in turn and the remaining elements
    are paired recursively the same way.
    """
    validate_ground_set(k)
    if k > MAX_PAIR_PARTITION_K:
        raise RejectedInputException(
            "k = {} exceeds the enumeration cap of {}".format(k, MAX_PAIR_PARTITION_K)
        )
    return list(_pair_partitions(k))


def is_crossing(p: PairPartition) -> bool:
    for (i, l), (j, m) in itertools.combinations(p.blocks, 2):
        # blocks are ordered by smaller element, so i < j
        if i < j < l < m:
            return True
    return False


def count_noncrossing(k) -> int:
    return sum(1 for p in enumerate_pair_partitions(k) if not is_crossing(p))


def restriction_is_pair_partition(p: PairPartition, interval: Tuple[int, int]) -> bool:
    """
    Whether p restricted to the inclusive interval {a..b} is itself a pair partition.

    An empty interval (a = b + 1) is a pair partition of the empty set.
    """
    a, b = interval
    if a > b:
        return True
    if a < 1 or b > p.k:
        raise RejectedInputException(
            "Interval {{{}..{}}} is outside {{1..{}}}".format(a, b, p.k)
        )
    for i, j in p.blocks:
        if (a <= i <= b) != (a <= j <= b):
            return False
    return True


def height(p: PairPartition) -> int:
    return sum(
        1
        for i, j in p.blocks
        if j == i + 1 or restriction_is_pair_partition(p, (i + 1, j - 1))
    )


def pair_partitions_by_height(k) -> Dict[int, List[PairPartition]]:
    groups = defaultdict(list)
    for p in enumerate_pair_partitions(k):
        groups[height(p)].append(p)
    return dict(groups)


def reflect(p: PairPartition) -> PairPartition:
    """The image of p under i -> k + 1 - i."""
    return PairPartition(
        k=p.k, blocks=tuple((p.k + 1 - j, p.k + 1 - i) for i, j in p.blocks)
    )


def format_partition(p: PairPartition) -> str:
    return "".join("{{{},{}}}".format(i, j) for i, j in p.blocks)


def parse_partition(text, k=None) -> PairPartition:
    """Parse the "{1,4}{2,3}" form. k defaults to the largest element."""
    stripped = BLOCK_REGEX.sub("", text).strip()
    blocks = [(int(i), int(j)) for i, j in BLOCK_REGEX.findall(text)]
    if stripped or not blocks:
        raise RejectedInputException("Malformed partition {!r}".format(text))
    if k is None:
        k = max(max(block) for block in blocks)
    return PairPartition(k=k, blocks=tuple(blocks))


@lru_cache(maxsize=None)
def _noncrossing(elements):
    if not elements:
        return ((),)
    first, rest = elements[0], elements[1:]
    found = []
    for size in range(len(rest) + 1):
        for chosen in itertools.combinations(range(len(rest)), size):
            block = (first,) + tuple(rest[c] for c in chosen)
            # the block cuts the rest into independent gaps
            bounds = (-1,) + chosen + (len(rest),)
            gaps = [rest[lo + 1 : hi] for lo, hi in zip(bounds, bounds[1:])]
            for parts in itertools.product(*(_noncrossing(gap) for gap in gaps)):
                found.append((block,) + tuple(b for part in parts for b in part))
    return tuple(found)


@lru_cache(maxsize=None)
def _noncrossing_set_partitions(n):
    return tuple(
        SetPartition(n=n, blocks=blocks) for blocks in _noncrossing(tuple(range(1, n + 1)))
    )


def enumerate_noncrossing_set_partitions(n) -> List[SetPartition]:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise RejectedInputException("n must be a positive integer, got {!r}".format(n))
    if n > MAX_NONCROSSING_N:
        raise RejectedInputException(
            "n = {} exceeds the enumeration cap of {}".format(n, MAX_NONCROSSING_N)
        )
    return list(_noncrossing_set_partitions(n))


@lru_cache(maxsize=None)
def noncrossing_block_types(n) -> Dict[Tuple[int, ...], int]:
    """Multiplicity of each multiset of block sizes among the non-crossing partitions of n."""
    return dict(
        Counter(sigma.block_sizes for sigma in enumerate_noncrossing_set_partitions(n))
    )
