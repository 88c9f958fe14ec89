"""Symbolic K-classes over (S^2)^k and a sound three-valued comparison oracle.

A class is ``L_B (+) eps^t``: one pulled-back tautological line bundle for each
coordinate in the Bott set ``B``, plus a trivial bundle of rank ``t``.

The oracle answers the Murray-von Neumann question "does ``e`` embed in ``f``?"
(the same as Cuntz subequivalence for projections in the stably finite
setting). It only says Yes or No when one of two rules certifies the answer.

* Yes (componentwise embedding): shared Bott coordinates match, each leftover
  line bundle of ``e`` goes into a trivial rank-2 block of ``f``, and trivial
  goes into trivial.
* No: either the rank of ``e`` is larger, or ``f`` is trivial and too small.
  ``L^{x k}`` needs a trivial bundle of rank at least ``2k`` (Villadsen). The
  complement of ``L^{x k} (+) eps^a`` in ``eps^m`` has total Chern class
  ``prod (1 - x_i)``, and its top class is nonzero, so ``m >= a + 2k``.

Everything else is Unknown.

Bott sets at late stages have about 10^19 coordinates, so :class:`IndexSet`
stores merged closed intervals rather than explicit members.
"""

import bisect
import json
from dataclasses import dataclass, field

from .exceptions import BadBlock, DimensionMismatch, OverlappingBott

__all__ = [
    "IndexSet",
    "KClass",
    "CompareVerdict",
    "YES",
    "NO",
    "UNKNOWN",
    "direct_sum",
    "min_dominating_trivial_rank",
    "compare",
    "yes_rule",
    "no_rule",
    "pullback_block",
    "pullback_blocks",
    "point_evaluation",
]

YES = "Yes"
NO = "No"
UNKNOWN = "Unknown"

# Largest Bott set emitted as an explicit index list in JSON.
EXPLICIT_JSON_LIMIT = 1 << 16


class IndexSet:
    """Immutable set of positive integers stored as sorted disjoint intervals."""

    __slots__ = ("_iv", "_size")

    def __init__(self, intervals=()):
        merged = []
        for lo, hi in sorted((int(a), int(b)) for a, b in intervals):
            if lo > hi:
                continue
            if merged and lo <= merged[-1][1] + 1:
                if hi > merged[-1][1]:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        self._iv = tuple((lo, hi) for lo, hi in merged)
        self._size = sum(hi - lo + 1 for lo, hi in self._iv)

    @classmethod
    def of(cls, indices):
        return cls((i, i) for i in indices)

    @classmethod
    def span(cls, lo, hi):
        """The block ``{lo, ..., hi}`` (empty when ``hi < lo``)."""
        return cls([(lo, hi)])

    @property
    def intervals(self):
        return self._iv

    @property
    def size(self):
        """Cardinality; unlike ``len()`` this is not capped at ``sys.maxsize``."""
        return self._size

    def __len__(self):
        return self._size

    def __bool__(self):
        return self._size > 0

    def __iter__(self):
        for lo, hi in self._iv:
            yield from range(lo, hi + 1)

    def __contains__(self, i):
        k = bisect.bisect_right(self._iv, (i, float("inf"))) - 1
        return k >= 0 and self._iv[k][0] <= i <= self._iv[k][1]

    def __eq__(self, other):
        if isinstance(other, IndexSet):
            return self._iv == other._iv
        if isinstance(other, (set, frozenset)):
            return self == IndexSet.of(other)
        return NotImplemented

    def __hash__(self):
        return hash(self._iv)

    def __repr__(self):
        if self._size <= 8:
            return "{" + ", ".join(map(str, self)) + "}"
        return "IndexSet(" + ", ".join(f"{lo}..{hi}" for lo, hi in self._iv) + ")"

    def min(self):
        return self._iv[0][0]

    def max(self):
        return self._iv[-1][1]

    def union(self, other):
        return IndexSet(self._iv + other._iv)

    __or__ = union

    def intersection(self, other):
        out = []
        i = j = 0
        a, b = self._iv, other._iv
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IndexSet(out)

    __and__ = intersection

    def difference(self, other):
        out = []
        for lo, hi in self._iv:
            cur = lo
            for olo, ohi in other._iv:
                if ohi < cur or olo > hi:
                    continue
                if olo > cur:
                    out.append((cur, olo - 1))
                cur = max(cur, ohi + 1)
                if cur > hi:
                    break
            if cur <= hi:
                out.append((cur, hi))
        return IndexSet(out)

    __sub__ = difference

    def isdisjoint(self, other):
        return not self.intersection(other)

    def issubset(self, other):
        return not self.difference(other)

    def shift(self, offset):
        return IndexSet((lo + offset, hi + offset) for lo, hi in self._iv)

    def is_full(self, k):
        """True when the set is exactly ``{1..k}``."""
        return self._iv == (((1, k),) if k > 0 else ())

    def to_json(self):
        if self._size <= EXPLICIT_JSON_LIMIT:
            return list(self)
        return None


@dataclass(frozen=True)
class KClass:
    """K-class ``L_bott (+) eps^trivial`` of a projection over ``(S^2)^coords``."""

    coords: int
    trivial: int = 0
    bott: IndexSet = field(default_factory=IndexSet)

    def __post_init__(self):
        if not isinstance(self.bott, IndexSet):
            object.__setattr__(self, "bott", IndexSet.of(self.bott))
        if self.coords < 0 or self.trivial < 0:
            raise ValueError("coords and trivial rank must be nonnegative")
        if self.bott and (self.bott.min() < 1 or self.bott.max() > self.coords):
            raise ValueError(
                f"Bott coordinates {self.bott!r} outside 1..{self.coords}"
            )

    @property
    def rank(self):
        return self.trivial + self.bott.size

    @classmethod
    def trivial_class(cls, coords, rank):
        return cls(coords, rank, IndexSet())

    @classmethod
    def full_bott(cls, coords, trivial=0):
        """Every coordinate carries a line bundle."""
        return cls(coords, trivial, IndexSet.span(1, coords))

    def to_dict(self):
        out = {"coords": self.coords, "trivial": self.trivial}
        explicit = self.bott.to_json()
        if explicit is None:
            out["bott_ranges"] = [list(iv) for iv in self.bott.intervals]
        else:
            out["bott"] = explicit
        return out

    @classmethod
    def from_dict(cls, data):
        if "bott_ranges" in data:
            bott = IndexSet(tuple(iv) for iv in data["bott_ranges"])
        else:
            bott = IndexSet.of(data.get("bott", ()))
        return cls(int(data["coords"]), int(data["trivial"]), bott)

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return f"KClass(coords={self.coords}, trivial={self.trivial}, bott={self.bott!r})"


@dataclass(frozen=True)
class CompareVerdict:
    verdict: str
    reason: str
    obstruction_data: dict = None

    def __bool__(self):
        return self.verdict == YES


def _same_coords(a, b):
    if a.coords != b.coords:
        raise DimensionMismatch(f"classes over {a.coords} and {b.coords} sphere factors")


def direct_sum(a, b):
    _same_coords(a, b)
    if not a.bott.isdisjoint(b.bott):
        raise OverlappingBott(
            f"Bott coordinates {a.bott & b.bott!r} appear in both summands"
        )
    return KClass(a.coords, a.trivial + b.trivial, a.bott | b.bott)


def min_dominating_trivial_rank(c):
    """Least ``m`` such that ``c`` embeds in a trivial bundle of rank ``m``."""
    return c.trivial + 2 * c.bott.size


def yes_rule(e, f):
    """Componentwise embedding predicate for ``e`` into ``f``."""
    leftover = (e.bott - f.bott).size
    return f.trivial - e.trivial >= 2 * leftover


def no_rule(e, f):
    """Certified obstruction predicate; returns the rule id or None."""
    if e.rank > f.rank:
        return "rank-exceeds"
    if not f.bott and f.rank < min_dominating_trivial_rank(e):
        return "villadsen-obstruction"
    return None


def compare(e, f):
    """Three-valued answer to "is ``e`` Murray-von Neumann subequivalent to ``f``"."""
    _same_coords(e, f)
    yes = yes_rule(e, f)
    no = no_rule(e, f)
    assert not (yes and no), f"comparison rules disagree on {e!r} vs {f!r}"
    if yes:
        return CompareVerdict(YES, "componentwise-embedding")
    if no == "rank-exceeds":
        return CompareVerdict(NO, no, {"rank_e": e.rank, "rank_f": f.rank})
    if no == "villadsen-obstruction":
        return CompareVerdict(
            NO, no,
            {"required_trivial_rank": min_dominating_trivial_rank(e),
             "available_rank": f.rank},
        )
    return CompareVerdict(UNKNOWN, "outside-certified-fragment")


def pullback_block(c, block, block_size, total_blocks):
    """Pull ``c`` back along the projection onto block ``block`` (1-based).

    Block ``nu`` occupies coordinates ``(nu-1)*block_size + 1 .. nu*block_size``.
    """
    if not 1 <= block <= total_blocks:
        raise BadBlock(f"block {block} not in 1..{total_blocks}")
    if c.coords != block_size:
        raise BadBlock(f"class over {c.coords} coords, block size {block_size}")
    return KClass(
        block_size * total_blocks,
        c.trivial,
        c.bott.shift((block - 1) * block_size),
    )


def pullback_blocks(c, block_size, total_blocks, coords=None, offset=0):
    """Direct sum of the pullbacks of ``c`` along every block at once.

    Equivalent to summing :func:`pullback_block` over all blocks, without
    iterating when the Bott set is empty or full (``total_blocks`` can be
    astronomically large). ``offset``/``coords`` place the blocks inside a
    larger base space.
    """
    if c.coords != block_size:
        raise BadBlock(f"class over {c.coords} coords, block size {block_size}")
    if coords is None:
        coords = block_size * total_blocks
    if offset + block_size * total_blocks > coords:
        raise BadBlock("blocks do not fit in the target base space")
    trivial = c.trivial * total_blocks
    if not c.bott or total_blocks == 0:
        bott = IndexSet()
    elif c.bott.is_full(block_size):
        bott = IndexSet.span(offset + 1, offset + block_size * total_blocks)
    else:
        pieces = []
        for nu in range(total_blocks):
            base = offset + nu * block_size
            pieces.extend((lo + base, hi + base) for lo, hi in c.bott.intervals)
        bott = IndexSet(pieces)
    return KClass(coords, trivial, bott)


def point_evaluation(c, coords=None):
    """Evaluate at a point: bundle structure is lost, the rank survives."""
    return KClass(c.coords if coords is None else coords, c.rank, IndexSet())
