"""Diagonal AH direct systems at the level of K-classes.

Two presets are built in:

``paper-a``
    ``A_n = [C(X_n) (+) C(X_n)] (x) M_{r(n)}`` with ``X_n = (S^2)^{s(n)}``. Each
    summand receives ``d(n+1)`` coordinate-projection pullbacks of itself and
    one point evaluation of the other summand. The Z/2 action swaps summands.
``paper-b``
    ``B_n = C(X_n) (x) M_{2 r(n)}``, the crossed product of ``paper-a`` by the
    flip. It has ``d(n+1)`` pullbacks plus one point evaluation conjugated by
    the swap unitary. Conjugation does not change a K-class, so the
    evaluation is modeled exactly as in ``paper-a``.

Custom systems are read from JSON. They are validated for unitality and for
how their pullback blocks tile the target coordinates.
"""

import json
from dataclasses import dataclass
from pathlib import Path

from .bundles import KClass, direct_sum, point_evaluation, pullback_blocks
from .exceptions import NotTwoSummand, StageMismatch
from .report import Report
from .sequences import seq_row

__all__ = [
    "StageShape",
    "MapEntry",
    "DiagonalSystemSpec",
    "StageClassPair",
    "PRESETS",
    "apply_connecting",
    "push_forward",
    "apply_flip",
    "canonical_p",
    "canonical_p_prime",
    "canonical_q",
    "unit_class",
    "trivial_stage_class",
    "iterate_and_check",
]

PRESETS = ("paper-a", "paper-b")


@dataclass(frozen=True)
class StageShape:
    n: int
    matrix_size: int
    coords: tuple  # sphere factors per summand

    @property
    def summand_count(self):
        return len(self.coords)


@dataclass(frozen=True)
class MapEntry:
    """Partial map from ``source`` summand at stage ``stage`` into ``target`` at ``stage + 1``."""

    stage: int
    target: int
    source: int
    pullbacks: int
    point_evals: int


class DiagonalSystemSpec:
    """Stage and map multiplicities of a diagonal AH system.

    Use ``DiagonalSystemSpec("paper-a")`` for a built-in system and :meth:`from_dict` /
    :meth:`from_json` for custom ones. Custom systems are finite: stages
    ``0..len(stages)-1``.
    """

    def __init__(self, preset, stages=(), maps=()):
        preset = preset.lower()
        if preset not in PRESETS and preset != "custom":
            raise ValueError(f"unknown preset {preset!r}")
        self.preset = preset
        self._stages = tuple(stages)
        self._maps = tuple(maps)
        if preset == "custom":
            if not self._stages:
                raise ValueError("custom system needs at least one stage")
            for i, st in enumerate(self._stages):
                if st.n != i:
                    raise ValueError(f"stage {i} listed with index {st.n}")

    def __repr__(self):
        return f"DiagonalSystemSpec({self.preset!r})"

    def __eq__(self, other):
        return (isinstance(other, DiagonalSystemSpec)
                and (self.preset, self._stages, self._maps)
                == (other.preset, other._stages, other._maps))

    @property
    def last_stage(self):
        """Highest defined stage, or None when the system is unbounded."""
        if self.preset == "custom":
            return len(self._stages) - 1
        return None

    def stage(self, n):
        if n < 0:
            raise StageMismatch(f"negative stage {n}")
        if self.preset == "paper-a":
            row = seq_row(n)
            return StageShape(n, row.r, (row.s, row.s))
        if self.preset == "paper-b":
            row = seq_row(n)
            return StageShape(n, 2 * row.r, (row.s,))
        if n > self.last_stage:
            raise StageMismatch(f"custom system has no stage {n}")
        return self._stages[n]

    def maps(self, n):
        """Map entries of the connecting map from stage ``n`` to ``n + 1``."""
        if self.preset == "paper-a":
            d = seq_row(n + 1).d
            return (
                MapEntry(n, 0, 0, d, 0),
                MapEntry(n, 0, 1, 0, 1),
                MapEntry(n, 1, 1, d, 0),
                MapEntry(n, 1, 0, 0, 1),
            )
        if self.preset == "paper-b":
            return (MapEntry(n, 0, 0, seq_row(n + 1).d, 1),)
        if n + 1 > self.last_stage:
            raise StageMismatch(f"custom system has no map out of stage {n}")
        return tuple(m for m in self._maps if m.stage == n)

    def validate(self, n_max=None):
        """Unitality and block-tiling checks for stages ``0..n_max``."""
        if n_max is None:
            if self.last_stage is None:
                raise ValueError("n_max is required for unbounded presets")
            n_max = self.last_stage
        report = Report(f"system {self.preset} structure")
        for n in range(n_max):
            src, tgt = self.stage(n), self.stage(n + 1)
            entries = self.maps(n)
            for target in range(tgt.summand_count):
                mine = [m for m in entries if m.target == target]
                size = sum((m.pullbacks + m.point_evals) * src.matrix_size for m in mine)
                report.add(
                    f"unital stage {n}->{n + 1} summand {target}",
                    size == tgt.matrix_size,
                    f"{size} == {tgt.matrix_size}",
                )
                covered = sum(m.pullbacks * src.coords[m.source] for m in mine)
                report.add(
                    f"tiling stage {n}->{n + 1} summand {target}",
                    covered == tgt.coords[target],
                    f"{covered} == {tgt.coords[target]}",
                )
            for m in entries:
                if not (0 <= m.target < tgt.summand_count
                        and 0 <= m.source < src.summand_count):
                    report.add(f"indices of {m}", False, "summand out of range")
        return report

    def to_dict(self):
        if self.preset != "custom":
            return {"preset": self.preset}
        return {
            "preset": "custom",
            "stages": [
                {"matrix_size": st.matrix_size, "coords": list(st.coords)}
                for st in self._stages
            ],
            "maps": [
                {"stage": m.stage, "target": m.target, "source": m.source,
                 "pullbacks": m.pullbacks, "point_evals": m.point_evals}
                for m in self._maps
            ],
        }

    @classmethod
    def from_dict(cls, data):
        preset = data.get("preset", "custom").lower()
        if preset != "custom":
            return cls(preset)
        stages = [
            StageShape(i, int(st["matrix_size"]), tuple(int(c) for c in st["coords"]))
            for i, st in enumerate(data["stages"])
        ]
        maps = [
            MapEntry(int(m["stage"]), int(m["target"]), int(m["source"]),
                     int(m.get("pullbacks", 0)), int(m.get("point_evals", 0)))
            for m in data.get("maps", [])
        ]
        return cls("custom", stages, maps)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, name_or_path):
        """Preset by name, or a custom system from a JSON file."""
        key = str(name_or_path).lower()
        if key in PRESETS:
            return cls(key)
        return cls.from_json(Path(name_or_path).read_text())


@dataclass(frozen=True)
class StageClassPair:
    """One K-class per summand of stage ``stage``, living in ``M_amplification(A_n)``."""

    stage: int
    classes: tuple
    matrix_size: int
    amplification: int = 1

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        limit = self.matrix_size * self.amplification
        for c in self.classes:
            if c.rank > limit:
                raise ValueError(f"rank {c.rank} exceeds {limit} at stage {self.stage}")

    @property
    def ranks(self):
        return tuple(c.rank for c in self.classes)


def _check_shape(x, shape):
    if x.matrix_size != shape.matrix_size or len(x.classes) != shape.summand_count:
        raise StageMismatch(f"classes do not fit stage {shape.n} of the system")
    for c, k in zip(x.classes, shape.coords):
        if c.coords != k:
            raise StageMismatch(f"class over {c.coords} coords at a stage with {k}")


def apply_connecting(x, spec):
    """Image of ``x`` under the connecting map from stage ``x.stage`` to the next."""
    n = x.stage
    src = spec.stage(n)
    tgt = spec.stage(n + 1)
    _check_shape(x, src)
    entries = spec.maps(n)
    out = []
    for target in range(tgt.summand_count):
        k = tgt.coords[target]
        acc = KClass(k)
        offset = 0
        # pullbacks first, in map order, then point evaluations
        for m in entries:
            if m.target != target or not m.pullbacks:
                continue
            block = src.coords[m.source]
            piece = pullback_blocks(x.classes[m.source], block, m.pullbacks,
                                    coords=k, offset=offset)
            offset += block * m.pullbacks
            acc = direct_sum(acc, piece)
        if offset != k:
            raise StageMismatch(
                f"pullback blocks cover {offset} of {k} coordinates at stage {n + 1}"
            )
        for m in entries:
            if m.target != target or not m.point_evals:
                continue
            ev = point_evaluation(x.classes[m.source], coords=k)
            acc = direct_sum(acc, KClass(k, ev.trivial * m.point_evals))
        out.append(acc)
    return StageClassPair(n + 1, out, tgt.matrix_size, x.amplification)


def push_forward(x, spec, m):
    """Apply connecting maps until stage ``m``."""
    if m < x.stage:
        raise StageMismatch(f"cannot push stage {x.stage} back to {m}")
    while x.stage < m:
        x = apply_connecting(x, spec)
    return x


def apply_flip(x):
    """The generating automorphism of the Z/2 action: swap the two summands."""
    if len(x.classes) != 2:
        raise NotTwoSummand(f"flip needs two summands, got {len(x.classes)}")
    a, b = x.classes
    return StageClassPair(x.stage, (b, a), x.matrix_size, x.amplification)


def canonical_p(n):
    """Closed form of p_n: ``(c0 + c1, g)``.

    ``c0`` has a line bundle on every coordinate, ``c1`` is trivial of rank
    ``r - s - t``, and ``g`` is trivial of rank ``t``.
    """
    row = seq_row(n)
    return StageClassPair(
        n,
        (KClass.full_bott(row.s, row.r - row.s - row.t),
         KClass.trivial_class(row.s, row.t)),
        row.r,
        2,
    )


def canonical_p_prime(n):
    row = seq_row(n)
    half = KClass.full_bott(row.s, row.r - row.s)
    return StageClassPair(n, (half, half), row.r, 2)


def canonical_q(n):
    row = seq_row(n)
    return StageClassPair(n, (KClass.full_bott(row.s, row.r - row.s),), 2 * row.r, 1)


def trivial_stage_class(spec, n, rank, amplification=None):
    """Trivial class of the same ``rank`` on every summand of stage ``n``."""
    shape = spec.stage(n)
    if amplification is None:
        amplification = max(1, -(-rank // shape.matrix_size))
    return StageClassPair(
        n,
        tuple(KClass.trivial_class(k, rank) for k in shape.coords),
        shape.matrix_size,
        amplification,
    )


def unit_class(spec, n):
    return trivial_stage_class(spec, n, spec.stage(n).matrix_size, 1)


def iterate_and_check(n_max):
    """Iterate the connecting maps from stage 0 and compare with the closed forms.

    Tracks ``p_n`` and ``p'_n`` through ``paper-a`` and ``q_n`` through
    ``paper-b``, for every stage ``1..n_max``.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    report = Report("projection classes vs closed forms")
    spec_a = DiagonalSystemSpec("paper-a")
    spec_b = DiagonalSystemSpec("paper-b")
    bott = KClass.full_bott(1)
    p = StageClassPair(0, (bott, KClass(1)), 1, 2)
    pp = StageClassPair(0, (bott, bott), 1, 2)
    q = StageClassPair(0, (bott,), 2, 1)
    for name, x in (("p", p), ("p'", pp), ("q", q)):
        closed = {"p": canonical_p, "p'": canonical_p_prime, "q": canonical_q}[name](0)
        report.add(f"{name}_0 base case", x == closed)
    for n in range(1, n_max + 1):
        p = apply_connecting(p, spec_a)
        pp = apply_connecting(pp, spec_a)
        q = apply_connecting(q, spec_b)
        report.add(f"paper-a p_{n}", p == canonical_p(n), f"ranks {p.ranks}")
        report.add(f"paper-a p'_{n}", pp == canonical_p_prime(n), f"ranks {pp.ranks}")
        report.add(f"paper-b q_{n}", q == canonical_q(n), f"ranks {q.ranks}")
    return report
