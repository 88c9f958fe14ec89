"""Integer recursions d, l, r, s, t, u and a certified enclosure of their limit kappa.

All arithmetic is on Python ints and :class:`fractions.Fraction`; floats only
appear in human-readable rendering.
"""

import csv
import io
import json
import threading
from dataclasses import dataclass
from fractions import Fraction

from ._exact import fmt_q
from .report import Report

__all__ = [
    "SeqRow",
    "SeqTable",
    "KappaInterval",
    "seq_table",
    "seq_row",
    "kappa_interval",
    "rank_recursion_identities",
]


@dataclass(frozen=True)
class SeqRow:
    n: int
    d: int
    l: int  # noqa: E741
    r: int
    s: int
    t: int
    u: Fraction


@dataclass(frozen=True)
class SeqTable:
    rows: tuple

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, n):
        return self.rows[n]

    def column(self, name):
        return [getattr(row, name) for row in self.rows]

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "d", "l", "r", "s", "t", "u_num", "u_den"])
        for row in self.rows:
            writer.writerow(
                [row.n, row.d, row.l, row.r, row.s, row.t,
                 row.u.numerator, row.u.denominator]
            )
        return buf.getvalue()

    def to_dict(self):
        return {
            "rows": [
                {
                    "n": str(row.n),
                    "d": str(row.d),
                    "l": str(row.l),
                    "r": str(row.r),
                    "s": str(row.s),
                    "t": str(row.t),
                    "u": fmt_q(row.u),
                }
                for row in self.rows
            ]
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        rows = []
        for item in data["rows"]:
            num, den = item["u"].split("/")
            rows.append(
                SeqRow(
                    n=int(item["n"]), d=int(item["d"]), l=int(item["l"]),
                    r=int(item["r"]), s=int(item["s"]), t=int(item["t"]),
                    u=Fraction(int(num), int(den)),
                )
            )
        return cls(tuple(rows))


_ROWS = []
_ROWS_LOCK = threading.Lock()


def _next_row(prev):
    n = prev.n + 1
    d = 2 ** (n + 1) - 1
    l = 2 ** (n + 1)  # noqa: E741
    r = prev.r * l
    s = prev.s * d
    t = d * prev.t + (prev.r - prev.t)
    return SeqRow(n, d, l, r, s, t, Fraction(s, r))


def seq_row(n):
    """Row ``n`` of the recursion. Rows are memoized append-only."""
    if n < 0:
        raise ValueError(f"stage index must be >= 0, got {n}")
    if n < len(_ROWS):
        return _ROWS[n]
    with _ROWS_LOCK:
        if not _ROWS:
            _ROWS.append(SeqRow(0, 1, 2, 1, 1, 0, Fraction(1)))
        while len(_ROWS) <= n:
            _ROWS.append(_next_row(_ROWS[-1]))
    return _ROWS[n]


def seq_table(n_max):
    """Rows ``0..n_max`` of the sequence table."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    return SeqTable(tuple(seq_row(n) for n in range(n_max + 1)))


@dataclass(frozen=True)
class KappaInterval:
    """Closed rational interval certified to contain kappa."""

    lower: Fraction
    upper: Fraction
    terms: int

    @property
    def width(self):
        return self.upper - self.lower

    def __contains__(self, x):
        return self.lower <= Fraction(x) <= self.upper

    def contains_interval(self, other):
        return self.lower <= other.lower and other.upper <= self.upper

    def to_dict(self):
        return {"lower": fmt_q(self.lower), "upper": fmt_q(self.upper),
                "terms": self.terms}


def kappa_interval(terms):
    """Enclose kappa = prod_{k>=1} (1 - 2^-(k+1)) using ``terms`` factors.

    The upper end is the partial product u(N). The discarded tail is a product
    of factors in [0, 1], so it is at least 1 - sum_{k>N} 2^-(k+1) = 1 - 2^-(N+1).
    """
    if terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms}")
    u = seq_row(terms).u
    tail = 1 - Fraction(1, 2 ** (terms + 1))
    return KappaInterval(u * tail, u, terms)


def rank_recursion_identities(n_max):
    """Replay the two rank identities that drive the induction for p_n.

    For each n < n_max:

    * d(n+1) [r(n) - s(n) - t(n)] + t(n) == r(n+1) - s(n+1) - t(n+1)
    * s(n) + [r(n) - s(n) - t(n)] + d(n+1) t(n) == t(n+1)
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    report = Report("rank recursion identities")
    for n in range(n_max):
        cur, nxt = seq_row(n), seq_row(n + 1)
        free = cur.r - cur.s - cur.t
        lhs = nxt.d * free + cur.t
        rhs = nxt.r - nxt.s - nxt.t
        report.add(f"first-summand n={n}", lhs == rhs, f"{lhs} == {rhs}")
        lhs = cur.s + free + nxt.d * cur.t
        report.add(f"second-summand n={n}", lhs == nxt.t, f"{lhs} == {nxt.t}")
    return report
