"""Palette parameters, partial strong edge-colorings and the validity checker."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import mpmath

from .errors import PreconditionError, UsageError
from .graph import Edge, Graph, edge, n2_edges

# Slack for comparisons against the irrational threshold tau.
GUARD = 1e-9


def parse_eps(eps) -> Fraction:
    """Accept a Fraction, int, decimal string or ``"p/q"`` string exactly."""
    if isinstance(eps, Fraction):
        return eps
    if isinstance(eps, float):
        return Fraction(repr(eps))
    return Fraction(str(eps).strip())


@dataclass(frozen=True)
class Params:
    D: int
    eps: Fraction
    tau: float
    K: int

    def reaches_tau(self, t: float) -> bool:
        """``t >= tau`` with the rounding guard."""
        return t >= self.tau - GUARD

    @property
    def tau_ceil(self) -> int:
        """Smallest integer that is at least tau: the pendant quota."""
        return math.ceil(self.tau - GUARD)

    @property
    def low_capacity_degree_cap(self) -> int:
        """Integer form of ``Delta <= D + tau``."""
        return math.floor(self.D + self.tau + GUARD)

    @property
    def upper(self) -> float:
        """``D ** (1/2 + eps)``, i.e. ``D / tau``."""
        return self.D / self.tau


def make_params(D: int, eps) -> Params:
    eps = parse_eps(eps)
    if not (0 < eps <= Fraction(1, 2)):
        raise PreconditionError(f"eps must lie in (0, 1/2], got {eps}")
    if not isinstance(D, int) or D < 1:
        raise PreconditionError(f"D must be a positive integer, got {D!r}")
    with mpmath.workdps(50):
        e = mpmath.mpf(eps.numerator) / eps.denominator
        threshold = mpmath.power(4, 1 / (2 * e))
        tau = mpmath.power(D, mpmath.mpf(1) / 2 - e)
        if D < threshold - GUARD:
            raise PreconditionError(f"D={D} is below 4^(1/(2 eps)) = {float(threshold):.6g}")
        K = int(mpmath.floor(5 * D - tau + 2 + GUARD))
    return Params(D=D, eps=eps, tau=float(tau), K=K)


class Coloring:
    """Partial map from edges to positive colors.

    ``K`` is the palette size when one applies; ``None`` means unbounded.
    """

    __slots__ = ("colors", "K")

    def __init__(self, colors: dict[Edge, int] | None = None, K: int | None = None):
        self.colors: dict[Edge, int] = dict(colors or {})
        self.K = K

    def __getitem__(self, e: Edge) -> int:
        return self.colors[e]

    def __contains__(self, e: Edge) -> bool:
        return e in self.colors

    def __len__(self) -> int:
        return len(self.colors)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.colors)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Coloring) and self.colors == other.colors

    def __repr__(self) -> str:
        return f"Coloring({len(self.colors)} edges, K={self.K})"

    def get(self, e: Edge, default=None):
        return self.colors.get(e, default)

    def items(self):
        return self.colors.items()

    def assign(self, e: Edge, c: int) -> None:
        if c < 1 or (self.K is not None and c > self.K):
            raise UsageError(f"color {c} outside palette 1..{self.K}")
        self.colors[e] = c

    def uncolor(self, e: Edge) -> None:
        self.colors.pop(e, None)

    def swap(self, e1: Edge, e2: Edge) -> None:
        """Exchange the colors of two colored edges in place."""
        try:
            c1, c2 = self.colors[e1], self.colors[e2]
        except KeyError as exc:
            raise UsageError(f"cannot swap: edge {exc.args[0]} is uncolored") from None
        self.colors[e1], self.colors[e2] = c2, c1

    def copy(self) -> Coloring:
        return Coloring(self.colors, self.K)

    def used(self) -> set[int]:
        return set(self.colors.values())

    def num_colors(self) -> int:
        return len(set(self.colors.values()))

    def max_color(self) -> int:
        return max(self.colors.values(), default=0)


def swap_colors(c: Coloring, e1: Edge, e2: Edge) -> Coloring:
    """Copy of ``c`` with the colors of ``e1`` and ``e2`` exchanged. No validity check."""
    out = c.copy()
    out.swap(e1, e2)
    return out


def blocked_colors(g: Graph, c: Coloring, e: Edge) -> set[int]:
    """Colors already used on the conflict set of ``e``."""
    cols = c.colors
    return {cols[f] for f in n2_edges(g, e) if f in cols}


def available_colors(g: Graph, c: Coloring, e: Edge, p: Params | int) -> list[int]:
    """Colors in ``1..K`` that ``e`` may take, ascending."""
    K = p if isinstance(p, int) else p.K
    if e in c.colors:
        raise UsageError(f"edge {e} is already colored")
    blocked = blocked_colors(g, c, e)
    return [k for k in range(1, K + 1) if k not in blocked]


def least_free(blocked: set[int], K: int | None = None) -> int | None:
    """Smallest color not in ``blocked``; None if it would exceed ``K``."""
    k = 1
    while k in blocked:
        k += 1
    if K is not None and k > K:
        return None
    return k


def conflict(g: Graph, e: Edge, f: Edge) -> tuple | None:
    """Why ``e`` and ``f`` may not share a color, or None if they may.

    The witness is ``("shared", x)`` for a common endpoint or
    ``("adjacent", x, y)`` for an edge ``xy`` of ``g`` with ``x`` on ``e``
    and ``y`` on ``f``.
    """
    if e == f:
        return None
    for x in e:
        if x in f:
            return ("shared", x)
    for x in e:
        for y in f:
            if g.has_edge(x, y):
                return ("adjacent", x, y)
    return None


@dataclass(frozen=True)
class Violation:
    edge_a: Edge
    edge_b: Edge
    color: int
    witness: tuple

    def recheck(self, g: Graph) -> bool:
        """True if the witness still proves a conflict in ``g``."""
        if self.witness[0] == "shared":
            x = self.witness[1]
            return x in self.edge_a and x in self.edge_b
        _, x, y = self.witness
        return x in self.edge_a and y in self.edge_b and g.has_edge(x, y)


def verify_strong(g: Graph, c: Coloring) -> Violation | None:
    """Return None if every color class is an induced matching, else one Violation.

    ``c`` must color every edge of ``g``.
    """
    edges = g.edges()
    missing = [e for e in edges if e not in c.colors]
    if missing:
        raise UsageError(f"coloring is partial: {len(missing)} uncolored edges, e.g. {missing[0]}")
    classes: dict[int, list[Edge]] = {}
    for e in edges:
        classes.setdefault(c.colors[e], []).append(e)
    for col in sorted(classes):
        owner: dict[int, Edge] = {}
        for e in classes[col]:
            for x in e:
                if x in owner:
                    return Violation(owner[x], e, col, ("shared", x))
                owner[x] = e
        for e in classes[col]:
            for x in e:
                for y in g.neighbors(x):
                    f = owner.get(y)
                    if f is not None and f != e:
                        return Violation(e, f, col, ("adjacent", x, y))
    return None


def greedy_color(g: Graph, order: Iterable[Edge] | None = None) -> Coloring:
    """Give each edge, in ``order``, the least color absent from its colored conflict set."""
    c = Coloring()
    for e in (g.edges() if order is None else order):
        e = edge(*e)
        c.colors[e] = least_free(blocked_colors(g, c, e))
    return c


def greedy_bound(delta: int) -> int:
    """Upper bound ``2 Delta (Delta - 1) + 1`` on colors used by :func:`greedy_color`."""
    return 2 * delta * (delta - 1) + 1
