"""Non-relational interval domain: one [lo, hi] pair per variable."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import arith
from . import bounds as B
from .base import Domain, VarEnv
from .bounds import INF, NEG_INF
from .linear import refine_box


@dataclass(frozen=True)
class IntervalElem:
    env: VarEnv
    ranges: Optional[tuple]  # None is bottom
    domain: str = "interval"

    def __post_init__(self):
        if self.ranges is not None:
            assert len(self.ranges) == len(self.env)
            if any(lo > hi for lo, hi in self.ranges):
                object.__setattr__(self, "ranges", None)

    def __getitem__(self, name):
        return self.ranges[self.env.index[name]]


class IntervalDomain(Domain):
    name = "interval"

    def make(self, env, ranges) -> IntervalElem:
        if ranges is not None:
            ranges = tuple((B.norm(lo), B.norm(hi)) for lo, hi in ranges)
        return IntervalElem(env, ranges)

    def bottom(self, env):
        return IntervalElem(env, None)

    def top(self, env):
        return IntervalElem(env, tuple((NEG_INF, INF) for _ in env.names))

    def from_box(self, env, box: dict) -> IntervalElem:
        """Element with the given {name: (lo, hi)}; missing names are top."""
        return self.make(env, [box.get(n, (NEG_INF, INF)) for n in env.names])

    def is_bottom(self, a) -> bool:
        return a.ranges is None

    def leq(self, a, b) -> bool:
        self.check(a, b)
        if a.ranges is None:
            return True
        if b.ranges is None:
            return False
        return all(bl <= al and ah <= bh for (al, ah), (bl, bh) in zip(a.ranges, b.ranges))

    def join(self, a, b):
        self.check(a, b)
        if a.ranges is None:
            return b
        if b.ranges is None:
            return a
        return self.make(a.env, [arith.join(x, y) for x, y in zip(a.ranges, b.ranges)])

    def meet(self, a, b):
        self.check(a, b)
        if a.ranges is None or b.ranges is None:
            return self.bottom(a.env)
        out = []
        for x, y in zip(a.ranges, b.ranges):
            m = arith.meet(x, y)
            if m is None:
                return self.bottom(a.env)
            out.append(m)
        return self.make(a.env, out)

    def widen(self, a, b):
        self.check(a, b)
        if a.ranges is None:
            return b
        if b.ranges is None:
            return a
        return self.make(a.env, [
            (a0 if a0 <= a1 else NEG_INF, b0 if b1 <= b0 else INF)
            for (a0, b0), (a1, b1) in zip(a.ranges, b.ranges)
        ])

    def narrow(self, a, b):
        self.check(a, b)
        if a.ranges is None or b.ranges is None:
            return self.bottom(a.env)
        return self.make(a.env, [
            (a1 if a0 == NEG_INF else a0, b1 if b0 == INF else b0)
            for (a0, b0), (a1, b1) in zip(a.ranges, b.ranges)
        ])

    # -- transfer functions ------------------------------------------------

    def box(self, s) -> dict:
        return dict(zip(s.env.names, s.ranges))

    def assign(self, s, var, rhs, sink=None):
        if s.ranges is None:
            return s
        r = arith.evaluate(rhs, s.__getitem__, sink)
        ranges = list(s.ranges)
        ranges[s.env.index[var]] = r
        return self.make(s.env, ranges)

    def assume(self, s, cond, polarity=True):
        if s.ranges is None:
            return s
        box = refine_box(cond, polarity, self.box(s), s.env.type_of)
        if box is None:
            return self.bottom(s.env)
        return self.from_box(s.env, box)

    def forget(self, s, var):
        if s.ranges is None:
            return s
        ranges = list(s.ranges)
        ranges[s.env.index[var]] = (NEG_INF, INF)
        return self.make(s.env, ranges)

    def project(self, s, var):
        """(lo, hi) for ``var``; None signals the empty interval of bottom."""
        if s.ranges is None:
            return None
        return s[var]

    def meet_box(self, s, box: dict):
        return self.meet(s, self.from_box(s.env, box))

    # -- presentation and test support -------------------------------------

    def render(self, s) -> str:
        if s.ranges is None:
            return "bottom"
        return "\n".join(f"{n} in [{B.fmt(lo)},{B.fmt(hi)}]"
                         for n, (lo, hi) in zip(s.env.names, s.ranges))

    def to_json(self, s):
        if s.ranges is None:
            return "bottom"
        return {n: [B.to_json(lo), B.to_json(hi)] for n, (lo, hi) in zip(s.env.names, s.ranges)}

    def alpha_points(self, points, env):
        points = list(points)
        if not points:
            return self.bottom(env)
        return self.make(env, [(min(c), max(c)) for c in zip(*points)])

    def contains(self, s, point) -> bool:
        if s.ranges is None:
            return False
        return all(lo <= v <= hi for v, (lo, hi) in zip(point, s.ranges))
