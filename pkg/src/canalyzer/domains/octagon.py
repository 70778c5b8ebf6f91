"""Octagon domain over a difference-bound matrix.

Index ``2i`` stands for ``+v_i`` and ``2i+1`` for ``-v_i``.  Entry
``m[a][b]`` bounds ``V_b - V_a``, so ``m[2i+1][2i]`` is twice the upper
bound of ``v_i`` and ``m[2i][2i+1]`` twice the negated lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..frontend import ast
from . import arith
from . import bounds as B
from .base import Domain, VarEnv
from .bounds import INF, NEG_INF
from .linear import condition_forms, linearize, refine_box


def bar(k: int) -> int:
    return k ^ 1


@dataclass(frozen=True)
class OctagonElem:
    env: VarEnv
    matrix: Optional[tuple]  # None is bottom; rows are tuples
    closed: bool = True
    domain: str = "octagon"


def _copy(m):
    return [list(row) for row in m]


def _freeze(m):
    return tuple(tuple(B.norm(x) for x in row) for row in m)


def close(m, env: VarEnv):
    """Tight strong closure; returns a new matrix or None when empty."""
    m = _copy(m)
    n = len(m)
    for k in range(n):
        mk = m[k]
        for i in range(n):
            mik = m[i][k]
            if mik == INF:
                continue
            mi = m[i]
            for j in range(n):
                v = mik + mk[j]
                if v < mi[j]:
                    mi[j] = v
    if any(m[i][i] < 0 for i in range(n)):
        return None
    # integral variables: unary bounds 2v <= c tighten to even c
    for i, t in enumerate(env.types):
        if t.is_integral:
            for a in (2 * i, 2 * i + 1):
                c = m[a][bar(a)]
                if B.is_finite(c):
                    m[a][bar(a)] = 2 * B.floor(B.div(c, 2))
    for i in range(n):
        for j in range(n):
            s = m[i][bar(i)] + m[bar(j)][j]
            if s != INF:
                s = B.norm(B.div(s, 2))
                if s < m[i][j]:
                    m[i][j] = s
    for i in range(n):
        if m[i][bar(i)] + m[bar(i)][i] < 0 or m[i][i] < 0:
            return None
        m[i][i] = 0
    return _freeze(m)


class OctagonDomain(Domain):
    name = "octagon"

    # -- construction ------------------------------------------------------

    def bottom(self, env):
        return OctagonElem(env, None)

    def top(self, env):
        n = 2 * len(env)
        return OctagonElem(env, tuple(tuple(0 if i == j else INF for j in range(n))
                                      for i in range(n)))

    def closed(self, a) -> OctagonElem:
        if a.matrix is None or a.closed:
            return a
        return OctagonElem(a.env, close(a.matrix, a.env))

    def _from(self, env, m) -> OctagonElem:
        return OctagonElem(env, close(m, env))

    def is_bottom(self, a) -> bool:
        return self.closed(a).matrix is None

    # -- lattice -----------------------------------------------------------

    def leq(self, a, b) -> bool:
        self.check(a, b)
        a = self.closed(a)
        if a.matrix is None:
            return True
        b = self.closed(b)
        if b.matrix is None:
            return False
        return all(x <= y for ra, rb in zip(a.matrix, b.matrix) for x, y in zip(ra, rb))

    def join(self, a, b):
        self.check(a, b)
        a, b = self.closed(a), self.closed(b)
        if a.matrix is None:
            return b
        if b.matrix is None:
            return a
        # the pointwise max of strongly closed matrices is strongly closed
        m = tuple(tuple(max(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a.matrix, b.matrix))
        return OctagonElem(a.env, m)

    def meet(self, a, b):
        self.check(a, b)
        if a.matrix is None or b.matrix is None:
            return self.bottom(a.env)
        m = [[min(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a.matrix, b.matrix)]
        return self._from(a.env, m)

    def widen(self, a, b):
        """Keep an entry of ``a`` when the closed ``b`` respects it.

        ``a`` is used as stored (not re-closed) and the result stays unclosed,
        which is what guarantees termination of the widening sequence.
        """
        self.check(a, b)
        if a.matrix is None:
            return self.closed(b)
        b = self.closed(b)
        if b.matrix is None:
            return a
        m = tuple(tuple(x if y <= x else INF for x, y in zip(ra, rb))
                  for ra, rb in zip(a.matrix, b.matrix))
        return OctagonElem(a.env, m, closed=False)

    def narrow(self, a, b):
        self.check(a, b)
        a, b = self.closed(a), self.closed(b)
        if a.matrix is None or b.matrix is None:
            return self.bottom(a.env)
        m = [[y if x == INF else x for x, y in zip(ra, rb)] for ra, rb in zip(a.matrix, b.matrix)]
        return self._from(a.env, m)

    # -- constraints -------------------------------------------------------

    @staticmethod
    def _index(env, name, sign) -> int:
        i = env.index[name]
        return 2 * i if sign > 0 else 2 * i + 1

    def _add(self, m, env, terms, c):
        """Add ``sum(sign * v) <= c`` for one or two (name, sign) terms."""
        integral = all(env.type_of(v).is_integral for v, _ in terms)
        if integral:
            c = B.floor(c)
        if len(terms) == 1:
            (v, s), = terms
            q = self._index(env, v, s)
            m[bar(q)][q] = min(m[bar(q)][q], 2 * c)
            return
        (v, sv), (w, sw) = terms
        p = bar(self._index(env, v, sv))
        q = self._index(env, w, sw)
        m[p][q] = min(m[p][q], c)
        m[bar(q)][bar(p)] = min(m[bar(q)][bar(p)], c)

    def meet_box(self, s, box: dict):
        s = self.closed(s)
        if s.matrix is None:
            return s
        m = _copy(s.matrix)
        for v, (lo, hi) in box.items():
            if hi != INF:
                self._add(m, s.env, [(v, 1)], hi)
            if lo != NEG_INF:
                self._add(m, s.env, [(v, -1)], -lo)
        return self._from(s.env, m)

    def forget(self, s, var):
        s = self.closed(s)
        if s.matrix is None:
            return s
        i = s.env.index[var]
        idx = (2 * i, 2 * i + 1)
        m = _copy(s.matrix)
        for a in range(len(m)):
            for k in idx:
                if a != k:
                    m[a][k] = INF
                    m[k][a] = INF
        return OctagonElem(s.env, _freeze(m))

    def project(self, s, var):
        s = self.closed(s)
        if s.matrix is None:
            return None
        i = s.env.index[var]
        hi = s.matrix[2 * i + 1][2 * i]
        lo = s.matrix[2 * i][2 * i + 1]
        return (B.norm(-B.div(lo, 2)) if lo != INF else NEG_INF,
                B.norm(B.div(hi, 2)) if hi != INF else INF)

    def box(self, s) -> dict:
        return {n: self.project(s, n) for n in s.env.names}

    # -- transfer functions ------------------------------------------------

    def assign(self, s, var, rhs, sink=None):
        s = self.closed(s)
        if s.matrix is None:
            return s
        box = self.box(s)
        ev = arith.Evaluator(box.__getitem__, sink)
        r = ev.eval(rhs)
        form = linearize(rhs) if ev.clean else None
        if form is not None:
            exact = self._assign_exact(s, var, form)
            if exact is not None:
                # the interval value can be tighter, e.g. through type ranges
                return self.meet_box(exact, {var: r})
        return self.meet_box(self.forget(s, var), {var: r})

    def _assign_exact(self, s, var, form):
        coeffs, c = form
        env = s.env
        if not coeffs:
            t = self.forget(s, var)
            return self.meet_box(t, {var: (B.norm(c), B.norm(c))})
        if len(coeffs) != 1:
            return None
        (y, k), = coeffs.items()
        if k not in (1, -1):
            return None
        if y == var:
            m = _copy(s.matrix)
            i = env.index[var]
            if k == -1:
                # swap the roles of +v and -v
                a, b = 2 * i, 2 * i + 1
                m[a], m[b] = m[b], m[a]
                for row in m:
                    row[a], row[b] = row[b], row[a]
            shift = {2 * i: c, 2 * i + 1: -c}
            n = len(m)
            for a in range(n):
                for b in range(n):
                    d = shift.get(b, 0) - shift.get(a, 0)
                    if d and m[a][b] != INF:
                        m[a][b] = m[a][b] + d
            return self._from(env, m)
        t = self.forget(s, var)
        m = _copy(t.matrix)
        # var - k*y == c
        self._add(m, env, [(var, 1), (y, -int(k))], c)
        self._add(m, env, [(var, -1), (y, int(k))], -c)
        return self._from(env, m)

    def assume(self, s, cond, polarity=True):
        s = self.closed(s)
        if s.matrix is None:
            return s
        box = self.box(s)
        refined = refine_box(cond, polarity, box, s.env.type_of)
        if refined is None:
            return self.bottom(s.env)
        _, clean = arith.evaluate_unwrapped(cond, box.__getitem__)
        forms = condition_forms(cond, polarity, s.env.type_of) if clean else None
        m = _copy(s.matrix)
        for f in forms or ():
            if f[0] == "ne":
                continue
            coeffs, const = f
            if 0 < len(coeffs) <= 2 and all(abs(k) == abs(next(iter(coeffs.values())))
                                            for k in coeffs.values()):
                k0 = abs(next(iter(coeffs.values())))
                terms = [(v, 1 if k > 0 else -1) for v, k in coeffs.items()]
                self._add(m, s.env, terms, -const / k0)
        for v, (lo, hi) in refined.items():
            if hi != INF:
                self._add(m, s.env, [(v, 1)], hi)
            if lo != NEG_INF:
                self._add(m, s.env, [(v, -1)], -lo)
        return self._from(s.env, m)

    # -- presentation and test support -------------------------------------

    def constraints(self, s) -> list:
        """Closed constraints as ``(terms, bound)``; terms are (sign, name)."""
        s = self.closed(s)
        names = s.env.names
        out = []
        n = len(names)
        for i in range(n):
            hi = s.matrix[2 * i + 1][2 * i]
            lo = s.matrix[2 * i][2 * i + 1]
            if hi != INF:
                out.append((((1, names[i]),), B.norm(B.div(hi, 2))))
            if lo != INF:
                out.append((((-1, names[i]),), B.norm(B.div(lo, 2))))
        for i in range(n):
            for j in range(i + 1, n):
                for si in (1, -1):
                    for sj in (1, -1):
                        # si*vi + sj*vj <= m[p][q] with V_q = sj*vj, V_p = -si*vi
                        p = 2 * i + (1 if si > 0 else 0)
                        q = 2 * j + (0 if sj > 0 else 1)
                        c = s.matrix[p][q]
                        if c != INF:
                            out.append((((si, names[i]), (sj, names[j])), B.norm(c)))
        return out

    def render(self, s) -> str:
        s = self.closed(s)
        if s.matrix is None:
            return "bottom"
        lines = []
        for terms, c in self.constraints(s):
            text = ""
            for k, (sign, name) in enumerate(terms):
                if k == 0:
                    text += ("-" if sign < 0 else "") + name
                else:
                    text += (" - " if sign < 0 else " + ") + name
            lines.append(f"{text} <= {B.fmt(c)}")
        return "\n".join(lines) if lines else "top"

    def to_json(self, s):
        s = self.closed(s)
        if s.matrix is None:
            return "bottom"
        return {
            "bounds": {n: [B.to_json(lo), B.to_json(hi)] for n, (lo, hi) in self.box(s).items()},
            "constraints": self.render(s).splitlines() if self.constraints(s) else [],
        }

    def alpha_points(self, points, env):
        points = list(points)
        if not points:
            return self.bottom(env)
        n = 2 * len(env)

        def val(p, k):
            x = p[k // 2]
            return x if k % 2 == 0 else -x

        m = tuple(tuple(0 if a == b else B.norm(max(val(p, b) - val(p, a) for p in points))
                        for b in range(n)) for a in range(n))
        return OctagonElem(env, m)

    def contains(self, s, point) -> bool:
        s = self.closed(s)
        if s.matrix is None:
            return False
        n = len(s.matrix)
        vals = [point[k // 2] if k % 2 == 0 else -point[k // 2] for k in range(n)]
        return all(vals[b] - vals[a] <= s.matrix[a][b] for a in range(n) for b in range(n))
