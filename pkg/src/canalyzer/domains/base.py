"""The abstract-domain interface shared by every numerical domain."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..ctype import CType


class DomainMismatch(Exception):
    pass


class NotDescending(Exception):
    """Raised by narrow() when the second argument is not below the first."""


@dataclass(frozen=True)
class VarEnv:
    """Ordered, fixed set of program variables with their C types."""

    names: tuple
    types: tuple
    index: dict = field(compare=False, hash=False, repr=False, default=None)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable in environment")
        object.__setattr__(self, "index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def of(cls, pairs) -> "VarEnv":
        """Build from (name, CType) pairs, or bare names typed as int."""
        from ..ctype import INT

        names, types = [], []
        for p in pairs:
            if isinstance(p, str):
                names.append(p)
                types.append(INT)
            else:
                names.append(p[0])
                types.append(p[1].unqualified())
        return cls(tuple(names), tuple(types))

    def __len__(self) -> int:
        return len(self.names)

    def type_of(self, name: str) -> CType:
        return self.types[self.index[name]]

    def counts(self) -> tuple:
        """(integral dimensions, real dimensions)."""
        ints = sum(1 for t in self.types if t.is_integral)
        return ints, len(self.types) - ints


class Domain:
    """Operations every abstract domain provides.

    Elements are immutable and carry their environment; binary operations
    check that both sides belong to this domain and share the environment.
    """

    name = "abstract"

    # lattice structure
    def bottom(self, env: VarEnv): raise NotImplementedError
    def top(self, env: VarEnv): raise NotImplementedError
    def is_bottom(self, a) -> bool: raise NotImplementedError
    def leq(self, a, b) -> bool: raise NotImplementedError
    def join(self, a, b): raise NotImplementedError
    def meet(self, a, b): raise NotImplementedError
    def widen(self, a, b): raise NotImplementedError
    def narrow(self, a, b): raise NotImplementedError

    # transfer functions
    def assign(self, s, var: str, rhs): raise NotImplementedError
    def assume(self, s, cond, polarity: bool = True): raise NotImplementedError
    def forget(self, s, var: str): raise NotImplementedError
    def project(self, s, var: str): raise NotImplementedError

    # presentation and test support
    def render(self, s) -> str: raise NotImplementedError
    def alpha_points(self, points, env: VarEnv): raise NotImplementedError
    def contains(self, s, point) -> bool: raise NotImplementedError

    # derived operations
    def is_top(self, a) -> bool:
        return self.leq(self.top(a.env), a)

    def equal(self, a, b) -> bool:
        return self.leq(a, b) and self.leq(b, a)

    def narrow_checked(self, a, b):
        """narrow() that refuses a non-descending second argument."""
        if not self.leq(b, a):
            raise NotDescending(f"{self.name}: narrowing argument is not below the current value")
        return self.narrow(a, b)

    def meet_box(self, s, box: dict):
        """Constrain variables to the given {name: (lo, hi)} bounds."""
        raise NotImplementedError

    def check(self, a, b=None):
        for x in (a, b):
            if x is None:
                continue
            if getattr(x, "domain", None) != self.name:
                raise DomainMismatch(f"element of {getattr(x, 'domain', '?')} given to {self.name}")
        if b is not None and a.env != b.env:
            raise DomainMismatch("elements over different environments")

    def header(self, s) -> str:
        ints, reals = s.env.counts()
        return f"{self.name} of dim ({ints},{reals}):"

    def render_listing(self, s, indent: str = "       ") -> str:
        """Listing as printed by the original tool: a header line, then one line per fact."""
        if self.is_bottom(s):
            return f"{self.header(s)} bottom"
        body = self.render(s)
        lines = [self.header(s)]
        lines += [indent + line for line in body.splitlines() if line]
        return "\n".join(lines)
