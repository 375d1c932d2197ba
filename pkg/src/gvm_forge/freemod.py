"""The rank-one U(h)-free sl(n+1)-modules V(a, S, b) and their extension by h_{n+2} -> lam.

The carrier is Q[h_1..h_n] (coefficients may also involve the parameter symbols).
h_i acts by multiplication and

    e_ij . f = a_i a_j^{-1} (d_{i in S} + d_{i notin S}(h_i - b - 1))
                            (d_{j in S}(h_j - b) + d_{j notin S}) sigma_i sigma_j^{-1}(f)

for 1 <= i != j <= n+1, where sigma_i shifts h_i -> h_i - 1 and sigma_{n+1} = id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

from gmpy2 import mpq

from .errors import OutOfSubalgebra, SymbolicUndecidable, ZeroUnit
from .liealg import LieElt
from .poly import Poly, Q, parse_poly


@dataclass(frozen=True)
class ModuleParams:
    """Parameters of V(a, S, b, lam).

    ``a`` and ``b`` are ``None`` when symbolic. ``lam`` is ``None`` when symbolic,
    a rational when concrete, or a :class:`Poly` in b when a constraint such as
    ``lam = b - N + 2`` has been imposed by substitution.
    """

    n: int
    S: frozenset = field(default_factory=frozenset)
    a: tuple | None = None
    b: mpq | None = None
    lam: mpq | Poly | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        S = frozenset(int(s) for s in self.S)
        if not S <= set(range(1, self.n + 2)):
            raise ValueError(f"S={sorted(S)} is not a subset of 1..{self.n + 1}")
        object.__setattr__(self, "S", S)
        if self.a is not None:
            a = tuple(Q(x) for x in self.a)
            if len(a) != self.n:
                raise ValueError(f"need {self.n} values for a, got {len(a)}")
            if any(x == 0 for x in a):
                raise ZeroUnit("a-values must be nonzero")
            object.__setattr__(self, "a", a)
        if self.b is not None:
            object.__setattr__(self, "b", Q(self.b))
        if self.lam is not None and not isinstance(self.lam, Poly):
            object.__setattr__(self, "lam", Q(self.lam))

    # parameter values as ring elements

    @cached_property
    def b_poly(self) -> Poly:
        return Poly.b(self.n) if self.b is None else Poly.const(self.n, self.b)

    @cached_property
    def lam_poly(self) -> Poly:
        if self.lam is None:
            return Poly.lam(self.n)
        if isinstance(self.lam, Poly):
            return self.lam
        return Poly.const(self.n, self.lam)

    def a_poly(self, i: int, e: int = 1) -> Poly:
        if i == self.n + 1:
            return Poly.const(self.n, 1)
        if self.a is None:
            return Poly.a(self.n, i, e)
        return Poly.const(self.n, self.a[i - 1] ** e)

    def a_power(self, m: Sequence[int]) -> Poly:
        """a^m with a_{n+1} = 1."""
        n = self.n
        if self.a is None:
            exps = [0] * (2 * n + 2)
            exps[n + 2:] = m[:n]
            return Poly(n, {tuple(exps): 1})
        c = mpq(1)
        for x, e in zip(self.a, m[:n]):
            c *= x**e
        return Poly.const(n, c)

    @property
    def is_concrete(self) -> bool:
        return self.a is not None and self.b is not None and self.lam is not None and not isinstance(self.lam, Poly)

    def with_lambda(self, lam) -> ModuleParams:
        return replace(self, lam=lam)

    # serialization

    def to_json_obj(self) -> dict:
        def rat(x):
            return "symbolic" if x is None else str(x)

        lam = self.lam
        return {
            "n": self.n,
            "S": sorted(self.S),
            "a": "symbolic" if self.a is None else [str(x) for x in self.a],
            "b": rat(self.b),
            "lambda": lam.to_text() if isinstance(lam, Poly) else rat(lam),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> ModuleParams:
        n = int(obj["n"])

        def rat(x):
            return None if x == "symbolic" else Q(x)

        a = obj.get("a", "symbolic")
        lam = obj.get("lambda", "symbolic")
        if lam == "symbolic":
            lam = None
        else:
            try:
                lam = Q(lam)
            except ValueError:
                lam = parse_poly(lam, n)
        return cls(
            n=n,
            S=frozenset(obj.get("S", [])),
            a=None if a == "symbolic" else tuple(Q(x) for x in a),
            b=rat(obj.get("b", "symbolic")),
            lam=lam,
        )

    @classmethod
    def from_json(cls, text: str) -> ModuleParams:
        return cls.from_json_obj(json.loads(text))


_PREFACTOR_CACHE: dict = {}


def e_prefactor(p: ModuleParams, i: int, j: int) -> Poly:
    """a_i a_j^{-1} (d_{i in S} + d_{i notin S}(h_i-b-1)) (d_{j in S}(h_j-b) + d_{j notin S})."""
    key = (p, i, j)
    hit = _PREFACTOR_CACHE.get(key)
    if hit is not None:
        return hit
    n = p.n
    b = p.b_poly
    left = Poly.const(n, 1) if i in p.S else Poly.h(n, i) - b - 1
    right = Poly.h(n, j) - b if j in p.S else Poly.const(n, 1)
    out = p.a_poly(i) * p.a_poly(j, -1) * left * right
    if len(_PREFACTOR_CACHE) > 100_000:
        _PREFACTOR_CACHE.clear()
    _PREFACTOR_CACHE[key] = out
    return out


def act_e(i: int, j: int, f: Poly, p: ModuleParams) -> Poly:
    """e_ij . f for 1 <= i != j <= n+1."""
    n = p.n
    if not f:
        return f
    deltas = [0] * n
    if i <= n:
        deltas[i - 1] += 1
    if j <= n:
        deltas[j - 1] -= 1
    return e_prefactor(p, i, j) * f.shift(deltas)


def act_v(x: LieElt, f: Poly, p: ModuleParams) -> Poly:
    """Action of x in sl(n+1) + C h_{n+2} on f in V(a, S, b, lam)."""
    n = p.n
    out = Poly.zero(n)
    for g, c in x.terms.items():
        if g.kind == "H":
            if g.i == n + 2:
                term = p.lam_poly * f
            else:
                term = Poly.h(n, g.i) * f
        else:
            if g.i > n + 1 or g.j > n + 1:
                raise OutOfSubalgebra(f"{g} does not act on the inducing module")
            term = act_e(g.i, g.j, f, p)
        out = out + term.scale(c)
    return out


def is_simple_v(p: ModuleParams) -> bool:
    """Simplicity of V(a, S, b): 1 <= |S| <= n, or (n+1) b is not a nonnegative integer."""
    if 1 <= len(p.S) <= p.n:
        return True
    if p.b is None:
        raise SymbolicUndecidable("simplicity depends on b when |S| is 0 or n+1")
    t = (p.n + 1) * p.b
    return not (t.denominator == 1 and t >= 0)
