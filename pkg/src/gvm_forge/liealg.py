"""sl(n+2) in the basis {e_ij : i != j} + {h_1..h_n, h_{n+2}}, with sl(n+1) in the top-left corner.

Here h_k = e_kk - (1/(n+1)) * (e_11 + ... + e_{n+1,n+1}), so h_{n+1} = -(h_1 + ... + h_n)
is not stored and is expanded whenever a bracket produces it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping

from gmpy2 import mpq

from .errors import DimensionMismatch
from .poly import Q


@dataclass(frozen=True, order=True)
class LieGen:
    kind: str  # "E" or "H"
    i: int
    j: int = 0

    def __str__(self):
        return f"E({self.i},{self.j})" if self.kind == "E" else f"H({self.i})"


def E(i: int, j: int) -> LieGen:
    if i == j:
        raise ValueError("E(i,j) needs i != j")
    return LieGen("E", i, j)


def H(k: int) -> LieGen:
    return LieGen("H", k)


class LieElt:
    """A rational linear combination of basis generators of sl(n+2)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[LieGen, object] | None = None):
        self.n = n
        self.terms = {}
        for g, c in (terms or {}).items():
            c = Q(c)
            if c:
                _check_gen(n, g)
                self.terms[g] = c

    @classmethod
    def gen(cls, n: int, g: LieGen) -> LieElt:
        if g.kind == "H" and g.i == n + 1:
            return h_elt(n, n + 1)
        return cls(n, {g: 1})

    def __iter__(self) -> Iterator[tuple[LieGen, mpq]]:
        return iter(sorted(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, LieElt):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def _check(self, other: LieElt):
        if self.n != other.n:
            raise DimensionMismatch(f"n={self.n} vs n={other.n}")

    def __add__(self, other: LieElt) -> LieElt:
        self._check(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, 0) + c
        return LieElt(self.n, out)

    def __neg__(self):
        return LieElt(self.n, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other: LieElt) -> LieElt:
        return self + (-other)

    def __rmul__(self, c) -> LieElt:
        c = Q(c)
        return LieElt(self.n, {g: c * v for g, v in self.terms.items()})

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for g, c in self:
            if c == 1:
                pieces.append(str(g))
            elif c == -1:
                pieces.append(f"-{g}")
            else:
                pieces.append(f"{c}*{g}")
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __str__ = to_text

    def __repr__(self):
        return f"LieElt(n={self.n}, {self.to_text()!r})"


def _check_gen(n: int, g: LieGen):
    if g.kind == "E":
        if not (1 <= g.i <= n + 2 and 1 <= g.j <= n + 2 and g.i != g.j):
            raise ValueError(f"{g} out of range for n={n}")
    elif g.kind == "H":
        if not (1 <= g.i <= n or g.i == n + 2):
            raise ValueError(f"{g} is not a stored generator for n={n}")
    else:
        raise ValueError(f"unknown generator kind {g.kind!r}")


def h_elt(n: int, k: int) -> LieElt:
    """h_k as a Lie element for any 1 <= k <= n+2, expanding h_{n+1}."""
    if k == n + 1:
        return LieElt(n, {H(i): -1 for i in range(1, n + 1)})
    return LieElt(n, {H(k): 1})


def _diag(n: int, i: int, j: int) -> LieElt:
    # e_ii - e_jj = h_i - h_j
    return h_elt(n, i) - h_elt(n, j)


def bracket_gens(n: int, x: LieGen, y: LieGen) -> LieElt:
    if x.kind == "H" and y.kind == "H":
        return LieElt(n)
    if x.kind == "H":
        k, i, j = x.i, y.i, y.j
        c = (
            (k == i) - (k == j)
            + mpq(1, n + 1) * ((i == n + 2) - (j == n + 2))
        )
        return LieElt(n, {y: c})
    if y.kind == "H":
        return -bracket_gens(n, y, x)
    i, j, i2, j2 = x.i, x.j, y.i, y.j
    if j == i2 and i == j2:
        return _diag(n, i, j)
    out = LieElt(n)
    if j == i2:
        out = out + LieElt(n, {E(i, j2): 1})
    if i == j2:
        out = out - LieElt(n, {E(i2, j): 1})
    return out


def bracket(x: LieElt, y: LieElt) -> LieElt:
    if x.n != y.n:
        raise DimensionMismatch(f"n={x.n} vs n={y.n}")
    n = x.n
    acc: dict = {}
    for gx, cx in x.terms.items():
        for gy, cy in y.terms.items():
            for g, c in bracket_gens(n, gx, gy).terms.items():
                acc[g] = acc.get(g, 0) + cx * cy * c
    return LieElt(n, acc)


def is_sl_n1(x: LieElt) -> bool:
    n = x.n
    for g in x.terms:
        if g.kind == "H" and g.i == n + 2:
            return False
        if g.kind == "E" and (g.i > n + 1 or g.j > n + 1):
            return False
    return True


def basis(n: int) -> list[LieElt]:
    """Basis of sl(n+2): all E(i,j), then H(1..n), H(n+2)."""
    gens = [E(i, j) for i in range(1, n + 3) for j in range(1, n + 3) if i != j]
    gens += [H(k) for k in range(1, n + 1)] + [H(n + 2)]
    return [LieElt(n, {g: 1}) for g in gens]


def basis_sl_n1(n: int) -> list[LieElt]:
    """Basis of the top-left sl(n+1)."""
    gens = [E(i, j) for i in range(1, n + 2) for j in range(1, n + 2) if i != j]
    gens += [H(k) for k in range(1, n + 1)]
    return [LieElt(n, {g: 1}) for g in gens]


_TERM_RE = re.compile(r"(?:(\d+(?:/\d+)?)\*)?(E\((\d+),(\d+)\)|H\((\d+)\))")


def parse_lie(text: str, n: int) -> LieElt:
    s = text.replace(" ", "")
    if s == "0":
        return LieElt(n)
    out = LieElt(n)
    for part in re.split(r"(?=[+-])", s):
        if not part:
            continue
        sign = -1 if part[0] == "-" else 1
        if part[0] in "+-":
            part = part[1:]
        m = _TERM_RE.fullmatch(part)
        if not m:
            raise ValueError(f"bad Lie term {part!r}")
        c = sign * (mpq(m.group(1)) if m.group(1) else mpq(1))
        g = E(int(m.group(3)), int(m.group(4))) if m.group(3) else H(int(m.group(5)))
        out = out + c * LieElt.gen(n, g)
    return out
