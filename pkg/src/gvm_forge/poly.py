"""Sparse multivariate Laurent polynomials over the rationals.

The ring is Q[h_1..h_n, lam, b, a_1^{+-1}..a_n^{+-1}]. A monomial is a tuple of
2n+2 integer exponents laid out as ``(h_1..h_n, lam, b, a_1..a_n)``; only the
a-exponents may be negative. ``h_{n+1}`` is never a variable: it is expanded
as ``-(h_1 + ... + h_n)`` wherever it occurs, and ``a_{n+1}`` is fixed to 1.

Coefficients are ``gmpy2.mpq`` values, which are always kept in lowest terms.
"""

from __future__ import annotations

import re
from math import comb
from operator import add
from typing import Iterable, Mapping

from gmpy2 import mpq

from .errors import DimensionMismatch, ZeroUnit

Scalar = mpq


def Q(x) -> mpq:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to an exact rational."""
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def _add_exps(m1, m2):
    return tuple(map(add, m1, m2))


class Poly:
    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple, object] | None = None, *, _clean=False):
        self.n = n
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {m: Q(c) for m, c in terms.items() if c != 0}
        self._hash = None

    # constructors

    @classmethod
    def zero(cls, n: int) -> Poly:
        return cls(n, {}, _clean=True)

    @classmethod
    def const(cls, n: int, c) -> Poly:
        c = Q(c)
        if not c:
            return cls(n, {}, _clean=True)
        return cls(n, {(0,) * (2 * n + 2): c}, _clean=True)

    @classmethod
    def _var(cls, n: int, pos: int, e: int = 1) -> Poly:
        m = [0] * (2 * n + 2)
        m[pos] = e
        return cls(n, {tuple(m): mpq(1)}, _clean=True)

    @classmethod
    def h(cls, n: int, i: int) -> Poly:
        """The Cartan generator h_i; ``i = n+1`` gives the alias -(h_1+...+h_n)."""
        if i == n + 1:
            return h_alias(n)
        if not 1 <= i <= n:
            raise ValueError(f"h index {i} out of range for n={n}")
        return cls._var(n, i - 1)

    @classmethod
    def lam(cls, n: int) -> Poly:
        return cls._var(n, n)

    @classmethod
    def b(cls, n: int) -> Poly:
        return cls._var(n, n + 1)

    @classmethod
    def a(cls, n: int, i: int, e: int = 1) -> Poly:
        """The unit a_i^e; a_{n+1} is identically 1."""
        if i == n + 1:
            return cls.const(n, 1)
        if not 1 <= i <= n:
            raise ValueError(f"a index {i} out of range for n={n}")
        return cls._var(n, n + 1 + i, e)

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def constant_value(self):
        """Return the rational value if this is a constant, else None."""
        if not self.terms:
            return mpq(0)
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            if not any(m):
                return c
        return None

    def h_degree(self) -> int:
        n = self.n
        return max((sum(m[:n]) for m in self.terms), default=-1)

    def variables_used(self) -> set[str]:
        names = _var_names(self.n)
        used = set()
        for m in self.terms:
            used.update(names[k] for k, e in enumerate(m) if e)
        return used

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        try:
            c = Q(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.constant_value() == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    # arithmetic

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.n != self.n:
                raise DimensionMismatch(f"n={self.n} vs n={other.n}")
            return other
        return Poly.const(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly(self.n, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.n)
        out: dict = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(map(add, m1, m2))
                out[m] = get(m, 0) + c1 * c2
        return Poly(self.n, {m: c for m, c in out.items() if c}, _clean=True)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> Poly:
        c = Q(c)
        if not c:
            return Poly.zero(self.n)
        if c == 1:
            return self
        return Poly(self.n, {m: c * v for m, v in self.terms.items()}, _clean=True)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are only defined for monomial units")
        out = Poly.const(self.n, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    # substitutions

    def shift(self, deltas: Iterable) -> Poly:
        """Substitute h_k -> h_k - deltas[k-1] for k = 1..n."""
        deltas = [Q(d) for d in deltas]
        if len(deltas) != self.n:
            raise DimensionMismatch("shift vector has wrong length")
        cur = self.terms
        for k, d in enumerate(deltas):
            if not d:
                continue
            out: dict = {}
            get = out.get
            for m, c in cur.items():
                e = m[k]
                if e == 0:
                    out[m] = get(m, 0) + c
                    continue
                lst = list(m)
                neg_d = -d
                pw = mpq(1)
                for j in range(e + 1):
                    lst[k] = e - j
                    mm = tuple(lst)
                    out[mm] = get(mm, 0) + c * comb(e, j) * pw
                    pw *= neg_d
            cur = {m: c for m, c in out.items() if c}
        return Poly(self.n, cur, _clean=True)

    def specialize(self, lam=None, b=None, a: Mapping[int, object] | None = None) -> Poly:
        """Assign rational values to any of lam, b, a_1..a_n."""
        n = self.n
        vals: dict[int, mpq] = {}
        if lam is not None:
            vals[n] = Q(lam)
        if b is not None:
            vals[n + 1] = Q(b)
        for i, v in (a or {}).items():
            if not 1 <= i <= n:
                raise ValueError(f"a index {i} out of range for n={n}")
            v = Q(v)
            if not v:
                raise ZeroUnit(f"a_{i} specialized to 0")
            vals[n + 1 + i] = v
        if not vals:
            return self
        out: dict = {}
        get = out.get
        for m, c in self.terms.items():
            lst = list(m)
            for pos, v in vals.items():
                e = lst[pos]
                if e:
                    c = c * v**e
                    lst[pos] = 0
            mm = tuple(lst)
            out[mm] = get(mm, 0) + c
        return Poly(n, {m: c for m, c in out.items() if c}, _clean=True)

    def substitute(self, lam: Poly | None = None, b: Poly | None = None) -> Poly:
        """Replace lam and/or b by polynomials (e.g. lam := b - N + 2)."""
        n = self.n
        subs = {}
        if lam is not None:
            subs[n] = self._coerce(lam)
        if b is not None:
            subs[n + 1] = self._coerce(b)
        if not subs:
            return self
        powers: dict = {}

        def pw(pos, e):
            key = (pos, e)
            if key not in powers:
                powers[key] = subs[pos] ** e
            return powers[key]

        out = Poly.zero(n)
        for m, c in self.terms.items():
            lst = list(m)
            factors = []
            for pos in subs:
                if lst[pos]:
                    factors.append(pw(pos, lst[pos]))
                    lst[pos] = 0
            term = Poly(n, {tuple(lst): c}, _clean=True)
            for f in factors:
                term = term * f
            out = out + term
        return out

    # text format

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = _var_names(self.n)
        pieces = []
        for m in sorted(self.terms, key=_order_key, reverse=True):
            c = self.terms[m]
            factors = []
            for k, e in enumerate(m):
                if e:
                    factors.append(names[k] if e == 1 else f"{names[k]}^{e}")
            if not factors:
                pieces.append(str(c))
            elif c == 1:
                pieces.append("*".join(factors))
            elif c == -1:
                pieces.append("-" + "*".join(factors))
            else:
                pieces.append(f"{c}*" + "*".join(factors))
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __str__ = to_text

    def __repr__(self):
        return f"Poly(n={self.n}, {self.to_text()!r})"


def _order_key(m):
    return (sum(m), m)


_NAME_CACHE: dict[int, list[str]] = {}


def _var_names(n: int) -> list[str]:
    if n not in _NAME_CACHE:
        _NAME_CACHE[n] = (
            [f"h{i}" for i in range(1, n + 1)] + ["lam", "b"] + [f"a{i}" for i in range(1, n + 1)]
        )
    return _NAME_CACHE[n]


_COEFF_RE = re.compile(r"\d+(/\d+)?")
_FACTOR_RE = re.compile(r"(h\d+|a\d+|lam|b)(?:\^(-?\d+))?")


def parse_poly(text: str, n: int) -> Poly:
    """Parse the canonical text format produced by :meth:`Poly.to_text`."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    index = {name: k for k, name in enumerate(_var_names(n))}
    width = 2 * n + 2
    out = Poly.zero(n)
    for part in re.split(r"(?<!\^)(?=[+-])", s):
        if not part:
            continue
        sign = 1
        if part[0] in "+-":
            sign = -1 if part[0] == "-" else 1
            part = part[1:]
        if not part:
            raise ValueError(f"dangling sign in {text!r}")
        factors = part.split("*")
        coeff = mpq(1)
        if _COEFF_RE.fullmatch(factors[0]):
            coeff = mpq(factors[0])
            factors = factors[1:]
        m = [0] * width
        for f in factors:
            fm = _FACTOR_RE.fullmatch(f)
            if not fm or fm.group(1) not in index:
                raise ValueError(f"bad factor {f!r} in {text!r}")
            pos = index[fm.group(1)]
            e = int(fm.group(2)) if fm.group(2) else 1
            if e < 0 and pos <= n + 1:
                raise ValueError(f"negative exponent on non-unit {fm.group(1)!r}")
            m[pos] += e
        out = out + Poly(n, {tuple(m): sign * coeff}, _clean=False)
    return out


# functional surface


def add(p: Poly, q: Poly) -> Poly:
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def scale(c, p: Poly) -> Poly:
    return p.scale(c)


def h_alias(n: int) -> Poly:
    """h_{n+1} expressed in the stored variables: -(h_1 + ... + h_n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    width = 2 * n + 2
    terms = {}
    for i in range(n):
        m = [0] * width
        m[i] = 1
        terms[tuple(m)] = mpq(-1)
    return Poly(n, terms, _clean=True)


def sigma(i: int, direction: int, p: Poly) -> Poly:
    """sigma_i (direction=+1) or its inverse (direction=-1); sigma_{n+1} is the identity."""
    n = p.n
    if not 1 <= i <= n + 1:
        raise ValueError(f"sigma index {i} out of range for n={n}")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    if i == n + 1:
        return p
    deltas = [0] * n
    deltas[i - 1] = direction
    return p.shift(deltas)


def specialize(p: Poly, values: Mapping[str, object]) -> Poly:
    """Specialize by name: keys ``lam``, ``b`` and ``a1``..``an``."""
    a = {}
    lam = b = None
    for key, v in values.items():
        if key in ("lam", "lambda"):
            lam = v
        elif key == "b":
            b = v
        elif key.startswith("a") and key[1:].isdigit():
            a[int(key[1:])] = v
        else:
            raise ValueError(f"unknown parameter {key!r}")
    return p.specialize(lam=lam, b=b, a=a)
