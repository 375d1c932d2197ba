"""Generalized Verma module M_p(V(a, S, b, lam)) over sl(n+2).

Elements are finite sums  sum_m E^m P_m  where E^m = e_{n+2,1}^{m_1} ... e_{n+2,n+1}^{m_{n+1}}
and P_m lies in the inducing module. Every basis generator of sl(n+2) acts by a
closed form, so no PBW straightening is needed:

* e_{n+2,i}:  E^m P  ->  E^{m + eps_i} P
* e_{i,n+2}:  E^m P  ->  sum_{k != i} m_k E^{m - eps_k} (e_ik . P)  +  m_i E^{m - eps_i} (h_i - lam - |m| + 1) P
* e_ik (i, k <= n+1):  E^m P  ->  E^m (e_ik . P)  -  m_i E^{m - eps_i + eps_k} P
* h_k (k <= n):  E^m P  ->  E^m (h_k - m_k + |m|/(n+1)) P
* h_{n+2}:  E^m P  ->  (lam + (n+2)|m|/(n+1)) E^m P
"""

from __future__ import annotations

import json
from typing import Iterator, Mapping

from gmpy2 import mpq

from .errors import DimensionMismatch
from .freemod import ModuleParams, act_e
from .liealg import LieElt, LieGen
from .poly import Poly, parse_poly


def _mkey(m):
    return (sum(m), m)


class GVMElement:
    __slots__ = ("params", "terms")

    def __init__(self, params: ModuleParams, terms: Mapping[tuple, Poly] | None = None):
        self.params = params
        n = params.n
        clean = {}
        for m, P in (terms or {}).items():
            m = tuple(int(x) for x in m)
            if len(m) != n + 1 or min(m) < 0:
                raise ValueError(f"bad exponent vector {m} for n={n}")
            if P:
                clean[m] = P
        self.terms = clean

    @property
    def n(self) -> int:
        return self.params.n

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[tuple, Poly]]:
        return iter(sorted(self.terms.items(), key=lambda t: _mkey(t[0])))

    def __eq__(self, other):
        if isinstance(other, GVMElement):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def _check(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f"n={self.n} vs n={other.n}")

    def __add__(self, other: GVMElement) -> GVMElement:
        self._check(other)
        out = dict(self.terms)
        for m, P in other.terms.items():
            out[m] = out[m] + P if m in out else P
        return GVMElement(self.params, out)

    def __neg__(self):
        return GVMElement(self.params, {m: -P for m, P in self.terms.items()})

    def __sub__(self, other: GVMElement) -> GVMElement:
        return self + (-other)

    def scale(self, c) -> GVMElement:
        if isinstance(c, Poly):
            return GVMElement(self.params, {m: c * P for m, P in self.terms.items()})
        return GVMElement(self.params, {m: P.scale(c) for m, P in self.terms.items()})

    __rmul__ = scale

    def degree(self) -> int | None:
        return degree(self)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def map_coefficients(self, fn) -> GVMElement:
        return GVMElement(self.params, {m: fn(P) for m, P in self.terms.items()})

    # text / JSON

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"E[{','.join(map(str, m))}] * ( {P.to_text()} )" for m, P in self
        )

    __str__ = to_text

    def __repr__(self):
        return f"GVMElement({self.to_text()!r})"

    def to_json_obj(self) -> dict:
        return {"terms": [{"m": list(m), "p": P.to_text()} for m, P in self]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict, params: ModuleParams) -> GVMElement:
        n = params.n
        terms: dict = {}
        for t in obj["terms"]:
            m = tuple(t["m"])
            P = parse_poly(t["p"], n)
            terms[m] = terms[m] + P if m in terms else P
        return cls(params, terms)

    @classmethod
    def parse(cls, text: str, params: ModuleParams) -> GVMElement:
        s = text.strip()
        if s == "0":
            return cls(params)
        terms: dict = {}
        for chunk in s.split(") + E["):
            chunk = chunk.strip()
            if not chunk.startswith("E["):
                chunk = "E[" + chunk
            if not chunk.endswith(")"):
                chunk = chunk + ")"
            head, _, body = chunk.partition("] * (")
            m = tuple(int(x) for x in head[2:].split(","))
            P = parse_poly(body[:-1], params.n)
            terms[m] = terms[m] + P if m in terms else P
        return cls(params, terms)


def inject(f: Poly, params: ModuleParams) -> GVMElement:
    """1 (x) f."""
    return GVMElement(params, {(0,) * (params.n + 1): f})


def monomial(params: ModuleParams, m, P: Poly | None = None) -> GVMElement:
    """E^m P (P defaults to 1)."""
    if P is None:
        P = Poly.const(params.n, 1)
    return GVMElement(params, {tuple(m): P})


def degree(v: GVMElement) -> int | None:
    if not v.terms:
        return None
    return max(sum(m) for m in v.terms)


def homogeneous_components(v: GVMElement) -> list[tuple[int, GVMElement]]:
    groups: dict[int, dict] = {}
    for m, P in v.terms.items():
        groups.setdefault(sum(m), {})[m] = P
    return [(k, GVMElement(v.params, groups[k])) for k in sorted(groups)]


def _accumulate(out: dict, m, P: Poly):
    if m in out:
        out[m] = out[m] + P
    else:
        out[m] = P


def act_gen(g: LieGen, v: GVMElement) -> GVMElement:
    p = v.params
    n = p.n
    out: dict = {}
    if g.kind == "H":
        if g.i == n + 2:
            lam = p.lam_poly
            for m, P in v.terms.items():
                w = lam + mpq((n + 2) * sum(m), n + 1)
                _accumulate(out, m, w * P)
        else:
            k = g.i
            hk = Poly.h(n, k)
            for m, P in v.terms.items():
                w = hk + (mpq(sum(m), n + 1) - m[k - 1])
                _accumulate(out, m, w * P)
        return GVMElement(p, out)

    i, j = g.i, g.j
    if i == n + 2:
        # e_{n+2,j}: multiply by the PBW variable
        for m, P in v.terms.items():
            mm = list(m)
            mm[j - 1] += 1
            _accumulate(out, tuple(mm), P)
        return GVMElement(p, out)

    if j == n + 2:
        # e_{i,n+2}: lowers degree by one
        hi_minus = Poly.h(n, i) - p.lam_poly
        for m, P in v.terms.items():
            N = sum(m)
            for k in range(1, n + 2):
                mk = m[k - 1]
                if not mk:
                    continue
                mm = list(m)
                mm[k - 1] -= 1
                mm = tuple(mm)
                if k == i:
                    term = ((hi_minus - (N - 1)) * P).scale(mk)
                else:
                    term = act_e(i, k, P, p).scale(mk)
                _accumulate(out, mm, term)
        return GVMElement(p, out)

    # e_ik inside sl(n+1)
    for m, P in v.terms.items():
        _accumulate(out, m, act_e(i, j, P, p))
        mi = m[i - 1]
        if mi:
            mm = list(m)
            mm[i - 1] -= 1
            mm[j - 1] += 1
            _accumulate(out, tuple(mm), P.scale(-mi))
    return GVMElement(p, out)


def act(x: LieElt, v: GVMElement) -> GVMElement:
    """Action of x in sl(n+2) on v."""
    if x.n != v.n:
        raise DimensionMismatch(f"n={x.n} vs n={v.n}")
    out = GVMElement(v.params)
    for g, c in x.terms.items():
        out = out + act_gen(g, v).scale(c)
    return out
