"""Reducibility of M_p(V(a, S, b, lam)): the obstruction matrix, singular vectors, and the classifier.

A homogeneous degree-N vector sum E^m P_m is killed by every e_{i,n+2} exactly when, for each
|m| = N-1, the column (a_j^{-1}(m_j+1) sigma_j^{-1} P_{m+eps_j})_j is a null vector of the
(n+1)x(n+1) matrix A(lam, b, S, N). Its determinant is (-nb-lam-N+1)(b-lam-N+2)^n, which
vanishes for N = 1-nb-lam (the v1 series) or N = b-lam+2 (the v2 series).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial
from typing import Sequence

from gmpy2 import mpq

from .errors import BadDegree, ConstraintViolated
from .freemod import ModuleParams, is_simple_v
from .gvm import GVMElement, act_gen, monomial
from .liealg import E
from .linalg import nullspace
from .poly import Poly, sigma

SERIES = ("v1", "v2")


# exponent vectors


@lru_cache(maxsize=None)
def compositions(total: int, parts: int) -> tuple[tuple[int, ...], ...]:
    """All m in Z_+^parts with |m| = total, in graded-lex order."""
    out = []
    for combo in combinations_with_replacement(range(parts), total):
        m = [0] * parts
        for k in combo:
            m[k] += 1
        out.append(tuple(m))
    return tuple(sorted(set(out), reverse=True))


def eps(n: int, k: int) -> tuple[int, ...]:
    m = [0] * (n + 1)
    m[k - 1] = 1
    return tuple(m)


def _plus(m, k):
    m = list(m)
    m[k - 1] += 1
    return tuple(m)


# the obstruction matrix


class PolyMatrix:
    """Square matrix of Poly entries."""

    def __init__(self, rows: Sequence[Sequence[Poly]]):
        self.rows = [list(r) for r in rows]
        size = len(self.rows)
        if any(len(r) != size for r in self.rows):
            raise ValueError("PolyMatrix must be square")
        self.size = size

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def matvec(self, x: Sequence[Poly]) -> list[Poly]:
        return [sum((a * b for a, b in zip(row, x)), Poly.zero(x[0].n)) for row in self.rows]

    def det(self) -> Poly:
        return det(self)

    def to_text(self) -> str:
        return "\n".join("[" + ", ".join(e.to_text() for e in row) + "]" for row in self.rows)


def hbar(n: int, i: int) -> Poly:
    """h_i - delta_{i,n+1}."""
    h = Poly.h(n, i)
    return h - 1 if i == n + 1 else h


def build_A(p: ModuleParams, N: int) -> PolyMatrix:
    if N < 1:
        raise BadDegree("N must be >= 1")
    n = p.n
    b = p.b_poly
    one = Poly.const(n, 1)
    rows = []
    for i in range(1, n + 2):
        row = []
        for j in range(1, n + 2):
            if i == j:
                row.append(hbar(n, i) - p.lam_poly - (N - 2))
            else:
                left = one if i in p.S else hbar(n, i) - b
                right = hbar(n, j) - b if j in p.S else one
                row.append(left * right)
        rows.append(row)
    return PolyMatrix(rows)


def det(M: PolyMatrix) -> Poly:
    """Determinant by Laplace expansion along rows, memoized on the remaining column set."""
    size = M.size
    if size == 0:
        raise ValueError("empty matrix")
    n = M[0, 0].n
    memo: dict = {}

    def minor(r: int, cols: tuple) -> Poly:
        if r == size:
            return Poly.const(n, 1)
        if cols in memo:
            return memo[cols]
        acc = Poly.zero(n)
        for pos, c in enumerate(cols):
            entry = M[r, c]
            if not entry:
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            acc = acc - term if pos % 2 else acc + term
        memo[cols] = acc
        return acc

    return minor(0, tuple(range(size)))


def det_closed_form(p: ModuleParams, N: int) -> Poly:
    n = p.n
    b, lam = p.b_poly, p.lam_poly
    return (-(b * n) - lam - (N - 1)) * (b - lam - (N - 2)) ** n


# the polynomial families


def _falling(h: Poly, b: Poly, upto: int, offset: int) -> Poly:
    """prod_{k=1}^{upto} (h - b - k - offset)."""
    out = Poly.const(h.n, 1)
    for k in range(1, upto + 1):
        out = out * (h - b - (k + offset))
    return out


def _prefix(m, p: ModuleParams) -> Poly:
    mf = 1
    for x in m:
        mf *= factorial(x)
    return p.a_power(m).scale(mpq(1, mf))


def _check_m(m, p: ModuleParams):
    if len(m) != p.n + 1 or min(m) < 0:
        raise ValueError(f"bad exponent vector {m} for n={p.n}")


def _outside_S(m, p: ModuleParams, include_last: bool) -> Poly:
    n = p.n
    out = Poly.const(n, 1)
    for s in range(1, n + 2):
        if s in p.S or (s == n + 1 and not include_last):
            continue
        out = out * _falling(Poly.h(n, s), p.b_poly, m[s - 1], 0)
    return out


def _nb_product(p: ModuleParams, count: int, shift: int) -> Poly:
    """prod_{t=1}^{count} (h_{n+1} + nb - t + shift)."""
    n = p.n
    base = Poly.h(n, n + 1) + p.b_poly * n
    out = Poly.const(n, 1)
    for t in range(1, count + 1):
        out = out * (base - (t - shift))
    return out


def _rising(p: ModuleParams, lo: int, hi: int, offset: int) -> Poly:
    """prod_{r=lo}^{hi} (h_{n+1} - b + offset + r)."""
    n = p.n
    base = Poly.h(n, n + 1) - p.b_poly
    out = Poly.const(n, 1)
    for r in range(lo, hi + 1):
        out = out * (base + (offset + r))
    return out


@lru_cache(maxsize=4096)
def build_P(m, p: ModuleParams) -> Poly:
    _check_m(m, p)
    return _prefix(m, p) * _outside_S(m, p, include_last=True)


@lru_cache(maxsize=4096)
def build_Pprime(m, N: int, p: ModuleParams) -> Poly:
    _check_m(m, p)
    if N < sum(m):
        raise BadDegree(f"N={N} < |m|={sum(m)}")
    n = p.n
    last = m[n]
    if n + 1 in p.S:
        mid = _rising(p, 1, N - last, -1)
    else:
        mid = Poly.const(n, 1)
    return _prefix(m, p) * _outside_S(m, p, include_last=False) * mid * _nb_product(p, last, 1)


@lru_cache(maxsize=4096)
def build_Delta(m, N: int, p: ModuleParams) -> Poly:
    _check_m(m, p)
    if N < sum(m):
        raise BadDegree(f"N={N} < |m|={sum(m)}")
    n = p.n
    last = m[n]
    return (
        _prefix(m, p)
        * _outside_S(m, p, include_last=True)
        * _rising(p, 2, N - last, -2)
        * _nb_product(p, last, 0)
    )


@lru_cache(maxsize=4096)
def build_Theta(m, p: ModuleParams) -> Poly:
    _check_m(m, p)
    n = p.n
    return (
        _prefix(m, p)
        * _outside_S(m, p, include_last=False)
        * _falling(Poly.h(n, n + 1), p.b_poly, m[n], 1)
    )


@lru_cache(maxsize=4096)
def build_Upsilon(m, p: ModuleParams) -> Poly:
    _check_m(m, p)
    n = p.n
    return _prefix(m, p) * _outside_S(m, p, include_last=False) * _nb_product(p, m[n], 0)


def shifted_component(Q: Poly, j: int, m, p: ModuleParams) -> Poly:
    """a_j^{-1} (m_j + 1) sigma_j^{-1}(Q), with a_{n+1} = 1 and sigma_{n+1} = id."""
    return (p.a_poly(j, -1) * sigma(j, -1, Q)).scale(m[j - 1] + 1)


def lemma7_cases(m, N: int, p: ModuleParams) -> list[tuple[str, bool]]:
    """Each shift identity relating P_{m+eps_j}, P'_{m+eps_j} to P_m, Delta_m, Theta_m, Upsilon_m."""
    if N < sum(m) + 1:
        raise BadDegree(f"need N >= |m|+1, got N={N}, |m|={sum(m)}")
    n = p.n
    b = p.b_poly
    hlast = Poly.h(n, n + 1)
    nb_term = hlast + b * n
    last_in_S = n + 1 in p.S
    results = []
    if last_in_S:
        Pm = build_P(m, p)
        Dm = build_Delta(m, N, p)
        base_P, base_Pp = Pm, Dm
    else:
        Tm = build_Theta(m, p)
        Um = build_Upsilon(m, p)
        base_P, base_Pp = Tm, Um
    for j in range(1, n + 2):
        mj = _plus(m, j)
        lhs_P = shifted_component(build_P(mj, p), j, m, p)
        lhs_Pp = shifted_component(build_Pprime(mj, N, p), j, m, p)
        hj_b = Poly.h(n, j) - b
        in_S = "inS" if j in p.S else "notinS"
        if last_in_S:
            rhs_P = base_P if j in p.S else hj_b * base_P
            if j == n + 1:
                rhs_Pp = nb_term * base_Pp
            elif j in p.S:
                rhs_Pp = (hlast - b - 1) * base_Pp
            else:
                rhs_Pp = hj_b * (hlast - b - 1) * base_Pp
            tag = "last_in_S"
        else:
            if j == n + 1:
                rhs_P = (hlast - b - 1) * base_P
                rhs_Pp = nb_term * base_Pp
            elif j in p.S:
                rhs_P, rhs_Pp = base_P, base_Pp
            else:
                rhs_P, rhs_Pp = hj_b * base_P, hj_b * base_Pp
            tag = "last_notin_S"
        where = "last" if j == n + 1 else in_S
        results.append((f"{tag}:P:j={j}:{where}", lhs_P == rhs_P))
        results.append((f"{tag}:Pprime:j={j}:{where}", lhs_Pp == rhs_Pp))
    return results


def verify_lemma7(m, N: int, p: ModuleParams) -> bool:
    return all(ok for _, ok in lemma7_cases(m, N, p))


# null vectors and singular vectors


def series_lambda(series: str, N: int, p: ModuleParams) -> Poly:
    """The value of lam forced by the series constraint at degree N."""
    n = p.n
    if series == "v1":
        return -(p.b_poly * n) - (N - 1)
    if series == "v2":
        return p.b_poly - (N - 2)
    raise ValueError(f"unknown series {series!r}")


def constrain(series: str, N: int, p: ModuleParams) -> ModuleParams:
    """Params with lam satisfying the series constraint (substituted if lam is symbolic)."""
    target = series_lambda(series, N, p)
    if p.lam is None:
        c = target.constant_value()
        return replace(p, lam=c if c is not None else target)
    if p.lam_poly != target:
        raise ConstraintViolated(
            f"{series} at N={N} needs lambda = {target.to_text()}, got {p.lam_poly.to_text()}"
        )
    return p


def _series_poly(series: str, m, N: int, p: ModuleParams) -> Poly:
    if series == "v1":
        return build_P(m, p)
    if series == "v2":
        return build_Pprime(m, N, p)
    raise ValueError(f"unknown series {series!r}")


def null_vector(series: str, m, N: int, p: ModuleParams) -> list[Poly]:
    """Null vector of A(lam, b, S, N) built from the degree-N coefficients around m (|m| = N-1)."""
    _check_m(m, p)
    if sum(m) != N - 1:
        raise BadDegree(f"need |m| = N-1, got |m|={sum(m)}, N={N}")
    return [
        shifted_component(_series_poly(series, _plus(m, j), N, p), j, m, p)
        for j in range(1, p.n + 2)
    ]


def singular_vector(series: str, N: int, p: ModuleParams) -> GVMElement:
    if N < 1:
        raise BadDegree("N must be >= 1")
    q = constrain(series, N, p)
    return GVMElement(q, {m: _series_poly(series, m, N, q) for m in compositions(N, p.n + 1)})


def raising_images(v: GVMElement) -> list[GVMElement]:
    """[e_{i,n+2} . v for i = 1..n+1]."""
    n = v.n
    return [act_gen(E(i, n + 2), v) for i in range(1, n + 2)]


def is_singular(v: GVMElement) -> bool:
    return bool(v) and all(not w for w in raising_images(v))


# classification


def _as_int(x: mpq) -> int | None:
    return int(x) if x.denominator == 1 else None


@dataclass
class Witness:
    series: str
    N: int
    vector: GVMElement

    def to_json_obj(self) -> dict:
        return {"series": self.series, "N": self.N, "vector": self.vector.to_json_obj()}


@dataclass
class SimplicityReport:
    params: ModuleParams
    verdict: str  # simple | reducible | inducing-module-not-simple
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    witness: Witness | None = None
    oracle: dict | None = None
    degrees: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "params": self.params.to_json_obj(),
            "verdict": self.verdict,
            "conditions": {"i": self.cond_i, "ii": self.cond_ii, "iii": self.cond_iii},
            "witness": self.witness.to_json_obj() if self.witness else None,
            "oracle": self.oracle,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> SimplicityReport:
        obj = json.loads(text)
        params = ModuleParams.from_json_obj(obj["params"])
        w = obj.get("witness")
        witness = None
        if w:
            wparams = constrain(w["series"], w["N"], params)
            witness = Witness(w["series"], w["N"], GVMElement.from_json_obj(w["vector"], wparams))
        conds = obj["conditions"]
        return cls(
            params=params,
            verdict=obj["verdict"],
            cond_i=conds["i"],
            cond_ii=conds["ii"],
            cond_iii=conds["iii"],
            witness=witness,
            oracle=obj.get("oracle"),
        )

    def to_text(self) -> str:
        lines = [
            f"params: {json.dumps(self.params.to_json_obj())}",
            f"verdict: {self.verdict}",
            f"condition (i)   b - lambda + 2 not in N      : {self.cond_i}",
            f"condition (ii)  nb + lambda - 1 not in -N    : {self.cond_ii}",
            f"condition (iii) inducing module simple       : {self.cond_iii}",
        ]
        if self.witness:
            lines.append(f"witness: {self.witness.series} at N={self.witness.N}")
            lines.append(f"  {self.witness.vector.to_text()}")
        if self.oracle is not None:
            found = sorted({f["N"] for f in self.oracle["found"]})
            lines.append(
                f"oracle (N_max={self.oracle['N_max']}, hdeg={self.oracle['h_deg_max']}): "
                f"singular degrees {found}"
            )
        return "\n".join(lines)


def reducing_degrees(p: ModuleParams) -> dict[str, int]:
    """Degrees N in N (positive integers) at which det A(lam, b, S, N) vanishes, per series."""
    if p.b is None or p.lam is None or isinstance(p.lam, Poly):
        raise ValueError("reducing degrees need concrete b and lambda")
    out = {}
    n1 = _as_int(1 - p.lam - p.n * p.b)
    if n1 is not None and n1 >= 1:
        out["v1"] = n1
    n2 = _as_int(p.b - p.lam + 2)
    if n2 is not None and n2 >= 1:
        out["v2"] = n2
    return out


def classify(p: ModuleParams) -> SimplicityReport:
    if p.b is None or p.lam is None or isinstance(p.lam, Poly):
        raise ValueError("classify needs concrete b and lambda")
    degs = reducing_degrees(p)
    cond_i = "v2" not in degs
    cond_ii = "v1" not in degs
    cond_iii = is_simple_v(p)
    witness = None
    if not cond_iii:
        verdict = "inducing-module-not-simple"
    elif cond_i and cond_ii:
        verdict = "simple"
    else:
        verdict = "reducible"
        series = min(degs, key=lambda s: (degs[s], s))
        N = degs[series]
        vec = singular_vector(series, N, p)
        if not is_singular(vec):
            raise RuntimeError(f"constructed {series} witness at N={N} is not singular")
        witness = Witness(series, N, vec)
    return SimplicityReport(p, verdict, cond_i, cond_ii, cond_iii, witness, degrees=sorted(degs.values()))


# brute-force oracle


@lru_cache(maxsize=None)
def h_monomials(n: int, max_deg: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for d in range(max_deg + 1):
        out.extend(compositions(d, n))
    return tuple(out)


def _mono_poly(n: int, alpha) -> Poly:
    return Poly(n, {tuple(alpha) + (0,) * (n + 2): 1})


def singular_space(p: ModuleParams, N: int, h_deg_max: int) -> list[GVMElement]:
    """Basis of homogeneous degree-N vectors (coefficient h-degree <= h_deg_max) killed by all e_{i,n+2}."""
    if not p.is_concrete:
        raise ValueError("search needs concrete a, b and lambda")
    n = p.n
    unknowns = [
        (m, alpha) for m in compositions(N, n + 1) for alpha in h_monomials(n, h_deg_max)
    ]
    row_index: dict = {}
    rows: list[dict] = []
    for col, (m, alpha) in enumerate(unknowns):
        v = monomial(p, m, _mono_poly(n, alpha))
        for i, w in enumerate(raising_images(v)):
            for mm, P in w.terms.items():
                for mono, c in P.terms.items():
                    key = (i, mm, mono)
                    r = row_index.get(key)
                    if r is None:
                        r = row_index[key] = len(rows)
                        rows.append({})
                    rows[r][col] = c
    out = []
    for vec in nullspace(rows, len(unknowns)):
        terms: dict = {}
        for col, c in sorted(vec.items()):
            m, alpha = unknowns[col]
            P = _mono_poly(n, alpha).scale(c)
            terms[m] = terms[m] + P if m in terms else P
        out.append(GVMElement(p, terms))
    return out


def search_singular(p: ModuleParams, N_max: int = 4, h_deg_max: int = 4) -> list[tuple[int, GVMElement]]:
    found = []
    for N in range(1, N_max + 1):
        found.extend((N, v) for v in singular_space(p, N, h_deg_max))
    return found


def oracle_summary(p: ModuleParams, N_max: int, h_deg_max: int) -> dict:
    found = search_singular(p, N_max, h_deg_max)
    return {
        "N_max": N_max,
        "h_deg_max": h_deg_max,
        "found": [{"N": N, "vector": v.to_json_obj()} for N, v in found],
    }


def cross_check(p: ModuleParams, N_max: int = 4, h_deg_max: int = 4) -> dict:
    """Compare the classifier against the brute-force search at one parameter point.

    The search must find singular vectors at exactly the degrees N <= N_max where
    det A(lam, b, S, N) vanishes, and nowhere when the verdict is simple. Points
    whose inducing module is not simple are reported but not asserted.
    """
    report = classify(p)
    found = search_singular(p, N_max, h_deg_max)
    report.oracle = {
        "N_max": N_max,
        "h_deg_max": h_deg_max,
        "found": [{"N": N, "vector": v.to_json_obj()} for N, v in found],
    }
    found_degrees = sorted({N for N, _ in found})
    expected = sorted({N for N in reducing_degrees(p).values() if N <= N_max})
    agree = found_degrees == expected
    if report.verdict == "simple":
        agree = agree and not found_degrees
    if report.witness is not None and report.witness.N <= N_max:
        agree = agree and report.witness.N in found_degrees
    return {
        "params": p,
        "report": report,
        "found_degrees": found_degrees,
        "expected_degrees": expected,
        "agree": agree,
        "asserted": report.cond_iii,
    }
