"""Property suites shared by the CLI and the test-suite: module axioms and commutation identities."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Callable, Iterator

from gmpy2 import mpq

from .freemod import ModuleParams, act_v
from .gvm import GVMElement, act, inject
from .liealg import E, LieElt, basis, basis_sl_n1, bracket, h_elt
from .poly import Poly


def all_subsets(n: int) -> list[frozenset]:
    idx = range(1, n + 2)
    return [frozenset(c) for r in range(n + 2) for c in combinations(idx, r)]


def probe_set(n: int) -> list[Poly]:
    h1 = Poly.h(n, 1)
    probes = [Poly.const(n, 1), h1, Poly.h(n, n), h1 * h1]
    if n >= 2:
        probes.append(h1 * Poly.h(n, 2))
    return probes


def random_poly(rng: random.Random, n: int, max_hdeg: int, with_b: bool = True) -> Poly:
    P = Poly.zero(n)
    for _ in range(rng.randint(1, 3)):
        term = Poly.const(n, mpq(rng.randint(-4, 4), rng.randint(1, 3)))
        for _ in range(rng.randint(0, max_hdeg)):
            term = term * Poly.h(n, rng.randint(1, n))
        if with_b and rng.random() < 0.25:
            term = term * Poly.b(n)
        P = P + term
    if not P:
        P = Poly.const(n, 1)
    return P


def random_element(rng: random.Random, params: ModuleParams, max_degree: int = 3, max_hdeg: int = 2) -> GVMElement:
    n = params.n
    terms: dict = {}
    for _ in range(rng.randint(1, 4)):
        m = [0] * (n + 1)
        for _ in range(rng.randint(0, max_degree)):
            m[rng.randrange(n + 1)] += 1
        m = tuple(m)
        P = random_poly(rng, n, max_hdeg)
        terms[m] = terms[m] + P if m in terms else P
    v = GVMElement(params, terms)
    return v if v else GVMElement(params, {(0,) * (n + 1): Poly.const(n, 1)})


def freemod_axiom_checks(n: int, subsets=None) -> Iterator[tuple[str, bool]]:
    """[x,y].f == x.(y.f) - y.(x.f) over sl(n+1) basis pairs and the probe set, symbolic a, b."""
    B = basis_sl_n1(n)
    for S in subsets if subsets is not None else all_subsets(n):
        p = ModuleParams(n, S)
        for f in probe_set(n):
            img = [act_v(x, f, p) for x in B]
            for ix, x in enumerate(B):
                for iy, y in enumerate(B):
                    lhs = act_v(bracket(x, y), f, p)
                    rhs = act_v(x, img[iy], p) - act_v(y, img[ix], p)
                    yield f"S={sorted(S)} x={x} y={y} f={f}", lhs == rhs


def central_checks(n: int, subsets=None) -> Iterator[tuple[str, bool]]:
    """h_{n+2} commutes with the sl(n+1) action on the inducing module."""
    hz = h_elt(n, n + 2)
    for S in subsets if subsets is not None else all_subsets(n):
        p = ModuleParams(n, S)
        for f in probe_set(n):
            for x in basis_sl_n1(n):
                ok = act_v(hz, act_v(x, f, p), p) == act_v(x, act_v(hz, f, p), p)
                yield f"S={sorted(S)} x={x} f={f}", ok


def gvm_axiom_checks(
    n: int, lambdas=(0, mpq(1, 2)), samples: int = 20, seed: int = 0, subsets=None
) -> Iterator[tuple[str, bool]]:
    """[x,y].v == x.(y.v) - y.(x.v) over sl(n+2) basis pairs on seeded random v, symbolic a, b."""
    rng = random.Random(seed)
    B = basis(n)
    for S in subsets if subsets is not None else all_subsets(n):
        for lam in lambdas:
            p = ModuleParams(n, S, lam=lam)
            for s in range(samples):
                v = random_element(rng, p)
                img = [act(x, v) for x in B]
                for ix, x in enumerate(B):
                    for iy, y in enumerate(B):
                        lhs = act(bracket(x, y), v)
                        rhs = act(x, img[iy]) - act(y, img[ix])
                        yield f"S={sorted(S)} lam={lam} sample={s} x={x} y={y}", lhs == rhs


# commutation identities in U(sl(n+2)), checked by acting on module elements

Op = Callable[[GVMElement], GVMElement]


def _gen(n: int, g) -> Op:
    x = LieElt.gen(n, g)
    return lambda v: act(x, v)


def _elt(x: LieElt) -> Op:
    return lambda v: act(x, v)


def _power(op: Op, m: int) -> Op:
    def run(v):
        for _ in range(m):
            v = op(v)
        return v

    return run


def _compose(*ops: Op) -> Op:
    # rightmost operator acts first
    def run(v):
        for op in reversed(ops):
            v = op(v)
        return v

    return run


def lemma2_identities(n: int, m: int) -> Iterator[tuple[str, Op, Op]]:
    """(name, lhs, rhs) operator pairs for the six PBW commutation formulas at power m."""
    hz = h_elt(n, n + 2)
    for i in range(1, n + 2):
        up_i = _gen(n, E(n + 2, i))
        down_i = _gen(n, E(i, n + 2))
        hi = h_elt(n, i)
        for k in range(1, n + 2):
            if k == i:
                continue
            up_k = _gen(n, E(n + 2, k))
            eik = _gen(n, E(i, k))
            yield (
                f"e({i},{n+2}) e({n+2},{k})^{m}",
                _compose(down_i, _power(up_k, m)),
                lambda v, up_k=up_k, down_i=down_i, eik=eik: (
                    _compose(_power(up_k, m), down_i)(v) + _compose(_power(up_k, m - 1), eik)(v).scale(m)
                ),
            )
            yield (
                f"e({i},{k}) e({n+2},{i})^{m}",
                _compose(eik, _power(up_i, m)),
                lambda v, up_i=up_i, up_k=up_k, eik=eik: (
                    _compose(_power(up_i, m), eik)(v) - _compose(up_k, _power(up_i, m - 1))(v).scale(m)
                ),
            )
            hk = h_elt(n, k)
            yield (
                f"h{k} e({n+2},{i})^{m}",
                _compose(_elt(hk), _power(up_i, m)),
                lambda v, up_i=up_i, hk=hk: (
                    _power(up_i, m)(act(hk, v) + v.scale(mpq(m, n + 1)))
                ),
            )
        yield (
            f"e({i},{n+2}) e({n+2},{i})^{m}",
            _compose(down_i, _power(up_i, m)),
            lambda v, up_i=up_i, down_i=down_i, hi=hi: (
                _compose(_power(up_i, m), down_i)(v)
                + _power(up_i, m - 1)(act(hi - hz, v) - v.scale(m - 1)).scale(m)
            ),
        )
        yield (
            f"h{i} e({n+2},{i})^{m}",
            _compose(_elt(hi), _power(up_i, m)),
            lambda v, up_i=up_i, hi=hi: _power(up_i, m)(act(hi, v) - v.scale(mpq(m * n, n + 1))),
        )
        yield (
            f"h{n+2} e({n+2},{i})^{m}",
            _compose(_elt(hz), _power(up_i, m)),
            lambda v, up_i=up_i: _power(up_i, m)(act(hz, v) + v.scale(mpq((n + 2) * m, n + 1))),
        )


def lemma2_checks(n: int, ms=(1, 2, 3), subsets=None, extra_samples: int = 2, seed: int = 0) -> Iterator[tuple[str, bool]]:
    """Both sides of each commutation formula applied to 1 (x) f and to random elements."""
    rng = random.Random(seed)
    for S in subsets if subsets is not None else all_subsets(n):
        p = ModuleParams(n, S)
        vs = [inject(f, p) for f in probe_set(n)]
        vs += [random_element(rng, p, max_degree=2, max_hdeg=1) for _ in range(extra_samples)]
        for m in ms:
            for name, lhs, rhs in lemma2_identities(n, m):
                for idx, v in enumerate(vs):
                    yield f"S={sorted(S)} m={m} {name} probe={idx}", lhs(v) == rhs(v)
