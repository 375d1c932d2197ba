import json
from fractions import Fraction

import pytest
from conftest import evaluate
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from gvm_forge.analysis import (
    PolyMatrix,
    SimplicityReport,
    build_A,
    build_P,
    build_Pprime,
    build_Theta,
    classify,
    compositions,
    constrain,
    cross_check,
    det,
    det_closed_form,
    is_singular,
    lemma7_cases,
    null_vector,
    raising_images,
    reducing_degrees,
    search_singular,
    singular_vector,
    verify_lemma7,
)
from gvm_forge.errors import BadDegree, ConstraintViolated
from gvm_forge.freemod import ModuleParams
from gvm_forge.gvm import act, degree
from gvm_forge.liealg import basis, h_elt
from gvm_forge.poly import Poly
from gvm_forge.suites import all_subsets


def params(n, S, **kw):
    return ModuleParams(n, frozenset(S), **kw)


def concrete(n, S, b, lam, a=None):
    a = a or tuple(mpq(i + 1) for i in range(1, n + 1))
    return params(n, S, a=a, b=mpq(b), lam=mpq(lam))


def rank(vectors):
    """Rank of sparse vectors (dict key -> rational) by Fraction elimination."""
    rows = [{k: Fraction(int(v.numerator), int(v.denominator)) for k, v in vec.items() if v} for vec in vectors]
    pivots = {}
    r = 0
    for row in rows:
        row = dict(row)
        for k, prow in pivots.items():
            if k in row:
                f = row[k]
                for kk, vv in prow.items():
                    row[kk] = row.get(kk, 0) - f * vv
                row = {kk: vv for kk, vv in row.items() if vv}
        if row:
            k = min(row)
            inv = 1 / row[k]
            prow = {kk: vv * inv for kk, vv in row.items()}
            for pk, other in pivots.items():
                if k in other:
                    f = other[k]
                    for kk, vv in prow.items():
                        other[kk] = other.get(kk, 0) - f * vv
                    pivots[pk] = {kk: vv for kk, vv in other.items() if vv}
            pivots[k] = prow
            r += 1
    return r


def flatten(v):
    return {(m, mono): c for m, P in v.terms.items() for mono, c in P.terms.items()}


# the obstruction matrix


def test_matrix_entries():
    n = 1
    h1, b, lam = Poly.h(n, 1), Poly.b(n), Poly.lam(n)
    A = build_A(params(n, {1, 2}), 2)
    assert A[1, 1] == -h1 - 1 - lam - 2 + 2
    A = build_A(params(n, set()), 3)
    assert A[0, 1] == h1 - b
    for S in all_subsets(n):
        # diagonal at i = n+1 carries the shift from h-bar
        A = build_A(params(n, S), 1)
        assert A[n, n] == -h1 - 1 - lam - 1 + 2


def test_det_examples():
    p = params(2, {1}, b=mpq(0), lam=mpq(0))
    assert det(build_A(p, 1)) == 0
    one = Poly.const(1, 1)
    zero = Poly.zero(1)
    assert det(PolyMatrix([[one, zero], [zero, one]])) == 1


def det_oracle(n, S, N, b, lam, point):
    """Specialize every entry, then take a Fraction determinant by elimination."""
    A = build_A(params(n, S), N)
    size = n + 1
    vals = list(point) + [lam, b]
    M = [[evaluate(A[i, j], vals + [1] * n) for j in range(size)] for i in range(size)]
    d = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if M[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        for r in range(c + 1, size):
            f = M[r][c] / M[c][c]
            M[r] = [M[r][k] - f * M[c][k] for k in range(size)]
    return d


@settings(max_examples=40)
@given(
    st.integers(1, 3),
    st.data(),
    st.integers(1, 4),
    st.fractions(-3, 3, max_denominator=3),
    st.fractions(-3, 3, max_denominator=3),
)
def test_det_matches_numeric_oracle(n, data, N, b, lam):
    S = data.draw(st.sampled_from(all_subsets(n)))
    point = data.draw(st.lists(st.fractions(-3, 3, max_denominator=2), min_size=n, max_size=n))
    expected = (-n * b - lam - N + 1) * (b - lam - N + 2) ** n
    assert det_oracle(n, S, N, b, lam, point) == expected


@pytest.mark.parametrize("n", [1, 2])
def test_det_identity_symbolic(n):
    for S in all_subsets(n):
        p = params(n, S)
        for N in (1, 2, 3):
            d = det(build_A(p, N))
            assert d == det_closed_form(p, N)
            assert d.h_degree() == 0


# polynomial families


def test_family_examples():
    n = 1
    h1, b = Poly.h(n, 1), Poly.b(n)
    assert build_P((0, 0), params(n, {1})) == 1
    assert build_Pprime((0, 1), 1, params(n, {1, 2})) == -h1 + b
    assert build_Theta((1, 0), params(n, set())) == Poly.a(n, 1) * (h1 - b - 1)


def test_bad_degree():
    with pytest.raises(BadDegree):
        build_Pprime((2, 0), 1, params(1, {1}))
    with pytest.raises(BadDegree):
        null_vector("v1", (1, 0), 1, params(1, {1}))


@pytest.mark.parametrize("n", [1, 2])
def test_lemma7_small(n):
    for S in all_subsets(n):
        p = params(n, S)
        assert verify_lemma7((0,) * (n + 1), 1, p)
        for k in range(3):
            for m in compositions(k, n + 1):
                assert verify_lemma7(m, k + 1, p)


def test_lemma7_case_coverage():
    names = set()
    for S in all_subsets(2):
        for name, _ in lemma7_cases((1, 0, 1), 3, params(2, S)):
            names.add(name.split(":j=")[0] + ":" + name.rsplit(":", 1)[1])
    # two branches on n+1 in S, two families, j in S / not in S / j = n+1
    assert len(names) == 12


# null vectors and singular vectors


def test_null_vector_components():
    n = 1
    p = params(n, {1})
    q = constrain("v1", 1, p)
    comps = null_vector("v1", (0, 0), 1, q)
    P_e1 = build_P((1, 0), q)
    assert comps[0] == (Poly.a(n, 1, -1) * P_e1).shift([-1])
    assert comps[1] == build_P((0, 1), q)


@pytest.mark.parametrize("series", ["v1", "v2"])
@pytest.mark.parametrize("n", [1, 2])
def test_null_vectors_are_null(series, n):
    for S in all_subsets(n):
        for N in (1, 2):
            q = constrain(series, N, params(n, S))
            A = build_A(q, N)
            for m in compositions(N - 1, n + 1):
                assert all(not x for x in A.matvec(null_vector(series, m, N, q)))


@pytest.mark.parametrize("series", ["v1", "v2"])
def test_singular_vectors_symbolic(series):
    n = 1
    for S in all_subsets(n):
        for N in (1, 2, 3):
            v = singular_vector(series, N, params(n, S))
            assert v and degree(v) == N and v.is_homogeneous()
            assert is_singular(v)
            lam = v.params.lam_poly
            assert act(h_elt(n, n + 2), v) == v.scale(lam + mpq((n + 2) * N, n + 1))


def test_degree_floor():
    n = 2
    for series in ("v1", "v2"):
        v = singular_vector(series, 2, params(n, {1, 3}))
        for x in basis(n):
            out = act(x, v)
            assert not out or degree(out) >= 2


def test_constraint_violated():
    with pytest.raises(ConstraintViolated):
        singular_vector("v2", 1, concrete(1, {1}, 0, 0))


def test_constraint_substitution():
    q = constrain("v2", 3, params(2, {1}))
    assert q.lam_poly == Poly.b(2) - 1
    q = constrain("v1", 2, params(2, {1}, b=mpq(1, 2)))
    assert q.lam == mpq(-2)


# classification


def test_classify_simple_example():
    p = concrete(1, {1}, mpq(1, 3), 5)
    rep = classify(p)
    assert rep.verdict == "simple" and rep.witness is None
    assert (rep.cond_i, rep.cond_ii, rep.cond_iii) == (True, True, True)
    assert search_singular(p, N_max=5, h_deg_max=4) == []


def test_classify_v2_example():
    rep = classify(concrete(1, {1}, 0, 1))
    assert rep.verdict == "reducible"
    assert not rep.cond_i and rep.cond_ii
    assert (rep.witness.series, rep.witness.N) == ("v2", 1)
    assert degree(rep.witness.vector) == 1
    assert all(not w for w in raising_images(rep.witness.vector))


def test_classify_v1_example():
    rep = classify(concrete(2, {3}, mpq(-1, 2), 1))
    assert rep.verdict == "reducible"
    assert rep.cond_i and not rep.cond_ii
    assert (rep.witness.series, rep.witness.N) == ("v1", 1)
    assert is_singular(rep.witness.vector)


def test_classify_inducing_module_not_simple():
    rep = classify(concrete(1, {1, 2}, 0, 5))
    assert rep.verdict == "inducing-module-not-simple"
    assert not rep.cond_iii


def test_reducing_degrees_boundaries():
    # b - lam + 2 = 0 is not a positive integer; nb + lam - 1 = 0 is not negative
    assert reducing_degrees(concrete(1, {1}, 0, 2)) == {}
    assert reducing_degrees(concrete(1, {1}, 0, 1)) == {"v2": 1}
    assert reducing_degrees(concrete(1, {1}, -1, 1)) == {"v1": 1}
    assert reducing_degrees(concrete(1, {1}, mpq(1, 2), 1)) == {}


def test_search_examples():
    p = concrete(1, {1}, 0, 1, a=(mpq(1),))
    found = search_singular(p, N_max=2, h_deg_max=3)
    at1 = [v for N, v in found if N == 1]
    assert at1
    w = singular_vector("v2", 1, p)
    span = [flatten(v) for v in at1]
    assert rank(span + [flatten(w)]) == rank(span)
    assert search_singular(p, N_max=0) == []


def test_search_solutions_are_singular():
    p = concrete(2, {3}, mpq(-1, 2), 1)
    for N, v in search_singular(p, N_max=1, h_deg_max=2):
        assert degree(v) == N and is_singular(v)


@pytest.mark.parametrize(
    "n,S,b,lam",
    [(1, {1}, 0, 1), (1, {2}, mpq(-1, 2), mpq(-1, 2)), (1, {1}, 1, 1), (2, {1}, mpq(1, 3), 5), (1, set(), 1, 2)],
)
def test_cross_check_points(n, S, b, lam):
    res = cross_check(concrete(n, S, b, lam), N_max=2, h_deg_max=3)
    assert res["agree"]


# reports


def test_report_round_trip():
    for p in [concrete(1, {1}, 0, 1), concrete(1, {1}, mpq(1, 3), 5), concrete(2, {3}, mpq(-1, 2), 1)]:
        text = classify(p).to_json()
        assert SimplicityReport.from_json(text).to_json() == text
    res = cross_check(concrete(1, {1}, 0, 1), N_max=1, h_deg_max=2)
    text = res["report"].to_json()
    assert SimplicityReport.from_json(text).to_json() == text
    assert json.loads(text)["oracle"]["N_max"] == 1
