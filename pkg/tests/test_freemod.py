import json

import pytest
from gmpy2 import mpq

from gvm_forge.errors import OutOfSubalgebra, SymbolicUndecidable, ZeroUnit
from gvm_forge.freemod import ModuleParams, act_v, is_simple_v
from gvm_forge.liealg import E, H, LieElt, basis_sl_n1, h_elt
from gvm_forge.poly import Poly, parse_poly
from gvm_forge.suites import all_subsets, central_checks, freemod_axiom_checks, probe_set


def g(n, gen):
    return LieElt.gen(n, gen)


def test_h_acts_by_multiplication():
    n = 2
    p = ModuleParams(n, frozenset({1}))
    f = Poly.h(n, 1) * Poly.b(n) + 3
    assert act_v(g(n, H(1)), f, p) == Poly.h(n, 1) * f
    assert act_v(g(n, H(n + 2)), f, p) == Poly.lam(n) * f


def test_both_indices_in_S():
    n = 2
    p = ModuleParams(n, frozenset({1, 2, 3}))
    one = Poly.const(n, 1)
    expected = Poly.a(n, 1) * Poly.a(n, 2, -1) * (Poly.h(n, 2) - Poly.b(n))
    assert act_v(g(n, E(1, 2)), one, p) == expected


def test_empty_S_hand_evaluation():
    n = 1
    p = ModuleParams(n, frozenset())
    h1, b = Poly.h(n, 1), Poly.b(n)
    got = act_v(g(n, E(1, 2)), h1, p)
    assert got == Poly.a(n, 1) * (h1 - b - 1) * (h1 - 1)


def test_concrete_parameters_specialize_symbolic_result():
    n = 2
    S = frozenset({2})
    sym = ModuleParams(n, S)
    conc = ModuleParams(n, S, a=(mpq(2), mpq(-1, 3)), b=mpq(1, 2), lam=mpq(4))
    f = Poly.h(n, 1) * Poly.h(n, 2) - 1
    for x in basis_sl_n1(n) + [g(n, H(n + 2))]:
        expected = act_v(x, f, sym).specialize(lam=4, b=mpq(1, 2), a={1: 2, 2: mpq(-1, 3)})
        assert act_v(x, f, conc) == expected


def test_out_of_subalgebra():
    p = ModuleParams(1, frozenset())
    with pytest.raises(OutOfSubalgebra):
        act_v(g(1, E(1, 3)), Poly.const(1, 1), p)


def test_zero_unit_rejected():
    with pytest.raises(ZeroUnit):
        ModuleParams(1, frozenset(), a=(mpq(0),))


def test_is_simple_v_examples():
    assert is_simple_v(ModuleParams(2, frozenset({1})))
    assert not is_simple_v(ModuleParams(1, frozenset({1, 2}), b=mpq(0)))
    assert is_simple_v(ModuleParams(1, frozenset(), b=mpq(1, 3)))
    assert not is_simple_v(ModuleParams(1, frozenset(), b=mpq(1, 2)))
    with pytest.raises(SymbolicUndecidable):
        is_simple_v(ModuleParams(1, frozenset()))


def test_params_json_round_trip():
    cases = [
        ModuleParams(2, frozenset({1, 3})),
        ModuleParams(1, frozenset(), a=(mpq(2),), b=mpq(-1, 2), lam=mpq(3)),
        ModuleParams(1, frozenset({2}), lam=Poly.b(1) + 1),
    ]
    for p in cases:
        text = json.dumps(p.to_json_obj())
        back = ModuleParams.from_json_obj(json.loads(text))
        assert back == p
        assert json.dumps(back.to_json_obj()) == text


def test_lambda_constraint_text():
    p = ModuleParams(1, frozenset(), lam=parse_poly("b - 1", 1))
    assert p.lam_poly == Poly.b(1) - 1


@pytest.mark.parametrize("n", [1, 2])
def test_module_axiom(n):
    bad = [label for label, ok in freemod_axiom_checks(n) if not ok]
    assert not bad


@pytest.mark.parametrize("n", [1, 2])
def test_central_h(n):
    assert all(ok for _, ok in central_checks(n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_carrier_is_free_rank_one(n):
    # g . 1 built from the h-action alone reproduces g
    for S in all_subsets(n):
        p = ModuleParams(n, S)
        for g_ in probe_set(n):
            total = Poly.zero(n)
            for mono, c in g_.terms.items():
                f = Poly.const(n, 1)
                for i in range(1, n + 1):
                    for _ in range(mono[i - 1]):
                        f = act_v(h_elt(n, i), f, p)
                total = total + f.scale(c)
            assert total == g_


def test_probe_set_shape():
    assert len(probe_set(1)) == 4
    assert len(probe_set(2)) == 5
