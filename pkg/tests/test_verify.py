import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tymtc.abelian import make_group
from tymtc.center import center_modular_data
from tymtc.cyclotomic import CyclotomicArray, CyclotomicNumber, root_of_unity
from tymtc.eseries import ECategory, e_modular_data
from tymtc.forms import bicharacter_from_exponents
from tymtc.modular_data import ModularData
from tymtc.ty import TYCategory
from tymtc.verify import (
    check_axioms,
    galois_product_check,
    prop_6_2_check,
    theorem_6_1_check,
    verlinde,
    verlinde_fusion,
    zero_structure,
)

Z = root_of_unity


def center3(tau=1):
    return center_modular_data(TYCategory(bicharacter_from_exponents(make_group([3]), [[2]]), tau))


def e3(sign=1):
    return e_modular_data(ECategory.from_spec("3", "diag:1", sign))


def semion():
    S = CyclotomicArray.from_integers(np.array([[1, 1], [1, -1]]), 4)
    return ModularData(["1", "s"], [CyclotomicNumber.one()] * 2, [Z(4, 0), Z(4, 1)], S)


def fibonacci():
    phi = 1 + Z(5, 1) + Z(5, 4)
    S = CyclotomicArray.from_numbers([[CyclotomicNumber.one(), phi], [phi, CyclotomicNumber.from_rational(-1)]])
    return ModularData(["1", "t"], [CyclotomicNumber.one(), phi], [Z(5, 0), Z(5, 2)], S)


def numeric_verlinde(md):
    S = md.S.to_complex()
    D = complex(md.global_dim)
    return np.einsum("xw,yw,zw,w->xyz", S, S, S.conj(), 1 / S[0]) / D


def test_verlinde_matches_numeric_oracle():
    for md in (center3(), center3(-1), e3(), semion(), fibonacci()):
        N = verlinde_fusion(md)
        assert np.allclose(N, numeric_verlinde(md).real, atol=1e-9)
        K = md.rank
        assert (N[0] == np.eye(K, dtype=np.int64)).all()
        assert (N >= 0).all()


def test_verlinde_examples():
    md = e3()
    N = verlinde_fusion(md)
    y = md.index("Y(1)")
    assert [md.labels[k] for k in np.flatnonzero(N[y, y])] == ["1", "X-", "Y(1)"]
    Nc = verlinde_fusion(center3())
    assert Nc.shape == (15, 15, 15)
    d = np.array([complex(x).real for x in center3().dims])
    assert np.allclose(np.einsum("xyz,z->xy", Nc, d), np.outer(d, d))


def test_check_axioms_examples():
    rep = check_axioms(center3())
    assert rep.passed
    assert CyclotomicNumber.from_json(rep.derived["global_dim"]["exact"]) == 36
    md = e_modular_data(ECategory.from_spec("3,3", "diag:2,1", 1))
    rep = check_axioms(md)
    assert rep.passed
    assert CyclotomicNumber.from_json(rep.derived["central_charge"]["exact"]) == 1
    obj = json.loads(rep.to_json())
    assert obj["passed"] and obj["checks"]["verlinde"]["status"] == "pass"


def test_non_weakly_integral_data_is_accepted_and_zero_checks_skip():
    rep = check_axioms(fibonacci(), {"axioms", "verlinde", "zeros", "prop62"})
    assert rep.passed
    wi = rep.checks["weakly_integral"]
    assert not wi.passed and wi.skipped  # recorded, not fatal
    assert rep.checks["theorem_6_1"].skipped and rep.checks["prop_6_2"].skipped
    re, im = rep.derived["central_charge"]["numeric"]
    assert abs(complex(re, im) - np.exp(2j * np.pi * 14 / 40)) < 1e-9
    with pytest.raises(ValueError):
        zero_structure(fibonacci(), "t")


def test_weak_integrality_flag():
    assert check_axioms(center3()).checks["weakly_integral"].passed


def _flip_zero(md, symmetric=False):
    i, j = np.argwhere(md.S.is_zero_mask())[0]
    S = md.S.copy()
    S[int(i), int(j)] = CyclotomicNumber.one()
    if symmetric:
        S[int(j), int(i)] = CyclotomicNumber.one()
    return md.with_S(S), (int(i), int(j))


@pytest.mark.parametrize("make", [center3, e3])
def test_fault_injection_rejected(make):
    md = make()
    bad, (i, j) = _flip_zero(md)
    rep = check_axioms(bad, {"axioms", "verlinde", "zeros", "prop62"})
    assert not rep.passed
    assert not rep.checks["symmetric"].passed
    assert rep.checks["symmetric"].counterexample in ([i, j], [j, i], (i, j), (j, i))
    bad2, (i, j) = _flip_zero(md, symmetric=True)
    rep2 = check_axioms(bad2)
    assert rep2.checks["symmetric"].passed
    assert not rep2.checks["unitarity"].passed
    assert not rep2.passed


def test_corrupted_twist_breaks_balancing():
    md = e3()
    theta = list(md.theta)
    theta[2] = theta[2] * Z(3, 1)
    bad = ModularData(md.labels, md.dims, theta, md.S)
    rep = check_axioms(bad)
    assert not rep.checks["balancing"].passed
    assert not rep.passed


def test_zero_structure_examples():
    md = center3()
    u = zero_structure(md, md.labels[0])
    assert u.T == []
    big = [lab for lab in md.labels if lab.startswith("Z")]
    two = [lab for lab in md.labels if lab.startswith("Y")]
    z = zero_structure(md, big[0])
    assert set(two) <= set(z.T)
    assert z.dim_T >= 12
    # the Big rows reach their largest modulus on the Big columns
    assert set(z.U) == set(big) and z.dim_U == 18
    assert 3 * z.dim_T + z.dim_U == 54 > 36
    y = zero_structure(md, two[0])
    assert set(big) <= set(y.T) and 3 * y.dim_T + y.dim_U > 36
    ey = zero_structure(e3(), "Y(1)")
    assert ey.T == ["Z0", "Z1"] and ey.dim_T == 6
    assert ey.U == ["Y(1)"] and ey.dim_U == 4
    assert 3 * ey.dim_T + ey.dim_U > 12
    # partition O = T + D + {1}
    for lab in md.labels:
        zs = zero_structure(md, lab)
        assert sorted(zs.T + zs.D + [md.labels[0]]) == sorted(md.labels) or lab == md.labels[0]


def test_section_six_checks():
    for md in (center3(), center3(-1), e3(), e_modular_data(ECategory.from_spec("5", "diag:2", -1))):
        assert theorem_6_1_check(md).passed
        assert prop_6_2_check(md).passed
        for i, d in enumerate(md.dims):
            if (d * d).is_rational() > 1:
                assert galois_product_check(md, md.labels[i]).passed
    # pointed datum: vacuous
    assert theorem_6_1_check(semion()).passed
    assert prop_6_2_check(semion()).passed
    assert galois_product_check(center3(), center3().labels[0]).passed


def test_verlinde_rejects_non_integral_data():
    md = e3()
    S = md.S.copy()
    # swap two rows and columns of Z with Y changes the fusion rules into fractions
    S2 = md.S.copy()
    for k in range(md.rank):
        S2[2, k] = S[2, k] * Z(3, 1)
        S2[k, 2] = S[k, 2] * Z(3, 1)
    N, res = verlinde(md.with_S(S2))
    assert not res.passed


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([3, 5, 7, 9]), st.sampled_from([1, -1]), st.integers(0, 10**6))
def test_random_single_entry_corruption_is_caught(n, sign, seed):
    md = e_modular_data(ECategory.from_spec(str(n), "diag:1", sign))
    rng = np.random.default_rng(seed)
    i, j = rng.integers(md.rank, size=2)
    S = md.S.copy()
    S[int(i), int(j)] = S[int(i), int(j)] + 1
    assert not check_axioms(md.with_S(S)).passed
