"""The semidualizing pipeline: certificates, splittings, resolutions on
copies of C, the depth identity, and the corollary checks."""

import json

import pytest

from semidual.fpmod import (
    FPModule,
    RingMatrix,
    direct_sum,
    free_module,
    quotient_by_element,
)
from semidual.homalg import TruncationError
from semidual.semidual import (
    VerificationError,
    bass_class_check,
    c_dimension,
    c_resolution,
    check_semidualizing,
    corollary_suite,
    default_ext_bound,
    extend_regular_sequence,
    hom_left_exactness,
    reduce_by_nzd,
    split_surjection,
    verify_ab,
)

AB_KEYS = ["ring", "C", "Y", "certificate", "c_dim", "depth_C", "depth_Y",
           "pd_hom", "ab_identity", "ext_bound", "witnesses"]


def test_default_ext_bound(poly_xy, semigroup):
    assert default_ext_bound(poly_xy.ring) == 6
    assert default_ext_bound(semigroup.ring) == 8


def test_certificate_free_rank_one(poly_xy):
    cert = check_semidualizing(poly_xy.C, 4)
    assert cert.verdict == "verified_up_to_bound"
    assert cert.passed and cert.condition_i
    assert cert.end_minimal_generators == 1
    assert cert.ext_checked and cert.first_nonzero_ext is None


def test_certificate_fails_for_rank_two(poly_xy):
    # End(R^2) needs four generators, so the identity cannot generate
    D = direct_sum([poly_xy.C, poly_xy.C])
    cert = check_semidualizing(D, 4)
    assert cert.verdict == "failed"
    assert not cert.passed
    assert cert.end_minimal_generators == 4
    assert not cert.identity_generates
    assert not cert.ext_checked          # condition (ii) never reached
    j = cert.to_json_dict()
    assert j["verdict"] == "failed"
    assert j["condition_i"]["holds"] is False


def test_certificate_input_validation(poly_xy):
    zero = quotient_by_element(poly_xy.C, poly_xy.ring.ambient.one())
    with pytest.raises(ValueError):
        check_semidualizing(zero, 2)
    with pytest.raises(ValueError):
        check_semidualizing(poly_xy.C, 0)


def test_split_identity(poly_xy):
    S = poly_xy.amb
    T = RingMatrix.from_columns(
        poly_xy.ring, [(S.one(), S.zero()), (S.zero(), S.one())],
        (0, 0), [0, 0])
    sec, wit = split_surjection(T)
    assert sec.to_rows_str() == [["1", "0"], ["0", "1"]]
    assert wit["q"] == 2 and wit["p"] == 0
    assert all(wit["identities"].values())


def test_split_pinned_example(poly_xy):
    # T = [1, x]: section (1, 0)^t, complement generated by (-x, 1)^t
    S = poly_xy.amb
    x = S.variable(0)
    T = RingMatrix.from_columns(
        poly_xy.ring, [(S.one(),), (x,)], (0,), [0, 1])
    sec, wit = split_surjection(T, poly_xy.C)
    assert sec.to_rows_str() == [["1"], ["0"]]
    U = wit["complement_inclusion"]
    # the complement column spans (-x, 1) up to scaling
    assert poly_xy.ring.nf(U.entries[0][0] + x).is_zero
    assert str(U.entries[1][0]) == "1"
    assert all(wit["identities"].values())
    assert (wit["q"], wit["p"]) == (1, 1)
    assert all(wit["power_check"].values())


def test_split_rejects_non_surjective(poly_xy):
    S = poly_xy.amb
    x = S.variable(0)
    T = RingMatrix.from_columns(poly_xy.ring, [(x,)], (0,), [1])
    with pytest.raises(ValueError, match="not surjective"):
        split_surjection(T)


def test_split_two_by_three(poly_xy):
    S = poly_xy.amb
    x = S.variable(0)
    cols = [(S.one(), S.constant(3)), (S.constant(2), S.constant(4)),
            (x, 5 * x)]
    T = RingMatrix.from_columns(poly_xy.ring, cols, (0, 0), [0, 0, 1])
    sec, wit = split_surjection(T)
    assert (wit["q"], wit["p"]) == (2, 1)
    assert all(wit["identities"].values())


def test_split_semigroup_with_power_witness(semigroup):
    S = semigroup.amb
    x = S.variable(0)
    cols = [(S.one(), S.constant(3)), (S.constant(2), S.constant(4)),
            (x, 5 * x)]
    T = RingMatrix.from_columns(semigroup.ring, cols, (0, 0), [0, 0, 3])
    sec, wit = split_surjection(T, semigroup.C)
    assert (wit["q"], wit["p"]) == (2, 1)
    assert all(wit["identities"].values())
    assert all(wit["power_check"].values())


def test_bass_class_classical(poly_xy):
    holds, info = bass_class_check(poly_xy.C, poly_xy.k, 4)
    assert holds
    assert info["ext_vanishing"] and info["evaluation_is_isomorphism"]


def test_bass_class_detects_nonmember(semigroup):
    # Ext^1(omega, k) is nonzero, so k is not in the class of omega
    holds, info = bass_class_check(semigroup.C, semigroup.k, 8)
    assert not holds
    assert info["first_nonzero_ext"] == 1


def test_bass_class_quotient_member(semigroup, omega_mod_x):
    holds, info = bass_class_check(semigroup.C, omega_mod_x, 8)
    assert holds, info


def test_c_resolution_classical(poly_xy):
    res = c_resolution(poly_xy.C, poly_xy.k)
    assert res.length == 2
    assert [res.copies(i) for i in range(3)] == [1, 2, 1]
    assert all(v for v in res.checks.values())


def test_c_resolution_length_zero(semigroup):
    res = c_resolution(semigroup.C, semigroup.C)
    assert res.length == 0
    assert res.copies(0) == 1


def test_c_resolution_length_one(semigroup, omega_mod_x):
    # 0 -> C --x--> C -> omega/x omega -> 0
    res = c_resolution(semigroup.C, omega_mod_x)
    assert res.length == 1
    assert [res.copies(i) for i in range(2)] == [1, 1]
    j = res.to_json_dict()
    assert j["matrices"][0] == [["x"]]
    assert all(v for v in res.checks.values())


def test_c_dimension_values(poly_xy, semigroup, omega_mod_x):
    assert c_dimension(poly_xy.C, poly_xy.k) == 2
    assert c_dimension(semigroup.C, semigroup.C) == 0
    assert c_dimension(semigroup.C, omega_mod_x) == 1


def test_verify_ab_classical(poly_xy):
    rep = verify_ab(poly_xy.C, poly_xy.k, ext_bound=4)
    assert rep.passed and rep.identity_holds and rep.pd_matches
    j = rep.to_json_dict()
    assert list(j.keys()) == AB_KEYS
    assert (j["c_dim"], j["depth_C"], j["depth_Y"]) == (2, 2, 0)
    assert j["pd_hom"] == 2
    assert j["ab_identity"] is True
    assert list(j["witnesses"].keys()) == ["regular_sequence",
                                           "splitting_matrices"]
    assert j["witnesses"]["regular_sequence"] == []
    assert j["witnesses"]["splitting_matrices"] == []
    # stable serialization
    assert json.dumps(j) == json.dumps(rep.to_json_dict())


def test_verify_ab_self(semigroup):
    rep = verify_ab(semigroup.C, semigroup.C, ext_bound=8)
    j = rep.to_json_dict()
    assert rep.passed
    assert (j["c_dim"], j["depth_C"], j["depth_Y"]) == (0, 1, 1)
    assert j["witnesses"]["regular_sequence"] == ["x"]


def test_verify_ab_quotient(semigroup, omega_mod_x):
    rep = verify_ab(semigroup.C, omega_mod_x, ext_bound=8)
    j = rep.to_json_dict()
    assert rep.passed
    assert (j["c_dim"], j["depth_C"], j["depth_Y"]) == (1, 1, 0)
    assert j["pd_hom"] == 1
    assert j["ab_identity"] is True


def test_verify_ab_rejects_zero_module(poly_xy):
    zero = quotient_by_element(poly_xy.C, poly_xy.ring.ambient.one())
    with pytest.raises(ValueError):
        verify_ab(poly_xy.C, zero)


def test_reduce_by_nzd_classical(poly_xy):
    x = poly_xy.amb.variable(0)
    R2, C2, cert = reduce_by_nzd(poly_xy.ring, poly_xy.C, x, 4)
    assert cert.passed
    assert R2.nf(x).is_zero
    assert C2.ngens == 1


def test_reduce_by_nzd_semigroup(semigroup):
    R2, C2, cert = reduce_by_nzd(semigroup.ring, semigroup.C,
                                 semigroup.nzd, 8)
    assert cert.passed
    assert cert.verdict == "verified_up_to_bound"
    assert R2.dimension == 0


def test_reduce_rejects_zerodivisor(hypersurface):
    x = hypersurface.amb.variable(0)
    with pytest.raises(ValueError, match="nonzero in the quotient"):
        reduce_by_nzd(hypersurface.ring, hypersurface.C, x, 4)


def test_reduce_rejects_bad_elements(poly_xy):
    S = poly_xy.amb
    with pytest.raises(ValueError):
        reduce_by_nzd(poly_xy.ring, poly_xy.C, S.zero(), 4)
    with pytest.raises(ValueError):
        reduce_by_nzd(poly_xy.ring, poly_xy.C, S.variable(0) + S.one(), 4)


def test_corollary_suite_classical(poly_xy):
    rep = corollary_suite(poly_xy.C, poly_xy.k)
    assert rep["all_pass"]
    assert rep["faithful"] and rep["support_is_spectrum"]
    assert rep["dim_C"] == rep["dim_ring"] == 2
    assert rep["depth_C"] == rep["depth_ring"] == 2
    assert rep["Y"]["nzd_transfer"]["all_agree"]
    assert rep["Y"]["nzd_transfer"]["samples"] > 100


def test_corollary_suite_omega(semigroup, omega_mod_x):
    rep = corollary_suite(semigroup.C)
    assert rep["all_pass"]
    assert rep["dim_C"] == rep["dim_ring"] == 1
    assert rep["depth_C"] == rep["depth_ring"] == 1
    repY = corollary_suite(semigroup.C, omega_mod_x)
    assert repY["all_pass"]
    assert repY["Y"]["depth_Y"] == repY["Y"]["depth_hom"] == 0
    assert repY["Y"]["nzd_transfer"]["all_agree"]


def test_extend_regular_sequence_classical(poly_xy):
    S = poly_xy.amb
    x, y = S.variable(0), S.variable(1)
    Rx = quotient_by_element(poly_xy.C, x)
    seq, info = extend_regular_sequence(poly_xy.C, Rx, [y])
    assert [str(f) for f in seq] == ["y", "x"]
    assert info["verified_on_Y"] == ["y"]
    assert info["extension"] == ["x"]


def test_extend_regular_sequence_omega(semigroup):
    seq, info = extend_regular_sequence(semigroup.C, semigroup.C, [])
    assert [str(f) for f in seq] == ["x"]
    assert info["target_length"] == 1


def test_hom_left_exactness_plane(poly_xy):
    S = poly_xy.amb
    x = S.variable(0)
    M = quotient_by_element(poly_xy.C, x * x)
    rep = hom_left_exactness(poly_xy.C, M, x)
    assert rep["holds"]
    assert rep["composition_zero"] and rep["injective"] \
        and rep["kernel_matches"]


def test_hom_left_exactness_omega(semigroup):
    S = semigroup.amb
    Rx = quotient_by_element(free_module(semigroup.ring, (0,)),
                             S.variable(0))
    rep = hom_left_exactness(semigroup.C, Rx, S.variable(1))
    assert rep["holds"]


def test_hypersurface_negative_controls(hypersurface):
    holds, _ = bass_class_check(hypersurface.C, hypersurface.k, 4)
    assert holds  # the ring itself always works formally
    with pytest.raises(TruncationError, match="no finite C-dimension"):
        c_dimension(hypersurface.C, hypersurface.k, 6)
    with pytest.raises(TruncationError):
        verify_ab(hypersurface.C, hypersurface.k, ext_bound=4, pd_bound=6)
