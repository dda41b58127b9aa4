"""Constructions: RK matrices, perturbations, stability, certificates, experiments."""

import numpy as np
import pytest

from idealcore import asymptotics as asy
from idealcore import constructions as con
from idealcore import ideals as ide
from idealcore import maps
from idealcore import matrices as mat
from idealcore import regularity as reg
from idealcore import sequences as seq
from idealcore import sets as sd

FIN = ide.fin()
Z = ide.density_zero()
FO_EVENS = ide.fin_oplus_full(sd.evens())
CORE = asy.CoreConfig(horizon=10**5)
FAST_CORE = asy.CoreConfig(horizon=10**4)


# -- rk matrices -----------------------------------------------------------------


def test_rk_rows_and_transform():
    a = mat.rk_matrix(maps.affine_map(2))
    assert a.row(3).indices.tolist() == [6]
    x = seq.corpus_entry("indicator_squares")
    for n in (0, 2, 8, 50):
        assert mat.transform(a, x, n) == x(2 * n)


def test_rk_constant_map_not_regular():
    constant = maps.IndexMap(lambda n: 0, "constant0")
    a = mat.rk_matrix(constant)
    assert a.row(9).indices.tolist() == [0]
    verdict = reg.silverman_toeplitz_check(a, FIN, FIN, cfg=reg.CheckConfig(horizon=2000))
    assert verdict.status is reg.Status.VIOLATED


def test_enumeration_map_matches_affine_for_evens():
    h = maps.enumeration_map(sd.evens())
    assert [h(n) for n in range(6)] == [0, 2, 4, 6, 8, 10]
    h.validate_flags(2000)


# -- perturbation ----------------------------------------------------------------


def test_perturb_identity():
    b = con.perturb_identity(mat.zero_matrix())
    assert b.row(4).indices.tolist() == [4] and b.row(4).values.tolist() == [1.0]
    d = con.perturb_identity(mat.diagonal(lambda n: 2.0**-n))
    r = d.row(2)
    assert r.indices.tolist() == [2] and r.values.tolist() == [1.25]
    base = mat.diagonal(lambda n: 2.0**-n)
    sums = con.perturb_identity(base).row_sums(100)
    assert np.allclose(sums, base.row_sums(100) + 1.0)


# -- core stability ----------------------------------------------------------------


def test_stability_harmonic_perturbation():
    x = seq.corpus_entry("alternating")
    y = seq.BoundedSequence(lambda n: x.fn(n) + 1.0 / (n + 1), bound=2.0, label="alt+1/(n+1)")
    report = con.core_stability_check(x, y, FIN, CORE)
    assert report.status == "confirmed"
    assert report.deviation <= 1e-2


def test_stability_squares_perturbation_under_density_ideal():
    x = seq.corpus_entry("indicator_evens")
    y = seq.combine(x, seq.indicator(sd.squares()), "add", label="evens+squares")
    report = con.core_stability_check(x, y, Z, CORE)
    assert report.status == "confirmed" and report.deviation == 0.0


def test_stability_not_applicable_for_shift():
    x = seq.corpus_entry("alternating")
    report = con.core_stability_check(x, seq.affine(x, 1.0, 1.0), FIN, FAST_CORE)
    assert report.status == "not_applicable"
    assert "not ideal-null" in report.note


def test_stability_report_serialization():
    x = seq.corpus_entry("alternating")
    y = seq.BoundedSequence(lambda n: x.fn(n) + 1.0 / (n + 1), bound=2.0, label="y")
    d = con.core_stability_check(x, y, FIN, FAST_CORE).to_dict()
    assert d["status"] == "confirmed" and d["core_x"] == (-1.0, 1.0)


# -- sufficiency certificate ----------------------------------------------------------


def test_certificate_identity_instance():
    # Untranslated because the upper core endpoint is already positive;
    # the shrinkage factor is then eps / (2 + 1 + 4).
    cert = con.sufficiency_certificate(mat.identity(), seq.corpus_entry("indicator_evens"), 0.1, FIN, FIN)
    assert cert.status == "verified"
    assert cert.kappa == 0.0 and cert.eta == 1.0
    assert cert.delta == pytest.approx(0.1 / 7.0)
    assert cert.lower_margin >= 0 and cert.upper_margin >= 0
    assert cert.neg_mass_margin >= 0 and cert.off_support_margin >= 0


def test_certificate_rk_instance():
    a = mat.rk_matrix(maps.affine_map(2))
    x = seq.indicator(sd.ap(0, 4), label="indicator_ap04")
    cert = con.sufficiency_certificate(a, x, 0.05, FO_EVENS, FIN)
    assert cert.status == "verified"
    assert cert.eta == 1.0 and cert.delta == pytest.approx(0.05 / 7.0)
    # the concentration rows are exactly the even rows below the horizon
    assert cert.s_rows[:4] == (0, 2, 4, 6)
    assert all(m >= 0 for m in (cert.lower_margin, cert.upper_margin,
                                cert.neg_mass_margin, cert.off_support_margin))


def test_certificate_translates_negative_sequences():
    x = seq.affine(seq.corpus_entry("indicator_evens"), -1.0, 0.0, label="neg_evens")
    cert = con.sufficiency_certificate(mat.identity(), x, 0.1, FIN, FIN)
    assert cert.kappa == x.bound + 1.0
    assert cert.eta >= 1.0
    assert cert.eta_original == pytest.approx(0.0)
    assert cert.status == "verified"


def test_certificate_eps_monotonicity():
    a = mat.rk_matrix(maps.affine_map(2))
    x = seq.indicator(sd.ap(0, 4), label="indicator_ap04")
    big = con.sufficiency_certificate(a, x, 0.1, FO_EVENS, FIN)
    small = con.sufficiency_certificate(a, x, 0.05, FO_EVENS, FIN)
    assert small.delta < big.delta
    horizon = 2000
    big_set = set(big.upper_threshold_set.enumerate_prefix(horizon))
    small_set = set(small.upper_threshold_set.enumerate_prefix(horizon))
    assert small_set <= big_set


def test_certificate_rejects_bad_eps_and_violators():
    with pytest.raises(ValueError):
        con.sufficiency_certificate(mat.identity(), seq.corpus_entry("alternating"), 0.0, FIN, FIN)
    with pytest.raises(ValueError):
        con.sufficiency_certificate(mat.cesaro(), seq.corpus_entry("alternating"), 0.1, FIN, FIN)


def test_certificate_empty_witness_set():
    # The upper threshold set lives beyond the horizon, so no concentration
    # row is found below it; that is a reported outcome, not a failure.
    far = sd.ap(100_001, 2)
    x = seq.indicator(far, label="far_indicator")
    cfg = reg.CheckConfig(horizon=2000)
    cert = con.sufficiency_certificate(mat.identity(), x, 0.1, FIN, FIN, cfg=cfg)
    assert cert.status == "empty-witness-set"
    assert cert.s_rows == ()
    assert cert.upper_margin is not None


# -- core equality experiments -----------------------------------------------------------


def test_experiment_rk_construction_zero_deviation():
    a = mat.rk_matrix(maps.enumeration_map(sd.evens()))
    report = con.core_equality_experiment(a, FO_EVENS, FIN, seq.corpus(), CORE)
    assert report.max_deviation <= 1e-2


def test_experiment_cesaro_detects_deviation():
    report = con.core_equality_experiment(
        mat.cesaro(), FIN, FIN, [seq.corpus_entry("alternating")], FAST_CORE
    )
    row = report.rows[0]
    assert row.core_x.as_tuple() == (-1.0, 1.0)
    assert abs(row.core_ax.lo) <= 0.02 and abs(row.core_ax.hi) <= 0.02
    assert report.max_deviation >= 0.9


def test_experiment_identity_zero_deviation_across_ideals():
    for ideal in (FIN, Z, FO_EVENS):
        report = con.core_equality_experiment(
            mat.identity(), ideal, ideal,
            [seq.corpus_entry(l) for l in ("alternating", "indicator_evens", "periodic_three_level")],
            FAST_CORE,
        )
        assert report.max_deviation == 0.0, ideal.label


def test_rk_cluster_transfer():
    a = mat.rk_matrix(maps.enumeration_map(sd.evens()))
    for label in ("alternating", "periodic_three_level", "blockwise_three_level", "indicator_blocks"):
        x = seq.corpus_entry(label)
        source = asy.cluster_points(x, FO_EVENS, CORE)
        ax = con.transformed_sequence(a, x, CORE.horizon)
        image = asy.cluster_points(ax, FIN, CORE)
        assert len(source.points) == len(image.points), label
        for (lo_a, hi_a), (lo_b, hi_b) in zip(source.points, image.points):
            assert abs(lo_a - lo_b) <= CORE.grid and abs(hi_a - hi_b) <= CORE.grid, label


def test_perturbation_preserves_cores_for_null_transform():
    base = mat.diagonal(lambda n: 2.0**-n, norm_bound=1.0)
    b = con.perturb_identity(base)
    report = con.core_equality_experiment(
        b, FIN, FIN,
        [seq.corpus_entry(l) for l in ("alternating", "indicator_evens", "rotation_golden")],
        FAST_CORE,
    )
    assert report.max_deviation <= 1e-2


def test_composition_transfer():
    # I = trace-finite over multiples of 4, J = trace-finite over evens:
    # doubling witnesses I below J and J below Fin, and the composed matrix
    # carries cores all the way to the classical case.
    ideal_i = ide.fin_oplus_full(sd.ap(0, 4))
    b = mat.rk_matrix(maps.affine_map(2))
    a = mat.rk_matrix(maps.affine_map(2))
    c = mat.compose(b, a)
    for n in (0, 1, 5):
        assert c.row(n).indices.tolist() == [4 * n]
    report = con.core_equality_experiment(c, ideal_i, FIN, seq.corpus(), CORE)
    assert report.max_deviation <= 1e-2


def test_experiment_report_serialization():
    report = con.core_equality_experiment(
        mat.identity(), FIN, FIN, [seq.corpus_entry("alternating")], FAST_CORE
    )
    d = report.to_dict()
    assert d["rows"][0]["label"] == "alternating"
    assert set(d["rows"][0]) == {"label", "core_x_lo", "core_x_hi", "core_ax_lo", "core_ax_hi", "deviation"}
