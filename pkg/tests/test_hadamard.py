"""Tests for the short-distance expansion and its singular/regular split.

Frozen expected values (recorded before implementation, straight from
the term catalog):

* delta(sigma) coefficient:            +vanvleck a0/(8 pi)
* 1/sigma coefficient:                 -vanvleck a0/(4 pi^2)
* theta(sigma) constant coefficient:   -(vanvleck/8 pi) (1/2)(m^2 a0 - a1)
* regular sigma^0 channel (a3, a4):    +(vanvleck/2 pi^2)(a3/4m^4 + a4/8m^6)
"""

import math

import pytest

from polekit.errors import DomainError
from polekit.hadamard import (
    BASIS_TAGS,
    CHANNEL,
    COEFFICIENT_FLAGS,
    REGULAR_CLASS_TAGS,
    HadamardInput,
    SingularBasisExpansion,
    hadamard_expand,
    hadamard_split,
    reconstruct,
)

A_FULL = (1.0, 0.7, -0.4, 0.9, 0.3)
INPUT_FULL = HadamardInput(sigma=0.2, m=1.3, a=A_FULL)
INPUT_MIN = HadamardInput(sigma=0.2, m=1.3, a=(1.0,))


# ----------------------------------------------------------------------- types


class TestTypes:
    def test_validation(self):
        with pytest.raises(DomainError):
            HadamardInput(sigma=0.0, m=0.0, a=(1.0,))
        with pytest.raises(DomainError):
            HadamardInput(sigma=0.0, m=1.0, a=())
        with pytest.raises(DomainError):
            HadamardInput(sigma=0.0, m=1.0, a=(1.0, math.inf))

    def test_every_tag_has_a_channel(self):
        assert set(CHANNEL) == set(BASIS_TAGS)
        assert set(CHANNEL.values()) == {"real", "imag"}

    def test_regular_class_is_subset_of_tags(self):
        assert REGULAR_CLASS_TAGS <= set(BASIS_TAGS)


# -------------------------------------------------------------- hadamard_expand


class TestExpand:
    def test_delta_coefficient(self):
        e = hadamard_expand(INPUT_FULL)
        expected = INPUT_FULL.vanvleck * A_FULL[0] / (8.0 * math.pi)
        assert math.isclose(e.coefficients["delta_sigma"], expected, rel_tol=1e-15)

    def test_inverse_sigma_coefficient(self):
        e = hadamard_expand(INPUT_FULL)
        expected = -INPUT_FULL.vanvleck * A_FULL[0] / (4.0 * math.pi**2)
        assert math.isclose(e.coefficients["inv_sigma"], expected, rel_tol=1e-15)

    def test_theta_constant_coefficient(self):
        e = hadamard_expand(INPUT_FULL)
        m2 = INPUT_FULL.m**2
        expected = -(1.0 / (8.0 * math.pi)) * 0.5 * (m2 * A_FULL[0] - A_FULL[1])
        assert math.isclose(e.coefficients["theta_const"], expected, rel_tol=1e-14)

    def test_vanvleck_scales_everything(self):
        doubled = HadamardInput(sigma=0.2, m=1.3, a=A_FULL, vanvleck=2.0)
        base = hadamard_expand(INPUT_FULL)
        scaled = hadamard_expand(doubled)
        for tag in BASIS_TAGS:
            assert scaled.coefficients[tag] == 2.0 * base.coefficients[tag]

    def test_leading_channels_depend_only_on_a0(self):
        other = HadamardInput(sigma=0.2, m=1.3, a=(1.0, -3.0, 5.0, 2.0, -8.0))
        e1 = hadamard_expand(INPUT_FULL)
        e2 = hadamard_expand(other)
        assert e1.coefficients["delta_sigma"] == e2.coefficients["delta_sigma"]
        assert e1.coefficients["inv_sigma"] == e2.coefficients["inv_sigma"]

    def test_short_list_drops_and_reports(self):
        e = hadamard_expand(INPUT_MIN)
        assert e.truncation_order == 0
        assert "theta_const:a_1" in e.dropped_terms
        assert "const:a_4" in e.dropped_terms
        # every surviving term is an a0 (or a0-slot) term
        for tag, contribs in e.provenance.items():
            assert set(contribs) <= {0}

    def test_flagged_anomaly_log_sigma_missing_factor_two(self):
        # the a2 weight of the sigma-log term is half of what the
        # theta-channel partner pattern would give; kept as tabulated
        e = hadamard_expand(HadamardInput(sigma=0.0, m=1.0, a=(0.0, 0.0, 1.0)))
        theta_a2 = e.provenance["theta_sigma"][2] * 8.0 * math.pi
        log_a2 = e.provenance["log_sigma"][2] * 2.0 * math.pi**2
        assert math.isclose(theta_a2, 2.0 / 8.0, rel_tol=1e-15)
        assert math.isclose(log_a2, -1.0 / 8.0, rel_tol=1e-15)
        assert COEFFICIENT_FLAGS["log_sigma"] == ("missing-2",)

    def test_flagged_bare_mass_term_survives_zero_a0(self):
        # the (5/4) m^4 linear-sigma piece carries no a-factor
        e = hadamard_expand(HadamardInput(sigma=0.0, m=1.3, a=(0.0,)))
        expected = (1.0 / (2.0 * math.pi**2)) * 1.25 * 1.3**4 / 8.0
        assert math.isclose(e.coefficients["linear_sigma"], expected, rel_tol=1e-15)
        assert "a0-dropped" in COEFFICIENT_FLAGS["linear_sigma"]


# --------------------------------------------------------------- hadamard_split


class TestSplit:
    def test_partition_exactness(self):
        e = hadamard_expand(INPUT_FULL)
        parts = hadamard_split(e)
        for tag in BASIS_TAGS:
            total = (
                parts["singular"].coefficients[tag]
                + parts["regular"].coefficients[tag]
            )
            assert total == e.coefficients[tag]

    def test_reconstruct_is_bit_exact(self):
        e = hadamard_expand(INPUT_FULL)
        parts = hadamard_split(e)
        rebuilt = reconstruct(parts["singular"], parts["regular"])
        assert rebuilt == e

    def test_regular_sigma_zero_channel(self):
        e = hadamard_expand(INPUT_FULL)
        regular = hadamard_split(e)["regular"]
        m = INPUT_FULL.m
        a3, a4 = A_FULL[3], A_FULL[4]
        expected = (1.0 / (2.0 * math.pi**2)) * (
            a3 / (4.0 * m**4) + a4 / (8.0 * m**6)
        )
        assert math.isclose(regular.coefficients["const"], expected, rel_tol=1e-14)

    def test_singular_sigma_zero_channel(self):
        # the polynomial a2/(4 m^2) piece stays singular-side
        e = hadamard_expand(INPUT_FULL)
        singular = hadamard_split(e)["singular"]
        m2 = INPUT_FULL.m**2
        expected = (1.0 / (2.0 * math.pi**2)) * (
            -0.25 * m2 * A_FULL[0] + A_FULL[2] / (4.0 * m2)
        )
        assert math.isclose(singular.coefficients["const"], expected, rel_tol=1e-14)

    def test_minimal_list_gives_zero_regular_part(self):
        e = hadamard_expand(INPUT_MIN)
        regular = hadamard_split(e)["regular"]
        assert all(value == 0.0 for value in regular.coefficients.values())

    def test_regular_tags_are_regular_class(self):
        e = hadamard_expand(INPUT_FULL)
        regular = hadamard_split(e)["regular"]
        nonzero = {tag for tag, v in regular.coefficients.items() if v != 0.0}
        assert nonzero <= REGULAR_CLASS_TAGS

    def test_singular_part_has_divergent_tags(self):
        e = hadamard_expand(INPUT_FULL)
        singular = hadamard_split(e)["singular"]
        for tag in ("delta_sigma", "inv_sigma", "log_const", "theta_const"):
            assert singular.coefficients[tag] != 0.0
            assert tag not in REGULAR_CLASS_TAGS

    def test_larger_a_count_moves_a3_into_singular(self):
        e = hadamard_expand(INPUT_FULL)
        parts = hadamard_split(e, a_count=4)
        assert 3 in parts["singular"].provenance["const"]
        assert set(parts["regular"].provenance["const"]) == {4}
        rebuilt = reconstruct(parts["singular"], parts["regular"])
        for tag in BASIS_TAGS:
            assert rebuilt.coefficients[tag] == e.coefficients[tag]

    def test_validation(self):
        e = hadamard_expand(INPUT_FULL)
        with pytest.raises(DomainError):
            hadamard_split(e, a_count=2)
        bare = SingularBasisExpansion(
            coefficients={tag: 0.0 for tag in BASIS_TAGS}, truncation_order=0
        )
        with pytest.raises(DomainError):
            hadamard_split(bare)

    def test_reconstruct_rejects_overlap(self):
        e = hadamard_expand(INPUT_FULL)
        parts = hadamard_split(e)
        with pytest.raises(DomainError):
            reconstruct(parts["singular"], parts["singular"])
