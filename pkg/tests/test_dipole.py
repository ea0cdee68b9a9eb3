import numpy as np
import pytest

from conftest import DIRECTION, random_complex
from em_manifold.dipole import (
    EPS_0,
    ETA_0,
    MU_0,
    SPEED_OF_LIGHT,
    FieldVec,
    Medium,
    SingularityError,
    alpha_ang,
    alpha_ang_ff,
    alpha_rad,
    dipole_field,
    dipole_field_transform,
    ff_dipole_transform,
)
from em_manifold.geometry import spherical_basis


class TestMedium:
    def test_derived_constants(self, med5g):
        assert med5g.wavelength == pytest.approx(SPEED_OF_LIGHT / 5e9, rel=1e-15)
        assert med5g.beta == pytest.approx(2 * np.pi / med5g.wavelength, rel=1e-15)
        assert med5g.omega == pytest.approx(2 * np.pi * 5e9, rel=1e-15)
        assert med5g.eta0 == pytest.approx(np.sqrt(MU_0 / EPS_0), rel=1e-12)
        assert ETA_0 == pytest.approx(np.sqrt(MU_0 / EPS_0), rel=1e-12)

    def test_invalid_frequency(self):
        with pytest.raises(ValueError):
            Medium(0.0)
        with pytest.raises(ValueError):
            Medium(np.inf)


class TestAmplitudes:
    def test_alpha_rad_decays_faster_than_one_over_r(self, med5g):
        lam = med5g.wavelength
        vals = [
            r * abs(alpha_rad(r * DIRECTION, med5g)) for r in (lam, 10 * lam, 100 * lam)
        ]
        assert vals[0] > vals[1] > vals[2]

    def test_alpha_rad_magnitude_at_unit_phase_radius(self, med5g):
        # |alpha_rad| = sqrt(2) beta^3 / (omega eps0 2 pi) at beta*r = 1
        r = 1.0 / med5g.beta
        expected = np.sqrt(2.0) * med5g.beta**3 / (med5g.omega * EPS_0 * 2 * np.pi)
        assert abs(alpha_rad(r * DIRECTION, med5g)) == pytest.approx(expected, rel=1e-13)

    def test_alpha_rad_near_zone_doubling_ratio(self, med5g):
        # 1/r^3 dominates: halving the distance scales the magnitude by 8
        r = 1e-3 / med5g.beta
        ratio = abs(alpha_rad(r * DIRECTION, med5g)) / abs(
            alpha_rad(2 * r * DIRECTION, med5g)
        )
        assert ratio == pytest.approx(8.0, abs=1e-4)

    def test_alpha_ang_far_limit(self, med5g):
        # r*alpha_ang approaches r*alpha_ang_ff; at r = 1e3 lam the relative
        # difference is 1/(beta r) = 1.5915e-4 (direct formula evaluation)
        r = 1e3 * med5g.wavelength
        p = r * DIRECTION
        rel = abs(r * alpha_ang(p, med5g) - r * alpha_ang_ff(p, med5g)) / abs(
            r * alpha_ang(p, med5g)
        )
        assert rel < 1e-3
        assert rel == pytest.approx(1.5915494712333712e-4, rel=1e-6)

    def test_alpha_ang_near_zone_dominant_term(self, med5g):
        r = 1e-4 / med5g.beta
        dominant = 1.0 / (med5g.omega * EPS_0 * 4 * np.pi * r**3)
        assert abs(alpha_ang(r * DIRECTION, med5g)) == pytest.approx(dominant, rel=1e-6)

    def test_alpha_ang_magnitude_at_unit_phase_radius(self, med5g):
        # terms (1 + j - 1) leave magnitude beta^3/(omega eps0 4 pi)
        r = 1.0 / med5g.beta
        expected = med5g.beta**3 / (med5g.omega * EPS_0 * 4 * np.pi)
        assert abs(alpha_ang(r * DIRECTION, med5g)) == pytest.approx(expected, rel=1e-13)

    def test_alpha_ang_ff_magnitude_identity(self, med5g):
        # beta/(omega eps0) = eta0 turns the prefactor into eta0*beta/(4 pi r)
        r = 7.3 * med5g.wavelength
        expected = ETA_0 * med5g.beta / (4 * np.pi * r)
        assert abs(alpha_ang_ff(r * DIRECTION, med5g)) == pytest.approx(
            expected, rel=1e-13
        )

    def test_alpha_ang_ff_inverse_distance(self, med5g):
        r = 3.1 * med5g.wavelength
        a1 = abs(alpha_ang_ff(r * DIRECTION, med5g))
        a2 = abs(alpha_ang_ff(2 * r * DIRECTION, med5g))
        assert a1 / a2 == pytest.approx(2.0, rel=1e-13)

    def test_alpha_ang_ff_phase_advance(self, med5g):
        r = 3.1 * med5g.wavelength
        dr = 0.123 * med5g.wavelength
        ph1 = np.angle(alpha_ang_ff(r * DIRECTION, med5g))
        ph2 = np.angle(alpha_ang_ff((r + dr) * DIRECTION, med5g))
        dphase = np.angle(np.exp(1j * (ph2 - ph1)))
        assert dphase == pytest.approx(
            np.angle(np.exp(-1j * med5g.beta * dr)), abs=1e-10
        )

    def test_singularity_at_zero(self, med5g):
        for fn in (alpha_rad, alpha_ang, alpha_ang_ff):
            with pytest.raises(SingularityError):
                fn((0.0, 0.0, 0.0), med5g)


class TestDipoleFieldTransform:
    def test_z_moment_on_axis_is_purely_radial(self, med5g):
        p = np.array([0.0, 0.0, 0.31 * med5g.wavelength])
        m = np.array([0.0, 0.0, 1e-3])
        e = dipole_field_transform(p, med5g) @ m
        assert e[0] == pytest.approx(alpha_rad(p, med5g) * 1e-3, rel=1e-14)
        assert e[1] == 0.0
        assert e[2] == 0.0

    def test_z_moment_equatorial_no_radial(self, med5g):
        p = np.array([0.8, 0.4, 0.0]) * med5g.wavelength
        m = np.array([0.0, 0.0, 1e-3])
        e = dipole_field_transform(p, med5g) @ m
        assert e[0] == 0.0

    def test_matches_componentwise_formulas(self, med5g, rng):
        # independent oracle: scalar amplitude times moment-basis projections
        for _ in range(20):
            p = rng.standard_normal(3) * med5g.wavelength
            m = random_complex(rng, 3) * 1e-3
            e = dipole_field_transform(p, med5g) @ m
            u_r, u_theta, u_phi = spherical_basis(p)
            expected = np.array(
                [
                    alpha_rad(p, med5g) * (m @ u_r),
                    alpha_ang(p, med5g) * (m @ u_theta),
                    alpha_ang(p, med5g) * (m @ u_phi),
                ]
            )
            assert np.linalg.norm(e - expected) <= 1e-13 * np.linalg.norm(expected)


class TestFarFieldTransform:
    def test_radial_row_exactly_zero(self, med5g, rng):
        for _ in range(10):
            p = rng.standard_normal(3)
            t = ff_dipole_transform(p, med5g)
            assert np.all(t[0, :] == 0.0)

    def test_equatorial_theta_magnitude(self, med5g):
        r = 12.0 * med5g.wavelength
        p = np.array([r, 0.0, 0.0])
        m_z = 1e-3
        e = ff_dipole_transform(p, med5g) @ np.array([0.0, 0.0, m_z])
        expected = ETA_0 * med5g.beta * m_z / (4 * np.pi * r)
        assert abs(e[1]) == pytest.approx(expected, rel=1e-13)

    def test_near_far_error_decays_like_inverse_distance(self, med5g, rng):
        from em_manifold.geometry import rotational_coherence

        m = random_complex(rng, 3) * 1e-3
        radii = np.array([10.0, 100.0, 1000.0]) * med5g.wavelength
        errs = []
        for r in radii:
            p = r * DIRECTION
            e_near = rotational_coherence(p, p) @ (dipole_field_transform(p, med5g) @ m)
            e_far = ff_dipole_transform(p, med5g) @ m
            errs.append(np.linalg.norm(e_near - e_far) / np.linalg.norm(e_near))
        assert errs[0] > errs[1] > errs[2]
        slope = np.polyfit(np.log(radii), np.log(errs), 1)[0]
        assert -1.3 <= slope <= -0.7


class TestDipoleField:
    def test_source_at_origin_matches_local(self, med5g, rng):
        m = random_complex(rng, 3) * 1e-3
        p = np.array([1.0, -0.5, 0.8]) * med5g.wavelength
        e_global = dipole_field(m, (0, 0, 0), p, med5g)
        e_local = dipole_field_transform(p, med5g) @ m
        assert np.linalg.norm(e_global.e - e_local) <= 1e-13 * np.linalg.norm(e_local)

    def test_linearity(self, med5g, rng):
        s = np.array([0.1, 0.2, -0.1]) * med5g.wavelength
        p = np.array([2.0, 1.0, 0.5]) * med5g.wavelength
        m1 = random_complex(rng, 3) * 1e-3
        m2 = random_complex(rng, 3) * 1e-3
        a, b = random_complex(rng, 2)
        lhs = dipole_field(a * m1 + b * m2, s, p, med5g).e
        rhs = a * dipole_field(m1, s, p, med5g).e + b * dipole_field(m2, s, p, med5g).e
        assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(rhs)

    def test_norm_preserved_across_frames(self, med5g, rng):
        s = np.array([0.1, 0.2, -0.1]) * med5g.wavelength
        p = np.array([2.0, 1.0, 0.5]) * med5g.wavelength
        m = random_complex(rng, 3) * 1e-3
        e_sph = dipole_field(m, s, p, med5g, frame="global-spherical")
        e_cart = dipole_field(m, s, p, med5g, frame="cartesian")
        assert e_cart.norm == pytest.approx(e_sph.norm, rel=1e-13)

    def test_on_axis_z_dipole_zero_angular(self, med5g):
        m = np.array([0.0, 0.0, 1e-3])
        for r in (0.5, 5.0, 50.0):
            e = dipole_field(m, (0, 0, 0), (0, 0, r * med5g.wavelength), med5g)
            assert e.e[1] == 0.0
            assert e.e[2] == 0.0

    def test_prop_decay_for_offset_source(self, med5g, rng):
        m = random_complex(rng, 3) * 1e-3
        s = np.array([0.3, 0.1, -0.2]) * med5g.wavelength
        radii = np.array([10.0, 100.0, 1000.0]) * med5g.wavelength
        errs = []
        for r in radii:
            p = r * DIRECTION
            e_near = dipole_field(m, s, p, med5g).e
            e_far = ff_dipole_transform(p - s, med5g) @ m
            errs.append(np.linalg.norm(e_near - e_far) / np.linalg.norm(e_near))
        assert errs[0] > errs[1] > errs[2]
        slope = np.polyfit(np.log(radii), np.log(errs), 1)[0]
        assert -1.3 <= slope <= -0.7

    def test_singularity_guard(self, med5g):
        with pytest.raises(SingularityError):
            dipole_field([0, 0, 1e-3], (1.0, 1.0, 1.0), (1.0, 1.0, 1.0), med5g)

    def test_unknown_frame_rejected(self, med5g):
        with pytest.raises(ValueError):
            dipole_field([0, 0, 1e-3], (0, 0, 0), (1.0, 0, 0), med5g, frame="bogus")


class TestFieldVec:
    def test_addition_requires_matching_frames(self):
        a = FieldVec(np.ones(3), "cartesian")
        b = FieldVec(np.ones(3), "global-spherical")
        with pytest.raises(ValueError):
            _ = a + b

    def test_addition_requires_matching_points(self):
        a = FieldVec(np.ones(3), "global-spherical", point=(0, 0, 1))
        b = FieldVec(np.ones(3), "global-spherical", point=(0, 0, 2))
        with pytest.raises(ValueError):
            _ = a + b

    def test_addition_same_frame(self):
        a = FieldVec(np.ones(3), "cartesian")
        b = FieldVec(2 * np.ones(3), "cartesian")
        assert np.allclose((a + b).e, 3.0)
