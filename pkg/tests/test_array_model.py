import json

import numpy as np
import pytest

import em_manifold as em
from em_manifold.array_model import MomentFileError


class TestHalfWaveGenerator:
    def test_segment_layout(self, med5g):
        block = em.generate_half_wave_dipole((0, 0, 0), (0, 0, 1), 40, med5g)
        assert block.geometry.n_segments == 40
        z = block.geometry.centroid_array[:, 2]
        assert z.max() - z.min() == pytest.approx(
            med5g.wavelength / 2 * (1 - 1 / 40), rel=1e-12
        )
        assert np.all(np.diff(z) > 0)

    def test_moments_along_axis(self, med5g):
        block = em.generate_half_wave_dipole((0, 0, 0), (0, 0, 1), 11, med5g)
        m = block.moments.reshape(-1, 3)
        assert np.all(m[:, 0] == 0)
        assert np.all(m[:, 1] == 0)
        assert np.all(m[:, 2].real > 0)

    def test_total_moment_converges_to_sine_integral(self, med5g):
        # analytic oracle: integral of the sinusoidal profile is 2*I0/beta
        analytic = 2.0 / med5g.beta
        for k, tol in ((40, 5e-4), (4001, 5e-8)):
            block = em.generate_half_wave_dipole((0, 0, 0), (0, 0, 1), k, med5g)
            total = block.moments.reshape(-1, 3).sum(axis=0)
            assert abs(total[2].real - analytic) / analytic < tol
            assert total[0] == 0 and total[1] == 0

    def test_axis_normalized(self, med5g):
        a = em.generate_half_wave_dipole((0, 0, 0), (0, 0, 2.0), 5, med5g)
        b = em.generate_half_wave_dipole((0, 0, 0), (0, 0, 1.0), 5, med5g)
        assert np.allclose(a.moments, b.moments)

    def test_too_few_segments(self, med5g):
        with pytest.raises(ValueError):
            em.generate_half_wave_dipole((0, 0, 0), (0, 0, 1), 2, med5g)


class TestHertzianGenerator:
    def test_field_matches_single_dipole(self, med5g):
        block = em.generate_hertzian((0, 0, 0), (0, 0, 1), med5g)
        model = em.assemble_uncoupled([block])
        p = np.array([0.9, 0.4, 0.7]) * med5g.wavelength
        e_model = em.evaluate_field(em.assemble_manifold(model, p), [1.0])
        e_direct = em.dipole_field(block.moments, (0, 0, 0), p, med5g)
        assert np.linalg.norm(e_model.e - e_direct.e) <= 1e-13 * e_direct.norm

    def test_moment_magnitude(self, med5g):
        block = em.generate_hertzian((0, 0, 0), (0, 1, 0), med5g)
        assert np.allclose(
            block.moments, [0, med5g.wavelength / 100, 0]
        )

    def test_axis_normalized(self, med5g):
        a = em.generate_hertzian((0, 0, 0), (0, 0, -3.0), med5g)
        assert np.linalg.norm(a.moments) == pytest.approx(
            med5g.wavelength / 100, rel=1e-15
        )


class TestAssembleUncoupled:
    def test_single_antenna(self, med5g):
        block = em.generate_hertzian((0, 0, 0), (0, 0, 1), med5g)
        model = em.assemble_uncoupled([block])
        assert model.moment_matrix.shape == (3, 1)
        assert np.array_equal(model.moment_matrix[:, 0], block.moments)

    def test_block_sparsity_exact(self, med5g):
        model = em.half_wave_ula(3, med5g.wavelength / 2, med5g, k_segments=5)
        for n, sl in enumerate(model.block_slices):
            col = model.moment_matrix[:, n].copy()
            col[sl] = 0.0
            assert np.all(col == 0.0)
        assert model.is_uncoupled

    def test_quarter_wave_four_element_shape(self, med5g):
        model = em.half_wave_ula(4, med5g.wavelength / 4, med5g)
        assert model.n_antennas == 4
        assert model.n_segments == 160
        assert model.moment_matrix.shape == (480, 4)

    def test_mismatched_media_rejected(self):
        b1 = em.generate_hertzian((0, 0, 0), (0, 0, 1), em.Medium(5e9))
        b2 = em.generate_hertzian((1, 0, 0), (0, 0, 1), em.Medium(6e9))
        with pytest.raises(ValueError, match="medium"):
            em.assemble_uncoupled([b1, b2])

    def test_moment_superposition(self, med5g, rng):
        model = em.half_wave_ula(4, med5g.wavelength / 4, med5g, k_segments=7)
        w = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        direct = model.moment_matrix @ w
        summed = sum(
            w[n] * model.moment_matrix[:, n] for n in range(model.n_antennas)
        )
        assert np.linalg.norm(direct - summed) <= 1e-13 * np.linalg.norm(direct)


class TestMomentFileRoundTrip:
    def test_round_trip_bit_exact(self, med5g, tmp_path, rng):
        model = em.half_wave_ula(2, med5g.wavelength / 3, med5g, k_segments=5)
        # coupled perturbation exercises off-block entries too
        coupled = model.moment_matrix + 1e-6 * (
            rng.standard_normal(model.moment_matrix.shape)
            + 1j * rng.standard_normal(model.moment_matrix.shape)
        )
        model = em.ArrayModel(model.antennas, coupled, med5g)
        path = tmp_path / "moments.json"
        em.save_moment_matrix(model, path)
        loaded = em.load_moment_matrix(path)
        assert np.array_equal(loaded.moment_matrix, model.moment_matrix)
        assert loaded.medium == model.medium
        assert np.array_equal(loaded.centroids, model.centroids)

    def test_wrong_row_count_names_expectation(self, med5g, tmp_path):
        model = em.hertzian_ula(2, med5g.wavelength / 2, med5g)
        path = tmp_path / "moments.json"
        em.save_moment_matrix(model, path)
        doc = json.loads(path.read_text())
        doc["moment_matrix"] = doc["moment_matrix"][:-1]
        path.write_text(json.dumps(doc))
        with pytest.raises(MomentFileError, match="3K = 6"):
            em.load_moment_matrix(path)

    def test_non_finite_entry_located(self, med5g, tmp_path):
        model = em.hertzian_ula(2, med5g.wavelength / 2, med5g)
        path = tmp_path / "moments.json"
        em.save_moment_matrix(model, path)
        text = path.read_text().replace("0.0", "NaN", 1)
        path.write_text(text)
        with pytest.raises(MomentFileError):
            em.load_moment_matrix(path)

    def test_duplicate_centroids_rejected(self, med5g, tmp_path):
        doc = {
            "frequency_hz": 5e9,
            "antennas": [
                {"segments": [{"centroid_m": [0, 0, 0]}, {"centroid_m": [0, 0, 0]}]}
            ],
            "moment_matrix": [[[0.0, 0.0]]] * 6,
        }
        path = tmp_path / "dup.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(MomentFileError, match="distinct"):
            em.load_moment_matrix(path)

    def test_ingested_uncoupled_matches_generator(self, med5g, tmp_path):
        # file written independently with the json module, then compared
        # against the in-memory generator output
        block = em.generate_hertzian((0.25, 0, 0), (0, 0, 1), med5g)
        mz = med5g.wavelength / 100
        doc = {
            "frequency_hz": 5e9,
            "antennas": [
                {"segments": [{"centroid_m": [-0.25, 0.0, 0.0]}]},
                {"segments": [{"centroid_m": [0.25, 0.0, 0.0]}]},
            ],
            "moment_matrix": [
                [[0.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [0.0, 0.0]],
                [[mz, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [mz, 0.0]],
            ],
        }
        path = tmp_path / "pair.json"
        path.write_text(json.dumps(doc))
        loaded = em.load_moment_matrix(path)
        built = em.assemble_uncoupled(
            [
                em.generate_hertzian((-0.25, 0, 0), (0, 0, 1), med5g),
                em.generate_hertzian((0.25, 0, 0), (0, 0, 1), med5g),
            ]
        )
        assert np.array_equal(loaded.moment_matrix, built.moment_matrix)
        assert np.array_equal(loaded.centroids, built.centroids)
        assert loaded.is_uncoupled

    def test_missing_file(self, tmp_path):
        with pytest.raises(MomentFileError):
            em.load_moment_matrix(tmp_path / "absent.json")


class TestArrayModelValidation:
    def test_shape_mismatch_rejected(self, med5g):
        block = em.generate_hertzian((0, 0, 0), (0, 0, 1), med5g)
        with pytest.raises(ValueError, match="shape"):
            em.ArrayModel((block.geometry,), np.zeros((4, 1), complex), med5g)

    def test_duplicate_segment_centroids_rejected(self):
        seg = em.DipoleSegment((0.0, 0.0, 0.0))
        with pytest.raises(ValueError, match="distinct"):
            em.AntennaGeometry((seg, seg))

    def test_coupled_detection(self, med5g):
        model = em.hertzian_ula(2, med5g.wavelength / 2, med5g)
        m = model.moment_matrix.copy()
        m[0, 1] = 1e-9  # induced moment on the undriven antenna
        coupled = em.ArrayModel(model.antennas, m, med5g)
        assert not coupled.is_uncoupled
