import numpy as np
import pytest
from hypothesis import given, strategies as st

from app.core.errors import (
	BadDecoration, BadParity, BadPerturbation, CenterOnPolygonVertex, ClosureViolation,
	DimensionMismatch, LengthViolation, NonIntegerWinding, NotCoplanar,
)
from app.core.types import CyclicType, LengthVector, PerturbationSpec
from app.services.area_service import AreaService
from app.services.catalog_service import CatalogService
from app.services.config_service import ConfigService
from conftest import regular_edges

Z = np.array([0.0, 0.0, 1.0])
PENTAGON_R = 1.0 / (2.0 * np.sin(np.pi / 5.0))


def test_regular_pentagon_is_valid(unit5):
	config = ConfigService.make_decorated(regular_edges(5), Z, unit5)
	assert config.n == 5
	center = np.array([-PENTAGON_R, 0.0, 0.0])
	dist = np.linalg.norm(ConfigService.vertices(config) - center, axis=1)
	assert np.allclose(dist, 0.850651, atol=1e-6)


def test_scaled_edge_is_length_violation(unit5):
	edges = regular_edges(5)
	edges[0] *= 1.5
	with pytest.raises(LengthViolation):
		ConfigService.make_decorated(edges, Z, unit5)


def test_open_polygon_is_closure_violation(unit5):
	edges = regular_edges(5)
	bent = edges[0] + 2.0 * edges[1]
	edges[0] = bent / np.linalg.norm(bent)
	with pytest.raises(ClosureViolation):
		ConfigService.make_decorated(edges, Z, unit5)


def test_bad_decoration(unit5):
	with pytest.raises(BadDecoration):
		ConfigService.make_decorated(regular_edges(5), 2.0 * Z, unit5)


def test_decoration_normalized_within_tolerance(unit5):
	config = ConfigService.make_decorated(regular_edges(5), (1.0 + 1e-10) * Z, unit5)
	assert np.linalg.norm(config.xi) == pytest.approx(1.0, abs=1e-15)


def test_even_n_rejected():
	with pytest.raises(BadParity):
		LengthVector.equilateral(4)
	with pytest.raises(BadParity):
		ConfigService.check_parity(6)


def test_configuration_is_immutable(unit5):
	config = ConfigService.make_decorated(regular_edges(5), Z, unit5)
	with pytest.raises(ValueError):
		config.edges[0, 0] = 3.0


def test_vertices_gauge_and_roundtrip(unit5):
	edges = regular_edges(5)
	config = ConfigService.make_decorated(edges, Z, unit5)
	P = ConfigService.vertices(config)
	assert np.array_equal(P[0], np.zeros(3))
	assert np.allclose(ConfigService.edges_from_vertices(P), edges, atol=1e-12)


def test_winding_convex_and_star():
	center = np.zeros(3)
	convex = ConfigService.vertices(ConfigService.make_decorated(regular_edges(5), Z, LengthVector.equilateral(5)))
	star = ConfigService.vertices(ConfigService.make_decorated(regular_edges(5, 2), Z, LengthVector.equilateral(5)))
	convex_center = center + np.array([-PENTAGON_R, 0.0, 0.0])
	star_R = 1.0 / (2.0 * np.sin(2.0 * np.pi / 5.0))
	assert ConfigService.winding_number(convex, convex_center, Z) == 1
	assert ConfigService.winding_number(star, np.array([-star_R, 0.0, 0.0]), Z) == 2
	assert ConfigService.winding_number(convex, convex_center, -Z) == -1


@pytest.mark.parametrize("shift", [1, 2, 3, 4])
def test_winding_invariant_under_relabeling(shift):
	points = ConfigService.vertices(ConfigService.make_decorated(regular_edges(5, 2), Z, LengthVector.equilateral(5)))
	star_R = 1.0 / (2.0 * np.sin(2.0 * np.pi / 5.0))
	center = np.array([-star_R, 0.0, 0.0])
	assert ConfigService.winding_number(np.roll(points, shift, axis=0), center, Z) == 2
	assert ConfigService.winding_number(np.roll(points, shift, axis=0), center, -Z) == -2


def test_winding_errors():
	points = ConfigService.vertices(ConfigService.make_decorated(regular_edges(5), Z, LengthVector.equilateral(5)))
	with pytest.raises(CenterOnPolygonVertex):
		ConfigService.winding_number(points, points[0], Z)
	lifted = points.copy()
	lifted[2, 2] = 1e-3
	with pytest.raises(NotCoplanar):
		ConfigService.winding_number(lifted, np.array([-PENTAGON_R, 0.0, 0.0]), Z)


def test_winding_requires_integer_turns(monkeypatch):
	points = ConfigService.vertices(ConfigService.make_decorated(regular_edges(5), Z, LengthVector.equilateral(5)))
	center = np.array([-PENTAGON_R, 0.0, 0.0])
	monkeypatch.setattr(ConfigService, "WINDING_TOL", 0.0)
	with pytest.raises(NonIntegerWinding):
		ConfigService.winding_number(points, center, Z)


def test_threefold_embed_preserves_area_and_closure(catalog5):
	for entry in catalog5:
		for i in range(1, 6):
			bigger = ConfigService.threefold_embed(entry.config, i)
			assert bigger.n == 7
			assert np.linalg.norm(bigger.edges.sum(axis=0)) <= 1e-12
			assert AreaService.area_S(bigger) == pytest.approx(entry.s_value, abs=1e-12)
			assert np.array_equal(bigger.xi, entry.config.xi)


def test_folded_pentagon_retraces_chord(unit5):
	entry = CatalogService.build_cyclic(CyclicType((1, -1, 1, 1, 1), 1), unit5)
	P = ConfigService.vertices(entry.config)
	assert np.allclose(P[0], P[2], atol=1e-12)
	distinct = {tuple(np.round(p, 9)) for p in P}
	# lipatan +,-,+ menelusuri satu tali busur tiga kali; sisanya segitiga sama sisi
	assert len(distinct) == 3


def test_perturb_lengths_contract():
	assert ConfigService.perturb_lengths(7, PerturbationSpec(0.0, 5)).is_equilateral
	a = ConfigService.perturb_lengths(7, PerturbationSpec(1e-3, 42))
	b = ConfigService.perturb_lengths(7, PerturbationSpec(1e-3, 42))
	assert a == b
	assert a.n == 7
	assert all(0.999 <= v <= 1.001 for v in a.lengths)
	assert ConfigService.perturb_lengths(7, PerturbationSpec(1e-3, 43)) != a


def test_perturbation_bounds():
	with pytest.raises(BadPerturbation):
		PerturbationSpec(-1e-3, 1)
	with pytest.raises(BadPerturbation):
		ConfigService.perturb_lengths(5, PerturbationSpec(0.05, 1))


@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_distance_is_rotation_invariant(seed):
	rng = np.random.default_rng(seed)
	config = ConfigService.random_configuration(7, rng)
	Q = ConfigService.random_rotation(rng)
	rotated = ConfigService.rotate(config, Q)
	assert ConfigService.configuration_distance(config, rotated) <= 1e-9
	assert ConfigService.configuration_distance(config, config) <= 1e-12


def test_distance_separates_convex_and_star(catalog5):
	by_key = catalog5.by_key()
	convex = by_key["s+++++_w1"].config
	star = by_key["s+++++_w2"].config
	d = ConfigService.configuration_distance(convex, star)
	# suku silang bidang lenyap, tinggal kontribusi xi: d^2 = 12 - 2
	assert d == pytest.approx(np.sqrt(10.0), abs=1e-9)
	assert d == pytest.approx(ConfigService.configuration_distance(star, convex), abs=1e-12)


def test_distance_dimension_mismatch(catalog5, catalog7):
	with pytest.raises(DimensionMismatch):
		ConfigService.configuration_distance(catalog5.entries[0].config, catalog7.entries[0].config)


def test_rotate_rejects_reflection(unit5):
	config = ConfigService.make_decorated(regular_edges(5), Z, unit5)
	with pytest.raises(DimensionMismatch):
		ConfigService.rotate(config, np.diag([1.0, 1.0, -1.0]))


@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_random_configuration_satisfies_constraints(seed):
	config = ConfigService.random_configuration(9, np.random.default_rng(seed))
	assert np.linalg.norm(config.edges.sum(axis=0)) < 1e-9
	assert np.allclose(np.linalg.norm(config.edges, axis=1), 1.0, atol=1e-9)
	assert np.linalg.norm(config.xi) == pytest.approx(1.0)


def test_planar_of_catalog_entry(catalog5):
	entry = catalog5.by_key()["s+++++_w1"]
	planar = ConfigService.planar_of(entry.config)
	assert np.allclose(planar.edges, entry.config.edges[:, :2], atol=1e-15)


def test_planar_of_rejects_tilted(unit5):
	config = ConfigService.make_decorated(regular_edges(5), np.array([1.0, 0.0, 0.0]), unit5)
	with pytest.raises(NotCoplanar):
		ConfigService.planar_of(config)
