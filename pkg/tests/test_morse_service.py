import time

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import null_space

from app.core.config import settings
from app.core.errors import EigenResidual, NotNearCritical, NotSymmetric, PersistentDegeneracy
from app.core.geometry import orthonormal_frame
from app.core.types import Classification, CyclicType, HessianReport, LengthVector, PerturbationSpec
from app.services import morse_service
from app.services.catalog_service import CatalogService
from app.services.config_service import ConfigService
from app.services.morse_service import MorseService
from conftest import regular_edges

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def _nudge(config, scale: float, seed: int, out_of_plane_only: bool = False):
	rng = np.random.default_rng(seed)
	noise = scale * rng.standard_normal(config.edges.shape)
	if out_of_plane_only:
		noise[:, :2] = 0.0
	xi = config.xi if out_of_plane_only else config.xi + scale * rng.standard_normal(3)
	E, X = ConfigService.project_to_constraints(config.edges + noise, xi, config.lengths)
	return ConfigService.make_decorated(E, X, config.lengths)


def test_eigen_counts():
	assert MorseService.eigen_counts(np.diag([-1.0, 0.0, 2.0])) == (1, 1, 1)
	assert MorseService.eigen_counts(np.diag([-3.0, -1.0, 1e-9])) == (2, 1, 0)
	with pytest.raises(NotSymmetric):
		MorseService.eigen_counts(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eigen_counts_rejects_inaccurate_pairs(monkeypatch):
	def sloppy_eigh(M):
		w, V = np.linalg.eigh(M)
		return w + 1e-3, V

	monkeypatch.setattr(morse_service.sla, "eigh", sloppy_eigh)
	with pytest.raises(EigenResidual):
		MorseService.eigen_counts(np.diag([-1.0, 2.0, 3.0]))


@given(seeds)
def test_tangent_frame_is_orthonormal_and_horizontal(seed):
	config = ConfigService.random_configuration(7, np.random.default_rng(seed))
	B = MorseService.tangent_frame(config).basis
	assert B.shape == (3 * 7 + 3, 2 * 7 - 4)
	assert np.allclose(B.T @ B, np.eye(B.shape[1]), atol=1e-10)
	E, xi = config.edges, config.xi
	for a in range(3):
		axis = np.eye(3)[a]
		generator = np.concatenate([np.cross(axis, E).ravel(), np.cross(axis, xi)])
		assert np.allclose(B.T @ generator, 0.0, atol=1e-10)
		closure = np.zeros(3 * 7 + 3)
		closure[a:3 * 7:3] = 1.0
		assert np.allclose(B.T @ closure, 0.0, atol=1e-10)
	for i in range(7):
		length_grad = np.zeros(3 * 7 + 3)
		length_grad[3 * i:3 * i + 3] = E[i]
		assert np.allclose(B.T @ length_grad, 0.0, atol=1e-10)


def test_planar_frame_size(catalog5):
	planar = ConfigService.planar_of(catalog5.entries[0].config)
	assert MorseService.planar_tangent_frame(planar).size == 2


def test_catalog_entries_are_critical(catalog5, catalog7):
	for catalog in (catalog5, catalog7):
		for entry in catalog:
			assert MorseService.projected_gradient_norm(entry.config) < 1e-8


def test_perturbed_entries_critical_after_polish():
	lengths = ConfigService.perturb_lengths(7, PerturbationSpec(1e-3, 17))
	for entry in CatalogService.build_catalog(7, lengths):
		polished = MorseService.refine_critical(entry.config, max_iters=5)
		assert polished.residual < 1e-8


def test_tilted_decoration_is_not_critical():
	xi = np.array([np.sin(0.1), 0.0, np.cos(0.1)])
	config = ConfigService.make_decorated(regular_edges(5), xi, LengthVector.equilateral(5))
	assert MorseService.projected_gradient_norm(config) > 1e-3


def test_planar_block_of_decorated_hessian(catalog5, catalog7):
	for catalog in (catalog5, catalog7):
		n = catalog.n
		for entry in catalog:
			config = entry.config
			planar = ConfigService.planar_of(config)
			assert MorseService.planar_gradient_norm(planar) < 1e-8
			Hd = MorseService.projected_hessian(config)
			Hp = MorseService.planar_projected_hessian(planar)
			Bd = MorseService.tangent_frame(config).basis
			Bp = MorseService.planar_tangent_frame(planar).basis
			b1, b2, _ = orthonormal_frame(config.xi)
			# variasi planar ditanam ke koordinat (sisi, xi), komponen xi nol
			Q = np.zeros((3 * n + 3, n - 3))
			for i in range(n):
				Q[3 * i:3 * i + 3] = np.outer(b1, Bp[2 * i]) + np.outer(b2, Bp[2 * i + 1])
			C = Bd.T @ Q
			assert np.allclose(C.T @ C, np.eye(n - 3), atol=1e-10)
			assert np.allclose(C.T @ Hd @ C, Hp, atol=1e-9)
			N = null_space(C.T)
			assert np.allclose(N.T @ Hd @ C, 0.0, atol=1e-9)
			planar_negatives = MorseService.eigen_counts(Hp).negatives
			assert planar_negatives == CatalogService.planar_index(entry.ctype), entry.key
			rest = MorseService.eigen_counts(N.T @ Hd @ N)
			assert planar_negatives + rest.negatives == entry.index_combinatorial, entry.key


def test_random_configuration_is_not_critical():
	config = ConfigService.random_configuration(7, np.random.default_rng(5))
	assert MorseService.projected_gradient_norm(config) > 1e-6
	with pytest.raises(NotNearCritical):
		MorseService.projected_hessian(config)
	H = MorseService.projected_hessian(config, require_critical=False)
	assert np.linalg.norm(H - H.T) <= 1e-10 * np.linalg.norm(H)


@pytest.mark.parametrize("n", [5, 7, 9])
def test_numeric_index_matches_combinatorial(n):
	catalog = CatalogService.build_catalog(n)
	for entry in catalog:
		report = MorseService.numeric_index(entry)
		assert report.negatives == entry.index_combinatorial, entry.key
		assert not report.degenerate
		assert report.dimension == 2 * n - 4


def test_hessian_table_rows(catalog5):
	rows = MorseService.hessian_table(catalog5)
	assert [entry.key for entry, _, _ in rows] == [entry.key for entry in catalog5]
	assert all(expected == report.negatives for _, expected, report in rows)


def test_persistent_degeneracy(catalog5):
	entry = catalog5.by_key()["s+++++_w1"]
	with pytest.raises(PersistentDegeneracy):
		MorseService.numeric_index(entry, zero_tol=1.0)


def test_degeneracy_fallback_recovers_index(catalog5, monkeypatch):
	unperturbed = MorseService.hessian_report

	def degenerate_once(config, zero_tol=None):
		report = unperturbed(config, zero_tol)
		return HessianReport(
			negatives=report.negatives, zeros=1, positives=report.positives - 1,
			min_abs_nonzero=report.min_abs_nonzero, gradient_residual=report.gradient_residual,
			degenerate=True,
		)

	monkeypatch.setattr(MorseService, "hessian_report", staticmethod(degenerate_once))
	entry = catalog5.by_key()["s++++-_w1"]
	report = MorseService.numeric_index(entry)
	assert report.perturbation_seed == settings.fallback_seed
	assert report.zeros == 0
	assert not report.degenerate
	assert report.negatives == entry.index_combinatorial


def test_certify_catalog_fills_numeric_index(catalog5):
	certified = MorseService.certify_catalog(catalog5)
	assert all(entry.index_numeric is None for entry in catalog5)
	assert [e.key for e in certified] == [e.key for e in catalog5]
	assert all(e.index_numeric == e.index_combinatorial for e in certified)


def test_threefold_raises_numeric_index_by_two(catalog5, catalog7):
	by_key = catalog7.by_key()
	for entry in catalog5:
		for i in range(1, 6):
			embedded = ConfigService.threefold_embed(entry.config, i)
			assert MorseService.projected_gradient_norm(embedded) < 1e-8
			s = list(entry.ctype.signs)
			spliced = CyclicType(tuple(s[:i - 1] + [s[i - 1], -s[i - 1], s[i - 1]] + s[i:]), entry.ctype.omega)
			report = MorseService.numeric_index(by_key[spliced.key])
			assert report.negatives == entry.index_combinatorial + 2


def test_planar_indices_pentagon(catalog5):
	counts = {}
	for entry in catalog5:
		report = MorseService.numeric_planar_index(entry)
		assert report.negatives == CatalogService.planar_index(entry.ctype), entry.key
		counts[report.negatives] = counts.get(report.negatives, 0) + 1
	assert counts == {0: 2, 1: 10, 2: 2}


def test_refine_returns_immediately_at_critical_point(catalog5):
	entry = catalog5.by_key()["s+++++_w2"]
	result = MorseService.refine_critical(entry.config)
	assert result.converged
	assert result.iterations == 0


@pytest.mark.parametrize("key", ["s+++++_w1", "s+++++_w2", "s-----_w-1"])
def test_refine_recovers_nearby_critical_point(catalog5, key):
	entry = catalog5.by_key()[key]
	start = _nudge(entry.config, 1e-4, seed=7)
	result = MorseService.refine_critical(start, max_iters=50)
	assert result.converged
	assert result.residual < 1e-9
	classified = MorseService.classify_candidate(result.config, catalog5, MorseService.MATCH_TOL)
	assert classified.classification == Classification.PLANAR_CYCLIC
	assert classified.matched_entry == key


def test_gradient_flow_increases_area():
	config = ConfigService.random_configuration(5, np.random.default_rng(2))
	from app.services.area_service import AreaService
	before = AreaService.area_S(config)
	after = AreaService.area_S(MorseService.gradient_flow(config, 1.0, steps=20))
	assert after >= before


def test_classify_self_match(catalog5):
	for entry in catalog5:
		result = MorseService.classify_candidate(entry.config, catalog5)
		assert result.classification == Classification.PLANAR_CYCLIC
		assert result.matched_entry == entry.key
		assert result.match_distance <= 1e-9


@given(seeds)
def test_classify_rotated_entry(seed):
	catalog = CatalogService.build_catalog(5, workers=1)
	rng = np.random.default_rng(seed)
	entry = catalog.entries[int(rng.integers(len(catalog)))]
	rotated = ConfigService.rotate(entry.config, ConfigService.random_rotation(rng))
	result = MorseService.classify_candidate(rotated, catalog)
	assert result.classification == Classification.PLANAR_CYCLIC
	assert result.matched_entry == entry.key


def test_decoy_is_never_planar_cyclic(catalog5):
	entry = catalog5.by_key()["s+++++_w1"]
	decoy = _nudge(entry.config, 1e-2, seed=3, out_of_plane_only=True)
	result = MorseService.classify_candidate(decoy, catalog5, 1e-6)
	assert result.classification != Classification.PLANAR_CYCLIC
	assert result.matched_entry is None


def test_candidate_diagnostics_vanish_on_catalog(catalog5):
	for entry in catalog5:
		diag = MorseService.candidate_diagnostics(entry.config)
		assert diag.planarity < 1e-12
		assert diag.xi_parallel < 1e-12
		assert diag.concyclicity < 1e-12
		assert diag.max_coplanarity < 1e-12


def test_random_search_soundness_and_determinism():
	first = MorseService.random_search(5, restarts=8, seed=1, workers=1)
	second = MorseService.random_search(5, restarts=8, seed=1, workers=1)
	assert [r.restart for r in first] == list(range(8))
	assert [r.classification for r in first] == [r.classification for r in second]
	assert [r.matched_entry for r in first] == [r.matched_entry for r in second]
	converged = [r for r in first if r.classification != Classification.NOT_CONVERGED]
	assert converged
	for r in converged:
		assert r.classification == Classification.PLANAR_CYCLIC
		assert r.match_distance <= 1e-6
		assert r.residual < 1e-9


def test_random_search_rejects_zero_restarts():
	with pytest.raises(ValueError):
		MorseService.random_search(5, restarts=0, seed=1)


def test_random_search_heptagon_matches_catalog():
	started = time.perf_counter()
	results = MorseService.random_search(7, restarts=500, seed=1, workers=1)
	elapsed = time.perf_counter() - started
	assert elapsed < 120.0
	assert len(results) == 500
	converged = [r for r in results if r.classification != Classification.NOT_CONVERGED]
	assert len(converged) >= 0.8 * len(results)
	assert not any(r.classification == Classification.NON_PLANAR_CANDIDATE for r in results)
	for r in converged:
		assert r.classification == Classification.PLANAR_CYCLIC
		assert r.match_distance <= 1e-6
