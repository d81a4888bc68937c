import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np
import scipy.linalg as sla

from app.core.config import settings
from app.core.errors import (
	EigenResidual, NotNearCritical, NotSymmetric, PersistentDegeneracy, ProjectionStalled, RankDeficiency,
)
from app.core.geometry import fit_circle_2d, orthonormal_frame
from app.core.types import (
	CandidateDiagnostics, Catalog, CatalogEntry, Classification, DecoratedConfiguration,
	HessianReport, LengthVector, PerturbationSpec, PlanarConfiguration, RefineResult,
	SearchResult, TangentFrame,
)
from app.services.area_service import AreaService
from app.services.catalog_service import CatalogService
from app.services.config_service import ConfigService

logger = logging.getLogger(__name__)

_J = np.array([[0.0, -1.0], [1.0, 0.0]])


class EigenCounts(NamedTuple):
	negatives: int
	zeros: int
	positives: int


@dataclass(frozen=True)
class _Problem:
	"""Data orde satu/dua satu titik: fungsi pada manifold constraint modulo rotasi."""
	grad: np.ndarray
	constraints: np.ndarray
	generators: np.ndarray
	curvature: np.ndarray
	hessian: Callable[[], np.ndarray]
	dim: int


def _decorated_problem(config: DecoratedConfiguration) -> _Problem:
	n = config.n
	m = 3 * n + 3
	E, xi = config.edges, config.xi
	G = np.zeros((m, n + 4))
	curv = np.zeros((m, n + 4))
	for i in range(n):
		G[3 * i:3 * i + 3, i] = E[i]
		curv[3 * i:3 * i + 3, i] = 1.0
	for a in range(3):
		G[a:3 * n:3, n + a] = 1.0
	G[3 * n:, n + 3] = xi
	curv[3 * n:, n + 3] = 1.0
	gens = np.zeros((m, 3))
	for a in range(3):
		axis = np.eye(3)[a]
		gens[:3 * n, a] = np.cross(axis, E).ravel()
		gens[3 * n:, a] = np.cross(axis, xi)
	return _Problem(
		grad=AreaService.grad_S(config).flat(),
		constraints=G,
		generators=gens,
		curvature=curv,
		hessian=lambda: AreaService.ambient_hessian(config),
		dim=2 * n - 4,
	)


def _planar_problem(config: PlanarConfiguration) -> _Problem:
	n = config.n
	m = 2 * n
	E = config.edges
	G = np.zeros((m, n + 2))
	curv = np.zeros((m, n + 2))
	for i in range(n):
		G[2 * i:2 * i + 2, i] = E[i]
		curv[2 * i:2 * i + 2, i] = 1.0
	for a in range(2):
		G[a:m:2, n + a] = 1.0
	gens = (E @ _J.T).reshape(m, 1)
	return _Problem(
		grad=AreaService.planar_gradient(config),
		constraints=G,
		generators=gens,
		curvature=curv,
		hessian=lambda: AreaService.planar_hessian(config),
		dim=n - 3,
	)


def _frame(problem: _Problem) -> np.ndarray:
	C = np.hstack([problem.constraints, problem.generators])
	U, s, _ = np.linalg.svd(C, full_matrices=True)
	tol = s.max() * max(C.shape) * np.finfo(float).eps
	rank = int(np.sum(s > tol))
	if rank != C.shape[1] or C.shape[0] - rank != problem.dim:
		raise RankDeficiency(f"rank constraint+simetri {rank}, diharapkan {C.shape[1]}")
	return U[:, rank:]


def _lagrangian_hessian(problem: _Problem, basis: np.ndarray) -> Tuple[np.ndarray, float]:
	lam, *_ = np.linalg.lstsq(problem.constraints, problem.grad, rcond=None)
	multiplier_residual = float(np.linalg.norm(problem.grad - problem.constraints @ lam))
	H = problem.hessian() - np.diag(problem.curvature @ lam)
	Hq = basis.T @ H @ basis
	return 0.5 * (Hq + Hq.T), multiplier_residual


@lru_cache(maxsize=8)
def _cached_catalog(n: int) -> Catalog:
	return CatalogService.build_catalog(n, workers=1)


def _search_restart(n: int, seed: int, restart: int, max_iters: int) -> SearchResult:
	rng = np.random.default_rng([seed, restart])
	start = None
	for _ in range(10):
		try:
			start = ConfigService.random_configuration(n, rng)
			break
		except ProjectionStalled:
			logger.debug(f"Restart {restart}: projection stalled, redrawing")
	if start is None:
		raise ProjectionStalled(f"restart {restart}: proyeksi awal gagal 10 kali")
	result = MorseService.refine_critical(start, max_iters)
	if result.residual >= MorseService.CONVERGED:
		sign = 1.0 if AreaService.area_S(result.config) >= 0 else -1.0
		flowed = MorseService.gradient_flow(result.config, sign)
		result = MorseService.refine_critical(flowed, max_iters)
	if result.residual >= MorseService.CONVERGED:
		return SearchResult(result.config, result.residual, Classification.NOT_CONVERGED, restart=restart)
	classified = MorseService.classify_candidate(result.config, _cached_catalog(n), MorseService.MATCH_TOL)
	return replace(classified, restart=restart)


class MorseService:
	CRITICAL_TOL = 1e-8
	HESSIAN_GATE = 1e-6
	EIG_RESIDUAL = 1e-10
	SYMMETRY_TOL = 1e-10
	REFINE_TOL = 1e-10
	CONVERGED = 1e-9
	MATCH_TOL = 1e-6
	MAX_STEP = 0.5
	FALLBACK_ATTEMPTS = 3

	# ===== FRAME & GRADIEN =====
	@staticmethod
	def tangent_frame(config: DecoratedConfiguration) -> TangentFrame:
		return TangentFrame(_frame(_decorated_problem(config)))

	@staticmethod
	def planar_tangent_frame(config: PlanarConfiguration) -> TangentFrame:
		return TangentFrame(_frame(_planar_problem(config)))

	@staticmethod
	def projected_gradient_norm(config: DecoratedConfiguration) -> float:
		problem = _decorated_problem(config)
		return float(np.linalg.norm(_frame(problem).T @ problem.grad))

	@staticmethod
	def planar_gradient_norm(config: PlanarConfiguration) -> float:
		problem = _planar_problem(config)
		return float(np.linalg.norm(_frame(problem).T @ problem.grad))

	# ===== HESSIAN =====
	@staticmethod
	def _projected(problem: _Problem, require_critical: bool) -> Tuple[np.ndarray, float]:
		basis = _frame(problem)
		gnorm = float(np.linalg.norm(basis.T @ problem.grad))
		if require_critical and gnorm >= MorseService.HESSIAN_GATE:
			raise NotNearCritical(f"|grad| proyeksi = {gnorm:.3e}, bukan titik kritis")
		Hq, multiplier_residual = _lagrangian_hessian(problem, basis)
		return Hq, gnorm + multiplier_residual

	@staticmethod
	def projected_hessian(config: DecoratedConfiguration, require_critical: bool = True) -> np.ndarray:
		return MorseService._projected(_decorated_problem(config), require_critical)[0]

	@staticmethod
	def planar_projected_hessian(config: PlanarConfiguration, require_critical: bool = True) -> np.ndarray:
		return MorseService._projected(_planar_problem(config), require_critical)[0]

	@staticmethod
	def _spectrum(matrix: np.ndarray, zero_tol: Optional[float] = None) -> Tuple[EigenCounts, float]:
		M = np.asarray(matrix, dtype=float)
		tol = settings.zero_tol if zero_tol is None else zero_tol
		scale = float(np.linalg.norm(M))
		if np.linalg.norm(M - M.T) > MorseService.SYMMETRY_TOL * max(scale, np.finfo(float).tiny):
			raise NotSymmetric("matriks tidak simetris")
		w, V = sla.eigh(M)
		spectral = float(np.max(np.abs(w))) if w.size else 0.0
		residual = np.linalg.norm(M @ V - V * w, axis=0).max() if w.size else 0.0
		if residual > MorseService.EIG_RESIDUAL * max(scale, 1.0):
			raise EigenResidual(f"residual pasangan eigen {residual:.2e} melewati batas")
		zero = np.abs(w) <= tol * spectral
		counts = EigenCounts(int(np.sum((w < 0) & ~zero)), int(np.sum(zero)), int(np.sum((w > 0) & ~zero)))
		nonzero = np.abs(w[~zero])
		return counts, float(nonzero.min()) if nonzero.size else 0.0

	@staticmethod
	def eigen_counts(matrix: np.ndarray, zero_tol: Optional[float] = None) -> EigenCounts:
		return MorseService._spectrum(matrix, zero_tol)[0]

	@staticmethod
	def _report(problem: _Problem, zero_tol: Optional[float], seed: Optional[int] = None) -> HessianReport:
		Hq, residual = MorseService._projected(problem, True)
		counts, min_abs = MorseService._spectrum(Hq, zero_tol)
		return HessianReport(
			negatives=counts.negatives,
			zeros=counts.zeros,
			positives=counts.positives,
			min_abs_nonzero=min_abs,
			gradient_residual=residual,
			degenerate=counts.zeros > 0,
			perturbation_seed=seed,
		)

	@staticmethod
	def hessian_report(config: DecoratedConfiguration, zero_tol: Optional[float] = None) -> HessianReport:
		return MorseService._report(_decorated_problem(config), zero_tol)

	@staticmethod
	def planar_report(config: PlanarConfiguration, zero_tol: Optional[float] = None) -> HessianReport:
		return MorseService._report(_planar_problem(config), zero_tol)

	@staticmethod
	def _fallback_lengths(n: int, attempt: int) -> Tuple[LengthVector, int]:
		seed = settings.fallback_seed + attempt
		spec = PerturbationSpec(settings.fallback_epsilon, seed)
		return ConfigService.perturb_lengths(n, spec), seed

	@staticmethod
	def numeric_index(entry: CatalogEntry, zero_tol: Optional[float] = None) -> HessianReport:
		report = MorseService.hessian_report(entry.config, zero_tol)
		if not report.degenerate:
			return report
		logger.warning(f"{entry.key}: {report.zeros} zero eigenvalue(s), switching to perturbed lengths")
		for attempt in range(MorseService.FALLBACK_ATTEMPTS):
			lengths, seed = MorseService._fallback_lengths(entry.config.n, attempt)
			moved = CatalogService.build_cyclic(entry.ctype, lengths)
			polished = MorseService.refine_critical(moved.config, max_iters=20).config
			report = MorseService._report(_decorated_problem(polished), zero_tol, seed)
			if not report.degenerate:
				return report
		raise PersistentDegeneracy(f"{entry.key}: Hessian tetap degenerate setelah {MorseService.FALLBACK_ATTEMPTS} perturbasi")

	@staticmethod
	def numeric_planar_index(entry: CatalogEntry, zero_tol: Optional[float] = None) -> HessianReport:
		report = MorseService.planar_report(ConfigService.planar_of(entry.config), zero_tol)
		if not report.degenerate:
			return report
		logger.warning(f"{entry.key}: planar Hessian degenerate, switching to perturbed lengths")
		for attempt in range(MorseService.FALLBACK_ATTEMPTS):
			lengths, seed = MorseService._fallback_lengths(entry.config.n, attempt)
			moved = CatalogService.build_cyclic(entry.ctype, lengths)
			report = MorseService._report(_planar_problem(ConfigService.planar_of(moved.config)), zero_tol, seed)
			if not report.degenerate:
				return report
		raise PersistentDegeneracy(f"{entry.key}: Hessian planar tetap degenerate")

	# ===== NEWTON & PENCARIAN =====
	@staticmethod
	def _retract(config: DecoratedConfiguration, step: np.ndarray) -> DecoratedConfiguration:
		n = config.n
		edges = config.edges + step[:3 * n].reshape(n, 3)
		xi = config.xi + step[3 * n:]
		E, X = ConfigService.project_to_constraints(edges, xi, config.lengths)
		return ConfigService.make_decorated(E, X, config.lengths)

	@staticmethod
	def _tangent_state(config: DecoratedConfiguration) -> Tuple[_Problem, np.ndarray, np.ndarray]:
		problem = _decorated_problem(config)
		basis = _frame(problem)
		return problem, basis, basis.T @ problem.grad

	@staticmethod
	def refine_critical(config: DecoratedConfiguration, max_iters: int = 50, tol: Optional[float] = None) -> RefineResult:
		"""Levenberg-Marquardt pada gradien terproyeksi; residual turun monoton di langkah yang diterima."""
		tol = tol or MorseService.REFINE_TOL
		problem, basis, g = MorseService._tangent_state(config)
		residual = float(np.linalg.norm(g))
		if residual < tol:
			return RefineResult(config, residual, 0, True)
		Hq, _ = _lagrangian_hessian(problem, basis)
		mu = 1e-8 * max(float(np.sum(Hq ** 2)), 1e-12)
		polish = 0
		iters = 0
		while iters < max_iters:
			iters += 1
			A = Hq @ Hq + mu * np.eye(Hq.shape[0])
			d = -np.linalg.solve(A, Hq @ g)
			norm_d = float(np.linalg.norm(d))
			if norm_d > MorseService.MAX_STEP:
				d *= MorseService.MAX_STEP / norm_d
			try:
				trial = MorseService._retract(config, basis @ d)
				t_problem, t_basis, t_g = MorseService._tangent_state(trial)
				t_residual = float(np.linalg.norm(t_g))
			except (ProjectionStalled, RankDeficiency):
				t_residual = np.inf
			if t_residual < residual:
				config, problem, basis, g, residual = trial, t_problem, t_basis, t_g, t_residual
				Hq, _ = _lagrangian_hessian(problem, basis)
				mu = max(mu / 3.0, 1e-300)
				if residual < tol:
					polish += 1
					if polish > 2:
						break
			else:
				if residual < tol:
					break
				mu *= 4.0
				if mu > 1e12:
					break
		return RefineResult(config, residual, iters, residual < tol)

	@staticmethod
	def gradient_flow(config: DecoratedConfiguration, sign: float = 1.0, steps: int = 200) -> DecoratedConfiguration:
		"""Naik (sign=+1) / turun (sign=-1) sepanjang gradien S dengan backtracking Armijo."""
		for _ in range(steps):
			_, basis, g = MorseService._tangent_state(config)
			gnorm = float(np.linalg.norm(g))
			if gnorm < 1e-6:
				break
			direction = sign * (basis @ g)
			f0 = AreaService.area_S(config)
			t = 0.5
			accepted = False
			while t > 1e-8:
				try:
					trial = MorseService._retract(config, t * direction)
				except ProjectionStalled:
					t *= 0.5
					continue
				if sign * (AreaService.area_S(trial) - f0) >= 1e-4 * t * gnorm ** 2:
					config, accepted = trial, True
					break
				t *= 0.5
			if not accepted:
				break
		return config

	@staticmethod
	def candidate_diagnostics(config: DecoratedConfiguration) -> CandidateDiagnostics:
		P = ConfigService.vertices(config)
		xi = config.xi
		planarity = float(np.abs((P - P.mean(axis=0)) @ xi).max())
		S_vec = 2.0 * AreaService.vector_area(config)
		s_norm = float(np.linalg.norm(S_vec))
		axis = S_vec / s_norm if s_norm > 0 else xi
		xi_parallel = float(np.linalg.norm(np.cross(xi, axis))) if s_norm > 0 else 1.0
		b1, b2, _ = orthonormal_frame(axis)
		_, concyclicity = fit_circle_2d(np.column_stack([P @ b1, P @ b2]))
		prev, nxt = np.roll(P, 1, axis=0), np.roll(P, -1, axis=0)
		T = 0.5 * np.cross(P - prev, nxt - P)
		d = nxt - prev
		coplanarity = np.einsum("ij,ij->i", T, np.cross(S_vec, d))
		return CandidateDiagnostics(
			planarity=planarity,
			xi_parallel=xi_parallel,
			concyclicity=concyclicity,
			coplanarity=tuple(float(v) for v in coplanarity),
		)

	@staticmethod
	def classify_candidate(config: DecoratedConfiguration, catalog: Catalog, tol: float = 1e-6) -> SearchResult:
		residual = MorseService.projected_gradient_norm(config)
		if residual >= MorseService.CRITICAL_TOL:
			return SearchResult(config, residual, Classification.NOT_CONVERGED)
		P = ConfigService.vertices(config)
		planarity = float(np.abs((P - P.mean(axis=0)) @ config.xi).max())
		if planarity <= tol:
			s_value = AreaService.area_S(config)
			best_key, best_dist = None, np.inf
			for entry in catalog:
				if abs(entry.s_value - s_value) > 1e-4:
					continue
				dist = ConfigService.configuration_distance(config, entry.config)
				if dist < best_dist:
					best_key, best_dist = entry.key, dist
			if best_key is not None and best_dist <= tol:
				return SearchResult(
					config, residual, Classification.PLANAR_CYCLIC,
					matched_entry=best_key, match_distance=float(best_dist),
				)
		# kandidat di luar katalog planar: laporkan diagnostik mentah
		return SearchResult(
			config, residual, Classification.NON_PLANAR_CANDIDATE,
			diagnostics=MorseService.candidate_diagnostics(config),
		)

	@staticmethod
	def random_search(
		n: int, restarts: int, seed: int, workers: Optional[int] = None, max_iters: int = 200
	) -> List[SearchResult]:
		n = ConfigService.check_parity(n)
		if restarts < 1:
			raise ValueError("restarts harus >= 1")
		workers = min(workers or settings.threads, restarts)
		args = [(n, int(seed), r, max_iters) for r in range(restarts)]
		if workers > 1:
			with ProcessPoolExecutor(max_workers=workers) as pool:
				results = list(pool.map(_search_restart, *zip(*args), chunksize=max(1, restarts // (4 * workers))))
		else:
			results = [_search_restart(*a) for a in args]
		converged = sum(1 for r in results if r.classification != Classification.NOT_CONVERGED)
		logger.info(f"Search n={n}: {converged}/{restarts} restarts converged")
		return results

	@staticmethod
	def gradcheck(n: int, samples: int, seed: int) -> float:
		rng = np.random.default_rng(seed)
		worst = 0.0
		for _ in range(samples):
			config = ConfigService.random_configuration(n, rng)
			worst = max(worst, AreaService.gradient_check(config))
		return worst

	@staticmethod
	def hessian_table(catalog: Catalog, planar: bool = False) -> List[Tuple[CatalogEntry, int, HessianReport]]:
		"""Baris (entri, indeks kombinatorial, laporan numerik) berurutan seperti katalog."""
		rows = []
		for entry in catalog:
			if planar:
				expected = CatalogService.planar_index(entry.ctype)
				report = MorseService.numeric_planar_index(entry)
			else:
				expected = entry.index_combinatorial
				report = MorseService.numeric_index(entry)
			rows.append((entry, expected, report))
		mismatches = sum(1 for _, expected, report in rows if expected != report.negatives)
		logger.info(f"Hessian sweep n={catalog.n} planar={planar}: {len(rows)} entries, {mismatches} mismatches")
		return rows

	@staticmethod
	def certify_catalog(catalog: Catalog) -> Catalog:
		"""Salinan katalog dengan index_numeric terisi dari sapuan Hessian."""
		entries = tuple(
			replace(entry, index_numeric=report.negatives)
			for entry, _, report in MorseService.hessian_table(catalog)
		)
		return replace(catalog, entries=entries)
