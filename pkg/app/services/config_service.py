from typing import Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.errors import (
	BadDecoration, BadParity, BadPerturbation, CenterOnPolygonVertex, ClosureViolation,
	DimensionMismatch, LengthViolation, NonIntegerWinding, NotCoplanar, ProjectionStalled,
)
from app.core.geometry import kabsch_rotation, orthonormal_frame, random_rotation, random_unit_vectors
from app.core.types import DecoratedConfiguration, LengthVector, PerturbationSpec, PlanarConfiguration


class ConfigService:
	CONSTRUCT_TOL = 1e-9
	IDENTITY_TOL = 1e-12
	COPLANAR_TOL = 1e-8
	WINDING_TOL = 1e-6
	PROJECTION_TOL = 1e-12
	PROJECTION_ROUNDS = 200

	@staticmethod
	def check_parity(n: int) -> int:
		if int(n) != n or n < 5 or n % 2 == 0:
			raise BadParity(f"n harus ganjil dan >= 5, didapat n={n}")
		return int(n)

	@staticmethod
	def _check_edges(edges: np.ndarray, lengths: LengthVector) -> None:
		n = edges.shape[0]
		ConfigService.check_parity(n)
		if lengths.n != n:
			raise DimensionMismatch(f"jumlah sisi {n} tidak sama dengan panjang vektor lengths {lengths.n}")
		if not np.all(np.isfinite(edges)):
			raise LengthViolation("koordinat sisi harus finite")
		ell = lengths.array
		rel = np.abs(np.linalg.norm(edges, axis=1) - ell) / ell
		if rel.max() > ConfigService.CONSTRUCT_TOL:
			raise LengthViolation(f"galat panjang relatif {rel.max():.3e} pada sisi {int(rel.argmax()) + 1}")
		defect = np.linalg.norm(edges.sum(axis=0))
		if defect > ConfigService.CONSTRUCT_TOL * n:
			raise ClosureViolation(f"poligon tidak tertutup: |sum sisi| = {defect:.3e}")

	@staticmethod
	def make_decorated(edges, xi, lengths: LengthVector) -> DecoratedConfiguration:
		E = np.asarray(edges, dtype=float)
		X = np.asarray(xi, dtype=float)
		if E.ndim != 2 or E.shape[1] != 3 or X.shape != (3,):
			raise DimensionMismatch("sisi harus (n, 3) dan xi harus vektor 3")
		ConfigService._check_edges(E, lengths)
		norm = float(np.linalg.norm(X))
		if not np.isfinite(norm) or abs(norm - 1.0) > ConfigService.CONSTRUCT_TOL:
			raise BadDecoration(f"|xi| = {norm!r} bukan vektor satuan")
		return DecoratedConfiguration(E, X / norm, lengths)

	@staticmethod
	def make_planar(edges, lengths: LengthVector) -> PlanarConfiguration:
		E = np.asarray(edges, dtype=float)
		if E.ndim != 2 or E.shape[1] != 2:
			raise DimensionMismatch("sisi planar harus (n, 2)")
		ConfigService._check_edges(E, lengths)
		return PlanarConfiguration(E, lengths)

	@staticmethod
	def vertices(config: DecoratedConfiguration | PlanarConfiguration) -> np.ndarray:
		"""Titik p_1..p_n dengan gauge p_1 = origin."""
		E = config.edges
		zero = np.zeros((1, E.shape[1]))
		return np.vstack([zero, np.cumsum(E[:-1], axis=0)])

	@staticmethod
	def winding_number(points, center, plane_normal) -> int:
		P = np.asarray(points, dtype=float)
		c = np.asarray(center, dtype=float)
		b1, b2, nrm = orthonormal_frame(plane_normal)
		rel = P - c
		off_plane = np.abs(rel @ nrm)
		if off_plane.max() > ConfigService.COPLANAR_TOL:
			raise NotCoplanar(f"titik berjarak {off_plane.max():.3e} dari bidang")
		x, y = rel @ b1, rel @ b2
		if np.hypot(x, y).min() <= ConfigService.IDENTITY_TOL:
			raise CenterOnPolygonVertex("pusat berimpit dengan salah satu titik")
		xn, yn = np.roll(x, -1), np.roll(y, -1)
		angles = np.arctan2(x * yn - y * xn, x * xn + y * yn)
		turns = angles.sum() / (2.0 * np.pi)
		winding = int(round(turns))
		if abs(turns - winding) >= ConfigService.WINDING_TOL:
			raise NonIntegerWinding(f"jumlah putaran {turns:.9f} bukan bilangan bulat")
		return winding

	@staticmethod
	def threefold_embed(config: DecoratedConfiguration, i: int) -> DecoratedConfiguration:
		"""Ganti sisi ke-i (1-based) dengan lipatan (u, -u, u); xi tetap."""
		n = config.n
		if not 1 <= i <= n:
			raise IndexError(f"indeks sisi {i} di luar 1..{n}")
		E = config.edges
		u = E[i - 1]
		edges = np.vstack([E[:i - 1], u, -u, u, E[i:]])
		ell = list(config.lengths.lengths)
		ell[i - 1:i] = [ell[i - 1]] * 3
		return ConfigService.make_decorated(edges, config.xi, LengthVector(tuple(ell)))

	@staticmethod
	def perturb_lengths(n: int, spec: PerturbationSpec) -> LengthVector:
		n = ConfigService.check_parity(n)
		eps = spec.epsilon_magnitude
		if eps > settings.max_epsilon:
			raise BadPerturbation(f"epsilon {eps} melebihi batas {settings.max_epsilon}")
		rng = np.random.default_rng(int(spec.seed))
		draws = rng.uniform(-eps, eps, size=n)
		return LengthVector(tuple(1.0 + draws))

	@staticmethod
	def configuration_distance(c1: DecoratedConfiguration, c2: DecoratedConfiguration) -> float:
		if c1.n != c2.n or not np.allclose(c1.lengths.array, c2.lengths.array, rtol=0, atol=1e-12):
			raise DimensionMismatch("konfigurasi harus punya n dan lengths yang sama")
		A = np.vstack([c1.edges, c1.xi])
		B = np.vstack([c2.edges, c2.xi])
		R = kabsch_rotation(A, B)
		return float(np.sqrt(max(0.0, np.sum((A @ R.T - B) ** 2))))

	@staticmethod
	def rotate(config: DecoratedConfiguration, Q) -> DecoratedConfiguration:
		Q = np.asarray(Q, dtype=float)
		if Q.shape != (3, 3) or not np.allclose(Q @ Q.T, np.eye(3), atol=1e-12) or np.linalg.det(Q) < 0:
			raise DimensionMismatch("Q harus rotasi proper 3x3")
		return ConfigService.make_decorated(config.edges @ Q.T, Q @ config.xi, config.lengths)

	@staticmethod
	def random_rotation(rng: np.random.Generator) -> np.ndarray:
		return random_rotation(rng)

	@staticmethod
	def project_to_constraints(
		edges, xi, lengths: LengthVector, max_rounds: Optional[int] = None
	) -> Tuple[np.ndarray, np.ndarray]:
		"""Proyeksi bergantian: normalisasi sisi lalu koreksi closure berbobot panjang."""
		E = np.array(edges, dtype=float)
		X = np.asarray(xi, dtype=float)
		X = X / np.linalg.norm(X)
		ell = lengths.array
		weights = ell / ell.sum()
		rounds = max_rounds or ConfigService.PROJECTION_ROUNDS
		for _ in range(rounds):
			norms = np.linalg.norm(E, axis=1)
			if norms.min() == 0.0:
				raise ProjectionStalled("sisi nol saat normalisasi")
			E = E * (ell / norms)[:, None]
			defect = E.sum(axis=0)
			if np.linalg.norm(defect) < ConfigService.PROJECTION_TOL:
				return E, X
			E = E - np.outer(weights, defect)
		raise ProjectionStalled(f"closure {np.linalg.norm(E.sum(axis=0)):.3e} setelah {rounds} putaran")

	@staticmethod
	def random_configuration(
		n: int, rng: np.random.Generator, lengths: Optional[LengthVector] = None
	) -> DecoratedConfiguration:
		n = ConfigService.check_parity(n)
		lengths = lengths or LengthVector.equilateral(n)
		directions = random_unit_vectors(rng, n) * lengths.array[:, None]
		xi = random_unit_vectors(rng, 1)[0]
		E, X = ConfigService.project_to_constraints(directions, xi, lengths)
		return ConfigService.make_decorated(E, X, lengths)

	@staticmethod
	def planar_of(config: DecoratedConfiguration) -> PlanarConfiguration:
		"""Koordinat bidang xi-perp, berorientasi sesuai xi (sisi harus tegak lurus xi)."""
		b1, b2, nrm = orthonormal_frame(config.xi)
		if np.abs(config.edges @ nrm).max() > ConfigService.COPLANAR_TOL:
			raise NotCoplanar("konfigurasi tidak planar terhadap xi")
		return ConfigService.make_planar(np.column_stack([config.edges @ b1, config.edges @ b2]), config.lengths)

	@staticmethod
	def edges_from_vertices(points: Sequence) -> np.ndarray:
		P = np.asarray(points, dtype=float)
		return np.roll(P, -1, axis=0) - P
