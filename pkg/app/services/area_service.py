from functools import lru_cache

import numpy as np

from app.core.geometry import orthonormal_frame, skew
from app.core.types import AmbientGradient, DecoratedConfiguration, PlanarConfiguration
from app.services.config_service import ConfigService

# rotasi 90 derajat searah jarum jam: cross2(a, b) = a @ K @ b
_K = np.array([[0.0, 1.0], [-1.0, 0.0]])


@lru_cache(maxsize=64)
def _accumulator(n: int, dim: int) -> np.ndarray:
	"""Peta linear sisi -> titik (p_1 = 0, p_i = sum_{j<i} u_j) untuk koordinat ambient."""
	L = np.tril(np.ones((n, n)), k=-1)
	acc = np.kron(L, np.eye(dim))
	acc.setflags(write=False)
	return acc


def _vertices_from_flat(edges_flat: np.ndarray, n: int, dim: int) -> np.ndarray:
	E = edges_flat.reshape(n, dim)
	return np.vstack([np.zeros((1, dim)), np.cumsum(E[:-1], axis=0)])


class AreaService:
	FD_STEP = 1e-5

	@staticmethod
	def signed_area_2d(points) -> float:
		P = np.asarray(points, dtype=float)
		x, y = P[:, 0], P[:, 1]
		return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

	@staticmethod
	def vector_area(config: DecoratedConfiguration) -> np.ndarray:
		P = ConfigService.vertices(config)
		return 0.5 * np.cross(P, np.roll(P, -1, axis=0)).sum(axis=0)

	@staticmethod
	def area_S(config: DecoratedConfiguration) -> float:
		return float(np.dot(AreaService.vector_area(config), config.xi))

	@staticmethod
	def projected_area(config: DecoratedConfiguration) -> float:
		b1, b2, _ = orthonormal_frame(config.xi)
		P = ConfigService.vertices(config)
		return AreaService.signed_area_2d(np.column_stack([P @ b1, P @ b2]))

	@staticmethod
	def ambient_value(x: np.ndarray, n: int) -> float:
		"""S di titik ambient sembarang (3n+3), tanpa validasi constraint."""
		x = np.asarray(x, dtype=float)
		P = _vertices_from_flat(x[:3 * n], n, 3)
		vec = 0.5 * np.cross(P, np.roll(P, -1, axis=0)).sum(axis=0)
		return float(np.dot(vec, x[3 * n:]))

	@staticmethod
	def _ambient_gradient_flat(x: np.ndarray, n: int) -> np.ndarray:
		P = _vertices_from_flat(x[:3 * n], n, 3)
		xi = x[3 * n:]
		d = np.roll(P, -1, axis=0) - np.roll(P, 1, axis=0)
		gp = 0.5 * np.cross(d, xi)
		# dS/du_j = sum_{i>j} dS/dp_i
		gu = np.zeros_like(gp)
		gu[:-1] = np.cumsum(gp[::-1], axis=0)[::-1][1:]
		vec = 0.5 * np.cross(P, np.roll(P, -1, axis=0)).sum(axis=0)
		return np.concatenate([gu.ravel(), vec])

	@staticmethod
	def grad_S(config: DecoratedConfiguration) -> AmbientGradient:
		n = config.n
		flat = AreaService._ambient_gradient_flat(config.ambient(), n)
		return AmbientGradient(d_edges=flat[:3 * n].reshape(n, 3), d_xi=flat[3 * n:])

	@staticmethod
	def ambient_hessian(config: DecoratedConfiguration) -> np.ndarray:
		"""Hessian analitik S pada koordinat (sisi, xi); S kubik, jadi cukup rakit bloknya."""
		n = config.n
		P = ConfigService.vertices(config)
		xi = config.xi
		Hpp = np.zeros((3 * n, 3 * n))
		M = -0.5 * skew(xi)
		for i in range(n):
			j = (i + 1) % n
			Hpp[3 * i:3 * i + 3, 3 * j:3 * j + 3] += M
			Hpp[3 * j:3 * j + 3, 3 * i:3 * i + 3] += M.T
		d = np.roll(P, -1, axis=0) - np.roll(P, 1, axis=0)
		Hpx = np.vstack([0.5 * skew(d_i) for d_i in d])
		acc = _accumulator(n, 3)
		Huu = acc.T @ Hpp @ acc
		Hux = acc.T @ Hpx
		H = np.zeros((3 * n + 3, 3 * n + 3))
		H[:3 * n, :3 * n] = Huu
		H[:3 * n, 3 * n:] = Hux
		H[3 * n:, :3 * n] = Hux.T
		return 0.5 * (H + H.T)

	@staticmethod
	def gradient_check(config: DecoratedConfiguration, step: float | None = None) -> float:
		"""Galat relatif gradien analitik vs beda hingga sentral, skala max(1, |grad|)."""
		h = step or AreaService.FD_STEP
		n = config.n
		x = config.ambient()
		analytic = AreaService.grad_S(config).flat()
		fd = np.empty_like(x)
		for idx in range(x.size):
			e = np.zeros_like(x)
			e[idx] = h
			fd[idx] = (AreaService.ambient_value(x + e, n) - AreaService.ambient_value(x - e, n)) / (2 * h)
		scale = max(1.0, float(np.linalg.norm(analytic)))
		return float(np.max(np.abs(fd - analytic)) / scale)

	# ===== MODE PLANAR (fungsi A pada M_2(n)) =====
	@staticmethod
	def planar_area(config: PlanarConfiguration) -> float:
		return AreaService.signed_area_2d(ConfigService.vertices(config))

	@staticmethod
	def planar_gradient(config: PlanarConfiguration) -> np.ndarray:
		P = ConfigService.vertices(config)
		d = np.roll(P, -1, axis=0) - np.roll(P, 1, axis=0)
		gp = 0.5 * d @ _K.T
		gu = np.zeros_like(gp)
		gu[:-1] = np.cumsum(gp[::-1], axis=0)[::-1][1:]
		return gu.ravel()

	@staticmethod
	def planar_hessian(config: PlanarConfiguration) -> np.ndarray:
		n = config.n
		Hpp = np.zeros((2 * n, 2 * n))
		for i in range(n):
			j = (i + 1) % n
			Hpp[2 * i:2 * i + 2, 2 * j:2 * j + 2] += 0.5 * _K
			Hpp[2 * j:2 * j + 2, 2 * i:2 * i + 2] += 0.5 * _K.T
		acc = _accumulator(n, 2)
		H = acc.T @ Hpp @ acc
		return 0.5 * (H + H.T)
