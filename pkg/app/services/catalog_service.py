import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from app.core.config import settings
from app.core.errors import Inadmissible, NoRoot, RealizationError
from app.core.types import Catalog, CatalogEntry, CyclicType, LengthVector
from app.services.area_service import AreaService
from app.services.config_service import ConfigService

logger = logging.getLogger(__name__)


class CatalogService:
	ROOT_RESIDUAL = 1e-12
	RADIUS_CAP = 1e3
	REALIZATION_TOL = 1e-10

	@staticmethod
	def is_admissible(signs: Sequence[int], omega: int) -> bool:
		n = len(signs)
		if n < 5 or n % 2 == 0 or any(s not in (-1, 1) for s in signs) or omega == 0:
			return False
		total = sum(signs)
		if (omega > 0) != (total > 0):
			return False
		return 2 * abs(omega) <= abs(total)

	@staticmethod
	def _require_admissible(signs: Sequence[int], omega: int) -> None:
		if not CatalogService.is_admissible(signs, omega):
			raise Inadmissible(f"tipe (signs={tuple(signs)}, omega={omega}) tidak admissible")

	@staticmethod
	def iter_types(n: int) -> Iterator[CyclicType]:
		"""Generator tipe: leksikografis pada signs (-1 < +1), lalu omega naik."""
		n = ConfigService.check_parity(n)
		k = (n - 1) // 2
		for signs in itertools.product((-1, 1), repeat=n):
			plus = sum(1 for s in signs if s > 0)
			c = min(plus, n - plus)
			top = k - c
			if top < 1:
				continue
			if plus > n - plus:
				omegas = range(1, top + 1)
			else:
				omegas = range(-top, 0)
			for omega in omegas:
				yield CyclicType(signs, omega)

	@staticmethod
	def enumerate_types(n: int) -> List[CyclicType]:
		return list(CatalogService.iter_types(n))

	@staticmethod
	def central_angle(lengths: LengthVector, signs: Sequence[int], omega: int) -> Tuple[float, float]:
		thetas, radius = CatalogService.central_angles(lengths, signs, omega)
		return float(np.mean(thetas)), radius

	@staticmethod
	def central_angles(lengths: LengthVector, signs: Sequence[int], omega: int) -> Tuple[np.ndarray, float]:
		"""Sudut pusat per sisi dan jari-jari lingkaran luar."""
		CatalogService._require_admissible(signs, omega)
		if lengths.n != len(signs):
			raise Inadmissible("panjang sign word tidak sama dengan n")
		ell = lengths.array
		s = np.asarray(signs, dtype=float)
		if np.all(ell == ell[0]):
			theta = abs(2.0 * np.pi * omega / s.sum())
			radius = ell[0] / (2.0 * np.sin(theta / 2.0))
			return np.full(len(ell), theta), float(radius)

		target = 2.0 * np.pi * omega

		def residual(R: float) -> float:
			return float(np.sum(s * 2.0 * np.arcsin(np.minimum(ell / (2.0 * R), 1.0)))) - target

		lo_cap = ell.max() / 2.0 + 1e-15
		theta0 = abs(target / s.sum())
		R0 = float(ell.mean() / (2.0 * np.sin(theta0 / 2.0)))
		R0 = min(max(R0, lo_cap), CatalogService.RADIUS_CAP)
		lo, hi = R0, R0
		f0 = residual(R0)
		bracket = None
		if f0 == 0.0:
			bracket = (R0, R0)
		step = 1e-3
		while bracket is None:
			lo = max(R0 * (1.0 - step), lo_cap)
			hi = min(R0 * (1.0 + step), CatalogService.RADIUS_CAP)
			if residual(lo) * f0 <= 0:
				bracket = (lo, R0)
			elif residual(hi) * f0 <= 0:
				bracket = (R0, hi)
			elif lo == lo_cap and hi == CatalogService.RADIUS_CAP:
				raise NoRoot(f"akar jari-jari tidak ditemukan untuk omega={omega}; perturbasi terlalu besar?")
			step *= 2.0
		R = bracket[0] if bracket[0] == bracket[1] else brentq(residual, *bracket, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
		if abs(residual(R)) >= CatalogService.ROOT_RESIDUAL:
			raise NoRoot(f"residual akar {abs(residual(R)):.3e} terlalu besar")
		if np.any(ell / (2.0 * R) >= 1.0):
			raise NoRoot("argumen arcsin >= 1: sisi tidak muat di lingkaran")
		return 2.0 * np.arcsin(ell / (2.0 * R)), float(R)

	@staticmethod
	def combinatorial_index(ctype: CyclicType) -> int:
		CatalogService._require_admissible(ctype.signs, ctype.omega)
		return 2 * ctype.e - 2 * ctype.omega - 2

	@staticmethod
	def planar_index(ctype: CyclicType) -> int:
		"""Indeks A pada M_2(n); cabang omega < 0 memakai komplemen dari tipe cermin."""
		CatalogService._require_admissible(ctype.signs, ctype.omega)
		if ctype.omega > 0:
			return ctype.e - 2 * ctype.omega - 1
		mirror = ctype.mirror()
		return (ctype.n - 3) - (mirror.e - 2 * mirror.omega - 1)

	@staticmethod
	def build_cyclic(ctype: CyclicType, lengths: LengthVector) -> CatalogEntry:
		thetas, radius = CatalogService.central_angles(lengths, ctype.signs, ctype.omega)
		s = np.asarray(ctype.signs, dtype=float)
		phi = np.concatenate([[0.0], np.cumsum(s * thetas)])
		ring = radius * np.column_stack([np.cos(phi), np.sin(phi), np.zeros_like(phi)])
		edges = np.diff(ring, axis=0)
		config = ConfigService.make_decorated(edges, np.array([0.0, 0.0, 1.0]), lengths)

		# gauge p_1 = origin menggeser pusat ke -v_1
		center = -ring[0]
		points = ConfigService.vertices(config)
		tol = CatalogService.REALIZATION_TOL
		if np.abs(np.linalg.norm(points - center, axis=1) - radius).max() > tol:
			raise RealizationError(f"{ctype.key}: titik tidak pada lingkaran")
		if np.abs(np.linalg.norm(config.edges, axis=1) - lengths.array).max() > tol:
			raise RealizationError(f"{ctype.key}: panjang sisi meleset")
		winding = ConfigService.winding_number(points, center, config.xi)
		if winding != ctype.omega:
			raise RealizationError(f"{ctype.key}: winding {winding} != omega {ctype.omega}")
		s_value = AreaService.area_S(config)
		if np.sign(s_value) != np.sign(ctype.omega):
			raise RealizationError(f"{ctype.key}: tanda S tidak sesuai omega")
		return CatalogEntry(
			ctype=ctype,
			theta=float(np.mean(thetas)),
			thetas=tuple(float(t) for t in thetas),
			radius=radius,
			center=center,
			config=config,
			s_value=s_value,
			index_combinatorial=CatalogService.combinatorial_index(ctype),
		)

	@staticmethod
	def build_catalog(n: int, lengths: Optional[LengthVector] = None, workers: Optional[int] = None) -> Catalog:
		n = ConfigService.check_parity(n)
		lengths = lengths or LengthVector.equilateral(n)
		if lengths.n != n:
			raise Inadmissible(f"lengths untuk n={lengths.n}, bukan n={n}")
		types = CatalogService.enumerate_types(n)
		workers = workers or settings.threads
		if workers > 1 and len(types) > 64:
			# map() menjaga urutan input, jadi hasil tidak bergantung penjadwalan
			with ThreadPoolExecutor(max_workers=workers) as pool:
				entries = list(pool.map(lambda t: CatalogService.build_cyclic(t, lengths), types))
		else:
			entries = [CatalogService.build_cyclic(t, lengths) for t in types]
		entries.sort(key=lambda entry: (entry.ctype.signs, entry.ctype.omega))
		logger.info(f"Catalog n={n} built with {len(entries)} entries (equilateral={lengths.is_equilateral})")
		return Catalog(n=n, lengths=lengths, entries=tuple(entries))

	@staticmethod
	def expected_size(n: int) -> int:
		from math import comb
		n = ConfigService.check_parity(n)
		k = (n - 1) // 2
		return 2 * sum(comb(n, c) * (k - c) for c in range(k))
