import logging
from collections import Counter
from math import comb
from typing import Dict, Optional

from app.core.errors import FormulaMismatch
from app.core.types import BettiTable, Catalog, PerfectnessReport, Space
from app.services.catalog_service import CatalogService
from app.services.config_service import ConfigService

logger = logging.getLogger(__name__)


class TopologyService:
	@staticmethod
	def _with_duality(n: int, dim: int, lower: Dict[int, int]) -> Dict[int, int]:
		"""Isi derajat atas via dualitas Poincare; derajat ganjil nol."""
		betti = {m: 0 for m in range(dim + 1)}
		for m, b in lower.items():
			betti[m] = b
			betti[dim - m] = b
		return betti

	@staticmethod
	def betti_M3(n: int) -> BettiTable:
		n = ConfigService.check_parity(n)
		k = (n - 1) // 2
		dim = 4 * k - 4
		lower = {2 * p: sum(comb(2 * k, i) for i in range(p + 1)) for p in range(k)}
		return BettiTable(n=n, space=Space.M3, betti=TopologyService._with_duality(n, dim, lower), dim=dim)

	@staticmethod
	def _decorated_direct(n: int) -> Dict[int, int]:
		k = (n - 1) // 2
		dim = 4 * k - 2
		lower = {2 * p: sum(comb(n, i) for i in range(p + 1)) for p in range(k)}
		return TopologyService._with_duality(n, dim, lower)

	@staticmethod
	def _decorated_from_m3(n: int) -> Dict[int, int]:
		base = TopologyService.betti_M3(n).betti
		k = (n - 1) // 2
		return {m: base.get(m, 0) + base.get(m - 2, 0) for m in range(4 * k - 1)}

	@staticmethod
	def betti_decorated(n: int) -> BettiTable:
		n = ConfigService.check_parity(n)
		direct = TopologyService._decorated_direct(n)
		via_sphere_bundle = TopologyService._decorated_from_m3(n)
		if direct != via_sphere_bundle:
			raise FormulaMismatch(f"n={n}: rumus langsung {direct} != rumus via M3 {via_sphere_bundle}")
		k = (n - 1) // 2
		return BettiTable(n=n, space=Space.DECORATED_M3, betti=direct, dim=4 * k - 2)

	@staticmethod
	def morse_census(catalog: Catalog) -> Dict[int, int]:
		counts = Counter(entry.index_combinatorial for entry in catalog)
		return dict(sorted(counts.items()))

	@staticmethod
	def census_by_class(n: int) -> Dict[int, int]:
		"""Sensus indeks tanpa realisasi: kelas (c minoritas, omega) dihitung dengan binomial eksak."""
		n = ConfigService.check_parity(n)
		k = (n - 1) // 2
		counts: Counter = Counter()
		for c in range(k):
			words = comb(n, c)
			for omega in range(1, k - c + 1):
				# mayoritas +1: e = n - c; mayoritas -1 (tipe cermin): e = c, omega negatif
				counts[2 * (n - c) - 2 * omega - 2] += words
				counts[2 * c + 2 * omega - 2] += words
		return dict(sorted(counts.items()))

	@staticmethod
	def planar_census(n: int) -> Dict[int, int]:
		counts = Counter(CatalogService.planar_index(t) for t in CatalogService.iter_types(n))
		return dict(sorted(counts.items()))

	@staticmethod
	def verify_perfect(n: int, catalog: Optional[Catalog] = None) -> PerfectnessReport:
		n = ConfigService.check_parity(n)
		census = TopologyService.morse_census(catalog) if catalog is not None else TopologyService.census_by_class(n)
		table = TopologyService.betti_decorated(n)
		per_index = {m: (census.get(m, 0), table.betti[m]) for m in range(0, table.dim + 1, 2)}
		stray = set(census) - set(per_index)
		verdict = not stray and all(morse == betti for morse, betti in per_index.values())
		report = PerfectnessReport(
			n=n,
			per_index=per_index,
			verdict=verdict,
			total_critical=sum(census.values()),
			total_betti=table.total,
		)
		logger.info(f"Perfectness n={n}: verdict={verdict} ({report.total_critical} vs {report.total_betti})")
		return report
