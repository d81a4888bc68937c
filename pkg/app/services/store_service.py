import logging
from typing import Optional

from sqlalchemy.orm import Session

from app.core.types import Catalog, LengthVector, PerturbationSpec
from app.db.models import CatalogRecord, CertificationRun
from app.schemas import CatalogSchema
from app.services.catalog_service import CatalogService
from app.services.codec_service import CodecService
from app.services.config_service import ConfigService

logger = logging.getLogger(__name__)

EQUILATERAL_SEED = -1


def _key(spec: Optional[PerturbationSpec]) -> tuple:
	if spec is None or spec.epsilon_magnitude == 0:
		return 0.0, EQUILATERAL_SEED
	return float(spec.epsilon_magnitude), int(spec.seed)


class StoreService:
	@staticmethod
	def lengths_for(n: int, spec: Optional[PerturbationSpec]) -> LengthVector:
		if spec is None or spec.epsilon_magnitude == 0:
			return LengthVector.equilateral(n)
		return ConfigService.perturb_lengths(n, spec)

	@staticmethod
	def get_or_build_catalog(db: Session, n: int, spec: Optional[PerturbationSpec] = None) -> Catalog:
		"""Ambil katalog dari cache DB; bila belum ada, bangun lalu simpan."""
		n = ConfigService.check_parity(n)
		epsilon, seed = _key(spec)
		record = (
			db.query(CatalogRecord)
			.filter(CatalogRecord.n == n, CatalogRecord.epsilon == epsilon, CatalogRecord.seed == seed)
			.first()
		)
		if record is not None:
			logger.debug(f"Catalog cache hit n={n} eps={epsilon} seed={seed}")
			return CodecService.catalog_from_schema(CatalogSchema.model_validate_json(record.payload))

		catalog = CatalogService.build_catalog(n, StoreService.lengths_for(n, spec))
		payload = CodecService.catalog_to_schema(catalog).model_dump_json()
		db.add(CatalogRecord(n=n, epsilon=epsilon, seed=seed, payload=payload))
		db.commit()
		logger.info(f"Catalog n={n} cached ({len(catalog)} entries)")
		return catalog

	@staticmethod
	def record_certification(
		db: Session,
		n: int,
		spec: Optional[PerturbationSpec],
		planar: bool,
		entries: int,
		mismatches: int,
		degenerate: int,
	) -> CertificationRun:
		epsilon, seed = _key(spec)
		run = CertificationRun(
			n=n, epsilon=epsilon, seed=seed, planar=planar,
			entries=entries, mismatches=mismatches, degenerate=degenerate,
		)
		db.add(run)
		db.commit()
		db.refresh(run)
		return run
