from pathlib import Path

import numpy as np

from app.core.errors import DimensionMismatch
from app.core.types import (
	BettiTable, Catalog, CatalogEntry, CyclicType, DecoratedConfiguration, HessianReport,
	LengthVector, PerfectnessReport, SearchResult,
)
from app.schemas import (
	BettiTableResponse, CatalogEntrySchema, CatalogSchema, ConfigurationSchema, DiagnosticsSchema,
	HessianRow, PerfectnessReportResponse, PerfectnessRow, SearchResultSchema,
)
from app.services.config_service import ConfigService


def _rows(arr) -> list:
	return [[float(v) for v in row] for row in np.asarray(arr)]


class CodecService:
	"""Konversi objek domain <-> schema JSON; float ditulis repr (round-trip eksak)."""

	@staticmethod
	def config_to_schema(config: DecoratedConfiguration) -> ConfigurationSchema:
		return ConfigurationSchema(
			n=config.n,
			lengths=list(config.lengths.lengths),
			edges=_rows(config.edges),
			xi=[float(v) for v in config.xi],
		)

	@staticmethod
	def config_from_schema(payload: ConfigurationSchema) -> DecoratedConfiguration:
		lengths = LengthVector(tuple(payload.lengths))
		if payload.n != lengths.n:
			raise DimensionMismatch(f"n={payload.n} tidak cocok dengan {lengths.n} panjang")
		return ConfigService.make_decorated(payload.edges, payload.xi, lengths)

	@staticmethod
	def entry_to_schema(entry: CatalogEntry) -> CatalogEntrySchema:
		return CatalogEntrySchema(
			signs=list(entry.ctype.signs),
			omega=entry.ctype.omega,
			theta=entry.theta,
			thetas=list(entry.thetas),
			radius=entry.radius,
			S_value=entry.s_value,
			index_combinatorial=entry.index_combinatorial,
			index_numeric=entry.index_numeric,
			vertices=_rows(ConfigService.vertices(entry.config)),
			edges=_rows(entry.config.edges),
			center=[float(v) for v in entry.center],
			xi=[float(v) for v in entry.config.xi],
		)

	@staticmethod
	def entry_from_schema(payload: CatalogEntrySchema, lengths: LengthVector) -> CatalogEntry:
		edges = payload.edges or ConfigService.edges_from_vertices(payload.vertices)
		config = ConfigService.make_decorated(edges, payload.xi, lengths)
		center = payload.center
		if center is None:
			# titik pertama ada di origin dan berjarak radius dari pusat, arah sudut polar 0
			center = [-payload.radius, 0.0, 0.0]
		return CatalogEntry(
			ctype=CyclicType(tuple(payload.signs), payload.omega),
			theta=payload.theta,
			thetas=tuple(payload.thetas) or (payload.theta,) * lengths.n,
			radius=payload.radius,
			center=np.asarray(center, dtype=float),
			config=config,
			s_value=payload.S_value,
			index_combinatorial=payload.index_combinatorial,
			index_numeric=payload.index_numeric,
		)

	@staticmethod
	def catalog_to_schema(catalog: Catalog) -> CatalogSchema:
		return CatalogSchema(
			n=catalog.n,
			lengths=list(catalog.lengths.lengths),
			entries=[CodecService.entry_to_schema(e) for e in catalog],
		)

	@staticmethod
	def catalog_from_schema(payload: CatalogSchema) -> Catalog:
		lengths = LengthVector(tuple(payload.lengths))
		entries = tuple(CodecService.entry_from_schema(e, lengths) for e in payload.entries)
		return Catalog(n=payload.n, lengths=lengths, entries=entries)

	@staticmethod
	def dump_catalog(catalog: Catalog, path: Path) -> None:
		path.parent.mkdir(parents=True, exist_ok=True)
		path.write_text(CodecService.catalog_to_schema(catalog).model_dump_json(), encoding="utf-8")

	@staticmethod
	def load_catalog(path: Path) -> Catalog:
		return CodecService.catalog_from_schema(CatalogSchema.model_validate_json(path.read_text(encoding="utf-8")))

	@staticmethod
	def betti_to_schema(table: BettiTable) -> BettiTableResponse:
		return BettiTableResponse(n=table.n, space=table.space.value, dim=table.dim, betti=table.betti, total=table.total)

	@staticmethod
	def perfectness_to_schema(report: PerfectnessReport) -> PerfectnessReportResponse:
		return PerfectnessReportResponse(
			n=report.n,
			verdict=report.verdict,
			total_critical=report.total_critical,
			total_betti=report.total_betti,
			per_index=[PerfectnessRow(degree=m, morse_count=c, betti=b) for m, (c, b) in report.per_index.items()],
		)

	@staticmethod
	def hessian_row(key: str, expected: int, report: HessianReport) -> HessianRow:
		return HessianRow(
			key=key,
			index_combinatorial=expected,
			index_numeric=report.negatives,
			zeros=report.zeros,
			residual=report.gradient_residual,
			perturbation_seed=report.perturbation_seed,
		)

	@staticmethod
	def search_result_to_schema(result: SearchResult) -> SearchResultSchema:
		diag = result.diagnostics
		return SearchResultSchema(
			restart=result.restart,
			classification=result.classification.value,
			residual=result.residual,
			matched_entry=result.matched_entry,
			match_distance=result.match_distance,
			diagnostics=None if diag is None else DiagnosticsSchema(
				planarity=diag.planarity,
				xi_parallel=diag.xi_parallel,
				concyclicity=diag.concyclicity,
				coplanarity=list(diag.coplanarity),
			),
			found=CodecService.config_to_schema(result.found),
		)
