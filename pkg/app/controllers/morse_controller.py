from typing import Optional

from fastapi import APIRouter, Depends, HTTPException, Path, Query
from sqlalchemy.orm import Session

from app.controllers.catalog_controller import perturbation_from_query
from app.core.config import settings
from app.core.errors import LinkageError
from app.db.session import get_db
from app.schemas import AreaResponse, ConfigurationSchema, HessianTableResponse
from app.services.area_service import AreaService
from app.services.codec_service import CodecService
from app.services.morse_service import MorseService
from app.services.store_service import StoreService

router = APIRouter(prefix="", tags=["morse"])


@router.get("/hessian/{n}", response_model=HessianTableResponse)
def hessian_table(
	n: int = Path(..., le=settings.max_catalog_n),
	planar: bool = False,
	perturb: Optional[float] = Query(None, ge=0),
	seed: Optional[int] = Query(None, ge=0),
	db: Session = Depends(get_db),
):
	spec = perturbation_from_query(perturb, seed)
	try:
		catalog = StoreService.get_or_build_catalog(db, n, spec)
		rows = MorseService.hessian_table(catalog, planar)
	except LinkageError as e:
		raise HTTPException(status_code=422, detail=str(e))
	mismatches = sum(1 for _, expected, report in rows if expected != report.negatives)
	degenerate = sum(1 for _, _, report in rows if report.perturbation_seed is not None)
	StoreService.record_certification(db, catalog.n, spec, planar, len(rows), mismatches, degenerate)
	return HessianTableResponse(
		n=catalog.n,
		planar=planar,
		rows=[CodecService.hessian_row(entry.key, expected, report) for entry, expected, report in rows],
		mismatches=mismatches,
	)


@router.post("/area", response_model=AreaResponse)
def area(payload: ConfigurationSchema):
	try:
		config = CodecService.config_from_schema(payload)
		return AreaResponse(
			S_value=AreaService.area_S(config),
			projected_area=AreaService.projected_area(config),
			vector_area=[float(v) for v in AreaService.vector_area(config)],
			projected_gradient_norm=MorseService.projected_gradient_norm(config),
		)
	except LinkageError as e:
		raise HTTPException(status_code=422, detail=str(e))
