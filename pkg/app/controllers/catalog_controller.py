import logging
from typing import Optional

from fastapi import APIRouter, Depends, HTTPException, Path, Query
from fastapi.responses import Response
from sqlalchemy.orm import Session

from app.core.config import settings
from app.core.errors import LinkageError
from app.core.types import CyclicType, PerturbationSpec, RenderSpec
from app.db.session import get_db
from app.schemas import CatalogSchema
from app.services.codec_service import CodecService
from app.services.render_service import RenderService
from app.services.store_service import StoreService

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/catalog", tags=["catalog"])


def perturbation_from_query(perturb: Optional[float], seed: Optional[int]) -> Optional[PerturbationSpec]:
	if perturb is None:
		return None
	if seed is None:
		raise HTTPException(status_code=422, detail="perturb membutuhkan seed")
	try:
		return PerturbationSpec(perturb, seed)
	except LinkageError as e:
		raise HTTPException(status_code=422, detail=str(e))


@router.get("/{n}", response_model=CatalogSchema)
def get_catalog(
	n: int = Path(..., le=settings.max_catalog_n),
	perturb: Optional[float] = Query(None, ge=0),
	seed: Optional[int] = Query(None, ge=0),
	db: Session = Depends(get_db),
):
	"""Katalog titik kritis untuk n ganjil; disimpan di DB setelah dibangun pertama kali"""
	spec = perturbation_from_query(perturb, seed)
	try:
		catalog = StoreService.get_or_build_catalog(db, n, spec)
		return CodecService.catalog_to_schema(catalog)
	except LinkageError as e:
		raise HTTPException(status_code=422, detail=str(e))


@router.get("/{n}/render/{key}")
def render_entry(
	key: str,
	n: int = Path(..., le=settings.max_catalog_n),
	db: Session = Depends(get_db),
):
	try:
		ctype = CyclicType.from_key(key)
		catalog = StoreService.get_or_build_catalog(db, n, None)
	except (LinkageError, ValueError) as e:
		raise HTTPException(status_code=422, detail=str(e))
	try:
		entry = catalog.get(ctype)
	except KeyError:
		raise HTTPException(status_code=404, detail=f"Entry {key} not found")
	svg = RenderService.render_svg(RenderSpec(entry=entry, canvas_px=settings.canvas_px))
	return Response(content=svg, media_type="image/svg+xml")
