from fastapi import APIRouter, HTTPException, Path

from app.core.config import settings
from app.core.errors import LinkageError
from app.schemas import BettiTableResponse, PerfectnessReportResponse
from app.services.codec_service import CodecService
from app.services.topology_service import TopologyService

router = APIRouter(prefix="", tags=["topology"])


@router.get("/betti/{n}", response_model=BettiTableResponse)
def get_betti(n: int = Path(..., le=settings.max_topology_n), decorated: bool = True):
	try:
		table = TopologyService.betti_decorated(n) if decorated else TopologyService.betti_M3(n)
		return CodecService.betti_to_schema(table)
	except LinkageError as e:
		raise HTTPException(status_code=422, detail=str(e))


@router.get("/verify/{n}", response_model=PerfectnessReportResponse)
def verify(n: int = Path(..., le=settings.max_topology_n)):
	"""Bandingkan sensus indeks dengan tabel Betti dekorasi"""
	try:
		return CodecService.perfectness_to_schema(TopologyService.verify_perfect(n))
	except LinkageError as e:
		raise HTTPException(status_code=422, detail=str(e))
