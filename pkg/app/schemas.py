from pydantic import BaseModel, Field, conlist
from typing import Optional, List, Dict


Vector = conlist(float, min_length=3, max_length=3)


# ===== CONFIGURATION SCHEMAS =====
class ConfigurationSchema(BaseModel):
	n: int
	lengths: List[float]
	edges: List[Vector]
	xi: Vector


# ===== CATALOG SCHEMAS =====
class CatalogEntrySchema(BaseModel):
	signs: List[int]
	omega: int
	theta: float
	thetas: List[float] = Field(default_factory=list)
	radius: float
	S_value: float
	index_combinatorial: int
	index_numeric: Optional[int] = None
	vertices: List[Vector]
	edges: List[Vector] = Field(default_factory=list)
	center: Optional[Vector] = None
	xi: Vector


class CatalogSchema(BaseModel):
	n: int
	lengths: List[float]
	entries: List[CatalogEntrySchema]


# ===== TOPOLOGY SCHEMAS =====
class BettiTableResponse(BaseModel):
	n: int
	space: str
	dim: int
	betti: Dict[int, int]
	total: int


class PerfectnessRow(BaseModel):
	degree: int
	morse_count: int
	betti: int


class PerfectnessReportResponse(BaseModel):
	n: int
	verdict: bool
	total_critical: int
	total_betti: int
	per_index: List[PerfectnessRow]


# ===== MORSE SCHEMAS =====
class HessianRow(BaseModel):
	key: str
	index_combinatorial: int
	index_numeric: int
	zeros: int
	residual: float
	perturbation_seed: Optional[int] = None


class HessianTableResponse(BaseModel):
	n: int
	planar: bool
	rows: List[HessianRow]
	mismatches: int


class DiagnosticsSchema(BaseModel):
	planarity: float
	xi_parallel: float
	concyclicity: float
	coplanarity: List[float]


class SearchResultSchema(BaseModel):
	restart: Optional[int] = None
	classification: str
	residual: float
	matched_entry: Optional[str] = None
	match_distance: Optional[float] = None
	diagnostics: Optional[DiagnosticsSchema] = None
	found: ConfigurationSchema


class AreaResponse(BaseModel):
	S_value: float
	projected_area: float
	vector_area: Vector
	projected_gradient_norm: float
