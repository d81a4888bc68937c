from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from app.core.errors import BadParity, BadPerturbation, LengthViolation


def _frozen_array(values, shape_tail: Tuple[int, ...] | None = None) -> np.ndarray:
	arr = np.array(values, dtype=float)
	if shape_tail is not None and arr.shape[1:] != shape_tail:
		raise ValueError(f"expected trailing shape {shape_tail}, got {arr.shape}")
	arr.setflags(write=False)
	return arr


# ===== PANJANG BATANG =====
@dataclass(frozen=True)
class LengthVector:
	lengths: Tuple[float, ...]

	PERTURBED_LIMIT = 0.1

	def __post_init__(self):
		values = tuple(float(v) for v in self.lengths)
		object.__setattr__(self, "lengths", values)
		n = len(values)
		if n < 5 or n % 2 == 0:
			raise BadParity(f"n harus ganjil dan >= 5, didapat n={n}")
		if not all(np.isfinite(v) and v > 0 for v in values):
			raise LengthViolation("semua panjang harus positif dan finite")
		if max(abs(v - 1.0) for v in values) >= self.PERTURBED_LIMIT:
			raise LengthViolation("hanya linkage equilateral atau perturbasi kecil (|eps| < 0.1) yang didukung")

	@classmethod
	def equilateral(cls, n: int) -> "LengthVector":
		return cls(tuple([1.0] * n))

	@property
	def n(self) -> int:
		return len(self.lengths)

	@property
	def k(self) -> int:
		return (self.n - 1) // 2

	@property
	def is_equilateral(self) -> bool:
		return all(v == 1.0 for v in self.lengths)

	@property
	def array(self) -> np.ndarray:
		return np.asarray(self.lengths, dtype=float)


@dataclass(frozen=True)
class PerturbationSpec:
	epsilon_magnitude: float
	seed: int

	def __post_init__(self):
		if not np.isfinite(self.epsilon_magnitude) or self.epsilon_magnitude < 0:
			raise BadPerturbation("epsilon_magnitude harus >= 0")
		if not 0 <= int(self.seed) < 2 ** 64:
			raise BadPerturbation("seed harus bilangan bulat 64-bit tak bertanda")


# ===== KONFIGURASI =====
@dataclass(frozen=True, eq=False)
class DecoratedConfiguration:
	"""Pasangan (P, xi): n vektor sisi di R^3 dan vektor dekorasi satuan.

	Dibangun lewat ConfigService.make_decorated; konstruktor ini tidak memvalidasi.
	"""
	edges: np.ndarray
	xi: np.ndarray
	lengths: LengthVector

	def __post_init__(self):
		object.__setattr__(self, "edges", _frozen_array(self.edges, (3,)))
		object.__setattr__(self, "xi", _frozen_array(self.xi))

	@property
	def n(self) -> int:
		return self.edges.shape[0]

	def ambient(self) -> np.ndarray:
		"""Koordinat ambient 3n+3: sisi dulu, lalu xi."""
		return np.concatenate([self.edges.ravel(), self.xi])


@dataclass(frozen=True, eq=False)
class PlanarConfiguration:
	edges: np.ndarray
	lengths: LengthVector

	def __post_init__(self):
		object.__setattr__(self, "edges", _frozen_array(self.edges, (2,)))

	@property
	def n(self) -> int:
		return self.edges.shape[0]


# ===== TIPE SIKLIK =====
@dataclass(frozen=True, order=True)
class CyclicType:
	signs: Tuple[int, ...]
	omega: int

	def __post_init__(self):
		object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
		object.__setattr__(self, "omega", int(self.omega))

	@property
	def n(self) -> int:
		return len(self.signs)

	@property
	def k(self) -> int:
		return (self.n - 1) // 2

	@property
	def e(self) -> int:
		return sum(1 for s in self.signs if s > 0)

	@property
	def total(self) -> int:
		return sum(self.signs)

	@property
	def minority(self) -> int:
		return min(self.e, self.n - self.e)

	@property
	def sign_word(self) -> str:
		return "".join("+" if s > 0 else "-" for s in self.signs)

	@property
	def key(self) -> str:
		return f"s{self.sign_word}_w{self.omega}"

	def mirror(self) -> "CyclicType":
		return CyclicType(tuple(-s for s in self.signs), -self.omega)

	@classmethod
	def from_key(cls, key: str) -> "CyclicType":
		word, _, w = key.partition("_w")
		body = word[1:]
		if not word.startswith("s") or not body or set(body) - {"+", "-"}:
			raise ValueError(f"key tipe tidak valid: {key!r}")
		try:
			omega = int(w)
		except ValueError:
			raise ValueError(f"key tipe tidak valid: {key!r}") from None
		return cls(tuple(1 if ch == "+" else -1 for ch in body), omega)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
	ctype: CyclicType
	theta: float
	thetas: Tuple[float, ...]
	radius: float
	center: np.ndarray
	config: DecoratedConfiguration
	s_value: float
	index_combinatorial: int
	index_numeric: Optional[int] = None

	@property
	def key(self) -> str:
		return self.ctype.key


@dataclass(frozen=True, eq=False)
class Catalog:
	n: int
	lengths: LengthVector
	entries: Tuple[CatalogEntry, ...]

	def __len__(self) -> int:
		return len(self.entries)

	def __iter__(self) -> Iterator[CatalogEntry]:
		return iter(self.entries)

	def by_key(self) -> Dict[str, CatalogEntry]:
		return {entry.key: entry for entry in self.entries}

	def get(self, ctype: CyclicType) -> CatalogEntry:
		return self.by_key()[ctype.key]


# ===== AREA =====
@dataclass(frozen=True, eq=False)
class AmbientGradient:
	d_edges: np.ndarray
	d_xi: np.ndarray

	def flat(self) -> np.ndarray:
		return np.concatenate([np.asarray(self.d_edges).ravel(), self.d_xi])


# ===== NUMERIK MORSE =====
@dataclass(frozen=True, eq=False)
class TangentFrame:
	basis: np.ndarray

	@property
	def size(self) -> int:
		return self.basis.shape[1]


@dataclass(frozen=True)
class HessianReport:
	negatives: int
	zeros: int
	positives: int
	min_abs_nonzero: float
	gradient_residual: float
	degenerate: bool
	perturbation_seed: Optional[int] = None

	@property
	def dimension(self) -> int:
		return self.negatives + self.zeros + self.positives


@dataclass(frozen=True, eq=False)
class RefineResult:
	config: DecoratedConfiguration
	residual: float
	iterations: int
	converged: bool


class Classification(str, Enum):
	PLANAR_CYCLIC = "PlanarCyclic"
	NON_PLANAR_CANDIDATE = "NonPlanarCandidate"
	NOT_CONVERGED = "NotConverged"


@dataclass(frozen=True)
class CandidateDiagnostics:
	planarity: float
	xi_parallel: float
	concyclicity: float
	coplanarity: Tuple[float, ...]

	@property
	def max_coplanarity(self) -> float:
		return max((abs(v) for v in self.coplanarity), default=0.0)


@dataclass(frozen=True, eq=False)
class SearchResult:
	found: DecoratedConfiguration
	residual: float
	classification: Classification
	matched_entry: Optional[str] = None
	match_distance: Optional[float] = None
	diagnostics: Optional[CandidateDiagnostics] = None
	restart: Optional[int] = None


# ===== TOPOLOGI =====
class Space(str, Enum):
	M3 = "M3"
	DECORATED_M3 = "DecoratedM3"


@dataclass(frozen=True)
class BettiTable:
	n: int
	space: Space
	betti: Dict[int, int]
	dim: int

	@property
	def total(self) -> int:
		return sum(self.betti.values())

	def even(self) -> Dict[int, int]:
		return {m: b for m, b in self.betti.items() if m % 2 == 0}


@dataclass(frozen=True)
class PerfectnessReport:
	n: int
	per_index: Dict[int, Tuple[int, int]]
	verdict: bool
	total_critical: int
	total_betti: int


# ===== RENDER =====
@dataclass(frozen=True, eq=False)
class RenderSpec:
	entry: CatalogEntry
	canvas_px: int = 480
	show_circle: bool = True
	show_labels: bool = True

	def __post_init__(self):
		if self.canvas_px <= 0:
			raise ValueError("canvas_px harus positif")


__all__ = [
	"LengthVector", "PerturbationSpec", "DecoratedConfiguration", "PlanarConfiguration",
	"CyclicType", "CatalogEntry", "Catalog", "AmbientGradient", "TangentFrame",
	"HessianReport", "RefineResult", "Classification", "CandidateDiagnostics",
	"SearchResult", "Space", "BettiTable", "PerfectnessReport", "RenderSpec",
]
