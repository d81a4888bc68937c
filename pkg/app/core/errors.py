class LinkageError(Exception):
	"""Akar semua error domain; controller & CLI cukup menangkap kelas ini."""


# ===== KONFIGURASI =====
class ClosureViolation(LinkageError):
	pass


class LengthViolation(LinkageError):
	pass


class BadDecoration(LinkageError):
	pass


class BadParity(LinkageError):
	pass


class DimensionMismatch(LinkageError):
	pass


class BadPerturbation(LinkageError):
	pass


class ProjectionStalled(LinkageError):
	pass


# ===== GEOMETRI =====
class NotCoplanar(LinkageError):
	pass


class CenterOnPolygonVertex(LinkageError):
	pass


class NonIntegerWinding(LinkageError):
	pass


# ===== KATALOG =====
class Inadmissible(LinkageError):
	pass


class NoRoot(LinkageError):
	pass


class RealizationError(LinkageError):
	pass


# ===== NUMERIK MORSE =====
class RankDeficiency(LinkageError):
	pass


class NotNearCritical(LinkageError):
	pass


class NotSymmetric(LinkageError):
	pass


class EigenResidual(LinkageError):
	pass


class PersistentDegeneracy(LinkageError):
	pass


# ===== TOPOLOGI =====
class FormulaMismatch(LinkageError):
	"""Dua rute Betti tidak sama; ini bug internal, bukan input buruk."""
