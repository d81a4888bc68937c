import os
from dataclasses import dataclass
from dotenv import load_dotenv

load_dotenv(".env")


def _default_threads() -> int:
	raw = os.getenv("LINKAGE_MORSE_THREADS", "")
	if raw.strip():
		return max(1, int(raw))
	return os.cpu_count() or 1


@dataclass
class Settings:
	app_env: str = os.getenv("APP_ENV", "development")
	host: str = os.getenv("APP_HOST", "0.0.0.0")
	port: int = int(os.getenv("APP_PORT", "8000"))
	log_level: str = os.getenv("LOG_LEVEL", "INFO")

	database_url: str = os.getenv("DATABASE_URL", "sqlite:///./linkage_morse.db")

	# Batas worker untuk katalog paralel dan random search
	threads: int = _default_threads()

	fallback_epsilon: float = float(os.getenv("LINKAGE_MORSE_FALLBACK_EPSILON", "1e-3"))
	fallback_seed: int = int(os.getenv("LINKAGE_MORSE_FALLBACK_SEED", "20160711"))
	max_epsilon: float = float(os.getenv("LINKAGE_MORSE_MAX_EPSILON", "0.01"))
	zero_tol: float = float(os.getenv("LINKAGE_MORSE_ZERO_TOL", "1e-7"))

	canvas_px: int = int(os.getenv("LINKAGE_MORSE_CANVAS_PX", "480"))

	# Batas n untuk endpoint HTTP; katalog tumbuh 2^n
	max_catalog_n: int = int(os.getenv("LINKAGE_MORSE_MAX_CATALOG_N", "11"))
	max_topology_n: int = int(os.getenv("LINKAGE_MORSE_MAX_TOPOLOGY_N", "21"))

settings = Settings()
