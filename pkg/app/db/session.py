from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker, DeclarativeBase
import logging

from app.core.config import settings

logger = logging.getLogger(__name__)

class Base(DeclarativeBase):
	pass


def _connect_args(url: str) -> dict:
	# sqlite menolak connect_timeout; sesi dipakai lintas thread oleh FastAPI
	if url.startswith("sqlite"):
		return {"check_same_thread": False}
	return {"connect_timeout": 10}


try:
	engine = create_engine(
		settings.database_url,
		pool_pre_ping=True,
		connect_args=_connect_args(settings.database_url),
	)
	SessionLocal = sessionmaker(bind=engine, autoflush=False, autocommit=False)
	logger.info("Database engine created successfully")
except Exception as e:
	logger.error(f"Failed to create database engine: {e}")
	engine = None
	SessionLocal = None


def get_db():
	if SessionLocal is None:
		raise RuntimeError("Database not available. Please check DATABASE_URL.")

	db = SessionLocal()
	try:
		yield db
	finally:
		db.close()
