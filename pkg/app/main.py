from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.core.config import settings
from app.routes.routes import include_app_routes
import logging

logging.basicConfig(level=settings.log_level)
logger = logging.getLogger(__name__)

app = FastAPI(title="Linkage Morse API", version="1.0.0")

app.add_middleware(
	CORSMiddleware,
	allow_origins=["*"],
	allow_methods=["*"],
	allow_headers=["*"],
)

# Buat tabel cache bila belum ada; API tetap jalan tanpa DB
@app.on_event("startup")
async def startup_event():
	try:
		from app.db.session import engine, Base
		from app.db import models  # noqa: F401
		Base.metadata.create_all(bind=engine)
		logger.info("Database tables ready")
	except Exception as e:
		logger.warning(f"Database setup failed: {e}")
		logger.warning("Catalog caching disabled until the database is reachable")

include_app_routes(app)

@app.get("/health")
def health_check():
	return {"status": "ok", "env": settings.app_env}
