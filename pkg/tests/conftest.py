import os
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
os.environ.setdefault("DATABASE_URL", "sqlite://")

import hypothesis
import numpy as np
import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool

from app.core.types import LengthVector
from app.db import models  # noqa: F401
from app.db.session import Base
from app.services.catalog_service import CatalogService

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))


def regular_edges(n: int, winding: int = 1) -> np.ndarray:
	theta = 2.0 * np.pi * winding / n
	R = 1.0 / (2.0 * np.sin(theta / 2.0))
	phi = theta * np.arange(n + 1)
	ring = R * np.column_stack([np.cos(phi), np.sin(phi), np.zeros(n + 1)])
	return np.diff(ring, axis=0)


@pytest.fixture(scope="session")
def catalog5():
	return CatalogService.build_catalog(5, workers=1)


@pytest.fixture(scope="session")
def catalog7():
	return CatalogService.build_catalog(7)


@pytest.fixture
def unit5():
	return LengthVector.equilateral(5)


@pytest.fixture
def db_session():
	engine = create_engine("sqlite://", connect_args={"check_same_thread": False}, poolclass=StaticPool)
	Base.metadata.create_all(bind=engine)
	Session = sessionmaker(bind=engine, autoflush=False, autocommit=False)
	db = Session()
	try:
		yield db
	finally:
		db.close()
		engine.dispose()
