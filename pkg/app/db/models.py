from datetime import datetime

from sqlalchemy import BigInteger, Boolean, DateTime, Float, Integer, Text, UniqueConstraint
from sqlalchemy.orm import Mapped, mapped_column

from app.db.session import Base


class CatalogRecord(Base):
	__tablename__ = "catalog_records"
	__table_args__ = (UniqueConstraint("n", "epsilon", "seed", name="uq_catalog_key"),)

	id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
	n: Mapped[int] = mapped_column(Integer, nullable=False)
	epsilon: Mapped[float] = mapped_column(Float, nullable=False, default=0.0)
	# seed -1 berarti panjang equilateral (tanpa perturbasi)
	seed: Mapped[int] = mapped_column(BigInteger, nullable=False, default=-1)
	payload: Mapped[str] = mapped_column(Text, nullable=False)
	created_at: Mapped[datetime] = mapped_column(DateTime, nullable=False, default=datetime.utcnow)


class CertificationRun(Base):
	__tablename__ = "certification_runs"

	id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
	n: Mapped[int] = mapped_column(Integer, nullable=False)
	epsilon: Mapped[float] = mapped_column(Float, nullable=False, default=0.0)
	seed: Mapped[int] = mapped_column(BigInteger, nullable=False, default=-1)
	planar: Mapped[bool] = mapped_column(Boolean, nullable=False, default=False)
	entries: Mapped[int] = mapped_column(Integer, nullable=False)
	mismatches: Mapped[int] = mapped_column(Integer, nullable=False)
	degenerate: Mapped[int] = mapped_column(Integer, nullable=False, default=0)
	created_at: Mapped[datetime] = mapped_column(DateTime, nullable=False, default=datetime.utcnow)
