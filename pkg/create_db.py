#!/usr/bin/env python3
"""
Script untuk membuat tabel cache katalog dan riwayat sertifikasi
Jalankan sekali sebelum menjalankan API
"""

import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent))

from app.core.config import settings
from app.db.session import engine, Base, SessionLocal
from app.db.models import CatalogRecord, CertificationRun


def create_database() -> bool:
    """Membuat semua tabel"""
    print(f"Membuat tabel di {settings.database_url} ...")

    try:
        Base.metadata.create_all(bind=engine)

        db = SessionLocal()
        catalogs = db.query(CatalogRecord).count()
        runs = db.query(CertificationRun).count()
        print("Isi saat ini:")
        print(f"   - catalog_records: {catalogs}")
        print(f"   - certification_runs: {runs}")
        db.close()
        print("Tabel siap.")

    except Exception as e:
        print(f"Error membuat database: {e}")
        return False

    return True


if __name__ == "__main__":
    sys.exit(0 if create_database() else 1)
