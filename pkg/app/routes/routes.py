from fastapi import FastAPI

from app.controllers.catalog_controller import router as catalog_router
from app.controllers.morse_controller import router as morse_router
from app.controllers.topology_controller import router as topology_router


def include_app_routes(app: FastAPI) -> None:
	app.include_router(catalog_router)
	app.include_router(topology_router)
	app.include_router(morse_router)
