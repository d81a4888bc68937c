from pathlib import Path
from typing import Dict, List, Tuple

from app.core.types import Catalog, RenderSpec
from app.services.config_service import ConfigService

CAPTION_PX = 32
MARGIN = 1.1


def _fmt(v: float) -> str:
	text = f"{v:.2f}"
	return "0.00" if text == "-0.00" else text


class RenderService:
	@staticmethod
	def filename(n: int, key: str) -> str:
		return f"n{n}_{key}.svg"

	@staticmethod
	def _screen_points(spec: RenderSpec) -> Tuple[List[Tuple[str, str]], float, float, float]:
		entry = spec.entry
		size = spec.canvas_px
		scale = size / (2.0 * MARGIN * entry.radius)
		cx = cy = size / 2.0
		rel = ConfigService.vertices(entry.config) - entry.center
		# sumbu y SVG mengarah ke bawah
		pts = [(_fmt(cx + scale * x), _fmt(cy - scale * y)) for x, y in rel[:, :2]]
		return pts, cx, cy, scale * entry.radius

	@staticmethod
	def render_svg(spec: RenderSpec) -> str:
		entry = spec.entry
		ctype = entry.ctype
		pts, cx, cy, r_px = RenderService._screen_points(spec)
		width, height = spec.canvas_px, spec.canvas_px + CAPTION_PX
		parts: List[str] = [
			f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
			"<defs>",
			'<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="8" markerHeight="8" orient="auto-start-reverse">',
			'<path d="M0,0 L10,5 L0,10 z" fill="#c0392b"/>',
			"</marker>",
			"</defs>",
			f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
		]
		if spec.show_circle:
			parts.append(
				f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r_px)}" fill="none" '
				'stroke="#7f8c8d" stroke-width="1" stroke-dasharray="6,4"/>'
			)
		path = "M" + " L".join(f"{x},{y}" for x, y in pts) + " Z"
		parts.append(f'<path d="{path}" fill="none" stroke="#2c3e50" stroke-width="2" stroke-linejoin="round"/>')
		(x1, y1), (x2, y2) = pts[0], pts[1 % len(pts)]
		parts.append(
			f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#c0392b" stroke-width="2" marker-end="url(#arrow)"/>'
		)
		# titik yang berimpit (lipatan) digambar sekali, labelnya digabung
		dots: Dict[Tuple[str, str], List[int]] = {}
		for i, p in enumerate(pts, start=1):
			dots.setdefault(p, []).append(i)
		for (x, y), labels in dots.items():
			parts.append(f'<circle class="vertex" cx="{x}" cy="{y}" r="4" fill="#2c3e50"/>')
			if spec.show_labels:
				label = ",".join(str(i) for i in labels)
				parts.append(f'<text x="{x}" y="{y}" dx="6" dy="-6" font-family="sans-serif" font-size="12">{label}</text>')
		caption = f"ω={ctype.omega}, e={ctype.e}, index={entry.index_combinatorial}"
		parts.append(
			f'<text x="{_fmt(width / 2.0)}" y="{height - 10}" text-anchor="middle" '
			f'font-family="sans-serif" font-size="14">{caption}</text>'
		)
		parts.append("</svg>")
		return "\n".join(parts) + "\n"

	@staticmethod
	def render_catalog(catalog: Catalog, out_dir: Path, canvas_px: int = 480) -> List[Path]:
		"""Satu SVG per entri; penulisan file berurutan."""
		out_dir.mkdir(parents=True, exist_ok=True)
		written: List[Path] = []
		for entry in catalog:
			svg = RenderService.render_svg(RenderSpec(entry=entry, canvas_px=canvas_px))
			path = out_dir / RenderService.filename(catalog.n, entry.key)
			path.write_text(svg, encoding="utf-8")
			written.append(path)
		return written
