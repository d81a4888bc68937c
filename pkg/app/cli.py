import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from app.core.config import settings
from app.core.errors import BadParity, BadPerturbation, Inadmissible, LinkageError
from app.core.types import Classification, PerturbationSpec
from app.services.catalog_service import CatalogService
from app.services.codec_service import CodecService
from app.services.config_service import ConfigService
from app.services.morse_service import MorseService
from app.services.render_service import RenderService
from app.services.topology_service import TopologyService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2
GRADCHECK_TOL = 1e-5


class UsageError(Exception):
	pass


class _Parser(argparse.ArgumentParser):
	def error(self, message):
		raise UsageError(message)


def _table(headers: Sequence[str], rows: List[Sequence]) -> str:
	cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
	widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
	lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
	lines.insert(1, "  ".join("-" * w for w in widths))
	return "\n".join(lines)


def _emit_json(args, payload) -> None:
	if getattr(args, "json", False) is True:
		print(json.dumps(payload, sort_keys=True))


def _perturbation(args) -> Optional[PerturbationSpec]:
	if args.perturb is None:
		return None
	if args.seed is None:
		raise UsageError("--perturb membutuhkan --seed")
	return PerturbationSpec(args.perturb, args.seed)


def _lengths(args):
	spec = _perturbation(args)
	if spec is None:
		return None
	return ConfigService.perturb_lengths(args.n, spec)


# ===== SUBCOMMANDS =====
def cmd_catalog(args) -> int:
	catalog = CatalogService.build_catalog(args.n, _lengths(args))
	if args.certify:
		catalog = MorseService.certify_catalog(catalog)
	rows = [
		(
			e.key, e.ctype.omega, e.ctype.e, f"{e.theta:.6f}", f"{e.radius:.6f}", f"{e.s_value:.6f}",
			e.index_combinatorial, "" if e.index_numeric is None else e.index_numeric,
		)
		for e in catalog
	]
	print(_table(["type", "omega", "e", "theta", "radius", "S", "index", "numeric"], rows))
	print(f"{len(catalog)} entries")
	if args.out:
		CodecService.dump_catalog(catalog, Path(args.out))
		logger.info(f"Catalog written to {args.out}")
	_emit_json(args, {"n": catalog.n, "entries": len(catalog)})
	return EXIT_OK


def cmd_betti(args) -> int:
	table = TopologyService.betti_decorated(args.n) if args.decorated else TopologyService.betti_M3(args.n)
	print(_table(["degree", "betti"], sorted(table.betti.items())))
	print(f"{table.space.value} dim={table.dim} total={table.total}")
	_emit_json(args, CodecService.betti_to_schema(table).model_dump(mode="json"))
	return EXIT_OK


def cmd_verify(args) -> int:
	last = args.max if args.max is not None else args.n
	ConfigService.check_parity(args.n)
	if last < args.n:
		raise UsageError("--max harus >= --n")
	reports = []
	for n in range(args.n, last + 1, 2):
		catalog = CatalogService.build_catalog(n) if args.realize else None
		report = TopologyService.verify_perfect(n, catalog)
		reports.append(report)
		rows = [(m, c, b, "ok" if c == b else "MISMATCH") for m, (c, b) in report.per_index.items()]
		print(f"n={n}")
		print(_table(["degree", "morse", "betti", ""], rows))
		print(f"total {report.total_critical} / {report.total_betti}  verdict={'PASS' if report.verdict else 'FAIL'}")
	_emit_json(args, [CodecService.perfectness_to_schema(r).model_dump(mode="json") for r in reports])
	return EXIT_OK if all(r.verdict for r in reports) else EXIT_FAILED


def cmd_hessian(args) -> int:
	catalog = CatalogService.build_catalog(args.n, _lengths(args))
	rows = MorseService.hessian_table(catalog, args.planar)
	printed = []
	for entry, expected, report in rows:
		printed.append((
			entry.key, expected, report.negatives, report.zeros,
			f"{report.gradient_residual:.2e}", "" if report.perturbation_seed is None else report.perturbation_seed,
		))
	print(_table(["type", "combinatorial", "numeric", "zeros", "residual", "fallback_seed"], printed))
	mismatches = sum(1 for _, expected, report in rows if expected != report.negatives)
	print(f"{len(rows)} entries, {mismatches} mismatches")
	_emit_json(args, {
		"n": catalog.n,
		"planar": args.planar,
		"mismatches": mismatches,
		"rows": [CodecService.hessian_row(e.key, x, r).model_dump(mode="json") for e, x, r in rows],
	})
	return EXIT_OK if mismatches == 0 else EXIT_FAILED


def cmd_search(args) -> int:
	results = MorseService.random_search(args.n, args.restarts, args.seed, workers=args.workers)
	counts: Dict[str, int] = {c.value: 0 for c in Classification}
	for r in results:
		counts[r.classification.value] += 1
	converged = len(results) - counts[Classification.NOT_CONVERGED.value]
	worst = max((r.match_distance for r in results if r.match_distance is not None), default=0.0)
	print(_table(["classification", "count"], list(counts.items())))
	print(f"converged {converged}/{len(results)}  max match distance {worst:.2e}")
	if args.json:
		path = Path(args.json)
		path.parent.mkdir(parents=True, exist_ok=True)
		dumped = [CodecService.search_result_to_schema(r).model_dump(mode="json") for r in results]
		path.write_text(json.dumps(dumped), encoding="utf-8")
		print(json.dumps({"n": args.n, "restarts": args.restarts, "converged": converged, **counts}, sort_keys=True))
	return EXIT_OK if counts[Classification.NON_PLANAR_CANDIDATE.value] == 0 else EXIT_FAILED


def cmd_gradcheck(args) -> int:
	worst = MorseService.gradcheck(args.n, args.samples, args.seed)
	print(f"max relative FD error {worst:.3e} over {args.samples} samples")
	_emit_json(args, {"n": args.n, "samples": args.samples, "max_error": worst})
	return EXIT_OK if worst <= GRADCHECK_TOL else EXIT_FAILED


def cmd_render(args) -> int:
	catalog = CatalogService.build_catalog(args.n)
	written = RenderService.render_catalog(catalog, Path(args.out), args.canvas)
	print(f"{len(written)} SVG files written to {args.out}")
	return EXIT_OK


def cmd_serve(args) -> int:
	import uvicorn
	uvicorn.run("app.main:app", host=args.host, port=args.port)
	return EXIT_OK


# ===== PARSER =====
def build_parser() -> argparse.ArgumentParser:
	parser = _Parser(prog="linkage-morse", description="Critical points of the oriented area on polygon linkages.")
	sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

	def command(name: str, handler: Callable, help_text: str, json_flag: bool = True):
		p = sub.add_parser(name, help=help_text)
		p.set_defaults(handler=handler)
		if json_flag:
			p.add_argument("--json", action="store_true", help="Append a machine-readable JSON line.")
		return p

	p = command("catalog", cmd_catalog, "Enumerate and realize all cyclic critical configurations.")
	p.add_argument("--n", type=int, required=True)
	p.add_argument("--perturb", type=float)
	p.add_argument("--seed", type=int)
	p.add_argument("--out", type=str)
	p.add_argument("--certify", action="store_true", help="Fill index_numeric from the projected Hessian.")

	p = command("betti", cmd_betti, "Print Betti numbers.")
	p.add_argument("--n", type=int, required=True)
	p.add_argument("--decorated", action="store_true")

	p = command("verify", cmd_verify, "Compare the Morse census against Betti numbers.")
	p.add_argument("--n", type=int, required=True)
	p.add_argument("--max", type=int)
	p.add_argument("--realize", action="store_true", help="Count indices over a realized catalog.")

	p = command("hessian", cmd_hessian, "Numeric Morse index for every catalog entry.")
	p.add_argument("--n", type=int, required=True)
	p.add_argument("--perturb", type=float)
	p.add_argument("--seed", type=int)
	p.add_argument("--planar", action="store_true")

	p = command("search", cmd_search, "Random-restart critical point search.", json_flag=False)
	p.add_argument("--n", type=int, required=True)
	p.add_argument("--restarts", type=int, required=True)
	p.add_argument("--seed", type=int, required=True)
	p.add_argument("--workers", type=int)
	p.add_argument("--json", type=str, metavar="FILE")

	p = command("gradcheck", cmd_gradcheck, "Finite-difference check of the analytic gradient.")
	p.add_argument("--n", type=int, required=True)
	p.add_argument("--samples", type=int, required=True)
	p.add_argument("--seed", type=int, required=True)

	p = command("render", cmd_render, "Write one SVG per catalog entry.", json_flag=False)
	p.add_argument("--n", type=int, required=True)
	p.add_argument("--out", type=str, required=True)
	p.add_argument("--canvas", type=int, default=settings.canvas_px)

	p = command("serve", cmd_serve, "Run the HTTP API.", json_flag=False)
	p.add_argument("--host", default=settings.host)
	p.add_argument("--port", type=int, default=settings.port)
	return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
	logging.basicConfig(level=settings.log_level, stream=sys.stderr)
	parser = build_parser()
	try:
		args = parser.parse_args(argv)
		return args.handler(args)
	except SystemExit as e:
		# --help
		return int(e.code or 0)
	except UsageError as e:
		print(f"usage error: {e}", file=sys.stderr)
		return EXIT_USAGE
	except (BadParity, BadPerturbation, Inadmissible, ValueError) as e:
		print(f"usage error: {e}", file=sys.stderr)
		return EXIT_USAGE
	except LinkageError as e:
		logger.error(f"{type(e).__name__}: {e}")
		return EXIT_FAILED


def main() -> int:
	return run_cli(sys.argv[1:])
