"""Command line front end.

    gridforge compute --input G.json --invariants g0,tau,vk,upsilon,d --surgery 1/1
    gridforge hfk --input fixture:trefoil
    gridforge check-region --input fixture:trefoil --region '[[0, 1]]'

Exit codes: 1 bad input, 2 capacity exceeded, 3 internal contradiction.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .griddata import CapacityError, GridDiagram, GridError, InternalError, parse_grid
from .gridcomplex import DEFAULT_MAX_STATES, enumerate_states, genus_from_hfk, hfk_hat
from .homgen import homological_generator
from .invariants import (ALL_INVARIANTS, KnotHints, Side, compute_g0, compute_tau, parse_slope,
                         report_from_g0, tau_from_g0)
from .realize import is_realizable, z_on_table
from .regions import Region

log = logging.getLogger("gridforge")

DEFAULT_CACHE = ".gridforge-cache"


# -- fixtures --------------------------------------------------------------------

def _fixture_data() -> Dict[str, dict]:
    text = resources.files("gridforge").joinpath("data/fixtures.json").read_text(encoding="utf-8")
    return json.loads(text)


def fixtures() -> Dict[str, GridDiagram]:
    return {name: GridDiagram(d["n"], tuple(d["O"]), tuple(d["X"])) for name, d in _fixture_data().items()}


def fixture_expectations() -> Dict[str, dict]:
    return {name: {k: v for k, v in d.items() if k not in ("n", "O", "X")} for name, d in _fixture_data().items()}


def check_fixture(name: str) -> None:
    """Gate a fixture on its genus (from hat HFK) and tau."""
    grid = fixtures()[name]
    want = fixture_expectations()[name]
    side = Side(grid, "K")
    g3 = genus_from_hfk(hfk_hat(side.table))
    if g3 != want["g3"]:
        raise InternalError(f"fixture {name}: genus {g3}, expected {want['g3']}")
    tau = compute_tau(side, g3)
    if tau != want["tau"]:
        raise InternalError(f"fixture {name}: tau {tau}, expected {want['tau']}")


def load_grid(spec: str) -> Tuple[str, GridDiagram]:
    if spec.startswith("fixture:"):
        name = spec.split(":", 1)[1]
        lib = fixtures()
        if name not in lib:
            raise GridError(f"unknown fixture {name!r}; known: {', '.join(lib)}")
        return name, lib[name]
    try:
        text = Path(spec).read_text(encoding="utf-8")
    except OSError as exc:
        raise GridError(f"cannot read {spec}: {exc}") from None
    return Path(spec).stem, parse_grid(text)


# -- hat HFK files ------------------------------------------------------------------

def hfk_to_dict(hfk: Dict[Tuple[int, int], int]) -> dict:
    rows = sorted(((a, m, r) for (m, a), r in hfk.items() if r), key=lambda t: (-t[0], -t[1]))
    return {"schema": 1, "g3": genus_from_hfk(hfk), "entries": [{"a": a, "m": m, "rank": r} for a, m, r in rows]}


def hfk_from_dict(data) -> Dict[Tuple[int, int], int]:
    try:
        out = {(int(e["m"]), int(e["a"])): int(e["rank"]) for e in data["entries"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise GridError(f"bad HFK table: {exc}") from None
    if not any(out.values()):
        raise GridError("HFK table is empty")
    return out


def render_hfk(data: dict) -> str:
    lines = [f"g3 = {data['g3']}", f"{'a':>4} {'m':>4} {'rank':>5}"]
    lines += [f"{e['a']:>4} {e['m']:>4} {e['rank']:>5}" for e in data["entries"]]
    return "\n".join(lines) + "\n"


# -- cache ------------------------------------------------------------------------

def cache_dir(flag: Optional[str]) -> Path:
    return Path(flag or os.environ.get("GRIDFORGE_CACHE") or DEFAULT_CACHE)


def cache_key(grid: GridDiagram, hints: KnotHints) -> str:
    hfk = None if hints.hfk is None else sorted(hints.hfk.items())
    blob = json.dumps([__version__, grid.to_json(), hints.g3, hints.g4, hints.tau, hfk])
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


def cache_read(root: Path, key: str) -> Optional[dict]:
    path = root / f"{key}.json"
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError):
        return None


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


# -- report table -------------------------------------------------------------------

def _regions(data: Sequence) -> str:
    return ", ".join(str(Region.from_list(r)) for r in data)


def _ints(xs: Sequence[int]) -> str:
    return "{" + ", ".join(str(x) for x in xs) + "}"


def _pl(points: Sequence) -> str:
    if all(y == "0" for _, y in points):
        return "0"
    return "PL[" + ", ".join(f"({t}, {y})" for t, y in points) + "]"


def render_report(report: dict) -> str:
    """Aligned text table, generated from the report JSON alone."""
    rows: List[Tuple[str, str]] = []
    if "knot" in report:
        rows.append(("K", report["knot"]))
    if "g0_K" in report:
        rows.append(("G0(K)", _regions(report["g0_K"])))
        rows.append(("G0(K*)", _regions(report["g0_mirror"])))
        rows.append(("nu+ trivial", str(report["nu_plus_trivial"]).lower()))
    if "tau" in report:
        rows.append(("tau(K)", str(report["tau"])))
    if "vk" in report:
        rows.append(("V_k(K)", _ints(report["vk"])))
        rows.append(("V_k(K*)", _ints(report["vk_mirror"])))
    if "upsilon" in report:
        rows.append(("Upsilon", _pl(report["upsilon"])))
    for slope, vals in report.get("d", {}).items():
        rows.append((f"d({slope})", "[" + ", ".join(vals) + "]"))
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


# -- commands ----------------------------------------------------------------------

def _hints(args) -> KnotHints:
    hfk = None
    if args.hfk:
        try:
            hfk = hfk_from_dict(json.loads(Path(args.hfk).read_text(encoding="utf-8")))
        except (OSError, ValueError) as exc:
            raise GridError(f"cannot read HFK file {args.hfk}: {exc}") from None
    hints = KnotHints(args.g3, args.g4, args.tau, hfk)
    hints.check()
    return hints


def _invariants(text: str) -> List[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in names if s not in ALL_INVARIANTS]
    if bad or not names:
        raise GridError(f"unknown invariants {bad}; choose from {','.join(ALL_INVARIANTS)}")
    return names


def cmd_compute(args) -> int:
    name, grid = load_grid(args.input)
    hints = _hints(args)
    invariants = _invariants(args.invariants)
    slopes = [parse_slope(s) for s in args.surgery.split(",") if s.strip()] if args.surgery else []
    if slopes and "d" not in invariants:
        invariants.append("d")
    if args.threads != 1:
        log.info("running single-threaded; --threads %d ignored", args.threads)

    root = None if args.no_cache else cache_dir(args.cache)
    key = cache_key(grid, hints)
    cached = cache_read(root, key) if root else None
    if cached is not None:
        g0 = [Region.from_list(r) for r in cached["g0_K"]]
        tau = cached["tau"]
        log.info("cache hit %s", key)
    else:
        res = compute_g0(grid, hints, max_states=args.capacity, use_pi=False if args.no_pi else None,
                         chunk=args.chunk)
        g0, tau = res.g0_knot, res.tau
        if root:
            entry = {"version": __version__, "g0_K": [r.to_list() for r in g0], "tau": tau,
                     "g3": res.g3, "side": res.side, "audit": res.audit}
            write_atomic(root / f"{key}.json", json.dumps(entry, sort_keys=True))
    if tau_from_g0(g0) != tau:
        raise InternalError(f"tau {tau} from the search disagrees with G_0 ({tau_from_g0(g0)})")

    report = {"schema": 1, "knot": name, "diagram": json.loads(grid.to_json())}
    report.update(report_from_g0(g0, slopes, invariants))
    text = json.dumps(report) + "\n"
    # the table goes wherever the JSON does not
    if args.output:
        write_atomic(Path(args.output), text)
        sys.stdout.write(render_report(report))
    else:
        sys.stdout.write(text)
        sys.stderr.write(render_report(report))
    return 0


def cmd_hfk(args) -> int:
    _, grid = load_grid(args.input)
    data = hfk_to_dict(hfk_hat(enumerate_states(grid, args.capacity)))
    if args.json:
        sys.stdout.write(json.dumps(data, indent=1) + "\n")
    else:
        sys.stdout.write(render_hfk(data))
    return 0


def _region_arg(text: str) -> Region:
    path = Path(text)
    if not text.lstrip().startswith("[") and path.exists():
        text = path.read_text(encoding="utf-8")
    try:
        return Region.from_list(json.loads(text))
    except ValueError as exc:
        raise GridError(f"bad region: {exc}") from None


def cmd_check_region(args) -> int:
    _, grid = load_grid(args.input)
    region = _region_arg(args.region)
    table = enumerate_states(grid, args.capacity)
    z = z_on_table(table, homological_generator(grid))
    v = is_realizable(table, z, region, use_pi=False if args.no_pi else None, chunk=args.chunk)
    sys.stdout.write(json.dumps(v.to_dict()) + "\n")
    return 0


def cmd_fixtures(args) -> int:
    want = fixture_expectations()
    for name, grid in fixtures().items():
        status = ""
        if args.check:
            check_fixture(name)
            status = "  ok"
        sys.stdout.write(f"{name:<18} n={grid.n}  g3={want[name]['g3']}  tau={want[name]['tau']}{status}\n")
    return 0


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; 2 is reserved for capacity
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gridforge", description="Knot concordance invariants from grid diagrams.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--input", required=True, help="diagram file (JSON or text) or fixture:NAME")
        sp.add_argument("--capacity", type=int, default=DEFAULT_MAX_STATES, help="maximum number of grid states")

    c = sub.add_parser("compute", help="G_0 and the invariants it determines")
    common(c)
    c.add_argument("--g3", type=int)
    c.add_argument("--g4", type=int)
    c.add_argument("--tau", type=int)
    c.add_argument("--hfk", help="hat HFK table as written by `gridforge hfk --json`")
    c.add_argument("--invariants", default=",".join(ALL_INVARIANTS))
    c.add_argument("--surgery", help="comma separated slopes p/q")
    c.add_argument("--output", help="report path (default: stdout)")
    c.add_argument("--cache", help="cache directory")
    c.add_argument("--no-cache", action="store_true")
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--chunk", type=int, default=2048)
    c.add_argument("--no-pi", action="store_true", help="skip the projected prefilter")
    c.set_defaults(func=cmd_compute)

    h = sub.add_parser("hfk", help="hat knot Floer homology")
    common(h)
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_hfk)

    r = sub.add_parser("check-region", help="realizability of one region")
    common(r)
    r.add_argument("--region", required=True, help="corner list as JSON, e.g. '[[0, 1], [1, 0]]'")
    r.add_argument("--chunk", type=int, default=2048)
    r.add_argument("--no-pi", action="store_true")
    r.set_defaults(func=cmd_check_region)

    f = sub.add_parser("fixtures", help="list the bundled diagrams")
    f.add_argument("--check", action="store_true", help="run the genus and tau gates")
    f.set_defaults(func=cmd_fixtures)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"gridforge: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"gridforge: internal error: {exc}", file=sys.stderr)
        return 3
    except (GridError, ValueError) as exc:
        print(f"gridforge: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
