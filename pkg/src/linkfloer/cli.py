"""Command-line front end.

Every subcommand prints a report (``--emit json`` or ``text``) and exits 0
only when all of its checks pass; failures are listed by name.  Complexes
and pipelines are given as JSON files, fixture names, or compact grid text.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import complex as cx
from .derivmaps import phi, psi, psi_arc
from .errors import LinkFloerError
from .fixtures import GRIDS, MODELS, PIPELINES, base_complex
from .grid import DEFAULT_CAP, GridDiagram, build_grid_complex, parse_grid
from .homotopy import solve_homotopy
from .linkconfig import Arc, Coloring
from .ring import ZERO, U, V
from .quasistab import Pipeline, build_pipeline, relation_suite, resolve_coloring
from .theorems import homotopy_relations, thm_b_verify, thm_d_verify

# past this many generators only Psi_K^2 ~ 0 is checked, by an explicit homotopy
SOLVER_SIZE_LIMIT = 200


class Reporter:
    def __init__(self, command: str):
        self.out: dict = {"command": command, "checks": []}
        self.t0 = time.perf_counter()

    def check(self, name: str, ok: bool, **extra) -> bool:
        self.out["checks"].append({"name": name, "ok": bool(ok), **extra})
        return ok

    def steps(self, report: dict) -> None:
        """Fold a verifier report's steps into the check list."""
        for s in report["steps"]:
            ok = s["status"] not in ("fail", "UNSAT")
            extra = {k: v for k, v in s.items() if k not in ("step", "homotopy")}
            self.check(s["step"], ok, **extra)

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.out["checks"])

    def finish(self) -> dict:
        self.out["ok"] = self.ok
        self.out["failures"] = [c["name"] for c in self.out["checks"] if not c["ok"]]
        self.out["seconds"] = round(time.perf_counter() - self.t0, 3)
        return self.out


# -- input resolution ------------------------------------------------------------


def _read_json_or_text(spec: str):
    p = Path(spec)
    if p.is_file():
        text = p.read_text()
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            return text.strip()
    return None


def _strip_suffix(spec: str) -> str:
    for suffix in (".pipeline", ".json"):
        if spec.endswith(suffix):
            return spec[: -len(suffix)]
    return spec


def load_grid(spec: str) -> GridDiagram:
    data = _read_json_or_text(spec)
    if data is not None:
        return parse_grid(data)
    name = _strip_suffix(spec)
    if name in GRIDS:
        return GRIDS[name]
    return parse_grid(spec)


def load_pipeline(spec: str) -> Pipeline:
    data = _read_json_or_text(spec)
    if isinstance(data, dict):
        return Pipeline.from_json(data)
    name = _strip_suffix(spec)
    if name in PIPELINES:
        return Pipeline.from_json(PIPELINES[name])
    if name in GRIDS or name in MODELS:
        return Pipeline(name, [], "trivial")
    raise LinkFloerError(f"no pipeline file or fixture named {spec!r}")


def load_complex(spec: str, cap: int, jobs: int) -> cx.ChainComplex:
    """A complex JSON, grid JSON/text, pipeline JSON, or any fixture name."""
    data = _read_json_or_text(spec)
    if isinstance(data, dict):
        if "generators" in data:
            return cx.ChainComplex.from_json(data)
        if "base" in data:
            return build_pipeline(Pipeline.from_json(data), cap=cap, jobs=jobs)
        return build_grid_complex(parse_grid(data), cap=cap, jobs=jobs, name=Path(spec).stem)
    if isinstance(data, str):
        return build_grid_complex(parse_grid(data), cap=cap, jobs=jobs, name=Path(spec).stem)
    name = _strip_suffix(spec)
    if name in PIPELINES:
        return build_pipeline(Pipeline.from_json(PIPELINES[name]), cap=cap, jobs=jobs)
    if name in MODELS or name in GRIDS:
        return base_complex(name, cap=cap, jobs=jobs)
    return build_grid_complex(parse_grid(spec), cap=cap, jobs=jobs)


def load_coloring(spec: str, C: cx.ChainComplex) -> Coloring | None:
    data = _read_json_or_text(spec)
    if isinstance(data, dict):
        return Coloring.from_json(data) if "sigma" in data else Coloring(data)
    return resolve_coloring(spec, C.cfg)


def _write(path: str | None, data: dict) -> None:
    if path:
        Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _grading_ok(C: cx.ChainComplex) -> bool:
    try:
        C.check_grading()
    except LinkFloerError:
        return False
    return True


def _figure_dir(args) -> Path | None:
    if not getattr(args, "figure_dir", None):
        return None
    d = Path(args.figure_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _component(args, C: cx.ChainComplex, p: Pipeline | None = None) -> str:
    if getattr(args, "component", None):
        return args.component
    if p is not None and p.component:
        return p.component
    return next(iter(C.cfg.components))


# -- subcommands ------------------------------------------------------------------


def cmd_grid_complex(args, rep: Reporter) -> None:
    g = load_grid(args.grid)
    C = build_grid_complex(g, cap=args.grid_cap, jobs=args.jobs, name=Path(args.grid).stem)
    defect = cx.d_squared_defect(C)
    expected = cx.expected_defect(C.cfg)
    rep.out.update(grid=g.to_json(), generators=C.n, components=C.cfg.to_json(), defect=str(defect))
    rep.check("d^2 equals the expected defect", defect == expected, expected=str(expected))
    rep.check("grading law on every differential entry", _grading_ok(C))
    rep.check("Alexander classes preserved", cx.check_alexander_classes(C))
    rep.check("d^2 = 0 after trivial coloring", cx.square_is_zero(C.with_coloring(Coloring.trivial(C.cfg))))
    _write(args.out, C.to_json())
    figs = _figure_dir(args)
    if figs is not None:
        from .plotting import plot_grid

        path = figs / f"{Path(args.grid).stem}_grid.png"
        plot_grid(g, path)
        rep.out["figures"] = [str(path)]


def cmd_color(args, rep: Reporter) -> None:
    C = load_complex(args.complex, args.grid_cap, args.jobs)
    coloring = load_coloring(args.coloring, C)
    if coloring is None:
        out = C.with_coloring(None)
    else:
        out = cx.apply_coloring(C, coloring, check=False)
        rep.check("colored d^2 = 0", cx.square_is_zero(out))
    rep.out.update(generators=out.n, coloring=coloring.to_json() if coloring else None)
    _write(args.out, out.to_json())
    if not args.out:
        rep.out["complex"] = out.to_json()


def cmd_check_dsq(args, rep: Reporter) -> None:
    C = load_complex(args.complex, args.grid_cap, args.jobs)
    defect = cx.d_squared_defect(C)
    expected = cx.expected_defect(C.cfg)
    rep.out.update(generators=C.n, defect=str(defect))
    rep.check("uncolored d^2 equals the expected defect", defect == expected, expected=str(expected))
    if C.coloring is not None:
        rep.check("colored d^2 = 0", cx.square_is_zero(C))


PROVENANCE = {
    "phi": "formal U_w derivative of the uncolored differential, then colored",
    "psi": "formal V_z derivative of the uncolored differential, then colored",
    "psi-arc": "sum of the V_z derivative maps over z-basepoints inside the arc",
}


def cmd_derive(args, rep: Reporter) -> None:
    C = load_complex(args.complex, args.grid_cap, args.jobs)
    c = cx.expected_defect(C.cfg)
    if args.kind == "phi":
        F = phi(C, args.points[0])
        dc = c.derivative(U(args.points[0]))
    elif args.kind == "psi":
        F = psi(C, args.points[0])
        dc = c.derivative(V(args.points[0]))
    else:
        pts = args.points
        if len(pts) == 1:
            arc = Arc(pts[0]) if pts[0] in C.cfg.components else Arc(C.cfg.component_of(pts[0]))
        else:
            arc = Arc(C.cfg.component_of(pts[0]), pts[0], pts[1])
        F = psi_arc(C, arc)
        dc = sum((c.derivative(V(z)) for z in C.cfg.arc_z_basepoints(arc)), ZERO)
    data = {**F.to_json(), "provenance": PROVENANCE[args.kind]}
    rep.out["map"] = data
    # d F + F d is the derivative of the scalar d^2 = c
    scalar = C.to_ring(dc)
    rep.check(f"d {F.name} + {F.name} d = ({scalar}) id",
              cx.is_chain_map(F).defect.cols == cx.mat_clean(cx.mat_scale(cx.mat_identity(C.n), scalar)))
    _write(args.out, data)


def _exact_subset(C: cx.ChainComplex, rep: Reporter) -> None:
    """Identities that are exact on any complex; arc identities go to the solver."""
    rep.check("uncolored d^2 = expected defect", cx.d_squared_defect(C) == cx.expected_defect(C.cfg))
    if C.coloring is None:
        return
    rep.check("colored d^2 = 0", cx.square_is_zero(C))
    for w in C.cfg.w_basepoints():
        rep.check(f"d Phi_{w} + Phi_{w} d = 0", cx.is_chain_map(phi(C, w)).ok)


def cmd_relations(args, rep: Reporter) -> None:
    p = load_pipeline(args.pipeline)
    C = build_pipeline(p, cap=args.grid_cap, jobs=args.jobs)
    rep.out.update(pipeline=p.to_json(), generators=C.n)
    if C.stabs:
        for c in relation_suite(C):
            rep.check(c.name, c.ok)
    else:
        _exact_subset(C, rep)
    if args.exact_only or C.coloring is None:
        return
    large = C.n > SOLVER_SIZE_LIMIT and not args.full_homotopy
    rep.out["solver_scope"] = "Psi_K^2 by explicit certificate" if large else "full"
    rep.steps(homotopy_relations(C, squares_only=large, explicit=large))


def cmd_thm_b(args, rep: Reporter) -> None:
    p = load_pipeline(args.pipeline)
    C = build_pipeline(p, cap=args.grid_cap, jobs=args.jobs)
    res = thm_b_verify(C, _component(args, C, p))
    rep.out["report"] = res
    rep.steps(res)


def cmd_thm_d(args, rep: Reporter) -> None:
    p = load_pipeline(args.pipeline)
    C = build_pipeline(p, cap=args.grid_cap, jobs=args.jobs)
    res = thm_d_verify(C, _component(args, C, p))
    rep.out["report"] = res
    rep.steps(res)


def _mirror(alex: tuple) -> tuple:
    return tuple((c, -a) for c, a in alex)


def cmd_homology_tilde(args, rep: Reporter) -> None:
    C = load_complex(args.complex, args.grid_cap, args.jobs)
    ranks = cx.f2_homology_ranks(C)
    by_alex: dict[int, int] = {}
    for (_, alex), r in ranks.items():
        a = cx.total_alexander(alex)
        by_alex[a] = by_alex.get(a, 0) + r
    rep.out.update(
        generators=C.n,
        total_rank=sum(ranks.values()),
        ranks=[{"maslov": m, "alexander2": dict(alex), "rank": r} for (m, alex), r in sorted(ranks.items())],
        euler_characteristic2=cx.euler_characteristic(ranks),
    )
    rep.check("ranks symmetric under Alexander negation", all(by_alex.get(-a, 0) == r for a, r in by_alex.items()))
    figs = _figure_dir(args)
    if figs is not None:
        from .plotting import plot_tilde_ranks

        path = figs / f"{C.name or 'complex'}_tilde_ranks.png"
        plot_tilde_ranks(ranks, path)
        rep.out["figures"] = [str(path)]


def _load_map(spec: str, C: cx.ChainComplex, like: cx.ChainMap | None = None) -> cx.ChainMap:
    if spec in ("id", "1"):
        return cx.identity(C)
    if spec == "0":
        if like is None:
            return cx.zero_map(C, C)
        return cx.zero_map(C, C, like.shift, like.alex_shift)
    data = json.loads(Path(spec).read_text())
    if "map" in data:
        data = data["map"]
    return cx.ChainMap.from_json(data, C, C)


def cmd_homotopy(args, rep: Reporter) -> None:
    C = load_complex(args.complex, args.grid_cap, args.jobs)
    if C.coloring is None:
        # homotopies live on chain complexes, so color a bare grid or model first
        coloring = load_coloring(args.coloring, C)
        if coloring is not None:
            C = cx.apply_coloring(C, coloring)
    F = _load_map(args.F, C) if args.F not in ("0",) else None
    G = _load_map(args.G, C, F)
    if F is None:
        F = _load_map(args.F, C, G)
    res = solve_homotopy(F, G, degree=args.degree)
    out = res.to_json()
    rep.out["result"] = out
    rep.check(f"{F.name or args.F} ~ {G.name or args.G}", res.found,
              **{k: v for k, v in out.items() if k not in ("homotopy", "status")})
    if res.H is not None:
        _write(args.out, res.H.to_json())


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--emit", choices=("json", "text"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for grid construction")
    common.add_argument("--grid-cap", type=int, default=DEFAULT_CAP, help="largest grid size accepted")
    common.add_argument("--figure-dir", default=None, help="write figures here (grid-complex, homology-tilde)")

    parser = argparse.ArgumentParser(prog="linkfloer", description="Link Floer complexes and basepoint-map checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grid-complex", parents=[common], help="build a grid complex and check d^2 and gradings")
    p.add_argument("grid", help="grid JSON file, fixture name, or 'n / O / X'")
    p.add_argument("--out", help="write the complex JSON here")
    p.set_defaults(func=cmd_grid_complex)

    p = sub.add_parser("color", parents=[common], help="apply a coloring to a complex")
    p.add_argument("complex")
    p.add_argument("coloring", help="'trivial', 'merge_w:K', 'none', or a JSON file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("check-dsq", parents=[common], help="compare d^2 with the expected defect")
    p.add_argument("complex")
    p.set_defaults(func=cmd_check_dsq)

    p = sub.add_parser("derive", parents=[common], help="emit a basepoint map")
    p.add_argument("kind", choices=("phi", "psi", "psi-arc"))
    p.add_argument("complex")
    p.add_argument("points", nargs="+", help="a basepoint, or arc endpoints w w' (or a component id)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("relations", parents=[common], help="run the relation suite on a pipeline")
    p.add_argument("pipeline")
    p.add_argument("--exact-only", action="store_true", help="skip solver-decided relations")
    p.add_argument("--full-homotopy", action="store_true", help="run every solver relation on large complexes")
    p.set_defaults(func=cmd_relations)

    for name, func, what in (("verify-thm-b", cmd_thm_b, "full-twist formula"),
                             ("verify-thm-d", cmd_thm_d, "partial-twist formula")):
        p = sub.add_parser(name, parents=[common], help=f"certify the {what}")
        p.add_argument("pipeline")
        p.add_argument("--component")
        p.set_defaults(func=func)

    p = sub.add_parser("homology-tilde", parents=[common], help="tilde-flavor ranks and Euler characteristic")
    p.add_argument("complex")
    p.set_defaults(func=cmd_homology_tilde)

    p = sub.add_parser("homotopy", parents=[common], help="decide F ~ G on one complex")
    p.add_argument("F", help="map JSON file, 'id' or '0'")
    p.add_argument("G", help="map JSON file, 'id' or '0'")
    p.add_argument("--complex", required=True, help="source and target complex")
    p.add_argument("--coloring", default="trivial", help="applied when the complex is uncolored")
    p.add_argument("--degree", type=int, default=None, help="truncate monomial degree (warns if incomplete)")
    p.add_argument("--out", help="write the homotopy JSON here")
    p.set_defaults(func=cmd_homotopy)
    return parser


def _print_text(out: dict) -> None:
    for c in out["checks"]:
        note = f"  [{c['error']}: {c['message']}]" if "error" in c else ""
        print(f"{'PASS' if c['ok'] else 'FAIL'}  {c['name']}{note}")
    for key in ("generators", "defect", "total_rank", "euler_characteristic2", "figures"):
        if key in out:
            print(f"{key}: {out[key]}")
    if out.get("failures"):
        print(json.dumps({"failures": out["failures"]}), file=sys.stderr)
    print(f"{'OK' if out['ok'] else 'FAILED'} ({out['seconds']} s)")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    rep = Reporter(args.command)
    try:
        args.func(args, rep)
    except (LinkFloerError, ValueError, KeyError, OSError) as e:
        rep.check("run", False, error=type(e).__name__, message=str(e))
    out = rep.finish()
    if args.emit == "json":
        print(json.dumps(out, indent=2, sort_keys=True, default=str))
    else:
        _print_text(out)
    return 0 if out["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
