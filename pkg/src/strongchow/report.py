"""Assemble machine-readable reports for a scenario."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .git import (
    Presentation,
    PresentationError,
    classify_support,
    consistency_check,
    invariant_charts,
    is_properly_stable,
    max_stabilizer_locus,
    semistable_supports,
    stabilizer,
    unstable_components,
)
from .reichstein import (
    ReichsteinError,
    check_fan_tower,
    reichstein_agreement_check,
    reichstein_sequence,
)
from .scenario import Scenario
from .space_chow import (
    is_projective_plane_fan,
    non_simplicial_cones,
    quotient_fan,
    toric_chow_presentation,
)
from .stack_chow import build_ring, graded_piece_structure
from .strong import (
    generically_strong_slices,
    injectivity_analysis,
    pushforward_well_defined_check,
    ring_closure_check,
    strong_catalogue,
    strong_groups,
    strong_pushforward,
)

COMMANDS = ("analyze", "chow-ring", "strong", "pushforward", "reichstein", "verify")
VERDICTS = ("ring_structure", "strong_pushforward", "reichstein_agreement", "injective_subring")


@dataclass(frozen=True)
class Options:
    max_degree: Optional[int] = None
    rational: bool = False
    trace: bool = False


def _key(s):
    return (len(s), sorted(s))


def _labels(p: Presentation, sets) -> list[list[str]]:
    return [p.label(s) for s in sorted(sets, key=_key)]


class Context:
    """Lazily computed objects shared between report sections."""

    def __init__(self, sc: Scenario, opts: Options):
        self.scenario = sc
        self.opts = opts
        self.p = sc.presentation()
        self._cache: dict = {}

    def _get(self, name, fn):
        if name not in self._cache:
            self._cache[name] = fn()
        return self._cache[name]

    @property
    def ring(self):
        md = self.opts.max_degree if self.opts.max_degree is not None else self.scenario.max_degree
        return self._get("ring", lambda: build_ring(self.p, md))

    @property
    def fan(self):
        return self._get("fan", lambda: quotient_fan(self.p))

    @property
    def catalogue(self):
        return self._get("catalogue", lambda: strong_catalogue(self.p, self.ring))

    @property
    def sequence(self):
        return self._get("sequence", lambda: reichstein_sequence(self.p))

    def require_stable(self):
        if self.p.character is None:
            raise PresentationError("scenario has no character")
        if not is_properly_stable(self.p):
            raise PresentationError("presentation is not properly stable")


def analyze_section(ctx: Context) -> dict:
    p = ctx.p
    out: dict = {"dimension": p.dim}
    if p.excised is not None and p.character is not None:
        ok, bad = consistency_check(p)
        out["consistent"] = ok
    if p.character is None:
        out["outcome"] = "no character"
        return out
    ss = semistable_supports(p)
    out["unstable_components"] = _labels(p, unstable_components(p))
    strata = []
    for A in sorted(ss, key=_key):
        st = stabilizer(p, A)
        strata.append(
            {
                "support": p.label(A),
                "class": classify_support(p, A).value,
                "stabilizer_dimension": st.dimension,
                "stabilizer_order": st.order,
            }
        )
    out["strata"] = strata
    ps = is_properly_stable(p)
    out["properly_stable"] = ps
    if not ps:
        out["outcome"] = "not properly stable"
        return out
    out["outcome"] = "properly stable"
    top, slices = max_stabilizer_locus(p)
    out["max_stabilizer"] = {"dimension": top, "slices": _labels(p, slices)}
    out["invariant_charts"] = _labels(p, invariant_charts(p))
    return out


def chow_ring_section(ctx: Context) -> dict:
    ring = ctx.ring
    pieces = {}
    for k in range(ring.degree_bound + 1):
        g = graded_piece_structure(ring, k)
        pieces[str(k)] = {"free_rank": g.free_rank, "torsion": list(g.torsion)}
    return {
        "variables": list(ring.variables),
        "relations": [g.format(ring.variables) for g in ring.relations],
        "degree_bound": ring.degree_bound,
        "graded_pieces": pieces,
    }


def strong_section(ctx: Context) -> dict:
    ctx.require_stable()
    p, ring, cat = ctx.p, ctx.ring, ctx.catalogue
    groups = strong_groups(ring, cat, p.dim)
    closure = ring_closure_check(
        p, ring, cat, ctx.scenario.presentation_data, ctx.scenario.assumptions, rational=ctx.opts.rational
    )
    gen = generically_strong_slices(p, ring)
    annotations = []
    for z in gen:
        row = z.serialize()
        try:
            row["conjectural_image"] = strong_pushforward(p, ctx.fan, z).serialize()
        except Exception as e:  # annotation only
            row["conjectural_image"] = None
            row["note"] = str(e)
        annotations.append(row)
    return {
        "catalogue": [z.serialize() for z in cat],
        "groups": {str(k): g.serialize() for k, g in groups.items()},
        "ring_closure": closure.serialize(),
        "generically_strong": annotations,
        "assumptions": list(ctx.scenario.assumptions),
    }


def _fan_summary(qf) -> dict:
    f = qf.fan
    return {
        "dimension": f.rank,
        "rays": [list(r) for r in f.rays],
        "maximal_cones": [list(c) for c in f.maximal],
        "non_simplicial": [list(c) for c in non_simplicial_cones(f)],
        "projective_plane": is_projective_plane_fan(f),
        "chow_groups": {
            str(k): {"free_rank": pr.free_rank, "torsion": pr.torsion}
            for k in range(f.rank + 1)
            for pr in [toric_chow_presentation(f, k)]
        },
    }


def pushforward_section(ctx: Context) -> dict:
    ctx.require_stable()
    p, ring, qf, cat = ctx.p, ctx.ring, ctx.fan, ctx.catalogue
    table = []
    for z in cat:
        row = z.serialize()
        if z.e is None:
            row["image"] = None
            row["note"] = "positive-dimensional generic stabilizer"
        else:
            img = strong_pushforward(p, qf, z)
            pres = toric_chow_presentation(qf.fan, qf.dim - z.codim)
            row["image"] = img.serialize()
            row["coordinates"] = [str(x) for x in pres.coordinates(img)]
        table.append(row)
    wd = {str(k): pushforward_well_defined_check(p, ring, qf, cat, k).serialize() for k in range(p.dim + 1)}
    inj = injectivity_analysis(p, ring, qf, cat)
    return {"fan": _fan_summary(qf), "table": table, "well_defined": wd, "injectivity": inj.serialize()}


def reichstein_section(ctx: Context) -> dict:
    ctx.require_stable()
    seq = ctx.sequence
    agree = reichstein_agreement_check(ctx.p, seq, ctx.ring, ctx.catalogue)
    out = {
        "length": len(seq.steps),
        "stabilizer_dimensions": [s.stabilizer_before for s in seq.steps] + [0],
        "fan_tower_refines": check_fan_tower(seq),
        "agreement": agree.serialize(),
    }
    if ctx.opts.trace:
        trace = []
        for i, s in enumerate(seq.steps):
            row = s.serialize()
            row["fan_rays"] = [list(r) for r in seq.fan(i + 1).fan.rays]
            row["fan_maximal_cones"] = len(seq.fan(i + 1).fan.maximal)
            trace.append(row)
        out["trace"] = trace
    return out


def _status(ok: bool, flagged: bool) -> str:
    if not ok:
        return "fail"
    return "flagged-assumption" if flagged else "pass"


def verdicts(ctx: Context, strong: dict, push: dict, reich: dict) -> dict:
    flagged = bool(ctx.scenario.assumptions)
    rc = strong["ring_closure"]
    pres_ok = rc.get("presentation_check", {"holds": True})["holds"]
    ring_ok = rc["closed"] and pres_ok
    wd_ok = all(v["holds"] for v in push["well_defined"].values())
    inj = push["injectivity"]
    inj_ok = inj["injective_on_candidate"] and (inj["bijective"] or not inj["simplicial"])
    ra_ok = reich["agreement"]["holds"] and reich["fan_tower_refines"]
    out = {
        "ring_structure": {"status": _status(ring_ok, flagged), "certificate": rc},
        "strong_pushforward": {"status": _status(wd_ok, flagged), "certificate": push["well_defined"]},
        "reichstein_agreement": {"status": _status(ra_ok, flagged), "certificate": reich["agreement"]},
        "injective_subring": {"status": _status(inj_ok, flagged), "certificate": inj},
    }
    if flagged:
        for v in out.values():
            v["assumptions"] = list(ctx.scenario.assumptions)
    return out


def build_report(sc: Scenario, command: str, opts: Options = Options()) -> dict:
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}; expected one of {COMMANDS}")
    ctx = Context(sc, opts)
    report: dict = {
        "scenario": sc.to_json(),
        "version": __version__,
        "command": command,
        "options": {"max_degree": opts.max_degree, "rational": opts.rational, "trace": opts.trace},
    }
    if command == "analyze":
        report["analyze"] = analyze_section(ctx)
    elif command == "chow-ring":
        report["chow_ring"] = chow_ring_section(ctx)
    elif command == "strong":
        report["strong"] = strong_section(ctx)
    elif command == "pushforward":
        report["pushforward"] = pushforward_section(ctx)
    elif command == "reichstein":
        report["reichstein"] = reichstein_section(ctx)
    else:
        report["analyze"] = analyze_section(ctx)
        ctx.require_stable()
        report["chow_ring"] = chow_ring_section(ctx)
        report["strong"] = strong_section(ctx)
        report["pushforward"] = pushforward_section(ctx)
        report["reichstein"] = reichstein_section(ctx)
        report["verdicts"] = verdicts(ctx, report["strong"], report["pushforward"], report["reichstein"])
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def all_verdicts_pass(report: dict) -> bool:
    v = report.get("verdicts")
    if v is None:
        return True
    return all(x["status"] != "fail" for x in v.values())


def replay_verdicts(report: dict) -> bool:
    """Recompute the verdicts from the echoed scenario and compare certificates."""
    from .scenario import scenario_from_dict

    if "verdicts" not in report:
        return True
    sc = scenario_from_dict(dict(report["scenario"]))
    opts = Options(**report["options"])
    fresh = json.loads(dumps(build_report(sc, "verify", opts)))
    return fresh["verdicts"] == json.loads(dumps(report))["verdicts"]


__all__ = [
    "COMMANDS",
    "VERDICTS",
    "Options",
    "ReichsteinError",
    "all_verdicts_pass",
    "build_report",
    "dumps",
    "replay_verdicts",
]
