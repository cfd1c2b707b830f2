"""JSON views of result objects."""
from __future__ import annotations

import json

from ..concentrate import ConcentrationEstimate
from ..geom import object_to_json, set_to_json
from ..incidence import IncidenceCount, KFreeResult, RichSet
from ..mpoly import poly_to_json
from ..partition import PartitionStep, PartitionTrace
from ..vanish import RelativeDegreeResult, VanishResult


def dumps(data) -> str:
    """Stable text form used for every file the harness writes."""
    return json.dumps(data, indent=2, sort_keys=False, allow_nan=False) + "\n"


def vanish_to_json(res: VanishResult) -> dict:
    return {
        "degree": res.degree,
        "present": res.present,
        "polynomial": poly_to_json(res.polynomial) if res.present else None,
        "kernel_dim": res.kernel_dim,
        "constraint_count": res.constraint_count,
        "monomial_count": res.monomial_count,
        "rank": res.rank,
    }


def relative_to_json(res: RelativeDegreeResult) -> dict:
    return {
        "degree": res.degree,
        "witness": poly_to_json(res.witness),
        "avoided": [object_to_json(w) for w in res.avoided],
        "kernel_dim": res.kernel_dim,
    }


def conc_to_json(est: ConcentrationEstimate) -> dict:
    return {
        "m": est.m,
        "value": str(est.value),
        "value_float": float(est.value),
        "oracle": est.oracle,
        "witness": [object_to_json(w) for w in est.witness],
        "witness_degree": est.witness_degree,
        "candidates": est.candidates,
    }


def incidence_to_json(inc: IncidenceCount, kfree: KFreeResult | None = None) -> dict:
    out = {"incidence_total": inc.total,
           "per_member": [{"member": object_to_json(t), "count": c} for t, c in inc.per_member.items()]}
    if kfree is not None:
        out["k_free"] = kfree.ok
        if not kfree.ok:
            out["violation"] = {"pair": [object_to_json(x) for x in kfree.pair],
                                "shared": [object_to_json(x) for x in kfree.shared]}
    return out


def rich_to_json(rs: RichSet) -> dict:
    return {"rich": {"r": rs.r, "count": len(rs.points)},
            "points": set_to_json(rs.points),
            "multiplicity": [rs.multiplicity[q] for q in rs.points]}


def step_to_json(st: PartitionStep) -> dict:
    return {
        "piece": st.piece,
        "children": list(st.children),
        "f": poly_to_json(st.f),
        "deg_f": max(st.f.total_degree, 0),
        "s_in": len(st.s_in), "s_out": len(st.s_out),
        "t_in": st.t_in.total_degree, "t_out": st.t_out.total_degree,
        "lhs": st.lhs, "inside": st.inside, "outside": st.outside,
        "error_term": st.error_term, "rhs": st.rhs, "holds": st.holds,
    }


def trace_to_json(tr: PartitionTrace) -> dict:
    return {
        "tau": tr.tau,
        "budget": tr.budget,
        "lhs": tr.lhs,
        "pieces_incidence": tr.pieces_incidence,
        "total_error": tr.total_error,
        "holds": tr.holds,
        "steps": [step_to_json(s) for s in tr.steps],
        "pieces": [{"id": p.id, "parent": p.parent, "s": set_to_json(p.s), "t": set_to_json(p.t)}
                   for p in sorted(tr.pieces, key=lambda p: p.id)],
    }
