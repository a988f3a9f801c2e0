#!/usr/bin/env python3
"""
Runs the as-is / to-be case study end to end on the bundled models:
- validates both models and contrasts them
- computes the support manager's control boundary and closure delta
- enumerates inter-organisational risk clauses and triages the two known ones
- exports the register as CSV
Prints a compact JSON summary; exits 0 when both triaged rows reach the export.
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys

_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir))
if _ROOT not in sys.path:
    sys.path.insert(0, _ROOT)

from respkit.analysis import closure_delta, control_boundary, diff  # noqa: E402
from respkit.dsl import parse_file  # noqa: E402
from respkit.hazard import Scope, enumerate_clauses  # noqa: E402
from respkit.register import Rating, export_csv, init_register, triage  # noqa: E402
from respkit.registry import resolve_model_path  # noqa: E402

KNOWN_RISKS = [
    {
        "target": "EC2Docs",
        "keyword": "Insufficient",
        "condition": "Documentation does not provide sufficient or adequate knowledge of EC2 infrastructure to maintain a commercial data acquisition systems",
        "consequences": "Data acquisition system is not maintainable on EC2. Timely resolution of support calls is not manageable on EC2. Liable for breach of SLA with customer.",
        "action": "Assess adequacy of documentation prior to migration and perform pilots to minimize risk. Renegotiate customer support SLAs with customer",
    },
    {
        "target": "EC2ServiceOffering",
        "keyword": "Changes",
        "condition": "EC2 services being used to support customers are withdrawn",
        "consequences": "Customer may have service disrupted or service degradation resulting in SLA liabilities. Increase in support calls. Liable to breach of contract for services sold that are undeliverable.",
        "action": "Find alternative way of provisioning service to customers. Consider implementing back-out plans to a different infrastructure.",
    },
]


def _load(name: str):
    result = parse_file(resolve_model_path(name))
    if not result.ok:
        raise SystemExit(f"{name}: {len(result.errors)} error(s)")
    return result.model


def run(agent: str) -> int:
    asis = _load("as-is")
    tobe = _load("to-be")
    d = diff(asis, tobe)
    boundary = control_boundary(tobe, agent)
    delta = closure_delta(asis, tobe, agent)

    register = init_register(enumerate_clauses(tobe, Scope.INTER_ORG))
    for risk in KNOWN_RISKS:
        clause_id = f"riskclause:{tobe.name}:{risk['target']}:{risk['keyword']}"
        register = triage(register, clause_id, risk["condition"], risk["consequences"], Rating.LOW, Rating.HIGH, risk["action"])

    rows = [r for r in csv.DictReader(io.StringIO(export_csv(register))) if r["Risk (Li/Sev)"]]
    compact = {
        "diff": {"added_entities": len(d.added_entities), "removed_entities": len(d.removed_entities)},
        "boundary": {
            "agent": agent,
            "out_of_control": sorted(f"{eid}@{org}" for eid, org in boundary.out_of_control),
        },
        "closure_delta": {"gained": sorted(delta.gained), "lost": sorted(delta.lost)},
        "register": {"clauses": len(register), "triaged_rows": [[r["Target"], r["Hazard Keyword"], r["Risk (Li/Sev)"]] for r in rows]},
    }
    print(json.dumps(compact, ensure_ascii=False, indent=2))
    return 0 if len(rows) == len(KNOWN_RISKS) else 2


if __name__ == "__main__":
    import argparse

    ap = argparse.ArgumentParser()
    ap.add_argument("--agent", default="SupportManager")
    args = ap.parse_args()
    raise SystemExit(run(args.agent))
