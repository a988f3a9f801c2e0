"""respkit: responsibility modelling for coalition-of-systems risk analysis."""
from __future__ import annotations

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    AssocMode,
    BoundaryReport,
    ClosureConfig,
    ClosureDelta,
    ModelDiff,
    apply_diff,
    closure_delta,
    control_boundary,
    dependency_closure,
    diff,
    inter_org_relationships,
)
from .dsl import ParseResult, parse, parse_file, serialize  # noqa: E402
from .errors import RespkitError  # noqa: E402
from .hazard import ApplicabilityMatrix, HazardKeyword, Scope, enumerate_clauses, enumerate_targets  # noqa: E402
from .model import Entity, EntityKind, Model, RelKind, Relationship, add_entity, add_relationship, validate  # noqa: E402
from .register import Register, RiskClause, export_csv, init_register, merge, triage  # noqa: E402
from .report import boundary_report_md, diff_report, to_dot  # noqa: E402
