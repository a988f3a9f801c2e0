"""
Exception hierarchy for respkit.

Model-content problems found by `validate()` or the DSL parser are returned as
records; the exceptions below are raised only when an operation's precondition
fails. Every error carries a stable `rule` identifier shared with those records.
"""
from __future__ import annotations

from typing import Sequence


class RespkitError(Exception):
    """Root of all respkit errors."""

    rule = "error"


class ModelError(RespkitError, ValueError):
    rule = "model-error"


class DuplicateId(ModelError):
    rule = "duplicate-id"


class InvalidIdentifier(ModelError):
    rule = "invalid-identifier"


class UnknownOwner(ModelError):
    rule = "unknown-owner"


class OwnerNotOrganization(ModelError):
    rule = "owner-not-organization"


class OrgWithOwner(ModelError):
    rule = "org-with-owner"


class UnknownEndpoint(ModelError):
    rule = "unknown-endpoint"


class KindMismatch(ModelError):
    rule = "kind-mismatch"

    def __init__(self, message: str, constraint: str = ""):
        super().__init__(message)
        self.constraint = constraint


class SelfLoop(ModelError):
    rule = "self-loop"


class DuplicateRelationship(ModelError):
    rule = "duplicate-relationship"


class AnnotationNotAllowed(ModelError):
    rule = "annotation-not-allowed"


class UnknownEntity(ModelError):
    rule = "unknown-entity"


class NotAnAgent(ModelError):
    rule = "not-an-agent"


class InvalidModel(ModelError):
    rule = "invalid-model"

    def __init__(self, message: str, violations: Sequence = ()):
        super().__init__(message)
        self.violations = list(violations)


class RegisterError(RespkitError, ValueError):
    rule = "register-error"


class DuplicateClauseId(RegisterError):
    rule = "duplicate-clause-id"


class UnknownClause(RegisterError):
    rule = "unknown-clause"


class EmptyField(RegisterError):
    rule = "empty-field"


class IncompleteTriage(RegisterError):
    rule = "incomplete-triage"


class RegisterFormatError(RegisterError):
    rule = "register-format"


class ConfigError(RespkitError, ValueError):
    rule = "config-error"
