"""logtrust: a-posteriori usage auditing for decentrally shared documents.

Peers log what they do to a shared document and what they obliged each
other to; merging those logs lets any peer detect, after the fact, who
acted against an obligation, and lower its local trust in them.
"""

from .audit import (
    AuditMode,
    AuditReport,
    Violation,
    derive_creator,
    detect_violations,
    local_trust_assessment,
    parse_audit_mode,
    report_to_dict,
    violation_to_dict,
)
from .errors import (
    DocumentNotHeldError,
    DuplicateEventError,
    EmptyInputError,
    InternallyConflictingSetError,
    LogTrustError,
    MissingObligationError,
    MixedDocumentsError,
    MixedRolesError,
    NoPendingMessageError,
    OrderViolationError,
    ScenarioError,
    SelfShareError,
    UnknownCreatorError,
    UnorderedLogError,
)
from .events import (
    EDIT_VERBS,
    OBLIGATION_VERBS,
    Document,
    Log,
    LogRole,
    Obligation,
    OriginKey,
    PeerClock,
    PerformedEdit,
    PerformedShare,
    Verb,
    append_event,
    dedup_key,
    empty_log,
    event_from_dict,
    event_to_dict,
    log_from_dict,
    log_to_dict,
    make_comment_id,
    merge_logs,
    next_clock,
    remap_obligations_on_receipt,
    sort_key,
)
from .kernel import USING_COMPILED, backend_name, scan_governing
from .obligations import (
    UNSPECIFIED,
    Decision,
    ObligationAtom,
    ObligationStatus,
    Ordering,
    compare_atoms,
    compare_sets,
    detect_conflicts,
    effective_status,
    resolve,
    validate_set,
)
from .scengen import generate_scenario
from .simulator import (
    CommandSnapshot,
    Message,
    PeerDocState,
    PeerState,
    ScenarioCommand,
    ScenarioTrace,
    Simulation,
    exec_deliver,
    exec_edit,
    exec_share,
    parse_command,
    parse_scenario,
    replay_comments,
    run_scenario,
)
from .trust import (
    DEFAULT_TRUST_MODEL,
    MAX_TRUST,
    FixedStepTrust,
    MultiplicativeTrust,
    TrustModel,
    TrustTable,
    apply_violations,
    initial_trust,
    parse_trust_model,
)

__version__ = "0.1.0"

__all__ = [
    "AuditMode",
    "AuditReport",
    "Violation",
    "derive_creator",
    "detect_violations",
    "local_trust_assessment",
    "parse_audit_mode",
    "report_to_dict",
    "violation_to_dict",
    "LogTrustError",
    "DuplicateEventError",
    "OrderViolationError",
    "MixedRolesError",
    "UnorderedLogError",
    "UnknownCreatorError",
    "InternallyConflictingSetError",
    "EmptyInputError",
    "MissingObligationError",
    "DocumentNotHeldError",
    "SelfShareError",
    "NoPendingMessageError",
    "MixedDocumentsError",
    "ScenarioError",
    "Verb",
    "LogRole",
    "Log",
    "PerformedEdit",
    "PerformedShare",
    "Obligation",
    "OriginKey",
    "PeerClock",
    "Document",
    "EDIT_VERBS",
    "OBLIGATION_VERBS",
    "append_event",
    "empty_log",
    "merge_logs",
    "remap_obligations_on_receipt",
    "sort_key",
    "dedup_key",
    "event_to_dict",
    "event_from_dict",
    "log_to_dict",
    "log_from_dict",
    "make_comment_id",
    "next_clock",
    "USING_COMPILED",
    "backend_name",
    "scan_governing",
    "ObligationAtom",
    "Ordering",
    "Decision",
    "ObligationStatus",
    "UNSPECIFIED",
    "compare_atoms",
    "compare_sets",
    "detect_conflicts",
    "validate_set",
    "resolve",
    "effective_status",
    "generate_scenario",
    "Simulation",
    "Message",
    "PeerDocState",
    "PeerState",
    "ScenarioCommand",
    "ScenarioTrace",
    "CommandSnapshot",
    "exec_deliver",
    "exec_edit",
    "exec_share",
    "parse_command",
    "parse_scenario",
    "replay_comments",
    "run_scenario",
    "TrustModel",
    "TrustTable",
    "MultiplicativeTrust",
    "FixedStepTrust",
    "MAX_TRUST",
    "DEFAULT_TRUST_MODEL",
    "apply_violations",
    "initial_trust",
    "parse_trust_model",
    "__version__",
]
