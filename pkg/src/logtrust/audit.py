"""A-posteriori compliance checking over merged logs.

Actions are never blocked up front; instead any peer can replay the logs
it holds and ask, for every performed action, what the obligations in
its communication log said about that action at the time.  A forbidden
action is a violation, and each violation lowers the assessor's local
trust in the offender.

Two audit modes are provided.  ``PROSE`` applies the
latest-obligation-governs rule: the most recent obligation for the
peer/verb before the action decides, with denies winning ties.
``LITERAL`` condemns an action if any earlier forbid for the peer/verb
exists, regardless of later permits.  The modes agree unless a permit
was granted after a forbid for the same peer and verb.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import kernel
from .errors import MixedRolesError, UnknownCreatorError
from .events import (
    Document,
    Log,
    LogRole,
    Obligation,
    OriginKey,
    PerformedEdit,
    PerformedShare,
    Verb,
)
from .obligations import Decision, ObligationStatus
from .trust import (
    DEFAULT_TRUST_MODEL,
    TrustModel,
    TrustTable,
    apply_violations,
    initial_trust,
)

_VERB_RANK = {verb: rank for rank, verb in enumerate(Verb)}


class AuditMode(enum.Enum):
    PROSE = "prose"
    LITERAL = "literal"


def parse_audit_mode(text: str) -> AuditMode:
    try:
        return AuditMode(text.strip().lower())
    except ValueError:
        raise ValueError(
            f"unknown audit mode {text!r}; expected 'prose' or 'literal'"
        ) from None


@dataclass(frozen=True, slots=True)
class Violation:
    """One performed action that its governing obligation forbade."""

    offender: str
    verb: Verb
    action_clock: int
    governing: ObligationStatus
    grantor: str

    def __post_init__(self):
        if self.governing.decision is not Decision.FORBIDDEN:
            raise ValueError("a violation's governing status must be a forbid")
        if self.governing.clock is None or self.action_clock <= self.governing.clock:
            raise ValueError("the action must come after the forbid that condemns it")

    @property
    def forbid_clock(self) -> int:
        assert self.governing.clock is not None
        return self.governing.clock

    @property
    def origin(self) -> OriginKey:
        assert self.governing.source is not None
        return self.governing.source


@dataclass(frozen=True)
class AuditReport:
    """Everything a local audit produces: violations plus updated trust."""

    assessor: str
    doc_id: str
    mode: AuditMode
    violations: tuple[Violation, ...]
    trust: TrustTable = field(default_factory=dict)


def derive_creator(edit_log: Log) -> Optional[str]:
    """Creator according to an edit log: the actor of its create event.

    An empty log has no creator to derive (returns None); a non-empty log
    without a create event is malformed for auditing purposes.
    """
    if not edit_log.entries:
        return None
    for event in edit_log.entries:
        if isinstance(event, PerformedEdit) and event.verb is Verb.CREATE:
            return event.by
    raise UnknownCreatorError("edit log has entries but no create event")


def _peers_in_logs(edit_log: Log, comm_log: Log) -> set[str]:
    return (
        {e.by for e in edit_log.entries}
        | {e.by for e in comm_log.entries}
        | {e.to for e in comm_log.entries if not isinstance(e, PerformedEdit)}
    )


def detect_violations(
    edit_log: Log,
    comm_log: Log,
    doc: Optional[Document] = None,
    *,
    mode: AuditMode = AuditMode.PROSE,
) -> tuple[Violation, ...]:
    """Find every obligation-violating action recorded in the logs.

    Audits performed edits and performed shares by everyone except the
    document creator, who answers to nobody for their own document.  The
    creator is taken from ``doc`` when given and derived from the edit
    log's create event otherwise.  Obligation clocks and action clocks
    are comparable because incoming obligations were re-stamped with the
    receiving peer's clock, so both sides of each comparison live in the
    offender's local timeline.

    Results are ordered by offender, then action clock, then verb.
    """
    if edit_log.role is not LogRole.EDIT:
        raise MixedRolesError("first argument must be an edit log")
    if comm_log.role is not LogRole.COMM:
        raise MixedRolesError("second argument must be a communication log")
    creator = doc.creator if doc is not None else derive_creator(edit_log)

    peers = sorted(_peers_in_logs(edit_log, comm_log))
    peer_index = {peer: i for i, peer in enumerate(peers)}

    obligations = [e for e in comm_log.entries if isinstance(e, Obligation)]
    obl_to = [peer_index[o.to] for o in obligations]
    obl_verb = [_VERB_RANK[o.verb] for o in obligations]
    obl_allow = [int(o.allow) for o in obligations]
    obl_clock = [o.clock for o in obligations]

    actions: list[tuple[str, Verb, int]] = []
    for event in edit_log.entries:
        if event.by != creator:
            actions.append((event.by, event.verb, event.clock))
    for event in comm_log.entries:
        if isinstance(event, PerformedShare) and event.by != creator:
            actions.append((event.by, Verb.SHARE, event.clock))

    act_by = [peer_index[a[0]] for a in actions]
    act_verb = [_VERB_RANK[a[1]] for a in actions]
    act_clock = [a[2] for a in actions]

    governing = kernel.scan_governing(
        obl_to,
        obl_verb,
        obl_allow,
        obl_clock,
        act_by,
        act_verb,
        act_clock,
        literal=(mode is AuditMode.LITERAL),
    )

    violations = []
    for (by, verb, clock), obl_idx in zip(actions, governing):
        if obl_idx < 0:
            continue
        source = obligations[obl_idx]
        status = ObligationStatus(Decision.FORBIDDEN, source.origin, source.clock)
        violations.append(Violation(by, verb, clock, status, source.by))
    violations.sort(key=lambda v: (v.offender, v.action_clock, _VERB_RANK[v.verb]))
    return tuple(violations)


def violation_to_dict(violation: Violation) -> dict:
    origin = violation.origin
    return {
        "offender": violation.offender,
        "verb": violation.verb.value,
        "action_clock": violation.action_clock,
        "forbid_clock": violation.forbid_clock,
        "grantor": violation.grantor,
        "origin": {
            "grantor": origin.grantor,
            "grantee": origin.grantee,
            "share_clock": origin.share_clock,
        },
    }


def report_to_dict(report: "AuditReport") -> dict:
    return {
        "assessor": report.assessor,
        "doc_id": report.doc_id,
        "mode": report.mode.value,
        "violations": [violation_to_dict(v) for v in report.violations],
        "trust": {peer: report.trust[peer] for peer in sorted(report.trust)},
    }


def local_trust_assessment(
    edit_log: Log,
    comm_log: Log,
    doc: Optional[Document] = None,
    assessor: str = "",
    model: TrustModel = DEFAULT_TRUST_MODEL,
    *,
    mode: AuditMode = AuditMode.PROSE,
    prior_trust: Optional[Mapping[str, float]] = None,
) -> AuditReport:
    """Audit the logs and fold the findings into local trust values.

    Without ``prior_trust`` the assessment starts from full trust in every
    peer named in the logs; passing a previous assessment's trust table
    carries values forward instead.  Each violation instance applies one
    decrement under ``model``.
    """
    violations = detect_violations(edit_log, comm_log, doc, mode=mode)
    peers = _peers_in_logs(edit_log, comm_log)
    if assessor:
        peers.add(assessor)
    trust = initial_trust(sorted(peers), model)
    if prior_trust is not None:
        trust.update(prior_trust)
    trust = apply_violations(trust, violations, model)
    return AuditReport(
        assessor=assessor,
        doc_id=doc.doc_id if doc is not None else "",
        mode=mode,
        violations=violations,
        trust=trust,
    )
