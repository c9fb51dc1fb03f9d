"""Deterministic multi-peer simulation engine and scenario runner.

Peers exchange a document over point-to-point messages.  Editing never
blocks on obligations (compliance is checked after the fact, by audits),
so a peer is free to act against what it was granted; the logs make sure
such behavior is discoverable later.

Scenarios are plain JSON: a list of commands executed in order.  The
engine is fully deterministic, so one scenario always yields one trace.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .audit import (
    AuditMode,
    AuditReport,
    local_trust_assessment,
    report_to_dict,
)
from .errors import (
    DocumentNotHeldError,
    InternallyConflictingSetError,
    LogTrustError,
    MissingObligationError,
    NoPendingMessageError,
    ScenarioError,
    SelfShareError,
)
from .events import (
    Document,
    EDIT_VERBS,
    Log,
    LogRole,
    OBLIGATION_VERBS,
    Obligation,
    OriginKey,
    PeerClock,
    PerformedEdit,
    PerformedShare,
    Verb,
    _insert_events,
    comment_clock,
    empty_log,
    event_to_dict,
    make_comment_id,
    merge_logs,
    next_clock,
    remap_obligations_on_receipt,
)
from .obligations import ObligationAtom, validate_set
from .trust import DEFAULT_TRUST_MODEL, TrustModel, TrustTable

_VERB_RANK = {verb: rank for rank, verb in enumerate(Verb)}


def replay_comments(edit_log: Log) -> frozenset[tuple[str, str]]:
    """Derive the comment set from an edit log.

    Replays the log in canonical order: a comment event adds
    ``(author, "author:clock")``, a delete event removes the author's own
    most recent comment if they have one.  Merged logs and live editing
    agree because both go through this replay.
    """
    comments: set[tuple[str, str]] = set()
    for event in edit_log.entries:
        if event.verb is Verb.COMMENT:
            comments.add((event.by, make_comment_id(event.by, event.clock)))
        elif event.verb is Verb.DELETE_COMMENT:
            own = [cid for author, cid in comments if author == event.by]
            if own:
                target = max(own, key=comment_clock)
                comments.discard((event.by, target))
    return frozenset(comments)


@dataclass(frozen=True)
class Message:
    """One in-flight share: a document snapshot plus the sender's logs.

    The communication log is already filtered to the sender/recipient
    correspondence (see ``Simulation.share``).
    """

    sender: str
    recipient: str
    doc_id: str
    document: Document
    edit_log: Log
    comm_log: Log


@dataclass
class PeerDocState:
    """Everything one peer holds for one document."""

    document: Document
    edit_log: Log
    comm_log: Log


@dataclass
class PeerState:
    """One peer's whole world: its clock, workspace, and trust view.

    The clock counter is shared across all documents the peer touches,
    so every event the peer generates gets a globally fresh value.
    """

    id: str
    clock: PeerClock = field(default_factory=PeerClock)
    workspace: dict[str, PeerDocState] = field(default_factory=dict)
    trust: TrustTable = field(default_factory=dict)

    @property
    def clock_counter(self) -> int:
        return self.clock.value


class Simulation:
    """Deterministic engine: per-peer clocks, logs, and FIFO channels.

    Message channels are keyed by (sender, recipient, document) and
    delivered explicitly, so a scenario controls interleaving exactly.
    """

    def __init__(
        self,
        mode: AuditMode = AuditMode.PROSE,
        trust_model: TrustModel = DEFAULT_TRUST_MODEL,
    ):
        self.mode = mode
        self.trust_model = trust_model
        self._peers: dict[str, PeerState] = {}
        self._queues: dict[tuple[str, str, str], deque[Message]] = {}
        self._creators: dict[str, str] = {}
        self.reports: list[AuditReport] = []

    # -- state access -------------------------------------------------

    def peer(self, name: str) -> PeerState:
        if not name:
            raise ValueError("peer name must be non-empty")
        state = self._peers.get(name)
        if state is None:
            state = self._peers[name] = PeerState(name)
        return state

    def holds(self, peer: str, doc_id: str) -> bool:
        state = self._peers.get(peer)
        return state is not None and doc_id in state.workspace

    def peer_state(self, peer: str, doc_id: str) -> PeerDocState:
        state = self._peers.get(peer)
        if state is None or doc_id not in state.workspace:
            raise DocumentNotHeldError(f"{peer} does not hold {doc_id!r}")
        return state.workspace[doc_id]

    def pending(self, sender: str, recipient: str, doc_id: str) -> tuple[Message, ...]:
        return tuple(self._queues.get((sender, recipient, doc_id), ()))

    def peers(self) -> tuple[str, ...]:
        return tuple(sorted(p.id for p in self._peers.values() if p.workspace))

    def documents(self) -> tuple[str, ...]:
        return tuple(sorted(self._creators))

    def _refresh_document(self, state: PeerDocState) -> None:
        doc = state.document
        state.document = Document(doc.doc_id, doc.creator, replay_comments(state.edit_log))

    # -- commands -----------------------------------------------------

    def create_doc(self, peer: str, doc_id: str) -> int:
        """Create a document; the creating peer becomes its creator."""
        return self.batch(peer, doc_id, [Verb.CREATE])

    def edit(
        self,
        peer: str,
        doc_id: str,
        verb: Verb,
        ignore_obligations: bool = False,
    ) -> int:
        """Perform one local edit action at a fresh clock value.

        ``ignore_obligations`` is a scenario annotation only: edits are
        never blocked either way, the flag just marks deliberate
        disregard for readability of scenario files.
        """
        return self.batch(peer, doc_id, [verb], ignore_obligations)

    def batch(
        self,
        peer: str,
        doc_id: str,
        verbs: Sequence[Verb],
        ignore_obligations: bool = False,
    ) -> int:
        """Perform several distinct actions under a single clock value.

        A batch starting with ``create`` creates the document and applies
        the remaining verbs immediately, all at clock 1.  Verbs execute
        in canonical verb order so that replaying the log reproduces the
        same document state.
        """
        del ignore_obligations  # annotation only, never enforced
        if not verbs:
            raise ValueError("batch requires at least one verb")
        if len(set(verbs)) != len(verbs):
            raise ValueError("batch verbs must be distinct")
        ordered = sorted(verbs, key=_VERB_RANK.__getitem__)
        if Verb.CREATE in ordered:
            if doc_id in self._creators:
                raise LogTrustError(f"document {doc_id!r} already exists")
            self._creators[doc_id] = peer
            self.peer(peer).workspace[doc_id] = PeerDocState(
                Document(doc_id, peer), empty_log(LogRole.EDIT), empty_log(LogRole.COMM)
            )
        for verb in ordered:
            if verb is not Verb.CREATE and verb not in EDIT_VERBS:
                raise ValueError(f"{verb.value} is not an edit verb")
        state = self.peer_state(peer, doc_id)
        clock = next_clock(self.peer(peer))
        events = [PerformedEdit(clock, verb, peer) for verb in ordered]
        state.edit_log = _insert_events(state.edit_log, events)
        self._refresh_document(state)
        return clock

    def share(
        self,
        sender: str,
        doc_id: str,
        recipient: str,
        atoms: Sequence[ObligationAtom],
    ) -> int:
        """Share the document with obligations attached.

        The share event and its obligations all carry the sender's fresh
        clock value; the obligations' origin keys record that value
        permanently.  The outgoing message carries the sender's edit log
        and the part of its communication log that does not consist of
        the sender's own grants and shares to third parties.

        Obligations are mandatory except when sending a document back to
        a peer it was previously received from.
        """
        state = self.peer_state(sender, doc_id)
        if not recipient:
            raise ValueError("recipient must be non-empty")
        if recipient == sender:
            raise SelfShareError(f"{sender} cannot share {doc_id!r} with itself")
        atom_set = validate_set(atoms)
        if len(atom_set) != len(list(atoms)):
            raise ValueError("duplicate obligation atoms in share")
        for atom in atom_set:
            if atom.verb not in OBLIGATION_VERBS:
                raise ValueError(f"{atom.verb.value} cannot appear in an obligation")
        if not atom_set:
            sent_back = any(
                isinstance(e, PerformedShare) and e.by == recipient and e.to == sender
                for e in state.comm_log
            )
            if not sent_back:
                raise MissingObligationError(
                    f"share from {sender} to {recipient} must carry obligations"
                )
        clock = next_clock(self.peer(sender))
        origin = OriginKey(sender, recipient, clock)
        new_events: list = [PerformedShare(clock, sender, recipient)]
        for atom in sorted(atom_set, key=lambda a: (_VERB_RANK[a.verb], a.allow)):
            new_events.append(
                Obligation(clock, atom.verb, atom.allow, sender, recipient, origin)
            )
        state.comm_log = _insert_events(state.comm_log, new_events)

        # The recipient gets the full correspondence history relevant to
        # it, but not the sender's grants to other peers.
        outbound = tuple(
            e
            for e in state.comm_log
            if not (
                isinstance(e, (PerformedShare, Obligation))
                and e.by == sender
                and e.to != recipient
            )
        )
        message = Message(
            sender=sender,
            recipient=recipient,
            doc_id=doc_id,
            document=state.document,
            edit_log=state.edit_log,
            comm_log=Log(LogRole.COMM, outbound),
        )
        key = (sender, recipient, doc_id)
        self._queues.setdefault(key, deque()).append(message)
        return clock

    def deliver(self, recipient: str, sender: str, doc_id: str) -> int:
        """Receive the oldest pending message on one channel.

        Receiving draws one fresh clock value; every obligation in the
        message addressed to the recipient is re-stamped with it.  Logs
        are then merged (the recipient's own copies win duplicates) and
        the document state is rebuilt from the merged edit log.
        """
        queue = self._queues.get((sender, recipient, doc_id))
        if not queue:
            raise NoPendingMessageError(
                f"no pending message from {sender} to {recipient} for {doc_id!r}"
            )
        message = queue.popleft()
        clock = next_clock(self.peer(recipient))
        remapped = remap_obligations_on_receipt(message.comm_log, recipient, clock)
        if self.holds(recipient, doc_id):
            state = self.peer_state(recipient, doc_id)
            state.edit_log = merge_logs(state.edit_log, message.edit_log)
            state.comm_log = merge_logs(state.comm_log, remapped)
        else:
            state = PeerDocState(
                Document(doc_id, message.document.creator),
                message.edit_log,
                remapped,
            )
            self.peer(recipient).workspace[doc_id] = state
            self._creators.setdefault(doc_id, message.document.creator)
        self._refresh_document(state)
        return clock

    def audit(self, peer: str, doc_id: str) -> AuditReport:
        """Run a local trust assessment over everything the peer holds.

        Every audit is a fresh assessment of the full logs: trust starts
        at the maximum for all peers and one decrement is applied per
        violation instance found.  The result replaces the auditing
        peer's trust table.
        """
        state = self.peer_state(peer, doc_id)
        report = local_trust_assessment(
            state.edit_log,
            state.comm_log,
            state.document,
            peer,
            self.trust_model,
            mode=self.mode,
        )
        self.peer(peer).trust = dict(report.trust)
        self.reports.append(report)
        return report


def exec_edit(
    sim: Simulation,
    peer: str,
    doc_id: str,
    verb: Verb,
    ignore_obligations: bool = False,
) -> Simulation:
    """Apply one edit action to the simulation and return it."""
    sim.edit(peer, doc_id, verb, ignore_obligations)
    return sim


def exec_share(
    sim: Simulation,
    sender: str,
    to: str,
    doc_id: str,
    obligations: Sequence[ObligationAtom],
) -> Simulation:
    """Queue one share from ``sender`` to ``to`` and return the simulation."""
    sim.share(sender, doc_id, to, obligations)
    return sim


def exec_deliver(sim: Simulation, to: str, doc_id: str, sender: str) -> Simulation:
    """Deliver the oldest pending message on the channel and return the simulation."""
    sim.deliver(to, sender, doc_id)
    return sim


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

_OPS = ("create", "edit", "batch", "share", "deliver", "audit")


@dataclass(frozen=True)
class ScenarioCommand:
    """One parsed scenario step."""

    op: str
    peer: Optional[str] = None
    doc_id: Optional[str] = None
    verb: Optional[Verb] = None
    verbs: Optional[tuple[Verb, ...]] = None
    sender: Optional[str] = None
    to: Optional[str] = None
    obligations: Optional[tuple[ObligationAtom, ...]] = None
    ignore_obligations: bool = False

    def describe(self) -> dict[str, Any]:
        """Echo of the command as scenario JSON."""
        out: dict[str, Any] = {"op": self.op}
        if self.peer is not None:
            out["peer"] = self.peer
        if self.sender is not None:
            out["from"] = self.sender
        if self.to is not None:
            out["to"] = self.to
        if self.doc_id is not None:
            out["doc_id"] = self.doc_id
        if self.verb is not None:
            out["verb"] = self.verb.value
        if self.verbs is not None:
            out["verbs"] = [v.value for v in self.verbs]
        if self.obligations is not None:
            out["obligations"] = [
                {"verb": a.verb.value, "allow": a.allow} for a in self.obligations
            ]
        if self.ignore_obligations:
            out["ignore_obligations"] = True
        return out


def _require(data: dict, op: str, required: set[str], optional: set[str] = frozenset()):
    keys = data.keys() - {"op"}
    missing = required - keys
    if missing:
        raise ValueError(f"{op} requires fields {sorted(missing)}")
    extra = keys - required - optional
    if extra:
        raise ValueError(f"{op} does not accept fields {sorted(extra)}")


def _peer_name(data: dict, field_name: str) -> str:
    value = data[field_name]
    if not isinstance(value, str) or not value:
        raise ValueError(f"{field_name} must be a non-empty string")
    return value


def _verb(value: Any, allowed: frozenset[Verb], what: str) -> Verb:
    if not isinstance(value, str):
        raise ValueError(f"{what} must be a string")
    try:
        verb = Verb(value)
    except ValueError:
        raise ValueError(f"unknown verb {value!r}") from None
    if verb not in allowed:
        raise ValueError(f"{verb.value} is not allowed as {what}")
    return verb


def _ignore_flag(data: dict) -> bool:
    ignore = data.get("ignore_obligations", False)
    if not isinstance(ignore, bool):
        raise ValueError("ignore_obligations must be a boolean")
    return ignore


def parse_command(data: Any) -> ScenarioCommand:
    """Parse and structurally validate a single scenario command."""
    if not isinstance(data, dict):
        raise ValueError("command must be an object")
    op = data.get("op")
    if op not in _OPS:
        raise ValueError(f"unknown op {op!r}; expected one of {', '.join(_OPS)}")
    if op == "create":
        _require(data, op, {"peer", "doc_id"})
        return ScenarioCommand(
            op=op, peer=_peer_name(data, "peer"), doc_id=_peer_name(data, "doc_id")
        )
    if op == "edit":
        _require(data, op, {"peer", "doc_id", "verb"}, {"ignore_obligations"})
        return ScenarioCommand(
            op=op,
            peer=_peer_name(data, "peer"),
            doc_id=_peer_name(data, "doc_id"),
            verb=_verb(data["verb"], EDIT_VERBS, "an edit verb"),
            ignore_obligations=_ignore_flag(data),
        )
    if op == "batch":
        _require(data, op, {"peer", "doc_id", "verbs"}, {"ignore_obligations"})
        raw = data["verbs"]
        if not isinstance(raw, list) or not raw:
            raise ValueError("verbs must be a non-empty array")
        verbs: list[Verb] = []
        for i, item in enumerate(raw):
            allowed = EDIT_VERBS | {Verb.CREATE} if i == 0 else EDIT_VERBS
            what = "a batch verb" if i == 0 else "a batch verb after the first"
            verbs.append(_verb(item, allowed, what))
        if len(set(verbs)) != len(verbs):
            raise ValueError("batch verbs must be distinct")
        return ScenarioCommand(
            op=op,
            peer=_peer_name(data, "peer"),
            doc_id=_peer_name(data, "doc_id"),
            verbs=tuple(verbs),
            ignore_obligations=_ignore_flag(data),
        )
    if op == "share":
        _require(data, op, {"from", "to", "doc_id", "obligations"})
        raw = data["obligations"]
        if not isinstance(raw, list):
            raise ValueError("obligations must be an array")
        atoms: list[ObligationAtom] = []
        for item in raw:
            if not isinstance(item, dict) or item.keys() != {"verb", "allow"}:
                raise ValueError("each obligation must be {verb, allow}")
            if not isinstance(item["allow"], bool):
                raise ValueError("obligation allow must be a boolean")
            atoms.append(
                ObligationAtom(
                    _verb(item["verb"], OBLIGATION_VERBS, "an obligation verb"),
                    item["allow"],
                )
            )
        if len(set(atoms)) != len(atoms):
            raise ValueError("duplicate obligation atoms")
        try:
            validate_set(atoms)
        except InternallyConflictingSetError as exc:
            raise ValueError(str(exc)) from None
        sender = _peer_name(data, "from")
        to = _peer_name(data, "to")
        if sender == to:
            raise ValueError("cannot share with oneself")
        return ScenarioCommand(
            op=op,
            sender=sender,
            to=to,
            doc_id=_peer_name(data, "doc_id"),
            obligations=tuple(atoms),
        )
    if op == "deliver":
        _require(data, op, {"from", "to", "doc_id"})
        return ScenarioCommand(
            op=op,
            sender=_peer_name(data, "from"),
            to=_peer_name(data, "to"),
            doc_id=_peer_name(data, "doc_id"),
        )
    _require(data, op, {"peer", "doc_id"})
    return ScenarioCommand(
        op=op, peer=_peer_name(data, "peer"), doc_id=_peer_name(data, "doc_id")
    )


def parse_scenario(data: Any) -> tuple[str, tuple[ScenarioCommand, ...]]:
    """Parse a scenario document into its name and command list.

    Raises ScenarioError with the offending command index on any
    structural problem; nothing is executed here.
    """
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be an object")
    allowed = {"name", "peers", "commands"}
    extra = data.keys() - allowed
    if extra:
        raise ScenarioError(f"unexpected top-level fields {sorted(extra)}")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ScenarioError("name must be a string")
    raw_commands = data.get("commands")
    if not isinstance(raw_commands, list):
        raise ScenarioError("commands must be an array")
    declared = data.get("peers")
    if declared is not None and (
        not isinstance(declared, list)
        or not all(isinstance(p, str) and p for p in declared)
    ):
        raise ScenarioError("peers must be an array of non-empty strings")
    commands = []
    for i, raw in enumerate(raw_commands):
        try:
            command = parse_command(raw)
        except ValueError as exc:
            raise ScenarioError(str(exc), index=i) from None
        if declared is not None:
            used = {command.peer, command.sender, command.to} - {None}
            unknown = used - set(declared)
            if unknown:
                raise ScenarioError(
                    f"undeclared peer(s) {sorted(unknown)}", index=i
                )
        commands.append(command)
    return name, tuple(commands)


@dataclass(frozen=True)
class CommandSnapshot:
    """Full engine state right after one command."""

    index: int
    command: dict[str, Any]
    clock: int
    states: tuple[dict[str, Any], ...]
    queues: tuple[dict[str, Any], ...]
    report: Optional[dict[str, Any]] = None


@dataclass(frozen=True)
class ScenarioTrace:
    """Everything a scenario run produced, in execution order."""

    name: str
    mode: AuditMode
    trust_model: str
    snapshots: tuple[CommandSnapshot, ...]
    reports: tuple[AuditReport, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "mode": self.mode.value,
            "trust_model": self.trust_model,
            "snapshots": [
                {
                    "index": s.index,
                    "command": s.command,
                    "clock": s.clock,
                    "states": list(s.states),
                    "queues": list(s.queues),
                    "report": s.report,
                }
                for s in self.snapshots
            ],
        }


def _snapshot_states(sim: Simulation) -> tuple[dict[str, Any], ...]:
    held = sorted(
        (peer.id, doc_id, state)
        for peer in sim._peers.values()
        for doc_id, state in peer.workspace.items()
    )
    out = []
    for peer_id, doc_id, state in held:
        out.append(
            {
                "peer": peer_id,
                "doc": doc_id,
                "edit": [event_to_dict(e) for e in state.edit_log],
                "comm": [event_to_dict(e) for e in state.comm_log],
                "comments": sorted([author, cid] for author, cid in state.document.comments),
            }
        )
    return tuple(out)


def _snapshot_queues(sim: Simulation) -> tuple[dict[str, Any], ...]:
    out = []
    for (sender, recipient, doc_id) in sorted(sim._queues):
        queue = sim._queues[(sender, recipient, doc_id)]
        if not queue:
            continue
        out.append(
            {
                "from": sender,
                "to": recipient,
                "doc": doc_id,
                "messages": [
                    {
                        "edit": [event_to_dict(e) for e in m.edit_log],
                        "comm": [event_to_dict(e) for e in m.comm_log],
                    }
                    for m in queue
                ],
            }
        )
    return tuple(out)


def run_scenario(
    data: Any,
    *,
    mode: AuditMode = AuditMode.PROSE,
    trust_model: TrustModel = DEFAULT_TRUST_MODEL,
) -> ScenarioTrace:
    """Validate and execute a scenario, returning its full trace.

    Accepts either a scenario document (the JSON object shape) or a bare
    list of already parsed ScenarioCommand values.  All commands are
    checked structurally before the first one runs, so a malformed step
    never leaves a half-executed simulation behind.  Execution errors
    carry the index of the failing command.
    """
    if isinstance(data, (list, tuple)) and all(
        isinstance(c, ScenarioCommand) for c in data
    ):
        name, commands = "", tuple(data)
    else:
        name, commands = parse_scenario(data)
    sim = Simulation(mode=mode, trust_model=trust_model)
    snapshots: list[CommandSnapshot] = []
    for i, command in enumerate(commands):
        report_dict = None
        try:
            if command.op == "create":
                clock = sim.create_doc(command.peer, command.doc_id)
            elif command.op == "edit":
                clock = sim.edit(
                    command.peer,
                    command.doc_id,
                    command.verb,
                    command.ignore_obligations,
                )
            elif command.op == "batch":
                clock = sim.batch(
                    command.peer,
                    command.doc_id,
                    command.verbs,
                    command.ignore_obligations,
                )
            elif command.op == "share":
                clock = sim.share(
                    command.sender, command.doc_id, command.to, command.obligations
                )
            elif command.op == "deliver":
                clock = sim.deliver(command.to, command.sender, command.doc_id)
            else:
                report = sim.audit(command.peer, command.doc_id)
                report_dict = report_to_dict(report)
                clock = 0
        except (LogTrustError, ValueError) as exc:
            raise ScenarioError(str(exc), index=i) from exc
        snapshots.append(
            CommandSnapshot(
                index=i,
                command=command.describe(),
                clock=clock,
                states=_snapshot_states(sim),
                queues=_snapshot_queues(sim),
                report=report_dict,
            )
        )
    return ScenarioTrace(
        name=name,
        mode=mode,
        trust_model=trust_model.describe(),
        snapshots=tuple(snapshots),
        reports=tuple(sim.reports),
    )
