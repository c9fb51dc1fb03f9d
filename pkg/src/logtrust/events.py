"""Events, logical clocks, and per-document logs.

Every peer keeps, per document, an edit log of local actions and a
communication log of share actions and obligations.  Entries are ordered
by per-peer Lamport counters.  Obligations travel with shares and are
re-stamped with the receiver's local clock on receipt, which is what
makes "was this action performed before or after the obligation arrived"
answerable by comparing plain clock values.

An obligation keeps a stable identity across that re-stamping: the
``OriginKey`` records who granted it, to whom, and the grantor-side clock
of the share event that carried it.  Log merging deduplicates on these
identities, so copies of the same history received along different paths
collapse to a single entry each.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import (
    DuplicateEventError,
    MixedRolesError,
    OrderViolationError,
    UnorderedLogError,
)


class Verb(enum.Enum):
    """Actions that can be performed on, or granted for, a document."""

    CREATE = "create"
    READ = "read"
    COMMENT = "comment"
    DELETE_COMMENT = "delete_comment"
    SHARE = "share"


# Rank used for deterministic ordering; follows declaration order.
_VERB_RANK = {verb: rank for rank, verb in enumerate(Verb)}

#: Verbs a peer may perform as plain edits (create is reserved for the
#: document creator's first action).
EDIT_VERBS = frozenset({Verb.READ, Verb.COMMENT, Verb.DELETE_COMMENT})

#: Verbs that can appear in obligations attached to a share.
OBLIGATION_VERBS = frozenset({Verb.READ, Verb.COMMENT, Verb.DELETE_COMMENT, Verb.SHARE})


class LogRole(enum.Enum):
    EDIT = "edit"
    COMM = "comm"


@dataclass
class PeerClock:
    """Per-peer Lamport counter.  Starts at 0; first tick yields 1."""

    value: int = 0

    def tick(self) -> int:
        """Draw the next clock value and persist it."""
        self.value += 1
        return self.value


def next_clock(peer_state) -> int:
    """Draw the next clock value from whatever holds a peer's counter.

    Accepts a ``PeerClock`` directly or any object exposing one as its
    ``clock`` attribute, such as a simulator peer state.
    """
    if isinstance(peer_state, PeerClock):
        return peer_state.tick()
    clock = getattr(peer_state, "clock", None)
    if isinstance(clock, PeerClock):
        return clock.tick()
    raise TypeError("next_clock needs a PeerClock or an object carrying one")


@dataclass(frozen=True, slots=True)
class OriginKey:
    """Stable identity of an obligation across receipt-time re-stamping.

    ``share_clock`` is the grantor-side clock of the share event the
    obligation was granted in, so two copies of one obligation compare
    equal no matter how their own clocks were rewritten downstream.
    """

    grantor: str
    grantee: str
    share_clock: int

    def __post_init__(self):
        if self.grantor == self.grantee:
            raise ValueError("grantor and grantee must differ")
        if self.share_clock < 1:
            raise ValueError("share_clock must be >= 1")


@dataclass(frozen=True, slots=True)
class PerformedEdit:
    """A local action a peer actually performed (edit logs only)."""

    clock: int
    verb: Verb
    by: str

    def __post_init__(self):
        if self.clock < 1:
            raise ValueError("clock must be >= 1")
        if not self.by:
            raise ValueError("by must be non-empty")
        if self.verb is Verb.SHARE:
            raise ValueError("share actions belong in the communication log")


@dataclass(frozen=True, slots=True)
class PerformedShare:
    """A share action a peer actually performed (communication logs only)."""

    clock: int
    by: str
    to: str

    def __post_init__(self):
        if self.clock < 1:
            raise ValueError("clock must be >= 1")
        if not self.by or not self.to:
            raise ValueError("by and to must be non-empty")
        if self.by == self.to:
            raise ValueError("cannot share with oneself")


@dataclass(frozen=True, slots=True)
class Obligation:
    """A usage-policy event granted within a share.

    ``allow=False`` encodes the forbidding form of the verb ("may not
    comment").  ``by`` is the grantor and ``to`` the grantee; both always
    match ``origin``.
    """

    clock: int
    verb: Verb
    allow: bool
    by: str
    to: str
    origin: OriginKey

    def __post_init__(self):
        if self.clock < 1:
            raise ValueError("clock must be >= 1")
        if not self.by or not self.to:
            raise ValueError("by and to must be non-empty")
        if self.by == self.to:
            raise ValueError("grantor and grantee must differ")
        if self.origin.grantor != self.by or self.origin.grantee != self.to:
            raise ValueError("origin does not match grantor/grantee")


Event = Union[PerformedEdit, PerformedShare, Obligation]


def is_performed(event: Event) -> bool:
    """True for events a peer actually executed (as opposed to obligations)."""
    return isinstance(event, (PerformedEdit, PerformedShare))


def sort_key(event: Event):
    """Canonical total order: clock, then actor, then variant, then payload.

    Obligations sort before performed shares, which sort before edits, at
    equal (clock, actor).  The trailing payload fields only break ties
    between distinct events sharing all leading components.
    """
    if isinstance(event, Obligation):
        return (
            event.clock,
            event.by,
            0,
            _VERB_RANK[event.verb],
            int(event.allow),
            event.to,
            event.origin.share_clock,
        )
    if isinstance(event, PerformedShare):
        return (event.clock, event.by, 1, 0, 0, event.to, 0)
    return (event.clock, event.by, 2, _VERB_RANK[event.verb], 0, "", 0)


def dedup_key(event: Event):
    """Identity used for log deduplication.

    Performed events are identified by actor and clock; obligations by
    their origin plus verb and polarity, because an obligation's own clock
    differs between logs after receipt-time re-stamping.
    """
    if isinstance(event, Obligation):
        o = event.origin
        return ("obl", o.grantor, o.grantee, o.share_clock, event.verb, event.allow)
    if isinstance(event, PerformedShare):
        return ("share", event.by, event.to, event.clock)
    return ("edit", event.by, event.clock, event.verb)


def _role_of(event: Event) -> LogRole:
    return LogRole.EDIT if isinstance(event, PerformedEdit) else LogRole.COMM


@dataclass(frozen=True)
class Log:
    """An ordered, deduplicated sequence of events with a fixed role.

    Edit logs hold only performed edits; communication logs hold performed
    shares and obligations.  Instances are immutable; mutating operations
    return new logs.
    """

    role: LogRole
    entries: tuple[Event, ...] = ()

    def __post_init__(self):
        for event in self.entries:
            if _role_of(event) is not self.role:
                raise MixedRolesError(
                    f"{type(event).__name__} does not belong in a {self.role.value} log"
                )

    @classmethod
    def from_events(cls, role: LogRole, events: Iterable[Event]) -> "Log":
        """Build a log from events in any order, rejecting duplicates."""
        ordered = sorted(events, key=sort_key)
        seen = set()
        for event in ordered:
            key = dedup_key(event)
            if key in seen:
                raise DuplicateEventError(f"duplicate event identity {key}")
            seen.add(key)
        return cls(role, tuple(ordered))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def empty_log(role: LogRole) -> Log:
    return Log(role, ())


def append_event(log: Log, event: Event) -> Log:
    """Append a peer's own freshly generated event.

    The event lands at its total-order position.  Raises
    DuplicateEventError if its identity is already present, and
    OrderViolationError if the acting peer already has an event in this
    log with an equal or later clock (own clocks must strictly increase
    when events are appended one at a time; the simulator stamps
    same-tick groups through a dedicated path instead).
    """
    if _role_of(event) is not log.role:
        raise MixedRolesError(
            f"{type(event).__name__} does not belong in a {log.role.value} log"
        )
    key = dedup_key(event)
    for existing in log.entries:
        if dedup_key(existing) == key:
            raise DuplicateEventError(f"duplicate event identity {key}")
    latest_own = max(
        (e.clock for e in log.entries if e.by == event.by), default=0
    )
    if event.clock <= latest_own:
        raise OrderViolationError(
            f"{event.by} appended clock {event.clock} after own clock {latest_own}"
        )
    return _insert_events(log, [event])


def _insert_events(log: Log, events: Iterable[Event]) -> Log:
    """Insert events at their sorted positions without order checks.

    Still rejects duplicate identities.  Used by the simulator for groups
    of events stamped with one clock tick (a share plus its obligations,
    or a batch of edits).
    """
    merged = list(log.entries)
    seen = {dedup_key(e) for e in merged}
    for event in events:
        if _role_of(event) is not log.role:
            raise MixedRolesError(
                f"{type(event).__name__} does not belong in a {log.role.value} log"
            )
        key = dedup_key(event)
        if key in seen:
            raise DuplicateEventError(f"duplicate event identity {key}")
        seen.add(key)
        merged.append(event)
    merged.sort(key=sort_key)
    return Log(log.role, tuple(merged))


def merge_logs(local: Log, received: Log) -> Log:
    """Deduplicated union of two logs of the same role.

    When both logs carry an event with the same identity, the local copy
    wins.  That matters for obligations: the grantor's log keeps the
    grantor-side clock while every other copy in circulation carries the
    grantee's receipt clock, and a peer must not have its settled copy
    rewritten by a late-arriving duplicate.

    Merging is idempotent, and for logs whose shared identities carry
    identical events (the only case arising from normal exchange) it is
    also order-insensitive.
    """
    if local.role is not received.role:
        raise MixedRolesError(
            f"cannot merge a {received.role.value} log into a {local.role.value} log"
        )
    seen = {dedup_key(e) for e in local.entries}
    merged = list(local.entries)
    for event in received.entries:
        if dedup_key(event) not in seen:
            merged.append(event)
            seen.add(dedup_key(event))
    merged.sort(key=sort_key)
    return Log(local.role, tuple(merged))


def remap_obligations_on_receipt(received: Log, receiver: str, receiver_clock: int) -> Log:
    """Re-stamp incoming obligations addressed to the receiver.

    Every obligation with ``to == receiver`` gets ``receiver_clock`` (one
    value per receipt, drawn from the receiver's counter).  Obligations
    addressed to other peers, and all performed events, keep their clocks.
    Origin keys are never touched, so identities survive.
    """
    if received.role is not LogRole.COMM:
        raise MixedRolesError("only communication logs carry obligations to remap")
    remapped = []
    for event in received.entries:
        if isinstance(event, Obligation) and event.to == receiver:
            remapped.append(
                Obligation(
                    clock=receiver_clock,
                    verb=event.verb,
                    allow=event.allow,
                    by=event.by,
                    to=event.to,
                    origin=event.origin,
                )
            )
        else:
            remapped.append(event)
    remapped.sort(key=sort_key)
    return Log(LogRole.COMM, tuple(remapped))


@dataclass(frozen=True)
class Document:
    """A shared document: identity, creator, and its set of comments.

    Content is modeled as the comment set alone; comments are identified
    by ``(author, comment_id)`` where the id embeds the author-side clock
    of the comment action.
    """

    doc_id: str
    creator: str
    comments: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")
        if not self.creator:
            raise ValueError("creator must be non-empty")

    def with_comment(self, author: str, comment_id: str) -> "Document":
        return Document(self.doc_id, self.creator, self.comments | {(author, comment_id)})

    def without_comment(self, author: str, comment_id: str) -> "Document":
        return Document(self.doc_id, self.creator, self.comments - {(author, comment_id)})

    def union_comments(self, other: "Document") -> "Document":
        if other.doc_id != self.doc_id or other.creator != self.creator:
            raise ValueError("cannot union comments of different documents")
        return Document(self.doc_id, self.creator, self.comments | other.comments)


def make_comment_id(author: str, clock: int) -> str:
    return f"{author}:{clock}"


def comment_clock(comment_id: str) -> int:
    """Author-side clock embedded in a comment id."""
    return int(comment_id.rsplit(":", 1)[1])


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def event_to_dict(event: Event) -> dict:
    """Serialize one event.  Field order is part of the wire format."""
    if isinstance(event, PerformedEdit):
        return {
            "clock": event.clock,
            "kind": "edit",
            "verb": event.verb.value,
            "by": event.by,
        }
    if isinstance(event, PerformedShare):
        return {
            "clock": event.clock,
            "kind": "share",
            "verb": Verb.SHARE.value,
            "by": event.by,
            "to": event.to,
        }
    return {
        "clock": event.clock,
        "kind": "obligation",
        "verb": event.verb.value,
        "allow": event.allow,
        "by": event.by,
        "to": event.to,
        "origin": {
            "grantor": event.origin.grantor,
            "grantee": event.origin.grantee,
            "share_clock": event.origin.share_clock,
        },
    }


_FIELDS_BY_KIND = {
    "edit": {"clock", "kind", "verb", "by"},
    "share": {"clock", "kind", "verb", "by", "to"},
    "obligation": {"clock", "kind", "verb", "allow", "by", "to", "origin"},
}


def event_from_dict(data: dict, where: str = "event") -> Event:
    """Parse one serialized event, validating shape and field values."""
    if not isinstance(data, dict):
        raise ValueError(f"{where}: expected an object")
    kind = data.get("kind")
    if kind not in _FIELDS_BY_KIND:
        raise ValueError(f"{where}: unknown kind {kind!r}")
    expected = _FIELDS_BY_KIND[kind]
    missing = expected - data.keys()
    if missing:
        raise ValueError(f"{where}: missing fields {sorted(missing)}")
    extra = data.keys() - expected
    if extra:
        raise ValueError(f"{where}: unexpected fields {sorted(extra)}")
    clock = data["clock"]
    if not isinstance(clock, int) or isinstance(clock, bool) or clock < 1:
        raise ValueError(f"{where}: clock must be a positive integer")
    try:
        verb = Verb(data["verb"])
    except ValueError:
        raise ValueError(f"{where}: unknown verb {data['verb']!r}") from None
    by = data["by"]
    if not isinstance(by, str) or not by:
        raise ValueError(f"{where}: by must be a non-empty string")
    try:
        if kind == "edit":
            return PerformedEdit(clock=clock, verb=verb, by=by)
        to = data["to"]
        if not isinstance(to, str) or not to:
            raise ValueError(f"{where}: to must be a non-empty string")
        if kind == "share":
            if verb is not Verb.SHARE:
                raise ValueError(f"{where}: share events must carry verb 'share'")
            return PerformedShare(clock=clock, by=by, to=to)
        allow = data["allow"]
        if not isinstance(allow, bool):
            raise ValueError(f"{where}: allow must be a boolean")
        origin = data["origin"]
        if (
            not isinstance(origin, dict)
            or origin.keys() != {"grantor", "grantee", "share_clock"}
            or not isinstance(origin.get("grantor"), str)
            or not isinstance(origin.get("grantee"), str)
            or not isinstance(origin.get("share_clock"), int)
            or isinstance(origin.get("share_clock"), bool)
        ):
            raise ValueError(f"{where}: origin must carry grantor, grantee, share_clock")
        return Obligation(
            clock=clock,
            verb=verb,
            allow=allow,
            by=by,
            to=to,
            origin=OriginKey(origin["grantor"], origin["grantee"], origin["share_clock"]),
        )
    except ValueError as exc:
        if str(exc).startswith(where):
            raise
        raise ValueError(f"{where}: {exc}") from None


def log_to_dict(log: Log, doc_id: str) -> dict:
    """Serialize a log with its document envelope."""
    return {
        "doc_id": doc_id,
        "role": log.role.value,
        "events": [event_to_dict(e) for e in log.entries],
    }


def log_from_dict(data: dict, where: str = "log") -> tuple[str, Log]:
    """Parse a serialized log file payload into ``(doc_id, Log)``.

    Events must already be in canonical order and free of duplicate
    identities; files are validated, not repaired.
    """
    if not isinstance(data, dict):
        raise ValueError(f"{where}: expected an object")
    expected = {"doc_id", "role", "events"}
    if data.keys() != expected:
        raise ValueError(f"{where}: expected exactly the fields {sorted(expected)}")
    doc_id = data["doc_id"]
    if not isinstance(doc_id, str) or not doc_id:
        raise ValueError(f"{where}: doc_id must be a non-empty string")
    try:
        role = LogRole(data["role"])
    except ValueError:
        raise ValueError(f"{where}: role must be 'edit' or 'comm'") from None
    raw_events = data["events"]
    if not isinstance(raw_events, list):
        raise ValueError(f"{where}: events must be an array")
    events = [
        event_from_dict(raw, where=f"{where}: events[{i}]")
        for i, raw in enumerate(raw_events)
    ]
    seen = set()
    previous = None
    for i, event in enumerate(events):
        key = dedup_key(event)
        if key in seen:
            raise DuplicateEventError(f"{where}: events[{i}] duplicates an earlier event")
        seen.add(key)
        current = sort_key(event)
        if previous is not None and current < previous:
            raise UnorderedLogError(f"{where}: events[{i}] is out of order")
        previous = current
    return doc_id, Log(role, tuple(events))
