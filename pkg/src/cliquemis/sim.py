"""Synchronous CONGESTED-CLIQUE round engine with congestion auditing.

Every round, each ordered pair of nodes may carry at most one message whose
payload is at most ``MAX_WORDS`` integers in ``[0, n**2)`` plus a tag. The
engine counts rounds on a logical clock; the all-to-one routing primitive is
charged a configurable constant ``c_L`` instead of being simulated.

Two ways to drive a round:

* ``run_round`` calls a :class:`NodeProgram` per node and audits the outboxes.
* ``exchange`` delivers a pre-built :class:`MessageBatch` (columnar arrays).
  Algorithm code uses this form so large rounds stay vectorised; the audit
  is identical.
"""

from __future__ import annotations

import copy
import json
from dataclasses import asdict, dataclass
from enum import IntEnum
from pathlib import Path
from typing import Any, Iterable, Mapping, Protocol, Sequence

import numpy as np

MAX_WORDS = 3


class SimulationError(RuntimeError):
    """Base class for protocol violations; these indicate algorithm bugs."""


class CongestionViolation(SimulationError):
    pass


class WordSizeViolation(SimulationError):
    pass


class RoutingPreconditionViolation(SimulationError):
    def __init__(self, total: int, n: int, context: str = ""):
        self.total = total
        self.n = n
        self.context = context
        where = f" ({context})" if context else ""
        super().__init__(f"routing precondition violated{where}: {total} messages > n = {n}")


class OrderDependenceError(SimulationError):
    """A node program's result changed with the update order inside a round."""


class Tag(IntEnum):
    ID = 0
    POSITION = 1
    DEGREE = 2
    FLAG = 3
    EDGE = 4
    SELECTED = 5
    COVER = 6
    PRIORITY = 7
    JOIN = 8
    DATA = 9


@dataclass(frozen=True)
class Message:
    tag: Tag
    payload: tuple[int, ...] = ()


@dataclass
class MessageBatch:
    """Columnar messages: row ``i`` goes from ``src[i]`` to ``dst[i]``."""

    src: np.ndarray
    dst: np.ndarray
    tag: np.ndarray
    words: np.ndarray  # shape (m, w), w <= MAX_WORDS

    @classmethod
    def build(cls, src, dst, tag: int, words=None) -> "MessageBatch":
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.broadcast_to(np.asarray(dst, dtype=np.int64), src.shape).copy()
        if words is None:
            words = np.zeros((src.size, 0), dtype=np.int64)
        else:
            words = np.asarray(words, dtype=np.int64)
            if words.ndim == 1:
                words = words.reshape(-1, 1)
        return cls(src, dst, np.full(src.size, int(tag), dtype=np.int64), words)

    @classmethod
    def empty(cls) -> "MessageBatch":
        z = np.zeros(0, dtype=np.int64)
        return cls(z, z.copy(), z.copy(), np.zeros((0, 0), dtype=np.int64))

    @classmethod
    def concat(cls, batches: Sequence["MessageBatch"]) -> "MessageBatch":
        batches = [b for b in batches if len(b)]
        if not batches:
            return cls.empty()
        width = max(b.words.shape[1] for b in batches)
        words = [np.pad(b.words, ((0, 0), (0, width - b.words.shape[1]))) for b in batches]
        return cls(
            np.concatenate([b.src for b in batches]),
            np.concatenate([b.dst for b in batches]),
            np.concatenate([b.tag for b in batches]),
            np.concatenate(words),
        )

    def __len__(self) -> int:
        return int(self.src.size)

    def to(self, v: int) -> "MessageBatch":
        keep = self.dst == v
        return MessageBatch(self.src[keep], self.dst[keep], self.tag[keep], self.words[keep])


Outbox = Mapping[int, Message] | Iterable[tuple[int, Message]]
Inbox = list[tuple[int, Message]]


class NodeProgram(Protocol):
    """Behaviour of one simulated node.

    ``step`` must be a pure function of its arguments: it returns the new
    local state and an outbox of ``(destination, message)`` pairs (or a
    mapping). Two pairs with the same destination are a congestion violation.
    """

    def step(self, vertex: int, state: Any, inbox: Inbox, round_index: int) -> tuple[Any, Outbox]: ...


@dataclass
class RoundReport:
    round_index: int
    messages_sent: int
    max_pair_load: int
    primitive_invocations: int
    kind: str = "round"
    label: str = ""


@dataclass
class SimClock:
    c_L: int = 2
    logical_rounds: int = 0
    engine_rounds: int = 0
    primitive_invocations: int = 0

    def tick(self) -> None:
        self.engine_rounds += 1
        self.logical_rounds += 1

    def charge_primitive(self) -> None:
        self.primitive_invocations += 1
        self.logical_rounds += self.c_L


@dataclass
class BroadcastInbox:
    """What every node holds after an all-to-all broadcast: the same vector."""

    values: np.ndarray

    def as_dict(self) -> dict[int, int]:
        return {i: int(x) for i, x in enumerate(self.values.tolist())}


class CliqueEngine:
    def __init__(self, n: int, c_L: int = 2, check_order: bool = False):
        if n < 1:
            raise ValueError("engine needs at least one node")
        if c_L < 0:
            raise ValueError("c_L must be non-negative")
        self.n = n
        self.word_limit = n * n
        self.clock = SimClock(c_L=c_L)
        self.check_order = check_order
        self.reports: list[RoundReport] = []
        self.inboxes: list[Inbox] = [[] for _ in range(n)]
        self.last_broadcast: BroadcastInbox | None = None

    # -- auditing ---------------------------------------------------------

    def _check_words(self, words: np.ndarray) -> None:
        if words.ndim != 2 or words.shape[1] > MAX_WORDS:
            raise WordSizeViolation(f"payload wider than {MAX_WORDS} words")
        if words.size and (words.min() < 0 or words.max() >= self.word_limit):
            bad = words[(words < 0) | (words >= self.word_limit)].ravel()[0]
            raise WordSizeViolation(f"payload word {int(bad)} outside [0, {self.word_limit})")

    def _audit(self, batch: MessageBatch) -> int:
        if len(batch) == 0:
            return 0
        if batch.src.min() < 0 or batch.src.max() >= self.n or batch.dst.min() < 0 or batch.dst.max() >= self.n:
            raise SimulationError("message endpoint outside the clique")
        if np.any(batch.src == batch.dst):
            raise SimulationError("node addressed a message to itself")
        self._check_words(batch.words)
        pair = batch.src * self.n + batch.dst
        uniq, counts = np.unique(pair, return_counts=True)
        load = int(counts.max())
        if load > 1:
            hot = int(uniq[counts.argmax()])
            raise CongestionViolation(
                f"{load} messages from {hot // self.n} to {hot % self.n} in round {self.clock.engine_rounds}"
            )
        return load

    def _record(self, messages: int, load: int, kind: str, label: str, invocations: int = 0) -> RoundReport:
        rep = RoundReport(
            round_index=len(self.reports),
            messages_sent=messages,
            max_pair_load=load,
            primitive_invocations=invocations,
            kind=kind,
            label=label,
        )
        self.reports.append(rep)
        return rep

    # -- rounds -----------------------------------------------------------

    def exchange(self, batch: MessageBatch, label: str = "") -> tuple[MessageBatch, RoundReport]:
        """One synchronous round delivering ``batch``; returns it sorted by destination."""
        load = self._audit(batch)
        self.clock.tick()
        rep = self._record(len(batch), load, "round", label)
        if len(batch):
            order = np.lexsort((batch.src, batch.dst))
            batch = MessageBatch(batch.src[order], batch.dst[order], batch.tag[order], batch.words[order])
        return batch, rep

    def idle_round(self, label: str = "") -> RoundReport:
        return self.exchange(MessageBatch.empty(), label)[1]

    def broadcast_all(self, values, label: str = "") -> BroadcastInbox:
        """Every node sends its one word to every other node in a single round."""
        values = np.asarray(values, dtype=np.int64)
        if values.shape != (self.n,):
            raise ValueError(f"broadcast needs exactly one word per node, got shape {values.shape}")
        self._check_words(values.reshape(-1, 1))
        self.clock.tick()
        sent = self.n * (self.n - 1)
        self._record(sent, 1 if sent else 0, "broadcast", label)
        self.last_broadcast = BroadcastInbox(values.copy())
        return self.last_broadcast

    def lenzen_route(
        self,
        sources: Mapping[int, Sequence[Message]] | MessageBatch,
        dest: int,
        label: str = "",
    ) -> MessageBatch:
        """All-to-one delivery of at most ``n`` messages, charged ``c_L`` rounds.

        The charge is applied before validation, so a rejected call still
        costs ``c_L``.
        """
        if isinstance(sources, MessageBatch):
            batch = sources
        else:
            batch = _batch_from_mapping(sources, dest)
        if len(batch) and np.any(batch.dst != dest):
            raise SimulationError("lenzen_route batch addressed to a different node")
        self.clock.charge_primitive()
        self._record(len(batch), 0, "primitive", label, invocations=1)
        if len(batch) > self.n:
            raise RoutingPreconditionViolation(len(batch), self.n, label)
        self._check_words(batch.words)
        return batch

    def run_round(self, program: NodeProgram, states: list[Any], label: str = "") -> RoundReport:
        """Run ``program`` on every node, audit, and deliver for the next round.

        ``states`` is updated in place. Nodes are stepped in ascending id; with
        ``check_order`` the round is replayed in descending order and must agree.
        """
        if len(states) != self.n:
            raise ValueError("need one state per node")
        r = self.clock.engine_rounds
        inboxes = self.inboxes
        new_states, outboxes = self._step_all(program, states, inboxes, r, range(self.n))
        if self.check_order:
            alt_states, alt_out = self._step_all(program, copy.deepcopy(states), copy.deepcopy(inboxes), r,
                                                 range(self.n - 1, -1, -1))
            if alt_states != new_states or alt_out != outboxes:
                raise OrderDependenceError(f"round {r} depends on node update order")

        src, dst, tags, words = [], [], [], []
        for v, out in enumerate(outboxes):
            for d, msg in out:
                if len(msg.payload) > MAX_WORDS:
                    raise WordSizeViolation(f"node {v} sent {len(msg.payload)} words")
                src.append(v)
                dst.append(d)
                tags.append(int(msg.tag))
                words.append(tuple(msg.payload) + (0,) * (MAX_WORDS - len(msg.payload)))
        batch = MessageBatch(
            np.asarray(src, dtype=np.int64),
            np.asarray(dst, dtype=np.int64),
            np.asarray(tags, dtype=np.int64),
            np.asarray(words, dtype=np.int64).reshape(-1, MAX_WORDS),
        )
        load = self._audit(batch)
        self.clock.tick()
        rep = self._record(len(batch), load, "round", label)

        states[:] = new_states
        nxt: list[Inbox] = [[] for _ in range(self.n)]
        for v, out in enumerate(outboxes):
            for d, msg in out:
                nxt[d].append((v, msg))
        self.inboxes = nxt
        return rep

    @staticmethod
    def _step_all(program, states, inboxes, r, order):
        new_states = [None] * len(states)
        outboxes: list[list] = [None] * len(states)  # type: ignore[list-item]
        for v in order:
            s, out = program.step(v, states[v], list(inboxes[v]), r)
            new_states[v] = s
            pairs = out.items() if isinstance(out, Mapping) else out
            outboxes[v] = sorted(pairs, key=lambda dm: dm[0])
        return new_states, outboxes

    # -- reporting --------------------------------------------------------

    def audit_ok(self) -> bool:
        return all(rep.max_pair_load <= 1 for rep in self.reports)

    def write_reports(self, path: str | Path) -> None:
        write_jsonl(self.reports, path)


def _batch_from_mapping(sources: Mapping[int, Sequence[Message]], dest: int) -> MessageBatch:
    src, words, tags = [], [], []
    for v, msgs in sources.items():
        for msg in msgs:
            if len(msg.payload) > MAX_WORDS:
                raise WordSizeViolation(f"node {v} sent {len(msg.payload)} words")
            src.append(v)
            tags.append(int(msg.tag))
            words.append(tuple(msg.payload) + (0,) * (MAX_WORDS - len(msg.payload)))
    return MessageBatch(
        np.asarray(src, dtype=np.int64),
        np.full(len(src), dest, dtype=np.int64),
        np.asarray(tags, dtype=np.int64),
        np.asarray(words, dtype=np.int64).reshape(-1, MAX_WORDS),
    )


def write_jsonl(reports: Iterable[RoundReport], path: str | Path) -> None:
    with open(path, "w") as fh:
        for rep in reports:
            fh.write(json.dumps(asdict(rep)) + "\n")


def read_jsonl(path: str | Path) -> list[RoundReport]:
    with open(path) as fh:
        return [RoundReport(**json.loads(line)) for line in fh if line.strip()]
