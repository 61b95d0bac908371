"""Bounded-synchronous round-based messaging.

Two backends behind one channel interface:

* ``SimNetwork`` -- in-process, deterministic given a seed, with drop and
  within-round delay (reorder) injection.  Used by tests, the scenario
  harness and the fuzzer.
* ``TcpNetwork`` (see tcpnet.py) -- real sockets with per-link
  authentication for the localhost performance runs.

Delivery rule: a message created in round i is delivered at the start of
round i+1; anything missing at the boundary is surfaced as None.  A
session groups the parties of one protocol flow (the n escrows, plus the
client for registration); each party calls ``advance()`` in lockstep.
The global bulletin board carries client-facing broadcasts; anonymous
entries are sequenced with seeded jitter and no sender field.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from typing import Optional

from sae.errors import TransportTimeout


@dataclass(frozen=True)
class RoundClock:
    current: int
    duration_bound: float


@dataclass(frozen=True)
class BoardEntry:
    round: int
    sender: Optional[int]  # None for anonymous entries
    payload: bytes
    seq: int


@dataclass
class RoundView:
    p2p: dict = field(default_factory=dict)    # sender -> body
    posts: dict = field(default_factory=dict)  # sender -> body


@dataclass(frozen=True)
class DropRule:
    """Drop every message from `sender` in sessions whose name starts with
    `session_prefix` (empty matches all), for session round `round`
    (None matches all rounds)."""
    sender: int
    session_prefix: str = ""
    round: Optional[int] = None

    def matches(self, session_name: str, rnd: int, sender: int) -> bool:
        return (sender == self.sender
                and session_name.startswith(self.session_prefix)
                and (self.round is None or rnd == self.round))


class SessionChannel:
    """One party's handle on one session."""

    def __init__(self, session: "_Session", me: int):
        self._session = session
        self.me = me
        self._outbox_p2p: dict = {}
        self._outbox_post: Optional[bytes] = None
        self._closed = False

    @property
    def n(self) -> int:
        return self._session.n

    def escrow_indices(self):
        return range(1, self._session.n + 1)

    def send(self, to: int, body: bytes):
        if to in self._outbox_p2p:
            raise ValueError("one message per recipient per round")
        self._outbox_p2p[to] = body

    def post(self, body: bytes):
        if self._outbox_post is not None:
            raise ValueError("one post per round")
        self._outbox_post = body

    def advance(self) -> RoundView:
        out_p2p, self._outbox_p2p = self._outbox_p2p, {}
        out_post, self._outbox_post = self._outbox_post, None
        return self._session.advance(self.me, out_p2p, out_post)

    def close(self):
        if not self._closed:
            self._closed = True
            self._session.resign(self.me)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


class _Session:
    """Round barrier plus message switch for a fixed participant set."""

    def __init__(self, network: "SimNetwork", name: str, participants, n: int):
        self.network = network
        self.name = name
        self.n = n
        self.participants = set(participants)
        self.cond = threading.Condition()
        self.round = 0
        self.dead: set = set()
        self.pending: dict = {}
        self.views: dict = {}

    def advance(self, me: int, p2p: dict, post: Optional[bytes]) -> RoundView:
        with self.cond:
            if me in self.dead:
                raise TransportTimeout(f"party {me} resigned from {self.name}")
            if me in self.pending:
                raise RuntimeError("double advance within one round")
            self.pending[me] = (p2p, post)
            my_round = self.round
            if self._all_arrived():
                self._flush()
            else:
                deadline = self.network.timeout
                while self.round == my_round:
                    if not self.cond.wait(timeout=deadline):
                        # round bound exceeded: non-arrived parties go dead,
                        # their messages become bottom
                        if self.round == my_round:
                            for p in self.participants - self.dead - set(self.pending):
                                self.dead.add(p)
                            self._flush()
                        break
            view = self.views[my_round].get(me, RoundView())
            return view

    def resign(self, me: int):
        with self.cond:
            self.dead.add(me)
            if me in self.pending:
                del self.pending[me]
            if self.participants - self.dead and self._all_arrived() and self.pending:
                self._flush()
            self.cond.notify_all()

    def _all_arrived(self) -> bool:
        return (self.participants - self.dead) <= set(self.pending)

    def _flush(self):
        rnd = self.round
        rng = random.Random((self.network.seed, self.name, rnd))
        views: dict = {p: RoundView() for p in self.participants}
        senders = sorted(self.pending)
        rng.shuffle(senders)  # delivery jitter within the round boundary
        for sender in senders:
            p2p, post = self.pending[sender]
            if self.network._dropped(self.name, rnd, sender):
                continue
            for to, body in p2p.items():
                if to in views:
                    views[to].p2p[sender] = body
            if post is not None:
                for p in views:
                    views[p].posts[sender] = post
        self.views[rnd] = views
        if rnd - 2 in self.views:
            del self.views[rnd - 2]  # nothing looks back further than one round
        self.pending = {}
        self.round = rnd + 1
        self.cond.notify_all()


class SimNetwork:
    """Deterministic in-process network: sessions, global board, faults."""

    def __init__(self, n: int, seed: int = 0, timeout: float = 30.0):
        self.n = n
        self.seed = seed
        self.timeout = timeout
        self._sessions: dict = {}
        self._lock = threading.Lock()
        self._board: list = []
        self._board_round = 0
        self._anon_buffer: list = []
        self._drop_rules: list = []

    # --- sessions ---

    def session(self, name: str, participants) -> None:
        with self._lock:
            if name not in self._sessions:
                self._sessions[name] = _Session(self, name, participants, self.n)

    def channel(self, name: str, me: int) -> SessionChannel:
        with self._lock:
            sess = self._sessions[name]
        if me not in sess.participants:
            raise ValueError(f"party {me} not in session {name}")
        return SessionChannel(sess, me)

    def open_session(self, name: str, participants, me: int) -> SessionChannel:
        self.session(name, participants)
        return self.channel(name, me)

    # --- fault injection ---

    def add_drop_rule(self, rule: DropRule):
        self._drop_rules.append(rule)

    def _dropped(self, session_name: str, rnd: int, sender: int) -> bool:
        return any(r.matches(session_name, rnd, sender) for r in self._drop_rules)

    # --- global bulletin board ---

    @property
    def clock(self) -> RoundClock:
        return RoundClock(self._board_round, self.timeout)

    def broadcast_post(self, payload: bytes, sender: int) -> None:
        with self._lock:
            self._board.append(BoardEntry(self._board_round, sender, payload, len(self._board)))

    def anon_send(self, payload: bytes) -> None:
        """Anonymous channel: buffered, then sequenced at the round seal
        with seeded jitter and no sender metadata."""
        with self._lock:
            self._anon_buffer.append(payload)

    def advance_round(self) -> None:
        """Seal the current global round; its entries become visible."""
        with self._lock:
            rng = random.Random((self.seed, "anon", self._board_round))
            buffered = list(self._anon_buffer)
            rng.shuffle(buffered)
            for payload in buffered:
                self._board.append(BoardEntry(self._board_round, None, payload, len(self._board)))
            self._anon_buffer = []
            self._board_round += 1

    def board_read(self, since: int = 0) -> list:
        """Entries with seq >= since from sealed rounds; identical for
        every reader."""
        with self._lock:
            return [e for e in self._board if e.seq >= since and e.round < self._board_round]
