"""The thresholding engine: buckets, collections and move tasks.

An allegation with reveal threshold t is born into bucket t-1 (it waits
for t-1 more matches).  Entries carry per-bucket match tags, comparable
only inside one bucket; transitive tag equality groups allegations into
collections.  The engine is stateless: every call derives collections
from the bucket map and returns the next mandated move, or None at
saturation.  Rules, applied in a fixed order for cross-escrow
determinism:

1. (birth, applied by the caller) threshold t enters bucket t-1.
2. An unrevealed collection whose members all have threshold
   < Min + |A| first consolidates (every member gets an entry in its
   minimum occupied bucket), then steps down one bucket.  New-bucket
   moves are the only ones that cost a DVRF; consolidation reuses the
   tag already present in the target bucket.
3. Collections sharing a bucket with equal tags coalesce (implicit in
   the derivation).
4. A collection occupying bucket 0 is revealed; bucket 0 accumulates
   every revealed allegation.
5. A revealed collection of size s keeps full occupancy of buckets
   0..s even as it grows, so future matches keep being revealed.

Thresholds are derivable from the map itself: an unrevealed allegation
only ever occupies its birth bucket and lower ones, so
t = 1 + max(own buckets).

The reveal-or-not outcome equals the fixpoint oracle below (tested
exhaustively); the engine exists to get there with O(1) DVRFs per
allegation rather than O(N) comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from sae.errors import DuplicateEntry, InvariantViolation

# BucketMap: {bucket_index: {allegation_id_bytes: tag_bytes}}


@dataclass(frozen=True)
class BucketEntry:
    id: bytes
    tag: bytes


@dataclass(frozen=True)
class Task:
    id: bytes
    i: int


@dataclass(frozen=True)
class Collection:
    members: frozenset
    occupied: frozenset
    revealed: bool


class _UnionFind(dict):
    def find(self, x):
        root = x
        while self[root] != root:
            root = self[root]
        while self[x] != root:
            self[x], x = root, self[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self[max(ra, rb)] = min(ra, rb)


def derive_collections(buckets) -> list:
    """Group allegations into collections by transitive within-bucket tag
    equality; sorted by smallest member id for determinism."""
    uf = _UnionFind()
    for entries in buckets.values():
        for aid in entries:
            uf.setdefault(aid, aid)
        by_tag = {}
        for aid, tag in entries.items():
            by_tag.setdefault(tag, []).append(aid)
        for group in by_tag.values():
            for other in group[1:]:
                uf.union(group[0], other)
    groups = {}
    for aid in uf:
        groups.setdefault(uf.find(aid), set()).add(aid)
    out = []
    for members in groups.values():
        occupied = frozenset(i for i, entries in buckets.items()
                             if members & set(entries))
        out.append(Collection(frozenset(members), occupied, 0 in occupied))
    out.sort(key=lambda c: min(c.members))
    return out


def _check_invariants(buckets, collections):
    for i, entries in buckets.items():
        if i < 0:
            raise InvariantViolation(f"negative bucket index {i}")
        if not isinstance(entries, dict):
            raise InvariantViolation("bucket entries must map id -> tag")
    for col in collections:
        occ = sorted(col.occupied)
        if occ and occ[-1] - occ[0] + 1 != len(occ):
            raise InvariantViolation(
                f"collection {sorted(col.members)} occupies a gap: {occ}")


def _derived_threshold(buckets, aid) -> int:
    """Valid for unrevealed allegations: birth bucket is never left."""
    return 1 + max(i for i, entries in buckets.items() if aid in entries)


def bucketing(buckets) -> Optional[Task]:
    """Return the next mandated move, or None when no rule applies."""
    collections = derive_collections(buckets)
    _check_invariants(buckets, collections)

    # rule 2, lowest occupied bucket first (ties by smallest member id)
    unrevealed = sorted((c for c in collections if not c.revealed),
                        key=lambda c: (min(c.occupied), min(c.members)))
    for col in unrevealed:
        low = min(col.occupied)
        size = len(col.members)
        if any(_derived_threshold(buckets, aid) >= low + size
               for aid in col.members):
            continue
        missing_low = sorted(aid for aid in col.members
                             if aid not in buckets.get(low, {}))
        if missing_low:
            return Task(missing_low[0], low)
        if low > 0:
            return Task(min(col.members), low - 1)

    # rule 5: revealed collections keep every member in buckets 0..|A|
    for col in (c for c in collections if c.revealed):
        size = len(col.members)
        for i in range(0, size + 1):
            missing = sorted(aid for aid in col.members
                             if aid not in buckets.get(i, {}))
            if missing:
                return Task(missing[0], i)
    return None


def apply_task(buckets, task: Task, tag: bytes):
    """Add the entry the task mandates; functional over snapshots."""
    if task.id in buckets.get(task.i, {}):
        raise DuplicateEntry(f"{task.id!r} already in bucket {task.i}")
    out = {i: dict(entries) for i, entries in buckets.items()}
    out.setdefault(task.i, {})[task.id] = tag
    return out


def add_filing(buckets, aid: bytes, threshold: int, tag: bytes):
    """Rule 1: a fresh allegation forms a singleton in bucket t-1."""
    if threshold < 1:
        raise InvariantViolation("threshold must be at least 1")
    if any(aid in entries for entries in buckets.values()):
        raise DuplicateEntry(f"{aid!r} already filed")
    return apply_task(buckets, Task(aid, threshold - 1), tag)


def revealed_set(buckets) -> set:
    return set(buckets.get(0, {}))


def existing_tag(buckets, task: Task) -> Optional[bytes]:
    """Tag reuse: if the task's target bucket already holds a member of
    the task's collection, its tag is the match token (same meta, same
    bucket key), so no new DVRF is needed."""
    target = buckets.get(task.i, {})
    if not target:
        return None
    for col in derive_collections(buckets):
        if task.id in col.members:
            for aid in col.members:
                if aid in target:
                    return target[aid]
            return None
    return None


def canonical_bytes(buckets) -> bytes:
    """Stable serialization for persistence and cross-escrow comparison."""
    out = bytearray()
    for i in sorted(buckets):
        entries = buckets[i]
        if not entries:
            continue
        out += i.to_bytes(8, "big")
        out += len(entries).to_bytes(8, "big")
        for aid in sorted(entries):
            out += len(aid).to_bytes(4, "big") + aid
            tag = entries[aid]
            out += len(tag).to_bytes(4, "big") + tag
    return bytes(out)


def oracle_reveal_predicate(filings) -> set:
    """Brute-force reveal oracle: per meta-equality class, iterate
    S <- {a : t_a <= |S|} from the full class to a fixpoint; the
    surviving members are exactly the revealed ones."""
    classes = {}
    for aid, meta, t in filings:
        classes.setdefault(meta, []).append((aid, t))
    revealed = set()
    for members in classes.values():
        s = list(members)
        while True:
            kept = [(aid, t) for aid, t in s if t <= len(s)]
            if len(kept) == len(s):
                break
            s = kept
        revealed.update(aid for aid, _ in s)
    return revealed
