"""Entitlement trees and exact quota checking.

An apportionment instance is a rooted tree in which every node carries an
entitlement relative to its parent: sibling entitlements sum to exactly 1,
and the root's entitlement is 1.  Allocating a house of ``h`` seats means
giving every node an integer seat count such that the root receives all
``h`` seats and every internal node's seats equal the sum of its children's.

A node's share of the whole house is the product of entitlements along the
path from the root (its *relative entitlement*).  Quota bounds compare a
node against **every** ancestor, not just the root: the lower quota is the
largest floor of (share relative to ancestor) x (ancestor's seats) over all
ancestors, the upper quota the smallest such ceiling.  A weaker, root-only
variant is available via :class:`QuotaMode`.

All arithmetic here is exact.  Entitlements and shares are
:class:`fractions.Fraction` values; comparisons never touch floating point,
so ties and quota boundaries are decided soundly.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence


class InvalidInstanceError(ValueError):
    """Raised when an operation requires a valid instance but got errors."""

    def __init__(self, errors: Sequence["StructuralError"]):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in errors))


# Error kinds reported by validate_instance / the JSON loaders.
NON_TREE = "NonTree"
WEIGHT_OUT_OF_RANGE = "WeightOutOfRange"
CHILDREN_WEIGHTS_NOT_NORMALIZED = "ChildrenWeightsNotNormalized"


@dataclass(frozen=True)
class StructuralError:
    kind: str
    node: int | None
    message: str

    def __str__(self) -> str:
        where = "" if self.node is None else f" (node {self.node})"
        return f"{self.kind}{where}: {self.message}"


_WEIGHT_RE = re.compile(r"(\d+)(?:/(\d+))?")


def parse_weight(text: str) -> Fraction:
    """Parse an entitlement written as ``"p"`` or ``"p/q"``.

    Only non-negative integer numerators and positive integer denominators
    are accepted; decimals are rejected so that entitlements stay exact.
    """
    m = _WEIGHT_RE.fullmatch(text.strip())
    if m is None:
        raise ValueError(f"not a rational 'p' or 'p/q' string: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in weight: {text!r}")
    return Fraction(num, den)


class Instance:
    """A rooted entitlement tree with dense node ids ``0..n-1``.

    ``parents[0]`` is ``None`` and ``parents[i]`` is the parent id of node
    ``i``.  ``weights[i]`` is node ``i``'s entitlement relative to its
    parent (the root's is 1).  ``children`` keeps each node's children in
    input order; that order drives deterministic tie-breaking everywhere.

    Instances are immutable after construction and safe to share between
    threads.  Construction does not validate; see :func:`validate_instance`.
    """

    __slots__ = ("parents", "weights", "children", "_shares", "_fast", "_order")

    def __init__(
        self,
        parents: Sequence[int | None],
        weights: Sequence[Fraction | int | str],
        children: Sequence[Sequence[int]] | None = None,
    ):
        self.parents = tuple(parents)
        self.weights = tuple(
            w if isinstance(w, Fraction) else
            parse_weight(w) if isinstance(w, str) else Fraction(w)
            for w in weights
        )
        n = len(self.parents)
        if n == 0:
            raise ValueError("instance needs at least the root node")
        if len(self.weights) != n:
            raise ValueError("parents and weights must have equal length")
        if children is None:
            kids: list[list[int]] = [[] for _ in range(n)]
            for i, p in enumerate(self.parents):
                if i != 0 and isinstance(p, int) and 0 <= p < n:
                    kids[p].append(i)
            self.children = tuple(tuple(k) for k in kids)
        else:
            self.children = tuple(tuple(k) for k in children)
        self._shares: tuple[Fraction, ...] | None = None
        self._fast = None
        self._order: tuple[int, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.parents)

    def is_leaf(self, i: int) -> bool:
        return not self.children[i]

    def ancestors(self, i: int) -> Iterator[int]:
        """Yield ancestors of ``i`` from parent up to the root.

        Mirrors the convention that the root is its own (only) ancestor:
        ``ancestors(0)`` yields ``0``.
        """
        if i == 0:
            yield 0
            return
        p = self.parents[i]
        while p is not None:
            yield p
            p = self.parents[p]

    def bfs_order(self) -> tuple[int, ...]:
        """Node ids in breadth-first order from the root (parents first)."""
        if self._order is None:
            order = [0]
            for i in order:
                order.extend(self.children[i])
            self._order = tuple(order)
        return self._order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.parents == other.parents
            and self.weights == other.weights
            and self.children == other.children
        )

    def __hash__(self) -> int:
        return hash((self.parents, self.weights, self.children))

    def __repr__(self) -> str:
        return f"Instance(n={self.n})"


def validate_instance(inst: Instance) -> list[StructuralError]:
    """Check every structural invariant; an empty list means the instance is ok.

    Reports one entry per violated invariant with the offending node:
    ``NonTree`` for parent/cycle/connectivity defects, ``WeightOutOfRange``
    for entitlements outside (0, 1] (or a root entitlement other than 1),
    and ``ChildrenWeightsNotNormalized`` with the exact sibling sum.
    """
    errors: list[StructuralError] = []
    n = inst.n

    if inst.parents[0] is not None:
        errors.append(StructuralError(NON_TREE, 0, "root must have no parent"))
    for i in range(1, n):
        p = inst.parents[i]
        if p is None:
            errors.append(StructuralError(NON_TREE, i, "non-root node without a parent"))
        elif not isinstance(p, int) or isinstance(p, bool) or not 0 <= p < n:
            errors.append(StructuralError(NON_TREE, i, f"parent id {p!r} out of range"))
        elif p == i:
            errors.append(StructuralError(NON_TREE, i, "node is its own parent"))

    # children lists must partition 1..n-1 consistently with the parent map
    seen: set[int] = set()
    for i in range(n):
        for c in inst.children[i]:
            if not isinstance(c, int) or not 0 <= c < n or c == 0:
                errors.append(StructuralError(NON_TREE, i, f"invalid child id {c!r}"))
            elif c in seen:
                errors.append(StructuralError(NON_TREE, c, "node listed as child more than once"))
            else:
                seen.add(c)
                if inst.parents[c] != i:
                    errors.append(
                        StructuralError(NON_TREE, c, "children list disagrees with parent map")
                    )
    for i in range(1, n):
        if i not in seen and isinstance(inst.parents[i], int):
            errors.append(StructuralError(NON_TREE, i, "node missing from its parent's child list"))

    # cycle / connectivity: every node must reach the root within n steps
    if not errors:
        for i in range(1, n):
            steps = 0
            p = inst.parents[i]
            while p is not None and steps <= n:
                if p == 0:
                    break
                p = inst.parents[p]
                steps += 1
            else:
                errors.append(StructuralError(NON_TREE, i, "node does not reach the root (cycle)"))

    if inst.weights[0] != 1:
        errors.append(
            StructuralError(WEIGHT_OUT_OF_RANGE, 0, f"root weight must be 1, got {inst.weights[0]}")
        )
    for i in range(1, n):
        w = inst.weights[i]
        if not 0 < w <= 1:
            errors.append(StructuralError(WEIGHT_OUT_OF_RANGE, i, f"weight {w} not in (0, 1]"))

    for i in range(n):
        kids = inst.children[i]
        if kids:
            total = sum((inst.weights[c] for c in kids), Fraction(0))
            if total != 1:
                errors.append(
                    StructuralError(
                        CHILDREN_WEIGHTS_NOT_NORMALIZED, i, f"children weights sum to {total}"
                    )
                )
    return errors


def require_valid(inst: Instance) -> Instance:
    """Return ``inst`` if valid, else raise :class:`InvalidInstanceError`."""
    errors = validate_instance(inst)
    if errors:
        raise InvalidInstanceError(errors)
    return inst


def relative_entitlements(inst: Instance) -> tuple[Fraction, ...]:
    """All relative entitlements: node i's share of the whole house.

    The root's is 1; every other node's is its entitlement times its
    parent's relative entitlement, computed exactly.
    """
    if inst._shares is None:
        shares: list[Fraction | None] = [None] * inst.n
        shares[0] = inst.weights[0]
        for i in inst.bfs_order():
            if i != 0:
                p = inst.parents[i]
                if p is None or shares[p] is None:
                    raise InvalidInstanceError(
                        [StructuralError(NON_TREE, i, "unreachable from root")]
                    )
                shares[i] = shares[p] * inst.weights[i]
        if any(s is None for s in shares):
            raise InvalidInstanceError(
                [StructuralError(NON_TREE, None, "tree is not connected")]
            )
        inst._shares = tuple(shares)  # type: ignore[arg-type]
    return inst._shares


def relative_entitlement(inst: Instance, i: int) -> Fraction:
    """Node ``i``'s entitlement relative to the root (share of the house)."""
    return relative_entitlements(inst)[i]


def strict_quota(inst: Instance, i: int, h: int) -> Fraction:
    """The exact, generally fractional share of ``h`` seats owed to node ``i``."""
    return relative_entitlement(inst, i) * h


def _fast_arrays(inst: Instance):
    """Per-instance integer arrays for the hot loops.

    Returns ``(order, parents, rnum, rden, wnum, wden, children)`` where
    node ``i``'s relative entitlement is ``rnum[i]/rden[i]`` and its
    parent-relative entitlement ``wnum[i]/wden[i]``, both in lowest terms,
    and ``order`` is breadth-first.  Cached on the instance.
    """
    if inst._fast is None:
        shares = relative_entitlements(inst)
        inst._fast = (
            list(inst.bfs_order()),
            list(inst.parents),
            [s.numerator for s in shares],
            [s.denominator for s in shares],
            [w.numerator for w in inst.weights],
            [w.denominator for w in inst.weights],
            [list(k) for k in inst.children],
        )
    return inst._fast


@dataclass(frozen=True)
class Allocation:
    """Seat counts per node for a house of ``h`` seats."""

    h: int
    seats: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "seats", tuple(self.seats))


class QuotaMode(Enum):
    """Which ancestors constrain a node's quota bounds."""

    ALL_ANCESTORS = "all"
    ROOT_ONLY = "root"


@dataclass(frozen=True)
class QuotaBounds:
    """Lower/upper quota of one node, with the ancestors that bind them.

    The binding ancestor is the one whose seats-per-share ratio is extremal
    (largest for the lower bound, smallest for the upper); among equal
    ratios the one nearest the root is reported.
    """

    node: int
    lower: int
    upper: int
    binding_lower_ancestor: int
    binding_upper_ancestor: int


@dataclass(frozen=True)
class QuotaReport:
    """Full quota audit of an allocation against an instance."""

    mode: QuotaMode
    bounds: tuple[QuotaBounds, ...]
    lower_violated: tuple[bool, ...]
    upper_violated: tuple[bool, ...]
    flow_violations: tuple[int, ...]
    lower_violation_count: int
    upper_violation_count: int

    @property
    def ok(self) -> bool:
        return (
            not self.flow_violations
            and self.lower_violation_count == 0
            and self.upper_violation_count == 0
        )


def quota_bounds(
    inst: Instance, alloc: Allocation, i: int, mode: QuotaMode = QuotaMode.ALL_ANCESTORS
) -> QuotaBounds:
    """Exact quota bounds of node ``i`` under ``alloc``.

    In all-ancestors mode the bounds take the tightest floor/ceiling over
    every ancestor; in root-only mode only the root constrains the node.
    The root itself is its own only ancestor, so its bounds collapse to
    its own seat count.
    """
    shares = relative_entitlements(inst)
    seats = alloc.seats
    ri = shares[i]
    if i == 0:
        return QuotaBounds(0, seats[0], seats[0], 0, 0)
    if mode is QuotaMode.ROOT_ONLY:
        candidates = [(Fraction(seats[0]), 0)]
    else:
        candidates = [(Fraction(seats[a]) / shares[a], a) for a in inst.ancestors(i)]
    hi_ratio, hi_anc = candidates[0]
    lo_ratio, lo_anc = candidates[0]
    for ratio, a in candidates[1:]:
        # candidates run nearest-first; ties keep the topmost, so replace on >=/<=
        if ratio >= hi_ratio:
            hi_ratio, hi_anc = ratio, a
        if ratio <= lo_ratio:
            lo_ratio, lo_anc = ratio, a
    lower = math.floor(ri * hi_ratio)
    upper = math.ceil(ri * lo_ratio)
    return QuotaBounds(i, lower, upper, hi_anc, lo_anc)


def check_allocation(
    inst: Instance, alloc: Allocation, mode: QuotaMode = QuotaMode.ALL_ANCESTORS
) -> QuotaReport:
    """Audit ``alloc``: flow conservation plus per-node quota compliance.

    Flow breaks (root seats != h, or an internal node's seats != sum of its
    children's) are reported in the result rather than raised, so broken
    allocations can still be inspected.
    """
    n = inst.n
    seats = alloc.seats
    if len(seats) != n:
        raise ValueError(f"allocation has {len(seats)} entries for {n} nodes")
    for i, v in enumerate(seats):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise ValueError(f"seat count for node {i} must be a non-negative integer")

    flow = [i for i in range(n) if inst.children[i] and seats[i] != sum(seats[c] for c in inst.children[i])]
    if seats[0] != alloc.h and 0 not in flow:
        flow.insert(0, 0)

    order, parents, rnum, rden, _, _, _ = _fast_arrays(inst)
    root_only = mode is QuotaMode.ROOT_ONLY

    # Seats-per-share ratio of ancestor a is seats[a]*rden[a]/rnum[a]; track
    # the running extremes (and which ancestor set them) down the tree.
    hi_n = [0] * n
    hi_d = [1] * n
    hi_a = [0] * n
    lo_n = [0] * n
    lo_d = [1] * n
    lo_a = [0] * n
    hi_n[0] = lo_n[0] = seats[0]

    bounds: list[QuotaBounds | None] = [None] * n
    low_flags = [False] * n
    up_flags = [False] * n
    bounds[0] = QuotaBounds(0, seats[0], seats[0], 0, 0)

    for i in order:
        if i == 0:
            continue
        p = parents[i]
        if root_only:
            bn, bd, ba = seats[0], 1, 0
            sn, sd, sa = bn, bd, ba
        else:
            # parent's own ratio competes with the best seen above it
            pn = seats[p] * rden[p]
            pd = rnum[p]
            bn, bd, ba = hi_n[p], hi_d[p], hi_a[p]
            if pn * bd > bn * pd:
                bn, bd, ba = pn, pd, p
            sn, sd, sa = lo_n[p], lo_d[p], lo_a[p]
            if pn * sd < sn * pd:
                sn, sd, sa = pn, pd, p
            hi_n[i], hi_d[i], hi_a[i] = bn, bd, ba
            lo_n[i], lo_d[i], lo_a[i] = sn, sd, sa
        num = rnum[i]
        den = rden[i]
        lower = (num * bn) // (den * bd)
        upper = -((-(num * sn)) // (den * sd))
        bounds[i] = QuotaBounds(i, lower, upper, ba, sa)
        low_flags[i] = seats[i] < lower
        up_flags[i] = seats[i] > upper

    return QuotaReport(
        mode=mode,
        bounds=tuple(bounds),  # type: ignore[arg-type]
        lower_violated=tuple(low_flags),
        upper_violated=tuple(up_flags),
        flow_violations=tuple(flow),
        lower_violation_count=sum(low_flags),
        upper_violation_count=sum(up_flags),
    )


def count_violations(
    inst: Instance, seats: Sequence[int], mode: QuotaMode = QuotaMode.ALL_ANCESTORS
) -> tuple[int, int]:
    """Count (lower, upper) quota violations without building a report.

    Semantically identical to :func:`check_allocation`'s flag counts for a
    flow-conserving allocation, but allocation-free: suitable for sweeps
    over many house sizes.
    """
    order, parents, rnum, rden, _, _, _ = _fast_arrays(inst)
    n = inst.n
    if mode is QuotaMode.ROOT_ONLY:
        v0 = seats[0]
        low = up = 0
        for i in range(1, n):
            num = rnum[i] * v0
            den = rden[i]
            v = seats[i]
            if (v + 1) * den <= num:
                low += 1
            elif v >= 1 and (v - 1) * den >= num:
                up += 1
        return low, up

    hi_n = [0] * n
    hi_d = [1] * n
    lo_n = [0] * n
    lo_d = [1] * n
    hi_n[0] = lo_n[0] = seats[0]
    low = up = 0
    for i in order:
        if i == 0:
            continue
        p = parents[i]
        pn = seats[p] * rden[p]
        pd = rnum[p]
        bn = hi_n[p]
        bd = hi_d[p]
        if pn * bd > bn * pd:
            bn, bd = pn, pd
        sn = lo_n[p]
        sd = lo_d[p]
        if pn * sd < sn * pd:
            sn, sd = pn, pd
        hi_n[i] = bn
        hi_d[i] = bd
        lo_n[i] = sn
        lo_d[i] = sd
        v = seats[i]
        # violation iff v < floor(num*bn/(den*bd)), i.e. (v+1) <= that ratio
        num = rnum[i]
        den = rden[i]
        if (v + 1) * den * bd <= num * bn:
            low += 1
        if v >= 1 and (v - 1) * den * sd >= num * sn:
            up += 1
    return low, up


# ---------------------------------------------------------------------------
# JSON formats
#
# Instance files:   {"nodes": [{"id": 0, "parent": null, "weight": "1"}, ...]}
# Allocation files: {"h": 6, "seats": [6, 2, 1, 2, 1, 3, 3]}
#
# Node ids must be dense 0..n-1; the root has parent null and weight "1";
# weights are "p" or "p/q" strings.  Children take the order in which they
# appear in the file.
# ---------------------------------------------------------------------------


def parse_instance_document(obj: object) -> tuple[Instance | None, list[StructuralError]]:
    """Build an Instance from parsed JSON, collecting every error found.

    Returns ``(instance, [])`` on success.  If the document is too broken
    to assemble (bad ids, missing fields), the instance is ``None`` and the
    errors say why; otherwise structural errors from
    :func:`validate_instance` are returned alongside ``None``.
    """
    errors: list[StructuralError] = []
    if not isinstance(obj, dict) or not isinstance(obj.get("nodes"), list):
        return None, [StructuralError(NON_TREE, None, 'document must be {"nodes": [...]}')]
    entries = obj["nodes"]
    if not entries:
        return None, [StructuralError(NON_TREE, None, "empty node list")]

    n = len(entries)
    parents: list[int | None] = [None] * n
    weights: list[Fraction] = [Fraction(0)] * n
    children_order: list[list[int]] = [[] for _ in range(n)]
    seen_ids: set[int] = set()

    for pos, entry in enumerate(entries):
        if not isinstance(entry, dict):
            errors.append(StructuralError(NON_TREE, None, f"node entry #{pos} is not an object"))
            continue
        ident = entry.get("id")
        if not isinstance(ident, int) or isinstance(ident, bool) or not 0 <= ident < n:
            errors.append(
                StructuralError(NON_TREE, None, f"node entry #{pos} has bad id {ident!r} (ids must be dense 0..{n - 1})")
            )
            continue
        if ident in seen_ids:
            errors.append(StructuralError(NON_TREE, ident, "duplicate node id"))
            continue
        seen_ids.add(ident)
        parent = entry.get("parent")
        if parent is not None and (not isinstance(parent, int) or isinstance(parent, bool)):
            errors.append(StructuralError(NON_TREE, ident, f"bad parent {parent!r}"))
            continue
        raw_weight = entry.get("weight")
        if not isinstance(raw_weight, str):
            errors.append(
                StructuralError(WEIGHT_OUT_OF_RANGE, ident, 'weight must be a "p" or "p/q" string')
            )
            continue
        try:
            weight = parse_weight(raw_weight)
        except ValueError as exc:
            errors.append(StructuralError(WEIGHT_OUT_OF_RANGE, ident, str(exc)))
            continue
        parents[ident] = parent
        weights[ident] = weight
        if parent is not None and 0 <= parent < n:
            children_order[parent].append(ident)

    if len(seen_ids) != n:
        errors.append(
            StructuralError(NON_TREE, None, f"ids are not dense 0..{n - 1} ({len(seen_ids)} distinct)")
        )
    if errors:
        return None, errors

    inst = Instance(parents, weights, children_order)
    errors = validate_instance(inst)
    if errors:
        return None, errors
    return inst, []


def instance_from_json(text: str) -> Instance:
    """Parse and validate an instance JSON document; raise on any error."""
    inst, errors = parse_instance_document(json.loads(text))
    if inst is None:
        raise InvalidInstanceError(errors)
    return inst


def instance_to_json(inst: Instance) -> str:
    """Serialize to the instance file format (nodes in breadth-first order)."""
    nodes = []
    for i in inst.bfs_order():
        p = inst.parents[i]
        nodes.append({"id": i, "parent": p, "weight": str(inst.weights[i])})
    return json.dumps({"nodes": nodes}, indent=2)


def allocation_from_json(text: str) -> Allocation:
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ValueError('allocation document must be {"h": ..., "seats": [...]}')
    h = obj.get("h")
    seats = obj.get("seats")
    if not isinstance(h, int) or isinstance(h, bool) or h < 0:
        raise ValueError('"h" must be a non-negative integer')
    if not isinstance(seats, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in seats
    ):
        raise ValueError('"seats" must be a list of non-negative integers')
    return Allocation(h, tuple(seats))


def allocation_to_json(alloc: Allocation) -> str:
    return json.dumps({"h": alloc.h, "seats": list(alloc.seats)})
