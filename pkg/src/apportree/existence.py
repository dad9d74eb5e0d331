"""Constructive proof machinery: both quota bounds are always attainable.

For any valid entitlement tree and any house size there exists an
allocation meeting both the lower and the upper quota at every node, with
respect to every ancestor.  The construction here works in two moves:

1. Reduce the tree to an equivalent *full binary* one (every internal node
   has exactly two children).  Weight-1 only children are spliced out, and
   a node with more than two children keeps its first child while the rest
   move under a fresh sibling carrying their combined entitlement, rescaled
   to sum to one again; the fresh node is split the same way until only
   pairs remain.  Seat counts for original nodes can be read back off the
   reduced tree directly.

2. Walk the binary tree top-down.  With every ancestor's seats fixed, a
   node pair (x, y) sharing a parent with ``V`` seats admits the interval
   ``[max(LQ_x, V - UQ_y), min(UQ_x, V - LQ_y)]`` for x's count; the
   interval is never empty, and any choice inside it keeps both quotas
   satisfiable underneath.  This implementation picks the integer nearest
   x's proportional share of ``V`` (ties rounded down).

:class:`EmptyInterval` exists as a guard rail: it is raised if the interval
were ever empty, which the accompanying tests drive hard to show it is not.

A brute-force enumerator over all flow-conserving, quota-compliant
allocations is included for cross-checking on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Allocation, Instance, _fast_arrays, require_valid


class EmptyInterval(RuntimeError):
    """The top-down construction found no feasible seat count for a node."""

    def __init__(self, node: int, low: int, high: int, house: int):
        self.node = node
        self.low = low
        self.high = high
        self.house = house
        super().__init__(
            f"no feasible seat count for node {node} at house {house}: "
            f"interval [{low}, {high}] is empty"
        )


class SizeLimitExceeded(ValueError):
    """Brute-force enumeration was asked for an instance beyond its limits."""


@dataclass(frozen=True)
class FeasibleInterval:
    """Seat counts node ``node`` may take once its ancestors are fixed.

    ``low``/``high`` bound the choice (inclusive); ``target`` is the exact
    proportional share the construction aims for before clamping.
    """

    node: int
    low: int
    high: int
    target: Fraction


@dataclass(frozen=True)
class BinaryReduction:
    """A tree rewritten to full binary form, with the node correspondence.

    ``node_map[i]`` is the reduced-tree id carrying original node ``i``'s
    seat count (spliced-out nodes point at the ancestor that absorbed
    them).  ``introduced`` lists reduced-tree ids that have no original
    counterpart.
    """

    original: Instance
    reduced: Instance
    node_map: tuple[int, ...]
    introduced: tuple[int, ...]

    def pull_back(self, alloc: Allocation) -> Allocation:
        """Translate an allocation on the reduced tree to the original."""
        if len(alloc.seats) != self.reduced.n:
            raise ValueError("allocation does not match the reduced tree")
        return Allocation(alloc.h, tuple(alloc.seats[self.node_map[i]] for i in range(self.original.n)))

    def push_forward(self, alloc: Allocation) -> Allocation:
        """Translate an allocation on the original tree to the reduced one.

        Introduced nodes take the sum of their children's seats; spliced
        nodes need no entry of their own.
        """
        if len(alloc.seats) != self.original.n:
            raise ValueError("allocation does not match the original tree")
        seats = [0] * self.reduced.n
        for i in range(self.original.n):
            seats[self.node_map[i]] = alloc.seats[i]
        for k in reversed(self.reduced.bfs_order()):
            if k in self.introduced:
                seats[k] = sum(seats[c] for c in self.reduced.children[k])
        return Allocation(alloc.h, tuple(seats))


def to_full_binary(inst: Instance) -> BinaryReduction:
    """Rewrite a valid instance as an equivalent full binary tree.

    Weight-1 only children are merged into their parents; a node with more
    than two children keeps its first child and delegates the rest to a
    fresh sibling (entitlement: one minus the first child's, children
    rescaled accordingly), repeatedly.  Surviving nodes keep their relative
    order and come first in the new numbering; introduced nodes follow in
    creation order.
    """
    require_valid(inst)
    n = inst.n
    parent: dict[int, int | None] = {i: inst.parents[i] for i in range(n)}
    weight: dict[int, Fraction] = {i: inst.weights[i] for i in range(n)}
    children: dict[int, list[int]] = {i: list(inst.children[i]) for i in range(n)}
    alias: dict[int, int] = {}
    created: list[int] = []
    next_id = n

    # splice out chains: an only child always has entitlement 1
    queue = [0]
    while queue:
        i = queue.pop()
        while len(children[i]) == 1:
            c = children[i][0]
            alias[c] = i
            children[i] = children[c]
            for g in children[c]:
                parent[g] = i
            del children[c], parent[c], weight[c]
        queue.extend(children[i])

    # split wide nodes into a right-leaning comb of pairs
    queue = [0]
    while queue:
        i = queue.pop()
        kids = children[i]
        if len(kids) > 2:
            first = kids[0]
            rest = kids[1:]
            rest_weight = 1 - weight[first]
            j = next_id
            next_id += 1
            created.append(j)
            parent[j] = i
            weight[j] = rest_weight
            children[j] = rest
            children[i] = [first, j]
            for c in rest:
                parent[c] = j
                weight[c] = weight[c] / rest_weight
            queue.append(first)
            queue.append(j)
        else:
            queue.extend(kids)

    survivors = [i for i in range(n) if i not in alias]
    ordered = survivors + created
    relabel = {v: k for k, v in enumerate(ordered)}
    new_parents: list[int | None] = []
    new_weights: list[Fraction] = []
    new_children: list[list[int]] = []
    for v in ordered:
        p = parent[v]
        new_parents.append(None if p is None else relabel[p])
        new_weights.append(weight[v])
        new_children.append([relabel[c] for c in children[v]])
    reduced = Instance(new_parents, new_weights, new_children)
    node_map = tuple(relabel[alias.get(i, i)] for i in range(n))
    return BinaryReduction(inst, reduced, node_map, tuple(relabel[j] for j in created))


def _nearest_down(num: int, den: int) -> int:
    """The integer nearest num/den, rounding exact halves down."""
    return -((-(2 * num - den)) // (2 * den))


def _solve_binary(reduced: Instance, h: int) -> tuple[list[int], list[FeasibleInterval]]:
    """Both-quotas allocation on a full binary tree, top-down."""
    order, _, rnum, rden, wnum, wden, children = _fast_arrays(reduced)
    n = reduced.n
    seats = [0] * n
    seats[0] = h
    hi_n = [0] * n
    hi_d = [1] * n
    lo_n = [0] * n
    lo_d = [1] * n
    hi_n[0] = lo_n[0] = h
    intervals: list[FeasibleInterval] = []

    for i in order:
        kids = children[i]
        if not kids:
            continue
        x, y = kids
        # ancestor seats-per-share extremes for the children: node i's own
        # ratio joins the extremes seen above it (ties keep the upper one)
        pn = seats[i] * rden[i]
        pd = rnum[i]
        bn, bd = hi_n[i], hi_d[i]
        if pn * bd > bn * pd:
            bn, bd = pn, pd
        sn, sd = lo_n[i], lo_d[i]
        if pn * sd < sn * pd:
            sn, sd = pn, pd
        for c in (x, y):
            hi_n[c], hi_d[c] = bn, bd
            lo_n[c], lo_d[c] = sn, sd

        lq_x = (rnum[x] * bn) // (rden[x] * bd)
        uq_x = -((-(rnum[x] * sn)) // (rden[x] * sd))
        lq_y = (rnum[y] * bn) // (rden[y] * bd)
        uq_y = -((-(rnum[y] * sn)) // (rden[y] * sd))

        v = seats[i]
        low = max(lq_x, v - uq_y)
        high = min(uq_x, v - lq_y)
        if low > high:
            raise EmptyInterval(x, low, high, h)
        target = Fraction(wnum[x] * v, wden[x])
        pick = _nearest_down(wnum[x] * v, wden[x])
        if pick < low:
            pick = low
        elif pick > high:
            pick = high
        seats[x] = pick
        seats[y] = v - pick
        intervals.append(FeasibleInterval(x, low, high, target))
    return seats, intervals


def allocate_both_quotas(inst: Instance, h: int) -> Allocation:
    """An allocation of ``h`` seats meeting lower and upper quota everywhere.

    Works for every valid instance and house size; see the module notes
    for the construction.
    """
    if not isinstance(h, int) or h < 0:
        raise ValueError("house size must be a non-negative integer")
    reduction = to_full_binary(inst)
    seats, _ = _solve_binary(reduction.reduced, h)
    return reduction.pull_back(Allocation(h, tuple(seats)))


def trace_both_quotas(
    inst: Instance, h: int
) -> tuple[Allocation, BinaryReduction, tuple[FeasibleInterval, ...]]:
    """Like :func:`allocate_both_quotas`, also exposing the reduction and
    the per-node feasible intervals on the reduced tree."""
    if not isinstance(h, int) or h < 0:
        raise ValueError("house size must be a non-negative integer")
    reduction = to_full_binary(inst)
    seats, intervals = _solve_binary(reduction.reduced, h)
    return reduction.pull_back(Allocation(h, tuple(seats))), reduction, tuple(intervals)


def brute_force_both_quotas(
    inst: Instance, h: int, max_nodes: int = 15, max_house: int = 10
) -> tuple[Allocation, ...]:
    """Every allocation of ``h`` seats meeting both quotas at every node.

    Enumerates flow-conserving allocations top-down, pruning with the
    per-child quota bounds, so only compliant allocations are ever
    completed.  Results are deterministic: children take seat values in
    ascending order, node by node in breadth-first order.  Guarded by
    :class:`SizeLimitExceeded` since the output can grow quickly.
    """
    require_valid(inst)
    if inst.n > max_nodes:
        raise SizeLimitExceeded(f"instance has {inst.n} nodes, limit is {max_nodes}")
    if h > max_house:
        raise SizeLimitExceeded(f"house size {h} exceeds limit {max_house}")

    order, _, rnum, rden, _, _, children = _fast_arrays(inst)
    n = inst.n
    internal = [i for i in order if children[i]]
    seats = [0] * n
    seats[0] = h
    hi_n = [0] * n
    hi_d = [1] * n
    lo_n = [0] * n
    lo_d = [1] * n
    hi_n[0] = lo_n[0] = h
    results: list[Allocation] = []

    def split(idx: int) -> None:
        if idx == len(internal):
            results.append(Allocation(h, tuple(seats)))
            return
        i = internal[idx]
        kids = children[i]
        pn = seats[i] * rden[i]
        pd = rnum[i]
        bn, bd = hi_n[i], hi_d[i]
        if pn * bd > bn * pd:
            bn, bd = pn, pd
        sn, sd = lo_n[i], lo_d[i]
        if pn * sd < sn * pd:
            sn, sd = pn, pd
        lqs = []
        uqs = []
        for c in kids:
            hi_n[c], hi_d[c] = bn, bd
            lo_n[c], lo_d[c] = sn, sd
            lqs.append((rnum[c] * bn) // (rden[c] * bd))
            uqs.append(-((-(rnum[c] * sn)) // (rden[c] * sd)))
        suffix_lq = [0] * (len(kids) + 1)
        suffix_uq = [0] * (len(kids) + 1)
        for k in range(len(kids) - 1, -1, -1):
            suffix_lq[k] = suffix_lq[k + 1] + lqs[k]
            suffix_uq[k] = suffix_uq[k + 1] + uqs[k]

        def compose(pos: int, remaining: int) -> None:
            if pos == len(kids) - 1:
                if lqs[pos] <= remaining <= uqs[pos]:
                    seats[kids[pos]] = remaining
                    split(idx + 1)
                return
            lo = max(lqs[pos], remaining - suffix_uq[pos + 1])
            hi = min(uqs[pos], remaining - suffix_lq[pos + 1])
            for v in range(lo, hi + 1):
                seats[kids[pos]] = v
                compose(pos + 1, remaining - v)

        compose(0, seats[i])

    split(0)
    return tuple(results)
