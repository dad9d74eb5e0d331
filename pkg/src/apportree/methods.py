"""Iterative seat-by-seat apportionment methods on entitlement trees.

Every method here hands out the house one seat at a time.  A step starts at
the root and walks downward; at each internal node the new seat goes to the
child that currently deserves it most, and every node along the walk gains
one seat, so flow conservation holds after each step.  The methods differ
only in how children are ranked and which of them are eligible:

* Adams ranks children by current seats per share, lowest first.
* Jefferson ranks by seats-after-one-more per share, lowest first.
* The quota-constrained method is Jefferson restricted to children whose
  next seat would keep them under their parent-relative share of the
  parent's upcoming seat count.
* The upper-compliant quota method is Jefferson restricted by a seats-per-
  share threshold carried down the walk; the threshold both forces upper
  quota compliance and (unlike the plain quota constraint) can be shown to
  always leave at least one child eligible.

Adams satisfies upper quota everywhere, Jefferson and the quota-constrained
method satisfy lower quota, and the upper-compliant method satisfies upper
quota, all with respect to every ancestor.  Rankings compare exact
rationals via integer cross-multiplication, and ties are broken
deterministically (see :class:`TieBreak`), so a whole trajectory is
reproducible from the instance alone.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum

from .core import Allocation, Instance, _fast_arrays, require_valid


class MethodKind(Enum):
    ADAMS = "adams"
    JEFFERSON = "jefferson"
    QUOTA = "quota"
    UC_QUOTA = "ucquota"


class TieBreak(Enum):
    """How equal-ranked children are separated: the lowest node index wins.

    A single rule today, kept as an enum so alternative deterministic
    rules can be added without changing signatures.  One refinement is
    baked into Adams' ranking itself rather than here: children with zero
    seats all share the ratio 0/R, and among them the larger entitlement
    goes first (the limiting order of V/R as V approaches 0 from above),
    with the index deciding only exact entitlement ties.
    """

    LOWEST_INDEX = "lowest-index"


class NoEligibleChild(RuntimeError):
    """A constrained step found no child it was allowed to pick.

    Unreachable from flow-conserving seat counts: both the plain quota
    constraint and the upper-compliant threshold provably leave at least
    one eligible child then.  Raising it means the input allocation was
    corrupted (or there is a bug), so it is a RuntimeError, not ValueError.
    """

    def __init__(self, method: MethodKind, node: int, house: int):
        self.method = method
        self.node = node
        self.house = house
        super().__init__(
            f"{method.value}: no eligible child under node {node} "
            f"when assigning seat {house + 1}"
        )


def _choose_path(inst: Instance, seats, kind: MethodKind, tie: TieBreak) -> list[int]:
    """Pick the root-to-leaf path the next seat travels, without assigning it.

    ``seats`` holds the current (pre-step) counts; every ranking and
    eligibility test below reads only those.
    """
    _, _, rnum, rden, wnum, wden, children = _fast_arrays(inst)
    bump = 0 if kind is MethodKind.ADAMS else 1
    is_quota = kind is MethodKind.QUOTA
    is_ucq = kind is MethodKind.UC_QUOTA

    # upper-compliance threshold, as a fraction tn/td on seats-per-share
    tn = seats[0] + 1
    td = 1

    path = [0]
    i = 0
    kids = children[0]
    while kids:
        vi_next = seats[i] + 1
        best = -1
        bn = bd = 1
        for c in kids:
            vc = seats[c]
            if is_quota and vc * wden[c] >= vi_next * wnum[c]:
                continue
            if is_ucq and vc * rden[c] * td >= tn * rnum[c]:
                continue
            cn = (vc + bump) * rden[c]
            cd = rnum[c]
            if best < 0:
                best, bn, bd = c, cn, cd
                continue
            left = cn * bd
            right = bn * cd
            if left < right:
                best, bn, bd = c, cn, cd
            elif left == right:
                if cn == 0:
                    # Adams only: unseated children share ratio 0; the
                    # larger entitlement leads, as V/R would for any V > 0
                    rc = rnum[c] * rden[best]
                    rb = rnum[best] * rden[c]
                    if rc > rb or (rc == rb and c < best):
                        best, bn, bd = c, cn, cd
                elif c < best:
                    best, bn, bd = c, cn, cd
        if best < 0:
            raise NoEligibleChild(kind, i, seats[0])
        if is_ucq:
            un = (seats[best] + 1) * rden[best]
            ud = rnum[best]
            if un * td < tn * ud:
                tn, td = un, ud
        i = best
        path.append(i)
        kids = children[i]
    return path


def _step(
    inst: Instance, alloc: Allocation, kind: MethodKind, tie: TieBreak
) -> tuple[Allocation, tuple[int, ...]]:
    seats = list(alloc.seats)
    path = _choose_path(inst, seats, kind, tie)
    for i in path:
        seats[i] += 1
    return Allocation(alloc.h + 1, tuple(seats)), tuple(path)


def step_adams(inst, alloc, tie_break=TieBreak.LOWEST_INDEX):
    """One Adams step: next seat to the lowest seats-per-share child chain."""
    return _step(inst, alloc, MethodKind.ADAMS, tie_break)


def step_jefferson(inst, alloc, tie_break=TieBreak.LOWEST_INDEX):
    """One Jefferson step: next seat to the lowest next-seats-per-share chain."""
    return _step(inst, alloc, MethodKind.JEFFERSON, tie_break)


def step_quota(inst, alloc, tie_break=TieBreak.LOWEST_INDEX):
    """One Jefferson step restricted to children below their share bound.

    A child is eligible while its current seats stay under its entitlement
    share of the parent's incremented count.  On flow-conserving seat
    counts an eligible child always exists (the children sum to strictly
    less than the incremented parent count); :class:`NoEligibleChild` only
    guards the walk against corrupted inputs.
    """
    return _step(inst, alloc, MethodKind.QUOTA, tie_break)


def step_uc_quota(inst, alloc, tie_break=TieBreak.LOWEST_INDEX):
    """One Jefferson step under the descending seats-per-share threshold."""
    return _step(inst, alloc, MethodKind.UC_QUOTA, tie_break)


_STEPPERS = {
    MethodKind.ADAMS: step_adams,
    MethodKind.JEFFERSON: step_jefferson,
    MethodKind.QUOTA: step_quota,
    MethodKind.UC_QUOTA: step_uc_quota,
}


@dataclass(frozen=True)
class Trajectory:
    """A full run of one method: the final allocation plus each seat's path.

    ``paths[k]`` is the root-to-leaf chain the ``k+1``-th seat travelled.
    Replaying path prefixes recovers the allocation at every intermediate
    house size, which is how house monotonicity is observed: the run for
    ``h`` seats is literally a prefix of the run for ``h + 1``.
    """

    instance: Instance
    method: MethodKind
    tie_break: TieBreak
    final: Allocation
    paths: tuple[tuple[int, ...], ...]

    def allocation_at(self, h: int) -> Allocation:
        """The allocation after the first ``h`` seats."""
        if not 0 <= h <= self.final.h:
            raise ValueError(f"h must be in 0..{self.final.h}")
        seats = [0] * len(self.final.seats)
        for path in self.paths[:h]:
            for i in path:
                seats[i] += 1
        return Allocation(h, tuple(seats))

    def allocations(self) -> Iterator[Allocation]:
        """Yield the allocation at every house size from 0 to the final h."""
        seats = [0] * len(self.final.seats)
        yield Allocation(0, tuple(seats))
        for k, path in enumerate(self.paths, start=1):
            for i in path:
                seats[i] += 1
            yield Allocation(k, tuple(seats))


def run_method(
    inst: Instance,
    method: MethodKind | str,
    h: int,
    tie_break: TieBreak = TieBreak.LOWEST_INDEX,
) -> Trajectory:
    """Allocate ``h`` seats from scratch with the given method.

    The instance is validated first.  Starting from all zeros every state
    reached conserves flow, so the constrained methods always find an
    eligible child and :class:`NoEligibleChild` never escapes this loop.
    """
    kind = MethodKind(method) if isinstance(method, str) else method
    if not isinstance(h, int) or h < 0:
        raise ValueError("house size must be a non-negative integer")
    require_valid(inst)

    n = inst.n
    seats = [0] * n
    paths = []
    for _ in range(h):
        path = _choose_path(inst, seats, kind, tie_break)
        for i in path:
            seats[i] += 1
        paths.append(tuple(path))
    final = Allocation(h, tuple(seats))
    return Trajectory(inst, kind, tie_break, final, tuple(paths))
