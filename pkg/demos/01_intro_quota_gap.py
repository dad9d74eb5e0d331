#!/usr/bin/env python3
"""A first look at quota bounds on a tree, and how a method can miss them.

Single-level apportionment compares each party's seats against its share
of the house. With nested districts the same idea applies at every level:
a node's seats must stay near its share of EVERY ancestor's seats, not
just the root's. That extra bite is what this demo walks through.
"""

from apportree import (
    Instance,
    MethodKind,
    check_allocation,
    relative_entitlements,
    run_method,
)


def show_allocation(inst: Instance, alloc) -> None:
    report = check_allocation(inst, alloc)
    shares = relative_entitlements(inst)
    for i in range(inst.n):
        b = report.bounds[i]
        note = ""
        if report.lower_violated[i]:
            note = f"  <-- below lower quota {b.lower} (binding ancestor {b.binding_lower_ancestor})"
        if report.upper_violated[i]:
            note = f"  <-- above upper quota {b.upper} (binding ancestor {b.binding_upper_ancestor})"
        print(
            f"  node {i}: share {str(shares[i]):>5}"
            f"  quota [{b.lower}, {b.upper}]  seats {alloc.seats[i]}{note}"
        )
    print()


def main() -> None:
    # Two districts under the root, each split 8/9 vs 1/9 internally.
    # Node 1 holds 8/9 of the house, node 3 holds 8/9 of node 1.
    inst = Instance(
        parents=[None, 0, 0, 1, 1],
        weights=["1", "8/9", "1/9", "8/9", "1/9"],
    )

    print("The tree: root 0, children 1 and 2, grandchildren 3 and 4 under 1.")
    print("Weights are relative to the parent, so node 3's share of the")
    print("house is (8/9) * (8/9) = 64/81.")
    print()

    print("The quota method hands out 5 seats, one at a time:")
    traj = run_method(inst, MethodKind.QUOTA, 5)
    show_allocation(inst, traj.final)

    print("Node 3 respects its quota against its parent (node 1 has 5 seats,")
    print("and 5 * 8/9 rounds to the interval [4, 5]). Against the ROOT its")
    print("share is 64/81 of 5 seats, about 3.95, so 5 seats breaks the")
    print("ceiling of 4. The quota method only polices parent against child")
    print("at each step, which is exactly the gap this example exposes.")
    print()

    print("The upper-compliant variant carries a running ceiling down the")
    print("path, so the same 5 seats land differently:")
    traj = run_method(inst, MethodKind.UC_QUOTA, 5)
    show_allocation(inst, traj.final)

    print("No upper break anywhere. The trade, as later demos show, is that")
    print("the upper-compliant rule can dip below a lower quota instead.")


if __name__ == "__main__":
    main()
