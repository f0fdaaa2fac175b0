#!/usr/bin/env python3
"""
Largest m for which an m^n-point product rule stays below a point budget.

Prints one row per dimension n with (m, m^n) for budgets of 10^3, 10^6
and 10^9 evaluations.
"""

import argparse

BUDGETS = (10 ** 3, 10 ** 6, 10 ** 9)


def largest_m(n: int, budget: int) -> int:
    """Largest m >= 1 with m^n < budget (1 when even 2^n is too many)."""
    m = 1
    while (m + 1) ** n < budget:
        m += 1
    return m


def main():
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument("--nmax", type=int, default=20, help="largest dimension (default: 20)")
    args = parser.parse_args()

    header = "".join(f" {'m':>6} {'N = m^n':>12}" for _ in BUDGETS)
    print(f"{'n':>3}{header}")
    for n in range(2, args.nmax + 1):
        cells = []
        for budget in BUDGETS:
            m = largest_m(n, budget)
            cells.append(f" {m:>6} {m ** n:>12}")
        print(f"{n:>3}{''.join(cells)}")


if __name__ == "__main__":
    main()
