"""
Exhaustive Checks Script

Sweeps every small core and compares the library against independent
restatements:

- validate_core against a naive check of conditions (1)-(3)
- the Noether identity noether_residual = delta_{g+1} for type A sequences
- semigroup membership against brute force on [0, 2*conductor]

Each sweep returns a pandas DataFrame with one row per case.
"""
from math import ceil, comb, gcd
from typing import Iterator, List, Tuple
import argparse
import logging
import sys
import os

import numpy as np
import pandas as pd

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from config import get_config, setup_logging
from valuations.delta import DeltaCore, build_type_a, validate_core
from valuations.proximity import noether_residual
from valuations.semigroup import GeneratedSemigroup, brute_force_generate, conductor, member
from valuations.values import OrderedValue

logger = logging.getLogger(__name__)


def candidate_cores(max_delta0: int, entry_bound: int = 2) -> Iterator[Tuple[int, ...]]:
    """
    Tuples with delta_0 <= max_delta0, entries up to entry_bound*delta_0 and a
    strictly decreasing gcd chain ending at 1. Condition (3) is not assumed.
    """
    def extend(prefix: List[int], d: int) -> Iterator[Tuple[int, ...]]:
        if d == 1:
            yield tuple(prefix)
            return
        for delta in range(1, entry_bound * prefix[0] + 1):
            nd = gcd(d, delta)
            if nd < d:
                yield from extend(prefix + [delta], nd)

    for delta0 in range(2, max_delta0 + 1):
        yield from extend([delta0], delta0)


def valid_cores(max_delta0: int) -> Iterator[DeltaCore]:
    """Valid cores with delta_0 <= max_delta0, generated with condition (3) as a bound."""
    def extend(prefix: List[int], d_prev: int, d: int) -> Iterator[DeltaCore]:
        if d == 1:
            core = DeltaCore(tuple(prefix))
            if core.validate().is_valid:
                yield core
            return
        bound = (d_prev // d) * prefix[-1] if len(prefix) >= 2 else prefix[0]
        for delta in range(1, bound):
            nd = gcd(d, delta)
            if nd < d:
                yield from extend(prefix + [delta], d, nd)

    for delta0 in range(2, max_delta0 + 1):
        yield from extend([delta0], delta0, delta0)


def naive_members(generators: Tuple[int, ...], top: int) -> np.ndarray:
    """Boolean table reachable[v] for 0 <= v <= top, by dynamic programming."""
    reachable = np.zeros(top + 1, dtype=bool)
    reachable[0] = True
    for v in range(1, top + 1):
        reachable[v] = any(g <= v and reachable[v - g] for g in generators)
    return reachable


def naive_is_valid(entries: Tuple[int, ...]) -> bool:
    """Conditions (1)-(3) restated directly from the definitions."""
    d = [entries[0]]
    for e in entries[1:]:
        d.append(gcd(d[-1], e))
    n = [d[i] // d[i + 1] for i in range(len(entries) - 1)]
    if d[-1] != 1 or any(k <= 1 for k in n):
        return False
    for i in range(1, len(entries)):
        target = n[i - 1] * entries[i]
        if not naive_members(entries[:i], target)[target]:
            return False
    if entries[0] <= entries[1]:
        return False
    return all(entries[i] < n[i - 2] * entries[i - 1] for i in range(2, len(entries)))


def check_validation(max_delta0: int) -> pd.DataFrame:
    rows = []
    for entries in candidate_cores(max_delta0):
        library = validate_core(entries).is_valid
        naive = naive_is_valid(entries)
        rows.append({"core": str(DeltaCore(entries)), "library": library, "naive": naive,
                     "agree": library == naive})
    logger.info("validation sweep: %d candidates", len(rows))
    return pd.DataFrame(rows, columns=["core", "library", "naive", "agree"])


def check_noether(max_delta0: int) -> pd.DataFrame:
    """Every valid core with last entries from n_g*delta_g - delta_0 up to n_g*delta_g."""
    rows = []
    for core in valid_cores(max_delta0):
        top = core.n[-1] * core.entries[-1]
        for last in range(top - core.entries[0], top + 1):
            residual = noether_residual(build_type_a(core, last))
            rows.append({"core": str(core), "last": last, "residual": residual,
                         "agree": residual == last})
    logger.info("Noether sweep: %d sequences", len(rows))
    return pd.DataFrame(rows, columns=["core", "last", "residual", "agree"])


def check_semigroups(max_delta0: int) -> pd.DataFrame:
    limit = get_config().semigroup.brute_force_limit
    rows = []
    for core in valid_cores(max_delta0):
        semigroup = GeneratedSemigroup.of(core.entries)
        top = 2 * conductor(semigroup)
        budget = ceil(top / min(core.entries)) if top else 0
        if comb(len(core.entries) + budget, budget) <= limit:
            oracle_set = {v.payload for v in brute_force_generate(core.entries, budget)}
            reachable = [v in oracle_set for v in range(top + 1)]
            oracle = "brute_force_generate"
        else:
            reachable = naive_members(core.entries, top).tolist()
            oracle = "dynamic_programming"
        mismatches = [v for v in range(top + 1)
                      if bool(member(semigroup, OrderedValue.integer(v))) != reachable[v]]
        rows.append({"core": str(core), "window": top, "oracle": oracle,
                     "mismatches": len(mismatches), "agree": not mismatches})
    logger.info("semigroup sweep: %d cores", len(rows))
    return pd.DataFrame(rows, columns=["core", "window", "oracle", "mismatches", "agree"])


def main():
    parser = argparse.ArgumentParser(description="Exhaustive sweeps over small delta-sequence cores")
    parser.add_argument("--max-validate", type=int, default=30, help="delta_0 bound for validate_core (default: 30)")
    parser.add_argument("--max-noether", type=int, default=60, help="delta_0 bound for the Noether identity (default: 60)")
    parser.add_argument("--max-semigroup", type=int, default=40, help="delta_0 bound for membership (default: 40)")
    args = parser.parse_args()
    setup_logging()

    print("=" * 60)
    print("Exhaustive Checks")
    print("=" * 60)

    failures = 0
    for title, frame in (
        (f"validate_core vs naive (delta_0 <= {args.max_validate})", check_validation(args.max_validate)),
        (f"Noether identity (delta_0 <= {args.max_noether})", check_noether(args.max_noether)),
        (f"membership vs brute force (delta_0 <= {args.max_semigroup})", check_semigroups(args.max_semigroup)),
    ):
        bad = frame[~frame["agree"]]
        failures += len(bad)
        print(f"\n### {title} ###")
        print(f"Cases: {len(frame)}  Disagreements: {len(bad)}")
        if not bad.empty:
            print(bad.head(20).to_string(index=False))

    print("\n" + "=" * 60)
    print("ALL CHECKS PASSED" if failures == 0 else f"{failures} DISAGREEMENTS")
    print("=" * 60)
    return 0 if failures == 0 else 2


if __name__ == "__main__":
    exit(main())
