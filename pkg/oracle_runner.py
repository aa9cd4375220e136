"""
Oracle Runner - checks the value-at-infinity evaluator against the resultant oracle
over a seeded corpus of random polynomials.
"""
from typing import Any, Dict, List, Optional, Tuple
import concurrent.futures
import logging

import numpy as np
import pandas as pd

from config import OracleConfig, get_config
from exceptions import CommonFactorError, ZeroPolynomialError
from valuations.curves import ApproximateRoots, BivariatePolynomial, approximate_roots, core_value, resultant_oracle
from valuations.delta import DeltaCore

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["core", "polynomial", "value", "oracle", "status", "error"]


def random_polynomial(rng: np.random.Generator, max_degree: int, max_terms: int,
                      coefficient_bound: int = 5) -> BivariatePolynomial:
    """Nonzero polynomial with distinct monomials of total degree at most max_degree."""
    monomials = [(i, j) for i in range(max_degree + 1) for j in range(max_degree + 1 - i)]
    count = int(rng.integers(1, min(max_terms, len(monomials)) + 1))
    chosen = rng.choice(len(monomials), size=count, replace=False)
    terms = {}
    for index in chosen:
        c = 0
        while c == 0:
            c = int(rng.integers(-coefficient_bound, coefficient_bound + 1))
        terms[monomials[int(index)]] = c
    return BivariatePolynomial(terms)


class OracleRunner:
    """
    Generates the corpus and compares core_value(f) with deg_x Res_y(f, q_{g+1})
    for every case, sequentially or on a thread pool.
    """

    def __init__(self, config: Optional[OracleConfig] = None):
        self.config = config or get_config().oracle
        self.config.validate()
        self.roots: Dict[Tuple[int, ...], ApproximateRoots] = {}
        self.corpus: List[Tuple[DeltaCore, BivariatePolynomial]] = []
        self.report: Optional[pd.DataFrame] = None

    def generate_corpus(self) -> List[Tuple[DeltaCore, BivariatePolynomial]]:
        rng = np.random.default_rng(self.config.seed)
        self.corpus = []
        for entries in self.config.cores:
            core = DeltaCore.of(entries).require_valid()
            self.roots[core.entries] = approximate_roots(core)
            for _ in range(self.config.corpus_size):
                f = random_polynomial(rng, self.config.max_degree, self.config.max_terms)
                self.corpus.append((core, f))
        logger.info("Generated %d oracle cases over %d cores", len(self.corpus), len(self.config.cores))
        return self.corpus

    def check_case(self, core: DeltaCore, f: BivariatePolynomial) -> Dict[str, Any]:
        """Compare both sides for one polynomial; a multiple of the curve is skipped."""
        roots = self.roots[core.entries]
        row = {"core": str(core), "polynomial": str(f), "value": None, "oracle": None,
               "status": "agree", "error": None}
        try:
            row["oracle"] = resultant_oracle(f, roots[roots.g + 1])
            row["value"] = core_value(f, roots)
        except (CommonFactorError, ZeroPolynomialError) as e:
            row["status"] = "skipped"
            row["error"] = f"{type(e).__name__}: {e}"
            return row
        except Exception as e:
            row["status"] = "error"
            row["error"] = f"{type(e).__name__}: {e}"
            logger.error("Oracle case %s on %s failed: %s", f, core, e)
            return row
        if row["value"] != row["oracle"]:
            row["status"] = "disagree"
            logger.warning("Disagreement on %s for %s: value %s, oracle %s",
                           core, f, row["value"], row["oracle"])
        return row

    def run_sequential(self) -> pd.DataFrame:
        rows = [self.check_case(core, f) for core, f in self.corpus]
        return self._finish(rows)

    def run_parallel(self) -> pd.DataFrame:
        rows: List[Optional[Dict[str, Any]]] = [None] * len(self.corpus)
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.config.max_workers) as executor:
            future_to_index = {executor.submit(self.check_case, core, f): i
                               for i, (core, f) in enumerate(self.corpus)}
            for future in concurrent.futures.as_completed(future_to_index):
                rows[future_to_index[future]] = future.result()
        return self._finish(rows)

    def run(self, mode: Optional[str] = None) -> pd.DataFrame:
        """
        Generate the corpus and check every case.

        Args:
            mode: "parallel" or "sequential", defaults to the configured mode
        """
        mode = mode or self.config.execution_mode
        if mode not in ("parallel", "sequential"):
            raise ValueError(f"Execution mode must be 'parallel' or 'sequential', got '{mode}'")
        self.generate_corpus()
        logger.info("Running oracle corpus (%s)", mode)
        return self.run_parallel() if mode == "parallel" else self.run_sequential()

    def _finish(self, rows: List[Dict[str, Any]]) -> pd.DataFrame:
        self.report = pd.DataFrame(rows, columns=REPORT_COLUMNS)
        return self.report

    def summary(self) -> Dict[str, Any]:
        """Counts per status, overall and per core."""
        if self.report is None:
            raise ValueError("No report available. Call run() first.")
        counts = self.report["status"].value_counts()
        per_core = self.report.groupby("core")["status"].value_counts().unstack(fill_value=0)
        return {
            "cases": int(len(self.report)),
            "agree": int(counts.get("agree", 0)),
            "disagree": int(counts.get("disagree", 0)),
            "skipped": int(counts.get("skipped", 0)),
            "errors": int(counts.get("error", 0)),
            "per_core": {core: {status: int(n) for status, n in row.items()}
                         for core, row in per_core.iterrows()},
            "seed": self.config.seed,
        }

    def all_agree(self) -> bool:
        s = self.summary()
        return s["disagree"] == 0 and s["errors"] == 0
