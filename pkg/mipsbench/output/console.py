"""
Console output formatting module.

This module provides the Console class which formats the results of the
CLI commands for display in the terminal:
- a banner header
- sweep reports (MSE, squared bias and variance per estimator and value)
- oracle property checks (pass/fail with the worst discrepancy)
- the embedding-selection demo (SLOPE++ candidates and the chosen subset)
- bootstrap relative-error CDF summaries

Files are written by the harness; the console only summarises.
"""

from typing import Any, Dict, List, Optional, Sequence
import sys

import numpy as np

from ..harness.bootstrap import CdfTable
from ..harness.report import ExperimentReport
from ..oracle.checks import OracleCheck
from ..slope.search import EmbeddingSelection

RULE_WIDTH = 80


class Console:
    """
    Formats mipsbench results for console output.

    Each CLI command has one public ``display_*`` method; all of them start
    with the banner and write through ``_write``.
    """

    def __init__(self, output_stream=None):
        """
        Initialize console formatter.

        Args:
            output_stream: Where to write output (default: sys.stdout)
        """
        self.output = output_stream if output_stream is not None else sys.stdout

    def display_report(self, report: ExperimentReport, files: Sequence[Any] = ()) -> None:
        """
        Display a sweep report: one table per swept value, then MSE ratios.

        Args:
            report: Report from ``run_replications``.
            files: Paths written for the report, listed at the end.
        """
        self._display_banner()
        spec = report.spec
        self._display_heading("SWEEP SUMMARY")
        self._write(f"Swept parameter: {spec.param}\n")
        self._write(f"Values: {', '.join(str(v) for v in spec.values)}\n")
        self._write(f"Replications: {spec.replications}\n")
        self._write(f"Estimators: {', '.join(spec.roster)}\n")
        self._write(f"Fingerprint: {spec.fingerprint}\n")
        self._write(f"Failed runs: {len(report.failures)}\n")

        for value in spec.values:
            truth = report.ground_truths.get(value)
            self._write("\n")
            header = f"{spec.param} = {value}"
            if truth is not None:
                header += f"   V(pi) = {truth.value:.6f} (se {truth.stderr:.1e})"
            self._write(header + "\n")
            self._write("-" * RULE_WIDTH + "\n")
            self._write(f"  {'estimator':14} {'mse':>14} {'squared bias':>14} {'variance':>14} {'runs':>8}\n")
            for name in spec.roster:
                row = report.aggregate(name, value)
                if row is None:
                    self._write(f"  {name:14} {'failed':>14}\n")
                    continue
                runs = f"{row.successes}/{row.successes + row.failures}"
                self._write(f"  {name:14} {row.mse:14.6g} {row.squared_bias:14.6g} {row.variance:14.6g} {runs:>8}\n")

        for mips_name in ("mips", "mips-true", "mips-slope"):
            ratios = report.mse_ratio("ips", mips_name)
            if ratios:
                self._write("\n")
                self._write(f"MSE(ips) / MSE({mips_name}):\n")
                for value, ratio in ratios.items():
                    self._write(f"  {spec.param} = {str(value):10} : {ratio:.3f}\n")

        if files:
            self._write("\n")
            for path in files:
                self._write(f"Wrote {path}\n")
        self._write("\n")

    def display_checks(self, checks: List[OracleCheck]) -> None:
        """
        Display oracle property checks with an overall verdict.

        Args:
            checks: Results of ``run_oracle_checks``.
        """
        self._display_banner()
        self._display_heading("ORACLE CHECKS")
        for check in checks:
            status = "PASS" if check.passed else "FAIL"
            self._write(f"  [{status}] {check.name:36} {check.detail}\n")
        failed = sum(1 for check in checks if not check.passed)
        self._write("\n")
        self._write(f"{len(checks) - failed}/{len(checks)} checks passed\n\n")

    def display_selection(
        self,
        selection: EmbeddingSelection,
        full_estimate: Optional[float] = None,
        ground_truth: Optional[float] = None,
    ) -> None:
        """
        Display the SLOPE++ candidates of an embedding selection.

        Args:
            selection: Result of ``select_embedding_dims``.
            full_estimate: MIPS estimate with every observed dimension.
            ground_truth: True policy value, if known.
        """
        self._display_banner()
        self._display_heading("EMBEDDING SELECTION")
        self._write(f"  {'dims':40} {'estimate':>14} {'cnf':>14}\n")
        self._write("-" * RULE_WIDTH + "\n")
        for candidate in selection.candidates:
            marker = "*" if candidate.label == selection.dims else " "
            dims = ",".join(str(k) for k in candidate.label)
            self._write(f"{marker} {dims:40} {candidate.estimate:14.6f} {candidate.cnf:14.6f}\n")
        self._write("\n")
        self._write(f"Selected dims: {list(selection.dims)}\n")
        self._write(f"MIPS (selected): {selection.record.estimate:.6f}\n")
        if full_estimate is not None:
            self._write(f"MIPS (all dims): {full_estimate:.6f}\n")
        if ground_truth is not None:
            self._write(f"V(pi): {ground_truth:.6f}\n")
        self._write("\n")

    def display_cdf(self, table: CdfTable, thresholds: Sequence[float] = (0.1, 0.5, 1.0, 2.0)) -> None:
        """
        Display the bootstrap CDF summary: F(z) at a few thresholds per estimator.

        Args:
            table: Result of ``bootstrap_cdf``.
            thresholds: Relative squared errors at which F is reported.
        """
        self._display_banner()
        self._display_heading("RELATIVE SQUARED ERROR W.R.T. IPS")
        self._write(f"V_on: {table.on_policy_value:.6f}\n")
        self._write(f"Dropped resamples (IPS exact): {len(table.flagged)}\n")
        self._write(f"Failed estimator runs: {len(table.failures)}\n\n")
        columns = "".join(f"{'F(' + format(z, 'g') + ')':>10}" for z in thresholds)
        self._write(f"  {'estimator':14} {'runs':>6} {'median':>12}{columns}\n")
        self._write("-" * RULE_WIDTH + "\n")
        for name, values in table.relative_errors.items():
            median = f"{np.median(values):12.4g}" if values.size else f"{'-':>12}"
            cells = "".join(f"{table.cdf(name, z):10.2f}" for z in thresholds)
            self._write(f"  {name:14} {values.size:6d} {median}{cells}\n")
        self._write("\n")

    def display_rows(self, title: str, rows: Dict[str, Any]) -> None:
        """Display a titled block of ``key : value`` lines."""
        self._display_heading(title)
        for key, value in rows.items():
            self._write(f"  {key:30} : {value}\n")
        self._write("\n")

    def _display_heading(self, title: str) -> None:
        self._write("=" * RULE_WIDTH + "\n")
        self._write(f"{title}\n")
        self._write("=" * RULE_WIDTH + "\n")

    def _display_banner(self) -> None:
        """
        Display the MIPSBENCH banner.

        The name sits centred in a box of block characters between two
        ``=`` rules.
        """
        self._write("\n")
        self._write("=" * RULE_WIDTH + "\n")
        self._write("\n")
        self._write("  " + "█" * 76 + "\n")
        self._write("  " + "█" + " " * 74 + "█" + "\n")
        self._write("  " + "█" + " " * 33 + "MIPSBENCH" + " " * 32 + "█" + "\n")
        self._write("  " + "█" + " " * 74 + "█" + "\n")
        self._write("  " + "█" * 76 + "\n")
        self._write("\n")
        self._write("=" * RULE_WIDTH + "\n")
        self._write("\n")

    def _write(self, text: str) -> None:
        """
        Write text to the configured output stream.

        Args:
            text: String to write; include newlines where wanted.
        """
        self.output.write(text)
