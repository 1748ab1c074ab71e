"""Report files for verification runs: one delimited table of every check
record, plus rendered charts of verdict counts and timing totals.

Matplotlib is imported lazily and pinned to the Agg backend so report
writing works headless and the kernel itself never pays the import.
"""

from __future__ import annotations

import csv
import os

from .checks import CHECK_IDS, VerifyReport

EXTRA_ROWS = ("expect", "expectfail")


def _row_order(reports):
    for rep in reports:
        for r in rep.records:
            yield rep.fixture, r


def write_csv(reports: list[VerifyReport], path: str, stable: bool = False):
    fields = ["fixture", "check", "inputs", "lhs", "rhs", "verdict"]
    if not stable:
        fields.append("ms")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(fields)
        for fixture, r in _row_order(reports):
            row = [fixture, r.check, r.inputs, r.lhs, r.rhs,
                   "pass" if r.verdict else "fail"]
            if not stable:
                row.append(f"{r.ms:.3f}")
            w.writerow(row)


def _verdict_counts(reports):
    labels = list(CHECK_IDS) + list(EXTRA_ROWS)
    passed = {k: 0 for k in labels}
    failed = {k: 0 for k in labels}
    for _, r in _row_order(reports):
        if r.check not in passed:  # defensive: never drop a record
            passed[r.check] = 0
            failed[r.check] = 0
            labels.append(r.check)
        (passed if r.verdict else failed)[r.check] += 1
    labels = [k for k in labels if passed[k] or failed[k]]
    return labels, passed, failed


def write_charts(reports: list[VerifyReport], outdir: str,
                 stable: bool = False) -> list[str]:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []
    labels, passed, failed = _verdict_counts(reports)
    if labels:
        fig, ax = plt.subplots(figsize=(max(6, 0.9 * len(labels)), 4))
        xs = range(len(labels))
        ax.bar(xs, [passed[k] for k in labels], color="#2a9d3f", label="pass")
        ax.bar(xs, [failed[k] for k in labels],
               bottom=[passed[k] for k in labels], color="#c0392b",
               label="fail")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(labels, rotation=45, ha="right")
        ax.set_ylabel("checks")
        ax.set_title("verdicts by check")
        ax.legend()
        fig.tight_layout()
        path = os.path.join(outdir, "verdicts.png")
        fig.savefig(path)
        plt.close(fig)
        written.append(path)
    if not stable:
        totals = {}
        for _, r in _row_order(reports):
            totals[r.check] = totals.get(r.check, 0.0) + r.ms
        keys = [k for k in list(CHECK_IDS) + list(EXTRA_ROWS)
                if k in totals] + sorted(set(totals) - set(CHECK_IDS)
                                         - set(EXTRA_ROWS))
        if keys:
            fig, ax = plt.subplots(figsize=(6, max(3, 0.45 * len(keys))))
            ax.barh(range(len(keys)), [totals[k] for k in keys],
                    color="#30607a")
            ax.set_yticks(range(len(keys)))
            ax.set_yticklabels(keys)
            ax.invert_yaxis()
            ax.set_xlabel("total ms")
            ax.set_title("time by check")
            fig.tight_layout()
            path = os.path.join(outdir, "timings.png")
            fig.savefig(path)
            plt.close(fig)
            written.append(path)
    return written


def write_report(reports: list[VerifyReport], outdir: str,
                 stable: bool = False) -> list[str]:
    """Write report.csv and the charts into outdir; returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, "report.csv")
    write_csv(reports, csv_path, stable=stable)
    return [csv_path] + write_charts(reports, outdir, stable=stable)
