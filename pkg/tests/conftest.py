"""Shared helpers plus a terminal summary line per acceptance test."""

from __future__ import annotations

from sumsim.overlap import SummaryPair
from sumsim.text import normalize_tokenize


def ts(text, mode="standard"):
    return normalize_tokenize(text, mode)


def make_pair(pred, ref, item_id="item", mode="standard"):
    return SummaryPair(item_id, ts(pred, mode), ts(ref, mode))


def pytest_collection_modifyitems(config, items):
    docs = {}
    for item in items:
        if "test_acceptance" not in item.nodeid.split("::")[0]:
            continue
        func = getattr(item, "function", None)
        doc = (getattr(func, "__doc__", None) or item.name).strip()
        docs[item.nodeid] = doc.splitlines()[0]
    config._acceptance_docs = docs


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    docs = getattr(config, "_acceptance_docs", None)
    if not docs:
        return
    outcomes = {}
    for status in ("passed", "failed", "error", "skipped"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", None)
            if nodeid not in docs:
                continue
            previous = outcomes.get(nodeid)
            if previous is None or status != "passed":
                outcomes[nodeid] = status
    if not outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    words = {"passed": "PASS", "failed": "FAIL", "error": "FAIL", "skipped": "SKIP"}
    for nodeid in sorted(outcomes):
        terminalreporter.write_line(f"[{words[outcomes[nodeid]]}] {docs[nodeid]}")
