"""Acceptance gate: every criterion at its stated tolerance.

Each criterion prints one PASS/FAIL line per record; the lines are repeated in
the terminal summary so they appear in ordinary ``pytest`` output.
"""

import pytest

from kmspec import acceptance

LINES: list[str] = []


@pytest.mark.parametrize("cid", sorted(acceptance.CRITERIA))
def test_criterion(cid):
    records = acceptance.CRITERIA[cid]()
    assert records
    for rec in records:
        line = acceptance.format_line(rec)
        LINES.append(line)
        print(line)
    failed = [rec["id"] for rec in records if not rec["pass"]]
    assert not failed, f"criterion {cid} failed: {failed}"
