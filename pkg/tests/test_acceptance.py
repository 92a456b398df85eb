"""Runs every acceptance criterion at its stated tolerance.

One test per criterion; each prints its PASS/FAIL line so the suite output
doubles as the acceptance report.
"""
import pytest

from catalab.acceptance import ALL_CRITERIA


@pytest.mark.parametrize("key", sorted(ALL_CRITERIA))
def test_criterion(key, capsys):
    result = ALL_CRITERIA[key]()
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.passed, (
        f"criterion {key} failed: "
        f"{ {k: v for k, v in result.details.items() if k != 'reports'} }"
    )
