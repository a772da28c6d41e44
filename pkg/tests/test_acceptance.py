"""One check per acceptance criterion, each printing a single pass/fail line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
"""

import pytest

from coinflip import acceptance

CRITERIA = [
    acceptance.criterion_1,
    acceptance.criterion_2,
    acceptance.criterion_3,
    acceptance.criterion_4,
    acceptance.criterion_5,
    acceptance.criterion_6,
    acceptance.criterion_7,
    acceptance.criterion_8,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.detail
