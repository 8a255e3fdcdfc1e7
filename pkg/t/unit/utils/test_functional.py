import pytest

from sdnmc.utils.functional import ordered_unique


@pytest.mark.parametrize('input,expected', [
    (['S2', 'S1', 'S2', 'S3', 'S1'], ('S2', 'S1', 'S3')),
    ([], ()),
    (iter([3, 3, 3]), (3,)),
])
def test_ordered_unique(input, expected):
    assert ordered_unique(input) == expected
