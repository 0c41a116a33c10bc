"""
Test suite for src/groupscheme/young.py
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.groupscheme.young import YoungDiagram, necessary_condition, young_join
from src.utils.errors import InvalidDescriptor, ParseError

diagrams = st.lists(st.integers(1, 5), min_size=1, max_size=4).map(
    lambda rows: YoungDiagram(tuple(sorted(rows, reverse=True)))
)


def test_join_example():
    assert young_join([YoungDiagram((3, 1)), YoungDiagram((2, 2))]).rows == (3, 2)


def test_diagram_shape():
    diagram = YoungDiagram((3, 1))
    assert diagram.boxes == 4
    assert diagram.first_column == 2
    assert diagram.width == 3
    assert diagram.column(2) == 1
    assert str(diagram) == "3,1"


def test_parse():
    assert YoungDiagram.parse("3,1") == YoungDiagram((3, 1))
    assert YoungDiagram.parse("(2, 2)") == YoungDiagram((2, 2))
    with pytest.raises(ParseError):
        YoungDiagram.parse("3,a")
    with pytest.raises(InvalidDescriptor):
        YoungDiagram.parse("1,3")
    with pytest.raises(InvalidDescriptor):
        YoungDiagram(())


@given(diagrams, diagrams, diagrams)
def test_join_is_a_lattice_join(a, b, c):
    assert young_join([a, b]) == young_join([b, a])
    assert young_join([a, a]) == a
    assert young_join([young_join([a, b]), c]) == young_join([a, young_join([b, c])])
    joined = young_join([a, b])
    assert all(j >= r for j, r in zip(joined.rows, a.rows))


def test_join_of_nothing():
    with pytest.raises(InvalidDescriptor):
        young_join([])


@pytest.mark.parametrize(
    "rows,mu,n,expected",
    [
        ((1,), 0, 1, True),
        ((3, 1), 0, 2, False),
        ((3, 1), 0, 3, True),
        ((2,), 1, 2, False),
        ((2,), 1, 3, True),
        (None, 2, 1, False),
    ],
)
def test_necessary_condition(rows, mu, n, expected):
    diagram = YoungDiagram(rows) if rows else None
    assert necessary_condition(diagram, mu, n) is expected
