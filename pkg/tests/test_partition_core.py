import pytest
from hypothesis import given, settings, strategies as st

from corelimit.partition_core import (
    Partition,
    distinct_partitions_of,
    hook_lengths,
    hook_table,
    first_column_hooks,
    is_s_core,
    is_s_core_beta,
    is_st_core,
    partitions_of,
    perimeter,
    straub_check,
)


def brute_hooks(parts):
    """Hook lengths from the explicit cell set: count cells to the right and above."""
    cells = {(i, j) for i, p in enumerate(parts, 1) for j in range(1, p + 1)}
    table = {}
    for (i, j) in cells:
        arm = sum(1 for (r, c) in cells if r == i and c > j)
        leg = sum(1 for (r, c) in cells if c == j and r > i)
        table[i, j] = arm + leg + 1
    return table


partitions = st.lists(st.integers(1, 12), max_size=10).map(
    lambda xs: Partition(tuple(sorted(xs, reverse=True)))
).filter(lambda p: p.size <= 50)


def test_partition_validation():
    assert Partition((4, 3, 3, 3, 2)).size == 15
    assert Partition((4, 3, 3, 3, 2)).length == 5
    assert Partition().size == 0 and Partition().length == 0
    with pytest.raises(ValueError):
        Partition((2, 3))
    with pytest.raises(ValueError):
        Partition((2, 0))


def test_hook_interior_cell():
    # row 3 from the bottom, column 2
    assert hook_table((4, 3, 3, 3, 2))[2][1] == 4


def test_hook_empty():
    assert hook_table(()) == ()


def test_hook_three_one():
    # matches the (3,5)-core diagram with rows 1 / 4 2 1
    assert hook_table((3, 1)) == ((4, 2, 1), (1,))


@given(partitions)
def test_hook_table_matches_cell_geometry(p):
    table = hook_table(p)
    brute = brute_hooks(p.parts)
    assert sum(len(r) for r in table) == p.size == len(brute)
    for i, row in enumerate(table, 1):
        for j, h in enumerate(row, 1):
            assert h == brute[i, j]
        assert all(row[j] > row[j + 1] for j in range(len(row) - 1))


@given(partitions)
def test_hooks_invariant_under_conjugation(p):
    assert sorted(hook_lengths(p)) == sorted(hook_lengths(p.conjugate()))
    assert p.conjugate().conjugate() == p


@pytest.mark.parametrize("parts,s,expected", [
    ((2,), 3, True),
    ((), 7, True),
    ((1, 1, 1), 3, False),
])
def test_is_s_core(parts, s, expected):
    assert is_s_core(parts, s) is expected


@settings(max_examples=200)
@given(partitions, st.integers(1, 20))
def test_is_s_core_matches_brute(p, s):
    assert is_s_core(p, s) == (s not in brute_hooks(p.parts).values())


@pytest.mark.parametrize("parts,expected", [
    ((4, 2, 1, 1), True),
    ((), True),
    ((2, 2), False),
])
def test_is_st_core(parts, expected):
    assert is_st_core(parts, 3, 5) is expected


@pytest.mark.parametrize("parts,expected", [((5, 3, 2), 7), ((1,), 1), ((4, 3, 3, 3, 2), 8)])
def test_perimeter(parts, expected):
    assert perimeter(parts) == expected


def test_perimeter_empty_raises():
    with pytest.raises(ValueError, match="perimeter undefined"):
        perimeter(())


@pytest.mark.parametrize("parts,s,expected", [
    ((5, 3, 2), 9, True),
    ((), 1, True),
    ((5, 3, 2), 7, False),
])
def test_straub_check(parts, s, expected):
    assert straub_check(parts, s) is expected


def test_straub_check_rejects_repeated_parts():
    with pytest.raises(ValueError, match="requires distinct parts"):
        straub_check((2, 2), 5)


def test_straub_equals_hook_definition_exhaustive():
    checked = 0
    for n in range(31):
        for p in distinct_partitions_of(n):
            for s in range(1, 13):
                assert straub_check(p, s) == is_st_core(p, s, s + 1), (p, s)
                checked += 1
    assert checked > 3000


def test_partition_generators_count():
    # p(n) and q(n) for n = 10
    assert sum(1 for _ in partitions_of(10)) == 42
    assert sum(1 for _ in distinct_partitions_of(10)) == 10
    assert all(p.has_distinct_parts() for p in distinct_partitions_of(15))


def test_first_column_hooks():
    assert first_column_hooks((4, 3, 3, 3, 2)) == {8, 6, 5, 4, 2}
    assert first_column_hooks(()) == frozenset()


def test_beta_set_core_test_matches_hooks_exhaustive():
    for n in range(19):
        for p in partitions_of(n):
            for s in range(1, 12):
                assert is_s_core_beta(p.parts, s) == is_s_core(p, s), (p, s)
