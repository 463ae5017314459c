from hypothesis import given, settings, strategies as st
import pytest

from tstruct_lab.core.smith import (
    integer_kernel,
    lattice_quotient,
    matvec,
    smith_normal_form,
    solve_integer,
    verify_smith_form,
)
from tstruct_lab.errors import VerificationError


@pytest.mark.parametrize(
    "matrix, diagonal",
    [
        ([[2, 0], [1, 2]], [1, 4]),
        ([[6, 4], [4, 6]], [2, 10]),
        ([[0]], [0]),
        ([[-3]], [3]),
        ([[2, 4, 6]], [2]),
    ],
)
def test_smith_diagonal(matrix, diagonal):
    assert smith_normal_form(matrix).diagonal == diagonal


def test_empty_matrix_keeps_its_shape():
    form = smith_normal_form([], 3)
    assert (form.rows, form.cols) == (0, 3)
    assert form.rank == 0


def test_verify_rejects_a_tampered_form():
    form = smith_normal_form([[2, 0], [1, 2]])
    broken = type(form)(form.U, ((1, 0), (0, 8)), form.V, form.rows, form.cols)
    with pytest.raises(VerificationError):
        verify_smith_form([[2, 0], [1, 2]], broken)


matrices = st.integers(min_value=1, max_value=4).flatmap(
    lambda cols: st.lists(
        st.lists(st.integers(min_value=-20, max_value=20), min_size=cols, max_size=cols),
        min_size=1,
        max_size=4,
    )
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_smith_form_is_exact(matrix):
    form = smith_normal_form(matrix)
    verify_smith_form(matrix, form)
    assert all(d >= 0 for d in form.diagonal)


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_kernel_basis_is_annihilated(matrix):
    cols = len(matrix[0])
    for v in integer_kernel(matrix, cols):
        assert matvec(matrix, v) == [0] * len(matrix)


def test_solve_integer():
    matrix = [[2, 0], [0, 3]]
    assert matvec(matrix, solve_integer(matrix, 2, [4, 9])) == [4, 9]
    assert solve_integer(matrix, 2, [1, 0]) is None


def test_lattice_quotient_invariant_factors():
    unit = [[1, 0], [0, 1]]
    quotient = lattice_quotient(unit, [[4, 0], [0, 2]], 2)
    assert quotient.factors == (2, 4)
    assert quotient.coordinates([4, 2]) == (0, 0)
    assert quotient.coordinates([0, 1]) != (0, 0)

    collapsed = lattice_quotient(unit, [[2, 0], [0, 3]], 2)
    assert collapsed.factors == (6,)
