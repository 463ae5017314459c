"""
Smith normal form and integer lattice helpers.

All kernel, cokernel and cohomology computations over Z/n are lifted to
integer matrices and solved here. Matrices are plain row lists of Python
ints; the column count is passed explicitly wherever a matrix may have no
rows.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from ..config import LabConfig
from ..errors import VerificationError

IntMatrix = List[List[int]]
Vector = Tuple[int, ...]


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def matmul(a: IntMatrix, b: IntMatrix, cols: int) -> IntMatrix:
    """Product of a (r x k) and b (k x cols)."""
    inner = len(b)
    return [
        [sum(a[i][t] * b[t][j] for t in range(inner)) for j in range(cols)]
        for i in range(len(a))
    ]


def matvec(a: IntMatrix, v: Sequence[int]) -> List[int]:
    return [sum(row[t] * v[t] for t in range(len(v))) for row in a]


def columns_to_matrix(columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
    return [[int(col[i]) for col in columns] for i in range(rows)]


def column(a: IntMatrix, j: int) -> List[int]:
    return [row[j] for row in a]


@dataclass(frozen=True)
class SmithForm:
    """U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: Tuple[Tuple[int, ...], ...]
    D: Tuple[Tuple[int, ...], ...]
    V: Tuple[Tuple[int, ...], ...]
    rows: int
    cols: int

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i][i] for i in range(min(self.rows, self.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(
    matrix: Sequence[Sequence[int]], cols: Optional[int] = None
) -> SmithForm:
    """
    Smith normal form of an integer matrix.

    Args:
        matrix: Row-major integer matrix
        cols: Column count (required when the matrix has no rows)

    Returns:
        SmithForm with U * A * V = D
    """
    rows = len(matrix)
    if cols is None:
        cols = len(matrix[0]) if rows else 0
    if rows == 0 or cols == 0:
        return SmithForm(
            U=_freeze(identity(rows)),
            D=_freeze(zeros(rows, cols)),
            V=_freeze(identity(cols)),
            rows=rows,
            cols=cols,
        )

    dm = DomainMatrix(
        [[ZZ(int(a)) for a in row] for row in matrix], (rows, cols), ZZ
    )
    smf, s, t = smith_normal_decomp(dm)
    u, d = _to_ints(s), _to_ints(smf)
    # invariant factors are taken positive
    for i in range(min(rows, cols)):
        if d[i][i] < 0:
            u[i] = [-a for a in u[i]]
            d[i] = [-a for a in d[i]]
    form = SmithForm(
        U=_freeze(u),
        D=_freeze(d),
        V=_freeze(_to_ints(t)),
        rows=rows,
        cols=cols,
    )
    if LabConfig.VERIFY_SMITH:
        verify_smith_form(matrix, form)
    return form


def verify_smith_form(matrix: Sequence[Sequence[int]], form: SmithForm):
    """Raise VerificationError unless the decomposition is exact."""
    a = [list(map(int, row)) for row in matrix]
    ua = matmul([list(r) for r in form.U], a, form.cols)
    uav = matmul(ua, [list(r) for r in form.V], form.cols)
    if [tuple(r) for r in uav] != list(form.D):
        raise VerificationError("Smith form check failed: U*A*V != D")

    for i in range(form.rows):
        for j in range(form.cols):
            if i != j and form.D[i][j] != 0:
                raise VerificationError("Smith form is not diagonal")

    diagonal = form.diagonal
    for a_i, b_i in zip(diagonal, diagonal[1:]):
        if a_i < 0 or b_i < 0:
            raise VerificationError("Smith form has a negative entry")
        if a_i == 0 and b_i != 0:
            raise VerificationError("Smith form zeros are not trailing")
        if a_i != 0 and b_i % a_i != 0:
            raise VerificationError("Smith form divisibility chain broken")

    for name, m in (("U", form.U), ("V", form.V)):
        if m and abs(Matrix([list(r) for r in m]).det()) != 1:
            raise VerificationError(f"Smith form {name} is not unimodular")


def integer_kernel(matrix: Sequence[Sequence[int]], cols: int) -> List[List[int]]:
    """Basis (as column vectors) of {x in Z^cols : A x = 0}."""
    form = smith_normal_form(matrix, cols)
    r = form.rank
    return [[form.V[i][j] for i in range(cols)] for j in range(r, cols)]


def solve_integer(
    matrix: Sequence[Sequence[int]], cols: int, rhs: Sequence[int]
) -> Optional[List[int]]:
    """
    One integer solution of A z = b, or None when none exists.
    """
    rows = len(matrix)
    form = smith_normal_form(matrix, cols)
    ub = matvec([list(r) for r in form.U], rhs)
    w = [0] * cols
    for i in range(rows):
        d = form.D[i][i] if i < cols else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % d != 0:
                return None
            w[i] = ub[i] // d
    return matvec([list(r) for r in form.V], w)


def unimodular_inverse(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    if not m:
        return []
    inverse = Matrix([list(r) for r in m]).inv()
    result = [[int(inverse[i, j]) for j in range(inverse.cols)] for i in range(inverse.rows)]
    if any(inverse[i, j] != result[i][j] for i in range(inverse.rows) for j in range(inverse.cols)):
        raise VerificationError("inverse of a unimodular matrix is not integral")
    return result


@dataclass(frozen=True)
class LatticeQuotient:
    """
    L / N for full-rank lattices N <= L <= Z^k, in invariant-factor form.

    generators[i] is an ambient vector of L representing the i-th cyclic
    generator of order factors[i]; coordinates() inverts this on L.
    """

    ambient_rank: int
    factors: Tuple[int, ...]
    generators: Tuple[Vector, ...]
    basis_change: Tuple[Tuple[int, ...], ...]  # s from the SNF of L's generators
    basis_scales: Tuple[int, ...]  # D_i with L = s^-1 diag(D) Z^k
    quotient_change: Tuple[Tuple[int, ...], ...]  # p from the SNF of N in L-coordinates
    kept: Tuple[int, ...]  # indices i with Delta_i != 1
    orders: Tuple[int, ...]  # all Delta_i

    def coordinates(self, v: Sequence[int]) -> Vector:
        """Coordinates in the quotient of an ambient vector lying in L."""
        if self.ambient_rank == 0:
            return ()
        w = matvec([list(r) for r in self.basis_change], [int(a) for a in v])
        for i, scale in enumerate(self.basis_scales):
            if w[i] % scale != 0:
                raise VerificationError("vector does not lie in the lattice")
            w[i] //= scale
        u = matvec([list(r) for r in self.quotient_change], w)
        return tuple(u[i] % self.orders[i] for i in self.kept)


def lattice_quotient(
    generators: Sequence[Sequence[int]],
    relations: Sequence[Sequence[int]],
    ambient_rank: int,
) -> LatticeQuotient:
    """
    Compute L / N where L is spanned by `generators` and N by `relations`.

    Both must be full rank in Z^ambient_rank and N must lie inside L.
    """
    k = ambient_rank
    if k == 0:
        return LatticeQuotient(0, (), (), (), (), (), (), ())

    g = columns_to_matrix(generators, k)
    basis_form = smith_normal_form(g, len(generators))
    scales = basis_form.diagonal[:k]
    if len(scales) < k or any(d == 0 for d in scales):
        raise VerificationError("generating lattice is not full rank")
    s = [list(r) for r in basis_form.U]

    # N in L-coordinates: C = diag(D)^-1 s N
    rel = columns_to_matrix(relations, k)
    srel = matmul(s, rel, len(relations))
    c = []
    for i in range(k):
        row = []
        for value in srel[i]:
            if value % scales[i] != 0:
                raise VerificationError("relation lattice is not inside the generating lattice")
            row.append(value // scales[i])
        c.append(row)

    quotient_form = smith_normal_form(c, len(relations))
    orders = quotient_form.diagonal[:k]
    if len(orders) < k or any(d == 0 for d in orders):
        raise VerificationError("quotient is not finite")
    p = [list(r) for r in quotient_form.U]
    kept = tuple(i for i in range(k) if orders[i] != 1)

    # generator i of the quotient is s^-1 diag(D) p^-1 e_i
    s_inv = unimodular_inverse(s)
    p_inv = unimodular_inverse(p)
    basis = [[s_inv[r][j] * scales[j] for j in range(k)] for r in range(k)]
    ambient = matmul(basis, p_inv, k)
    gens = tuple(tuple(ambient[r][i] for r in range(k)) for i in kept)

    return LatticeQuotient(
        ambient_rank=k,
        factors=tuple(orders[i] for i in kept),
        generators=gens,
        basis_change=_freeze(s),
        basis_scales=tuple(scales),
        quotient_change=_freeze(p),
        kept=kept,
        orders=tuple(orders),
    )


def _to_ints(dm) -> IntMatrix:
    return [[int(a) for a in row] for row in dm.to_list()]


def _freeze(m: IntMatrix) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(int(a) for a in row) for row in m)
