"""Exact rational linear algebra.

Matrices are dense row-major lists of lists of ``fractions.Fraction``;
vectors are flat lists.  Every routine is bit-exact: there is no rounding
anywhere, so "singular" and "full rank" are decidable predicates rather
than tolerance judgements.  All functions return fresh objects and never
mutate their arguments, which makes concurrent use safe.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import (
    DegenerateBlocksError,
    DegenerateColumnsError,
    RootSearchOverflowError,
    SingularMatrixError,
)

Vector = list
Matrix = list


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" (canonical reduced form, q > 0)."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1."""
    value = frac(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def zero_vector(n: int) -> Vector:
    return [Fraction(0)] * n


def zero_matrix(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def unit_matrix(n: int, i: int, j: int) -> Matrix:
    """n x n matrix with a single 1 in entry (i, j), 0-based."""
    m = zero_matrix(n, n)
    m[i][j] = Fraction(1)
    return m


def copy_matrix(m: Matrix) -> Matrix:
    return [row[:] for row in m]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def mat_vec(m: Matrix, v: Vector) -> Vector:
    return [sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in m]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((ra[k] * cb[k] for k in range(len(ra))), Fraction(0)) for cb in bt] for ra in a]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, m: Matrix) -> Matrix:
    c = frac(c)
    return [[c * x for x in row] for row in m]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))


def _check_rectangular(m: Matrix):
    if m and any(len(row) != len(m[0]) for row in m):
        raise ValueError("matrix is not rectangular")


def rank(m: Matrix) -> int:
    """Exact rank by forward elimination with partial pivoting on nonzero pivots."""
    _check_rectangular(m)
    if not m or not m[0]:
        return 0
    work = copy_matrix(m)
    rows, cols = len(work), len(work[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = 1 / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(r + 1, rows):
            f = work[i][c]
            if f:
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == rows:
            break
    return r


def _rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form of a copy, plus the pivot column indices."""
    work = copy_matrix(m)
    if not work or not work[0]:
        return work, []
    rows, cols = len(work), len(work[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = 1 / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(rows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return work, pivots


def solve(m: Matrix, b: Vector) -> Vector:
    """Exact solution of the square system m x = b.

    Raises SingularMatrixError when the system has no unique solution; in the
    learner this signals a violation of the full-rank invariant on M.
    """
    _check_rectangular(m)
    n = len(m)
    if n == 0:
        return []
    if len(m[0]) != n:
        raise ValueError("solve expects a square matrix")
    if len(b) != n:
        raise ValueError("dimension mismatch between matrix and right-hand side")
    aug = [row[:] + [frac(b[i])] for i, row in enumerate(m)]
    red, pivots = _rref(aug)
    if len(pivots) != n or any(p >= n for p in pivots):
        raise SingularMatrixError("square system has no unique solution")
    return [red[i][n] for i in range(n)]


def solve_consistent(a: Matrix, b: Vector) -> Vector | None:
    """One exact solution of a general (possibly rectangular) system, or None.

    Free variables are set to zero.  Returns None when the system is
    inconsistent.
    """
    _check_rectangular(a)
    rows = len(a)
    cols = len(a[0]) if a else 0
    aug = [a[i][:] + [frac(b[i])] for i in range(rows)]
    red, pivots = _rref(aug)
    if cols in pivots:
        return None
    x = zero_vector(cols)
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return x


def nullspace(m: Matrix) -> list[Vector]:
    """Basis of the exact kernel of m, one vector per free column."""
    _check_rectangular(m)
    if not m or not m[0]:
        return []
    cols = len(m[0])
    red, pivots = _rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = zero_vector(cols)
        v[free] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][free]
        basis.append(v)
    return basis


def least_squares(a: Matrix, b: Vector) -> Vector:
    """Exact least-squares solution via the normal equations aT a x = aT b.

    Requires linearly independent columns; raises DegenerateColumnsError
    otherwise.  For consistent systems this coincides with the exact solution.
    """
    _check_rectangular(a)
    at = transpose(a)
    gram = mat_mul(at, a)
    if rank(gram) != len(gram):
        raise DegenerateColumnsError("columns are linearly dependent")
    return solve(gram, mat_vec(at, b))


def _vec_of(m: Matrix) -> Vector:
    return [x for row in m for x in row]


def solve_matrix_system(blocks: list[Matrix], target: Matrix) -> tuple[Vector, bool]:
    """Find delta with sum_k delta_k * blocks[k] == target.

    The blocks are flattened into the columns of an n^2 x n system.  When the
    flattened system is consistent the exact solution is returned with flag
    True; otherwise the exact least-squares solution of the flattened system
    is returned with flag False.  Raises DegenerateBlocksError when the
    flattened blocks are linearly dependent.
    """
    n = len(blocks)
    if n < 1:
        raise ValueError("need at least one block")
    size = len(blocks[0])
    for blk in blocks:
        if len(blk) != size or any(len(row) != size for row in blk):
            raise ValueError("blocks must all be square and equally sized")
    if len(target) != size or any(len(row) != size for row in target):
        raise ValueError("target dimension differs from block dimension")
    a = transpose([_vec_of(blk) for blk in blocks])
    b = _vec_of(target)
    try:
        delta = least_squares(a, b)
    except DegenerateColumnsError as exc:
        raise DegenerateBlocksError("flattened blocks are linearly dependent") from exc
    consistent = mat_vec(a, delta) == [frac(x) for x in b]
    return delta, consistent


def charpoly(a: Matrix) -> list[Fraction]:
    """Characteristic polynomial of a square matrix, exact.

    Returns monic coefficients low degree first: p(x) = sum c[i] x^i with
    c[n] == 1.  Uses the Faddeev-LeVerrier recurrence over Fractions.
    """
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("charpoly expects a square matrix")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = zero_matrix(n, n)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        m = mat_mul(a, m)
        ck = coeffs[n - k + 1]
        for i in range(n):
            m[i][i] += ck
        am = mat_mul(a, m)
        trace = sum((am[i][i] for i in range(n)), Fraction(0))
        coeffs[n - k] = -trace / k
    return coeffs


def _poly_eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_deriv(p: list[Fraction]) -> list[Fraction]:
    return [c * i for i, c in enumerate(p)][1:] or [Fraction(0)]


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p if p else [Fraction(0)]


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if b == [Fraction(0)]:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    rem = a[:]
    while len(rem) >= len(b) and _poly_trim(rem) != [Fraction(0)]:
        rem = _poly_trim(rem)
        if len(rem) < len(b):
            break
        shift = len(rem) - len(b)
        factor = rem[-1] / b[-1]
        quot[shift] = factor
        for i, c in enumerate(b):
            rem[shift + i] -= factor * c
        rem = rem[:-1]
    return _poly_trim(quot), _poly_trim(rem)


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    while b != [Fraction(0)]:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a[-1] != 0:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(0xC0FFEE ^ n)
    while True:
        c = rng.randrange(1, n)
        x = rng.randrange(2, n)
        y = x
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def factor_integer(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 (trial division plus Pollard rho)."""
    if n < 1:
        raise ValueError("factor_integer expects a positive integer")
    factors: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    d = 17
    while d * d <= n and d < 100000:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return factors


def _divisors(factors: dict[int, int], cap: int) -> list[int]:
    divs = [1]
    for p, e in sorted(factors.items()):
        divs = [d * p**k for d in divs for k in range(e + 1)]
        if len(divs) > cap:
            raise RootSearchOverflowError("too many divisors to enumerate")
    return divs


def rational_roots(p: list[Fraction], divisor_cap: int = 200_000) -> list[Fraction]:
    """All rational roots of a polynomial with Fraction coefficients.

    Works on the square-free part, so multiplicities are not reported.  The
    polynomial is rescaled to a monic integer polynomial whose rational roots
    are integers dividing the constant term; those divisors are enumerated
    from an exact factorization.  Raises RootSearchOverflowError when the
    divisor count exceeds divisor_cap.
    """
    p = _poly_trim([frac(c) for c in p])
    if len(p) == 1:
        return []
    g = _poly_divmod(p, _poly_gcd(p, _poly_deriv(p)))[0]
    roots = []
    if g[0] == 0 and len(g) > 1:
        # g is square-free, so x divides it at most once
        roots.append(Fraction(0))
        g = _poly_trim(g[1:])
    if len(g) == 1:
        return sorted(set(roots))
    lead = g[-1]
    g = [c / lead for c in g]
    scale = math.lcm(*(c.denominator for c in g))
    deg = len(g) - 1
    q_const = g[0] * scale**deg
    assert q_const.denominator == 1
    q0 = abs(int(q_const))
    if q0 == 0:
        raise AssertionError("zero constant term should have been stripped")
    for d in _divisors(factor_integer(q0), divisor_cap):
        for y in (d, -d):
            cand = Fraction(y, scale)
            if _poly_eval(g, cand) == 0:
                roots.append(cand)
    return sorted(set(roots))


def rational_eigenvalues(a: Matrix, divisor_cap: int = 200_000) -> list[Fraction]:
    """Rational eigenvalues of a square rational matrix, exactly."""
    return rational_roots(charpoly(a), divisor_cap=divisor_cap)
