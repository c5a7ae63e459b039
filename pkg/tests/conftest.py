"""Independent oracles shared by the test modules.

These deliberately avoid the package's rank engine and evaluation pruning:
plain Fraction Gaussian elimination and exhaustive substitution of every
basis element.
"""

import itertools
from fractions import Fraction

from utpi.freelie import Bracket, GradedVariable, fixed_first_basis
from utpi.matrixalg import UpperTriMatrix, bracket


def naive_rank(rows):
    """Rank of a list of equal-length rows by Fraction Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def naive_value(mono, assign):
    if isinstance(mono, GradedVariable):
        return assign[mono]
    assert isinstance(mono, Bracket)
    return bracket(naive_value(mono.left, assign), naive_value(mono.right, assign))


def naive_dim(alg, degrees):
    """dim P_m^a by evaluating every spanning monomial on every basis assignment."""
    variables = [GradedVariable(i + 1, d) for i, d in enumerate(degrees)]
    comps = [alg.component(d) for d in degrees]
    if any(not c for c in comps):
        return 0
    monos = fixed_first_basis(variables)
    n = alg.n
    positions = [(i, j) for i in range(n) for j in range(i, n)]
    rows = [[] for _ in monos]
    for choice in itertools.product(*comps):
        assign = {v: b.matrix for v, b in zip(variables, choice)}
        for r, mono in zip(rows, monos):
            val: UpperTriMatrix = naive_value(mono, assign)
            r.extend(val[p] for p in positions)
    return naive_rank(rows)
