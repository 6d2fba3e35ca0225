"""Independent oracles used by the test suite.

These deliberately take different routes from the library code they check:
the simplicity oracle decides existence of a proper invariant graded subspace
over the complex numbers by direct case analysis (coordinate subspaces plus
exact common-invariant-line decisions), and the chamber oracle counts cells
of a 2-dimensional central arrangement by an exact angular sweep.
"""

from __future__ import annotations

import math
from fractions import Fraction

import sympy

from quiverk3 import linalg
from quiverk3.quiver import boxed_vectors
from quiverk3.reps import Representation, dual
from quiverk3.walls import nperp_basis, chamber_signature

# ---------------------------------------------------------------------------
# simplicity oracle


def _is_zero_matrix(m) -> bool:
    return all(all(e == 0 for e in row) for row in m)


def _columns(m):
    if not m:
        return []
    return [tuple(row[j] for row in m) for j in range(len(m[0]))]


def _coordinate_case(rep: Representation, beta) -> bool:
    """The unique candidate with W_i in {0, V_i}: check all arrows."""
    n = rep.n
    for (s, t, _), (x, y) in zip(rep.quiver.orientation, rep.mats):
        if beta[s] == n[s] > 0 and beta[t] == 0 < n[t] and not _is_zero_matrix(x):
            return False
        if beta[t] == n[t] > 0 and beta[s] == 0 < n[s] and not _is_zero_matrix(y):
            return False
    return True


def _line_exists(forced, kernel_rows, loop_mats, dim) -> bool:
    """Is there a line containing span(forced), killed by kernel_rows, and
    invariant under each loop matrix? Exact over the complex numbers."""
    fs = linalg.Span()
    for v in forced:
        fs.add(v)
    if fs.dim > 1:
        return False
    if fs.dim == 1:
        v = fs.basis()[0]
        for row_mat in kernel_rows:
            if any(e != 0 for e in linalg.mat_vec(row_mat, v)):
                return False
        for A in loop_mats:
            av = linalg.mat_vec(A, v)
            # av must be proportional to v
            if linalg.rank([v, av]) > 1:
                return False
        return True
    # forced span is zero: look for any line in the common kernel
    if kernel_rows:
        stacked = tuple(row for m in kernel_rows for row in m)
        kbasis = linalg.nullspace(stacked) if stacked else []
    else:
        kbasis = list(linalg.identity(dim))
    k = len(kbasis)
    if k == 0:
        return False
    if not loop_mats:
        return True
    if k == 1:
        v = kbasis[0]
        return all(linalg.rank([v, linalg.mat_vec(A, v)]) <= 1 for A in loop_mats)
    # parametrize v = sum w_m K_m and demand wedge(v, A v) = 0 for all loops
    ws = sympy.symbols(f"w0:{k}")
    vsym = [
        sum(sympy.Rational(kbasis[m][i]) * ws[m] for m in range(k))
        for i in range(dim)
    ]
    polys = []
    for A in loop_mats:
        av = [
            sum(sympy.Rational(A[i][j]) * vsym[j] for j in range(dim))
            for i in range(dim)
        ]
        for p in range(dim):
            for q in range(p + 1, dim):
                cond = sympy.expand(vsym[p] * av[q] - vsym[q] * av[p])
                if cond != 0:
                    polys.append(cond)
    if not polys:
        return True
    if k == 2:
        g = polys[0]
        for p in polys[1:]:
            g = sympy.gcd(g, p)
        return sympy.total_degree(g, *ws) >= 1
    if k == 3:
        # V(I) = {0} iff the leading-term ideal contains a pure power of
        # every variable (finiteness criterion for the homogeneous quotient)
        basis = sympy.groebner(polys, *ws, order="grevlex")
        pure = [False] * k
        for expr in basis.exprs:
            lm = sympy.LM(expr, *ws, order="grevlex")
            exps = sympy.Poly(lm, *ws).monoms()[0]
            nz = [i for i, e in enumerate(exps) if e > 0]
            if len(nz) == 1:
                pure[nz[0]] = True
        only_origin = all(pure)
        return not only_origin
    raise NotImplementedError(f"kernel dimension {k} out of oracle scope")


def _invariant_subspace_exists(rep: Representation, beta) -> bool:
    n = rep.n
    inter = [i for i in range(len(n)) if 0 < beta[i] < n[i]]
    if not inter:
        return _coordinate_case(rep, beta)
    if len(inter) > 1:
        raise NotImplementedError("two intermediate vertices need total dim > 3")
    j = inter[0]
    if beta[j] > 1:
        comp = tuple(ni - bi for ni, bi in zip(n, beta))
        return _invariant_subspace_exists(dual(rep), comp)
    # a line at vertex j, coordinate elsewhere: first the coordinate checks
    for (s, t, _), (x, y) in zip(rep.quiver.orientation, rep.mats):
        if s == j or t == j:
            continue
        if beta[s] == n[s] > 0 and beta[t] == 0 < n[t] and not _is_zero_matrix(x):
            return False
        if beta[t] == n[t] > 0 and beta[s] == 0 < n[s] and not _is_zero_matrix(y):
            return False
    forced: list[tuple[Fraction, ...]] = []
    kernel_rows = []
    loops = []
    for (s, t, _), (x, y) in zip(rep.quiver.orientation, rep.mats):
        if s == j and t == j:
            loops.append(x)
            loops.append(y)
            continue
        if t == j and s != j:
            if beta[s] == n[s] > 0:
                forced.extend(_columns(x))  # x: V_s -> V_j
            if beta[s] == 0 < n[s]:
                kernel_rows.append(y)  # y: V_j -> V_s must kill the line
        if s == j and t != j:
            if beta[t] == n[t] > 0:
                forced.extend(_columns(y))  # y: V_t -> V_j
            if beta[t] == 0 < n[t]:
                kernel_rows.append(x)  # x: V_j -> V_t must kill the line
    forced = [v for v in forced if any(e != 0 for e in v)]
    return _line_exists(forced, kernel_rows, loops, n[j])


def proper_invariant_subspace_exists(rep: Representation) -> bool:
    """Exact decision over the complex numbers, for total dimension <= 3."""
    n = rep.n
    if sum(n) > 3:
        raise NotImplementedError("oracle restricted to total dimension <= 3")
    zero = tuple(0 for _ in n)
    for beta in boxed_vectors(n):
        if beta == zero or beta == tuple(n):
            continue
        if _invariant_subspace_exists(rep, beta):
            return True
    return False


# ---------------------------------------------------------------------------
# 2-dimensional chamber oracle (angular sweep)


def _ray_cmp_sorted(rays):
    # sort by (half-plane, then by cross-product comparisons) using exact slope
    def key(r):
        x, y = r
        if y == 0:
            return (0, Fraction(0)) if x > 0 else (2, Fraction(0))
        if y > 0:
            return (1, Fraction(x, y) * -1)
        return (3, Fraction(x, y) * -1)

    return sorted(rays, key=key)


def sweep_chambers(q, n, walls):
    """Chambers of the induced central line arrangement in the plane n-perp:
    exact angular sweep. Returns (count, signature set) computed against the
    canonical wall order, independently of the library's sign recursion."""
    basis = nperp_basis(tuple(n))
    assert len(basis) == 2, "sweep oracle needs dim n-perp = 2"
    lines = {}
    for w in walls:
        c = tuple(
            sum(b[i] * w.normal[i] for i in range(len(n))) for b in basis
        )
        g = math.gcd(*(abs(x) for x in c))
        if g == 0:
            continue
        cr = tuple(x // g for x in c)
        first = next(x for x in cr if x != 0)
        if first < 0:
            cr = tuple(-x for x in cr)
        lines[cr] = c
    L = len(lines)
    if L == 0:
        theta = tuple(Fraction(b) for b in basis[0])
        return 1, {chamber_signature(theta, walls)}
    rays = []
    for cr in lines:
        a, b = cr
        rays.append((-b, a))
        rays.append((b, -a))
    rays = _ray_cmp_sorted(rays)
    sigs = set()
    count = 0
    for i in range(len(rays)):
        r1 = rays[i]
        r2 = rays[(i + 1) % len(rays)]
        if L == 1:
            # opposite rays: rotate one by 90 degrees to land inside a cell
            mid = (r1[1], -r1[0])
        else:
            mid = (r1[0] + r2[0], r1[1] + r2[1])
        if mid == (0, 0):
            continue
        theta = tuple(
            Fraction(mid[0] * basis[0][i] + mid[1] * basis[1][i])
            for i in range(len(n))
        )
        sig = chamber_signature(theta, walls)
        if 0 in sig:
            continue
        if sig not in sigs:
            sigs.add(sig)
            count += 1
    return count, sigs
