"""Explicit representations of the doubled quiver.

Carries the moment map mu = sum [x_e, y_e] (blockwise: forward edges add
x_e y_e at their target and subtract y_e x_e at their source), its exact
linearization, a damped Gauss-Newton search for points of mu^-1(0), a
Burnside-closure simplicity test, and a sound-but-incomplete King stability
checker whose certified verdicts carry explicit witnesses.

Scalars are either exact rationals ("exact" mode) or complex doubles
("float" mode); the mode is chosen at construction and is uniform across a
representation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .errors import MathAssertionError
from .quiver import DimVector, Quiver, boxed_vectors, mu_zero_expected_dim, rep_space_dim

EXACT = "exact"
FLOAT = "float"


def _zeros(mode: str, r: int, c: int):
    return linalg.zeros(r, c) if mode == EXACT else np.zeros((r, c), dtype=complex)


def _eye(mode: str, k: int):
    return linalg.identity(k) if mode == EXACT else np.eye(k, dtype=complex)


def _mul(mode: str, a, b):
    return linalg.mat_mul(a, b) if mode == EXACT else a @ b


def _add(mode: str, a, b):
    return linalg.mat_add(a, b) if mode == EXACT else a + b


def _sub(mode: str, a, b):
    return linalg.mat_sub(a, b) if mode == EXACT else a - b


def _inv(mode: str, a):
    return linalg.mat_inv(a) if mode == EXACT else np.linalg.inv(a)


@dataclass(frozen=True)
class Representation:
    """Matrices (x_e, y_e) for each oriented edge of the quiver.

    x_e maps V_s(e) -> V_t(e) (shape n_t x n_s), y_e goes back.
    ``mats`` is aligned with ``quiver.orientation``.
    """

    quiver: Quiver
    n: DimVector
    mode: str
    mats: tuple[tuple[object, object], ...]

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown scalar mode {self.mode!r}")
        edges = self.quiver.orientation
        if len(self.mats) != len(edges):
            raise ValueError("one (x, y) pair per oriented edge required")
        for (s, t, _), (x, y) in zip(edges, self.mats):
            if not _shape_ok(self.mode, x, self.n[t], self.n[s]):
                raise ValueError(f"x matrix for edge {s}->{t} has wrong shape")
            if not _shape_ok(self.mode, y, self.n[s], self.n[t]):
                raise ValueError(f"y matrix for edge {s}->{t} has wrong shape")

    @property
    def total_dim(self) -> int:
        return sum(self.n)

    def to_float(self) -> "Representation":
        if self.mode == FLOAT:
            return self

        def conv(mat, rows, cols):
            out = np.zeros((rows, cols), dtype=complex)
            for i, row in enumerate(mat):
                for j, e in enumerate(row):
                    out[i, j] = complex(e)
            return out

        mats = tuple(
            (conv(x, self.n[t], self.n[s]), conv(y, self.n[s], self.n[t]))
            for (s, t, _), (x, y) in zip(self.quiver.orientation, self.mats)
        )
        return Representation(self.quiver, self.n, FLOAT, mats)


def _shape_ok(mode: str, m, rows: int, cols: int) -> bool:
    """Exact matrices with zero rows carry no column count; accept them."""
    if mode == FLOAT:
        return tuple(m.shape) == (rows, cols)
    return len(m) == rows and all(len(r) == cols for r in m)


def _transpose_to(mode: str, m, out_rows: int, out_cols: int):
    """Shape-aware transpose; exact empty matrices need explicit dimensions."""
    if mode == FLOAT:
        return m.T.copy()
    return tuple(tuple(m[j][i] for j in range(out_cols)) for i in range(out_rows))


@dataclass(frozen=True)
class GroupElement:
    """A tuple of invertible blocks (g_1, ..., g_s) acting by conjugation."""

    blocks: tuple[object, ...]
    mode: str = EXACT


def zero_representation(q: Quiver, n: DimVector, mode: str = EXACT) -> Representation:
    mats = tuple(
        (_zeros(mode, n[t], n[s]), _zeros(mode, n[s], n[t]))
        for s, t, _ in q.orientation
    )
    return Representation(q, tuple(n), mode, mats)


def random_representation(
    q: Quiver, n: DimVector, seed: int = 0, mode: str = EXACT, spread: int = 3
) -> Representation:
    """Seeded random representation; exact mode draws small rationals."""
    if mode == EXACT:
        rng = random.Random(seed)

        def entry():
            return Fraction(rng.randint(-spread, spread), rng.randint(1, 2))

        mats = tuple(
            (
                tuple(tuple(entry() for _ in range(n[s])) for _ in range(n[t])),
                tuple(tuple(entry() for _ in range(n[t])) for _ in range(n[s])),
            )
            for s, t, _ in q.orientation
        )
        return Representation(q, tuple(n), EXACT, mats)
    rng = np.random.default_rng(seed)

    def block(r, c):
        return rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))

    mats = tuple(
        (block(n[t], n[s]), block(n[s], n[t])) for s, t, _ in q.orientation
    )
    return Representation(q, tuple(n), FLOAT, mats)


def moment_map(rep: Representation) -> tuple:
    """Blockwise m_i = sum_{t(e)=i} x_e y_e - sum_{s(e)=i} y_e x_e.

    The blocks always sum to trace zero.
    """
    q, n, mode = rep.quiver, rep.n, rep.mode
    blocks = [_zeros(mode, ni, ni) for ni in n]
    for (s, t, _), (x, y) in zip(q.orientation, rep.mats):
        if n[s] == 0 or n[t] == 0:
            continue  # contributions through a zero space vanish
        blocks[t] = _add(mode, blocks[t], _mul(mode, x, y))
        blocks[s] = _sub(mode, blocks[s], _mul(mode, y, x))
    return tuple(blocks)


def moment_trace(rep: Representation):
    blocks = moment_map(rep)
    if rep.mode == EXACT:
        return sum((linalg.trace(b) for b in blocks), Fraction(0))
    return sum(np.trace(b) for b in blocks)


def act(g: GroupElement, rep: Representation) -> Representation:
    """x_e -> g_t x_e g_s^-1, y_e -> g_s y_e g_t^-1."""
    mode = rep.mode
    inv = [_inv(mode, b) for b in g.blocks]
    mats = []
    for (s, t, _), (x, y) in zip(rep.quiver.orientation, rep.mats):
        mats.append(
            (
                _mul(mode, _mul(mode, g.blocks[t], x), inv[s]),
                _mul(mode, _mul(mode, g.blocks[s], y), inv[t]),
            )
        )
    return Representation(rep.quiver, rep.n, mode, tuple(mats))


# ---------------------------------------------------------------------------
# linearization and the mu = 0 solver

# Flattening conventions (shared by moment_differential, _flatten, _unflatten):
# rows are moment-map entries, block by block, row-major; columns run over
# edges in orientation order, x_e entries row-major then y_e entries.


def _block_offsets(n: DimVector) -> list[int]:
    out = [0]
    for ni in n:
        out.append(out[-1] + ni * ni)
    return out


def moment_differential(rep: Representation):
    """Matrix of (dx, dy) -> sum [dx, y] + [x, dy], assembled exactly from
    the entries of the representation. Rank is at most n^t n - 1."""
    q, n, mode = rep.quiver, rep.n, rep.mode
    row_off = _block_offsets(n)
    nrows = row_off[-1]
    ncols = rep_space_dim(q, n)
    if mode == FLOAT:
        J = np.zeros((nrows, ncols), dtype=complex)

        def put(r, c, v):
            J[r, c] += v

        def get_x(mat, i, j):
            return mat[i, j]

    else:
        Jrows = [[Fraction(0)] * ncols for _ in range(nrows)]

        def put(r, c, v):
            Jrows[r][c] += v

        def get_x(mat, i, j):
            return mat[i][j]

    col = 0
    for (s, t, _), (x, y) in zip(q.orientation, rep.mats):
        ns, nt = n[s], n[t]
        # d(x_e y_e) at block t and -d(y_e x_e) at block s, w.r.t. x entries
        for a in range(nt):
            for b in range(ns):
                c = col + a * ns + b
                for qq in range(nt):  # (E_ab y)[a, qq] = y[b, qq]
                    put(row_off[t] + a * nt + qq, c, get_x(y, b, qq))
                for p in range(ns):  # (-y E_ab)[p, b] = -y[p, a]
                    put(row_off[s] + p * ns + b, c, -get_x(y, p, a))
        col += nt * ns
        # w.r.t. y entries
        for cc in range(ns):
            for dd in range(nt):
                c = col + cc * nt + dd
                for p in range(nt):  # (x E_cd)[p, dd] = x[p, cc]
                    put(row_off[t] + p * nt + dd, c, get_x(x, p, cc))
                for qq in range(ns):  # (-E_cd x)[cc, qq] = -x[dd, qq]
                    put(row_off[s] + cc * ns + qq, c, -get_x(x, dd, qq))
        col += ns * nt
    if mode == FLOAT:
        return J
    return tuple(tuple(row) for row in Jrows)


def _flatten_mats(rep: Representation) -> np.ndarray:
    parts = []
    for x, y in rep.mats:
        parts.append(np.asarray(x, dtype=complex).ravel())
        parts.append(np.asarray(y, dtype=complex).ravel())
    return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)


def _unflatten_mats(q: Quiver, n: DimVector, vec: np.ndarray) -> Representation:
    mats = []
    pos = 0
    for s, t, _ in q.orientation:
        x = vec[pos : pos + n[t] * n[s]].reshape(n[t], n[s])
        pos += n[t] * n[s]
        y = vec[pos : pos + n[s] * n[t]].reshape(n[s], n[t])
        pos += n[s] * n[t]
        mats.append((x, y))
    return Representation(q, tuple(n), FLOAT, tuple(mats))


def _residual(rep: Representation) -> np.ndarray:
    return np.concatenate([b.ravel() for b in moment_map(rep)])


def moment_residual_norm(rep: Representation) -> float:
    """Frobenius norm of the moment map over all blocks (float mode)."""
    return float(np.linalg.norm(_residual(rep)))


def solve_moment_zero(
    q: Quiver,
    n: DimVector,
    seed: int = 0,
    tol: float = 1e-12,
    max_iter: int = 100,
    start: Representation | None = None,
) -> Representation:
    """Damped Gauss-Newton search for a point of mu^-1(0), float mode.

    Each step solves the complex least-squares linearization and backtracks
    until the residual drops. Deterministic given the seed. Raises
    RuntimeError (carrying the final residual) on non-convergence.
    """
    if start is not None:
        rep = start.to_float()
    else:
        rep = random_representation(q, n, seed=seed, mode=FLOAT)
        # mild scaling keeps the start in the basin without landing on 0
        rep = _unflatten_mats(q, tuple(n), _flatten_mats(rep) * 0.5)
    z = _flatten_mats(rep)
    r = _residual(rep)
    for _ in range(max_iter):
        rnorm = np.linalg.norm(r)
        if rnorm <= tol:
            return rep
        J = moment_differential(rep)
        delta, *_ = np.linalg.lstsq(J, -r, rcond=None)
        step = 1.0
        improved = False
        while step >= 2.0**-40:
            cand_z = z + step * delta
            cand = _unflatten_mats(q, tuple(n), cand_z)
            cand_r = _residual(cand)
            if np.linalg.norm(cand_r) < rnorm:
                z, rep, r = cand_z, cand, cand_r
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    final = float(np.linalg.norm(_residual(rep)))
    if final <= tol:
        return rep
    raise RuntimeError(
        f"moment-map solver did not reach tol={tol:g}; final residual {final:.3e}"
    )


def numeric_rank(matrix: np.ndarray, tol: float = 1e-8) -> int:
    """Singular values below tol * (largest singular value) count as zero."""
    sv = np.linalg.svd(np.asarray(matrix, dtype=complex), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int((sv > tol * sv[0]).sum())


@dataclass(frozen=True)
class CiTrial:
    seed: int
    residual: float
    rank: int
    local_dim: int


@dataclass(frozen=True)
class CiDimReport:
    n: DimVector
    seed: int
    expected_rank: int
    expected_dim: int
    trials: tuple[CiTrial, ...]
    matching_trials: int
    advisory: bool  # True when the simple-existence criterion fails for n
    failures: tuple[str, ...] = ()


def verify_ci_dim(
    q: Quiver,
    n: DimVector,
    trials: int = 10,
    rank_tol: float = 1e-8,
    residual_tol: float = 1e-10,
    seed: int = 0,
) -> CiDimReport:
    """At seeded solutions of mu = 0, the numerical rank of d(mu) should be
    n^t n - 1, making the local dimension dim Rep - rank the complete
    intersection dimension 2p(n) + n^t n - 1."""
    from .quiver import cb_simple_exists

    expected_rank = sum(x * x for x in n) - 1
    expected_dim = mu_zero_expected_dim(q, n)
    if rep_space_dim(q, n) - expected_rank != expected_dim:
        raise MathAssertionError("dim Rep - (n.n - 1) != 2p(n) + n.n - 1")
    results = []
    failures = []
    for t in range(trials):
        s = seed + t
        try:
            rep = solve_moment_zero(q, n, seed=s, tol=residual_tol)
        except RuntimeError as exc:
            failures.append(f"seed {s}: {exc}")
            continue
        res = moment_residual_norm(rep)
        rank = numeric_rank(moment_differential(rep), tol=rank_tol)
        results.append(CiTrial(s, res, rank, rep_space_dim(q, n) - rank))
    matching = sum(
        1 for r in results if r.rank == expected_rank and r.residual <= residual_tol
    )
    return CiDimReport(
        tuple(n),
        seed,
        expected_rank,
        expected_dim,
        tuple(results),
        matching,
        advisory=not cb_simple_exists(q, n).exists,
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# simplicity, subrepresentations, stability


def _embed(mode: str, N: int, offs: list[int], mat, t: int, s: int):
    if mode == FLOAT:
        out = np.zeros((N, N), dtype=complex)
        out[offs[t] : offs[t + 1], offs[s] : offs[s + 1]] = mat
        return out
    rows = [[Fraction(0)] * N for _ in range(N)]
    for i, row in enumerate(mat):
        for j, v in enumerate(row):
            rows[offs[t] + i][offs[s] + j] = v
    return tuple(tuple(r) for r in rows)


def _vertex_offsets(n: DimVector) -> list[int]:
    out = [0]
    for ni in n:
        out.append(out[-1] + ni)
    return out


def is_simple(rep: Representation, tol: float = 1e-8) -> bool:
    """Burnside/density test: close the span of the vertex idempotents and
    all arrow matrices under multiplication; the representation is simple
    exactly when the span fills End of the total space. Exact in rational
    mode; float mode uses a tolerance-based rank."""
    n = rep.n
    N = sum(n)
    if N == 0:
        return False
    offs = _vertex_offsets(n)
    mode = rep.mode
    gens = []
    for i, ni in enumerate(n):
        if ni > 0:
            gens.append(_embed(mode, N, offs, _eye(mode, ni), i, i))
    for (s, t, _), (x, y) in zip(rep.quiver.orientation, rep.mats):
        if n[s] > 0 and n[t] > 0:
            gens.append(_embed(mode, N, offs, x, t, s))
            gens.append(_embed(mode, N, offs, y, s, t))

    if mode == EXACT:
        span = linalg.Span()

        def flat(m):
            return tuple(v for row in m for v in row)

        frontier = []
        for g in [_eye(mode, N)] + gens:
            if span.add(flat(g)):
                frontier.append(g)
        while frontier and span.dim < N * N:
            nxt = []
            for m in frontier:
                for g in gens:
                    p = linalg.mat_mul(g, m)
                    if span.add(flat(p)):
                        nxt.append(p)
            frontier = nxt
        return span.dim == N * N

    basis: list[np.ndarray] = []

    def try_add(m) -> bool:
        v = m.ravel().astype(complex)
        for b in basis:
            v = v - (b.conj() @ v) * b
        norm = np.linalg.norm(v)
        if norm > tol * max(1.0, float(np.linalg.norm(m))):
            basis.append(v / norm)
            return True
        return False

    frontier = [g for g in [_eye(mode, N)] + gens if try_add(g)]
    while frontier and len(basis) < N * N:
        nxt = []
        for m in frontier:
            for g in gens:
                p = g @ m
                if try_add(p):
                    nxt.append(p)
        frontier = nxt
    return len(basis) == N * N


class _GradedSpan:
    """Per-vertex span accumulation for graded subspaces (exact mode)."""

    def __init__(self, n: DimVector):
        self.n = n
        self.spans = [linalg.Span() for _ in n]

    def add(self, vertex: int, vec: Sequence[Fraction]) -> bool:
        return self.spans[vertex].add(tuple(Fraction(v) for v in vec))

    @property
    def dims(self) -> DimVector:
        return tuple(sp.dim for sp in self.spans)

    def bases(self) -> tuple[tuple[linalg.Vector, ...], ...]:
        return tuple(tuple(sp.basis()) for sp in self.spans)


def cyclic_subrep(
    rep: Representation, vertex: int, vector: Sequence
) -> tuple[DimVector, tuple[tuple[linalg.Vector, ...], ...]]:
    """Smallest subrepresentation containing the given vector (exact mode):
    graded span closure under all arrows of the doubled quiver."""
    if rep.mode != EXACT:
        raise ValueError("cyclic_subrep requires exact mode")
    n = rep.n
    vec = tuple(Fraction(v) for v in vector)
    if len(vec) != n[vertex]:
        raise ValueError("seed vector has wrong length for its vertex")
    gs = _GradedSpan(n)
    frontier: list[tuple[int, tuple[Fraction, ...]]] = []
    if gs.add(vertex, vec):
        frontier.append((vertex, vec))
    while frontier:
        i, v = frontier.pop()
        for (s, t, _), (x, y) in zip(rep.quiver.orientation, rep.mats):
            if s == i and n[t] > 0:
                w = linalg.mat_vec(x, v)
                if gs.add(t, w):
                    frontier.append((t, w))
            if t == i and n[s] > 0:
                w = linalg.mat_vec(y, v)
                if gs.add(s, w):
                    frontier.append((s, w))
    return gs.dims, gs.bases()


def graded_invariance_holds(
    rep: Representation, bases: Sequence[Sequence[Sequence]], exact: bool = True
) -> bool:
    """Exact check that the graded spans are stable under every arrow."""
    spans = []
    for i, vecs in enumerate(bases):
        sp = linalg.Span()
        for v in vecs:
            sp.add(tuple(Fraction(x) for x in v))
        spans.append(sp)
    for (s, t, _), (x, y) in zip(rep.quiver.orientation, rep.mats):
        for v in bases[s]:
            if not spans[t].contains(linalg.mat_vec(x, tuple(Fraction(e) for e in v))):
                return False
        for v in bases[t]:
            if not spans[s].contains(linalg.mat_vec(y, tuple(Fraction(e) for e in v))):
                return False
    return True


def slope_theta(theta: Sequence, beta: Sequence[int]) -> Fraction:
    """(theta . beta) / sum(beta); beta must be nonzero."""
    tot = sum(beta)
    if tot == 0:
        raise ValueError("slope of the zero dimension vector is undefined")
    num = sum((Fraction(t) * b for t, b in zip(theta, beta)), Fraction(0))
    return num / tot


@dataclass(frozen=True)
class SearchBudget:
    probes: int = 4
    restarts: int = 6
    iters: int = 200
    tol: float = 1e-8
    seed: int = 0


@dataclass(frozen=True)
class CertifiedUnstable:
    beta: DimVector
    slope: Fraction
    basis: tuple
    defect: float = 0.0


@dataclass(frozen=True)
class StrictlySemistableWitness:
    beta: DimVector
    basis: tuple
    defect: float = 0.0


@dataclass(frozen=True)
class NoDestabilizerFound:
    """Not a proof of semistability: records the search budget only."""

    probes: int
    restarts: int
    tolerance: float


StabilityVerdict = CertifiedUnstable | StrictlySemistableWitness | NoDestabilizerFound


def _exact_invariant_spans(rep: Representation, budget: SearchBudget):
    n = rep.n
    rng = random.Random(budget.seed)
    found: dict[tuple, tuple[DimVector, tuple]] = {}

    def record(dims: DimVector, bases):
        key = (dims, tuple(tuple(v for v in vecs) for vecs in bases))
        if sum(dims) == 0 or dims == n:
            return
        found.setdefault(key, (dims, bases))

    probes: list[tuple[int, tuple[Fraction, ...]]] = []
    for i, ni in enumerate(n):
        for k in range(ni):
            e = tuple(Fraction(1 if j == k else 0) for j in range(ni))
            probes.append((i, e))
        for _ in range(budget.probes):
            if ni > 0:
                probes.append(
                    (i, tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(ni)))
                )
    for vertex, vec in probes:
        if all(x == 0 for x in vec):
            continue
        dims, bases = cyclic_subrep(rep, vertex, vec)
        record(dims, bases)
    # sums of invariant spans are invariant: close the found set under
    # pairwise sums until stable (the join-closure of the probe spans)
    while True:
        before = len(found)
        singles = list(found.values())
        for a in range(len(singles)):
            for b in range(a + 1, len(singles)):
                gs = _GradedSpan(n)
                for src in (singles[a], singles[b]):
                    for i, vecs in enumerate(src[1]):
                        for v in vecs:
                            gs.add(i, v)
                record(gs.dims, gs.bases())
        if len(found) == before:
            break
    return list(found.values())


def _float_defect_and_grad(rep, beta, frames):
    n = rep.n
    projs = []
    for i, ni in enumerate(n):
        if beta[i] == 0 or ni == 0:
            projs.append(np.zeros((ni, ni), dtype=complex))
        elif beta[i] == ni:
            projs.append(np.eye(ni, dtype=complex))
        else:
            U = frames[i]
            projs.append(U @ U.conj().T)
    defect = 0.0
    grads = [np.zeros_like(f) for f in frames]

    def accumulate(A, s, t):
        nonlocal defect
        Ps, Pt = projs[s], projs[t]
        T = (np.eye(len(Pt)) - Pt) @ A @ Ps
        defect_term = float(np.linalg.norm(T) ** 2)
        nonlocal_grad_s = (A.conj().T @ (np.eye(len(Pt)) - Pt) @ A) @ frames[s]
        nonlocal_grad_t = -(A @ Ps @ A.conj().T) @ frames[t]
        defect += defect_term
        if 0 < beta[s] < n[s]:
            grads[s] += nonlocal_grad_s
        if 0 < beta[t] < n[t]:
            grads[t] += nonlocal_grad_t

    for (s, t, _), (x, y) in zip(rep.quiver.orientation, rep.mats):
        accumulate(np.asarray(x, dtype=complex), s, t)
        accumulate(np.asarray(y, dtype=complex), t, s)
    return defect, grads


def _orthonormal_frames(rep, beta, rng):
    frames = []
    for i, ni in enumerate(rep.n):
        bi = beta[i]
        if bi == 0 or bi == ni:
            frames.append(np.zeros((ni, max(bi, 0)), dtype=complex))
        else:
            m = rng.standard_normal((ni, bi)) + 1j * rng.standard_normal((ni, bi))
            q, _ = np.linalg.qr(m)
            frames.append(q[:, :bi])
    return frames


def _minimize_defect(rep, beta, budget, rng):
    best = None
    for _ in range(budget.restarts):
        frames = _orthonormal_frames(rep, beta, rng)
        eta = 0.1
        defect, grads = _float_defect_and_grad(rep, beta, frames)
        for _ in range(budget.iters):
            if defect < budget.tol:
                break
            cand = []
            for f, g in zip(frames, grads):
                if f.shape[1] == 0 or f.shape[0] == f.shape[1]:
                    cand.append(f)
                    continue
                m = f - eta * g
                qq, _ = np.linalg.qr(m)
                cand.append(qq[:, : f.shape[1]])
            cdef, cgrads = _float_defect_and_grad(rep, beta, cand)
            if cdef < defect:
                frames, defect, grads = cand, cdef, cgrads
                eta = min(eta * 1.25, 1.0)
            else:
                eta *= 0.5
                if eta < 1e-12:
                    break
        if best is None or defect < best[0]:
            best = (defect, frames)
        if best[0] < budget.tol:
            break
    return best


def check_stability(
    rep: Representation, theta: Sequence, budget: SearchBudget | None = None
) -> StabilityVerdict:
    """Two-phase destabilizer search.

    Exact phase: cyclic subrepresentations from coordinate and seeded random
    probe vectors, plus sums of the spans found. A span of positive slope
    certifies instability; a proper span of slope zero certifies strict
    semistability. Float mode adds a gradient-descent search over graded
    projection frames for every candidate dimension vector of positive (then
    zero) slope. Absence of a witness is reported as NoDestabilizerFound and
    is explicitly not a semistability proof.
    """
    budget = budget or SearchBudget()
    theta = tuple(Fraction(t) for t in theta)
    n = rep.n
    if sum((t * x for t, x in zip(theta, n)), Fraction(0)) != 0:
        raise ValueError("theta . n != 0: not a valid stability parameter")

    if rep.mode == EXACT:
        spans = _exact_invariant_spans(rep, budget)
        unstable = []
        semistable = []
        for dims, bases in spans:
            if not graded_invariance_holds(rep, bases):
                raise MathAssertionError("cyclic span is not arrow-invariant")
            sl = slope_theta(theta, dims)
            if sl > 0:
                unstable.append((sl, dims, bases))
            elif sl == 0:
                semistable.append((dims, bases))
        if unstable:
            unstable.sort(key=lambda t: (-t[0], t[1]))
            sl, dims, bases = unstable[0]
            return CertifiedUnstable(dims, sl, bases)
        if semistable:
            semistable.sort(key=lambda t: t[0])
            dims, bases = semistable[0]
            return StrictlySemistableWitness(dims, bases)
        return NoDestabilizerFound(budget.probes, budget.restarts, budget.tol)

    # float mode: numeric subspace search per candidate dimension vector
    rng = np.random.default_rng(budget.seed)
    candidates = [
        beta
        for beta in boxed_vectors(n)
        if any(beta) and beta != n
    ]
    positive = sorted(
        (b for b in candidates if slope_theta(theta, b) > 0),
        key=lambda b: (-slope_theta(theta, b), b),
    )
    zero = sorted(b for b in candidates if slope_theta(theta, b) == 0)
    for group, make in (
        (positive, lambda b, fr, d: CertifiedUnstable(b, slope_theta(theta, b), fr, d)),
        (zero, lambda b, fr, d: StrictlySemistableWitness(b, fr, d)),
    ):
        for beta in group:
            best = _minimize_defect(rep, beta, budget, rng)
            if best is not None and best[0] < budget.tol:
                defect, frames = best
                defect2, _ = _float_defect_and_grad(rep, beta, frames)
                if defect2 < budget.tol:
                    return make(beta, tuple(frames), float(defect2))
    return NoDestabilizerFound(budget.probes, budget.restarts, budget.tol)


def direct_sum(*reps: Representation) -> Representation:
    """Blockwise direct sum; all summands must share quiver and mode."""
    if not reps:
        raise ValueError("need at least one representation")
    q = reps[0].quiver
    mode = reps[0].mode
    if any(r.quiver != q or r.mode != mode for r in reps):
        raise ValueError("direct sum requires a common quiver and scalar mode")
    n = tuple(sum(r.n[i] for r in reps) for i in range(q.s))
    mats = []
    for e_idx, (s, t, _) in enumerate(q.orientation):
        if mode == FLOAT:
            x = _np_blockdiag([r.mats[e_idx][0] for r in reps])
            y = _np_blockdiag([r.mats[e_idx][1] for r in reps])
        else:
            x = _frac_blockdiag([r.mats[e_idx][0] for r in reps], [r.n[t] for r in reps], [r.n[s] for r in reps])
            y = _frac_blockdiag([r.mats[e_idx][1] for r in reps], [r.n[s] for r in reps], [r.n[t] for r in reps])
        mats.append((x, y))
    return Representation(q, n, mode, tuple(mats))


def _np_blockdiag(blocks):
    rtot = sum(b.shape[0] for b in blocks)
    ctot = sum(b.shape[1] for b in blocks)
    out = np.zeros((rtot, ctot), dtype=complex)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def _frac_blockdiag(blocks, rdims, cdims):
    rtot, ctot = sum(rdims), sum(cdims)
    rows = [[Fraction(0)] * ctot for _ in range(rtot)]
    r = c = 0
    for b, rd, cd in zip(blocks, rdims, cdims):
        for i in range(rd):
            for j in range(cd):
                rows[r + i][c + j] = b[i][j]
        r += rd
        c += cd
    return tuple(tuple(row) for row in rows)


def dual(rep: Representation) -> Representation:
    """Transpose all matrices and swap the roles of x_e and y_e.

    An involution; the moment-map blocks of the dual are the transposes of
    the original blocks.
    """
    n = rep.n
    mats = tuple(
        (
            _transpose_to(rep.mode, y, n[t], n[s]),
            _transpose_to(rep.mode, x, n[s], n[t]),
        )
        for (s, t, _), (x, y) in zip(rep.quiver.orientation, rep.mats)
    )
    return Representation(rep.quiver, rep.n, rep.mode, mats)


def annihilator_witness(
    rep: Representation, beta: DimVector, bases
) -> tuple[DimVector, tuple]:
    """Convert an invariant graded subspace of rep into the annihilator
    witness for dual(rep): dimension vector n - beta, verified invariant."""
    if rep.mode != EXACT:
        raise ValueError("annihilator conversion implemented for exact mode")
    n = rep.n
    comp = tuple(ni - bi for ni, bi in zip(n, beta))
    out_bases = []
    for i, vecs in enumerate(bases):
        if n[i] == 0:
            out_bases.append(())
            continue
        if not vecs:
            out_bases.append(tuple(linalg.identity(n[i])))
            continue
        mat = tuple(tuple(Fraction(x) for x in v) for v in vecs)
        out_bases.append(tuple(linalg.nullspace(mat)))
    out_bases = tuple(out_bases)
    dims = tuple(len(b) for b in out_bases)
    if dims != comp:
        raise MathAssertionError("annihilator dimensions disagree with n - beta")
    if not graded_invariance_holds(dual(rep), out_bases):
        raise MathAssertionError("annihilator of an invariant subspace is not invariant")
    return comp, out_bases
