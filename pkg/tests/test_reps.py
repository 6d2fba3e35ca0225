import random
from fractions import Fraction

import numpy as np
import pytest

from quiverk3 import (
    CertifiedUnstable,
    GroupElement,
    NoDestabilizerFound,
    Representation,
    SearchBudget,
    StrictlySemistableWitness,
    act,
    annihilator_witness,
    check_stability,
    cyclic_subrep,
    direct_sum,
    dual,
    is_simple,
    linalg,
    moment_differential,
    moment_map,
    quiver_from_config,
    random_representation,
    slope_theta,
    solve_moment_zero,
    verify_ci_dim,
    zero_representation,
)
from quiverk3.reps import (
    moment_residual_norm,
    moment_trace,
    numeric_rank,
)
from conftest import random_config

F = Fraction


def simple_affine_rep(affine_a1):
    q = quiver_from_config(affine_a1)
    mats = (
        (((F(1),),), ((F(0),),)),
        (((F(0),),), ((F(1),),)),
    )
    return Representation(q, (1, 1), "exact", mats)


def unstable_affine_rep(affine_a1):
    q = quiver_from_config(affine_a1)
    mats = (
        (((F(1),),), ((F(0),),)),
        (((F(0),),), ((F(0),),)),
    )
    return Representation(q, (1, 1), "exact", mats)


def test_moment_map_affine_blocks(affine_a1):
    q = quiver_from_config(affine_a1)
    x1, x2, y1, y2 = F(2), F(3), F(5), F(-7)
    mats = ((((x1,),), ((y1,),)), (((x2,),), ((y2,),)))
    rep = Representation(q, (1, 1), "exact", mats)
    m = moment_map(rep)
    assert m[0] == ((-(y1 * x1 + y2 * x2),),)
    assert m[1] == ((x1 * y1 + x2 * y2,),)


def test_moment_map_one_loop_scalar(one_loop):
    q = quiver_from_config(one_loop)
    rep = random_representation(q, (1,), seed=5)
    assert moment_map(rep) == (((F(0),),),)


def test_moment_map_zero_when_y_zero():
    rng = random.Random(61)
    for _ in range(10):
        cfg = random_config(rng, s_max=3, mult_max=2)
        q = quiver_from_config(cfg)
        rep = random_representation(q, cfg.mult, seed=rng.randint(0, 999))
        stripped = Representation(
            q,
            rep.n,
            "exact",
            tuple((x, linalg.zeros(len(y), len(y[0]) if y else 0)) for x, y in rep.mats),
        )
        assert all(
            all(all(e == 0 for e in row) for row in block)
            for block in moment_map(stripped)
        )


def test_moment_trace_zero():
    rng = random.Random(67)
    for _ in range(15):
        cfg = random_config(rng, s_max=3, mult_max=3)
        q = quiver_from_config(cfg)
        rep = random_representation(q, cfg.mult, seed=rng.randint(0, 999))
        assert moment_trace(rep) == 0
    fl = random_representation(q, cfg.mult, seed=1, mode="float")
    assert abs(moment_trace(fl)) <= 1e-12 * max(1.0, moment_residual_norm(fl))


def test_act_identity_and_center(affine_a1):
    rep = simple_affine_rep(affine_a1)
    ident = GroupElement((((F(1),),), ((F(1),),)))
    assert act(ident, rep) == rep
    center = GroupElement((((F(7),),), ((F(7),),)))
    assert act(center, rep) == rep


def test_act_equivariance_exact():
    rng = random.Random(71)
    for _ in range(8):
        cfg = random_config(rng, s_max=3, mult_max=2)
        q = quiver_from_config(cfg)
        n = cfg.mult
        rep = random_representation(q, n, seed=rng.randint(0, 999))
        blocks = []
        for ni in n:
            while True:
                g = tuple(
                    tuple(F(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(ni))
                    for _ in range(ni)
                )
                try:
                    linalg.mat_inv(g)
                    break
                except ZeroDivisionError:
                    continue
            blocks.append(g)
        g = GroupElement(tuple(blocks))
        lhs = moment_map(act(g, rep))
        rhs = tuple(
            linalg.mat_mul(linalg.mat_mul(g.blocks[i], m), linalg.mat_inv(g.blocks[i]))
            for i, m in enumerate(moment_map(rep))
        )
        assert lhs == rhs


def test_act_rejects_singular(affine_a1):
    rep = simple_affine_rep(affine_a1)
    g = GroupElement((((F(0),),), ((F(1),),)))
    with pytest.raises(ZeroDivisionError):
        act(g, rep)


def test_act_equivariance_float(elliptic_pair):
    q = quiver_from_config(elliptic_pair)
    rep = random_representation(q, (2, 2), seed=5, mode="float")
    rng = np.random.default_rng(7)
    blocks = tuple(
        rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        for _ in range(2)
    )
    g = GroupElement(blocks, mode="float")
    lhs = moment_map(act(g, rep))
    rhs = [
        blocks[i] @ m @ np.linalg.inv(blocks[i])
        for i, m in enumerate(moment_map(rep))
    ]
    for a, b in zip(lhs, rhs):
        assert np.linalg.norm(a - b) <= 1e-10 * max(1.0, np.linalg.norm(b))


def test_moment_differential_ranks(affine_a1, one_loop):
    qa = quiver_from_config(affine_a1)
    z = zero_representation(qa, (1, 1), mode="float")
    assert numeric_rank(moment_differential(z)) == 0
    # mu = 0 point with nonzero entries: rank 1
    mats = (
        (np.array([[1.0 + 0j]]), np.array([[2.0 + 0j]])),
        (np.array([[2.0 + 0j]]), np.array([[-1.0 + 0j]])),
    )
    rep = Representation(qa, (1, 1), "float", mats)
    assert moment_residual_norm(rep) == 0
    assert numeric_rank(moment_differential(rep)) == 1
    ql = quiver_from_config(one_loop)
    rep1 = random_representation(ql, (1,), seed=2, mode="float")
    assert numeric_rank(moment_differential(rep1)) == 0


def test_moment_differential_rank_bound():
    rng = random.Random(73)
    for _ in range(8):
        cfg = random_config(rng, s_max=3, mult_max=2)
        q = quiver_from_config(cfg)
        rep = random_representation(q, cfg.mult, seed=rng.randint(0, 999), mode="float")
        nn = sum(x * x for x in cfg.mult)
        assert numeric_rank(moment_differential(rep)) <= nn - 1


def test_moment_differential_exact_matches_float(affine_a1):
    q = quiver_from_config(affine_a1)
    rep = random_representation(q, (1, 1), seed=9)
    exact = moment_differential(rep)
    fl = moment_differential(rep.to_float())
    assert np.allclose(
        np.array([[complex(e) for e in row] for row in exact]), fl
    )


def test_solver_immediate_on_zero_y(affine_a1):
    q = quiver_from_config(affine_a1)
    start = zero_representation(q, (1, 1), mode="float")
    mats = tuple(
        (np.random.default_rng(3).standard_normal((1, 1)) + 0j, y)
        for (_, y) in start.mats
    )
    start = Representation(q, (1, 1), "float", mats)
    sol = solve_moment_zero(q, (1, 1), start=start)
    assert moment_residual_norm(sol) == 0


def test_solver_reaches_tolerance(affine_a1, elliptic_pair):
    qa = quiver_from_config(affine_a1)
    sol = solve_moment_zero(qa, (1, 1), seed=4)
    assert moment_residual_norm(sol) <= 1e-12
    qe = quiver_from_config(elliptic_pair)
    sol = solve_moment_zero(qe, (1, 1), seed=4, tol=1e-10)
    assert moment_residual_norm(sol) <= 1e-10
    assert numeric_rank(moment_differential(sol)) == 1


def test_verify_ci_dim_fixtures(affine_a1, elliptic_pair, ogrady, one_loop):
    qa = quiver_from_config(affine_a1)
    report = verify_ci_dim(qa, (1, 1), trials=4, seed=11)
    assert report.expected_rank == 1 and report.expected_dim == 3
    assert report.matching_trials == len(report.trials) == 4
    assert not report.advisory
    qo = quiver_from_config(ogrady)
    report = verify_ci_dim(qo, (2,), trials=3, seed=11)
    assert report.expected_rank == 3 and report.expected_dim == 13
    assert report.matching_trials == 3
    ql = quiver_from_config(one_loop)
    report = verify_ci_dim(ql, (1,), trials=2, seed=0)
    assert report.expected_rank == 0 and report.expected_dim == 2
    assert report.matching_trials == 2


def test_is_simple_examples(affine_a1):
    assert is_simple(simple_affine_rep(affine_a1))
    assert not is_simple(unstable_affine_rep(affine_a1))
    rep = simple_affine_rep(affine_a1)
    assert not is_simple(direct_sum(rep, rep))
    assert is_simple(rep.to_float())
    assert not is_simple(direct_sum(rep, rep).to_float())


def test_is_simple_matches_oracle_sample():
    from helpers import proper_invariant_subspace_exists

    rng = random.Random(79)
    cfg = random_config(rng, s_min=2, s_max=2, mult_max=1)
    q = quiver_from_config(cfg)
    for n in ((1, 1), (2, 1), (1, 2)):
        for seed in range(8):
            rep = random_representation(q, n, seed=seed)
            assert is_simple(rep) == (not proper_invariant_subspace_exists(rep))


def test_cyclic_subrep(affine_a1):
    simple = simple_affine_rep(affine_a1)
    dims, _ = cyclic_subrep(simple, 0, (F(1),))
    assert dims == (1, 1)
    unstable = unstable_affine_rep(affine_a1)
    dims, bases = cyclic_subrep(unstable, 1, (F(1),))
    assert dims == (0, 1)
    assert bases[0] == () and len(bases[1]) == 1
    dims, _ = cyclic_subrep(unstable, 0, (F(0),))
    assert dims == (0, 0)


def test_slope_theta():
    assert slope_theta((-1, 1), (1, 1)) == 0
    assert slope_theta((-1, 1), (0, 1)) == 1
    with pytest.raises(ValueError):
        slope_theta((-1, 1), (0, 0))


def test_check_stability_unstable(affine_a1):
    rep = unstable_affine_rep(affine_a1)
    verdict = check_stability(rep, (F(-1), F(1)))
    assert isinstance(verdict, CertifiedUnstable)
    assert verdict.beta == (0, 1) and verdict.slope == 1
    # the witness basis spans an arrow-invariant subspace by construction
    from quiverk3.reps import graded_invariance_holds

    assert graded_invariance_holds(rep, verdict.basis)


def test_check_stability_simple_many_thetas(affine_a1):
    rep = simple_affine_rep(affine_a1)
    for k in range(1, 11):
        verdict = check_stability(rep, (F(-k), F(k)))
        assert isinstance(verdict, NoDestabilizerFound)


def test_check_stability_direct_sum_wall(affine_a1):
    rep = simple_affine_rep(affine_a1)
    double = direct_sum(rep, rep)
    verdict = check_stability(double, (F(-1), F(1)))
    assert isinstance(verdict, StrictlySemistableWitness)
    assert verdict.beta == (1, 1)


def test_check_stability_theta_validation(affine_a1):
    rep = simple_affine_rep(affine_a1)
    with pytest.raises(ValueError):
        check_stability(rep, (F(1), F(1)))


def test_check_stability_float_negative(affine_a1):
    rep = simple_affine_rep(affine_a1).to_float()
    verdict = check_stability(rep, (F(-1), F(1)), SearchBudget(restarts=2, iters=50))
    assert isinstance(verdict, NoDestabilizerFound)


def test_check_stability_float_finds_hidden_summand(affine_a1):
    q = quiver_from_config(affine_a1)
    r1 = simple_affine_rep(affine_a1)
    mats2 = (
        (((F(0),),), ((F(1),),)),
        (((F(1),),), ((F(0),),)),
    )
    r2 = Representation(q, (1, 1), "exact", mats2)
    double = direct_sum(r1, r2).to_float()
    rng = np.random.default_rng(17)
    blocks = []
    for ni in (2, 2):
        m = rng.standard_normal((ni, ni)) + 1j * rng.standard_normal((ni, ni))
        blocks.append(m)
    hidden = act(GroupElement(tuple(blocks), mode="float"), double)
    verdict = check_stability(
        hidden, (F(-1), F(1)), SearchBudget(restarts=5, iters=400, tol=1e-10, seed=3)
    )
    assert isinstance(verdict, StrictlySemistableWitness)
    assert verdict.beta == (1, 1)
    assert verdict.defect < 1e-10


def test_direct_sum_properties(affine_a1):
    r = simple_affine_rep(affine_a1)
    d = direct_sum(r, r)
    assert d.n == (2, 2)
    m = moment_map(d)
    assert m[0] == ((F(0), F(0)), (F(0), F(0)))
    assert not is_simple(d)


def test_dual_involution_and_moment(affine_a1, elliptic_pair):
    rng = random.Random(83)
    for cfg in (affine_a1, elliptic_pair):
        q = quiver_from_config(cfg)
        rep = random_representation(q, (2, 1), seed=rng.randint(0, 99))
        assert dual(dual(rep)) == rep
        m = moment_map(rep)
        md = moment_map(dual(rep))
        for i in range(q.s):
            assert md[i] == linalg.transpose(m[i]) or (m[i] == () and md[i] == ())


def test_destabilizer_duality(affine_a1):
    rep = unstable_affine_rep(affine_a1)
    theta = (F(-1), F(1))
    verdict = check_stability(rep, theta)
    assert isinstance(verdict, CertifiedUnstable)
    comp, bases = annihilator_witness(rep, verdict.beta, verdict.basis)
    assert comp == (1, 0)
    minus = tuple(-t for t in theta)
    assert slope_theta(minus, comp) >= 0
    from quiverk3.reps import graded_invariance_holds

    assert graded_invariance_holds(dual(rep), bases)
