import mpmath as mp
import pytest

import cantorcircles as cc

WORKED_S_R = "2.56e-10"  # 2^8 * 1e-12, exact as a decimal string


@pytest.fixture(scope="session")
def ctx():
    return cc.PrecisionContext(50)


@pytest.fixture(scope="session")
def p33(ctx):
    """Picture parameters: a_1 = 0.25."""
    return cc.make_p_map((3, 3), rings=["0.25"], precision=ctx)


@pytest.fixture(scope="session")
def p444_pictures(ctx):
    """Picture parameters a = (0.1, 0.01); deliberately off-schedule."""
    return cc.make_p_map((4, 4, 4), rings=["0.1", "0.01"], precision=ctx)


@pytest.fixture(scope="session")
def p444_sched(ctx):
    """Schedule parameters at s = 1e-8 where every trap certifies."""
    return cc.make_p_map((4, 4, 4), s="1e-8", precision=ctx)


@pytest.fixture(scope="session")
def solq444(ctx):
    return cc.solve_q((4, 4, 4), "1e-8", ctx)


@pytest.fixture(scope="session")
def q444(ctx, solq444):
    v = solq444.values
    return cc.make_q_map((4, 4, 4), "1e-8", (v["X"], v["Y"], v["Z"], v["W"]), ctx)


@pytest.fixture(scope="session")
def solr444(ctx):
    return cc.solve_r((4, 4, 4), WORKED_S_R, ctx)


@pytest.fixture(scope="session")
def r444(ctx, solr444):
    v = solr444.values
    return cc.make_r_map((4, 4, 4), WORKED_S_R, (v["S"], v["T"], v["z0"]), ctx)
