"""Accuracy tests for the in-house special functions.

Expected values were generated with mpmath at 40 decimal digits (an
independent arbitrary-precision route); scipy.special provides a second
independent implementation for cross-checks on grids.  The module under
test must stay within 1e-10 relative error on its supported domain.
"""

import math

import numpy as np
import pytest
import scipy.special as sps
from hypothesis import given, settings
from hypothesis import strategies as st

from probkin.errors import DomainError
from probkin.special import (
    LOG_TWO_PI,
    chi2_cdf,
    chi2_logpdf,
    chi2_sf,
    log_bessel_i0,
    log_beta,
    regularized_incomplete_beta,
    regularized_lower_gamma,
    regularized_upper_gamma,
    std_normal_cdf,
)

REL_TOL = 1e-10

# mpmath mp.log(mp.besseli(0, x)) at dps=40; spans the series branch
# (x <= 20), the asymptotic branch, and the overflow regime of I0 itself.
LOG_I0_ORACLE = {
    0.1: 0.0024984392338762436584737940884226800169,
    1.0: 0.2359143585071786486894148461999517805539,
    3.75: 2.2103542119720192006054381361085883825,
    10.0: 7.942972083118695554494865400239581955502,
    19.9: 17.49214981862135060118580330600227681823,
    20.1: 17.68708387678898111920653938601313126224,
    50.0: 47.12757550187180458416300246172083952578,
    1e3: 995.627308889869464671467764480847514883,
    1e6: 999992.173306312813252706230800167770666,
}

# mpmath mp.log(mp.beta(a, b)) at dps=40.
LOG_BETA_ORACLE = {
    (10.0, 10.0): -13.73622922703655481380921664543396875313,
    (0.5, 0.5): 1.144729885849400174143427351353058711647,
    (2.0, 7.5): -4.15496918403853552741107494510548674361,
}

# mpmath mp.gammainc(a, 0, x, regularized=True) at dps=40; covers both
# the series branch (x < a + 1) and the continued-fraction branch.
LOWER_GAMMA_ORACLE = {
    (2.0, 0.5): 0.09020401043104986459430069751322931983712,
    (2.0, 1.0): 0.2642411176571153568089524596770782651084,
    (2.0, 8.0): 0.9969808363488773934506074978679722508262,
    (0.5, 0.02): 0.1585194188782060477129181651488512514919,
    (7.7, 12.0): 0.9257848760885934210762022028307657832723,
    (50.0, 40.0): 0.07033506665939495443726390256528718201025,
}

# mpmath mp.betainc(a, b, 0, x, regularized=True) at dps=40.
INC_BETA_ORACLE = {
    (10.0, 10.0, 0.5): 0.5,
    (10.0, 10.0, 0.25): 0.008903279303922317922115325927734375,
    (2.0, 3.0, 0.4): 0.5248000000000000383693077310454096820533,
    (0.5, 0.5, 0.9): 0.7951672353008665719104664595866426388759,
}

# mpmath chi-square cdf/logpdf at dps=40.
CHI2_ORACLE = {
    # (x, dof): (cdf, logpdf)
    (4.0, 4): (0.5939941502901619243180015150825467897771, -2.0),
    (1.0, 4): (0.09020401043104986459430069751322931983712, -1.886294361119890618834464242916353136151),
    (10.0, 4): (0.9595723180054871974201837094611094545069, -4.08370926812584493481647278823198892855),
    (2.5, 3): (0.5247089166569794098414469689513390582377, -1.710793167267595209188566130521612104136),
}

# mpmath mp.ncdf(z) at dps=40.
NORMAL_CDF_ORACLE = {
    -3.0: 0.001349898031630094526651814767594977377829,
    -1.0: 0.1586552539314570514147674543679620775221,
    0.0: 0.5,
    0.5: 0.6914624612740131036377046106083377398836,
    2.0: 0.9772498680518207927997173628334665625282,
}


def rel_err(got, want):
    return abs(got - want) / max(abs(want), 1e-300)


def test_log_two_pi_constant():
    assert LOG_TWO_PI == pytest.approx(math.log(2.0 * math.pi), rel=1e-15)


@pytest.mark.parametrize("x,expected", sorted(LOG_I0_ORACLE.items()))
def test_log_bessel_i0_oracle(x, expected):
    assert rel_err(log_bessel_i0(x), expected) < REL_TOL


def test_log_bessel_i0_zero():
    assert log_bessel_i0(0.0) == 0.0


def test_log_bessel_i0_rejects_negative():
    with pytest.raises(DomainError):
        log_bessel_i0(-7.3)


def test_log_bessel_i0_scipy_grid():
    # scipy's i0e avoids overflow: log I0(x) = log(i0e(x)) + x.
    xs = np.linspace(0.05, 120.0, 311)
    ours = np.array([log_bessel_i0(x) for x in xs])
    ref = np.log(sps.i0e(xs)) + xs
    assert np.max(np.abs(ours - ref) / np.abs(ref)) < 1e-12


def test_log_bessel_i0_no_overflow_huge_argument():
    v = log_bessel_i0(1e6)
    assert math.isfinite(v)
    assert rel_err(v, LOG_I0_ORACLE[1e6]) < REL_TOL


def test_log_bessel_i0_branch_seam_continuity():
    # The series/asymptotic handoff at x = 20 must not leave a jump.
    left, right = log_bessel_i0(20.0 - 1e-9), log_bessel_i0(20.0 + 1e-9)
    assert abs(left - right) < 1e-8


@pytest.mark.parametrize("ab,expected", sorted(LOG_BETA_ORACLE.items()))
def test_log_beta_oracle(ab, expected):
    assert rel_err(log_beta(*ab), expected) < REL_TOL


def test_log_beta_symmetry():
    assert log_beta(3.2, 9.7) == pytest.approx(log_beta(9.7, 3.2), rel=1e-15)


@pytest.mark.parametrize("ax,expected", sorted(LOWER_GAMMA_ORACLE.items()))
def test_regularized_lower_gamma_oracle(ax, expected):
    a, x = ax
    assert rel_err(regularized_lower_gamma(a, x), expected) < REL_TOL


def test_gamma_pair_complementarity():
    for a, x in LOWER_GAMMA_ORACLE:
        p = regularized_lower_gamma(a, x)
        q = regularized_upper_gamma(a, x)
        assert p + q == pytest.approx(1.0, abs=1e-12)


def test_regularized_gamma_scipy_grid():
    a_grid = np.array([0.5, 1.0, 2.0, 4.5, 10.0, 40.0])
    x_grid = np.linspace(0.01, 80.0, 173)
    for a in a_grid:
        ours = regularized_lower_gamma(a, x_grid)
        ref = sps.gammainc(a, x_grid)
        assert np.max(np.abs(ours - ref)) < 1e-12


def test_regularized_gamma_vectorized_matches_scalar():
    a = 3.5
    xs = np.array([0.1, 2.0, 3.6, 9.0, 30.0])
    vec = regularized_lower_gamma(a, xs)
    scal = np.array([regularized_lower_gamma(a, float(x)) for x in xs])
    np.testing.assert_array_equal(vec, scal)


def test_regularized_gamma_edges():
    assert regularized_lower_gamma(2.0, 0.0) == 0.0
    assert regularized_upper_gamma(2.0, 0.0) == 1.0
    assert regularized_lower_gamma(2.0, 1e8) == pytest.approx(1.0, abs=1e-14)


def test_regularized_gamma_domain_errors():
    with pytest.raises(DomainError):
        regularized_lower_gamma(-1.0, 2.0)
    with pytest.raises(DomainError):
        regularized_lower_gamma(2.0, -0.5)


@pytest.mark.parametrize("abx,expected", sorted(INC_BETA_ORACLE.items()))
def test_regularized_incomplete_beta_oracle(abx, expected):
    a, b, x = abx
    assert rel_err(regularized_incomplete_beta(a, b, x), expected) < REL_TOL


def test_regularized_incomplete_beta_scipy_grid():
    xs = np.linspace(0.001, 0.999, 199)
    for a, b in ((0.5, 0.5), (2.0, 3.0), (10.0, 10.0), (7.5, 1.5)):
        ours = np.array([regularized_incomplete_beta(a, b, x) for x in xs])
        ref = sps.betainc(a, b, xs)
        assert np.max(np.abs(ours - ref)) < 1e-12


def test_regularized_incomplete_beta_edges_and_reflection():
    assert regularized_incomplete_beta(10.0, 10.0, 0.0) == 0.0
    assert regularized_incomplete_beta(10.0, 10.0, 1.0) == 1.0
    # I_x(a, b) = 1 - I_{1-x}(b, a)
    v = regularized_incomplete_beta(2.0, 3.0, 0.4)
    w = regularized_incomplete_beta(3.0, 2.0, 0.6)
    assert v == pytest.approx(1.0 - w, abs=1e-13)


def test_regularized_incomplete_beta_domain_errors():
    with pytest.raises(DomainError):
        regularized_incomplete_beta(0.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        regularized_incomplete_beta(1.0, 1.0, 1.5)


@pytest.mark.parametrize("xk,expected", sorted(CHI2_ORACLE.items()))
def test_chi2_oracle(xk, expected):
    x, dof = xk
    cdf_want, logpdf_want = expected
    assert rel_err(chi2_cdf(x, dof), cdf_want) < REL_TOL
    assert rel_err(chi2_logpdf(x, dof), logpdf_want) < REL_TOL


def test_chi2_sf_complement():
    for (x, dof), (cdf_want, _) in CHI2_ORACLE.items():
        assert chi2_sf(x, dof) == pytest.approx(1.0 - cdf_want, abs=1e-12)


def test_chi2_logpdf_normalizes_by_quadrature():
    # Trapezoid integral of exp(logpdf) over a wide bracket must be ~1.
    for dof in (2, 4, 9):
        xs = np.linspace(1e-9, 80.0, 200001)
        pdf = np.exp([chi2_logpdf(float(x), dof) for x in xs])
        assert np.trapezoid(pdf, xs) == pytest.approx(1.0, abs=1e-6)


def test_chi2_at_zero_limits():
    assert chi2_logpdf(0.0, 1) == math.inf
    assert chi2_logpdf(0.0, 2) == pytest.approx(math.log(0.5), rel=1e-14)
    assert chi2_logpdf(0.0, 3) == -math.inf
    assert chi2_cdf(0.0, 4) == 0.0


def test_chi2_domain_errors():
    with pytest.raises(DomainError):
        chi2_logpdf(-1.0, 4)
    with pytest.raises(DomainError):
        chi2_logpdf(1.0, 0)


@pytest.mark.parametrize("z,expected", sorted(NORMAL_CDF_ORACLE.items()))
def test_std_normal_cdf_oracle(z, expected):
    assert rel_err(std_normal_cdf(z), expected) < REL_TOL


def test_std_normal_cdf_symmetry():
    for z in (0.25, 1.3, 4.0):
        assert std_normal_cdf(z) + std_normal_cdf(-z) == pytest.approx(1.0, abs=1e-13)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-8.0, max_value=8.0, allow_nan=False))
def test_std_normal_cdf_matches_erf_route(z):
    ref = 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))
    assert abs(std_normal_cdf(z) - ref) < 1e-12


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=0.1, max_value=30.0, allow_nan=False),
    st.floats(min_value=0.0, max_value=60.0, allow_nan=False),
)
def test_regularized_gamma_monotone_in_x(a, x):
    p_lo = regularized_lower_gamma(a, x)
    p_hi = regularized_lower_gamma(a, x + 0.37)
    assert 0.0 <= p_lo <= 1.0
    assert p_hi >= p_lo - 1e-12
