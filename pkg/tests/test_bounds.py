import pytest

from quadphi.bounds import exact_leading_bound, forward_bound, psd_bound, report_for_run

U = 2.0**-53


def ones(s, L):
    return [[1.0] * (L + 1) for _ in range(s + 1)]


def test_no_scaling_returns_initial_error():
    assert forward_bound(ones(0, 4), U, 4) == [U] * 5


def test_one_step_phi0():
    assert forward_bound([[1.0, 0.5], [0.9, 0.4]], U, 1)[0] == pytest.approx(4.1 * U, rel=1e-15)


def test_psd_two_steps():
    assert psd_bound(U, 3, 2)[3] == pytest.approx(18.9225 * U, rel=1e-15)
    assert forward_bound(ones(2, 3), U, 3)[3] == pytest.approx(18.9225 * U, rel=1e-15)


@pytest.mark.parametrize("s", [0, 1, 3, 6])
def test_unit_norms_reduce_to_closed_form(s):
    b = forward_bound(ones(s, 5), U, 5)
    for k in range(6):
        base = 4.1 if k <= 1 else 4.35
        assert b[k] == pytest.approx(base**s * U, rel=1e-14)


def test_max_over_lower_indices():
    norms = [[1.0, 3.0, 0.5], [2.0, 1.0, 0.5], [1.0, 1.0, 1.0]]
    b = forward_bound(norms, 1.0, 2)
    assert b[0] == pytest.approx(4.1 * 1.0 * 4.1 * 2.0)
    assert b[1] == pytest.approx(4.1 * 3.0 * 4.1 * 2.0)
    assert b[2] == pytest.approx((4.1 * 3.0 + 0.25) * (4.1 * 2.0 + 0.25))


def test_nondecreasing_in_s():
    norms = [[1.0, 1.5, 2.0, 1.2]] * 6
    prev = None
    for s in range(6):
        b = forward_bound(norms, U, 3, s=s)
        if prev is not None:
            assert all(x >= y for x, y in zip(b, prev))
        prev = b


def test_exact_leading():
    norms = [[1.0, 1.0, 0.5], [1.0, 1.0, 0.5]]
    assert exact_leading_bound(norms, U, 2)[1] == 0.0
    assert exact_leading_bound(norms, U, 2)[2] == pytest.approx(0.5 * U)
    assert exact_leading_bound(norms[:1], U, 2)[2] == U


def test_errors():
    with pytest.raises(ValueError):
        forward_bound([], U, 1)
    with pytest.raises(ValueError):
        forward_bound([[1.0]], U, 2)
    with pytest.raises(ValueError):
        forward_bound([[1.0]], 0.0, 0)


def test_report_from_run():
    import numpy as np
    from quadphi.core import quadphi_run

    run = quadphi_run(300.0 * np.eye(3), 4)
    rep = report_for_run(run, psd=True)
    assert rep.s == run.plan.s == 2
    assert rep.conditional
    assert rep.initial_error == pytest.approx(U * (1 + max(run.taylor_norms)))
    assert len(rep.bounds) == 5 and len(rep.psd_bound) == 5
    assert [r[0] for r in rep.rows()] == list(range(5))
