import numpy as np
import pytest
from sklearn.base import clone

import maxcons as mc
from maxcons.exceptions import InvalidParameter


def test_get_set_params_round_trip():
    est = mc.MaxConsensus(c=2.0, sigma_z=0.5, t_max=100)
    params = est.get_params()
    assert params["c"] == 2.0 and params["sigma_z"] == 0.5
    est.set_params(c=3.0)
    assert est.c == 3.0


def test_clone_preserves_configuration(k2):
    est = mc.MaxConsensus(graph=k2, t_max=50, random_state=1)
    cloned = clone(est)
    assert cloned.get_params() == est.get_params()


def test_fit_exposes_results(k2):
    est = mc.MaxConsensus(graph=k2, mu_z=0.0, sigma_z=0.0, t_max=2000, random_state=0)
    est.fit([0.0, 1.0])
    assert est.x_.shape == (2,)
    assert np.abs(est.x_ - 1.0).max() <= 1e-6
    assert est.consensus_value_ == pytest.approx(1.0, abs=1e-6)
    assert est.max_error_ <= 1e-6
    assert est.n_iter_ == 2000
    assert est.trace_.t_max == 2000
    assert est.graph_ == k2


def test_fit_predict_matches_attribute(k2):
    est = mc.MaxConsensus(graph=k2, mu_z=0.0, sigma_z=0.0, t_max=500, random_state=0)
    out = est.fit_predict(np.array([[0.0], [1.0]]))  # column vector accepted
    assert np.array_equal(out, est.x_)


def test_random_state_makes_fit_deterministic():
    X = np.random.default_rng(8).normal(size=6)
    a = mc.MaxConsensus(t_max=200, random_state=42).fit(X)
    b = mc.MaxConsensus(t_max=200, random_state=42).fit(X)
    assert np.array_equal(a.x_, b.x_)
    assert a.graph_ == b.graph_


def test_generates_rgg_when_no_graph_given():
    est = mc.MaxConsensus(t_max=100, random_state=3)
    est.fit(np.zeros(5))
    assert est.graph_.n == 5
    assert est.graph_.is_connected()


def test_graph_size_mismatch(k2):
    with pytest.raises(InvalidParameter):
        mc.MaxConsensus(graph=k2, t_max=10).fit([1.0, 2.0, 3.0])


@pytest.mark.parametrize("bad", [[], [[1.0, 2.0], [3.0, 4.0]], [np.nan, 1.0]])
def test_input_validation(bad, k2):
    with pytest.raises(InvalidParameter):
        mc.MaxConsensus(graph=None, t_max=10).fit(bad)
