import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import svadf
from svadf import BubbleDetector
from svadf.dating import FixedValue


@pytest.fixture
def bubble_series():
    return svadf.simulate(
        svadf.DgpSpec(
            n=1000,
            vol=svadf.VolSpec(),
            bubble=svadf.BubbleSpec(0.3, 0.6, 1.0, 0.5),
            seed=42,
        )
    )


class TestSklearnSurface:
    def test_get_set_params_and_clone(self):
        det = BubbleDetector(r0=0.15, min_below=21)
        params = det.get_params()
        assert params["r0"] == 0.15 and params["min_below"] == 21
        det2 = clone(det).set_params(r0=0.2)
        assert det2.r0 == 0.2 and det.r0 == 0.15

    def test_not_fitted_errors(self):
        det = BubbleDetector()
        with pytest.raises(NotFittedError):
            det.predict()
        with pytest.raises(NotFittedError):
            det.transform()

    def test_fit_returns_self_and_sets_attributes(self, bubble_series):
        det = BubbleDetector(min_below=21)
        assert det.fit(bubble_series) is det
        assert det.n_ == 1000
        assert det.episode_ is not None
        assert len(det.stat_path_) == 1000 - 100 + 1


class TestPredictTransform:
    def test_predict_mask_matches_episode(self, bubble_series):
        det = BubbleDetector(min_below=21).fit(bubble_series)
        mask = det.predict()
        ep = det.episode_
        assert mask.dtype == bool and mask.shape == (1000,)
        assert mask[ep.origin_index - 1]
        assert not mask[ep.origin_index - 2]
        if ep.collapse_index is not None:
            assert not mask[ep.collapse_index - 1]
            assert mask[ep.collapse_index - 2]

    def test_predict_all_false_without_episode(self):
        walk = svadf.simulate(svadf.DgpSpec(n=400, vol=svadf.VolSpec(), seed=9))
        det = BubbleDetector(origination_rule=FixedValue(1e9)).fit(walk)
        assert det.episode_ is None
        assert not det.predict().any()

    def test_transform_is_nan_padded_statistic(self, bubble_series):
        det = BubbleDetector().fit(bubble_series)
        stats = det.transform()
        assert np.all(np.isnan(stats[: 100 - 1]))
        np.testing.assert_allclose(stats[99:], det.stat_path_.values)

    def test_fit_predict(self, bubble_series):
        mask = BubbleDetector(min_below=21).fit_predict(bubble_series)
        assert mask.any()

    def test_accepts_plain_arrays(self):
        values = np.cumsum(np.random.default_rng(3).normal(size=300)) + 50
        det = BubbleDetector().fit(values)
        assert det.n_ == 300

    def test_baseline_mode_uses_single_threshold(self, bubble_series):
        base = BubbleDetector(baseline=True).fit(bubble_series)
        assert base.episode_ is not None
        assert base.episode_.method == "pwy"


class TestEndToEnd:
    def test_detects_known_window(self, bubble_series):
        det = BubbleDetector(min_below=21).fit(bubble_series)
        ep = det.episode_
        assert abs(ep.r_e_hat - 0.3) < 0.1
        assert ep.r_f_hat is not None and abs(ep.r_f_hat - 0.6) < 0.15
