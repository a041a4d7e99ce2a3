import math

import numpy as np
import pytest

from core.core_exceptions import DimensionMismatchException, UndefinedMetricException, ValidationException
from subjective.subjective_stats import fitted_rmse, mos, pearson, rmse, spearman
from subjective.subjective_types import ClipInfo, ImpairmentCategory, ScoreTable


def _table(scores):
    scores = np.array(scores)
    clips = [ClipInfo(f"c{j}", 'seq', ImpairmentCategory.COMPRESSION, qp=22) for j in range(scores.shape[1])]
    return ScoreTable([f"s{i}" for i in range(scores.shape[0])], clips, scores)


def _pearson_brute(x, y):
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def _ranks(values):
    ranks = []
    for v in values:
        below = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        ranks.append(below + (equal + 1) / 2.0)
    return ranks


def test_mos_and_interval():
    result = mos(_table([[4], [6]]))
    clip = result.clips[0]
    assert clip.mos == 5.0
    assert clip.ci95 == pytest.approx(1.96, abs=1e-12)
    assert clip.n == 2


def test_mos_single_subject_has_zero_interval():
    result = mos(_table([[7, 3]]))
    assert [c.ci95 for c in result.clips] == [0.0, 0.0]
    assert result.by_clip()['c1'].mos == 3.0


def test_mos_without_subjects():
    with pytest.raises(ValidationException):
        mos(_table(np.zeros((0, 2), dtype=int)))


def test_pearson_matches_brute_force():
    rng = np.random.default_rng(1)
    x = list(rng.random(25))
    y = list(0.5 * np.array(x) + rng.random(25))
    assert pearson(x, y) == pytest.approx(_pearson_brute(x, y), abs=1e-12)


def test_spearman_with_ties_matches_brute_force():
    x = [1.0, 2.0, 2.0, 3.0, 5.0, 5.0, 5.0, 8.0]
    y = [2.0, 1.0, 4.0, 4.0, 6.0, 3.0, 7.0, 9.0]
    expected = _pearson_brute(_ranks(x), _ranks(y))
    assert spearman(x, y) == pytest.approx(expected, abs=1e-12)


def test_perfect_correlations():
    x = [1.0, 2.0, 3.0, 4.0]
    assert pearson(x, [2.0, 4.0, 6.0, 8.0]) == pytest.approx(1.0)
    assert spearman(x, [1.0, 10.0, 100.0, 1000.0]) == pytest.approx(1.0)
    assert pearson(x, [-v for v in x]) == pytest.approx(-1.0)


def test_constant_vector_is_undefined():
    with pytest.raises(UndefinedMetricException):
        pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


def test_too_few_points():
    with pytest.raises(ValidationException):
        pearson([1.0, 2.0], [2.0, 1.0])


def test_length_mismatch():
    with pytest.raises(DimensionMismatchException):
        rmse([1.0, 2.0], [1.0])


def test_rmse():
    assert rmse([0.0, 0.0], [3.0, 4.0]) == pytest.approx(math.sqrt(12.5))


def test_fitted_rmse_removes_linear_mapping():
    x = [0.1, 0.4, 0.5, 0.9]
    assert fitted_rmse(x, [2 * v + 1 for v in x]) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(UndefinedMetricException):
        fitted_rmse([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
