import pytest

from core.core_exceptions import ScoreSchemaException
from subjective.subjective_io import (
    read_clip_metadata,
    read_objective,
    read_roster,
    read_scores,
    roster_summary,
    write_objective,
)
from subjective.subjective_types import ImpairmentCategory

CLIPS_CSV = (
    "clip_id,sequence,impairment,category,qp,bitrate_kbps\n"
    "awgn,Playground,noise,non_compression,,\n"
    "q22,Playground,hevc,compression,22,4190.2659\n"
    "q27,Hallway,hevc,compression,27,\n"
)


@pytest.fixture
def clips(tmp_path):
    path = tmp_path / 'clips.csv'
    path.write_text(CLIPS_CSV)
    return read_clip_metadata(path)


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_clip_metadata(clips):
    assert [c.clip_id for c in clips] == ['awgn', 'q22', 'q27']
    assert clips[0].category is ImpairmentCategory.NON_COMPRESSION
    assert clips[0].qp is None
    assert clips[1].qp == 22
    assert clips[1].bitrate_kbps == 4190.2659
    assert clips[2].bitrate_kbps is None


def test_clip_metadata_errors(tmp_path):
    duplicate = _write(tmp_path, 'dup.csv', "clip_id,sequence,category\na,s,compression\na,s,compression\n")
    with pytest.raises(ScoreSchemaException) as info:
        read_clip_metadata(duplicate)
    assert info.value.row == 2

    category = _write(tmp_path, 'cat.csv', "clip_id,sequence,category\na,s,blur\n")
    with pytest.raises(ScoreSchemaException) as info:
        read_clip_metadata(category)
    assert info.value.column == 'category'

    missing = _write(tmp_path, 'cols.csv', "clip_id,sequence\na,s\n")
    with pytest.raises(ScoreSchemaException):
        read_clip_metadata(missing)


def test_read_scores(tmp_path, clips):
    path = _write(tmp_path, 'scores.csv', "subject,q27,awgn\ns1,3,8\ns2,4,9\n")
    table = read_scores(path, clips)
    assert table.subjects == ['s1', 's2']
    assert table.clip_ids == ['awgn', 'q27']
    assert table.scores.tolist() == [[8, 3], [9, 4]]


@pytest.mark.parametrize('text,row,column', [
    ("subject,awgn\ns1,\n", 1, 'awgn'),
    ("subject,awgn\ns1,5\ns2,11\n", 2, 'awgn'),
    ("subject,awgn\ns1,4.5\n", 1, 'awgn'),
    ("subject,awgn\ns1,good\n", 1, 'awgn'),
    ("subject,awgn\ns1,5\ns2,nan\n", 2, 'awgn'),
    ("subject,awgn\ns1,inf\n", 1, 'awgn'),
    ("subject,awgn\ns1,-Infinity\n", 1, 'awgn'),
    ("subject,awgn\n,5\n", 1, 'subject'),
])
def test_read_scores_reports_location(tmp_path, clips, text, row, column):
    path = _write(tmp_path, 'scores.csv', text)
    with pytest.raises(ScoreSchemaException) as info:
        read_scores(path, clips)
    assert info.value.row == row
    assert info.value.column == column


def test_read_scores_unknown_clip(tmp_path, clips):
    path = _write(tmp_path, 'scores.csv', "subject,mystery\ns1,5\n")
    with pytest.raises(ScoreSchemaException, match='mystery'):
        read_scores(path, clips)


def test_read_scores_duplicate_subject(tmp_path, clips):
    path = _write(tmp_path, 'scores.csv', "subject,awgn\ns1,5\ns1,6\n")
    with pytest.raises(ScoreSchemaException):
        read_scores(path, clips)


def test_missing_file(tmp_path, clips):
    with pytest.raises(ScoreSchemaException):
        read_scores(tmp_path / 'absent.csv', clips)


def test_objective_round_trip(tmp_path):
    path = tmp_path / 'objective.csv'
    write_objective(path, [{'clip_id': 'a', 'metric': 'psnr', 'adapter': 'pu', 'score': 31.5}])
    write_objective(path, [{'clip_id': 'b', 'metric': 'psnr', 'adapter': 'pu', 'score': 28.25}], append=True)
    assert read_objective(path) == {'psnr/pu': {'a': 31.5, 'b': 28.25}}


def test_objective_duplicate(tmp_path):
    path = _write(tmp_path, 'objective.csv', "clip_id,metric,adapter,score\na,psnr,pu,1\na,psnr,pu,2\n")
    with pytest.raises(ScoreSchemaException):
        read_objective(path)


def test_roster(tmp_path):
    path = _write(tmp_path, 'roster.csv',
                  "subject,sex,age,prescreen_passed\ns1,M,24,yes\ns2,f,31,true\ns3,F,28,0\n")
    roster = read_roster(path)
    assert roster['prescreen_passed'].tolist() == [True, True, False]
    summary = roster_summary(roster)
    assert summary.startswith('3 испытуемых')
    assert 'F: 2' in summary and 'M: 1' in summary
    assert 'возраст 24-31' in summary
    assert 'прошли отбор: 2' in summary


def test_roster_bad_flag(tmp_path):
    path = _write(tmp_path, 'roster.csv', "subject,prescreen_passed\ns1,maybe\n")
    with pytest.raises(ScoreSchemaException) as info:
        read_roster(path)
    assert info.value.row == 1
