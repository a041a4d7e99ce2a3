from pathlib import Path

import pytest

from core.core_exceptions import ManifestException
from hdrio.hdrio_manifest import (
    DatasetManifest,
    load_manifest,
    parse_manifest,
    save_manifest,
    validate_manifest,
)

BUNDLED = Path(__file__).resolve().parent.parent / 'data' / 'dml_hdr_dataset.yaml'


def _sequence(**overrides):
    entry = {
        'name': 'Clip', 'frames': 10, 'fps': 30, 'width': 64, 'height': 32,
        'environment': 'indoor', 'motion': 'slow',
    }
    entry.update(overrides)
    return entry


def test_bundled_manifest_describes_dataset():
    manifest = load_manifest(BUNDLED)
    sources = {s.name: s for s in manifest.sequences if s.lineage is None}
    assert set(sources) == {'Playground', 'Table', 'Christmas', 'Hallway'}
    assert sources['Playground'].frames == 222
    assert sources['Playground'].motion.value == 'fast'
    assert sources['Christmas'].frames == 317
    assert all(s.resolution == '2048x1080' and s.fps == 30 for s in manifest.sequences)


def test_bundled_bitrates():
    manifest = load_manifest(BUNDLED)
    compressed = manifest.get('Playground_QP22')
    assert compressed.qp == 22
    assert compressed.bitrate_kbps == 4190.2659
    assert compressed.lineage.parent == 'Playground'
    assert compressed.lineage.parameters['gop_size'] == 8
    assert manifest.bitrates()[('Hallway', 27)] == 290.2119


def test_qp_requires_compression_lineage():
    with pytest.raises(ManifestException):
        parse_manifest({'sequences': [_sequence(qp=22)]})


def test_compression_requires_qp():
    with pytest.raises(ManifestException):
        parse_manifest({'sequences': [_sequence(lineage={'kind': 'compression', 'parent': 'X'})]})


def test_duplicate_names():
    with pytest.raises(ManifestException):
        parse_manifest({'sequences': [_sequence(), _sequence()]})


def test_unknown_schema_version():
    with pytest.raises(ManifestException):
        parse_manifest({'schema_version': 2, 'sequences': []})


def test_unknown_field_names_location():
    with pytest.raises(ManifestException, match='colour'):
        parse_manifest({'sequences': [_sequence(colour='red')]})


def test_missing_sequence_lookup():
    with pytest.raises(ManifestException):
        parse_manifest({'sequences': [_sequence()]}).get('Other')


def test_save_and_reload(tmp_path):
    manifest = parse_manifest({'name': 'derived', 'sequences': [
        _sequence(lineage={'kind': 'awgn', 'parent': 'Src', 'seed': 7, 'parameters': {'sigma': 0.002}}),
    ]})
    path = tmp_path / 'manifest.yaml'
    save_manifest(manifest, path)
    restored = load_manifest(path)
    assert isinstance(restored, DatasetManifest)
    assert restored.sequences[0].lineage.seed == 7


def test_validate_lines():
    lines = validate_manifest(BUNDLED)
    assert len(lines) == len(load_manifest(BUNDLED).sequences)
    assert any('Playground_QP22' in line and '4190.2659' in line for line in lines)


def test_broken_yaml(tmp_path):
    path = tmp_path / 'bad.yaml'
    path.write_text('sequences: [unclosed', encoding='utf-8')
    with pytest.raises(ManifestException):
        load_manifest(path)


def test_missing_file(tmp_path):
    with pytest.raises(ManifestException):
        load_manifest(tmp_path / 'absent.yaml')
