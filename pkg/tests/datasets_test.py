import numpy as np
import pytest

from signedgraphpy.datasets import *
from signedgraphpy.exceptions import DatasetFormatError, InvalidParameterError
from signedgraphpy.features import FeatureSet, PartialLabels


def write(tmp_path, text, name='data.csv'):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_load_minimal_dataset(tmp_path):
    features, labels = load_dataset(write(tmp_path, "0,0,-1\n1,1,1\n"))
    assert features.n_samples == 2
    assert features.n_features == 2
    assert labels.tolist() == [-1, 1]


def test_load_dataset_with_header(tmp_path):
    features, labels = load_dataset(write(tmp_path, "x,y,label\n0.5,1,1\n2,3,-1\n"))
    assert features.features.tolist() == [[0.5, 1.0], [2.0, 3.0]]
    assert labels.tolist() == [1, -1]


def test_load_dataset_maps_zero_one_labels(tmp_path, caplog):
    path = write(tmp_path, "0,0\n1,1\n2,0\n")
    with pytest.warns(UserWarning, match='mapping'):
        _, labels = load_dataset(path)
    assert labels.tolist() == [-1, 1, -1]
    assert 'mapping' in caplog.text


@pytest.mark.parametrize('text, line', [
    ("0,0,-1\n1,1,2\n", 2),
    ("0,0,-1\n1,1,\n", 2),
    ("0,0,-1\n1,1,1\n2,abc,1\n", 3),
    ("0,0,-1\n1,1,yes\n", 2),
])
def test_load_dataset_reports_line(tmp_path, text, line):
    with pytest.raises(DatasetFormatError) as info:
        load_dataset(write(tmp_path, text))
    assert info.value.line_number == line
    assert f":{line}:" in str(info.value)


def test_load_dataset_ragged_row(tmp_path):
    with pytest.raises(DatasetFormatError):
        load_dataset(write(tmp_path, "0,0,-1\n1,1,1,5,6\n"))


def test_save_and_load(tmp_path):
    values, labels = make_blobs(n_samples=30, seed=3)
    path = tmp_path / 'blobs.csv'
    save_dataset(path, values, labels)
    features, loaded = load_dataset(path)
    assert np.array_equal(loaded, labels)
    assert np.allclose(features.features, values, rtol=1e-9)


def test_synthetic_generators():
    values, labels = make_crescents(n_samples=100, seed=1)
    assert values.shape == (100, 2)
    assert set(labels.tolist()) == {-1, 1}
    again, _ = make_crescents(n_samples=100, seed=1)
    assert np.array_equal(values, again)
    blobs, blob_labels = make_blobs(n_samples=60, separation=8.0, n_features=3, seed=2)
    assert blobs.shape == (60, 3)
    assert np.mean(blobs[blob_labels == 1, 0]) - np.mean(blobs[blob_labels == -1, 0]) == pytest.approx(8.0, abs=1.0)


def test_label_noise_flips_exact_count():
    labels = np.array([1, -1] * 5)
    noisy = inject_label_noise(labels, 0.2, seed=4)
    assert np.sum(noisy != labels) == 2
    assert np.array_equal(inject_label_noise(noisy, 0.2, seed=4), labels)
    assert np.array_equal(inject_label_noise(labels, 0.0, seed=4), labels)
    with pytest.raises(InvalidParameterError):
        inject_label_noise(labels, 0.5, seed=4)


def test_label_noise_positions_depend_on_seed_only():
    first = noise_positions(50, 0.1, seed=9)
    assert np.array_equal(first, noise_positions(50, 0.1, seed=9))
    assert len(set(first.tolist())) == 5


def test_train_test_split():
    train, test = train_test_split(10, 0.7, np.random.default_rng(0))
    assert len(train) == 7 and len(test) == 3
    assert sorted(np.concatenate([train, test]).tolist()) == list(range(10))
    assert np.all(np.diff(train) > 0)
    with pytest.raises(InvalidParameterError):
        train_test_split(10, 1.0, np.random.default_rng(0))


def test_feature_and_label_files(tmp_path):
    features = FeatureSet.from_csv(write(tmp_path, "0,1\n2,3\n4,5\n", 'features.csv'))
    assert features.n_samples == 3
    labels = PartialLabels.from_csv(write(tmp_path, "index,label\n0,1\n2,-1\n", 'labels.csv'), 3)
    assert labels.observed == [(0, 1), (2, -1)]


if __name__ == "__main__":
    pytest.main()
