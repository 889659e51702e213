import numpy as np
import pytest

from polarscale import (
    DataError,
    SVDConfig,
    W2VConfig,
    export_text,
    init_matrices,
    load_model,
    save_model,
)

from helpers import make_model


def _w2v_model():
    v, w = init_matrices(6, 4, rng_seed=1)
    w = w + np.float32(0.25)
    config = W2VConfig(algorithm="cbow", k=4, window=3, learning_rate=0.025,
                       epochs=7, negatives=9, rng_seed=123,
                       subsample_threshold=1e-4)
    model = make_model([f"w{i}" for i in range(6)], v, w,
                       freqs=[60, 50, 40, 30, 20, 10], config=config)
    model.loss_per_epoch = [3.5, 2.5, 2.0]
    return model


def test_w2v_roundtrip_restores_scoring_state(tmp_path):
    model = _w2v_model()
    path = tmp_path / "model.bin"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.vocab.terms == model.vocab.terms
    assert loaded.vocab.frequencies == model.vocab.frequencies
    assert np.array_equal(loaded.V, model.V)
    assert np.array_equal(loaded.W, model.W)
    # the container header keeps exactly (algorithm, k, window, rng_seed);
    # other hyperparameters are training-time only and revert to defaults
    assert loaded.config.algorithm == "cbow"
    assert loaded.config.k == 4
    assert loaded.config.window == 3
    assert loaded.config.rng_seed == 123
    assert loaded.config.subsample_threshold is None
    assert loaded.loss_per_epoch == []


def test_svd_roundtrip_has_no_w(tmp_path):
    v, _ = init_matrices(5, 3, rng_seed=2)
    model = make_model(["a", "b", "c", "d", "e"], v, None,
                       config=SVDConfig(k=3, weighting="log-count", rng_seed=8))
    path = tmp_path / "svd.bin"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.W is None
    assert not loaded.has_output_weights
    assert loaded.config.algorithm == "svd"
    assert loaded.config.k == 3
    assert loaded.config.rng_seed == 8
    assert np.array_equal(loaded.V, model.V)


def test_save_is_byte_deterministic(tmp_path):
    model = _w2v_model()
    p1, p2 = tmp_path / "m1.bin", tmp_path / "m2.bin"
    save_model(model, p1)
    save_model(model, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_container_starts_with_magic(tmp_path):
    model = _w2v_model()
    path = tmp_path / "model.bin"
    save_model(model, path)
    assert path.read_bytes()[:8] == b"LSSW2V1\x00"


def test_load_rejects_wrong_magic(tmp_path):
    path = tmp_path / "bogus.bin"
    path.write_bytes(b"NOTAMODEL" + b"\x00" * 64)
    with pytest.raises(DataError):
        load_model(path)


def test_load_rejects_truncated_file(tmp_path):
    model = _w2v_model()
    path = tmp_path / "model.bin"
    save_model(model, path)
    raw = path.read_bytes()
    path.write_bytes(raw[: len(raw) // 2])
    with pytest.raises(DataError):
        load_model(path)


def test_load_rejects_trailing_garbage(tmp_path):
    model = _w2v_model()
    path = tmp_path / "model.bin"
    save_model(model, path)
    path.write_bytes(path.read_bytes() + b"extra")
    with pytest.raises(DataError):
        load_model(path)


def test_load_missing_file(tmp_path):
    with pytest.raises(DataError):
        load_model(tmp_path / "absent.bin")


def test_export_text_format(tmp_path):
    model = _w2v_model()
    path = tmp_path / "vectors.txt"
    export_text(model, path)
    lines = path.read_text().splitlines()
    assert len(lines) == 6  # one line per term, no header
    first = lines[0].split()
    assert first[0] == model.vocab.terms[0]
    assert len(first) == 5  # term + K floats
    got = np.asarray([float(x) for x in first[1:]], dtype=np.float32)
    assert np.allclose(got, model.V[0], atol=1e-6)
