"""End-to-end smoke tests for the python bindings."""

import numpy as np
import pytest

import svrc


def checker(h=64, w=64):
    img = np.zeros((h, w), dtype=np.uint8)
    img[::2, :] = 40
    img[:, ::2] += 60
    img[h // 4 : h // 2, w // 4 : w // 2] = 220
    return img


def test_dct_round_trip():
    rng = np.random.default_rng(1)
    block = rng.uniform(0, 1, size=(16, 16))
    coeffs = svrc.dct2_forward(block)
    back = svrc.dct2_inverse(coeffs)
    assert np.abs(back - block).max() < 1e-9
    assert coeffs.shape == (16, 16)


def test_csf_and_frequency():
    assert svrc.coeff_frequency(0, 0) == 0.0
    assert svrc.coeff_frequency(1, 0) == pytest.approx(8.0 / 3.0)
    assert svrc.csf_weight(8.0) == pytest.approx(1.0, abs=1e-3)
    assert svrc.csf_weight(58.0) == 0.01


def test_normalization_round_trip_and_jacobian():
    rng = np.random.default_rng(2)
    y = rng.uniform(-1, 1, size=(16, 16))
    params = svrc.NormParams.defaults()
    r = svrc.normalize_forward(y, params)
    assert np.sign(r[y != 0]).tolist() == np.sign(y[y != 0]).tolist()
    back = svrc.normalize_inverse(r, params)
    assert np.linalg.norm(back - y) / np.linalg.norm(y) < 1e-8

    jac = svrc.normalize_jacobian(y, params)
    assert jac.shape == (256, 256)
    assert svrc.diagonality_ratio(jac) > 0.01
    assert svrc.diagonality_ratio(np.eye(4)) == 0.0


def test_interaction_matrix_rows():
    H = svrc.build_interaction_matrix()
    assert H.shape == (256, 256)
    assert np.allclose(H.sum(axis=1), 1.0, atol=1e-12)


def test_svr_single_point():
    model = svrc.fit_svr(np.array([[0.5, 0.5]]), [1.0], [0.1], sigma=0.2)
    assert model.weights[0] == pytest.approx(0.9, abs=1e-9)
    assert model.predict(np.array([[0.5, 0.5]]))[0] == pytest.approx(0.9, abs=1e-9)


def test_eps_profile():
    eps, active = svrc.build_eps_profile("rki1", eps0=0.05)
    assert not active[0]
    assert active.sum() < 255  # high frequencies dropped
    eps_nl, active_nl = svrc.build_eps_profile("nl-svr", eps0=0.05)
    assert active_nl.sum() == 255
    assert np.unique(eps_nl[active_nl]).size == 1


def test_codec_round_trip():
    img = checker()
    data = svrc.encode(img, method="csf-svr", eps0=0.05, sigma=0.025)
    out = svrc.decode(data)
    assert out.shape == img.shape
    assert svrc.rmse(img, out) < 60.0  # sane reconstruction, hard content
    again = svrc.decode(data)
    assert np.array_equal(out, again)


def test_codec_rejects_wrong_params(tmp_path):
    img = checker()
    data = svrc.encode(img, method="nl-svr")
    pfile = tmp_path / "params.txt"
    pfile.write_text("beta_default = 0.5\n")
    other = svrc.NormParams.from_file(str(pfile))
    with pytest.raises(RuntimeError):
        svrc.decode(data, other)


def test_metrics():
    img = checker()
    noisy = np.clip(img.astype(np.int32) + 8, 0, 255).astype(np.uint8)
    assert svrc.rmse(img, img) == 0.0
    assert svrc.ssim(img, img) == pytest.approx(1.0)
    assert svrc.mpe(img, img) == 0.0
    assert svrc.ssim(img, noisy) < 1.0
    assert svrc.mpe(img, noisy) > 0.0


def test_jpeg_baseline():
    img = checker(128, 128)
    size_lo, dec_lo = svrc.jpeg_baseline(img, 10)
    size_hi, dec_hi = svrc.jpeg_baseline(img, 90)
    assert size_lo < size_hi
    assert svrc.rmse(img, dec_hi) <= svrc.rmse(img, dec_lo)


def test_entropy_round_trip():
    rng = np.random.default_rng(3)
    symbols = rng.integers(0, 16, size=5000).tolist()
    blob = svrc.entropy_code(symbols, alphabet=16)
    assert svrc.entropy_decode(blob, len(symbols), alphabet=16) == symbols


def test_quantizer():
    w = [0.5, -1.0, 0.0, 1.0]
    syms = svrc.quantize_weights(w, bits=5, w_max=1.0)
    deq = svrc.dequantize_weights(syms, bits=5, w_max=1.0)
    assert max(abs(a - b) for a, b in zip(w, deq)) <= 1.0 / 32

    with pytest.raises(RuntimeError):
        svrc.quantize_weights(w, bits=1, w_max=1.0)


def test_pgm_files(tmp_path):
    img = checker(48, 32)
    path = tmp_path / "img.pgm"
    svrc.save_pgm(img, str(path))
    back = svrc.load_pgm(str(path))
    assert np.array_equal(img, back)
