"""Support vector regression image codec: block-DCT and divisively
normalized perceptual domains, quality metrics and the JPEG-like baseline."""

from ._svrc import (
    NormParams,
    SvrModel,
    build_eps_profile,
    build_interaction_matrix,
    coeff_frequency,
    csf_weight,
    dct2_forward,
    dct2_inverse,
    decode,
    dequantize_weights,
    diagonality_ratio,
    encode,
    entropy_code,
    entropy_decode,
    fit_svr,
    jpeg_baseline,
    load_pgm,
    mpe,
    normalize_forward,
    normalize_inverse,
    normalize_jacobian,
    quantize_weights,
    rmse,
    save_pgm,
    ssim,
)

__all__ = [
    "NormParams",
    "SvrModel",
    "build_eps_profile",
    "build_interaction_matrix",
    "coeff_frequency",
    "csf_weight",
    "dct2_forward",
    "dct2_inverse",
    "decode",
    "dequantize_weights",
    "diagonality_ratio",
    "encode",
    "entropy_code",
    "entropy_decode",
    "fit_svr",
    "jpeg_baseline",
    "load_pgm",
    "mpe",
    "normalize_forward",
    "normalize_inverse",
    "normalize_jacobian",
    "quantize_weights",
    "rmse",
    "save_pgm",
    "ssim",
]
