"""LFSM synthesis, wavelets, the kernel ``h`` and wavelet coefficients."""
from .kernel import LfsmSpec, HKernel, clt_condition, get_kernel, h_decay_fit, h_kernel
from .synthesis import (
    LfsmSynthesizer,
    SynthesisConfig,
    WaveletCoefGrid,
    coef_count,
    scale_kernel_pair,
    synth_lfsm_path,
    wavelet_coeffs_direct,
    wavelet_coeffs_pyramidal,
)
from .io import (
    fmt_real,
    read_grid_csv,
    read_json,
    read_path_csv,
    write_grid_csv,
    write_json,
    write_path_csv,
)
from .wavelets import WaveletSpec, build_wavelet, daubechies_filter

__all__ = [
    "LfsmSpec",
    "HKernel",
    "clt_condition",
    "get_kernel",
    "h_decay_fit",
    "h_kernel",
    "LfsmSynthesizer",
    "SynthesisConfig",
    "WaveletCoefGrid",
    "coef_count",
    "scale_kernel_pair",
    "synth_lfsm_path",
    "wavelet_coeffs_direct",
    "wavelet_coeffs_pyramidal",
    "fmt_real",
    "read_grid_csv",
    "read_json",
    "read_path_csv",
    "write_grid_csv",
    "write_json",
    "write_path_csv",
    "WaveletSpec",
    "build_wavelet",
    "daubechies_filter",
]
