"""Multiscale Constant-Q analysis/synthesis filterbank and mask-based enhancement."""

from ._kernels import backend
from .autoencoder import DEFAULT_CONFIG, EmbeddingTensor, MsaeConfig, autoencode, decode, encode, magnitude
from .bands import BandPlan, constant_q_plan, measured_q, uniform_plan
from .masking import ConstantMask, GainFloor, OracleAmplitudeMask, OracleWienerMask, apply_mask, enhance, oracle_amplitude_mask, oracle_wiener_mask
from .xform import KernelSet, analyze, build_kernels, synthesize

__version__ = "0.1.0"

__all__ = [
    "BandPlan",
    "ConstantMask",
    "DEFAULT_CONFIG",
    "EmbeddingTensor",
    "GainFloor",
    "KernelSet",
    "MsaeConfig",
    "OracleAmplitudeMask",
    "OracleWienerMask",
    "analyze",
    "apply_mask",
    "autoencode",
    "backend",
    "build_kernels",
    "constant_q_plan",
    "decode",
    "encode",
    "enhance",
    "magnitude",
    "measured_q",
    "oracle_amplitude_mask",
    "oracle_wiener_mask",
    "synthesize",
    "uniform_plan",
]
