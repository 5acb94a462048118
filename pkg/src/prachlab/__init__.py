"""PRACH preamble-detection laboratory.

Generates Zadoff-Chu preamble sets, simulates their reception through fading
channels, and compares a cyclic-correlation detector against a PCA+SVM
multi-class classifier on false-alarm and miss-detection rates versus SNR.
"""

from prachlab.zc import PrachConfig, PreambleSet, cyclic_correlate, generate_root, preamble

__version__ = "0.1.0"

__all__ = [
    "PrachConfig",
    "PreambleSet",
    "cyclic_correlate",
    "generate_root",
    "preamble",
    "__version__",
]
