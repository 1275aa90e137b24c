"""Warm-started VQE: shadow-based amplitude-encoding pretraining followed by shot-based VQE."""

__version__ = "0.1.0"
