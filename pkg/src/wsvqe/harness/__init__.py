"""Experiment harness: instance files, sweeps, summaries, landscapes and plots."""
