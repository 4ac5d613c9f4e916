"""Python bindings for the ancbound C++ core.

Configs are plain dicts with the same keys as the CLI's JSON config files.
"""

import json

import numpy as np

from . import _ancbound
from ._ancbound import (
    ArgumentError,
    ConfigError,
    DivergenceError,
    IoError,
    UndefinedMetricError,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "DivergenceError",
    "IoError",
    "UndefinedMetricError",
    "default_config",
    "mutual_information",
    "nmse_db",
    "run_bound",
    "run_sweep",
    "simulate_paths",
    "support_bound",
    "synth_noise",
    "welch_psd",
]


def _dump(config):
    return json.dumps(config or {})


def default_config():
    return json.loads(_ancbound.default_config_json())


def simulate_paths(t60_s, config=None):
    """Return (primary, secondary) impulse responses as float64 arrays."""
    return _ancbound.simulate_paths(_dump(config), t60_s)


def welch_psd(x, sample_rate_hz, window_len=1024, overlap=0.75):
    return _ancbound.welch_psd(np.asarray(x, dtype=float), sample_rate_hz, window_len, overlap)


def mutual_information(d, y, sample_rate_hz=16000, bin_count=128, bandwidth_scale=1.0,
                       frame_len=4096, frame_hop=4096):
    return json.loads(_ancbound.mutual_information(
        np.asarray(d, dtype=float), np.asarray(y, dtype=float), sample_rate_hz, bin_count,
        bandwidth_scale, frame_len, frame_hop))


def support_bound(primary, secondary, sample_rate_hz=16000, fft_size=1024, threshold_db=45.0):
    return json.loads(_ancbound.support_bound(
        np.asarray(primary, dtype=float), np.asarray(secondary, dtype=float), sample_rate_hz,
        fft_size, threshold_db))


def nmse_db(e, d, sample_rate_hz=16000):
    return _ancbound.nmse_db(np.asarray(e, dtype=float), np.asarray(d, dtype=float), sample_rate_hz)


def synth_noise(kind, seconds, sample_rate_hz=16000, seed=0):
    return _ancbound.synth_noise(kind, seconds, sample_rate_hz, seed)


def run_bound(noise, t60_s, canceller="fxlms", config=None):
    return json.loads(_ancbound.run_bound(_dump(config), noise, t60_s, canceller))


def run_sweep(config=None):
    """Run a sweep; returns (report dict, CSV text)."""
    report, csv = _ancbound.run_sweep(_dump(config))
    return json.loads(report), csv
