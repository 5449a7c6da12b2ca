"""
File Utilities Module

Utilities for writing and reading simulation artifacts.
"""

import json
import os
from typing import Any, Dict, Optional, Tuple

import numpy as np


def ensure_directory(directory: str) -> None:
    """
    Ensure a directory exists, create it if it doesn't.

    Args:
        directory: Directory path
    """
    if directory and not os.path.exists(directory):
        os.makedirs(directory)


def sidecar_path(path: str) -> str:
    """Path of the JSON sidecar that accompanies a binary sample file."""
    root, _ = os.path.splitext(path)
    return root + ".json"


def save_samples(
    samples: np.ndarray,
    path: str,
    sample_rate: float,
    scenario_hash: Optional[str] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> Tuple[str, str]:
    """
    Write a real float64 sample record plus its JSON sidecar.

    Args:
        samples: Real-valued samples
        path: Destination of the binary file (little-endian float64)
        sample_rate: Sample rate in Sa/s
        scenario_hash: Hash of the scenario that produced the record
        extra: Additional sidecar fields

    Returns:
        Tuple of (binary path, sidecar path)
    """
    data = np.ascontiguousarray(samples, dtype='<f8')
    if data.ndim != 1:
        raise ValueError("samples: must be one-dimensional")

    ensure_directory(os.path.dirname(path))
    data.tofile(path)

    meta = {
        'sample_rate': float(sample_rate),
        'length': int(data.size),
        'dtype': 'float64-le',
        'scenario_hash': scenario_hash,
    }
    if extra:
        meta.update(extra)

    meta_path = sidecar_path(path)
    with open(meta_path, 'w') as f:
        json.dump(meta, f, indent=2, sort_keys=True)

    return path, meta_path


def load_samples(path: str) -> Tuple[np.ndarray, Dict[str, Any]]:
    """
    Read a sample record written by save_samples.

    Args:
        path: Path to the binary file

    Returns:
        Tuple of (samples, sidecar metadata)
    """
    with open(sidecar_path(path)) as f:
        meta = json.load(f)

    data = np.fromfile(path, dtype='<f8')
    if data.size != meta['length']:
        raise ValueError(
            f"{path}: expected {meta['length']} samples, found {data.size}"
        )
    return data.astype(np.float64), meta


def write_json(payload: Dict[str, Any], path: str) -> str:
    """Write JSON with sorted keys so identical payloads give identical bytes."""
    ensure_directory(os.path.dirname(path))
    with open(path, 'w') as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return path
