"""
Utility Modules

This package contains utility functions and configuration.
"""

from .config import Config
from .file_utils import (
    ensure_directory,
    sidecar_path,
    save_samples,
    load_samples,
    write_json,
)

__all__ = [
    'Config',
    'ensure_directory',
    'sidecar_path',
    'save_samples',
    'load_samples',
    'write_json',
]
