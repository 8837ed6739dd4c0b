"""Numerical 2D descriptors and feature standardization."""

from .registry import DESCRIPTOR_NAMES, DescriptorVector, compute_descriptors
from .standardize import Standardizer, fit_standardizer

__all__ = [
    "DESCRIPTOR_NAMES", "DescriptorVector", "compute_descriptors",
    "Standardizer", "fit_standardizer",
]
