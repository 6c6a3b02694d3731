"""Egg-embryo segmentation toolkit.

Thin numpy-facing wrapper around the C++ core: grayscale conversion,
histogram equalization and CLAHE, Otsu thresholding, region filtering,
exact Euclidean distance transform, flooding watershed, and fertility
detection over synthetic candling imagery.
"""

from ._eggseg import (
    WATERSHED_LINE,
    __version__,
    accuracy,
    bbox_filter,
    binarize,
    clahe,
    clip_limit,
    colorize_labels,
    connected_components,
    detect,
    distance_transform,
    enhance,
    equalize,
    evaluate_corpus,
    generate_egg,
    histogram,
    invert,
    median_filter,
    otsu_threshold,
    run_pipeline,
    to_grayscale,
    watershed,
)

__all__ = [
    "WATERSHED_LINE",
    "__version__",
    "accuracy",
    "bbox_filter",
    "binarize",
    "clahe",
    "clip_limit",
    "colorize_labels",
    "connected_components",
    "detect",
    "distance_transform",
    "enhance",
    "equalize",
    "evaluate_corpus",
    "generate_egg",
    "histogram",
    "invert",
    "median_filter",
    "otsu_threshold",
    "run_pipeline",
    "to_grayscale",
    "watershed",
]
