import logging

import numpy as np

from .pareto import nondominated_indices

logger = logging.getLogger(__name__)


def normalise(points, z_min, z_max):
    """Scale every objective to [0, 1] using the initialisation-phase minima and maxima.

    An objective with z_max == z_min takes the constant value 1: every solution already
    attains its maximum, so it must not flatten the dominated volume to zero.
    """
    points = np.asarray(points, dtype=float).reshape(-1, len(z_min))
    low = np.asarray(z_min, dtype=float)
    span = np.asarray(z_max, dtype=float) - low
    flat = span == 0
    scaled = (points - low) / np.where(flat, 1.0, span)
    scaled[:, flat] = 1.0
    return scaled


def hypervolume(front, reference):
    """Exact hypervolume of the union of boxes [reference, point] by recursive slicing.

    Points with a coordinate below the reference are clamped to it (they then add no volume
    in that direction) and a warning is logged.
    """
    reference = np.asarray(reference, dtype=float)
    points = np.asarray(front, dtype=float).reshape(-1, len(reference))
    if len(points) == 0:
        return 0.0

    below = points < reference
    if below.any():
        logger.warning(
            "%d point(s) lie below the hypervolume reference point and were clamped",
            int(below.any(axis=1).sum()))
        points = np.maximum(points, reference)

    keep = nondominated_indices([tuple(p) for p in points])
    points = [tuple(points[i]) for i in keep]
    return float(_slice_volume(points, tuple(reference)))


def _slice_volume(points, reference):
    if not points:
        return 0.0
    if len(reference) == 1:
        return max(p[0] for p in points) - reference[0]

    ordered = sorted(points, key=lambda p: p[-1], reverse=True)
    volume = 0.0
    for index, point in enumerate(ordered):
        floor = ordered[index + 1][-1] if index + 1 < len(ordered) else reference[-1]
        height = point[-1] - floor
        if height > 0:
            lower = [p[:-1] for p in ordered[:index + 1]]
            volume += height * _slice_volume(lower, reference[:-1])
    return volume


def normalised_hypervolume(front, z_min, z_max):
    """Hypervolume of raw objective vectors after normalisation, referenced at the minima."""
    points = normalise(list(front), z_min, z_max) if len(front) else []
    return hypervolume(points, np.zeros(len(z_min)))
