import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..dataset import Dataset
from ..distance import EUCLIDEAN, DistanceMetric, pairwise
from ..errors import InvalidEps, UsageError
from .assignment import NOISE, ClusterAssignment, Role

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DbscanResult:
    assignment: ClusterAssignment
    roles: Tuple[Role, ...]

    @property
    def core(self) -> List[int]:
        return [i for i, role in enumerate(self.roles) if role is Role.CORE]


def neighbourhoods(distances: np.ndarray, eps: float) -> List[np.ndarray]:
    """Rows within ``eps`` of each row, the row itself included."""
    return [np.flatnonzero(row <= eps) for row in distances]


def dbscan(
    dataset: Dataset,
    eps: float,
    min_pts: int,
    metric: DistanceMetric = EUCLIDEAN,
    start: Optional[int] = None,
) -> DbscanResult:
    """Density based clustering: a row with at least ``min_pts`` rows (itself included) within ``eps`` is a core
    row, clusters grow from core rows over their neighbourhoods.

    Unvisited core rows seed new clusters in ascending row order, beginning with ``start`` when given. A border
    row joins the first cluster that reaches it, so border ids (not roles) depend on that order.
    """
    if not eps > 0:
        raise InvalidEps(f"'eps' must be positive, got {eps}")
    if min_pts < 1:
        raise UsageError(f"'min_pts' must be at least 1, got {min_pts}")
    n = dataset.n_rows
    if start is not None and not 0 <= start < n:
        raise UsageError(f"'start' = {start} is not a row index of the {n} rows")
    regions = neighbourhoods(pairwise(dataset.matrix(), metric), eps)
    is_core = np.array([len(region) >= min_pts for region in regions], dtype=bool)

    ids = np.full(n, NOISE)
    order = ([start] if start is not None else []) + [i for i in range(n) if i != start]
    cluster = 0
    for seed in order:
        if not is_core[seed] or ids[seed] != NOISE:
            continue
        ids[seed] = cluster
        queue = [seed]
        while queue:
            row = queue.pop(0)
            if not is_core[row]:
                continue
            for neighbour in regions[row]:
                if ids[neighbour] == NOISE:
                    ids[neighbour] = cluster
                    queue.append(int(neighbour))
        logger.debug("DBSCAN cluster %d seeded at row %d: %d rows", cluster, seed, int(np.sum(ids == cluster)))
        cluster += 1

    roles = tuple(
        Role.CORE if is_core[i] else (Role.BORDER if ids[i] != NOISE else Role.NOISE) for i in range(n)
    )
    logger.info(
        "DBSCAN: %d clusters, %d core rows, %d noise rows", cluster, int(is_core.sum()), int(np.sum(ids == NOISE))
    )
    return DbscanResult(ClusterAssignment(tuple(int(i) for i in ids)), roles)
