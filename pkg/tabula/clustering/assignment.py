from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..errors import DataError
from ..serialization import register_model

NOISE = -1


class Role(Enum):
    CORE = "core"
    BORDER = "border"
    NOISE = "noise"


@register_model("assignment")
@dataclass(frozen=True)
class ClusterAssignment:
    """Cluster id per row; ids are ``0..k-1`` without gaps, :data:`NOISE` marks rows in no cluster."""

    ids: Tuple[int, ...]

    def __post_init__(self) -> None:
        used = {i for i in self.ids if i != NOISE}
        if any(i < NOISE for i in self.ids) or used != set(range(len(used))):
            raise DataError(f"cluster ids must be {NOISE} (noise) or form 0..k-1 without gaps, got {sorted(used)}")

    @property
    def k(self) -> int:
        return len({i for i in self.ids if i != NOISE})

    @property
    def n_rows(self) -> int:
        return len(self.ids)

    @property
    def n_noise(self) -> int:
        return sum(1 for i in self.ids if i == NOISE)

    def array(self) -> np.ndarray:
        return np.asarray(self.ids, dtype=int)

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.array() == cluster)

    def clusters(self) -> List[np.ndarray]:
        """Row positions per cluster, in id order."""
        return [self.members(cluster) for cluster in range(self.k)]

    def as_sets(self) -> List[frozenset]:
        return [frozenset(int(i) for i in members) for members in self.clusters()]

    @classmethod
    def from_labels(cls, labels: Sequence[Any], noise: Any = None) -> "ClusterAssignment":
        """Renumbers arbitrary labels by first appearance; rows labeled ``noise`` become :data:`NOISE`."""
        numbering: Dict[Any, int] = {}
        ids = []
        for label in labels:
            if noise is not None and label == noise:
                ids.append(NOISE)
                continue
            ids.append(numbering.setdefault(label, len(numbering)))
        return cls(tuple(ids))
