"""
Logged bandit data.

A LoggedDataset holds n records (x, a, e, r, pi_0(a|x)) in columnar arrays.
Embedding dimensions listed in ``withheld_dims`` stay in the raw data (the
environment used them to generate rewards) but are hidden from estimators:
everything estimator-facing goes through ``observed_dims`` and
``observed_embedding()``.
"""

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Tuple

import numpy as np

from .errors import InvalidEnvironmentError


@dataclass(frozen=True)
class LoggedRecord:
    """
    One logged tuple (x, a, e, r) with its logging propensity.

    Attributes:
        context: Real vector of length d_x.
        action: Action id in [0, |A|).
        embedding: Integer vector of length d_e; entry k in [0, |E_k|).
        reward: Observed reward.
        logging_propensity: pi_0(a|x), in (0, 1].
    """

    context: Tuple[float, ...]
    action: int
    embedding: Tuple[int, ...]
    reward: float
    logging_propensity: float

    def __post_init__(self):
        if not 0.0 < self.logging_propensity <= 1.0:
            raise InvalidEnvironmentError(
                f"logging propensity must lie in (0, 1], got {self.logging_propensity!r} for action {self.action}"
            )


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class LoggedDataset:
    """
    Columnar logged dataset.

    Attributes:
        context: (n, d_x) float array.
        action: (n,) int array.
        embedding: (n, d_e) int array (all dimensions, including withheld ones).
        reward: (n,) float array.
        pscore: (n,) logged propensities pi_0(a_i|x_i).
        embedding_cardinalities: |E_k| per dimension.
        num_actions: |A|.
        withheld_dims: Dimensions hidden from estimators.

    Raises:
        InvalidEnvironmentError: If shapes disagree, n is zero, an action or
            embedding entry is out of range, or a propensity is not in (0, 1].
    """

    context: np.ndarray
    action: np.ndarray
    embedding: np.ndarray
    reward: np.ndarray
    pscore: np.ndarray
    embedding_cardinalities: Tuple[int, ...]
    num_actions: int
    withheld_dims: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        context = np.array(self.context, dtype=float, ndmin=2)
        action = np.array(self.action, dtype=np.int64).ravel()
        embedding = np.array(self.embedding, dtype=np.int64, ndmin=2)
        reward = np.array(self.reward, dtype=float).ravel()
        pscore = np.array(self.pscore, dtype=float).ravel()
        cards = tuple(int(c) for c in self.embedding_cardinalities)
        withheld = tuple(sorted({int(k) for k in self.withheld_dims}))
        n = action.size

        if n < 1:
            raise InvalidEnvironmentError("a logged dataset needs at least one record")
        if not (context.shape[0] == embedding.shape[0] == reward.size == pscore.size == n):
            raise InvalidEnvironmentError("dataset columns have inconsistent lengths")
        if embedding.shape[1] != len(cards):
            raise InvalidEnvironmentError(
                f"embedding has {embedding.shape[1]} dims but {len(cards)} cardinalities were declared"
            )
        if np.any(action < 0) or np.any(action >= self.num_actions):
            raise InvalidEnvironmentError(f"actions must lie in [0, {self.num_actions})")
        if np.any(embedding < 0) or np.any(embedding >= np.array(cards)[None, :]):
            raise InvalidEnvironmentError("embedding entries exceed declared cardinalities")
        if np.any(pscore <= 0) or np.any(pscore > 1):
            raise InvalidEnvironmentError("logged propensities must lie in (0, 1]")
        if any(k < 0 or k >= len(cards) for k in withheld):
            raise InvalidEnvironmentError(f"withheld dims {withheld} out of range for d_e={len(cards)}")

        object.__setattr__(self, "context", _frozen(context))
        object.__setattr__(self, "action", _frozen(action))
        object.__setattr__(self, "embedding", _frozen(embedding))
        object.__setattr__(self, "reward", _frozen(reward))
        object.__setattr__(self, "pscore", _frozen(pscore))
        object.__setattr__(self, "embedding_cardinalities", cards)
        object.__setattr__(self, "num_actions", int(self.num_actions))
        object.__setattr__(self, "withheld_dims", withheld)

    def __len__(self) -> int:
        return self.action.size

    @property
    def context_dim(self) -> int:
        return self.context.shape[1]

    @property
    def embed_dims(self) -> int:
        return len(self.embedding_cardinalities)

    @property
    def observed_dims(self) -> Tuple[int, ...]:
        """Embedding dimensions visible to estimators."""
        return tuple(k for k in range(self.embed_dims) if k not in self.withheld_dims)

    def observed_embedding(self) -> np.ndarray:
        """(n, |observed_dims|) view of the embedding with withheld dimensions removed."""
        return self.embedding[:, list(self.observed_dims)]

    def records(self) -> Iterator[LoggedRecord]:
        """Iterate over the dataset as LoggedRecords."""
        for i in range(len(self)):
            yield LoggedRecord(
                context=tuple(self.context[i].tolist()),
                action=int(self.action[i]),
                embedding=tuple(self.embedding[i].tolist()),
                reward=float(self.reward[i]),
                logging_propensity=float(self.pscore[i]),
            )

    @classmethod
    def from_records(
        cls,
        records: Iterable[LoggedRecord],
        embedding_cardinalities: Tuple[int, ...],
        num_actions: int,
        withheld_dims: Tuple[int, ...] = (),
    ) -> "LoggedDataset":
        """Build a dataset from LoggedRecords."""
        records = list(records)
        if not records:
            raise InvalidEnvironmentError("a logged dataset needs at least one record")
        return cls(
            context=np.array([r.context for r in records], dtype=float),
            action=np.array([r.action for r in records]),
            embedding=np.array([r.embedding for r in records]),
            reward=np.array([r.reward for r in records]),
            pscore=np.array([r.logging_propensity for r in records]),
            embedding_cardinalities=embedding_cardinalities,
            num_actions=num_actions,
            withheld_dims=withheld_dims,
        )

    def subset(self, indices: np.ndarray) -> "LoggedDataset":
        """Dataset made of the given rows (repeats allowed, as in bootstrap resampling)."""
        indices = np.asarray(indices, dtype=np.int64)
        return LoggedDataset(
            context=self.context[indices],
            action=self.action[indices],
            embedding=self.embedding[indices],
            reward=self.reward[indices],
            pscore=self.pscore[indices],
            embedding_cardinalities=self.embedding_cardinalities,
            num_actions=self.num_actions,
            withheld_dims=self.withheld_dims,
        )

    def with_withheld(self, withheld_dims: Tuple[int, ...]) -> "LoggedDataset":
        """Same records with a different estimator-facing mask."""
        return LoggedDataset(
            context=self.context,
            action=self.action,
            embedding=self.embedding,
            reward=self.reward,
            pscore=self.pscore,
            embedding_cardinalities=self.embedding_cardinalities,
            num_actions=self.num_actions,
            withheld_dims=withheld_dims,
        )
