"""
Configuration of the synthetic bandit environment.
"""

from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Tuple
import numbers

from sklearn.utils import check_scalar


@dataclass(frozen=True)
class SyntheticConfig:
    """
    Parameters of a synthetic environment and of the data drawn from it.

    Attributes:
        num_actions: |A|, at least 2.
        context_dim: d_x.
        embed_dims: d_e, at least 1.
        embed_cardinality: |E_k| for every dimension (10 by default, 2 for
            the embedding-selection experiments).
        beta: Inverse temperature of the softmax logging policy. Negative
            values make the logging policy favour poor actions.
        epsilon: Exploration rate of the epsilon-greedy target policy.
        reward_noise: Standard deviation of the Gaussian reward noise.
        num_deficient_actions: |U_0|, number of actions the logging policy
            never plays. Must be smaller than num_actions.
        withheld_dims: Embedding dimensions hidden from the estimators.
        seed: Master seed (non-negative).

    Raises:
        ValueError, TypeError: If a field is out of range.
    """

    num_actions: int = 1000
    context_dim: int = 10
    embed_dims: int = 3
    embed_cardinality: int = 10
    beta: float = -1.0
    epsilon: float = 0.05
    reward_noise: float = 2.5
    num_deficient_actions: int = 0
    withheld_dims: Tuple[int, ...] = field(default=())
    seed: int = 12345

    def __post_init__(self):
        check_scalar(self.num_actions, "num_actions", numbers.Integral, min_val=2)
        check_scalar(self.context_dim, "context_dim", numbers.Integral, min_val=1)
        check_scalar(self.embed_dims, "embed_dims", numbers.Integral, min_val=1)
        check_scalar(self.embed_cardinality, "embed_cardinality", numbers.Integral, min_val=1)
        check_scalar(self.beta, "beta", numbers.Real)
        check_scalar(self.epsilon, "epsilon", numbers.Real, min_val=0.0, max_val=1.0)
        check_scalar(self.reward_noise, "reward_noise", numbers.Real, min_val=0.0)
        check_scalar(
            self.num_deficient_actions,
            "num_deficient_actions",
            numbers.Integral,
            min_val=0,
            max_val=self.num_actions - 1,
        )
        check_scalar(self.seed, "seed", numbers.Integral, min_val=0)
        withheld = tuple(sorted({int(k) for k in self.withheld_dims}))
        if any(k < 0 or k >= self.embed_dims for k in withheld):
            raise ValueError(f"withheld_dims {withheld} must be a subset of [0, {self.embed_dims})")
        object.__setattr__(self, "withheld_dims", withheld)

    @property
    def embedding_cardinalities(self) -> Tuple[int, ...]:
        return (self.embed_cardinality,) * self.embed_dims

    def with_(self, **changes: Any) -> "SyntheticConfig":
        """Copy with some fields replaced (validation runs again)."""
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["withheld_dims"] = list(self.withheld_dims)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SyntheticConfig":
        data = dict(data)
        data["withheld_dims"] = tuple(data.get("withheld_dims", ()))
        return cls(**data)
