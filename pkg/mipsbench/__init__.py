"""
mipsbench - off-policy evaluation for large action spaces

mipsbench estimates the value of a target policy from bandit data logged by
another policy. Its centrepiece is the marginalized IPS estimator, which
reweights rewards by the ratio of action-embedding distributions instead
of action probabilities, next to the usual baselines (DM, IPS, DR and the
shrunk DR variants).

The package is organised as a pipeline:
1. synthgen: Synthetic environments with categorical action embeddings
2. ingest: Reading and writing logged datasets
3. models: Action posterior and cross-fitted reward models
4. estimators / slope: Value estimates and SLOPE++ selection
5. harness: Replicated sweeps and bootstrap comparisons
6. oracle: Exact bias/variance quantities on tabular instances

Example usage:
    >>> from mipsbench.synthgen import SyntheticConfig, build_environment, sample_logged_data
    >>> config = SyntheticConfig(num_actions=100)
    >>> env = build_environment(config)
    >>> data = sample_logged_data(env, config, n=1000)

Or from command line:
    $ mipsbench sweep --experiment actions --reps 50 --out results.csv
    $ mipsbench oracle-check
"""

__version__ = "0.1.0"
__author__ = "mipsbench Contributors"
__description__ = "Off-policy evaluation benchmark for large action spaces"
