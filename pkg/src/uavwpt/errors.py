"""Exceptions shared across the numerical modules."""


class ConsistencyError(RuntimeError):
    """An internally built matrix lost positive definiteness.

    The accumulated interference matrices are I plus sums of PSD terms, so
    this can only happen when inputs are corrupted (NaN/Inf powers or
    channels); it is never an expected runtime condition.
    """
