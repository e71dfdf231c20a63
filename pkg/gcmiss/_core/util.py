import hashlib
import numpy as np


def ensure_rng(rng):
    """Returns a numpy Generator for a seed, SeedSequence or Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def stable_seed(*parts):
    """
    A 64-bit seed derived from the string form of parts. Unlike hash(), the
    value does not change between interpreter runs.
    """
    digest = hashlib.sha256(
        '|'.join(str(part) for part in parts).encode('utf-8')).hexdigest()
    return int(digest[:16], 16)


def named_streams(seed, names):
    """Independent Generators, one per name, spawned from one seed."""
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {name: np.random.default_rng(child)
            for name, child in zip(names, children)}


def symmetrize(matrix):
    return 0.5 * (matrix + np.swapaxes(matrix, -1, -2))


def ordered_sum(values):
    """Sum that does not depend on the order of values."""
    return float(np.sort(np.asarray(values, dtype=float).reshape(-1)).sum())


def occasion_moments(values, mask):
    """
    Observed mean and variance of every occasion, computed on sorted values
    so that subject order does not change the result. Occasions with fewer
    than two observations get NaN.
    """
    T = values.shape[1]
    means = np.full(T, np.nan)
    variances = np.full(T, np.nan)
    for t in range(T):
        observed = np.sort(values[mask[:, t], t])
        if observed.size > 0:
            means[t] = observed.sum() / observed.size
        if observed.size > 1:
            variances[t] = np.sort((observed - means[t])**2).sum() / observed.size
    return means, variances


def pooled_occasion_variance(values, mask):
    """Average over occasions of the observed within-occasion variance."""
    variances = occasion_moments(values, mask)[1]
    variances = variances[np.isfinite(variances)]
    if variances.size == 0 or not variances.mean() > 0:
        return 1.
    return float(variances.mean())
