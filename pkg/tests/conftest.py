import numpy as np


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def unit_columns(rng, m, n):
    a = crandn(rng, m, n)
    return a / np.linalg.norm(a, axis=0)


def erc_margin(a, support):
    """Exact-recovery condition margin: max_j ||pinv(A_S) a_j||_1 over j not in S.

    Below 1 the greedy pursuit provably recovers any signal supported on S
    in the noiseless case; rejection sampling on this is the operational
    meaning of a well-separated support.
    """
    pinv = np.linalg.pinv(a[:, support])
    others = [j for j in range(a.shape[1]) if j not in support]
    return max(np.sum(np.abs(pinv @ a[:, j])) for j in others)


def well_separated_instance(rng, m, n, s, erc_max=0.9, max_tries=500):
    """Draw (A, support, coefficients) with a support passing the ERC screen."""
    a = unit_columns(rng, m, n)
    for _ in range(max_tries):
        support = sorted(int(j) for j in rng.choice(n, size=s, replace=False))
        if erc_margin(a, support) < erc_max:
            break
        a = unit_columns(rng, m, n)
    else:
        raise RuntimeError("could not find a well-separated support")
    mags = rng.uniform(0.5, 1.5, size=s)
    coeff = mags * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, size=s))
    return a, support, coeff
