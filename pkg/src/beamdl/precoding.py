# Zero-forcing precoding, interference-aware beam selection, and sum-rate
# evaluation on beamspace channels.
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .beamspace import BeamspaceChannel

# Collision resolution caps the per-user candidate list to keep the
# assignment search tractable.
MAX_CANDIDATES = 4
MAX_COMBINATIONS = 4096


@dataclass
class Precoder:
    P: np.ndarray
    power_budget: float
    regularized: bool = False


@dataclass
class BeamSelection:
    selected_beams: list[int]
    assignment: list[int]          # per-user beam index


def zf_precoder(h_eff: np.ndarray, rho: float) -> Precoder:
    """Zero-forcing precoder with a global scaling meeting trace(P P^H) = rho.

    P0 = H (H^H H)^-1 nulls inter-user interference (H^H P = gamma I after
    scaling); a rank-deficient Gram matrix falls back to 1e-9 diagonal
    loading and the result is flagged.
    """
    h_eff = np.asarray(h_eff, dtype=complex)
    gram = h_eff.conj().T @ h_eff
    regularized = False
    try:
        base = h_eff @ np.linalg.inv(gram)
    except np.linalg.LinAlgError:
        regularized = True
    else:
        if not np.all(np.isfinite(base)):
            regularized = True
    if regularized:
        base = h_eff @ np.linalg.inv(gram + 1e-9 * np.eye(gram.shape[0]))
    power = np.trace(base @ base.conj().T).real
    if power <= 0.0:
        return Precoder(P=np.zeros_like(h_eff), power_budget=rho, regularized=True)
    gamma = np.sqrt(rho / power)
    return Precoder(P=gamma * base, power_budget=rho, regularized=regularized)


def _zf_sum_rate(h_red: np.ndarray, noise_var: float, rho: float) -> float:
    """Sum rate of ZF on an already-reduced channel (rows = kept beams)."""
    k = h_red.shape[1]
    if not np.any(np.abs(h_red) > 0):
        return 0.0
    prec = zf_precoder(h_red, rho)
    gains = h_red.conj().T @ prec.P          # (K, K)
    rate = 0.0
    for u in range(k):
        desired = np.abs(gains[u, u]) ** 2
        interference = np.sum(np.abs(gains[u, :]) ** 2) - desired
        rate += np.log2(1.0 + desired / (interference + noise_var))
    return float(rate)


def sum_rate(h_tilde: BeamspaceChannel, sel: BeamSelection, noise_var: float,
             rho: float) -> float:
    """ZF sum rate over the rows picked by a beam selection."""
    rows = sorted(set(sel.selected_beams))
    if not rows:
        raise ValueError("empty beam selection")
    return _zf_sum_rate(h_tilde.H_tilde[rows, :], noise_var, rho)


def full_digital_sum_rate(h_tilde: BeamspaceChannel, noise_var: float, rho: float) -> float:
    """ZF sum rate with every beam kept (fully digital benchmark)."""
    return _zf_sum_rate(h_tilde.H_tilde, noise_var, rho)


def ia_beam_select(h_tilde: BeamspaceChannel, n_rf: int, noise_var: float,
                   rho: float) -> BeamSelection:
    """Interference-aware selection of one beam per user.

    Users whose strongest beams are unique keep them; users colliding on a
    beam are re-assigned by searching their strongest candidate beams for
    the combination maximizing the ZF sum rate of the reduced channel
    (exhaustive up to MAX_COMBINATIONS, greedy per user beyond that).
    """
    h = h_tilde.H_tilde
    n_beams, k = h.shape
    if n_rf < k:
        raise ValueError("need at least one RF chain per user")
    mag = np.abs(h)
    if np.count_nonzero(np.any(mag > 0, axis=1)) < k:
        raise ValueError("degenerate channel: fewer nonzero beams than users")

    favorite = [int(np.argmax(mag[:, u])) for u in range(k)]
    beam_users: dict[int, list[int]] = {}
    for u, b in enumerate(favorite):
        beam_users.setdefault(b, []).append(u)

    assignment = list(favorite)
    colliding = sorted(u for users in beam_users.values() if len(users) > 1 for u in users)
    if colliding:
        kept = {assignment[u] for u in range(k) if u not in colliding}
        candidates = {}
        for u in colliding:
            order = np.argsort(-mag[:, u], kind="stable")
            cand = [int(b) for b in order if int(b) not in kept][:MAX_CANDIDATES]
            candidates[u] = cand

        def rate_for(assign) -> float:
            rows = sorted(set(assign))
            if len(rows) < k:
                return -np.inf          # two users on one beam: not a valid selection
            return _zf_sum_rate(h[rows, :], noise_var, rho)

        n_comb = int(np.prod([len(candidates[u]) for u in colliding]))
        if n_comb <= MAX_COMBINATIONS:
            best_rate, best = -np.inf, None
            for combo in itertools.product(*(candidates[u] for u in colliding)):
                trial = list(assignment)
                for u, b in zip(colliding, combo):
                    trial[u] = b
                r = rate_for(trial)
                if r > best_rate:
                    best_rate, best = r, trial
            if best is None:
                raise ValueError("no collision-free beam assignment found")
            assignment = best
        else:
            for u in colliding:
                best_rate, best_beam = -np.inf, None
                for b in candidates[u]:
                    trial = list(assignment)
                    trial[u] = b
                    r = rate_for(trial)
                    if r > best_rate:
                        best_rate, best_beam = r, b
                if best_beam is None:
                    raise ValueError("no collision-free beam assignment found")
                assignment[u] = best_beam

    if len(set(assignment)) < k:
        raise ValueError("degenerate channel: could not assign distinct beams")
    return BeamSelection(selected_beams=sorted(set(assignment)), assignment=assignment)
