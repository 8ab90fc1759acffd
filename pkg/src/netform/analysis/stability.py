"""Stability and convergence checks."""
from __future__ import annotations

from ..dynamics import FormationHistory, GameState, Mode, resolve_soe, step
from ..graph import all_pairs


def is_stable(state: GameState) -> bool:
    """No selected pair would form or sever a link.

    Under the simple rule and complete information beliefs only move when the
    network does, so if no single pair changes the network, no sequence of
    pairs can either: one sweep over all pairs decides stability.

    Under Bayesian learning a refusal is itself informative, so the sweep is
    played forward with belief updates and the verdict only says that the
    network survived one full round. That is a semi-decision, not a proof.
    """
    if state.game.mode is Mode.BAYES:
        return bayes_sweep_stable(state)
    for pair in all_pairs(state.network.n_agents):
        if resolve_soe(state, pair).changed:
            return False
    return True


def bayes_sweep_stable(state: GameState) -> bool:
    for pair in all_pairs(state.network.n_agents):
        state, out = step(state, pair)
        if out.changed:
            return False
    return True


def unstable_pairs(state: GameState) -> list[tuple[int, int]]:
    return [p for p in all_pairs(state.network.n_agents) if resolve_soe(state, p).changed]


def converged(history: FormationHistory, state: GameState | None = None) -> bool:
    state = state if state is not None else history.final_state
    if state is None:
        raise ValueError("history carries no terminal state")
    return is_stable(state)


def first_stable_period(history: FormationHistory, initial: GameState) -> int | None:
    """Earliest period after which the state is stable and stays unchanged to the end."""
    states = [initial]
    st = initial
    for rec in history.records:
        st, _ = step(st, rec.pair)
        states.append(st)
    final = history.final
    best = None
    for t in range(len(states) - 1, -1, -1):
        if states[t].network != final:
            break
        if is_stable(states[t]):
            best = t
    return best
