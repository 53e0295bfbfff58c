"""Continuous-time Markov chains: assembly, steady state, availability."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

MINUTES_PER_YEAR = 525600.0


class CtmcError(ValueError):
    pass


class UnknownState(CtmcError):
    pass


class NegativeRate(CtmcError):
    pass


class ReducibleChain(CtmcError):
    """The chain has no unique steady state.

    ``unreachable`` holds the states from which the recurrent class entered
    from the first state can never be reached.
    """

    def __init__(self, message, unreachable):
        super().__init__(message)
        self.unreachable = tuple(unreachable)


class SingularSystem(CtmcError):
    pass


@dataclass(frozen=True)
class State:
    name: str
    available: bool


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    rate: float
    label: str = ""


@dataclass(frozen=True)
class Ctmc:
    states: tuple[State, ...]
    transitions: tuple[Transition, ...]
    generator: np.ndarray = field(repr=False, compare=False)

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.states]

    @property
    def available_mask(self) -> np.ndarray:
        return np.array([s.available for s in self.states], dtype=bool)

    def index(self, name: str) -> int:
        for i, s in enumerate(self.states):
            if s.name == name:
                return i
        raise UnknownState(name)

    def to_dict(self) -> dict:
        return {
            "states": [{"name": s.name, "available": s.available} for s in self.states],
            "transitions": [
                {"from": t.source, "to": t.target, "rate": t.rate, "label": t.label}
                for t in self.transitions
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> Ctmc:
        states = [(s["name"], bool(s["available"])) for s in doc["states"]]
        transitions = [
            (t["from"], t["to"], float(t["rate"]), t.get("label", "")) for t in doc["transitions"]
        ]
        return build(states, transitions)


@dataclass(frozen=True)
class SteadyState:
    pi: np.ndarray
    residual: float

    def as_dict(self, chain: Ctmc) -> dict[str, float]:
        return dict(zip(chain.names, self.pi.tolist()))


def build(states, transitions) -> Ctmc:
    """Assemble a generator matrix from ``(name, available)`` states and
    ``(from, to, rate[, label])`` transitions.

    Parallel edges are summed, self-loops dropped, zero-rate edges kept in the
    declarative list but contribute nothing. The chain must be unichain
    (exactly one closed communicating class); transient states are allowed
    and receive zero steady-state probability.
    """
    space = tuple(s if isinstance(s, State) else State(s[0], bool(s[1])) for s in states)
    names = [s.name for s in space]
    if len(set(names)) != len(names):
        raise CtmcError(f"duplicate state names in {names}")
    if not any(s.available for s in space):
        raise CtmcError("at least one state must be available")
    pos = {n: i for i, n in enumerate(names)}

    edges = []
    for t in transitions:
        t = t if isinstance(t, Transition) else Transition(*t)
        for end in (t.source, t.target):
            if end not in pos:
                raise UnknownState(f"transition {t.source}->{t.target} references unknown state {end!r}")
        if not t.rate >= 0 or not np.isfinite(t.rate):
            raise NegativeRate(f"transition {t.source}->{t.target} has invalid rate {t.rate!r}")
        if t.source == t.target:
            continue
        edges.append(t)

    n = len(space)
    q = np.zeros((n, n))
    for t in edges:
        q[pos[t.source], pos[t.target]] += t.rate
    np.fill_diagonal(q, 0.0)
    np.fill_diagonal(q, -q.sum(axis=1))

    _check_unichain(q, names)
    return Ctmc(space, tuple(edges), q)


def _reach(adj: np.ndarray, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in np.flatnonzero(adj[i]):
            j = int(j)
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def _check_unichain(q: np.ndarray, names: list[str]) -> None:
    adj = q > 0
    np.fill_diagonal(adj, False)
    n = len(names)
    reach = [_reach(adj, i) for i in range(n)]
    # a state is recurrent iff every state it reaches can reach it back
    closed_classes = {
        frozenset(reach[i]) for i in range(n) if all(i in reach[j] for j in reach[i])
    }
    if len(closed_classes) == 1:
        return
    # report relative to the recurrent class (lowest state index) reached from the first state
    home = min((c for c in closed_classes if c <= reach[0]), key=min)
    bad = sorted({names[i] for i in range(n) if not home <= reach[i]})
    raise ReducibleChain(
        f"chain has {len(closed_classes)} closed classes; states that cannot reach "
        f"the recurrent class {sorted(names[i] for i in home)}: {bad}",
        bad,
    )


def steady_state(chain: Ctmc) -> SteadyState:
    """Solve pi Q = 0, sum(pi) = 1 by replacing the last balance equation
    with the normalization row and doing a dense LU solve."""
    q = chain.generator
    n = q.shape[0]
    a = q.T.copy()
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"steady-state system is singular: {exc}") from exc
    if not np.all(np.isfinite(pi)):
        raise SingularSystem("steady-state solve produced non-finite values")
    # roundoff can leave transient states at +-1e-20; anything larger is a bug
    scale = max(1.0, float(np.abs(pi).max()))
    if pi.min() < -1e-12 * scale:
        raise SingularSystem(f"steady-state solve produced negative probability {pi.min()!r}")
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    residual = float(np.abs(pi @ q).max())
    return SteadyState(pi, residual)


def uniformized_power_iteration(chain: Ctmc, tol: float = 1e-15, max_squarings: int = 200) -> np.ndarray:
    """Long-run distribution of the uniformized DTMC P = I + Q / L.

    Powers of P are taken by repeated squaring, which reaches P^(2^k) in k
    steps; with non-negative entries there is no cancellation. L is 1.05x
    the largest exit rate so every state keeps a self-loop (aperiodic).
    """
    q = chain.generator
    n = q.shape[0]
    lam = 1.05 * float(np.max(-np.diag(q)))
    if lam == 0.0:
        return np.full(n, 1.0 / n)
    p = np.eye(n) + q / lam
    p = np.clip(p, 0.0, None)
    p /= p.sum(axis=1, keepdims=True)
    for _ in range(max_squarings):
        p2 = p @ p
        p2 /= p2.sum(axis=1, keepdims=True)
        if np.abs(p2 - p).max() <= tol and np.ptp(p2, axis=0).max() <= 1e-13:
            p = p2
            break
        p = p2
    pi = p[0].copy()
    return pi / pi.sum()


def availability(chain: Ctmc, ss: SteadyState) -> float:
    return float(ss.pi[chain.available_mask].sum())


def unavailability(chain: Ctmc, ss: SteadyState) -> float:
    """Sum of the unavailable states' probabilities, taken directly so small
    values keep their relative precision."""
    return float(ss.pi[~chain.available_mask].sum())


def downtime_minutes_per_year(a: float) -> float:
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"availability must lie in [0, 1], got {a!r}")
    return (1.0 - a) * MINUTES_PER_YEAR
