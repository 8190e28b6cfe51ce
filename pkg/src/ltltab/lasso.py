"""Lasso-shaped transition structures: a finite prefix plus one loop.

A lasso with prefix length N and period length M has states 0..N+M-1,
edges (i, i+1) plus a back edge from N+M-1 to N, and induces the single
ultimately periodic fullpath sigma with sigma_i = i for i < N and
sigma_i = (i - N) mod M + N afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class LassoModel:
    """States are (id, atom set) pairs with ids 0..prefix_len+period_len-1."""

    states: tuple[tuple[int, frozenset[str]], ...]
    prefix_len: int
    period_len: int

    def __post_init__(self):
        n, m = self.prefix_len, self.period_len
        if m < 1:
            raise ValueError("period length must be at least 1")
        if n < 0:
            raise ValueError("prefix length must be nonnegative")
        if [s for s, _ in self.states] != list(range(n + m)):
            raise ValueError("state ids must be 0..prefix_len+period_len-1")

    @property
    def transitions(self) -> tuple[tuple[int, int], ...]:
        total = self.prefix_len + self.period_len
        edges = [(i, i + 1) for i in range(total - 1)]
        edges.append((total - 1, self.prefix_len))
        return tuple(edges)

    def state_at(self, position: int) -> int:
        """State visited at fullpath position ``position``."""
        n = self.prefix_len
        if position < n:
            return position
        return (position - n) % self.period_len + n

    def atoms(self, state: int) -> frozenset[str]:
        return self.states[state][1]

    def to_json(self) -> dict:
        return {
            "states": [{"id": s, "atoms": sorted(a)} for s, a in self.states],
            "edges": [list(e) for e in self.transitions],
            "prefix_len": self.prefix_len,
            "period_len": self.period_len,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LassoModel":
        states = tuple((s["id"], frozenset(s["atoms"]))
                       for s in data["states"])
        model = cls(states, data["prefix_len"], data["period_len"])
        declared = sorted(tuple(e) for e in data["edges"])
        if declared != sorted(model.transitions):
            raise ValueError("edges do not form a lasso over the states")
        return model
