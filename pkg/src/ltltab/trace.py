"""Construction traces: one event per tableau node, JSON and DOT export."""

from __future__ import annotations

from .formula import format_formula
from .rules import Label, RuleId, RuleOutcome, is_poised


class TraceEvent:
    """One node of the constructed tableau tree.

    ``rule``/``principal``/``evidence`` describe the rule applied *at*
    this node; they stay None on leaves the search never expanded
    (status "open", possible once a tick ended the search early).
    """

    __slots__ = ("id", "parent", "label", "rule", "principal", "children",
                 "status", "evidence")

    def __init__(self, node_id: int, parent: int | None, label: Label):
        self.id = node_id
        self.parent = parent
        self.label = label
        self.rule: RuleId | None = None
        self.principal = None
        self.children: list[int] = []
        self.status = "open"
        self.evidence: list[int] = []

    def record(self, outcome: RuleOutcome, evidence_ids: list[int]) -> None:
        self.rule = outcome.rule
        self.principal = outcome.principal
        self.evidence = evidence_ids
        if outcome.kind == "tick":
            self.status = "tick"
        elif outcome.kind == "cross":
            self.status = "cross"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "parent": self.parent,
            "label": [format_formula(f) for f in self.label],
            "rule": self.rule.value if self.rule is not None else None,
            "principal": (format_formula(self.principal)
                          if self.principal is not None else None),
            "children": list(self.children),
            "status": self.status,
            "evidence": list(self.evidence),
        }


def trace_to_json(events: list[TraceEvent]) -> dict:
    return {"nodes": [e.to_json() for e in events]}


def path_to(events: list[TraceEvent], node_id: int) -> list[TraceEvent]:
    """Events on the path from the root to ``node_id``, inclusive."""
    path = []
    cur: int | None = node_id
    while cur is not None:
        ev = events[cur]
        path.append(ev)
        cur = ev.parent
    path.reverse()
    return path


def poised_depth_of(events: list[TraceEvent], node_id: int) -> int:
    """Number of poised labels on the root-to-node path."""
    return sum(1 for ev in path_to(events, node_id) if is_poised(ev.label))


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def trace_to_dot(events: list[TraceEvent]) -> str:
    """Graphviz rendering: poised nodes double-ringed, TRANSITION edges
    bold with an '=' marker, outcome glyphs on the leaves."""
    lines = ["digraph tableau {", "  node [shape=box];"]
    for ev in events:
        text = ", ".join(format_formula(f) for f in ev.label) or "{}"
        attrs = [f'label="{_dot_escape(text)}"']
        if is_poised(ev.label):
            attrs.append("peripheries=2")
        lines.append(f"  n{ev.id} [{', '.join(attrs)}];")
        if ev.status == "tick":
            lines.append(f'  n{ev.id}_out [label="√", shape=plaintext];')
            lines.append(f"  n{ev.id} -> n{ev.id}_out [arrowhead=none];")
        elif ev.status == "cross":
            lines.append(f'  n{ev.id}_out [label="×", shape=plaintext];')
            lines.append(f"  n{ev.id} -> n{ev.id}_out [arrowhead=none];")
        for child in ev.children:
            if ev.rule is RuleId.TRANSITION:
                lines.append(f'  n{ev.id} -> n{child} '
                             f'[style=bold, label="="];')
            else:
                lines.append(f"  n{ev.id} -> n{child};")
    lines.append("}")
    return "\n".join(lines) + "\n"
