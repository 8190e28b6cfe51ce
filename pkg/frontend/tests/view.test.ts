// @vitest-environment jsdom
import { describe, expect, it, vi } from "vitest";

import { SessionState } from "../src/state";
import { renderModel, renderMoves, renderTree } from "../src/view";
import type { ModelView, TreePayload } from "../src/types";

const L = (text: string, key: number) => ({ text, key });

const SAMPLE_TREE: TreePayload = {
  id: "s1",
  formula: "G p",
  nodes: [
    {
      id: 0, label: [L("G p", 3)], rule: "GLOBALLY", principal: "G p",
      children: [1], status: "open", evidence: [],
    },
    {
      id: 1, label: [L("p", 0), L("X G p", 4)], rule: "TRANSITION",
      principal: null, children: [2], status: "open", evidence: [],
    },
    {
      id: 2, label: [L("G p", 3)], rule: "GLOBALLY", principal: "G p",
      children: [3], status: "open", evidence: [],
    },
    {
      id: 3, label: [L("p", 0), L("X G p", 4)], rule: "LOOP",
      principal: null, children: [], status: "tick", evidence: [1],
    },
  ],
  verdict: { satisfiable: true, model: null },
};

describe("renderTree", () => {
  it("shows every label, set braces omitted", () => {
    const el = renderTree(document, SAMPLE_TREE, null, { onSelect() {} });
    const labels = [...el.querySelectorAll(".node .label")].map(
      (n) => n.textContent,
    );
    expect(labels).toEqual(["G p", "p, X G p", "G p", "p, X G p"]);
  });

  it("marks transition edges with the double-strike glyph", () => {
    const el = renderTree(document, SAMPLE_TREE, null, { onSelect() {} });
    const edges = [...el.querySelectorAll(".edge")].map((e) => e.textContent);
    expect(edges).toEqual(["↓", "=", "↓"]);
  });

  it("renders the tick glyph and the evidence badge", () => {
    const el = renderTree(document, SAMPLE_TREE, null, { onSelect() {} });
    expect(el.querySelector('[data-node-id="3"] .tick')).toBeTruthy();
    const badge = el.querySelector('[data-node-id="1"] .evidence-badge');
    expect(badge).toBeTruthy();
    expect(badge!.getAttribute("title")).toContain("3");
  });

  it("routes clicks to the selection handler", () => {
    const onSelect = vi.fn();
    const el = renderTree(document, SAMPLE_TREE, null, { onSelect });
    (el.querySelector('[data-node-id="2"]') as HTMLElement).click();
    expect(onSelect).toHaveBeenCalledWith(2);
  });

  it("renders the empty label as the empty-set glyph", () => {
    const tree: TreePayload = {
      id: "s", formula: "p",
      nodes: [{ id: 0, label: [], rule: null, principal: null,
                children: [], status: "open", evidence: [] }],
      verdict: null,
    };
    const el = renderTree(document, tree, null, { onSelect() {} });
    expect(el.querySelector(".label")!.textContent).toBe("∅");
  });
});

describe("renderMoves", () => {
  it("lists moves in payload order and reports picks", () => {
    const onPick = vi.fn();
    const moves = [
      { rule: "AND", principal: "p & q", principal_key: 2 },
      { rule: "OR", principal: "r | s", principal_key: 5 },
    ];
    const el = renderMoves(document, moves, onPick);
    const buttons = [...el.querySelectorAll("button")];
    expect(buttons.map((b) => b.textContent)).toEqual([
      "AND: p & q",
      "OR: r | s",
    ]);
    buttons[1].click();
    expect(onPick).toHaveBeenCalledWith(moves[1]);
  });
});

describe("renderModel", () => {
  const MODEL: ModelView = {
    states: [
      { id: 0, atoms: ["q"] },
      { id: 1, atoms: ["p"] },
      { id: 2, atoms: [] },
    ],
    edges: [[0, 1], [1, 2], [2, 1]],
    prefix_len: 1,
    period_len: 2,
  };

  it("draws one circle per state and a loop-back edge", () => {
    const svg = renderModel(document, MODEL);
    expect(svg.querySelectorAll("circle").length).toBe(3);
    expect(svg.querySelectorAll(".loop-back").length).toBe(1);
    const atoms = [...svg.querySelectorAll(".state-atoms")].map(
      (t) => t.textContent,
    );
    expect(atoms).toEqual(["q", "p", "∅"]);
  });
});

describe("SessionState", () => {
  it("mirrors the payload and drops a stale selection", () => {
    const state = new SessionState();
    state.reset("s1");
    state.setTree(SAMPLE_TREE);
    expect(state.openLeaves()).toEqual([]);
    state.select(3, []);
    state.setTree(SAMPLE_TREE); // node 3 is ticked: not an open leaf
    expect(state.selected).toBeNull();
  });

  it("collects evidence references", () => {
    const state = new SessionState();
    state.reset("s1");
    state.setTree(SAMPLE_TREE);
    expect(state.evidenceTargets().get(1)).toEqual([3]);
  });
});
