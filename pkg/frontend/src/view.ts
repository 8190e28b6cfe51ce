import type { ModelView, Move, NodeView, TreePayload } from "./types";

// Pure DOM construction; handlers are injected so tests can drive clicks.

export interface TreeHandlers {
  onSelect(nodeId: number): void;
}

function labelText(node: NodeView): string {
  if (node.label.length === 0) return "∅";
  return node.label.map((f) => f.text).join(", ");
}

const STATE_RULES = new Set(["TRANSITION", "LOOP", "PRUNE", "PRUNE0"]);

export function renderTree(
  doc: Document,
  tree: TreePayload,
  selected: number | null,
  handlers: TreeHandlers,
): HTMLElement {
  const marks = new Map<number, number[]>();
  for (const node of tree.nodes) {
    for (const target of node.evidence) {
      const list = marks.get(target) ?? [];
      list.push(node.id);
      marks.set(target, list);
    }
  }

  const render = (id: number): HTMLElement => {
    const node = tree.nodes[id];
    const wrapper = doc.createElement("div");
    wrapper.className = "node-wrapper";

    const box = doc.createElement("div");
    box.className = "node";
    box.dataset.nodeId = String(id);
    box.dataset.status = node.status;
    if (node.rule) box.dataset.rule = node.rule;
    // A node where a history rule applied is a poised state boundary;
    // render it double-ringed like the paper's state diagrams.
    if (node.rule && STATE_RULES.has(node.rule)) box.classList.add("state");
    if (id === selected) box.classList.add("selected");
    if (node.status === "open" && node.children.length === 0) {
      box.classList.add("open-leaf");
    }

    const text = doc.createElement("span");
    text.className = "label";
    text.textContent = labelText(node);
    box.appendChild(text);

    if (node.status === "tick") {
      const glyph = doc.createElement("span");
      glyph.className = "outcome tick";
      glyph.textContent = " √";
      box.appendChild(glyph);
    } else if (node.status === "cross") {
      const glyph = doc.createElement("span");
      glyph.className = "outcome cross";
      glyph.textContent = " ×";
      box.appendChild(glyph);
    }

    const referees = marks.get(id);
    if (referees) {
      const badge = doc.createElement("span");
      badge.className = "evidence-badge";
      badge.textContent = " ⚓";
      badge.title = `matched by node(s) ${referees.join(", ")}`;
      box.appendChild(badge);
    }
    if (node.rule) {
      box.title = node.principal
        ? `${node.rule} on ${node.principal}`
        : node.rule;
    }

    box.addEventListener("click", (ev) => {
      ev.stopPropagation();
      handlers.onSelect(id);
    });
    wrapper.appendChild(box);

    if (node.children.length > 0) {
      const kids = doc.createElement("div");
      kids.className = "children";
      for (const child of node.children) {
        const cell = doc.createElement("div");
        cell.className = "child-cell";
        const edge = doc.createElement("div");
        edge.className = "edge";
        // Transition edges carry the double-strike marker.
        edge.textContent = node.rule === "TRANSITION" ? "=" : "↓";
        if (node.rule === "TRANSITION") edge.classList.add("transition");
        cell.appendChild(edge);
        cell.appendChild(render(child));
        kids.appendChild(cell);
      }
      wrapper.appendChild(kids);
    }
    return wrapper;
  };

  const root = doc.createElement("div");
  root.className = "tree";
  root.appendChild(render(0));
  return root;
}

export function renderMoves(
  doc: Document,
  moves: Move[],
  onPick: (move: Move) => void,
): HTMLElement {
  const palette = doc.createElement("div");
  palette.className = "moves";
  if (moves.length === 0) {
    palette.textContent = "no node selected";
    return palette;
  }
  for (const move of moves) {
    const button = doc.createElement("button");
    button.className = "move";
    button.dataset.rule = move.rule;
    button.textContent = move.principal
      ? `${move.rule}: ${move.principal}`
      : move.rule;
    button.addEventListener("click", () => onPick(move));
    palette.appendChild(button);
  }
  return palette;
}

export function renderModel(doc: Document, model: ModelView): SVGSVGElement {
  const svgNs = "http://www.w3.org/2000/svg";
  const step = 110;
  const radius = 26;
  const baseY = 60;
  const total = model.states.length;
  const svg = doc.createElementNS(svgNs, "svg") as SVGSVGElement;
  svg.setAttribute("class", "lasso");
  svg.setAttribute("width", String(total * step + 60));
  svg.setAttribute("height", "150");

  const cx = (i: number) => 40 + i * step + radius;

  for (const [from, to] of model.edges) {
    const line = doc.createElementNS(svgNs, "path");
    if (to === from + 1) {
      line.setAttribute(
        "d",
        `M ${cx(from) + radius} ${baseY} L ${cx(to) - radius} ${baseY}`,
      );
      line.setAttribute("class", "edge-line");
    } else {
      // Loop-back edge (possibly a self loop) drawn under the states.
      const x1 = cx(from);
      const x2 = cx(to);
      line.setAttribute(
        "d",
        `M ${x1} ${baseY + radius} C ${x1} ${baseY + 70}, ` +
          `${x2} ${baseY + 70}, ${x2} ${baseY + radius}`,
      );
      line.setAttribute("class", "edge-line loop-back");
    }
    line.setAttribute("fill", "none");
    line.setAttribute("marker-end", "url(#arrow)");
    svg.appendChild(line);
  }

  const defs = doc.createElementNS(svgNs, "defs");
  defs.innerHTML =
    '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ' +
    'markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
    '<path d="M 0 0 L 10 5 L 0 10 z"/></marker>';
  svg.appendChild(defs);

  model.states.forEach((state, i) => {
    const circle = doc.createElementNS(svgNs, "circle");
    circle.setAttribute("cx", String(cx(i)));
    circle.setAttribute("cy", String(baseY));
    circle.setAttribute("r", String(radius));
    circle.setAttribute(
      "class",
      i >= model.prefix_len ? "state-circle period" : "state-circle",
    );
    svg.appendChild(circle);

    const id = doc.createElementNS(svgNs, "text");
    id.setAttribute("x", String(cx(i)));
    id.setAttribute("y", String(baseY - 4));
    id.setAttribute("text-anchor", "middle");
    id.setAttribute("class", "state-id");
    id.textContent = String(state.id);
    svg.appendChild(id);

    const atoms = doc.createElementNS(svgNs, "text");
    atoms.setAttribute("x", String(cx(i)));
    atoms.setAttribute("y", String(baseY + 12));
    atoms.setAttribute("text-anchor", "middle");
    atoms.setAttribute("class", "state-atoms");
    atoms.textContent = state.atoms.length ? state.atoms.join(",") : "∅";
    svg.appendChild(atoms);
  });

  return svg;
}
