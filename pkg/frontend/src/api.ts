import type { ApplyResult, AutoResult, Move, TreePayload } from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public payload: Record<string, unknown>,
  ) {
    super(String(payload["error"] ?? `request failed (${status})`));
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = (await response.json()) as Record<string, unknown>;
  if (!response.ok) {
    throw new ApiError(response.status, body);
  }
  return body as T;
}

function post(body?: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body ?? {}),
  };
}

/** Thin typed client; the UI never interprets formulas itself. */
export class ExplorerApi {
  constructor(public baseUrl: string) {}

  async createSession(formula: string): Promise<string> {
    const out = await request<{ id: string }>(
      `${this.baseUrl}/sessions`,
      post({ formula }),
    );
    return out.id;
  }

  getTree(sessionId: string): Promise<TreePayload> {
    return request(`${this.baseUrl}/sessions/${sessionId}`);
  }

  async getMoves(sessionId: string, nodeId: number): Promise<Move[]> {
    const out = await request<{ moves: Move[] }>(
      `${this.baseUrl}/sessions/${sessionId}/nodes/${nodeId}/moves`,
    );
    return out.moves;
  }

  applyMove(
    sessionId: string,
    nodeId: number,
    move: Move,
  ): Promise<ApplyResult> {
    return request(
      `${this.baseUrl}/sessions/${sessionId}/nodes/${nodeId}/moves`,
      post({ rule: move.rule, principal: move.principal }),
    );
  }

  undo(sessionId: string): Promise<TreePayload> {
    return request(`${this.baseUrl}/sessions/${sessionId}/undo`, post());
  }

  autoRun(sessionId: string): Promise<AutoResult> {
    return request(`${this.baseUrl}/sessions/${sessionId}/auto`, post());
  }
}
