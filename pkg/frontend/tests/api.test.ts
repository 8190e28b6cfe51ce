import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, ExplorerApi } from "../src/api";

function fakeFetch(status: number, body: unknown) {
  return vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  })) as unknown as typeof fetch;
}

const api = new ExplorerApi("http://backend:9");

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ExplorerApi", () => {
  it("posts the formula when creating a session", async () => {
    const spy = fakeFetch(200, { id: "abc" });
    vi.stubGlobal("fetch", spy);
    const sid = await api.createSession("G p");
    expect(sid).toBe("abc");
    expect(spy).toHaveBeenCalledWith(
      "http://backend:9/sessions",
      expect.objectContaining({
        method: "POST",
        body: JSON.stringify({ formula: "G p" }),
      }),
    );
  });

  it("fetches trees and move lists from the pinned endpoints", async () => {
    const spy = fakeFetch(200, { moves: [] });
    vi.stubGlobal("fetch", spy);
    await api.getMoves("s1", 4);
    expect(spy).toHaveBeenCalledWith(
      "http://backend:9/sessions/s1/nodes/4/moves",
      undefined,
    );
  });

  it("sends rule and principal when applying a move", async () => {
    const spy = fakeFetch(200, {
      node: {}, new_nodes: [], open_leaves: [], model: null,
    });
    vi.stubGlobal("fetch", spy);
    await api.applyMove("s1", 2, {
      rule: "UNTIL",
      principal: "q U p",
      principal_key: 9,
    });
    const [, init] = spy.mock.calls[0] as unknown as [string, RequestInit];
    expect(JSON.parse(init.body as string)).toEqual({
      rule: "UNTIL",
      principal: "q U p",
    });
  });

  it("raises ApiError with the server payload on failure", async () => {
    vi.stubGlobal(
      "fetch",
      fakeFetch(409, { error: "node 3 is not an open leaf" }),
    );
    await expect(api.undo("s1")).rejects.toThrowError(ApiError);
    await expect(
      api.applyMove("s1", 3, { rule: "AND", principal: null, principal_key: null }),
    ).rejects.toThrowError(/open leaf/);
  });
});
