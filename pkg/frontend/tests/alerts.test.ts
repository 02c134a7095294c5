import { describe, expect, it } from "vitest";

import { GatewayClient } from "../src/api";
import { AlertFeed, FEED_CAP } from "../src/alerts";
import { alertBody, fakeFetch, json } from "./helpers";

function feedWith(bodies: () => string) {
  const { fetchFn, calls } = fakeFetch([
    { matches: (u) => u.includes("/api/alerts"), respond: () => json(200, bodies()) },
  ]);
  return { feed: new AlertFeed(new GatewayClient("", fetchFn)), calls };
}

describe("AlertFeed", () => {
  it("renders newest first and pages with sinceId", async () => {
    let body = `[${alertBody(1, 10)}, ${alertBody(2, 11)}]`;
    const { feed, calls } = feedWith(() => body);
    await feed.pollOnce();
    expect(feed.getState().rows.map((r) => r.item.id)).toEqual([2, 1]);
    expect(calls[0]).toContain("sinceId=0");

    body = `[${alertBody(3, 12)}]`;
    await feed.pollOnce();
    expect(calls[1]).toContain("sinceId=2");
    expect(feed.getState().rows.map((r) => r.item.id)).toEqual([3, 2, 1]);
  });

  it("keeps raw chunks aligned with items", async () => {
    const { feed } = feedWith(() => `[${alertBody(1, 10)}, ${alertBody(2, 11)}]`);
    await feed.pollOnce();
    const row = feed.getState().rows[0];
    expect(row.item.id).toBe(2);
    expect(row.raw).toContain('"id": 2');
  });

  it("freezes on API errors and reports them", async () => {
    let healthy = true;
    const { fetchFn } = fakeFetch([
      {
        matches: (u) => u.includes("/api/alerts"),
        respond: () => (healthy ? json(200, `[${alertBody(1, 10)}]`) : json(500, "{}")),
      },
    ]);
    const feed = new AlertFeed(new GatewayClient("", fetchFn));
    await feed.pollOnce();
    healthy = false;
    await feed.pollOnce();
    const state = feed.getState();
    expect(state.error).toContain("500");
    expect(state.rows).toHaveLength(1); // frozen, not cleared
  });

  it("acknowledgment is local display state", async () => {
    const { feed } = feedWith(() => `[${alertBody(1, 10)}]`);
    await feed.pollOnce();
    expect(feed.getState().rows[0].acknowledged).toBe(false);
    feed.acknowledge(1);
    expect(feed.getState().rows[0].acknowledged).toBe(true);
  });

  it("caps the list at 50 until expanded", async () => {
    const hundred = "[" + Array.from({ length: 100 }, (_, i) => alertBody(i + 1, i)).join(", ") + "]";
    const { feed } = feedWith(() => hundred);
    await feed.pollOnce();
    expect(feed.totalCount).toBe(100);
    expect(feed.getState().rows).toHaveLength(FEED_CAP);
    feed.expand();
    expect(feed.getState().rows).toHaveLength(100);
  });
});
