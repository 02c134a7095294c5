// Shared fetch stubbing for unit tests: route by pathname, count calls.

export interface Route {
  matches: (url: string, init?: RequestInit) => boolean;
  respond: (url: string, init?: RequestInit) => Response | Promise<Response>;
}

export function fakeFetch(routes: Route[]): { fetchFn: typeof fetch; calls: string[] } {
  const calls: string[] = [];
  const fetchFn = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    calls.push(url);
    for (const route of routes) {
      if (route.matches(url, init)) return route.respond(url, init);
    }
    return new Response(JSON.stringify({ error: "not found" }), { status: 404 });
  }) as typeof fetch;
  return { fetchFn, calls };
}

export function json(status: number, body: string): Response {
  return new Response(body, {
    status,
    headers: { "Content-Type": "application/json; charset=utf-8" },
  });
}

export function snapshotBody(seq: number, mainKg = "30.0"): string {
  return (
    `{"deviceMsisdn": "+639170000000", "seq": ${seq}, "receivedAtMs": 3500, ` +
    `"elevKg": 4.91, "mainKg": ${mainKg}, "cElev": 10, "cMain": 60, "tempC": -18.0}`
  );
}

export function alertBody(id: number, seq: number): string {
  return (
    `{"id": ${id}, "deviceMsisdn": "+639170000000", "seq": ${seq}, "receivedAtMs": 99, ` +
    `"platform": "MAIN", "kg": 85.0, "limitKg": 80.0, "acknowledged": false}`
  );
}
