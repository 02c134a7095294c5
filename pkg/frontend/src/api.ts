// Typed client for the gateway HTTP API. The UI never does arithmetic on
// weights or counts; numeric display strings are extracted verbatim from
// the raw response body (JSON.parse would reformat 30.0 into "30").

export interface InventorySnapshot {
  deviceMsisdn: string;
  seq: number;
  receivedAtMs: number;
  elevKg: number;
  mainKg: number;
  cElev: number;
  cMain: number;
  tempC: number;
}

export interface AlertItem {
  id: number;
  deviceMsisdn: string;
  seq: number;
  receivedAtMs: number;
  platform: string;
  kg: number;
  limitKg: number;
  acknowledged: boolean;
}

export interface WithRaw<T> {
  data: T;
  raw: string;
}

/** Extract the literal JSON token for a key, exactly as the server sent it. */
export function rawField(rawJson: string, key: string): string | null {
  const pattern = new RegExp(`"${key}"\\s*:\\s*("(?:[^"\\\\]|\\\\.)*"|[^,}\\]\\s]+)`);
  const match = pattern.exec(rawJson);
  if (!match) return null;
  const token = match[1];
  return token.startsWith('"') ? JSON.parse(token) : token;
}

/** Split a raw JSON array of flat objects into per-object raw chunks. */
export function rawObjects(rawJsonArray: string): string[] {
  return rawJsonArray.match(/\{[^{}]*\}/g) ?? [];
}

export class GatewayClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  /** At most one request in flight per endpoint; concurrent callers share it. */
  private dedup<T>(key: string, run: () => Promise<T>): Promise<T> {
    const existing = this.inflight.get(key);
    if (existing) return existing as Promise<T>;
    const promise = run().finally(() => this.inflight.delete(key));
    this.inflight.set(key, promise);
    return promise;
  }

  latest(): Promise<WithRaw<InventorySnapshot> | null> {
    return this.dedup("latest", async () => {
      const resp = await this.fetchFn(`${this.baseUrl}/api/inventory/latest`);
      if (resp.status === 404) return null;
      if (!resp.ok) throw new Error(`latest failed: HTTP ${resp.status}`);
      const raw = await resp.text();
      return { data: JSON.parse(raw) as InventorySnapshot, raw };
    });
  }

  check(): Promise<number> {
    return this.dedup("check", async () => {
      const resp = await this.fetchFn(`${this.baseUrl}/api/check`, { method: "POST" });
      if (!resp.ok) throw new Error(`check failed: HTTP ${resp.status}`);
      const body = (await resp.json()) as { requestId: number };
      return body.requestId;
    });
  }

  alerts(sinceId: number): Promise<WithRaw<AlertItem[]>> {
    return this.dedup("alerts", async () => {
      const resp = await this.fetchFn(`${this.baseUrl}/api/alerts?sinceId=${sinceId}`);
      if (!resp.ok) throw new Error(`alerts failed: HTTP ${resp.status}`);
      const raw = await resp.text();
      return { data: JSON.parse(raw) as AlertItem[], raw };
    });
  }
}
