// Check button state machine: POST /api/check, then poll the snapshot until
// its seq moves past the pre-click value or the timeout elapses. Clock and
// sleeping are injected so the 30 s path is unit-testable with fake timers.

import { GatewayClient, InventorySnapshot, WithRaw } from "./api";

export type CheckPhase = "idle" | "pending" | "timeout" | "error";

export interface CheckState {
  phase: CheckPhase;
  snapshot: WithRaw<InventorySnapshot> | null;
  error: string | null;
}

export interface CheckOptions {
  pollMs?: number;
  timeoutMs?: number;
  now?: () => number;
  sleep?: (ms: number) => Promise<void>;
  onChange?: (state: CheckState) => void;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export class CheckController {
  readonly pollMs: number;
  readonly timeoutMs: number;
  private now: () => number;
  private sleep: (ms: number) => Promise<void>;
  private onChange: (state: CheckState) => void;
  private state: CheckState = { phase: "idle", snapshot: null, error: null };

  constructor(private client: GatewayClient, options: CheckOptions = {}) {
    this.pollMs = options.pollMs ?? 2000;
    this.timeoutMs = options.timeoutMs ?? 30_000;
    this.now = options.now ?? Date.now;
    this.sleep = options.sleep ?? defaultSleep;
    this.onChange = options.onChange ?? (() => {});
  }

  getState(): CheckState {
    return this.state;
  }

  private isPending(): boolean {
    return this.state.phase === "pending";
  }

  private update(partial: Partial<CheckState>): void {
    this.state = { ...this.state, ...partial };
    this.onChange(this.state);
  }

  /** Background refresh of the snapshot outside any pending check. */
  async refresh(): Promise<void> {
    if (this.isPending()) return;
    try {
      const snapshot = await this.client.latest();
      if (this.isPending()) return; // a click raced us; let it win
      if (snapshot) this.update({ snapshot, error: null });
    } catch {
      // background refresh failures are silent; the feed shows API health
    }
  }

  /** Trigger a check; no-op while one is already pending. */
  async click(): Promise<void> {
    if (this.isPending()) return;
    const preSeq = this.state.snapshot?.data.seq ?? -1;
    this.update({ phase: "pending", error: null });
    try {
      await this.client.check();
    } catch (err) {
      this.update({ phase: "error", error: err instanceof Error ? err.message : String(err) });
      return;
    }
    const startedAt = this.now();
    while (this.now() - startedAt < this.timeoutMs) {
      try {
        const snapshot = await this.client.latest();
        if (snapshot && snapshot.data.seq > preSeq) {
          this.update({ phase: "idle", snapshot, error: null });
          return;
        }
      } catch {
        // poll errors are retried until the timeout
      }
      await this.sleep(this.pollMs);
    }
    this.update({ phase: "timeout" });
  }
}
