// Polling alert feed. Acknowledgment is client-local display state; the
// gateway keeps no per-user read markers.

import { AlertItem, GatewayClient, rawObjects } from "./api";

export const FEED_CAP = 50;

export interface FeedRow {
  item: AlertItem;
  raw: string;
  acknowledged: boolean;
}

export interface FeedState {
  rows: FeedRow[]; // newest first
  showAll: boolean;
  error: string | null;
}

export class AlertFeed {
  private rows: FeedRow[] = [];
  private lastSeenId = 0;
  private showAll = false;
  private error: string | null = null;

  constructor(
    private client: GatewayClient,
    private onChange: (state: FeedState) => void = () => {},
  ) {}

  getState(): FeedState {
    const visible = this.showAll ? this.rows : this.rows.slice(0, FEED_CAP);
    return { rows: visible, showAll: this.showAll, error: this.error };
  }

  get totalCount(): number {
    return this.rows.length;
  }

  async pollOnce(): Promise<void> {
    try {
      const { data, raw } = await this.client.alerts(this.lastSeenId);
      const chunks = rawObjects(raw);
      data.forEach((item, i) => {
        this.rows.unshift({ item, raw: chunks[i] ?? "", acknowledged: false });
        if (item.id > this.lastSeenId) this.lastSeenId = item.id;
      });
      this.error = null;
    } catch (err) {
      // feed freezes on its current rows; the error badge reports the outage
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.onChange(this.getState());
  }

  acknowledge(id: number): void {
    const row = this.rows.find((r) => r.item.id === id);
    if (row) row.acknowledged = true;
    this.onChange(this.getState());
  }

  expand(): void {
    this.showAll = true;
    this.onChange(this.getState());
  }
}
