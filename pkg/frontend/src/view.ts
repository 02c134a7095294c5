// Pure render helpers: state in, HTML string out. Numeric display values
// come straight from the raw API tokens; this module never formats numbers.

import { rawField } from "./api";
import { FeedState, FEED_CAP } from "./alerts";
import { CheckState } from "./check";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function field(raw: string, key: string): string {
  return esc(rawField(raw, key) ?? "?");
}

export function renderInventory(state: CheckState, ageSeconds: number | null): string {
  const snapshot = state.snapshot;
  if (!snapshot) {
    return `<p class="empty">No inventory yet. Press Check to ask the freezer.</p>`;
  }
  const raw = snapshot.raw;
  const age = ageSeconds === null ? "" : `<p class="age">updated ${Math.floor(ageSeconds)}s ago</p>`;
  return `
    <table class="inventory">
      <tr><th></th><th>weight (kg)</th><th>items</th></tr>
      <tr><td>elevated</td><td>${field(raw, "elevKg")}</td><td>${field(raw, "cElev")}</td></tr>
      <tr><td>main</td><td>${field(raw, "mainKg")}</td><td>${field(raw, "cMain")}</td></tr>
    </table>
    <p class="temp">freezer temperature: <b>${field(raw, "tempC")}</b> &deg;C</p>
    <p class="meta">snapshot seq ${field(raw, "seq")} from ${field(raw, "deviceMsisdn")}</p>
    ${age}`;
}

export function renderCheckStatus(state: CheckState): string {
  switch (state.phase) {
    case "pending":
      return `<span class="spinner">checking&hellip;</span>`;
    case "timeout":
      return `<span class="banner stale">No fresh reading arrived; data may be stale.</span>`;
    case "error":
      return `<span class="banner error">Check failed: ${esc(state.error ?? "network error")}. Try again.</span>`;
    default:
      return "";
  }
}

export function renderAlerts(state: FeedState, totalCount: number): string {
  if (state.error) {
    return `<p class="badge error">alert feed unavailable: ${esc(state.error)}</p>` + rowsHtml(state);
  }
  if (state.rows.length === 0) {
    return `<p class="empty">No alerts. Platform weights are within their limits.</p>`;
  }
  let html = rowsHtml(state);
  if (!state.showAll && totalCount > FEED_CAP) {
    html += `<button id="show-more">show ${totalCount - FEED_CAP} more</button>`;
  }
  return html;
}

function rowsHtml(state: FeedState): string {
  return state.rows
    .map(({ item, raw, acknowledged }) => {
      const cls = acknowledged ? "alert acked" : "alert fresh";
      const ack = acknowledged
        ? ""
        : `<button class="ack" data-id="${item.id}">acknowledge</button>`;
      return `<div class="${cls}" data-id="${item.id}">
        <b>${field(raw, "platform")}</b> over limit:
        ${field(raw, "kg")} kg against ${field(raw, "limitKg")} kg
        <span class="meta">seq ${field(raw, "seq")}</span> ${ack}
      </div>`;
    })
    .join("\n");
}
