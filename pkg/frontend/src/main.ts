import { GatewayClient } from "./api";
import { AlertFeed } from "./alerts";
import { CheckController } from "./check";
import { renderAlerts, renderCheckStatus, renderInventory } from "./view";

const POLL_MS = 2000;

const client = new GatewayClient("");
const inventoryEl = document.getElementById("inventory")!;
const statusEl = document.getElementById("check-status")!;
const alertsEl = document.getElementById("alerts")!;
const checkButton = document.getElementById("check") as HTMLButtonElement;

let lastSeq: number | null = null;
let lastChangeWallMs: number | null = null;

const controller = new CheckController(client, {
  pollMs: POLL_MS,
  onChange: (state) => {
    if (state.snapshot && state.snapshot.data.seq !== lastSeq) {
      lastSeq = state.snapshot.data.seq;
      lastChangeWallMs = Date.now();
    }
    redraw();
  },
});

const feed = new AlertFeed(client, () => redraw());

function ageSeconds(): number | null {
  return lastChangeWallMs === null ? null : (Date.now() - lastChangeWallMs) / 1000;
}

function redraw(): void {
  const state = controller.getState();
  inventoryEl.innerHTML = renderInventory(state, ageSeconds());
  statusEl.innerHTML = renderCheckStatus(state);
  alertsEl.innerHTML = renderAlerts(feed.getState(), feed.totalCount);
  checkButton.disabled = state.phase === "pending";
}

checkButton.addEventListener("click", () => void controller.click());

alertsEl.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  if (target.classList.contains("ack")) {
    feed.acknowledge(Number(target.dataset.id));
  } else if (target.id === "show-more") {
    feed.expand();
  }
});

void controller.refresh();
void feed.pollOnce();
setInterval(() => void controller.refresh(), POLL_MS);
setInterval(() => void feed.pollOnce(), POLL_MS);
setInterval(redraw, 1000); // keep the age line moving

redraw();
