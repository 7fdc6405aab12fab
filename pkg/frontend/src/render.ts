/** DOM rendering: scatter canvas, candidate buttons, palette, timeline,
 * and the live metrics header. */

import { colorFor, ConsoleState, paletteEntries, timelineStreams } from "./state.js";

export interface RenderTargets {
  banner: HTMLElement;
  metrics: HTMLElement;
  canvas: HTMLCanvasElement;
  candidates: HTMLElement;
  palette: HTMLElement;
  timeline: HTMLElement;
  submitButton: HTMLButtonElement;
  newLabelInput: HTMLInputElement;
}

export function lookupTargets(doc: Document): RenderTargets {
  const get = (id: string) => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
  };
  return {
    banner: get("banner"),
    metrics: get("metrics"),
    canvas: get("scatter") as HTMLCanvasElement,
    candidates: get("candidates"),
    palette: get("palette"),
    timeline: get("timeline"),
    submitButton: get("submit-new") as HTMLButtonElement,
    newLabelInput: get("new-label") as HTMLInputElement,
  };
}

export function renderAll(
  t: RenderTargets,
  state: ConsoleState,
  busy: boolean,
  onChoose: (label: string) => void,
): void {
  renderBanner(t.banner, state, busy);
  renderMetrics(t.metrics, state);
  renderScatter(t.canvas, state);
  renderCandidates(t.candidates, state, busy, onChoose);
  renderPalette(t.palette, state);
  renderTimeline(t.timeline, state);
  t.submitButton.disabled = busy || !state.pending;
  t.newLabelInput.disabled = busy || !state.pending;
}

function renderBanner(el: HTMLElement, state: ConsoleState, busy: boolean): void {
  if (state.error) {
    el.textContent = `error: ${state.error}`;
    el.className = "banner error";
  } else if (busy) {
    el.textContent = "submitting label...";
    el.className = "banner busy";
  } else if (state.pending) {
    el.textContent =
      `label requested: stream ${state.pending.stream}, slot ${state.pending.slot}`;
    el.className = "banner pending";
  } else if (state.runState === "done") {
    el.textContent = "run finished";
    el.className = "banner idle";
  } else {
    el.textContent = "idle: no pending query";
    el.className = "banner idle";
  }
}

function renderMetrics(el: HTMLElement, state: ConsoleState): void {
  const acc = state.accuracy === null ? "-" : state.accuracy.toFixed(3);
  const eff = state.effort === null ? "-" : state.effort.toFixed(3);
  el.textContent =
    `slot ${state.slot + 1}/${state.horizon} | accuracy ${acc} | effort ${eff} | ` +
    `classes ${state.palette.size} | ${state.runState}`;
}

function renderScatter(canvas: HTMLCanvasElement, state: ConsoleState): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);

  const sets: { pts: [number, number][]; color: string; alpha: number }[] = [];
  for (const [label, pts] of state.history) {
    sets.push({ pts, color: colorFor(state, label), alpha: 0.35 });
  }
  if (state.pending) {
    sets.push({ pts: state.pending.points, color: "#111111", alpha: 0.95 });
  }
  const all = sets.flatMap((s) => s.pts);
  if (all.length === 0) return;

  const xs = all.map((p) => p[0]);
  const ys = all.map((p) => p[1]);
  const pad = 18;
  const xMin = Math.min(...xs), xMax = Math.max(...xs);
  const yMin = Math.min(...ys), yMax = Math.max(...ys);
  const sx = (x: number) =>
    pad + ((x - xMin) / Math.max(xMax - xMin, 1e-9)) * (canvas.width - 2 * pad);
  const sy = (y: number) =>
    canvas.height - pad -
    ((y - yMin) / Math.max(yMax - yMin, 1e-9)) * (canvas.height - 2 * pad);

  for (const s of sets) {
    ctx.globalAlpha = s.alpha;
    ctx.fillStyle = s.color;
    for (const [x, y] of s.pts) {
      ctx.beginPath();
      ctx.arc(sx(x), sy(y), 3, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
  ctx.globalAlpha = 1.0;
}

function renderCandidates(
  el: HTMLElement,
  state: ConsoleState,
  busy: boolean,
  onChoose: (label: string) => void,
): void {
  el.replaceChildren();
  if (!state.pending) return;
  for (const c of state.pending.candidates) {
    const btn = el.ownerDocument.createElement("button");
    btn.className = "candidate";
    btn.disabled = busy;
    btn.style.borderColor = colorFor(state, c.label);
    btn.textContent = `${c.label} (${(c.probability * 100).toFixed(1)}%)`;
    btn.addEventListener("click", () => onChoose(c.label));
    el.appendChild(btn);
  }
}

function renderPalette(el: HTMLElement, state: ConsoleState): void {
  el.replaceChildren();
  for (const [label, color] of paletteEntries(state)) {
    const chip = el.ownerDocument.createElement("span");
    chip.className = "chip";
    chip.style.background = color;
    chip.textContent = label;
    el.appendChild(chip);
  }
}

function renderTimeline(el: HTMLElement, state: ConsoleState): void {
  el.replaceChildren();
  const streams = timelineStreams(state);
  if (streams.length === 0) return;
  const doc = el.ownerDocument;
  const maxSlot = Math.max(
    0,
    ...streams.map((s) => Math.max(...state.timeline.get(s)!.keys())),
  );
  const table = doc.createElement("table");
  for (const stream of streams) {
    const row = doc.createElement("tr");
    const name = doc.createElement("th");
    name.textContent = stream;
    row.appendChild(name);
    const cells = state.timeline.get(stream)!;
    for (let t = 0; t <= maxSlot; t += 1) {
      const td = doc.createElement("td");
      const cell = cells.get(t);
      if (cell) {
        td.style.background = colorFor(state, cell.label);
        td.title = `slot ${t}: ${cell.label}${cell.queried ? " (labeled by you)" : ""}`;
        if (cell.queried) td.className = "queried";
      }
      row.appendChild(td);
    }
    table.appendChild(row);
  }
  el.appendChild(table);
}
