/** Console state: palette, timeline, metrics, pending query.
 *
 * The palette never reassigns a color once a label has one, and the
 * timeline only grows: a cell written once is never cleared by later
 * status payloads. Every timeline cell comes from a server assignment,
 * which in turn mirrors one decision-log record.
 */

import type { Assignment, PendingQuery, StatusPayload } from "./types.js";

export const PALETTE_COLORS = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
  "#3f3cbb", "#1f9e89",
];

export interface TimelineCell {
  label: string;
  queried: boolean;
}

export interface ConsoleState {
  pending: PendingQuery | null;
  palette: Map<string, string>;
  /** stream id -> (slot -> cell) */
  timeline: Map<string, Map<number, TimelineCell>>;
  runState: StatusPayload["state"];
  slot: number;
  horizon: number;
  accuracy: number | null;
  effort: number | null;
  /** recent labeled scatter points per class, for the query backdrop */
  history: Map<string, [number, number][]>;
  error?: string;
}

export function initialState(): ConsoleState {
  return {
    pending: null,
    palette: new Map(),
    timeline: new Map(),
    runState: "idle",
    slot: -1,
    horizon: 0,
    accuracy: null,
    effort: null,
    history: new Map(),
  };
}

export function colorFor(state: ConsoleState, label: string): string {
  const known = state.palette.get(label);
  if (known) return known;
  const color = PALETTE_COLORS[state.palette.size % PALETTE_COLORS.length];
  state.palette.set(label, color);
  return color;
}

export function applyStatus(state: ConsoleState, status: StatusPayload): void {
  state.runState = status.state;
  state.slot = status.slot;
  state.horizon = status.horizon;
  state.accuracy = status.accuracy;
  state.effort = status.effort;
  state.error = status.error;
  for (const label of status.registry) {
    colorFor(state, label);
  }
  for (const a of status.assignments ?? []) {
    writeTimelineCell(state, a);
  }
}

function writeTimelineCell(state: ConsoleState, a: Assignment): void {
  let row = state.timeline.get(a.stream);
  if (!row) {
    row = new Map();
    state.timeline.set(a.stream, row);
  }
  if (!row.has(a.slot)) {
    row.set(a.slot, { label: a.label, queried: a.queried });
    colorFor(state, a.label);
  }
}

export function applyQuery(state: ConsoleState, query: PendingQuery | null): void {
  state.pending = query;
}

/** Remember an answered query's points as class-colored backdrop. */
export function recordHistory(
  state: ConsoleState,
  label: string,
  points: [number, number][],
  cap = 512,
): void {
  const existing = state.history.get(label) ?? [];
  const merged = existing.concat(points);
  state.history.set(label, merged.slice(Math.max(0, merged.length - cap)));
  colorFor(state, label);
}

export function timelineStreams(state: ConsoleState): string[] {
  return [...state.timeline.keys()].sort();
}

export function paletteEntries(state: ConsoleState): [string, string][] {
  return [...state.palette.entries()];
}
