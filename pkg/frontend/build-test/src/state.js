/** Console state: palette, timeline, metrics, pending query.
 *
 * The palette never reassigns a color once a label has one, and the
 * timeline only grows: a cell written once is never cleared by later
 * status payloads. Every timeline cell comes from a server assignment,
 * which in turn mirrors one decision-log record.
 */
export const PALETTE_COLORS = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
    "#3f3cbb", "#1f9e89",
];
export function initialState() {
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
export function colorFor(state, label) {
    const known = state.palette.get(label);
    if (known)
        return known;
    const color = PALETTE_COLORS[state.palette.size % PALETTE_COLORS.length];
    state.palette.set(label, color);
    return color;
}
export function applyStatus(state, status) {
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
function writeTimelineCell(state, a) {
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
export function applyQuery(state, query) {
    state.pending = query;
}
/** Remember an answered query's points as class-colored backdrop. */
export function recordHistory(state, label, points, cap = 512) {
    const existing = state.history.get(label) ?? [];
    const merged = existing.concat(points);
    state.history.set(label, merged.slice(Math.max(0, merged.length - cap)));
    colorFor(state, label);
}
export function timelineStreams(state) {
    return [...state.timeline.keys()].sort();
}
export function paletteEntries(state) {
    return [...state.palette.entries()];
}
