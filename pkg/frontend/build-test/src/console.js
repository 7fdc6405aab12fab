/** Polling coordinator: one status+query poll per tick (1 Hz), one
 * in-flight label mutation at a time, optimistic lock until the server
 * acknowledges. */
import { applyQuery, applyStatus, colorFor, initialState, recordHistory, } from "./state.js";
export const POLL_INTERVAL_MS = 1000;
export class LabelingConsole {
    constructor(api, render = () => undefined) {
        this.api = api;
        this.render = render;
        this.state = initialState();
        this.busy = false;
        this.timer = null;
    }
    get isBusy() {
        return this.busy;
    }
    /** One polling step: refresh status, then the pending query. */
    async pollOnce() {
        try {
            const status = await this.api.getStatus();
            applyStatus(this.state, status);
            const query = await this.api.getQuery();
            applyQuery(this.state, query);
            this.state.error = status.error;
        }
        catch (err) {
            this.state.error = String(err);
        }
        this.render(this.state, this.busy);
    }
    start(intervalMs = POLL_INTERVAL_MS) {
        if (this.timer !== null)
            return;
        void this.pollOnce();
        this.timer = setInterval(() => void this.pollOnce(), intervalMs);
    }
    stop() {
        if (this.timer !== null) {
            clearInterval(this.timer);
            this.timer = null;
        }
    }
    /** Assign `label` (existing or newly minted) to the pending query. */
    async submit(label) {
        const pending = this.state.pending;
        const trimmed = label.trim();
        if (!pending || !trimmed || this.busy)
            return false;
        this.busy = true;
        this.render(this.state, this.busy);
        try {
            const result = await this.api.submitLabel(pending.id, trimmed);
            if (result.ok) {
                // palette grows immediately for a new name; history remembers the
                // just-labeled points as backdrop for future queries
                colorFor(this.state, trimmed);
                recordHistory(this.state, trimmed, pending.points);
                applyQuery(this.state, null);
                return true;
            }
            if (result.conflict) {
                // stale query: someone else answered; refetch on the spot
                applyQuery(this.state, await this.api.getQuery());
            }
            return false;
        }
        catch (err) {
            this.state.error = String(err);
            return false;
        }
        finally {
            this.busy = false;
            this.render(this.state, this.busy);
        }
    }
}
