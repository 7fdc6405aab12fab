import assert from "node:assert/strict";
import { test } from "node:test";
import { ApiClient } from "../src/api.js";
import { LabelingConsole } from "../src/console.js";
/** In-memory stand-in for the oracle service. */
class FakeService {
    constructor() {
        this.registry = ["A", "B"];
        this.pending = null;
        this.submissions = [];
        this.conflictOnce = false;
        this.statusCalls = 0;
        this.queryCalls = 0;
    }
    api() {
        return new ApiClient("", (input, init) => this.route(input, init));
    }
    json(status, body) {
        return new Response(body === undefined ? null : JSON.stringify(body), { status });
    }
    async route(input, init) {
        if (input.endsWith("/api/status")) {
            this.statusCalls += 1;
            const payload = {
                api_version: 1,
                state: "running",
                slot: 1,
                horizon: 5,
                registry: [...this.registry],
                accuracy: 1.0,
                effort: 0.2,
                assignments: [],
                pending_query: this.pending !== null,
            };
            return this.json(200, payload);
        }
        if (input.endsWith("/api/query") && !init?.method) {
            this.queryCalls += 1;
            return this.pending ? this.json(200, this.pending) : this.json(204);
        }
        const match = input.match(/\/api\/query\/(\d+)\/label$/);
        if (match && init?.method === "POST") {
            if (this.conflictOnce) {
                this.conflictOnce = false;
                return this.json(409, { error: "stale" });
            }
            const id = Number(match[1]);
            if (!this.pending || this.pending.id !== id) {
                return this.json(409, { error: "no such pending query" });
            }
            const { label } = JSON.parse(String(init.body));
            this.submissions.push({ id, label });
            if (!this.registry.includes(label))
                this.registry.push(label);
            this.pending = null;
            return this.json(200, { ok: true });
        }
        return this.json(404, { error: "not found" });
    }
}
function pendingQuery(id = 1) {
    return {
        id,
        slot: 2,
        stream: "s1",
        points: [[1, 2], [3, 4]],
        candidates: [{ label: "A", probability: 0.55 }, { label: "B", probability: 0.3 }],
        confidence: 0.1,
    };
}
test("idle service renders the no-query state", async () => {
    const service = new FakeService();
    const rendered = [];
    const console_ = new LabelingConsole(service.api(), (state) => rendered.push(state.pending !== null));
    await console_.pollOnce();
    assert.deepEqual(rendered, [false]);
    assert.equal(console_.state.runState, "running");
});
test("a pending query is visible within two polling steps", async () => {
    const service = new FakeService();
    const console_ = new LabelingConsole(service.api());
    await console_.pollOnce(); // nothing pending yet
    service.pending = pendingQuery(); // the run blocks on a query
    await console_.pollOnce(); // second interval
    assert.equal(console_.state.pending?.id, 1);
    assert.equal(console_.state.pending?.points.length, 2);
    assert.ok(console_.state.pending.points.length <= 64);
});
test("submitting an existing label clears the pending query", async () => {
    const service = new FakeService();
    service.pending = pendingQuery();
    const console_ = new LabelingConsole(service.api());
    await console_.pollOnce();
    const ok = await console_.submit("A");
    assert.ok(ok);
    assert.equal(console_.state.pending, null);
    assert.deepEqual(service.submissions, [{ id: 1, label: "A" }]);
});
test("submitting a new name grows palette and registry", async () => {
    const service = new FakeService();
    service.pending = pendingQuery();
    const console_ = new LabelingConsole(service.api());
    await console_.pollOnce();
    assert.equal(console_.state.palette.size, 2);
    const ok = await console_.submit("person_14");
    assert.ok(ok);
    assert.ok(console_.state.palette.has("person_14"));
    assert.ok(service.registry.includes("person_14"));
    await console_.pollOnce();
    assert.equal(console_.state.palette.size, 3);
});
test("a 409 conflict refetches the current query", async () => {
    const service = new FakeService();
    service.pending = pendingQuery(7);
    const console_ = new LabelingConsole(service.api());
    await console_.pollOnce();
    service.conflictOnce = true;
    const before = service.queryCalls;
    const ok = await console_.submit("A");
    assert.equal(ok, false);
    assert.ok(service.queryCalls > before, "conflict must trigger a refetch");
    assert.equal(console_.state.pending?.id, 7);
});
test("only one mutation can be in flight", async () => {
    const service = new FakeService();
    service.pending = pendingQuery();
    let release = () => undefined;
    const gate = new Promise((resolve) => { release = resolve; });
    const api = new ApiClient("", async (input, init) => {
        if (init?.method === "POST")
            await gate;
        return service.route(input, init);
    });
    const console_ = new LabelingConsole(api);
    await console_.pollOnce();
    const first = console_.submit("A");
    const second = await console_.submit("B"); // rejected: busy
    assert.equal(second, false);
    release();
    assert.ok(await first);
    assert.deepEqual(service.submissions, [{ id: 1, label: "A" }]);
});
test("labels are trimmed and empty names rejected locally", async () => {
    const service = new FakeService();
    service.pending = pendingQuery();
    const console_ = new LabelingConsole(service.api());
    await console_.pollOnce();
    assert.equal(await console_.submit("   "), false);
    assert.deepEqual(service.submissions, []);
    assert.ok(await console_.submit("  C "));
    assert.deepEqual(service.submissions, [{ id: 1, label: "C" }]);
});
test("answered queries become class-colored history for the scatter", async () => {
    const service = new FakeService();
    service.pending = pendingQuery();
    const console_ = new LabelingConsole(service.api());
    await console_.pollOnce();
    await console_.submit("A");
    assert.deepEqual(console_.state.history.get("A"), [[1, 2], [3, 4]]);
});
test("network failures surface as a state error, polls keep going", async () => {
    const api = new ApiClient("", async () => {
        throw new Error("connection refused");
    });
    const console_ = new LabelingConsole(api);
    await console_.pollOnce();
    assert.match(console_.state.error ?? "", /connection refused/);
});
