/** Thin typed client over the oracle service endpoints. */
export class ApiClient {
    constructor(base = "", fetchImpl = (input, init) => fetch(input, init)) {
        this.base = base;
        this.fetchImpl = fetchImpl;
    }
    async getQuery() {
        const resp = await this.fetchImpl(`${this.base}/api/query`);
        if (resp.status === 204)
            return null;
        if (!resp.ok)
            throw new Error(`query endpoint returned ${resp.status}`);
        return (await resp.json());
    }
    async getStatus() {
        const resp = await this.fetchImpl(`${this.base}/api/status`);
        if (!resp.ok)
            throw new Error(`status endpoint returned ${resp.status}`);
        return (await resp.json());
    }
    async getReport() {
        const resp = await this.fetchImpl(`${this.base}/api/report`);
        if (resp.status === 204)
            return null;
        if (!resp.ok)
            throw new Error(`report endpoint returned ${resp.status}`);
        return await resp.json();
    }
    /** 2xx -> ok; 409 -> stale query (caller refetches); else error. */
    async submitLabel(queryId, label) {
        const resp = await this.fetchImpl(`${this.base}/api/query/${queryId}/label`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ label }),
        });
        if (resp.ok)
            return { ok: true, conflict: false };
        if (resp.status === 409)
            return { ok: false, conflict: true };
        throw new Error(`label submission returned ${resp.status}`);
    }
}
