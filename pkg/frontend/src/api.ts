/** Thin typed client over the oracle service endpoints. */

import type { PendingQuery, StatusPayload, SubmitResult } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async getQuery(): Promise<PendingQuery | null> {
    const resp = await this.fetchImpl(`${this.base}/api/query`);
    if (resp.status === 204) return null;
    if (!resp.ok) throw new Error(`query endpoint returned ${resp.status}`);
    return (await resp.json()) as PendingQuery;
  }

  async getStatus(): Promise<StatusPayload> {
    const resp = await this.fetchImpl(`${this.base}/api/status`);
    if (!resp.ok) throw new Error(`status endpoint returned ${resp.status}`);
    return (await resp.json()) as StatusPayload;
  }

  async getReport(): Promise<unknown | null> {
    const resp = await this.fetchImpl(`${this.base}/api/report`);
    if (resp.status === 204) return null;
    if (!resp.ok) throw new Error(`report endpoint returned ${resp.status}`);
    return await resp.json();
  }

  /** 2xx -> ok; 409 -> stale query (caller refetches); else error. */
  async submitLabel(queryId: number, label: string): Promise<SubmitResult> {
    const resp = await this.fetchImpl(`${this.base}/api/query/${queryId}/label`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ label }),
    });
    if (resp.ok) return { ok: true, conflict: false };
    if (resp.status === 409) return { ok: false, conflict: true };
    throw new Error(`label submission returned ${resp.status}`);
  }
}
