/** Payload shapes of the oracle service API (version 1). */

export interface Candidate {
  label: string;
  probability: number;
}

export interface PendingQuery {
  id: number;
  slot: number;
  stream: string;
  points: [number, number][];
  candidates: Candidate[];
  confidence: number;
}

export interface Assignment {
  slot: number;
  stream: string;
  label: string;
  queried: boolean;
}

export interface StatusPayload {
  api_version: number;
  state: "idle" | "running" | "done" | "failed";
  slot: number;
  horizon: number;
  registry: string[];
  accuracy: number | null;
  effort: number | null;
  assignments: Assignment[];
  pending_query: boolean;
  error?: string;
}

export interface SubmitResult {
  ok: boolean;
  conflict: boolean;
}
