// Typed fetch wrappers for the session service HTTP API.
// The base URL is configurable so the client can run against any origin.

export type Phase =
  | 'presented_problem'
  | 'presented_state_goal'
  | 'awaiting_choice'
  | 'completed';

export type PolicyLabel = 'A' | 'B' | 'C' | 'D';

export interface PolicyItem {
  key: PolicyLabel;
  text: string;
}

export type PhasePayload =
  | { description: string }
  | { current_state: string; goal: string[] }
  | { policies: PolicyItem[] }
  | { status: string };

export interface SessionView {
  session_id: string;
  problem_id: string;
  cohort_id: string;
  phase: Phase;
  payload: PhasePayload;
}

export interface ChoiceRecord {
  problem_id: string;
  subject_id: string;
  chosen: PolicyLabel;
  latency_ms: number;
}

export interface ProblemInfo {
  id: string;
  description: string;
}

/** Server-side domain error with its machine-readable code. */
export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

/** Connectivity failure: the session token is still valid, retry is safe. */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`network failure: ${String(cause)}`);
    this.name = 'NetworkError';
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${base}${path}`, {
      headers: { 'Content-Type': 'application/json' },
      ...init,
    });
  } catch (cause) {
    throw new NetworkError(cause);
  }
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const error = body?.error;
    throw new ApiError(
      error?.code ?? 'http_error',
      error?.message ?? `HTTP ${response.status}`,
      response.status,
    );
  }
  return body as T;
}

export class SessionApi {
  constructor(readonly base: string = '') {}

  listProblems(): Promise<{ problems: ProblemInfo[] }> {
    return request(this.base, '/problems');
  }

  createSession(problemId: string, cohortId?: string): Promise<SessionView> {
    return request(this.base, '/sessions', {
      method: 'POST',
      body: JSON.stringify({ problem_id: problemId, cohort_id: cohortId ?? null }),
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return request(this.base, `/sessions/${encodeURIComponent(sessionId)}`);
  }

  advance(sessionId: string): Promise<SessionView> {
    return request(this.base, `/sessions/${encodeURIComponent(sessionId)}/advance`, {
      method: 'POST',
    });
  }

  submitChoice(sessionId: string, label: PolicyLabel): Promise<SessionView & { record: ChoiceRecord }> {
    return request(this.base, `/sessions/${encodeURIComponent(sessionId)}/choice`, {
      method: 'POST',
      body: JSON.stringify({ label }),
    });
  }
}
