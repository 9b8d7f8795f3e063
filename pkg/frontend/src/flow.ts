// Participant flow controller: drives one session through the three phases.
//
// The controller is deliberately stateless beyond the session token: every
// mutation result replaces the local view, phase-order conflicts trigger a
// reconcile against GET /sessions/{id}, and a page reload can resume from
// the stored token alone.  Nothing here ever reorders or relabels policies;
// the server's display order is rendered as-is with canonical keys hidden
// in the items.

import { ApiError, NetworkError, PolicyLabel, SessionApi, SessionView } from './api.js';

export type FlowStatus =
  | 'idle'
  | 'in_progress'
  | 'submitting'
  | 'recorded'
  | 'already_recorded'
  | 'retry';

export interface FlowState {
  status: FlowStatus;
  view: SessionView | null;
  /** user-facing notice for the retry / already-recorded cases */
  notice: string;
}

export interface TokenStore {
  get(): string | null;
  set(token: string): void;
  clear(): void;
}

/** In-memory fallback store (tests, non-browser hosts). */
export class MemoryTokenStore implements TokenStore {
  private token: string | null = null;
  get() {
    return this.token;
  }
  set(token: string) {
    this.token = token;
  }
  clear() {
    this.token = null;
  }
}

export class ParticipantFlow {
  state: FlowState = { status: 'idle', view: null, notice: '' };

  constructor(
    private readonly api: SessionApi,
    private readonly tokens: TokenStore = new MemoryTokenStore(),
  ) {}

  private update(partial: Partial<FlowState>): FlowState {
    this.state = { ...this.state, ...partial };
    return this.state;
  }

  /** Start a new session, or resume the stored one if the server still knows it. */
  async begin(problemId: string, cohortId?: string): Promise<FlowState> {
    const stored = this.tokens.get();
    if (stored) {
      try {
        const view = await this.api.getSession(stored);
        if (view.problem_id === problemId && view.phase !== 'completed') {
          return this.update({ status: 'in_progress', view, notice: '' });
        }
        if (view.problem_id === problemId && view.phase === 'completed') {
          return this.update({
            status: 'already_recorded',
            view,
            notice: 'Your response was already recorded.',
          });
        }
      } catch {
        // stored token is stale; fall through to a fresh session
      }
      this.tokens.clear();
    }
    try {
      const view = await this.api.createSession(problemId, cohortId);
      this.tokens.set(view.session_id);
      return this.update({ status: 'in_progress', view, notice: '' });
    } catch (error) {
      return this.fail(error);
    }
  }

  /** Explicit acknowledgment: move one phase forward. */
  async acknowledge(): Promise<FlowState> {
    const view = this.require();
    try {
      const next = await this.api.advance(view.session_id);
      return this.update({ status: 'in_progress', view: next, notice: '' });
    } catch (error) {
      return this.fail(error);
    }
  }

  /** Submit the one allowed choice by canonical label. */
  async choose(label: PolicyLabel): Promise<FlowState> {
    const view = this.require();
    if (this.state.status === 'submitting' || this.state.status === 'recorded') {
      return this.state;
    }
    this.update({ status: 'submitting' });
    try {
      const next = await this.api.submitChoice(view.session_id, label);
      return this.update({
        status: 'recorded',
        view: next,
        notice: 'Your response has been recorded. Thank you.',
      });
    } catch (error) {
      return this.fail(error);
    }
  }

  /** Re-fetch the server's view of the session (reload, conflict, retry). */
  async reconcile(): Promise<FlowState> {
    const token = this.state.view?.session_id ?? this.tokens.get();
    if (!token) {
      return this.update({ status: 'idle', view: null, notice: '' });
    }
    try {
      const view = await this.api.getSession(token);
      if (view.phase === 'completed') {
        return this.update({
          status: this.state.status === 'recorded' ? 'recorded' : 'already_recorded',
          view,
          notice: this.state.notice || 'Your response was already recorded.',
        });
      }
      return this.update({ status: 'in_progress', view, notice: '' });
    } catch (error) {
      return this.fail(error);
    }
  }

  private require(): SessionView {
    if (!this.state.view) {
      throw new Error('no active session; call begin() first');
    }
    return this.state.view;
  }

  private async fail(error: unknown): Promise<FlowState> {
    if (error instanceof NetworkError) {
      // token survives; the participant can press retry
      return this.update({
        status: 'retry',
        notice: 'Connection problem. Your session is safe; please retry.',
      });
    }
    if (error instanceof ApiError && error.code === 'duplicate_submission') {
      const state = await this.reconcile();
      return this.update({
        ...state,
        status: 'already_recorded',
        notice: 'Your response was already recorded.',
      });
    }
    if (error instanceof ApiError && error.code === 'phase_order_violation') {
      // client drifted from the server's phase; resync and carry on
      return this.reconcile();
    }
    throw error;
  }
}
