import { afterEach, describe, expect, it, vi } from 'vitest';

import { ApiError, NetworkError, SessionApi } from './api.js';

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('SessionApi', () => {
  it('posts the create payload and returns the session view', async () => {
    const fetchMock = vi.fn().mockResolvedValue(
      jsonResponse(201, {
        session_id: 't1',
        problem_id: 'war_on_drugs',
        cohort_id: 'live-war_on_drugs',
        phase: 'presented_problem',
        payload: { description: 'text' },
      }),
    );
    vi.stubGlobal('fetch', fetchMock);
    const api = new SessionApi('http://svc');
    const view = await api.createSession('war_on_drugs');
    expect(view.session_id).toBe('t1');
    expect(fetchMock).toHaveBeenCalledWith(
      'http://svc/sessions',
      expect.objectContaining({
        method: 'POST',
        body: JSON.stringify({ problem_id: 'war_on_drugs', cohort_id: null }),
      }),
    );
  });

  it('maps service errors to ApiError with their code', async () => {
    vi.stubGlobal('fetch', vi.fn().mockResolvedValue(
      jsonResponse(409, { error: { code: 'duplicate_submission', message: 'already done' } }),
    ));
    const api = new SessionApi('');
    const err = await api.submitChoice('tok', 'A').catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).code).toBe('duplicate_submission');
    expect((err as ApiError).status).toBe(409);
  });

  it('wraps fetch rejections in NetworkError', async () => {
    vi.stubGlobal('fetch', vi.fn().mockRejectedValue(new TypeError('connection refused')));
    const api = new SessionApi('');
    const err = await api.getSession('tok').catch((e: unknown) => e);
    expect(err).toBeInstanceOf(NetworkError);
  });

  it('encodes session tokens in paths', async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(200, { phase: 'completed' }));
    vi.stubGlobal('fetch', fetchMock);
    await new SessionApi('').getSession('a/b c');
    expect(fetchMock.mock.calls[0][0]).toBe('/sessions/a%2Fb%20c');
  });
});
