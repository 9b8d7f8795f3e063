// DOM wiring: render the current flow state into #app and route button
// presses back into the controller.  The server base and problem id come
// from query parameters (?problem=war_on_drugs&server=http://...).

import { PolicyItem, SessionApi } from './api.js';
import { ParticipantFlow, TokenStore } from './flow.js';

class SessionStorageTokens implements TokenStore {
  constructor(private readonly key: string) {}
  get() {
    return window.sessionStorage.getItem(this.key);
  }
  set(token: string) {
    window.sessionStorage.setItem(this.key, token);
  }
  clear() {
    window.sessionStorage.removeItem(this.key);
  }
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  text?: string,
  className?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text) node.textContent = text;
  if (className) node.className = className;
  return node;
}

function render(flow: ParticipantFlow, root: HTMLElement, problemText: { value: string }) {
  root.replaceChildren();
  const { status, view, notice } = flow.state;

  if (notice) {
    const banner = el('p', notice, 'notice');
    banner.setAttribute('role', 'status');
    root.append(banner);
  }

  if (status === 'retry') {
    const retry = el('button', 'Retry');
    retry.onclick = () => void flow.reconcile().then(() => render(flow, root, problemText));
    root.append(retry);
    return;
  }
  if (!view) return;

  if (view.phase === 'presented_problem' && 'description' in view.payload) {
    problemText.value = view.payload.description;
    root.append(el('h2', 'The problem'));
    root.append(el('p', view.payload.description));
    const next = el('button', 'I have read this');
    next.onclick = () => void flow.acknowledge().then(() => render(flow, root, problemText));
    root.append(next);
    return;
  }

  if (view.phase === 'presented_state_goal' && 'current_state' in view.payload) {
    root.append(el('h2', 'Where things stand, and the goal'));
    root.append(el('p', `Current state: ${view.payload.current_state}`));
    root.append(el('p', `Goal: ${view.payload.goal.join(', ')}`));
    const next = el('button', 'I have read this');
    next.onclick = () => void flow.acknowledge().then(() => render(flow, root, problemText));
    root.append(next);
    return;
  }

  if (view.phase === 'awaiting_choice' && 'policies' in view.payload) {
    root.append(el('h2', 'Pick the plan you believe reaches the goal'));
    if (problemText.value) {
      // the problem statement stays available, collapsed, during the choice
      const details = el('details');
      details.append(el('summary', 'Show the problem again'));
      details.append(el('p', problemText.value));
      root.append(details);
    }
    const list = el('div', undefined, 'choices');
    list.setAttribute('role', 'group');
    list.setAttribute('aria-label', 'policy choices');
    view.payload.policies.forEach((policy: PolicyItem, index: number) => {
      const button = el('button', `${index + 1}. ${policy.text}`);
      button.dataset.key = policy.key; // canonical label travels hidden
      button.onclick = () => void flow.choose(policy.key).then(() => render(flow, root, problemText));
      list.append(button);
    });
    root.append(list);
    return;
  }

  if (view.phase === 'completed') {
    root.append(el('h2', 'Done'));
    if (!notice) root.append(el('p', 'Your response has been recorded. Thank you.'));
    return;
  }
}

export async function runParticipantFlow(
  serverOrigin: string,
  problemId: string,
  root: HTMLElement,
): Promise<ParticipantFlow> {
  const api = new SessionApi(serverOrigin);
  const flow = new ParticipantFlow(api, new SessionStorageTokens(`whmm:${problemId}`));
  const problemText = { value: '' };
  try {
    // keeps the problem statement available (collapsed) in later phases,
    // even when a reload resumes the session past phase 1
    const listing = await api.listProblems();
    problemText.value = listing.problems.find((p) => p.id === problemId)?.description ?? '';
  } catch {
    // non-fatal: the collapsed recap is a convenience
  }
  await flow.begin(problemId);
  render(flow, root, problemText);
  return flow;
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  const params = new URLSearchParams(window.location.search);
  const problem = params.get('problem') ?? 'war_on_drugs';
  const server = params.get('server') ?? '';
  void runParticipantFlow(server, problem, document.getElementById('app')!);
}
