/** Chat view state: a pure function of service responses.
 *
 * The message list is append-only and the GAT panel model only ever mirrors
 * what the server sent back, so refetching history after a reload rebuilds
 * the exact same view.
 */

import type { Gat, HistoryTurn, StepTrace, TurnResult } from './api.js';

export type Role = 'user' | 'assistant' | 'system';

export interface ChatMessage {
  role: Role;
  text: string;
  /** asset paths rendered as audio players under the message */
  assets: string[];
  /** tool trace for assistant messages; empty for user/system */
  steps: StepTrace[];
}

export interface ChatViewState {
  sessionId: string | null;
  messages: ChatMessage[];
  gat: Gat | null;
  busy: boolean;
}

export function initialState(): ChatViewState {
  return { sessionId: null, messages: [], gat: null, busy: false };
}

export function withSession(state: ChatViewState, sessionId: string): ChatViewState {
  return { ...state, sessionId };
}

export function withBusy(state: ChatViewState, busy: boolean): ChatViewState {
  return { ...state, busy };
}

export function withUserMessage(state: ChatViewState, text: string): ChatViewState {
  const message: ChatMessage = { role: 'user', text, assets: [], steps: [] };
  return { ...state, messages: [...state.messages, message], busy: true };
}

export function withTurnResult(state: ChatViewState, result: TurnResult): ChatViewState {
  const message: ChatMessage = {
    role: 'assistant',
    text: result.answer,
    assets: result.produced_assets,
    steps: result.steps,
  };
  return {
    ...state,
    messages: [...state.messages, message],
    gat: result.gat,
    busy: false,
  };
}

export function withSystemNotice(state: ChatViewState, text: string): ChatViewState {
  const message: ChatMessage = { role: 'system', text, assets: [], steps: [] };
  return { ...state, messages: [...state.messages, message], busy: false };
}

/** Rebuild the whole view from a history fetch (page reload path). */
export function stateFromHistory(
  sessionId: string,
  turns: HistoryTurn[],
  gat: Gat,
): ChatViewState {
  const messages: ChatMessage[] = [];
  for (const turn of turns) {
    messages.push({ role: 'user', text: turn.query, assets: [], steps: [] });
    messages.push({
      role: 'assistant',
      text: turn.answer,
      assets: turn.produced_assets,
      steps: turn.steps,
    });
  }
  return { sessionId, messages, gat, busy: false };
}
