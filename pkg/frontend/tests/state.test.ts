import { describe, expect, it } from 'vitest';

import type { Gat, TurnResult } from '../src/api.js';
import {
  initialState,
  stateFromHistory,
  withSession,
  withSystemNotice,
  withTurnResult,
  withUserMessage,
} from '../src/state.js';

const gat: Gat = {
  bpm: 90,
  key: 'E♭ major',
  genre: 'rock',
  mood: 'smooth',
  instruments: ['guitar', 'snare drums', 'saxophone'],
  description: 'smooth rock loop',
  tracks: { mix: 'music/c540d5a6.wav', stems: {} },
};

function turn(answer: string, assets: string[] = []): TurnResult {
  return {
    turn_index: 1,
    query: 'q',
    answer,
    produced_assets: assets,
    steps: [
      { thought: '', action: 'Generate music from user input text.', action_input: 'rock', observation: 'ok' },
    ],
    gat,
  };
}

describe('chat view state', () => {
  it('starts empty and not busy', () => {
    const state = initialState();
    expect(state.messages).toEqual([]);
    expect(state.busy).toBe(false);
    expect(state.gat).toBeNull();
  });

  it('user message appends and marks busy', () => {
    const state = withUserMessage(withSession(initialState(), 's1'), 'hello');
    expect(state.messages.length).toBe(1);
    expect(state.messages[0]).toMatchObject({ role: 'user', text: 'hello' });
    expect(state.busy).toBe(true);
  });

  it('message list is append-only across updates', () => {
    let state = withUserMessage(initialState(), 'one');
    const before = state.messages;
    state = withTurnResult(state, turn('two', ['music/ab12cd34.wav']));
    expect(state.messages.slice(0, 1)).toEqual(before);
    expect(state.messages.length).toBe(2);
  });

  it('turn result refreshes the gat panel model and clears busy', () => {
    let state = withUserMessage(initialState(), 'make it');
    state = withTurnResult(state, turn('done'));
    expect(state.gat?.instruments).toContain('saxophone');
    expect(state.busy).toBe(false);
  });

  it('system notices clear busy without touching gat', () => {
    let state = withTurnResult(withUserMessage(initialState(), 'x'), turn('ok'));
    state = withSystemNotice(state, 'still working');
    expect(state.messages.at(-1)).toMatchObject({ role: 'system', text: 'still working' });
    expect(state.gat).not.toBeNull();
  });

  it('rebuilding from history reproduces the live transcript', () => {
    // live accumulation
    let live = withSession(initialState(), 's1');
    live = withUserMessage(live, 'round one');
    live = withTurnResult(live, { ...turn('answer one', ['music/ab12cd34.wav']), query: 'round one' });
    live = withUserMessage(live, 'round two');
    live = withTurnResult(live, { ...turn('answer two', ['music/ef567890.wav']), query: 'round two' });

    // what the history endpoint would return
    const rebuilt = stateFromHistory(
      's1',
      [
        {
          index: 1,
          query: 'round one',
          answer: 'answer one',
          produced_assets: ['music/ab12cd34.wav'],
          steps: live.messages[1].steps,
        },
        {
          index: 2,
          query: 'round two',
          answer: 'answer two',
          produced_assets: ['music/ef567890.wav'],
          steps: live.messages[3].steps,
        },
      ],
      gat,
    );
    expect(rebuilt.messages).toEqual(live.messages);
    expect(rebuilt.gat).toEqual(live.gat);
  });
});
