import { describe, expect, it } from 'vitest';

import type { Gat } from '../src/api.js';
import { renderGatPanel, renderMessages, renderSuggestions, renderTrace } from '../src/render.js';
import { initialState, withTurnResult, withUserMessage } from '../src/state.js';

const assetUrl = (p: string) => `/api/assets/${p}`;

const gat: Gat = {
  bpm: 90,
  key: 'E♭ major',
  genre: 'rock',
  mood: 'smooth',
  instruments: ['guitar', 'snare drums', 'saxophone'],
  description: 'smooth rock loop',
  tracks: { mix: 'music/c540d5a6.wav', stems: { drums: 'music/ab12cd34.wav' } },
};

describe('message rendering', () => {
  it('renders one audio player per produced asset', () => {
    let state = withUserMessage(initialState(), 'make music');
    state = withTurnResult(state, {
      turn_index: 1,
      query: 'make music',
      answer: 'Here is your loop: music/ab12cd34.wav.',
      produced_assets: ['music/ab12cd34.wav'],
      steps: [],
      gat,
    });
    const container = document.createElement('div');
    renderMessages(container, state, assetUrl);
    const players = container.querySelectorAll('audio');
    expect(players.length).toBe(1);
    expect(players[0].getAttribute('src')).toBe('/api/assets/music/ab12cd34.wav');
  });

  it('is idempotent: re-rendering does not duplicate nodes', () => {
    const state = withUserMessage(initialState(), 'hello');
    const container = document.createElement('div');
    renderMessages(container, state, assetUrl);
    renderMessages(container, state, assetUrl);
    expect(container.querySelectorAll('.message').length).toBe(1);
  });
});

describe('trace rendering', () => {
  it('zero steps shows "no tools used"', () => {
    const trace = renderTrace([], assetUrl);
    expect(trace.querySelector('summary')?.textContent).toBe('no tools used');
  });

  it('is collapsed by default and shows one block per step', () => {
    const steps = [
      { thought: '', action: 'A', action_input: 'x', observation: 'saved as music/ab12cd34.wav' },
      { thought: '', action: 'B', action_input: 'y', observation: 'Error: nope' },
    ];
    const trace = renderTrace(steps, assetUrl) as HTMLDetailsElement;
    expect(trace.open).toBe(false);
    expect(trace.querySelectorAll('.trace-step').length).toBe(2);
    expect(trace.querySelector('summary')?.textContent).toBe('2 tool steps');
  });

  it('linkifies asset paths in observations to players', () => {
    const steps = [
      { thought: '', action: 'A', action_input: 'x', observation: 'saved as music/ab12cd34.wav' },
    ];
    const trace = renderTrace(steps, assetUrl);
    const audio = trace.querySelector('.observation audio');
    expect(audio?.getAttribute('src')).toBe('/api/assets/music/ab12cd34.wav');
  });
});

describe('gat panel', () => {
  it('renders server values only', () => {
    const panel = document.createElement('aside');
    renderGatPanel(panel, gat);
    expect(panel.textContent).toContain('saxophone');
    expect(panel.textContent).toContain('E♭ major');
    expect(panel.textContent).toContain('music/c540d5a6.wav');
    expect(panel.textContent).toContain('drums: music/ab12cd34.wav');
  });

  it('renders a placeholder with no gat', () => {
    const panel = document.createElement('aside');
    renderGatPanel(panel, null);
    expect(panel.textContent).toContain('no attributes recorded');
  });
});

describe('suggestion chips', () => {
  it('clicking a chip prefers prefill over sending', () => {
    const container = document.createElement('div');
    const picked: string[] = [];
    renderSuggestions(container, ['Generate a rock music with guitar and drums.'], (t) => picked.push(t));
    const chip = container.querySelector('button.chip') as HTMLButtonElement;
    expect(chip.textContent).toBe('Generate a rock music with guitar and drums.');
    chip.click();
    expect(picked).toEqual(['Generate a rock music with guitar and drums.']);
    chip.click();
    expect(picked.length).toBe(2); // never auto-sends, only invokes the prefill callback
  });
});
