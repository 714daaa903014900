/** End-to-end: the real UI layer against a locally spawned mock service.
 *
 * Drives the two-round draft-then-refine dialogue through the app and
 * asserts what a user would see: two audio players, the attribute panel
 * picking up the saxophone, a step trace per turn, and the example prompt
 * chips rendered verbatim.
 */

import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ServiceClient } from '../src/api.js';
import { mount, type ChatApp } from '../src/app.js';

const PORT = 18000 + Math.floor(Math.random() * 2000);
const BASE = `http://127.0.0.1:${PORT}`;

// the example inputs users are shown, one per supported task
const EXPECTED_CHIPS = [
  'Generate a rock music with guitar and drums.',
  'Generate a rock music with guitar based on this drum pattern.',
  'Generate a music loop feels like "Hey Jude".',
  'Rearrange this music to jazz with sax solo.',
  'Generate a music loop sounds like this music.',
  'Add a saxophone solo to this music loop.',
  'Remove the guitar from this music loop.',
  'Re-generate the 3-5s part of the music loop.',
  'Add some reverb to the guitar solo.',
  'Transpose this music to G major.',
  'Make the music a bit quicker / slower.',
  'Describe the current music loop.',
];

let service: ChildProcess;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 60_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/api/suggestions`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error('service did not become ready');
}

function appShell(): void {
  document.body.innerHTML = `
    <div id="app">
      <span id="busy-indicator"></span>
      <div id="messages"></div>
      <div id="suggestions"></div>
      <form id="composer">
        <input type="file" id="audio-input">
        <input type="text" id="text-input">
        <button id="send" type="submit">Send</button>
      </form>
      <aside id="gat-panel"></aside>
    </div>`;
}

async function send(app: ChatApp, text: string): Promise<void> {
  const input = document.getElementById('text-input') as HTMLInputElement;
  input.value = text;
  await app.sendCurrentInput();
}

beforeAll(async () => {
  const assetRoot = mkdtempSync(join(tmpdir(), 'loopsmith-ui-'));
  service = spawn(
    'python3',
    ['-m', 'loopsmith.service.cli', 'serve', '--mock', '--seed', '42', '--port', String(PORT), '--asset-root', assetRoot],
    { stdio: 'ignore' },
  );
  await waitForService();
});

afterAll(() => {
  service?.kill('SIGTERM');
});

describe('figure-1 dialogue through the UI', () => {
  it('renders players, attribute panel, traces, and chips', async () => {
    appShell();
    const app = mount(document, BASE);
    await app.start();

    // chips come from the service and match the examples verbatim
    const chips = Array.from(document.querySelectorAll('#suggestions .chip')).map(
      (c) => c.textContent,
    );
    expect(chips).toEqual(EXPECTED_CHIPS);

    // clicking a chip prefills the composer but never sends
    (document.querySelector('#suggestions .chip') as HTMLButtonElement).click();
    const input = document.getElementById('text-input') as HTMLInputElement;
    expect(input.value).toBe(EXPECTED_CHIPS[0]);
    expect(document.querySelectorAll('#messages .message').length).toBe(0);

    await send(app, 'Can you give me a smooth rock music loop with a guitar and snare drums?');
    await send(app, 'I want to add a saxophone track to this music.');

    const messages = document.getElementById('messages')!;
    const players = messages.querySelectorAll('.message > .player audio');
    expect(players.length).toBe(2);
    for (const player of players) {
      const src = player.getAttribute('src') ?? '';
      expect(src).toMatch(/\/api\/assets\/music\/[0-9a-f]{8}\.wav$/);
      const head = await fetch(src);
      expect(head.status).toBe(200); // players point at real stored loops
    }

    const panel = document.getElementById('gat-panel')!;
    expect(panel.textContent).toContain('saxophone');
    expect(panel.textContent).toContain('rock');
    expect(panel.textContent).toContain('smooth');

    const assistantMessages = messages.querySelectorAll('.message-assistant');
    expect(assistantMessages.length).toBe(2);
    for (const message of assistantMessages) {
      const trace = message.querySelector('details.trace summary');
      expect(trace?.textContent).toBe('1 tool step');
    }
  });

  it('reload path: refetched history reproduces the same transcript', async () => {
    appShell();
    const app = mount(document, BASE);
    await app.start();
    const sessionId = app.state.sessionId!;
    await send(app, 'Give me a calm piano loop.');
    const liveMessages = app.state.messages;
    const liveGat = app.state.gat;

    appShell();
    const fresh = mount(document, BASE);
    await fresh.resume(sessionId);
    expect(fresh.state.messages).toEqual(liveMessages);
    expect(fresh.state.gat).toEqual(liveGat);
    expect(document.querySelectorAll('#messages .message').length).toBe(2);
  });

  it('conflict responses render a still-working notice', async () => {
    appShell();
    const app = mount(document, BASE);
    await app.start();
    const client = new ServiceClient(BASE);
    const sessionId = app.state.sessionId!;

    // fire a slow-ish turn directly, then race a UI send into the busy window
    const background = client.postMessage(sessionId, 'Give me an ambient loop.');
    let conflicts = 0;
    for (let i = 0; i < 20 && conflicts === 0; i++) {
      await send(app, 'Add a saxophone solo to this music loop.');
      const last = app.state.messages.at(-1);
      if (last?.role === 'system' && last.text.includes('Still working')) conflicts = 1;
    }
    await background;
    expect(conflicts).toBe(1);
  });

  it('rejects empty input client-side', async () => {
    appShell();
    const app = mount(document, BASE);
    await app.start();
    await send(app, '   ');
    expect(document.querySelectorAll('#messages .message').length).toBe(0);
  });
});
