/** DOM rendering. No state lives in the DOM: render(container, state) is
 * idempotent and the GAT panel only displays server values. */

import type { Gat, StepTrace } from './api.js';
import type { ChatMessage, ChatViewState } from './state.js';

const ASSET_PATH = /music\/[0-9a-f]{8}\.wav/g;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function audioPlayer(path: string, assetUrl: (p: string) => string): HTMLElement {
  const wrapper = el('div', 'player');
  const audio = el('audio');
  audio.controls = true;
  audio.src = assetUrl(path);
  wrapper.appendChild(audio);
  wrapper.appendChild(el('span', 'player-path', path));
  return wrapper;
}

/** Observation text with every asset path turned into an inline player. */
function linkifyObservation(text: string, assetUrl: (p: string) => string): HTMLElement {
  const container = el('div', 'observation');
  const paths = text.match(ASSET_PATH) ?? [];
  container.appendChild(el('span', undefined, text));
  for (const path of paths) {
    container.appendChild(audioPlayer(path, assetUrl));
  }
  return container;
}

export function renderTrace(steps: StepTrace[], assetUrl: (p: string) => string): HTMLElement {
  const details = el('details', 'trace');
  details.open = false; // collapsed by default
  const summary = el(
    'summary',
    undefined,
    steps.length === 0 ? 'no tools used' : `${steps.length} tool step${steps.length === 1 ? '' : 's'}`,
  );
  details.appendChild(summary);
  for (const step of steps) {
    const block = el('div', 'trace-step');
    block.appendChild(el('div', 'trace-action', `Action: ${step.action}`));
    block.appendChild(el('div', 'trace-input', `Action Input: ${step.action_input}`));
    const obs = linkifyObservation(`Observation: ${step.observation}`, assetUrl);
    block.appendChild(obs);
    details.appendChild(block);
  }
  return details;
}

function renderMessage(message: ChatMessage, assetUrl: (p: string) => string): HTMLElement {
  const node = el('div', `message message-${message.role}`);
  node.appendChild(el('div', 'message-text', message.text));
  for (const path of message.assets) {
    node.appendChild(audioPlayer(path, assetUrl));
  }
  if (message.role === 'assistant') {
    node.appendChild(renderTrace(message.steps, assetUrl));
  }
  return node;
}

export function renderMessages(
  container: HTMLElement,
  state: ChatViewState,
  assetUrl: (p: string) => string,
): void {
  container.replaceChildren(...state.messages.map((m) => renderMessage(m, assetUrl)));
}

export function renderGatPanel(container: HTMLElement, gat: Gat | null): void {
  container.replaceChildren();
  container.appendChild(el('h2', undefined, 'Attributes'));
  if (!gat) {
    container.appendChild(el('p', 'gat-empty', 'no attributes recorded'));
    return;
  }
  const table = el('table', 'gat-table');
  const rows: [string, string][] = [
    ['bpm', gat.bpm === null ? '—' : String(gat.bpm)],
    ['key', gat.key ?? '—'],
    ['genre', gat.genre ?? '—'],
    ['mood', gat.mood ?? '—'],
    ['instruments', gat.instruments.length ? gat.instruments.join(', ') : '—'],
    ['description', gat.description ?? '—'],
    ['mix', gat.tracks.mix ?? '—'],
    [
      'stems',
      Object.keys(gat.tracks.stems).length
        ? Object.entries(gat.tracks.stems)
            .map(([name, path]) => `${name}: ${path}`)
            .join(', ')
        : '—',
    ],
  ];
  for (const [label, value] of rows) {
    const row = el('tr', `gat-row gat-${label}`);
    row.appendChild(el('th', undefined, label));
    row.appendChild(el('td', undefined, value));
    table.appendChild(row);
  }
  container.appendChild(table);
}

export function renderSuggestions(
  container: HTMLElement,
  suggestions: string[],
  onPick: (text: string) => void,
): void {
  container.replaceChildren();
  for (const text of suggestions) {
    const chip = el('button', 'chip', text);
    chip.type = 'button';
    // prefill only; sending stays an explicit user action
    chip.addEventListener('click', () => onPick(text));
    container.appendChild(chip);
  }
}

export function renderBusy(indicator: HTMLElement, input: HTMLInputElement, send: HTMLButtonElement, busy: boolean): void {
  indicator.textContent = busy ? 'working…' : '';
  input.disabled = busy;
  send.disabled = busy;
}
