/** Bootstraps the chat surface and wires events to the service client. */

import { BusyError, ServiceClient, TurnFailedError } from './api.js';
import {
  ChatViewState,
  initialState,
  stateFromHistory,
  withBusy,
  withSession,
  withSystemNotice,
  withTurnResult,
  withUserMessage,
} from './state.js';
import { renderBusy, renderGatPanel, renderMessages, renderSuggestions } from './render.js';
import { validateWavFile } from './wav.js';

const POLL_INTERVAL_MS = 1000;

export interface AppElements {
  messages: HTMLElement;
  gatPanel: HTMLElement;
  suggestions: HTMLElement;
  form: HTMLFormElement;
  input: HTMLInputElement;
  send: HTMLButtonElement;
  audioInput: HTMLInputElement;
  busyIndicator: HTMLElement;
}

export class ChatApp {
  state: ChatViewState = initialState();
  private poller: ReturnType<typeof setInterval> | null = null;

  constructor(
    private client: ServiceClient,
    private elements: AppElements,
  ) {}

  private assetUrl = (path: string) => this.client.assetUrl(path);

  private render(): void {
    renderMessages(this.elements.messages, this.state, this.assetUrl);
    renderGatPanel(this.elements.gatPanel, this.state.gat);
    renderBusy(this.elements.busyIndicator, this.elements.input, this.elements.send, this.state.busy);
    this.elements.messages.scrollTop = this.elements.messages.scrollHeight;
  }

  private setState(state: ChatViewState): void {
    this.state = state;
    this.render();
  }

  /** Poll the status endpoint while a turn is in flight. */
  private startPolling(sessionId: string): void {
    this.stopPolling();
    this.poller = setInterval(async () => {
      try {
        const status = await this.client.getStatus(sessionId);
        if (!status.busy) this.stopPolling();
        this.elements.busyIndicator.textContent = status.busy ? 'working…' : '';
      } catch {
        this.stopPolling();
      }
    }, POLL_INTERVAL_MS);
  }

  private stopPolling(): void {
    if (this.poller !== null) {
      clearInterval(this.poller);
      this.poller = null;
    }
  }

  async start(): Promise<void> {
    const sessionId = await this.client.createSession();
    this.setState(withSession(this.state, sessionId));

    const suggestions = await this.client.getSuggestions();
    renderSuggestions(this.elements.suggestions, suggestions, (text) => {
      this.elements.input.value = text; // prefill, never auto-send
      this.elements.input.focus();
    });

    this.elements.form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.sendCurrentInput();
    });
    this.render();
  }

  /** Resume an existing session: the view is rebuilt purely from fetches. */
  async resume(sessionId: string): Promise<void> {
    const [history, state] = await Promise.all([
      this.client.getHistory(sessionId),
      this.client.getState(sessionId),
    ]);
    this.setState(stateFromHistory(sessionId, history.turns, state.gat));
  }

  async sendCurrentInput(): Promise<void> {
    const text = this.elements.input.value.trim();
    if (!text || this.state.busy || !this.state.sessionId) return;

    let audio: Blob | undefined;
    const file = this.elements.audioInput.files?.[0];
    if (file) {
      if (!(await validateWavFile(file))) {
        this.setState(withSystemNotice(this.state, 'Only WAV files can be attached.'));
        return;
      }
      audio = file;
    }

    const sessionId = this.state.sessionId;
    this.elements.input.value = '';
    this.elements.audioInput.value = '';
    this.setState(withUserMessage(this.state, text));
    this.startPolling(sessionId);
    try {
      const result = await this.client.postMessage(sessionId, text, audio);
      this.setState(withTurnResult(this.state, result));
    } catch (error) {
      if (error instanceof BusyError) {
        this.setState(withSystemNotice(this.state, 'Still working on the previous request…'));
      } else if (error instanceof TurnFailedError) {
        this.setState(withSystemNotice(this.state, `That didn't work: ${error.message}`));
      } else {
        this.setState(withSystemNotice(this.state, `Service error: ${String(error)}`));
      }
    } finally {
      this.stopPolling();
      this.setState(withBusy(this.state, false));
    }
  }
}

export function mount(root: Document = document, baseUrl = ''): ChatApp {
  const get = <T extends HTMLElement>(id: string): T => {
    const node = root.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  };
  const app = new ChatApp(new ServiceClient(baseUrl), {
    messages: get('messages'),
    gatPanel: get('gat-panel'),
    suggestions: get('suggestions'),
    form: get<HTMLFormElement>('composer'),
    input: get<HTMLInputElement>('text-input'),
    send: get<HTMLButtonElement>('send'),
    audioInput: get<HTMLInputElement>('audio-input'),
    busyIndicator: get('busy-indicator'),
  });
  return app;
}

// auto-start only in a real browser; tests drive mount() themselves
declare const process: unknown;
if (typeof window !== 'undefined' && typeof process === 'undefined') {
  window.addEventListener('DOMContentLoaded', () => {
    void mount().start();
  });
}
