/** Typed client for the session service. The UI talks to nothing else. */

export interface GatTracks {
  mix: string | null;
  stems: Record<string, string>;
}

export interface Gat {
  bpm: number | null;
  key: string | null;
  genre: string | null;
  mood: string | null;
  instruments: string[];
  description: string | null;
  tracks: GatTracks;
}

export interface StepTrace {
  thought: string;
  action: string;
  action_input: string;
  observation: string;
}

export interface TurnResult {
  turn_index: number;
  query: string;
  answer: string;
  produced_assets: string[];
  steps: StepTrace[];
  gat: Gat;
}

export interface HistoryTurn {
  index: number;
  query: string;
  answer: string;
  produced_assets: string[];
  steps: StepTrace[];
}

export interface SessionState {
  session_id: string;
  gat: Gat;
  history: { index: number; query: string; answer: string; produced_assets: string[] }[];
}

/** The service reported a conflicting in-flight turn (HTTP 409). */
export class BusyError extends Error {}

/** The turn ran but failed; the session was rolled back (HTTP 422). */
export class TurnFailedError extends Error {}

async function parseError(response: Response): Promise<string> {
  try {
    const body = await response.json();
    return body.error ?? body.detail ?? response.statusText;
  } catch {
    return response.statusText;
  }
}

export class ServiceClient {
  constructor(private baseUrl: string = '') {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  assetUrl(relativePath: string): string {
    return this.url(`/api/assets/${relativePath}`);
  }

  async createSession(): Promise<string> {
    const response = await fetch(this.url('/api/sessions'), { method: 'POST' });
    if (!response.ok) throw new Error(await parseError(response));
    return (await response.json()).session_id;
  }

  async postMessage(sessionId: string, text: string, audio?: Blob): Promise<TurnResult> {
    let response: Response;
    if (audio) {
      const form = new FormData();
      form.append('text', text);
      form.append('audio', audio, 'upload.wav');
      response = await fetch(this.url(`/api/sessions/${sessionId}/messages`), {
        method: 'POST',
        body: form,
      });
    } else {
      response = await fetch(this.url(`/api/sessions/${sessionId}/messages`), {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ text }),
      });
    }
    if (response.status === 409) throw new BusyError(await parseError(response));
    if (response.status === 422) throw new TurnFailedError(await parseError(response));
    if (!response.ok) throw new Error(await parseError(response));
    return response.json();
  }

  async getState(sessionId: string): Promise<SessionState> {
    const response = await fetch(this.url(`/api/sessions/${sessionId}/state`));
    if (!response.ok) throw new Error(await parseError(response));
    return response.json();
  }

  async getHistory(sessionId: string): Promise<{ session_id: string; turns: HistoryTurn[] }> {
    const response = await fetch(this.url(`/api/sessions/${sessionId}/history`));
    if (!response.ok) throw new Error(await parseError(response));
    return response.json();
  }

  async getStatus(sessionId: string): Promise<{ busy: boolean; turns: number }> {
    const response = await fetch(this.url(`/api/sessions/${sessionId}/status`));
    if (!response.ok) throw new Error(await parseError(response));
    return response.json();
  }

  async getSuggestions(): Promise<string[]> {
    const response = await fetch(this.url('/api/suggestions'));
    if (!response.ok) throw new Error(await parseError(response));
    return (await response.json()).suggestions;
  }
}
