// The v1 JSON protocol spoken by the session service.

export interface TraceEvent {
  ev: string;
  by?: string;
  choice?: number | string;
  pos?: string;
  to?: number;
  state?: string;
  clause?: number;
  j?: number | null;
  winner?: string;
}

export interface SessionView {
  v: number;
  id: string;
  status: 'AwaitingAbelard' | 'AwaitingAdvance' | 'Finished';
  winner: string | null;
  root: string;
  play: string[];
  state: string;
  backtracks: number;
  events_len: number;
  choice_kind: 'numeral' | 'binary' | null;
  display_choices: (number | string)[];
}

export interface CreateRequest {
  v: 1;
  op?: 'create';
  formula: string;
  realizer: string;
  fuel?: number;
  display_range?: number;
  prelude?: string;
}

export interface CreateResponse {
  v: 1;
  id: string;
  view: SessionView;
}

export interface MoveResponse {
  v: 1;
  view: SessionView;
  events: TraceEvent[];
}

export interface TraceExport {
  v: 1;
  config: Record<string, unknown>;
  events: TraceEvent[];
}

export interface ErrorResponse {
  v: 1;
  error: string;
  message: string;
}

export class ApiError extends Error {
  code: string;

  constructor(code: string, message: string) {
    super(message);
    this.code = code;
  }
}

export interface Transport {
  post(path: string, body: unknown): Promise<unknown>;
  get(path: string): Promise<unknown>;
}

async function unwrap(res: Response): Promise<unknown> {
  const body = (await res.json()) as ErrorResponse;
  if (!res.ok) {
    throw new ApiError(body.error ?? 'E_HTTP', body.message ?? res.statusText);
  }
  return body;
}

/** Plain fetch against the service (same origin by default). */
export class HttpTransport implements Transport {
  base: string;

  constructor(base = '') {
    this.base = base;
  }

  async post(path: string, body: unknown): Promise<unknown> {
    const res = await fetch(this.base + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    return unwrap(res);
  }

  async get(path: string): Promise<unknown> {
    const res = await fetch(this.base + path);
    return unwrap(res);
  }
}
