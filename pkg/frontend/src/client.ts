// Session client: a byte-for-byte mirror of the service view plus the
// accumulated event feed.  No game logic happens here; every displayed fact
// comes out of a service response.

import {
  ApiError,
  CreateRequest,
  CreateResponse,
  MoveResponse,
  SessionView,
  TraceEvent,
  TraceExport,
  Transport,
} from './protocol.js';

export interface AbandonedBranch {
  /** Positions dropped by a retraction, oldest first. */
  positions: string[];
  /** Prefix length the play was cut back to. */
  keptPrefix: number;
  /** Index of the backtrack event in the feed. */
  eventIndex: number;
}

export type EventListener = (event: TraceEvent, index: number) => void;

export interface ChoiceValidation {
  ok: boolean;
  choice?: number | string;
  message?: string;
}

export class SessionClient {
  private transport: Transport;
  id: string | null = null;
  view: SessionView | null = null;
  events: TraceEvent[] = [];
  abandoned: AbandonedBranch[] = [];
  requestInFlight = false;
  private playPath: string[] = [];
  private listeners: EventListener[] = [];

  constructor(transport: Transport) {
    this.transport = transport;
  }

  onEvent(listener: EventListener): void {
    this.listeners.push(listener);
  }

  async create(config: Omit<CreateRequest, 'v' | 'op'>): Promise<SessionView> {
    this.requireIdle();
    this.requestInFlight = true;
    try {
      const reply = (await this.transport.post('/sessions', {
        v: 1,
        op: 'create',
        ...config,
      })) as CreateResponse;
      this.id = reply.id;
      this.view = reply.view;
      this.playPath = [...reply.view.play];
      return reply.view;
    } finally {
      this.requestInFlight = false;
    }
  }

  /** Client-side validation only; never talks to the service. */
  validateChoice(raw: string): ChoiceValidation {
    if (!this.view) return { ok: false, message: 'no session' };
    if (this.view.status === 'Finished') {
      return { ok: false, message: 'the game is over' };
    }
    const kind = this.view.choice_kind;
    const text = raw.trim();
    if (kind === 'binary') {
      if (text === 'L' || text === 'R') return { ok: true, choice: text };
      return { ok: false, message: 'pick L or R' };
    }
    if (kind === 'numeral') {
      if (/^\d+$/.test(text)) return { ok: true, choice: parseInt(text, 10) };
      return { ok: false, message: 'enter a natural number' };
    }
    return { ok: false, message: 'not your turn' };
  }

  async submitChoice(choice: number | string): Promise<TraceEvent[]> {
    this.requireIdle();
    if (!this.id || !this.view) throw new ApiError('E_STATE', 'no session');
    if (this.view.status === 'Finished') {
      throw new ApiError('E_FINISHED', 'the game is over');
    }
    this.requestInFlight = true;
    try {
      const reply = (await this.transport.post(
        `/sessions/${this.id}/move`,
        { v: 1, op: 'move', choice },
      )) as MoveResponse;
      this.applyEvents(reply.events);
      this.view = reply.view;
      return reply.events;
    } finally {
      this.requestInFlight = false;
    }
  }

  async refreshView(): Promise<SessionView> {
    if (!this.id) throw new ApiError('E_STATE', 'no session');
    const reply = (await this.transport.get(`/sessions/${this.id}`)) as {
      view: SessionView;
    };
    this.view = reply.view;
    return reply.view;
  }

  async fetchTrace(): Promise<TraceExport> {
    if (!this.id) throw new ApiError('E_STATE', 'no session');
    return (await this.transport.get(
      `/sessions/${this.id}/trace`,
    )) as TraceExport;
  }

  /** The event feed applied in order; retractions record dimmed branches. */
  private applyEvents(events: TraceEvent[]): void {
    for (const event of events) {
      const index = this.events.length;
      this.events.push(event);
      if (event.ev === 'extend' && event.pos !== undefined) {
        this.playPath.push(event.pos);
      } else if (event.ev === 'backtrack' && event.to !== undefined) {
        const dropped = this.playPath.slice(event.to);
        if (dropped.length > 0) {
          this.abandoned.push({
            positions: dropped,
            keptPrefix: event.to,
            eventIndex: index,
          });
        }
        this.playPath = this.playPath.slice(0, event.to);
      }
      for (const listener of this.listeners) listener(event, index);
    }
  }

  /** The play reconstructed from the feed; must agree with the view. */
  reconstructedPlay(): string[] {
    return [...this.playPath];
  }

  private requireIdle(): void {
    if (this.requestInFlight) {
      throw new ApiError('E_BUSY', 'one request at a time per session');
    }
  }
}
