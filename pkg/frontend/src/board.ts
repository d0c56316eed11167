// Rendering: pure functions from views/feeds to HTML strings, so the board
// is testable without a DOM.

import { AbandonedBranch } from './client.js';
import { SessionView, TraceEvent } from './protocol.js';

export interface StateRow {
  pred: string;
  args: number[];
  witness: number;
}

// --- tiny display-only s-expression reading ------------------------------

type SNode = string | SNode[];

function readSexpr(text: string): SNode {
  let i = 0;

  function skip(): void {
    while (i < text.length && /\s/.test(text[i])) i++;
  }

  function node(): SNode {
    skip();
    if (text[i] === '(') {
      i++;
      const items: SNode[] = [];
      skip();
      while (i < text.length && text[i] !== ')') {
        items.push(node());
        skip();
      }
      i++; // consume ')'
      return items;
    }
    const start = i;
    while (i < text.length && !/[\s()]/.test(text[i])) i++;
    return text.slice(start, i);
  }

  return node();
}

function numeralValue(node: SNode): number {
  // numerals arrive as iterated successors: (S (S 0))
  let n = 0;
  let cur = node;
  while (Array.isArray(cur) && cur[0] === 'S') {
    n++;
    cur = cur[1];
  }
  return cur === '0' ? n : NaN;
}

function atomLabel(node: SNode): string {
  return Array.isArray(node) ? sexprToText(node) : node;
}

function sexprToText(node: SNode): string {
  if (!Array.isArray(node)) return node;
  return '(' + node.map(sexprToText).join(' ') + ')';
}

/** Rows of the knowledge-state table from a state literal. */
export function parseStateLiteral(literal: string): StateRow[] {
  const top = readSexpr(literal);
  if (!Array.isArray(top) || top[0] !== 'state' || !Array.isArray(top[1])) {
    return [];
  }
  const rows: StateRow[] = [];
  for (const entry of top[1]) {
    if (!Array.isArray(entry) || entry.length !== 3) continue;
    const args = Array.isArray(entry[1])
      ? entry[1].map(numeralValue)
      : [];
    rows.push({
      pred: atomLabel(entry[0]),
      args,
      witness: numeralValue(entry[2]),
    });
  }
  return rows;
}

// --- HTML ------------------------------------------------------------------

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function describeEvent(event: TraceEvent): string {
  switch (event.ev) {
    case 'extend':
      return `${event.by === 'E' ? 'Eloise' : 'Abelard'} plays ${String(
        event.choice,
      )} → ${event.pos ?? ''}`;
    case 'backtrack':
      return `Eloise backtracks to position ${event.to}; state ${event.state ?? ''}`;
    case 'sigma':
      return `state is now ${event.state ?? ''}`;
    case 'omega_clause':
      return `strategy clause ${event.clause}${
        event.j != null ? ` (target ${event.j})` : ''
      }`;
    case 'result':
      return `result: ${event.winner === 'E' ? 'Eloise wins' : event.winner}`;
    default:
      return event.ev;
  }
}

export function renderPlay(
  view: SessionView,
  abandoned: AbandonedBranch[],
): string {
  const parts: string[] = ['<ol class="play">'];
  view.play.forEach((pos, i) => {
    const current = i === view.play.length - 1 ? ' current' : '';
    parts.push(
      `<li class="position${current}"><code>${escapeHtml(pos)}</code></li>`,
    );
  });
  parts.push('</ol>');
  if (abandoned.length > 0) {
    parts.push('<ul class="abandoned">');
    for (const branch of abandoned) {
      const path = branch.positions
        .map((p) => `<code>${escapeHtml(p)}</code>`)
        .join(' :: ');
      parts.push(
        `<li class="dimmed"><span class="marker">↩ backtrack to ` +
          `${branch.keptPrefix}</span> ${path}</li>`,
      );
    }
    parts.push('</ul>');
  }
  return parts.join('');
}

export function renderStateTable(view: SessionView): string {
  const rows = parseStateLiteral(view.state);
  const parts = [
    '<table class="knowledge"><thead><tr>' +
      '<th>predicate</th><th>args</th><th>witness</th></tr></thead><tbody>',
  ];
  for (const row of rows) {
    parts.push(
      `<tr><td><code>${escapeHtml(row.pred)}</code></td>` +
        `<td>(${row.args.join(', ')})</td><td>${row.witness}</td></tr>`,
    );
  }
  parts.push('</tbody></table>');
  return parts.join('');
}

export function renderFeed(events: TraceEvent[]): string {
  const items = events.map(
    (e, i) =>
      `<li class="event ev-${e.ev}" data-index="${i}">` +
      `${escapeHtml(describeEvent(e))}</li>`,
  );
  return `<ol class="feed">${items.join('')}</ol>`;
}

export function renderStatus(view: SessionView): string {
  if (view.status === 'Finished') {
    const text =
      view.winner === 'E' ? 'Eloise wins' : `finished: ${view.winner}`;
    return `<div class="banner win">${escapeHtml(text)} after ` +
      `${view.backtracks} backtrack(s)</div>`;
  }
  const hint =
    view.choice_kind === 'binary'
      ? 'choose a side: L or R'
      : 'choose a natural number';
  return `<div class="banner turn">your move — ${hint}</div>`;
}

export function renderBoard(
  view: SessionView,
  abandoned: AbandonedBranch[],
  events: TraceEvent[],
): string {
  return [
    renderStatus(view),
    '<section class="current-play"><h2>play</h2>',
    renderPlay(view, abandoned),
    '</section>',
    '<section class="state"><h2>knowledge state</h2>',
    renderStateTable(view),
    '</section>',
    '<section class="events"><h2>events</h2>',
    renderFeed(events),
    '</section>',
  ].join('');
}

export function inputDisabled(view: SessionView | null): boolean {
  return view === null || view.status !== 'AwaitingAbelard';
}
