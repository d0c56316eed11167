// Browser entry point: wires the client to the page.  All state shown comes
// from service views; this file only moves strings between them and the DOM.

import { inputDisabled, renderBoard } from './board.js';
import { SessionClient } from './client.js';
import { ApiError, HttpTransport } from './protocol.js';

const DEFAULT_FORMULA =
  '(forall x (or (exists y (atom lt x y)) (forall y (atom not-lt x y))))';
const DEFAULT_REALIZER =
  '(lam (a nat) (pair (app (X lt) a) (pair (pair (app (Phi lt) a) ' +
  '(state ())) (lam (m nat) (app (app (AddP lt) a) m)))))';

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function main(): void {
  const client = new SessionClient(new HttpTransport(''));
  const board = el<HTMLDivElement>('board');
  const choiceInput = el<HTMLInputElement>('choice');
  const submit = el<HTMLButtonElement>('submit');
  const start = el<HTMLButtonElement>('start');
  const formulaInput = el<HTMLTextAreaElement>('formula');
  const realizerInput = el<HTMLTextAreaElement>('realizer');
  const problem = el<HTMLDivElement>('problem');

  formulaInput.value = DEFAULT_FORMULA;
  realizerInput.value = DEFAULT_REALIZER;

  function refresh(): void {
    if (client.view) {
      board.innerHTML = renderBoard(client.view, client.abandoned,
                                    client.events);
    }
    const disabled = inputDisabled(client.view) || client.requestInFlight;
    choiceInput.disabled = disabled;
    submit.disabled = disabled;
  }

  function report(err: unknown): void {
    problem.textContent =
      err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
  }

  start.addEventListener('click', () => {
    problem.textContent = '';
    client
      .create({
        formula: formulaInput.value.trim(),
        realizer: realizerInput.value.trim(),
      })
      .then(refresh)
      .catch(report);
  });

  submit.addEventListener('click', () => {
    problem.textContent = '';
    const verdict = client.validateChoice(choiceInput.value);
    if (!verdict.ok || verdict.choice === undefined) {
      problem.textContent = verdict.message ?? 'invalid choice';
      return;
    }
    refresh(); // disable inputs while the request is in flight
    client
      .submitChoice(verdict.choice)
      .then(() => {
        choiceInput.value = '';
        refresh();
      })
      .catch((err) => {
        report(err);
        refresh();
      });
  });

  choiceInput.addEventListener('keydown', (ev) => {
    if (ev.key === 'Enter') submit.click();
  });
}

document.addEventListener('DOMContentLoaded', main);
