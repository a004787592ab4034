/** DOM wiring for the author session loop. */

import { ApiError, SessionClient } from './api';
import { renderDraftSummary, renderFeedbackPanel } from './feedback';
import { PlanEditor } from './planEditor';
import { selectDraft, selectedReport, SessionView, viewFromSession, withBusy } from './state';
import { ACTIONS_BY_STANCE, STANCES, UI_SETTINGS } from './taxonomy';
import type { AuthorEdit, SessionRecord } from './types';

const client = new SessionClient('');

let view: SessionView | null = null;
let planEditor: PlanEditor | null = null;

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function setStatus(text: string, isError = false): void {
  const status = $('status');
  status.textContent = text;
  status.className = isError ? 'error' : '';
}

/** Disable all controls while one request is in flight (one op per session). */
function renderBusy(): void {
  const busy = view?.busy ?? false;
  document.querySelectorAll('button, select, input, textarea').forEach((el) => {
    (el as HTMLButtonElement).disabled = busy;
  });
}

function parseEdits(raw: string): AuthorEdit[] {
  return raw
    .split('\n')
    .map((line) => line.trim())
    .filter((line) => line.length > 0)
    .map((line) => {
      // "edit text | paragraph | section" with the location parts optional
      const [edit, paragraph, section] = line.split('|').map((part) => part.trim());
      return {
        edit,
        paragraph: paragraph || null,
        section_title: section || null,
      };
    });
}

function renderPlanEditor(): void {
  const container = $('plan-items');
  container.innerHTML = '';
  if (!view || !planEditor) return;
  for (const item of view.session.review_items) {
    const block = document.createElement('div');
    block.className = 'plan-item';
    const chosen = planEditor
      .actionsFor(item.id)
      .map((label, i) => `<li>${label} <button data-remove="${item.id}:${i}">x</button></li>`)
      .join('');
    const options = STANCES.map(
      (stance) =>
        `<optgroup label="${stance}">` +
        ACTIONS_BY_STANCE[stance].map((a) => `<option value="${a}">${a}</option>`).join('') +
        `</optgroup>`,
    ).join('');
    block.innerHTML = [
      `<p><strong>#${item.id} ${item.type}</strong> ${item.span}</p>`,
      `<ol class="chosen">${chosen}</ol>`,
      `<select data-item="${item.id}"><option value="">add action…</option>${options}</select>`,
    ].join('');
    container.appendChild(block);
  }
}

function renderSession(): void {
  if (!view) return;
  const session = view.session;
  $('review-display').textContent = session.review_segment;
  ($('session-id') as HTMLElement).textContent = session.session_id;
  window.location.hash = session.session_id;

  const drafts = $('draft-list');
  drafts.innerHTML = session.drafts
    .map((d, i) =>
      renderDraftSummary(
        i,
        d.result.setting,
        d.result.word_count,
        d.eval !== null,
        i === view!.selectedDraft,
      ),
    )
    .join('');

  const draft = view.selectedDraft !== null ? session.drafts[view.selectedDraft] : null;
  $('draft-text').textContent = draft ? draft.result.response_text : '';
  $('feedback').innerHTML = renderFeedbackPanel(selectedReport(view));
  renderPlanEditor();
  renderBusy();
}

async function run<T>(label: string, op: () => Promise<T>): Promise<T | null> {
  if (!view) return null;
  view = withBusy(view, true);
  renderBusy();
  setStatus(`${label}…`);
  try {
    const result = await op();
    setStatus(`${label} done`);
    return result;
  } catch (error) {
    const message = error instanceof ApiError ? `${error.status}: ${error.message}` : String(error);
    setStatus(`${label} failed — ${message}`, true);
    return null;
  } finally {
    if (view) view = withBusy(view, false);
    renderSession();
  }
}

function adoptSession(session: SessionRecord): void {
  view = viewFromSession(session);
  planEditor = new PlanEditor(session.review_items);
  if (session.plan) {
    for (const [itemId, labels] of Object.entries(session.plan)) {
      for (const label of labels) {
        try {
          planEditor.addAction(itemId, label);
        } catch {
          // items may have been re-annotated since the plan was stored
        }
      }
    }
  }
  renderSession();
}

async function init(): Promise<void> {
  $('create').addEventListener('click', async () => {
    const review = ($('review-input') as HTMLTextAreaElement).value.trim();
    if (!review) return setStatus('paste a review segment first', true);
    const venue = ($('venue') as HTMLSelectElement).value;
    const session = await client.createSession(review, venue);
    adoptSession(session);
  });

  $('save-inputs').addEventListener('click', () =>
    run('saving inputs', async () => {
      const edits = parseEdits(($('edits-input') as HTMLTextAreaElement).value);
      const paragraphs = ($('v1-input') as HTMLTextAreaElement).value
        .split('\n\n')
        .map((p) => p.trim())
        .filter((p) => p.length > 0);
      const session = await client.setInputs(view!.session.session_id, {
        author_edits: edits,
        v1_paragraphs: paragraphs,
      });
      adoptSession(session);
    }),
  );

  $('annotate').addEventListener('click', () =>
    run('annotating review', async () => {
      await client.annotate(view!.session.session_id);
      adoptSession(await client.getSession(view!.session.session_id));
    }),
  );

  $('save-plan').addEventListener('click', () =>
    run('saving plan', async () => {
      const limitRaw = ($('limit-input') as HTMLInputElement).value;
      const limit = limitRaw ? parseInt(limitRaw, 10) : null;
      const payload = planEditor!.isEmpty() ? null : planEditor!.payload();
      const session = await client.setPlan(view!.session.session_id, payload, limit);
      adoptSession(session);
    }),
  );

  $('generate').addEventListener('click', () =>
    run('generating', async () => {
      const setting = ($('setting') as HTMLSelectElement).value;
      await client.generate(view!.session.session_id, setting);
      adoptSession(await client.getSession(view!.session.session_id));
    }),
  );

  $('evaluate').addEventListener('click', () =>
    run('evaluating', async () => {
      await client.evaluate(view!.session.session_id);
      adoptSession(await client.getSession(view!.session.session_id));
    }),
  );

  document.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action === 'refine') {
      run('refining', async () => {
        await client.refine(view!.session.session_id);
        adoptSession(await client.getSession(view!.session.session_id));
      });
    }
    const draft = target.closest('li.draft') as HTMLElement | null;
    if (draft && view) {
      view = selectDraft(view, parseInt(draft.dataset.index!, 10));
      renderSession();
    }
    const removal = target.dataset.remove;
    if (removal && planEditor) {
      const [itemId, index] = removal.split(':');
      planEditor.removeAction(itemId, parseInt(index, 10));
      renderSession();
    }
  });

  document.addEventListener('change', (event) => {
    const target = event.target as HTMLSelectElement;
    if (target.dataset.item && target.value && planEditor) {
      planEditor.addAction(target.dataset.item, target.value);
      target.value = '';
      renderSession();
    }
  });

  const settingSelect = $('setting') as HTMLSelectElement;
  settingSelect.innerHTML = UI_SETTINGS.map((s) => `<option value="${s}">${s}</option>`).join('');

  const fromHash = window.location.hash.slice(1);
  if (fromHash) {
    try {
      adoptSession(await client.getSession(fromHash));
      setStatus('session restored');
    } catch {
      setStatus(`session ${fromHash} not found`, true);
    }
  }
}

init();
