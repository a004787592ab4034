/**
 * Contract test against a live service instance with mock providers.
 * Spawns `respkit serve` as a child process; requires the Python package
 * to be installed in the environment.
 */

import { ChildProcess, spawn } from 'node:child_process';
import { existsSync, mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { SessionClient } from '../src/api';
import { PlanEditor } from '../src/planEditor';
import { viewFromSession } from '../src/state';
import { ACTIONS_BY_STANCE, UI_SETTINGS } from '../src/taxonomy';

const PORT = 20000 + Math.floor(Math.random() * 9000);
const BASE = `http://127.0.0.1:${PORT}`;
const FRONTEND_ROOT = join(__dirname, '..');

let service: ChildProcess;
let client: SessionClient;

async function waitForHealth(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/health`);
      if (response.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service did not become healthy on ${BASE}: ${lastError}`);
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), 'respkit-ui-'));
  const args = [
    '-m', 'respkit.cli', 'serve',
    '--port', String(PORT),
    '--host', '127.0.0.1',
    '--data-dir', dataDir,
    '--mock-providers',
    '--frontend', FRONTEND_ROOT,
  ];
  service = spawn('python3', args, { stdio: ['ignore', 'pipe', 'pipe'] });
  service.stderr?.on('data', () => undefined);
  await waitForHealth(20000);
  client = new SessionClient(BASE);
}, 30000);

afterAll(() => {
  service?.kill('SIGTERM');
});

describe('author loop against the live service', () => {
  it('runs create -> inputs -> plan -> generate -> evaluate -> refine', async () => {
    const session = await client.createSession(
      'Is the matching threshold tuned? The evaluation uses only one dataset.',
      'conference',
    );
    expect(session.session_id).toBeTruthy();
    expect(session.drafts).toHaveLength(0);

    await client.setInputs(session.session_id, {
      author_edits: [
        {
          edit: 'We tuned the threshold on a held-out pilot set.',
          paragraph: 'The pilot set contains twenty examples.',
          section_title: 'Method',
        },
        { edit: 'We added two further datasets.', paragraph: null, section_title: null },
      ],
      v1_paragraphs: ['Method\nThe matching threshold controls span detection.'],
    });

    const { review_items } = await client.annotate(session.session_id);
    expect(review_items.length).toBeGreaterThan(0);

    const editor = new PlanEditor(review_items);
    for (const item of review_items) {
      editor.addAction(
        item.id,
        item.type === 'Question' ? 'answer question' : 'concede criticism',
      );
    }
    await client.setPlan(session.session_id, editor.payload(), 120);

    const generated = await client.generate(session.session_id, 'S6');
    expect(generated.result.setting).toBe('S6');
    expect(generated.result.response_text.length).toBeGreaterThan(0);

    const evaluated = await client.evaluate(session.session_id);
    const report = evaluated.report;
    expect(Object.keys(report.quality).sort()).toEqual([
      'convincingness',
      'specificity',
      'targeting',
    ]);
    for (const dim of ['targeting', 'specificity', 'convincingness'] as const) {
      expect(report.quality[dim].score).toBeGreaterThanOrEqual(1);
      expect(report.quality[dim].score).toBeLessThanOrEqual(5);
    }
    expect(report.len_control).not.toBeNull();
    expect(report.plan_control).not.toBeNull();

    const refined = await client.refine(session.session_id);
    expect(refined.result.setting).toBe('S8');

    const final = await client.getSession(session.session_id);
    expect(final.drafts).toHaveLength(2);
    expect(final.drafts[0].eval).not.toBeNull();
  }, 30000);

  it('reload reconstructs the identical view from the service', async () => {
    const session = await client.createSession('Please report runtime numbers.');
    await client.setInputs(session.session_id, {
      author_edits: [{ edit: 'Runtime is linear.', paragraph: null, section_title: null }],
    });
    await client.generate(session.session_id, 'S2');

    const first = await client.getSession(session.session_id);
    const second = await client.getSession(session.session_id);
    expect(viewFromSession(second)).toEqual(viewFromSession(first));
    expect(viewFromSession(first).selectedDraft).toBe(0);
  });

  it('keeps the static taxonomy mirror in sync with the service', async () => {
    const taxonomy = await client.taxonomy();
    expect(taxonomy.actions_by_stance).toEqual(ACTIONS_BY_STANCE);
    expect(taxonomy.ui_settings).toEqual([...UI_SETTINGS]);
  });

  it('surfaces conflict responses for out-of-order operations', async () => {
    const session = await client.createSession('A lone concern with no drafts yet.');
    await expect(client.refine(session.session_id)).rejects.toMatchObject({ status: 409 });
  });

  it('serves the static bundle when built', async () => {
    if (!existsSync(join(FRONTEND_ROOT, 'dist', 'main.js'))) {
      return; // bundle not built in this run
    }
    const page = await fetch(`${BASE}/ui/`);
    expect(page.status).toBe(200);
    expect(await page.text()).toContain('respkit');
  });
});
