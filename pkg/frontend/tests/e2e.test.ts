/**
 * Full-stack workflow test: seed a real corpus with the six bundled
 * reference dialogues, start the Python review service, grade everything
 * through the app's keyboard path, and check the stored dispositions.
 *
 * The document URL must match the service origin or happy-dom's fetch
 * treats every request as a CORS failure.
 *
 * @vitest-environment happy-dom
 * @vitest-environment-options {"url": "http://127.0.0.1:8931"}
 */

import { type ChildProcess, execFileSync, spawn } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { createConnection } from 'node:net';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ReviewApi } from '../src/api.js';
import { ReviewApp, initReviewApp } from '../src/app.js';
import { byId, frontendDir, loadAppHtml, waitFor } from './helpers.js';

const repoRoot = join(frontendDir, '..');
const samplesDir = join(repoRoot, 'src', 'emocorpus', 'data', 'samples');
const port = 8931;
const base = `http://127.0.0.1:${port}`;

const SAMPLES: [string, string, string][] = [
  ['anger_a2.txt', 'anger', 'A2'],
  ['anger_b2.txt', 'anger', 'B2'],
  ['anger_c2.txt', 'anger', 'C2'],
  ['surprise_a2.txt', 'surprise', 'A2'],
  ['surprise_b2.txt', 'surprise', 'B2'],
  ['surprise_c2.txt', 'surprise', 'C2'],
];

let workDir: string;
let server: ChildProcess;

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), 'review-ui-e2e-'));
  const store = join(workDir, 'corpus.jsonl');
  for (const [file, emotion, cefr] of SAMPLES) {
    execFileSync(
      'python3',
      ['-m', 'emocorpus.cli', 'ingest', join(samplesDir, file), '--emotion', emotion, '--cefr', cefr, '--store', store],
      { cwd: repoRoot },
    );
  }
  server = spawn(
    'python3',
    ['-m', 'emocorpus.cli', 'serve', '--store', store, '--listen', `127.0.0.1:${port}`],
    { cwd: repoRoot, stdio: 'ignore' },
  );
  const deadline = Date.now() + 20000;
  while (!(await portOpen())) {
    if (Date.now() > deadline) throw new Error('service did not come up');
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
}, 30000);

function portOpen(): Promise<boolean> {
  return new Promise((resolve) => {
    const socket = createConnection({ host: '127.0.0.1', port }, () => {
      socket.end();
      resolve(true);
    });
    socket.on('error', () => resolve(false));
  });
}

afterAll(() => {
  server?.kill();
  if (workDir) rmSync(workDir, { recursive: true, force: true });
});

function press(key: string) {
  window.dispatchEvent(new KeyboardEvent('keydown', { key, bubbles: true }));
}

function title(): string {
  return byId('task-title').textContent ?? '';
}

async function grade(app: ReviewApp, key: string, options: { forceComplexity?: boolean } = {}) {
  const before = title();
  if (options.forceComplexity) {
    const checkbox = byId('override-complexity') as HTMLInputElement;
    checkbox.checked = true;
    checkbox.dispatchEvent(new Event('change'));
  }
  press(key);
  press('Enter');
  await waitFor(() => title() !== before || !byId('empty-state').hidden);
}

describe('review workflow against the live service', () => {
  it('grades all six dialogues and the store records the dispositions', async () => {
    // The service is the source of truth for what the UI must display.
    const served = await (await fetch(`${base}/api/review/next`)).json();

    loadAppHtml();
    const app = initReviewApp(document, new ReviewApi(base), { reviewer: 'e2e' });
    await app.loadNext();

    expect(title()).toBe('Dialogue 000001');
    const rows = byId('turns').querySelectorAll('li');
    expect(rows.length).toBe(12);
    expect(rows[0]?.querySelector('.chip')?.textContent).toBe('Client (angry)');
    const fkglShown = byId('evidence').querySelectorAll('dd')[0]?.textContent;
    expect(fkglShown).toBe(String(served.evidence.fkgl));

    // anger A2/B2/C2 then surprise A2/B2/C2; the surprise B2/C2 dialogues
    // fail the automatic complexity gate, so accepting them exercises the
    // reviewer override.
    await grade(app, 's');
    expect(byId('toast').textContent).toBe('000001 accepted');
    await grade(app, 'a');
    await grade(app, 'f');
    await grade(app, 's');
    await grade(app, 'a', { forceComplexity: true });
    await grade(app, 'f');

    expect(byId('empty-state').hidden).toBe(false);
    const next = await fetch(`${base}/api/review/next`);
    expect(next.status).toBe(204);

    const summaries = (await (await fetch(`${base}/api/corpus`)).json()) as {
      id: string;
      disposition: string;
      qoi: string;
    }[];
    expect(summaries.map((row) => [row.id, row.qoi, row.disposition])).toEqual([
      ['000001', 'S', 'accepted'],
      ['000002', 'A', 'accepted'],
      ['000003', 'F', 'rejected'],
      ['000004', 'S', 'accepted'],
      ['000005', 'A', 'accepted'],
      ['000006', 'F', 'rejected'],
    ]);

    app.destroy();
  });
});
