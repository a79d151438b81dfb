import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type { Evidence, ReviewTask } from '../src/api.js';

export const frontendDir = join(dirname(fileURLToPath(import.meta.url)), '..');

/** Load the real index.html markup into the test document. */
export function loadAppHtml(): void {
  const html = readFileSync(join(frontendDir, 'index.html'), 'utf-8');
  const body = html.match(/<body>([\s\S]*)<\/body>/)?.[1];
  if (!body) throw new Error('index.html has no <body>');
  // The entry script is under test already; don't let happy-dom fetch it.
  document.body.innerHTML = body.replace(/<script[\s\S]*?<\/script>/g, '');
}

export function makeEvidence(overrides: Partial<Evidence> = {}): Evidence {
  return {
    emotional_coherence: true,
    complexity_coherence: false,
    emotion_evidence: 'angry',
    ied_violations: [],
    fkgl: 5.052555282555286,
    band: [0.0, 5.0],
    ...overrides,
  };
}

export function makeTask(id: string, overrides: Partial<ReviewTask> = {}): ReviewTask {
  return {
    dialogue_id: id,
    dialogue: {
      id,
      turns: [
        { index: 0, role: 'Client', attitude: 'angry', text: 'My phone is broken!' },
        { index: 1, role: 'Agent', attitude: 'calm', text: 'Let me help with that.' },
      ],
      meta: {
        target_emotion: 'anger',
        cefr: 'A2',
        implicit: false,
        scenario: 'phone support',
        provider: 'test',
      },
    },
    evidence: makeEvidence(),
    status: 'pending',
    ...overrides,
  };
}

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

/** Poll until the condition holds; fails loudly instead of hanging. */
export async function waitFor(condition: () => boolean, timeoutMs = 10000): Promise<void> {
  const start = Date.now();
  while (!condition()) {
    if (Date.now() - start > timeoutMs) throw new Error('waitFor timed out');
    await new Promise((resolve) => setTimeout(resolve, 20));
  }
}

export function byId(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
}
