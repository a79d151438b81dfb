/**
 * Review queue application: fetch the next pending dialogue, render its
 * turns and auto-check evidence, collect a grade (S/A/F) plus optional
 * coherence overrides, submit, repeat until the queue drains.
 *
 * The server decides dispositions; this app only displays what it is
 * served (metric numbers verbatim, no client-side recomputation) and
 * keeps a single request in flight at a time.
 */

import { ApiError, ReviewApi } from './api.js';
import type { Evidence, Qoi, ReviewTask, Turn } from './api.js';
import { bindReviewKeys } from './keyboard.js';

export interface ReviewState {
  task: ReviewTask | null;
  drained: boolean;
  qoi: Qoi | null;
  emotionalOverride: boolean;
  complexityOverride: boolean;
  dirty: boolean;
  busy: boolean;
}

export interface ReviewAppOptions {
  reviewer?: string;
}

interface Elements {
  banner: HTMLElement;
  bannerMessage: HTMLElement;
  bannerRetry: HTMLButtonElement;
  notice: HTMLElement;
  toast: HTMLElement;
  emptyState: HTMLElement;
  task: HTMLElement;
  taskTitle: HTMLElement;
  taskMeta: HTMLElement;
  turns: HTMLElement;
  evidence: HTMLElement;
  qoiButtons: Record<Qoi, HTMLButtonElement>;
  overrideEmotional: HTMLInputElement;
  overrideComplexity: HTMLInputElement;
  submit: HTMLButtonElement;
  inlineError: HTMLElement;
}

function grab(doc: Document, id: string): HTMLElement {
  const el = doc.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function findElements(doc: Document): Elements {
  return {
    banner: grab(doc, 'banner'),
    bannerMessage: grab(doc, 'banner-message'),
    bannerRetry: grab(doc, 'banner-retry') as HTMLButtonElement,
    notice: grab(doc, 'notice'),
    toast: grab(doc, 'toast'),
    emptyState: grab(doc, 'empty-state'),
    task: grab(doc, 'task'),
    taskTitle: grab(doc, 'task-title'),
    taskMeta: grab(doc, 'task-meta'),
    turns: grab(doc, 'turns'),
    evidence: grab(doc, 'evidence'),
    qoiButtons: {
      S: grab(doc, 'qoi-s') as HTMLButtonElement,
      A: grab(doc, 'qoi-a') as HTMLButtonElement,
      F: grab(doc, 'qoi-f') as HTMLButtonElement,
    },
    overrideEmotional: grab(doc, 'override-emotional') as HTMLInputElement,
    overrideComplexity: grab(doc, 'override-complexity') as HTMLInputElement,
    submit: grab(doc, 'submit') as HTMLButtonElement,
    inlineError: grab(doc, 'inline-error'),
  };
}

function turnRow(doc: Document, turn: Turn): HTMLLIElement {
  const li = doc.createElement('li');
  li.className = 'turn';
  const chip = doc.createElement('span');
  chip.className = `chip chip-${turn.role.toLowerCase()}`;
  chip.textContent = `${turn.role} (${turn.attitude})`;
  const text = doc.createElement('span');
  text.className = 'utterance';
  text.textContent = turn.text;
  li.append(chip, text);
  return li;
}

function coherenceText(value: boolean | null): string {
  if (value === null) return 'not checked';
  return value ? 'pass' : 'fail';
}

function bandText(band: [number, number | null]): string {
  const [lo, hi] = band;
  return hi === null ? `${lo} and up` : `${lo} to ${hi}`;
}

function evidenceRows(evidence: Evidence): [string, string][] {
  // FKGL is rendered from the payload number directly, never recomputed.
  const rows: [string, string][] = [
    ['FKGL', evidence.fkgl === null ? 'n/a' : String(evidence.fkgl)],
    ['Level band', bandText(evidence.band)],
    ['Emotional coherence', coherenceText(evidence.emotional_coherence)],
    ['Complexity coherence', coherenceText(evidence.complexity_coherence)],
    ['Emotion evidence', evidence.emotion_evidence ?? 'none'],
  ];
  if (evidence.ied_violations.length > 0) {
    const hits = evidence.ied_violations.map(([index, word]) => `turn ${index}: "${word}"`);
    rows.push(['Emotion-word leaks', hits.join(', ')]);
  } else {
    rows.push(['Emotion-word leaks', 'none']);
  }
  return rows;
}

export class ReviewApp {
  readonly state: ReviewState = {
    task: null,
    drained: false,
    qoi: null,
    emotionalOverride: false,
    complexityOverride: false,
    dirty: false,
    busy: false,
  };

  private elements: Elements;
  private unbindKeys: () => void;
  private retryAction: (() => Promise<void>) | null = null;

  constructor(
    private doc: Document,
    private api: ReviewApi,
    private options: ReviewAppOptions = {},
  ) {
    this.elements = findElements(doc);
    this.elements.qoiButtons.S.addEventListener('click', () => this.select('S'));
    this.elements.qoiButtons.A.addEventListener('click', () => this.select('A'));
    this.elements.qoiButtons.F.addEventListener('click', () => this.select('F'));
    this.elements.overrideEmotional.addEventListener('change', () => {
      this.state.emotionalOverride = this.elements.overrideEmotional.checked;
      this.state.dirty = true;
    });
    this.elements.overrideComplexity.addEventListener('change', () => {
      this.state.complexityOverride = this.elements.overrideComplexity.checked;
      this.state.dirty = true;
    });
    this.elements.submit.addEventListener('click', () => void this.submit());
    this.elements.bannerRetry.addEventListener('click', () => void this.retry());
    const win = doc.defaultView;
    this.unbindKeys = bindReviewKeys(win ?? doc, {
      onGrade: (qoi) => this.select(qoi),
      onSubmit: () => void this.submit(),
    });
  }

  destroy(): void {
    this.unbindKeys();
  }

  /** Pull the next pending dialogue and reset the selection state. */
  async loadNext(): Promise<void> {
    if (this.state.busy) return;
    this.state.busy = true;
    this.render();
    try {
      const task = await this.api.nextTask();
      this.state.task = task;
      this.state.drained = task === null;
      this.state.qoi = null;
      this.state.dirty = false;
      // Overrides start from what the auto-check decided.
      this.state.emotionalOverride = task?.evidence.emotional_coherence ?? false;
      this.state.complexityOverride = task?.evidence.complexity_coherence ?? false;
      this.clearBanner();
      this.setInlineError('');
    } catch (err) {
      this.showBanner(err, () => this.loadNext());
    } finally {
      this.state.busy = false;
      this.render();
    }
  }

  select(qoi: Qoi): void {
    if (!this.state.task || this.state.busy) return;
    this.state.qoi = qoi;
    this.state.dirty = true;
    this.render();
  }

  /** Submit the chosen grade; the server's reply drives what happens next. */
  async submit(): Promise<void> {
    const { task, qoi } = this.state;
    if (!task || !qoi || this.state.busy) return;
    this.state.busy = true;
    this.render();
    try {
      const gate = await this.api.submitReview(task.dialogue_id, {
        qoi,
        reviewer: this.options.reviewer ?? '',
        emotional_coherence: this.state.emotionalOverride,
        complexity_coherence: this.state.complexityOverride,
      });
      this.setToast(`${gate.dialogue_id} ${gate.disposition}`);
      this.setNotice('');
      this.state.busy = false;
      await this.loadNext();
      return;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // Someone else disposed this dialogue first; move on.
        this.setNotice('Already reviewed elsewhere; loading the next dialogue.');
        this.state.busy = false;
        await this.loadNext();
        return;
      }
      if (err instanceof ApiError && err.status === 422) {
        this.setInlineError(err.message);
      } else {
        this.showBanner(err, () => this.submit());
      }
    }
    this.state.busy = false;
    this.render();
  }

  private async retry(): Promise<void> {
    const action = this.retryAction;
    this.retryAction = null;
    this.clearBanner();
    if (action) await action();
  }

  private showBanner(err: unknown, retryAction: () => Promise<void>): void {
    const message = err instanceof Error ? err.message : String(err);
    this.elements.bannerMessage.textContent = `Service unreachable: ${message}`;
    this.elements.banner.hidden = false;
    this.retryAction = retryAction;
  }

  private clearBanner(): void {
    this.elements.banner.hidden = true;
    this.elements.bannerMessage.textContent = '';
  }

  private setNotice(text: string): void {
    this.elements.notice.textContent = text;
    this.elements.notice.hidden = text === '';
  }

  private setToast(text: string): void {
    this.elements.toast.textContent = text;
    this.elements.toast.hidden = text === '';
  }

  private setInlineError(text: string): void {
    this.elements.inlineError.textContent = text;
    this.elements.inlineError.hidden = text === '';
  }

  private render(): void {
    const { task, drained, qoi, busy } = this.state;
    this.elements.emptyState.hidden = !drained;
    this.elements.task.hidden = task === null;
    if (!task) {
      return;
    }

    this.elements.taskTitle.textContent = `Dialogue ${task.dialogue_id}`;
    const meta = task.dialogue.meta;
    this.elements.taskMeta.textContent = meta
      ? `${meta.target_emotion} / ${meta.cefr} / ${meta.implicit ? 'implicit' : 'explicit'}`
      : '';

    this.elements.turns.replaceChildren(
      ...task.dialogue.turns.map((turn) => turnRow(this.doc, turn)),
    );

    const dl = this.doc.createElement('dl');
    for (const [label, value] of evidenceRows(task.evidence)) {
      const dt = this.doc.createElement('dt');
      dt.textContent = label;
      const dd = this.doc.createElement('dd');
      dd.textContent = value;
      dl.append(dt, dd);
    }
    this.elements.evidence.replaceChildren(dl);

    for (const grade of ['S', 'A', 'F'] as Qoi[]) {
      const button = this.elements.qoiButtons[grade];
      button.classList.toggle('selected', qoi === grade);
      button.disabled = busy;
    }
    this.elements.overrideEmotional.checked = this.state.emotionalOverride;
    this.elements.overrideComplexity.checked = this.state.complexityOverride;
    this.elements.overrideEmotional.disabled = busy;
    this.elements.overrideComplexity.disabled = busy;
    this.elements.submit.disabled = busy || qoi === null;
  }
}

/** Wire the app onto an already-loaded document. */
export function initReviewApp(
  doc: Document,
  api: ReviewApi,
  options: ReviewAppOptions = {},
): ReviewApp {
  return new ReviewApp(doc, api, options);
}
