/**
 * Keyboard shortcuts for the review queue: S/A/F pick a grade, Enter
 * submits.  Reviewers grade long runs of dialogues, so grading must not
 * require the mouse.
 */

import type { Qoi } from './api.js';

export interface ReviewKeyHandlers {
  onGrade: (qoi: Qoi) => void;
  onSubmit: () => void;
}

function isTypingTarget(target: EventTarget | null): boolean {
  if (!(target instanceof HTMLElement)) return false;
  return (
    target instanceof HTMLInputElement ||
    target instanceof HTMLTextAreaElement ||
    target.isContentEditable
  );
}

/** Attach the shortcut listener; returns an unbind function. */
export function bindReviewKeys(target: EventTarget, handlers: ReviewKeyHandlers): () => void {
  const onKeyDown = (event: Event) => {
    const key = (event as KeyboardEvent).key;
    if (isTypingTarget(event.target)) return;

    switch (key) {
      case 's':
      case 'S':
        event.preventDefault();
        handlers.onGrade('S');
        break;
      case 'a':
      case 'A':
        event.preventDefault();
        handlers.onGrade('A');
        break;
      case 'f':
      case 'F':
        event.preventDefault();
        handlers.onGrade('F');
        break;
      case 'Enter':
        event.preventDefault();
        handlers.onSubmit();
        break;
    }
  };

  target.addEventListener('keydown', onKeyDown);
  return () => target.removeEventListener('keydown', onKeyDown);
}
