/**
 * Typed client for the corpus review HTTP API.
 *
 * The service is the single source of truth: this module never computes
 * gate logic, it only moves payloads.  All failures surface as ApiError
 * so the app can branch on status/code.
 */

export interface Turn {
  index: number;
  role: string;
  attitude: string;
  text: string;
}

export interface DialogueMeta {
  target_emotion: string;
  cefr: string;
  implicit: boolean;
  scenario: string;
  provider: string;
}

export interface Dialogue {
  id: string;
  turns: Turn[];
  meta: DialogueMeta | null;
}

export interface Evidence {
  emotional_coherence: boolean | null;
  complexity_coherence: boolean | null;
  emotion_evidence: string | null;
  ied_violations: [number, string][];
  fkgl: number | null;
  band: [number, number | null];
}

export interface ReviewTask {
  dialogue_id: string;
  dialogue: Dialogue;
  evidence: Evidence;
  status: string;
}

export type Qoi = 'S' | 'A' | 'F';

export interface ReviewSubmission {
  qoi: Qoi;
  reviewer?: string;
  emotional_coherence?: boolean;
  complexity_coherence?: boolean;
}

export interface GateResult {
  dialogue_id: string;
  emotional_coherence: boolean | null;
  complexity_coherence: boolean | null;
  ied_violations: [number, string][];
  emotion_evidence: string | null;
  fkgl: number | null;
  qoi: string | null;
  reviewer: string | null;
  auto_checked_at: string | null;
  reviewed_at: string | null;
  disposition: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function errorFromResponse(response: Response): Promise<ApiError> {
  let code = 'http_error';
  let message = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // Non-JSON error body; keep the generic message
  }
  return new ApiError(response.status, code, message);
}

export class ReviewApi {
  constructor(private baseUrl = '') {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, 'network', err instanceof Error ? err.message : String(err));
    }
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return response;
  }

  /** Next pending dialogue, or null when the queue is drained (204). */
  async nextTask(): Promise<ReviewTask | null> {
    const response = await this.request('/api/review/next');
    if (response.status === 204) return null;
    return (await response.json()) as ReviewTask;
  }

  /** Record one grade; the returned gate carries the server's disposition. */
  async submitReview(dialogueId: string, body: ReviewSubmission): Promise<GateResult> {
    const response = await this.request(`/api/review/${dialogueId}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    return (await response.json()) as GateResult;
  }
}
