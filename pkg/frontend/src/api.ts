/** Thin client for the session service; every method maps to one endpoint. */

import type {
  AuthorEdit,
  DraftRecord,
  EvalReportRecord,
  GenerationResultRecord,
  ReviewItem,
  SessionRecord,
  TaxonomyRecord,
} from './types';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { 'Content-Type': 'application/json' },
    ...init,
  });
  if (!response.ok) {
    const body = await response.text().catch(() => '');
    throw new ApiError(response.status, body || response.statusText);
  }
  return response.json() as Promise<T>;
}

export class SessionClient {
  constructor(private baseUrl: string = '') {}

  private url(path: string): string {
    return `${this.baseUrl}/v1${path}`;
  }

  health(): Promise<{ status: string }> {
    return request(`${this.baseUrl}/health`);
  }

  taxonomy(): Promise<TaxonomyRecord> {
    return request(this.url('/taxonomy'));
  }

  createSession(reviewSegment: string, venueMode = 'journal'): Promise<SessionRecord> {
    return request(this.url('/sessions'), {
      method: 'POST',
      body: JSON.stringify({ review_segment: reviewSegment, venue_mode: venueMode }),
    });
  }

  getSession(sessionId: string): Promise<SessionRecord> {
    return request(this.url(`/sessions/${sessionId}`));
  }

  setInputs(
    sessionId: string,
    inputs: { author_edits?: AuthorEdit[]; v1_paragraphs?: string[] },
  ): Promise<SessionRecord> {
    return request(this.url(`/sessions/${sessionId}/inputs`), {
      method: 'PUT',
      body: JSON.stringify(inputs),
    });
  }

  annotate(sessionId: string): Promise<{ review_items: ReviewItem[] }> {
    return request(this.url(`/sessions/${sessionId}/annotate`), {
      method: 'POST',
      body: JSON.stringify({}),
    });
  }

  setPlan(
    sessionId: string,
    plan: Record<string, string[]> | null,
    lengthLimit: number | null,
  ): Promise<SessionRecord> {
    return request(this.url(`/sessions/${sessionId}/plan`), {
      method: 'PUT',
      body: JSON.stringify({ plan, length_limit: lengthLimit }),
    });
  }

  generate(
    sessionId: string,
    setting: string,
  ): Promise<{ draft_index: number; result: GenerationResultRecord }> {
    return request(this.url(`/sessions/${sessionId}/generate`), {
      method: 'POST',
      body: JSON.stringify({ setting }),
    });
  }

  evaluate(
    sessionId: string,
    draftIndex?: number,
  ): Promise<{ draft_index: number; report: EvalReportRecord }> {
    return request(this.url(`/sessions/${sessionId}/evaluate`), {
      method: 'POST',
      body: JSON.stringify(draftIndex === undefined ? {} : { draft_index: draftIndex }),
    });
  }

  refine(
    sessionId: string,
  ): Promise<{ draft_index: number; refined_from: number; result: GenerationResultRecord }> {
    return request(this.url(`/sessions/${sessionId}/refine`), {
      method: 'POST',
      body: JSON.stringify({}),
    });
  }
}

export type { DraftRecord, SessionRecord };
