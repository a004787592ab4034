/** Client view state reconstructed from the service on every load. */

import type { SessionRecord } from './types';

export interface SessionView {
  session: SessionRecord;
  selectedDraft: number | null;
  busy: boolean;
}

/** Build the view purely from server state; reload yields the identical view. */
export function viewFromSession(session: SessionRecord): SessionView {
  return {
    session,
    selectedDraft: session.drafts.length > 0 ? session.drafts.length - 1 : null,
    busy: false,
  };
}

export function selectDraft(view: SessionView, index: number): SessionView {
  if (index < 0 || index >= view.session.drafts.length) {
    throw new Error(`no draft ${index}`);
  }
  return { ...view, selectedDraft: index };
}

export function withBusy(view: SessionView, busy: boolean): SessionView {
  return { ...view, busy };
}

export function selectedReport(view: SessionView) {
  if (view.selectedDraft === null) {
    return null;
  }
  return view.session.drafts[view.selectedDraft].eval;
}
