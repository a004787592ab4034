/** Static mirror of the service taxonomy; the contract test checks it stays in sync. */

import type { Stance } from './types';

export const ACTIONS_BY_STANCE: Record<Stance, string[]> = {
  Cooperative: [
    'answer question',
    'task has been done',
    'task will be done in next version',
    'accept for future work',
    'concede criticism',
  ],
  Defensive: ['refute question', 'reject criticism', 'contradict assertion', 'reject request'],
  Hedge: ['mitigate importance of the question', 'mitigate criticism'],
  Social: ['social'],
  Other: ['follow-up question', 'structure', 'summarize', 'other'],
};

export const ALL_ACTIONS: string[] = Object.values(ACTIONS_BY_STANCE).flat();

export const STANCES: Stance[] = ['Cooperative', 'Defensive', 'Hedge', 'Social', 'Other'];

/** Settings exposed interactively; the rest are batch-only experiment ablations. */
export const UI_SETTINGS = ['S2', 'S3', 'S6', 'S7'] as const;
