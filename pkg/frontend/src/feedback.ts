/** Pure HTML renderers for the evaluation feedback panel (snapshot-tested). */

import { STANCES } from './taxonomy';
import type { EvalReportRecord, FactSummary } from './types';

function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function unavailable(label: string): string {
  return `<section class="metric ${label}"><h3>${esc(label)}</h3><span class="unavailable">unavailable</span></section>`;
}

function bulletList(cls: string, entries: string[]): string {
  if (entries.length === 0) {
    return `<p class="${cls} empty">none</p>`;
  }
  const items = entries.map((e) => `<li>${esc(e)}</li>`).join('');
  return `<ul class="${cls}">${items}</ul>`;
}

function pct(fraction: number): string {
  return `${Math.round(fraction * 100)}%`;
}

function qualitySection(report: EvalReportRecord): string {
  const rows = (['targeting', 'specificity', 'convincingness'] as const)
    .map((dim) => {
      const block = report.quality[dim];
      if (!block) {
        return `<div class="dimension ${dim}"><h4>${dim}</h4><span class="unavailable">unavailable</span></div>`;
      }
      const score = `${block.score}/5 (${block.normalized.toFixed(2)})`;
      return [
        `<div class="dimension ${dim}">`,
        `<h4>${dim} <span class="score">${score}</span></h4>`,
        `<h5>strengths</h5>${bulletList('strengths', block.strengths)}`,
        `<h5>weaknesses</h5>${bulletList('weaknesses', block.weaknesses)}`,
        `<h5>suggestions</h5>${bulletList('suggestions', block.suggestions)}`,
        `</div>`,
      ].join('');
    })
    .join('');
  return `<section class="metric quality"><h3>quality</h3>${rows}</section>`;
}

function lengthSection(report: EvalReportRecord): string {
  const len = report.len_control;
  if (!len) {
    return unavailable('length');
  }
  const state = len.met ? 'ok' : 'over-limit';
  const label = len.met
    ? `within limit (+${len.diff} words)`
    : `over the limit by ${-len.diff} words`;
  return `<section class="metric length ${state}"><h3>length</h3><span class="${state}">${label}</span></section>`;
}

function planSection(report: EvalReportRecord): string {
  const plan = report.plan_control;
  if (!plan) {
    return unavailable('plan');
  }
  const cells = [
    `<dt>P</dt><dd>${plan.precision.toFixed(2)}</dd>`,
    `<dt>R</dt><dd>${plan.recall.toFixed(2)}</dd>`,
    `<dt>F1</dt><dd>${plan.f1.toFixed(2)}</dd>`,
    `<dt>OF</dt><dd>${plan.order_fidelity.toFixed(2)}</dd>`,
  ].join('');
  return `<section class="metric plan"><h3>plan</h3><dl>${cells}</dl></section>`;
}

function factSection(label: string, facts: FactSummary | null): string {
  if (!facts) {
    return unavailable(label);
  }
  const body = `sup ${pct(facts.supported)} / unsup ${pct(facts.unsupported)} / con ${pct(facts.contradicted)} (${facts.n_facts} facts)`;
  return `<section class="metric ${label}"><h3>${esc(label)}</h3><span class="fractions">${body}</span></section>`;
}

function stanceSection(report: EvalReportRecord): string {
  const stance = report.stance;
  if (!stance) {
    return unavailable('stance');
  }
  const segments = STANCES.filter((s) => (stance.proportions[s] ?? 0) > 0)
    .map((s) => {
      const width = (stance.proportions[s] * 100).toFixed(1);
      return `<div class="stance-segment ${s.toLowerCase()}" style="width:${width}%" title="${s} ${pct(stance.proportions[s])}"></div>`;
    })
    .join('');
  return [
    `<section class="metric stance"><h3>stance</h3>`,
    `<div class="stance-bar">${segments}</div>`,
    `<span class="arg-load">argumentative load ${pct(stance.arg_load)}</span>`,
    `</section>`,
  ].join('');
}

/** Render the full feedback panel for one evaluated draft. */
export function renderFeedbackPanel(report: EvalReportRecord | null): string {
  if (!report) {
    return `<div class="feedback-panel empty"><span class="unavailable">no evaluation yet</span></div>`;
  }
  return [
    `<div class="feedback-panel" data-setting="${esc(report.setting)}">`,
    qualitySection(report),
    lengthSection(report),
    planSection(report),
    factSection('gfp', report.gfp),
    factSection('icr', report.icr),
    stanceSection(report),
    `<button class="refine" data-action="refine">Refine with this feedback</button>`,
    `</div>`,
  ].join('\n');
}

/** One line per draft for the history list. */
export function renderDraftSummary(
  index: number,
  setting: string,
  wordCount: number,
  evaluated: boolean,
  selected: boolean,
): string {
  const cls = selected ? 'draft selected' : 'draft';
  const badge = evaluated ? ' &#10003;' : '';
  return `<li class="${cls}" data-index="${index}">#${index + 1} ${esc(setting)} (${wordCount}w)${badge}</li>`;
}
