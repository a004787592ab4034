/** Shared types mirroring the /v1/ session API payloads. */

export type ItemType = 'Criticism' | 'Question' | 'Request';

export type Stance = 'Cooperative' | 'Defensive' | 'Hedge' | 'Social' | 'Other';

export interface ReviewItem {
  id: string;
  type: ItemType;
  span: string;
}

export interface AuthorEdit {
  edit: string;
  paragraph: string | null;
  section_title: string | null;
}

export interface GenerationResultRecord {
  response_text: string;
  placeholders: string[];
  word_count: number;
  setting: string;
  pair_id: string | null;
  audit_id: string | null;
}

export interface QualityDimensionRecord {
  score: number;
  normalized: number;
  strengths: string[];
  weaknesses: string[];
  suggestions: string[];
}

export interface EvalReportRecord {
  pair_id: string | null;
  setting: string;
  word_count: number;
  placeholder_count: number;
  quality: Record<'targeting' | 'specificity' | 'convincingness', QualityDimensionRecord>;
  annotation: {
    items: { id: string; type: ItemType; span: string }[];
    response_spans: { text: string; action: string; item_id: string | null }[];
  };
  len_control: { diff: number; met: boolean } | null;
  plan_control: { precision: number; recall: number; f1: number; order_fidelity: number } | null;
  gfp: FactSummary | null;
  icr: FactSummary | null;
  stance: { proportions: Record<Stance, number>; arg_load: number } | null;
}

export interface FactSummary {
  supported: number;
  unsupported: number;
  contradicted: number;
  n_facts: number;
  empty: boolean;
  facts: string[];
  verdicts: string[];
}

export interface DraftRecord {
  request: unknown;
  result: GenerationResultRecord;
  eval: EvalReportRecord | null;
}

export interface SessionRecord {
  session_id: string;
  review_segment: string;
  venue_mode: 'conference' | 'journal';
  author_edits: AuthorEdit[];
  v1_paragraphs: string[];
  review_items: ReviewItem[];
  plan: Record<string, string[]> | null;
  length_limit: number | null;
  drafts: DraftRecord[];
  status: string;
}

export interface TaxonomyRecord {
  item_types: ItemType[];
  actions_by_stance: Record<Stance, string[]>;
  ui_settings: string[];
}
