import type { ArticlePayload, ResultItem } from './types.js';

export const MIN_COUNT = 1;
export const MAX_COUNT = 20;
export const DEFAULT_COUNT = 5;

/** Keep the article count inside [1, 20]; garbage input falls back to the default. */
export function clampCount(value: number): number {
  if (!Number.isFinite(value)) return DEFAULT_COUNT;
  return Math.min(MAX_COUNT, Math.max(MIN_COUNT, Math.floor(value)));
}

/**
 * The top `count` displayed results, in displayed order, as summarize
 * payload articles. Fewer results than requested means all of them: the
 * request is clamped to what is actually on screen.
 */
export function topArticles(results: ResultItem[], count: number): ArticlePayload[] {
  return results.slice(0, clampCount(count)).map((r) => ({
    id: r.id,
    title: r.title,
    abstract: r.abstract,
  }));
}

export type PanelState =
  | { kind: 'idle' }
  | { kind: 'loading' }
  | {
      kind: 'ready';
      summary: string;
      references: { index: number; id: string; title: string }[];
      hardPass: boolean;
      warnings: string[];
    }
  | { kind: 'error'; message: string };
