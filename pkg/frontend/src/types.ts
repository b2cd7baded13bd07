// Wire types for the three backend endpoints.

export interface ResultItem {
  rank: number;
  id: string;
  title: string;
  year: number;
  doc_type: string;
  topics: string[];
  score: number;
  abstract: string;
}

export interface SearchResponse {
  total: number;
  results: ResultItem[];
}

export interface SearchParams {
  q?: string;
  order?: string;
  year_from?: number;
  year_to?: number;
  doc_types?: string[];
  topics?: string[];
  limit?: number;
  offset?: number;
}

export interface ArticlePayload {
  id: string;
  title: string;
  abstract: string;
}

export interface Reference {
  index: number;
  id: string;
  title: string;
}

export interface ValidationInfo {
  hard_pass: boolean;
  out_of_range: number[];
  sentence_count: number;
  cited_sentence_count: number;
  coverage: number;
  unused_sources: number[];
  paragraph_count: number;
  structure_ok: boolean;
  grounding_warnings: { sentence: number; overlap: number }[];
}

export interface SummarizeResponse {
  summary: string;
  mode: string;
  references: Reference[];
  validation: ValidationInfo;
  model_id: string;
  truncation_applied: boolean;
  latency_ms: number;
}

export interface HealthResponse {
  status: string;
  corpus_size: number;
  backend: string;
}

export interface Api {
  search(params: SearchParams): Promise<SearchResponse>;
  summarize(query: string, articles: ArticlePayload[]): Promise<SummarizeResponse>;
  health(): Promise<HealthResponse>;
}
