import type {
  Api,
  ArticlePayload,
  HealthResponse,
  SearchParams,
  SearchResponse,
  SummarizeResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = 'http_error';
  let message = `request failed with status ${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body.code === 'string') code = body.code;
    if (body && typeof body.message === 'string') message = body.message;
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient implements Api {
  constructor(private baseUrl: string = '') {}

  async search(params: SearchParams): Promise<SearchResponse> {
    const qs = new URLSearchParams();
    if (params.q) qs.set('q', params.q);
    if (params.order) qs.set('order', params.order);
    if (params.year_from !== undefined) qs.set('year_from', String(params.year_from));
    if (params.year_to !== undefined) qs.set('year_to', String(params.year_to));
    for (const t of params.doc_types ?? []) qs.append('doc_type', t);
    for (const t of params.topics ?? []) qs.append('topic', t);
    if (params.limit !== undefined) qs.set('limit', String(params.limit));
    if (params.offset !== undefined) qs.set('offset', String(params.offset));
    const response = await fetch(`${this.baseUrl}/search?${qs.toString()}`);
    return parseOrThrow<SearchResponse>(response);
  }

  async summarize(query: string, articles: ArticlePayload[]): Promise<SummarizeResponse> {
    const response = await fetch(`${this.baseUrl}/summarize`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ query, articles }),
    });
    return parseOrThrow<SummarizeResponse>(response);
  }

  async health(): Promise<HealthResponse> {
    return parseOrThrow<HealthResponse>(await fetch(`${this.baseUrl}/health`));
  }
}
