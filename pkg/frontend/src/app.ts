import type { Api, Reference, ResultItem, SummarizeResponse } from './types.js';
import { DEFAULT_COUNT, MAX_COUNT, MIN_COUNT, clampCount, topArticles } from './state.js';
import { clipboardText, escapeHtml, renderSummaryHtml, validationWarnings } from './format.js';

const DOC_TYPES = ['publication', 'dataset', 'software', 'other'];
const ORDERINGS = ['popularity', 'influence', 'citation_count', 'year', 'relevance'];
const RESULT_LIMIT = 20;

const LAYOUT = `
  <div class="layout">
    <aside class="sidebar">
      <h2>Filters</h2>
      <label>From year <input type="number" data-el="year-from"></label>
      <label>To year <input type="number" data-el="year-to"></label>
      <fieldset data-el="doc-types"><legend>Artifact type</legend></fieldset>
      <fieldset data-el="topics"><legend>Topics</legend></fieldset>
    </aside>
    <main>
      <div class="searchbar">
        <input type="search" data-el="query" placeholder="Search articles">
        <select data-el="ordering" title="Ordering"></select>
        <button data-el="search">Search</button>
      </div>
      <div class="banner" data-el="banner" hidden></div>
      <section class="summary-box">
        <div class="controls">
          <button data-el="summarize-top">Summarize top results</button>
          <span class="count-control">
            <button data-el="count-dec" aria-label="fewer articles">&minus;</button>
            <input type="number" data-el="count" min="${MIN_COUNT}" max="${MAX_COUNT}" value="${DEFAULT_COUNT}">
            <button data-el="count-inc" aria-label="more articles">+</button>
          </span>
          <button data-el="summarize">Summarize</button>
          <button data-el="copy" disabled>Copy to clipboard</button>
        </div>
        <div class="summary-status" data-el="status">No summary yet.</div>
        <div class="summary-text" data-el="summary"></div>
        <div class="copy-fallback" data-el="copy-fallback" hidden></div>
        <details data-el="validation" hidden>
          <summary data-el="validation-label">Validation</summary>
          <ul data-el="validation-items"></ul>
        </details>
        <div class="references" data-el="references"></div>
      </section>
      <div class="result-meta" data-el="total"></div>
      <ol class="results" data-el="results"></ol>
    </main>
  </div>
`;

export function initApp(root: HTMLElement, api: Api): void {
  root.innerHTML = LAYOUT;
  const el = <T extends HTMLElement>(name: string): T => {
    const found = root.querySelector<T>(`[data-el="${name}"]`);
    if (!found) throw new Error(`missing element ${name}`);
    return found;
  };

  const queryInput = el<HTMLInputElement>('query');
  const orderingSelect = el<HTMLSelectElement>('ordering');
  const yearFromInput = el<HTMLInputElement>('year-from');
  const yearToInput = el<HTMLInputElement>('year-to');
  const docTypesBox = el<HTMLFieldSetElement>('doc-types');
  const topicsBox = el<HTMLFieldSetElement>('topics');
  const banner = el<HTMLDivElement>('banner');
  const resultsList = el<HTMLOListElement>('results');
  const totalLine = el<HTMLDivElement>('total');
  const countInput = el<HTMLInputElement>('count');
  const statusLine = el<HTMLDivElement>('status');
  const summaryBox = el<HTMLDivElement>('summary');
  const referencesBox = el<HTMLDivElement>('references');
  const validationDetails = el<HTMLDetailsElement>('validation');
  const validationLabel = el<HTMLElement>('validation-label');
  const validationItems = el<HTMLUListElement>('validation-items');
  const copyButton = el<HTMLButtonElement>('copy');
  const copyFallback = el<HTMLDivElement>('copy-fallback');

  let results: ResultItem[] = [];
  let ready: SummarizeResponse | null = null;
  let generation = 0;
  const seenTopics = new Set<string>();
  const selectedTopics = new Set<string>();

  for (const ordering of ORDERINGS) {
    const option = document.createElement('option');
    option.value = ordering;
    option.textContent = ordering.replace('_', ' ');
    orderingSelect.appendChild(option);
  }
  for (const docType of DOC_TYPES) {
    const label = document.createElement('label');
    label.innerHTML = `<input type="checkbox" value="${docType}"> ${docType}`;
    docTypesBox.appendChild(label);
  }

  function checkedValues(box: HTMLElement): string[] {
    return Array.from(box.querySelectorAll<HTMLInputElement>('input:checked')).map(
      (input) => input.value,
    );
  }

  function renderTopics(): void {
    topicsBox.querySelectorAll('label').forEach((node) => node.remove());
    for (const topic of Array.from(seenTopics).sort()) {
      const label = document.createElement('label');
      const checkbox = document.createElement('input');
      checkbox.type = 'checkbox';
      checkbox.value = topic;
      checkbox.checked = selectedTopics.has(topic);
      checkbox.addEventListener('change', () => {
        if (checkbox.checked) selectedTopics.add(topic);
        else selectedTopics.delete(topic);
        void runSearch();
      });
      label.appendChild(checkbox);
      label.appendChild(document.createTextNode(` ${topic}`));
      topicsBox.appendChild(label);
    }
  }

  function renderResults(): void {
    resultsList.innerHTML = '';
    for (const item of results) {
      const li = document.createElement('li');
      li.className = 'result';
      li.id = `result-${item.id}`;
      li.innerHTML = `
        <div class="result-title">${escapeHtml(item.title)}</div>
        <div class="result-meta-line">${item.year} · ${escapeHtml(item.doc_type)} ·
          score ${item.score.toFixed(2)} · ${item.topics.map(escapeHtml).join(', ')}</div>
        <div class="result-abstract">${escapeHtml(item.abstract)}</div>`;
      resultsList.appendChild(li);
    }
    totalLine.textContent = results.length ? `${results.length} results shown` : 'No results.';
  }

  async function runSearch(): Promise<void> {
    try {
      const response = await api.search({
        q: queryInput.value,
        order: orderingSelect.value || 'popularity',
        year_from: yearFromInput.value ? Number(yearFromInput.value) : undefined,
        year_to: yearToInput.value ? Number(yearToInput.value) : undefined,
        doc_types: checkedValues(docTypesBox),
        topics: Array.from(selectedTopics),
        limit: RESULT_LIMIT,
      });
      results = response.results;
      for (const item of results) item.topics.forEach((t) => seenTopics.add(t));
      banner.hidden = true;
      renderResults();
      renderTopics();
      // the summary panel is deliberately left untouched
    } catch (error) {
      banner.textContent = `Search failed: ${error instanceof Error ? error.message : error}`;
      banner.hidden = false; // previous results stay on screen
    }
  }

  function setPanelLoading(): void {
    ready = null;
    statusLine.textContent = 'Summarizing…';
    summaryBox.innerHTML = '';
    referencesBox.innerHTML = '';
    validationDetails.hidden = true;
    copyButton.disabled = true;
    copyFallback.hidden = true;
  }

  function renderReferences(references: Reference[]): void {
    referencesBox.innerHTML = '<h3>References</h3>';
    const list = document.createElement('ol');
    list.className = 'reference-list';
    for (const ref of references) {
      const item = document.createElement('li');
      item.innerHTML = `<a href="#result-${escapeHtml(ref.id)}">[${ref.index}]</a>
        ${escapeHtml(ref.title)}`;
      list.appendChild(item);
    }
    referencesBox.appendChild(list);
  }

  function setPanelReady(response: SummarizeResponse): void {
    ready = response;
    const modeLabel = response.mode === 'lit_review' ? 'literature review' : 'concise summary';
    statusLine.textContent = `${modeLabel} · ${response.references.length} sources · ${response.model_id}`;
    summaryBox.innerHTML = renderSummaryHtml(response.summary, response.references);
    summaryBox.querySelectorAll<HTMLAnchorElement>('a.cite').forEach((link) => {
      link.addEventListener('click', () => {
        const target = document.querySelector<HTMLElement>(link.getAttribute('href') ?? '');
        if (!target) return;
        if (typeof target.scrollIntoView === 'function') target.scrollIntoView();
        target.classList.add('highlight');
        setTimeout(() => target.classList.remove('highlight'), 1200);
      });
    });
    renderReferences(response.references);
    const warnings = validationWarnings(response.validation);
    if (warnings.length > 0) {
      validationLabel.textContent = response.validation.hard_pass
        ? `Validation: ${warnings.length} warning(s)`
        : 'Validation failed';
      validationItems.innerHTML = warnings
        .map((w) => `<li>${escapeHtml(w)}</li>`)
        .join('');
      validationDetails.hidden = false;
    } else {
      validationDetails.hidden = true;
    }
    copyButton.disabled = false;
  }

  function setPanelError(message: string, retry: () => void): void {
    ready = null;
    statusLine.textContent = '';
    summaryBox.innerHTML = '';
    const wrapper = document.createElement('div');
    wrapper.className = 'panel-error';
    wrapper.textContent = `Summarization failed: ${message} `;
    const retryButton = document.createElement('button');
    retryButton.textContent = 'Retry';
    retryButton.addEventListener('click', retry);
    wrapper.appendChild(retryButton);
    summaryBox.appendChild(wrapper);
    copyButton.disabled = true;
  }

  async function doSummarize(count: number): Promise<void> {
    if (results.length === 0) return;
    const articles = topArticles(results, count);
    const thisGeneration = ++generation;
    setPanelLoading();
    try {
      const response = await api.summarize(queryInput.value, articles);
      if (thisGeneration !== generation) return; // a newer request superseded this one
      setPanelReady(response);
    } catch (error) {
      if (thisGeneration !== generation) return;
      setPanelError(error instanceof Error ? error.message : String(error), () =>
        void doSummarize(count),
      );
    }
  }

  function reflectCount(value: number): void {
    countInput.value = String(clampCount(value));
  }

  function readCount(): number {
    const raw = countInput.value.trim();
    return raw === '' ? Number.NaN : Number(raw); // NaN clamps to the default
  }

  el<HTMLButtonElement>('search').addEventListener('click', () => void runSearch());
  queryInput.addEventListener('keydown', (event) => {
    if (event.key === 'Enter') void runSearch();
  });
  orderingSelect.addEventListener('change', () => void runSearch());
  yearFromInput.addEventListener('change', () => void runSearch());
  yearToInput.addEventListener('change', () => void runSearch());
  docTypesBox.addEventListener('change', () => void runSearch());

  el<HTMLButtonElement>('summarize-top').addEventListener('click', () =>
    void doSummarize(DEFAULT_COUNT),
  );
  el<HTMLButtonElement>('summarize').addEventListener('click', () =>
    void doSummarize(clampCount(readCount())),
  );
  countInput.addEventListener('change', () => reflectCount(readCount()));
  el<HTMLButtonElement>('count-dec').addEventListener('click', () =>
    reflectCount(readCount() - 1),
  );
  el<HTMLButtonElement>('count-inc').addEventListener('click', () =>
    reflectCount(readCount() + 1),
  );

  copyButton.addEventListener('click', () => {
    if (!ready) return;
    const text = clipboardText(ready.summary, ready.references);
    const clipboard = navigator.clipboard;
    if (!clipboard || typeof clipboard.writeText !== 'function') {
      showCopyFallback(text);
      return;
    }
    clipboard.writeText(text).then(
      () => {
        statusLine.textContent = 'Copied to clipboard.';
      },
      () => showCopyFallback(text),
    );
  });

  function showCopyFallback(text: string): void {
    copyFallback.innerHTML = '';
    const note = document.createElement('div');
    note.textContent = 'Clipboard unavailable; copy manually:';
    const area = document.createElement('textarea');
    area.readOnly = true;
    area.value = text;
    copyFallback.appendChild(note);
    copyFallback.appendChild(area);
    copyFallback.hidden = false;
    area.focus();
    area.select();
  }

  void api
    .health()
    .then((h) => {
      if (h.status !== 'ok') {
        banner.textContent = 'Backend has no corpus loaded yet.';
        banner.hidden = false;
      }
    })
    .catch(() => {
      banner.textContent = 'Backend unreachable.';
      banner.hidden = false;
    });
}
